//! Enumeration of perfect matchings and the checks that go with them:
//! closure of entangling matchings under partial transpose for `q = 2`, and
//! constructive decompositions wherever the degree condition holds.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sweep::MATCHINGS_MAX_VERTICES;
use super::LabError;
use crate::graph::{classify_matching, BipartiteLabeledGraph, ComponentKind};
use crate::separability::{
    decompose_block_matching, decompose_perfect_matching, degree_condition_graph, DecomposeError,
};

/// All perfect matchings on `p·q` vertices, in the order produced by always
/// matching the smallest free vertex first.
pub fn perfect_matchings(p: usize, q: usize) -> Vec<BipartiteLabeledGraph> {
    fn recurse(free: &mut Vec<usize>, current: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if free.is_empty() {
            out.push(current.clone());
            return;
        }
        let first = free.remove(0);
        for i in 0..free.len() {
            let partner = free.remove(i);
            current.push((first, partner));
            recurse(free, current, out);
            current.pop();
            free.insert(i, partner);
        }
        free.insert(0, first);
    }
    let n = p * q;
    if !n.is_multiple_of(2) {
        return Vec::new();
    }
    let mut out = Vec::new();
    recurse(&mut (0..n).collect(), &mut Vec::new(), &mut out);
    out.into_iter()
        .map(|edges| BipartiteLabeledGraph::from_index_edges(p, q, edges).expect("matching edges are valid"))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchingFailure {
    pub graph: BipartiteLabeledGraph,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MatchingSweepReport {
    pub p: usize,
    pub q: usize,
    pub matchings: usize,
    pub entangling: usize,
    pub degree_holds: usize,
    /// Entangling matchings whose partial transpose is again one.
    pub closed_under_transpose: usize,
    /// `q = 2` entangling matchings whose partial transpose is not.
    pub transpose_closure_violations: usize,
    pub decompositions_ok: usize,
    pub max_reconstruction_error: f64,
    pub component_counts: BTreeMap<String, usize>,
    pub failures: Vec<MatchingFailure>,
}

struct Outcome {
    entangling: bool,
    degree: bool,
    closed: bool,
    decomposed: Option<f64>,
    kinds: Vec<ComponentKind>,
    failure: Option<String>,
}

fn examine(g: &BipartiteLabeledGraph) -> Outcome {
    let entangling = g.is_perfect_entangling_matching();
    let degree = degree_condition_graph(g).holds;
    let closed = entangling && g.partial_transpose().is_perfect_entangling_matching();
    let kinds = classify_matching(g).components.iter().map(|c| c.kind).collect();
    let mut failure = None;
    if g.q() == 2 && entangling && !closed {
        failure = Some("partial transpose of an entangling matching is not a perfect matching".to_string());
    }

    let attempt = if g.q() == 2 {
        Some(decompose_perfect_matching(g))
    } else if g.q().is_multiple_of(2) && entangling {
        match decompose_block_matching(g) {
            Err(DecomposeError::NotBlockStructured(_)) => None,
            other => Some(other),
        }
    } else {
        None
    };
    let decomposed = match attempt {
        Some(Ok(d)) => {
            let rho = crate::density::density_of_graph(g).expect("matchings have edges");
            Some(d.reconstruct().max_abs_diff(rho.matrix()))
        }
        Some(Err(DecomposeError::DegreeViolation(_))) if !degree => None,
        Some(Err(e)) => {
            failure.get_or_insert_with(|| format!("{}: {e}", e.kind()));
            None
        }
        None => None,
    };
    Outcome { entangling, degree, closed, decomposed, kinds, failure }
}

/// Enumerates every perfect matching on `p·q ≤ 12` vertices. For `q = 2`,
/// checks that entangling matchings stay entangling matchings under partial
/// transpose and that each matching satisfying the degree condition
/// decomposes. For larger even `q`, block-structured entangling matchings
/// are decomposed as well.
pub fn sweep_matchings(p: usize, q: usize) -> Result<MatchingSweepReport, LabError> {
    if p == 0 || q == 0 {
        return Err(LabError::InvalidSplit { p, q });
    }
    let n = p * q;
    if !n.is_multiple_of(2) {
        return Err(LabError::OddVertexCount(n));
    }
    if n > MATCHINGS_MAX_VERTICES {
        return Err(LabError::TooLarge(format!(
            "perfect matchings on {n} vertices exceed the {MATCHINGS_MAX_VERTICES}-vertex budget"
        )));
    }
    let graphs = perfect_matchings(p, q);
    let outcomes: Vec<Outcome> = graphs.par_iter().map(examine).collect();

    let mut report = MatchingSweepReport { p, q, matchings: graphs.len(), ..Default::default() };
    for (g, o) in graphs.iter().zip(outcomes) {
        report.entangling += usize::from(o.entangling);
        report.degree_holds += usize::from(o.degree);
        report.closed_under_transpose += usize::from(o.closed);
        if q == 2 && o.entangling && !o.closed {
            report.transpose_closure_violations += 1;
        }
        if let Some(err) = o.decomposed {
            report.decompositions_ok += 1;
            report.max_reconstruction_error = report.max_reconstruction_error.max(err);
        }
        for k in o.kinds {
            *report.component_counts.entry(format!("{k:?}")).or_default() += 1;
        }
        if let Some(reason) = o.failure {
            report.failures.push(MatchingFailure { graph: g.clone(), reason });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matching_counts() {
        assert_eq!(perfect_matchings(2, 2).len(), 3);
        assert_eq!(perfect_matchings(3, 2).len(), 15);
        assert_eq!(perfect_matchings(2, 3).len(), 15);
        assert_eq!(perfect_matchings(3, 4).len(), 10395);
        assert!(perfect_matchings(3, 3).is_empty());
        assert!(perfect_matchings(2, 3).iter().all(BipartiteLabeledGraph::is_perfect_matching));
    }

    #[test]
    fn sweep_2x2() {
        let r = sweep_matchings(2, 2).unwrap();
        assert_eq!(r.matchings, 3);
        assert_eq!(r.entangling, 1);
        assert_eq!(r.degree_holds, 3);
        assert_eq!(r.closed_under_transpose, 1);
        assert_eq!(r.decompositions_ok, 3);
        assert!(r.failures.is_empty());
        assert_eq!(r.component_counts.get("CrisCross"), Some(&1));
    }

    #[test]
    fn sweep_3x2() {
        let r = sweep_matchings(3, 2).unwrap();
        assert_eq!(r.matchings, 15);
        assert_eq!(r.transpose_closure_violations, 0);
        assert!(r.failures.is_empty());
        assert_eq!(r.decompositions_ok, r.degree_holds);
        assert!(r.max_reconstruction_error <= 1e-10);
    }

    #[test]
    fn sweep_guards() {
        assert!(matches!(sweep_matchings(3, 3), Err(LabError::OddVertexCount(9))));
        assert!(matches!(sweep_matchings(7, 2), Err(LabError::TooLarge(_))));
    }
}

//! Degree condition against PPT and separability over whole families of
//! graphs.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::matchings::perfect_matchings;
use super::random::{random_graph, rng_from_seed};
use super::LabError;
use crate::density::density_of_graph;
use crate::graph::BipartiteLabeledGraph;
use crate::matrix::PSD_TOL;
use crate::separability::{degree_condition_graph, ppt_test, PPT_COMPLETE_MAX_DIM};

/// Largest number of vertex pairs an exhaustive sweep enumerates
/// (`2^21` edge subsets).
pub const EXHAUSTIVE_MAX_PAIRS: usize = 21;
/// Largest vertex count for perfect-matching enumeration.
pub const MATCHINGS_MAX_VERTICES: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SweepMode {
    Exhaustive,
    Random { seed: u64, count: usize },
    Matchings,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CounterexampleKind {
    /// Degree condition and PPT disagree: contradicts the proof identity.
    DegreePptMismatch,
    /// Degree condition and exact separability disagree.
    Conjecture1Counterexample,
}

/// Outcome of the individual tests on one graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphRecord {
    pub graph: BipartiteLabeledGraph,
    pub degree: bool,
    pub ppt: bool,
    pub min_pt_eigenvalue: f64,
    /// Known only where PPT decides separability.
    pub separable: Option<bool>,
}

impl GraphRecord {
    pub fn evaluate(graph: BipartiteLabeledGraph) -> Self {
        let degree = degree_condition_graph(&graph).holds;
        let rho = density_of_graph(&graph).expect("sweeps skip empty graphs");
        let ppt = ppt_test(&rho, PSD_TOL);
        let separable = (graph.vertex_count() <= PPT_COMPLETE_MAX_DIM).then_some(ppt.ppt);
        Self { graph, degree, ppt: ppt.ppt, min_pt_eigenvalue: ppt.min_eigenvalue, separable }
    }

    pub fn counterexample_kinds(&self) -> Vec<CounterexampleKind> {
        let mut kinds = Vec::new();
        if self.degree != self.ppt {
            kinds.push(CounterexampleKind::DegreePptMismatch);
        }
        if self.separable.is_some_and(|s| s != self.degree) {
            kinds.push(CounterexampleKind::Conjecture1Counterexample);
        }
        kinds
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub kinds: Vec<CounterexampleKind>,
    pub record: GraphRecord,
}

impl Counterexample {
    /// Re-runs the tests on the stored graph and compares the verdicts.
    pub fn reverify(&self) -> bool {
        let fresh = GraphRecord::evaluate(self.record.graph.clone());
        fresh.degree == self.record.degree
            && fresh.ppt == self.record.ppt
            && fresh.separable == self.record.separable
            && fresh.counterexample_kinds() == self.kinds
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepTotals {
    pub graphs: usize,
    pub degree_holds: usize,
    pub ppt_holds: usize,
    /// Graphs where separability is decided (PPT complete).
    pub decidable: usize,
    pub separable: usize,
    /// Degree condition ⇔ PPT.
    pub agreements: usize,
    pub disagreements: usize,
    /// Degree condition ⇔ separability, where decidable.
    pub conjecture_agreements: usize,
    pub conjecture_counterexamples: usize,
}

impl SweepTotals {
    fn add(&mut self, r: &GraphRecord) {
        self.graphs += 1;
        self.degree_holds += usize::from(r.degree);
        self.ppt_holds += usize::from(r.ppt);
        if r.degree == r.ppt {
            self.agreements += 1;
        } else {
            self.disagreements += 1;
        }
        if let Some(s) = r.separable {
            self.decidable += 1;
            self.separable += usize::from(s);
            if s == r.degree {
                self.conjecture_agreements += 1;
            } else {
                self.conjecture_counterexamples += 1;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub p: usize,
    pub q: usize,
    pub mode: SweepMode,
    pub totals: SweepTotals,
    /// Empty random draws, skipped without counting toward `count`.
    pub skipped_empty: usize,
    pub counterexamples: Vec<Counterexample>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

impl SweepReport {
    /// JSON without the wall time; identical inputs give identical bytes.
    pub fn canonical_json(&self) -> String {
        let mut clean = self.clone();
        clean.wall_time_ms = None;
        serde_json::to_string(&clean).expect("report serialization is infallible")
    }

    pub fn counterexamples_of(&self, kind: CounterexampleKind) -> impl Iterator<Item = &Counterexample> {
        self.counterexamples.iter().filter(move |c| c.kinds.contains(&kind))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SweepOptions {
    /// Return every per-graph record alongside the report.
    pub keep_records: bool,
}

/// Number of vertex pairs `C(pq, 2)`.
pub fn pair_count(p: usize, q: usize) -> usize {
    let n = p * q;
    n * n.saturating_sub(1) / 2
}

/// Evaluates every graph in the family. Records come back in enumeration
/// order when `options.keep_records` is set.
pub fn sweep_conjecture1(
    p: usize,
    q: usize,
    mode: SweepMode,
    options: SweepOptions,
) -> Result<(SweepReport, Vec<GraphRecord>), LabError> {
    if p == 0 || q == 0 {
        return Err(LabError::InvalidSplit { p, q });
    }
    let start = Instant::now();
    let mut skipped_empty = 0;
    let records: Vec<GraphRecord> = match mode {
        SweepMode::Exhaustive => {
            let pairs = pair_count(p, q);
            if pairs > EXHAUSTIVE_MAX_PAIRS {
                return Err(LabError::TooLarge(format!(
                    "exhaustive sweep over 2^{pairs} edge sets exceeds the 2^{EXHAUSTIVE_MAX_PAIRS} budget"
                )));
            }
            (1u64..(1u64 << pairs))
                .into_par_iter()
                .map(|mask| GraphRecord::evaluate(BipartiteLabeledGraph::from_mask(p, q, mask).expect("valid mask")))
                .collect()
        }
        SweepMode::Random { count, seed } => {
            if pair_count(p, q) == 0 {
                return Err(LabError::InvalidSplit { p, q });
            }
            let mut rng = rng_from_seed(seed);
            let mut graphs = Vec::with_capacity(count);
            while graphs.len() < count {
                let g = random_graph(&mut rng, p, q);
                if g.edge_count() == 0 {
                    skipped_empty += 1;
                } else {
                    graphs.push(g);
                }
            }
            graphs.into_par_iter().map(GraphRecord::evaluate).collect()
        }
        SweepMode::Matchings => {
            let n = p * q;
            if !n.is_multiple_of(2) {
                return Err(LabError::OddVertexCount(n));
            }
            if n > MATCHINGS_MAX_VERTICES {
                return Err(LabError::TooLarge(format!(
                    "perfect matchings on {n} vertices exceed the {MATCHINGS_MAX_VERTICES}-vertex budget"
                )));
            }
            perfect_matchings(p, q).into_par_iter().map(GraphRecord::evaluate).collect()
        }
    };

    let mut totals = SweepTotals::default();
    let mut counterexamples = Vec::new();
    for r in &records {
        totals.add(r);
        let kinds = r.counterexample_kinds();
        if !kinds.is_empty() {
            counterexamples.push(Counterexample { kinds, record: r.clone() });
        }
    }
    let report = SweepReport {
        p,
        q,
        mode,
        totals,
        skipped_empty,
        counterexamples,
        wall_time_ms: Some(start.elapsed().as_millis() as u64),
    };
    let kept = if options.keep_records { records } else { Vec::new() };
    Ok((report, kept))
}

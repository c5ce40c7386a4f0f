//! Perfect-matching structure: component decomposition, cris-crosses,
//! tally marks and the relabeling that brings an entangling matching
//! between two columns into canonical form.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{BipartiteLabeledGraph, GraphError, Label};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatchingKind {
    NotPerfectMatching,
    PerfectMatching,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ComponentKind {
    Unentangled,
    CrisCross,
    TallyMark,
    GeneralEntangling,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingComponent {
    pub kind: ComponentKind,
    /// 1-based labels, sorted by vertex index.
    pub vertices: Vec<Label>,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    /// For two-column entangling components: the cycle of first labels,
    /// starting at its smallest element and following column `cols[0]` →
    /// column `cols[1]` edges.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cycle: Option<Vec<usize>>,
}

impl MatchingComponent {
    /// Tally mark or cris-cross whose cycle already visits its labels in
    /// increasing order.
    pub fn is_canonical(&self) -> bool {
        match (&self.kind, &self.cycle) {
            (ComponentKind::CrisCross | ComponentKind::TallyMark, Some(c)) => c.windows(2).all(|w| w[0] < w[1]),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingClassification {
    pub kind: MatchingKind,
    pub components: Vec<MatchingComponent>,
}

/// Splits a perfect matching into components.
///
/// Columns joined by any edge form column blocks. Inside a block, edges
/// are split into entangled and unentangled classes and each class is cut
/// into row-connected pieces. A two-column entangling piece whose edges
/// form a permutation of its rows is a single cycle: length two is a
/// cris-cross, longer is a tally mark up to relabeling of the first label.
pub fn classify_matching(g: &BipartiteLabeledGraph) -> MatchingClassification {
    if !g.is_perfect_matching() {
        return MatchingClassification { kind: MatchingKind::NotPerfectMatching, components: Vec::new() };
    }
    let q = g.q();
    let mut col_sets = DisjointSets::new(q);
    for &(a, b) in g.edges() {
        col_sets.union(a % q, b % q);
    }

    let mut row_sets = DisjointSets::new(g.p());
    let mut groups: BTreeMap<(usize, bool), Vec<(usize, usize)>> = BTreeMap::new();
    for &e in g.edges() {
        groups.entry((col_sets.find(e.0 % q), g.is_entangled(e))).or_default().push(e);
    }

    let mut components = Vec::new();
    for ((_, entangled), edges) in groups {
        row_sets.reset();
        for &(a, b) in &edges {
            row_sets.union(a / q, b / q);
        }
        let mut pieces: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        for &e in &edges {
            pieces.entry(row_sets.find(e.0 / q)).or_default().push(e);
        }
        for (_, piece) in pieces {
            components.push(component_of(g, &piece, entangled));
        }
    }
    components.sort_by_key(|c| c.vertices.first().map(|&(j, k)| (j - 1) * q + k - 1));
    MatchingClassification { kind: MatchingKind::PerfectMatching, components }
}

fn component_of(g: &BipartiteLabeledGraph, edges: &[(usize, usize)], entangled: bool) -> MatchingComponent {
    let q = g.q();
    let mut vertices: Vec<usize> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    vertices.sort_unstable();
    let mut rows: Vec<usize> = vertices.iter().map(|v| v / q + 1).collect();
    rows.sort_unstable();
    rows.dedup();
    let mut cols: Vec<usize> = vertices.iter().map(|v| v % q + 1).collect();
    cols.sort_unstable();
    cols.dedup();

    let (kind, cycle) = if !entangled {
        (ComponentKind::Unentangled, None)
    } else {
        match two_column_cycles(edges, q) {
            Some((_, cycles)) if cycles.len() == 1 => {
                let cycle = cycles.into_iter().next().expect("one cycle");
                let kind = if cycle.len() == 2 { ComponentKind::CrisCross } else { ComponentKind::TallyMark };
                (kind, Some(cycle))
            }
            _ => (ComponentKind::GeneralEntangling, None),
        }
    };
    MatchingComponent { kind, vertices: vertices.into_iter().map(|v| g.label(v)).collect(), rows, cols, cycle }
}

/// Column pair and the row cycles between them.
type ColumnCycles = ((usize, usize), Vec<Vec<usize>>);

/// For entangled edges all running between the same two columns `c1 < c2`
/// (0-based), returns the columns and the cycles of the row map
/// `j ↦ j'` for edges `{(j, c1), (j', c2)}`, as 1-based labels. `None` if
/// the edges do not form such a permutation.
fn two_column_cycles(edges: &[(usize, usize)], q: usize) -> Option<ColumnCycles> {
    let (a0, b0) = *edges.first()?;
    let (c1, c2) = ((a0 % q).min(b0 % q), (a0 % q).max(b0 % q));
    let mut forward: BTreeMap<usize, usize> = BTreeMap::new();
    let mut targets: BTreeMap<usize, usize> = BTreeMap::new();
    for &(a, b) in edges {
        let (ra, ca, rb, cb) = (a / q, a % q, b / q, b % q);
        let (from, to) = match (ca, cb) {
            (x, y) if x == c1 && y == c2 => (ra, rb),
            (x, y) if x == c2 && y == c1 => (rb, ra),
            _ => return None,
        };
        if from == to || forward.insert(from, to).is_some() || targets.insert(to, from).is_some() {
            return None;
        }
    }
    if forward.keys().ne(targets.keys()) {
        return None;
    }
    let mut seen = BTreeMap::new();
    let mut cycles = Vec::new();
    for &start in forward.keys() {
        if seen.contains_key(&start) {
            continue;
        }
        let mut cycle = Vec::new();
        let mut cur = start;
        while seen.insert(cur, ()).is_none() {
            cycle.push(cur + 1);
            cur = forward[&cur];
        }
        cycles.push(cycle);
    }
    Some(((c1, c2), cycles))
}

/// Relabeling of the first label that turns an entangling matching between
/// two columns into a disjoint union of canonical cris-crosses and tally
/// marks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Canonicalization {
    /// The two (1-based) columns the matching lives on.
    pub columns: (usize, usize),
    /// `relabel[j − 1]` is the new first label of row `j` (identity off the cycles).
    pub relabel: Vec<usize>,
    /// Cycles of the original matching, each starting at its smallest label.
    pub cycles: Vec<Vec<usize>>,
}

/// Each cycle `(c₁ c₂ … c_L)` (with `c₁` minimal) is mapped onto its own
/// label set in increasing order, `c_m ↦ s_m` where `s₁ < … < s_L`. The
/// relabeled graph has every cycle in tally-mark order.
pub fn canonicalize_entangling_matching(g: &BipartiteLabeledGraph) -> Result<Canonicalization, GraphError> {
    let reject = |why: &str| GraphError::NotPerfectEntanglingMatching(why.to_string());
    if g.edge_count() == 0 {
        return Err(reject("graph has no edges"));
    }
    if g.edges().iter().any(|&e| !g.is_entangled(e)) {
        return Err(reject("graph has an unentangled edge"));
    }
    if g.degrees().iter().any(|&d| d > 1) {
        return Err(reject("a vertex has degree greater than one"));
    }
    let ((c1, c2), cycles) = two_column_cycles(g.edges(), g.q())
        .ok_or_else(|| reject("edges do not form a permutation between two columns"))?;

    let mut relabel: Vec<usize> = (1..=g.p()).collect();
    for cycle in &cycles {
        let mut sorted = cycle.clone();
        sorted.sort_unstable();
        for (from, to) in cycle.iter().zip(sorted) {
            relabel[from - 1] = to;
        }
    }
    Ok(Canonicalization { columns: (c1 + 1, c2 + 1), relabel, cycles })
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn reset(&mut self) {
        for (i, p) in self.parent.iter_mut().enumerate() {
            *p = i;
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            cur = std::mem::replace(&mut self.parent[cur], root);
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(p: usize, q: usize, edges: &[(Label, Label)]) -> BipartiteLabeledGraph {
        BipartiteLabeledGraph::new(p, q, edges).unwrap()
    }

    #[test]
    fn tally_mark_three_cycle() {
        let g = graph(3, 2, &[((1, 1), (2, 2)), ((2, 1), (3, 2)), ((3, 1), (1, 2))]);
        let c = classify_matching(&g);
        assert_eq!(c.kind, MatchingKind::PerfectMatching);
        assert_eq!(c.components.len(), 1);
        assert_eq!(c.components[0].kind, ComponentKind::TallyMark);
        assert_eq!(c.components[0].cycle.as_deref(), Some(&[1, 2, 3][..]));
        assert!(c.components[0].is_canonical());
    }

    #[test]
    fn path_is_not_a_matching() {
        let g = graph(2, 2, &[((1, 1), (1, 2)), ((1, 2), (2, 1))]);
        let c = classify_matching(&g);
        assert_eq!(c.kind, MatchingKind::NotPerfectMatching);
        assert!(c.components.is_empty());
        // Isolated vertices also disqualify.
        let partial = graph(2, 2, &[((1, 1), (2, 2))]);
        assert_eq!(classify_matching(&partial).kind, MatchingKind::NotPerfectMatching);
    }

    #[test]
    fn cris_cross_component() {
        let g = graph(2, 2, &[((1, 1), (2, 2)), ((1, 2), (2, 1))]);
        let c = classify_matching(&g);
        assert_eq!(c.components.len(), 1);
        assert_eq!(c.components[0].kind, ComponentKind::CrisCross);
    }

    #[test]
    fn canonicalization_of_two_cycle_is_identity() {
        let g = graph(2, 2, &[((1, 1), (2, 2)), ((1, 2), (2, 1))]);
        let canon = canonicalize_entangling_matching(&g).unwrap();
        assert_eq!(canon.relabel, vec![1, 2]);
        assert_eq!(canon.cycles, vec![vec![1, 2]]);
    }

    #[test]
    fn canonicalization_sorts_cycle_order() {
        // 1 → 3 → 2 → 1 becomes 1 → 2 → 3 → 1 after swapping 2 ↔ 3.
        let g = graph(3, 2, &[((1, 1), (3, 2)), ((3, 1), (2, 2)), ((2, 1), (1, 2))]);
        let canon = canonicalize_entangling_matching(&g).unwrap();
        assert_eq!(canon.cycles, vec![vec![1, 3, 2]]);
        assert_eq!(canon.relabel, vec![1, 3, 2]);
        let relabeled = g.relabel_rows(&canon.relabel).unwrap();
        let c = classify_matching(&relabeled);
        assert!(c.components.iter().all(MatchingComponent::is_canonical));
    }

    #[test]
    fn canonicalization_rejects_non_matchings() {
        let g = graph(3, 2, &[((1, 1), (1, 2))]);
        assert!(matches!(canonicalize_entangling_matching(&g), Err(GraphError::NotPerfectEntanglingMatching(_))));
        let three_cols = graph(2, 3, &[((1, 1), (2, 2)), ((1, 3), (2, 1))]);
        assert!(canonicalize_entangling_matching(&three_cols).is_err());
    }

    #[test]
    fn mixed_components_q2() {
        // Vertical unentangled pair on rows 1,2 and a cris-cross on rows 3,4.
        let g = graph(4, 2, &[((1, 1), (2, 1)), ((1, 2), (2, 2)), ((3, 1), (4, 2)), ((3, 2), (4, 1))]);
        let c = classify_matching(&g);
        let kinds: Vec<_> = c.components.iter().map(|c| c.kind).collect();
        assert_eq!(kinds, vec![ComponentKind::Unentangled, ComponentKind::CrisCross]);
        assert_eq!(c.components[0].rows, vec![1, 2]);
    }
}

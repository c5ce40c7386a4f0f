//! Worked example graphs.
//!
//! `fig2` is a 4×4 perfect matching made of an unentangled pair, a
//! cris-cross, a tally mark and a horizontal edge. `fig3` is a 6×4 block
//! matching: columns (1,3) carry a cris-cross plus a 4-cycle, columns (2,4)
//! a 6-cycle. `fig4` is a 3×4 perfect entangling matching that stays a
//! perfect matching under partial transpose, does not split into column
//! pairs, and contains no cycle between any two columns; it was found by
//! [`find_unpaired_closed_matching`] and is fixed here.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::matchings::perfect_matchings;
use crate::graph::{BipartiteLabeledGraph, Label};
use crate::separability::degree_condition_graph;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureGraphs {
    pub fig2: BipartiteLabeledGraph,
    pub fig3: BipartiteLabeledGraph,
    pub fig4: BipartiteLabeledGraph,
}

pub const FIG2_EDGES: [(Label, Label); 8] = [
    ((1, 1), (2, 1)),
    ((1, 2), (2, 2)),
    ((3, 1), (4, 2)),
    ((3, 2), (4, 1)),
    ((1, 3), (3, 4)),
    ((1, 4), (4, 3)),
    ((3, 3), (4, 4)),
    ((2, 3), (2, 4)),
];

/// Row map of the 6-cycle on columns (2,4): `(x,2)–(σ(x),4)`.
pub const FIG3_SIGMA: [usize; 6] = [3, 5, 2, 1, 6, 4];

pub const FIG4_EDGES: [(Label, Label); 6] =
    [((1, 1), (2, 2)), ((1, 2), (3, 1)), ((1, 3), (2, 4)), ((1, 4), (3, 3)), ((2, 1), (3, 4)), ((2, 3), (3, 2))];

pub fn fig2() -> BipartiteLabeledGraph {
    BipartiteLabeledGraph::new(4, 4, &FIG2_EDGES).expect("fixed edge list")
}

/// Columns 1 and 3 only.
pub fn fig3_g13() -> BipartiteLabeledGraph {
    let edges =
        [((1, 1), (3, 3)), ((3, 1), (1, 3)), ((2, 1), (5, 3)), ((4, 1), (6, 3)), ((5, 1), (4, 3)), ((6, 1), (2, 3))];
    BipartiteLabeledGraph::new(6, 4, &edges).expect("fixed edge list")
}

/// Columns 2 and 4 only.
pub fn fig3_g24() -> BipartiteLabeledGraph {
    let edges: Vec<(Label, Label)> = FIG3_SIGMA.iter().enumerate().map(|(x, &s)| ((x + 1, 2), (s, 4))).collect();
    BipartiteLabeledGraph::new(6, 4, &edges).expect("fixed edge list")
}

pub fn fig3() -> BipartiteLabeledGraph {
    let a = fig3_g13();
    let b = fig3_g24();
    a.with_edges(a.edges().iter().chain(b.edges()).copied()).expect("disjoint halves")
}

pub fn fig4() -> BipartiteLabeledGraph {
    BipartiteLabeledGraph::new(3, 4, &FIG4_EDGES).expect("fixed edge list")
}

pub fn figure_graphs() -> FigureGraphs {
    FigureGraphs { fig2: fig2(), fig3: fig3(), fig4: fig4() }
}

/// Column pair of every edge, as a map from each column to its partners.
fn column_partners(g: &BipartiteLabeledGraph) -> BTreeMap<usize, Vec<usize>> {
    let q = g.q();
    let mut partners: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(x, y) in g.edges() {
        for (c, d) in [(x % q, y % q), (y % q, x % q)] {
            let list = partners.entry(c).or_default();
            if !list.contains(&d) {
                list.push(d);
            }
        }
    }
    partners
}

/// True when the edges between some two columns contain a cycle of rows
/// (a cris-cross or a tally mark, possibly relabeled).
pub fn has_two_column_cycle(g: &BipartiteLabeledGraph) -> bool {
    let q = g.q();
    for c1 in 0..q {
        for c2 in (c1 + 1)..q {
            let forward: BTreeMap<usize, usize> = g
                .edges()
                .iter()
                .filter_map(|&(x, y)| match (x % q, y % q) {
                    (a, b) if a == c1 && b == c2 => Some((x / q, y / q)),
                    (a, b) if a == c2 && b == c1 => Some((y / q, x / q)),
                    _ => None,
                })
                .collect();
            for &start in forward.keys() {
                let mut cur = start;
                for _ in 0..forward.len() {
                    match forward.get(&cur) {
                        Some(&next) => cur = next,
                        None => break,
                    }
                    if cur == start {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Perfect entangling matching, closed under partial transpose, with some
/// column joined to more than one other column, and no two-column cycle.
pub fn is_unpaired_closed_matching(g: &BipartiteLabeledGraph) -> bool {
    g.is_perfect_entangling_matching()
        && g.partial_transpose().is_perfect_entangling_matching()
        && degree_condition_graph(g).holds
        && column_partners(g).values().any(|v| v.len() > 1)
        && !has_two_column_cycle(g)
}

/// First such matching in enumeration order.
pub fn find_unpaired_closed_matching(p: usize, q: usize) -> Option<BipartiteLabeledGraph> {
    perfect_matchings(p, q).into_iter().find(is_unpaired_closed_matching)
}

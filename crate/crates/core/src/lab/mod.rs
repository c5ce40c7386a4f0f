//! Empirical probes: sweeps of the degree condition against PPT and
//! separability, perfect-matching enumeration, local-permutation witnesses,
//! product vectors in the range of a state, and the worked example graphs.

mod figures;
mod matchings;
pub mod random;
mod range;
mod sweep;
mod witness;

use thiserror::Error;

use crate::graph::BipartiteLabeledGraph;

pub use figures::{
    fig2, fig3, fig3_g13, fig3_g24, fig4, figure_graphs, find_unpaired_closed_matching, has_two_column_cycle,
    is_unpaired_closed_matching, FigureGraphs, FIG2_EDGES, FIG3_SIGMA, FIG4_EDGES,
};
pub use matchings::{perfect_matchings, sweep_matchings, MatchingFailure, MatchingSweepReport};
pub use range::{range_product_states, ProductStateHit, RangeSearchOptions, RangeSearchResult, RANGE_MAX_DIM};
pub use sweep::{
    pair_count, sweep_conjecture1, Counterexample, CounterexampleKind, GraphRecord, SweepMode, SweepOptions,
    SweepReport, SweepTotals, EXHAUSTIVE_MAX_PAIRS, MATCHINGS_MAX_VERTICES,
};
pub use witness::{local_permutation_witness, WitnessError, WITNESS_MAX_Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabError {
    #[error("too large: {0}")]
    TooLarge(String),
    #[error("perfect matchings need an even vertex count, got {0}")]
    OddVertexCount(usize),
    #[error("invalid split p = {p}, q = {q}")]
    InvalidSplit { p: usize, q: usize },
}

/// Expected number of product states in the range of a perfect entangling
/// matching on `p × 2r`: `p·r`.
pub fn conjectured_product_count(g: &BipartiteLabeledGraph) -> Option<usize> {
    (g.q().is_multiple_of(2) && g.is_perfect_entangling_matching()).then(|| g.p() * g.q() / 2)
}

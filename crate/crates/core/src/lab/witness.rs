//! Search for a permutation `P` of the second label with
//! `Δ(G^{Γ_B}) = (I⊗P) Δ(G) (I⊗P⁻¹)` and `M(G^{Γ_B}) = (I⊗P) M(G) (I⊗P⁻¹)`,
//! i.e. a local relabeling that realizes the partial transpose.

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::BipartiteLabeledGraph;
use crate::separability::degree_condition_graph;

/// Largest second-factor dimension searched (`8! = 40320` candidates).
pub const WITNESS_MAX_Q: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum WitnessError {
    #[error("degree condition fails, so the claim does not apply")]
    DegreeConditionFails,
    #[error("q = {0} exceeds the search budget of {WITNESS_MAX_Q}")]
    BudgetExceeded(usize),
    #[error("no permutation of the second label realizes the partial transpose")]
    NotFound,
}

/// First permutation in lexicographic order, as 1-based images
/// `perm[k − 1] = P(k)`.
pub fn local_permutation_witness(g: &BipartiteLabeledGraph) -> Result<Vec<usize>, WitnessError> {
    if !degree_condition_graph(g).holds {
        return Err(WitnessError::DegreeConditionFails);
    }
    let q = g.q();
    if q > WITNESS_MAX_Q {
        return Err(WitnessError::BudgetExceeded(q));
    }
    let pt = g.partial_transpose();
    let pt_degrees = pt.degrees();
    let degrees = g.degrees();
    for perm in (1..=q).permutations(q) {
        let moved = g.relabel_cols(&perm).expect("permutations are valid");
        // (I⊗P) Δ (I⊗P⁻¹) moves the degree of (j, k) to (j, P(k)).
        let degrees_match = (0..g.vertex_count()).all(|v| {
            let target = (v / q) * q + perm[v % q] - 1;
            pt_degrees[target] == degrees[v]
        });
        if degrees_match && moved == pt {
            return Ok(perm);
        }
    }
    Err(WitnessError::NotFound)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cris_cross_gets_identity() {
        let g = BipartiteLabeledGraph::new(2, 2, &[((1, 1), (2, 2)), ((1, 2), (2, 1))]).unwrap();
        assert_eq!(local_permutation_witness(&g), Ok(vec![1, 2]));
        // The swap is also a witness.
        assert_eq!(g.relabel_cols(&[2, 1]).unwrap(), g.partial_transpose());
    }

    #[test]
    fn unentangled_graph_gets_identity() {
        let g = BipartiteLabeledGraph::new(2, 3, &[((1, 1), (1, 3)), ((1, 2), (2, 2))]).unwrap();
        assert_eq!(local_permutation_witness(&g), Ok(vec![1, 2, 3]));
    }

    #[test]
    fn tally_mark_needs_a_swap() {
        // Swapping the two columns of a tally mark reproduces its transpose.
        let g = BipartiteLabeledGraph::new(3, 2, &[((1, 1), (2, 2)), ((2, 1), (3, 2)), ((3, 1), (1, 2))]).unwrap();
        let perm = local_permutation_witness(&g).unwrap();
        assert_eq!(perm, vec![2, 1]);
        assert_eq!(g.relabel_cols(&perm).unwrap(), g.partial_transpose());
    }

    #[test]
    fn precondition_and_budget() {
        let g = BipartiteLabeledGraph::new(2, 2, &[((1, 1), (2, 2))]).unwrap();
        assert_eq!(local_permutation_witness(&g), Err(WitnessError::DegreeConditionFails));
        let wide = BipartiteLabeledGraph::new(1, 9, &[((1, 1), (1, 2))]).unwrap();
        assert_eq!(local_permutation_witness(&wide), Err(WitnessError::BudgetExceeded(9)));
    }
}

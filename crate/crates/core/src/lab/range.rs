//! Product vectors inside the range of a state.
//!
//! With `Π` the projector onto `range(ρ)`, a unit product vector `a ⊗ b`
//! lies in the range iff `⟨a⊗b|Π|a⊗b⟩ = 1`. The objective is maximized by
//! alternating exact maximizations: for fixed `b` the best `a` is the top
//! eigenvector of the `p×p` compression of `Π`, and symmetrically for `b`.
//! Each restart starts from a seeded Gaussian pair.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::random::{rng_from_seed, LabRng};
use super::LabError;
use crate::density::DensityMatrix;
use crate::matrix::{inner, kron_vec, psd_threshold, vec_norm, ComplexMatrix, PSD_TOL};

/// Largest dimension the search accepts.
pub const RANGE_MAX_DIM: usize = 32;
/// Two states closer than this in `1 − |⟨s|t⟩|` count as one.
pub const DEDUP_TOL: f64 = 1e-6;
const MAX_ITERATIONS: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RangeSearchOptions {
    pub seed: u64,
    pub restarts: usize,
    pub tol: f64,
}

impl Default for RangeSearchOptions {
    fn default() -> Self {
        Self { seed: 0, restarts: 64, tol: 1e-8 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductStateHit {
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
    /// `‖(I − Π)(a ⊗ b)‖`.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangeSearchResult {
    pub p: usize,
    pub q: usize,
    /// Dimension of `range(ρ)`.
    pub rank: usize,
    pub found: usize,
    pub states: Vec<ProductStateHit>,
    /// `|⟨s_i|s_j⟩|` for the found states.
    pub overlaps: Vec<Vec<f64>>,
    /// Smallest residual over all restarts, accepted or not.
    pub best_residual: f64,
    pub options: RangeSearchOptions,
}

/// Orthonormal basis of the eigenvectors above the positivity threshold.
fn range_projector(rho: &DensityMatrix) -> (ComplexMatrix, usize) {
    let m = rho.matrix();
    let eig = m.hermitian_eigen(f64::INFINITY).expect("guard disabled");
    let cut = psd_threshold(m, PSD_TOL);
    let n = m.dim();
    let mut proj = ComplexMatrix::zeros(n);
    let mut rank = 0;
    for (i, &lambda) in eig.values.iter().enumerate() {
        if lambda <= cut {
            continue;
        }
        rank += 1;
        let v = eig.vector(i);
        for r in 0..n {
            for c in 0..n {
                proj[(r, c)] += v[r] * v[c].conj();
            }
        }
    }
    (proj, rank)
}

fn gaussian_unit(rng: &mut LabRng, n: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal)))
        .collect();
    let norm = vec_norm(&v);
    v.into_iter().map(|z| z / norm).collect()
}

/// Fixes the global phase: the largest entry becomes real and positive.
fn fix_phase(v: &mut [Complex64]) {
    let Some(big) = v.iter().copied().max_by(|x, y| x.norm().total_cmp(&y.norm())) else { return };
    if big.norm() == 0.0 {
        return;
    }
    let phase = big.conj() / big.norm();
    for z in v.iter_mut() {
        *z *= phase;
    }
}

/// Top eigenvector of `M[i,i'] = Σ conj(w_j) Π[(i,j),(i',j')] w_{j'}`, where
/// the fixed factor `w` sits on the first (`fixed_first`) or second tensor slot.
fn best_partner(proj: &ComplexMatrix, p: usize, q: usize, w: &[Complex64], fixed_first: bool) -> (Vec<Complex64>, f64) {
    let free = if fixed_first { q } else { p };
    let index = |f: usize, x: usize| if fixed_first { x * q + f } else { f * q + x };
    let m = ComplexMatrix::from_fn(free, |r, c| {
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, wx) in w.iter().enumerate() {
            for (y, wy) in w.iter().enumerate() {
                acc += wx.conj() * proj[(index(r, x), index(c, y))] * wy;
            }
        }
        acc
    });
    let eig = m.hermitian_eigen(f64::INFINITY).expect("guard disabled");
    (eig.vector(free - 1), eig.max_eigenvalue())
}

fn residual(proj: &ComplexMatrix, v: &[Complex64]) -> f64 {
    let pv = proj.mul_vec(v);
    v.iter().zip(&pv).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

fn one_restart(proj: &ComplexMatrix, p: usize, q: usize, seed: u64, restart: usize) -> ProductStateHit {
    let mut rng = rng_from_seed(seed.wrapping_add((restart as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)));
    let mut a = gaussian_unit(&mut rng, p);
    let mut b = gaussian_unit(&mut rng, q);
    let mut last = f64::NEG_INFINITY;
    for _ in 0..MAX_ITERATIONS {
        a = best_partner(proj, p, q, &b, false).0;
        let (nb, value) = best_partner(proj, p, q, &a, true);
        b = nb;
        if (value - last).abs() <= 1e-16 {
            break;
        }
        last = value;
    }
    fix_phase(&mut a);
    fix_phase(&mut b);
    let r = residual(proj, &kron_vec(&a, &b));
    ProductStateHit { a, b, residual: r }
}

/// Multi-restart search; accepted states have residual at most `tol` and
/// are deduplicated up to a global phase in restart order.
pub fn range_product_states(rho: &DensityMatrix, options: RangeSearchOptions) -> Result<RangeSearchResult, LabError> {
    let n = rho.dim();
    if n > RANGE_MAX_DIM {
        return Err(LabError::TooLarge(format!("dimension {n} exceeds the range-search limit {RANGE_MAX_DIM}")));
    }
    let (p, q) = (rho.p(), rho.q());
    let (proj, rank) = range_projector(rho);
    let hits: Vec<ProductStateHit> =
        (0..options.restarts).into_par_iter().map(|r| one_restart(&proj, p, q, options.seed, r)).collect();

    let best_residual = hits.iter().map(|h| h.residual).fold(f64::INFINITY, f64::min);
    let mut states: Vec<ProductStateHit> = Vec::new();
    let mut vectors: Vec<Vec<Complex64>> = Vec::new();
    for hit in hits.into_iter().filter(|h| h.residual <= options.tol) {
        let v = kron_vec(&hit.a, &hit.b);
        if vectors.iter().any(|u| inner(u, &v).norm() >= 1.0 - DEDUP_TOL) {
            continue;
        }
        vectors.push(v);
        states.push(hit);
    }
    let overlaps = vectors.iter().map(|u| vectors.iter().map(|v| inner(u, v).norm()).collect()).collect();
    Ok(RangeSearchResult { p, q, rank, found: states.len(), states, overlaps, best_residual, options })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::density_of_graph;
    use crate::graph::BipartiteLabeledGraph;

    #[test]
    fn cris_cross_has_two_orthogonal_product_states() {
        let g = BipartiteLabeledGraph::new(2, 2, &[((1, 1), (2, 2)), ((1, 2), (2, 1))]).unwrap();
        let rho = density_of_graph(&g).unwrap();
        let r = range_product_states(&rho, RangeSearchOptions { seed: 1, restarts: 16, tol: 1e-8 }).unwrap();
        assert_eq!(r.rank, 2);
        assert_eq!(r.found, 2);
        assert!(r.states.iter().all(|s| s.residual <= 1e-8));
        assert!(r.overlaps[0][1] < 1e-8);
    }

    #[test]
    fn pure_entangled_state_has_none() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let v = [Complex64::new(s, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(s, 0.0)];
        let rho = DensityMatrix::new(ComplexMatrix::outer(&v), 2, 2).unwrap();
        let r = range_product_states(&rho, RangeSearchOptions { seed: 3, restarts: 16, tol: 1e-8 }).unwrap();
        assert_eq!(r.rank, 1);
        assert_eq!(r.found, 0);
        assert!(r.best_residual > 0.1);
    }

    #[test]
    fn deterministic_per_seed() {
        let g = BipartiteLabeledGraph::new(2, 3, &[((1, 1), (2, 2)), ((1, 2), (2, 1)), ((1, 3), (2, 3))]).unwrap();
        let rho = density_of_graph(&g).unwrap();
        let opts = RangeSearchOptions { seed: 9, restarts: 8, tol: 1e-8 };
        let a = range_product_states(&rho, opts).unwrap();
        let b = range_product_states(&rho, opts).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}

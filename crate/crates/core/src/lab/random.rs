//! Seeded generators. All randomness goes through `Xoshiro256PlusPlus`
//! seeded with `seed_from_u64` (SplitMix64 expansion), so a seed fixes every
//! draw on every platform.

use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_distr::Exp1;
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::density::{CirculantSpec, GroupFunctionZ2n};
use crate::graph::{is_nearest_point_edge, vertex_pairs, BipartiteLabeledGraph};
use crate::matrix::root_of_unity;

pub type LabRng = Xoshiro256PlusPlus;

pub fn rng_from_seed(seed: u64) -> LabRng {
    Xoshiro256PlusPlus::seed_from_u64(seed)
}

/// Each vertex pair, in lexicographic order, is an edge iff the top bit of
/// the next 64-bit output is set.
pub fn random_graph(rng: &mut LabRng, p: usize, q: usize) -> BipartiteLabeledGraph {
    let edges: Vec<_> = vertex_pairs(p * q).into_iter().filter(|_| rng.next_u64() >> 63 == 1).collect();
    BipartiteLabeledGraph::from_index_edges(p, q, edges).expect("pairs are distinct and in range")
}

/// Same rule restricted to nearest-point pairs.
pub fn random_nearest_point_graph(rng: &mut LabRng, p: usize, q: usize) -> BipartiteLabeledGraph {
    let edges: Vec<_> = vertex_pairs(p * q)
        .into_iter()
        .filter(|&e| is_nearest_point_edge(e, q))
        .filter(|_| rng.next_u64() >> 63 == 1)
        .collect();
    BipartiteLabeledGraph::from_index_edges(p, q, edges).expect("pairs are distinct and in range")
}

/// Random spectrum: exponential weights, each zeroed with probability ¼,
/// normalized to sum one. At least one weight stays positive.
fn random_spectrum(rng: &mut LabRng, n: usize) -> Vec<f64> {
    let mut w: Vec<f64> =
        (0..n).map(|_| if rng.random_bool(0.25) { 0.0 } else { rng.sample::<f64, _>(Exp1) }).collect();
    if w.iter().all(|&x| x == 0.0) {
        let i = rng.random_range(0..n);
        w[i] = 1.0;
    }
    let total: f64 = w.iter().sum();
    w.iter().map(|x| x / total).collect()
}

/// Valid circulant spec on `n` points: `a_d = (1/n) Σ_j λ_j e^{2πi jd/n}`
/// for a random spectrum `λ ≥ 0`. The Hermitian pattern and `a₀ = 1/n` are
/// imposed exactly.
pub fn random_circulant_spec(rng: &mut LabRng, n: usize) -> CirculantSpec {
    let lambda = random_spectrum(rng, n);
    let mut row = vec![Complex64::new(0.0, 0.0); n];
    row[0] = Complex64::new(1.0 / n as f64, 0.0);
    for d in 1..=n / 2 {
        let a: Complex64 =
            lambda.iter().enumerate().map(|(j, l)| root_of_unity(n, j * d % n) * *l).sum::<Complex64>() / n as f64;
        row[d] = a;
        row[n - d] = a.conj();
    }
    if n.is_multiple_of(2) {
        row[n / 2].im = 0.0;
    }
    CirculantSpec::new(row)
}

/// Valid `Z₂ⁿ` function: `f(h) = 2^{−n} Σ_g λ_g (−1)^{|h ∧ g|}` with
/// `f(0) = 2^{−n}` exactly.
pub fn random_group_function(rng: &mut LabRng, n: u32) -> GroupFunctionZ2n {
    let order = 1usize << n;
    let lambda = random_spectrum(rng, order);
    let mut values: Vec<f64> = (0..order)
        .map(|h| {
            lambda.iter().enumerate().map(|(g, l)| if (h & g).count_ones() % 2 == 0 { *l } else { -*l }).sum::<f64>()
                / order as f64
        })
        .collect();
    values[0] = 1.0 / order as f64;
    GroupFunctionZ2n::new(n, values).expect("shape is consistent")
}

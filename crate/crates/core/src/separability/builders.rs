//! Constructive separable decompositions. Every builder checks its own
//! output against the target state before returning it.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{
    degree_condition_graph, verify_decomposition, DecomposeError, ProductTerm, SeparableDecomposition,
    RECONSTRUCTION_TOL,
};
use crate::density::{
    circulant_density, density_of_graph, group_density_z2n, CirculantSpec, DensityMatrix, GroupFunctionZ2n,
};
use crate::graph::BipartiteLabeledGraph;
use crate::matrix::root_of_unity;

/// Eigenvalues at or below this are dropped from spectral decompositions.
pub const ZERO_WEIGHT_TOL: f64 = 1e-12;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn basis(n: usize, i: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    v[i] = Complex64::new(1.0, 0.0);
    v
}

/// `(e_i + sign·e_k)/√2`.
fn pair(n: usize, i: usize, k: usize, sign: f64) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    v[i] = Complex64::new(FRAC_1_SQRT_2, 0.0);
    v[k] = Complex64::new(sign * FRAC_1_SQRT_2, 0.0);
    v
}

fn require_nonempty(g: &BipartiteLabeledGraph) -> Result<(), DecomposeError> {
    if g.edge_count() == 0 {
        return Err(DecomposeError::EmptyGraph);
    }
    Ok(())
}

fn require_degree_condition(g: &BipartiteLabeledGraph) -> Result<(), DecomposeError> {
    match degree_condition_graph(g).violation {
        Some(v) => Err(DecomposeError::DegreeViolation(v)),
        None => Ok(()),
    }
}

/// An unentangled edge is a single product term: `e_i ⊗ (e_j − e_l)/√2`
/// inside a row, `(e_i − e_k)/√2 ⊗ e_j` inside a column.
fn unentangled_term(g: &BipartiteLabeledGraph, (x, y): (usize, usize), w: f64) -> ProductTerm {
    let (p, q) = (g.p(), g.q());
    let (i, j, k, l) = (x / q, x % q, y / q, y % q);
    if i == k {
        ProductTerm::new(w, basis(p, i), pair(q, j, l, -1.0))
    } else {
        ProductTerm::new(w, pair(p, i, k, -1.0), basis(q, j))
    }
}

fn finish(terms: Vec<ProductTerm>, rho: &DensityMatrix) -> Result<SeparableDecomposition, DecomposeError> {
    let d = SeparableDecomposition { p: rho.p(), q: rho.q(), terms };
    let report = verify_decomposition(&d, rho, RECONSTRUCTION_TOL)?;
    if !report.ok {
        return Err(DecomposeError::ReconstructionFailed { error: report.reconstruction_error });
    }
    Ok(d)
}

/// Nearest-point graphs. Each edge carries weight `1/|E|`. Entangled edges
/// come in crossing pairs `{(i,j),(k,l)}`, `{(i,l),(k,j)}` inside a unit
/// square, and each pair equals
/// `P[(e_i+e_k)/√2 ⊗ (e_j−e_l)/√2] + P[(e_i−e_k)/√2 ⊗ (e_j+e_l)/√2]`.
pub fn decompose_nearest_point(g: &BipartiteLabeledGraph) -> Result<SeparableDecomposition, DecomposeError> {
    require_nonempty(g)?;
    if !g.is_nearest_point() {
        return Err(DecomposeError::NotNearestPoint);
    }
    require_degree_condition(g)?;
    let (p, q) = (g.p(), g.q());
    let w = 1.0 / g.edge_count() as f64;
    let mut terms = Vec::with_capacity(g.edge_count());
    for &e in g.edges() {
        if !g.is_entangled(e) {
            terms.push(unentangled_term(g, e, w));
            continue;
        }
        // Index order puts row i above row k; (j, l) orients the diagonal.
        let (i, j, k, l) = (e.0 / q, e.0 % q, e.1 / q, e.1 % q);
        let partner = (i * q + l, k * q + j);
        if !g.has_edge(partner.0, partner.1) {
            return Err(DecomposeError::PairingFailure(format!(
                "{:?}-{:?} has no crossing partner {:?}-{:?}",
                g.label(e.0),
                g.label(e.1),
                g.label(partner.0),
                g.label(partner.1)
            )));
        }
        if j < l {
            terms.push(ProductTerm::new(w, pair(p, i, k, 1.0), pair(q, j, l, -1.0)));
            terms.push(ProductTerm::new(w, pair(p, i, k, -1.0), pair(q, j, l, 1.0)));
        }
    }
    finish(terms, &density_of_graph(g)?)
}

/// Entangled edges `{(x, c1), (π(x), c2)}` between two columns, as the row
/// map `π`. Each cycle `(x₀ … x_{L−1})` of `π` yields `L` terms
/// `a_l = Σ_m ω^{ml}|x_m⟩/√L`, `b_l = (|c1⟩ − ω^{−l}|c2⟩)/√2`, `ω = e^{2πi/L}`.
fn cycle_terms(
    p: usize,
    q: usize,
    (c1, c2): (usize, usize),
    forward: &BTreeMap<usize, usize>,
    w: f64,
) -> Result<Vec<ProductTerm>, DecomposeError> {
    let mut seen = vec![false; p];
    let mut terms = Vec::new();
    for &start in forward.keys() {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            cycle.push(cur);
            cur = *forward.get(&cur).ok_or_else(|| {
                DecomposeError::PairingFailure(format!("row {} has no outgoing entangled edge", cur + 1))
            })?;
        }
        if cur != start {
            return Err(DecomposeError::PairingFailure(format!("row map is not a permutation at row {}", cur + 1)));
        }
        let len = cycle.len();
        let norm = 1.0 / (len as f64).sqrt();
        for l in 0..len {
            let mut a = vec![Complex64::new(0.0, 0.0); p];
            for (m, &x) in cycle.iter().enumerate() {
                a[x] = root_of_unity(len, m * l % len) * norm;
            }
            let mut b = vec![Complex64::new(0.0, 0.0); q];
            b[c1] = Complex64::new(FRAC_1_SQRT_2, 0.0);
            b[c2] = -root_of_unity(len, len - l % len) * FRAC_1_SQRT_2;
            terms.push(ProductTerm::new(w, a, b));
        }
    }
    Ok(terms)
}

/// Row map of the entangled edges running between columns `c1` and `c2`,
/// oriented from `c1` to `c2`.
fn row_map(g: &BipartiteLabeledGraph, edges: &[(usize, usize)], c1: usize) -> BTreeMap<usize, usize> {
    let q = g.q();
    edges.iter().map(|&(x, y)| if x % q == c1 { (x / q, y / q) } else { (y / q, x / q) }).collect()
}

/// Perfect matchings with `q = 2`. Every edge has weight `1/p`; unentangled
/// edges are product terms and the entangled part is a fixed-point-free
/// permutation of rows whose cycles are decomposed by [`cycle_terms`].
pub fn decompose_perfect_matching(g: &BipartiteLabeledGraph) -> Result<SeparableDecomposition, DecomposeError> {
    if g.q() != 2 {
        return Err(DecomposeError::WrongQ(g.q()));
    }
    if !g.is_perfect_matching() {
        return Err(DecomposeError::NotPerfectMatching);
    }
    require_degree_condition(g)?;
    let w = 1.0 / g.edge_count() as f64;
    let (entangled, plain): (Vec<_>, Vec<_>) = g.edges().iter().partition(|&&e| g.is_entangled(e));
    let mut terms: Vec<ProductTerm> = plain.into_iter().map(|e| unentangled_term(g, e, w)).collect();
    let forward = row_map(g, &entangled, 0);
    if forward.len() != entangled.len() {
        return Err(DecomposeError::PairingFailure("two entangled edges leave the same row".into()));
    }
    terms.extend(cycle_terms(g.p(), 2, (0, 1), &forward, w)?);
    finish(terms, &density_of_graph(g)?)
}

/// Perfect entangling matchings whose columns pair up: every edge touching
/// column `c` ends in its partner column, so the graph is a disjoint union
/// of `r = q/2` two-column matchings, each covering all `p` rows. Every edge
/// has weight `1/(p·r)` and each column pair is decomposed by cycles.
pub fn decompose_block_matching(g: &BipartiteLabeledGraph) -> Result<SeparableDecomposition, DecomposeError> {
    let reject = |why: String| Err(DecomposeError::NotBlockStructured(why));
    require_nonempty(g)?;
    let (p, q) = (g.p(), g.q());
    if q % 2 != 0 {
        return reject(format!("odd number of columns {q}"));
    }
    if !g.is_perfect_entangling_matching() {
        return reject("not a perfect entangling matching".into());
    }
    let mut partner: Vec<Option<usize>> = vec![None; q];
    let mut blocks: BTreeMap<(usize, usize), Vec<(usize, usize)>> = BTreeMap::new();
    for &(x, y) in g.edges() {
        let (cx, cy) = (x % q, y % q);
        for (c, d) in [(cx, cy), (cy, cx)] {
            match partner[c] {
                None => partner[c] = Some(d),
                Some(prev) if prev == d => {}
                Some(prev) => {
                    return reject(format!("column {} is joined to columns {} and {}", c + 1, prev + 1, d + 1));
                }
            }
        }
        blocks.entry((cx.min(cy), cx.max(cy))).or_default().push((x, y));
    }
    require_degree_condition(g)?;
    let w = 1.0 / g.edge_count() as f64;
    let mut terms = Vec::with_capacity(g.edge_count());
    for ((c1, c2), edges) in &blocks {
        let forward = row_map(g, edges, *c1);
        if forward.len() != p {
            return reject(format!("columns {} and {} do not cover all rows", c1 + 1, c2 + 1));
        }
        terms.extend(cycle_terms(p, q, (*c1, *c2), &forward, w)?);
    }
    finish(terms, &density_of_graph(g)?)
}

/// Drops weights at or below [`ZERO_WEIGHT_TOL`] and renormalizes.
fn spectral_terms(weighted: Vec<(f64, Vec<Complex64>, Vec<Complex64>)>) -> Vec<ProductTerm> {
    let kept: Vec<_> = weighted.into_iter().filter(|(w, _, _)| *w > ZERO_WEIGHT_TOL).collect();
    let total: f64 = kept.iter().map(|(w, _, _)| w).sum();
    kept.into_iter().map(|(w, a, b)| ProductTerm::new(w / total, a, b)).collect()
}

/// Circulant states under any split `p·q = n`. The DFT eigenvector
/// `e^{−2πi jc/n}/√n` with `c = a·q + b` factors as
/// `(Σ_a e^{−2πi ja/p}|a⟩/√p) ⊗ (Σ_b e^{−2πi jb/n}|b⟩/√q)`.
pub fn decompose_circulant(spec: &CirculantSpec, p: usize, q: usize) -> Result<SeparableDecomposition, DecomposeError> {
    let rho = circulant_density(spec)?;
    let n = rho.dim();
    if p * q != n {
        return Err(DecomposeError::SplitMismatch { p, q, dim: n });
    }
    let rho = rho.with_split(p, q)?;
    let weighted = spec
        .eigenvalues()
        .into_iter()
        .enumerate()
        .map(|(j, lambda)| {
            let a = (0..p).map(|x| root_of_unity(p, (p - j * x % p) % p) / (p as f64).sqrt()).collect();
            let b = (0..q).map(|y| root_of_unity(n, (n - j * y % n) % n) / (q as f64).sqrt()).collect();
            (lambda.re, a, b)
        })
        .collect();
    finish(spectral_terms(weighted), &rho)
}

/// `Z₂ⁿ` states under `2^k × 2^l`. Column `g` of the Sylvester–Hadamard
/// matrix factors as column `g ≫ l` of `H^k` times column `g mod 2^l` of
/// `H^l`.
pub fn decompose_z2n(f: &GroupFunctionZ2n, k: u32, l: u32) -> Result<SeparableDecomposition, DecomposeError> {
    let rho = group_density_z2n(f)?;
    let (p, q) = (1usize << k, 1usize << l);
    if k + l != f.n {
        return Err(DecomposeError::SplitMismatch { p, q, dim: rho.dim() });
    }
    let rho = rho.with_split(p, q)?;
    let hadamard_column = |dim: usize, g: usize| -> Vec<Complex64> {
        let s = 1.0 / (dim as f64).sqrt();
        (0..dim).map(|x| Complex64::new(if (x & g).count_ones().is_multiple_of(2) { s } else { -s }, 0.0)).collect()
    };
    let weighted = f
        .eigenvalues()
        .into_iter()
        .enumerate()
        .map(|(g, lambda)| (lambda, hadamard_column(p, g >> l), hadamard_column(q, g & (q - 1))))
        .collect();
    finish(spectral_terms(weighted), &rho)
}

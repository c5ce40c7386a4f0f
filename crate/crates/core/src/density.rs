//! Density matrices built from graphs, circulant first rows and functions
//! on `Z₂ⁿ`, plus the row-sum degree matrix `Δ(ρ)` and the general degree
//! condition `Δ(ρ) = Δ(ρ^{Γ_B})`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::BipartiteLabeledGraph;
use crate::matrix::{psd_threshold, ComplexMatrix, MatrixError, PSD_TOL};

/// Tolerance for structural Hermiticity of circulant first rows and for the
/// unit-trace check.
pub const STRUCTURE_TOL: f64 = 1e-12;

/// Tolerance for the floating degree condition on general densities.
pub const DEGREE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DensityError {
    #[error("graph has no edges: normalization 1/(2|E|) is undefined")]
    EmptyGraph,
    #[error("hermiticity violated at entry {index}: deviation {deviation:e}")]
    HermiticityViolation { index: usize, deviation: f64 },
    #[error("trace is {trace}, expected 1")]
    TraceViolation { trace: f64 },
    #[error("not positive semidefinite: eigenvalue {min_eigenvalue:e}")]
    NotPSD { min_eigenvalue: f64 },
    #[error("split {p} x {q} does not match dimension {dim}")]
    SplitMismatch { p: usize, q: usize, dim: usize },
    #[error("expected {expected} values, found {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("number of generators {0} is out of range (1..=20)")]
    GeneratorCount(u32),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Unit-trace positive semidefinite Hermitian matrix on `C^p ⊗ C^q`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    p: usize,
    q: usize,
}

impl DensityMatrix {
    /// Validates Hermiticity and positivity (relative tolerance
    /// [`PSD_TOL`]) and unit trace within [`STRUCTURE_TOL`].
    pub fn new(matrix: ComplexMatrix, p: usize, q: usize) -> Result<Self, DensityError> {
        let dim = matrix.dim();
        if p * q != dim || dim == 0 {
            return Err(DensityError::SplitMismatch { p, q, dim });
        }
        let deviation = matrix.hermiticity_deviation();
        if deviation > PSD_TOL {
            let index = first_hermiticity_violation(&matrix, PSD_TOL);
            return Err(DensityError::HermiticityViolation { index, deviation });
        }
        check_trace(matrix.trace())?;
        let eig = matrix.hermitian_eigen(PSD_TOL)?;
        if eig.min_eigenvalue() < -psd_threshold(&matrix, PSD_TOL) {
            return Err(DensityError::NotPSD { min_eigenvalue: eig.min_eigenvalue() });
        }
        Ok(Self { matrix, p, q })
    }

    /// For constructions whose validity is guaranteed analytically.
    fn trusted(matrix: ComplexMatrix, p: usize, q: usize) -> Self {
        debug_assert_eq!(matrix.dim(), p * q);
        Self { matrix, p, q }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Same matrix viewed under another factorization of its dimension.
    pub fn with_split(&self, p: usize, q: usize) -> Result<Self, DensityError> {
        if p * q != self.dim() {
            return Err(DensityError::SplitMismatch { p, q, dim: self.dim() });
        }
        Ok(Self { matrix: self.matrix.clone(), p, q })
    }

    /// `ρ^{Γ_B}` as a plain matrix (it need not be a state).
    pub fn partial_transpose(&self) -> ComplexMatrix {
        self.matrix.partial_transpose(self.p, self.q).expect("split checked at construction")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&DensityJson::from(self)).expect("density serialization is infallible")
    }

    pub fn from_json(input: &str) -> Result<Self, DensityJsonError> {
        let raw: DensityJson = serde_json::from_str(input).map_err(|e| DensityJsonError::Json(e.to_string()))?;
        let n = raw.matrix.len();
        if raw.matrix.iter().any(|r| r.len() != n) {
            return Err(DensityJsonError::Density(DensityError::Matrix(MatrixError::Ragged)));
        }
        let m = ComplexMatrix::from_fn(n, |i, j| {
            let [re, im] = raw.matrix[i][j];
            Complex64::new(re, im)
        });
        Self::new(m, raw.p, raw.q).map_err(DensityJsonError::Density)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DensityJsonError {
    #[error("invalid density JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Density(DensityError),
}

/// `{"p":..,"q":..,"matrix":[[[re,im],..],..]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityJson {
    pub p: usize,
    pub q: usize,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl From<&DensityMatrix> for DensityJson {
    fn from(d: &DensityMatrix) -> Self {
        let matrix = d.matrix.rows().into_iter().map(|r| r.into_iter().map(|z| [z.re, z.im]).collect()).collect();
        DensityJson { p: d.p, q: d.q, matrix }
    }
}

fn check_trace(trace: Complex64) -> Result<(), DensityError> {
    if (trace - 1.0).norm() > STRUCTURE_TOL {
        return Err(DensityError::TraceViolation { trace: trace.re });
    }
    Ok(())
}

fn first_hermiticity_violation(m: &ComplexMatrix, tol: f64) -> usize {
    let n = m.dim();
    (0..n * n).find(|&k| (m[(k / n, k % n)] - m[(k % n, k / n)].conj()).norm() > tol).unwrap_or(0)
}

/// `ρ(G) = L(G) / (2|E|)`.
pub fn density_of_graph(g: &BipartiteLabeledGraph) -> Result<DensityMatrix, DensityError> {
    if g.edge_count() == 0 {
        return Err(DensityError::EmptyGraph);
    }
    let scale = 1.0 / (2 * g.edge_count()) as f64;
    let m = g.laplacian().to_complex().scale(scale);
    Ok(DensityMatrix::trusted(m, g.p(), g.q()))
}

/// First row `(a₀, …, a_{n−1})` of a circulant matrix; row `r` is the first
/// row shifted right `r` times, `C_{r,c} = a_{(c−r) mod n}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CirculantSpec {
    pub first_row: Vec<Complex64>,
}

impl CirculantSpec {
    pub fn new(first_row: Vec<Complex64>) -> Self {
        Self { first_row }
    }

    pub fn from_real(first_row: &[f64]) -> Self {
        Self { first_row: first_row.iter().map(|&x| Complex64::new(x, 0.0)).collect() }
    }

    pub fn len(&self) -> usize {
        self.first_row.len()
    }

    pub fn is_empty(&self) -> bool {
        self.first_row.is_empty()
    }

    pub fn matrix(&self) -> ComplexMatrix {
        let n = self.len();
        ComplexMatrix::from_fn(n, |r, c| self.first_row[(c + n - r) % n])
    }

    /// `λ_j = Σ_d a_d e^{−2πi jd/n}`: the eigenvalue of the circulant on the
    /// vector with entries `e^{−2πi jc/n}/√n`.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        let n = self.len();
        (0..n)
            .map(|j| {
                self.first_row
                    .iter()
                    .enumerate()
                    .map(|(d, a)| a * crate::matrix::root_of_unity(n, (n - (j * d) % n) % n))
                    .sum()
            })
            .collect()
    }

    /// Checks `a₀` real and `a_l = conj(a_{n−l})`.
    pub fn check_hermitian(&self, tol: f64) -> Result<(), DensityError> {
        let n = self.len();
        for l in 0..n {
            let deviation = (self.first_row[l] - self.first_row[(n - l) % n].conj()).norm();
            if deviation > tol {
                return Err(DensityError::HermiticityViolation { index: l, deviation });
            }
        }
        Ok(())
    }
}

/// Validates hermiticity of the first row, then the trace `n·a₀ = 1`, then
/// positivity of the DFT eigenvalues.
pub fn circulant_density(spec: &CirculantSpec) -> Result<DensityMatrix, DensityError> {
    let n = spec.len();
    if n == 0 {
        return Err(DensityError::WrongLength { expected: 1, found: 0 });
    }
    spec.check_hermitian(STRUCTURE_TOL)?;
    check_trace(spec.first_row[0] * n as f64)?;
    let m = spec.matrix();
    let threshold = psd_threshold(&m, PSD_TOL);
    let min = spec.eigenvalues().iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
    if min < -threshold {
        return Err(DensityError::NotPSD { min_eigenvalue: min });
    }
    Ok(DensityMatrix::trusted(m, n, 1))
}

/// Real coefficients `f(g)` of `Σ_g f(g) σ(g)` over `Z₂ⁿ`. Group element `g`
/// is the integer whose bits are its exponent vector; `σ(g)` maps basis
/// vector `x` to `x ⊕ g`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupFunctionZ2n {
    pub n: u32,
    pub values: Vec<f64>,
}

impl GroupFunctionZ2n {
    pub fn new(n: u32, values: Vec<f64>) -> Result<Self, DensityError> {
        let f = Self { n, values };
        f.check_shape()?;
        Ok(f)
    }

    fn check_shape(&self) -> Result<(), DensityError> {
        if self.n == 0 || self.n > 20 {
            return Err(DensityError::GeneratorCount(self.n));
        }
        let expected = 1usize << self.n;
        if self.values.len() != expected {
            return Err(DensityError::WrongLength { expected, found: self.values.len() });
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        1 << self.n
    }

    /// Entry `(x, y)` is `f(x ⊕ y)`.
    pub fn matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.order(), |x, y| Complex64::new(self.values[x ^ y], 0.0))
    }

    /// `λ_g = Σ_h f(h)(−1)^{|h ∧ g|}`, the eigenvalue on column `g` of the
    /// Sylvester–Hadamard matrix.
    pub fn eigenvalues(&self) -> Vec<f64> {
        (0..self.order())
            .map(|g| {
                self.values.iter().enumerate().map(|(h, f)| if (h & g).count_ones() % 2 == 0 { *f } else { -*f }).sum()
            })
            .collect()
    }
}

/// Validates the trace `2ⁿ·f(0) = 1`, then positivity via the Hadamard
/// eigenvalues. Hermiticity is automatic.
pub fn group_density_z2n(f: &GroupFunctionZ2n) -> Result<DensityMatrix, DensityError> {
    f.check_shape()?;
    check_trace(Complex64::new(f.values[0] * f.order() as f64, 0.0))?;
    let m = f.matrix();
    let threshold = psd_threshold(&m, PSD_TOL);
    let min = f.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
    if min < -threshold {
        return Err(DensityError::NotPSD { min_eigenvalue: min });
    }
    Ok(DensityMatrix::trusted(m, f.order(), 1))
}

/// Row-sum diagonals of `ρ` and `ρ^{Γ_B}`, compared as complex numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneralDegreeCondition {
    pub holds: bool,
    pub delta: Vec<Complex64>,
    pub delta_pt: Vec<Complex64>,
    pub max_difference: f64,
}

pub fn degree_condition_general(rho: &DensityMatrix) -> GeneralDegreeCondition {
    let delta = rho.matrix.row_sum_diagonal().diagonal();
    let delta_pt = rho.partial_transpose().row_sum_diagonal().diagonal();
    let max_difference = delta.iter().zip(&delta_pt).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    GeneralDegreeCondition { holds: max_difference <= DEGREE_TOL, delta, delta_pt, max_difference }
}

/// `(I − ρ)/(n − 1)`: the trace-one complement of a state on `n ≥ 2`
/// dimensions.
pub fn complement_density(rho: &DensityMatrix) -> Result<DensityMatrix, DensityError> {
    let n = rho.dim();
    if n < 2 {
        return Err(DensityError::SplitMismatch { p: rho.p, q: rho.q, dim: n });
    }
    let m = (&ComplexMatrix::identity(n) - &rho.matrix).scale(1.0 / (n - 1) as f64);
    Ok(DensityMatrix::trusted(m, rho.p, rho.q))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn graph(p: usize, q: usize, edges: &[(crate::graph::Label, crate::graph::Label)]) -> BipartiteLabeledGraph {
        BipartiteLabeledGraph::new(p, q, edges).unwrap()
    }

    #[test]
    fn single_edge_density() {
        let g = graph(2, 1, &[((1, 1), (2, 1))]);
        let rho = density_of_graph(&g).unwrap();
        let want = ComplexMatrix::from_real_rows(&[vec![0.5, -0.5], vec![-0.5, 0.5]]).unwrap();
        assert_eq!(rho.matrix(), &want);
    }

    #[test]
    fn cris_cross_density() {
        let g = graph(2, 2, &[((1, 1), (2, 2)), ((1, 2), (2, 1))]);
        let rho = density_of_graph(&g).unwrap();
        for i in 0..4 {
            assert_eq!(rho.matrix()[(i, i)], c(0.25));
            assert_eq!(rho.matrix()[(i, 3 - i)], c(-0.25));
        }
        assert!(DensityMatrix::new(rho.matrix().clone(), 2, 2).is_ok());
    }

    #[test]
    fn empty_graph_errors() {
        let g = BipartiteLabeledGraph::empty(2, 2).unwrap();
        assert_eq!(density_of_graph(&g), Err(DensityError::EmptyGraph));
    }

    #[test]
    fn circulant_examples() {
        let mixed = circulant_density(&CirculantSpec::from_real(&[0.25, 0.0, 0.0, 0.0])).unwrap();
        assert_eq!(mixed.matrix(), &ComplexMatrix::identity(4).scale(0.25));

        let spec = CirculantSpec::from_real(&[0.25, 0.125, 0.0, 0.125]);
        let eig: Vec<f64> = spec.eigenvalues().iter().map(|z| z.re).collect();
        for (got, want) in eig.iter().zip([0.5, 0.25, 0.0, 0.25]) {
            assert!((got - want).abs() < 1e-15);
        }
        assert!(circulant_density(&spec).is_ok());

        let bad = CirculantSpec::from_real(&[0.25, 0.25, 0.0, 0.0]);
        assert!(matches!(circulant_density(&bad), Err(DensityError::HermiticityViolation { index: 1, .. })));
    }

    #[test]
    fn circulant_trace_and_psd_errors() {
        let trace = CirculantSpec::from_real(&[0.5, 0.0, 0.0, 0.0]);
        assert!(matches!(circulant_density(&trace), Err(DensityError::TraceViolation { .. })));
        let negative = CirculantSpec::from_real(&[0.25, 0.25, 0.0, 0.25]);
        assert!(matches!(circulant_density(&negative), Err(DensityError::NotPSD { .. })));
    }

    #[test]
    fn circulant_rows_shift_right() {
        let spec = CirculantSpec::new(vec![c(0.25), Complex64::new(0.1, 0.05), c(0.02), Complex64::new(0.1, -0.05)]);
        let m = spec.matrix();
        for r in 1..4 {
            for col in 0..4 {
                assert_eq!(m[(r, col)], m[(r - 1, (col + 3) % 4)]);
            }
        }
    }

    #[test]
    fn z2n_examples() {
        let f = GroupFunctionZ2n::new(2, vec![0.25, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(group_density_z2n(&f).unwrap().matrix(), &ComplexMatrix::identity(4).scale(0.25));

        let f = GroupFunctionZ2n::new(2, vec![0.25, 0.25, 0.0, 0.0]).unwrap();
        assert_eq!(f.eigenvalues(), vec![0.5, 0.0, 0.5, 0.0]);
        let rho = group_density_z2n(&f).unwrap();
        assert_eq!(rho.matrix()[(0, 1)], c(0.25));
        assert_eq!(rho.matrix()[(2, 3)], c(0.25));
        assert_eq!(rho.matrix()[(0, 2)], c(0.0));

        let f = GroupFunctionZ2n::new(2, vec![0.0, 0.25, 0.0, 0.0]).unwrap();
        assert!(matches!(group_density_z2n(&f), Err(DensityError::TraceViolation { .. })));
    }

    #[test]
    fn general_degree_condition_examples() {
        let entangled = density_of_graph(&graph(2, 2, &[((1, 1), (2, 2))])).unwrap();
        let report = degree_condition_general(&entangled);
        assert!(!report.holds);
        assert!(report.delta.iter().all(|z| z.norm() < 1e-15));
        let want = [0.5, -0.5, -0.5, 0.5];
        for (got, w) in report.delta_pt.iter().zip(want) {
            assert!((got - c(w)).norm() < 1e-15);
        }

        let mixed = DensityMatrix::new(ComplexMatrix::identity(4).scale(0.25), 2, 2).unwrap();
        assert!(degree_condition_general(&mixed).holds);

        let circ = circulant_density(&CirculantSpec::from_real(&[0.25, 0.125, 0.0, 0.125])).unwrap();
        assert!(degree_condition_general(&circ.with_split(2, 2).unwrap()).holds);
    }

    #[test]
    fn validation_rejects_bad_states() {
        let m = ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, -0.0]]).unwrap();
        assert!(DensityMatrix::new(m, 2, 1).is_ok());
        let m = ComplexMatrix::from_real_rows(&[vec![1.5, 0.0], vec![0.0, -0.5]]).unwrap();
        assert!(matches!(DensityMatrix::new(m, 2, 1), Err(DensityError::NotPSD { .. })));
        let m = ComplexMatrix::from_real_rows(&[vec![0.5, 0.1], vec![0.0, 0.5]]).unwrap();
        assert!(matches!(DensityMatrix::new(m, 2, 1), Err(DensityError::HermiticityViolation { index: 1, .. })));
        let m = ComplexMatrix::identity(2);
        assert!(matches!(DensityMatrix::new(m.clone(), 2, 1), Err(DensityError::TraceViolation { .. })));
        assert!(matches!(DensityMatrix::new(m, 3, 1), Err(DensityError::SplitMismatch { .. })));
    }

    #[test]
    fn complement_is_a_state() {
        let rho = density_of_graph(&graph(2, 2, &[((1, 1), (2, 2)), ((1, 2), (2, 1))])).unwrap();
        let comp = complement_density(&rho).unwrap();
        assert!(DensityMatrix::new(comp.matrix().clone(), 2, 2).is_ok());
    }

    #[test]
    fn json_round_trip() {
        let rho = density_of_graph(&graph(2, 2, &[((1, 1), (2, 2))])).unwrap();
        let back = DensityMatrix::from_json(&rho.to_json()).unwrap();
        assert_eq!(back, rho);
        let spec = CirculantSpec::from_real(&[0.25, 0.125, 0.0, 0.125]);
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(text, r#"{"first_row":[[0.25,0.0],[0.125,0.0],[0.0,0.0],[0.125,0.0]]}"#);
    }
}

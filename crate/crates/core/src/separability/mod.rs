//! Separability of graph densities and of the circulant and `Z₂ⁿ` families.
//!
//! The degree condition is decided in exact integers. When it fails, the
//! identity `L(G)^{Γ_B} = (Δ(G) − Δ(G^{Γ_B})) + L(G^{Γ_B})` yields an integer
//! vector with a negative quadratic form on `L(G)^{Γ_B}`, which certifies
//! entanglement without any floating point. Separable verdicts come with a
//! product decomposition built by one of the registered strategies and
//! checked by [`verify_decomposition`].

mod builders;
mod registry;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::density::{degree_condition_general, density_of_graph, DensityError, DensityMatrix};
use crate::graph::{BipartiteLabeledGraph, GraphError, Label};
use crate::matrix::{kron_vec, psd_threshold, vec_norm, ComplexMatrix, PSD_TOL};

pub use builders::{
    decompose_block_matching, decompose_circulant, decompose_nearest_point, decompose_perfect_matching, decompose_z2n,
    ZERO_WEIGHT_TOL,
};
pub use registry::{DecompositionInput, DecompositionStrategy, StrategyRegistry};

/// Reconstruction tolerance every builder must meet.
pub const RECONSTRUCTION_TOL: f64 = 1e-10;
/// Tolerance on `Σ w = 1` and on `‖a‖ = ‖b‖ = 1`.
pub const NORMALIZATION_TOL: f64 = 1e-12;
/// Separability is decided by positivity of the partial transpose up to
/// this dimension.
pub const PPT_COMPLETE_MAX_DIM: usize = 6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecomposeError {
    #[error("graph is not a nearest-point graph")]
    NotNearestPoint,
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("DegreeViolation at vertices {:?}", .0.vertices)]
    DegreeViolation(DegreeViolation),
    #[error("graph is not a perfect matching")]
    NotPerfectMatching,
    #[error("second factor has dimension {0}, expected 2")]
    WrongQ(usize),
    #[error("not block structured: {0}")]
    NotBlockStructured(String),
    #[error("not positive semidefinite: eigenvalue {min_eigenvalue:e}")]
    NotPSD { min_eigenvalue: f64 },
    #[error("split {p} x {q} does not match dimension {dim}")]
    SplitMismatch { p: usize, q: usize, dim: usize },
    #[error("decomposition is for {found:?}, state is {expected:?}")]
    DimensionMismatch { expected: (usize, usize), found: (usize, usize) },
    #[error("product dimension {0} exceeds the exact decision range")]
    DimensionNotSupported(usize),
    #[error("strategy `{strategy}` does not accept {input} input")]
    NotApplicable { strategy: &'static str, input: &'static str },
    #[error("unknown strategy `{0}`")]
    UnknownStrategy(String),
    #[error("internal: entangled edge without its partner: {0}")]
    PairingFailure(String),
    #[error("internal: reconstruction error {error:e} exceeds tolerance")]
    ReconstructionFailed { error: f64 },
    #[error(transparent)]
    Density(#[from] DensityError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl DecomposeError {
    /// Errors that can only come from a bug, never from bad input.
    pub fn is_internal(&self) -> bool {
        matches!(self, Self::PairingFailure(_) | Self::ReconstructionFailed { .. })
    }

    /// Variant name, used as the machine-readable error tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Self::NotNearestPoint => "NotNearestPoint",
            Self::EmptyGraph => "EmptyGraph",
            Self::DegreeViolation(_) => "DegreeViolation",
            Self::NotPerfectMatching => "NotPerfectMatching",
            Self::WrongQ(_) => "WrongQ",
            Self::NotBlockStructured(_) => "NotBlockStructured",
            Self::NotPSD { .. } => "NotPSD",
            Self::SplitMismatch { .. } => "SplitMismatch",
            Self::DimensionMismatch { .. } => "DimensionMismatch",
            Self::DimensionNotSupported(_) => "DimensionNotSupported",
            Self::NotApplicable { .. } => "NotApplicable",
            Self::UnknownStrategy(_) => "UnknownStrategy",
            Self::PairingFailure(_) => "PairingFailure",
            Self::ReconstructionFailed { .. } => "ReconstructionFailed",
            Self::Density(_) => "InvalidDensity",
            Self::Graph(_) => "InvalidGraph",
        }
    }
}

/// `w · P[a ⊗ b]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductTerm {
    pub w: f64,
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
}

impl ProductTerm {
    pub fn new(w: f64, a: Vec<Complex64>, b: Vec<Complex64>) -> Self {
        Self { w, a, b }
    }

    pub fn product_vector(&self) -> Vec<Complex64> {
        kron_vec(&self.a, &self.b)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparableDecomposition {
    pub p: usize,
    pub q: usize,
    pub terms: Vec<ProductTerm>,
}

impl SeparableDecomposition {
    /// `Σ w (aa†) ⊗ (bb†)`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.p * self.q;
        let mut out = ComplexMatrix::zeros(n);
        for t in &self.terms {
            let v = t.product_vector();
            if v.len() != n {
                continue;
            }
            for i in 0..n {
                if v[i] == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let vi = v[i] * t.w;
                for j in 0..n {
                    out[(i, j)] += vi * v[j].conj();
                }
            }
        }
        out
    }

    pub fn weight_sum(&self) -> f64 {
        self.terms.iter().map(|t| t.w).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub ok: bool,
    pub reconstruction_error: f64,
    pub weight_sum: f64,
    pub min_weight: f64,
    pub max_norm_error: f64,
    pub term_count: usize,
}

/// Checks positive weights summing to one, unit vectors of the right
/// lengths and a max-entry reconstruction error at most `tol`.
pub fn verify_decomposition(
    d: &SeparableDecomposition,
    rho: &DensityMatrix,
    tol: f64,
) -> Result<VerificationReport, DecomposeError> {
    if (d.p, d.q) != (rho.p(), rho.q()) {
        return Err(DecomposeError::DimensionMismatch { expected: (rho.p(), rho.q()), found: (d.p, d.q) });
    }
    let shapes_ok = d.terms.iter().all(|t| t.a.len() == d.p && t.b.len() == d.q);
    let max_norm_error =
        d.terms.iter().flat_map(|t| [vec_norm(&t.a), vec_norm(&t.b)]).map(|x| (x - 1.0).abs()).fold(0.0, f64::max);
    let min_weight = d.terms.iter().map(|t| t.w).fold(f64::INFINITY, f64::min);
    let weight_sum = d.weight_sum();
    let reconstruction_error = d.reconstruct().max_abs_diff(rho.matrix());
    let ok = shapes_ok
        && !d.terms.is_empty()
        && min_weight > 0.0
        && (weight_sum - 1.0).abs() <= NORMALIZATION_TOL
        && max_norm_error <= NORMALIZATION_TOL
        && reconstruction_error <= tol;
    Ok(VerificationReport {
        ok,
        reconstruction_error,
        weight_sum,
        min_weight: if d.terms.is_empty() { 0.0 } else { min_weight },
        max_norm_error,
        term_count: d.terms.len(),
    })
}

/// Failure of `Δ(G) = Δ(G^{Γ_B})` with an integer vector `χ` such that
/// `χᵀ L(G)^{Γ_B} χ = form_value < 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeViolation {
    /// Vertices where the degrees of `G` and `G^{Γ_B}` differ.
    pub vertices: Vec<Label>,
    pub witness: Vec<i64>,
    pub form_value: i64,
}

impl DegreeViolation {
    /// Recomputes the quadratic form on `L(G)^{Γ_B}` exactly.
    pub fn check(&self, g: &BipartiteLabeledGraph) -> bool {
        let lpt = g.laplacian().partial_transpose(g.p(), g.q()).expect("graph split");
        self.witness.len() == g.vertex_count()
            && lpt.quadratic_form(&self.witness) == self.form_value as i128
            && self.form_value < 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDegreeCondition {
    pub holds: bool,
    /// `Δ(G) − Δ(G^{Γ_B})` as a diagonal.
    pub diff: Vec<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<DegreeViolation>,
}

pub fn degree_condition_graph(g: &BipartiteLabeledGraph) -> GraphDegreeCondition {
    let pt = g.partial_transpose();
    let d_pt = pt.degrees();
    let diff: Vec<i64> = g.degrees().iter().zip(&d_pt).map(|(a, b)| a - b).collect();
    let holds = diff.iter().all(|&x| x == 0);
    let violation = (!holds).then(|| degree_witness(g, &diff, &d_pt));
    GraphDegreeCondition { holds, diff, violation }
}

/// With `b = D_ii < 0` and `d = deg_{G^Γ}(i)`, the vector `(d+b)·1 − b·e_i`
/// gives `−b²(d+b)` when `d + b > 0`, and `1 + e_i` gives `d + 3b`
/// otherwise. Both use `Σ D = 0` and `L(G^Γ)·1 = 0`.
fn degree_witness(g: &BipartiteLabeledGraph, diff: &[i64], d_pt: &[i64]) -> DegreeViolation {
    let vertices = diff.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, _)| g.label(i)).collect();
    let i = diff.iter().position(|&x| x < 0).expect("degree sums agree, so some difference is negative");
    let (b, d) = (diff[i], d_pt[i]);
    let n = diff.len();
    let (alpha, beta) = if d + b > 0 { (d + b, -b) } else { (1, 1) };
    let mut witness = vec![alpha; n];
    witness[i] += beta;
    let lpt = g.laplacian().partial_transpose(g.p(), g.q()).expect("graph split");
    let form_value = lpt.quadratic_form(&witness) as i64;
    debug_assert!(form_value < 0);
    DegreeViolation { vertices, witness, form_value }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PptReport {
    pub ppt: bool,
    pub min_eigenvalue: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_vector: Option<Vec<Complex64>>,
}

/// Positivity of `ρ^{Γ_B}` with threshold `−tol · max(1, ‖ρ^{Γ_B}‖_∞)`.
pub fn ppt_test(rho: &DensityMatrix, tol: f64) -> PptReport {
    let pt = rho.partial_transpose();
    let eig = pt.hermitian_eigen(f64::INFINITY).expect("tolerance disables the hermiticity guard");
    let min_eigenvalue = eig.min_eigenvalue();
    let ppt = min_eigenvalue >= -psd_threshold(&pt, tol);
    PptReport { ppt, min_eigenvalue, witness_vector: (!ppt).then(|| eig.vector(0)) }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    DegreeViolation(DegreeViolation),
    NegativeEigenvalue { value: f64, eigenvector: Vec<Complex64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    /// Positive partial transpose decides separability for `p·q ≤ 6`.
    PptComplete,
    /// A registered strategy produced a verified decomposition.
    Constructive { strategy: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Decision {
    Separable {
        provenance: Provenance,
        #[serde(skip_serializing_if = "Option::is_none")]
        decomposition: Option<SeparableDecomposition>,
    },
    Entangled {
        certificate: Certificate,
    },
    Undecided,
}

impl Decision {
    pub fn is_separable(&self) -> Option<bool> {
        match self {
            Decision::Separable { .. } => Some(true),
            Decision::Entangled { .. } => Some(false),
            Decision::Undecided => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparabilityVerdict {
    pub degree_condition: bool,
    pub ppt: bool,
    pub min_pt_eigenvalue: f64,
    pub decision: Decision,
}

/// Exact decision for `p·q ≤ 6`, where PPT is equivalent to separability.
pub fn decide_low_dim(rho: &DensityMatrix) -> Result<SeparabilityVerdict, DecomposeError> {
    if rho.dim() > PPT_COMPLETE_MAX_DIM {
        return Err(DecomposeError::DimensionNotSupported(rho.dim()));
    }
    let degree_condition = degree_condition_general(rho).holds;
    let ppt = ppt_test(rho, PSD_TOL);
    let decision = ppt_decision(&ppt);
    Ok(SeparabilityVerdict { degree_condition, ppt: ppt.ppt, min_pt_eigenvalue: ppt.min_eigenvalue, decision })
}

fn ppt_decision(ppt: &PptReport) -> Decision {
    match &ppt.witness_vector {
        None => Decision::Separable { provenance: Provenance::PptComplete, decomposition: None },
        Some(v) => Decision::Entangled {
            certificate: Certificate::NegativeEigenvalue { value: ppt.min_eigenvalue, eigenvector: v.clone() },
        },
    }
}

/// Full pipeline for a graph: exact degree condition, PPT, then a
/// constructive decomposition from the graph strategies in `registry`.
/// Falls back to the PPT decision in low dimension and to `Undecided`
/// above it. Internal strategy errors propagate.
pub fn decide_graph(
    g: &BipartiteLabeledGraph,
    registry: &StrategyRegistry,
) -> Result<SeparabilityVerdict, DecomposeError> {
    let rho = density_of_graph(g).map_err(|e| match e {
        DensityError::EmptyGraph => DecomposeError::EmptyGraph,
        other => other.into(),
    })?;
    let degree = degree_condition_graph(g);
    let ppt = ppt_test(&rho, PSD_TOL);
    let base = |decision| SeparabilityVerdict {
        degree_condition: degree.holds,
        ppt: ppt.ppt,
        min_pt_eigenvalue: ppt.min_eigenvalue,
        decision,
    };
    if let Some(v) = &degree.violation {
        return Ok(base(Decision::Entangled { certificate: Certificate::DegreeViolation(v.clone()) }));
    }
    if !ppt.ppt {
        return Ok(base(ppt_decision(&ppt)));
    }
    let input = DecompositionInput::Graph(g.clone());
    for strategy in registry.strategies() {
        if !strategy.accepts(&input) {
            continue;
        }
        match strategy.decompose(&input) {
            Ok(d) => {
                let provenance = Provenance::Constructive { strategy: strategy.name().to_string() };
                return Ok(base(Decision::Separable { provenance, decomposition: Some(d) }));
            }
            Err(e) if e.is_internal() => return Err(e),
            Err(_) => {}
        }
    }
    if rho.dim() <= PPT_COMPLETE_MAX_DIM {
        Ok(base(ppt_decision(&ppt)))
    } else {
        Ok(base(Decision::Undecided))
    }
}

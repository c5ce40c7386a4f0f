//! Dense complex and integer matrices sized for desk-scale quantum states.
//!
//! Storage is row-major. Nothing here tries to be a general linear-algebra
//! library: the operations are the ones needed for partial transposes,
//! positivity tests and separable decompositions of `n ≤ a few hundred`
//! dimensional states.

mod eigen;

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use eigen::EigenSystem;

/// Default relative tolerance for positivity tests.
pub const PSD_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatrixError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not Hermitian (max |A - A†| = {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("matrix rows have inconsistent lengths")]
    Ragged,
}

/// Square matrix of signed integers. Holds adjacency, degree and Laplacian
/// matrices so that combinatorial identities can be checked exactly.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntegerMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntegerMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0; n * n] }
    }

    pub fn from_diagonal(diag: &[i64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.n).map(|i| self[(i, i)]).collect()
    }

    pub fn row_sums(&self) -> Vec<i64> {
        self.data.chunks(self.n.max(1)).take(self.n).map(|r| r.iter().sum()).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Blockwise transpose of the `q × q` blocks, `n = p·q`.
    pub fn partial_transpose(&self, p: usize, q: usize) -> Result<Self, MatrixError> {
        check_split(self.n, p, q)?;
        let mut out = Self::zeros(self.n);
        for (r, c) in pt_index_pairs(p, q) {
            out.data[r] = self.data[c];
        }
        Ok(out)
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        ComplexMatrix { n: self.n, data: self.data.iter().map(|&x| Complex64::new(x as f64, 0.0)).collect() }
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.n.max(1)).take(self.n).map(<[i64]>::to_vec).collect()
    }

    /// Quadratic form `xᵀ A x` in exact integer arithmetic.
    pub fn quadratic_form(&self, x: &[i64]) -> i128 {
        assert_eq!(x.len(), self.n);
        let mut acc: i128 = 0;
        for i in 0..self.n {
            for j in 0..self.n {
                acc += x[i] as i128 * self[(i, j)] as i128 * x[j] as i128;
            }
        }
        acc
    }
}

impl Index<(usize, usize)> for IntegerMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for IntegerMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.n + j]
    }
}

impl Add for &IntegerMatrix {
    type Output = IntegerMatrix;
    fn add(self, rhs: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        IntegerMatrix { n: self.n, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &IntegerMatrix {
    type Output = IntegerMatrix;
    fn sub(self, rhs: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        IntegerMatrix { n: self.n, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

/// Dense square complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.n, self.n)?;
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n)
                .map(|j| {
                    let z = self[(i, j)];
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![Complex64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self, MatrixError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(MatrixError::Ragged);
        }
        Ok(Self::from_fn(n, |i, j| Complex64::new(rows[i][j], 0.0)))
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self, MatrixError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(MatrixError::Ragged);
        }
        Ok(Self::from_fn(n, |i, j| rows[i][j]))
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Rank-one projector `|v⟩⟨v|` (no normalization applied).
    pub fn outer(v: &[Complex64]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        self.data.chunks(self.n.max(1)).take(self.n).map(<[Complex64]>::to_vec).collect()
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.n).map(|i| self[(i, i)]).collect()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n, "dimension mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Maximum absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        self.data
            .chunks(self.n.max(1))
            .take(self.n)
            .map(|r| r.iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.n {
            for j in 0..=i {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.n, "dimension mismatch");
        self.data.chunks(self.n.max(1)).take(self.n).map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// Kronecker product with block structure `[A_ij · B]`.
    pub fn kron(&self, other: &Self) -> Self {
        let (m, k) = (self.n, other.n);
        Self::from_fn(m * k, |r, c| self[(r / k, c / k)] * other[(r % k, c % k)])
    }

    /// Partial transpose on the second factor: the matrix is viewed as
    /// `p × p` blocks of size `q × q` and every block is transposed in place.
    pub fn partial_transpose(&self, p: usize, q: usize) -> Result<Self, MatrixError> {
        check_split(self.n, p, q)?;
        let mut out = Self::zeros(self.n);
        for (r, c) in pt_index_pairs(p, q) {
            out.data[r] = self.data[c];
        }
        Ok(out)
    }

    /// Diagonal matrix of row sums, `Δ(M)_ii = Σ_k M_ik`.
    pub fn row_sum_diagonal(&self) -> Self {
        let sums: Vec<Complex64> = self.data.chunks(self.n.max(1)).take(self.n).map(|r| r.iter().sum()).collect();
        Self::from_diagonal(&sums)
    }

    pub fn hermitian_eigen(&self, tol: f64) -> Result<EigenSystem, MatrixError> {
        let deviation = self.hermiticity_deviation();
        if deviation > tol {
            return Err(MatrixError::NotHermitian { deviation });
        }
        Ok(eigen::jacobi_eigen(self))
    }

    /// Positive semidefiniteness with the relative threshold
    /// `λ_min ≥ -tol · max(1, ‖M‖_∞)`.
    pub fn is_psd(&self, tol: f64) -> Result<bool, MatrixError> {
        let eig = self.hermitian_eigen(tol)?;
        Ok(eig.min_eigenvalue() >= -psd_threshold(self, tol))
    }
}

/// Absolute negativity threshold used by [`ComplexMatrix::is_psd`].
pub fn psd_threshold(m: &ComplexMatrix, tol: f64) -> f64 {
    tol * m.inf_norm().max(1.0)
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        ComplexMatrix { n: self.n, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        ComplexMatrix { n: self.n, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

fn check_split(n: usize, p: usize, q: usize) -> Result<(), MatrixError> {
    if p * q != n {
        return Err(MatrixError::DimensionMismatch { expected: p * q, found: n });
    }
    Ok(())
}

/// `(destination, source)` flat indices realizing the blockwise transpose.
fn pt_index_pairs(p: usize, q: usize) -> impl Iterator<Item = (usize, usize)> {
    let n = p * q;
    (0..p).flat_map(move |bi| {
        (0..p).flat_map(move |bj| {
            (0..q).flat_map(move |r| {
                (0..q).map(move |c| {
                    let dst = (bi * q + r) * n + bj * q + c;
                    let src = (bi * q + c) * n + bj * q + r;
                    (dst, src)
                })
            })
        })
    })
}

/// Unitary Fourier matrix over `Z_n`: `U_jk = ω^{jk}/√n`, `ω = e^{2πi/n}`.
pub fn dft_matrix(n: usize) -> ComplexMatrix {
    assert!(n >= 1, "dft_matrix requires n >= 1");
    let norm = 1.0 / (n as f64).sqrt();
    ComplexMatrix::from_fn(n, |j, k| root_of_unity(n, (j * k) % n) * norm)
}

/// `e^{2πi k/n}`.
pub fn root_of_unity(n: usize, k: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * (k % n) as f64 / n as f64)
}

/// Sylvester–Hadamard unitary on `2^n` dimensions, the `n`-fold Kronecker
/// power of `(1/√2)[[1,1],[1,-1]]`. Entry `(x, y)` is `(-1)^{popcount(x & y)} / 2^{n/2}`.
pub fn hadamard_sylvester(n: u32) -> ComplexMatrix {
    let h = ComplexMatrix::from_real_rows(&[
        vec![std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2],
        vec![std::f64::consts::FRAC_1_SQRT_2, -std::f64::consts::FRAC_1_SQRT_2],
    ])
    .expect("square");
    (1..n).fold(h.clone(), |acc, _| acc.kron(&h))
}

pub fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `⟨u|v⟩`, conjugate-linear in the first argument.
pub fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// Tensor product of two vectors, first factor major.
pub fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

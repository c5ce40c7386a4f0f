use num_complex::Complex64;

use super::ComplexMatrix;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with matching orthonormal eigenvector
/// columns.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl EigenSystem {
    pub fn min_eigenvalue(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// Column `i` of the eigenvector matrix.
    pub fn vector(&self, i: usize) -> Vec<Complex64> {
        (0..self.vectors.dim()).map(|r| self.vectors[(r, i)]).collect()
    }

    /// `max_i ‖A v_i − λ_i v_i‖`.
    pub fn max_residual(&self, a: &ComplexMatrix) -> f64 {
        (0..self.values.len())
            .map(|i| {
                let v = self.vector(i);
                let av = a.mul_vec(&v);
                av.iter().zip(&v).map(|(x, y)| (x - y * self.values[i]).norm_sqr()).sum::<f64>().sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// `max |V†V − I|` entrywise.
    pub fn orthonormality_error(&self) -> f64 {
        let v = &self.vectors;
        (&v.adjoint() * v).max_abs_diff(&ComplexMatrix::identity(v.dim()))
    }
}

/// Cyclic Jacobi diagonalization of a Hermitian matrix. Each rotation first
/// removes the phase of the pivot, then applies a real Givens rotation.
pub(super) fn jacobi_eigen(m: &ComplexMatrix) -> EigenSystem {
    let n = m.dim();
    let mut a = m.clone();
    // Only the Hermitian part is diagonalized.
    for i in 0..n {
        a[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
        for j in 0..i {
            let z = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = z;
            a[(j, i)] = z.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();

    for _ in 0..MAX_SWEEPS {
        let off = off_diagonal_norm(&a);
        if off == 0.0 || off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&x, &y| diag[x].total_cmp(&diag[y]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, |r, c| v[(r, order[c])]);
    EigenSystem { values, vectors }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let z = a[(p, q)];
    let r = z.norm();
    if r <= f64::MIN_POSITIVE {
        return;
    }
    let phase = z / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * r);
    let t =
        if theta.abs() > 1e150 { 0.5 / theta } else { theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt()) };
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // G restricted to the (p, q) plane.
    let g00 = Complex64::new(c, 0.0);
    let g01 = Complex64::new(s, 0.0);
    let g10 = -phase.conj() * s;
    let g11 = phase.conj() * c;

    let n = a.dim();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g00 + akq * g10;
        a[(k, q)] = akp * g01 + akq * g11;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g00.conj() * apk + g10.conj() * aqk;
        a[(q, k)] = g01.conj() * apk + g11.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g00 + vkq * g10;
        v[(k, q)] = vkp * g01 + vkq * g11;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lcg_matrix(n: usize, seed: u64) -> ComplexMatrix {
        let mut state = seed;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let raw = ComplexMatrix::from_fn(n, |_, _| Complex64::new(next(), next()));
        (&raw + &raw.adjoint()).scale(0.5)
    }

    #[test]
    fn residuals_and_orthonormality_up_to_64() {
        for (n, seed) in [(1, 1), (2, 2), (3, 3), (7, 4), (16, 5), (33, 6), (64, 7)] {
            let m = lcg_matrix(n, seed);
            let eig = jacobi_eigen(&m);
            let norm = m.frobenius_norm().max(1.0);
            assert!(eig.max_residual(&m) <= 1e-10 * norm, "n={n}");
            assert!(eig.orthonormality_error() <= 1e-12, "n={n}");
            assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn degenerate_spectrum() {
        // L(cris-cross) = I − M has spectrum {0, 0, 2, 2}.
        let mut m = ComplexMatrix::identity(4);
        m[(0, 3)] = Complex64::new(-1.0, 0.0);
        m[(3, 0)] = Complex64::new(-1.0, 0.0);
        m[(1, 2)] = Complex64::new(-1.0, 0.0);
        m[(2, 1)] = Complex64::new(-1.0, 0.0);
        let eig = jacobi_eigen(&m);
        let expect = [0.0, 0.0, 2.0, 2.0];
        for (got, want) in eig.values.iter().zip(expect) {
            assert!((got - want).abs() < 1e-14);
        }
    }
}

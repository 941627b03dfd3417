//! Hermitian eigendecomposition and the spectral functions built on it.
//!
//! The solver is a cyclic complex Jacobi method. Matrices here are at most a
//! few dozen rows, where Jacobi is both accurate to working precision and
//! fast enough; no tridiagonal reduction is needed.

use num_complex::Complex;
use num_traits::Zero;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in descending order with matching orthonormal eigenvector
/// columns.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition<T> {
    eigenvalues: Vec<T>,
    eigenvectors: ComplexMatrix<T>,
}

impl<T: Real> SpectralDecomposition<T> {
    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &ComplexMatrix<T> {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, k: usize) -> Vec<Complex<T>> {
        self.eigenvectors.col(k)
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Rebuilds `∑ f(λ_k) v_k v_k†`.
    pub fn map_spectrum(&self, f: impl Fn(T) -> T) -> ComplexMatrix<T> {
        let n = self.dim();
        let v = &self.eigenvectors;
        let mapped: Vec<T> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, n, |r, c| {
            let mut acc = Complex::zero();
            for (k, &w) in mapped.iter().enumerate() {
                if w != T::zero() {
                    acc += v[(r, k)] * v[(c, k)].conj() * w;
                }
            }
            acc
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        self.map_spectrum(|l| l)
    }

    pub fn max_eigenvalue(&self) -> T {
        self.eigenvalues.first().copied().unwrap_or_else(T::zero)
    }

    /// Number of eigenvalues above `cutoff · λmax`.
    pub fn rank(&self) -> usize {
        let threshold = self.rank_threshold();
        self.eigenvalues.iter().filter(|&&l| l > threshold).count()
    }

    fn rank_threshold(&self) -> T {
        let lmax = self.max_eigenvalue();
        if lmax <= T::zero() {
            return T::infinity();
        }
        T::tolerances().cutoff * lmax
    }

    /// Largest deviation of `V†V` from the identity.
    pub fn orthonormality_defect(&self) -> T {
        let v = &self.eigenvectors;
        (&v.adjoint() * v).max_abs_diff(&ComplexMatrix::identity(self.dim()))
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input is symmetrised as `(M + M†)/2` before diagonalisation; inputs
/// whose anti-Hermitian part exceeds the Hermiticity tolerance are rejected.
pub fn hermitian_eigen<T: Real>(m: &ComplexMatrix<T>) -> Result<SpectralDecomposition<T>> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "eigendecomposition of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let scale = T::one().max(m.frobenius_norm());
    let defect = m.hermiticity_defect();
    if defect > T::tolerances().herm * scale {
        return Err(Error::InvalidState(format!(
            "matrix is not Hermitian (defect {defect})"
        )));
    }
    Ok(jacobi(m.hermitian_part()))
}

fn jacobi<T: Real>(mut a: ComplexMatrix<T>) -> SpectralDecomposition<T> {
    let n = a.rows();
    let mut v = ComplexMatrix::<T>::identity(n);
    let total = a.frobenius_norm();
    let stop = T::epsilon() * T::epsilon() * total * total;

    for _ in 0..MAX_SWEEPS {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off <= stop || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    for i in 0..n {
        a[(i, i)] = Complex::new(a[(i, i)].re, T::zero());
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(j, j)]
            .re
            .partial_cmp(&a[(i, i)].re)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |r, k| v[(r, order[k])]);
    SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

/// One two-sided Jacobi rotation annihilating `a[p][q]`.
///
/// The unitary is `J = D·R`, where `D` rotates the phase of `a[p][q]` to the
/// real axis and `R` is the real symmetric Jacobi rotation.
fn rotate<T: Real>(a: &mut ComplexMatrix<T>, v: &mut ComplexMatrix<T>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let g = apq.norm();
    if g == T::zero() {
        return;
    }
    let phase = (apq / g).conj();
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (g + g);
    let t = if theta.is_infinite() {
        T::zero()
    } else {
        let sgn = if theta >= T::zero() {
            T::one()
        } else {
            -T::one()
        };
        sgn / (theta.abs() + (theta * theta + T::one()).sqrt())
    };
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;

    let j_pp = Complex::new(c, T::zero());
    let j_pq = Complex::new(s, T::zero());
    let j_qp = phase * (-s);
    let j_qq = phase * c;

    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * j_pp + akq * j_qp;
        a[(k, q)] = akp * j_pq + akq * j_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = j_pp.conj() * apk + j_qp.conj() * aqk;
        a[(q, k)] = j_pq.conj() * apk + j_qq.conj() * aqk;
    }
    a[(p, q)] = Complex::zero();
    a[(q, p)] = Complex::zero();
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * j_pp + vkq * j_qp;
        v[(k, q)] = vkp * j_pq + vkq * j_qq;
    }
}

/// Clamps drift in `[-εpsd, 0)` to zero, rejecting anything more negative.
pub(crate) fn clamp_psd<T: Real>(spec: &SpectralDecomposition<T>) -> Result<Vec<T>> {
    let tol = T::tolerances().psd;
    spec.eigenvalues
        .iter()
        .map(|&l| {
            if l < -tol {
                Err(Error::InvalidState(format!("negative eigenvalue {l}")))
            } else {
                Ok(l.max(T::zero()))
            }
        })
        .collect()
}

/// Positive semidefinite square root.
pub fn matrix_sqrt<T: Real>(m: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let spec = hermitian_eigen(m)?;
    let clamped = clamp_psd(&spec)?;
    let spec = SpectralDecomposition {
        eigenvalues: clamped,
        eigenvectors: spec.eigenvectors,
    };
    Ok(spec.map_spectrum(|l| l.sqrt()))
}

/// Moore–Penrose pseudoinverse of a Hermitian positive semidefinite matrix.
///
/// Eigenvalues at or below `cutoff · λmax` are treated as zero.
pub fn pseudo_inverse<T: Real>(m: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let spec = hermitian_eigen(m)?;
    Ok(pseudo_inverse_from(&spec))
}

pub(crate) fn pseudo_inverse_from<T: Real>(spec: &SpectralDecomposition<T>) -> ComplexMatrix<T> {
    let threshold = spec.rank_threshold();
    spec.map_spectrum(|l| {
        if l > threshold {
            T::one() / l
        } else {
            T::zero()
        }
    })
}

/// Numerical rank of a Hermitian matrix, consistent with [`pseudo_inverse`].
pub fn hermitian_rank<T: Real>(m: &ComplexMatrix<T>) -> Result<usize> {
    Ok(hermitian_eigen(m)?.rank())
}

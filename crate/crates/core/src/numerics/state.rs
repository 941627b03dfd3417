use num_complex::Complex;

use super::eigen::{clamp_psd, hermitian_eigen, SpectralDecomposition};
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Validated density operator: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone)]
pub struct DensityMatrix<T> {
    matrix: ComplexMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates `m` and stores its Hermitian part.
    pub fn new(m: ComplexMatrix<T>) -> Result<Self> {
        let tol = T::tolerances();
        if !m.is_square() {
            return Err(Error::Dimension(format!(
                "density matrix must be square, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let defect = m.hermiticity_defect();
        if defect > tol.herm {
            return Err(Error::InvalidState(format!(
                "density matrix is not Hermitian (defect {defect})"
            )));
        }
        let trace = m.trace();
        if (trace.re - T::one()).abs() > tol.trace || trace.im.abs() > tol.trace {
            return Err(Error::InvalidState(format!("trace {trace} differs from 1")));
        }
        let matrix = m.hermitian_part();
        let spec = hermitian_eigen(&matrix)?;
        if let Some(&min) = spec.eigenvalues().last() {
            if min < -tol.psd {
                return Err(Error::InvalidState(format!(
                    "density matrix has negative eigenvalue {min}"
                )));
            }
        }
        Ok(Self { matrix })
    }

    /// Normalised projector onto `psi`.
    pub fn pure(psi: &[Complex<T>]) -> Result<Self> {
        let norm = psi.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr());
        if norm <= T::zero() {
            return Err(Error::InvalidState("zero vector".into()));
        }
        Self::new(ComplexMatrix::outer(psi).scale(T::one() / norm))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale(T::one() / T::from_usize_lossy(dim)),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.matrix
    }

    /// Spectrum with floating-point drift below zero clamped away.
    pub fn spectrum(&self) -> Result<Vec<T>> {
        clamp_psd(&self.spectral()?)
    }

    pub fn spectral(&self) -> Result<SpectralDecomposition<T>> {
        hermitian_eigen(&self.matrix)
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(self.spectral()?.rank())
    }
}

/// Probability vector with entries clamped to `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector<T> {
    values: Vec<T>,
}

impl<T: Real> ProbabilityVector<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        let tol = T::tolerances().prob;
        if values.is_empty() {
            return Err(Error::InvalidProbability("empty vector".into()));
        }
        let mut sum = T::zero();
        for &v in &values {
            if !v.is_finite() || v < -tol || v > T::one() + tol {
                return Err(Error::InvalidProbability(format!(
                    "entry {v} outside [0, 1]"
                )));
            }
            sum += v;
        }
        if (sum - T::one()).abs() > tol {
            return Err(Error::InvalidProbability(format!("entries sum to {sum}")));
        }
        let values = values
            .into_iter()
            .map(|v| v.max(T::zero()).min(T::one()))
            .collect();
        Ok(Self { values })
    }

    pub fn uniform(n: usize) -> Self {
        Self {
            values: vec![T::one() / T::from_usize_lossy(n); n],
        }
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::new(ComplexMatrix::<f64>::identity(2)).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[1.5, -0.5])).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::<f64>::zeros(2, 3)).is_err());
        let mut m = ComplexMatrix::from_real_diagonal(&[0.5, 0.5]);
        m[(0, 1)] = Complex::new(0.1, 0.0);
        assert!(DensityMatrix::new(m).is_err());
        let ok =
            DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[0.5, 0.5 + 1e-11])).unwrap();
        assert_eq!(ok.dim(), 2);
        assert_eq!(ok.rank().unwrap(), 2);
    }

    #[test]
    fn probability_vector_clamps_and_checks_sum() {
        let p = ProbabilityVector::new(vec![1.0 + 5e-10, -5e-10]).unwrap();
        assert_eq!(p.values(), &[1.0, 0.0]);
        assert!(ProbabilityVector::new(vec![0.5, 0.4]).is_err());
        assert!(ProbabilityVector::new(vec![1.2, -0.2]).is_err());
        assert!(ProbabilityVector::<f64>::new(vec![]).is_err());
    }
}

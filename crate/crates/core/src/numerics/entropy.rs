//! Entropies in bits. `0 · log₂ 0` is taken as zero by branching on the
//! argument, never by evaluating a limit.

use super::state::{DensityMatrix, ProbabilityVector};
use crate::error::{Error, Result};
use crate::scalar::Real;

#[inline]
pub(crate) fn plogp<T: Real>(x: T) -> T {
    if x <= T::zero() {
        T::zero()
    } else {
        x * x.log2()
    }
}

/// Shannon entropy of an already validated list of probabilities.
pub(crate) fn entropy_of<T: Real>(values: &[T]) -> T {
    let h = -values.iter().fold(T::zero(), |acc, &x| acc + plogp(x));
    h.max(T::zero())
}

pub fn shannon_entropy<T: Real>(p: &ProbabilityVector<T>) -> T {
    entropy_of(p.values())
}

pub fn von_neumann_entropy<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    Ok(entropy_of(&rho.spectrum()?))
}

pub fn binary_entropy<T: Real>(x: T) -> Result<T> {
    if !(T::zero()..=T::one()).contains(&x) {
        return Err(Error::Domain(format!(
            "binary entropy argument {x} outside [0, 1]"
        )));
    }
    Ok(-plogp(x) - plogp(T::one() - x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ComplexMatrix;

    #[test]
    fn von_neumann_examples() {
        let mixed = DensityMatrix::<f64>::maximally_mixed(2);
        assert!((von_neumann_entropy(&mixed).unwrap() - 1.0).abs() < 1e-14);
        let pure = DensityMatrix::<f64>::pure(&[
            num_complex::Complex::new(0.6, 0.0),
            num_complex::Complex::new(0.0, 0.8),
        ])
        .unwrap();
        assert!(von_neumann_entropy(&pure).unwrap().abs() < 1e-12);
        let rho = DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[0.9, 0.1])).unwrap();
        // mpmath, 30 digits
        assert!(f64::abs(von_neumann_entropy(&rho).unwrap() - 0.468_995_593_589_281_2) < 1e-14);
    }

    #[test]
    fn shannon_examples() {
        let det = ProbabilityVector::new(vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(shannon_entropy(&det), 0.0);
        let uni = ProbabilityVector::<f64>::uniform(4);
        assert!((shannon_entropy(&uni) - 2.0).abs() < 1e-15);
        let p = ProbabilityVector::new(vec![0.75, 0.25]).unwrap();
        assert!(f64::abs(shannon_entropy(&p) - 0.811_278_124_459_132_9) < 1e-14);
    }

    #[test]
    fn binary_examples() {
        assert_eq!(binary_entropy(0.0f64).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0f64).unwrap(), 0.0);
        assert!((binary_entropy(0.5f64).unwrap() - 1.0).abs() < 1e-15);
        assert!((binary_entropy(0.1892f64).unwrap() - 0.699_794_918_906_674_2).abs() < 1e-14);
        assert!(binary_entropy(1.1f64).is_err());
        assert!(binary_entropy(-0.1f64).is_err());
    }
}

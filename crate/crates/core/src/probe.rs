//! Bipartite probe states `σ = ∑ a_l |A_l⟩⟩⟨⟨A_l|` on reference ⊗ system.
//!
//! Reference and system share the dimension `d`. Every probe keeps the convex
//! decomposition it was built from, since the t-vector depends on it and not
//! only on `σ`.

use num_complex::Complex;
use num_traits::Zero;

use crate::channel::{check_grid, weyl_unitary};
use crate::error::{Error, Result};
use crate::numerics::{
    double_ket, double_ket_projector, operator_from_double_ket, partial_trace_reference,
    ComplexMatrix, DensityMatrix,
};
use crate::scalar::Real;

/// Weighted operators `(a_l, A_l)` with `∑ a_l Tr[A_l† A_l] = 1`.
#[derive(Debug, Clone)]
pub struct PureDecomposition<T> {
    terms: Vec<(T, ComplexMatrix<T>)>,
}

impl<T: Real> PureDecomposition<T> {
    pub fn new(terms: Vec<(T, ComplexMatrix<T>)>) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::InvalidState("empty decomposition".into()))?;
        let d = first.1.rows();
        let mut norm = T::zero();
        for (w, a) in &terms {
            if !a.is_square() || a.rows() != d {
                return Err(Error::Dimension(format!(
                    "decomposition operators must all be {d}x{d}"
                )));
            }
            if !w.is_finite() || *w < T::zero() {
                return Err(Error::InvalidState(format!("negative weight {w}")));
            }
            norm += *w * a.frobenius_norm().powi(2);
        }
        if (norm - T::one()).abs() > T::tolerances().prob {
            return Err(Error::InvalidState(format!(
                "decomposition normalisation ∑ a Tr[A†A] = {norm}"
            )));
        }
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[(T, ComplexMatrix<T>)] {
        &self.terms
    }

    pub fn dim(&self) -> usize {
        self.terms[0].1.rows()
    }

    pub fn assemble(&self) -> Result<ComplexMatrix<T>> {
        let d = self.dim();
        let mut sigma = ComplexMatrix::zeros(d * d, d * d);
        for (w, a) in &self.terms {
            sigma = &sigma + &double_ket_projector(a)?.scale(*w);
        }
        Ok(sigma)
    }

    /// `(∑ a_l A_l† A_l)^τ`.
    pub fn reduced_by_formula(&self) -> ComplexMatrix<T> {
        let d = self.dim();
        let mut acc = ComplexMatrix::zeros(d, d);
        for (w, a) in &self.terms {
            acc = &acc + &(&a.adjoint() * a).scale(*w);
        }
        acc.transpose()
    }
}

#[derive(Debug, Clone)]
pub struct BipartiteProbeState<T> {
    d: usize,
    sigma: DensityMatrix<T>,
    decomposition: PureDecomposition<T>,
    label: String,
}

impl<T: Real> BipartiteProbeState<T> {
    pub fn custom(decomposition: PureDecomposition<T>, label: impl Into<String>) -> Result<Self> {
        let sigma = DensityMatrix::new(decomposition.assemble()?)?;
        Ok(Self {
            d: decomposition.dim(),
            sigma,
            decomposition,
            label: label.into(),
        })
    }

    /// Probe from a bare density matrix on `d·d`, decomposed spectrally.
    pub fn from_density(sigma: DensityMatrix<T>, label: impl Into<String>) -> Result<Self> {
        let n = sigma.dim();
        let d = (n as f64).sqrt().round() as usize;
        if d * d != n {
            return Err(Error::Dimension(format!(
                "probe dimension {n} is not a square d·d"
            )));
        }
        let spec = sigma.spectral()?;
        let threshold = T::tolerances().cutoff * spec.max_eigenvalue();
        let mut terms = Vec::new();
        for (k, &lambda) in spec.eigenvalues().iter().enumerate() {
            if lambda > threshold {
                terms.push((lambda, operator_from_double_ket(&spec.eigenvector(k))?));
            }
        }
        let norm = terms.iter().fold(T::zero(), |acc, (w, _)| acc + *w);
        let terms = terms.into_iter().map(|(w, a)| (w / norm, a)).collect();
        let decomposition = PureDecomposition::new(terms)?;
        Self::custom(decomposition, label)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn sigma(&self) -> &DensityMatrix<T> {
        &self.sigma
    }

    pub fn decomposition(&self) -> &PureDecomposition<T> {
        &self.decomposition
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// `⟨⟨I|σ|I⟩⟩ / d`, the overlap with the maximally entangled state.
    pub fn fidelity(&self) -> T {
        let k = double_ket(&ComplexMatrix::<T>::identity(self.d)).expect("square identity");
        let s = self.sigma.matrix();
        let mut acc = Complex::<T>::zero();
        for (r, kr) in k.iter().enumerate() {
            for (c, kc) in k.iter().enumerate() {
                acc += kr.conj() * s[(r, c)] * kc;
            }
        }
        acc.re / T::from_usize_lossy(self.d)
    }

    /// `ρ = Tr_R[σ]`, cross-checked against `(∑ a_l A_l† A_l)^τ`.
    pub fn reduced_system_state(&self) -> Result<DensityMatrix<T>> {
        let direct = partial_trace_reference(self.sigma.matrix(), self.d, self.d)?;
        let formula = self.decomposition.reduced_by_formula();
        let gap = direct.max_abs_diff(&formula);
        if gap > T::tolerances().recon {
            return Err(Error::Consistency(format!(
                "reduced state routes disagree by {gap}"
            )));
        }
        DensityMatrix::new(direct)
    }
}

pub fn maximally_entangled_probe<T: Real>(d: usize) -> Result<BipartiteProbeState<T>> {
    if d < 2 {
        return Err(Error::Domain(format!("dimension {d} < 2")));
    }
    let a = ComplexMatrix::identity(d).scale(T::one() / T::from_usize_lossy(d).sqrt());
    let decomposition = PureDecomposition::new(vec![(T::one(), a)])?;
    BipartiteProbeState::custom(decomposition, format!("max_entangled(d={d})"))
}

/// `σ = (1/d) ∑ q_mn |U_mn⟩⟩⟨⟨U_mn|`, `q` row-major with index `m·d + n`.
pub fn bell_diagonal_probe<T: Real>(d: usize, q: &[T]) -> Result<BipartiteProbeState<T>> {
    if d < 2 {
        return Err(Error::Domain(format!("dimension {d} < 2")));
    }
    check_grid(d, q)?;
    let inv_sqrt_d = T::one() / T::from_usize_lossy(d).sqrt();
    let mut terms = Vec::new();
    for m in 0..d {
        for n in 0..d {
            let w = q[m * d + n];
            if w > T::zero() {
                terms.push((w, weyl_unitary(d, m, n)?.scale(inv_sqrt_d)));
            }
        }
    }
    let decomposition = PureDecomposition::new(terms)?;
    BipartiteProbeState::custom(decomposition, format!("bell_diagonal(d={d})"))
}

/// Maximally entangled state mixed with white noise at fidelity `F`.
pub fn isotropic_probe<T: Real>(d: usize, fidelity: T) -> Result<BipartiteProbeState<T>> {
    if d < 2 {
        return Err(Error::Domain(format!("dimension {d} < 2")));
    }
    let lower = T::one() / T::from_usize_lossy(d * d);
    let slack = T::tolerances().prob;
    if !fidelity.is_finite() || fidelity < lower - slack || fidelity > T::one() + slack {
        return Err(Error::Domain(format!(
            "fidelity {fidelity} outside [1/d², 1] for d = {d}"
        )));
    }
    let fidelity = fidelity.max(lower).min(T::one());
    let tail = (T::one() - fidelity) / T::from_usize_lossy(d * d - 1);
    let mut q = vec![tail; d * d];
    q[0] = fidelity;
    Ok(bell_diagonal_probe(d, &q)?.with_label(format!("isotropic(d={d},F={fidelity})")))
}

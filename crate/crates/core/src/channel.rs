//! Quantum channels in Kraus form and the Pauli/erasure families.

use num_complex::Complex;
use num_traits::One;

use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, DensityMatrix};
use crate::scalar::Real;

/// Completely positive trace-preserving map `ρ ↦ ∑ K ρ K†`.
#[derive(Debug, Clone)]
pub struct QuantumChannel<T> {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<ComplexMatrix<T>>,
    label: String,
}

impl<T: Real> QuantumChannel<T> {
    /// Validates shape agreement and `∑ K†K = I`.
    pub fn new(kraus: Vec<ComplexMatrix<T>>, label: impl Into<String>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidChannel("empty Kraus list".into()))?;
        let (dim_out, dim_in) = (first.rows(), first.cols());
        if kraus
            .iter()
            .any(|k| k.rows() != dim_out || k.cols() != dim_in)
        {
            return Err(Error::InvalidChannel(
                "Kraus operators differ in shape".into(),
            ));
        }
        let mut sum = ComplexMatrix::zeros(dim_in, dim_in);
        for k in &kraus {
            sum = &sum + &(&k.adjoint() * k);
        }
        let defect = sum.max_abs_diff(&ComplexMatrix::identity(dim_in));
        if defect > T::tolerances().tp {
            return Err(Error::InvalidChannel(format!(
                "not trace preserving (|∑K†K - I| = {defect})"
            )));
        }
        Ok(Self {
            dim_in,
            dim_out,
            kraus,
            label: label.into(),
        })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            dim_in: d,
            dim_out: d,
            kraus: vec![ComplexMatrix::identity(d)],
            label: "identity".into(),
        }
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn kraus(&self) -> &[ComplexMatrix<T>] {
        &self.kraus
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// `∑ K M K†` for an arbitrary operator on the input space.
    pub fn apply_operator(&self, m: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        if !m.is_square() || m.rows() != self.dim_in {
            return Err(Error::Dimension(format!(
                "channel expects dimension {}, got {}x{}",
                self.dim_in,
                m.rows(),
                m.cols()
            )));
        }
        let mut out = ComplexMatrix::zeros(self.dim_out, self.dim_out);
        for k in &self.kraus {
            out = &out + &k.sandwich(m);
        }
        Ok(out)
    }

    pub fn apply(&self, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
        DensityMatrix::new(self.apply_operator(rho.matrix())?)
    }

    /// `(I_R ⊗ E)` applied to an operator on `d_ref · dim_in`.
    pub fn apply_extended_operator(
        &self,
        m: &ComplexMatrix<T>,
        d_ref: usize,
    ) -> Result<ComplexMatrix<T>> {
        if d_ref == 0 || !m.is_square() || m.rows() != d_ref * self.dim_in {
            return Err(Error::Dimension(format!(
                "extended channel expects dimension {}·{}, got {}x{}",
                d_ref,
                self.dim_in,
                m.rows(),
                m.cols()
            )));
        }
        let id = ComplexMatrix::identity(d_ref);
        let n = d_ref * self.dim_out;
        let mut out = ComplexMatrix::zeros(n, n);
        for k in &self.kraus {
            out = &out + &id.kron(k).sandwich(m);
        }
        Ok(out)
    }

    pub fn apply_extended(
        &self,
        sigma: &DensityMatrix<T>,
        d_ref: usize,
    ) -> Result<DensityMatrix<T>> {
        DensityMatrix::new(self.apply_extended_operator(sigma.matrix(), d_ref)?)
    }
}

/// Weyl unitary `U_mn = ∑_k e^{2πi km/d} |k⟩⟨(k+n) mod d|`.
pub fn weyl_unitary<T: Real>(d: usize, m: usize, n: usize) -> Result<ComplexMatrix<T>> {
    if d == 0 || m >= d || n >= d {
        return Err(Error::Domain(format!(
            "Weyl indices ({m}, {n}) out of range for d = {d}"
        )));
    }
    let mut u = ComplexMatrix::zeros(d, d);
    for k in 0..d {
        u[(k, (k + n) % d)] = root_of_unity(d, k * m);
    }
    Ok(u)
}

/// `e^{2πi k/d}`, with `k` reduced mod `d` first so large exponents stay exact.
pub(crate) fn root_of_unity<T: Real>(d: usize, k: usize) -> Complex<T> {
    let k = k % d;
    if k == 0 {
        return Complex::one();
    }
    let angle = T::TAU() * T::from_usize_lossy(k) / T::from_usize_lossy(d);
    Complex::from_polar(T::one(), angle)
}

/// Probability grid `p[m][n]` of a Pauli channel.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliChannelParams<T> {
    d: usize,
    probs: Vec<T>,
}

impl<T: Real> PauliChannelParams<T> {
    /// `probs` is row-major, index `m·d + n`.
    pub fn new(d: usize, probs: Vec<T>) -> Result<Self> {
        check_grid(d, &probs)?;
        Ok(Self { d, probs })
    }

    pub fn depolarizing(d: usize, p: T) -> Result<Self> {
        if d < 2 {
            return Err(Error::Domain(format!("dimension {d} < 2")));
        }
        if !(T::zero()..=T::one()).contains(&p) {
            return Err(Error::Domain(format!(
                "depolarizing probability {p} outside [0, 1]"
            )));
        }
        let tail = p / T::from_usize_lossy(d * d - 1);
        let mut probs = vec![tail; d * d];
        probs[0] = T::one() - p;
        Self::new(d, probs)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn get(&self, m: usize, n: usize) -> T {
        self.probs[m * self.d + n]
    }
}

/// Validates a `d × d` probability grid.
pub(crate) fn check_grid<T: Real>(d: usize, probs: &[T]) -> Result<()> {
    if d == 0 || probs.len() != d * d {
        return Err(Error::Dimension(format!(
            "expected a {d}x{d} grid, got {} entries",
            probs.len()
        )));
    }
    let tol = T::tolerances().prob;
    if probs.iter().any(|&p| !p.is_finite() || p < T::zero()) {
        return Err(Error::Domain("grid entries must be nonnegative".into()));
    }
    let sum = probs.iter().fold(T::zero(), |a, &b| a + b);
    if (sum - T::one()).abs() > tol {
        return Err(Error::Domain(format!("grid sums to {sum}")));
    }
    Ok(())
}

pub fn pauli_channel<T: Real>(params: &PauliChannelParams<T>) -> Result<QuantumChannel<T>> {
    let d = params.d;
    let mut kraus = Vec::new();
    for m in 0..d {
        for n in 0..d {
            let p = params.get(m, n);
            if p > T::zero() {
                kraus.push(weyl_unitary(d, m, n)?.scale(p.sqrt()));
            }
        }
    }
    QuantumChannel::new(kraus, format!("pauli(d={d})"))
}

pub fn depolarizing_channel<T: Real>(d: usize, p: T) -> Result<QuantumChannel<T>> {
    let params = PauliChannelParams::depolarizing(d, p)?;
    Ok(pauli_channel(&params)?.with_label(format!("depolarizing(d={d},p={p})")))
}

/// Erasure channel on `ℂ^d`, output `ℂ^d ⊕ ℂ` with the flag at index `d`.
pub fn erasure_channel<T: Real>(d: usize, p: T) -> Result<QuantumChannel<T>> {
    if d == 0 {
        return Err(Error::Domain("dimension must be positive".into()));
    }
    if !(T::zero()..=T::one()).contains(&p) {
        return Err(Error::Domain(format!(
            "erasure probability {p} outside [0, 1]"
        )));
    }
    let keep = (T::one() - p).sqrt();
    let flip = p.sqrt();
    let mut kraus = Vec::with_capacity(d + 1);
    let mut embed = ComplexMatrix::zeros(d + 1, d);
    for i in 0..d {
        embed[(i, i)] = Complex::new(keep, T::zero());
    }
    kraus.push(embed);
    for i in 0..d {
        let mut k = ComplexMatrix::zeros(d + 1, d);
        k[(d, i)] = Complex::new(flip, T::zero());
        kraus.push(k);
    }
    QuantumChannel::new(kraus, format!("erasure(d={d},p={p})"))
}

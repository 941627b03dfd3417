//! The detectable capacity bound `Q_DET = S[E(ρ)] − H(p) − log₂ t·p`, the
//! exact single-use oracles it is checked against, closed forms for the
//! depolarizing and erasure families, and the coarse-graining optimiser.

use std::fmt;
use std::str::FromStr;

use crate::channel::QuantumChannel;
use crate::detection::{
    coarse_grain, compute_t_vector, outcome_probabilities, t_operator, Grouping, Povm, TVector,
};
use crate::error::{Error, Result};
use crate::numerics::{
    binary_entropy, double_ket_projector, entropy_of, hermitian_eigen, matrix_sqrt,
    shannon_entropy, von_neumann_entropy, ComplexMatrix, DensityMatrix, ProbabilityVector,
};
use crate::probe::BipartiteProbeState;
use crate::scalar::Real;

/// Outcome counts up to which every set partition is tried.
pub const EXHAUSTIVE_LIMIT: usize = 6;

/// Entropy exchange with the purification `|√(ρ^τ)⟩⟩`.
pub fn entropy_exchange<T: Real>(rho: &DensityMatrix<T>, channel: &QuantumChannel<T>) -> Result<T> {
    entropy_exchange_with_purification(rho, channel, &ComplexMatrix::identity(rho.dim()))
}

/// Entropy exchange with the purification `|V √(ρ^τ)⟩⟩` for a unitary `V` on
/// the reference. The value does not depend on `V`.
pub fn entropy_exchange_with_purification<T: Real>(
    rho: &DensityMatrix<T>,
    channel: &QuantumChannel<T>,
    v: &ComplexMatrix<T>,
) -> Result<T> {
    let d = rho.dim();
    if channel.dim_in() != d {
        return Err(Error::Dimension(format!(
            "state dimension {d} but channel input {}",
            channel.dim_in()
        )));
    }
    if !v.is_square() || v.rows() != d {
        return Err(Error::Dimension(format!(
            "purifying unitary must be {d}x{d}"
        )));
    }
    let root = matrix_sqrt(&rho.matrix().transpose())?;
    let purification = double_ket_projector(&(v * &root))?;
    let joint = channel.apply_extended_operator(&purification, d)?;
    let spec = hermitian_eigen(&joint)?;
    let weights: Vec<T> = spec
        .eigenvalues()
        .iter()
        .map(|&s| s.max(T::zero()))
        .collect();
    Ok(entropy_of(&weights))
}

/// `I_c(ρ, E) = S[E(ρ)] − S_e(ρ, E)`; may be negative.
pub fn coherent_information<T: Real>(
    rho: &DensityMatrix<T>,
    channel: &QuantumChannel<T>,
) -> Result<T> {
    let output = von_neumann_entropy(&channel.apply(rho)?)?;
    Ok(output - entropy_exchange(rho, channel)?)
}

/// `S_out − H(p) − log₂(t·p)`.
pub fn qdet_from_statistics<T: Real>(
    p: &ProbabilityVector<T>,
    t: &TVector<T>,
    output_entropy: T,
) -> Result<T> {
    if p.len() != t.len() {
        return Err(Error::Dimension(format!(
            "{} probabilities but {} t-values",
            p.len(),
            t.len()
        )));
    }
    let tp = t.dot(p);
    if tp.partial_cmp(&T::zero()) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::DegenerateMeasurement(
            tp.to_f64().unwrap_or(f64::NAN),
        ));
    }
    Ok(output_entropy - shannon_entropy(p) - tp.log2())
}

/// Everything that enters one certified bound.
#[derive(Debug, Clone)]
pub struct CertificationResult<T> {
    pub qdet: T,
    /// `S[E(ρ)]`
    pub output_entropy: T,
    /// `H(p)` of the (possibly merged) statistics
    pub prob_entropy: T,
    /// `log₂ t·p`
    pub log_tp: T,
    /// Lower bound on the private information; equal to `qdet`.
    pub private_lower: T,
    /// Lower bound on the entanglement-assisted classical capacity, `S(ρ) + qdet`.
    pub ea_classical_lower: T,
    /// `S(ρ)` of the reduced input.
    pub input_entropy: T,
    /// Exact `I_c(ρ, E)` from the model channel.
    pub coherent_information: T,
    pub grouping: Grouping,
    pub probabilities: ProbabilityVector<T>,
    pub t: TVector<T>,
    pub probe_label: String,
    pub channel_label: String,
    pub povm_label: String,
}

/// Runs the full pipeline for one probe, channel and measurement.
///
/// With `optimize` set, coarse-grainings of the outcomes are searched and the
/// best bound is returned together with its grouping.
pub fn certify<T: Real>(
    probe: &BipartiteProbeState<T>,
    channel: &QuantumChannel<T>,
    povm: &Povm<T>,
    optimize: bool,
) -> Result<CertificationResult<T>> {
    let p = outcome_probabilities(probe, channel, povm)?;
    let t = compute_t_vector(probe, povm)?;
    let rho = probe.reduced_system_state()?;
    let output_entropy = von_neumann_entropy(&channel.apply(&rho)?)?;
    let input_entropy = von_neumann_entropy(&rho)?;

    let grouping = if optimize {
        optimize_grouping(&p, &t, output_entropy)?.0
    } else {
        Grouping::singletons(p.len())
    };
    let (p, t) = coarse_grain(&p, &t, &grouping)?;
    let qdet = qdet_from_statistics(&p, &t, output_entropy)?;
    let prob_entropy = shannon_entropy(&p);
    let log_tp = t.dot(&p).log2();

    let ic = coherent_information(&rho, channel)?;
    if qdet > ic + T::tolerances().bound {
        return Err(Error::Consistency(format!(
            "certified bound {qdet} exceeds the coherent information {ic}"
        )));
    }

    Ok(CertificationResult {
        qdet,
        output_entropy,
        prob_entropy,
        log_tp,
        private_lower: qdet,
        ea_classical_lower: input_entropy + qdet,
        input_entropy,
        coherent_information: ic,
        grouping,
        probabilities: p,
        t,
        probe_label: probe.label().to_owned(),
        channel_label: channel.label().to_owned(),
        povm_label: povm.name().to_owned(),
    })
}

fn grouped_qdet<T: Real>(
    p: &ProbabilityVector<T>,
    t: &TVector<T>,
    output_entropy: T,
    grouping: &Grouping,
) -> Option<T> {
    let (pg, tg) = coarse_grain(p, t, grouping).ok()?;
    qdet_from_statistics(&pg, &tg, output_entropy).ok()
}

/// Best coarse-graining of the outcomes.
///
/// Exhaustive over all set partitions up to [`EXHAUSTIVE_LIMIT`] outcomes,
/// otherwise a greedy search that keeps merging the pair of groups with the
/// largest improvement. The trivial partition is always a candidate, so the
/// result is never below the unmerged bound.
pub fn optimize_grouping<T: Real>(
    p: &ProbabilityVector<T>,
    t: &TVector<T>,
    output_entropy: T,
) -> Result<(Grouping, T)> {
    let n = p.len();
    let trivial = Grouping::singletons(n);
    let mut best_q = qdet_from_statistics(p, t, output_entropy)?;
    let mut best = trivial;

    if n <= EXHAUSTIVE_LIMIT {
        for grouping in set_partitions(n) {
            if let Some(q) = grouped_qdet(p, t, output_entropy, &grouping) {
                if q > best_q {
                    best_q = q;
                    best = grouping;
                }
            }
        }
        return Ok((best, best_q));
    }

    loop {
        let groups = best.groups();
        let mut step: Option<(Grouping, T)> = None;
        for i in 0..groups.len() {
            for j in (i + 1)..groups.len() {
                let mut merged: Vec<Vec<usize>> = groups.to_vec();
                let taken = merged.remove(j);
                merged[i].extend(taken);
                let candidate = Grouping::new(merged, n)?;
                if let Some(q) = grouped_qdet(p, t, output_entropy, &candidate) {
                    if q > step.as_ref().map_or(best_q, |s| s.1) {
                        step = Some((candidate, q));
                    }
                }
            }
        }
        match step {
            Some((g, q)) => {
                best = g;
                best_q = q;
            }
            None => break,
        }
    }
    Ok((best.canonical(), best_q))
}

/// All set partitions of `{0..n}` via restricted growth strings.
pub fn set_partitions(n: usize) -> Vec<Grouping> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut code = vec![0usize; n];
    loop {
        let blocks = code.iter().max().map_or(0, |m| m + 1);
        let mut groups = vec![Vec::new(); blocks];
        for (i, &b) in code.iter().enumerate() {
            groups[b].push(i);
        }
        out.push(Grouping::new(groups, n).expect("restricted growth string is a partition"));

        // next restricted growth string
        let mut i = n - 1;
        loop {
            if i == 0 {
                return out;
            }
            let prefix_max = code[..i].iter().copied().max().unwrap_or(0);
            if code[i] <= prefix_max {
                code[i] += 1;
                for c in &mut code[i + 1..] {
                    *c = 0;
                }
                break;
            }
            i -= 1;
        }
    }
}

/// Intermediates of the Jensen step: conditional outcome weights per
/// eigenvector of the purified output, their row sums `r_i`, and `t_i`.
#[derive(Debug, Clone)]
pub struct JensenDiagnostic<T> {
    /// Eigenvalues `s_j` of the purified output above the rank cutoff.
    pub weights: Vec<T>,
    /// `p(i|j)`, indexed `[j][i]`.
    pub conditional: Vec<Vec<T>>,
    pub r: Vec<T>,
    pub t: Vec<T>,
    /// `∑_j s_j p(i|j)`, which must reproduce the measured statistics.
    pub reconstructed: Vec<T>,
}

/// Evaluates the conditional-probability decomposition of the statistics.
pub fn jensen_diagnostic<T: Real>(
    probe: &BipartiteProbeState<T>,
    channel: &QuantumChannel<T>,
    povm: &Povm<T>,
) -> Result<JensenDiagnostic<T>> {
    let d = probe.d();
    let dim_out = channel.dim_out();
    if channel.dim_in() != d || povm.dim_total() != d * dim_out {
        return Err(Error::Dimension(
            "probe, channel and POVM do not fit together".into(),
        ));
    }
    let rho = probe.reduced_system_state()?;
    let rho_t = rho.matrix().transpose();
    // Square root and its pseudoinverse on the same numerical support.
    let rho_spec = hermitian_eigen(&rho_t)?;
    let threshold = T::tolerances().cutoff * rho_spec.max_eigenvalue();
    let root = rho_spec.map_spectrum(|l| if l > threshold { l.sqrt() } else { T::zero() });
    let inv_root = rho_spec.map_spectrum(|l| {
        if l > threshold {
            T::one() / l.sqrt()
        } else {
            T::zero()
        }
    });
    let joint = channel.apply_extended_operator(&double_ket_projector(&root)?, d)?;
    let spec = hermitian_eigen(&joint)?;
    let cutoff = T::tolerances().cutoff * spec.max_eigenvalue();
    let id_out = ComplexMatrix::identity(dim_out);

    // M_i = ∑_l a_l (ρ^τ^{-1/2} A_l† ⊗ I) Π_i (A_l ρ^τ^{-1/2} ⊗ I)
    let lifts: Vec<ComplexMatrix<T>> = probe
        .decomposition()
        .terms()
        .iter()
        .map(|(_, a)| (&inv_root * &a.adjoint()).kron(&id_out))
        .collect();
    let conditional_ops: Vec<ComplexMatrix<T>> = povm
        .elements()
        .iter()
        .map(|pi| {
            let mut acc = ComplexMatrix::zeros(pi.rows(), pi.cols());
            for ((w, _), lift) in probe.decomposition().terms().iter().zip(&lifts) {
                acc = &acc + &lift.sandwich(pi).scale(*w);
            }
            acc
        })
        .collect();

    let mut weights = Vec::new();
    let mut conditional = Vec::new();
    for (j, &s) in spec.eigenvalues().iter().enumerate() {
        if s <= cutoff {
            continue;
        }
        let phi = spec.eigenvector(j);
        let row = conditional_ops
            .iter()
            .map(|m| {
                let mphi = m.apply(&phi);
                phi.iter()
                    .zip(&mphi)
                    .fold(T::zero(), |acc, (a, b)| acc + (a.conj() * b).re)
            })
            .collect::<Vec<T>>();
        weights.push(s);
        conditional.push(row);
    }
    let n = povm.len();
    let r = (0..n)
        .map(|i| conditional.iter().fold(T::zero(), |acc, row| acc + row[i]))
        .collect();
    let reconstructed = (0..n)
        .map(|i| {
            conditional
                .iter()
                .zip(&weights)
                .fold(T::zero(), |acc, (row, &s)| acc + s * row[i])
        })
        .collect();
    let (x, _) = t_operator(probe)?;
    let lifted = x.kron(&id_out);
    let t = povm
        .elements()
        .iter()
        .map(|e| lifted.trace_of_product(e).re)
        .collect();
    Ok(JensenDiagnostic {
        weights,
        conditional,
        r,
        t,
        reconstructed,
    })
}

fn check_prob<T: Real>(name: &str, x: T) -> Result<()> {
    if !(T::zero()..=T::one()).contains(&x) {
        return Err(Error::Domain(format!("{name} = {x} outside [0, 1]")));
    }
    Ok(())
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::Domain(format!("dimension {d} < 2")));
    }
    Ok(())
}

fn check_fidelity<T: Real>(d: usize, f: T) -> Result<()> {
    let lower = T::one() / T::from_usize_lossy(d * d);
    if !f.is_finite() || f < lower || f > T::one() {
        return Err(Error::Domain(format!("fidelity {f} outside [1/d², 1]")));
    }
    Ok(())
}

/// `log₂ d − H₂(p) − p log₂(d² − 1)`.
pub fn hashing_bound<T: Real>(d: usize, p: T) -> Result<T> {
    check_dim(d)?;
    check_prob("p", p)?;
    let d_t = T::from_usize_lossy(d);
    Ok(d_t.log2() - binary_entropy(p)? - p * T::from_usize_lossy(d * d - 1).log2())
}

/// Total weight outside the `(0,0)` Bell outcome for a depolarizing channel
/// probed with an isotropic state.
pub fn depolarizing_isotropic_error<T: Real>(d: usize, p: T, fidelity: T) -> Result<T> {
    check_dim(d)?;
    check_prob("p", p)?;
    check_fidelity(d, fidelity)?;
    let d2 = T::from_usize_lossy(d * d);
    let e =
        (d2 * (T::one() - fidelity * (T::one() - p)) + fidelity - p - T::one()) / (d2 - T::one());
    Ok(e.max(T::zero()).min(T::one()))
}

/// Closed-form bound for a depolarizing channel and an isotropic probe.
pub fn depolarizing_isotropic_qdet<T: Real>(d: usize, p: T, fidelity: T) -> Result<T> {
    hashing_bound(d, depolarizing_isotropic_error(d, p, fidelity)?)
}

/// `(1−2p) log₂ d − (1−p)[H₂(F) + (1−F) log₂(d² − 1)]`.
pub fn erasure_qdet_closed_form<T: Real>(d: usize, p: T, fidelity: T) -> Result<T> {
    check_dim(d)?;
    check_prob("p", p)?;
    check_fidelity(d, fidelity)?;
    let one = T::one();
    let two = one + one;
    let d_t = T::from_usize_lossy(d);
    let noise =
        binary_entropy(fidelity)? + (one - fidelity) * T::from_usize_lossy(d * d - 1).log2();
    Ok((one - two * p) * d_t.log2() - (one - p) * noise)
}

/// Quantum capacity of the erasure channel, `max(0, (1−2p) log₂ d)`.
pub fn erasure_exact_capacity<T: Real>(d: usize, p: T) -> Result<T> {
    check_dim(d)?;
    check_prob("p", p)?;
    let one = T::one();
    Ok(((one - (one + one) * p) * T::from_usize_lossy(d).log2()).max(T::zero()))
}

/// Channel families with a closed-form bound in `(p, F)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdFamily {
    Depolarizing,
    Erasure,
}

impl ThresholdFamily {
    pub fn closed_form<T: Real>(self, d: usize, p: T, fidelity: T) -> Result<T> {
        match self {
            Self::Depolarizing => depolarizing_isotropic_qdet(d, p, fidelity),
            Self::Erasure => erasure_qdet_closed_form(d, p, fidelity),
        }
    }

    /// Qubit threshold fidelity quoted in the literature for this family.
    pub fn reported_qubit_threshold(self) -> f64 {
        match self {
            Self::Depolarizing => 0.818,
            Self::Erasure => 0.811,
        }
    }
}

impl fmt::Display for ThresholdFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Depolarizing => "depolarizing",
            Self::Erasure => "erasure",
        })
    }
}

impl FromStr for ThresholdFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "depolarizing" => Ok(Self::Depolarizing),
            "erasure" => Ok(Self::Erasure),
            other => Err(Error::Domain(format!(
                "unsupported channel family '{other}'"
            ))),
        }
    }
}

const GRID_POINTS: usize = 2001;
const GOLDEN_TOL: f64 = 1e-8;
const BISECTION_TOL: f64 = 1e-9;

/// `max_p Q(p, F)` over `p ∈ [0, 1]`: grid scan, then golden-section
/// refinement around the best grid point. Returns `(p*, Q*)`.
pub fn max_over_p<T: Real>(family: ThresholdFamily, d: usize, fidelity: T) -> Result<(T, T)> {
    let f = |p: T| family.closed_form(d, p, fidelity);
    let step = T::one() / T::from_usize_lossy(GRID_POINTS - 1);
    let mut best = (T::zero(), f(T::zero())?);
    for k in 1..GRID_POINTS {
        let p = (T::from_usize_lossy(k) * step).min(T::one());
        let q = f(p)?;
        if q > best.1 {
            best = (p, q);
        }
    }
    let mut lo = (best.0 - step).max(T::zero());
    let mut hi = (best.0 + step).min(T::one());
    let inv_phi = T::lit((5f64.sqrt() - 1.0) / 2.0);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > T::lit(GOLDEN_TOL) {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1)?;
        }
    }
    let mid = (lo + hi) / (T::one() + T::one());
    let fm = f(mid)?;
    Ok(if fm > best.1 { (mid, fm) } else { best })
}

/// Largest fidelity at which no `p` yields a positive closed-form bound.
pub fn threshold_fidelity<T: Real>(family: ThresholdFamily, d: usize) -> Result<T> {
    check_dim(d)?;
    let g = |f: T| max_over_p(family, d, f).map(|(_, q)| q);
    let mut lo = T::one() / T::from_usize_lossy(d * d);
    let mut hi = T::one();
    if g(lo)? > T::zero() || g(hi)? <= T::zero() {
        return Err(Error::Consistency(format!(
            "no sign change of the {family} bound on [1/d², 1]"
        )));
    }
    let tol = T::lit(BISECTION_TOL).max(T::epsilon() * T::lit(16.0));
    while hi - lo > tol {
        let mid = (lo + hi) / (T::one() + T::one());
        if g(mid)? <= T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

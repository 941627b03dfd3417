//! Output measurements: POVM construction, outcome statistics, the
//! channel-independent t-vector and classical coarse-graining.

use num_complex::Complex;

use crate::channel::{root_of_unity, weyl_unitary, PauliChannelParams, QuantumChannel};
use crate::error::{Error, Result};
use crate::numerics::{
    double_ket_projector, hermitian_eigen, pseudo_inverse_from, ComplexMatrix, ProbabilityVector,
};
use crate::probe::BipartiteProbeState;
use crate::scalar::Real;

/// Positive operators on reference ⊗ output summing to the identity.
#[derive(Debug, Clone)]
pub struct Povm<T> {
    dim_total: usize,
    elements: Vec<ComplexMatrix<T>>,
    labels: Vec<String>,
    name: String,
}

impl<T: Real> Povm<T> {
    pub fn new(elements: Vec<ComplexMatrix<T>>, labels: Vec<String>) -> Result<Self> {
        let tol = T::tolerances();
        let first = elements
            .first()
            .ok_or_else(|| Error::InvalidPovm("no elements".into()))?;
        let dim_total = first.rows();
        if labels.len() != elements.len() {
            return Err(Error::InvalidPovm(format!(
                "{} labels for {} elements",
                labels.len(),
                elements.len()
            )));
        }
        let mut sum = ComplexMatrix::zeros(dim_total, dim_total);
        for (i, e) in elements.iter().enumerate() {
            if !e.is_square() || e.rows() != dim_total {
                return Err(Error::InvalidPovm(format!(
                    "element {i} has the wrong shape"
                )));
            }
            let spec = hermitian_eigen(e)
                .map_err(|_| Error::InvalidPovm(format!("element {i} is not Hermitian")))?;
            if let Some(&min) = spec.eigenvalues().last() {
                if min < -tol.psd.max(tol.herm) {
                    return Err(Error::InvalidPovm(format!(
                        "element {i} has negative eigenvalue {min}"
                    )));
                }
            }
            sum = &sum + e;
        }
        let defect = sum.max_abs_diff(&ComplexMatrix::identity(dim_total));
        if defect > tol.tp {
            return Err(Error::InvalidPovm(format!(
                "elements do not sum to the identity (defect {defect})"
            )));
        }
        let elements = elements.into_iter().map(|e| e.hermitian_part()).collect();
        Ok(Self {
            dim_total,
            elements,
            labels,
            name: "custom".into(),
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim_total(&self) -> usize {
        self.dim_total
    }

    pub fn elements(&self) -> &[ComplexMatrix<T>] {
        &self.elements
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

/// `Π_mn = |U_mn⟩⟩⟨⟨U_mn| / d`.
pub fn bell_projector<T: Real>(d: usize, m: usize, n: usize) -> Result<ComplexMatrix<T>> {
    let u = weyl_unitary(d, m, n)?;
    Ok(double_ket_projector(&u)?.scale(T::one() / T::from_usize_lossy(d)))
}

/// The same projector expanded in local operators,
/// `Π_mn = (1/d²) ∑_pq e^{2πi(np − mq)/d} U_pq ⊗ U*_pq`.
pub fn bell_projector_local_form<T: Real>(
    d: usize,
    m: usize,
    n: usize,
) -> Result<ComplexMatrix<T>> {
    if m >= d || n >= d {
        return Err(Error::Domain(format!(
            "Bell indices ({m}, {n}) out of range for d = {d}"
        )));
    }
    let mut acc = ComplexMatrix::zeros(d * d, d * d);
    for p in 0..d {
        for q in 0..d {
            let u = weyl_unitary::<T>(d, p, q)?;
            // np − mq, kept nonnegative modulo d
            let exponent = (n * p + d * d - m * q) % d;
            let phase = root_of_unity::<T>(d, exponent);
            acc = &acc + &u.kron(&u.conj()).scale_complex(phase);
        }
    }
    Ok(acc.scale(T::one() / T::from_usize_lossy(d * d)))
}

/// Generalised Bell measurement, outcomes ordered `m·d + n`.
pub fn bell_povm<T: Real>(d: usize) -> Result<Povm<T>> {
    if d < 2 {
        return Err(Error::Domain(format!("dimension {d} < 2")));
    }
    let mut elements = Vec::with_capacity(d * d);
    let mut labels = Vec::with_capacity(d * d);
    for m in 0..d {
        for n in 0..d {
            let proj = bell_projector(d, m, n)?;
            let local = bell_projector_local_form(d, m, n)?;
            let gap = proj.max_abs_diff(&local);
            if gap > T::tolerances().recon {
                return Err(Error::Consistency(format!(
                    "local expansion of Bell projector ({m},{n}) off by {gap}"
                )));
            }
            elements.push(proj);
            labels.push(format!("bell({m},{n})"));
        }
    }
    Ok(Povm::new(elements, labels)?.with_name(format!("bell(d={d})")))
}

/// Bell projectors on reference ⊗ (first `d` output levels) together with the
/// flag projectors `|i⟩⟨i| ⊗ |e⟩⟨e|`, on `d·(d+1)`.
pub fn erasure_povm<T: Real>(d: usize) -> Result<Povm<T>> {
    if d < 2 {
        return Err(Error::Domain(format!("dimension {d} < 2")));
    }
    let out = d + 1;
    let total = d * out;
    let embed = |i: usize| (i / d) * out + (i % d);
    let mut elements = Vec::with_capacity(d * d + d);
    let mut labels = Vec::with_capacity(d * d + d);
    for m in 0..d {
        for n in 0..d {
            let small = bell_projector::<T>(d, m, n)?;
            let mut big = ComplexMatrix::zeros(total, total);
            for r in 0..d * d {
                for c in 0..d * d {
                    big[(embed(r), embed(c))] = small[(r, c)];
                }
            }
            elements.push(big);
            labels.push(format!("bell({m},{n})"));
        }
    }
    for i in 0..d {
        let mut flag = ComplexMatrix::zeros(total, total);
        flag[(i * out + d, i * out + d)] = Complex::new(T::one(), T::zero());
        elements.push(flag);
        labels.push(format!("flag({i})"));
    }
    Ok(Povm::new(elements, labels)?.with_name(format!("erasure_adapted(d={d})")))
}

/// `p_i = Tr[(I_R ⊗ E)(σ) Π_i]`.
pub fn outcome_probabilities<T: Real>(
    probe: &BipartiteProbeState<T>,
    channel: &QuantumChannel<T>,
    povm: &Povm<T>,
) -> Result<ProbabilityVector<T>> {
    let d = probe.d();
    if channel.dim_in() != d {
        return Err(Error::Dimension(format!(
            "probe dimension {d} but channel input {}",
            channel.dim_in()
        )));
    }
    if povm.dim_total() != d * channel.dim_out() {
        return Err(Error::Dimension(format!(
            "POVM acts on {} but the output space is {}·{}",
            povm.dim_total(),
            d,
            channel.dim_out()
        )));
    }
    let out = channel.apply_extended(probe.sigma(), d)?;
    let values = povm
        .elements()
        .iter()
        .map(|e| out.matrix().trace_of_product(e).re)
        .collect();
    ProbabilityVector::new(values)
}

/// Bell statistics of a Pauli channel on a Bell-diagonal probe,
/// `p'_mn = ∑_ls p_ls q_{m−l, n+s}` with indices mod `d`.
pub fn pauli_bell_convolution<T: Real>(
    pauli: &PauliChannelParams<T>,
    q: &[T],
) -> Result<ProbabilityVector<T>> {
    let d = pauli.d();
    crate::channel::check_grid(d, q)?;
    let mut out = vec![T::zero(); d * d];
    for m in 0..d {
        for n in 0..d {
            let mut acc = T::zero();
            for l in 0..d {
                for s in 0..d {
                    acc += pauli.get(l, s) * q[((m + d - l) % d) * d + (n + s) % d];
                }
            }
            out[m * d + n] = acc;
        }
    }
    ProbabilityVector::new(out)
}

/// Channel-independent weights aligned with POVM outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct TVector<T> {
    values: Vec<T>,
}

impl<T: Real> TVector<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.is_empty() || values.iter().any(|&t| !t.is_finite() || t < T::zero()) {
            return Err(Error::Domain(
                "t-vector entries must be finite and nonnegative".into(),
            ));
        }
        Ok(Self { values })
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

    pub fn sum(&self) -> T {
        self.values.iter().fold(T::zero(), |a, &b| a + b)
    }

    pub fn dot(&self, p: &ProbabilityVector<T>) -> T {
        self.values
            .iter()
            .zip(p.values())
            .fold(T::zero(), |acc, (&t, &p)| acc + t * p)
    }
}

/// The reference-side operator `∑_l a_l A_l (ρ^τ)⁺ A_l†` and the rank of `ρ`.
pub fn t_operator<T: Real>(probe: &BipartiteProbeState<T>) -> Result<(ComplexMatrix<T>, usize)> {
    let rho = probe.reduced_system_state()?;
    let spec = hermitian_eigen(&rho.matrix().transpose())?;
    let pinv = pseudo_inverse_from(&spec);
    let d = probe.d();
    let mut x = ComplexMatrix::zeros(d, d);
    for (w, a) in probe.decomposition().terms() {
        x = &x + &a.sandwich(&pinv).scale(*w);
    }
    Ok((x, spec.rank()))
}

/// `t_i = Tr[(∑ a_l A_l (ρ^τ)⁺ A_l† ⊗ I_out) Π_i]`, checked against the sum
/// rule `∑ t_i = dim_out · rank ρ`.
pub fn compute_t_vector<T: Real>(
    probe: &BipartiteProbeState<T>,
    povm: &Povm<T>,
) -> Result<TVector<T>> {
    let d = probe.d();
    if !povm.dim_total().is_multiple_of(d) {
        return Err(Error::Dimension(format!(
            "POVM dimension {} is not a multiple of the reference dimension {d}",
            povm.dim_total()
        )));
    }
    let dim_out = povm.dim_total() / d;
    let (x, rank) = t_operator(probe)?;
    let lifted = x.kron(&ComplexMatrix::identity(dim_out));
    let values: Vec<T> = povm
        .elements()
        .iter()
        .map(|e| lifted.trace_of_product(e).re.max(T::zero()))
        .collect();
    let t = TVector::new(values)?;
    let expected = T::from_usize_lossy(dim_out * rank);
    let gap = (t.sum() - expected).abs();
    if gap > T::tolerances().sum_rule {
        return Err(Error::Consistency(format!(
            "t-vector sums to {} instead of {expected}",
            t.sum()
        )));
    }
    Ok(t)
}

/// Partition of outcome indices into merged groups.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Grouping {
    groups: Vec<Vec<usize>>,
}

impl Grouping {
    pub fn new(groups: Vec<Vec<usize>>, n: usize) -> Result<Self> {
        let mut seen = vec![false; n];
        for g in &groups {
            if g.is_empty() {
                return Err(Error::InvalidPartition("empty group".into()));
            }
            for &i in g {
                if i >= n {
                    return Err(Error::InvalidPartition(format!("index {i} out of range")));
                }
                if std::mem::replace(&mut seen[i], true) {
                    return Err(Error::InvalidPartition(format!("index {i} repeated")));
                }
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("index {i} missing")));
        }
        Ok(Self { groups })
    }

    pub fn singletons(n: usize) -> Self {
        Self {
            groups: (0..n).map(|i| vec![i]).collect(),
        }
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn is_trivial(&self) -> bool {
        self.groups.iter().all(|g| g.len() == 1)
    }

    /// Canonical form: members sorted, groups ordered by first member.
    pub fn canonical(mut self) -> Self {
        for g in &mut self.groups {
            g.sort_unstable();
        }
        self.groups.sort_unstable();
        self
    }

    /// Compact text form such as `{0,1}{2}{3}`.
    pub fn describe(&self) -> String {
        self.groups
            .iter()
            .map(|g| {
                let inner: Vec<String> = g.iter().map(usize::to_string).collect();
                format!("{{{}}}", inner.join(","))
            })
            .collect()
    }
}

/// Groupwise sums of `p` and `t`; both are linear in the merged elements.
pub fn coarse_grain<T: Real>(
    p: &ProbabilityVector<T>,
    t: &TVector<T>,
    grouping: &Grouping,
) -> Result<(ProbabilityVector<T>, TVector<T>)> {
    if p.len() != t.len() {
        return Err(Error::Dimension(format!(
            "{} probabilities but {} t-values",
            p.len(),
            t.len()
        )));
    }
    let grouping = Grouping::new(grouping.groups.clone(), p.len())?;
    let sum = |v: &[T], g: &[usize]| g.iter().fold(T::zero(), |a, &i| a + v[i]);
    let pm = grouping.groups.iter().map(|g| sum(p.values(), g)).collect();
    let tm = grouping.groups.iter().map(|g| sum(t.values(), g)).collect();
    Ok((ProbabilityVector::new(pm)?, TVector::new(tm)?))
}

/// Merges POVM elements according to `grouping`.
pub fn coarse_grain_povm<T: Real>(povm: &Povm<T>, grouping: &Grouping) -> Result<Povm<T>> {
    let grouping = Grouping::new(grouping.groups.clone(), povm.len())?;
    let n = povm.dim_total();
    let mut elements = Vec::new();
    let mut labels = Vec::new();
    for g in grouping.groups() {
        let mut acc = ComplexMatrix::zeros(n, n);
        for &i in g {
            acc = &acc + &povm.elements()[i];
        }
        elements.push(acc);
        labels.push(
            g.iter()
                .map(|&i| povm.labels()[i].as_str())
                .collect::<Vec<_>>()
                .join("+"),
        );
    }
    Ok(Povm::new(elements, labels)?.with_name(format!("{}/grouped", povm.name())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{depolarizing_channel, erasure_channel, pauli_channel};
    use crate::probe::{bell_diagonal_probe, isotropic_probe, maximally_entangled_probe};
    use crate::random::Ensemble;

    #[test]
    fn bell_povm_d2_is_orthonormal_basis() {
        let povm = bell_povm::<f64>(2).unwrap();
        assert_eq!(povm.len(), 4);
        for (i, a) in povm.elements().iter().enumerate() {
            for (j, b) in povm.elements().iter().enumerate() {
                let prod = a * b;
                let expected = if i == j {
                    a.clone()
                } else {
                    ComplexMatrix::zeros(4, 4)
                };
                assert!(prod.max_abs_diff(&expected) < 1e-15);
            }
        }
        assert!(bell_povm::<f64>(1).is_err());
    }

    #[test]
    fn local_form_matches_projector_d3() {
        for m in 0..3 {
            for n in 0..3 {
                let a = bell_projector::<f64>(3, m, n).unwrap();
                let b = bell_projector_local_form::<f64>(3, m, n).unwrap();
                assert!(a.max_abs_diff(&b) < 1e-10);
            }
        }
    }

    #[test]
    fn erasure_povm_structure() {
        let povm = erasure_povm::<f64>(2).unwrap();
        assert_eq!(povm.len(), 6);
        assert_eq!(povm.dim_total(), 6);
        for d in 2..=4 {
            let p = erasure_povm::<f64>(d).unwrap();
            assert_eq!(p.len(), d * d + d);
            let total = p
                .elements()
                .iter()
                .fold(ComplexMatrix::zeros(d * (d + 1), d * (d + 1)), |a, e| {
                    &a + e
                });
            assert!(total.max_abs_diff(&ComplexMatrix::identity(d * (d + 1))) < 1e-10);
        }
    }

    #[test]
    fn povm_validation() {
        let half = ComplexMatrix::<f64>::identity(2).scale(0.5);
        assert!(Povm::new(vec![half.clone()], vec!["a".into()]).is_err());
        assert!(Povm::new(vec![half.clone(), half.clone()], vec!["a".into()]).is_err());
        let neg = ComplexMatrix::from_real_diagonal(&[1.5, 1.0]);
        let comp = ComplexMatrix::from_real_diagonal(&[-0.5, 0.0]);
        assert!(Povm::new(vec![neg, comp], vec!["a".into(), "b".into()]).is_err());
        assert!(Povm::<f64>::new(vec![], vec![]).is_err());
        assert!(Povm::new(vec![half.clone(), half], vec!["a".into(), "b".into()]).is_ok());
    }

    #[test]
    fn bell_state_in_bell_basis_is_deterministic() {
        let probe = maximally_entangled_probe::<f64>(2).unwrap();
        let p = outcome_probabilities(&probe, &QuantumChannel::identity(2), &bell_povm(2).unwrap())
            .unwrap();
        assert!((p.values()[0] - 1.0).abs() < 1e-15);
        assert!(p.values()[1..].iter().all(|&x| x.abs() < 1e-15));
    }

    #[test]
    fn depolarizing_bell_statistics() {
        for d in [2, 3] {
            let probe = maximally_entangled_probe::<f64>(d).unwrap();
            let povm = bell_povm(d).unwrap();
            for p in [0.0, 0.1, 0.37] {
                let stats =
                    outcome_probabilities(&probe, &depolarizing_channel(d, p).unwrap(), &povm)
                        .unwrap();
                assert!((stats.values()[0] - (1.0 - p)).abs() < 1e-14);
                let tail = p / (d * d - 1) as f64;
                assert!(stats.values()[1..]
                    .iter()
                    .all(|&x| (x - tail).abs() < 1e-14));
            }
        }
    }

    #[test]
    fn erasure_isotropic_statistics() {
        let (p, f) = (0.3, 0.85);
        let stats = outcome_probabilities(
            &isotropic_probe(2, f).unwrap(),
            &erasure_channel(2, p).unwrap(),
            &erasure_povm(2).unwrap(),
        )
        .unwrap();
        let v = stats.values();
        assert!(f64::abs(v[0] - (1.0 - p) * f) < 1e-14);
        for &x in &v[1..4] {
            assert!(f64::abs(x - (1.0 - p) * (1.0 - f) / 3.0) < 1e-14);
        }
        for &x in &v[4..] {
            assert!(f64::abs(x - p / 2.0) < 1e-14);
        }
    }

    #[test]
    fn dimension_mismatches_are_reported() {
        let probe = maximally_entangled_probe::<f64>(2).unwrap();
        let bell3 = bell_povm::<f64>(3).unwrap();
        assert!(matches!(
            outcome_probabilities(&probe, &QuantumChannel::identity(2), &bell3),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            outcome_probabilities(&probe, &QuantumChannel::identity(3), &bell3),
            Err(Error::Dimension(_))
        ));
        assert!(compute_t_vector(&isotropic_probe(2, 0.9).unwrap(), &bell3).is_err());
    }

    /// Direct O(d⁴) double loop, written independently of the library routine.
    fn brute_convolution(d: usize, p: &[f64], q: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; d * d];
        for l in 0..d {
            for s in 0..d {
                for a in 0..d {
                    for b in 0..d {
                        // q_{a,b} contributes to (m, n) = (a + l, b − s)
                        let m = (a + l) % d;
                        let n = (b + d - s) % d;
                        out[m * d + n] += p[l * d + s] * q[a * d + b];
                    }
                }
            }
        }
        out
    }

    #[test]
    fn convolution_examples() {
        let mut ens = Ensemble::new(37);
        for d in [2, 3] {
            let probs = ens.probabilities(d * d, false);
            let params = PauliChannelParams::new(d, probs.clone()).unwrap();
            let mut delta = vec![0.0; d * d];
            delta[0] = 1.0;
            let same = pauli_bell_convolution(&params, &delta).unwrap();
            // A point mass at the origin reflects the second index.
            for (k, a) in same.values().iter().enumerate() {
                let b = probs[(k / d) * d + (d - k % d) % d];
                assert!((a - b).abs() < 1e-15);
            }
            let q = ens.probabilities(d * d, true);
            let conv = pauli_bell_convolution(&params, &q).unwrap();
            for (a, b) in conv.values().iter().zip(brute_convolution(d, &probs, &q)) {
                assert!((a - b).abs() < 1e-14);
            }
            let measured = outcome_probabilities(
                &bell_diagonal_probe(d, &q).unwrap(),
                &pauli_channel(&params).unwrap(),
                &bell_povm(d).unwrap(),
            )
            .unwrap();
            for (a, b) in conv.values().iter().zip(measured.values()) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn depolarizing_isotropic_convolution_head() {
        let (d, p, f) = (3usize, 0.2, 0.9);
        let params = PauliChannelParams::depolarizing(d, p).unwrap();
        let tail = (1.0 - f) / (d * d - 1) as f64;
        let mut q = vec![tail; d * d];
        q[0] = f;
        let conv = pauli_bell_convolution(&params, &q).unwrap();
        let expected = (1.0 - p) * f + p * (1.0 - f) / (d * d - 1) as f64;
        assert!((conv.values()[0] - expected).abs() < 1e-15);
    }

    #[test]
    fn t_vector_special_cases() {
        let mut ens = Ensemble::new(41);
        // Bell-diagonal probe, Bell POVM: t_i = 1.
        let t =
            compute_t_vector(&isotropic_probe(3, 0.7).unwrap(), &bell_povm(3).unwrap()).unwrap();
        assert!(t.values().iter().all(|&x| f64::abs(x - 1.0) < 1e-12));
        // Isotropic probe, erasure POVM: all ones.
        let t =
            compute_t_vector(&isotropic_probe(2, 0.9).unwrap(), &erasure_povm(2).unwrap()).unwrap();
        assert!(t.values().iter().all(|&x| f64::abs(x - 1.0) < 1e-12));
        // Invertible pure probe: t_i = Tr[Π_i].
        let a = ens.ginibre(2, 2);
        let a = a.scale(1.0 / a.frobenius_norm());
        let probe = BipartiteProbeState::custom(
            crate::probe::PureDecomposition::new(vec![(1.0, a)]).unwrap(),
            "pure",
        )
        .unwrap();
        let povm = ens.povm(4, 5, 2);
        let t = compute_t_vector(&probe, &povm).unwrap();
        for (ti, e) in t.values().iter().zip(povm.elements()) {
            assert!((ti - e.trace().re).abs() < 1e-9);
        }
    }

    #[test]
    fn coarse_grain_examples() {
        let p = ProbabilityVector::new(vec![0.7, 0.1, 0.1, 0.1]).unwrap();
        let t = TVector::new(vec![1.0, 1.0, 1.0, 1.0]).unwrap();
        let (p1, t1) = coarse_grain(&p, &t, &Grouping::singletons(4)).unwrap();
        assert_eq!((p1, t1), (p.clone(), t.clone()));
        let all = Grouping::new(vec![vec![0, 1, 2, 3]], 4).unwrap();
        let (p2, t2) = coarse_grain(&p, &t, &all).unwrap();
        assert!(f64::abs(p2.values()[0] - 1.0) < 1e-15 && p2.len() == 1);
        assert_eq!(t2.values(), &[4.0]);
        let tail = Grouping::new(vec![vec![0], vec![1, 2, 3]], 4).unwrap();
        let (p3, _) = coarse_grain(&p, &t, &tail).unwrap();
        assert!(f64::abs(p3.values()[0] - 0.7) < 1e-15 && f64::abs(p3.values()[1] - 0.3) < 1e-15);

        assert!(Grouping::new(vec![vec![0, 1], vec![1, 2, 3]], 4).is_err());
        assert!(Grouping::new(vec![vec![0, 1], vec![3]], 4).is_err());
        assert!(Grouping::new(vec![vec![0, 1, 2, 3, 4]], 4).is_err());
        assert!(Grouping::new(vec![vec![0, 1, 2, 3], vec![]], 4).is_err());
    }

    #[test]
    fn merged_povm_reproduces_merged_statistics() {
        let mut ens = Ensemble::new(43);
        let probe = ens.probe(2, 3, 2);
        let ch = ens.channel(2, 2, 2);
        let povm = ens.povm(4, 5, 1);
        let grouping = Grouping::new(vec![vec![0, 3], vec![1], vec![2, 4]], 5).unwrap();
        let p = outcome_probabilities(&probe, &ch, &povm).unwrap();
        let t = compute_t_vector(&probe, &povm).unwrap();
        let (pg, tg) = coarse_grain(&p, &t, &grouping).unwrap();
        let merged = coarse_grain_povm(&povm, &grouping).unwrap();
        let pm = outcome_probabilities(&probe, &ch, &merged).unwrap();
        let tm = compute_t_vector(&probe, &merged).unwrap();
        for (a, b) in pg.values().iter().zip(pm.values()) {
            assert!((a - b).abs() < 1e-12);
        }
        for (a, b) in tg.values().iter().zip(tm.values()) {
            assert!((a - b).abs() < 1e-10);
        }
        assert_eq!(merged.labels()[0], "rnd0+rnd3");
    }
}

//! Finite-shot emulation of the measurement.
//!
//! Random source: ChaCha20 (RFC 8439 block function, 20 rounds) as provided by
//! `rand_chacha`, seeded through `SeedableRng::seed_from_u64`, which expands
//! the 64-bit seed with PCG32. Each shot draws one `u64`, keeps the top 53
//! bits as a double `u ∈ [0, 1)`, and selects the first outcome whose
//! cumulative probability exceeds `u`. Outcomes with zero probability are
//! never selected.

use rand_chacha::ChaCha20Rng;
use rand_core::SeedableRng;

use crate::certification::qdet_from_statistics;
use crate::detection::TVector;
use crate::error::{Error, Result};
use crate::numerics::ProbabilityVector;
use crate::random::unit_f64;

/// Counts per outcome from one emulated run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShotRecord {
    pub counts: Vec<u64>,
    pub shots: u64,
    pub seed: u64,
}

impl ShotRecord {
    pub fn frequencies(&self) -> Result<ProbabilityVector<f64>> {
        if self.shots == 0 {
            return Err(Error::Domain("record holds no shots".into()));
        }
        let total: u64 = self.counts.iter().sum();
        if total != self.shots {
            return Err(Error::Consistency(format!(
                "counts sum to {total}, expected {}",
                self.shots
            )));
        }
        let n = self.shots as f64;
        ProbabilityVector::new(self.counts.iter().map(|&c| c as f64 / n).collect())
    }
}

/// SplitMix64 finaliser.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-grid-point seed, `splitmix64(seed ⊕ splitmix64(index))`.
pub fn point_seed(seed: u64, index: usize) -> u64 {
    splitmix64(seed ^ splitmix64(index as u64))
}

/// Multinomial draw of `shots` outcomes from `p`.
pub fn sample_outcomes(p: &ProbabilityVector<f64>, shots: u64, seed: u64) -> Result<ShotRecord> {
    if shots < 1 {
        return Err(Error::Domain("at least one shot is required".into()));
    }
    let probs = p.values();
    let mut cumulative = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for &x in probs {
        acc += x;
        cumulative.push(acc);
    }
    let last_support = probs
        .iter()
        .rposition(|&x| x > 0.0)
        .expect("a probability vector has positive mass");

    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; probs.len()];
    for _ in 0..shots {
        let u = unit_f64(&mut rng);
        let k = cumulative
            .iter()
            .zip(probs)
            .position(|(&c, &x)| u < c && x > 0.0)
            .unwrap_or(last_support);
        counts[k] += 1;
    }
    Ok(ShotRecord {
        counts,
        shots,
        seed,
    })
}

/// Plug-in estimate of the bound from empirical frequencies.
///
/// The empirical entropy underestimates `H(p)`, so at low shot counts the
/// estimate is biased upwards.
pub fn estimate_qdet(record: &ShotRecord, t: &TVector<f64>, output_entropy: f64) -> Result<f64> {
    if record.counts.len() != t.len() {
        return Err(Error::Dimension(format!(
            "{} outcome counts but {} t-values",
            record.counts.len(),
            t.len()
        )));
    }
    qdet_from_statistics(&record.frequencies()?, t, output_entropy)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_distribution() {
        let p = ProbabilityVector::new(vec![1.0, 0.0]).unwrap();
        let r = sample_outcomes(&p, 1000, 3).unwrap();
        assert_eq!(r.counts, vec![1000, 0]);
        let p = ProbabilityVector::new(vec![0.0, 1.0, 0.0]).unwrap();
        assert_eq!(sample_outcomes(&p, 77, 3).unwrap().counts, vec![0, 77, 0]);
    }

    #[test]
    fn same_seed_same_counts() {
        let p = ProbabilityVector::new(vec![0.2, 0.3, 0.5]).unwrap();
        let a = sample_outcomes(&p, 10_000, 99).unwrap();
        let b = sample_outcomes(&p, 10_000, 99).unwrap();
        assert_eq!(a, b);
        let c = sample_outcomes(&p, 10_000, 100).unwrap();
        assert_ne!(a.counts, c.counts);
    }

    #[test]
    fn fair_coin_concentrates() {
        let p = ProbabilityVector::new(vec![0.5, 0.5]).unwrap();
        let r = sample_outcomes(&p, 1_000_000, 42).unwrap();
        for &c in &r.counts {
            assert!((c as f64 / 1e6 - 0.5).abs() < 0.005);
        }
    }

    #[test]
    fn rejects_zero_shots_and_misaligned_t() {
        let p = ProbabilityVector::new(vec![0.5, 0.5]).unwrap();
        assert!(sample_outcomes(&p, 0, 1).is_err());
        let r = sample_outcomes(&p, 10, 1).unwrap();
        let t = TVector::new(vec![1.0; 3]).unwrap();
        assert!(estimate_qdet(&r, &t, 1.0).is_err());
        let empty = ShotRecord {
            counts: vec![0, 0],
            shots: 0,
            seed: 0,
        };
        assert!(estimate_qdet(&empty, &TVector::new(vec![1.0; 2]).unwrap(), 1.0).is_err());
    }

    #[test]
    fn exact_frequencies_give_exact_bound() {
        let record = ShotRecord {
            counts: vec![900, 50, 25, 25],
            shots: 1000,
            seed: 0,
        };
        let t = TVector::new(vec![1.0; 4]).unwrap();
        let p = ProbabilityVector::new(vec![0.9, 0.05, 0.025, 0.025]).unwrap();
        let exact = qdet_from_statistics(&p, &t, 1.0).unwrap();
        assert!((estimate_qdet(&record, &t, 1.0).unwrap() - exact).abs() < 1e-15);
    }

    #[test]
    fn point_seeds_differ() {
        let seeds: Vec<u64> = (0..100).map(|i| point_seed(42, i)).collect();
        let mut uniq = seeds.clone();
        uniq.sort_unstable();
        uniq.dedup();
        assert_eq!(uniq.len(), seeds.len());
    }
}

//! Seeded random ensembles of matrices, states, channels, probes and POVMs.
//!
//! Used by the property and acceptance tests; everything is `f64` and driven
//! by the same ChaCha20 stream as the shot sampler.

use num_complex::Complex;
use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use crate::channel::QuantumChannel;
use crate::detection::Povm;
use crate::numerics::{hermitian_eigen, ComplexMatrix, DensityMatrix};
use crate::probe::{BipartiteProbeState, PureDecomposition};

/// Uniform double in `[0, 1)` built from the top 53 bits of one draw.
pub(crate) fn unit_f64(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

pub struct Ensemble {
    rng: ChaCha20Rng,
}

impl Ensemble {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    pub fn uniform(&mut self) -> f64 {
        unit_f64(&mut self.rng)
    }

    pub fn index(&mut self, n: usize) -> usize {
        ((self.uniform() * n as f64) as usize).min(n - 1)
    }

    /// Standard normal via Box–Muller.
    pub fn normal(&mut self) -> f64 {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }

    /// Matrix of i.i.d. standard complex Gaussians.
    pub fn ginibre(&mut self, rows: usize, cols: usize) -> ComplexMatrix<f64> {
        ComplexMatrix::from_fn(rows, cols, |_, _| {
            Complex::new(self.normal(), self.normal())
        })
    }

    /// Haar-ish unitary from Gram–Schmidt on a Ginibre matrix.
    pub fn unitary(&mut self, n: usize) -> ComplexMatrix<f64> {
        let g = self.ginibre(n, n);
        let mut cols: Vec<Vec<Complex<f64>>> = Vec::with_capacity(n);
        for k in 0..n {
            let mut v = g.col(k);
            for _ in 0..2 {
                for u in &cols {
                    let proj: Complex<f64> = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    for (x, y) in v.iter_mut().zip(u) {
                        *x -= proj * y;
                    }
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            v.iter_mut().for_each(|z| *z /= norm);
            cols.push(v);
        }
        ComplexMatrix::from_fn(n, n, |r, c| cols[c][r])
    }

    /// Random density matrix of the given rank.
    pub fn density_matrix(&mut self, dim: usize, rank: usize) -> DensityMatrix<f64> {
        let g = self.ginibre(dim, rank);
        let m = &g * &g.adjoint();
        let tr = m.trace().re;
        DensityMatrix::new(m.scale(1.0 / tr)).expect("Wishart matrix is a valid state")
    }

    /// Probability grid with `n` entries, some optionally zero.
    pub fn probabilities(&mut self, n: usize, sparse: bool) -> Vec<f64> {
        let mut w: Vec<f64> = (0..n)
            .map(|_| {
                if sparse && self.uniform() < 0.3 {
                    0.0
                } else {
                    -(1.0 - self.uniform()).ln()
                }
            })
            .collect();
        if w.iter().all(|&x| x == 0.0) {
            w[0] = 1.0;
        }
        let s: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= s);
        w
    }

    /// Random CPTP map from a Stinespring isometry.
    pub fn channel(&mut self, d_in: usize, d_out: usize, n_kraus: usize) -> QuantumChannel<f64> {
        let big = d_out * n_kraus;
        assert!(big >= d_in, "environment too small for an isometry");
        let u = self.unitary(big);
        let kraus = (0..n_kraus)
            .map(|k| ComplexMatrix::from_fn(d_out, d_in, |r, c| u[(k * d_out + r, c)]))
            .collect();
        QuantumChannel::new(kraus, format!("random({d_in}->{d_out},{n_kraus})"))
            .expect("isometry blocks are trace preserving")
    }

    /// Random POVM with `n` elements of rank up to `rank` on `dim`.
    pub fn povm(&mut self, dim: usize, n: usize, rank: usize) -> Povm<f64> {
        let raw: Vec<ComplexMatrix<f64>> = (0..n)
            .map(|_| {
                let g = self.ginibre(dim, rank);
                &g * &g.adjoint()
            })
            .collect();
        let total = raw.iter().skip(1).fold(raw[0].clone(), |acc, x| &acc + x);
        let spec = hermitian_eigen(&total).expect("sum of PSD is Hermitian");
        let inv_sqrt = spec.map_spectrum(|l| 1.0 / l.sqrt());
        let elements = raw.iter().map(|x| inv_sqrt.sandwich(x)).collect();
        let labels = (0..n).map(|i| format!("rnd{i}")).collect();
        Povm::new(elements, labels).expect("normalised POVM")
    }

    /// Random probe with `n_terms` pure components whose reduced state has
    /// rank at most `rank` (all terms share one right factor).
    pub fn probe(&mut self, d: usize, n_terms: usize, rank: usize) -> BipartiteProbeState<f64> {
        let weights = self.probabilities(n_terms, false);
        let right = self.ginibre(rank, d);
        let terms = weights
            .into_iter()
            .map(|w| {
                let a = &self.ginibre(d, rank) * &right;
                let norm = a.frobenius_norm();
                (w, a.scale(1.0 / norm))
            })
            .collect();
        let decomposition = PureDecomposition::new(terms).expect("normalised terms");
        BipartiteProbeState::custom(decomposition, "random").expect("valid probe")
    }
}

//! Certified lower bounds on the quantum capacity of finite-dimensional
//! channels from measurement statistics on bipartite probe states.
//!
//! A probe `σ` on reference ⊗ system is sent through `I ⊗ E`, the output is
//! measured with a POVM, and the outcome distribution `p` together with the
//! channel-independent weights `t` yields
//!
//! ```text
//! Q ≥ I_c(ρ, E) ≥ Q_DET = S[E(ρ)] − H(p) − log₂ t·p
//! ```
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the aliases below
//! fix the scalar to `f64`, which is what the harness and CLI use.
//!
//! ```
//! use capcert::{bell_povm, certify, depolarizing_channel, hashing_bound, maximally_entangled_probe};
//!
//! let probe = maximally_entangled_probe(2).unwrap();
//! let channel = depolarizing_channel(2, 0.1f64).unwrap();
//! let result = certify(&probe, &channel, &bell_povm(2).unwrap(), false).unwrap();
//! assert!((result.qdet - hashing_bound(2, 0.1).unwrap()).abs() < 1e-10);
//! ```

pub mod certification;
pub mod channel;
pub mod detection;
pub mod error;
pub mod harness;
pub mod numerics;
pub mod probe;
pub mod random;
pub mod scalar;

pub use certification::{
    certify, coherent_information, depolarizing_isotropic_error, depolarizing_isotropic_qdet,
    entropy_exchange, entropy_exchange_with_purification, erasure_exact_capacity,
    erasure_qdet_closed_form, hashing_bound, jensen_diagnostic, optimize_grouping,
    qdet_from_statistics, threshold_fidelity, ThresholdFamily,
};
pub use channel::{depolarizing_channel, erasure_channel, pauli_channel, weyl_unitary};
pub use detection::{
    bell_povm, coarse_grain, compute_t_vector, erasure_povm, outcome_probabilities,
    pauli_bell_convolution, Grouping,
};
pub use error::{Error, Result};
pub use numerics::{
    binary_entropy, double_ket, hermitian_eigen, inner_product_double_ket, matrix_sqrt,
    operator_from_double_ket, partial_trace_reference, partial_trace_system, pseudo_inverse,
    shannon_entropy, von_neumann_entropy,
};
pub use probe::{bell_diagonal_probe, isotropic_probe, maximally_entangled_probe};
pub use scalar::{Real, Tolerances};

pub type ComplexMatrix = numerics::ComplexMatrix<f64>;
pub type DensityMatrix = numerics::DensityMatrix<f64>;
pub type SpectralDecomposition = numerics::SpectralDecomposition<f64>;
pub type ProbabilityVector = numerics::ProbabilityVector<f64>;
pub type QuantumChannel = channel::QuantumChannel<f64>;
pub type PauliChannelParams = channel::PauliChannelParams<f64>;
pub type PureDecomposition = probe::PureDecomposition<f64>;
pub type BipartiteProbeState = probe::BipartiteProbeState<f64>;
pub type Povm = detection::Povm<f64>;
pub type TVector = detection::TVector<f64>;
pub type CertificationResult = certification::CertificationResult<f64>;

pub type Complex64 = num_complex::Complex<f64>;

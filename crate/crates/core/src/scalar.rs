//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Numeric tolerances used when validating states, channels and measurements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T> {
    /// Maximum entry of `|M - M†|` accepted as Hermitian.
    pub herm: T,
    /// Allowed deviation of a trace from its target.
    pub trace: T,
    /// Allowed deviation of `V†V` from the identity.
    pub ortho: T,
    /// Most negative eigenvalue still treated as zero.
    pub psd: T,
    /// Slack on probability entries and their sum.
    pub prob: T,
    /// Reconstruction error accepted when checking factorisations.
    pub recon: T,
    /// Relative eigenvalue cutoff for ranks and pseudoinverses.
    pub cutoff: T,
    /// Trace-preservation slack for channels and POVM completeness.
    pub tp: T,
    /// Slack on the sum rule of the t-vector.
    pub sum_rule: T,
    /// Slack on `Q_DET ≤ I_c`.
    pub bound: T,
}

/// Real scalar type the linear algebra is generic over.
///
/// Implemented for `f32` and `f64`; tolerances scale with the precision.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    fn tolerances() -> Tolerances<Self>;

    /// Converts an `f64` literal. Never fails for the supported types.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }
}

impl Real for f64 {
    fn tolerances() -> Tolerances<f64> {
        Tolerances {
            herm: 1e-9,
            trace: 1e-9,
            ortho: 1e-9,
            psd: 1e-10,
            prob: 1e-9,
            recon: 1e-9,
            cutoff: 1e-12,
            tp: 1e-9,
            sum_rule: 1e-8,
            bound: 1e-9,
        }
    }
}

impl Real for f32 {
    fn tolerances() -> Tolerances<f32> {
        Tolerances {
            herm: 1e-4,
            trace: 1e-4,
            ortho: 1e-4,
            psd: 1e-5,
            prob: 1e-4,
            recon: 1e-4,
            cutoff: 1e-6,
            tp: 1e-4,
            sum_rule: 1e-3,
            bound: 1e-4,
        }
    }
}

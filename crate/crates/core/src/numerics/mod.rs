//! Small dense complex linear algebra: matrices, density operators,
//! entropies, the double-ket isomorphism and spectral functions.

mod eigen;
mod entropy;
mod matrix;
mod state;
mod vectorize;

pub(crate) use eigen::pseudo_inverse_from;
pub use eigen::{
    hermitian_eigen, hermitian_rank, matrix_sqrt, pseudo_inverse, SpectralDecomposition,
};
pub(crate) use entropy::entropy_of;
pub use entropy::{binary_entropy, shannon_entropy, von_neumann_entropy};
pub use matrix::ComplexMatrix;
pub use state::{DensityMatrix, ProbabilityVector};
pub use vectorize::{
    double_ket, double_ket_projector, inner_product_double_ket, operator_from_double_ket,
    partial_trace_reference, partial_trace_system,
};

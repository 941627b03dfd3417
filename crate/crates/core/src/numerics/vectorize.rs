//! Operator/vector isomorphism `|A⟩⟩ = ∑ A_nm |n⟩|m⟩` and partial traces.
//!
//! The first tensor factor is the reference, the second the system. Transpose
//! and conjugation are always taken in the computational basis.

use num_complex::Complex;
use num_traits::Zero;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Row-major unfolding: component `n·d + m` holds `A[n][m]`.
pub fn double_ket<T: Real>(a: &ComplexMatrix<T>) -> Result<Vec<Complex<T>>> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "double-ket of a non-square {}x{} operator",
            a.rows(),
            a.cols()
        )));
    }
    Ok(a.as_slice().to_vec())
}

/// Inverse of [`double_ket`].
pub fn operator_from_double_ket<T: Real>(v: &[Complex<T>]) -> Result<ComplexMatrix<T>> {
    let d = (v.len() as f64).sqrt().round() as usize;
    if d == 0 || d * d != v.len() {
        return Err(Error::Dimension(format!(
            "length {} is not a square",
            v.len()
        )));
    }
    ComplexMatrix::from_row_major(d, d, v.to_vec())
}

/// `⟨⟨A|B⟩⟩`, which equals `Tr[A†B]`.
pub fn inner_product_double_ket<T: Real>(
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
) -> Result<Complex<T>> {
    if (a.rows(), a.cols()) != (b.rows(), b.cols()) {
        return Err(Error::Dimension("operands differ in shape".into()));
    }
    let ka = double_ket(a)?;
    let kb = double_ket(b)?;
    Ok(ka
        .iter()
        .zip(&kb)
        .fold(Complex::zero(), |acc, (x, y)| acc + x.conj() * y))
}

/// `|A⟩⟩⟨⟨A|` on the doubled space.
pub fn double_ket_projector<T: Real>(a: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    Ok(ComplexMatrix::outer(&double_ket(a)?))
}

fn check_bipartite<T: Real>(m: &ComplexMatrix<T>, d_ref: usize, d_sys: usize) -> Result<()> {
    if d_ref == 0 || d_sys == 0 || !m.is_square() || m.rows() != d_ref * d_sys {
        return Err(Error::Dimension(format!(
            "{}x{} operator does not factor as {d_ref}·{d_sys}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

/// Traces out the first (reference) factor.
pub fn partial_trace_reference<T: Real>(
    m: &ComplexMatrix<T>,
    d_ref: usize,
    d_sys: usize,
) -> Result<ComplexMatrix<T>> {
    check_bipartite(m, d_ref, d_sys)?;
    Ok(ComplexMatrix::from_fn(d_sys, d_sys, |s, s2| {
        (0..d_ref).fold(Complex::zero(), |acc, r| {
            acc + m[(r * d_sys + s, r * d_sys + s2)]
        })
    }))
}

/// Traces out the second (system) factor.
pub fn partial_trace_system<T: Real>(
    m: &ComplexMatrix<T>,
    d_ref: usize,
    d_sys: usize,
) -> Result<ComplexMatrix<T>> {
    check_bipartite(m, d_ref, d_sys)?;
    Ok(ComplexMatrix::from_fn(d_ref, d_ref, |r, r2| {
        (0..d_sys).fold(Complex::zero(), |acc, s| {
            acc + m[(r * d_sys + s, r2 * d_sys + s)]
        })
    }))
}

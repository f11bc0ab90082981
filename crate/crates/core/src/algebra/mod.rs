//! Small dense complex linear algebra: matrices, projectors and kets over a
//! pluggable scalar field.

mod ket;
mod matrix;
mod projector;
mod scalar;
mod spectral;

pub use ket::Ket;
pub use matrix::Matrix;
pub use projector::Projector;
pub use scalar::{QComplex, Scalar, C64};
pub use spectral::{distinct_eigenvalues, hermitian_eigenvalues, spectral_projector};

use crate::error::Result;

pub fn matmul<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> Result<Matrix<S>> {
    a.matmul(b)
}

pub fn kron<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> Result<Matrix<S>> {
    a.kron(b)
}

pub fn is_projector<S: Scalar>(m: &Matrix<S>) -> bool {
    m.is_projector()
}

pub fn projector_from_ket<S: Scalar>(psi: &Ket<S>) -> Projector<S> {
    psi.projector()
}

pub fn evolve<S: Scalar>(psi: &Ket<S>, u: &Matrix<S>) -> Result<Ket<S>> {
    psi.evolve(u)
}

use std::fmt;

use super::matrix::Matrix;
use super::scalar::{Scalar, C64};
use crate::error::{Error, Result};

/// Self-adjoint idempotent matrix.
#[derive(Clone, PartialEq)]
pub struct Projector<S = C64> {
    matrix: Matrix<S>,
}

impl<S: Scalar> Projector<S> {
    pub fn new(matrix: Matrix<S>) -> Result<Self> {
        if !matrix.is_hermitian() {
            return Err(Error::NotProjector(format!("{matrix:?} is not self-adjoint")));
        }
        if !matrix.is_idempotent() {
            return Err(Error::NotProjector(format!("{matrix:?} is not idempotent")));
        }
        Ok(Self { matrix })
    }

    /// Wraps a matrix the caller has already shown to be a projector.
    pub(crate) fn new_unchecked(matrix: Matrix<S>) -> Self {
        debug_assert!(matrix.is_projector(), "{matrix:?}");
        Self { matrix }
    }

    pub fn zero(dim: usize) -> Self {
        Self { matrix: Matrix::zeros(dim) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: Matrix::identity(dim) }
    }

    pub fn diag_bits(bits: &[u8]) -> Self {
        Self { matrix: Matrix::diag_bits(bits) }
    }

    /// Projector onto the span of the given vectors.
    pub fn span(dim: usize, vectors: &[Vec<S>]) -> Result<Self> {
        let mut basis: Vec<(Vec<S>, S)> = Vec::new();
        for v in vectors {
            if v.len() != dim {
                return Err(Error::DimensionMismatch { left: dim, right: v.len() });
            }
            // unnormalised Gram-Schmidt keeps rational inputs rational
            let mut r = v.clone();
            for (b, norm) in &basis {
                let coeff = inner(b, &r) / norm.clone();
                for (ri, bi) in r.iter_mut().zip(b) {
                    *ri = ri.clone() - coeff.clone() * bi.clone();
                }
            }
            if r.iter().all(Scalar::is_zero) {
                continue;
            }
            let norm = inner(&r, &r);
            basis.push((r, norm));
        }
        let mut acc = Matrix::zeros(dim);
        for (b, norm) in &basis {
            let outer = Matrix::outer(b, b)?.scale(&(S::one() / norm.clone()));
            acc = acc.add(&outer)?;
        }
        Projector::new(acc)
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix<S> {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn rank(&self) -> usize {
        self.matrix.trace_rank()
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn complement(&self) -> Self {
        Self {
            matrix: Matrix::identity(self.dim())
                .sub(&self.matrix)
                .expect("same dimension"),
        }
    }

    /// self ≤ other in the projector order, i.e. other·self = self.
    pub fn leq(&self, other: &Self) -> bool {
        self.dim() == other.dim() && other.matrix.mul_unchecked(&self.matrix).approx_eq(&self.matrix)
    }

    pub fn is_orthogonal_to(&self, other: &Self) -> bool {
        self.dim() == other.dim() && self.matrix.mul_unchecked(&other.matrix).is_zero()
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.matrix.approx_eq(&other.matrix)
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.matrix.commutes_with(&other.matrix)
    }

    /// Projector onto the closed span of both ranges.
    pub fn join(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { left: self.dim(), right: other.dim() });
        }
        let d = self.dim();
        let columns: Vec<Vec<S>> = (0..d)
            .map(|c| self.matrix.column(c))
            .chain((0..d).map(|c| other.matrix.column(c)))
            .collect();
        Self::span(d, &columns)
    }

    /// Projector onto the intersection of both ranges.
    pub fn meet(&self, other: &Self) -> Result<Self> {
        Ok(self.complement().join(&other.complement())?.complement())
    }

    /// Sum of pairwise-orthogonal projectors.
    pub fn orthogonal_sum<'a>(dim: usize, parts: impl IntoIterator<Item = &'a Self>) -> Self {
        let mut acc = Matrix::zeros(dim);
        for p in parts {
            acc = acc.add(&p.matrix).expect("same dimension");
        }
        Self::new_unchecked(acc)
    }

    pub fn kron(&self, other: &Self) -> Result<Self> {
        Ok(Self { matrix: self.matrix.kron(&other.matrix)? })
    }

    pub fn sort_key(&self) -> Vec<(i64, i64)> {
        self.matrix.sort_key()
    }
}

/// ⟨a|b⟩
pub(crate) fn inner<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.conj() * y.clone())
}

impl<S: Scalar> fmt::Debug for Projector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Projector{:?}", self.matrix)
    }
}

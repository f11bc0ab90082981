use std::fmt;

use super::scalar::{Scalar, C64};
use crate::error::{Error, Result};
use crate::settings;

/// Dense square matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix<S = C64> {
    dim: usize,
    data: Vec<S>,
}

fn check_dim(dim: usize) -> Result<()> {
    let max = settings::max_dim();
    if dim == 0 {
        return Err(Error::Malformed("dimension must be positive".into()));
    }
    if dim > max {
        return Err(Error::DimensionBound { dim, max });
    }
    Ok(())
}

impl<S: Scalar> Matrix<S> {
    pub fn new(dim: usize, data: Vec<S>) -> Result<Self> {
        check_dim(dim)?;
        if data.len() != dim * dim {
            return Err(Error::Malformed(format!(
                "expected {} entries for dimension {dim}, got {}",
                dim * dim,
                data.len()
            )));
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let dim = rows.len();
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != dim) {
            return Err(Error::Malformed(format!(
                "row {i} has {} entries, expected {dim}",
                row.len()
            )));
        }
        Self::new(dim, rows.into_iter().flatten().collect())
    }

    /// Real-valued matrix from row slices.
    pub fn from_real(rows: &[&[f64]]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&x| S::from_f64(x, 0.0).ok_or_else(|| Error::Malformed("non-finite entry".into())))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![S::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diag(&vec![S::one(); dim])
    }

    pub fn diag(entries: &[S]) -> Self {
        let dim = entries.len();
        let mut m = Self::zeros(dim);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * dim + i] = e.clone();
        }
        m
    }

    /// Diagonal 0/1 matrix, handy for projectors in a fixed basis.
    pub fn diag_bits(bits: &[u8]) -> Self {
        let entries: Vec<S> = bits
            .iter()
            .map(|&b| if b == 0 { S::zero() } else { S::one() })
            .collect();
        Self::diag(&entries)
    }

    /// |u⟩⟨v|
    pub fn outer(u: &[S], v: &[S]) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::DimensionMismatch { left: u.len(), right: v.len() });
        }
        check_dim(u.len())?;
        let dim = u.len();
        let mut data = Vec::with_capacity(dim * dim);
        for a in u {
            for b in v {
                data.push(a.clone() * b.conj());
            }
        }
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &S {
        &self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: S) {
        self.data[row * self.dim + col] = value;
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    pub fn rows(&self) -> impl Iterator<Item = &[S]> {
        self.data.chunks(self.dim)
    }

    pub fn column(&self, col: usize) -> Vec<S> {
        (0..self.dim).map(|r| self.get(r, col).clone()).collect()
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut data = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                data.push(self.data[j * d + i].conj());
            }
        }
        Self { dim: d, data }
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: other.dim });
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(self.mul_unchecked(other))
    }

    /// Product for operands already known to share a dimension.
    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let d = self.dim;
        let mut data = vec![S::zero(); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = &self.data[i * d + k];
                if S::EXACT && a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let prod = a.clone() * other.data[k * d + j].clone();
                    let slot = &mut data[i * d + j];
                    *slot = slot.clone() + prod;
                }
            }
        }
        Self { dim: d, data }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(self.zip(other, |a, b| a.clone() + b.clone()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Ok(self.zip(other, |a, b| a.clone() - b.clone()))
    }

    fn zip(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn scale(&self, factor: &S) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|a| a.clone() * factor.clone()).collect(),
        }
    }

    pub fn trace(&self) -> S {
        (0..self.dim).fold(S::zero(), |acc, i| acc + self.data[i * self.dim + i].clone())
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[S]) -> Result<Vec<S>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: v.len() });
        }
        Ok(self
            .rows()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect())
    }

    /// Kronecker product; block (i, j) of the result is a[i][j]·b.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        let (da, db) = (self.dim, other.dim);
        let dim = da * db;
        check_dim(dim)?;
        let mut data = vec![S::zero(); dim * dim];
        for i in 0..da {
            for j in 0..da {
                let a = &self.data[i * da + j];
                for k in 0..db {
                    for l in 0..db {
                        data[(i * db + k) * dim + (j * db + l)] =
                            a.clone() * other.data[k * db + l].clone();
                    }
                }
            }
        }
        Ok(Self { dim, data })
    }

    /// ‖·‖∞ over entries, as max(|re|, |im|).
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Scalar::abs_inf).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// Entrywise equality within tolerance (exact for exact scalars).
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(a, b)| (a.clone() - b.clone()).is_zero())
    }

    pub fn is_hermitian(&self) -> bool {
        self.approx_eq(&self.adjoint())
    }

    pub fn is_idempotent(&self) -> bool {
        self.mul_unchecked(self).approx_eq(self)
    }

    pub fn is_projector(&self) -> bool {
        self.is_hermitian() && self.is_idempotent()
    }

    pub fn is_unitary(&self) -> bool {
        self.adjoint().mul_unchecked(self).approx_eq(&Self::identity(self.dim))
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.dim == other.dim && self.mul_unchecked(other).approx_eq(&other.mul_unchecked(self))
    }

    pub fn to_c64(&self) -> Matrix<C64> {
        Matrix { dim: self.dim, data: self.data.iter().map(Scalar::to_c64).collect() }
    }

    /// Canonical ordering key (entries rounded to 12 decimals).
    pub fn sort_key(&self) -> Vec<(i64, i64)> {
        self.data.iter().map(Scalar::sort_key).collect()
    }

    /// Rank of a projector-like matrix, read off the (real) trace.
    pub fn trace_rank(&self) -> usize {
        self.trace().to_c64().re.round().max(0.0) as usize
    }
}

impl<S: Scalar> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.to_c64();
        f.write_str("[")?;
        for (i, row) in c.rows().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            for (j, z) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                if z.im == 0.0 {
                    write!(f, "{}", z.re)?;
                } else {
                    write!(f, "{}{:+}i", z.re, z.im)?;
                }
            }
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_real(rows).unwrap()
    }

    #[test]
    fn identity_product() {
        let i = Matrix::<C64>::identity(2);
        assert_eq!(i.matmul(&i).unwrap(), i);
    }

    #[test]
    fn orthogonal_diagonals_multiply_to_zero() {
        let a = Matrix::<C64>::diag_bits(&[1, 0]);
        let b = Matrix::<C64>::diag_bits(&[0, 1]);
        assert!(a.matmul(&b).unwrap().is_zero());
    }

    #[test]
    fn x_plus_times_z_plus() {
        let px = m(&[&[0.5, 0.5], &[0.5, 0.5]]);
        let pz = m(&[&[1.0, 0.0], &[0.0, 0.0]]);
        let expected = m(&[&[0.5, 0.0], &[0.5, 0.0]]);
        assert!(px.matmul(&pz).unwrap().approx_eq(&expected));
    }

    #[test]
    fn matmul_dimension_mismatch() {
        let err = Matrix::<C64>::identity(2).matmul(&Matrix::identity(3)).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { left: 2, right: 3 });
    }

    #[test]
    fn kron_identities_and_diagonals() {
        let i2 = Matrix::<C64>::identity(2);
        assert_eq!(i2.kron(&i2).unwrap(), Matrix::identity(4));
        let p = Matrix::<C64>::diag_bits(&[1, 0]);
        assert_eq!(p.kron(&p).unwrap(), Matrix::diag_bits(&[1, 0, 0, 0]));
    }

    #[test]
    fn kron_respects_dimension_bound() {
        let a = Matrix::<C64>::identity(8);
        let b = Matrix::<C64>::identity(4);
        assert!(matches!(a.kron(&b), Err(Error::DimensionBound { dim: 32, max: 16 })));
    }

    #[test]
    fn projector_tests() {
        assert!(Matrix::<C64>::diag_bits(&[1, 0]).is_projector());
        assert!(m(&[&[0.5, 0.5], &[0.5, 0.5]]).is_projector());
        assert!(!m(&[&[0.0, 1.0], &[0.0, 0.0]]).is_projector());
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(Matrix::<C64>::from_real(&[&[1.0, 0.0], &[0.0]]).is_err());
    }
}

use super::matrix::Matrix;
use super::projector::{inner, Projector};
use super::scalar::{Scalar, C64};
use crate::error::{Error, Result};

/// Unit vector in a finite-dimensional Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket<S = C64> {
    entries: Vec<S>,
}

impl<S: Scalar> Ket<S> {
    pub fn new(entries: Vec<S>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Malformed("empty ket".into()));
        }
        let norm_sqr = inner(&entries, &entries);
        if !(norm_sqr.clone() - S::one()).is_zero() {
            return Err(Error::NotUnitKet { norm_sqr: norm_sqr.to_c64().re });
        }
        Ok(Self { entries })
    }

    /// Normalises a nonzero float vector first.
    pub fn normalized(mut entries: Vec<S>) -> Result<Self> {
        S::renormalize(&mut entries);
        Self::new(entries)
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut entries = vec![S::zero(); dim];
        entries[index] = S::one();
        Self { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    /// |ψ⟩⟨ψ|
    pub fn projector(&self) -> Projector<S> {
        let m = Matrix::outer(&self.entries, &self.entries).expect("ket dimension within bound");
        Projector::new_unchecked(m)
    }

    /// u·ψ, renormalised against floating-point drift.
    pub fn evolve(&self, u: &Matrix<S>) -> Result<Self> {
        if u.dim() != self.dim() {
            return Err(Error::DimensionMismatch { left: u.dim(), right: self.dim() });
        }
        if !u.is_unitary() {
            return Err(Error::NotUnitary(format!("{u:?}")));
        }
        let mut out = u.apply(&self.entries)?;
        S::renormalize(&mut out);
        Ok(Self { entries: out })
    }

    /// ⟨ψ|A|ψ⟩
    pub fn expectation(&self, a: &Matrix<S>) -> Result<S> {
        let av = a.apply(&self.entries)?;
        Ok(inner(&self.entries, &av))
    }

    pub fn kron(&self, other: &Self) -> Self {
        let entries = self
            .entries
            .iter()
            .flat_map(|a| other.entries.iter().map(move |b| a.clone() * b.clone()))
            .collect();
        Self { entries }
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.dim() == other.dim()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| (a.clone() - b.clone()).is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn ket(xs: &[f64]) -> Ket {
        Ket::new(xs.iter().map(|&x| C64::new(x, 0.0)).collect()).unwrap()
    }

    fn hadamard() -> Matrix {
        let h = FRAC_1_SQRT_2;
        Matrix::from_real(&[&[h, h], &[h, -h]]).unwrap()
    }

    #[test]
    fn projector_from_basis_ket() {
        assert_eq!(ket(&[1.0, 0.0]).projector(), Projector::diag_bits(&[1, 0]));
    }

    #[test]
    fn projector_from_x_plus() {
        let h = FRAC_1_SQRT_2;
        let p = ket(&[h, h]).projector();
        let expected = Matrix::from_real(&[&[0.5, 0.5], &[0.5, 0.5]]).unwrap();
        assert!(p.matrix().approx_eq(&expected));
    }

    #[test]
    fn singlet_projector_entries() {
        let h = FRAC_1_SQRT_2;
        let p = ket(&[0.0, h, -h, 0.0]).projector();
        let mut expected = Matrix::<C64>::zeros(4);
        expected.set(1, 1, C64::new(0.5, 0.0));
        expected.set(2, 2, C64::new(0.5, 0.0));
        expected.set(1, 2, C64::new(-0.5, 0.0));
        expected.set(2, 1, C64::new(-0.5, 0.0));
        assert!(p.matrix().approx_eq(&expected));
    }

    #[test]
    fn non_unit_ket_rejected() {
        let err = Ket::new(vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::NotUnitKet { .. }));
    }

    #[test]
    fn evolution() {
        let z = ket(&[1.0, 0.0]);
        assert!(z.evolve(&Matrix::identity(2)).unwrap().approx_eq(&z));
        let x = z.evolve(&hadamard()).unwrap();
        let h = FRAC_1_SQRT_2;
        assert!(x.approx_eq(&ket(&[h, h])));
        let back = x.evolve(&hadamard().adjoint()).unwrap();
        assert!(back.approx_eq(&z));
    }

    #[test]
    fn non_unitary_evolution_rejected() {
        let z = ket(&[1.0, 0.0]);
        let bad = Matrix::from_real(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        assert!(matches!(z.evolve(&bad), Err(Error::NotUnitary(_))));
    }
}

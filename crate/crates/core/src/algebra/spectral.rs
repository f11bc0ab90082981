//! Spectral projectors `Ê[A ∈ Δ]` of self-adjoint matrices.

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use super::matrix::Matrix;
use super::projector::Projector;
use super::scalar::{Scalar, C64};
use crate::error::{Error, Result};

const CLUSTER: f64 = 1e-6;
const MAX_DENOMINATOR: i64 = 1_000_000;

/// Eigenvalues of a self-adjoint matrix in ascending order, with multiplicity.
pub fn hermitian_eigenvalues<S: Scalar>(a: &Matrix<S>) -> Result<Vec<f64>> {
    if !a.is_hermitian() {
        return Err(Error::Malformed("observable is not self-adjoint".into()));
    }
    let c = a.to_c64();
    let d = a.dim();
    let dm = nalgebra::DMatrix::from_fn(d, d, |i, j| *c.get(i, j));
    let mut out: Vec<f64> = dm.symmetric_eigen().eigenvalues.iter().copied().collect();
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Distinct eigenvalues as scalars. Exact scalars need rational eigenvalues;
/// the minimal polynomial `∏(A − λ)` is checked to vanish either way.
pub fn distinct_eigenvalues<S: Scalar>(a: &Matrix<S>) -> Result<Vec<S>> {
    let mut clusters: Vec<f64> = Vec::new();
    for x in hermitian_eigenvalues(a)? {
        if clusters.last().is_none_or(|&y| (x - y).abs() > CLUSTER) {
            clusters.push(x);
        }
    }
    let values = clusters
        .into_iter()
        .map(|x| {
            if S::EXACT {
                let q = rationalize(x);
                Ok(S::from_rational(&q, &BigRational::zero()))
            } else {
                S::from_f64(x, 0.0).ok_or_else(|| Error::Malformed("non-finite eigenvalue".into()))
            }
        })
        .collect::<Result<Vec<S>>>()?;
    let d = a.dim();
    let mut poly = Matrix::identity(d);
    for l in &values {
        poly = poly.matmul(&a.sub(&Matrix::identity(d).scale(l))?)?;
    }
    if !poly.is_zero() {
        return Err(Error::Malformed("observable has eigenvalues that are not rational".into()));
    }
    Ok(values)
}

/// `Ê[A ∈ Δ]`: the sum of eigenprojectors of `a` for eigenvalues in `delta`,
/// each obtained by Lagrange interpolation `∏_{μ≠λ} (A − μ)/(λ − μ)`.
pub fn spectral_projector<S: Scalar>(a: &Matrix<S>, delta: &[S]) -> Result<Projector<S>> {
    let values = distinct_eigenvalues(a)?;
    let d = a.dim();
    let mut acc = Matrix::zeros(d);
    for (i, l) in values.iter().enumerate() {
        if !delta.iter().any(|x| in_delta(x, l)) {
            continue;
        }
        let mut term = Matrix::identity(d);
        for (j, m) in values.iter().enumerate() {
            if i != j {
                let factor = a.sub(&Matrix::identity(d).scale(m))?;
                term = term.matmul(&factor)?.scale(&(S::one() / (l.clone() - m.clone())));
            }
        }
        acc = acc.add(&term)?;
    }
    Projector::new(acc)
}

fn in_delta<S: Scalar>(x: &S, l: &S) -> bool {
    if S::EXACT {
        (x.clone() - l.clone()).is_zero()
    } else {
        let (x, l): (C64, C64) = (x.to_c64(), l.to_c64());
        (x - l).norm() <= CLUSTER
    }
}

/// Best continued-fraction approximation with denominator at most 10⁶.
fn rationalize(x: f64) -> BigRational {
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if k2.abs() > BigInt::from(MAX_DENOMINATOR) {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let approx = BigRational::new(h1.clone(), k1.clone());
        let err = (approx.to_f64().unwrap_or(f64::NAN) - x).abs();
        if err < 1e-12 || (r - a).abs() < 1e-15 {
            break;
        }
        r = 1.0 / (r - a);
    }
    if k1.is_zero() {
        return BigRational::from_integer(BigInt::from(x.round() as i64));
    }
    BigRational::new(h1, k1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::QComplex;

    #[test]
    fn diagonal_observable() {
        let z = Matrix::<C64>::from_real(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap();
        let p = spectral_projector(&z, &[C64::new(1.0, 0.0)]).unwrap();
        assert_eq!(p, Projector::diag_bits(&[1, 0]));
        assert!(spectral_projector(&z, &[C64::new(5.0, 0.0)]).unwrap().is_zero());
    }

    #[test]
    fn exact_pauli_x() {
        let q = |n: i64| QComplex::from_rational(&BigRational::from_integer(n.into()), &BigRational::zero());
        let x = Matrix::from_rows(vec![vec![q(0), q(1)], vec![q(1), q(0)]]).unwrap();
        let p = spectral_projector(&x, &[q(-1)]).unwrap();
        let half = QComplex::from_rational(&BigRational::new(1.into(), 2.into()), &BigRational::zero());
        assert_eq!(p.matrix().get(0, 1), &-half.clone());
        assert_eq!(p.matrix().get(0, 0), &half);
    }

    #[test]
    fn degenerate_eigenvalues() {
        let a = Matrix::<C64>::diag(&[C64::new(2.0, 0.0), C64::new(2.0, 0.0), C64::new(0.0, 0.0)]);
        let p = spectral_projector(&a, &[C64::new(2.0, 0.0)]).unwrap();
        assert_eq!(p.rank(), 2);
    }

    #[test]
    fn irrational_spectrum_rejected_in_exact_mode() {
        let q = |n: i64| QComplex::from_rational(&BigRational::from_integer(n.into()), &BigRational::zero());
        let a = Matrix::from_rows(vec![vec![q(1), q(1)], vec![q(1), q(0)]]).unwrap();
        assert!(distinct_eigenvalues(&a).is_err());
        assert_eq!(rationalize(0.75), BigRational::new(3.into(), 4.into()));
    }
}

//! Random test data: projectors, unitaries, kets, commuting families and
//! subobjects. Used by property suites and the verification commands.

use std::sync::Arc;

use rand::Rng;

use crate::algebra::{Ket, Matrix, Projector, C64};
use crate::presheaf::{FinitePresheaf, Subobject};

pub fn complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<C64> {
    (0..dim).map(|_| complex(rng)).collect()
}

pub fn ket<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Ket {
    loop {
        let v = vector(rng, dim);
        if v.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-3 {
            return Ket::normalized(v).expect("normalised vector");
        }
    }
}

/// Haar-ish unitary from Gram-Schmidt on random columns.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Matrix {
    loop {
        let mut cols: Vec<Vec<C64>> = Vec::with_capacity(dim);
        let mut ok = true;
        for _ in 0..dim {
            let mut v = vector(rng, dim);
            for c in &cols {
                let coeff: C64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, ci) in v.iter_mut().zip(c) {
                    *vi -= coeff * ci;
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-3 {
                ok = false;
                break;
            }
            cols.push(v.into_iter().map(|z| z / norm).collect());
        }
        if ok {
            let mut m = Matrix::zeros(dim);
            for (j, c) in cols.iter().enumerate() {
                for (i, z) in c.iter().enumerate() {
                    m.set(i, j, *z);
                }
            }
            return m;
        }
    }
}

/// Projector onto the span of `rank` columns of a random unitary.
pub fn projector_of_rank<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> Projector {
    let u = unitary(rng, dim);
    let cols: Vec<Vec<C64>> = (0..rank.min(dim)).map(|c| u.column(c)).collect();
    Projector::span(dim, &cols).expect("orthonormal columns span a projector")
}

/// Random projector with rank drawn uniformly from `0..=dim`.
pub fn projector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Projector {
    let rank = rng.gen_range(0..=dim);
    projector_of_rank(rng, dim, rank)
}

/// `count` commuting projectors, each a sum of joint eigenprojectors of a
/// random orthonormal basis.
pub fn commuting_family<R: Rng + ?Sized>(rng: &mut R, dim: usize, count: usize) -> Vec<Projector> {
    let u = unitary(rng, dim);
    (0..count)
        .map(|_| {
            let cols: Vec<Vec<C64>> = (0..dim).filter(|_| rng.gen_bool(0.5)).map(|c| u.column(c)).collect();
            Projector::span(dim, &cols).expect("orthonormal columns span a projector")
        })
        .collect()
}

/// Subobject generated by a random set of points.
pub fn subobject<R: Rng + ?Sized>(rng: &mut R, presheaf: &Arc<FinitePresheaf>) -> Subobject {
    let density = rng.gen_range(0.0..0.6);
    let points: Vec<(usize, usize)> = (0..presheaf.poset().len())
        .flat_map(|v| (0..presheaf.stage_size(v)).map(move |x| (v, x)))
        .filter(|_| rng.gen_bool(density))
        .collect();
    Subobject::generated_by(presheaf.clone(), &points)
}

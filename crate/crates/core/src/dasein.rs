//! Outer daseinization and single-time truth values.
//!
//! In a context `V` the smallest projector of `V` dominating `P` is the sum
//! of the minimals `Q` with `Q·P ≠ 0`: a sum `R` of minimals satisfies
//! `R ≥ P` iff every excluded minimal annihilates `P`. Collecting these
//! supports over a context poset yields a subobject of the spectral
//! presheaf, restriction-closed because coarser contexts give larger
//! approximations.

use std::collections::BTreeSet;

use crate::algebra::{Ket, Projector, Scalar, C64};
use crate::context::{Context, ContextPoset};
use crate::error::{Error, Result};
use crate::presheaf::{truth_of_inclusion, OmegaGlobalElement, Sieve, Subobject};

/// Indices of minimals of `v` that overlap `p`.
pub fn dasein_support<S: Scalar>(p: &Projector<S>, v: &Context<S>) -> Result<BTreeSet<usize>> {
    if p.dim() != v.dim() {
        return Err(Error::DimensionMismatch { left: v.dim(), right: p.dim() });
    }
    Ok((0..v.size())
        .filter(|&i| !v.minimals()[i].matrix().mul_unchecked(p.matrix()).is_zero())
        .collect())
}

/// δ°(P)_V: the least projector of `v` above `p`.
pub fn dasein_at<S: Scalar>(p: &Projector<S>, v: &Context<S>) -> Result<Projector<S>> {
    let support = dasein_support(p, v)?;
    Ok(Projector::orthogonal_sum(v.dim(), support.iter().map(|&i| &v.minimals()[i])))
}

/// A projector together with its daseinization over a context poset.
#[derive(Debug, Clone)]
pub struct DaseinizedProposition<S: Scalar = C64> {
    pub source: Projector<S>,
    pub subobject: Subobject,
}

pub fn dasein<S: Scalar>(p: &Projector<S>, poset: &ContextPoset<S>) -> Result<DaseinizedProposition<S>> {
    let selection = poset
        .contexts()
        .iter()
        .map(|v| dasein_support(p, v))
        .collect::<Result<Vec<_>>>()?;
    let subobject = Subobject::new(poset.spectral().clone(), selection)
        .map_err(|e| Error::Invariant(format!("daseinization not restriction-closed: {e}")))?;
    Ok(DaseinizedProposition { source: p.clone(), subobject })
}

/// Daseinization of |ψ⟩⟨ψ|.
#[derive(Debug, Clone)]
pub struct PseudoState<S: Scalar = C64> {
    pub ket: Ket<S>,
    pub subobject: Subobject,
}

pub fn pseudo_state<S: Scalar>(psi: &Ket<S>, poset: &ContextPoset<S>) -> Result<PseudoState<S>> {
    let d = dasein(&psi.projector(), poset)?;
    Ok(PseudoState { ket: psi.clone(), subobject: d.subobject })
}

/// At stage V, the set of V' ≤ V with w(V') ⊆ s(V'). Checked to be a
/// global element of sieves equal to the truth value of the inclusion.
pub fn truth_value<S: Scalar>(w: &PseudoState<S>, s: &DaseinizedProposition<S>) -> Result<OmegaGlobalElement> {
    if !same_spectral(&w.subobject, &s.subobject) {
        return Err(Error::PosetMismatch);
    }
    let poset = w.subobject.presheaf().poset().clone();
    let assignment = (0..poset.len())
        .map(|v| Sieve {
            apex: v,
            members: poset
                .down_set(v)
                .into_iter()
                .filter(|&u| w.subobject.at(u).is_subset(s.subobject.at(u)))
                .collect(),
        })
        .collect();
    let tv = OmegaGlobalElement { assignment };
    tv.check(&poset)?;
    if tv != truth_of_inclusion(&w.subobject, &s.subobject)? {
        return Err(Error::Invariant("pointwise inclusion differs from the classifier value".into()));
    }
    Ok(tv)
}

fn same_spectral(a: &Subobject, b: &Subobject) -> bool {
    std::sync::Arc::ptr_eq(a.presheaf(), b.presheaf())
}

/// ⟨ψ|δ°(P)_V|ψ⟩ = 1.
pub fn expectation_criterion<S: Scalar>(psi: &Ket<S>, p: &Projector<S>, v: &Context<S>) -> Result<bool> {
    let d = dasein_at(p, v)?;
    let e = psi.expectation(d.matrix())?;
    Ok((e - S::one()).is_zero())
}

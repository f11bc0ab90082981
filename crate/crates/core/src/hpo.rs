//! History projection operators: a homogeneous history is the tensor
//! product of its single-time projectors, so every history is a projector on
//! the tensor-product space. Product contexts `V₁ ⊗ V₂` connect that space
//! back to the product of context posets.

use std::collections::BTreeSet;

use crate::algebra::{Matrix, Projector, Scalar, C64};
use crate::context::{Context, SpectrumPoint};
use crate::dasein::{dasein_at, dasein_support};
use crate::error::{Error, Result};
use crate::presheaf::Subobject;
use crate::temporal::ContextProduct;

/// Iterated Kronecker product of single-time projectors.
pub fn hpo_projector<S: Scalar>(factors: &[Projector<S>]) -> Result<Projector<S>> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| Error::InvalidHistory("a history needs at least one time slot".into()))?;
    rest.iter().try_fold(first.clone(), |acc, p| acc.kron(p))
}

/// Homogeneous history, or a join of pairwise-disjoint homogeneous terms.
#[derive(Debug, Clone)]
pub enum HpoHistory<S: Scalar = C64> {
    Homogeneous { factors: Vec<Projector<S>>, projector: Projector<S> },
    Inhomogeneous { terms: Vec<Vec<Projector<S>>>, projector: Projector<S> },
}

impl<S: Scalar> HpoHistory<S> {
    pub fn homogeneous(factors: Vec<Projector<S>>) -> Result<Self> {
        let projector = hpo_projector(&factors)?;
        Ok(Self::Homogeneous { factors, projector })
    }

    /// Join of homogeneous terms; rejects overlapping terms.
    pub fn disjoint_join(terms: Vec<Vec<Projector<S>>>) -> Result<Self> {
        let projectors = terms.iter().map(|t| hpo_projector(t)).collect::<Result<Vec<_>>>()?;
        let Some(first) = projectors.first() else {
            return Err(Error::InvalidHistory("empty join".into()));
        };
        let dim = first.dim();
        for (i, p) in projectors.iter().enumerate() {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch { left: dim, right: p.dim() });
            }
            for (j, q) in projectors.iter().enumerate().skip(i + 1) {
                if !p.is_orthogonal_to(q) {
                    return Err(Error::NotDisjoint(format!("terms {i} and {j} overlap")));
                }
            }
        }
        let projector = Projector::orthogonal_sum(dim, &projectors);
        Ok(Self::Inhomogeneous { terms, projector })
    }

    pub fn projector(&self) -> &Projector<S> {
        match self {
            Self::Homogeneous { projector, .. } | Self::Inhomogeneous { projector, .. } => projector,
        }
    }

    /// The homogeneous terms, a single one for homogeneous histories.
    pub fn terms(&self) -> Vec<Vec<Projector<S>>> {
        match self {
            Self::Homogeneous { factors, .. } => vec![factors.clone()],
            Self::Inhomogeneous { terms, .. } => terms.clone(),
        }
    }

    /// Join with another history whose projector is orthogonal to this one.
    pub fn join(&self, other: &Self) -> Result<Self> {
        let mut terms = self.terms();
        terms.extend(other.terms());
        Self::disjoint_join(terms)
    }
}

/// `¬(α₁⊗α₂) = (¬α₁⊗α₂) ∨ (α₁⊗¬α₂) ∨ (¬α₁⊗¬α₂)`.
pub fn hpo_negation<S: Scalar>(history: &HpoHistory<S>) -> Result<HpoHistory<S>> {
    let HpoHistory::Homogeneous { factors, .. } = history else {
        return Err(Error::InvalidHistory("negation expansion needs a homogeneous history".into()));
    };
    let [a1, a2] = factors.as_slice() else {
        return Err(Error::InvalidHistory(format!("negation expansion needs 2 time slots, got {}", factors.len())));
    };
    let (n1, n2) = (a1.complement(), a2.complement());
    HpoHistory::disjoint_join(vec![
        vec![n1.clone(), a2.clone()],
        vec![a1.clone(), n2.clone()],
        vec![n1, n2],
    ])
}

/// `⟨V₁, V₂⟩ ↦ V₁ ⊗ V₂`, minimals `Qᵢ ⊗ Rⱼ`.
pub fn theta<S: Scalar>(v1: &Context<S>, v2: &Context<S>) -> Result<Context<S>> {
    let mut minimals = Vec::with_capacity(v1.size() * v2.size());
    for q in v1.minimals() {
        for r in v2.minimals() {
            minimals.push(q.kron(r)?);
        }
    }
    Context::from_minimals(v1.dim() * v2.dim(), minimals)
}

/// The point of `V₁ ⊗ V₂` with `μ(λ₁,λ₂)(A⊗B) = λ₁(A)·λ₂(B)`: the one whose
/// minimal is `Q_{λ₁} ⊗ R_{λ₂}`.
pub fn mu<S: Scalar>(
    v1: &Context<S>,
    v2: &Context<S>,
    tensor: &Context<S>,
    l1: SpectrumPoint,
    l2: SpectrumPoint,
) -> Result<SpectrumPoint> {
    let target = v1.minimal(l1).kron(v2.minimal(l2))?;
    tensor
        .minimals()
        .iter()
        .position(|m| m.approx_eq(&target))
        .map(|index| SpectrumPoint { index })
        .ok_or_else(|| Error::Invariant("product minimal missing from tensor context".into()))
}

/// `θ*(δ(P))`: at `⟨V₁,V₂⟩`, the pairs `(λ₁,λ₂)` whose image under `μ` is
/// selected by `δ°(P)` in `V₁ ⊗ V₂`.
pub fn theta_pullback<S: Scalar>(p: &Projector<S>, product: &ContextProduct<S>) -> Result<Subobject> {
    if product.arity() != 2 {
        return Err(Error::LengthMismatch { expected: 2, got: product.arity() });
    }
    let (left, right) = (product.factor(0), product.factor(1));
    if p.dim() != left.dim() * right.dim() {
        return Err(Error::DimensionMismatch { left: left.dim() * right.dim(), right: p.dim() });
    }
    let space = product.space();
    let mut selection = Vec::with_capacity(space.poset().len());
    for v in 0..space.poset().len() {
        let stages = space.stage_tuple(v);
        let (c1, c2) = (left.context(stages[0]), right.context(stages[1]));
        let tensor = theta(c1, c2)?;
        let support = dasein_support(p, &tensor)?;
        let mut sel = BTreeSet::new();
        for l1 in c1.spectrum() {
            for l2 in c2.spectrum() {
                if support.contains(&mu(c1, c2, &tensor, l1, l2)?.index) {
                    sel.insert(space.point_index(v, &[l1.index, l2.index]));
                }
            }
        }
        selection.push(sel);
    }
    Subobject::new(space.presheaf().clone(), selection)
}

/// Findings for a projector onto an entangled state.
#[derive(Debug, Clone)]
pub struct EntangledReport<S: Scalar> {
    pub p_ent: Projector<S>,
    pub product_sum: Projector<S>,
    /// `P_ud + P_du − P_ent`.
    pub difference: Matrix<S>,
    pub differs_from_sum: bool,
    pub strictly_below_sum: bool,
    pub difference_is_projector: bool,
    pub difference_rank: usize,
    /// δ°(P_ent) at the product context.
    pub dasein_product: Projector<S>,
    /// δ°(P_ent) at the entangled context.
    pub dasein_entangled: Projector<S>,
    pub entangled_strictly_below_product: bool,
    pub product_context_size: usize,
    pub entangled_context_size: usize,
}

/// Compares an entangled projector with the sum of product projectors, and
/// its daseinization at a product context versus a context generated by the
/// given commuting projectors on the tensor space.
pub fn entangled_analysis<S: Scalar>(
    p_ent: &Projector<S>,
    product_terms: &[Projector<S>],
    v1: &Context<S>,
    v2: &Context<S>,
    entangled_generators: &[Projector<S>],
) -> Result<EntangledReport<S>> {
    let dim = p_ent.dim();
    let sum_matrix = product_terms
        .iter()
        .try_fold(Matrix::zeros(dim), |acc, t| acc.add(t.matrix()))?;
    let product_sum = Projector::new(sum_matrix)?;
    let difference = product_sum.matrix().sub(p_ent.matrix())?;
    let differs_from_sum = !product_sum.approx_eq(p_ent);
    let strictly_below_sum = p_ent.leq(&product_sum) && differs_from_sum;
    let difference_is_projector = difference.is_projector();
    let difference_rank = if difference_is_projector { difference.trace_rank() } else { 0 };

    let product_ctx = theta(v1, v2)?;
    let entangled_ctx = Context::from_commuting(dim, entangled_generators)?;
    let dasein_product = dasein_at(p_ent, &product_ctx)?;
    let dasein_entangled = dasein_at(p_ent, &entangled_ctx)?;
    let entangled_strictly_below_product =
        dasein_entangled.leq(&dasein_product) && !dasein_entangled.approx_eq(&dasein_product);
    Ok(EntangledReport {
        p_ent: p_ent.clone(),
        product_sum,
        difference,
        differs_from_sum,
        strictly_below_sum,
        difference_is_projector,
        difference_rank,
        dasein_product,
        dasein_entangled,
        entangled_strictly_below_product,
        product_context_size: product_ctx.size(),
        entangled_context_size: entangled_ctx.size(),
    })
}

/// Singlet `(|↑↓⟩ − |↓↑⟩)/√2` against `P_ud ∨ P_du`, at the z⊗z product
/// context and at the algebra generated by `P_ent`.
pub fn entangled_demo<S: Scalar>() -> Result<EntangledReport<S>> {
    let (one, zero) = (S::one(), S::zero());
    let p_ent = Projector::span(4, &[vec![zero.clone(), one.clone(), -one.clone(), zero]])?;
    let p_ud = Projector::diag_bits(&[0, 1, 0, 0]);
    let p_du = Projector::diag_bits(&[0, 0, 1, 0]);
    let z = Context::from_commuting(2, &[Projector::diag_bits(&[1, 0])])?;
    entangled_analysis(&p_ent, &[p_ud, p_du], &z, &z, std::slice::from_ref(&p_ent))
}

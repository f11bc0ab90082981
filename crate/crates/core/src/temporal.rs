//! Products of context posets and truth values of histories.
//!
//! The product of presheaves `Σ₁ × … × Σₙ` over the product poset has
//! stage `⟨V₁,…,Vₙ⟩` equal to `Σ₁(V₁) × … × Σₙ(Vₙ)` with componentwise
//! restriction. Stages and points are encoded in mixed radix with the first
//! factor most significant, which is exactly the right-nested binary product
//! `Σ₁ × (Σ₂ × (…))`.
//!
//! A tensor expression `⋁ᵢ S₁ⁱ ⊗ S₂ⁱ` is interpreted through `h` as the
//! union of rectangles `S₁ⁱ × S₂ⁱ`; equality of expressions is equality of
//! their images.

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{Ket, Matrix, Scalar};
use crate::context::ContextPoset;
use crate::dasein::{pseudo_state, DaseinizedProposition, PseudoState};
use crate::error::{Error, Result};
use crate::presheaf::{
    enumerate_subobjects, is_sieve, truth_of_inclusion, FinitePoset, FinitePresheaf, OmegaGlobalElement,
    PointSet, Sieve, Subobject,
};

/// Product of finitely many presheaves over the product of their posets.
#[derive(Debug, Clone)]
pub struct ProductSpace {
    factors: Vec<Arc<FinitePresheaf>>,
    presheaf: Arc<FinitePresheaf>,
}

impl ProductSpace {
    pub fn new(factors: Vec<Arc<FinitePresheaf>>) -> Result<Self> {
        let Some(last) = factors.last() else {
            return Err(Error::LengthMismatch { expected: 1, got: 0 });
        };
        let mut poset: FinitePoset = (**last.poset()).clone();
        for f in factors.iter().rev().skip(1) {
            poset = f.poset().product(&poset);
        }
        let poset = Arc::new(poset);
        let mut space = Self { factors, presheaf: Arc::new(placeholder()) };
        let sizes = (0..poset.len())
            .map(|v| space.stage_tuple_len(v))
            .collect::<Vec<_>>();
        let presheaf = FinitePresheaf::new(poset, sizes, |x, upper, lower| {
            let (tu, tl) = (space.stage_tuple(upper), space.stage_tuple(lower));
            let pts = space.point_tuple_at(&tu, x);
            let restricted: Vec<usize> = space
                .factors
                .iter()
                .enumerate()
                .map(|(k, f)| f.restrict(pts[k], tu[k], tl[k]))
                .collect();
            space.point_index_at(&tl, &restricted)
        })?;
        space.presheaf = Arc::new(presheaf);
        Ok(space)
    }

    pub fn binary(left: Arc<FinitePresheaf>, right: Arc<FinitePresheaf>) -> Result<Self> {
        Self::new(vec![left, right])
    }

    pub fn arity(&self) -> usize {
        self.factors.len()
    }

    pub fn factor(&self, k: usize) -> &Arc<FinitePresheaf> {
        &self.factors[k]
    }

    pub fn presheaf(&self) -> &Arc<FinitePresheaf> {
        &self.presheaf
    }

    pub fn poset(&self) -> &Arc<FinitePoset> {
        self.presheaf.poset()
    }

    /// Component stages of a product stage.
    pub fn stage_tuple(&self, mut v: usize) -> Vec<usize> {
        let mut out = vec![0; self.factors.len()];
        for (k, f) in self.factors.iter().enumerate().rev() {
            let n = f.poset().len();
            out[k] = v % n;
            v /= n;
        }
        out
    }

    pub fn stage_index(&self, tuple: &[usize]) -> usize {
        tuple
            .iter()
            .zip(&self.factors)
            .fold(0, |acc, (&t, f)| acc * f.poset().len() + t)
    }

    fn stage_tuple_len(&self, v: usize) -> usize {
        self.stage_tuple(v)
            .iter()
            .zip(&self.factors)
            .map(|(&t, f)| f.stage_size(t))
            .product()
    }

    fn point_tuple_at(&self, stages: &[usize], mut x: usize) -> Vec<usize> {
        let mut out = vec![0; self.factors.len()];
        for k in (0..self.factors.len()).rev() {
            let n = self.factors[k].stage_size(stages[k]);
            out[k] = x % n;
            x /= n;
        }
        out
    }

    fn point_index_at(&self, stages: &[usize], points: &[usize]) -> usize {
        (0..self.factors.len()).fold(0, |acc, k| acc * self.factors[k].stage_size(stages[k]) + points[k])
    }

    /// Component points of point `x` at product stage `v`.
    pub fn point_tuple(&self, v: usize, x: usize) -> Vec<usize> {
        self.point_tuple_at(&self.stage_tuple(v), x)
    }

    pub fn point_index(&self, v: usize, points: &[usize]) -> usize {
        self.point_index_at(&self.stage_tuple(v), points)
    }

    fn check_factor(&self, k: usize, s: &Subobject) -> Result<()> {
        match self.factors.get(k) {
            Some(f) if Arc::ptr_eq(f, s.presheaf()) => Ok(()),
            _ => Err(Error::PresheafMismatch),
        }
    }

    /// Pullback along the k-th projection: `s(V_k)` times everything else.
    pub fn pullback(&self, k: usize, s: &Subobject) -> Result<Subobject> {
        self.check_factor(k, s)?;
        let poset = self.poset();
        let selection = (0..poset.len())
            .map(|v| {
                let stages = self.stage_tuple(v);
                (0..self.presheaf.stage_size(v))
                    .filter(|&x| s.at(stages[k]).contains(&self.point_tuple_at(&stages, x)[k]))
                    .collect()
            })
            .collect();
        Ok(Subobject::new_unchecked(self.presheaf.clone(), selection))
    }

    pub fn pullback_left(&self, s: &Subobject) -> Result<Subobject> {
        self.pullback(0, s)
    }

    pub fn pullback_right(&self, s: &Subobject) -> Result<Subobject> {
        self.pullback(1, s)
    }

    /// `S₁ × … × Sₙ`, the meet of all pullbacks.
    pub fn rectangle(&self, parts: &[Subobject]) -> Result<Subobject> {
        if parts.len() != self.arity() {
            return Err(Error::LengthMismatch { expected: self.arity(), got: parts.len() });
        }
        let mut acc = Subobject::full(self.presheaf.clone());
        for (k, s) in parts.iter().enumerate() {
            acc = acc.meet(&self.pullback(k, s)?)?;
        }
        Ok(acc)
    }
}

fn placeholder() -> FinitePresheaf {
    let poset = Arc::new(FinitePoset::new(Vec::new(), Vec::new()).expect("empty poset"));
    FinitePresheaf::new(poset, Vec::new(), |x, _, _| x).expect("empty presheaf")
}

pub fn pullback_left(space: &ProductSpace, s: &Subobject) -> Result<Subobject> {
    space.pullback_left(s)
}

pub fn pullback_right(space: &ProductSpace, s: &Subobject) -> Result<Subobject> {
    space.pullback_right(s)
}

/// Formal join of generators `left ⊗ right`.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorExpression {
    pub terms: Vec<(Subobject, Subobject)>,
}

impl TensorExpression {
    pub fn generator(left: Subobject, right: Subobject) -> Self {
        Self { terms: vec![(left, right)] }
    }

    pub fn bottom() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn join(mut self, other: Self) -> Self {
        self.terms.extend(other.terms);
        self
    }
}

/// The map `⋁ᵢ S₁ⁱ ⊗ S₂ⁱ ↦ ⋃ᵢ S₁ⁱ × S₂ⁱ`.
pub fn h(space: &ProductSpace, t: &TensorExpression) -> Result<Subobject> {
    if space.arity() != 2 {
        return Err(Error::LengthMismatch { expected: 2, got: space.arity() });
    }
    let mut acc = Subobject::empty(space.presheaf().clone());
    for (a, b) in &t.terms {
        acc = acc.join(&space.rectangle(&[a.clone(), b.clone()])?)?;
    }
    Ok(acc)
}

/// Two expressions are equal iff their images under `h` are.
pub fn tensor_equal(space: &ProductSpace, a: &TensorExpression, b: &TensorExpression) -> Result<bool> {
    Ok(h(space, a)? == h(space, b)?)
}

/// A preimage of `sub` under `h`: one rectangle `↓x × ↓y` per point `(x, y)`
/// of `sub` that is not the restriction of another point of `sub`.
pub fn h_inverse_exists(space: &ProductSpace, sub: &Subobject, cap: usize) -> Result<TensorExpression> {
    if space.arity() != 2 {
        return Err(Error::LengthMismatch { expected: 2, got: space.arity() });
    }
    if !Arc::ptr_eq(sub.presheaf(), space.presheaf()) {
        return Err(Error::PresheafMismatch);
    }
    let p = space.presheaf();
    if p.total_points() > cap {
        return Err(Error::CapExceeded { cap });
    }
    let poset = space.poset();
    if sub.is_full() {
        return Ok(TensorExpression::generator(
            Subobject::full(space.factor(0).clone()),
            Subobject::full(space.factor(1).clone()),
        ));
    }
    let mut terms = Vec::new();
    for v in 0..poset.len() {
        for &x in sub.at(v) {
            let covered = (0..poset.len()).any(|u| {
                u != v
                    && poset.leq(v, u)
                    && sub.at(u).iter().any(|&y| p.restrict(y, u, v) == x)
            });
            if covered {
                continue;
            }
            let stages = space.stage_tuple(v);
            let pts = space.point_tuple(v, x);
            terms.push((
                Subobject::generated_by(space.factor(0).clone(), &[(stages[0], pts[0])]),
                Subobject::generated_by(space.factor(1).clone(), &[(stages[1], pts[1])]),
            ));
        }
    }
    Ok(TensorExpression { terms })
}

/// Checks `h(⋀ᵢ aᵢ⊗bᵢ) = h((⋀aᵢ)⊗(⋀bᵢ))`, with the left side computed as
/// the meet of the generator images.
pub fn meet_relation_holds(space: &ProductSpace, pairs: &[(Subobject, Subobject)]) -> Result<bool> {
    let Some((first, rest)) = pairs.split_first() else {
        return Ok(true);
    };
    let mut lhs = h(space, &TensorExpression::generator(first.0.clone(), first.1.clone()))?;
    let (mut a, mut b) = first.clone();
    for (ai, bi) in rest {
        lhs = lhs.meet(&h(space, &TensorExpression::generator(ai.clone(), bi.clone()))?)?;
        a = a.meet(ai)?;
        b = b.meet(bi)?;
    }
    Ok(lhs == h(space, &TensorExpression::generator(a, b))?)
}

/// Checks `⋁ᵢ h(aᵢ⊗b) = h((⋁aᵢ)⊗b)`.
pub fn left_join_relation_holds(space: &ProductSpace, lefts: &[Subobject], right: &Subobject) -> Result<bool> {
    let mut lhs = Subobject::empty(space.presheaf().clone());
    let mut a = Subobject::empty(space.factor(0).clone());
    for ai in lefts {
        lhs = lhs.join(&h(space, &TensorExpression::generator(ai.clone(), right.clone()))?)?;
        a = a.join(ai)?;
    }
    Ok(lhs == h(space, &TensorExpression::generator(a, right.clone()))?)
}

/// Checks `⋁ᵢ h(a⊗bᵢ) = h(a⊗(⋁bᵢ))`.
pub fn right_join_relation_holds(space: &ProductSpace, left: &Subobject, rights: &[Subobject]) -> Result<bool> {
    let mut lhs = Subobject::empty(space.presheaf().clone());
    let mut b = Subobject::empty(space.factor(1).clone());
    for bi in rights {
        lhs = lhs.join(&h(space, &TensorExpression::generator(left.clone(), bi.clone()))?)?;
        b = b.join(bi)?;
    }
    Ok(lhs == h(space, &TensorExpression::generator(left.clone(), b))?)
}

/// Counts for comparing all subobjects of the product presheaf with the
/// images of tensor expressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorCounts {
    pub product_subobjects: usize,
    pub h_images: usize,
    pub left_subobjects: usize,
    pub right_subobjects: usize,
}

/// Exhaustive counts: every subobject of the product presheaf versus every
/// distinct union of rectangles of factor subobjects.
pub fn exhaustive_tensor_counts(space: &ProductSpace, cap: usize) -> Result<TensorCounts> {
    let product = enumerate_subobjects(space.presheaf(), cap)?;
    let lefts = enumerate_subobjects(space.factor(0), cap)?;
    let rights = enumerate_subobjects(space.factor(1), cap)?;
    let mut generators: Vec<Vec<PointSet>> = Vec::new();
    let mut seen_gen = HashSet::new();
    for a in &lefts {
        for b in &rights {
            let r = space.rectangle(&[a.clone(), b.clone()])?;
            if seen_gen.insert(r.selection().to_vec()) {
                generators.push(r.selection().to_vec());
            }
        }
    }
    let empty = vec![PointSet::new(); space.poset().len()];
    let mut images: HashSet<Vec<PointSet>> = HashSet::from([empty.clone()]);
    let mut frontier = vec![empty];
    while let Some(cur) = frontier.pop() {
        for g in &generators {
            let joined: Vec<PointSet> = cur.iter().zip(g).map(|(a, b)| a.union(b).copied().collect()).collect();
            if images.insert(joined.clone()) {
                if images.len() > cap {
                    return Err(Error::CapExceeded { cap });
                }
                frontier.push(joined);
            }
        }
    }
    Ok(TensorCounts {
        product_subobjects: product.len(),
        h_images: images.len(),
        left_subobjects: lefts.len(),
        right_subobjects: rights.len(),
    })
}

/// Tuple of sieves per product stage, one per factor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductOmegaElement {
    pub assignment: Vec<Vec<Sieve>>,
}

impl ProductOmegaElement {
    pub fn at(&self, v: usize) -> &[Sieve] {
        &self.assignment[v]
    }

    /// Component sieves are sieves on the component stages and restrict
    /// componentwise.
    pub fn check(&self, space: &ProductSpace) -> Result<()> {
        let poset = space.poset();
        if self.assignment.len() != poset.len() {
            return Err(Error::LengthMismatch { expected: poset.len(), got: self.assignment.len() });
        }
        for v in 0..poset.len() {
            let stages = space.stage_tuple(v);
            let comps = &self.assignment[v];
            if comps.len() != space.arity() {
                return Err(Error::LengthMismatch { expected: space.arity(), got: comps.len() });
            }
            for (k, s) in comps.iter().enumerate() {
                let fp = space.factor(k).poset();
                if s.apex != stages[k] || !is_sieve(fp, s.apex, &s.members) {
                    return Err(Error::Invariant(format!(
                        "component {k} at {} is not a sieve on its stage",
                        poset.name(v)
                    )));
                }
            }
            for u in poset.down_set(v) {
                let lower = space.stage_tuple(u);
                for (k, s) in comps.iter().enumerate() {
                    if s.restrict(space.factor(k).poset(), lower[k])? != self.assignment[u][k] {
                        return Err(Error::Invariant(format!(
                            "component {k} not compatible along {} <= {}",
                            poset.name(u),
                            poset.name(v)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The sieve on the product poset formed by the Cartesian product of
    /// the component sieves.
    pub fn as_product_sieves(&self, space: &ProductSpace) -> OmegaGlobalElement {
        let poset = space.poset();
        let assignment = (0..poset.len())
            .map(|v| Sieve {
                apex: v,
                members: poset
                    .down_set(v)
                    .into_iter()
                    .filter(|&u| {
                        space
                            .stage_tuple(u)
                            .iter()
                            .zip(&self.assignment[v])
                            .all(|(t, s)| s.members.contains(t))
                    })
                    .collect(),
            })
            .collect();
        OmegaGlobalElement { assignment }
    }
}

/// `j(ω₁ ⊗ … ⊗ ωₙ)(⟨V₁,…,Vₙ⟩) = ⟨ω₁(V₁),…,ωₙ(Vₙ)⟩`.
pub fn j_tuple(space: &ProductSpace, omegas: &[OmegaGlobalElement]) -> Result<ProductOmegaElement> {
    if omegas.len() != space.arity() {
        return Err(Error::LengthMismatch { expected: space.arity(), got: omegas.len() });
    }
    for (k, w) in omegas.iter().enumerate() {
        if w.assignment.len() != space.factor(k).poset().len() {
            return Err(Error::PosetMismatch);
        }
    }
    let assignment = (0..space.poset().len())
        .map(|v| {
            space
                .stage_tuple(v)
                .iter()
                .zip(omegas)
                .map(|(&t, w)| w.assignment[t].clone())
                .collect()
        })
        .collect();
    Ok(ProductOmegaElement { assignment })
}

pub fn j(space: &ProductSpace, w1: &OmegaGlobalElement, w2: &OmegaGlobalElement) -> Result<ProductOmegaElement> {
    j_tuple(space, &[w1.clone(), w2.clone()])
}

/// Truth value of a history proposition `s₁ ⊓ … ⊓ sₙ` given an initial state.
#[derive(Debug, Clone)]
pub struct HistoryTruth<S: Scalar> {
    /// ψ at each time slot.
    pub states: Vec<Ket<S>>,
    /// Single-time truth value of each slot.
    pub slots: Vec<OmegaGlobalElement>,
    /// `j` of the slot truth values.
    pub components: ProductOmegaElement,
    /// Truth value computed directly in the product presheaf.
    pub product_sieve: OmegaGlobalElement,
}

/// Product of context posets with their spectral presheaves.
#[derive(Debug, Clone)]
pub struct ContextProduct<S: Scalar> {
    posets: Vec<ContextPoset<S>>,
    space: ProductSpace,
}

impl<S: Scalar> ContextProduct<S> {
    pub fn new(posets: Vec<ContextPoset<S>>) -> Result<Self> {
        let space = ProductSpace::new(posets.iter().map(|p| p.spectral().clone()).collect())?;
        Ok(Self { posets, space })
    }

    pub fn binary(left: ContextPoset<S>, right: ContextPoset<S>) -> Result<Self> {
        Self::new(vec![left, right])
    }

    pub fn space(&self) -> &ProductSpace {
        &self.space
    }

    pub fn factor(&self, k: usize) -> &ContextPoset<S> {
        &self.posets[k]
    }

    pub fn arity(&self) -> usize {
        self.posets.len()
    }

    /// Product of pseudo-states, `w₁ × … × wₙ`.
    pub fn pseudo_state_product(&self, states: &[PseudoState<S>]) -> Result<Subobject> {
        let parts: Vec<Subobject> = states.iter().map(|w| w.subobject.clone()).collect();
        self.space.rectangle(&parts)
    }

    /// Evolves ψ₁ through the unitaries and computes both the componentwise
    /// sieves (via `j`) and the sieve of the inclusion `w₁×…×wₙ ⊆ s₁×…×sₙ`
    /// in the product presheaf, failing if they differ.
    pub fn history_truth(
        &self,
        psi: &Ket<S>,
        unitaries: &[Matrix<S>],
        props: &[DaseinizedProposition<S>],
    ) -> Result<HistoryTruth<S>> {
        if props.len() != self.arity() {
            return Err(Error::LengthMismatch { expected: self.arity(), got: props.len() });
        }
        if unitaries.len() + 1 != props.len() {
            return Err(Error::LengthMismatch { expected: props.len().saturating_sub(1), got: unitaries.len() });
        }
        let mut states = vec![psi.clone()];
        for u in unitaries {
            let next = states.last().expect("nonempty").evolve(u)?;
            states.push(next);
        }
        let mut pseudo = Vec::with_capacity(states.len());
        let mut slots = Vec::with_capacity(states.len());
        for (k, (state, prop)) in states.iter().zip(props).enumerate() {
            let poset = &self.posets[k];
            if state.dim() != poset.dim() {
                return Err(Error::DimensionMismatch { left: poset.dim(), right: state.dim() });
            }
            if !Arc::ptr_eq(prop.subobject.presheaf(), poset.spectral()) {
                return Err(Error::PosetMismatch);
            }
            let w = pseudo_state(state, poset)?;
            slots.push(truth_of_inclusion(&w.subobject, &prop.subobject)?);
            pseudo.push(w);
        }
        let components = j_tuple(&self.space, &slots)?;
        let w_all = self.pseudo_state_product(&pseudo)?;
        let s_parts: Vec<Subobject> = props.iter().map(|p| p.subobject.clone()).collect();
        let s_all = self.space.rectangle(&s_parts)?;
        let product_sieve = truth_of_inclusion(&w_all, &s_all)?;
        if product_sieve != components.as_product_sieves(&self.space) {
            return Err(Error::Invariant(
                "product-topos truth value does not factor into component sieves".into(),
            ));
        }
        Ok(HistoryTruth { states, slots, components, product_sieve })
    }

    /// Two-time case of [`Self::history_truth`].
    pub fn two_time_truth(
        &self,
        psi: &Ket<S>,
        u: &Matrix<S>,
        s1: &DaseinizedProposition<S>,
        s2: &DaseinizedProposition<S>,
    ) -> Result<HistoryTruth<S>> {
        if self.arity() != 2 {
            return Err(Error::LengthMismatch { expected: 2, got: self.arity() });
        }
        self.history_truth(psi, std::slice::from_ref(u), &[s1.clone(), s2.clone()])
    }
}

/// Truth value of an n-time history over right-nested products.
pub fn n_time_truth<S: Scalar>(
    psi: &Ket<S>,
    unitaries: &[Matrix<S>],
    posets: &[ContextPoset<S>],
    props: &[DaseinizedProposition<S>],
) -> Result<HistoryTruth<S>> {
    if unitaries.len() + 1 != props.len() {
        return Err(Error::LengthMismatch { expected: props.len().saturating_sub(1), got: unitaries.len() });
    }
    if posets.len() != props.len() {
        return Err(Error::LengthMismatch { expected: props.len(), got: posets.len() });
    }
    ContextProduct::new(posets.to_vec())?.history_truth(psi, unitaries, props)
}

/// Sieves at one product stage, compared with pairs of component sieves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifierComparison {
    pub stage: usize,
    /// Down-closed subsets of ↓stage in the product poset.
    pub genuine_sieves: usize,
    /// Tuples of component sieves.
    pub component_tuples: usize,
    /// Distinct Cartesian products of component sieves.
    pub distinct_products: usize,
    /// A genuine sieve that is not a Cartesian product, if one exists.
    pub non_product_witness: Option<BTreeSet<usize>>,
}

/// Compares the sieves on a product stage with tuples of component sieves.
pub fn compare_classifiers(space: &ProductSpace, stage: usize) -> Result<ClassifierComparison> {
    let poset = space.poset();
    let down: Vec<usize> = poset.down_set(stage).into_iter().collect();
    if down.len() > 20 {
        return Err(Error::CapExceeded { cap: 1 << 20 });
    }
    let genuine: Vec<BTreeSet<usize>> = (0u32..(1u32 << down.len()))
        .map(|mask| {
            (0..down.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| down[i])
                .collect::<BTreeSet<usize>>()
        })
        .filter(|set| is_sieve(poset, stage, set))
        .collect();
    let stages = space.stage_tuple(stage);
    let per_factor: Vec<Vec<BTreeSet<usize>>> = stages
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            let fp = space.factor(k).poset();
            let fdown: Vec<usize> = fp.down_set(t).into_iter().collect();
            (0u32..(1u32 << fdown.len()))
                .map(|mask| {
                    (0..fdown.len())
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| fdown[i])
                        .collect::<BTreeSet<usize>>()
                })
                .filter(|set| is_sieve(fp, t, set))
                .collect()
        })
        .collect();
    let mut tuples: Vec<Vec<&BTreeSet<usize>>> = vec![Vec::new()];
    for options in &per_factor {
        tuples = tuples
            .into_iter()
            .flat_map(|prefix| {
                options.iter().map(move |o| {
                    let mut next = prefix.clone();
                    next.push(o);
                    next
                })
            })
            .collect();
    }
    let products: HashSet<BTreeSet<usize>> = tuples
        .iter()
        .map(|tuple| {
            down.iter()
                .copied()
                .filter(|&u| {
                    space
                        .stage_tuple(u)
                        .iter()
                        .zip(tuple)
                        .all(|(t, s)| s.contains(t))
                })
                .collect()
        })
        .collect();
    let non_product_witness = genuine.iter().find(|g| !products.contains(*g)).cloned();
    Ok(ClassifierComparison {
        stage,
        genuine_sieves: genuine.len(),
        component_tuples: tuples.len(),
        distinct_products: products.len(),
        non_product_witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Projector, C64};
    use crate::context::{close_poset, Context};
    use crate::dasein::dasein;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn z_poset() -> ContextPoset {
        let z = Context::from_commuting(2, &[Projector::diag_bits(&[1, 0])]).unwrap();
        close_poset(2, vec![z]).unwrap()
    }

    fn zz() -> ContextProduct<C64> {
        let p = z_poset();
        ContextProduct::binary(p.clone(), p).unwrap()
    }

    fn ket(xs: &[f64]) -> Ket {
        Ket::new(xs.iter().map(|&x| C64::new(x, 0.0)).collect()).unwrap()
    }

    fn hadamard() -> Matrix {
        let h = FRAC_1_SQRT_2;
        Matrix::from_real(&[&[h, h], &[h, -h]]).unwrap()
    }

    #[test]
    fn encoding_round_trips() {
        let prod = zz();
        let space = prod.space();
        assert_eq!(space.poset().len(), 4);
        for v in 0..4 {
            assert_eq!(space.stage_index(&space.stage_tuple(v)), v);
            for x in 0..space.presheaf().stage_size(v) {
                assert_eq!(space.point_index(v, &space.point_tuple(v, x)), x);
            }
        }
        assert_eq!(space.presheaf().stage_sizes(), &[1, 2, 2, 4]);
    }

    #[test]
    fn pullback_examples() {
        let prod = zz();
        let space = prod.space();
        let sigma = prod.factor(0).spectral().clone();
        assert!(space.pullback_left(&Subobject::full(sigma.clone())).unwrap().is_full());
        assert!(space.pullback_left(&Subobject::empty(sigma)).unwrap().is_empty());
        let d = dasein(&Projector::diag_bits(&[1, 0]), prod.factor(0)).unwrap();
        let pb = space.pullback_left(&d.subobject).unwrap();
        // apex <z,z>: λ1 × {μ1, μ2}
        let apex = space.stage_index(&[1, 1]);
        let expected: PointSet = [space.point_index(apex, &[0, 0]), space.point_index(apex, &[0, 1])].into();
        assert_eq!(pb.at(apex), &expected);
    }

    #[test]
    fn h_of_full_is_full() {
        let prod = zz();
        let space = prod.space();
        let t = TensorExpression::generator(
            Subobject::full(space.factor(0).clone()),
            Subobject::full(space.factor(1).clone()),
        );
        assert!(h(space, &t).unwrap().is_full());
        let back = h_inverse_exists(space, &Subobject::full(space.presheaf().clone()), 1000).unwrap();
        assert_eq!(back.terms.len(), 1);
        assert!(back.terms[0].0.is_full() && back.terms[0].1.is_full());
    }

    #[test]
    fn anti_diagonal_needs_two_terms() {
        let prod = zz();
        let space = prod.space();
        let apex = space.stage_index(&[1, 1]);
        let sub = Subobject::generated_by(
            space.presheaf().clone(),
            &[(apex, space.point_index(apex, &[0, 1])), (apex, space.point_index(apex, &[1, 0]))],
        );
        let t = h_inverse_exists(space, &sub, 1000).unwrap();
        assert_eq!(t.terms.len(), 2);
        assert_eq!(h(space, &t).unwrap(), sub);
    }

    #[test]
    fn j_examples() {
        let prod = zz();
        let space = prod.space();
        let p = prod.factor(0).poset();
        let top = OmegaGlobalElement::totally_true(p);
        let bottom = OmegaGlobalElement::totally_false(p);
        let both = j(space, &top, &top).unwrap();
        both.check(space).unwrap();
        assert!(both.as_product_sieves(space).is_totally_true(space.poset()));
        let half = j(space, &top, &bottom).unwrap();
        half.check(space).unwrap();
        assert!(half.assignment.iter().all(|c| c[1].is_empty()));
    }

    #[test]
    fn two_time_examples() {
        let prod = zz();
        let poset = prod.factor(0);
        let zp = ket(&[1.0, 0.0]);
        let up = dasein(&Projector::diag_bits(&[1, 0]), poset).unwrap();
        let down = dasein(&Projector::diag_bits(&[0, 1]), poset).unwrap();
        let id = Matrix::identity(2);

        let t = prod.two_time_truth(&zp, &id, &up, &up).unwrap();
        assert!(t.product_sieve.is_totally_true(prod.space().poset()));

        let t = prod.two_time_truth(&zp, &id, &up, &down).unwrap();
        let apex = prod.space().stage_index(&[1, 1]);
        assert_eq!(t.components.at(apex)[1].members, PointSet::from([0]));
        t.components.check(prod.space()).unwrap();

        let px = Projector::new(Matrix::from_real(&[&[0.5, 0.5], &[0.5, 0.5]]).unwrap()).unwrap();
        let x_ctx = Context::from_commuting(2, std::slice::from_ref(&px)).unwrap();
        let zx = close_poset(2, vec![Context::from_commuting(2, &[Projector::diag_bits(&[1, 0])]).unwrap(), x_ctx]).unwrap();
        let prod = ContextProduct::binary(zx.clone(), zx.clone()).unwrap();
        let s1 = dasein(&Projector::diag_bits(&[1, 0]), &zx).unwrap();
        let s2 = dasein(&px, &zx).unwrap();
        let t = prod.two_time_truth(&zp, &hadamard(), &s1, &s2).unwrap();
        assert!(t.slots[1].is_totally_true(zx.poset()));
    }

    #[test]
    fn n_time_reductions() {
        let poset = z_poset();
        let zp = ket(&[1.0, 0.0]);
        let up = dasein(&Projector::diag_bits(&[1, 0]), &poset).unwrap();
        let one = n_time_truth(&zp, &[], std::slice::from_ref(&poset), std::slice::from_ref(&up)).unwrap();
        assert_eq!(one.product_sieve, one.slots[0]);
        let id = Matrix::identity(2);
        let three = n_time_truth(
            &zp,
            &[id.clone(), id.clone()],
            &[poset.clone(), poset.clone(), poset.clone()],
            &[up.clone(), up.clone(), up.clone()],
        )
        .unwrap();
        assert_eq!(three.product_sieve.assignment.len(), 8);
        assert!(three.product_sieve.is_totally_true(&FinitePoset::clone(
            ContextProduct::new(vec![poset.clone(), poset.clone(), poset.clone()]).unwrap().space().poset()
        )));
        let err = n_time_truth(&zp, &[id], std::slice::from_ref(&poset), &[up]).unwrap_err();
        assert!(matches!(err, Error::LengthMismatch { .. }));
    }

    #[test]
    fn tensor_counts_on_z_squared() {
        let counts = exhaustive_tensor_counts(zz().space(), 100_000).unwrap();
        assert_eq!(counts.left_subobjects, 5);
        assert_eq!(counts.product_subobjects, counts.h_images);
    }

    #[test]
    fn product_classifier_has_non_product_sieves() {
        let prod = zz();
        let apex = prod.space().stage_index(&[1, 1]);
        let cmp = compare_classifiers(prod.space(), apex).unwrap();
        // down-sets of the 2x2 grid vs 3x3 pairs of chain sieves
        assert_eq!(cmp.genuine_sieves, 6);
        assert_eq!(cmp.component_tuples, 9);
        assert_eq!(cmp.distinct_products, 5);
        assert!(cmp.non_product_witness.is_some());
    }
}

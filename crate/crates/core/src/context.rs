//! Contexts: abelian projector algebras given by their minimal projectors,
//! and finite meet-closed posets of them.
//!
//! In finite dimensions a commutative subalgebra is spanned by a resolution
//! of the identity into pairwise orthogonal minimal projectors. Its Gel'fand
//! spectrum has one point per minimal projector: point `i` sends a projector
//! of the algebra to 1 iff that projector dominates `Q_i`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::algebra::{Matrix, Projector, Scalar, C64};
use crate::error::{Error, Result};
use crate::presheaf::{FinitePoset, FinitePresheaf};

/// Abelian algebra in canonical form: minimals sorted by descending
/// lexicographic order of their entries rounded to 12 decimals.
#[derive(Clone)]
pub struct Context<S = C64> {
    dim: usize,
    minimals: Vec<Projector<S>>,
}

/// A point of the Gel'fand spectrum, identified by the index of its minimal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpectrumPoint {
    pub index: usize,
}

impl<S: Scalar> Context<S> {
    /// The algebra C·1.
    pub fn trivial(dim: usize) -> Self {
        Self { dim, minimals: vec![Projector::identity(dim)] }
    }

    /// Validates orthogonality, completeness and nonzero minimals.
    pub fn from_minimals(dim: usize, minimals: Vec<Projector<S>>) -> Result<Self> {
        if minimals.is_empty() {
            return Err(Error::InvalidContext("no minimal projectors".into()));
        }
        for (i, q) in minimals.iter().enumerate() {
            if q.dim() != dim {
                return Err(Error::DimensionMismatch { left: dim, right: q.dim() });
            }
            if q.is_zero() {
                return Err(Error::InvalidContext(format!("minimal {i} is zero")));
            }
            for (j, r) in minimals.iter().enumerate().skip(i + 1) {
                if !q.is_orthogonal_to(r) {
                    return Err(Error::InvalidContext(format!("minimals {i} and {j} are not orthogonal")));
                }
            }
        }
        let sum = Projector::orthogonal_sum(dim, &minimals);
        if !sum.matrix().approx_eq(&Matrix::identity(dim)) {
            return Err(Error::InvalidContext("minimals do not sum to the identity".into()));
        }
        Ok(Self::canonical(dim, minimals))
    }

    fn canonical(dim: usize, mut minimals: Vec<Projector<S>>) -> Self {
        minimals.sort_by_cached_key(|q| std::cmp::Reverse(q.sort_key()));
        Self { dim, minimals }
    }

    /// Algebra generated by a commuting family: its minimals are the nonzero
    /// products of each generator or its complement.
    pub fn from_commuting(dim: usize, generators: &[Projector<S>]) -> Result<Self> {
        for (i, p) in generators.iter().enumerate() {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch { left: dim, right: p.dim() });
            }
            for (j, q) in generators.iter().enumerate().skip(i + 1) {
                if !p.commutes_with(q) {
                    return Err(Error::NonCommuting { first: i, second: j });
                }
            }
        }
        let mut minimals = vec![Projector::identity(dim)];
        for p in generators {
            let pc = p.complement();
            minimals = minimals
                .iter()
                .flat_map(|q| [q.matrix().mul_unchecked(p.matrix()), q.matrix().mul_unchecked(pc.matrix())])
                .filter(|m| !m.is_zero())
                .map(Projector::new)
                .collect::<Result<_>>()?;
        }
        Ok(Self::canonical(dim, minimals))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn minimals(&self) -> &[Projector<S>] {
        &self.minimals
    }

    pub fn minimal(&self, point: SpectrumPoint) -> &Projector<S> {
        &self.minimals[point.index]
    }

    /// Number of spectrum points.
    pub fn size(&self) -> usize {
        self.minimals.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.minimals.len() == 1
    }

    pub fn spectrum(&self) -> Vec<SpectrumPoint> {
        (0..self.size()).map(|index| SpectrumPoint { index }).collect()
    }

    /// Indices of minimals `Q` with `Q·p = Q`.
    pub fn minimals_under(&self, p: &Projector<S>) -> BTreeSet<usize> {
        (0..self.size()).filter(|&i| self.minimals[i].leq(p)).collect()
    }

    /// Whether `p` is a sum of this context's minimals.
    pub fn contains(&self, p: &Projector<S>) -> bool {
        if p.dim() != self.dim {
            return false;
        }
        let under = self.minimals_under(p);
        Projector::orthogonal_sum(self.dim, under.iter().map(|&i| &self.minimals[i])).approx_eq(p)
    }

    /// λ_i(p) ∈ {0, 1} for a projector of the algebra.
    pub fn evaluate(&self, point: SpectrumPoint, p: &Projector<S>) -> u8 {
        u8::from(self.minimals[point.index].leq(p))
    }

    /// Inclusion of algebras: every minimal of `self` lies in `other`.
    pub fn leq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.minimals.iter().all(|q| other.contains(q))
    }

    /// Largest context below both, found by enumerating subset sums of
    /// `self`'s minimals that also belong to `other`.
    pub fn meet(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: other.dim });
        }
        let k = self.size();
        if k >= usize::BITS as usize {
            return Err(Error::InvalidContext("too many minimals to enumerate".into()));
        }
        let mut common: Vec<u64> = Vec::new();
        for mask in 1u64..(1u64 << k) {
            let sum = Projector::orthogonal_sum(
                self.dim,
                (0..k).filter(|i| mask >> i & 1 == 1).map(|i| &self.minimals[i]),
            );
            if other.contains(&sum) {
                common.push(mask);
            }
        }
        // atoms of the common Boolean algebra: nonzero elements with no
        // nonzero common element strictly inside them
        let atoms: Vec<Projector<S>> = common
            .iter()
            .filter(|&&m| !common.iter().any(|&c| c != m && c & m == c))
            .map(|&m| {
                Projector::orthogonal_sum(
                    self.dim,
                    (0..k).filter(|i| m >> i & 1 == 1).map(|i| &self.minimals[i]),
                )
            })
            .collect();
        Self::from_minimals(self.dim, atoms)
    }

    /// Restriction of a spectrum point to a smaller context: the unique point
    /// of `lower` whose minimal dominates this point's minimal.
    pub fn restrict_point(&self, point: SpectrumPoint, lower: &Self) -> Result<SpectrumPoint> {
        if !lower.leq(self) {
            return Err(Error::NotBelow { below: format!("{lower:?}"), above: format!("{self:?}") });
        }
        let q = &self.minimals[point.index];
        lower
            .minimals
            .iter()
            .position(|r| q.leq(r))
            .map(|index| SpectrumPoint { index })
            .ok_or_else(|| Error::Invariant("restriction target not found".into()))
    }

    pub fn sort_key(&self) -> Vec<Vec<(i64, i64)>> {
        self.minimals.iter().map(Projector::sort_key).collect()
    }
}

impl<S: Scalar> PartialEq for Context<S> {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.sort_key() == other.sort_key()
    }
}

impl<S: Scalar> fmt::Debug for Context<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.minimals.iter().map(Projector::matrix)).finish()
    }
}

pub fn context_from_commuting<S: Scalar>(dim: usize, ps: &[Projector<S>]) -> Result<Context<S>> {
    Context::from_commuting(dim, ps)
}

pub fn leq<S: Scalar>(v1: &Context<S>, v2: &Context<S>) -> bool {
    v1.leq(v2)
}

pub fn meet<S: Scalar>(v1: &Context<S>, v2: &Context<S>) -> Result<Context<S>> {
    v1.meet(v2)
}

pub fn spectrum<S: Scalar>(v: &Context<S>) -> Vec<SpectrumPoint> {
    v.spectrum()
}

pub fn restrict<S: Scalar>(point: SpectrumPoint, from: &Context<S>, to: &Context<S>) -> Result<SpectrumPoint> {
    from.restrict_point(point, to)
}

pub const TRIVIAL_NAME: &str = "trivial";

/// Finite meet-closed poset of contexts containing the trivial algebra,
/// with its spectral presheaf.
#[derive(Clone)]
pub struct ContextPoset<S = C64> {
    dim: usize,
    contexts: Vec<Context<S>>,
    poset: Arc<FinitePoset>,
    spectral: Arc<FinitePresheaf>,
}

impl<S: Scalar> ContextPoset<S> {
    /// Closes named contexts under pairwise meets and adds the trivial
    /// context. Order: trivial, inputs (deduplicated), generated meets.
    pub fn close(dim: usize, named: Vec<(String, Context<S>)>) -> Result<Self> {
        let mut names = vec![TRIVIAL_NAME.to_owned()];
        let mut contexts = vec![Context::trivial(dim)];
        for (name, ctx) in named {
            if ctx.dim() != dim {
                return Err(Error::DimensionMismatch { left: dim, right: ctx.dim() });
            }
            if !contexts.contains(&ctx) {
                names.push(name);
                contexts.push(ctx);
            }
        }
        let mut i = 0;
        while i < contexts.len() {
            for j in 0..i {
                let m = contexts[i].meet(&contexts[j])?;
                if !contexts.contains(&m) {
                    names.push(format!("{}^{}", names[j], names[i]));
                    contexts.push(m);
                }
            }
            i += 1;
        }
        let n = contexts.len();
        let leq: Vec<Vec<bool>> = (0..n)
            .map(|a| (0..n).map(|b| contexts[a].leq(&contexts[b])).collect())
            .collect();
        let poset = Arc::new(FinitePoset::new(names, leq)?);
        let sizes = contexts.iter().map(Context::size).collect();
        let spectral = FinitePresheaf::new(poset.clone(), sizes, |x, upper, lower| {
            contexts[upper]
                .restrict_point(SpectrumPoint { index: x }, &contexts[lower])
                .map(|p| p.index)
                .expect("lower context is below upper")
        })?;
        Ok(Self { dim, contexts, poset, spectral: Arc::new(spectral) })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.contexts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.contexts.is_empty()
    }

    pub fn context(&self, v: usize) -> &Context<S> {
        &self.contexts[v]
    }

    pub fn contexts(&self) -> &[Context<S>] {
        &self.contexts
    }

    pub fn name(&self, v: usize) -> &str {
        self.poset.name(v)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.poset.names().iter().position(|n| n == name)
    }

    pub fn trivial(&self) -> usize {
        0
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.poset.leq(a, b)
    }

    pub fn poset(&self) -> &Arc<FinitePoset> {
        &self.poset
    }

    /// The spectral presheaf Σ over this poset.
    pub fn spectral(&self) -> &Arc<FinitePresheaf> {
        &self.spectral
    }
}

impl<S: Scalar> fmt::Debug for ContextPoset<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ContextPoset")
            .field("contexts", &self.poset.names())
            .finish()
    }
}

/// Closes unnamed contexts; inputs are named `V1`, `V2`, ...
pub fn close_poset<S: Scalar>(dim: usize, cs: Vec<Context<S>>) -> Result<ContextPoset<S>> {
    let named = cs
        .into_iter()
        .enumerate()
        .map(|(i, c)| (format!("V{}", i + 1), c))
        .collect();
    ContextPoset::close(dim, named)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pz() -> Projector {
        Projector::diag_bits(&[1, 0])
    }

    fn px() -> Projector {
        Projector::new(Matrix::from_real(&[&[0.5, 0.5], &[0.5, 0.5]]).unwrap()).unwrap()
    }

    fn z() -> Context {
        Context::from_commuting(2, &[pz()]).unwrap()
    }

    fn x() -> Context {
        Context::from_commuting(2, &[px()]).unwrap()
    }

    #[test]
    fn from_commuting_examples() {
        assert_eq!(z().minimals(), &[Projector::diag_bits(&[1, 0]), Projector::diag_bits(&[0, 1])]);
        assert_eq!(Context::<C64>::from_commuting(2, &[]).unwrap(), Context::trivial(2));
        let c = Context::from_commuting(
            3,
            &[Projector::<C64>::diag_bits(&[1, 0, 0]), Projector::diag_bits(&[1, 1, 0])],
        )
        .unwrap();
        assert_eq!(
            c.minimals(),
            &[
                Projector::diag_bits(&[1, 0, 0]),
                Projector::diag_bits(&[0, 1, 0]),
                Projector::diag_bits(&[0, 0, 1])
            ]
        );
    }

    #[test]
    fn non_commuting_generators_named() {
        let err = Context::from_commuting(2, &[pz(), Projector::identity(2), px()]).unwrap_err();
        assert_eq!(err, Error::NonCommuting { first: 0, second: 2 });
    }

    #[test]
    fn leq_examples() {
        let t = Context::<C64>::trivial(2);
        assert!(t.leq(&z()));
        assert!(z().leq(&z()));
        assert!(!z().leq(&x()));
    }

    #[test]
    fn meet_examples() {
        assert_eq!(z().meet(&z()).unwrap(), z());
        assert_eq!(z().meet(&x()).unwrap(), Context::trivial(2));
        assert_eq!(z().meet(&Context::trivial(2)).unwrap(), Context::trivial(2));
    }

    #[test]
    fn meet_in_dimension_three() {
        let full = Context::from_commuting(
            3,
            &[Projector::<C64>::diag_bits(&[1, 0, 0]), Projector::diag_bits(&[0, 1, 0])],
        )
        .unwrap();
        let coarse = Context::from_commuting(3, &[Projector::diag_bits(&[1, 0, 0])]).unwrap();
        let other = Context::from_commuting(3, &[Projector::diag_bits(&[0, 0, 1])]).unwrap();
        assert_eq!(full.meet(&coarse).unwrap(), coarse);
        assert_eq!(coarse.meet(&other).unwrap(), Context::trivial(3));
    }

    #[test]
    fn close_poset_examples() {
        let p = close_poset(2, vec![z()]).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.poset().strict_arrow_count(), 1);

        let p = close_poset(2, vec![z(), x()]).unwrap();
        assert_eq!(p.len(), 3);
        assert!(p.leq(0, 1) && p.leq(0, 2));
        assert!(!p.leq(1, 2) && !p.leq(2, 1));

        assert_eq!(close_poset::<C64>(2, vec![]).unwrap().len(), 1);
    }

    #[test]
    fn spectrum_sizes() {
        assert_eq!(Context::<C64>::trivial(2).spectrum().len(), 1);
        assert_eq!(z().spectrum().len(), 2);
        let diag3 = Context::from_commuting(
            3,
            &[Projector::<C64>::diag_bits(&[1, 0, 0]), Projector::diag_bits(&[0, 1, 0])],
        )
        .unwrap();
        assert_eq!(diag3.spectrum().len(), 3);
    }

    #[test]
    fn restriction_examples() {
        let t = Context::<C64>::trivial(2);
        for pt in z().spectrum() {
            assert_eq!(z().restrict_point(pt, &t).unwrap(), SpectrumPoint { index: 0 });
            assert_eq!(z().restrict_point(pt, &z()).unwrap(), pt);
        }
        let diag3 = Context::from_commuting(
            3,
            &[Projector::<C64>::diag_bits(&[1, 0, 0]), Projector::diag_bits(&[0, 1, 0])],
        )
        .unwrap();
        let coarse = Context::from_commuting(3, &[Projector::diag_bits(&[1, 0, 0])]).unwrap();
        assert_eq!(coarse.minimals()[1], Projector::diag_bits(&[0, 1, 1]));
        let lambda2 = SpectrumPoint { index: 1 };
        assert_eq!(diag3.minimal(lambda2), &Projector::diag_bits(&[0, 1, 0]));
        assert_eq!(diag3.restrict_point(lambda2, &coarse).unwrap(), SpectrumPoint { index: 1 });
        assert!(matches!(z().restrict_point(lambda2, &x()), Err(Error::NotBelow { .. })));
    }

    #[test]
    fn evaluation_rule() {
        let c = z();
        assert_eq!(c.evaluate(SpectrumPoint { index: 0 }, &pz()), 1);
        assert_eq!(c.evaluate(SpectrumPoint { index: 1 }, &pz()), 0);
        assert_eq!(c.evaluate(SpectrumPoint { index: 1 }, &Projector::identity(2)), 1);
    }
}

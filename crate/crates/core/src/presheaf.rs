//! Finite presheaves of finite sets over finite posets.
//!
//! A presheaf assigns a finite set of points to every poset element and a
//! restriction map to every pair `lower ≤ upper`. Subobjects are
//! restriction-closed selections of points; with finite stages every subset
//! is clopen, so the subobjects form a Heyting algebra with the usual
//! Kripke-Joyal implication. Truth values are global elements of the
//! presheaf of sieves.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type PointSet = BTreeSet<usize>;

/// Default cap on candidate assignments explored by exhaustive searches.
pub const DEFAULT_SEARCH_CAP: usize = 1_000_000;

/// Finite partial order given by its full `≤` relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePoset {
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
    heights: Vec<usize>,
}

impl FinitePoset {
    pub fn new(names: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self> {
        let n = names.len();
        if leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return Err(Error::Malformed("order relation must be square over the elements".into()));
        }
        for a in 0..n {
            if !leq[a][a] {
                return Err(Error::Malformed(format!("order is not reflexive at {}", names[a])));
            }
            for b in 0..n {
                if a != b && leq[a][b] && leq[b][a] {
                    return Err(Error::Malformed(format!(
                        "order is not antisymmetric: {} and {}",
                        names[a], names[b]
                    )));
                }
                for c in 0..n {
                    if leq[a][b] && leq[b][c] && !leq[a][c] {
                        return Err(Error::Malformed("order is not transitive".into()));
                    }
                }
            }
        }
        let heights = compute_heights(&leq);
        Ok(Self { names, leq, heights })
    }

    /// Cartesian product with the componentwise order; element `(i, j)` has
    /// index `i * other.len() + j`.
    pub fn product(&self, other: &Self) -> Self {
        let (n1, n2) = (self.len(), other.len());
        let mut names = Vec::with_capacity(n1 * n2);
        for a in &self.names {
            for b in &other.names {
                names.push(format!("<{a},{b}>"));
            }
        }
        let mut leq = vec![vec![false; n1 * n2]; n1 * n2];
        for x in 0..n1 * n2 {
            for y in 0..n1 * n2 {
                leq[x][y] = self.leq[x / n2][y / n2] && other.leq[x % n2][y % n2];
            }
        }
        let heights = compute_heights(&leq);
        Self { names, leq, heights }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    /// Length of the longest chain ending at `v`.
    pub fn height(&self, v: usize) -> usize {
        self.heights[v]
    }

    pub fn down_set(&self, v: usize) -> PointSet {
        (0..self.len()).filter(|&u| self.leq[u][v]).collect()
    }

    /// Elements sorted by decreasing height, ties by index.
    pub fn top_down_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(self.heights[v]), v));
        order
    }

    /// Number of pairs `a < b`.
    pub fn strict_arrow_count(&self) -> usize {
        (0..self.len())
            .flat_map(|a| (0..self.len()).map(move |b| (a, b)))
            .filter(|&(a, b)| a != b && self.leq[a][b])
            .count()
    }
}

fn compute_heights(leq: &[Vec<bool>]) -> Vec<usize> {
    let n = leq.len();
    let mut heights = vec![0usize; n];
    // elements sorted by down-set size are a linear extension
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (0..n).filter(|&u| leq[u][v]).count());
    for &v in &order {
        heights[v] = (0..n)
            .filter(|&u| u != v && leq[u][v])
            .map(|u| heights[u] + 1)
            .max()
            .unwrap_or(0);
    }
    heights
}

/// Presheaf of finite sets: stage `v` holds points `0..stage_size(v)`.
///
/// Subobjects compare presheaves by identity (`Arc` pointer), not structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePresheaf {
    poset: Arc<FinitePoset>,
    stage_sizes: Vec<usize>,
    // restrictions[upper][lower] is Some(map) iff lower ≤ upper
    restrictions: Vec<Vec<Option<Vec<usize>>>>,
}

impl FinitePresheaf {
    /// Builds a presheaf from a restriction function `(point, upper, lower) ↦ point`,
    /// validating identities and composition along every chain.
    pub fn new(
        poset: Arc<FinitePoset>,
        stage_sizes: Vec<usize>,
        restrict: impl Fn(usize, usize, usize) -> usize,
    ) -> Result<Self> {
        let n = poset.len();
        if stage_sizes.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: stage_sizes.len() });
        }
        let mut restrictions = vec![vec![None; n]; n];
        for upper in 0..n {
            for lower in 0..n {
                if !poset.leq(lower, upper) {
                    continue;
                }
                let map: Vec<usize> = (0..stage_sizes[upper])
                    .map(|x| restrict(x, upper, lower))
                    .collect();
                if map.iter().any(|&y| y >= stage_sizes[lower]) {
                    return Err(Error::Malformed(format!(
                        "restriction {} -> {} leaves the target stage",
                        poset.name(upper),
                        poset.name(lower)
                    )));
                }
                if upper == lower && map.iter().enumerate().any(|(x, &y)| x != y) {
                    return Err(Error::Malformed(format!(
                        "restriction at {} is not the identity",
                        poset.name(upper)
                    )));
                }
                restrictions[upper][lower] = Some(map);
            }
        }
        let presheaf = Self { poset, stage_sizes, restrictions };
        presheaf.check_composition()?;
        Ok(presheaf)
    }

    fn check_composition(&self) -> Result<()> {
        let n = self.poset.len();
        for a in 0..n {
            for b in 0..n {
                if !self.poset.leq(b, a) {
                    continue;
                }
                for c in 0..n {
                    if !self.poset.leq(c, b) {
                        continue;
                    }
                    for x in 0..self.stage_sizes[a] {
                        if self.restrict(self.restrict(x, a, b), b, c) != self.restrict(x, a, c) {
                            return Err(Error::Malformed(format!(
                                "restrictions do not compose along {} >= {} >= {}",
                                self.poset.name(a),
                                self.poset.name(b),
                                self.poset.name(c)
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn poset(&self) -> &Arc<FinitePoset> {
        &self.poset
    }

    pub fn stage_size(&self, v: usize) -> usize {
        self.stage_sizes[v]
    }

    pub fn stage_sizes(&self) -> &[usize] {
        &self.stage_sizes
    }

    pub fn total_points(&self) -> usize {
        self.stage_sizes.iter().sum()
    }

    /// Restriction of point `x` at stage `upper` to stage `lower ≤ upper`.
    ///
    /// Panics if `lower` is not below `upper`.
    pub fn restrict(&self, x: usize, upper: usize, lower: usize) -> usize {
        self.restrictions[upper][lower]
            .as_ref()
            .unwrap_or_else(|| {
                panic!(
                    "{} is not below {}",
                    self.poset.name(lower),
                    self.poset.name(upper)
                )
            })[x]
    }

    pub fn try_restrict(&self, x: usize, upper: usize, lower: usize) -> Result<usize> {
        match &self.restrictions[upper][lower] {
            Some(map) => Ok(map[x]),
            None => Err(Error::NotBelow {
                below: self.poset.name(lower).to_owned(),
                above: self.poset.name(upper).to_owned(),
            }),
        }
    }
}

/// Restriction-closed selection of points.
#[derive(Clone)]
pub struct Subobject {
    presheaf: Arc<FinitePresheaf>,
    selection: Vec<PointSet>,
}

impl PartialEq for Subobject {
    fn eq(&self, other: &Self) -> bool {
        same_presheaf(&self.presheaf, &other.presheaf) && self.selection == other.selection
    }
}

impl Eq for Subobject {}

impl fmt::Debug for Subobject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut map = f.debug_map();
        for (v, sel) in self.selection.iter().enumerate() {
            map.entry(&self.presheaf.poset.name(v), sel);
        }
        map.finish()
    }
}

fn same_presheaf(a: &Arc<FinitePresheaf>, b: &Arc<FinitePresheaf>) -> bool {
    Arc::ptr_eq(a, b)
}

impl Subobject {
    /// Validates restriction-closure.
    pub fn new(presheaf: Arc<FinitePresheaf>, selection: Vec<PointSet>) -> Result<Self> {
        let n = presheaf.poset.len();
        if selection.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: selection.len() });
        }
        for (v, sel) in selection.iter().enumerate() {
            if sel.iter().any(|&x| x >= presheaf.stage_size(v)) {
                return Err(Error::Malformed(format!(
                    "point outside stage {}",
                    presheaf.poset.name(v)
                )));
            }
        }
        let sub = Self { presheaf, selection };
        if let Some(stage) = sub.closure_violation() {
            return Err(Error::NotRestrictionClosed { stage });
        }
        Ok(sub)
    }

    pub(crate) fn new_unchecked(presheaf: Arc<FinitePresheaf>, selection: Vec<PointSet>) -> Self {
        let sub = Self { presheaf, selection };
        debug_assert!(sub.closure_violation().is_none());
        sub
    }

    /// Smallest subobject containing the given points.
    pub fn generated_by(presheaf: Arc<FinitePresheaf>, points: &[(usize, usize)]) -> Self {
        let n = presheaf.poset.len();
        let mut selection = vec![PointSet::new(); n];
        for &(v, x) in points {
            for lower in 0..n {
                if presheaf.poset.leq(lower, v) {
                    selection[lower].insert(presheaf.restrict(x, v, lower));
                }
            }
        }
        Self { presheaf, selection }
    }

    fn closure_violation(&self) -> Option<usize> {
        let poset = &self.presheaf.poset;
        for upper in 0..poset.len() {
            for lower in 0..poset.len() {
                if lower == upper || !poset.leq(lower, upper) {
                    continue;
                }
                if self.selection[upper]
                    .iter()
                    .any(|&x| !self.selection[lower].contains(&self.presheaf.restrict(x, upper, lower)))
                {
                    return Some(upper);
                }
            }
        }
        None
    }

    pub fn is_restriction_closed(&self) -> bool {
        self.closure_violation().is_none()
    }

    pub fn full(presheaf: Arc<FinitePresheaf>) -> Self {
        let selection = presheaf.stage_sizes.iter().map(|&k| (0..k).collect()).collect();
        Self { presheaf, selection }
    }

    pub fn empty(presheaf: Arc<FinitePresheaf>) -> Self {
        let selection = vec![PointSet::new(); presheaf.poset.len()];
        Self { presheaf, selection }
    }

    pub fn presheaf(&self) -> &Arc<FinitePresheaf> {
        &self.presheaf
    }

    pub fn at(&self, v: usize) -> &PointSet {
        &self.selection[v]
    }

    pub fn selection(&self) -> &[PointSet] {
        &self.selection
    }

    pub fn is_full(&self) -> bool {
        self.selection.iter().enumerate().all(|(v, s)| s.len() == self.presheaf.stage_size(v))
    }

    pub fn is_empty(&self) -> bool {
        self.selection.iter().all(PointSet::is_empty)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if same_presheaf(&self.presheaf, &other.presheaf) {
            Ok(())
        } else {
            Err(Error::PresheafMismatch)
        }
    }

    fn stagewise(&self, other: &Self, f: impl Fn(&PointSet, &PointSet) -> PointSet) -> Result<Self> {
        self.check_same(other)?;
        let selection = self
            .selection
            .iter()
            .zip(&other.selection)
            .map(|(a, b)| f(a, b))
            .collect();
        Ok(Self { presheaf: self.presheaf.clone(), selection })
    }

    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.stagewise(other, |a, b| a.intersection(b).copied().collect())
    }

    pub fn join(&self, other: &Self) -> Result<Self> {
        self.stagewise(other, |a, b| a.union(b).copied().collect())
    }

    /// Heyting implication: x ∈ (a⇒b)(V) iff for every V' ≤ V,
    /// x|V' ∈ a(V') implies x|V' ∈ b(V').
    pub fn implies(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let p = &self.presheaf;
        let poset = &p.poset;
        let selection = (0..poset.len())
            .map(|v| {
                let below = poset.down_set(v);
                (0..p.stage_size(v))
                    .filter(|&x| {
                        below.iter().all(|&w| {
                            let y = p.restrict(x, v, w);
                            !self.selection[w].contains(&y) || other.selection[w].contains(&y)
                        })
                    })
                    .collect()
            })
            .collect();
        Ok(Self { presheaf: p.clone(), selection })
    }

    /// Pseudo-complement, a ⇒ ⊥.
    pub fn not(&self) -> Self {
        self.implies(&Self::empty(self.presheaf.clone()))
            .expect("same presheaf")
    }

    /// self(V) ⊆ other(V) at every stage.
    pub fn includes_in(&self, other: &Self) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.selection.iter().zip(&other.selection).all(|(a, b)| a.is_subset(b)))
    }
}

pub fn meet_sub(a: &Subobject, b: &Subobject) -> Result<Subobject> {
    a.meet(b)
}

pub fn join_sub(a: &Subobject, b: &Subobject) -> Result<Subobject> {
    a.join(b)
}

pub fn implies_sub(a: &Subobject, b: &Subobject) -> Result<Subobject> {
    a.implies(b)
}

pub fn not_sub(a: &Subobject) -> Subobject {
    a.not()
}

/// True iff `a(V) ⊆ b(V)` at every stage.
pub fn includes(a: &Subobject, b: &Subobject) -> Result<bool> {
    a.includes_in(b)
}

/// Downward-closed set of elements below an apex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Sieve {
    pub apex: usize,
    pub members: PointSet,
}

impl Sieve {
    pub fn principal(poset: &FinitePoset, apex: usize) -> Self {
        Self { apex, members: poset.down_set(apex) }
    }

    pub fn empty(apex: usize) -> Self {
        Self { apex, members: PointSet::new() }
    }

    pub fn new(poset: &FinitePoset, apex: usize, members: PointSet) -> Result<Self> {
        if !is_sieve(poset, apex, &members) {
            return Err(Error::Invariant(format!(
                "{members:?} is not a sieve on {}",
                poset.name(apex)
            )));
        }
        Ok(Self { apex, members })
    }

    pub fn is_principal(&self, poset: &FinitePoset) -> bool {
        self.members == poset.down_set(self.apex)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// S ∩ ↓lower, as a sieve on `lower`.
    pub fn restrict(&self, poset: &FinitePoset, lower: usize) -> Result<Self> {
        if !poset.leq(lower, self.apex) {
            return Err(Error::NotBelow {
                below: poset.name(lower).to_owned(),
                above: poset.name(self.apex).to_owned(),
            });
        }
        let members = self
            .members
            .iter()
            .copied()
            .filter(|&u| poset.leq(u, lower))
            .collect();
        Ok(Self { apex: lower, members })
    }
}

pub fn principal_sieve(poset: &FinitePoset, v: usize) -> Sieve {
    Sieve::principal(poset, v)
}

/// Members lie below the apex and are downward closed.
pub fn is_sieve(poset: &FinitePoset, apex: usize, members: &PointSet) -> bool {
    members.iter().all(|&m| {
        m < poset.len()
            && poset.leq(m, apex)
            && (0..poset.len()).all(|u| !poset.leq(u, m) || members.contains(&u))
    })
}

pub fn restrict_sieve(poset: &FinitePoset, sieve: &Sieve, lower: usize) -> Result<Sieve> {
    sieve.restrict(poset, lower)
}

/// Global element of the sieve presheaf: one sieve per stage, compatible
/// under restriction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaGlobalElement {
    pub assignment: Vec<Sieve>,
}

impl OmegaGlobalElement {
    pub fn totally_true(poset: &FinitePoset) -> Self {
        Self { assignment: (0..poset.len()).map(|v| Sieve::principal(poset, v)).collect() }
    }

    pub fn totally_false(poset: &FinitePoset) -> Self {
        Self { assignment: (0..poset.len()).map(Sieve::empty).collect() }
    }

    pub fn at(&self, v: usize) -> &Sieve {
        &self.assignment[v]
    }

    /// Checks apexes, sieve-hood and compatibility with restriction.
    pub fn check(&self, poset: &FinitePoset) -> Result<()> {
        if self.assignment.len() != poset.len() {
            return Err(Error::LengthMismatch { expected: poset.len(), got: self.assignment.len() });
        }
        for (v, s) in self.assignment.iter().enumerate() {
            if s.apex != v {
                return Err(Error::Invariant(format!("sieve at {} has the wrong apex", poset.name(v))));
            }
            if !is_sieve(poset, v, &s.members) {
                return Err(Error::Invariant(format!("assignment at {} is not a sieve", poset.name(v))));
            }
            for lower in poset.down_set(v) {
                if s.restrict(poset, lower)? != self.assignment[lower] {
                    return Err(Error::Invariant(format!(
                        "assignment is not compatible along {} <= {}",
                        poset.name(lower),
                        poset.name(v)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_totally_true(&self, poset: &FinitePoset) -> bool {
        self.assignment.iter().all(|s| s.is_principal(poset))
    }
}

/// Truth value of `a ⊆ b`: at stage V, the sieve of V' ≤ V such that
/// a(V'') ⊆ b(V'') for every V'' ≤ V'.
pub fn truth_of_inclusion(a: &Subobject, b: &Subobject) -> Result<OmegaGlobalElement> {
    a.check_same(b)?;
    let poset = &a.presheaf.poset;
    let holds: Vec<bool> = (0..poset.len())
        .map(|v| a.selection[v].is_subset(&b.selection[v]))
        .collect();
    let hereditary: Vec<bool> = (0..poset.len())
        .map(|v| poset.down_set(v).into_iter().all(|u| holds[u]))
        .collect();
    let assignment = (0..poset.len())
        .map(|v| Sieve {
            apex: v,
            members: poset.down_set(v).into_iter().filter(|&u| hereditary[u]).collect(),
        })
        .collect();
    Ok(OmegaGlobalElement { assignment })
}

/// All compatible families `v ↦ x_v`, found by depth-first search from the
/// highest stages with forward propagation of forced restrictions.
pub fn global_sections(presheaf: &FinitePresheaf, cap: usize) -> Result<Vec<Vec<usize>>> {
    let order = presheaf.poset.top_down_order();
    let mut assigned: Vec<Option<usize>> = vec![None; presheaf.poset.len()];
    let mut found = Vec::new();
    let mut candidates = 0usize;
    search_sections(presheaf, &order, 0, &mut assigned, &mut found, &mut candidates, cap)?;
    Ok(found)
}

fn search_sections(
    p: &FinitePresheaf,
    order: &[usize],
    depth: usize,
    assigned: &mut Vec<Option<usize>>,
    found: &mut Vec<Vec<usize>>,
    candidates: &mut usize,
    cap: usize,
) -> Result<()> {
    let Some(&v) = order.get(depth) else {
        found.push(assigned.iter().map(|x| x.expect("every stage assigned")).collect());
        return Ok(());
    };
    if assigned[v].is_some() {
        return search_sections(p, order, depth + 1, assigned, found, candidates, cap);
    }
    for x in 0..p.stage_size(v) {
        *candidates += 1;
        if *candidates > cap {
            return Err(Error::CapExceeded { cap });
        }
        let mut forced = vec![v];
        assigned[v] = Some(x);
        let mut ok = true;
        for lower in 0..p.poset.len() {
            if lower == v || !p.poset.leq(lower, v) {
                continue;
            }
            let y = p.restrict(x, v, lower);
            match assigned[lower] {
                Some(z) if z != y => {
                    ok = false;
                    break;
                }
                Some(_) => {}
                None => {
                    assigned[lower] = Some(y);
                    forced.push(lower);
                }
            }
        }
        if ok {
            search_sections(p, order, depth + 1, assigned, found, candidates, cap)?;
        }
        for w in forced {
            assigned[w] = None;
        }
    }
    Ok(())
}

/// Every subobject of the presheaf, by enumerating restriction-closed point
/// sets stage by stage from the bottom up.
pub fn enumerate_subobjects(presheaf: &Arc<FinitePresheaf>, cap: usize) -> Result<Vec<Subobject>> {
    let poset = presheaf.poset.clone();
    let mut elements = Vec::new();
    let mut stages: Vec<usize> = (0..poset.len()).collect();
    stages.sort_by_key(|&v| (poset.height(v), v));
    for v in stages {
        for x in 0..presheaf.stage_size(v) {
            elements.push((v, x));
        }
    }
    let mut selection = vec![PointSet::new(); poset.len()];
    let mut out = Vec::new();
    enumerate_rec(presheaf, &elements, 0, &mut selection, &mut out, cap)?;
    Ok(out)
}

fn enumerate_rec(
    p: &Arc<FinitePresheaf>,
    elements: &[(usize, usize)],
    idx: usize,
    selection: &mut Vec<PointSet>,
    out: &mut Vec<Subobject>,
    cap: usize,
) -> Result<()> {
    let Some(&(v, x)) = elements.get(idx) else {
        if out.len() >= cap {
            return Err(Error::CapExceeded { cap });
        }
        out.push(Subobject { presheaf: p.clone(), selection: selection.clone() });
        return Ok(());
    };
    enumerate_rec(p, elements, idx + 1, selection, out, cap)?;
    let admissible = (0..p.poset.len())
        .filter(|&w| w != v && p.poset.leq(w, v))
        .all(|w| selection[w].contains(&p.restrict(x, v, w)));
    if admissible {
        selection[v].insert(x);
        enumerate_rec(p, elements, idx + 1, selection, out, cap)?;
        selection[v].remove(&x);
    }
    Ok(())
}

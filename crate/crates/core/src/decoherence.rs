//! Consistent-histories baseline: class operators and the decoherence
//! functional `d(α,β) = tr(C̃_α† ρ C̃_β)`.
//!
//! `Evolution::unitary(t, t')` evolves states from `t'` to `t`. The class
//! operator `C̃_α = U(t₀,t₁)α₁U(t₁,t₂)α₂⋯αₙU(tₙ,t₀)` telescopes to the
//! product `α₁(t₁)⋯αₙ(tₙ)` of Heisenberg operators `α(t) = U(t₀,t)αU(t,t₀)`,
//! so the time-ordered product `Ĉ_α = αₙ(tₙ)⋯α₁(t₁)` is its adjoint.

use std::collections::BTreeMap;

use nalgebra::DMatrix;

use crate::algebra::{Ket, Matrix, Projector, Scalar, C64};
use crate::error::{Error, Result};
use crate::settings;

pub type TimeLabel = i64;

/// Homogeneous history in the Schrödinger picture.
#[derive(Debug, Clone)]
pub struct TimedHistory<S: Scalar = C64> {
    times: Vec<TimeLabel>,
    projectors: Vec<Projector<S>>,
}

impl<S: Scalar> TimedHistory<S> {
    pub fn new(times: Vec<TimeLabel>, projectors: Vec<Projector<S>>) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::InvalidHistory("no time slots".into()));
        }
        if times.len() != projectors.len() {
            return Err(Error::LengthMismatch { expected: times.len(), got: projectors.len() });
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidHistory(format!("times {times:?} are not strictly increasing")));
        }
        let dim = projectors[0].dim();
        if let Some(p) = projectors.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch { left: dim, right: p.dim() });
        }
        Ok(Self { times, projectors })
    }

    pub fn times(&self) -> &[TimeLabel] {
        &self.times
    }

    pub fn projectors(&self) -> &[Projector<S>] {
        &self.projectors
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].dim()
    }

    /// Projector at `t`, the identity where the history is silent.
    pub fn at(&self, t: TimeLabel) -> Projector<S> {
        self.times
            .iter()
            .position(|&s| s == t)
            .map(|i| self.projectors[i].clone())
            .unwrap_or_else(|| Projector::identity(self.dim()))
    }
}

/// History proposition: the unit history, homogeneous histories, joins of
/// disjoint histories and negations.
#[derive(Debug, Clone)]
pub enum History<S: Scalar = C64> {
    Unit { dim: usize },
    Homogeneous(TimedHistory<S>),
    Join(Vec<History<S>>),
    Not(Box<History<S>>),
}

impl<S: Scalar> History<S> {
    pub fn dim(&self) -> usize {
        match self {
            Self::Unit { dim } => *dim,
            Self::Homogeneous(h) => h.dim(),
            Self::Join(parts) => parts.first().map_or(0, History::dim),
            Self::Not(h) => h.dim(),
        }
    }

    /// Time labels mentioned anywhere in the proposition.
    pub fn support(&self) -> Vec<TimeLabel> {
        let mut out = Vec::new();
        self.collect_support(&mut out);
        out.sort_unstable();
        out.dedup();
        out
    }

    fn collect_support(&self, out: &mut Vec<TimeLabel>) {
        match self {
            Self::Unit { .. } => {}
            Self::Homogeneous(h) => out.extend_from_slice(h.times()),
            Self::Join(parts) => parts.iter().for_each(|p| p.collect_support(out)),
            Self::Not(h) => h.collect_support(out),
        }
    }

    /// HPO projector over the given time support (identity at silent times).
    pub fn hpo_projector(&self, support: &[TimeLabel]) -> Result<Projector<S>> {
        let dim = self.dim();
        match self {
            Self::Unit { .. } => {
                let mut acc = Projector::identity(dim);
                for _ in 1..support.len().max(1) {
                    acc = acc.kron(&Projector::identity(dim))?;
                }
                Ok(acc)
            }
            Self::Homogeneous(h) => {
                let factors: Vec<Projector<S>> = support.iter().map(|&t| h.at(t)).collect();
                crate::hpo::hpo_projector(&factors)
            }
            Self::Join(parts) => {
                let ps = parts.iter().map(|p| p.hpo_projector(support)).collect::<Result<Vec<_>>>()?;
                let total = Unit::<S>::hpo_dim(dim, support.len());
                let sum = ps.iter().try_fold(Matrix::zeros(total), |acc, p| acc.add(p.matrix()))?;
                Projector::new(sum).map_err(|_| Error::NotDisjoint("join of overlapping histories".into()))
            }
            Self::Not(h) => Ok(h.hpo_projector(support)?.complement()),
        }
    }

    /// Whether the HPO projectors of the two propositions are orthogonal.
    pub fn disjoint_from(&self, other: &Self) -> Result<bool> {
        let mut support = self.support();
        support.extend(other.support());
        support.sort_unstable();
        support.dedup();
        let a = self.hpo_projector(&support)?;
        let b = other.hpo_projector(&support)?;
        Ok(a.is_orthogonal_to(&b))
    }

    /// `α ∨ β` for disjoint histories.
    pub fn join(parts: Vec<Self>) -> Result<Self> {
        for (i, a) in parts.iter().enumerate() {
            for (j, b) in parts.iter().enumerate().skip(i + 1) {
                if !a.disjoint_from(b)? {
                    return Err(Error::NotDisjoint(format!("join terms {i} and {j} overlap")));
                }
            }
        }
        Ok(Self::Join(parts))
    }

    pub fn negation(self) -> Self {
        Self::Not(Box::new(self))
    }
}

struct Unit<S>(std::marker::PhantomData<S>);

impl<S: Scalar> Unit<S> {
    fn hpo_dim(dim: usize, slots: usize) -> usize {
        dim.pow(slots.max(1) as u32)
    }
}

/// Unitary propagators `U(t, t₀)` from a fixed origin; `U(t₂,t₁)` is
/// `U(t₂,t₀)·U(t₁,t₀)†`, so the composition law holds by construction.
#[derive(Debug, Clone)]
pub struct Evolution<S: Scalar = C64> {
    dim: usize,
    origin: TimeLabel,
    from_origin: Option<BTreeMap<TimeLabel, Matrix<S>>>,
}

impl<S: Scalar> Evolution<S> {
    /// `U ≡ I` at every time.
    pub fn trivial(dim: usize, origin: TimeLabel) -> Self {
        Self { dim, origin, from_origin: None }
    }

    /// `times[0]` is the origin; `steps[k] = U(times[k+1], times[k])`.
    pub fn from_steps(times: Vec<TimeLabel>, steps: Vec<Matrix<S>>) -> Result<Self> {
        let Some(&origin) = times.first() else {
            return Err(Error::InvalidHistory("evolution needs an origin time".into()));
        };
        if steps.len() + 1 != times.len() {
            return Err(Error::LengthMismatch { expected: times.len() - 1, got: steps.len() });
        }
        if times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidHistory("evolution times must increase".into()));
        }
        let dim = steps.first().map_or(0, Matrix::dim);
        let mut acc = Matrix::identity(dim.max(1));
        let mut map = BTreeMap::from([(origin, acc.clone())]);
        for (step, &t) in steps.iter().zip(&times[1..]) {
            if step.dim() != dim {
                return Err(Error::DimensionMismatch { left: dim, right: step.dim() });
            }
            if !step.is_unitary() {
                return Err(Error::NotUnitary(format!("step to time {t}")));
            }
            acc = step.matmul(&acc)?;
            map.insert(t, acc.clone());
        }
        Ok(Self { dim: dim.max(1), origin, from_origin: Some(map) })
    }

    pub fn origin(&self) -> TimeLabel {
        self.origin
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn propagator(&self, t: TimeLabel) -> Result<Matrix<S>> {
        match &self.from_origin {
            None => Ok(Matrix::identity(self.dim)),
            Some(map) => map
                .get(&t)
                .cloned()
                .ok_or_else(|| Error::InvalidHistory(format!("no unitary known for time {t}"))),
        }
    }

    /// `U(t, t')`: evolution from `t'` to `t`.
    pub fn unitary(&self, t: TimeLabel, t_prime: TimeLabel) -> Result<Matrix<S>> {
        self.propagator(t)?.matmul(&self.propagator(t_prime)?.adjoint())
    }

    /// Heisenberg-picture operator `U(t₀,t)·A·U(t,t₀)` with `t₀` the origin.
    pub fn heisenberg(&self, a: &Matrix<S>, t: TimeLabel) -> Result<Matrix<S>> {
        let u = self.unitary(t, self.origin)?;
        u.adjoint().matmul(a)?.matmul(&u)
    }
}

/// Self-adjoint, positive semidefinite, unit trace.
#[derive(Debug, Clone)]
pub struct DensityMatrix<S: Scalar = C64> {
    matrix: Matrix<S>,
}

impl<S: Scalar> DensityMatrix<S> {
    pub fn new(matrix: Matrix<S>) -> Result<Self> {
        if !matrix.is_hermitian() {
            return Err(Error::NotDensity("not self-adjoint".into()));
        }
        if !(matrix.trace() - S::one()).is_zero() {
            return Err(Error::NotDensity(format!("trace is {:?}", matrix.trace().to_c64())));
        }
        let min = min_eigenvalue(&matrix.to_c64());
        if min < -settings::epsilon() {
            return Err(Error::NotDensity(format!("negative eigenvalue {min}")));
        }
        Ok(Self { matrix })
    }

    pub fn pure(psi: &Ket<S>) -> Self {
        Self { matrix: psi.projector().into_matrix() }
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.matrix
    }
}

fn min_eigenvalue(m: &Matrix<C64>) -> f64 {
    let d = m.dim();
    let dm = DMatrix::from_fn(d, d, |i, j| *m.get(i, j));
    dm.symmetric_eigen().eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

/// `C̃_α` for a homogeneous history with the scenario origin `t₀`.
pub fn class_operator<S: Scalar>(h: &TimedHistory<S>, ev: &Evolution<S>, t0: TimeLabel) -> Result<Matrix<S>> {
    if h.dim() != ev.dim() {
        return Err(Error::DimensionMismatch { left: ev.dim(), right: h.dim() });
    }
    let mut acc = ev.unitary(t0, h.times[0])?;
    for (k, (p, &t)) in h.projectors.iter().zip(&h.times).enumerate() {
        acc = acc.matmul(p.matrix())?;
        let next = h.times.get(k + 1).copied().unwrap_or(t0);
        acc = acc.matmul(&ev.unitary(t, next)?)?;
    }
    Ok(acc)
}

/// Class operator of a general history proposition: sums over disjoint
/// joins and `1 − C̃` for negations.
pub fn history_class_operator<S: Scalar>(h: &History<S>, ev: &Evolution<S>, t0: TimeLabel) -> Result<Matrix<S>> {
    match h {
        History::Unit { dim } => Ok(Matrix::identity(*dim)),
        History::Homogeneous(th) => class_operator(th, ev, t0),
        History::Join(parts) => parts.iter().try_fold(Matrix::zeros(h.dim()), |acc, p| {
            acc.add(&history_class_operator(p, ev, t0)?)
        }),
        History::Not(inner) => Matrix::identity(h.dim()).sub(&history_class_operator(inner, ev, t0)?),
    }
}

/// `Ĉ_α = αₙ(tₙ)⋯α₁(t₁)`.
pub fn heisenberg_class_operator<S: Scalar>(h: &TimedHistory<S>, ev: &Evolution<S>) -> Result<Matrix<S>> {
    let mut acc = Matrix::identity(h.dim());
    for (p, &t) in h.projectors.iter().zip(&h.times) {
        acc = ev.heisenberg(p.matrix(), t)?.matmul(&acc)?;
    }
    Ok(acc)
}

/// `d(α,β) = tr(C̃_α† ρ C̃_β)`.
pub fn decoherence<S: Scalar>(
    alpha: &History<S>,
    beta: &History<S>,
    rho: &DensityMatrix<S>,
    ev: &Evolution<S>,
) -> Result<S> {
    if alpha.dim() != beta.dim() {
        return Err(Error::DimensionMismatch { left: alpha.dim(), right: beta.dim() });
    }
    let t0 = ev.origin();
    let ca = history_class_operator(alpha, ev, t0)?;
    let cb = history_class_operator(beta, ev, t0)?;
    Ok(ca.adjoint().matmul(rho.matrix())?.matmul(&cb)?.trace())
}

/// `d(α∨β, γ) = d(α,γ) + d(β,γ)` for disjoint α, β.
pub fn check_additivity<S: Scalar>(
    alpha: &History<S>,
    beta: &History<S>,
    gamma: &History<S>,
    rho: &DensityMatrix<S>,
    ev: &Evolution<S>,
) -> Result<bool> {
    let joined = History::join(vec![alpha.clone(), beta.clone()])?;
    let lhs = decoherence(&joined, gamma, rho, ev)?;
    let rhs = decoherence(alpha, gamma, rho, ev)? + decoherence(beta, gamma, rho, ev)?;
    Ok((lhs - rhs).is_zero())
}

/// `d(¬α, γ) = d(1,γ) − d(α,γ)`.
pub fn check_negation<S: Scalar>(
    alpha: &History<S>,
    gamma: &History<S>,
    rho: &DensityMatrix<S>,
    ev: &Evolution<S>,
) -> Result<bool> {
    let unit = History::Unit { dim: alpha.dim() };
    let lhs = decoherence(&alpha.clone().negation(), gamma, rho, ev)?;
    let rhs = decoherence(&unit, gamma, rho, ev)? - decoherence(alpha, gamma, rho, ev)?;
    Ok((lhs - rhs).is_zero())
}

#[derive(Debug, Clone)]
pub struct ConsistencyReport<S: Scalar> {
    pub consistent: bool,
    pub d_matrix: Vec<Vec<S>>,
    pub probability_sum: S,
}

/// Consistent iff every off-diagonal `d(αᵢ,αⱼ)` vanishes; with
/// `real_part_only` only the real parts are required to vanish.
pub fn is_consistent<S: Scalar>(
    histories: &[History<S>],
    rho: &DensityMatrix<S>,
    ev: &Evolution<S>,
    real_part_only: bool,
) -> Result<ConsistencyReport<S>> {
    let n = histories.len();
    let mut d_matrix = vec![vec![S::zero(); n]; n];
    for (i, a) in histories.iter().enumerate() {
        for (j, b) in histories.iter().enumerate() {
            d_matrix[i][j] = decoherence(a, b, rho, ev)?;
        }
    }
    let eps = settings::epsilon();
    let consistent = (0..n).all(|i| {
        (0..n).all(|j| {
            i == j
                || if real_part_only {
                    if S::EXACT {
                        let re_only = (d_matrix[i][j].clone() + d_matrix[i][j].conj()) / (S::one() + S::one());
                        re_only.is_zero()
                    } else {
                        d_matrix[i][j].to_c64().re.abs() <= eps
                    }
                } else {
                    d_matrix[i][j].is_zero()
                }
        })
    });
    let probability_sum = (0..n).fold(S::zero(), |acc, i| acc + d_matrix[i][i].clone());
    Ok(ConsistencyReport { consistent, d_matrix, probability_sum })
}

/// The linear map `A₁⊗⋯⊗Aₙ ↦ Aₙ(tₙ)⋯A₁(t₁)` applied to an operator on the
/// n-fold tensor space, by expansion in matrix units.
pub fn hpo_linear_class_operator<S: Scalar>(
    x: &Matrix<S>,
    times: &[TimeLabel],
    ev: &Evolution<S>,
) -> Result<Matrix<S>> {
    let d = ev.dim();
    let n = times.len();
    if d.checked_pow(n as u32) != Some(x.dim()) {
        return Err(Error::DimensionMismatch { left: d.pow(n as u32), right: x.dim() });
    }
    // Heisenberg images of the matrix units E_ab at each time
    let mut units: Vec<Vec<Matrix<S>>> = Vec::with_capacity(n);
    for &t in times {
        let mut per_time = Vec::with_capacity(d * d);
        for a in 0..d {
            for b in 0..d {
                let mut e = Matrix::zeros(d);
                e.set(a, b, S::one());
                per_time.push(ev.heisenberg(&e, t)?);
            }
        }
        units.push(per_time);
    }
    let digits = |mut idx: usize| {
        let mut out = vec![0; n];
        for k in (0..n).rev() {
            out[k] = idx % d;
            idx /= d;
        }
        out
    };
    let mut acc = Matrix::zeros(d);
    for row in 0..x.dim() {
        for col in 0..x.dim() {
            let coeff = x.get(row, col);
            if coeff.is_zero() {
                continue;
            }
            let (r, c) = (digits(row), digits(col));
            let mut term = Matrix::identity(d);
            for k in 0..n {
                term = units[k][r[k] * d + c[k]].matmul(&term)?;
            }
            acc = acc.add(&term.scale(coeff))?;
        }
    }
    Ok(acc)
}

/// `d` evaluated through HPO representatives: `tr(D(X_α) ρ D(X_β)†)`.
pub fn hpo_decoherence<S: Scalar>(
    x_alpha: &Matrix<S>,
    x_beta: &Matrix<S>,
    times: &[TimeLabel],
    rho: &DensityMatrix<S>,
    ev: &Evolution<S>,
) -> Result<S> {
    let ca = hpo_linear_class_operator(x_alpha, times, ev)?;
    let cb = hpo_linear_class_operator(x_beta, times, ev)?;
    Ok(ca.matmul(rho.matrix())?.matmul(&cb.adjoint())?.trace())
}

//! Scenario files: JSON documents naming kets, operators, projectors and
//! contexts, the context poset of every time slot, and the queries each
//! command runs.
//!
//! Matrix and ket entries are either a real value or an `[re, im]` pair.
//! A value is a JSON number or a string: a decimal, a fraction such as
//! `"-3/4"`, or `"sqrt(r)"` with an optional sign. Square roots of
//! non-square rationals are only accepted in floating-point mode.

use std::collections::{BTreeMap, BTreeSet};

use num::{BigInt, BigRational, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use sheafhist_core::algebra::{spectral_projector, Ket, Matrix, Projector, Scalar};
use sheafhist_core::context::{Context, ContextPoset};
use sheafhist_core::decoherence::{DensityMatrix, Evolution, History, TimeLabel, TimedHistory};
use sheafhist_core::Error;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawScenario {
    pub name: String,
    #[serde(default)]
    pub description: String,
    /// Named operators, referenced by unitaries, observables and densities.
    #[serde(default)]
    pub matrices: BTreeMap<String, MatrixSpec>,
    #[serde(default)]
    pub kets: BTreeMap<String, Vec<Value>>,
    #[serde(default)]
    pub unitaries: BTreeMap<String, MatrixSpec>,
    #[serde(default)]
    pub projectors: BTreeMap<String, ProjectorSpec>,
    /// Named commuting generating families (projector names).
    #[serde(default)]
    pub contexts: BTreeMap<String, Vec<String>>,
    /// One context poset per time slot.
    pub slots: Vec<SlotSpec>,
    #[serde(default)]
    pub daseinize: Vec<DaseinQuery>,
    #[serde(default)]
    pub truth: Vec<TruthQuery>,
    #[serde(default)]
    pub histories: Vec<HistoryQuery>,
    #[serde(default)]
    pub decoherence: Option<DecoherenceSpec>,
    #[serde(default)]
    pub entangled: Option<EntangledSpec>,
    #[serde(default)]
    pub verify: VerifySpec,
    /// Commands this scenario is meant for.
    #[serde(default)]
    pub checks: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixSpec {
    Named(String),
    Literal(Vec<Vec<Value>>),
    Kron {
        kron: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum ProjectorSpec {
    Matrix { matrix: MatrixSpec },
    Observable { observable: String, delta: Vec<Value> },
    Ket { ket: String },
    Span { span: Vec<Vec<Value>> },
    Kron { kron: Vec<String> },
    Complement { complement: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlotSpec {
    pub dim: usize,
    pub contexts: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DaseinQuery {
    pub proposition: String,
    #[serde(default)]
    pub slot: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruthQuery {
    pub state: String,
    pub proposition: String,
    #[serde(default)]
    pub slot: usize,
}

/// `propositions[k]` is asserted at slot `k`; `unitaries[k]` evolves the
/// state from slot `k` to slot `k + 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HistoryQuery {
    pub state: String,
    #[serde(default)]
    pub unitaries: Vec<String>,
    pub propositions: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecoherenceSpec {
    #[serde(default)]
    pub state: Option<String>,
    #[serde(default)]
    pub density: Option<MatrixSpec>,
    /// Evolution times; `times[0]` is the origin. Empty means `U ≡ I`.
    #[serde(default)]
    pub times: Vec<TimeLabel>,
    /// `steps[k]` evolves from `times[k]` to `times[k + 1]`.
    #[serde(default)]
    pub steps: Vec<String>,
    pub histories: Vec<HistorySpec>,
    /// Histories whose mutual consistency is reported; all by default.
    #[serde(default)]
    pub family: Vec<String>,
    #[serde(default)]
    pub real_part_only: bool,
}

/// Exactly one of `projectors` (with `times`), `join`, `not` or `unit`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HistorySpec {
    pub name: String,
    #[serde(default)]
    pub times: Vec<TimeLabel>,
    #[serde(default)]
    pub projectors: Vec<String>,
    #[serde(default)]
    pub join: Vec<String>,
    #[serde(default)]
    pub not: Option<String>,
    #[serde(default)]
    pub unit: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntangledSpec {
    pub projector: String,
    pub product_terms: Vec<String>,
    pub left: String,
    pub right: String,
    pub generators: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySpec {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub samples: Option<usize>,
}

/// Decoherence data resolved against the scenario.
#[derive(Debug, Clone)]
pub struct DecoherenceSetup<S: Scalar> {
    pub rho: DensityMatrix<S>,
    pub evolution: Evolution<S>,
    pub histories: BTreeMap<String, History<S>>,
    pub family: Vec<String>,
    pub real_part_only: bool,
}

/// A validated scenario over the scalar field `S`.
#[derive(Debug, Clone)]
pub struct Scenario<S: Scalar> {
    pub raw: RawScenario,
    pub digest: String,
    pub matrices: BTreeMap<String, Matrix<S>>,
    pub kets: BTreeMap<String, Ket<S>>,
    pub unitaries: BTreeMap<String, Matrix<S>>,
    pub projectors: BTreeMap<String, Projector<S>>,
    pub contexts: BTreeMap<String, Context<S>>,
    pub slots: Vec<ContextPoset<S>>,
    pub decoherence: Option<DecoherenceSetup<S>>,
}

impl<S: Scalar> Scenario<S> {
    pub fn ket(&self, name: &str) -> Result<&Ket<S>, CliError> {
        self.kets.get(name).ok_or_else(|| unresolved("ket", name))
    }

    pub fn projector(&self, name: &str) -> Result<&Projector<S>, CliError> {
        self.projectors.get(name).ok_or_else(|| unresolved("projector", name))
    }

    pub fn unitary(&self, name: &str) -> Result<&Matrix<S>, CliError> {
        self.unitaries.get(name).ok_or_else(|| unresolved("unitary", name))
    }

    pub fn context(&self, name: &str) -> Result<&Context<S>, CliError> {
        self.contexts.get(name).ok_or_else(|| unresolved("context", name))
    }

    pub fn slot(&self, k: usize) -> Result<&ContextPoset<S>, CliError> {
        self.slots.get(k).ok_or_else(|| CliError::invalid(format!("slot {k}"), "no such time slot"))
    }
}

fn unresolved(kind: &str, name: &str) -> CliError {
    CliError::invalid(format!("{kind} '{name}'"), "is not declared")
}

/// Reads, parses and validates a scenario file.
pub fn load_scenario<S: Scalar>(path: &std::path::Path) -> Result<Scenario<S>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    parse_scenario(&text)
}

pub fn parse_scenario<S: Scalar>(text: &str) -> Result<Scenario<S>, CliError> {
    let raw: RawScenario = serde_json::from_str(text).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let digest = Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect();
    resolve(raw, digest)
}

pub fn resolve<S: Scalar>(raw: RawScenario, digest: String) -> Result<Scenario<S>, CliError> {
    let mut matrices = BTreeMap::new();
    for name in raw.matrices.keys() {
        resolve_matrix(&raw, name, &mut matrices, &mut BTreeSet::new())?;
    }
    let mut kets = BTreeMap::new();
    for (name, entries) in &raw.kets {
        let object = format!("ket '{name}'");
        let v = entries.iter().map(|e| scalar::<S>(e)).collect::<Result<Vec<S>, String>>().map_err(|m| CliError::invalid(&object, m))?;
        kets.insert(name.clone(), Ket::new(v).map_err(|e| CliError::core(&object, e))?);
    }
    let mut unitaries = BTreeMap::new();
    for (name, spec) in &raw.unitaries {
        let object = format!("unitary '{name}'");
        let m = matrix_of(&raw, spec, &mut matrices, &object)?;
        if !m.is_unitary() {
            return Err(CliError::invalid(object, "is not unitary"));
        }
        unitaries.insert(name.clone(), m);
    }
    let mut projectors = BTreeMap::new();
    for name in raw.projectors.keys() {
        resolve_projector(&raw, name, &mut matrices, &kets, &mut projectors, &mut BTreeSet::new())?;
    }
    let mut contexts = BTreeMap::new();
    for (name, gens) in &raw.contexts {
        let object = format!("context '{name}'");
        let ps = gens
            .iter()
            .map(|g| projectors.get(g).cloned().ok_or_else(|| unresolved("projector", g)))
            .collect::<Result<Vec<Projector<S>>, CliError>>()?;
        let Some(dim) = ps.first().map(Projector::dim) else {
            return Err(CliError::invalid(object, "has an empty generating family"));
        };
        let ctx = Context::from_commuting(dim, &ps).map_err(|e| match e {
            Error::NonCommuting { first, second } => CliError::invalid(
                &object,
                format!("projectors '{}' and '{}' do not commute", gens[first], gens[second]),
            ),
            other => CliError::core(&object, other),
        })?;
        contexts.insert(name.clone(), ctx);
    }
    let mut slots = Vec::with_capacity(raw.slots.len());
    if raw.slots.is_empty() {
        return Err(CliError::invalid("slots", "at least one time slot is required"));
    }
    for (k, slot) in raw.slots.iter().enumerate() {
        let object = format!("slot {k}");
        let mut named = Vec::with_capacity(slot.contexts.len());
        for c in &slot.contexts {
            let ctx = contexts.get(c).ok_or_else(|| unresolved("context", c))?;
            if ctx.dim() != slot.dim {
                return Err(CliError::invalid(&object, format!("context '{c}' has dimension {} not {}", ctx.dim(), slot.dim)));
            }
            named.push((c.clone(), ctx.clone()));
        }
        slots.push(ContextPoset::close(slot.dim, named).map_err(|e| CliError::core(&object, e))?);
    }
    let mut scenario = Scenario { raw, digest, matrices, kets, unitaries, projectors, contexts, slots, decoherence: None };
    check_queries(&scenario)?;
    scenario.decoherence = match &scenario.raw.decoherence {
        Some(spec) => Some(resolve_decoherence(&scenario, spec)?),
        None => None,
    };
    Ok(scenario)
}

fn check_queries<S: Scalar>(s: &Scenario<S>) -> Result<(), CliError> {
    let dim_check = |object: String, got: usize, slot: usize| -> Result<(), CliError> {
        let want = s.slot(slot)?.dim();
        if got != want {
            return Err(CliError::invalid(object, format!("has dimension {got} but slot {slot} has dimension {want}")));
        }
        Ok(())
    };
    for q in &s.raw.daseinize {
        dim_check(format!("daseinize query '{}'", q.proposition), s.projector(&q.proposition)?.dim(), q.slot)?;
    }
    for q in &s.raw.truth {
        dim_check(format!("truth query state '{}'", q.state), s.ket(&q.state)?.dim(), q.slot)?;
        dim_check(format!("truth query proposition '{}'", q.proposition), s.projector(&q.proposition)?.dim(), q.slot)?;
    }
    for (i, q) in s.raw.histories.iter().enumerate() {
        let object = format!("history query {i}");
        if q.propositions.is_empty() || q.unitaries.len() + 1 != q.propositions.len() {
            return Err(CliError::invalid(object, "needs one more proposition than unitaries"));
        }
        dim_check(format!("{object} state '{}'", q.state), s.ket(&q.state)?.dim(), 0)?;
        for (k, p) in q.propositions.iter().enumerate() {
            dim_check(format!("{object} proposition '{p}'"), s.projector(p)?.dim(), k)?;
        }
        for (k, u) in q.unitaries.iter().enumerate() {
            let u = s.unitary(u)?;
            dim_check(format!("{object} unitary {k}"), u.dim(), k)?;
            dim_check(format!("{object} unitary {k}"), u.dim(), k + 1)?;
        }
    }
    if let Some(e) = &s.raw.entangled {
        s.projector(&e.projector)?;
        for t in e.product_terms.iter().chain(&e.generators) {
            s.projector(t)?;
        }
        s.context(&e.left)?;
        s.context(&e.right)?;
    }
    Ok(())
}

fn resolve_decoherence<S: Scalar>(s: &Scenario<S>, spec: &DecoherenceSpec) -> Result<DecoherenceSetup<S>, CliError> {
    let object = "decoherence";
    let rho = match (&spec.state, &spec.density) {
        (Some(k), None) => DensityMatrix::pure(s.ket(k)?),
        (None, Some(m)) => {
            let mut cache = s.matrices.clone();
            let m = matrix_of(&s.raw, m, &mut cache, "decoherence density")?;
            DensityMatrix::new(m).map_err(|e| CliError::core("decoherence density", e))?
        }
        _ => return Err(CliError::invalid(object, "give exactly one of 'state' and 'density'")),
    };
    let dim = rho.matrix().dim();
    let evolution = if spec.times.is_empty() {
        if !spec.steps.is_empty() {
            return Err(CliError::invalid(object, "'steps' need 'times'"));
        }
        Evolution::trivial(dim, 0)
    } else {
        let steps = spec.steps.iter().map(|u| s.unitary(u).cloned()).collect::<Result<Vec<_>, _>>()?;
        Evolution::from_steps(spec.times.clone(), steps).map_err(|e| CliError::core("decoherence evolution", e))?
    };
    if evolution.dim() != dim {
        return Err(CliError::invalid(object, format!("evolution has dimension {} but the state has {dim}", evolution.dim())));
    }
    let mut histories: BTreeMap<String, History<S>> = BTreeMap::new();
    for h in &spec.histories {
        let object = format!("history '{}'", h.name);
        if histories.contains_key(&h.name) {
            return Err(CliError::invalid(object, "is declared twice"));
        }
        let kinds = [!h.projectors.is_empty(), !h.join.is_empty(), h.not.is_some(), h.unit];
        if kinds.iter().filter(|&&k| k).count() != 1 {
            return Err(CliError::invalid(object, "needs exactly one of 'projectors', 'join', 'not', 'unit'"));
        }
        let lookup = |n: &String| {
            histories
                .get(n)
                .cloned()
                .ok_or_else(|| CliError::invalid(&object, format!("refers to '{n}', which is not declared before it")))
        };
        let history = if h.unit {
            History::Unit { dim }
        } else if let Some(n) = &h.not {
            lookup(n)?.negation()
        } else if !h.join.is_empty() {
            let parts = h.join.iter().map(lookup).collect::<Result<Vec<_>, _>>()?;
            History::join(parts).map_err(|e| CliError::core(&object, e))?
        } else {
            let ps = h.projectors.iter().map(|p| s.projector(p).cloned()).collect::<Result<Vec<_>, _>>()?;
            if let Some(p) = ps.iter().find(|p| p.dim() != dim) {
                return Err(CliError::invalid(object, format!("has a projector of dimension {} but the state has {dim}", p.dim())));
            }
            History::Homogeneous(TimedHistory::new(h.times.clone(), ps).map_err(|e| CliError::core(&object, e))?)
        };
        for t in history.support() {
            evolution.unitary(t, evolution.origin()).map_err(|e| CliError::core(&object, e))?;
        }
        histories.insert(h.name.clone(), history);
    }
    let family = if spec.family.is_empty() {
        spec.histories.iter().map(|h| h.name.clone()).collect()
    } else {
        for n in &spec.family {
            if !histories.contains_key(n) {
                return Err(unresolved("history", n));
            }
        }
        spec.family.clone()
    };
    Ok(DecoherenceSetup { rho, evolution, histories, family, real_part_only: spec.real_part_only })
}

fn resolve_matrix<S: Scalar>(
    raw: &RawScenario,
    name: &str,
    done: &mut BTreeMap<String, Matrix<S>>,
    visiting: &mut BTreeSet<String>,
) -> Result<Matrix<S>, CliError> {
    if let Some(m) = done.get(name) {
        return Ok(m.clone());
    }
    let object = format!("matrix '{name}'");
    let spec = raw.matrices.get(name).ok_or_else(|| unresolved("matrix", name))?;
    if !visiting.insert(name.to_owned()) {
        return Err(CliError::invalid(object, "is defined in terms of itself"));
    }
    let m = match spec {
        MatrixSpec::Named(other) => resolve_matrix(raw, other, done, visiting)?,
        MatrixSpec::Literal(rows) => literal(rows, &object)?,
        MatrixSpec::Kron { kron } => {
            let parts = kron.iter().map(|n| resolve_matrix(raw, n, done, visiting)).collect::<Result<Vec<_>, _>>()?;
            kron_all(&parts, &object)?
        }
    };
    visiting.remove(name);
    done.insert(name.to_owned(), m.clone());
    Ok(m)
}

fn matrix_of<S: Scalar>(
    raw: &RawScenario,
    spec: &MatrixSpec,
    done: &mut BTreeMap<String, Matrix<S>>,
    object: &str,
) -> Result<Matrix<S>, CliError> {
    match spec {
        MatrixSpec::Named(n) => resolve_matrix(raw, n, done, &mut BTreeSet::new()),
        MatrixSpec::Literal(rows) => literal(rows, object),
        MatrixSpec::Kron { kron } => {
            let parts = kron
                .iter()
                .map(|n| resolve_matrix(raw, n, done, &mut BTreeSet::new()))
                .collect::<Result<Vec<_>, _>>()?;
            kron_all(&parts, object)
        }
    }
}

fn kron_all<S: Scalar>(parts: &[Matrix<S>], object: &str) -> Result<Matrix<S>, CliError> {
    let (first, rest) = parts.split_first().ok_or_else(|| CliError::invalid(object, "empty Kronecker product"))?;
    rest.iter().try_fold(first.clone(), |acc, m| acc.kron(m)).map_err(|e| CliError::core(object, e))
}

fn literal<S: Scalar>(rows: &[Vec<Value>], object: &str) -> Result<Matrix<S>, CliError> {
    let rows = rows
        .iter()
        .map(|r| r.iter().map(|e| scalar::<S>(e)).collect::<Result<Vec<S>, String>>())
        .collect::<Result<Vec<_>, String>>()
        .map_err(|m| CliError::invalid(object, m))?;
    Matrix::from_rows(rows).map_err(|e| CliError::core(object, e))
}

fn resolve_projector<S: Scalar>(
    raw: &RawScenario,
    name: &str,
    matrices: &mut BTreeMap<String, Matrix<S>>,
    kets: &BTreeMap<String, Ket<S>>,
    done: &mut BTreeMap<String, Projector<S>>,
    visiting: &mut BTreeSet<String>,
) -> Result<Projector<S>, CliError> {
    if let Some(p) = done.get(name) {
        return Ok(p.clone());
    }
    let object = format!("projector '{name}'");
    let spec = raw.projectors.get(name).ok_or_else(|| unresolved("projector", name))?;
    if !visiting.insert(name.to_owned()) {
        return Err(CliError::invalid(object, "is defined in terms of itself"));
    }
    let p = match spec {
        ProjectorSpec::Matrix { matrix } => {
            let m = matrix_of(raw, matrix, matrices, &object)?;
            Projector::new(m).map_err(|e| CliError::core(&object, e))?
        }
        ProjectorSpec::Observable { observable, delta } => {
            let a = resolve_matrix(raw, observable, matrices, &mut BTreeSet::new())?;
            let delta = delta.iter().map(|e| scalar::<S>(e)).collect::<Result<Vec<S>, String>>().map_err(|m| CliError::invalid(&object, m))?;
            spectral_projector(&a, &delta).map_err(|e| CliError::core(&object, e))?
        }
        ProjectorSpec::Ket { ket } => kets.get(ket).ok_or_else(|| unresolved("ket", ket))?.projector(),
        ProjectorSpec::Span { span } => {
            let vectors = span
                .iter()
                .map(|v| v.iter().map(|e| scalar::<S>(e)).collect::<Result<Vec<S>, String>>())
                .collect::<Result<Vec<_>, String>>()
                .map_err(|m| CliError::invalid(&object, m))?;
            let dim = vectors.first().map_or(0, Vec::len);
            if dim == 0 {
                return Err(CliError::invalid(object, "needs at least one nonempty vector"));
            }
            Projector::span(dim, &vectors).map_err(|e| CliError::core(&object, e))?
        }
        ProjectorSpec::Kron { kron } => {
            let parts = kron
                .iter()
                .map(|n| resolve_projector(raw, n, matrices, kets, done, visiting))
                .collect::<Result<Vec<_>, _>>()?;
            sheafhist_core::hpo::hpo_projector(&parts).map_err(|e| CliError::core(&object, e))?
        }
        ProjectorSpec::Complement { complement } => resolve_projector(raw, complement, matrices, kets, done, visiting)?.complement(),
    };
    visiting.remove(name);
    done.insert(name.to_owned(), p.clone());
    Ok(p)
}

/// A parsed real entry: exact when it is rational.
#[derive(Debug, Clone, PartialEq)]
pub enum Real {
    Exact(BigRational),
    Float(f64),
}

pub fn parse_real(v: &Value) -> Result<Real, String> {
    match v {
        Value::Number(n) => parse_rational(&n.to_string()).map(Real::Exact),
        Value::String(s) => parse_real_text(s),
        other => Err(format!("expected a number or string, found {other}")),
    }
}

fn parse_real_text(s: &str) -> Result<Real, String> {
    let t = s.trim();
    let (negative, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest.trim_start()),
        None => (false, t.strip_prefix('+').unwrap_or(t).trim_start()),
    };
    let sign = |r: Real| match (negative, r) {
        (false, r) => r,
        (true, Real::Exact(q)) => Real::Exact(-q),
        (true, Real::Float(f)) => Real::Float(-f),
    };
    if let Some(inner) = body.strip_prefix("sqrt(").and_then(|b| b.strip_suffix(')')) {
        let q = parse_rational(inner)?;
        if q.is_negative() {
            return Err(format!("square root of a negative number in '{s}'"));
        }
        return Ok(sign(match rational_sqrt(&q) {
            Some(r) => Real::Exact(r),
            None => Real::Float(q.to_f64().ok_or_else(|| format!("'{s}' is out of range"))?.sqrt()),
        }));
    }
    Ok(sign(Real::Exact(parse_rational(body)?)))
}

fn parse_rational(s: &str) -> Result<BigRational, String> {
    let bad = || format!("cannot parse '{s}' as a number");
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let (p, q) = (parse_rational(p)?, parse_rational(q)?);
        if q.is_zero() {
            return Err(format!("division by zero in '{s}'"));
        }
        return Ok(p / q);
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    if exponent.unsigned_abs() > 400 {
        return Err(format!("exponent out of range in '{s}'"));
    }
    let numer: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let ten = BigInt::from(10);
    let scale = exponent - frac.len() as i32;
    let mut q = BigRational::from_integer(numer);
    if scale >= 0 {
        q *= BigRational::from_integer(num::pow(ten, scale as usize));
    } else {
        q /= BigRational::from_integer(num::pow(ten, (-scale) as usize));
    }
    Ok(if negative { -q } else { q })
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    let root = |n: &BigInt| {
        let r = n.sqrt();
        (&r * &r == *n).then_some(r)
    };
    Some(BigRational::new(root(q.numer())?, root(q.denom())?))
}

/// Parses a matrix or ket entry into the scalar field.
pub fn scalar<S: Scalar>(v: &Value) -> Result<S, String> {
    let (re, im) = match v {
        Value::Array(pair) if pair.len() == 2 => (parse_real(&pair[0])?, parse_real(&pair[1])?),
        Value::Array(_) => return Err("complex entries are [re, im] pairs".into()),
        other => (parse_real(other)?, Real::Exact(BigRational::zero())),
    };
    match (re, im) {
        (Real::Exact(a), Real::Exact(b)) => Ok(S::from_rational(&a, &b)),
        _ if S::EXACT => Err(format!("entry {v} is irrational and cannot be used in exact mode")),
        (a, b) => {
            let f = |r: Real| match r {
                Real::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
                Real::Float(x) => x,
            };
            S::from_f64(f(a), f(b)).ok_or_else(|| format!("entry {v} is not finite"))
        }
    }
}

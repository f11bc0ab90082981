//! Structured results. A report serializes to JSON and renders to text; the
//! text is a function of the report alone, so a report read back from JSON
//! renders identically.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use sheafhist_core::algebra::{Matrix, QComplex, Scalar, C64};
use sheafhist_core::context::ContextPoset;
use sheafhist_core::presheaf::{OmegaGlobalElement, Subobject};

/// A real number: rounded float, or exact rational written as a string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Float(f64),
    Exact(String),
}

impl Num {
    pub fn float(x: f64) -> Self {
        let r = (x * 1e12).round() / 1e12;
        Self::Float(if r == 0.0 { 0.0 } else { r })
    }

    fn is_zero(&self) -> bool {
        match self {
            Self::Float(x) => *x == 0.0,
            Self::Exact(s) => s == "0",
        }
    }
}

impl std::fmt::Display for Num {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Float(x) => write!(f, "{x}"),
            Self::Exact(s) => f.write_str(s),
        }
    }
}

/// Complex value as `[re, im]`.
pub type Value = [Num; 2];

/// Scalars that know how to write themselves into a report.
pub trait Render: Scalar {
    fn value(&self) -> Value;
}

impl Render for C64 {
    fn value(&self) -> Value {
        [Num::float(self.re), Num::float(self.im)]
    }
}

impl Render for QComplex {
    fn value(&self) -> Value {
        [Num::Exact(self.re.to_string()), Num::Exact(self.im.to_string())]
    }
}

pub fn matrix_value<S: Render>(m: &Matrix<S>) -> Vec<Vec<Value>> {
    m.rows().map(|r| r.iter().map(Render::value).collect()).collect()
}

fn fmt_value(v: &Value) -> String {
    match (v[0].is_zero(), v[1].is_zero()) {
        (_, true) => v[0].to_string(),
        (true, false) => format!("{}i", v[1]),
        (false, false) => {
            let im = v[1].to_string();
            match im.strip_prefix('-') {
                Some(abs) => format!("{}-{abs}i", v[0]),
                None => format!("{}+{im}i", v[0]),
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContextInfo {
    pub name: String,
    pub minimals: Vec<Vec<Vec<Value>>>,
    /// Names of the contexts strictly below this one.
    pub below: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosetInfo {
    pub slot: usize,
    pub dim: usize,
    pub contexts: Vec<ContextInfo>,
}

impl PosetInfo {
    pub fn of<S: Render>(slot: usize, poset: &ContextPoset<S>) -> Self {
        let contexts = (0..poset.len())
            .map(|v| ContextInfo {
                name: poset.name(v).to_owned(),
                minimals: poset.context(v).minimals().iter().map(|q| matrix_value(q.matrix())).collect(),
                below: (0..poset.len()).filter(|&u| u != v && poset.leq(u, v)).map(|u| poset.name(u).to_owned()).collect(),
            })
            .collect();
        Self { slot, dim: poset.dim(), contexts }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StagePoints {
    pub stage: String,
    pub points: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageSieve {
    pub stage: String,
    /// Member contexts, sorted by name.
    pub members: Vec<String>,
    pub principal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageMatrix {
    pub stage: String,
    pub matrix: Vec<Vec<Value>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductStage {
    pub stage: String,
    pub members: Vec<String>,
    /// One sieve per factor, members sorted by name.
    pub components: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Item {
    Subobject { label: String, slot: usize, stages: Vec<StagePoints> },
    Approximations { label: String, slot: usize, stages: Vec<StageMatrix> },
    Truth { label: String, slot: usize, stages: Vec<StageSieve> },
    ProductTruth { label: String, stages: Vec<ProductStage> },
    Sections { slot: usize, count: usize, listed: Vec<Vec<String>> },
    DMatrix { labels: Vec<String>, entries: Vec<Vec<Value>>, probability_sum: Value, consistent: bool, real_part_only: bool },
    Matrix { label: String, matrix: Vec<Vec<Value>> },
    Fact { label: String, value: String },
}

impl Item {
    pub fn fact(label: impl Into<String>, value: impl ToString) -> Self {
        Self::Fact { label: label.into(), value: value.to_string() }
    }

    pub fn subobject<S: Scalar>(label: impl Into<String>, slot: usize, poset: &ContextPoset<S>, s: &Subobject) -> Self {
        let stages = (0..poset.len())
            .map(|v| StagePoints { stage: poset.name(v).to_owned(), points: s.at(v).iter().copied().collect() })
            .collect();
        Self::Subobject { label: label.into(), slot, stages }
    }

    pub fn truth<S: Scalar>(label: impl Into<String>, slot: usize, poset: &ContextPoset<S>, tv: &OmegaGlobalElement) -> Self {
        let p = poset.poset();
        let stages = (0..poset.len())
            .map(|v| {
                let sieve = tv.at(v);
                StageSieve {
                    stage: poset.name(v).to_owned(),
                    members: sorted_names(sieve.members.iter().map(|&u| poset.name(u))),
                    principal: sieve.is_principal(p),
                }
            })
            .collect();
        Self::Truth { label: label.into(), slot, stages }
    }
}

pub fn sorted_names<'a>(names: impl Iterator<Item = &'a str>) -> Vec<String> {
    let mut v: Vec<String> = names.map(str::to_owned).collect();
    v.sort();
    v
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, cases: usize, failures: usize, detail: impl Into<String>) -> Self {
        Self { name: name.into(), cases, failures, passed: failures == 0, detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub command: String,
    pub scenario: String,
    pub digest: String,
    pub exact: bool,
    pub epsilon: f64,
    pub posets: Vec<PosetInfo>,
    pub items: Vec<Item>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let arithmetic = if self.exact { "exact".to_owned() } else { format!("float, epsilon {:e}", self.epsilon) };
        let _ = writeln!(out, "{} {}", self.tool, self.command);
        let _ = writeln!(out, "scenario: {} (sha256 {})", self.scenario, self.digest);
        let _ = writeln!(out, "arithmetic: {arithmetic}");
        for p in &self.posets {
            let _ = writeln!(out, "slot {} (dim {}): {} contexts", p.slot, p.dim, p.contexts.len());
            for c in &p.contexts {
                let below = if c.below.is_empty() { String::new() } else { format!(" > {}", c.below.join(", ")) };
                let _ = writeln!(out, "  {} [{} minimals]{below}", c.name, c.minimals.len());
                if self.command == "contexts" {
                    for (i, m) in c.minimals.iter().enumerate() {
                        let _ = writeln!(out, "    Q{i} = {}", fmt_matrix(m));
                    }
                }
            }
        }
        for item in &self.items {
            render_item(&mut out, item);
        }
        for c in &self.checks {
            let verdict = if c.passed { "PASS" } else { "FAIL" };
            let _ = write!(out, "{verdict} {} ({} cases, {} failures)", c.name, c.cases, c.failures);
            if !c.detail.is_empty() {
                let _ = write!(out, ": {}", c.detail);
            }
            out.push('\n');
        }
        out
    }
}

fn fmt_matrix(m: &[Vec<Value>]) -> String {
    let rows: Vec<String> = m.iter().map(|r| r.iter().map(fmt_value).collect::<Vec<_>>().join(" ")).collect();
    format!("[{}]", rows.join("; "))
}

fn render_item(out: &mut String, item: &Item) {
    match item {
        Item::Subobject { label, slot, stages } => {
            let _ = writeln!(out, "{label} (slot {slot}):");
            for s in stages {
                let pts: Vec<String> = s.points.iter().map(usize::to_string).collect();
                let _ = writeln!(out, "  {}: {{{}}}", s.stage, pts.join(", "));
            }
        }
        Item::Approximations { label, slot, stages } => {
            let _ = writeln!(out, "{label} (slot {slot}):");
            for s in stages {
                let _ = writeln!(out, "  {}: {}", s.stage, fmt_matrix(&s.matrix));
            }
        }
        Item::Truth { label, slot, stages } => {
            let _ = writeln!(out, "{label} (slot {slot}):");
            for s in stages {
                let note = if s.principal {
                    " (principal)"
                } else if s.members.is_empty() {
                    " (empty)"
                } else {
                    ""
                };
                let _ = writeln!(out, "  {}: [{}]{note}", s.stage, s.members.join(", "));
            }
        }
        Item::ProductTruth { label, stages } => {
            let _ = writeln!(out, "{label}:");
            for s in stages {
                let comps: Vec<String> = s.components.iter().map(|c| format!("[{}]", c.join(", "))).collect();
                let _ = writeln!(out, "  {}: [{}] = {}", s.stage, s.members.join(", "), comps.join(" x "));
            }
        }
        Item::Sections { slot, count, listed } => {
            let _ = writeln!(out, "slot {slot} global sections: {count}");
            for s in listed {
                let _ = writeln!(out, "  {}", s.join(" "));
            }
            if listed.len() < *count {
                let _ = writeln!(out, "  ... {} more", count - listed.len());
            }
        }
        Item::DMatrix { labels, entries, probability_sum, consistent, real_part_only } => {
            let _ = writeln!(out, "decoherence functional over [{}]:", labels.join(", "));
            for (l, row) in labels.iter().zip(entries) {
                let _ = writeln!(out, "  {l}: {}", row.iter().map(fmt_value).collect::<Vec<_>>().join("  "));
            }
            let _ = writeln!(out, "  probability sum: {}", fmt_value(probability_sum));
            let mode = if *real_part_only { " (real parts)" } else { "" };
            let _ = writeln!(out, "  consistent{mode}: {consistent}");
        }
        Item::Matrix { label, matrix } => {
            let _ = writeln!(out, "{label} = {}", fmt_matrix(matrix));
        }
        Item::Fact { label, value } => {
            let _ = writeln!(out, "{label}: {value}");
        }
    }
}

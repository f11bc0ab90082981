//! The subcommands. Each builds a [`Report`] from a loaded scenario.

use std::collections::BTreeSet;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use sheafhist_core::algebra::{Ket, Matrix, Projector, QComplex, Scalar, C64};
use sheafhist_core::context::ContextPoset;
use sheafhist_core::dasein::{dasein, dasein_at, expectation_criterion, pseudo_state, truth_value};
use sheafhist_core::decoherence::{decoherence, hpo_decoherence, check_additivity, check_negation, is_consistent, History};
use sheafhist_core::hpo::{entangled_analysis, entangled_demo, hpo_negation, mu, theta, theta_pullback, EntangledReport, HpoHistory};
use sheafhist_core::presheaf::{global_sections, truth_of_inclusion, Subobject, DEFAULT_SEARCH_CAP};
use sheafhist_core::temporal::{
    compare_classifiers, exhaustive_tensor_counts, h, h_inverse_exists, j, left_join_relation_holds, meet_relation_holds,
    right_join_relation_holds, ContextProduct, ProductSpace, TensorExpression,
};
use sheafhist_core::{random, settings};

use crate::error::CliError;
use crate::report::{matrix_value, sorted_names, Check, Item, PosetInfo, ProductStage, Render, Report, StageMatrix};
use crate::scenario::{load_scenario, Scenario};

/// Largest product presheaf (in points) on which tensor images are
/// enumerated exhaustively.
pub const EXHAUSTIVE_POINT_LIMIT: usize = 12;

/// Sections listed in a `ks` report; the count is always complete.
const LISTED_SECTIONS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Contexts,
    Daseinize,
    Truth,
    HistoryTruth,
    VerifyHeyting,
    VerifyTensor,
    VerifyHpo,
    Ks,
    Decohere,
    DemoEntangled,
}

impl Command {
    pub const ALL: [Command; 10] = [
        Self::Contexts,
        Self::Daseinize,
        Self::Truth,
        Self::HistoryTruth,
        Self::VerifyHeyting,
        Self::VerifyTensor,
        Self::VerifyHpo,
        Self::Ks,
        Self::Decohere,
        Self::DemoEntangled,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Contexts => "contexts",
            Self::Daseinize => "daseinize",
            Self::Truth => "truth",
            Self::HistoryTruth => "history-truth",
            Self::VerifyHeyting => "verify-heyting",
            Self::VerifyTensor => "verify-tensor",
            Self::VerifyHpo => "verify-hpo",
            Self::Ks => "ks",
            Self::Decohere => "decohere",
            Self::DemoEntangled => "demo-entangled",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub max_sections: usize,
    /// Overrides the scenario's sample count for the verify commands.
    pub samples: Option<usize>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { max_sections: DEFAULT_SEARCH_CAP, samples: None }
    }
}

/// Loads the scenario (if any) in the requested arithmetic and runs `command`.
pub fn execute(command: Command, scenario: Option<&Path>, exact: bool, opts: RunOptions) -> Result<Report, CliError> {
    if exact {
        execute_in::<QComplex>(command, scenario, opts)
    } else {
        execute_in::<C64>(command, scenario, opts)
    }
}

fn execute_in<S: Render>(command: Command, path: Option<&Path>, opts: RunOptions) -> Result<Report, CliError> {
    match path {
        Some(p) => run(command, &load_scenario::<S>(p)?, opts),
        None if command == Command::DemoEntangled => builtin_demo::<S>(),
        None => Err(CliError::Usage(format!("{} needs --scenario", command.name()))),
    }
}

fn header<S: Render>(command: Command, scenario: &str, digest: &str, posets: Vec<PosetInfo>) -> Report {
    Report {
        tool: format!("sheafhist {}", env!("CARGO_PKG_VERSION")),
        command: command.name().to_owned(),
        scenario: scenario.to_owned(),
        digest: digest.to_owned(),
        exact: S::EXACT,
        epsilon: settings::epsilon(),
        posets,
        items: Vec::new(),
        checks: Vec::new(),
    }
}

/// Runs `command` against an already loaded scenario.
pub fn run<S: Render>(command: Command, s: &Scenario<S>, opts: RunOptions) -> Result<Report, CliError> {
    let posets = s.slots.iter().enumerate().map(|(k, p)| PosetInfo::of(k, p)).collect();
    let mut report = header::<S>(command, &s.raw.name, &s.digest, posets);
    let mut rng = ChaCha8Rng::seed_from_u64(s.raw.verify.seed);
    let samples = |default: usize| opts.samples.or(s.raw.verify.samples).unwrap_or(default);
    let out = &mut report;
    match command {
        Command::Contexts => contexts(s, out),
        Command::Daseinize => daseinize(s, out)?,
        Command::Truth => truth(s, out)?,
        Command::HistoryTruth => history_truth(s, out)?,
        Command::VerifyHeyting => verify_heyting(s, out, &mut rng, samples(1000))?,
        Command::VerifyTensor => verify_tensor(s, out, &mut rng, samples(200))?,
        Command::VerifyHpo => verify_hpo(s, out, &mut rng, samples(100))?,
        Command::Ks => ks(s, out, opts.max_sections)?,
        Command::Decohere => decohere(s, out)?,
        Command::DemoEntangled => demo_entangled(s, out)?,
    }
    Ok(report)
}

fn core<T>(object: &str, r: sheafhist_core::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| CliError::core(object, e))
}

fn contexts<S: Render>(s: &Scenario<S>, out: &mut Report) {
    for (k, p) in s.slots.iter().enumerate() {
        out.items.push(Item::fact(format!("slot {k} strict arrows"), p.poset().strict_arrow_count()));
    }
}

fn daseinize<S: Render>(s: &Scenario<S>, out: &mut Report) -> Result<(), CliError> {
    let queries: Vec<(String, usize)> = if s.raw.daseinize.is_empty() {
        let dim = s.slot(0)?.dim();
        s.projectors.iter().filter(|(_, p)| p.dim() == dim).map(|(n, _)| (n.clone(), 0)).collect()
    } else {
        s.raw.daseinize.iter().map(|q| (q.proposition.clone(), q.slot)).collect()
    };
    lattice_laws(s, &queries, out)?;
    let (mut cases, mut failures) = (0, 0);
    for (name, slot) in queries {
        let object = format!("daseinize '{name}'");
        let poset = s.slot(slot)?;
        let p = s.projector(&name)?;
        let d = core(&object, dasein(p, poset))?;
        let approx = (0..poset.len())
            .map(|v| core(&object, dasein_at(p, poset.context(v))))
            .collect::<Result<Vec<_>, _>>()?;
        for v in 0..poset.len() {
            for u in 0..poset.len() {
                if poset.leq(u, v) {
                    cases += 1;
                    if !(p.leq(&approx[v]) && approx[v].leq(&approx[u])) {
                        failures += 1;
                    }
                }
            }
        }
        out.items.push(Item::subobject(format!("delta({name})"), slot, poset, &d.subobject));
        let stages = approx
            .iter()
            .enumerate()
            .map(|(v, a)| StageMatrix { stage: poset.name(v).to_owned(), matrix: matrix_value(a.matrix()) })
            .collect();
        out.items.push(Item::Approximations { label: format!("approximations of {name}"), slot, stages });
    }
    out.checks.push(Check::new("approximations dominate P and grow under coarsening", cases, failures, ""));
    Ok(())
}

/// Join law and meet inequality over every pair of queried propositions
/// sharing a slot; strict meet inequalities are listed.
fn lattice_laws<S: Render>(s: &Scenario<S>, queries: &[(String, usize)], out: &mut Report) -> Result<(), CliError> {
    let (mut cases, mut join_fails, mut meet_fails) = (0, 0, 0);
    for (i, (a, slot)) in queries.iter().enumerate() {
        for (b, other) in &queries[i + 1..] {
            if slot != other {
                continue;
            }
            let object = format!("daseinize '{a}' and '{b}'");
            let poset = s.slot(*slot)?;
            let (p, q) = (s.projector(a)?, s.projector(b)?);
            let (dp, dq) = (core(&object, dasein(p, poset))?.subobject, core(&object, dasein(q, poset))?.subobject);
            let join = core(&object, p.join(q).and_then(|j| dasein(&j, poset)))?.subobject;
            let meet = core(&object, p.meet(q).and_then(|m| dasein(&m, poset)))?.subobject;
            let both = core(&object, dp.meet(&dq))?;
            cases += 1;
            join_fails += usize::from(join != core(&object, dp.join(&dq))?);
            meet_fails += usize::from(!core(&object, meet.includes_in(&both))?);
            if meet != both {
                out.items.push(Item::fact(format!("strict meet inequality (slot {slot})"), format!("delta({a} & {b}) < delta({a}) & delta({b})")));
            }
        }
    }
    if cases > 0 {
        out.checks.push(Check::new("delta(P | Q) = delta(P) | delta(Q)", cases, join_fails, ""));
        out.checks.push(Check::new("delta(P & Q) <= delta(P) & delta(Q)", cases, meet_fails, ""));
    }
    Ok(())
}

fn truth<S: Render>(s: &Scenario<S>, out: &mut Report) -> Result<(), CliError> {
    if s.raw.truth.is_empty() {
        return Err(CliError::invalid("truth", "the scenario declares no truth queries"));
    }
    let (mut cases, mut failures) = (0, 0);
    for q in &s.raw.truth {
        let object = format!("truth of '{}' in '{}'", q.proposition, q.state);
        let poset = s.slot(q.slot)?;
        let psi = s.ket(&q.state)?;
        let p = s.projector(&q.proposition)?;
        let w = core(&object, pseudo_state(psi, poset))?;
        let d = core(&object, dasein(p, poset))?;
        let tv = core(&object, truth_value(&w, &d))?;
        for v in 0..poset.len() {
            cases += 1;
            let top = tv.at(v).members.contains(&v);
            if top != core(&object, expectation_criterion(psi, p, poset.context(v)))? {
                failures += 1;
            }
        }
        out.items.push(Item::subobject(format!("w({})", q.state), q.slot, poset, &w.subobject));
        out.items.push(Item::truth(format!("v({}; {})", q.proposition, q.state), q.slot, poset, &tv));
    }
    out.checks.push(Check::new("stage membership agrees with the expectation criterion", cases, failures, ""));
    Ok(())
}

fn product_stage_name<S: Scalar>(product: &ContextProduct<S>, v: usize) -> String {
    let names: Vec<&str> = product
        .space()
        .stage_tuple(v)
        .iter()
        .enumerate()
        .map(|(k, &t)| product.factor(k).name(t))
        .collect();
    format!("<{}>", names.join(","))
}

fn history_truth<S: Render>(s: &Scenario<S>, out: &mut Report) -> Result<(), CliError> {
    if s.raw.histories.is_empty() {
        return Err(CliError::invalid("histories", "the scenario declares no history queries"));
    }
    let mut cases = 0;
    for (i, q) in s.raw.histories.iter().enumerate() {
        let object = format!("history query {i}");
        let n = q.propositions.len();
        let posets: Vec<ContextPoset<S>> = s.slots[..n].to_vec();
        let product = core(&object, ContextProduct::new(posets))?;
        let props = q
            .propositions
            .iter()
            .enumerate()
            .map(|(k, p)| core(&object, dasein(s.projector(p)?, &s.slots[k])))
            .collect::<Result<Vec<_>, _>>()?;
        let us = q.unitaries.iter().map(|u| s.unitary(u).cloned()).collect::<Result<Vec<Matrix<S>>, _>>()?;
        let ht = core(&object, product.history_truth(s.ket(&q.state)?, &us, &props))?;
        core(&object, ht.components.check(product.space()))?;
        cases += 1;
        for (k, tv) in ht.slots.iter().enumerate() {
            out.items.push(Item::truth(format!("history {i}: v({})", q.propositions[k]), k, &s.slots[k], tv));
        }
        let pposet = product.space().poset();
        let stages = (0..pposet.len())
            .map(|v| ProductStage {
                stage: product_stage_name(&product, v),
                members: {
                    let mut m: Vec<String> =
                        ht.product_sieve.at(v).members.iter().map(|&u| product_stage_name(&product, u)).collect();
                    m.sort();
                    m
                },
                components: ht
                    .components
                    .at(v)
                    .iter()
                    .enumerate()
                    .map(|(k, sieve)| sorted_names(sieve.members.iter().map(|&u| product.factor(k).name(u))))
                    .collect(),
            })
            .collect();
        out.items.push(Item::ProductTruth { label: format!("history {i}: {}", q.propositions.join(" then ")), stages });
    }
    out.checks.push(Check::new("product truth value factors into component sieves", cases, 0, ""));
    Ok(())
}

fn verify_heyting<S: Render>(s: &Scenario<S>, out: &mut Report, rng: &mut ChaCha8Rng, samples: usize) -> Result<(), CliError> {
    for (k, poset) in s.slots.iter().enumerate() {
        let object = format!("verify-heyting slot {k}");
        let sheaf = poset.spectral();
        let mut fails = [0usize; 4];
        for _ in 0..samples {
            let (a, b, c) = (random::subobject(rng, sheaf), random::subobject(rng, sheaf), random::subobject(rng, sheaf));
            let adj_l = core(&object, c.meet(&a).and_then(|m| m.includes_in(&b)))?;
            let adj_r = core(&object, a.implies(&b).and_then(|i| c.includes_in(&i)))?;
            fails[0] += usize::from(adj_l != adj_r);
            let lhs = core(&object, b.join(&c).and_then(|bc| a.meet(&bc)))?;
            let rhs = core(&object, a.meet(&b).and_then(|ab| a.meet(&c).and_then(|ac| ab.join(&ac))))?;
            fails[1] += usize::from(lhs != rhs);
            let empty = Subobject::empty(sheaf.clone());
            let pc = core(&object, a.meet(&a.not()))?.is_empty() && a.not() == core(&object, a.implies(&empty))?;
            fails[2] += usize::from(!pc);
            let tv = core(&object, truth_of_inclusion(&a, &b))?;
            let ok = tv.check(poset.poset()).is_ok() && tv.is_totally_true(poset.poset()) == core(&object, a.includes_in(&b))?;
            fails[3] += usize::from(!ok);
        }
        let names = [
            "adjunction c & a <= b iff c <= (a => b)",
            "distributivity a & (b | c) = (a & b) | (a & c)",
            "pseudo-complement a & !a = 0 and !a = (a => 0)",
            "inclusion truth values are global elements",
        ];
        for (name, f) in names.iter().zip(fails) {
            out.checks.push(Check::new(format!("{name} (slot {k})"), samples, f, ""));
        }
    }
    Ok(())
}

fn factor_posets<S: Scalar>(s: &Scenario<S>) -> (ContextPoset<S>, ContextPoset<S>) {
    let left = s.slots[0].clone();
    let right = s.slots.get(1).cloned().unwrap_or_else(|| left.clone());
    (left, right)
}

fn random_expression(rng: &mut ChaCha8Rng, space: &ProductSpace) -> TensorExpression {
    let terms = rng.gen_range(1..=3);
    (0..terms).fold(TensorExpression::bottom(), |acc, _| {
        let a = random::subobject(rng, space.factor(0));
        let b = random::subobject(rng, space.factor(1));
        acc.join(TensorExpression::generator(a, b))
    })
}

fn verify_tensor<S: Render>(s: &Scenario<S>, out: &mut Report, rng: &mut ChaCha8Rng, samples: usize) -> Result<(), CliError> {
    let object = "verify-tensor";
    let (left, right) = factor_posets(s);
    let product = core(object, ContextProduct::binary(left.clone(), right.clone()))?;
    let space = product.space();
    let mut fails = [0usize; 5];
    for _ in 0..samples {
        let (l1, l2) = (random::subobject(rng, space.factor(0)), random::subobject(rng, space.factor(0)));
        let (r1, r2) = (random::subobject(rng, space.factor(1)), random::subobject(rng, space.factor(1)));
        let pairs = [(l1.clone(), r1.clone()), (l2.clone(), r2.clone())];
        fails[0] += usize::from(!core(object, meet_relation_holds(space, &pairs))?);
        fails[1] += usize::from(!core(object, left_join_relation_holds(space, &[l1.clone(), l2.clone()], &r1))?);
        fails[2] += usize::from(!core(object, right_join_relation_holds(space, &l1, &[r1.clone(), r2.clone()]))?);
        let image = core(object, h(space, &random_expression(rng, space)))?;
        let back = core(object, h_inverse_exists(space, &image, DEFAULT_SEARCH_CAP).and_then(|e| h(space, &e)))?;
        fails[3] += usize::from(back != image);
        let (t1, t2) = (core(object, truth_of_inclusion(&l1, &l2))?, core(object, truth_of_inclusion(&r1, &r2))?);
        fails[4] += usize::from(core(object, j(space, &t1, &t2))?.check(space).is_err());
    }
    let names = [
        "meet relation (a1 x b1) & (a2 x b2) = (a1 & a2) x (b1 & b2)",
        "left join relation",
        "right join relation",
        "h(h^-1(S)) = S for images of random expressions",
        "j of truth values is compatible",
    ];
    for (name, f) in names.iter().zip(fails) {
        out.checks.push(Check::new(*name, samples, f, ""));
    }
    let points = space.presheaf().total_points();
    if points <= EXHAUSTIVE_POINT_LIMIT {
        let counts = core(object, exhaustive_tensor_counts(space, DEFAULT_SEARCH_CAP))?;
        out.items.push(Item::fact("left subobjects", counts.left_subobjects));
        out.items.push(Item::fact("right subobjects", counts.right_subobjects));
        out.items.push(Item::fact("product subobjects", counts.product_subobjects));
        out.items.push(Item::fact("distinct tensor images", counts.h_images));
        let f = usize::from(counts.h_images != counts.product_subobjects);
        out.checks.push(Check::new("h is onto the subobjects of the product", counts.product_subobjects, f, ""));
    } else {
        out.items.push(Item::fact(
            "exhaustive tensor counts",
            format!("skipped: product has {points} points, limit {EXHAUSTIVE_POINT_LIMIT}"),
        ));
    }
    let poset = space.poset();
    let apex = (0..poset.len()).max_by_key(|&v| (poset.down_set(v).len(), v)).expect("nonempty poset");
    match compare_classifiers(space, apex) {
        Ok(c) => {
            let stage = product_stage_name(&product, apex);
            out.items.push(Item::fact(format!("sieves on {stage}"), c.genuine_sieves));
            out.items.push(Item::fact(format!("component sieve tuples at {stage}"), c.component_tuples));
            out.items.push(Item::fact(format!("distinct product sieves at {stage}"), c.distinct_products));
            let witness = match &c.non_product_witness {
                Some(w) => format!("[{}]", {
                    let mut m: Vec<String> = w.iter().map(|&u| product_stage_name(&product, u)).collect();
                    m.sort();
                    m.join(", ")
                }),
                None => "none".to_owned(),
            };
            out.items.push(Item::fact("sieve that is not a product", witness));
        }
        Err(sheafhist_core::Error::CapExceeded { .. }) => {
            out.items.push(Item::fact("classifier comparison", "skipped: stage too large"));
        }
        Err(e) => return Err(CliError::core(object, e)),
    }
    Ok(())
}

fn lift<S: Scalar>(p: &Projector<C64>) -> Projector<S> {
    let m = p.matrix();
    let entries = m.entries().iter().map(|c| S::from_f64(c.re, c.im).expect("finite entries")).collect();
    Projector::new(Matrix::new(m.dim(), entries).expect("square")).expect("projector in float mode")
}

/// A random projector: a sum of minimals of a random context, or in float
/// mode sometimes a generic one.
pub fn aligned_projector<S: Scalar>(rng: &mut ChaCha8Rng, poset: &ContextPoset<S>) -> Projector<S> {
    if !S::EXACT && rng.gen_bool(0.25) {
        return lift(&random::projector(rng, poset.dim()));
    }
    let ctx = poset.context(rng.gen_range(0..poset.len()));
    let chosen: Vec<&Projector<S>> = ctx.minimals().iter().filter(|_| rng.gen_bool(0.5)).collect();
    Projector::orthogonal_sum(poset.dim(), chosen)
}

fn random_ket<S: Scalar>(rng: &mut ChaCha8Rng, s: &Scenario<S>, dim: usize) -> Ket<S> {
    if !S::EXACT {
        let k = random::ket(rng, dim);
        let entries = k.entries().iter().map(|c| S::from_f64(c.re, c.im).expect("finite")).collect();
        return Ket::new(entries).expect("unit ket");
    }
    let named: Vec<&Ket<S>> = s.kets.values().filter(|k| k.dim() == dim).collect();
    let pick = rng.gen_range(0..named.len() + dim);
    match named.get(pick) {
        Some(k) => (*k).clone(),
        None => Ket::basis(dim, pick - named.len()),
    }
}

fn verify_hpo<S: Render>(s: &Scenario<S>, out: &mut Report, rng: &mut ChaCha8Rng, samples: usize) -> Result<(), CliError> {
    let object = "verify-hpo";
    let (left, right) = factor_posets(s);
    let product = core(object, ContextProduct::binary(left.clone(), right.clone()))?;
    let space = product.space();
    let mut fails = [0usize; 3];
    for _ in 0..samples {
        let (p1, p2) = (aligned_projector(rng, &left), aligned_projector(rng, &right));
        let kron = core(object, p1.kron(&p2))?;
        let pulled = core(object, theta_pullback(&kron, &product))?;
        let rect = core(
            object,
            dasein(&p1, &left).and_then(|d1| dasein(&p2, &right).and_then(|d2| space.rectangle(&[d1.subobject, d2.subobject]))),
        )?;
        fails[0] += usize::from(pulled != rect);

        let hist = core(object, HpoHistory::homogeneous(vec![p1.clone(), p2.clone()]))?;
        let neg = core(object, hpo_negation(&hist))?;
        fails[1] += usize::from(!neg.projector().approx_eq(&hist.projector().complement()));

        let (k1, k2) = (random_ket(rng, s, left.dim()), random_ket(rng, s, right.dim()));
        let pulled = core(object, theta_pullback(&k1.kron(&k2).projector(), &product))?;
        let w = core(
            object,
            pseudo_state(&k1, &left).and_then(|w1| pseudo_state(&k2, &right).and_then(|w2| product.pseudo_state_product(&[w1, w2]))),
        )?;
        fails[2] += usize::from(pulled != w);
    }
    let names = [
        "pullback of delta(P1 (x) P2) is delta(P1) x delta(P2)",
        "negation expands into three disjoint homogeneous terms",
        "pullback of a product pseudo-state is the product of pseudo-states",
    ];
    for (name, f) in names.iter().zip(fails) {
        out.checks.push(Check::new(*name, samples, f, ""));
    }
    let (mut cases, mut theta_fails, mut mu_fails) = (0, 0, 0);
    for v1 in 0..left.len() {
        for v2 in 0..right.len() {
            let (c1, c2) = (left.context(v1), right.context(v2));
            let t = core(object, theta(c1, c2))?;
            let mut image = BTreeSet::new();
            for l1 in c1.spectrum() {
                for l2 in c2.spectrum() {
                    image.insert(core(object, mu(c1, c2, &t, l1, l2))?.index);
                }
            }
            mu_fails += usize::from(image.len() != t.size() || t.size() != c1.size() * c2.size());
            for u1 in left.poset().down_set(v1) {
                for u2 in right.poset().down_set(v2) {
                    cases += 1;
                    let lower = core(object, theta(left.context(u1), right.context(u2)))?;
                    theta_fails += usize::from(!lower.leq(&t));
                }
            }
        }
    }
    out.checks.push(Check::new("theta is monotone", cases, theta_fails, ""));
    out.checks.push(Check::new("mu is a bijection onto the spectrum of V1 (x) V2", left.len() * right.len(), mu_fails, ""));
    Ok(())
}

fn ks<S: Render>(s: &Scenario<S>, out: &mut Report, cap: usize) -> Result<(), CliError> {
    for (k, poset) in s.slots.iter().enumerate() {
        let sections = core(&format!("ks slot {k}"), global_sections(poset.spectral(), cap))?;
        let listed = sections
            .iter()
            .take(LISTED_SECTIONS)
            .map(|sec| sec.iter().enumerate().map(|(v, x)| format!("{}={x}", poset.name(v))).collect())
            .collect();
        out.items.push(Item::Sections { slot: k, count: sections.len(), listed });
    }
    Ok(())
}

fn decohere<S: Render>(s: &Scenario<S>, out: &mut Report) -> Result<(), CliError> {
    let object = "decohere";
    let setup = s
        .decoherence
        .as_ref()
        .ok_or_else(|| CliError::invalid("decoherence", "the scenario has no decoherence section"))?;
    let (rho, ev) = (&setup.rho, &setup.evolution);
    let family: Vec<History<S>> = setup.family.iter().map(|n| setup.histories[n].clone()).collect();
    let consistency = core(object, is_consistent(&family, rho, ev, setup.real_part_only))?;
    let d = &consistency.d_matrix;
    let n = family.len();
    out.items.push(Item::DMatrix {
        labels: setup.family.clone(),
        entries: d.iter().map(|r| r.iter().map(Render::value).collect()).collect(),
        probability_sum: consistency.probability_sum.value(),
        consistent: consistency.consistent,
        real_part_only: setup.real_part_only,
    });

    let eps = settings::epsilon();
    let herm = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| !(d[i][j].clone() - d[j][i].conj()).is_zero()).count();
    out.checks.push(Check::new("d(a,b) = conj d(b,a)", n * n, herm, ""));
    let bounds = (0..n)
        .filter(|&i| {
            let c = d[i][i].to_c64();
            !(c.im.abs() <= eps && c.re >= -eps && c.re <= 1.0 + eps)
        })
        .count();
    out.checks.push(Check::new("0 <= d(a,a) <= 1", n, bounds, ""));
    let unit = History::Unit { dim: rho.matrix().dim() };
    let norm = core(object, decoherence(&unit, &unit, rho, ev))?;
    out.checks.push(Check::new("d(1,1) = 1", 1, usize::from(!(norm - S::one()).is_zero()), ""));

    let (mut add_cases, mut add_fails, mut neg_fails) = (0, 0, 0);
    for (i, a) in family.iter().enumerate() {
        for g in &family {
            neg_fails += usize::from(!core(object, check_negation(a, g, rho, ev))?);
        }
        for b in &family[i + 1..] {
            if !core(object, a.disjoint_from(b))? {
                continue;
            }
            for g in &family {
                add_cases += 1;
                add_fails += usize::from(!core(object, check_additivity(a, b, g, rho, ev))?);
            }
        }
    }
    out.checks.push(Check::new("d(a or b, c) = d(a,c) + d(b,c) for disjoint a, b", add_cases, add_fails, ""));
    out.checks.push(Check::new("d(not a, c) = d(1,c) - d(a,c)", n * n, neg_fails, ""));

    let mut support: Vec<i64> = family.iter().flat_map(History::support).collect();
    support.sort_unstable();
    support.dedup();
    if support.is_empty() {
        out.items.push(Item::fact("HPO comparison", "skipped: no time support"));
    } else {
        let xs = family.iter().map(|a| core(object, a.hpo_projector(&support))).collect::<Result<Vec<_>, _>>()?;
        let mut f = 0;
        for i in 0..n {
            for k in 0..n {
                let via = core(object, hpo_decoherence(xs[i].matrix(), xs[k].matrix(), &support, rho, ev))?;
                f += usize::from(!(via - d[i][k].clone()).is_zero());
            }
        }
        out.checks.push(Check::new("d agrees with its HPO form", n * n, f, ""));
    }
    Ok(())
}

fn entangled_items<S: Render>(r: &EntangledReport<S>, out: &mut Report) {
    out.items.push(Item::Matrix { label: "P_ent".into(), matrix: matrix_value(r.p_ent.matrix()) });
    out.items.push(Item::Matrix { label: "sum of product projectors".into(), matrix: matrix_value(r.product_sum.matrix()) });
    out.items.push(Item::Matrix { label: "difference".into(), matrix: matrix_value(&r.difference) });
    out.items.push(Item::Matrix { label: "delta(P_ent) at the product context".into(), matrix: matrix_value(r.dasein_product.matrix()) });
    out.items.push(Item::Matrix { label: "delta(P_ent) at the entangled context".into(), matrix: matrix_value(r.dasein_entangled.matrix()) });
    out.items.push(Item::fact("product context minimals", r.product_context_size));
    out.items.push(Item::fact("entangled context minimals", r.entangled_context_size));
    out.items.push(Item::fact("difference rank", r.difference_rank));
    out.checks.push(Check::new("P_ent differs from the product sum", 1, usize::from(!r.differs_from_sum), ""));
    out.checks.push(Check::new("P_ent is strictly below the product sum", 1, usize::from(!r.strictly_below_sum), ""));
    out.checks.push(Check::new("difference is a rank-1 projector", 1, usize::from(!(r.difference_is_projector && r.difference_rank == 1)), ""));
    out.checks.push(Check::new(
        "entangled approximation strictly below product approximation",
        1,
        usize::from(!r.entangled_strictly_below_product),
        "",
    ));
}

fn demo_entangled<S: Render>(s: &Scenario<S>, out: &mut Report) -> Result<(), CliError> {
    let Some(e) = &s.raw.entangled else {
        let r = core("demo-entangled", entangled_demo::<S>())?;
        entangled_items(&r, out);
        builtin_checks(&r, out);
        return Ok(());
    };
    let terms = e.product_terms.iter().map(|t| s.projector(t).cloned()).collect::<Result<Vec<_>, _>>()?;
    let gens = e.generators.iter().map(|t| s.projector(t).cloned()).collect::<Result<Vec<_>, _>>()?;
    let r = core(
        "demo-entangled",
        entangled_analysis(s.projector(&e.projector)?, &terms, s.context(&e.left)?, s.context(&e.right)?, &gens),
    )?;
    entangled_items(&r, out);
    Ok(())
}

fn builtin_checks<S: Render>(r: &EntangledReport<S>, out: &mut Report) {
    let expected = Projector::<S>::diag_bits(&[0, 1, 1, 0]);
    out.checks.push(Check::new("product approximation is diag(0,1,1,0)", 1, usize::from(!r.dasein_product.approx_eq(&expected)), ""));
    out.checks.push(Check::new("entangled approximation is P_ent", 1, usize::from(!r.dasein_entangled.approx_eq(&r.p_ent)), ""));
}

fn builtin_demo<S: Render>() -> Result<Report, CliError> {
    let mut report = header::<S>(Command::DemoEntangled, "builtin:singlet", "-", Vec::new());
    let r = core("demo-entangled", entangled_demo::<S>())?;
    entangled_items(&r, &mut report);
    builtin_checks(&r, &mut report);
    Ok(report)
}

//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sheafhist::commands::aligned_projector;
use sheafhist::report::{Item, Report};
use sheafhist::{execute, load_scenario, Command, RunOptions};
use sheafhist_core::algebra::{Matrix, Projector, C64};
use sheafhist_core::context::{Context, ContextPoset};
use sheafhist_core::dasein::{dasein, dasein_at};
use sheafhist_core::decoherence::{
    check_additivity, check_negation, decoherence, hpo_decoherence, DensityMatrix, Evolution, History, TimedHistory,
};
use sheafhist_core::presheaf::{truth_of_inclusion, OmegaGlobalElement};
use sheafhist_core::random;
use sheafhist_core::temporal::{j, ContextProduct};

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn fixture_posets() -> Vec<ContextPoset> {
    let mut out = Vec::new();
    for name in common::FIXTURES {
        out.extend(load_scenario::<C64>(&common::fixture(name)).unwrap().slots);
    }
    out
}

fn report(cmd: Command, fixture: &str, exact: bool, samples: Option<usize>) -> Report {
    let opts = RunOptions { samples, ..RunOptions::default() };
    execute(cmd, Some(&common::fixture(fixture)), exact, opts).unwrap()
}

fn failed_checks(r: &Report) -> Vec<String> {
    r.checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect()
}

/// Least subset sum of minimals dominating `p`, by exhaustive search.
fn brute_force(p: &Projector, v: &Context) -> Projector {
    let k = v.size();
    let mut best: Option<Projector> = None;
    for mask in 0u32..(1 << k) {
        let parts: Vec<&Projector> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| &v.minimals()[i]).collect();
        let r = Projector::orthogonal_sum(v.dim(), parts);
        if p.leq(&r) && best.as_ref().is_none_or(|b| r.rank() < b.rank()) {
            best = Some(r);
        }
    }
    best.expect("the identity dominates")
}

fn criterion_1(posets: &[ContextPoset]) -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut projectors, mut comparisons, mut failures) = (0, 0, 0);
    for i in 0..240 {
        let dim = 2 + i % 3;
        let p = if rng.gen_bool(0.5) {
            random::projector(&mut rng, dim)
        } else {
            let same: Vec<&ContextPoset> = posets.iter().filter(|q| q.dim() == dim).collect();
            let k = rng.gen_range(0..same.len());
            aligned_projector(&mut rng, same[k])
        };
        projectors += 1;
        for poset in posets.iter().filter(|q| q.dim() == dim) {
            for v in poset.contexts() {
                comparisons += 1;
                if !dasein_at(&p, v).unwrap().approx_eq(&brute_force(&p, v)) {
                    failures += 1;
                }
            }
        }
    }
    let t = start.elapsed();
    outcome(
        failures == 0 && t < Duration::from_secs(10),
        format!("{projectors} projectors, {comparisons} context comparisons, {failures} mismatches, {:.2}s", t.as_secs_f64()),
    )
}

fn criterion_2(posets: &[ContextPoset], produced: &mut Vec<(OmegaGlobalElement, ContextPoset)>) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut adj, mut dist) = (0, 0);
    for i in 0..1000 {
        let poset = &posets[i % posets.len()];
        let sh = poset.spectral();
        let (a, b, c) = (random::subobject(&mut rng, sh), random::subobject(&mut rng, sh), random::subobject(&mut rng, sh));
        let lhs = c.includes_in(&a.implies(&b).unwrap()).unwrap();
        let rhs = c.meet(&a).unwrap().includes_in(&b).unwrap();
        adj += usize::from(lhs != rhs);
        let l = a.meet(&b.join(&c).unwrap()).unwrap();
        let r = a.meet(&b).unwrap().join(&a.meet(&c).unwrap()).unwrap();
        dist += usize::from(l != r);
        if i % 10 == 0 {
            produced.push((truth_of_inclusion(&a, &b).unwrap(), poset.clone()));
        }
    }
    outcome(adj == 0 && dist == 0, format!("1000 adjunction triples ({adj} failures), 1000 distributivity triples ({dist} failures)"))
}

fn criterion_3(posets: &[ContextPoset]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut join_f, mut meet_f, mut strict) = (0, 0, 0);
    for i in 0..200 {
        let poset = &posets[i % posets.len()];
        let (p, q) = (aligned_projector(&mut rng, poset), aligned_projector(&mut rng, poset));
        let (dp, dq) = (dasein(&p, poset).unwrap().subobject, dasein(&q, poset).unwrap().subobject);
        let dj = dasein(&p.join(&q).unwrap(), poset).unwrap().subobject;
        let dm = dasein(&p.meet(&q).unwrap(), poset).unwrap().subobject;
        join_f += usize::from(dj != dp.join(&dq).unwrap());
        let both = dp.meet(&dq).unwrap();
        meet_f += usize::from(!dm.includes_in(&both).unwrap());
        strict += usize::from(dm != both);
    }
    let r = report(Command::Daseinize, "qubit-zx", false, None);
    let flagged = r.items.iter().any(|i| {
        matches!(i, Item::Fact { label, value } if label.starts_with("strict meet inequality") && value.contains("pz+ & px+"))
    });
    outcome(
        join_f == 0 && meet_f == 0 && flagged && r.passed(),
        format!("200 pairs: join law {join_f} failures, meet inequality {meet_f} failures, {strict} strict; P_z+/P_x+ witness flagged: {flagged}"),
    )
}

fn criterion_4() -> Outcome {
    let z = report(Command::VerifyTensor, "qubit-z", false, Some(200));
    let zx = report(Command::VerifyTensor, "qubit-zx", false, Some(200));
    let fact = |r: &Report, key: &str| {
        r.items.iter().find_map(|i| match i {
            Item::Fact { label, value } if label == key => Some(value.clone()),
            _ => None,
        })
    };
    let (subs, images) = (fact(&z, "product subobjects"), fact(&z, "distinct tensor images"));
    let mut failed = failed_checks(&z);
    failed.extend(failed_checks(&zx));
    outcome(
        failed.is_empty() && subs.is_some() && subs == images,
        format!(
            "400 expressions over z x z and zx x zx, failed checks {failed:?}; z x z product subobjects {} = h-images {}",
            subs.unwrap_or_default(),
            images.unwrap_or_default()
        ),
    )
}

fn criterion_5() -> Outcome {
    let r = report(Command::VerifyHpo, "qubit-zx", false, Some(100));
    let c = r.checks.iter().find(|c| c.name.starts_with("pullback of delta")).unwrap();
    outcome(c.passed && r.passed(), format!("{} pairs, {} failures; failed checks {:?}", c.cases, c.failures, failed_checks(&r)))
}

fn criterion_6(posets: &[ContextPoset], produced: &mut Vec<(OmegaGlobalElement, ContextPoset)>) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let qubits: Vec<&ContextPoset> = posets.iter().filter(|p| p.dim() == 2).collect();
    let mut failures = 0;
    for i in 0..50 {
        let (l, r) = (qubits[i % qubits.len()].clone(), qubits[(i / 2 + 1) % qubits.len()].clone());
        let product = ContextProduct::binary(l.clone(), r.clone()).unwrap();
        let psi = random::ket(&mut rng, 2);
        let u = random::unitary(&mut rng, 2);
        let s1 = dasein(&aligned_projector(&mut rng, &l), &l).unwrap();
        let s2 = dasein(&aligned_projector(&mut rng, &r), &r).unwrap();
        match product.two_time_truth(&psi, &u, &s1, &s2) {
            Ok(ht) => {
                let space = product.space();
                let via_j = j(space, &ht.slots[0], &ht.slots[1]).unwrap();
                let ok = via_j == ht.components
                    && ht.product_sieve == via_j.as_product_sieves(space)
                    && via_j.check(space).is_ok()
                    && ht.product_sieve.check(space.poset()).is_ok();
                failures += usize::from(!ok);
                produced.push((ht.slots[0].clone(), l));
                produced.push((ht.slots[1].clone(), r));
            }
            Err(_) => failures += 1,
        }
    }
    outcome(failures == 0, format!("50 random (psi, U, s1, s2), {failures} failures"))
}

fn criterion_7(produced: &[(OmegaGlobalElement, ContextPoset)]) -> Outcome {
    let mut failures = produced.iter().filter(|(tv, p)| tv.check(p.poset()).is_err()).count();
    let mut count = produced.len();
    for name in ["qubit-z", "qubit-zx", "qutrit"] {
        let r = report(Command::Truth, name, false, None);
        count += r.items.iter().filter(|i| matches!(i, Item::Truth { .. })).count();
        failures += failed_checks(&r).len();
    }
    let h = report(Command::HistoryTruth, "two-time-qubit", false, None);
    count += h.items.iter().filter(|i| matches!(i, Item::Truth { .. } | Item::ProductTruth { .. })).count();
    failures += failed_checks(&h).len();
    outcome(failures == 0, format!("{count} truth values checked, {failures} failures"))
}

fn sections(r: &Report) -> Option<usize> {
    r.items.iter().find_map(|i| match i {
        Item::Sections { count, .. } => Some(*count),
        _ => None,
    })
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let pm = sections(&report(Command::Ks, "peres-mermin-dim4", false, None));
    let z = sections(&report(Command::Ks, "qubit-z", false, None));
    let t = start.elapsed();
    outcome(
        pm == Some(0) && z == Some(2) && t < Duration::from_secs(5),
        format!("Peres-Mermin {pm:?}, single z context {z:?}, {:.3}s", t.as_secs_f64()),
    )
}

fn rank_one(rng: &mut ChaCha8Rng) -> Projector {
    random::projector_of_rank(rng, 2, 1)
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut herm, mut norm, mut add, mut neg, mut hpo) = (0, 0, 0, 0, 0);
    let eps = 1e-9;
    for _ in 0..100 {
        let steps: Vec<Matrix> = (0..2).map(|_| random::unitary(&mut rng, 2)).collect();
        let ev = Evolution::from_steps(vec![0, 1, 2], steps).unwrap();
        let rho = DensityMatrix::pure(&random::ket(&mut rng, 2));
        let (p1, p2, q2) = (rank_one(&mut rng), rank_one(&mut rng), rank_one(&mut rng));
        let hist = |a: &Projector, b: &Projector| History::Homogeneous(TimedHistory::new(vec![1, 2], vec![a.clone(), b.clone()]).unwrap());
        let alpha = hist(&p1, &p2);
        let beta = if rng.gen_bool(0.5) { hist(&p1.complement(), &q2) } else { hist(&p1, &p2.complement()) };
        let gamma = hist(&rank_one(&mut rng), &rank_one(&mut rng));
        let dab = decoherence(&alpha, &beta, &rho, &ev).unwrap();
        let dba = decoherence(&beta, &alpha, &rho, &ev).unwrap();
        herm += usize::from((dab - dba.conj()).norm() > eps);
        let unit = History::Unit { dim: 2 };
        norm += usize::from((decoherence(&unit, &unit, &rho, &ev).unwrap() - C64::new(1.0, 0.0)).norm() > eps);
        add += usize::from(!check_additivity(&alpha, &beta, &gamma, &rho, &ev).unwrap());
        neg += usize::from(!check_negation(&alpha, &gamma, &rho, &ev).unwrap());
        let (xa, xg) = (alpha.hpo_projector(&[1, 2]).unwrap(), gamma.hpo_projector(&[1, 2]).unwrap());
        let via = hpo_decoherence(xa.matrix(), xg.matrix(), &[1, 2], &rho, &ev).unwrap();
        hpo += usize::from((via - decoherence(&alpha, &gamma, &rho, &ev).unwrap()).norm() > eps);
    }
    let r = report(Command::Decohere, "decoherence-z-basis", false, None);
    let (consistent, sum) = r
        .items
        .iter()
        .find_map(|i| match i {
            Item::DMatrix { consistent, probability_sum, .. } => Some((*consistent, probability_sum.clone())),
            _ => None,
        })
        .unwrap();
    let sum_ok = matches!(sum[0], sheafhist::report::Num::Float(x) if (x - 1.0).abs() <= eps);
    let ok = herm + norm + add + neg + hpo == 0 && consistent && sum_ok && r.passed();
    outcome(
        ok,
        format!(
            "100 disjoint pairs: hermiticity {herm}, d(1,1) {norm}, additivity {add}, negation {neg} failures; 100 HPO comparisons {hpo} failures; z-basis family consistent {consistent}, probability sum {}",
            sum[0]
        ),
    )
}

fn criterion_10() -> Outcome {
    let r = execute(Command::DemoEntangled, None, true, RunOptions::default()).unwrap();
    let s = execute(Command::DemoEntangled, Some(&common::fixture("singlet-entanglement")), true, RunOptions::default()).unwrap();
    outcome(
        r.passed() && s.passed(),
        format!("{} exact checks on the built-in demo, failed {:?}; fixture failed {:?}", r.checks.len(), failed_checks(&r), failed_checks(&s)),
    )
}

fn main() {
    let start = Instant::now();
    let posets = fixture_posets();
    let mut produced = Vec::new();
    let results = [
        ("1 daseinization oracle", criterion_1(&posets)),
        ("2 Heyting laws", criterion_2(&posets, &mut produced)),
        ("3 daseinization lattice laws", criterion_3(&posets)),
        ("4 tensor presentation", criterion_4()),
        ("5 HPO pullback identity", criterion_5()),
        ("6 history truth factorization", criterion_6(&posets, &mut produced)),
        ("7 truth value invariants", criterion_7(&produced)),
        ("8 Kochen-Specker obstruction", criterion_8()),
        ("9 decoherence baseline", criterion_9()),
        ("10 entanglement demonstration", criterion_10()),
    ];
    let mut all = true;
    for (name, o) in &results {
        println!("{} criterion {name}: {}", if o.ok { "PASS" } else { "FAIL" }, o.detail);
        all &= o.ok;
    }
    println!("acceptance: {} in {:.1}s", if all { "all criteria pass" } else { "FAILED" }, start.elapsed().as_secs_f64());
    if !all {
        std::process::exit(1);
    }
}

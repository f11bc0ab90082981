mod common;

use sheafhist::report::Report;
use sheafhist::{execute, Command, RunOptions};

fn opts() -> RunOptions {
    RunOptions { samples: Some(20), ..RunOptions::default() }
}

#[test]
fn reports_round_trip_through_json() {
    for name in common::FIXTURES {
        for exact in [false, true] {
            if exact && !common::RATIONAL.contains(&name) {
                continue;
            }
            for cmd in common::commands_of(name) {
                let r = execute(cmd, Some(&common::fixture(name)), exact, opts()).unwrap();
                assert!(r.passed(), "{name} {}: {}", cmd.name(), r.render());
                let back: Report = serde_json::from_str(&r.to_json()).unwrap();
                assert_eq!(back, r);
                assert_eq!(back.render(), r.render());
            }
        }
    }
}

#[test]
fn reports_are_deterministic() {
    for cmd in [Command::VerifyHeyting, Command::VerifyHpo, Command::Truth] {
        let a = execute(cmd, Some(&common::fixture("qubit-zx")), false, opts()).unwrap();
        let b = execute(cmd, Some(&common::fixture("qubit-zx")), false, opts()).unwrap();
        assert_eq!(a.to_json(), b.to_json());
    }
}

#[test]
fn header_fields() {
    let r = execute(Command::Ks, Some(&common::fixture("qubit-z")), true, opts()).unwrap();
    assert_eq!(r.command, "ks");
    assert_eq!(r.scenario, "qubit-z");
    assert!(r.exact);
    assert_eq!(r.posets.len(), 1);
    assert!(r.tool.starts_with("sheafhist "));
    let text = r.render();
    assert!(text.contains("slot 0 global sections: 2"), "{text}");
    assert!(text.contains("arithmetic: exact"));
}

#[test]
fn sieves_render_sorted() {
    let r = execute(Command::Truth, Some(&common::fixture("qubit-zx")), false, opts()).unwrap();
    let text = r.render();
    assert!(text.contains("v(pz+; xplus) (slot 0):\n  trivial: [trivial] (principal)\n  z: [trivial]\n  x: [trivial, x] (principal)"), "{text}");
}

#[test]
fn builtin_demo_without_scenario() {
    let r = execute(Command::DemoEntangled, None, true, opts()).unwrap();
    assert!(r.passed());
    assert_eq!(r.scenario, "builtin:singlet");
    assert!(execute(Command::Truth, None, false, opts()).is_err());
}

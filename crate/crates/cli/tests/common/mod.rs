#![allow(dead_code)]

use std::path::PathBuf;

pub const FIXTURES: [&str; 7] = [
    "qutrit",
    "qubit-z",
    "qubit-zx",
    "two-time-qubit",
    "peres-mermin-dim4",
    "singlet-entanglement",
    "decoherence-z-basis",
];

/// Fixtures whose entries are all rational.
pub const RATIONAL: [&str; 6] = ["qubit-z", "qutrit", "two-time-qubit", "peres-mermin-dim4", "singlet-entanglement", "decoherence-z-basis"];

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(format!("{name}.json"))
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap()
}

pub fn commands_of(name: &str) -> Vec<sheafhist::Command> {
    let v: serde_json::Value = serde_json::from_str(&fixture_text(name)).unwrap();
    v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| sheafhist::Command::parse(c.as_str().unwrap()).unwrap())
        .collect()
}

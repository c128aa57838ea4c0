//! Shared fixtures for the benchmark targets.

use lumpchain::chains::ChainId;
use lumpchain::combinat::Partition;
use lumpchain::exactalg::{Label, TransitionMatrix};

pub fn chain(name: &str, n: usize) -> ChainId {
    ChainId::parse(name, n).expect("known chain")
}

pub fn matrix(name: &str, n: usize) -> TransitionMatrix {
    chain(name, n).transition_matrix().expect("matrix builds")
}

pub fn identity_perm(n: usize) -> Label {
    let word: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    Label::Perm(word.join(" ").parse().expect("valid permutation"))
}

pub fn staircase(rows: usize) -> Partition {
    let parts: Vec<String> = (1..=rows).rev().map(|i| i.to_string()).collect();
    parts.join(",").parse().expect("valid partition")
}

//! Certified lumping of chains: collapse a chain along a fiber map and
//! prove, exactly, that the result is again Markov.
//!
//! Two certificates are produced. The strong one (Dynkin's criterion) checks
//! that fiber-summed rows agree for all states in a common fiber; it makes
//! the projected process Markov from every start. The weak one checks that
//! the rescaling function's restriction to each fiber is a stationary
//! conditional law compatible with the small chain; the projection is then
//! Markov only from initial distributions that are fiber-proportional to
//! the rescaling function.

use crate::combinat::{compositions_of, partitions_of, rsk_insertion_tableau, syt_of_degree};
use crate::error::{Error, Result};
use crate::exactalg::{fmt_rat, Basis, Label, MatrixDocument, Rat, TransitionMatrix};
use num::traits::{One, Signed, Zero};
use serde::Serialize;

// ---------------------------------------------------------------------------
// Fiber maps
// ---------------------------------------------------------------------------

/// A surjection from a big state space onto a small one, stored as an index
/// map together with the precomputed fibers.
#[derive(Clone, Debug)]
pub struct FiberMap {
    name: String,
    big: Basis,
    small: Basis,
    map: Vec<usize>,
    fibers: Vec<Vec<usize>>,
}

impl FiberMap {
    /// Build one of the named maps over the given big basis:
    ///
    /// - `"sh"`: tableaux to their shape
    /// - `"rsk-p"`: words to their insertion tableau
    /// - `"sh-rsk"`: words to the shape of their insertion tableau
    /// - `"des"`: words to their descent composition
    /// - `"identity"`: every state to itself
    pub fn named(name: &str, big: &Basis) -> Result<FiberMap> {
        if big.is_empty() {
            return Err(Error::Lumping("empty state space".into()));
        }
        let degree = match big.label(0) {
            Label::Perm(p) => p.n(),
            Label::Tableau(t) => t.n(),
            Label::Partition(p) => p.size(),
            Label::Composition(c) => c.degree(),
        };
        type Projector = Box<dyn Fn(&Label) -> Result<Label>>;
        let (small_labels, project): (Vec<Label>, Projector) =
            match name {
                "sh" => (
                    partitions_of(degree).into_iter().map(Label::Partition).collect(),
                    Box::new(|l: &Label| Ok(Label::Partition(l.as_tableau()?.shape()))),
                ),
                "rsk-p" => (
                    syt_of_degree(degree).into_iter().map(Label::Tableau).collect(),
                    Box::new(|l: &Label| {
                        Ok(Label::Tableau(rsk_insertion_tableau(l.as_perm()?)))
                    }),
                ),
                "sh-rsk" => (
                    partitions_of(degree).into_iter().map(Label::Partition).collect(),
                    Box::new(|l: &Label| {
                        Ok(Label::Partition(rsk_insertion_tableau(l.as_perm()?).shape()))
                    }),
                ),
                "des" => (
                    compositions_of(degree).into_iter().map(Label::Composition).collect(),
                    Box::new(|l: &Label| Ok(Label::Composition(l.as_perm()?.descent_composition()))),
                ),
                "identity" => (
                    big.labels().to_vec(),
                    Box::new(|l: &Label| Ok(l.clone())),
                ),
                other => return Err(Error::Lumping(format!("unknown fiber map {other:?}"))),
            };
        let small = Basis::new(small_labels)?;
        let map = big
            .labels()
            .iter()
            .map(|l| small.require(&project(l)?))
            .collect::<Result<Vec<_>>>()?;
        FiberMap::custom(name, big.clone(), small, map)
    }

    /// An arbitrary surjection given by `map[big index] = small index`.
    pub fn custom(name: &str, big: Basis, small: Basis, map: Vec<usize>) -> Result<FiberMap> {
        if map.len() != big.len() {
            return Err(Error::Lumping("index map length != big basis size".into()));
        }
        let mut fibers = vec![Vec::new(); small.len()];
        for (i, &j) in map.iter().enumerate() {
            if j >= small.len() {
                return Err(Error::Lumping(format!("map target {j} out of range")));
            }
            fibers[j].push(i);
        }
        if let Some(empty) = fibers.iter().position(|f| f.is_empty()) {
            return Err(Error::Lumping(format!(
                "state {} has an empty fiber",
                small.label(empty)
            )));
        }
        Ok(FiberMap {
            name: name.to_string(),
            big,
            small,
            map,
            fibers,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn big(&self) -> &Basis {
        &self.big
    }

    pub fn small(&self) -> &Basis {
        &self.small
    }

    pub fn apply(&self, big_index: usize) -> usize {
        self.map[big_index]
    }

    pub fn fiber(&self, small_index: usize) -> &[usize] {
        &self.fibers[small_index]
    }

    pub fn fiber_count(&self) -> usize {
        self.fibers.len()
    }

    pub fn largest_fiber(&self) -> usize {
        self.fibers.iter().map(|f| f.len()).max().unwrap_or(0)
    }
}

// ---------------------------------------------------------------------------
// Certificates
// ---------------------------------------------------------------------------

/// Why a lumping check failed, with exact values.
#[derive(Clone, Debug)]
pub enum LumpingWitness {
    /// Two states in one fiber whose fiber-summed rows differ at `target`.
    Strong {
        state_a: Label,
        state_b: Label,
        target: Label,
        sum_a: Rat,
        sum_b: Rat,
    },
    /// A fiber whose image law disagrees with the small chain's prediction
    /// at `state`.
    Weak {
        fiber: Label,
        state: Label,
        lhs: Rat,
        rhs: Rat,
    },
}

impl std::fmt::Display for LumpingWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LumpingWitness::Strong {
                state_a,
                state_b,
                target,
                sum_a,
                sum_b,
            } => write!(
                f,
                "states {state_a} and {state_b} share a fiber but send {} and {} \
                 to the fiber of {target}",
                fmt_rat(sum_a),
                fmt_rat(sum_b)
            ),
            LumpingWitness::Weak {
                fiber,
                state,
                lhs,
                rhs,
            } => write!(
                f,
                "starting in the fiber of {fiber}, the projected one-step law \
                 puts {} on {state} but the small chain predicts {}",
                fmt_rat(lhs),
                fmt_rat(rhs)
            ),
        }
    }
}

/// Outcome of a lumping check. Exactly one of `lumped` and `witness` is
/// present, matching `pass`.
#[derive(Clone, Debug)]
pub struct LumpingCertificate {
    pub kind: &'static str,
    pub map_name: String,
    pub pass: bool,
    pub fiber_count: usize,
    pub largest_fiber: usize,
    pub lumped: Option<TransitionMatrix>,
    pub witness: Option<LumpingWitness>,
    /// On a weak pass: which starting laws the certificate covers.
    pub valid_initial_note: Option<String>,
}

#[derive(Serialize)]
struct CertificateWire {
    kind: &'static str,
    map: String,
    pass: bool,
    fiber_count: usize,
    largest_fiber: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    lumped: Option<MatrixDocument>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    valid_initial: Option<String>,
}

impl LumpingCertificate {
    pub fn to_json(&self) -> String {
        let wire = CertificateWire {
            kind: self.kind,
            map: self.map_name.clone(),
            pass: self.pass,
            fiber_count: self.fiber_count,
            largest_fiber: self.largest_fiber,
            lumped: self.lumped.as_ref().map(|m| m.to_document()),
            witness: self.witness.as_ref().map(|w| w.to_string()),
            valid_initial: self.valid_initial_note.clone(),
        };
        serde_json::to_string_pretty(&wire).expect("certificate serialization cannot fail")
    }
}

/// Dynkin's criterion, checked exactly: collapse each row along the fibers
/// and require the collapsed rows to be constant on every fiber. On success
/// the collapsed rows assemble into the lumped matrix. Works for stochastic
/// and raw operator matrices alike.
pub fn dynkin_strong_check(mat: &TransitionMatrix, map: &FiberMap) -> Result<LumpingCertificate> {
    if mat.basis() != map.big() {
        return Err(Error::BasisMismatch(
            "matrix basis differs from the fiber map's big basis".into(),
        ));
    }
    let collapse = |i: usize| -> Vec<Rat> {
        let mut out = vec![Rat::zero(); map.small().len()];
        for (j, v) in mat.row_nonzero(i) {
            out[map.apply(j)] += v;
        }
        out
    };
    let mut lumped = TransitionMatrix::zero(map.small().clone());
    for s in 0..map.small().len() {
        let fiber = map.fiber(s);
        let reference = collapse(fiber[0]);
        for &other in &fiber[1..] {
            let candidate = collapse(other);
            if let Some(t) = (0..reference.len()).find(|&t| reference[t] != candidate[t]) {
                return Ok(LumpingCertificate {
                    kind: "strong",
                    map_name: map.name().to_string(),
                    pass: false,
                    fiber_count: map.fiber_count(),
                    largest_fiber: map.largest_fiber(),
                    lumped: None,
                    witness: Some(LumpingWitness::Strong {
                        state_a: mat.basis().label(fiber[0]).clone(),
                        state_b: mat.basis().label(other).clone(),
                        target: map.small().label(t).clone(),
                        sum_a: reference[t].clone(),
                        sum_b: candidate[t].clone(),
                    }),
                    valid_initial_note: None,
                });
            }
        }
        for (t, v) in reference.into_iter().enumerate() {
            lumped.set(s, t, v);
        }
    }
    lumped.set_stochastic_flag(mat.is_stochastic());
    Ok(LumpingCertificate {
        kind: "strong",
        map_name: map.name().to_string(),
        pass: true,
        fiber_count: map.fiber_count(),
        largest_fiber: map.largest_fiber(),
        lumped: Some(lumped),
        witness: None,
        valid_initial_note: None,
    })
}

/// The fiber-conditional law built from a positive weight vector: on the
/// fiber of `s`, state `x` gets mass `eta(x) / eta(fiber)`.
pub fn fiber_distribution(map: &FiberMap, eta: &[Rat], s: usize) -> Result<Vec<Rat>> {
    if eta.len() != map.big().len() {
        return Err(Error::ShapeMismatch("eta length != big basis size".into()));
    }
    let mut total = Rat::zero();
    for &x in map.fiber(s) {
        if !eta[x].is_positive() {
            return Err(Error::NonPositiveEta(map.big().label(x).to_string()));
        }
        total += &eta[x];
    }
    let mut out = vec![Rat::zero(); map.big().len()];
    for &x in map.fiber(s) {
        out[x] = &eta[x] / &total;
    }
    Ok(out)
}

/// Weak-lumping certificate: for every fiber, one step of the big chain
/// from the fiber's eta-proportional law must equal the mixture of fiber
/// laws prescribed by the small chain's row. All comparisons are exact.
///
/// A pass certifies the projection is Markov (with transition matrix
/// `small`) whenever the chain starts from a mixture of the fiber laws.
pub fn weak_lumping_check(
    big: &TransitionMatrix,
    small: &TransitionMatrix,
    map: &FiberMap,
    eta: &[Rat],
) -> Result<LumpingCertificate> {
    if big.basis() != map.big() {
        return Err(Error::BasisMismatch(
            "big matrix basis differs from the fiber map's big basis".into(),
        ));
    }
    if small.basis() != map.small() {
        return Err(Error::BasisMismatch(
            "small matrix basis differs from the fiber map's small basis".into(),
        ));
    }
    for s in 0..map.small().len() {
        let pi_s = fiber_distribution(map, eta, s)?;
        let lhs = big.vec_mul(&pi_s)?;
        let mut rhs = vec![Rat::zero(); map.big().len()];
        for (t, weight) in small.row_nonzero(s) {
            let pi_t = fiber_distribution(map, eta, t)?;
            for (x, v) in pi_t.into_iter().enumerate() {
                if !v.is_zero() {
                    rhs[x] += &weight * v;
                }
            }
        }
        if let Some(x) = (0..lhs.len()).find(|&x| lhs[x] != rhs[x]) {
            return Ok(LumpingCertificate {
                kind: "weak",
                map_name: map.name().to_string(),
                pass: false,
                fiber_count: map.fiber_count(),
                largest_fiber: map.largest_fiber(),
                lumped: None,
                witness: Some(LumpingWitness::Weak {
                    fiber: map.small().label(s).clone(),
                    state: map.big().label(x).clone(),
                    lhs: lhs[x].clone(),
                    rhs: rhs[x].clone(),
                }),
                valid_initial_note: None,
            });
        }
    }
    Ok(LumpingCertificate {
        kind: "weak",
        map_name: map.name().to_string(),
        pass: true,
        fiber_count: map.fiber_count(),
        largest_fiber: map.largest_fiber(),
        lumped: Some(small.clone()),
        witness: None,
        valid_initial_note: Some(
            "projection is Markov from any mixture of the per-fiber laws \
             x -> eta(x)/eta(fiber); point masses are valid only on \
             singleton fibers"
                .to_string(),
        ),
    })
}

/// Push a distribution on the small space up to the big space, spreading
/// each fiber's mass proportionally to eta. The result is a valid starting
/// law for a weakly lumped chain.
pub fn lift_initial_distribution(
    map: &FiberMap,
    eta: &[Rat],
    alpha: &[Rat],
) -> Result<Vec<Rat>> {
    if alpha.len() != map.small().len() {
        return Err(Error::ShapeMismatch("alpha length != small basis size".into()));
    }
    let mut total = Rat::zero();
    for a in alpha {
        if a.is_negative() {
            return Err(Error::ShapeMismatch("alpha has a negative entry".into()));
        }
        total += a;
    }
    if !total.is_one() {
        return Err(Error::ShapeMismatch(format!(
            "alpha sums to {total}, expected 1"
        )));
    }
    let mut out = vec![Rat::zero(); map.big().len()];
    for (s, a) in alpha.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (x, v) in fiber_distribution(map, eta, s)?.into_iter().enumerate() {
            if !v.is_zero() {
                out[x] += a * v;
            }
        }
    }
    Ok(out)
}

/// Check whether a distribution on the big space is a mixture of fiber
/// laws, i.e. a valid start for the weak certificate. Returns the mixture
/// weights if so, and the first offending state otherwise.
pub fn valid_initial_check(
    map: &FiberMap,
    eta: &[Rat],
    mu: &[Rat],
) -> Result<std::result::Result<Vec<Rat>, Label>> {
    if mu.len() != map.big().len() {
        return Err(Error::ShapeMismatch("mu length != big basis size".into()));
    }
    let mut alpha = vec![Rat::zero(); map.small().len()];
    for (x, v) in mu.iter().enumerate() {
        if v.is_negative() {
            return Err(Error::ShapeMismatch("mu has a negative entry".into()));
        }
        alpha[map.apply(x)] += v;
    }
    let lifted = lift_initial_distribution(map, eta, &alpha)?;
    match (0..mu.len()).find(|&x| mu[x] != lifted[x]) {
        None => Ok(Ok(alpha)),
        Some(x) => Ok(Err(map.big().label(x).clone())),
    }
}

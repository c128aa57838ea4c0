//! Descent operators on the three graded algebras the chains live on:
//! words/permutations (fundamental basis), standard tableaux, and
//! partitions (Schur basis).
//!
//! An operator is specified by a probability mixture of terms `(D, sigma)`:
//! split a degree-n basis element into blocks of sizes `D = (d_1, ..., d_k)`
//! by the iterated coproduct, permute the tensor slots by `sigma`, and
//! multiply back together, dividing by the multinomial coefficient
//! `binom(n; D)`. Zero parts are allowed and contribute a unit slot.
//!
//! Matrices are laid out with rows indexing source states, so the entry at
//! `(x, y)` is the coefficient of `y` in the image of `x`.

use crate::combinat::{
    partitions_of, perms_of, rsk_insertion_tableau, shift_word, standardise, syt_of_degree,
    Partition, Perm, StandardTableau, WeakComposition,
};
use crate::error::{Error, Result};
use crate::exactalg::{parse_rat, Basis, Label, LabelKind, Rat, TransitionMatrix};
use num::bigint::BigUint;
use num::traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};

/// The three state-space algebras.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Algebra {
    /// Basis indexed by permutations (one per word).
    FQSym,
    /// Basis indexed by standard Young tableaux.
    FSym,
    /// Schur basis, indexed by partitions.
    Lambda,
}

impl Algebra {
    pub fn parse(s: &str) -> Result<Algebra> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fqsym" | "perm" | "perms" => Ok(Algebra::FQSym),
            "fsym" | "tableau" | "tableaux" | "syt" => Ok(Algebra::FSym),
            "lambda" | "sym" | "partition" | "partitions" => Ok(Algebra::Lambda),
            other => Err(Error::Parse(format!("unknown algebra {other:?}"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Algebra::FQSym => "fqsym",
            Algebra::FSym => "fsym",
            Algebra::Lambda => "lambda",
        }
    }

    pub fn label_kind(&self) -> LabelKind {
        match self {
            Algebra::FQSym => LabelKind::Perm,
            Algebra::FSym => LabelKind::Tableau,
            Algebra::Lambda => LabelKind::Partition,
        }
    }

    /// The degree-n basis in canonical order.
    pub fn basis(&self, n: usize) -> Result<Basis> {
        let labels = match self {
            Algebra::FQSym => perms_of(n).into_iter().map(Label::Perm).collect(),
            Algebra::FSym => syt_of_degree(n).into_iter().map(Label::Tableau).collect(),
            Algebra::Lambda => partitions_of(n).into_iter().map(Label::Partition).collect(),
        };
        Basis::new(labels)
    }

    /// The positive harmonic function eta: the coefficient sum of the finest
    /// coproduct component. Closed forms: 1 on words, dim(shape) on
    /// tableaux, dim(lambda) on partitions.
    pub fn eta(&self, label: &Label) -> Result<BigUint> {
        Ok(match (self, label) {
            (Algebra::FQSym, Label::Perm(_)) => BigUint::one(),
            (Algebra::FSym, Label::Tableau(t)) => t.shape().dim(),
            (Algebra::Lambda, Label::Partition(p)) => p.dim(),
            _ => {
                return Err(Error::BasisMismatch(format!(
                    "label {label} does not belong to {}",
                    self.name()
                )))
            }
        })
    }

    /// Coefficient of the given basis element in the n-th power of the
    /// degree-one generator: 1 on words and tableaux, dim(lambda) on
    /// partitions.
    pub fn power_coeff(&self, label: &Label) -> Result<BigUint> {
        Ok(match (self, label) {
            (Algebra::FQSym, Label::Perm(_)) => BigUint::one(),
            (Algebra::FSym, Label::Tableau(_)) => BigUint::one(),
            (Algebra::Lambda, Label::Partition(p)) => p.dim(),
            _ => {
                return Err(Error::BasisMismatch(format!(
                    "label {label} does not belong to {}",
                    self.name()
                )))
            }
        })
    }

    /// Dimension of the degree-k graded piece: k!, the number of SYT of
    /// size k, or the number of partitions of k.
    pub fn graded_dim(&self, k: usize) -> BigUint {
        match self {
            Algebra::FQSym => factorial(k),
            Algebra::FSym => {
                // involution numbers I(k) = I(k-1) + (k-1) I(k-2)
                let (mut a, mut b) = (BigUint::one(), BigUint::one());
                for i in 2..=k {
                    let next = &b + BigUint::from(i - 1) * &a;
                    a = b;
                    b = next;
                }
                b
            }
            Algebra::Lambda => BigUint::from(partitions_of(k).len()),
        }
    }
}

pub fn factorial(k: usize) -> BigUint {
    let mut f = BigUint::one();
    for i in 2..=k {
        f *= BigUint::from(i);
    }
    f
}

/// `binom(n; d_1, ..., d_k) = n! / prod d_i!` for a weak composition of n.
pub fn multinomial(d: &WeakComposition) -> BigUint {
    let mut num = factorial(d.degree());
    for &p in d.parts() {
        num /= factorial(p);
    }
    num
}

// ---------------------------------------------------------------------------
// Operator specifications
// ---------------------------------------------------------------------------

/// One mixture component: split into blocks of sizes `d`, permute the slots
/// by `sigma` (slot i of the product receives block `sigma[i]`), multiply.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OpTerm {
    pub d: WeakComposition,
    pub sigma: Perm,
    pub prob: Rat,
}

/// A probability mixture of descent-operator terms in a fixed degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DescentOpSpec {
    pub n: usize,
    pub terms: Vec<OpTerm>,
}

#[derive(Serialize, Deserialize)]
struct OpTermWire {
    #[serde(rename = "D")]
    d: Vec<usize>,
    sigma: Vec<usize>,
    prob: String,
}

#[derive(Serialize, Deserialize)]
struct DescentOpSpecWire {
    n: usize,
    terms: Vec<OpTermWire>,
}

impl DescentOpSpec {
    pub fn new(n: usize, terms: Vec<OpTerm>) -> Result<Self> {
        let spec = DescentOpSpec { n, terms };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.terms.is_empty() {
            return Err(Error::InvalidSpec("a spec needs at least one term".into()));
        }
        let mut total = Rat::zero();
        for t in &self.terms {
            if t.d.degree() != self.n {
                return Err(Error::InvalidSpec(format!(
                    "composition {} does not sum to n = {}",
                    t.d, self.n
                )));
            }
            if t.sigma.n() != t.d.len() {
                return Err(Error::InvalidSpec(format!(
                    "slot permutation {} has length {}, composition {} has {} parts",
                    t.sigma,
                    t.sigma.n(),
                    t.d,
                    t.d.len()
                )));
            }
            if t.prob.is_negative() {
                return Err(Error::InvalidSpec("negative term probability".into()));
            }
            total += &t.prob;
        }
        if !total.is_one() {
            return Err(Error::InvalidSpec(format!(
                "term probabilities sum to {}, expected 1",
                total
            )));
        }
        Ok(())
    }

    /// Single-term spec with the identity slot permutation.
    pub fn single(n: usize, parts: Vec<usize>) -> Result<Self> {
        let d = WeakComposition::new(parts);
        let sigma = Perm::identity(d.len());
        DescentOpSpec::new(
            n,
            vec![OpTerm {
                d,
                sigma,
                prob: Rat::one(),
            }],
        )
    }

    /// Named operator families. `n` is the degree the spec is instantiated
    /// in; see `preset` test cases for the exact shapes produced.
    pub fn preset(name: &str, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSpec("presets need degree n >= 1".into()));
        }
        let swap = Perm::new(vec![2, 1])?;
        match name {
            "down-up" => DescentOpSpec::single(n, vec![n - 1, 1]),
            "top-std" => DescentOpSpec::single(n, vec![1, n - 1]),
            "twisted-top" => {
                let d = WeakComposition::new(vec![1, n - 1]);
                DescentOpSpec::new(
                    n,
                    vec![OpTerm {
                        d,
                        sigma: swap,
                        prob: Rat::one(),
                    }],
                )
            }
            other => {
                if let Some(r) = other.strip_prefix("bottom-r:") {
                    let r: usize = r
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad bottom-r parameter in {other:?}")))?;
                    if r == 0 || r >= n {
                        return Err(Error::InvalidSpec(format!(
                            "bottom-r wants 1 <= r <= n-1, got r = {r}, n = {n}"
                        )));
                    }
                    let mut parts = vec![n - r];
                    parts.extend(std::iter::repeat_n(1, r));
                    DescentOpSpec::single(n, parts)
                } else if let Some(q) = other.strip_prefix("q-mix:") {
                    let q = parse_rat(q)?;
                    if q.is_negative() || q > Rat::one() {
                        return Err(Error::InvalidSpec(format!(
                            "q-mix parameter must lie in [0, 1], got {q}"
                        )));
                    }
                    let twisted = OpTerm {
                        d: WeakComposition::new(vec![1, n - 1]),
                        sigma: swap,
                        prob: q.clone(),
                    };
                    let downup = OpTerm {
                        d: WeakComposition::new(vec![n - 1, 1]),
                        sigma: Perm::identity(2),
                        prob: Rat::one() - q,
                    };
                    let terms = [twisted, downup]
                        .into_iter()
                        .filter(|t| !t.prob.is_zero())
                        .collect();
                    DescentOpSpec::new(n, terms)
                } else {
                    Err(Error::Parse(format!("unknown operator preset {other:?}")))
                }
            }
        }
    }

    pub fn to_json(&self) -> String {
        let wire = DescentOpSpecWire {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|t| OpTermWire {
                    d: t.d.parts().to_vec(),
                    sigma: t.sigma.word().to_vec(),
                    prob: crate::exactalg::fmt_rat(&t.prob),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&wire).expect("spec serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let wire: DescentOpSpecWire = serde_json::from_str(s)?;
        let terms = wire
            .terms
            .into_iter()
            .map(|t| {
                Ok(OpTerm {
                    d: WeakComposition::new(t.d),
                    sigma: Perm::new(t.sigma)?,
                    prob: parse_rat(&t.prob)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        DescentOpSpec::new(wire.n, terms)
    }
}

// ---------------------------------------------------------------------------
// Word-level operations
// ---------------------------------------------------------------------------

/// All interleavings of the given words (each word keeps its internal
/// order). Words over disjoint alphabets produce pairwise distinct results,
/// `binom(sum of lengths; lengths)` of them.
pub fn interleavings(blocks: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let total: usize = blocks.iter().map(|b| b.len()).sum();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(total);
    let mut pos = vec![0usize; blocks.len()];
    fn rec(
        blocks: &[Vec<usize>],
        pos: &mut Vec<usize>,
        current: &mut Vec<usize>,
        total: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if current.len() == total {
            out.push(current.clone());
            return;
        }
        for b in 0..blocks.len() {
            if pos[b] < blocks[b].len() {
                current.push(blocks[b][pos[b]]);
                pos[b] += 1;
                rec(blocks, pos, current, total, out);
                pos[b] -= 1;
                current.pop();
            }
        }
    }
    rec(blocks, &mut pos, &mut current, total, &mut out);
    out
}

/// Product of two basis words: shuffle `u` with `v` shifted up by `|u|`.
pub fn shifted_shuffles(u: &Perm, v: &Perm) -> Vec<Perm> {
    let blocks = vec![u.word().to_vec(), shift_word(v.word(), u.n())];
    interleavings(&blocks)
        .into_iter()
        .map(|w| Perm::new(w).expect("shuffle of disjoint alphabets is a permutation"))
        .collect()
}

/// The `D`-graded component of the iterated coproduct of a word: cut into
/// consecutive blocks of sizes `D` and standardise each block. On this basis
/// the component is a single pure tensor.
pub fn deconcatenation_blocks(sigma: &Perm, d: &WeakComposition) -> Result<Vec<Perm>> {
    if d.degree() != sigma.n() {
        return Err(Error::InvalidSpec(format!(
            "composition {d} does not match word length {}",
            sigma.n()
        )));
    }
    let mut blocks = Vec::with_capacity(d.len());
    let mut start = 0usize;
    for &p in d.parts() {
        blocks.push(standardise(&sigma.word()[start..start + p])?);
        start += p;
    }
    Ok(blocks)
}

/// One row of the operator on the word basis: the image of `sigma` as a
/// sparse list of (word, coefficient) pairs.
pub fn word_operator_row(spec: &DescentOpSpec, sigma: &Perm) -> Result<Vec<(Perm, Rat)>> {
    let mut acc: BTreeMap<Perm, Rat> = BTreeMap::new();
    for term in &spec.terms {
        let weight = &term.prob / Rat::from_integer(multinomial(&term.d).into());
        let blocks = deconcatenation_blocks(sigma, &term.d)?;
        // slot i of the product takes block sigma[i]
        let mut shifted = Vec::with_capacity(blocks.len());
        let mut offset = 0usize;
        for i in 0..blocks.len() {
            let b = &blocks[term.sigma.word()[i] - 1];
            shifted.push(shift_word(b.word(), offset));
            offset += b.n();
        }
        for w in interleavings(&shifted) {
            let p = Perm::new(w)?;
            *acc.entry(p).or_insert_with(Rat::zero) += &weight;
        }
    }
    Ok(acc.into_iter().collect())
}

// ---------------------------------------------------------------------------
// Matrices on each algebra
// ---------------------------------------------------------------------------

fn fqsym_matrix(spec: &DescentOpSpec) -> Result<TransitionMatrix> {
    let basis = Algebra::FQSym.basis(spec.n)?;
    let rows: Vec<Vec<(usize, Rat)>> = (0..basis.len())
        .into_par_iter()
        .map(|i| {
            let sigma = basis.label(i).as_perm()?;
            let row = word_operator_row(spec, sigma)?;
            row.into_iter()
                .map(|(p, c)| Ok((basis.require(&Label::Perm(p))?, c)))
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut m = TransitionMatrix::zero(basis);
    for (i, row) in rows.into_iter().enumerate() {
        for (j, c) in row {
            m.add_to(i, j, c);
        }
    }
    Ok(m)
}

/// Permutations grouped by insertion tableau, each fiber sorted.
pub fn rsk_fibers(n: usize) -> HashMap<StandardTableau, Vec<Perm>> {
    let mut fibers: HashMap<StandardTableau, Vec<Perm>> = HashMap::new();
    for p in perms_of(n) {
        fibers.entry(rsk_insertion_tableau(&p)).or_default().push(p);
    }
    fibers
}

/// Operator on the tableau basis, computed through the word-level embedding
/// `T -> sum of its insertion fiber`. The image of every fiber sum must
/// again be constant on fibers; if not, the operator does not restrict to
/// the tableau span and this fails with `ImageLeavesSpan`.
fn fsym_matrix(spec: &DescentOpSpec) -> Result<TransitionMatrix> {
    let basis = Algebra::FSym.basis(spec.n)?;
    let fibers = rsk_fibers(spec.n);
    let rows: Vec<Vec<(usize, Rat)>> = (0..basis.len())
        .into_par_iter()
        .map(|i| {
            let t = basis.label(i).as_tableau()?;
            let mut acc: HashMap<Perm, Rat> = HashMap::new();
            for sigma in &fibers[t] {
                for (w, c) in word_operator_row(spec, sigma)? {
                    *acc.entry(w).or_insert_with(Rat::zero) += c;
                }
            }
            acc.retain(|_, c| !c.is_zero());
            // regroup by target fiber and insist on a constant coefficient
            let mut grouped: HashMap<StandardTableau, (Rat, usize)> = HashMap::new();
            for (w, c) in acc {
                let target = rsk_insertion_tableau(&w);
                match grouped.entry(target) {
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert((c, 1));
                    }
                    std::collections::hash_map::Entry::Occupied(mut e) => {
                        if e.get().0 != c {
                            return Err(Error::ImageLeavesSpan(format!(
                                "image of {t} is not constant on the fiber of {}",
                                e.key()
                            )));
                        }
                        e.get_mut().1 += 1;
                    }
                }
            }
            let mut row = Vec::with_capacity(grouped.len());
            for (target, (c, seen)) in grouped {
                if seen != fibers[&target].len() {
                    return Err(Error::ImageLeavesSpan(format!(
                        "image of {t} covers only part of the fiber of {target}"
                    )));
                }
                row.push((basis.require(&Label::Tableau(target))?, c));
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let mut m = TransitionMatrix::zero(basis);
    for (i, row) in rows.into_iter().enumerate() {
        for (j, c) in row {
            m.add_to(i, j, c);
        }
    }
    Ok(m)
}

/// Number of standard sequences from `inner` up to `outer`, i.e. chains in
/// the Young lattice adding one box at a time.
pub fn skew_paths(inner: &Partition, outer: &Partition) -> BigUint {
    fn contains(a: &Partition, b: &Partition) -> bool {
        (0..b.len()).all(|i| a.row(i + 1) >= b.row(i + 1))
    }
    if !contains(outer, inner) {
        return BigUint::zero();
    }
    if outer == inner {
        return BigUint::one();
    }
    let mut total = BigUint::zero();
    for &(r, c) in &outer.removable_boxes() {
        let smaller = outer.remove_box(r, c).expect("removable corner");
        if contains(&smaller, inner) {
            total += skew_paths(inner, &smaller);
        }
    }
    total
}

/// Operator on the Schur basis, via box-removal/box-addition rules. Works
/// for terms whose composition has at most one part larger than 1 (the slot
/// permutation is immaterial here because the product is commutative);
/// other terms report `Unsupported`, and callers should build the tableau
/// matrix and collapse it along the shape map instead.
fn lambda_matrix(spec: &DescentOpSpec) -> Result<TransitionMatrix> {
    let basis = Algebra::Lambda.basis(spec.n)?;
    let mut m = TransitionMatrix::zero(basis);
    for term in &spec.terms {
        let bigs: Vec<usize> = term.d.parts().iter().copied().filter(|&p| p > 1).collect();
        if bigs.len() > 1 {
            return Err(Error::Unsupported(format!(
                "composition {} has several parts larger than 1; build the \
                 tableau matrix and collapse by shape instead",
                term.d
            )));
        }
        let keep = bigs.first().copied().unwrap_or(0);
        let weight = &term.prob / Rat::from_integer(multinomial(&term.d).into());
        for i in 0..m.dim() {
            let lam = m.basis().label(i).as_partition()?.clone();
            // coproduct: all ways down to a partition of size `keep`,
            // counted by standard removal sequences
            let mut down: BTreeMap<Partition, BigUint> = BTreeMap::new();
            for mu in partitions_of(keep) {
                let paths = skew_paths(&mu, &lam);
                if !paths.is_zero() {
                    down.insert(mu, paths);
                }
            }
            // product: add the removed boxes back one at a time
            for (mu, down_paths) in down {
                for nu in partitions_of(spec.n) {
                    let up_paths = skew_paths(&mu, &nu);
                    if up_paths.is_zero() {
                        continue;
                    }
                    let j = m.basis().require(&Label::Partition(nu))?;
                    let c = &weight * Rat::from_integer((down_paths.clone() * up_paths).into());
                    m.add_to(i, j, c);
                }
            }
        }
    }
    Ok(m)
}

/// The raw (pre-transform) operator matrix on the chosen algebra.
pub fn descent_operator_matrix(alg: Algebra, spec: &DescentOpSpec) -> Result<TransitionMatrix> {
    spec.validate()?;
    match alg {
        Algebra::FQSym => fqsym_matrix(spec),
        Algebra::FSym => fsym_matrix(spec),
        Algebra::Lambda => lambda_matrix(spec),
    }
}

/// Direct construction of the remove/re-insert operator on tableaux:
/// reverse a row insertion at each corner, then place the largest letter at
/// each addable box of the remaining shape. Used as an independent check of
/// the embedding route.
pub fn fsym_downup_direct(n: usize) -> Result<TransitionMatrix> {
    let basis = Algebra::FSym.basis(n)?;
    let mut m = TransitionMatrix::zero(basis);
    let weight = Rat::new(1.into(), (n as i64).into());
    for i in 0..m.dim() {
        let t = m.basis().label(i).as_tableau()?.clone();
        for &(r, c) in &t.shape().removable_boxes() {
            let (rows, _expelled) = t.unbump(r, c)?;
            let smaller = crate::combinat::standardise_tableau(&rows)?;
            for &(ar, ac) in &smaller.shape().addable_boxes() {
                let bigger = smaller.add_box(ar, ac)?;
                let j = m.basis().require(&Label::Tableau(bigger))?;
                m.add_to(i, j, weight.clone());
            }
        }
    }
    Ok(m)
}

/// Expansion of a Schur basis element over descent compositions: each
/// standard tableau of the shape contributes its descent composition. The
/// returned list is sorted with multiplicities collected.
pub fn schur_to_fundamental(lam: &Partition) -> Vec<(WeakComposition, usize)> {
    let mut counts: BTreeMap<WeakComposition, usize> = BTreeMap::new();
    for t in crate::combinat::syt_of_shape(lam) {
        *counts.entry(t.descent_composition()).or_insert(0) += 1;
    }
    counts.into_iter().collect()
}

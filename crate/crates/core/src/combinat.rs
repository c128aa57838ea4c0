//! Combinatorial ground types: integer partitions, standard Young tableaux,
//! permutations-as-words, and weak compositions.
//!
//! Conventions used throughout the crate:
//! - Boxes are addressed `(row, col)`, 1-based, English orientation (row 1 at
//!   the top, row lengths weakly decreasing downwards).
//! - Permutations are words in one-line notation. When a word models a deck
//!   of cards, position 1 is the top card.
//! - Canonical orderings, used wherever a state space indexes a matrix:
//!   partitions of `n` reverse-lexicographically (`(n)` first, `(1,...,1)`
//!   last), tableaux by shape and then row-reading word, permutations
//!   lexicographically. `Ord` on each type agrees with its canonical order.
//! - Text encodings: partition `"5,2,2"`, permutation `"5 2 4 3 1"`, tableau
//!   `"1 2 5 / 3 / 4"`. The empty object of each kind encodes as `""`.

use crate::error::{Error, Result};
use num::bigint::BigUint;
use num::traits::One;
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

// ---------------------------------------------------------------------------
// Partition
// ---------------------------------------------------------------------------

/// Integer partition: weakly decreasing positive parts.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("zero part in {parts:?}")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "parts not weakly decreasing: {parts:?}"
            )));
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of boxes.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of rows.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Length of row `r` (1-based), zero beyond the last row.
    pub fn row(&self, r: usize) -> usize {
        if r >= 1 && r <= self.parts.len() {
            self.parts[r - 1]
        } else {
            0
        }
    }

    pub fn contains_box(&self, r: usize, c: usize) -> bool {
        r >= 1 && c >= 1 && c <= self.row(r)
    }

    /// A box whose removal leaves a partition: last box of a row strictly
    /// longer than the next row.
    pub fn is_removable(&self, r: usize, c: usize) -> bool {
        self.contains_box(r, c) && c == self.row(r) && self.row(r + 1) < c
    }

    /// A position whose addition gives a partition.
    pub fn is_addable(&self, r: usize, c: usize) -> bool {
        r >= 1 && c == self.row(r) + 1 && (r == 1 || self.row(r - 1) >= c)
    }

    /// Removable corners, top row first.
    pub fn removable_boxes(&self) -> Vec<(usize, usize)> {
        (1..=self.parts.len())
            .filter(|&r| self.is_removable(r, self.row(r)))
            .map(|r| (r, self.row(r)))
            .collect()
    }

    /// Addable positions, top row first. Always includes `(len+1, 1)`.
    pub fn addable_boxes(&self) -> Vec<(usize, usize)> {
        (1..=self.parts.len() + 1)
            .filter(|&r| self.is_addable(r, self.row(r) + 1))
            .map(|r| (r, self.row(r) + 1))
            .collect()
    }

    pub fn remove_box(&self, r: usize, c: usize) -> Result<Partition> {
        if !self.is_removable(r, c) {
            return Err(Error::NotRemovable(r, c));
        }
        let mut parts = self.parts.clone();
        parts[r - 1] -= 1;
        if parts[r - 1] == 0 {
            parts.pop();
        }
        Ok(Partition { parts })
    }

    pub fn add_box(&self, r: usize, c: usize) -> Result<Partition> {
        if !self.is_addable(r, c) {
            return Err(Error::NotAddable(r, c));
        }
        let mut parts = self.parts.clone();
        if r == parts.len() + 1 {
            parts.push(1);
        } else {
            parts[r - 1] += 1;
        }
        Ok(Partition { parts })
    }

    /// All boxes, row-reading order.
    pub fn boxes(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.size());
        for (i, &p) in self.parts.iter().enumerate() {
            for c in 1..=p {
                out.push((i + 1, c));
            }
        }
        out
    }

    /// Hook length of a box: arm + leg + 1.
    pub fn hook_length(&self, r: usize, c: usize) -> usize {
        debug_assert!(self.contains_box(r, c));
        let arm = self.row(r) - c;
        let leg = self.parts[r..].iter().take_while(|&&p| p >= c).count();
        arm + leg + 1
    }

    /// Number of standard Young tableaux of this shape, by the hook length
    /// formula `n! / prod(hooks)`.
    pub fn dim(&self) -> BigUint {
        let n = self.size();
        let mut num = BigUint::one();
        for k in 2..=n {
            num *= BigUint::from(k);
        }
        let mut den = BigUint::one();
        for (r, c) in self.boxes() {
            den *= BigUint::from(self.hook_length(r, c));
        }
        num / den
    }
}

/// Reverse-lexicographic: `(n)` first, `(1,...,1)` last.
impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        let m = self.parts.len().max(other.parts.len());
        for i in 0..m {
            let a = self.row(i + 1);
            let b = other.row(i + 1);
            if a != b {
                return b.cmp(&a);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::Parse(format!("partition part {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// All partitions of `n` in canonical (reverse-lexicographic) order.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    fn rec(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p);
            rec(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

// ---------------------------------------------------------------------------
// Permutation words
// ---------------------------------------------------------------------------

/// Permutation of `{1, ..., n}` in one-line notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Perm {
    word: Vec<usize>,
}

impl Perm {
    pub fn new(word: Vec<usize>) -> Result<Self> {
        let n = word.len();
        let mut seen = vec![false; n + 1];
        for &x in &word {
            if x == 0 || x > n || seen[x] {
                return Err(Error::InvalidPermutation(format!(
                    "not a bijection on 1..={n}: {word:?}"
                )));
            }
            seen[x] = true;
        }
        Ok(Perm { word })
    }

    pub fn identity(n: usize) -> Self {
        Perm {
            word: (1..=n).collect(),
        }
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn n(&self) -> usize {
        self.word.len()
    }

    /// Descent set: positions `i` with `w(i) > w(i+1)`, 1-based.
    pub fn descent_set(&self) -> Vec<usize> {
        (1..self.word.len())
            .filter(|&i| self.word[i - 1] > self.word[i])
            .collect()
    }

    /// Composition of `n` formed by the gaps between descents.
    pub fn descent_composition(&self) -> WeakComposition {
        composition_from_descents(&self.descent_set(), self.n())
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.word.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", s.join(" "))
    }
}

impl FromStr for Perm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Perm { word: Vec::new() });
        }
        let word = s
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|e| Error::Parse(format!("permutation letter {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Perm::new(word)
    }
}

/// All permutations of `{1,...,n}` in lexicographic order.
pub fn perms_of(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut word: Vec<usize> = (1..=n).collect();
    loop {
        out.push(Perm { word: word.clone() });
        // next permutation in lex order
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| word[i] < word[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| word[j] > word[i]).unwrap();
        word.swap(i, j);
        word[i + 1..].reverse();
    }
    if n == 0 {
        return vec![Perm { word: Vec::new() }];
    }
    out
}

/// Order-isomorphic relabelling of a word with distinct letters onto
/// `{1, ..., k}`: the i-th smallest letter becomes `i`.
pub fn standardise(word: &[usize]) -> Result<Perm> {
    let mut sorted: Vec<usize> = word.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidPermutation(format!(
            "cannot standardise word with repeated letters: {word:?}"
        )));
    }
    let rank = |x: usize| sorted.binary_search(&x).unwrap() + 1;
    Ok(Perm {
        word: word.iter().map(|&x| rank(x)).collect(),
    })
}

/// Add `k` to every letter.
pub fn shift_word(word: &[usize], k: usize) -> Vec<usize> {
    word.iter().map(|&x| x + k).collect()
}

// ---------------------------------------------------------------------------
// Weak compositions
// ---------------------------------------------------------------------------

/// Weak composition: a sequence of non-negative parts. Zero parts are
/// meaningful for coproducts (they contribute the unit to their tensor slot).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct WeakComposition {
    parts: Vec<usize>,
}

impl WeakComposition {
    pub fn new(parts: Vec<usize>) -> Self {
        WeakComposition { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn degree(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// The partition obtained by sorting the positive parts decreasingly.
    pub fn sorted_partition(&self) -> Partition {
        let mut p: Vec<usize> = self.parts.iter().copied().filter(|&x| x > 0).collect();
        p.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts: p }
    }
}

impl fmt::Display for WeakComposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

impl FromStr for WeakComposition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(WeakComposition::new(Vec::new()));
        }
        let parts = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::Parse(format!("composition part {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(WeakComposition::new(parts))
    }
}

/// Composition of `n` whose partial sums are the given strictly increasing
/// descent positions (each in `1..n`).
pub fn composition_from_descents(descents: &[usize], n: usize) -> WeakComposition {
    let mut parts = Vec::with_capacity(descents.len() + 1);
    let mut prev = 0;
    for &d in descents {
        parts.push(d - prev);
        prev = d;
    }
    if (n > 0 || descents.is_empty())
        && n >= prev
            && (n > prev || parts.is_empty()) {
                parts.push(n - prev);
            }
    // degree-0 edge: composition of 0 is the empty composition
    if n == 0 {
        return WeakComposition::new(Vec::new());
    }
    WeakComposition::new(parts)
}

/// All compositions of `n` with positive parts, in lexicographic order of
/// their part vectors (agrees with the derived `Ord`). There are `2^(n-1)`
/// of them for `n >= 1`, and just the empty composition for `n = 0`.
pub fn compositions_of(n: usize) -> Vec<WeakComposition> {
    if n == 0 {
        return vec![WeakComposition::new(Vec::new())];
    }
    let mut out = Vec::with_capacity(1 << (n - 1));
    let mut parts: Vec<usize> = Vec::new();
    fn rec(remaining: usize, parts: &mut Vec<usize>, out: &mut Vec<WeakComposition>) {
        if remaining == 0 {
            out.push(WeakComposition::new(parts.clone()));
            return;
        }
        for p in 1..=remaining {
            parts.push(p);
            rec(remaining - p, parts, out);
            parts.pop();
        }
    }
    rec(n, &mut parts, &mut out);
    out
}

// ---------------------------------------------------------------------------
// Standard Young tableaux
// ---------------------------------------------------------------------------

/// Standard Young tableau: rows strictly increase rightwards, columns
/// strictly increase downwards, entries are exactly `1..=n`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct StandardTableau {
    rows: Vec<Vec<usize>>,
}

impl StandardTableau {
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let t = StandardTableau { rows };
        t.validate()?;
        Ok(t)
    }

    pub fn empty() -> Self {
        StandardTableau { rows: Vec::new() }
    }

    fn validate(&self) -> Result<()> {
        let shape: Vec<usize> = self.rows.iter().map(|r| r.len()).collect();
        Partition::new(shape)
            .map_err(|_| Error::InvalidTableau(format!("rows do not form a partition: {self}")))?;
        let n = self.n();
        let mut seen = vec![false; n + 1];
        for row in &self.rows {
            for &x in row {
                if x == 0 || x > n || seen[x] {
                    return Err(Error::InvalidTableau(format!(
                        "entries are not exactly 1..={n}: {self}"
                    )));
                }
                seen[x] = true;
            }
        }
        for row in &self.rows {
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidTableau(format!("row not increasing: {self}")));
            }
        }
        for r in 1..self.rows.len() {
            for c in 0..self.rows[r].len() {
                if self.rows[r - 1][c] >= self.rows[r][c] {
                    return Err(Error::InvalidTableau(format!(
                        "column not increasing: {self}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn n(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn shape(&self) -> Partition {
        Partition {
            parts: self.rows.iter().map(|r| r.len()).collect(),
        }
    }

    pub fn entry(&self, r: usize, c: usize) -> usize {
        self.rows[r - 1][c - 1]
    }

    /// Row of a letter, 1-based.
    pub fn row_of(&self, letter: usize) -> Option<usize> {
        for (i, row) in self.rows.iter().enumerate() {
            if row.contains(&letter) {
                return Some(i + 1);
            }
        }
        None
    }

    /// Rows concatenated top to bottom.
    pub fn reading_word(&self) -> Vec<usize> {
        self.rows.iter().flatten().copied().collect()
    }

    /// Descents: letters `i` such that `i+1` sits in a strictly lower row.
    pub fn descent_set(&self) -> Vec<usize> {
        let n = self.n();
        (1..n)
            .filter(|&i| self.row_of(i + 1).unwrap() > self.row_of(i).unwrap())
            .collect()
    }

    pub fn descent_composition(&self) -> WeakComposition {
        composition_from_descents(&self.descent_set(), self.n())
    }

    /// Place the next letter `n+1` in the given addable position.
    pub fn add_box(&self, r: usize, c: usize) -> Result<StandardTableau> {
        if !self.shape().is_addable(r, c) {
            return Err(Error::NotAddable(r, c));
        }
        let mut rows = self.rows.clone();
        let letter = self.n() + 1;
        if r == rows.len() + 1 {
            rows.push(vec![letter]);
        } else {
            rows[r - 1].push(letter);
        }
        Ok(StandardTableau { rows })
    }

    /// Inverse row insertion starting at the removable box `(r, c)`.
    ///
    /// The filling of that box bumps upwards: in each row above, it replaces
    /// the largest entry smaller than itself, and the replaced entry carries
    /// on upward. Returns the remaining rows (distinct fillings, not
    /// necessarily `1..=n-1`) and the letter expelled from row 1. Composing
    /// with [`row_insert`] restores the original tableau.
    pub fn unbump(&self, r: usize, c: usize) -> Result<(Vec<Vec<usize>>, usize)> {
        if !self.shape().is_removable(r, c) {
            return Err(Error::NotRemovable(r, c));
        }
        let mut rows = self.rows.clone();
        let mut carry = rows[r - 1].pop().unwrap();
        if rows[r - 1].is_empty() {
            rows.pop();
        }
        for i in (0..r - 1).rev() {
            // largest entry smaller than carry; rows are increasing
            let j = rows[i].partition_point(|&x| x < carry);
            debug_assert!(j > 0, "column strictness guarantees a smaller entry above");
            std::mem::swap(&mut carry, &mut rows[i][j - 1]);
        }
        Ok((rows, carry))
    }
}

/// Canonical: by shape first, then by row-reading word.
impl Ord for StandardTableau {
    fn cmp(&self, other: &Self) -> Ordering {
        self.shape()
            .cmp(&other.shape())
            .then_with(|| self.reading_word().cmp(&other.reading_word()))
    }
}

impl PartialOrd for StandardTableau {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for StandardTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        write!(f, "{}", rows.join(" / "))
    }
}

impl FromStr for StandardTableau {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(StandardTableau::empty());
        }
        let rows = s
            .split('/')
            .map(|row| {
                row.split_whitespace()
                    .map(|t| {
                        t.parse::<usize>()
                            .map_err(|e| Error::Parse(format!("tableau entry {t:?}: {e}")))
                    })
                    .collect::<Result<Vec<usize>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        StandardTableau::new(rows)
    }
}

/// Schensted row insertion of `letter` into rows with distinct fillings.
/// Rows need not be standard, only increasing along rows and columns.
pub fn row_insert(rows: &[Vec<usize>], letter: usize) -> Vec<Vec<usize>> {
    let mut rows = rows.to_vec();
    let mut carry = letter;
    for row in rows.iter_mut() {
        let j = row.partition_point(|&x| x < carry);
        if j == row.len() {
            row.push(carry);
            return rows;
        }
        std::mem::swap(&mut carry, &mut row[j]);
    }
    rows.push(vec![carry]);
    rows
}

/// Relabel distinct fillings order-isomorphically onto `1..=n`.
pub fn standardise_tableau(rows: &[Vec<usize>]) -> Result<StandardTableau> {
    let mut letters: Vec<usize> = rows.iter().flatten().copied().collect();
    letters.sort_unstable();
    if letters.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidTableau(format!(
            "repeated filling in {rows:?}"
        )));
    }
    let rank = |x: usize| letters.binary_search(&x).unwrap() + 1;
    StandardTableau::new(
        rows.iter()
            .map(|r| r.iter().map(|&x| rank(x)).collect())
            .collect(),
    )
}

/// Insertion (P) tableau of RSK applied to the word.
pub fn rsk_insertion_tableau(p: &Perm) -> StandardTableau {
    let mut rows: Vec<Vec<usize>> = Vec::new();
    for &x in p.word() {
        rows = row_insert(&rows, x);
    }
    StandardTableau { rows }
}

/// All standard Young tableaux of the given shape, sorted by reading word.
pub fn syt_of_shape(shape: &Partition) -> Vec<StandardTableau> {
    fn rec(shape: &Partition) -> Vec<Vec<Vec<usize>>> {
        let n = shape.size();
        if n == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for (r, c) in shape.removable_boxes() {
            let sub = shape.remove_box(r, c).unwrap();
            for mut rows in rec(&sub) {
                if r > rows.len() {
                    rows.push(vec![n]);
                } else {
                    rows[r - 1].push(n);
                }
                out.push(rows);
            }
        }
        out
    }
    let mut tabs: Vec<StandardTableau> = rec(shape)
        .into_iter()
        .map(|rows| StandardTableau { rows })
        .collect();
    tabs.sort();
    tabs
}

/// All standard Young tableaux with `n` boxes, in canonical order.
pub fn syt_of_degree(n: usize) -> Vec<StandardTableau> {
    partitions_of(n)
        .iter()
        .flat_map(syt_of_shape)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn pm(s: &str) -> Perm {
        s.parse().unwrap()
    }

    fn tab(s: &str) -> StandardTableau {
        s.parse().unwrap()
    }

    #[test]
    fn partition_parse_display_roundtrip() {
        for s in ["5,2,2", "3", "", "1,1,1,1"] {
            assert_eq!(pt(s).to_string(), s);
        }
        assert!("2,3".parse::<Partition>().is_err());
        assert!("3,0".parse::<Partition>().is_err());
    }

    #[test]
    fn partitions_canonical_order() {
        let got: Vec<String> = partitions_of(4).iter().map(|p| p.to_string()).collect();
        assert_eq!(got, ["4", "3,1", "2,2", "2,1,1", "1,1,1,1"]);
        // p(n) for n = 0..=10
        let counts: Vec<usize> = (0..=10).map(|n| partitions_of(n).len()).collect();
        assert_eq!(counts, [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
        for n in 0..=8 {
            let ps = partitions_of(n);
            let mut sorted = ps.clone();
            sorted.sort();
            assert_eq!(ps, sorted, "enumeration order must agree with Ord");
        }
    }

    #[test]
    fn corners_and_boxes() {
        let p = pt("3,1");
        assert_eq!(p.removable_boxes(), vec![(1, 3), (2, 1)]);
        assert_eq!(p.addable_boxes(), vec![(1, 4), (2, 2), (3, 1)]);
        assert_eq!(p.remove_box(1, 3).unwrap(), pt("2,1"));
        assert_eq!(p.add_box(2, 2).unwrap(), pt("3,2"));
        assert!(p.remove_box(1, 2).is_err());
        assert!(p.add_box(3, 2).is_err());
        assert_eq!(Partition::empty().addable_boxes(), vec![(1, 1)]);
    }

    #[test]
    fn hook_lengths_and_dim() {
        // shape (3,1): hooks 4,2,1 / 1
        let p = pt("3,1");
        assert_eq!(p.hook_length(1, 1), 4);
        assert_eq!(p.hook_length(1, 2), 2);
        assert_eq!(p.hook_length(1, 3), 1);
        assert_eq!(p.hook_length(2, 1), 1);
        assert_eq!(p.dim(), BigUint::from(3u32));
        assert_eq!(pt("2,1").dim(), BigUint::from(2u32));
        assert_eq!(pt("2,2").dim(), BigUint::from(2u32));
        assert_eq!(Partition::empty().dim(), BigUint::one());
        // staircase (5,4,3,2,1)
        assert_eq!(pt("5,4,3,2,1").dim(), BigUint::from(292864u32));
    }

    #[test]
    fn dim_matches_enumeration() {
        for n in 0..=8 {
            for p in partitions_of(n) {
                let tabs = syt_of_shape(&p);
                assert_eq!(
                    BigUint::from(tabs.len()),
                    p.dim(),
                    "hook formula vs enumeration at {p}"
                );
                // enumerated tableaux are distinct, valid, and sorted
                for t in &tabs {
                    t.validate().unwrap();
                    assert_eq!(t.shape(), p);
                }
                let mut sorted = tabs.clone();
                sorted.sort();
                sorted.dedup();
                assert_eq!(sorted, tabs);
            }
        }
    }

    #[test]
    fn syt_degree_order_matches_display() {
        let got: Vec<String> = syt_of_degree(3).iter().map(|t| t.to_string()).collect();
        assert_eq!(got, ["1 2 3", "1 2 / 3", "1 3 / 2", "1 / 2 / 3"]);
        // total count of SYT with n boxes = involution numbers
        let counts: Vec<usize> = (0..=7).map(|n| syt_of_degree(n).len()).collect();
        assert_eq!(counts, [1, 1, 2, 4, 10, 26, 76, 232]);
    }

    #[test]
    fn perm_order_and_roundtrip() {
        let got: Vec<String> = perms_of(3).iter().map(|p| p.to_string()).collect();
        assert_eq!(got, ["1 2 3", "1 3 2", "2 1 3", "2 3 1", "3 1 2", "3 2 1"]);
        assert_eq!(perms_of(0).len(), 1);
        assert_eq!(perms_of(5).len(), 120);
        assert_eq!(pm("5 2 4 3 1").to_string(), "5 2 4 3 1");
        assert!("1 1 2".parse::<Perm>().is_err());
        assert!("1 3".parse::<Perm>().is_err());
        let ps = perms_of(4);
        let mut sorted = ps.clone();
        sorted.sort();
        assert_eq!(ps, sorted);
    }

    #[test]
    fn standardise_examples() {
        // frozen worked example
        let w = [6, 1, 4, 8, 2, 11, 10, 13, 5];
        assert_eq!(
            standardise(&w).unwrap(),
            pm("5 1 3 6 2 8 7 9 4"),
            "standardisation of (6,1,4,8,2,11,10,13,5)"
        );
        assert_eq!(
            shift_word(&[5, 1, 3, 6, 2, 8, 7, 9, 4], 3),
            vec![8, 4, 6, 9, 5, 11, 10, 12, 7]
        );
        assert!(standardise(&[2, 2, 1]).is_err());
        // standardising a permutation is the identity operation
        for p in perms_of(4) {
            assert_eq!(standardise(p.word()).unwrap(), p);
        }
    }

    #[test]
    fn descent_compositions() {
        assert_eq!(pm("1 3 2").descent_composition().to_string(), "2,1");
        assert_eq!(pm("3 1 2").descent_composition().to_string(), "1,2");
        assert_eq!(pm("1 2 3").descent_composition().to_string(), "3");
        assert_eq!(pm("3 2 1").descent_composition().to_string(), "1,1,1");
        assert_eq!(pm("5 2 4 3 1").descent_set(), vec![1, 3, 4]);
    }

    #[test]
    fn tableau_parse_display_roundtrip() {
        for s in ["1 2 5 / 3 / 4", "1 2 3", "1 / 2 / 3", ""] {
            assert_eq!(tab(s).to_string(), s);
        }
        assert!("1 3 / 2 4".parse::<StandardTableau>().is_ok());
        assert!("1 4 / 2 3".parse::<StandardTableau>().is_err()); // column 2: 4 > 3
        assert!("2 3 / 1".parse::<StandardTableau>().is_err()); // column decreasing
        assert!("1 2 / 3 4 5".parse::<StandardTableau>().is_err()); // not a partition
        assert!("1 2 / 2".parse::<StandardTableau>().is_err()); // repeated entry
    }

    #[test]
    fn tableau_descents() {
        // descents of SYT of shape (3,1) give compositions (3,1), (2,2), (1,3)
        let t1 = tab("1 2 3 / 4");
        let t2 = tab("1 2 4 / 3");
        let t3 = tab("1 3 4 / 2");
        assert_eq!(t1.descent_composition().to_string(), "3,1");
        assert_eq!(t2.descent_composition().to_string(), "2,2");
        assert_eq!(t3.descent_composition().to_string(), "1,3");
    }

    #[test]
    fn rsk_hand_runs() {
        assert_eq!(rsk_insertion_tableau(&pm("3 1 2")), tab("1 2 / 3"));
        assert_eq!(rsk_insertion_tableau(&pm("1 3 2")), tab("1 2 / 3"));
        assert_eq!(rsk_insertion_tableau(&pm("2 1 3")), tab("1 3 / 2"));
        assert_eq!(rsk_insertion_tableau(&pm("2 3 1")), tab("1 3 / 2"));
        assert_eq!(rsk_insertion_tableau(&pm("1 2 3")), tab("1 2 3"));
        assert_eq!(rsk_insertion_tableau(&pm("3 2 1")), tab("1 / 2 / 3"));
        assert_eq!(rsk_insertion_tableau(&pm("")), StandardTableau::empty());
    }

    #[test]
    fn rsk_fiber_sizes_match_dims() {
        // the number of words inserting to T equals dim(sh T); summing squares
        // of dims over shapes gives n!
        use std::collections::HashMap;
        for n in 0..=6 {
            let mut fibers: HashMap<StandardTableau, usize> = HashMap::new();
            for p in perms_of(n) {
                *fibers.entry(rsk_insertion_tableau(&p)).or_insert(0) += 1;
            }
            let mut total = 0usize;
            for (t, count) in &fibers {
                assert_eq!(BigUint::from(*count), t.shape().dim(), "fiber of {t}");
                total += count;
            }
            assert_eq!(total, perms_of(n).len());
            assert_eq!(fibers.len(), syt_of_degree(n).len());
        }
    }

    #[test]
    fn unbump_worked_examples() {
        let t = tab("1 2 5 / 3 / 4");
        // removable corner in row 3 holds 4; bumping path expels 2
        let (rows, letter) = t.unbump(3, 1).unwrap();
        assert_eq!(rows, vec![vec![1, 3, 5], vec![4]]);
        assert_eq!(letter, 2);
        assert_eq!(standardise_tableau(&rows).unwrap(), tab("1 2 4 / 3"));
        // removable corner in row 1 holds 5; expelled directly
        let (rows, letter) = t.unbump(1, 3).unwrap();
        assert_eq!(rows, vec![vec![1, 2], vec![3], vec![4]]);
        assert_eq!(letter, 5);
        assert_eq!(standardise_tableau(&rows).unwrap(), tab("1 2 / 3 / 4"));
        assert!(t.unbump(2, 1).is_err());
    }

    #[test]
    fn unbump_insert_roundtrip() {
        // inverse row insertion followed by row insertion restores the tableau
        for n in 1..=7 {
            for t in syt_of_degree(n) {
                for (r, c) in t.shape().removable_boxes() {
                    let (rows, letter) = t.unbump(r, c).unwrap();
                    let back = row_insert(&rows, letter);
                    assert_eq!(back, t.rows(), "roundtrip at {t}, corner ({r},{c})");
                }
            }
        }
    }

    #[test]
    fn add_box_places_next_letter() {
        let t = tab("1 2 / 3");
        assert_eq!(t.add_box(1, 3).unwrap(), tab("1 2 4 / 3"));
        assert_eq!(t.add_box(2, 2).unwrap(), tab("1 2 / 3 4"));
        assert_eq!(t.add_box(3, 1).unwrap(), tab("1 2 / 3 / 4"));
        assert!(t.add_box(1, 4).is_err());
    }

    #[test]
    fn composition_from_descent_positions() {
        assert_eq!(composition_from_descents(&[1, 3, 4], 5).to_string(), "1,2,1,1");
        assert_eq!(composition_from_descents(&[], 4).to_string(), "4");
        assert_eq!(composition_from_descents(&[], 0).to_string(), "");
    }

    #[test]
    fn compositions_enumerated_in_order() {
        let names: Vec<String> = compositions_of(3).iter().map(|c| c.to_string()).collect();
        assert_eq!(names, ["1,1,1", "1,2", "2,1", "3"]);
        for n in 0..=8 {
            let all = compositions_of(n);
            let expected = if n == 0 { 1 } else { 1 << (n - 1) };
            assert_eq!(all.len(), expected);
            assert!(all.windows(2).all(|w| w[0] < w[1]), "sorted and distinct");
            assert!(all.iter().all(|c| c.degree() == n));
            assert!(all.iter().all(|c| c.parts().iter().all(|&p| p > 0)));
        }
        // every permutation's descent composition is in the list
        let all = compositions_of(4);
        for p in perms_of(4) {
            assert!(all.contains(&p.descent_composition()));
        }
    }
}

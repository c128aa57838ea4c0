//! Exact linear algebra over arbitrary-precision rationals: state labels,
//! ordered bases, free-module vectors, square matrices (dense or sparse),
//! and serialization.
//!
//! Rationals serialize as `"p/q"` strings, always with an explicit
//! denominator and in lowest terms. Matrices serialize as a JSON object
//! `{"basis": [...], "rows": [[...]], "stochastic": bool}` with dense rows
//! regardless of the in-memory representation.

use crate::combinat::{Partition, Perm, StandardTableau, WeakComposition};
use crate::error::{Error, Result};
use num::bigint::BigInt;
use num::traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

pub mod poly;

pub use poly::{char_poly, min_poly, Poly};

/// Arbitrary-precision rational number.
pub type Rat = num::BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(num: i64) -> Rat {
    Rat::from_integer(BigInt::from(num))
}

/// Parse `"p/q"` or a bare integer `"p"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|e| Error::Parse(format!("rational {s:?}: {e}")))?;
    let den = BigInt::from_str(den).map_err(|e| Error::Parse(format!("rational {s:?}: {e}")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("rational {s:?}: zero denominator")));
    }
    Ok(Rat::new(num, den))
}

/// Format as `"p/q"`, always with the (positive) denominator.
pub fn fmt_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

// ---------------------------------------------------------------------------
// Labels and bases
// ---------------------------------------------------------------------------

/// A state label: one point of some chain's state space.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Label {
    Perm(Perm),
    Tableau(StandardTableau),
    Partition(Partition),
    Composition(WeakComposition),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LabelKind {
    Perm,
    Tableau,
    Partition,
    Composition,
}

impl Label {
    pub fn kind(&self) -> LabelKind {
        match self {
            Label::Perm(_) => LabelKind::Perm,
            Label::Tableau(_) => LabelKind::Tableau,
            Label::Partition(_) => LabelKind::Partition,
            Label::Composition(_) => LabelKind::Composition,
        }
    }

    pub fn parse_as(kind: LabelKind, s: &str) -> Result<Label> {
        Ok(match kind {
            LabelKind::Perm => Label::Perm(s.parse()?),
            LabelKind::Tableau => Label::Tableau(s.parse()?),
            LabelKind::Partition => Label::Partition(s.parse()?),
            LabelKind::Composition => Label::Composition(s.parse()?),
        })
    }

    pub fn as_perm(&self) -> Result<&Perm> {
        match self {
            Label::Perm(p) => Ok(p),
            other => Err(Error::BasisMismatch(format!(
                "expected permutation label, got {other}"
            ))),
        }
    }

    pub fn as_tableau(&self) -> Result<&StandardTableau> {
        match self {
            Label::Tableau(t) => Ok(t),
            other => Err(Error::BasisMismatch(format!(
                "expected tableau label, got {other}"
            ))),
        }
    }

    pub fn as_partition(&self) -> Result<&Partition> {
        match self {
            Label::Partition(p) => Ok(p),
            other => Err(Error::BasisMismatch(format!(
                "expected partition label, got {other}"
            ))),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Perm(x) => write!(f, "{x}"),
            Label::Tableau(x) => write!(f, "{x}"),
            Label::Partition(x) => write!(f, "{x}"),
            Label::Composition(x) => write!(f, "{x}"),
        }
    }
}

/// An ordered basis of state labels with constant-time index lookup.
#[derive(Clone, Debug)]
pub struct Basis {
    labels: Vec<Label>,
    index: HashMap<Label, usize>,
}

impl Basis {
    pub fn new(labels: Vec<Label>) -> Result<Self> {
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::BasisMismatch(format!("duplicate basis label {l}")));
            }
        }
        Ok(Basis { labels, index })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &Label {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn index_of(&self, l: &Label) -> Option<usize> {
        self.index.get(l).copied()
    }

    pub fn require(&self, l: &Label) -> Result<usize> {
        self.index_of(l)
            .ok_or_else(|| Error::BasisMismatch(format!("label {l} not in basis")))
    }
}

impl PartialEq for Basis {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels
    }
}

impl Eq for Basis {}

// ---------------------------------------------------------------------------
// Free vectors
// ---------------------------------------------------------------------------

/// A vector in the free module over a basis, stored sparsely by basis index.
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct FreeVec {
    terms: BTreeMap<usize, Rat>,
}

impl FreeVec {
    pub fn zero() -> Self {
        FreeVec::default()
    }

    pub fn add_term(&mut self, index: usize, coeff: Rat) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(index).or_insert_with(Rat::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&index);
        }
    }

    pub fn coeff(&self, index: usize) -> Rat {
        self.terms.get(&index).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rat)> {
        self.terms.iter().map(|(&i, r)| (i, r))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Sum of all coefficients.
    pub fn total(&self) -> Rat {
        let mut s = Rat::zero();
        for r in self.terms.values() {
            s += r;
        }
        s
    }
}

// ---------------------------------------------------------------------------
// Square matrices
// ---------------------------------------------------------------------------

/// Basis size up to which matrices are stored densely.
pub const DENSE_LIMIT: usize = 1000;

#[derive(Clone, Debug)]
enum MatrixData {
    Dense(Vec<Vec<Rat>>),
    Sparse(Vec<BTreeMap<usize, Rat>>),
}

/// A square matrix indexed by a state basis on both sides. Rows index source
/// states: for a transition matrix, `entry(x, y)` is the probability of
/// moving from state `x` to state `y`; for a raw operator matrix it is the
/// coefficient of `y` in the image of `x`.
#[derive(Clone, Debug)]
pub struct TransitionMatrix {
    basis: Basis,
    data: MatrixData,
    stochastic: bool,
}

impl TransitionMatrix {
    pub fn zero(basis: Basis) -> Self {
        let n = basis.len();
        let data = if n <= DENSE_LIMIT {
            MatrixData::Dense(vec![vec![Rat::zero(); n]; n])
        } else {
            MatrixData::Sparse(vec![BTreeMap::new(); n])
        };
        TransitionMatrix {
            basis,
            data,
            stochastic: false,
        }
    }

    pub fn identity(basis: Basis) -> Self {
        let mut m = TransitionMatrix::zero(basis);
        for i in 0..m.basis.len() {
            m.set(i, i, Rat::one());
        }
        m.stochastic = true;
        m
    }

    /// Build from complete row data; length checks enforced.
    pub fn from_rows(basis: Basis, rows: Vec<Vec<Rat>>) -> Result<Self> {
        let n = basis.len();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::ShapeMismatch(format!(
                "expected {n}x{n} row data"
            )));
        }
        let mut m = TransitionMatrix::zero(basis);
        for (i, row) in rows.into_iter().enumerate() {
            for (j, v) in row.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_stochastic(&self) -> bool {
        self.stochastic
    }

    pub fn entry(&self, i: usize, j: usize) -> Rat {
        match &self.data {
            MatrixData::Dense(rows) => rows[i][j].clone(),
            MatrixData::Sparse(rows) => rows[i].get(&j).cloned().unwrap_or_else(Rat::zero),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        match &mut self.data {
            MatrixData::Dense(rows) => rows[i][j] = v,
            MatrixData::Sparse(rows) => {
                if v.is_zero() {
                    rows[i].remove(&j);
                } else {
                    rows[i].insert(j, v);
                }
            }
        }
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: Rat) {
        if v.is_zero() {
            return;
        }
        match &mut self.data {
            MatrixData::Dense(rows) => rows[i][j] += v,
            MatrixData::Sparse(rows) => {
                let e = rows[i].entry(j).or_insert_with(Rat::zero);
                *e += v;
                if e.is_zero() {
                    rows[i].remove(&j);
                }
            }
        }
    }

    /// Non-zero entries of row `i` as `(column, value)` pairs in column order.
    pub fn row_nonzero(&self, i: usize) -> Vec<(usize, Rat)> {
        match &self.data {
            MatrixData::Dense(rows) => rows[i]
                .iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(|(j, v)| (j, v.clone()))
                .collect(),
            MatrixData::Sparse(rows) => rows[i].iter().map(|(&j, v)| (j, v.clone())).collect(),
        }
    }

    /// Full row `i` as a dense vector.
    pub fn row_dense(&self, i: usize) -> Vec<Rat> {
        let n = self.dim();
        match &self.data {
            MatrixData::Dense(rows) => rows[i].clone(),
            MatrixData::Sparse(rows) => {
                let mut out = vec![Rat::zero(); n];
                for (&j, v) in &rows[i] {
                    out[j] = v.clone();
                }
                out
            }
        }
    }

    pub fn row_sum(&self, i: usize) -> Rat {
        let mut s = Rat::zero();
        match &self.data {
            MatrixData::Dense(rows) => {
                for v in &rows[i] {
                    s += v;
                }
            }
            MatrixData::Sparse(rows) => {
                for v in rows[i].values() {
                    s += v;
                }
            }
        }
        s
    }

    /// Exact check that all entries are non-negative and each row sums to 1.
    /// On failure returns the offending row and its sum.
    pub fn check_row_stochastic(&self) -> std::result::Result<(), Box<StochasticViolation>> {
        for i in 0..self.dim() {
            for (j, v) in self.row_nonzero(i) {
                if v.is_negative() {
                    return Err(Box::new(StochasticViolation {
                        row: self.basis.label(i).clone(),
                        sum: self.row_sum(i),
                        negative_at: Some(self.basis.label(j).clone()),
                    }));
                }
            }
            let s = self.row_sum(i);
            if !s.is_one() {
                return Err(Box::new(StochasticViolation {
                    row: self.basis.label(i).clone(),
                    sum: s,
                    negative_at: None,
                }));
            }
        }
        Ok(())
    }

    /// Run the stochastic check and record the result in the flag.
    pub fn mark_stochastic(mut self) -> Result<Self> {
        self.check_row_stochastic().map_err(|v| {
            Error::ShapeMismatch(format!(
                "matrix is not row-stochastic: row {} sums to {}",
                v.row,
                fmt_rat(&v.sum)
            ))
        })?;
        self.stochastic = true;
        Ok(self)
    }

    pub fn set_stochastic_flag(&mut self, flag: bool) {
        self.stochastic = flag;
    }

    /// Matrix product `self * other` (row convention: distributions are row
    /// vectors, so `self` acts first in time).
    pub fn matmul(&self, other: &TransitionMatrix) -> Result<TransitionMatrix> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch(
                "matrix product requires identical bases".into(),
            ));
        }
        let mut out = TransitionMatrix::zero(self.basis.clone());
        for i in 0..self.dim() {
            for (k, a) in self.row_nonzero(i) {
                for (j, b) in other.row_nonzero(k) {
                    out.add_to(i, j, &a * &b);
                }
            }
        }
        out.stochastic = self.stochastic && other.stochastic;
        Ok(out)
    }

    /// Matrix power by repeated multiplication; `pow(0)` is the identity.
    pub fn pow(&self, t: usize) -> Result<TransitionMatrix> {
        let mut acc = TransitionMatrix::identity(self.basis.clone());
        for _ in 0..t {
            acc = acc.matmul(self)?;
        }
        Ok(acc)
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[Rat]) -> Result<Vec<Rat>> {
        if v.len() != self.dim() {
            return Err(Error::ShapeMismatch("vector length != dimension".into()));
        }
        let mut out = vec![Rat::zero(); self.dim()];
        for (i, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in self.row_nonzero(i) {
                out[j] += a * &b;
            }
        }
        Ok(out)
    }

    /// `a * self + b * other`.
    pub fn linear_combination(
        &self,
        a: &Rat,
        other: &TransitionMatrix,
        b: &Rat,
    ) -> Result<TransitionMatrix> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch(
                "linear combination requires identical bases".into(),
            ));
        }
        let mut out = TransitionMatrix::zero(self.basis.clone());
        for i in 0..self.dim() {
            for (j, v) in self.row_nonzero(i) {
                out.add_to(i, j, a * &v);
            }
            for (j, v) in other.row_nonzero(i) {
                out.add_to(i, j, b * &v);
            }
        }
        Ok(out)
    }

    /// Multiply every entry by a scalar.
    pub fn scale(&self, a: &Rat) -> TransitionMatrix {
        let mut out = TransitionMatrix::zero(self.basis.clone());
        for i in 0..self.dim() {
            for (j, v) in self.row_nonzero(i) {
                out.set(i, j, a * &v);
            }
        }
        out
    }

    pub fn entries_equal(&self, other: &TransitionMatrix) -> bool {
        if self.basis != other.basis {
            return false;
        }
        for i in 0..self.dim() {
            if self.row_nonzero(i) != other.row_nonzero(i) {
                return false;
            }
        }
        true
    }

    // -- serialization ------------------------------------------------------

    pub fn to_document(&self) -> MatrixDocument {
        let n = self.dim();
        let mut rows = Vec::with_capacity(n);
        for i in 0..n {
            rows.push(self.row_dense(i).iter().map(fmt_rat).collect());
        }
        MatrixDocument {
            basis: self.basis.labels().iter().map(|l| l.to_string()).collect(),
            rows,
            stochastic: self.stochastic,
        }
    }

    /// Rebuild from a document, parsing labels as the stated kind.
    pub fn from_document(doc: &MatrixDocument, kind: LabelKind) -> Result<Self> {
        let labels = doc
            .basis
            .iter()
            .map(|s| Label::parse_as(kind, s))
            .collect::<Result<Vec<_>>>()?;
        let basis = Basis::new(labels)?;
        let n = basis.len();
        if doc.rows.len() != n || doc.rows.iter().any(|r| r.len() != n) {
            return Err(Error::ShapeMismatch(format!("expected {n}x{n} rows")));
        }
        let mut m = TransitionMatrix::zero(basis);
        for (i, row) in doc.rows.iter().enumerate() {
            for (j, s) in row.iter().enumerate() {
                m.set(i, j, parse_rat(s)?);
            }
        }
        m.stochastic = doc.stochastic;
        Ok(m)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("state");
        for l in self.basis.labels() {
            out.push(',');
            out.push_str(&format!("\"{l}\""));
        }
        out.push('\n');
        for i in 0..self.dim() {
            out.push_str(&format!("\"{}\"", self.basis.label(i)));
            for v in self.row_dense(i) {
                out.push(',');
                out.push_str(&fmt_rat(&v));
            }
            out.push('\n');
        }
        out
    }

    /// Plain-text table, suitable for small matrices.
    pub fn to_text(&self) -> String {
        let n = self.dim();
        let labels: Vec<String> = self.basis.labels().iter().map(|l| l.to_string()).collect();
        let mut cells: Vec<Vec<String>> = Vec::with_capacity(n);
        for i in 0..n {
            cells.push(self.row_dense(i).iter().map(fmt_rat).collect());
        }
        let label_w = labels.iter().map(|s| s.len()).max().unwrap_or(1);
        let mut col_w = vec![0usize; n];
        for j in 0..n {
            col_w[j] = labels[j].len();
            for row in &cells {
                col_w[j] = col_w[j].max(row[j].len());
            }
        }
        let mut out = String::new();
        out.push_str(&" ".repeat(label_w));
        for j in 0..n {
            out.push_str("  ");
            out.push_str(&format!("{:>w$}", labels[j], w = col_w[j]));
        }
        out.push('\n');
        for i in 0..n {
            out.push_str(&format!("{:>w$}", labels[i], w = label_w));
            for j in 0..n {
                out.push_str("  ");
                out.push_str(&format!("{:>w$}", cells[i][j], w = col_w[j]));
            }
            out.push('\n');
        }
        out
    }
}

/// Witness for a failed row-stochasticity check.
#[derive(Clone, Debug)]
pub struct StochasticViolation {
    pub row: Label,
    pub sum: Rat,
    pub negative_at: Option<Label>,
}

/// JSON wire format for matrices.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MatrixDocument {
    pub basis: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub stochastic: bool,
}

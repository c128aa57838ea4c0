//! Seedable Monte Carlo samplers for every named chain, one-step samplers
//! for arbitrary operator specs on words, and the statistics used to compare
//! empirical laws against the exact matrices.
//!
//! Randomness comes from ChaCha8 streams: `(seed, stream)` fully determines
//! the output, and parallel simulation splits trials into fixed-size chunks
//! with one stream per chunk, so results are independent of the thread
//! count. All discrete choices are made by unbiased rejection sampling; no
//! floating-point randomness is involved anywhere.

use crate::chains::ChainId;
use crate::combinat::{standardise, standardise_tableau, Partition, Perm, StandardTableau};
use crate::error::{Error, Result};
use crate::exactalg::{Basis, Label, Rat};
use crate::hopf::DescentOpSpec;
use num::bigint::BigUint;
use num::traits::{One, Signed, ToPrimitive, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use rayon::prelude::*;
use std::collections::BTreeMap;

// ---------------------------------------------------------------------------
// Random source
// ---------------------------------------------------------------------------

/// A deterministic random stream, identified by `(seed, stream)`.
pub struct RngStream {
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        RngStream { rng }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform in `0..n`, unbiased via rejection outside the largest
    /// multiple of `n`.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0, "empty range");
        let n = n as u64;
        let zone = (u64::MAX / n) * n;
        loop {
            let x = self.next_u64();
            if x < zone {
                return (x % n) as usize;
            }
        }
    }

    /// Uniform below an arbitrary-precision bound, by masked rejection.
    pub fn below_big(&mut self, bound: &BigUint) -> BigUint {
        assert!(!bound.is_zero(), "empty range");
        if let Some(small) = bound.to_u64() {
            return BigUint::from(self.below(small as usize) as u64);
        }
        let bits = bound.bits();
        let words = bits.div_ceil(64) as usize;
        let top_mask: u64 = if bits.is_multiple_of(64) {
            u64::MAX
        } else {
            (1u64 << (bits % 64)) - 1
        };
        loop {
            let mut digits = Vec::with_capacity(words);
            for w in 0..words {
                let mut d = self.next_u64();
                if w + 1 == words {
                    d &= top_mask;
                }
                digits.push(d);
            }
            let candidate = BigUint::from_slice(
                &digits
                    .iter()
                    .flat_map(|d| [(*d & 0xffff_ffff) as u32, (*d >> 32) as u32])
                    .collect::<Vec<_>>(),
            );
            if &candidate < bound {
                return candidate;
            }
        }
    }

    /// Exact Bernoulli with rational success probability.
    pub fn bernoulli(&mut self, p: &Rat) -> bool {
        assert!(!p.is_negative() && *p <= Rat::one(), "probability out of range");
        if p.is_zero() {
            return false;
        }
        if p.is_one() {
            return true;
        }
        let num = p.numer().to_biguint().expect("non-negative");
        let den = p.denom().to_biguint().expect("positive");
        self.below_big(&den) < num
    }

    /// Exact categorical draw over non-negative rational weights summing
    /// to 1.
    pub fn categorical(&mut self, weights: &[Rat]) -> usize {
        let mut den = BigUint::one();
        for w in weights {
            den = num::integer::lcm(den, w.denom().to_biguint().expect("positive"));
        }
        let scaled: Vec<BigUint> = weights
            .iter()
            .map(|w| w.numer().to_biguint().expect("non-negative") * (&den / w.denom().to_biguint().unwrap()))
            .collect();
        let total: BigUint = scaled.iter().sum();
        let mut x = self.below_big(&total);
        for (i, w) in scaled.iter().enumerate() {
            if &x < w {
                return i;
            }
            x -= w;
        }
        unreachable!("weights sum to the sampling bound")
    }

    /// Uniform random permutation of `0..n` as indices (Fisher-Yates).
    pub fn shuffled_indices(&mut self, n: usize) -> Vec<usize> {
        let mut v: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = self.below(i + 1);
            v.swap(i, j);
        }
        v
    }
}

// ---------------------------------------------------------------------------
// Hook walks
// ---------------------------------------------------------------------------

/// Hook walk on the boxes of a partition: start uniformly, jump uniformly
/// within the rest of the current box's hook until the box is removable.
/// The final corner `(r, c)` is distributed like `dim(shape - corner) /
/// dim(shape)`.
pub fn hook_walk_remove(shape: &Partition, rng: &mut RngStream) -> Result<(usize, usize)> {
    let boxes = shape.boxes();
    if boxes.is_empty() {
        return Err(Error::InvalidPartition("hook walk on the empty shape".into()));
    }
    let (mut r, mut c) = boxes[rng.below(boxes.len())];
    loop {
        if shape.is_removable(r, c) {
            return Ok((r, c));
        }
        let mut hook: Vec<(usize, usize)> = Vec::new();
        for cc in c + 1..=shape.row(r) {
            hook.push((r, cc));
        }
        let mut rr = r + 1;
        while shape.row(rr) >= c {
            hook.push((rr, c));
            rr += 1;
        }
        let (nr, nc) = hook[rng.below(hook.len())];
        r = nr;
        c = nc;
    }
}

/// Complementary hook walk: start at `(grid, grid)` outside the shape and
/// move to cells outside the shape that lie strictly left in the same row
/// or strictly above in the same column, until the current cell is addable.
/// With `grid > |shape|` the addable box `(r, c)` comes out with probability
/// `dim(shape + box) / ((|shape|+1) dim(shape))`, independent of the grid
/// size.
pub fn complementary_hook_walk_add(
    shape: &Partition,
    grid: usize,
    rng: &mut RngStream,
) -> Result<(usize, usize)> {
    if grid <= shape.size() {
        return Err(Error::InvalidPartition(format!(
            "complementary walk needs grid > {}, got {grid}",
            shape.size()
        )));
    }
    let (mut r, mut c) = (grid, grid);
    loop {
        if shape.is_addable(r, c) {
            return Ok((r, c));
        }
        let mut cells: Vec<(usize, usize)> = Vec::new();
        for cc in shape.row(r) + 1..c {
            cells.push((r, cc));
        }
        for rr in 1..r {
            if shape.row(rr) < c {
                cells.push((rr, c));
            }
        }
        let (nr, nc) = cells[rng.below(cells.len())];
        r = nr;
        c = nc;
    }
}

// ---------------------------------------------------------------------------
// One-step samplers
// ---------------------------------------------------------------------------

fn step_partition(shape: &Partition, rng: &mut RngStream) -> Result<Partition> {
    let n = shape.size();
    let (r, c) = hook_walk_remove(shape, rng)?;
    let smaller = shape.remove_box(r, c)?;
    let (ar, ac) = complementary_hook_walk_add(&smaller, n, rng)?;
    smaller.add_box(ar, ac)
}

fn step_tableau(t: &StandardTableau, rng: &mut RngStream) -> Result<StandardTableau> {
    let n = t.n();
    let shape = t.shape();
    let (r, c) = hook_walk_remove(&shape, rng)?;
    let (rows, _expelled) = t.unbump(r, c)?;
    let smaller = standardise_tableau(&rows)?;
    let (ar, ac) = complementary_hook_walk_add(&smaller.shape(), n, rng)?;
    smaller.add_box(ar, ac)
}

/// Uniformly interleave blocks, each block keeping its internal order: at
/// every output position, pick a block with probability proportional to its
/// remaining length.
fn uniform_interleave(blocks: &[Vec<usize>], rng: &mut RngStream) -> Vec<usize> {
    let total: usize = blocks.iter().map(|b| b.len()).sum();
    let mut pos = vec![0usize; blocks.len()];
    let mut out = Vec::with_capacity(total);
    let mut remaining = total;
    while remaining > 0 {
        let mut x = rng.below(remaining);
        for (b, block) in blocks.iter().enumerate() {
            let left = block.len() - pos[b];
            if x < left {
                out.push(block[pos[b]]);
                pos[b] += 1;
                break;
            }
            x -= left;
        }
        remaining -= 1;
    }
    out
}

/// One step of the operator sampled combinatorially on words: pick a term
/// by its probability, cut the word into blocks, standardise each block,
/// rearrange slots, shift to disjoint alphabets, and interleave uniformly.
pub fn step_word_spec(spec: &DescentOpSpec, state: &Perm, rng: &mut RngStream) -> Result<Perm> {
    if state.n() != spec.n {
        return Err(Error::ShapeMismatch(format!(
            "state has degree {}, spec has degree {}",
            state.n(),
            spec.n
        )));
    }
    let term = if spec.terms.len() == 1 {
        &spec.terms[0]
    } else {
        let weights: Vec<Rat> = spec.terms.iter().map(|t| t.prob.clone()).collect();
        &spec.terms[rng.categorical(&weights)]
    };
    let mut blocks = Vec::with_capacity(term.d.len());
    let mut start = 0usize;
    for &p in term.d.parts() {
        blocks.push(standardise(&state.word()[start..start + p])?);
        start += p;
    }
    let mut shifted = Vec::with_capacity(blocks.len());
    let mut offset = 0usize;
    for i in 0..blocks.len() {
        let b = &blocks[term.sigma.word()[i] - 1];
        shifted.push(crate::combinat::shift_word(b.word(), offset));
        offset += b.n();
    }
    Perm::new(uniform_interleave(&shifted, rng))
}

fn step_bottom_r_shuffle(state: &Perm, r: usize, rng: &mut RngStream) -> Result<Perm> {
    let n = state.n();
    let mut deck: Vec<usize> = state.word()[..n - r].to_vec();
    let removed: Vec<usize> = state.word()[n - r..].to_vec();
    for &idx in &rng.shuffled_indices(r) {
        let pos = rng.below(deck.len() + 1);
        deck.insert(pos, removed[idx]);
    }
    Perm::new(deck)
}

/// Advance a named chain's state by one step, matrix-free.
pub fn step(chain: &ChainId, state: &Label, rng: &mut RngStream) -> Result<Label> {
    Ok(match chain {
        ChainId::PartitionDownUp { .. } => {
            Label::Partition(step_partition(state.as_partition()?, rng)?)
        }
        ChainId::TableauDownUp { .. } => Label::Tableau(step_tableau(state.as_tableau()?, rng)?),
        ChainId::BottomRShuffle { r, .. } => {
            Label::Perm(step_bottom_r_shuffle(state.as_perm()?, *r, rng)?)
        }
        _ => {
            let spec = chain.spec()?.expect("word chains have a spec");
            Label::Perm(step_word_spec(&spec, state.as_perm()?, rng)?)
        }
    })
}

// ---------------------------------------------------------------------------
// Simulation
// ---------------------------------------------------------------------------

/// Empirical distribution over state labels.
#[derive(Clone, Debug, Default)]
pub struct EmpiricalDistribution {
    counts: BTreeMap<Label, u64>,
    trials: u64,
}

impl EmpiricalDistribution {
    pub fn record(&mut self, label: Label) {
        *self.counts.entry(label).or_insert(0) += 1;
        self.trials += 1;
    }

    pub fn merge(&mut self, other: EmpiricalDistribution) {
        for (l, c) in other.counts {
            *self.counts.entry(l).or_insert(0) += c;
        }
        self.trials += other.trials;
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn count(&self, label: &Label) -> u64 {
        self.counts.get(label).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &BTreeMap<Label, u64> {
        &self.counts
    }

    pub fn support_size(&self) -> usize {
        self.counts.len()
    }

    /// Exact total-variation distance to a reference law aligned with a
    /// basis. Fails if a sample fell outside the basis.
    pub fn tv_distance(&self, basis: &Basis, probs: &[Rat]) -> Result<Rat> {
        if probs.len() != basis.len() {
            return Err(Error::ShapeMismatch("probs length != basis size".into()));
        }
        for l in self.counts.keys() {
            if basis.index_of(l).is_none() {
                return Err(Error::BasisMismatch(format!(
                    "sampled state {l} is outside the reference basis"
                )));
            }
        }
        let trials = Rat::from_integer((self.trials as i64).into());
        let mut tv = Rat::zero();
        for (i, p) in probs.iter().enumerate() {
            let c = self.count(basis.label(i));
            let emp = Rat::from_integer((c as i64).into()) / &trials;
            let d = emp - p;
            tv += if d.is_negative() { -d } else { d };
        }
        Ok(tv / Rat::from_integer(2.into()))
    }

    pub fn tv_distance_f64(&self, basis: &Basis, probs: &[Rat]) -> Result<f64> {
        Ok(self.tv_distance(basis, probs)?.to_f64().unwrap_or(f64::NAN))
    }

    /// Pearson chi-square statistic against a reference law, with degrees of
    /// freedom. States with zero reference probability must stay unobserved.
    pub fn chi_square(&self, basis: &Basis, probs: &[Rat]) -> Result<(f64, usize)> {
        if probs.len() != basis.len() {
            return Err(Error::ShapeMismatch("probs length != basis size".into()));
        }
        let mut stat = 0.0f64;
        let mut categories = 0usize;
        for (i, p) in probs.iter().enumerate() {
            let observed = self.count(basis.label(i)) as f64;
            if p.is_zero() {
                if observed > 0.0 {
                    return Err(Error::ShapeMismatch(format!(
                        "impossible state {} was sampled",
                        basis.label(i)
                    )));
                }
                continue;
            }
            categories += 1;
            let expected = p.to_f64().unwrap() * self.trials as f64;
            let d = observed - expected;
            stat += d * d / expected;
        }
        for l in self.counts.keys() {
            if basis.index_of(l).is_none() {
                return Err(Error::BasisMismatch(format!(
                    "sampled state {l} is outside the reference basis"
                )));
            }
        }
        Ok((stat, categories.saturating_sub(1)))
    }
}

/// Upper critical values of the chi-square distribution at significance
/// 0.001, for 1 to 8 degrees of freedom.
const CHI2_CRITICAL_001: [f64; 8] = [
    10.828, 13.816, 16.266, 18.467, 20.515, 22.458, 24.322, 26.124,
];

/// The 0.001 critical value; the walks under test never use more than 8
/// degrees of freedom.
pub fn chi_square_critical_001(dof: usize) -> Result<f64> {
    if dof == 0 {
        return Err(Error::Unsupported("chi-square needs at least 1 dof".into()));
    }
    CHI2_CRITICAL_001
        .get(dof - 1)
        .copied()
        .ok_or_else(|| Error::Unsupported(format!("no critical value tabulated for dof {dof}")))
}

/// Default acceptance threshold for one-step total-variation checks at a
/// million samples.
pub const TV_TOLERANCE_ONE_STEP: f64 = 0.005;
/// Default threshold for long-run convergence checks at 100k samples.
pub const TV_TOLERANCE_CONVERGENCE: f64 = 0.02;

const CHUNK: u64 = 8192;

/// Run `trials` independent trajectories of `steps` steps from `start` and
/// collect the endpoint counts. Deterministic in `(seed, trials, steps)`;
/// chunked across threads with one stream per chunk.
pub fn simulate(
    chain: &ChainId,
    start: &Label,
    steps: usize,
    trials: u64,
    seed: u64,
) -> Result<EmpiricalDistribution> {
    // validate once up front so worker threads cannot fail
    let mut probe = RngStream::new(seed, u64::MAX);
    let mut state = start.clone();
    state = step(chain, &state, &mut probe)?;
    let _ = state;
    let chunks = trials.div_ceil(CHUNK);
    let dist = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = RngStream::new(seed, chunk);
            let lo = chunk * CHUNK;
            let hi = (lo + CHUNK).min(trials);
            let mut dist = EmpiricalDistribution::default();
            for _ in lo..hi {
                let mut x = start.clone();
                for _ in 0..steps {
                    x = step(chain, &x, &mut rng).expect("step validated before simulation");
                }
                dist.record(x);
            }
            dist
        })
        .reduce(EmpiricalDistribution::default, |mut a, b| {
            a.merge(b);
            a
        });
    Ok(dist)
}

/// One trajectory, including the starting state; `steps + 1` entries.
pub fn sample_path(
    chain: &ChainId,
    start: &Label,
    steps: usize,
    seed: u64,
) -> Result<Vec<Label>> {
    let mut rng = RngStream::new(seed, 0);
    let mut path = Vec::with_capacity(steps + 1);
    path.push(start.clone());
    for _ in 0..steps {
        let next = step(chain, path.last().unwrap(), &mut rng)?;
        path.push(next);
    }
    Ok(path)
}

/// Endpoint counts of repeated hook walks (`dir = remove`) or complementary
/// walks (`dir = add`, on a grid one larger than the shape) on a fixed
/// shape, keyed by `"r,c"` strings.
pub fn walk_counts(
    shape: &Partition,
    remove: bool,
    trials: u64,
    seed: u64,
) -> Result<BTreeMap<(usize, usize), u64>> {
    if remove && shape.is_empty() {
        return Err(Error::InvalidPartition("hook walk on the empty shape".into()));
    }
    let grid = shape.size() + 1;
    let chunks = trials.div_ceil(CHUNK);
    let merged = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = RngStream::new(seed, chunk);
            let lo = chunk * CHUNK;
            let hi = (lo + CHUNK).min(trials);
            let mut counts: BTreeMap<(usize, usize), u64> = BTreeMap::new();
            for _ in lo..hi {
                let cell = if remove {
                    hook_walk_remove(shape, &mut rng).expect("non-empty shape")
                } else {
                    complementary_hook_walk_add(shape, grid, &mut rng).expect("grid is large enough")
                };
                *counts.entry(cell).or_insert(0) += 1;
            }
            counts
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });
    Ok(merged)
}

/// Exact endpoint law of the removal hook walk: corner `(r, c)` receives
/// `dim(shape - box) / dim(shape)`.
pub fn hook_walk_remove_law(shape: &Partition) -> Result<Vec<((usize, usize), Rat)>> {
    let total = Rat::from_integer(shape.dim().into());
    shape
        .removable_boxes()
        .into_iter()
        .map(|(r, c)| {
            let smaller = shape.remove_box(r, c)?;
            Ok(((r, c), Rat::from_integer(smaller.dim().into()) / &total))
        })
        .collect()
}

/// Exact endpoint law of the complementary walk on any valid grid: addable
/// box `(r, c)` receives `dim(shape + box) / ((|shape|+1) dim(shape))`.
pub fn complementary_walk_add_law(shape: &Partition) -> Result<Vec<((usize, usize), Rat)>> {
    let denom = Rat::from_integer((shape.dim() * BigUint::from(shape.size() + 1)).into());
    shape
        .addable_boxes()
        .into_iter()
        .map(|(r, c)| {
            let bigger = shape.add_box(r, c)?;
            Ok(((r, c), Rat::from_integer(bigger.dim().into()) / &denom))
        })
        .collect()
}

/// Simulate the big chain from an explicit initial distribution, project
/// every endpoint through the fiber map, and return the empirical law on
/// the small space. Used to see weak lumping hold (or break) in simulation.
pub fn simulate_projected(
    chain: &ChainId,
    map: &crate::lumping::FiberMap,
    initial: &[Rat],
    steps: usize,
    trials: u64,
    seed: u64,
) -> Result<EmpiricalDistribution> {
    if initial.len() != map.big().len() {
        return Err(Error::ShapeMismatch("initial length != big basis size".into()));
    }
    let mut total = Rat::zero();
    for v in initial {
        if v.is_negative() {
            return Err(Error::ShapeMismatch("initial law has a negative entry".into()));
        }
        total += v;
    }
    if !total.is_one() {
        return Err(Error::ShapeMismatch(format!(
            "initial law sums to {total}, expected 1"
        )));
    }
    let chunks = trials.div_ceil(CHUNK);
    let dist = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = RngStream::new(seed, chunk);
            let lo = chunk * CHUNK;
            let hi = (lo + CHUNK).min(trials);
            let mut dist = EmpiricalDistribution::default();
            for _ in lo..hi {
                let x0 = rng.categorical(initial);
                let mut x = map.big().label(x0).clone();
                for _ in 0..steps {
                    x = step(chain, &x, &mut rng).expect("state space is closed under step");
                }
                let s = map.apply(map.big().require(&x).expect("closed state space"));
                dist.record(map.small().label(s).clone());
            }
            dist
        })
        .reduce(EmpiricalDistribution::default, |mut a, b| {
            a.merge(b);
            a
        });
    Ok(dist)
}

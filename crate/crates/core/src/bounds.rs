//! Minimum-distance upper bounds from permanents of weight-matrix minors.
//!
//! A candidate is a pair `(T, S)`: a set `T` of removed check rows and a set
//! `S` of `J + 1 - |T|` columns on which every removed row is zero. With `A'`
//! the weight matrix without the rows in `T`, the candidate's value is
//!
//! ```text
//! sum over i in S, i not punctured, of perm(A'_{S \ i})
//! ```
//!
//! and the bound is the smallest nonzero value over all candidates (zero
//! values come from the all-zero codeword and are skipped). With `T` always
//! empty this is the plain column-subset bound; allowing row removal can
//! only lower it.
//!
//! The search is deterministic under any partitioning: ties are broken by
//! the lexicographically smallest `(T, S)`.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::{PunctureSet, WeightMatrix};
use crate::permanent::cofactors_dense;

/// Default row-removal depth for the row-removal bound.
pub const DEFAULT_MAX_REMOVED_ROWS: usize = 2;

#[cfg(feature = "parallel")]
const CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SearchMode {
    Exhaustive,
    Sampled { samples: u64, seed: u64 },
}

/// Validated input of a bound search.
#[derive(Debug, Clone)]
pub struct BoundQuery {
    weights: WeightMatrix,
    puncture: PunctureSet,
    max_removed_rows: usize,
    mode: SearchMode,
}

impl BoundQuery {
    pub fn new(
        weights: WeightMatrix,
        puncture: PunctureSet,
        max_removed_rows: usize,
        mode: SearchMode,
    ) -> Result<Self> {
        weights.check_protomatrix()?;
        let (j, l) = (weights.rows(), weights.cols());
        puncture.validate(j, l)?;
        if l <= j {
            return Err(Error::Query(format!("need L > J to pick J+1 columns, have J = {j}, L = {l}")));
        }
        if l > 64 || j > 40 {
            return Err(Error::Query(format!("{j}x{l} is beyond the supported search size")));
        }
        if max_removed_rows >= j {
            return Err(Error::Query(format!("max removed rows {max_removed_rows} must be below J = {j}")));
        }
        Ok(Self { weights, puncture, max_removed_rows, mode })
    }

    pub fn weights(&self) -> &WeightMatrix {
        &self.weights
    }

    pub fn puncture(&self) -> &PunctureSet {
        &self.puncture
    }

    pub fn max_removed_rows(&self) -> usize {
        self.max_removed_rows
    }

    pub fn mode(&self) -> SearchMode {
        self.mode
    }

    /// Same query with a different row-removal depth.
    pub fn with_max_removed_rows(&self, max_removed_rows: usize) -> Result<Self> {
        Self::new(self.weights.clone(), self.puncture.clone(), max_removed_rows, self.mode)
    }
}

/// Removed rows `T` and column set `S`, both strictly increasing. Orders
/// lexicographically by `T`, then `S`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Candidate {
    pub removed_rows: Vec<usize>,
    pub columns: Vec<usize>,
}

/// One cofactor permanent of the witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Term {
    pub column: usize,
    #[serde(serialize_with = "ser_big")]
    pub permanent: BigUint,
    pub punctured: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CandidateCounts {
    pub examined: u64,
    /// Some row of the minor is zero, so every term vanishes.
    pub zero_row_skipped: u64,
    /// Terms evaluated but all zero.
    pub zero_sum_excluded: u64,
    /// Zero on transmitted columns, nonzero on punctured ones.
    pub punctured_only_excluded: u64,
}

impl CandidateCounts {
    #[cfg(feature = "parallel")]
    fn merge(&mut self, other: &Self) {
        self.examined += other.examined;
        self.zero_row_skipped += other.zero_row_skipped;
        self.zero_sum_excluded += other.zero_sum_excluded;
        self.punctured_only_excluded += other.punctured_only_excluded;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    /// `None` when no candidate has a positive transmitted sum.
    #[serde(serialize_with = "ser_opt_big")]
    pub bound_value: Option<BigUint>,
    pub witness_s: Vec<usize>,
    pub witness_t: Vec<usize>,
    pub terms: Vec<Term>,
    pub counts: CandidateCounts,
    pub exhaustive: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Worker threads; 1 runs on the calling thread.
    pub workers: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { workers: 1 }
    }
}

/// Column-subset bound: no rows removed.
pub fn column_subset_bound(q: &BoundQuery, opts: SearchOptions) -> Result<BoundReport> {
    if q.max_removed_rows != 0 {
        return Err(Error::Query("the column-subset bound removes no rows".into()));
    }
    search(q, opts)
}

/// Row-removal bound: rows up to `q.max_removed_rows()` may be removed.
pub fn row_removal_bound(q: &BoundQuery, opts: SearchOptions) -> Result<BoundReport> {
    search(q, opts)
}

/// Every removed-row set of size at most `max_removed_rows` that leaves
/// enough free columns, in lexicographic order, with its free columns.
fn row_sets(q: &BoundQuery) -> Vec<(Vec<usize>, Vec<usize>)> {
    let (j, l) = (q.weights.rows(), q.weights.cols());
    let mut sets = Vec::new();
    for size in 0..=q.max_removed_rows {
        for t in Combinations::new(j, size) {
            let free: Vec<usize> = (0..l).filter(|&c| t.iter().all(|&r| q.weights.get(r, c) == 0)).collect();
            if free.len() >= j + 1 - size {
                sets.push((t, free));
            }
        }
    }
    sets.sort();
    sets
}

/// Candidate stream. Exhaustive mode yields every legal `(T, S)` once in
/// lexicographic order; sampled mode yields `samples` candidates, the `k`-th
/// drawn from its own ChaCha stream of the seed.
pub fn enumerate_candidates(q: &BoundQuery) -> Box<dyn Iterator<Item = Candidate> + '_> {
    let j = q.weights.rows();
    match q.mode {
        SearchMode::Exhaustive => Box::new(row_sets(q).into_iter().flat_map(move |(t, free)| {
            let size = j + 1 - t.len();
            Combinations::new(free.len(), size).map(move |idx| Candidate {
                removed_rows: t.clone(),
                columns: idx.iter().map(|&i| free[i]).collect(),
            })
        })),
        SearchMode::Sampled { samples, seed } => {
            let sets = row_sets(q);
            Box::new((0..samples).map(move |k| sampled_candidate(&sets, j, seed, k)))
        }
    }
}

fn sampled_candidate(sets: &[(Vec<usize>, Vec<usize>)], j: usize, seed: u64, k: u64) -> Candidate {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    let (t, free) = &sets[rand::Rng::gen_range(&mut rng, 0..sets.len())];
    let mut idx = sample(&mut rng, free.len(), j + 1 - t.len()).into_vec();
    idx.sort_unstable();
    Candidate { removed_rows: t.clone(), columns: idx.into_iter().map(|i| free[i]).collect() }
}

/// Number of exhaustive candidates.
pub fn exhaustive_count(q: &BoundQuery) -> u128 {
    let j = q.weights.rows();
    row_sets(q).iter().map(|(t, free)| binomial(free.len(), j + 1 - t.len())).sum()
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

enum Outcome {
    ZeroRow,
    ZeroSum,
    PuncturedOnly,
    Value(BigUint, Vec<BigUint>),
}

/// Evaluates the cofactor family of `A'_S` for one candidate.
fn evaluate(q: &BoundQuery, cand: &Candidate, buf: &mut Vec<u32>) -> Outcome {
    let a = &q.weights;
    let cols = cand.columns.len();
    buf.clear();
    let mut rows = 0;
    for r in (0..a.rows()).filter(|r| !cand.removed_rows.contains(r)) {
        let start = buf.len();
        buf.extend(cand.columns.iter().map(|&c| a.get(r, c)));
        if buf[start..].iter().all(|&v| v == 0) {
            return Outcome::ZeroRow;
        }
        rows += 1;
    }
    debug_assert_eq!(rows + 1, cols);
    let terms = cofactors_dense(rows, buf);
    let mut transmitted = BigUint::zero();
    let mut punctured = BigUint::zero();
    for (&c, v) in cand.columns.iter().zip(&terms) {
        if q.puncture.contains(c) {
            punctured += v;
        } else {
            transmitted += v;
        }
    }
    match (transmitted.is_zero(), punctured.is_zero()) {
        (true, true) => Outcome::ZeroSum,
        (true, false) => Outcome::PuncturedOnly,
        _ => Outcome::Value(transmitted, terms),
    }
}

#[derive(Default)]
struct Acc {
    best: Option<(BigUint, Candidate, Vec<BigUint>)>,
    counts: CandidateCounts,
}

impl Acc {
    fn push(&mut self, q: &BoundQuery, cand: Candidate, buf: &mut Vec<u32>) {
        self.counts.examined += 1;
        match evaluate(q, &cand, buf) {
            Outcome::ZeroRow => self.counts.zero_row_skipped += 1,
            Outcome::ZeroSum => self.counts.zero_sum_excluded += 1,
            Outcome::PuncturedOnly => self.counts.punctured_only_excluded += 1,
            Outcome::Value(v, terms) => self.offer(v, cand, terms),
        }
    }

    fn offer(&mut self, v: BigUint, cand: Candidate, terms: Vec<BigUint>) {
        let better = match &self.best {
            None => true,
            Some((bv, bc, _)) => match v.cmp(bv) {
                Ordering::Less => true,
                Ordering::Equal => cand < *bc,
                Ordering::Greater => false,
            },
        };
        if better {
            self.best = Some((v, cand, terms));
        }
    }

    #[cfg(feature = "parallel")]
    fn merge(mut self, other: Self) -> Self {
        self.counts.merge(&other.counts);
        if let Some((v, c, t)) = other.best {
            self.offer(v, c, t);
        }
        self
    }
}

fn search(q: &BoundQuery, opts: SearchOptions) -> Result<BoundReport> {
    if opts.workers == 0 {
        return Err(Error::Query("workers must be at least 1".into()));
    }
    let acc = if opts.workers == 1 { run_sequential(q) } else { run_parallel(q, opts.workers)? };
    Ok(finish(q, acc))
}

fn run_sequential(q: &BoundQuery) -> Acc {
    let mut acc = Acc::default();
    let mut buf = Vec::new();
    for cand in enumerate_candidates(q) {
        acc.push(q, cand, &mut buf);
    }
    acc
}

#[cfg(feature = "parallel")]
fn run_parallel(q: &BoundQuery, workers: usize) -> Result<Acc> {
    use rayon::prelude::*;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Query(format!("thread pool: {e}")))?;
    let fold_chunk = |chunk: Vec<Candidate>| -> Acc {
        chunk
            .into_par_iter()
            .fold(
                || (Acc::default(), Vec::new()),
                |(mut acc, mut buf), cand| {
                    acc.push(q, cand, &mut buf);
                    (acc, buf)
                },
            )
            .map(|(acc, _)| acc)
            .reduce(Acc::default, Acc::merge)
    };
    Ok(pool.install(|| match q.mode {
        SearchMode::Sampled { samples, seed } => {
            let sets = row_sets(q);
            let j = q.weights.rows();
            (0..samples)
                .into_par_iter()
                .fold(
                    || (Acc::default(), Vec::new()),
                    |(mut acc, mut buf), k| {
                        acc.push(q, sampled_candidate(&sets, j, seed, k), &mut buf);
                        (acc, buf)
                    },
                )
                .map(|(acc, _)| acc)
                .reduce(Acc::default, Acc::merge)
        }
        SearchMode::Exhaustive => {
            let mut total = Acc::default();
            let mut stream = enumerate_candidates(q);
            loop {
                let chunk: Vec<Candidate> = stream.by_ref().take(CHUNK).collect();
                if chunk.is_empty() {
                    break total;
                }
                total = total.merge(fold_chunk(chunk));
            }
        }
    }))
}

#[cfg(not(feature = "parallel"))]
fn run_parallel(q: &BoundQuery, _workers: usize) -> Result<Acc> {
    Ok(run_sequential(q))
}

fn finish(q: &BoundQuery, acc: Acc) -> BoundReport {
    let exhaustive = matches!(q.mode, SearchMode::Exhaustive);
    match acc.best {
        None => BoundReport {
            bound_value: None,
            witness_s: Vec::new(),
            witness_t: Vec::new(),
            terms: Vec::new(),
            counts: acc.counts,
            exhaustive,
        },
        Some((value, cand, terms)) => BoundReport {
            bound_value: Some(value),
            terms: cand
                .columns
                .iter()
                .zip(terms)
                .map(|(&column, permanent)| Term { column, permanent, punctured: q.puncture.contains(column) })
                .collect(),
            witness_s: cand.columns,
            witness_t: cand.removed_rows,
            counts: acc.counts,
            exhaustive,
        },
    }
}

/// k-subsets of `0..n` in lexicographic order.
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Self { n, current: (k <= n).then(|| (0..k).collect()) }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for m in i + 1..k {
                    next[m] = next[m - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

pub(crate) fn ser_big<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match u64::try_from(v) {
        Ok(x) => s.serialize_u64(x),
        Err(_) => s.serialize_str(&v.to_string()),
    }
}

fn ser_opt_big<S: Serializer>(v: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => ser_big(v, s),
        None => s.serialize_none(),
    }
}

//! Brute-force minimum distance of small expanded codes.
//!
//! The scalar parity-check matrix is reduced over GF(2) to get a nullspace
//! basis, then all `2^k - 1` nonzero codewords are visited in Gray-code
//! order, one basis-vector XOR per step. Only transmitted coordinates count
//! towards the weight.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expansion::{lift_puncture, to_scalar};
use crate::matrix::{BinaryMatrix, PolyMatrix, PunctureSet};

pub const DEFAULT_MAX_DIMENSION: usize = 28;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactResult {
    pub length_n: usize,
    pub rank: usize,
    pub dimension_k: usize,
    /// False iff some nonzero codeword vanishes on every transmitted bit.
    pub dimensionality_preserved: bool,
    /// `None` when undefined: no nonzero codewords, or dimensionality lost.
    pub min_distance: Option<usize>,
    /// Minimum-weight codeword as a 0/1 string over all `L*N` coordinates.
    pub witness: Option<String>,
}

/// Exact minimum transmitted distance of the code of `h` punctured on the
/// polynomial columns `p`. Refuses codes of dimension above `max_dimension`.
pub fn exact_min_distance(h: &PolyMatrix, p: &PunctureSet, max_dimension: usize) -> Result<ExactResult> {
    exact_min_distance_with(h, p, max_dimension, 1)
}

pub fn exact_min_distance_with(
    h: &PolyMatrix,
    p: &PunctureSet,
    max_dimension: usize,
    workers: usize,
) -> Result<ExactResult> {
    p.validate(h.rows(), h.cols())?;
    let scalar = to_scalar(h)?;
    let n = scalar.cols();
    let lifted = lift_puncture(p, h.modulus() as usize);
    let mut mask = vec![u64::MAX; scalar.words_per_row()];
    if n % 64 != 0 {
        *mask.last_mut().expect("at least one word") = (1u64 << (n % 64)) - 1;
    }
    for &c in lifted.columns() {
        mask[c / 64] &= !(1u64 << (c % 64));
    }
    let basis = nullspace_basis(&scalar);
    let k = basis.len();
    let rank = n - k;
    if k > max_dimension {
        return Err(Error::DimensionCap { dimension: k, cap: max_dimension });
    }
    let preserved = rank_of(basis.iter().map(|v| v.iter().zip(&mask).map(|(a, m)| a & m).collect())) == k;
    let mut result = ExactResult {
        length_n: n,
        rank,
        dimension_k: k,
        dimensionality_preserved: preserved,
        min_distance: None,
        witness: None,
    };
    if k == 0 || !preserved {
        return Ok(result);
    }
    let (weight, word) = min_weight(&basis, &mask, workers);
    result.min_distance = Some(weight);
    result.witness = Some((0..n).map(|c| if (word[c / 64] >> (c % 64)) & 1 == 1 { '1' } else { '0' }).collect());
    Ok(result)
}

/// Basis of `{v : H v^T = 0}` as packed row vectors, one per free column.
pub fn nullspace_basis(h: &BinaryMatrix) -> Vec<Vec<u64>> {
    let (m, n, w) = (h.rows(), h.cols(), h.words_per_row());
    let mut rows: Vec<Vec<u64>> = (0..m).map(|r| h.row_words(r).to_vec()).collect();
    let mut pivots = Vec::new();
    let mut next = 0;
    for c in 0..n {
        let bit = |row: &Vec<u64>| (row[c / 64] >> (c % 64)) & 1 == 1;
        let Some(found) = (next..m).find(|&r| bit(&rows[r])) else { continue };
        rows.swap(next, found);
        let pivot = rows[next].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != next && bit(row) {
                row.iter_mut().zip(&pivot).for_each(|(a, b)| *a ^= b);
            }
        }
        pivots.push(c);
        next += 1;
        if next == m {
            break;
        }
    }
    let is_pivot = {
        let mut v = vec![false; n];
        pivots.iter().for_each(|&c| v[c] = true);
        v
    };
    (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![0u64; w];
            v[f / 64] |= 1 << (f % 64);
            for (r, &pc) in pivots.iter().enumerate() {
                if (rows[r][f / 64] >> (f % 64)) & 1 == 1 {
                    v[pc / 64] |= 1 << (pc % 64);
                }
            }
            v
        })
        .collect()
}

fn rank_of(vectors: impl Iterator<Item = Vec<u64>>) -> usize {
    let mut reduced: Vec<Vec<u64>> = Vec::new();
    for mut v in vectors {
        for b in &reduced {
            let lead = leading_bit(b).expect("stored vectors are nonzero");
            if (v[lead / 64] >> (lead % 64)) & 1 == 1 {
                v.iter_mut().zip(b).for_each(|(a, x)| *a ^= x);
            }
        }
        if leading_bit(&v).is_some() {
            reduced.push(v);
        }
    }
    reduced.len()
}

fn leading_bit(v: &[u64]) -> Option<usize> {
    v.iter().enumerate().rev().find(|(_, w)| **w != 0).map(|(i, w)| i * 64 + 63 - w.leading_zeros() as usize)
}

fn weight(v: &[u64], mask: &[u64]) -> usize {
    v.iter().zip(mask).map(|(a, m)| (a & m).count_ones() as usize).sum()
}

/// Gray-code walk over the span of the low `low` basis vectors, offset by
/// `start`. Returns the first minimum found.
fn walk(basis: &[Vec<u64>], low: usize, start: Vec<u64>, mask: &[u64]) -> Option<(usize, Vec<u64>)> {
    let mut cw = start;
    let mut best: Option<(usize, Vec<u64>)> = None;
    let consider = |cw: &Vec<u64>, best: &mut Option<(usize, Vec<u64>)>| {
        if cw.iter().all(|&x| x == 0) {
            return;
        }
        let wt = weight(cw, mask);
        if best.as_ref().is_none_or(|(b, _)| wt < *b) {
            *best = Some((wt, cw.clone()));
        }
    };
    consider(&cw, &mut best);
    if cw.len() == 1 {
        // single-word fast path
        let m = mask[0];
        let mut x = cw[0];
        let mut best_w = best.as_ref().map_or(usize::MAX, |b| b.0);
        let mut best_x = best.as_ref().map_or(0, |b| b.1[0]);
        for i in 1u64..(1u64 << low) {
            x ^= basis[i.trailing_zeros() as usize][0];
            let wt = (x & m).count_ones() as usize;
            if wt < best_w && x != 0 {
                best_w = wt;
                best_x = x;
            }
        }
        return (best_w != usize::MAX).then(|| (best_w, vec![best_x]));
    }
    for i in 1u64..(1u64 << low) {
        let b = &basis[i.trailing_zeros() as usize];
        cw.iter_mut().zip(b).for_each(|(a, x)| *a ^= x);
        consider(&cw, &mut best);
    }
    best
}

fn min_weight(basis: &[Vec<u64>], mask: &[u64], workers: usize) -> (usize, Vec<u64>) {
    let k = basis.len();
    let high = if workers > 1 { k.min(8) } else { 0 };
    let low = k - high;
    let prefix_start = |p: u64| {
        let mut v = vec![0u64; mask.len()];
        for b in 0..high {
            if (p >> b) & 1 == 1 {
                v.iter_mut().zip(&basis[low + b]).for_each(|(a, x)| *a ^= x);
            }
        }
        v
    };
    let run = |p: u64| walk(basis, low, prefix_start(p), mask).map(|(w, v)| (w, p, v));
    let pick = |a: Option<(usize, u64, Vec<u64>)>, b: Option<(usize, u64, Vec<u64>)>| match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => Some(if (b.0, b.1) < (a.0, a.1) { b } else { a }),
    };
    let best = parallel_prefixes(1u64 << high, workers, &run, &pick);
    let (w, _, v) = best.expect("a nonzero codeword exists when k > 0");
    (w, v)
}

type Found = Option<(usize, u64, Vec<u64>)>;

#[cfg(feature = "parallel")]
fn parallel_prefixes(
    count: u64,
    workers: usize,
    run: &(dyn Fn(u64) -> Found + Sync),
    pick: &(dyn Fn(Found, Found) -> Found + Sync),
) -> Found {
    use rayon::prelude::*;
    if workers <= 1 {
        return (0..count).map(run).fold(None, pick);
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(|| (0..count).into_par_iter().map(run).reduce(|| None, pick)),
        Err(_) => (0..count).map(run).fold(None, pick),
    }
}

#[cfg(not(feature = "parallel"))]
fn parallel_prefixes(
    count: u64,
    _workers: usize,
    run: &(dyn Fn(u64) -> Found + Sync),
    pick: &(dyn Fn(Found, Found) -> Found + Sync),
) -> Found {
    (0..count).map(run).fold(None, pick)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingPoly;

    /// Every vector of the ambient space, checked against H directly.
    fn full_space(h: &PolyMatrix, p: &PunctureSet) -> (usize, Option<usize>) {
        let s = to_scalar(h).unwrap();
        let n = s.cols();
        let lifted = lift_puncture(p, h.modulus() as usize);
        let mut count = 0;
        let mut best: Option<usize> = None;
        for v in 1u64..(1u64 << n) {
            if s.syndrome_is_zero(&[v]) {
                count += 1;
                let w = (0..n).filter(|&c| (v >> c) & 1 == 1 && !lifted.contains(c)).count();
                best = Some(best.map_or(w, |b| b.min(w)));
            }
        }
        ((count + 1usize).trailing_zeros() as usize, best)
    }

    #[test]
    fn length_two_repetition_code() {
        let h = PolyMatrix::from_exponents(1, &[vec![vec![0], vec![0]]]).unwrap();
        let r = exact_min_distance(&h, &PunctureSet::empty(), 28).unwrap();
        assert_eq!((r.dimension_k, r.min_distance), (1, Some(2)));
        assert_eq!(r.witness.as_deref(), Some("11"));
    }

    #[test]
    fn three_copy_code_matches_full_enumeration() {
        let h = PolyMatrix::from_exponents(3, &[vec![vec![0, 1], vec![0], vec![]], vec![vec![], vec![2], vec![0]]])
            .unwrap();
        let r = exact_min_distance(&h, &PunctureSet::empty(), 28).unwrap();
        let (k, d) = full_space(&h, &PunctureSet::empty());
        assert_eq!(r.dimension_k, k);
        assert_eq!(r.min_distance, d);
    }

    #[test]
    fn random_small_codes_match_full_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let n = rng.gen_range(2..=4u32);
            let (j, l) = (rng.gen_range(1..=2usize), rng.gen_range(3..=4usize));
            if l as u32 * n > 16 {
                continue;
            }
            let rows = (0..j)
                .map(|_| (0..l).map(|_| RingPoly::from_terms(n, (0..rng.gen_range(0..3)).map(|_| rng.gen_range(0..n as u64))).unwrap()).collect())
                .collect();
            let h = PolyMatrix::new(n, rows).unwrap();
            let p = if j > 1 && rng.gen_bool(0.5) { PunctureSet::new(vec![l - 1]).unwrap() } else { PunctureSet::empty() };
            let r = exact_min_distance_with(&h, &p, 28, 3).unwrap();
            let (k, d) = full_space(&h, &p);
            assert_eq!(r.dimension_k, k);
            if r.dimensionality_preserved {
                assert_eq!(r.min_distance, d);
            } else {
                assert_eq!(r.min_distance, None);
                assert_eq!(d.map(|x| x == 0), Some(true));
            }
        }
    }

    #[test]
    fn codewords_are_closed_under_block_shifts() {
        let h = PolyMatrix::from_exponents(5, &[vec![vec![0, 1], vec![2], vec![0, 4]], vec![vec![3], vec![0], vec![1]]])
            .unwrap();
        let s = to_scalar(&h).unwrap();
        let basis = nullspace_basis(&s);
        assert!(!basis.is_empty());
        for v in &basis {
            assert!(s.syndrome_is_zero(v));
            let shifted: u64 = (0..15).filter(|&c| (v[0] >> c) & 1 == 1).map(|c| 1u64 << ((c / 5) * 5 + (c % 5 + 1) % 5)).sum();
            assert!(s.syndrome_is_zero(&[shifted]));
        }
    }

    #[test]
    fn dimension_above_cap_is_refused() {
        let h = PolyMatrix::from_exponents(8, &[vec![vec![0], vec![0], vec![0], vec![0]]]).unwrap();
        assert!(matches!(
            exact_min_distance(&h, &PunctureSet::empty(), 10),
            Err(Error::DimensionCap { dimension: 24, cap: 10 })
        ));
    }

    #[test]
    fn punctured_dimension_loss_is_flagged() {
        // (1+x, 0) is a codeword supported on column 0 alone
        let h = PolyMatrix::from_exponents(2, &[vec![vec![0, 1], vec![0]], vec![vec![0, 1], vec![1]]]).unwrap();
        let r = exact_min_distance(&h, &PunctureSet::new(vec![0]).unwrap(), 28).unwrap();
        assert!(!r.dimensionality_preserved);
        assert_eq!(r.min_distance, None);
        assert!(exact_min_distance(&h, &PunctureSet::empty(), 28).unwrap().min_distance.is_some());
    }
}

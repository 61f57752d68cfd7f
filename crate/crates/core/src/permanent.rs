//! Exact permanents over the nonnegative integers and over
//! GF(2)[x]/<x^N - 1>.
//!
//! Both instantiations use inclusion-exclusion over row subsets visited in
//! Gray-code order, so each step adds or removes one row from the running
//! column sums:
//!
//! ```text
//! perm(M) = sum over row subsets R of (-1)^(J - |R|) * prod_c sum_{r in R} m[r][c]
//! ```
//!
//! For a `J x (J+1)` matrix the same pass yields every cofactor
//! `perm(M without column i)` at once: the product over all columns but `i`
//! is read off prefix and suffix products of the column sums. In
//! characteristic two the signs vanish.
//!
//! Integer accumulation runs in `i64` or `i128` when a magnitude bound
//! computed up front proves the intermediate sums fit, and in `BigInt`
//! otherwise, so results are always exact.

use num_bigint::{BigInt, BigUint};
use num_traits::{Num, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::{PolyMatrix, WeightMatrix};
use crate::ring::RingPoly;

/// Permanent of a square nonnegative integer matrix.
pub fn perm_int(b: &WeightMatrix) -> Result<BigUint> {
    if b.rows() != b.cols() {
        return Err(Error::Dimension(format!("permanent needs a square matrix, got {}x{}", b.rows(), b.cols())));
    }
    Ok(permanent_dense(b.rows(), b.grid().cells()))
}

/// `perm(B without column i)` for every column `i` of a `J x (J+1)` matrix.
pub fn cofactor_family_int(b: &WeightMatrix) -> Result<Vec<BigUint>> {
    if b.cols() != b.rows() + 1 {
        return Err(Error::Dimension(format!("cofactor family needs J x (J+1), got {}x{}", b.rows(), b.cols())));
    }
    Ok(cofactors_dense(b.rows(), b.grid().cells()))
}

/// Permanent (equivalently determinant) of a square polynomial matrix.
pub fn perm_ring(b: &PolyMatrix) -> Result<RingPoly> {
    if b.rows() != b.cols() {
        return Err(Error::Dimension(format!("permanent needs a square matrix, got {}x{}", b.rows(), b.cols())));
    }
    Ok(ring_pass(b, false).pop().expect("square pass yields one value"))
}

/// Ring analogue of [`cofactor_family_int`].
pub fn cofactor_family_ring(b: &PolyMatrix) -> Result<Vec<RingPoly>> {
    if b.cols() != b.rows() + 1 {
        return Err(Error::Dimension(format!("cofactor family needs J x (J+1), got {}x{}", b.rows(), b.cols())));
    }
    Ok(ring_pass(b, true))
}

/// Square permanent of a row-major `n x n` slice.
pub(crate) fn permanent_dense(n: usize, entries: &[u32]) -> BigUint {
    if n == 0 {
        return BigUint::from(1u32);
    }
    if has_zero_row(n, n, entries) || (0..n).any(|c| (0..n).all(|r| entries[r * n + c] == 0)) {
        return BigUint::zero();
    }
    let mut out = dispatch(n, n, entries, false);
    out.pop().unwrap_or_default()
}

/// Cofactor family of a row-major `n x (n+1)` slice.
pub(crate) fn cofactors_dense(n: usize, entries: &[u32]) -> Vec<BigUint> {
    if n == 0 {
        return vec![BigUint::from(1u32)];
    }
    if has_zero_row(n, n + 1, entries) {
        return vec![BigUint::zero(); n + 1];
    }
    dispatch(n, n + 1, entries, true)
}

fn has_zero_row(rows: usize, cols: usize, entries: &[u32]) -> bool {
    (0..rows).any(|r| entries[r * cols..(r + 1) * cols].iter().all(|&v| v == 0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tier {
    Small,
    Wide,
    Big,
}

/// Picks the narrowest accumulator that provably cannot overflow. Every
/// column sum is at most the full column sum, so `2^J` times the product of
/// the (clamped) full column sums bounds every partial sum.
fn tier_for(rows: usize, cols: usize, entries: &[u32]) -> Tier {
    let mut log2 = rows as f64;
    for c in 0..cols {
        let s: u64 = (0..rows).map(|r| u64::from(entries[r * cols + c])).sum();
        log2 += (s.max(1) as f64).log2();
    }
    // leave headroom for the f64 estimate
    if log2 < 60.0 {
        Tier::Small
    } else if log2 < 124.0 {
        Tier::Wide
    } else {
        Tier::Big
    }
}

fn dispatch(rows: usize, cols: usize, entries: &[u32], family: bool) -> Vec<BigUint> {
    match tier_for(rows, cols, entries) {
        Tier::Small => to_unsigned(ryser::<i64>(rows, cols, entries, family)),
        Tier::Wide => to_unsigned(ryser::<i128>(rows, cols, entries, family)),
        Tier::Big => to_unsigned(ryser::<BigInt>(rows, cols, entries, family)),
    }
}

fn to_unsigned<T: Into<BigInt>>(values: Vec<T>) -> Vec<BigUint> {
    values
        .into_iter()
        .map(|v| v.into().to_biguint().expect("permanent of a nonnegative matrix is nonnegative"))
        .collect()
}

/// Gray-code Ryser pass. With `family`, `cols == rows + 1` and the result
/// holds one permanent per deleted column; otherwise `cols == rows` and the
/// result is a single permanent.
fn ryser<T>(rows: usize, cols: usize, entries: &[u32], family: bool) -> Vec<T>
where
    T: Num + Signed + Clone + From<u32>,
{
    let support: Vec<Vec<(usize, T)>> = (0..rows)
        .map(|r| {
            (0..cols)
                .filter(|&c| entries[r * cols + c] != 0)
                .map(|c| (c, T::from(entries[r * cols + c])))
                .collect()
        })
        .collect();
    let out_len = if family { cols } else { 1 };
    let mut out = vec![T::zero(); out_len];
    let mut colsum = vec![T::zero(); cols];
    let mut zeros = cols;
    let mut prefix = vec![T::one(); cols + 1];
    let mut in_set = vec![false; rows];
    let mut size = 0usize;

    for k in 1u64..(1u64 << rows) {
        let r = k.trailing_zeros() as usize;
        in_set[r] = !in_set[r];
        let adding = in_set[r];
        if adding {
            size += 1;
        } else {
            size -= 1;
        }
        for (c, v) in &support[r] {
            let was_zero = colsum[*c].is_zero();
            if adding {
                colsum[*c] = colsum[*c].clone() + v.clone();
            } else {
                colsum[*c] = colsum[*c].clone() - v.clone();
            }
            match (was_zero, colsum[*c].is_zero()) {
                (true, false) => zeros -= 1,
                (false, true) => zeros += 1,
                _ => {}
            }
        }
        let negative = (rows - size) % 2 == 1;
        let add = |slot: &mut T, term: T| {
            if negative {
                *slot = slot.clone() - term;
            } else {
                *slot = slot.clone() + term;
            }
        };
        if !family {
            if zeros == 0 {
                let term = colsum.iter().fold(T::one(), |acc, v| acc * v.clone());
                add(&mut out[0], term);
            }
            continue;
        }
        match zeros {
            0 => {
                for c in 0..cols {
                    prefix[c + 1] = prefix[c].clone() * colsum[c].clone();
                }
                let mut suffix = T::one();
                for i in (0..cols).rev() {
                    add(&mut out[i], prefix[i].clone() * suffix.clone());
                    suffix = suffix * colsum[i].clone();
                }
            }
            1 => {
                let z = colsum.iter().position(Zero::is_zero).expect("one zero column");
                let term = colsum
                    .iter()
                    .enumerate()
                    .filter(|(c, _)| *c != z)
                    .fold(T::one(), |acc, (_, v)| acc * v.clone());
                add(&mut out[z], term);
            }
            _ => {}
        }
    }
    out
}

/// Characteristic-two Ryser pass over ring-valued column sums.
fn ring_pass(b: &PolyMatrix, family: bool) -> Vec<RingPoly> {
    let (rows, cols, n) = (b.rows(), b.cols(), b.modulus());
    let zero = RingPoly::zero(n).expect("matrix modulus is positive");
    let one = RingPoly::one(n).expect("matrix modulus is positive");
    let out_len = if family { cols } else { 1 };
    if rows == 0 {
        return vec![one; out_len];
    }
    if (0..rows).any(|r| b.row(r).iter().all(RingPoly::is_zero)) {
        return vec![zero; out_len];
    }
    let mut out = vec![zero.clone(); out_len];
    let mut colsum = vec![zero.clone(); cols];
    let mut prefix = vec![one.clone(); cols + 1];
    for k in 1u64..(1u64 << rows) {
        let r = k.trailing_zeros() as usize;
        for (c, v) in b.row(r).iter().enumerate() {
            colsum[c].add_assign_unchecked(v);
        }
        let zeros = colsum.iter().filter(|p| p.is_zero()).count();
        if !family {
            if zeros == 0 {
                let term = colsum.iter().skip(1).fold(colsum[0].clone(), |acc, v| acc.mul_unchecked(v));
                out[0].add_assign_unchecked(&term);
            }
            continue;
        }
        match zeros {
            0 => {
                for c in 0..cols {
                    prefix[c + 1] = prefix[c].mul_unchecked(&colsum[c]);
                }
                let mut suffix = one.clone();
                for i in (0..cols).rev() {
                    out[i].add_assign_unchecked(&prefix[i].mul_unchecked(&suffix));
                    suffix = suffix.mul_unchecked(&colsum[i]);
                }
            }
            1 => {
                let z = colsum.iter().position(RingPoly::is_zero).expect("one zero column");
                let term = colsum
                    .iter()
                    .enumerate()
                    .filter(|(c, _)| *c != z)
                    .fold(one.clone(), |acc, (_, v)| acc.mul_unchecked(v));
                out[z].add_assign_unchecked(&term);
            }
            _ => {}
        }
    }
    out
}

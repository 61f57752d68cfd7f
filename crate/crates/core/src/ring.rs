//! Arithmetic in GF(2)[x]/<x^N - 1> and its isomorphism with N x N binary
//! right-circulant matrices.
//!
//! A ring element is stored as the sorted set of exponents carrying a 1.
//! Circulants map to polynomials through their first column, read top to
//! bottom as coefficients of increasing degree, so `1` is the identity and
//! `x` is the identity rotated down by one row.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Element of GF(2)[x]/<x^N - 1>.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RingPoly {
    modulus: u32,
    exponents: Vec<u32>,
}

impl RingPoly {
    /// Builds a polynomial from distinct exponents in `[0, n)`, in any order.
    pub fn new(modulus: u32, exponents: impl IntoIterator<Item = u32>) -> Result<Self> {
        check_modulus(modulus)?;
        let mut exponents: Vec<u32> = exponents.into_iter().collect();
        exponents.sort_unstable();
        for w in exponents.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateExponent(w[0]));
            }
        }
        if let Some(&e) = exponents.last() {
            if e >= modulus {
                return Err(Error::ExponentOutOfRange { exponent: e, modulus });
            }
        }
        Ok(Self { modulus, exponents })
    }

    /// Sums arbitrary (possibly repeated, possibly large) exponents, reducing
    /// them mod N and cancelling pairs.
    pub fn from_terms(modulus: u32, terms: impl IntoIterator<Item = u64>) -> Result<Self> {
        check_modulus(modulus)?;
        let mut acc = BitScratch::new(modulus);
        for t in terms {
            acc.toggle((t % u64::from(modulus)) as u32);
        }
        Ok(acc.into_poly())
    }

    pub fn zero(modulus: u32) -> Result<Self> {
        check_modulus(modulus)?;
        Ok(Self { modulus, exponents: Vec::new() })
    }

    pub fn one(modulus: u32) -> Result<Self> {
        Self::monomial(modulus, 0)
    }

    /// `x^e mod (x^N - 1)`; `e` may be any nonnegative integer.
    pub fn monomial(modulus: u32, e: u64) -> Result<Self> {
        check_modulus(modulus)?;
        Ok(Self { modulus, exponents: vec![(e % u64::from(modulus)) as u32] })
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Sorted exponents with coefficient 1.
    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn is_zero(&self) -> bool {
        self.exponents.is_empty()
    }

    /// Number of nonzero coefficients.
    pub fn weight(&self) -> usize {
        self.exponents.len()
    }

    pub fn coefficient(&self, e: u32) -> bool {
        self.exponents.binary_search(&e).is_ok()
    }

    /// Dense coefficient vector `(v_0, ..., v_{N-1})`.
    pub fn to_bits(&self) -> Vec<bool> {
        let mut bits = vec![false; self.modulus as usize];
        for &e in &self.exponents {
            bits[e as usize] = true;
        }
        bits
    }

    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        let modulus = u32::try_from(bits.len()).map_err(|_| Error::ZeroModulus)?;
        check_modulus(modulus)?;
        let exponents = (0..modulus).filter(|&e| bits[e as usize]).collect();
        Ok(Self { modulus, exponents })
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        Ok(())
    }

    /// GF(2) addition: symmetric difference of the exponent sets.
    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(self.add_unchecked(other))
    }

    /// Product modulo `x^N - 1`.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn add_unchecked(&self, other: &Self) -> Self {
        let (a, b) = (&self.exponents, &other.exponents);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Self { modulus: self.modulus, exponents: out }
    }

    pub(crate) fn add_assign_unchecked(&mut self, other: &Self) {
        if other.is_zero() {
            return;
        }
        *self = self.add_unchecked(other);
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let n = self.modulus;
        if self.is_zero() || other.is_zero() {
            return Self { modulus: n, exponents: Vec::new() };
        }
        // monomial fast paths: a rotation keeps the weight
        if self.weight() == 1 {
            return other.shifted(self.exponents[0]);
        }
        if other.weight() == 1 {
            return self.shifted(other.exponents[0]);
        }
        let mut acc = BitScratch::new(n);
        for &a in &self.exponents {
            for &b in &other.exponents {
                let e = a + b;
                acc.toggle(if e >= n { e - n } else { e });
            }
        }
        acc.into_poly()
    }

    /// Multiplies by `x^s`.
    pub fn shifted(&self, s: u32) -> Self {
        let n = self.modulus;
        let s = s % n;
        let mut exponents: Vec<u32> = self
            .exponents
            .iter()
            .map(|&e| {
                let t = e + s;
                if t >= n {
                    t - n
                } else {
                    t
                }
            })
            .collect();
        exponents.sort_unstable();
        Self { modulus: n, exponents }
    }

    /// `x^N m(x^{-1}) mod (x^N - 1)`, i.e. the exponent map `e -> -e mod N`.
    pub fn reciprocal(&self) -> Self {
        let n = self.modulus;
        let mut exponents: Vec<u32> = self.exponents.iter().map(|&e| (n - e) % n).collect();
        exponents.sort_unstable();
        Self { modulus: n, exponents }
    }

    /// Parses the text form: comma-separated exponents, or `.` for zero.
    pub fn parse_text(modulus: u32, text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "." {
            return Self::zero(modulus);
        }
        let mut exps = Vec::new();
        for tok in text.split(',') {
            let e: u32 = tok.trim().parse().map_err(|_| Error::Parse {
                line: 0,
                message: format!("bad exponent {tok:?} in polynomial {text:?}"),
            })?;
            exps.push(e);
        }
        Self::new(modulus, exps)
    }

    pub fn to_text(&self) -> String {
        if self.is_zero() {
            ".".to_string()
        } else {
            let parts: Vec<String> = self.exponents.iter().map(u32::to_string).collect();
            parts.join(",")
        }
    }
}

/// Human-readable algebraic form, e.g. `1 + x^2`.
impl fmt::Display for RingPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, &e) in self.exponents.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            match e {
                0 => write!(f, "1")?,
                1 => write!(f, "x")?,
                _ => write!(f, "x^{e}")?,
            }
        }
        Ok(())
    }
}

fn check_modulus(modulus: u32) -> Result<()> {
    if modulus == 0 {
        Err(Error::ZeroModulus)
    } else {
        Ok(())
    }
}

/// Dense GF(2) accumulator used by multiplication.
struct BitScratch {
    modulus: u32,
    words: Vec<u64>,
}

impl BitScratch {
    fn new(modulus: u32) -> Self {
        Self { modulus, words: vec![0; (modulus as usize).div_ceil(64)] }
    }

    #[inline]
    fn toggle(&mut self, e: u32) {
        self.words[(e / 64) as usize] ^= 1u64 << (e % 64);
    }

    fn into_poly(self) -> RingPoly {
        let mut exponents = Vec::new();
        for (w, &word) in self.words.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let b = bits.trailing_zeros();
                exponents.push(w as u32 * 64 + b);
                bits &= bits - 1;
            }
        }
        RingPoly { modulus: self.modulus, exponents }
    }
}

/// Applies the circulant of `m` to the column vector `v` from the right.
pub fn right_mul_vector(m: &RingPoly, v: &RingPoly) -> Result<RingPoly> {
    m.checked_mul(v)
}

/// Square binary right-circulant matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CirculantMatrix {
    size: usize,
    bits: Vec<bool>,
}

impl CirculantMatrix {
    /// Circulant whose first column holds the coefficients of `poly`.
    pub fn from_poly(poly: &RingPoly) -> Self {
        let n = poly.modulus() as usize;
        let mut bits = vec![false; n * n];
        for &e in poly.exponents() {
            for c in 0..n {
                bits[((e as usize + c) % n) * n + c] = true;
            }
        }
        Self { size: n, bits }
    }

    /// Accepts a dense row-major matrix, verifying the right-circulant rule.
    pub fn from_rows(rows: &[Vec<bool>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("circulant must be square and nonempty".into()));
        }
        let bits: Vec<bool> = rows.iter().flatten().copied().collect();
        let m = Self { size: n, bits };
        if !is_right_circulant(n, |r, c| m.get(r, c)) {
            return Err(Error::Dimension("rows are not successive right shifts".into()));
        }
        Ok(m)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.size + col]
    }

    pub fn rows(&self) -> Vec<Vec<bool>> {
        self.bits.chunks(self.size).map(<[bool]>::to_vec).collect()
    }

    /// Inverse of [`CirculantMatrix::from_poly`]: reads the first column.
    pub fn to_poly(&self) -> RingPoly {
        let n = self.size;
        let exponents = (0..n).filter(|&r| self.get(r, 0)).map(|r| r as u32).collect();
        RingPoly { modulus: n as u32, exponents }
    }

    /// Matrix product over GF(2).
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.size != other.size {
            return Err(Error::ModulusMismatch(self.size as u32, other.size as u32));
        }
        let n = self.size;
        let mut bits = vec![false; n * n];
        for r in 0..n {
            for k in 0..n {
                if self.get(r, k) {
                    for c in 0..n {
                        bits[r * n + c] ^= other.get(k, c);
                    }
                }
            }
        }
        Ok(Self { size: n, bits })
    }

    /// `M v^T` over GF(2).
    pub fn mul_vec(&self, v: &[bool]) -> Vec<bool> {
        (0..self.size)
            .map(|r| (0..self.size).fold(false, |acc, c| acc ^ (self.get(r, c) & v[c])))
            .collect()
    }

    /// `v M` over GF(2).
    pub fn vec_mul(&self, v: &[bool]) -> Vec<bool> {
        (0..self.size)
            .map(|c| (0..self.size).fold(false, |acc, r| acc ^ (v[r] & self.get(r, c))))
            .collect()
    }
}

/// True iff every row of the `n x n` matrix is the row above circularly
/// shifted right by one.
pub fn is_right_circulant(n: usize, get: impl Fn(usize, usize) -> bool) -> bool {
    (1..n).all(|r| (0..n).all(|c| get(r, c) == get(r - 1, (c + n - 1) % n)))
}

impl FromStr for RingPoly {
    type Err = Error;

    /// `N:text`, e.g. `3:0,2`.
    fn from_str(s: &str) -> Result<Self> {
        let (n, body) = s.split_once(':').ok_or_else(|| Error::Parse {
            line: 0,
            message: format!("expected N:exponents, got {s:?}"),
        })?;
        let n: u32 = n.trim().parse().map_err(|_| Error::Parse {
            line: 0,
            message: format!("bad modulus in {s:?}"),
        })?;
        Self::parse_text(n, body)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(n: u32, e: &[u32]) -> RingPoly {
        RingPoly::new(n, e.iter().copied()).unwrap()
    }

    fn rows(m: &[[u8; 3]; 3]) -> Vec<Vec<bool>> {
        m.iter().map(|r| r.iter().map(|&b| b == 1).collect()).collect()
    }

    #[test]
    fn addition_cancels() {
        assert_eq!(p(3, &[0, 1]).checked_add(&p(3, &[1, 2])).unwrap(), p(3, &[0, 2]));
        let q = p(5, &[0, 3, 4]);
        assert!(q.checked_add(&q).unwrap().is_zero());
        assert_eq!(q.checked_add(&RingPoly::zero(5).unwrap()).unwrap(), q);
    }

    #[test]
    fn multiplication_reduces_mod_xn_minus_1() {
        assert_eq!(p(3, &[0, 2]).checked_mul(&p(3, &[1])).unwrap(), p(3, &[0, 1]));
        assert_eq!(p(7, &[5]).checked_mul(&p(7, &[4])).unwrap(), p(7, &[2]));
        assert!(p(2, &[0, 1]).checked_mul(&p(2, &[0, 1])).unwrap().is_zero());
    }

    #[test]
    fn weights() {
        assert_eq!(p(3, &[0, 2]).weight(), 2);
        assert_eq!(RingPoly::zero(4).unwrap().weight(), 0);
        assert_eq!(p(8, &[5]).weight(), 1);
    }

    #[test]
    fn mismatched_moduli_rejected() {
        let err = p(3, &[0]).checked_add(&p(4, &[0])).unwrap_err();
        assert_eq!(err, Error::ModulusMismatch(3, 4));
        assert!(p(3, &[0]).checked_mul(&p(4, &[0])).is_err());
        assert!(right_mul_vector(&p(3, &[0]), &p(5, &[1])).is_err());
    }

    #[test]
    fn construction_checks() {
        assert_eq!(RingPoly::new(0, []).unwrap_err(), Error::ZeroModulus);
        assert!(matches!(RingPoly::new(3, [3]), Err(Error::ExponentOutOfRange { .. })));
        assert_eq!(RingPoly::new(3, [1, 1]).unwrap_err(), Error::DuplicateExponent(1));
        // N = 1 collapses to GF(2)
        let one = RingPoly::one(1).unwrap();
        assert_eq!(one.checked_mul(&one).unwrap(), one);
        assert!(one.checked_add(&one).unwrap().is_zero());
        assert_eq!(RingPoly::from_terms(3, [0, 3, 4]).unwrap(), p(3, &[1]));
    }

    #[test]
    fn printed_circulants_for_n3() {
        let id = CirculantMatrix::from_poly(&p(3, &[0]));
        assert_eq!(id.rows(), rows(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]]));
        let x = CirculantMatrix::from_poly(&p(3, &[1]));
        assert_eq!(x.rows(), rows(&[[0, 0, 1], [1, 0, 0], [0, 1, 0]]));
        let one_x2 = CirculantMatrix::from_poly(&p(3, &[0, 2]));
        assert_eq!(one_x2.rows(), rows(&[[1, 1, 0], [0, 1, 1], [1, 0, 1]]));
        assert_eq!(one_x2.to_poly(), p(3, &[0, 2]));
        assert!(CirculantMatrix::from_rows(&rows(&[[1, 1, 0], [1, 0, 1], [0, 1, 1]])).is_err());
    }

    #[test]
    fn right_multiplication_examples() {
        assert_eq!(right_mul_vector(&p(3, &[1]), &p(3, &[0])).unwrap(), p(3, &[1]));
        let m = p(3, &[0, 2]);
        let v = p(3, &[0, 1]);
        let via_matrix = CirculantMatrix::from_poly(&m).mul_vec(&v.to_bits());
        assert_eq!(right_mul_vector(&m, &v).unwrap().to_bits(), via_matrix);
    }

    #[test]
    fn text_form() {
        assert_eq!(RingPoly::parse_text(3, "0,2").unwrap(), p(3, &[0, 2]));
        assert!(RingPoly::parse_text(3, ".").unwrap().is_zero());
        assert!(RingPoly::parse_text(3, "0,3").is_err());
        assert!(RingPoly::parse_text(3, "a").is_err());
        assert_eq!(p(3, &[0, 2]).to_text(), "0,2");
        assert_eq!(p(3, &[0, 2]).to_string(), "1 + x^2");
        assert_eq!("5:1,4".parse::<RingPoly>().unwrap(), p(5, &[1, 4]));
    }

    fn arb_pair() -> impl Strategy<Value = (RingPoly, RingPoly)> {
        (1u32..=16).prop_flat_map(|n| {
            let bits = proptest::collection::vec(any::<bool>(), n as usize);
            (bits.clone(), bits).prop_map(|(a, b)| {
                (RingPoly::from_bits(&a).unwrap(), RingPoly::from_bits(&b).unwrap())
            })
        })
    }

    proptest! {
        #[test]
        fn circulant_map_is_a_ring_homomorphism((a, b) in arb_pair()) {
            let prod = CirculantMatrix::from_poly(&a.checked_mul(&b).unwrap());
            let mat = CirculantMatrix::from_poly(&a).matmul(&CirculantMatrix::from_poly(&b)).unwrap();
            prop_assert_eq!(prod, mat);
        }

        #[test]
        fn right_and_left_vector_products((m, v) in arb_pair()) {
            let c = CirculantMatrix::from_poly(&m);
            prop_assert_eq!(c.mul_vec(&v.to_bits()), right_mul_vector(&m, &v).unwrap().to_bits());
            let left = m.reciprocal().checked_mul(&v).unwrap();
            prop_assert_eq!(c.vec_mul(&v.to_bits()), left.to_bits());
        }

        #[test]
        fn weight_is_subadditive_and_submultiplicative((a, b) in arb_pair()) {
            prop_assert!(a.checked_add(&b).unwrap().weight() <= a.weight() + b.weight());
            prop_assert!(a.checked_mul(&b).unwrap().weight() <= a.weight() * b.weight());
        }

        #[test]
        fn round_trips((a, _b) in arb_pair()) {
            prop_assert_eq!(CirculantMatrix::from_poly(&a).to_poly(), a.clone());
            prop_assert_eq!(RingPoly::parse_text(a.modulus(), &a.to_text()).unwrap(), a);
        }
    }
}

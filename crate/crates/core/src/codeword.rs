//! Explicit codewords of (punctured) QC codes built from permanents.
//!
//! For a column set `S` of size `J + 1`, placing `perm(H_{S \ i}(x))` in
//! column `i` of `S` and zero elsewhere gives a codeword of the code with
//! parity-check matrix `H(x)`. Removing a set `T` of rows first works too,
//! provided each removed row stacked on `H'_S(x)` has zero permanent; a
//! sufficient condition readable from the weight matrix alone is that every
//! removed row is zero on `S`.
//!
//! Punctured cells keep their ring value so the codeword can still be
//! checked against the unpunctured `H(x)`; they just do not count towards
//! the transmitted weight.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::{check_increasing, PolyMatrix, PunctureSet};
use crate::permanent::{cofactor_family_ring, perm_ring};
use crate::ring::RingPoly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    Transmitted(RingPoly),
    /// Punctured column; the value is kept for verification only.
    Untransmitted(RingPoly),
}

impl Cell {
    pub fn value(&self) -> &RingPoly {
        match self {
            Cell::Transmitted(p) | Cell::Untransmitted(p) => p,
        }
    }
}

/// Length-`L` vector over GF(2)[x]/<x^N - 1> with puncturing marks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QcCodeword {
    modulus: u32,
    cells: Vec<Cell>,
}

impl QcCodeword {
    pub fn new(modulus: u32, values: Vec<RingPoly>, puncture: &PunctureSet) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| v.modulus() != modulus) {
            return Err(Error::ModulusMismatch(modulus, v.modulus()));
        }
        if let Some(&c) = puncture.columns().iter().find(|&&c| c >= values.len()) {
            return Err(Error::IndexOutOfRange { index: c, limit: values.len() });
        }
        let cells = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| if puncture.contains(i) { Cell::Untransmitted(v) } else { Cell::Transmitted(v) })
            .collect();
        Ok(Self { modulus, cells })
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Hamming weight over transmitted cells only.
    pub fn transmitted_weight(&self) -> usize {
        self.cells
            .iter()
            .map(|c| match c {
                Cell::Transmitted(p) => p.weight(),
                Cell::Untransmitted(_) => 0,
            })
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cells.iter().all(|c| c.value().is_zero())
    }

    /// Nonzero, but only on punctured cells: invisible after puncturing.
    pub fn is_punctured_only(&self) -> bool {
        !self.is_zero() && self.transmitted_weight() == 0
    }
}

impl Serialize for QcCodeword {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let cells: Vec<Option<String>> = self
            .cells
            .iter()
            .map(|c| match c {
                Cell::Transmitted(p) => Some(p.to_text()),
                Cell::Untransmitted(_) => None,
            })
            .collect();
        let mut st = s.serialize_struct("QcCodeword", 3)?;
        st.serialize_field("modulus", &self.modulus)?;
        st.serialize_field("cells", &cells)?;
        st.serialize_field("transmitted_weight", &self.transmitted_weight())?;
        st.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// Every removed row is zero on `S` (checkable from the weight matrix).
    WeightLevel,
    /// Every removed row stacked on `H'_S(x)` has zero permanent.
    PolyLevel,
}

/// Accepted `(S, T)` pair; only [`check_removal`] creates one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RemovalCertificate {
    columns: Vec<usize>,
    removed_rows: Vec<usize>,
    condition: Condition,
}

impl RemovalCertificate {
    pub fn columns(&self) -> &[usize] {
        &self.columns
    }

    pub fn removed_rows(&self) -> &[usize] {
        &self.removed_rows
    }

    pub fn condition(&self) -> Condition {
        self.condition
    }
}

/// Checks that removing rows `t` and keeping columns `s` yields a codeword
/// construction. An empty `t` is always accepted.
pub fn check_removal(h: &PolyMatrix, s: &[usize], t: &[usize], level: Condition) -> Result<RemovalCertificate> {
    let j = h.rows();
    check_increasing(s, h.cols())?;
    check_increasing(t, j)?;
    if s.len() + t.len() != j + 1 {
        return Err(Error::Dimension(format!("|S| + |T| = {} but J + 1 = {}", s.len() + t.len(), j + 1)));
    }
    if t.len() >= j {
        return Err(Error::Dimension("at least one row must remain".into()));
    }
    match level {
        Condition::WeightLevel => {
            for &r in t {
                if let Some(&c) = s.iter().find(|&&c| !h.get(r, c).is_zero()) {
                    return Err(Error::Certificate(format!("row {r} is nonzero in column {c}")));
                }
            }
        }
        Condition::PolyLevel => {
            let reduced = h.remove_rows(t)?.select_columns(s)?;
            for &r in t {
                let row: Vec<RingPoly> = s.iter().map(|&c| h.get(r, c).clone()).collect();
                let f = perm_ring(&reduced.stacked_below(&row)?)?;
                if !f.is_zero() {
                    return Err(Error::Certificate(format!("row {r} stacked on H'_S has permanent {f}")));
                }
            }
        }
    }
    Ok(RemovalCertificate { columns: s.to_vec(), removed_rows: t.to_vec(), condition: level })
}

/// Codeword with `perm(H_{S \ i}(x))` in each column `i` of `S`.
pub fn cofactor_codeword(h: &PolyMatrix, p: &PunctureSet, s: &[usize]) -> Result<QcCodeword> {
    if s.len() != h.rows() + 1 {
        return Err(Error::Dimension(format!("|S| must be J + 1 = {}, got {}", h.rows() + 1, s.len())));
    }
    build(h, h, p, s)
}

/// Codeword built from `H(x)` with the certificate's rows removed.
pub fn reduced_codeword(h: &PolyMatrix, p: &PunctureSet, cert: &RemovalCertificate) -> Result<QcCodeword> {
    // re-check: the certificate may come from a different matrix
    let cert = check_removal(h, &cert.columns, &cert.removed_rows, cert.condition)?;
    let reduced = h.remove_rows(&cert.removed_rows)?;
    build(h, &reduced, p, &cert.columns)
}

fn build(h: &PolyMatrix, rows: &PolyMatrix, p: &PunctureSet, s: &[usize]) -> Result<QcCodeword> {
    p.validate(h.rows(), h.cols())?;
    let family = cofactor_family_ring(&rows.select_columns(s)?)?;
    let n = h.modulus();
    let mut values = vec![RingPoly::zero(n)?; h.cols()];
    for (&c, v) in s.iter().zip(family) {
        values[c] = v;
    }
    QcCodeword::new(n, values, p)
}

/// `H(x) c^T(x) = 0`, using the retained values of punctured cells.
pub fn verify_codeword(h: &PolyMatrix, c: &QcCodeword) -> Result<bool> {
    if c.len() != h.cols() {
        return Err(Error::Dimension(format!("codeword length {} but L = {}", c.len(), h.cols())));
    }
    if c.modulus() != h.modulus() {
        return Err(Error::ModulusMismatch(h.modulus(), c.modulus()));
    }
    for r in 0..h.rows() {
        let mut acc = RingPoly::zero(h.modulus())?;
        for (hv, cell) in h.row(r).iter().zip(c.cells()) {
            acc.add_assign_unchecked(&hv.mul_unchecked(cell.value()));
        }
        if !acc.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn removal_example(n: u32, a: u32, b: u32, c: u32, d: u32, e: u32) -> PolyMatrix {
        PolyMatrix::from_exponents(
            n,
            &[vec![vec![], vec![], vec![]], vec![vec![], vec![], vec![a, b]], vec![vec![c], vec![d], vec![e]]],
        )
        .unwrap()
    }

    fn poly(n: u32, terms: &[u64]) -> RingPoly {
        RingPoly::from_terms(n, terms.iter().copied()).unwrap()
    }

    fn values(c: &QcCodeword) -> Vec<RingPoly> {
        c.cells().iter().map(|x| x.value().clone()).collect()
    }

    #[test]
    fn single_parity_check_repetition() {
        let h = PolyMatrix::from_exponents(3, &[vec![vec![0], vec![0]]]).unwrap();
        let c = cofactor_codeword(&h, &PunctureSet::empty(), &[0, 1]).unwrap();
        assert_eq!(c.transmitted_weight(), 2);
        assert!(verify_codeword(&h, &c).unwrap());
        assert!(cofactor_codeword(&h, &PunctureSet::empty(), &[0]).is_err());
    }

    #[test]
    fn zero_row_gives_zero_codeword() {
        let h = PolyMatrix::from_exponents(5, &[vec![vec![], vec![], vec![]], vec![vec![0], vec![2], vec![3]]])
            .unwrap();
        let c = cofactor_codeword(&h, &PunctureSet::empty(), &[0, 1, 2]).unwrap();
        assert!(c.is_zero());
        assert!(verify_codeword(&h, &c).unwrap());
    }

    #[test]
    fn single_row_removal_segment() {
        let (a, b, c, d, e) = (0u64, 1, 0, 1, 2);
        for n in [4u32, 5, 7] {
            let h = removal_example(n, a as u32, b as u32, c as u32, d as u32, e as u32);
            assert!(perm_ring(&h).unwrap().is_zero());
            let cert = check_removal(&h, &[0, 1, 2], &[0], Condition::PolyLevel).unwrap();
            let cw = reduced_codeword(&h, &PunctureSet::empty(), &cert).unwrap();
            assert_eq!(values(&cw), vec![poly(n, &[d + a, d + b]), poly(n, &[c + a, c + b]), poly(n, &[])]);
            assert!(verify_codeword(&h, &cw).unwrap());
        }
    }

    #[test]
    fn double_row_removal_segment() {
        for n in [4u32, 5, 7] {
            let h = removal_example(n, 0, 1, 0, 1, 2);
            let cert = check_removal(&h, &[0, 1], &[0, 1], Condition::WeightLevel).unwrap();
            let cw = reduced_codeword(&h, &PunctureSet::empty(), &cert).unwrap();
            assert_eq!(values(&cw), vec![poly(n, &[1]), poly(n, &[0]), poly(n, &[])]);
            assert_eq!(cw.transmitted_weight(), 2);
            assert!(verify_codeword(&h, &cw).unwrap());
        }
    }

    #[test]
    fn certificate_levels() {
        let h = removal_example(4, 0, 1, 0, 1, 2);
        assert!(check_removal(&h, &[0, 1], &[0, 1], Condition::PolyLevel).is_ok());
        // row 1 is nonzero on column 2
        assert!(matches!(
            check_removal(&h, &[0, 1, 2], &[1], Condition::WeightLevel),
            Err(Error::Certificate(_))
        ));
        assert!(check_removal(&h, &[0, 1, 2], &[0], Condition::WeightLevel).is_ok());
        assert!(check_removal(&h, &[0, 1], &[0], Condition::WeightLevel).is_err());
        let full = PolyMatrix::from_exponents(4, &[vec![vec![0], vec![1], vec![2]]]).unwrap();
        let cert = check_removal(&full, &[0, 2], &[], Condition::WeightLevel).unwrap();
        assert!(cert.removed_rows().is_empty());
    }

    #[test]
    fn broken_codeword_fails_verification() {
        let h = removal_example(5, 0, 1, 0, 1, 2);
        let cert = check_removal(&h, &[0, 1], &[0, 1], Condition::WeightLevel).unwrap();
        let cw = reduced_codeword(&h, &PunctureSet::empty(), &cert).unwrap();
        let mut vals = values(&cw);
        vals[0] = vals[0].checked_add(&RingPoly::monomial(5, 3).unwrap()).unwrap();
        let bad = QcCodeword::new(5, vals, &PunctureSet::empty()).unwrap();
        assert!(!verify_codeword(&h, &bad).unwrap());
        let short = QcCodeword::new(5, vec![RingPoly::zero(5).unwrap()], &PunctureSet::empty()).unwrap();
        assert!(verify_codeword(&h, &short).is_err());
    }

    #[test]
    fn weights_and_puncturing() {
        let n = 6;
        let zero = QcCodeword::new(n, vec![RingPoly::zero(n).unwrap(); 3], &PunctureSet::empty()).unwrap();
        assert_eq!(zero.transmitted_weight(), 0);
        assert!(zero.is_zero());
        let p = PunctureSet::new(vec![2]).unwrap();
        let hidden = QcCodeword::new(
            n,
            vec![RingPoly::zero(n).unwrap(), RingPoly::zero(n).unwrap(), RingPoly::new(n, [0, 3]).unwrap()],
            &p,
        )
        .unwrap();
        assert_eq!(hidden.transmitted_weight(), 0);
        assert!(hidden.is_punctured_only());
        let json = serde_json::to_value(&hidden).unwrap();
        assert_eq!(json["cells"], serde_json::json!([".", ".", null]));
        assert_eq!(json["transmitted_weight"], 0);
    }
}

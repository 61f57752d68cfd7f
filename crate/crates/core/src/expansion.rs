//! Cyclic expansion of protomatrices.
//!
//! A shift assignment lists, for every protomatrix cell, the exponents of the
//! monomials making up that circulant. Expanding gives the polynomial matrix
//! `H(x)`; laying each entry out as its circulant gives the scalar `H`, with
//! the columns of variable type `i` occupying `i*N .. i*N + N`.
//!
//! Two-stage expansion first expands by a small factor `N1` to get a 0/1
//! (type-I) matrix, then expands that matrix again with one monomial per 1.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{parse_poly_grid, BinaryMatrix, Grid, PolyMatrix, PunctureSet, WeightMatrix};
use crate::ring::{is_right_circulant, CirculantMatrix, RingPoly};

/// Per-cell lists of distinct circulant shifts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftAssignment(Grid<Vec<u32>>);

impl ShiftAssignment {
    pub fn new(rows: Vec<Vec<Vec<u32>>>) -> Result<Self> {
        Ok(Self(Grid::from_rows(rows)?))
    }

    pub fn rows(&self) -> usize {
        self.0.rows()
    }

    pub fn cols(&self) -> usize {
        self.0.cols()
    }

    pub fn get(&self, r: usize, c: usize) -> &[u32] {
        self.0.get(r, c)
    }

    /// Same layout as a polynomial matrix file: `N J L`, then cells of
    /// comma-separated shifts (`.` for none). Returns the header's `N` too.
    pub fn parse(text: &str) -> Result<(u32, Self)> {
        let (n, raw) = parse_poly_grid(text)?;
        let cells = raw
            .cells()
            .iter()
            .map(|(ln, cell)| {
                if cell == "." {
                    return Ok(Vec::new());
                }
                cell.split(',')
                    .map(|t| {
                        t.parse::<u32>()
                            .map_err(|_| Error::Parse { line: *ln, message: format!("bad shift {t:?}") })
                    })
                    .collect()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((n, Self(Grid::new(raw.rows(), raw.cols(), cells)?)))
    }

    pub fn to_text(&self, n: u32) -> String {
        let mut out = format!("{} {} {}\n", n, self.rows(), self.cols());
        for r in 0..self.rows() {
            let row: Vec<String> = self
                .0
                .row(r)
                .iter()
                .map(|s| {
                    if s.is_empty() {
                        ".".to_string()
                    } else {
                        s.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
                    }
                })
                .collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }
}

/// Replaces every protomatrix entry by the sum of its shifted monomials.
pub fn expand(a: &WeightMatrix, shifts: &ShiftAssignment, n: u32) -> Result<PolyMatrix> {
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    if (shifts.rows(), shifts.cols()) != (a.rows(), a.cols()) {
        return Err(Error::Shift(format!(
            "assignment is {}x{}, protomatrix is {}x{}",
            shifts.rows(),
            shifts.cols(),
            a.rows(),
            a.cols()
        )));
    }
    if a.max_entry() > n {
        return Err(Error::Shift(format!("entry {} needs more than N = {n} distinct shifts", a.max_entry())));
    }
    let mut rows = Vec::with_capacity(a.rows());
    for r in 0..a.rows() {
        let mut row = Vec::with_capacity(a.cols());
        for c in 0..a.cols() {
            let cell = shifts.get(r, c);
            if cell.len() != a.get(r, c) as usize {
                return Err(Error::Shift(format!(
                    "cell ({r},{c}) has {} shifts, protomatrix entry is {}",
                    cell.len(),
                    a.get(r, c)
                )));
            }
            let poly = RingPoly::new(n, cell.iter().copied()).map_err(|e| match e {
                Error::DuplicateExponent(s) => Error::Shift(format!("cell ({r},{c}) repeats shift {s}")),
                Error::ExponentOutOfRange { exponent, .. } => {
                    Error::Shift(format!("cell ({r},{c}) shift {exponent} is not below N = {n}"))
                }
                other => other,
            })?;
            row.push(poly);
        }
        rows.push(row);
    }
    PolyMatrix::new(n, rows)
}

/// Scalar `(J*N) x (L*N)` matrix of circulant blocks.
pub fn to_scalar(h: &PolyMatrix) -> Result<BinaryMatrix> {
    let n = h.modulus() as usize;
    let mut out = BinaryMatrix::zeros(h.rows() * n, h.cols() * n)?;
    for j in 0..h.rows() {
        for i in 0..h.cols() {
            for &e in h.get(j, i).exponents() {
                for c in 0..n {
                    out.set(j * n + (e as usize + c) % n, i * n + c, true);
                }
            }
        }
    }
    Ok(out)
}

/// Expands `a` by `n1` with `stage1`, then expands the resulting type-I
/// matrix by `n2` with `stage2` (one shift per 1, none per 0).
pub fn two_stage_expand(
    a: &WeightMatrix,
    stage1: &ShiftAssignment,
    n1: u32,
    stage2: &ShiftAssignment,
    n2: u32,
) -> Result<PolyMatrix> {
    let first = first_stage_matrix(a, stage1, n1)?;
    if (stage2.rows(), stage2.cols()) != (first.rows(), first.cols()) {
        return Err(Error::Shift(format!(
            "stage-2 assignment is {}x{}, stage-1 matrix is {}x{}",
            stage2.rows(),
            stage2.cols(),
            first.rows(),
            first.cols()
        )));
    }
    expand(&first, stage2, n2)
}

/// The type-I weight matrix produced by the first expansion stage.
pub fn first_stage_matrix(a: &WeightMatrix, stage1: &ShiftAssignment, n1: u32) -> Result<WeightMatrix> {
    let scalar = to_scalar(&expand(a, stage1, n1)?)?.to_weight_matrix();
    if !scalar.is_type_one() {
        return Err(Error::Shift("stage-1 output is not type-I".into()));
    }
    Ok(scalar)
}

/// Problem found in one `N1 x N1` block.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockIssue {
    pub row_block: usize,
    pub col_block: usize,
    pub expected_weight: u32,
    pub row_weights: Vec<u32>,
    pub circulant: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageValidation {
    pub ok: bool,
    pub blocks_checked: usize,
    pub issues: Vec<BlockIssue>,
}

/// Checks that every `n1 x n1` block `(j, i)` of `b` is right-circulant with
/// weight `a[j][i]`.
pub fn validate_first_stage(b: &BinaryMatrix, a: &WeightMatrix, n1: u32) -> Result<StageValidation> {
    let n = n1 as usize;
    if n == 0 || b.rows() != a.rows() * n || b.cols() != a.cols() * n {
        return Err(Error::Dimension(format!(
            "{}x{} matrix cannot be a {}x{} protomatrix expanded by {n1}",
            b.rows(),
            b.cols(),
            a.rows(),
            a.cols()
        )));
    }
    let mut issues = Vec::new();
    for j in 0..a.rows() {
        for i in 0..a.cols() {
            let get = |r: usize, c: usize| b.get(j * n + r, i * n + c);
            let circulant = is_right_circulant(n, get);
            let row_weights: Vec<u32> = (0..n).map(|r| (0..n).filter(|&c| get(r, c)).count() as u32).collect();
            let expected = a.get(j, i);
            if !circulant || row_weights.iter().any(|&w| w != expected) {
                issues.push(BlockIssue {
                    row_block: j,
                    col_block: i,
                    expected_weight: expected,
                    row_weights,
                    circulant,
                });
            }
        }
    }
    Ok(StageValidation { ok: issues.is_empty(), blocks_checked: a.rows() * a.cols(), issues })
}

/// Reads back the shifts of a validated stage-1 matrix (first column of
/// every block).
pub fn recover_shifts(b: &BinaryMatrix, a: &WeightMatrix, n1: u32) -> Result<ShiftAssignment> {
    let report = validate_first_stage(b, a, n1)?;
    if !report.ok {
        return Err(Error::Shift(format!("{} blocks fail validation", report.issues.len())));
    }
    let n = n1 as usize;
    let rows = (0..a.rows())
        .map(|j| {
            (0..a.cols())
                .map(|i| {
                    let block: Vec<Vec<bool>> =
                        (0..n).map(|r| (0..n).map(|c| b.get(j * n + r, i * n + c)).collect()).collect();
                    CirculantMatrix::from_rows(&block).map(|m| m.to_poly().exponents().to_vec())
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    ShiftAssignment::new(rows)
}

/// Maps protograph column `i` to expanded columns `i*n .. i*n + n`.
pub fn lift_puncture(p: &PunctureSet, n: usize) -> PunctureSet {
    let cols = p.columns().iter().flat_map(|&c| c * n..c * n + n).collect();
    PunctureSet::new(cols).expect("lifted ranges stay strictly increasing")
}

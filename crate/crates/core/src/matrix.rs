//! Protomatrices, polynomial parity-check matrices, puncture sets and scalar
//! binary matrices, with their text file formats.
//!
//! Weight matrix file: a `J L` header line followed by `J` rows of integers.
//! Polynomial matrix file: a `N J L` header followed by `J` rows of `L`
//! cells in the polynomial text form (`0,2` for `1 + x^2`, `.` for zero).
//! Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::RingPoly;

/// Row-major rectangular grid.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Grid<T> {
    rows: usize,
    cols: usize,
    cells: Vec<T>,
}

impl<T: Clone> Grid<T> {
    pub fn new(rows: usize, cols: usize, cells: Vec<T>) -> Result<Self> {
        if cells.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} cells for a {rows}x{cols} matrix",
                cells.len()
            )));
        }
        Ok(Self { rows, cols, cells })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some((i, _)) = rows.iter().enumerate().find(|(_, row)| row.len() != c) {
            return Err(Error::Dimension(format!("row {i} has a different length")));
        }
        Ok(Self { rows: r, cols: c, cells: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.cells[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.cells[r * self.cols..(r + 1) * self.cols]
    }

    pub fn cells(&self) -> &[T] {
        &self.cells
    }

    pub fn map<U: Clone>(&self, f: impl FnMut(&T) -> U) -> Grid<U> {
        Grid { rows: self.rows, cols: self.cols, cells: self.cells.iter().map(f).collect() }
    }

    /// Columns listed in `s` (strictly increasing), order preserved.
    pub fn select_columns(&self, s: &[usize]) -> Result<Self> {
        check_increasing(s, self.cols)?;
        let mut cells = Vec::with_capacity(self.rows * s.len());
        for r in 0..self.rows {
            cells.extend(s.iter().map(|&c| self.get(r, c).clone()));
        }
        Ok(Self { rows: self.rows, cols: s.len(), cells })
    }

    /// Deletes the rows listed in `t`; deleting every row is rejected.
    pub fn remove_rows(&self, t: &[usize]) -> Result<Self> {
        check_increasing(t, self.rows)?;
        if self.rows > 0 && t.len() == self.rows {
            return Err(Error::Dimension("cannot remove every row".into()));
        }
        let mut cells = Vec::with_capacity((self.rows - t.len()) * self.cols);
        for r in (0..self.rows).filter(|r| !t.contains(r)) {
            cells.extend_from_slice(self.row(r));
        }
        Ok(Self { rows: self.rows - t.len(), cols: self.cols, cells })
    }
}

pub(crate) fn check_increasing(idx: &[usize], limit: usize) -> Result<()> {
    for (k, &i) in idx.iter().enumerate() {
        if i >= limit {
            return Err(Error::IndexOutOfRange { index: i, limit });
        }
        if k > 0 && idx[k - 1] >= i {
            return Err(Error::Dimension(format!("index set {idx:?} is not strictly increasing")));
        }
    }
    Ok(())
}

/// Nonnegative integer matrix: a protomatrix, or the weight matrix of a
/// polynomial parity-check matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightMatrix(Grid<u32>);

impl WeightMatrix {
    /// Protomatrix constructor: nonempty, and every column has an edge.
    pub fn new(rows: Vec<Vec<u32>>) -> Result<Self> {
        let m = Self(Grid::from_rows(rows)?);
        m.check_protomatrix()?;
        Ok(m)
    }

    /// Any shape, zero columns allowed. Used for submatrices.
    pub fn from_grid(grid: Grid<u32>) -> Self {
        Self(grid)
    }

    pub fn check_protomatrix(&self) -> Result<()> {
        if self.rows() == 0 || self.cols() == 0 {
            return Err(Error::Dimension("weight matrix must be at least 1x1".into()));
        }
        if let Some(c) = (0..self.cols()).find(|&c| self.column_is_zero(c)) {
            return Err(Error::ZeroColumn(c));
        }
        Ok(())
    }

    pub fn grid(&self) -> &Grid<u32> {
        &self.0
    }

    pub fn rows(&self) -> usize {
        self.0.rows
    }

    pub fn cols(&self) -> usize {
        self.0.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        *self.0.get(r, c)
    }

    pub fn row(&self, r: usize) -> &[u32] {
        self.0.row(r)
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows()).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column_is_zero(&self, c: usize) -> bool {
        (0..self.rows()).all(|r| self.get(r, c) == 0)
    }

    pub fn max_entry(&self) -> u32 {
        self.0.cells.iter().copied().max().unwrap_or(0)
    }

    pub fn is_type_one(&self) -> bool {
        self.0.cells.iter().all(|&v| v <= 1)
    }

    /// Column indices where row `r` is nonzero.
    pub fn row_support(&self, r: usize) -> Vec<usize> {
        (0..self.cols()).filter(|&c| self.get(r, c) != 0).collect()
    }

    pub fn select_columns(&self, s: &[usize]) -> Result<Self> {
        Ok(Self(self.0.select_columns(s)?))
    }

    pub fn remove_rows(&self, t: &[usize]) -> Result<Self> {
        Ok(Self(self.0.remove_rows(t)?))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (hl, header) = lines.next().ok_or(Error::Parse { line: 1, message: "empty file".into() })?;
        let dims = parse_header(hl, header, 2)?;
        let (j, l) = (dims[0], dims[1]);
        let mut rows = Vec::with_capacity(j);
        for _ in 0..j {
            let (ln, line) = lines.next().ok_or(Error::Parse {
                line: hl + rows.len() + 1,
                message: format!("expected {j} rows"),
            })?;
            let row: Vec<u32> = line
                .split_whitespace()
                .map(|t| {
                    t.parse().map_err(|_| Error::Parse { line: ln, message: format!("bad entry {t:?}") })
                })
                .collect::<Result<_>>()?;
            if row.len() != l {
                return Err(Error::Parse {
                    line: ln,
                    message: format!("expected {l} entries, found {}", row.len()),
                });
            }
            rows.push(row);
        }
        if let Some((ln, _)) = lines.next() {
            return Err(Error::Parse { line: ln, message: "trailing data".into() });
        }
        Self::new(rows).map_err(|e| Error::Parse { line: hl, message: e.to_string() })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.rows(), self.cols());
        for r in 0..self.rows() {
            let row: Vec<String> = self.row(r).iter().map(u32::to_string).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }
}

/// `J x L` matrix over GF(2)[x]/<x^N - 1>: the polynomial parity-check
/// matrix `H(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolyMatrix {
    modulus: u32,
    grid: Grid<RingPoly>,
}

impl PolyMatrix {
    pub fn new(modulus: u32, rows: Vec<Vec<RingPoly>>) -> Result<Self> {
        Self::from_grid(modulus, Grid::from_rows(rows)?)
    }

    pub fn from_grid(modulus: u32, grid: Grid<RingPoly>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::ZeroModulus);
        }
        if let Some(p) = grid.cells.iter().find(|p| p.modulus() != modulus) {
            return Err(Error::ModulusMismatch(modulus, p.modulus()));
        }
        Ok(Self { modulus, grid })
    }

    /// Builds a matrix from exponent lists; handy in tests and data files.
    pub fn from_exponents(modulus: u32, rows: &[Vec<Vec<u32>>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|row| row.iter().map(|e| RingPoly::new(modulus, e.iter().copied())).collect())
            .collect::<Result<Vec<Vec<_>>>>()?;
        Self::new(modulus, rows)
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn rows(&self) -> usize {
        self.grid.rows
    }

    pub fn cols(&self) -> usize {
        self.grid.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &RingPoly {
        self.grid.get(r, c)
    }

    pub fn row(&self, r: usize) -> &[RingPoly] {
        self.grid.row(r)
    }

    pub fn grid(&self) -> &Grid<RingPoly> {
        &self.grid
    }

    /// Entry-wise polynomial weights.
    pub fn weight_matrix(&self) -> WeightMatrix {
        WeightMatrix(self.grid.map(|p| p.weight() as u32))
    }

    pub fn select_columns(&self, s: &[usize]) -> Result<Self> {
        Ok(Self { modulus: self.modulus, grid: self.grid.select_columns(s)? })
    }

    pub fn remove_rows(&self, t: &[usize]) -> Result<Self> {
        Ok(Self { modulus: self.modulus, grid: self.grid.remove_rows(t)? })
    }

    /// Prepends `row` (already restricted to this matrix's columns).
    pub(crate) fn stacked_below(&self, row: &[RingPoly]) -> Result<Self> {
        if row.len() != self.cols() {
            return Err(Error::Dimension("stacked row length differs".into()));
        }
        let mut cells = row.to_vec();
        cells.extend_from_slice(&self.grid.cells);
        Ok(Self { modulus: self.modulus, grid: Grid::new(self.rows() + 1, self.cols(), cells)? })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (modulus, grid) = parse_poly_grid(text)?;
        let cells = grid
            .cells
            .iter()
            .map(|(ln, cell)| {
                RingPoly::parse_text(modulus, cell)
                    .map_err(|e| Error::Parse { line: *ln, message: e.to_string() })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_grid(modulus, Grid::new(grid.rows, grid.cols, cells)?)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.modulus, self.rows(), self.cols());
        for r in 0..self.rows() {
            let row: Vec<String> = self.row(r).iter().map(RingPoly::to_text).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }
}

/// Header-sniffing reader for `--matrix` style inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatrixFile {
    Weight(WeightMatrix),
    Poly(PolyMatrix),
}

impl MatrixFile {
    pub fn parse(text: &str) -> Result<Self> {
        let (ln, header) = content_lines(text)
            .next()
            .ok_or(Error::Parse { line: 1, message: "empty file".into() })?;
        match header.split_whitespace().count() {
            2 => Ok(Self::Weight(WeightMatrix::parse(text)?)),
            3 => Ok(Self::Poly(PolyMatrix::parse(text)?)),
            _ => Err(Error::Parse { line: ln, message: "header must be `J L` or `N J L`".into() }),
        }
    }

    pub fn weight_matrix(&self) -> WeightMatrix {
        match self {
            Self::Weight(w) => w.clone(),
            Self::Poly(p) => p.weight_matrix(),
        }
    }
}

pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_header(line: usize, header: &str, count: usize) -> Result<Vec<usize>> {
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse { line, message: format!("bad header field {t:?}") }))
        .collect::<Result<_>>()?;
    if dims.len() != count {
        return Err(Error::Parse { line, message: format!("header needs {count} fields") });
    }
    Ok(dims)
}

/// Reads an `N J L` grid of raw cell strings, tagging each with its line.
pub(crate) fn parse_poly_grid(text: &str) -> Result<(u32, Grid<(usize, String)>)> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or(Error::Parse { line: 1, message: "empty file".into() })?;
    let dims = parse_header(hl, header, 3)?;
    let modulus = u32::try_from(dims[0])
        .ok()
        .filter(|&n| n > 0)
        .ok_or(Error::Parse { line: hl, message: "N must be a positive 32-bit integer".into() })?;
    let (j, l) = (dims[1], dims[2]);
    let mut cells = Vec::with_capacity(j * l);
    for r in 0..j {
        let (ln, line) = lines
            .next()
            .ok_or(Error::Parse { line: hl + r + 1, message: format!("expected {j} rows") })?;
        let row: Vec<&str> = line.split_whitespace().collect();
        if row.len() != l {
            return Err(Error::Parse {
                line: ln,
                message: format!("expected {l} cells, found {}", row.len()),
            });
        }
        cells.extend(row.into_iter().map(|c| (ln, c.to_string())));
    }
    if let Some((ln, _)) = lines.next() {
        return Err(Error::Parse { line: ln, message: "trailing data".into() });
    }
    Ok((modulus, Grid::new(j, l, cells)?))
}

/// Columns of `H(x)` whose variables are not transmitted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PunctureSet(Vec<usize>);

impl PunctureSet {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// Requires strictly increasing indices.
    pub fn new(columns: Vec<usize>) -> Result<Self> {
        if columns.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Puncture(format!("{columns:?} is not strictly increasing")));
        }
        Ok(Self(columns))
    }

    /// Comma-separated column list; an empty string is the empty set.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Self::empty());
        }
        let mut cols = Vec::new();
        for tok in text.split(',') {
            let tok = tok.trim();
            if let Some((a, b)) = tok.split_once('-') {
                let (a, b) = (parse_index(a)?, parse_index(b)?);
                cols.extend(a..=b);
            } else {
                cols.push(parse_index(tok)?);
            }
        }
        Self::new(cols)
    }

    /// Checks `|P| < J` and that every column lies in `[0, L)`.
    pub fn validate(&self, j: usize, l: usize) -> Result<()> {
        if self.0.len() >= j {
            return Err(Error::Puncture(format!(
                "{} punctured columns leave no redundancy for J = {j}",
                self.0.len()
            )));
        }
        if let Some(&c) = self.0.iter().find(|&&c| c >= l) {
            return Err(Error::Puncture(format!("column {c} out of range for L = {l}")));
        }
        Ok(())
    }

    pub fn columns(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, c: usize) -> bool {
        self.0.binary_search(&c).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_text(&self) -> String {
        self.0.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
    }
}

fn parse_index(t: &str) -> Result<usize> {
    t.trim().parse().map_err(|_| Error::Puncture(format!("bad column index {t:?}")))
}

/// Dense matrix over GF(2), rows packed into 64-bit words.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    words: Vec<u64>,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension("binary matrix dimensions must be positive".into()));
        }
        let words_per_row = cols.div_ceil(64);
        Ok(Self { rows, cols, words_per_row, words: vec![0; rows * words_per_row] })
    }

    pub fn from_rows(rows: &[Vec<bool>]) -> Result<Self> {
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != c) {
            return Err(Error::Dimension("ragged binary matrix".into()));
        }
        let mut m = Self::zeros(rows.len(), c)?;
        for (r, row) in rows.iter().enumerate() {
            for (col, &b) in row.iter().enumerate() {
                m.set(r, col, b);
            }
        }
        Ok(m)
    }

    /// Reads a 0/1 weight matrix as a scalar matrix.
    pub fn from_weight_matrix(w: &WeightMatrix) -> Result<Self> {
        if !w.is_type_one() {
            return Err(Error::Dimension("matrix has entries other than 0 and 1".into()));
        }
        let rows: Vec<Vec<bool>> =
            (0..w.rows()).map(|r| w.row(r).iter().map(|&v| v == 1).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn to_weight_matrix(&self) -> WeightMatrix {
        let cells = (0..self.rows)
            .flat_map(|r| (0..self.cols).map(move |c| (r, c)))
            .map(|(r, c)| u32::from(self.get(r, c)))
            .collect();
        WeightMatrix(Grid { rows: self.rows, cols: self.cols, cells })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        (self.words[r * self.words_per_row + c / 64] >> (c % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let w = &mut self.words[r * self.words_per_row + c / 64];
        if v {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.words[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    pub fn words_per_row(&self) -> usize {
        self.words_per_row
    }

    /// `H v^T` over GF(2) for a packed vector `v`.
    pub fn syndrome_is_zero(&self, v: &[u64]) -> bool {
        (0..self.rows).all(|r| {
            self.row_words(r).iter().zip(v).map(|(a, b)| (a & b).count_ones()).sum::<u32>() % 2 == 0
        })
    }

    pub fn to_rows(&self) -> Vec<Vec<bool>> {
        (0..self.rows).map(|r| (0..self.cols).map(|c| self.get(r, c)).collect()).collect()
    }
}

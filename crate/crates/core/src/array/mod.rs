//! Partially filled arrays over a group or over the integers.

mod instance;
pub mod io;

use std::fmt;

use serde::ser::{Serialize, Serializer};

use crate::error::{MrsError, Result};
use crate::group::{FiniteAbelianGroup, GroupElement};
use crate::num::{gcd, lcm};

pub use instance::{
    is_diagonal_instance, to_multipartite_labeling, transpose_instance, verify_mrs, LabelingReport,
    MrsInstance, MrsParams, VerificationReport,
};

/// Where the entries of an array live.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Domain {
    Integers,
    Group(FiniteAbelianGroup),
}

impl Domain {
    pub fn zero(&self) -> Entry {
        match self {
            Domain::Integers => Entry::Int(0),
            Domain::Group(g) => Entry::Elem(g.zero()),
        }
    }

    pub fn group(&self) -> Option<&FiniteAbelianGroup> {
        match self {
            Domain::Integers => None,
            Domain::Group(g) => Some(g),
        }
    }

    pub fn mode_name(&self) -> &'static str {
        match self {
            Domain::Integers => "integer",
            Domain::Group(_) => "group",
        }
    }

    pub fn contains(&self, e: &Entry) -> bool {
        match (self, e) {
            (Domain::Integers, Entry::Int(_)) => true,
            (Domain::Group(g), Entry::Elem(x)) => x.group() == g,
            _ => false,
        }
    }
}

/// A cell value.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Entry {
    Int(i64),
    Elem(GroupElement),
}

impl Entry {
    pub fn as_int(&self) -> Option<i64> {
        match self {
            Entry::Int(v) => Some(*v),
            Entry::Elem(_) => None,
        }
    }

    pub fn as_elem(&self) -> Option<&GroupElement> {
        match self {
            Entry::Int(_) => None,
            Entry::Elem(g) => Some(g),
        }
    }

    pub fn try_add(&self, other: &Entry) -> Result<Entry> {
        match (self, other) {
            (Entry::Int(a), Entry::Int(b)) => Ok(Entry::Int(a + b)),
            (Entry::Elem(a), Entry::Elem(b)) => a.try_add(b).map(Entry::Elem),
            _ => Err(MrsError::ModeError("cannot add an integer to a group element".into())),
        }
    }

    pub fn neg(&self) -> Entry {
        match self {
            Entry::Int(a) => Entry::Int(-a),
            Entry::Elem(g) => Entry::Elem(g.neg()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Entry::Int(a) => *a == 0,
            Entry::Elem(g) => g.is_zero(),
        }
    }
}

impl From<GroupElement> for Entry {
    fn from(g: GroupElement) -> Self {
        Entry::Elem(g)
    }
}

impl From<i64> for Entry {
    fn from(v: i64) -> Self {
        Entry::Int(v)
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Entry::Int(v) => write!(f, "{v}"),
            Entry::Elem(g) => write!(f, "{g}"),
        }
    }
}

impl fmt::Debug for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Entry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Entry::Int(v) => s.serialize_i64(*v),
            Entry::Elem(g) => g.coords().serialize(s),
        }
    }
}

/// An `m x n` grid of optional entries, all from one [`Domain`].
#[derive(Clone, PartialEq, Eq)]
pub struct PFArray {
    rows: usize,
    cols: usize,
    domain: Domain,
    cells: Vec<Option<Entry>>,
}

impl PFArray {
    /// An empty array.
    pub fn new(rows: usize, cols: usize, domain: Domain) -> Self {
        PFArray { rows, cols, domain, cells: vec![None; rows * cols] }
    }

    /// Builds an array from row-major cells, checking shape and domain.
    pub fn from_cells(
        rows: usize,
        cols: usize,
        domain: Domain,
        cells: Vec<Option<Entry>>,
    ) -> Result<Self> {
        if cells.len() != rows * cols {
            return Err(MrsError::ShapeError(format!(
                "{} cells given for a {rows}x{cols} array",
                cells.len()
            )));
        }
        if let Some(bad) = cells.iter().flatten().find(|e| !domain.contains(e)) {
            return Err(MrsError::ModeError(format!("entry {bad} is outside the array domain")));
        }
        Ok(PFArray { rows, cols, domain, cells })
    }

    pub fn from_rows(domain: Domain, rows: Vec<Vec<Option<Entry>>>) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(MrsError::ShapeError("ragged rows".into()));
        }
        Self::from_cells(m, n, domain, rows.into_iter().flatten().collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    fn check(&self, i: usize, j: usize) -> Result<usize> {
        if i >= self.rows || j >= self.cols {
            return Err(MrsError::IndexError(format!(
                "cell ({i},{j}) outside {}x{}",
                self.rows, self.cols
            )));
        }
        Ok(i * self.cols + j)
    }

    /// Entry at `(i, j)`; `None` for an empty cell. Panics out of range.
    pub fn get(&self, i: usize, j: usize) -> Option<&Entry> {
        let idx = self.check(i, j).expect("cell index in range");
        self.cells[idx].as_ref()
    }

    pub fn set(&mut self, i: usize, j: usize, value: Option<Entry>) -> Result<()> {
        let idx = self.check(i, j)?;
        if let Some(v) = &value {
            if !self.domain.contains(v) {
                return Err(MrsError::ModeError(format!("entry {v} is outside the array domain")));
            }
        }
        self.cells[idx] = value;
        Ok(())
    }

    pub fn cells(&self) -> &[Option<Entry>] {
        &self.cells
    }

    pub fn row(&self, i: usize) -> &[Option<Entry>] {
        &self.cells[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_sum(&self, i: usize) -> Result<Entry> {
        if i >= self.rows {
            return Err(MrsError::IndexError(format!("row {i} of {}", self.rows)));
        }
        self.row(i).iter().flatten().try_fold(self.domain.zero(), |acc, e| acc.try_add(e))
    }

    pub fn col_sum(&self, j: usize) -> Result<Entry> {
        if j >= self.cols {
            return Err(MrsError::IndexError(format!("column {j} of {}", self.cols)));
        }
        (0..self.rows)
            .filter_map(|i| self.cells[i * self.cols + j].as_ref())
            .try_fold(self.domain.zero(), |acc, e| acc.try_add(e))
    }

    pub fn row_count(&self, i: usize) -> usize {
        self.row(i).iter().filter(|c| c.is_some()).count()
    }

    pub fn col_count(&self, j: usize) -> usize {
        (0..self.rows).filter(|&i| self.cells[i * self.cols + j].is_some()).count()
    }

    /// Filled cells in row-major order.
    pub fn filled_cells(&self) -> Vec<(usize, usize)> {
        (0..self.rows * self.cols)
            .filter(|&x| self.cells[x].is_some())
            .map(|x| (x / self.cols, x % self.cols))
            .collect()
    }

    /// Entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = &Entry> {
        self.cells.iter().flatten()
    }

    pub fn filled_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_some()).count()
    }

    pub fn is_full(&self) -> bool {
        self.cells.iter().all(Option::is_some)
    }

    pub fn transpose(&self) -> PFArray {
        let mut cells = Vec::with_capacity(self.cells.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                cells.push(self.cells[i * self.cols + j].clone());
            }
        }
        PFArray { rows: self.cols, cols: self.rows, domain: self.domain.clone(), cells }
    }

    /// True when every row and column sums to zero (group mode only).
    pub fn is_zero_sum(&self) -> Result<bool> {
        if self.domain == Domain::Integers {
            return Err(MrsError::ModeError("zero-sum test needs group entries".into()));
        }
        for i in 0..self.rows {
            if !self.row_sum(i)?.is_zero() {
                return Ok(false);
            }
        }
        for j in 0..self.cols {
            if !self.col_sum(j)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Applies `f` to every filled cell, producing an array over `domain`.
    pub fn map_entries<F>(&self, domain: Domain, mut f: F) -> Result<PFArray>
    where
        F: FnMut(&Entry) -> Result<Entry>,
    {
        let cells: Result<Vec<Option<Entry>>> =
            self.cells.iter().map(|c| c.as_ref().map(&mut f).transpose()).collect();
        PFArray::from_cells(self.rows, self.cols, domain, cells?)
    }
}

impl fmt::Debug for PFArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PFArray {}x{} over {:?}", self.rows, self.cols, self.domain)?;
        for i in 0..self.rows {
            let row: Vec<String> = self
                .row(i)
                .iter()
                .map(|c| c.as_ref().map_or_else(|| ".".to_string(), Entry::to_string))
                .collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        Ok(())
    }
}

fn common_domain(blocks: &[PFArray]) -> Result<Domain> {
    let first = blocks.first().ok_or_else(|| MrsError::ShapeError("no blocks to join".into()))?;
    if blocks.iter().any(|b| b.domain != first.domain) {
        return Err(MrsError::GroupMismatch);
    }
    Ok(first.domain.clone())
}

/// Stacks blocks of equal width on top of each other.
pub fn juxtapose_vertical(blocks: &[PFArray]) -> Result<PFArray> {
    let domain = common_domain(blocks)?;
    let cols = blocks[0].cols;
    if blocks.iter().any(|b| b.cols != cols) {
        return Err(MrsError::ShapeError("blocks have different widths".into()));
    }
    let rows = blocks.iter().map(|b| b.rows).sum();
    let cells = blocks.iter().flat_map(|b| b.cells.iter().cloned()).collect();
    PFArray::from_cells(rows, cols, domain, cells)
}

/// Places blocks of equal height side by side.
pub fn juxtapose_horizontal(blocks: &[PFArray]) -> Result<PFArray> {
    let domain = common_domain(blocks)?;
    let rows = blocks[0].rows;
    if blocks.iter().any(|b| b.rows != rows) {
        return Err(MrsError::ShapeError("blocks have different heights".into()));
    }
    let cols = blocks.iter().map(|b| b.cols).sum();
    let mut cells = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        for b in blocks {
            cells.extend(b.row(i).iter().cloned());
        }
    }
    PFArray::from_cells(rows, cols, domain, cells)
}

/// Cells `(i, j)` of an `m x n` grid with `j - i = l (mod gcd(m, n))`, row-major.
pub fn diagonal_cells(m: usize, n: usize, l: usize) -> Result<Vec<(usize, usize)>> {
    let e = gcd(m, n);
    if m == 0 || n == 0 || l >= e {
        return Err(MrsError::IndexError(format!("diagonal {l} of a {m}x{n} grid")));
    }
    let mut out = Vec::with_capacity(lcm(m, n));
    for i in 0..m {
        for j in 0..n {
            if (j + e - i % e) % e == l {
                out.push((i, j));
            }
        }
    }
    Ok(out)
}

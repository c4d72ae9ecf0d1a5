//! Dense matrices over GF(2) with rows packed into 64-bit words.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

/// A `rows x cols` matrix over GF(2). Bits past `cols` in each row's last
/// word are always zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BitMatrix { rows, cols, stride, data: vec![0; rows * stride] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Parses rows written as strings of `0` and `1`.
    pub fn from_row_strings<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().trim().len());
        let mut m = BitMatrix::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref().trim();
            if row.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: row.len() });
            }
            for (j, ch) in row.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => m.set(i, j, true),
                    _ => return Err(Error::Contract(alloc::format!("matrix entry `{ch}` is not 0 or 1"))),
                }
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols);
        self.data[i * self.stride + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.rows && j < self.cols);
        let word = &mut self.data[i * self.stride + j / 64];
        if value {
            *word |= 1 << (j % 64);
        } else {
            *word &= !(1 << (j % 64));
        }
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    pub(crate) fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.stride..(i + 1) * self.stride]
    }

    /// Rank over GF(2).
    pub fn rank(&self) -> usize {
        let mut basis = RowBasis::new(self.cols);
        for i in 0..self.rows {
            basis.push_row(self.row(i));
        }
        basis.len()
    }

    /// Whether the matrix fits `g`: ones on the diagonal and zeros at
    /// every off-diagonal non-edge position. Entries at edge positions are
    /// unconstrained. Rows and columns follow the vertex order of `g`.
    pub fn fits(&self, g: &Graph) -> Result<bool> {
        let n = g.order();
        if self.rows != n || self.cols != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: if self.rows != n { self.rows } else { self.cols },
            });
        }
        for i in 0..n {
            if !self.get(i, i) {
                return Ok(false);
            }
            let nbrs = g.neighbors(i);
            let stray = ones(self.row(i)).any(|j| j != i && nbrs.binary_search(&j).is_err());
            if stray {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_row_strings(&self) -> Vec<String> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| if self.get(i, j) { '1' } else { '0' }).collect()).collect()
    }

    /// Copies `block` into `self` at rows and columns `index[0..]`.
    pub fn place_block(&mut self, block: &BitMatrix, index: &[usize]) {
        assert_eq!(block.rows, index.len());
        assert_eq!(block.cols, index.len());
        for (bi, &i) in index.iter().enumerate() {
            for (bj, &j) in index.iter().enumerate() {
                if block.get(bi, bj) {
                    self.set(i, j, true);
                }
            }
        }
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_row_strings()).finish()
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.to_row_strings().iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            f.write_str(row)?;
        }
        Ok(())
    }
}

/// Indices of set bits in a packed row, ascending.
pub(crate) fn ones(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(w, &word)| {
        let mut rest = word;
        core::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(w * 64 + b)
            }
        })
    })
}

/// Incremental row echelon basis.
///
/// Every stored row is reduced against all rows stored before it, so its
/// pivot (lowest set bit) is zero in all later rows. Rows can be removed
/// in LIFO order, which is what the branch-and-bound search needs.
#[derive(Debug, Clone)]
pub struct RowBasis {
    width: usize,
    stride: usize,
    len: usize,
    data: Vec<u64>,
    pivots: Vec<usize>,
}

impl RowBasis {
    pub fn new(width: usize) -> Self {
        RowBasis { width, stride: words_for(width), len: 0, data: Vec::new(), pivots: Vec::new() }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Number of stored rows, i.e. the rank of everything inserted.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Inserts a row given as booleans; returns whether it was independent
    /// of the current basis.
    pub fn insert(&mut self, row: &[bool]) -> Result<bool> {
        if row.len() != self.width {
            return Err(Error::DimensionMismatch { expected: self.width, found: row.len() });
        }
        let mut packed = vec![0u64; self.stride];
        for (j, _) in row.iter().enumerate().filter(|(_, &b)| b) {
            packed[j / 64] |= 1 << (j % 64);
        }
        Ok(self.push_row(&packed))
    }

    /// Inserts a packed row of exactly `width` bits. Returns whether the
    /// basis grew; a dependent row leaves the basis unchanged.
    pub fn push_row(&mut self, row: &[u64]) -> bool {
        debug_assert_eq!(row.len(), self.stride);
        let start = self.len * self.stride;
        if self.data.len() < start + self.stride {
            self.data.resize(start + self.stride, 0);
        }
        let (stored, slot) = self.data.split_at_mut(start);
        let slot = &mut slot[..self.stride];
        slot.copy_from_slice(row);
        for (r, &p) in self.pivots[..self.len].iter().enumerate() {
            if slot[p / 64] >> (p % 64) & 1 == 1 {
                let basis_row = &stored[r * self.stride..(r + 1) * self.stride];
                for (a, b) in slot.iter_mut().zip(basis_row) {
                    *a ^= b;
                }
            }
        }
        match slot.iter().position(|&w| w != 0) {
            Some(w) => {
                let pivot = w * 64 + slot[w].trailing_zeros() as usize;
                if self.pivots.len() == self.len {
                    self.pivots.push(pivot);
                } else {
                    self.pivots[self.len] = pivot;
                }
                self.len += 1;
                true
            }
            None => false,
        }
    }

    /// Whether `row` lies in the span of the basis.
    pub fn contains(&self, row: &[u64]) -> bool {
        let mut scratch = row.to_vec();
        for (r, &p) in self.pivots[..self.len].iter().enumerate() {
            if scratch[p / 64] >> (p % 64) & 1 == 1 {
                let basis_row = &self.data[r * self.stride..(r + 1) * self.stride];
                for (a, b) in scratch.iter_mut().zip(basis_row) {
                    *a ^= b;
                }
            }
        }
        scratch.iter().all(|&w| w == 0)
    }

    /// Removes the most recently stored row.
    pub fn pop(&mut self) {
        assert!(self.len > 0, "pop from empty basis");
        self.len -= 1;
    }

    pub fn truncate(&mut self, len: usize) {
        self.len = self.len.min(len);
    }
}

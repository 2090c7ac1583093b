//! Bit-packed dense matrices over GF(2).
//!
//! Rows are stored row-major as 64-bit words, so row operations (the bulk of
//! Gaussian elimination and of the kernel algebra built on top of this module)
//! are word-wide XORs.

use std::fmt;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

/// Largest dimension [`BitMatrix::kronecker_power`] will build by default.
pub const DEFAULT_KRONECKER_LIMIT: usize = 1 << 14;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    /// All-zero `rows x cols` matrix.
    ///
    /// # Panics
    ///
    /// Panics if either dimension is zero.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "BitMatrix dimensions must be >= 1");
        let stride = cols.div_ceil(WORD_BITS);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.set(i, i, true);
        }
        m
    }

    pub fn ones(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| true)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if f(r, c) {
                    m.set(r, c, true);
                }
            }
        }
        m
    }

    /// Builds a matrix from rows of 0/1 values; any nonzero byte counts as 1.
    ///
    /// # Panics
    ///
    /// Panics on an empty or ragged input.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        assert!(!rows.is_empty(), "BitMatrix needs at least one row");
        let cols = rows[0].as_ref().len();
        assert!(
            rows.iter().all(|r| r.as_ref().len() == cols),
            "ragged rows"
        );
        Self::from_fn(rows.len(), cols, |r, c| rows[r].as_ref()[c] != 0)
    }

    /// Parses rows written as strings of `0`/`1` characters, e.g. `["10", "11"]`.
    ///
    /// # Panics
    ///
    /// Panics on characters other than `0` and `1`; meant for literals in code
    /// and tests. File input goes through [`crate::format`].
    pub fn from_strs(rows: &[&str]) -> Self {
        let bits: Vec<Vec<u8>> = rows
            .iter()
            .map(|r| {
                r.bytes()
                    .map(|b| match b {
                        b'0' => 0,
                        b'1' => 1,
                        _ => panic!("invalid bit character {:?}", b as char),
                    })
                    .collect()
            })
            .collect();
        Self::from_rows(&bits)
    }

    /// Builds a matrix with at most 64 columns from per-row masks, bit `c` of
    /// `masks[r]` being entry `(r, c)`.
    pub fn from_row_masks(masks: &[u64], cols: usize) -> Self {
        assert!(cols <= WORD_BITS);
        let mut m = Self::zeros(masks.len(), cols);
        let keep = if cols == WORD_BITS { u64::MAX } else { (1u64 << cols) - 1 };
        for (r, &mask) in masks.iter().enumerate() {
            m.data[r * m.stride] = mask & keep;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        (self.data[r * self.stride + c / WORD_BITS] >> (c % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn bit(&self, r: usize, c: usize) -> u8 {
        self.get(r, c) as u8
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.stride + c / WORD_BITS];
        let mask = 1u64 << (c % WORD_BITS);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    /// Row `r` as a single word. Only valid for matrices with at most 64 columns.
    #[inline]
    pub fn row_mask(&self, r: usize) -> u64 {
        debug_assert!(self.cols <= WORD_BITS);
        self.data[r * self.stride]
    }

    pub fn row_masks(&self) -> Vec<u64> {
        (0..self.rows).map(|r| self.row_mask(r)).collect()
    }

    pub fn row_bits(&self, r: usize) -> Vec<u8> {
        (0..self.cols).map(|c| self.bit(r, c)).collect()
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_words(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn row_weights(&self) -> Vec<usize> {
        (0..self.rows).map(|r| self.row_weight(r)).collect()
    }

    /// Index of the first set bit of row `r`, if any.
    pub fn row_start(&self, r: usize) -> Option<usize> {
        self.row_words(r)
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(k, w)| k * WORD_BITS + w.trailing_zeros() as usize)
    }

    /// Index of the last set bit of row `r`, if any.
    pub fn row_end(&self, r: usize) -> Option<usize> {
        self.row_words(r)
            .iter()
            .enumerate()
            .rev()
            .find(|(_, w)| **w != 0)
            .map(|(k, w)| k * WORD_BITS + (WORD_BITS - 1 - w.leading_zeros() as usize))
    }

    /// `row[dst] ^= row[src]`.
    pub fn xor_row_into(&mut self, src: usize, dst: usize) {
        debug_assert_ne!(src, dst);
        let s = self.stride;
        for k in 0..s {
            let w = self.data[src * s + k];
            self.data[dst * s + k] ^= w;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        for k in 0..s {
            self.data.swap(a * s + k, b * s + k);
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    pub fn multiply(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: other.rows,
                right_cols: other.cols,
            });
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        let s = out.stride;
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self.get(r, k) {
                    let src = other.row_words(k);
                    for (w, x) in out.data[r * s..(r + 1) * s].iter_mut().zip(src) {
                        *w ^= x;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix: `bits · self`.
    pub fn mul_vec(&self, bits: &[u8]) -> Result<Vec<u8>> {
        if bits.len() != self.rows {
            return Err(Error::LengthMismatch {
                expected: self.rows,
                got: bits.len(),
            });
        }
        let mut acc = vec![0u64; self.stride];
        for (r, &b) in bits.iter().enumerate() {
            if b & 1 == 1 {
                for (a, w) in acc.iter_mut().zip(self.row_words(r)) {
                    *a ^= w;
                }
            }
        }
        Ok((0..self.cols)
            .map(|c| ((acc[c / WORD_BITS] >> (c % WORD_BITS)) & 1) as u8)
            .collect())
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for c in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(p) = (rank..m.rows).find(|&r| m.get(r, c)) else {
                continue;
            };
            m.swap_rows(rank, p);
            for r in 0..m.rows {
                if r != rank && m.get(r, c) {
                    m.xor_row_into(rank, r);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Gauss-Jordan inverse.
    pub fn invert(&self) -> Result<BitMatrix> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = BitMatrix::identity(n);
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| a.get(r, c)) else {
                return Err(Error::SingularMatrix {
                    rank: self.rank(),
                    dim: n,
                });
            };
            a.swap_rows(c, p);
            inv.swap_rows(c, p);
            for r in 0..n {
                if r != c && a.get(r, c) {
                    a.xor_row_into(c, r);
                    inv.xor_row_into(c, r);
                }
            }
        }
        Ok(inv)
    }

    pub fn kronecker(&self, other: &BitMatrix) -> BitMatrix {
        let (r2, c2) = (other.rows, other.cols);
        BitMatrix::from_fn(self.rows * r2, self.cols * c2, |r, c| {
            self.get(r / r2, c / c2) && other.get(r % r2, c % c2)
        })
    }

    /// `n`-fold Kronecker power with the default size limit.
    pub fn kronecker_power(&self, n: usize) -> Result<BitMatrix> {
        self.kronecker_power_limited(n, DEFAULT_KRONECKER_LIMIT)
    }

    pub fn kronecker_power_limited(&self, n: usize, limit: usize) -> Result<BitMatrix> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if n == 0 {
            return Err(Error::InvalidCode("Kronecker exponent must be >= 1".into()));
        }
        let l = self.rows;
        let dim = (0..n).try_fold(1usize, |acc, _| acc.checked_mul(l));
        match dim {
            Some(d) if d <= limit => {}
            _ => {
                return Err(Error::TooLarge {
                    dim: dim.unwrap_or(usize::MAX),
                    limit,
                })
            }
        }
        let mut out = self.clone();
        for _ in 1..n {
            out = out.kronecker(self);
        }
        Ok(out)
    }

    /// Same matrix with columns reordered so that output column `c` is input
    /// column `order[c]`.
    pub fn select_columns(&self, order: &[usize]) -> BitMatrix {
        BitMatrix::from_fn(self.rows, order.len(), |r, c| self.get(r, order[c]))
    }
}

/// The 2 x 2 kernel `F_2 = [[1, 0], [1, 1]]`.
pub fn arikan_f2() -> BitMatrix {
    BitMatrix::from_strs(&["10", "11"])
}

/// `F_2^{⊗t}`, the `2^t x 2^t` Arıkan kernel. Entry `(r, c)` is 1 iff the bits
/// of `c` are a subset of the bits of `r`.
pub fn arikan_kernel(t: u32) -> BitMatrix {
    let l = 1usize << t;
    BitMatrix::from_fn(l, l, |r, c| c & !r == 0)
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                write!(f, "{}", self.bit(r, c))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            for c in 0..self.cols {
                write!(f, "{}", self.bit(r, c))?;
            }
            if r + 1 < self.rows {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

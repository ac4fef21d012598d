//! Bit-packed vectors and sparse/dense matrices over GF(2).
//!
//! `BinaryMatrix` keeps two views of the same matrix: per-row sorted column
//! indices (what the decoders walk) and bit-packed dense rows (what rank,
//! row-space and product computations use). Both are built once and never
//! mutated afterwards.

use std::fmt;
use std::ops::{BitXor, BitXorAssign};

use crate::error::{check_len, Error, Result};

const WORD_BITS: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// A fixed-length vector over GF(2), packed into 64-bit words.
///
/// Bits past `len` in the last word are always zero, so derived equality and
/// hashing are exact.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BinaryVector {
    len: usize,
    words: Vec<u64>,
}

impl BinaryVector {
    pub fn zeros(len: usize) -> Self {
        BinaryVector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// Vector of length `len` with ones at `positions`. Repeated positions cancel.
    pub fn from_ones(len: usize, positions: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &p in positions {
            v.flip(p);
        }
        v
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut v = Self::zeros(0);
        for b in bits {
            v.push(b);
        }
        v
    }

    /// Builds a vector from a slice of 0/1 bytes; any nonzero byte is a one.
    pub fn from_bytes(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (j, &b) in bits.iter().enumerate() {
            if b != 0 {
                v.words[j / WORD_BITS] |= 1 << (j % WORD_BITS);
            }
        }
        v
    }

    /// Parses a string of `0`/`1` characters. Whitespace is ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut v = Self::zeros(0);
        for (position, c) in text.chars().enumerate() {
            match c {
                '0' => v.push(false),
                '1' => v.push(true),
                c if c.is_whitespace() => {}
                other => {
                    return Err(Error::BitString {
                        position,
                        msg: format!("unexpected character {other:?}"),
                    })
                }
            }
        }
        Ok(v)
    }

    fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(WORD_BITS) {
            self.words.push(0);
        }
        if bit {
            self.words[self.len / WORD_BITS] |= 1 << (self.len % WORD_BITS);
        }
        self.len += 1;
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, j: usize) -> bool {
        assert!(
            j < self.len,
            "bit index {j} out of range for length {}",
            self.len
        );
        (self.words[j / WORD_BITS] >> (j % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, j: usize, bit: bool) {
        assert!(
            j < self.len,
            "bit index {j} out of range for length {}",
            self.len
        );
        let mask = 1u64 << (j % WORD_BITS);
        if bit {
            self.words[j / WORD_BITS] |= mask;
        } else {
            self.words[j / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, j: usize) {
        assert!(
            j < self.len,
            "bit index {j} out of range for length {}",
            self.len
        );
        self.words[j / WORD_BITS] ^= 1 << (j % WORD_BITS);
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |j| self.get(j))
    }

    /// Positions of the ones, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let bit = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(w * WORD_BITS + bit)
                }
            })
        })
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        self.iter().map(u8::from).collect()
    }

    /// Big-endian hex rendering where bit 0 is the most significant bit of
    /// the first nibble. The last nibble is zero-padded on the right.
    pub fn to_hex(&self) -> String {
        let mut out = String::with_capacity(self.len.div_ceil(4));
        for chunk in 0..self.len.div_ceil(4) {
            let mut nibble = 0u32;
            for k in 0..4 {
                let j = chunk * 4 + k;
                nibble <<= 1;
                if j < self.len && self.get(j) {
                    nibble |= 1;
                }
            }
            out.push(char::from_digit(nibble, 16).unwrap());
        }
        out
    }

    pub fn try_xor(&self, other: &Self) -> Result<Self> {
        check_len(self.len, other.len)?;
        Ok(self ^ other)
    }

    /// Parity of the inner product with `other`.
    pub fn dot(&self, other: &Self) -> bool {
        assert_eq!(
            self.len, other.len,
            "dot product of vectors with different lengths"
        );
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }
}

impl fmt::Display for BinaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryVector({self})")
    }
}

impl BitXorAssign<&BinaryVector> for BinaryVector {
    fn bitxor_assign(&mut self, rhs: &BinaryVector) {
        assert_eq!(self.len, rhs.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
    }
}

impl BitXor for &BinaryVector {
    type Output = BinaryVector;

    fn bitxor(self, rhs: &BinaryVector) -> BinaryVector {
        let mut out = self.clone();
        out ^= rhs;
        out
    }
}

/// Number of positions where `a` and `b` differ.
pub fn hamming_distance(a: &BinaryVector, b: &BinaryVector) -> Result<usize> {
    check_len(a.len(), b.len())?;
    Ok(a.words
        .iter()
        .zip(&b.words)
        .map(|(x, y)| (x ^ y).count_ones() as usize)
        .sum())
}

/// An `m x n` matrix over GF(2).
#[derive(Clone, PartialEq, Eq)]
pub struct BinaryMatrix {
    cols: usize,
    sparse: Vec<Vec<usize>>,
    dense: Vec<BinaryVector>,
}

impl BinaryMatrix {
    /// Builds a matrix from per-row column indices. Rows are sorted; duplicate
    /// or out-of-range indices are rejected.
    pub fn from_rows(cols: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        let mut sparse = rows;
        for (i, row) in sparse.iter_mut().enumerate() {
            row.sort_unstable();
            if let Some(&last) = row.last() {
                if last >= cols {
                    return Err(Error::InvalidMatrix(format!(
                        "row {i} has column index {last}, but there are only {cols} columns"
                    )));
                }
            }
            if let Some(w) = row.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::InvalidMatrix(format!(
                    "row {i} lists column {} twice",
                    w[0]
                )));
            }
        }
        let dense = sparse
            .iter()
            .map(|r| BinaryVector::from_ones(cols, r))
            .collect();
        Ok(BinaryMatrix {
            cols,
            sparse,
            dense,
        })
    }

    /// Builds a matrix from rows of 0/1 entries; all rows must have the same length.
    pub fn from_dense<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut sparse = Vec::with_capacity(rows.len());
        for row in rows {
            let row = row.as_ref();
            check_len(cols, row.len())?;
            sparse.push(
                row.iter()
                    .enumerate()
                    .filter(|(_, &b)| b != 0)
                    .map(|(j, _)| j)
                    .collect(),
            );
        }
        Self::from_rows(cols, sparse)
    }

    pub fn from_bit_rows(cols: usize, rows: Vec<BinaryVector>) -> Result<Self> {
        let mut sparse = Vec::with_capacity(rows.len());
        for row in &rows {
            check_len(cols, row.len())?;
            sparse.push(row.ones().collect());
        }
        Ok(BinaryMatrix {
            cols,
            sparse,
            dense: rows,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        BinaryMatrix {
            cols,
            sparse: vec![Vec::new(); rows],
            dense: vec![BinaryVector::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_rows(n, (0..n).map(|i| vec![i]).collect()).expect("identity is well formed")
    }

    pub fn rows(&self) -> usize {
        self.sparse.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Sorted column indices of the ones in row `i`.
    pub fn row(&self, i: usize) -> &[usize] {
        &self.sparse[i]
    }

    pub fn dense_row(&self, i: usize) -> &BinaryVector {
        &self.dense[i]
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.dense[i].get(j)
    }

    /// Number of ones.
    pub fn nnz(&self) -> usize {
        self.sparse.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.sparse.iter().all(Vec::is_empty)
    }

    pub fn row_weights(&self) -> Vec<usize> {
        self.sparse.iter().map(Vec::len).collect()
    }

    pub fn col_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.cols];
        for row in &self.sparse {
            for &j in row {
                w[j] += 1;
            }
        }
        w
    }

    pub fn transpose(&self) -> Self {
        let mut rows = vec![Vec::new(); self.cols];
        for (i, row) in self.sparse.iter().enumerate() {
            for &j in row {
                rows[j].push(i);
            }
        }
        Self::from_rows(self.rows(), rows).expect("transpose preserves validity")
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let cols = self.cols * other.cols;
        let mut rows = Vec::with_capacity(self.rows() * other.rows());
        for a in &self.sparse {
            for b in &other.sparse {
                let mut row = Vec::with_capacity(a.len() * b.len());
                for &ja in a {
                    row.extend(b.iter().map(|&jb| ja * other.cols + jb));
                }
                rows.push(row);
            }
        }
        Self::from_rows(cols, rows).expect("kronecker product preserves validity")
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        check_len(self.rows(), other.rows())?;
        let rows = self
            .sparse
            .iter()
            .zip(&other.sparse)
            .map(|(a, b)| {
                a.iter()
                    .copied()
                    .chain(b.iter().map(|&j| j + self.cols))
                    .collect()
            })
            .collect();
        Self::from_rows(self.cols + other.cols, rows)
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        check_len(self.cols, other.cols)?;
        let rows = self.sparse.iter().chain(&other.sparse).cloned().collect();
        Self::from_rows(self.cols, rows)
    }

    /// The product `self · otherᵀ` over GF(2).
    pub fn mul_transpose(&self, other: &Self) -> Result<Self> {
        check_len(self.cols, other.cols)?;
        let rows = self
            .dense
            .iter()
            .map(|a| {
                other
                    .dense
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| a.dot(b))
                    .map(|(k, _)| k)
                    .collect()
            })
            .collect();
        Self::from_rows(other.rows(), rows)
    }

    /// `e · selfᵀ`, i.e. the syndrome of `e`.
    pub fn syndrome(&self, e: &BinaryVector) -> Result<BinaryVector> {
        check_len(self.cols, e.len())?;
        let mut s = BinaryVector::zeros(self.rows());
        for (i, row) in self.sparse.iter().enumerate() {
            if row.iter().fold(false, |acc, &j| acc ^ e.get(j)) {
                s.set(i, true);
            }
        }
        Ok(s)
    }

    /// GF(2) row rank. Works on a scratch copy.
    pub fn rank(&self) -> usize {
        RowSpace::new(self).rank()
    }

    /// Whether `v` is a GF(2) combination of the rows of `self`, decided by
    /// comparing the rank with and without `v` appended.
    pub fn in_row_space(&self, v: &BinaryVector) -> Result<bool> {
        check_len(self.cols, v.len())?;
        let mut rows = self.dense.clone();
        rows.push(v.clone());
        Ok(eliminate(rows, self.cols).len() == self.rank())
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMatrix {}x{} [", self.rows(), self.cols)?;
        for row in &self.dense {
            writeln!(f, "  {row}")?;
        }
        write!(f, "]")
    }
}

/// Free-function form of [`BinaryMatrix::syndrome`].
pub fn syndrome(e: &BinaryVector, h: &BinaryMatrix) -> Result<BinaryVector> {
    h.syndrome(e)
}

/// Gaussian elimination to reduced row echelon form. Returns the nonzero rows
/// paired with their pivot columns, sorted by pivot.
fn eliminate(mut rows: Vec<BinaryVector>, cols: usize) -> Vec<(usize, BinaryVector)> {
    let mut pivots = Vec::new();
    for col in 0..cols {
        let next = pivots.len();
        if next == rows.len() {
            break;
        }
        let Some(offset) = rows[next..].iter().position(|r| r.get(col)) else {
            continue;
        };
        rows.swap(next, next + offset);
        let pivot = rows[next].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k != next && row.get(col) {
                *row ^= &pivot;
            }
        }
        pivots.push(col);
    }
    rows.truncate(pivots.len());
    pivots.into_iter().zip(rows).collect()
}

/// Reduced row-echelon basis of a matrix's row space, for repeated
/// membership queries against the same matrix.
#[derive(Clone, Debug)]
pub struct RowSpace {
    cols: usize,
    basis: Vec<(usize, BinaryVector)>,
}

impl RowSpace {
    pub fn new(m: &BinaryMatrix) -> Self {
        let basis = if m.rows() == 0 {
            Vec::new()
        } else {
            eliminate(m.dense.clone(), m.cols)
        };
        RowSpace {
            cols: m.cols,
            basis,
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &BinaryVector) -> Result<bool> {
        check_len(self.cols, v.len())?;
        let mut r = v.clone();
        for (pivot, row) in &self.basis {
            if r.get(*pivot) {
                r ^= row;
            }
        }
        Ok(r.is_zero())
    }
}

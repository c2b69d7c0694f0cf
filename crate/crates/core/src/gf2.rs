//! Bit-packed vectors and matrices over GF(2).
//!
//! Bits are stored in `u64` words, coordinate `i` at bit `i % 64` of word
//! `i / 64`. Bits past `len` are always zero, so word-wise comparisons and
//! popcounts are exact.

use std::fmt;

use rand::Rng;

use crate::error::{HcsError, Result};

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self::zeros(len);
        for i in 0..len {
            v.set(i, true);
        }
        v
    }

    /// Builds a vector of length `len <= 64` from the low bits of `mask`.
    pub fn from_u64(len: usize, mask: u64) -> Self {
        assert!(len <= WORD, "from_u64 needs len <= 64");
        let mut v = Self::zeros(len);
        if len > 0 {
            let keep = if len == WORD { u64::MAX } else { (1u64 << len) - 1 };
            v.words[0] = mask & keep;
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Parses a string of `0`/`1` characters, coordinate 0 first.
    pub fn parse_bits(s: &str) -> Result<Self> {
        let mut v = Self::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                other => {
                    return Err(HcsError::InvalidParameter(format!(
                        "bit string contains {other:?}"
                    )))
                }
            }
        }
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "xor of vectors with different lengths");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &BitVector) -> BitVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Inner product mod 2.
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len, "dot of vectors with different lengths");
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones & 1 == 1
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Low 64 bits as an integer; panics if the vector is longer than 64.
    pub fn to_u64(&self) -> u64 {
        assert!(self.len <= WORD, "to_u64 needs len <= 64, got {}", self.len);
        self.words.first().copied().unwrap_or(0)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn to_bools(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    /// Coordinates `range` as a new vector.
    pub fn slice(&self, start: usize, end: usize) -> BitVector {
        assert!(start <= end && end <= self.len);
        let mut out = BitVector::zeros(end - start);
        for i in start..end {
            if self.get(i) {
                out.set(i - start, true);
            }
        }
        out
    }

    pub fn concat(parts: &[&BitVector]) -> BitVector {
        let len = parts.iter().map(|p| p.len()).sum();
        let mut out = BitVector::zeros(len);
        let mut offset = 0;
        for part in parts {
            for i in part.iter_ones() {
                out.set(offset + i, true);
            }
            offset += part.len();
        }
        out
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> BitVector {
        let mut v = BitVector::zeros(len);
        for w in v.words.iter_mut() {
            *w = rng.random::<u64>();
        }
        v.clear_tail();
        v
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Lowercase hex with a `0x` prefix; coordinate 0 is the least
    /// significant bit. Leading zero nibbles are dropped (`0x0` for zero).
    pub fn to_hex(&self) -> String {
        let nibbles = self.len.div_ceil(4);
        let mut digits: Vec<char> = Vec::with_capacity(nibbles);
        for j in (0..nibbles).rev() {
            let mut nib = 0u32;
            for b in 0..4 {
                let i = 4 * j + b;
                if i < self.len && self.get(i) {
                    nib |= 1 << b;
                }
            }
            digits.push(char::from_digit(nib, 16).unwrap());
        }
        let trimmed: String = digits.into_iter().skip_while(|&c| c == '0').collect();
        if trimmed.is_empty() {
            "0x0".to_string()
        } else {
            format!("0x{trimmed}")
        }
    }

    pub fn from_hex(len: usize, s: &str) -> Result<BitVector> {
        let body = s
            .strip_prefix("0x")
            .ok_or_else(|| HcsError::InvalidParameter(format!("hex row {s:?} lacks 0x prefix")))?;
        if body.is_empty() {
            return Err(HcsError::InvalidParameter("empty hex row".into()));
        }
        let mut v = BitVector::zeros(len);
        for (j, c) in body.chars().rev().enumerate() {
            let nib = c
                .to_digit(16)
                .ok_or_else(|| HcsError::InvalidParameter(format!("bad hex digit {c:?}")))?;
            for b in 0..4 {
                if nib >> b & 1 == 1 {
                    let i = 4 * j + b;
                    if i >= len {
                        return Err(HcsError::InvalidParameter(format!(
                            "hex row {s} has bits beyond length {len}"
                        )));
                    }
                    v.set(i, true);
                }
            }
        }
        Ok(v)
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

/// Row-major dense matrix over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVector>,
}

/// Output of [`BitMatrix::rref`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub reduced: BitMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            rows: vec![BitVector::zeros(cols); rows],
        }
    }

    /// A matrix with no rows.
    pub fn empty(cols: usize) -> Self {
        Self::zeros(0, cols)
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i].set(i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        for r in &rows {
            if r.len() != cols {
                return Err(HcsError::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
        }
        Ok(Self { cols, rows })
    }

    /// Parses rows written as `0`/`1` strings; all rows must share a length.
    pub fn parse_rows(rows: &[&str]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let parsed = rows
            .iter()
            .map(|r| BitVector::parse_bits(r))
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(cols, parsed)
    }

    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        Self {
            cols,
            rows: (0..rows).map(|_| BitVector::random(cols, rng)).collect(),
        }
    }

    /// Uniformly random invertible `n x n` matrix, by rejection.
    pub fn random_full_rank<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        assert!(n >= 1, "random_full_rank needs n >= 1");
        loop {
            let m = Self::random(n, n, rng);
            if m.rank() == n {
                return m;
            }
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<BitVector> {
        self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value);
    }

    pub fn push_row(&mut self, row: BitVector) {
        assert_eq!(row.len(), self.cols);
        self.rows.push(row);
    }

    pub fn column(&self, c: usize) -> BitVector {
        let mut v = BitVector::zeros(self.nrows());
        for (r, row) in self.rows.iter().enumerate() {
            if row.get(c) {
                v.set(r, true);
            }
        }
        v
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.rows[r].weight()
    }

    pub fn col_weight(&self, c: usize) -> usize {
        self.rows.iter().filter(|row| row.get(c)).count()
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.nrows());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.iter_ones() {
                t.rows[c].set(r, true);
            }
        }
        t
    }

    /// `M x` over GF(2).
    pub fn mul_vec(&self, x: &BitVector) -> BitVector {
        assert_eq!(x.len(), self.cols, "mul_vec dimension mismatch");
        let mut out = BitVector::zeros(self.nrows());
        for (r, row) in self.rows.iter().enumerate() {
            if row.dot(x) {
                out.set(r, true);
            }
        }
        out
    }

    /// `x^T M`, i.e. the XOR of the rows selected by `x`.
    pub fn combine_rows(&self, x: &BitVector) -> BitVector {
        assert_eq!(x.len(), self.nrows(), "combine_rows dimension mismatch");
        let mut out = BitVector::zeros(self.cols);
        for r in x.iter_ones() {
            out.xor_assign(&self.rows[r]);
        }
        out
    }

    pub fn mul(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.nrows(), "matrix product dimension mismatch");
        let rows = self.rows.iter().map(|r| other.combine_rows(r)).collect();
        BitMatrix {
            cols: other.cols,
            rows,
        }
    }

    pub fn vstack(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        BitMatrix {
            cols: self.cols,
            rows,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVector::is_zero)
    }

    /// Reduced row-echelon form by Gauss-Jordan elimination.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivots = m.eliminate(&mut []);
        let rank = pivots.len();
        Rref {
            reduced: m,
            rank,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// In-place Gauss-Jordan. Row operations are mirrored on every vector in
    /// `companions` (one bit per row). Returns pivot columns.
    fn eliminate(&mut self, companions: &mut [&mut BitVector]) -> Vec<usize> {
        let nrows = self.nrows();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == nrows {
                break;
            }
            let Some(p) = (r..nrows).find(|&i| self.rows[i].get(c)) else {
                continue;
            };
            self.rows.swap(r, p);
            for comp in companions.iter_mut() {
                let (a, b) = (comp.get(r), comp.get(p));
                comp.set(r, b);
                comp.set(p, a);
            }
            let pivot_row = self.rows[r].clone();
            for i in 0..nrows {
                if i != r && self.rows[i].get(c) {
                    self.rows[i].xor_assign(&pivot_row);
                    for comp in companions.iter_mut() {
                        if comp.get(r) {
                            comp.flip(i);
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Some `x` with `M x = b`, free variables set to zero.
    pub fn solve(&self, b: &BitVector) -> Result<BitVector> {
        if b.len() != self.nrows() {
            return Err(HcsError::DimensionMismatch {
                expected: self.nrows(),
                found: b.len(),
            });
        }
        let mut m = self.clone();
        let mut rhs = b.clone();
        let pivots = m.eliminate(&mut [&mut rhs]);
        if (pivots.len()..m.nrows()).any(|i| rhs.get(i)) {
            return Err(HcsError::NoSolution);
        }
        let mut x = BitVector::zeros(self.cols);
        for (i, &c) in pivots.iter().enumerate() {
            x.set(c, rhs.get(i));
        }
        Ok(x)
    }

    pub fn invert(&self) -> Result<BitMatrix> {
        let n = self.nrows();
        if n != self.cols {
            return Err(HcsError::NotSquare {
                rows: n,
                cols: self.cols,
            });
        }
        // Eliminate on [M | I] packed side by side.
        let mut aug = BitMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for c in self.rows[i].iter_ones() {
                aug.rows[i].set(c, true);
            }
            aug.rows[i].set(n + i, true);
        }
        let pivots = aug.eliminate(&mut []);
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(HcsError::Singular);
        }
        let rows = aug.rows.iter().map(|r| r.slice(n, 2 * n)).collect();
        Ok(BitMatrix { cols: n, rows })
    }

    /// Basis of `{x : M x = 0}`, one basis vector per row.
    pub fn nullspace_basis(&self) -> BitMatrix {
        let Rref {
            reduced, pivots, ..
        } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = BitMatrix::empty(self.cols);
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = BitVector::unit(self.cols, f);
            for (i, &p) in pivots.iter().enumerate() {
                if reduced.rows[i].get(f) {
                    v.set(p, true);
                }
            }
            basis.rows.push(v);
        }
        basis
    }

    /// True when `v` lies in the row space.
    pub fn row_space_contains(&self, v: &BitVector) -> bool {
        self.transpose().solve(v).is_ok()
    }

    /// Hex rows as written to instance files.
    pub fn to_hex_rows(&self) -> Vec<String> {
        self.rows.iter().map(BitVector::to_hex).collect()
    }

    pub fn from_hex_rows(cols: usize, rows: &[String]) -> Result<BitMatrix> {
        let parsed = rows
            .iter()
            .map(|r| BitVector::from_hex(cols, r))
            .collect::<Result<Vec<_>>>()?;
        BitMatrix::from_rows(cols, parsed)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.nrows(), self.cols)?;
        for row in &self.rows {
            writeln!(f, "  {row}")?;
        }
        write!(f, "]")
    }
}

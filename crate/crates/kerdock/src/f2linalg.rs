//! Bit-packed dense linear algebra over F2.
//!
//! Rows are packed into `u64` words; all row operations are word-wise XOR.
//! Elimination uses deterministic pivoting (leftmost nonzero column, first
//! available row) so factorizations are reproducible run to run.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

const WORD_BITS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("inconsistent linear system")]
    Inconsistent,
    #[error("parse error: {0}")]
    Parse(String),
}

fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

/// Row vector over F2. Bits past `len` are kept zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        assert!(len >= 1, "BitVector length must be >= 1");
        BitVector { len, words: vec![0; words_for(len)] }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Bit `i` of `value` becomes component `i`.
    pub fn from_u64(value: u64, len: usize) -> Self {
        assert!(len >= 1 && len <= 64);
        let mut v = Self::zeros(len);
        v.words[0] = if len == 64 { value } else { value & ((1u64 << len) - 1) };
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len);
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len);
        let w = &mut self.words[i / WORD_BITS];
        if bit {
            *w |= 1u64 << (i % WORD_BITS);
        } else {
            *w &= !(1u64 << (i % WORD_BITS));
        }
    }

    pub fn flip(&mut self, i: usize) {
        let cur = self.get(i);
        self.set(i, !cur);
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "xor_assign length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Parity of the standard inner product.
    pub fn dot(&self, other: &BitVector) -> u8 {
        assert_eq!(self.len, other.len, "dot length mismatch");
        let mut acc = 0u64;
        for (a, b) in self.words.iter().zip(&other.words) {
            acc ^= a & b;
        }
        (acc.count_ones() & 1) as u8
    }

    /// Number of positions where both vectors are 1.
    pub fn overlap(&self, other: &BitVector) -> usize {
        assert_eq!(self.len, other.len);
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones() as usize).sum()
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn to_u64(&self) -> u64 {
        assert!(self.len <= 64);
        self.words[0]
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn concat(&self, other: &BitVector) -> BitVector {
        let mut v = BitVector::zeros(self.len + other.len);
        for i in 0..self.len {
            if self.get(i) {
                v.set(i, true);
            }
        }
        for i in 0..other.len {
            if other.get(i) {
                v.set(self.len + i, true);
            }
        }
        v
    }

    pub fn slice(&self, start: usize, len: usize) -> BitVector {
        assert!(start + len <= self.len);
        let mut v = BitVector::zeros(len);
        for i in 0..len {
            if self.get(start + i) {
                v.set(i, true);
            }
        }
        v
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.get(i))
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({})", self)
    }
}

impl FromStr for BitVector {
    type Err = LinAlgError;

    fn from_str(s: &str) -> Result<Self, LinAlgError> {
        let s = s.trim();
        if s.is_empty() {
            return Err(LinAlgError::Parse("empty bit string".into()));
        }
        let mut v = BitVector::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                _ => return Err(LinAlgError::Parse(format!("invalid bit character '{c}'"))),
            }
        }
        Ok(v)
    }
}

/// Dense matrix over F2, stored row-major with packed words per row.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    wpr: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be >= 1");
        let wpr = words_for(cols);
        BitMatrix { rows, cols, wpr, data: vec![0; rows * wpr] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: &[BitVector]) -> Self {
        assert!(!rows.is_empty());
        let cols = rows[0].len();
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "all rows must share the column count");
            m.set_row(i, r);
        }
        m
    }

    /// Parses rows of '0'/'1' characters, one row per line.
    pub fn parse_rows(text: &str) -> Result<Self, LinAlgError> {
        let rows: Vec<BitVector> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(BitVector::from_str)
            .collect::<Result<_, _>>()?;
        if rows.is_empty() {
            return Err(LinAlgError::Parse("no rows".into()));
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinAlgError::Parse("ragged rows".into()));
        }
        Ok(Self::from_rows(&rows))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols);
        (self.data[r * self.wpr + c / WORD_BITS] >> (c % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, bit: bool) {
        assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.wpr + c / WORD_BITS];
        if bit {
            *w |= 1u64 << (c % WORD_BITS);
        } else {
            *w &= !(1u64 << (c % WORD_BITS));
        }
    }

    pub fn row(&self, r: usize) -> BitVector {
        assert!(r < self.rows);
        BitVector {
            len: self.cols,
            words: self.data[r * self.wpr..(r + 1) * self.wpr].to_vec(),
        }
    }

    pub fn set_row(&mut self, r: usize, v: &BitVector) {
        assert!(r < self.rows && v.len() == self.cols);
        self.data[r * self.wpr..(r + 1) * self.wpr].copy_from_slice(&v.words);
    }

    fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.wpr..(r + 1) * self.wpr]
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for w in 0..self.wpr {
            self.data.swap(i * self.wpr + w, j * self.wpr + w);
        }
    }

    /// XORs row `src` into row `dst`.
    pub fn xor_row_into(&mut self, src: usize, dst: usize) {
        assert!(src != dst);
        let wpr = self.wpr;
        if src < dst {
            let (head, tail) = self.data.split_at_mut(dst * wpr);
            let src_row = &head[src * wpr..src * wpr + wpr];
            for (d, s) in tail[..wpr].iter_mut().zip(src_row) {
                *d ^= s;
            }
        } else {
            let (head, tail) = self.data.split_at_mut(src * wpr);
            let dst_row = &mut head[dst * wpr..dst * wpr + wpr];
            for (d, s) in dst_row.iter_mut().zip(&tail[..wpr]) {
                *d ^= s;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.rows)
    }

    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                if self.get(i, j) != self.get(j, i) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_permutation(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let mut seen = vec![false; self.cols];
        for r in 0..self.rows {
            let row = self.row(r);
            if row.weight() != 1 {
                return false;
            }
            let c = row.iter_ones().next().unwrap();
            if seen[c] {
                return false;
            }
            seen[c] = true;
        }
        true
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    pub fn add(&self, other: &BitMatrix) -> Result<BitMatrix, LinAlgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinAlgError::DimensionMismatch(format!(
                "{}x{} + {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a ^= b;
        }
        Ok(out)
    }

    /// Product over F2 (XOR accumulation of rows of `other`).
    pub fn mul(&self, other: &BitMatrix) -> Result<BitMatrix, LinAlgError> {
        if self.cols != other.rows {
            return Err(LinAlgError::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            let dst_start = r * out.wpr;
            for c in 0..self.cols {
                if self.get(r, c) {
                    let src = other.row_words(c);
                    for w in 0..out.wpr {
                        out.data[dst_start + w] ^= src[w];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix: `v * self`.
    pub fn vec_mul(&self, v: &BitVector) -> Result<BitVector, LinAlgError> {
        if v.len() != self.rows {
            return Err(LinAlgError::DimensionMismatch(format!(
                "vec len {} * {}x{}",
                v.len(),
                self.rows,
                self.cols
            )));
        }
        let mut out = BitVector::zeros(self.cols);
        for r in v.iter_ones() {
            let src = self.row_words(r);
            for w in 0..out.words.len() {
                out.words[w] ^= src[w];
            }
        }
        Ok(out)
    }

    /// F2 row rank by elimination (leftmost pivot column, first available row).
    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        let mut rank = 0;
        for c in 0..work.cols {
            let pivot = (rank..work.rows).find(|&r| work.get(r, c));
            let Some(p) = pivot else { continue };
            work.swap_rows(rank, p);
            for r in 0..work.rows {
                if r != rank && work.get(r, c) {
                    work.xor_row_into(rank, r);
                }
            }
            rank += 1;
            if rank == work.rows {
                break;
            }
        }
        rank
    }

    pub fn inverse(&self) -> Result<BitMatrix, LinAlgError> {
        if self.rows != self.cols {
            return Err(LinAlgError::DimensionMismatch(format!(
                "inverse of {}x{}",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut work = self.clone();
        let mut inv = BitMatrix::identity(n);
        for c in 0..n {
            let pivot = (c..n).find(|&r| work.get(r, c)).ok_or(LinAlgError::Singular)?;
            work.swap_rows(c, pivot);
            inv.swap_rows(c, pivot);
            for r in 0..n {
                if r != c && work.get(r, c) {
                    work.xor_row_into(c, r);
                    inv.xor_row_into(c, r);
                }
            }
        }
        Ok(inv)
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.rows, other.rows);
        let mut out = BitMatrix::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    out.set(r, c, true);
                }
            }
            for c in 0..other.cols {
                if other.get(r, c) {
                    out.set(r, self.cols + c, true);
                }
            }
        }
        out
    }

    pub fn vstack(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.cols);
        let mut out = BitMatrix::zeros(self.rows + other.rows, self.cols);
        out.data[..self.data.len()].copy_from_slice(&self.data);
        out.data[self.data.len()..].copy_from_slice(&other.data);
        out
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> BitMatrix {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        let mut out = BitMatrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                if self.get(r0 + r, c0 + c) {
                    out.set(r, c, true);
                }
            }
        }
        out
    }

    /// Assembles `[[a, b], [c, d]]`.
    pub fn from_blocks(a: &BitMatrix, b: &BitMatrix, c: &BitMatrix, d: &BitMatrix) -> BitMatrix {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        a.hstack(b).vstack(&c.hstack(d))
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            writeln!(f, "{}", self.row(r))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        write!(f, "{}", self)
    }
}

/// All solutions of `x * A = y`: a particular solution plus a basis of the
/// left null space of `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: BitVector,
    pub nullspace: Vec<BitVector>,
}

impl AffineSolution {
    /// Iterates over the full solution set (2^nullity elements).
    pub fn iter(&self) -> impl Iterator<Item = BitVector> + '_ {
        let k = self.nullspace.len();
        assert!(k < 63, "solution set too large to enumerate");
        (0u64..(1 << k)).map(move |mask| {
            let mut x = self.particular.clone();
            for (j, base) in self.nullspace.iter().enumerate() {
                if (mask >> j) & 1 == 1 {
                    x.xor_assign(base);
                }
            }
            x
        })
    }
}

/// Solves the row-vector system `x * a = y` over F2.
pub fn solve_affine(a: &BitMatrix, y: &BitVector) -> Result<AffineSolution, LinAlgError> {
    if y.len() != a.cols() {
        return Err(LinAlgError::DimensionMismatch(format!(
            "solve_affine: rhs len {} vs {} cols",
            y.len(),
            a.cols()
        )));
    }
    // Transpose to the column form A^T x^T = y^T and eliminate on [A^T | y^T].
    let n = a.rows();
    let at = a.transpose();
    let mut work = at.hstack(&BitMatrix::from_rows(&[y.clone()]).transpose());
    let mut pivot_col_of_row: Vec<Option<usize>> = vec![None; work.rows()];
    let mut rank = 0;
    for c in 0..n {
        let pivot = (rank..work.rows()).find(|&r| work.get(r, c));
        let Some(p) = pivot else { continue };
        work.swap_rows(rank, p);
        for r in 0..work.rows() {
            if r != rank && work.get(r, c) {
                work.xor_row_into(rank, r);
            }
        }
        pivot_col_of_row[rank] = Some(c);
        rank += 1;
    }
    // Inconsistent iff a zero row of A^T carries a 1 in the rhs column.
    for r in rank..work.rows() {
        if work.get(r, n) {
            return Err(LinAlgError::Inconsistent);
        }
    }
    let mut particular = BitVector::zeros(n);
    for r in 0..rank {
        let c = pivot_col_of_row[r].unwrap();
        if work.get(r, n) {
            particular.set(c, true);
        }
    }
    // Free columns parameterize the left null space.
    let pivot_cols: Vec<usize> = pivot_col_of_row.iter().flatten().copied().collect();
    let mut nullspace = Vec::new();
    for free in (0..n).filter(|c| !pivot_cols.contains(c)) {
        let mut basis = BitVector::zeros(n);
        basis.set(free, true);
        for r in 0..rank {
            if work.get(r, free) {
                basis.set(pivot_col_of_row[r].unwrap(), true);
            }
        }
        nullspace.push(basis);
    }
    Ok(AffineSolution { particular, nullspace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn random_matrix(rows: usize, cols: usize, rng: &mut impl Rng) -> BitMatrix {
        let mut m = BitMatrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, rng.random());
            }
        }
        m
    }

    fn random_invertible(n: usize, rng: &mut impl Rng) -> BitMatrix {
        loop {
            let m = random_matrix(n, n, rng);
            if m.rank() == n {
                return m;
            }
        }
    }

    /// Rank by brute-force row-span enumeration, for cross-checking.
    fn rank_by_span(m: &BitMatrix) -> usize {
        assert!(m.rows() <= 16);
        let mut span = std::collections::HashSet::new();
        for mask in 0u32..(1 << m.rows()) {
            let mut v = BitVector::zeros(m.cols());
            for r in 0..m.rows() {
                if (mask >> r) & 1 == 1 {
                    v.xor_assign(&m.row(r));
                }
            }
            span.insert(v);
        }
        span.len().trailing_zeros() as usize
    }

    #[test]
    fn mul_identity() {
        let i2 = BitMatrix::identity(2);
        assert_eq!(i2.mul(&i2).unwrap(), i2);
    }

    #[test]
    fn mul_transvection_involution() {
        let t = BitMatrix::parse_rows("11\n01").unwrap();
        assert_eq!(t.mul(&t).unwrap(), BitMatrix::identity(2));
    }

    #[test]
    fn mul_reference_w_times_w_inv() {
        // 4x4 trace Gram matrix of GF(16) with x^4+x+1 and its inverse.
        let w = BitMatrix::parse_rows("0001\n0010\n0100\n1001").unwrap();
        let w_inv = BitMatrix::parse_rows("1001\n0010\n0100\n1000").unwrap();
        assert_eq!(w.mul(&w_inv).unwrap(), BitMatrix::identity(4));
        assert_eq!(w.inverse().unwrap(), w_inv);
    }

    #[test]
    fn rank_basics() {
        assert_eq!(BitMatrix::zeros(3, 3).rank(), 0);
        assert_eq!(BitMatrix::identity(5).rank(), 5);
    }

    #[test]
    fn rank_matches_span_enumeration() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for _ in 0..50 {
            let rows = rng.random_range(1..=6);
            let cols = rng.random_range(1..=6);
            let m = random_matrix(rows, cols, &mut rng);
            assert_eq!(m.rank(), rank_by_span(&m), "matrix:\n{m}");
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..20 {
            let m = random_invertible(8, &mut rng);
            let inv = m.inverse().unwrap();
            assert_eq!(m.mul(&inv).unwrap(), BitMatrix::identity(8));
            assert_eq!(inv.mul(&m).unwrap(), BitMatrix::identity(8));
        }
    }

    #[test]
    fn inverse_singular_rejected() {
        let mut m = BitMatrix::identity(3);
        m.set(2, 2, false);
        assert_eq!(m.inverse(), Err(LinAlgError::Singular));
    }

    #[test]
    fn solve_identity_and_zero() {
        let y = BitVector::from_str("101").unwrap();
        let sol = solve_affine(&BitMatrix::identity(3), &y).unwrap();
        assert_eq!(sol.particular, y);
        assert!(sol.nullspace.is_empty());

        let zero = BitMatrix::zeros(3, 3);
        let sol = solve_affine(&zero, &BitVector::zeros(3)).unwrap();
        assert_eq!(sol.nullspace.len(), 3);
        assert!(sol.particular.is_zero());
        assert!(solve_affine(&zero, &y).is_err());
    }

    #[test]
    fn solve_random_consistent_systems() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        for _ in 0..40 {
            let rows = rng.random_range(1..=7);
            let cols = rng.random_range(1..=7);
            let a = random_matrix(rows, cols, &mut rng);
            let x = BitVector::from_bools(&(0..rows).map(|_| rng.random()).collect::<Vec<_>>());
            let y = a.vec_mul(&x).unwrap();
            let sol = solve_affine(&a, &y).unwrap();
            assert_eq!(a.vec_mul(&sol.particular).unwrap(), y);
            for basis in &sol.nullspace {
                assert!(a.vec_mul(basis).unwrap().is_zero());
            }
            // every enumerated solution re-substitutes
            for s in sol.iter().take(16) {
                assert_eq!(a.vec_mul(&s).unwrap(), y);
            }
        }
    }

    #[test]
    fn text_roundtrip() {
        let m = BitMatrix::parse_rows("0101\n1110\n0011").unwrap();
        let text = m.to_string();
        assert_eq!(BitMatrix::parse_rows(&text).unwrap(), m);
    }

    proptest! {
        #[test]
        fn mul_associative(seed in 0u64..1000) {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let a = random_matrix(4, 5, &mut rng);
            let b = random_matrix(5, 3, &mut rng);
            let c = random_matrix(3, 6, &mut rng);
            let left = a.mul(&b).unwrap().mul(&c).unwrap();
            let right = a.mul(&b.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn inverse_both_sides(seed in 0u64..200) {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let n = 1 + (seed as usize % 6);
            let m = random_invertible(n, &mut rng);
            let inv = m.inverse().unwrap();
            prop_assert_eq!(m.mul(&inv).unwrap(), BitMatrix::identity(n));
            prop_assert_eq!(inv.mul(&m).unwrap(), BitMatrix::identity(n));
        }
    }
}

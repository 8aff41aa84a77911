//! Bit-packed linear algebra over GF(2).

use std::fmt;

use thiserror::Error;

use crate::complex::Simplex;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("shape mismatch: {left_rows}x{left_cols} times {right_rows}x{right_cols}")]
    Shape { left_rows: usize, left_cols: usize, right_rows: usize, right_cols: usize },
}

/// Fixed-length bit vector packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn from_ones<I: IntoIterator<Item = usize>>(len: usize, ones: I) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
            v.toggle(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        if value {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn toggle(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        self.xor_from(other, 0);
    }

    /// XOR restricted to words `start..`; callers know `other` is zero below.
    fn xor_from(&mut self, other: &BitVec, start: usize) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words[start..].iter_mut().zip(&other.words[start..]) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// First set bit at position `>= from`.
    pub fn next_one(&self, from: usize) -> Option<usize> {
        if from >= self.len {
            return None;
        }
        let mut w = from / 64;
        let mut word = self.words[w] & (!0u64 << (from % 64));
        loop {
            if word != 0 {
                return Some(w * 64 + word.trailing_zeros() as usize);
            }
            w += 1;
            if w == self.words.len() {
                return None;
            }
            word = self.words[w];
        }
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(w * 64 + bit)
            })
        })
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVec) -> bool {
        self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum::<u32>() % 2 == 1
    }

    /// Bits `start..start + len` as a new vector.
    pub fn slice(&self, start: usize, len: usize) -> BitVec {
        BitVec::from_ones(len, self.ones().filter(|&i| i >= start && i < start + len).map(|i| i - start))
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect();
        write!(f, "BitVec({s})")
    }
}

/// Incrementally built echelon basis. Every stored row has a distinct pivot,
/// its lowest set bit, and pivots are only taken among the first `limit`
/// positions. Bits past `limit` ride along, which turns elimination into
/// kernel tracking when they hold an identity block.
#[derive(Clone, Debug)]
pub struct Echelon {
    len: usize,
    limit: usize,
    rows: Vec<BitVec>,
    pivot_row: Vec<u32>,
}

const NO_ROW: u32 = u32::MAX;

impl Echelon {
    pub fn new(len: usize) -> Self {
        Self::with_limit(len, len)
    }

    pub fn with_limit(len: usize, limit: usize) -> Self {
        assert!(limit <= len);
        Echelon { len, limit, rows: Vec::new(), pivot_row: vec![NO_ROW; limit] }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    /// Reduces `v` against the basis; returns the surviving pivot position, or
    /// `None` when the first `limit` bits cancel.
    pub fn reduce(&self, v: &mut BitVec) -> Option<usize> {
        debug_assert_eq!(v.len(), self.len);
        let mut from = 0;
        while let Some(p) = v.next_one(from) {
            if p >= self.limit {
                return None;
            }
            match self.pivot_row[p] {
                NO_ROW => return Some(p),
                r => {
                    v.xor_from(&self.rows[r as usize], p / 64);
                    from = p + 1;
                }
            }
        }
        None
    }

    /// Adds `v` to the basis. Returns `None` if it was independent, otherwise
    /// the reduced vector (zero on the first `limit` bits).
    pub fn insert(&mut self, mut v: BitVec) -> Option<BitVec> {
        match self.reduce(&mut v) {
            Some(p) => {
                self.pivot_row[p] = self.rows.len() as u32;
                self.rows.push(v);
                None
            }
            None => Some(v),
        }
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w).is_none()
    }
}

/// Rank of a family of vectors.
pub fn rank_of<'a, I: IntoIterator<Item = &'a BitVec>>(len: usize, vectors: I) -> usize {
    let mut e = Echelon::new(len);
    for v in vectors {
        e.insert(v.clone());
    }
    e.rank()
}

/// Basis of the relations among `vectors`: each returned vector (over the
/// input indices) selects a subfamily summing to zero.
pub fn kernel_basis(len: usize, vectors: &[BitVec]) -> Vec<BitVec> {
    let m = vectors.len();
    let mut e = Echelon::with_limit(len + m, len);
    let mut kernel = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        let mut aug = BitVec::zeros(len + m);
        for b in v.ones() {
            aug.set(b, true);
        }
        aug.set(len + i, true);
        if let Some(rel) = e.insert(aug) {
            kernel.push(rel.slice(len, m));
        }
    }
    kernel
}

/// Dense matrix over GF(2), stored row-major, with simplex labels on the
/// columns (domain basis) and rows (codomain basis).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMatrixGF2 {
    rows: usize,
    cols: usize,
    data: Vec<BitVec>,
    row_labels: Vec<Simplex>,
    col_labels: Vec<Simplex>,
}

impl ChainMatrixGF2 {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ChainMatrixGF2 { rows, cols, data: vec![BitVec::zeros(cols); rows], row_labels: Vec::new(), col_labels: Vec::new() }
    }

    /// Builds a matrix from the support of each column.
    pub fn from_columns(rows: usize, columns: &[Vec<usize>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, support) in columns.iter().enumerate() {
            for &r in support {
                m.data[r].toggle(c);
            }
        }
        m
    }

    pub fn with_labels(mut self, row_labels: Vec<Simplex>, col_labels: Vec<Simplex>) -> Self {
        debug_assert!(row_labels.is_empty() || row_labels.len() == self.rows);
        debug_assert!(col_labels.is_empty() || col_labels.len() == self.cols);
        self.row_labels = row_labels;
        self.col_labels = col_labels;
        self
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Empty when the codomain is the augmentation (the empty simplex).
    pub fn row_labels(&self) -> &[Simplex] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[Simplex] {
        &self.col_labels
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].get(c)
    }

    pub fn row(&self, r: usize) -> &BitVec {
        &self.data[r]
    }

    pub fn column(&self, c: usize) -> BitVec {
        BitVec::from_ones(self.rows, (0..self.rows).filter(|&r| self.data[r].get(c)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BitVec::is_zero)
    }

    pub fn rank(&self) -> usize {
        rank_of(self.cols, &self.data)
    }

    pub fn mul(&self, other: &ChainMatrixGF2) -> Result<ChainMatrixGF2, Gf2Error> {
        if self.cols != other.rows {
            return Err(Gf2Error::Shape {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: other.rows,
                right_cols: other.cols,
            });
        }
        let mut out = ChainMatrixGF2::zeros(self.rows, other.cols);
        for (r, row) in self.data.iter().enumerate() {
            for k in row.ones() {
                out.data[r].xor_assign(&other.data[k]);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn naive_rank(mut m: Vec<Vec<bool>>) -> usize {
        let cols = m.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..m.len()).find(|&r| m[r][c]) else { continue };
            m.swap(rank, p);
            let pivot = m[rank].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r != rank && row[c] {
                    for (x, y) in row.iter_mut().zip(&pivot) {
                        *x ^= y;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn bit_ops() {
        let mut v = BitVec::zeros(130);
        v.set(3, true);
        v.set(64, true);
        v.set(129, true);
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![3, 64, 129]);
        assert_eq!(v.next_one(4), Some(64));
        assert_eq!(v.next_one(130), None);
        assert_eq!(v.count_ones(), 3);
        let w = BitVec::from_ones(130, [64, 100]);
        assert!(v.dot(&w));
        assert_eq!(v.slice(60, 10).ones().collect::<Vec<_>>(), vec![4]);
    }

    #[test]
    fn kernel_of_triangle_boundary() {
        let edges = [BitVec::from_ones(3, [0, 1]), BitVec::from_ones(3, [1, 2]), BitVec::from_ones(3, [0, 2])];
        let k = kernel_basis(3, &edges);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].ones().collect::<Vec<_>>(), vec![0, 1, 2]);
    }

    #[test]
    fn matrix_product_shape_check() {
        let a = ChainMatrixGF2::from_columns(2, &[vec![0], vec![0, 1]]);
        let b = ChainMatrixGF2::from_columns(3, &[vec![0, 1]]);
        assert!(a.mul(&b).is_err());
        let c = ChainMatrixGF2::from_columns(2, &[vec![0, 1]]);
        let p = a.mul(&c).unwrap();
        assert_eq!((p.rows(), p.cols()), (2, 1));
        assert!(p.get(1, 0) && !p.get(0, 0));
    }

    proptest! {
        #[test]
        fn rank_matches_naive(seed in any::<u64>(), rows in 1usize..40, cols in 1usize..90) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let dense: Vec<Vec<bool>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_bool(0.3)).collect()).collect();
            let vecs: Vec<BitVec> = dense
                .iter()
                .map(|r| BitVec::from_ones(cols, r.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i)))
                .collect();
            let rank = rank_of(cols, &vecs);
            prop_assert_eq!(rank, naive_rank(dense));
            let kernel = kernel_basis(cols, &vecs);
            prop_assert_eq!(kernel.len(), rows - rank);
            for rel in &kernel {
                let mut sum = BitVec::zeros(cols);
                for i in rel.ones() {
                    sum.xor_assign(&vecs[i]);
                }
                prop_assert!(sum.is_zero());
            }
        }
    }
}

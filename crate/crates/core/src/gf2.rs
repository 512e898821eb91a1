//! Packed binary vectors and matrices over GF(2).
//!
//! Bits are stored little-endian inside 64-bit words: bit `i` of a vector
//! lives in word `i / 64` at position `i % 64`. Unused high bits of the last
//! word are always zero, which keeps equality and popcount exact.

use std::fmt;
use std::ops::{BitXor, BitXorAssign};

use crate::{Error, Result};

const WORD_BITS: usize = 64;

#[inline]
pub(crate) fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// A fixed-length binary vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitWord {
    len: usize,
    words: Vec<u64>,
}

impl BitWord {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// Builds a word from `0`/`1` values. Any nonzero entry counts as a one.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut w = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b != 0 {
                w.set(i, true);
            }
        }
        w
    }

    /// Parses a string of `0` and `1` characters, ignoring whitespace and `_`.
    pub fn from_str_bits(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '_')
            .map(|c| match c {
                '0' => Ok(0u8),
                '1' => Ok(1u8),
                other => Err(Error::Parse {
                    line: 1,
                    msg: format!("invalid bit character {other:?}"),
                }),
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(Self::from_bits(&bits))
    }

    pub(crate) fn from_words(len: usize, mut words: Vec<u64>) -> Self {
        words.resize(words_for(len), 0);
        let mut w = Self { len, words };
        w.clear_tail();
        w
    }

    pub fn unit(len: usize, pos: usize) -> Self {
        let mut w = Self::zeros(len);
        w.set(pos, true);
        w
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitWord) -> bool {
        assert_eq!(self.len, other.len, "dot product length mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    /// Number of positions where `self` and `other` differ.
    pub fn distance(&self, other: &BitWord) -> usize {
        assert_eq!(self.len, other.len, "distance length mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// Indices of the set bits in increasing order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rem = w;
            std::iter::from_fn(move || {
                if rem == 0 {
                    return None;
                }
                let tz = rem.trailing_zeros() as usize;
                rem &= rem - 1;
                Some(wi * WORD_BITS + tz)
            })
        })
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Debug for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitWord({self})")
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl BitXorAssign<&BitWord> for BitWord {
    fn bitxor_assign(&mut self, rhs: &BitWord) {
        assert_eq!(self.len, rhs.len, "xor length mismatch");
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
    }
}

impl BitXor<&BitWord> for &BitWord {
    type Output = BitWord;

    fn bitxor(self, rhs: &BitWord) -> BitWord {
        let mut out = self.clone();
        out ^= rhs;
        out
    }
}

/// A dense binary matrix stored row-major, one packed row per `stride` words.
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
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows. All rows must share one length; an empty
    /// row list needs `cols` to be given explicitly through [`BitMatrix::zeros`].
    pub fn from_rows(rows: &[BitWord]) -> Result<Self> {
        let cols = rows.first().map_or(0, BitWord::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {r} has length {}, expected {cols}",
                    row.len()
                )));
            }
            m.row_words_mut(r).copy_from_slice(row.words());
        }
        Ok(m)
    }

    /// Builds a matrix from rows of `0`/`1` values.
    pub fn from_bit_rows(rows: &[&[u8]]) -> Result<Self> {
        let words: Vec<BitWord> = rows.iter().map(|r| BitWord::from_bits(r)).collect();
        Self::from_rows(&words)
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
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "matrix index out of range");
        (self.data[r * self.stride + c / WORD_BITS] >> (c % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols, "matrix index out of range");
        let mask = 1u64 << (c % WORD_BITS);
        let w = &mut self.data[r * self.stride + c / WORD_BITS];
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub(crate) fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BitWord {
        BitWord::from_words(self.cols, self.row_words(r).to_vec())
    }

    pub fn column(&self, c: usize) -> BitWord {
        let mut w = BitWord::zeros(self.rows);
        for r in 0..self.rows {
            if self.get(r, c) {
                w.set(r, true);
            }
        }
        w
    }

    pub fn row_iter(&self) -> impl Iterator<Item = BitWord> + '_ {
        (0..self.rows).map(|r| self.row(r))
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        let (s, d) = (src * self.stride, dst * self.stride);
        for i in 0..self.stride {
            self.data[d + i] ^= self.data[s + i];
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.stride {
            self.data.swap(a * self.stride + i, b * self.stride + i);
        }
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row(r).ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// `M · vᵀ`: one output bit per row, the parity of `row & v`.
    pub fn mat_vec(&self, v: &BitWord) -> Result<BitWord> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "matrix has {} columns but vector has length {}",
                self.cols,
                v.len()
            )));
        }
        let mut out = BitWord::zeros(self.rows);
        for r in 0..self.rows {
            let parity = self
                .row_words(r)
                .iter()
                .zip(v.words())
                .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
                & 1;
            if parity == 1 {
                out.set(r, true);
            }
        }
        Ok(out)
    }

    /// Row vector times matrix, `u · M`: XOR of the rows selected by `u`.
    pub fn vec_mat(&self, u: &BitWord) -> Result<BitWord> {
        if u.len() != self.rows {
            return Err(Error::Dimension(format!(
                "matrix has {} rows but vector has length {}",
                self.rows,
                u.len()
            )));
        }
        let mut out = vec![0u64; self.stride];
        for r in u.ones() {
            for (o, w) in out.iter_mut().zip(self.row_words(r)) {
                *o ^= w;
            }
        }
        Ok(BitWord::from_words(self.cols, out))
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = BitMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            let prod = rhs.vec_mat(&self.row(r))?;
            out.row_words_mut(r).copy_from_slice(prod.words());
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    /// Reduced row echelon form in place. Returns the pivot columns, one per
    /// nonzero row, in increasing order. Each row operation is mirrored on
    /// `track` when given, which must have the same number of rows.
    fn rref_tracked(&mut self, mut track: Option<&mut BitMatrix>) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..self.cols {
            if next == self.rows {
                break;
            }
            let Some(p) = (next..self.rows).find(|&r| self.get(r, c)) else {
                continue;
            };
            self.swap_rows(p, next);
            if let Some(t) = track.as_deref_mut() {
                t.swap_rows(p, next);
            }
            for r in 0..self.rows {
                if r != next && self.get(r, c) {
                    self.xor_row_into(next, r);
                    if let Some(t) = track.as_deref_mut() {
                        t.xor_row_into(next, r);
                    }
                }
            }
            pivots.push(c);
            next += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_tracked(None).len()
    }

    /// A basis of the right null space, as the rows of an `(n − k) × n`
    /// matrix `H` with `H · selfᵀ = 0`. `self` must have full row rank.
    pub fn nullspace_basis(&self) -> Result<BitMatrix> {
        let mut r = self.clone();
        let pivots = r.rref_tracked(None);
        if pivots.len() != self.rows {
            return Err(Error::RankDeficient {
                expected: self.rows,
                rank: pivots.len(),
            });
        }
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut h = BitMatrix::zeros(free.len(), self.cols);
        for (hr, &f) in free.iter().enumerate() {
            h.set(hr, f, true);
            for (j, &p) in pivots.iter().enumerate() {
                if r.get(j, f) {
                    h.set(hr, p, true);
                }
            }
        }
        Ok(h)
    }

    /// An `n × k` matrix `X` with `self · X = I_k`. Rows of `X` outside the
    /// pivot columns of `self` are zero, so for a systematic `[I | P]` the
    /// result is `[I ; 0]`.
    pub fn right_inverse(&self) -> Result<BitMatrix> {
        let k = self.rows;
        let mut r = self.clone();
        let mut t = BitMatrix::identity(k);
        let pivots = r.rref_tracked(Some(&mut t));
        if pivots.len() != k {
            return Err(Error::RankDeficient {
                expected: k,
                rank: pivots.len(),
            });
        }
        let mut x = BitMatrix::zeros(self.cols, k);
        for (j, &p) in pivots.iter().enumerate() {
            let row = t.row_words(j).to_vec();
            x.row_words_mut(p).copy_from_slice(&row);
        }
        Ok(x)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {}", self.row(r))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_word(rng: &mut impl Rng, len: usize) -> BitWord {
        BitWord::from_bits(
            &(0..len)
                .map(|_| rng.random::<bool>() as u8)
                .collect::<Vec<_>>(),
        )
    }

    fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> BitMatrix {
        let rs: Vec<BitWord> = (0..rows).map(|_| random_word(rng, cols)).collect();
        BitMatrix::from_rows(&rs).unwrap()
    }

    fn random_full_rank(rng: &mut impl Rng, rows: usize, cols: usize) -> BitMatrix {
        loop {
            let m = random_matrix(rng, rows, cols);
            if m.rank() == rows {
                return m;
            }
        }
    }

    // Rank by plain elimination on Vec<Vec<bool>>, independent of the packed path.
    fn rank_oracle(m: &BitMatrix) -> usize {
        let mut rows: Vec<Vec<bool>> = (0..m.rows())
            .map(|r| (0..m.cols()).map(|c| m.get(r, c)).collect())
            .collect();
        let mut rank = 0;
        for c in 0..m.cols() {
            if let Some(p) = (rank..rows.len()).find(|&r| rows[r][c]) {
                rows.swap(rank, p);
                let pivot = rows[rank].clone();
                for (r, row) in rows.iter_mut().enumerate() {
                    if r != rank && row[c] {
                        for (x, y) in row.iter_mut().zip(&pivot) {
                            *x ^= *y;
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    #[test]
    fn identity_mat_vec() {
        let v = BitWord::from_str_bits("1011").unwrap();
        assert_eq!(BitMatrix::identity(4).mat_vec(&v).unwrap(), v);
    }

    #[test]
    fn zero_vector_maps_to_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = random_matrix(&mut rng, 7, 130);
        assert!(m.mat_vec(&BitWord::zeros(130)).unwrap().is_zero());
    }

    #[test]
    fn mat_vec_dimension_mismatch() {
        let m = BitMatrix::identity(4);
        assert!(matches!(
            m.mat_vec(&BitWord::zeros(5)),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn self_xor_is_zero() {
        let w = BitWord::from_str_bits("1101_0011_1").unwrap();
        assert!((&w ^ &w).is_zero());
        assert_eq!((&w ^ &w).len(), 9);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BitMatrix::identity(8).rank(), 8);
        assert_eq!(BitMatrix::zeros(5, 9).rank(), 0);
        let dup = BitMatrix::from_bit_rows(&[
            &[1, 0, 1, 1],
            &[0, 1, 1, 0],
            &[1, 0, 1, 1],
            &[1, 1, 0, 1],
            &[0, 1, 1, 0],
        ])
        .unwrap();
        // distinct rows 1011, 0110, 1101 with 1011 ^ 0110 = 1101
        assert_eq!(dup.rank(), 2);
        assert_eq!(rank_oracle(&dup), 2);
    }

    #[test]
    fn rank_matches_oracle_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let rows = rng.random_range(1..12);
            let cols = rng.random_range(1..80);
            let m = random_matrix(&mut rng, rows, cols);
            assert_eq!(m.rank(), rank_oracle(&m));
        }
    }

    #[test]
    fn single_parity_check_nullspace() {
        let g = BitMatrix::from_bit_rows(&[&[1, 0, 1], &[0, 1, 1]]).unwrap();
        let h = g.nullspace_basis().unwrap();
        assert_eq!(h, BitMatrix::from_bit_rows(&[&[1, 1, 1]]).unwrap());
    }

    #[test]
    fn padded_identity_nullspace_selects_zero_columns() {
        let g = BitMatrix::from_bit_rows(&[&[1, 0, 0, 0, 0], &[0, 1, 0, 0, 0]]).unwrap();
        let h = g.nullspace_basis().unwrap();
        let expect =
            BitMatrix::from_bit_rows(&[&[0, 0, 1, 0, 0], &[0, 0, 0, 1, 0], &[0, 0, 0, 0, 1]])
                .unwrap();
        assert_eq!(h, expect);
    }

    #[test]
    fn random_nullspace_is_orthogonal_and_full_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let g = random_full_rank(&mut rng, 5, 10);
            let h = g.nullspace_basis().unwrap();
            assert_eq!(h.rows(), 5);
            assert_eq!(rank_oracle(&h), 5);
            assert!(h.mul(&g.transpose()).unwrap().is_zero());
        }
    }

    #[test]
    fn rank_deficient_errors_name_the_rank() {
        let g = BitMatrix::from_bit_rows(&[&[1, 1, 0], &[1, 1, 0]]).unwrap();
        let err = g.nullspace_basis().unwrap_err();
        assert!(matches!(
            err,
            Error::RankDeficient {
                expected: 2,
                rank: 1
            }
        ));
        assert!(err.to_string().contains("rank 1"));
        assert!(g.right_inverse().is_err());
    }

    #[test]
    fn systematic_right_inverse_is_projection() {
        let g = BitMatrix::from_bit_rows(&[&[1, 0, 0, 1, 1], &[0, 1, 0, 0, 1], &[0, 0, 1, 1, 0]])
            .unwrap();
        let x = g.right_inverse().unwrap();
        let mut expect = BitMatrix::zeros(5, 3);
        for i in 0..3 {
            expect.set(i, i, true);
        }
        assert_eq!(x, expect);
    }

    #[test]
    fn repetition_code_right_inverse() {
        let g = BitMatrix::from_bit_rows(&[&[1, 1, 1, 1]]).unwrap();
        let x = g.right_inverse().unwrap();
        assert_eq!(x.column(0), BitWord::from_str_bits("1000").unwrap());
        assert_eq!(g.mul(&x).unwrap(), BitMatrix::identity(1));
    }

    #[test]
    fn right_inverse_round_trips_messages() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = random_full_rank(&mut rng, 20, 77);
        let x = g.right_inverse().unwrap();
        assert_eq!(g.mul(&x).unwrap(), BitMatrix::identity(20));
        for _ in 0..1000 {
            let u = random_word(&mut rng, 20);
            let c = g.vec_mat(&u).unwrap();
            assert_eq!(x.vec_mat(&c).unwrap(), u);
        }
    }

    #[test]
    fn ones_lists_set_bits() {
        let mut w = BitWord::zeros(200);
        for i in [0, 63, 64, 130, 199] {
            w.set(i, true);
        }
        assert_eq!(w.ones().collect::<Vec<_>>(), vec![0, 63, 64, 130, 199]);
        assert_eq!(w.count_ones(), 5);
    }

    proptest! {
        #[test]
        fn mat_vec_is_linear(seed in any::<u64>(), rows in 1usize..40, cols in 1usize..150) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_matrix(&mut rng, rows, cols);
            let a = random_word(&mut rng, cols);
            let b = random_word(&mut rng, cols);
            let lhs = m.mat_vec(&(&a ^ &b)).unwrap();
            let rhs = &m.mat_vec(&a).unwrap() ^ &m.mat_vec(&b).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn mat_vec_matches_transpose_vec_mat(seed in any::<u64>(), rows in 1usize..30, cols in 1usize..100) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_matrix(&mut rng, rows, cols);
            let v = random_word(&mut rng, cols);
            prop_assert_eq!(m.mat_vec(&v).unwrap(), m.transpose().vec_mat(&v).unwrap());
        }
    }
}

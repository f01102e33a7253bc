//! Bit-packed GF(2) linear algebra and weight distributions of `C(H) = {x : Hx = 0}`.
//!
//! Vectors and matrix rows are stored as little-endian `u64` words: bit `j`
//! lives in word `j / 64` at position `j % 64`. Storage bits past the logical
//! length are always zero, so popcounts and equality never need masking.
//!
//! The text format used for matrices is a header line `"m n"` followed by `m`
//! lines of `n` characters in `{0,1}`; character `j` of line `i` is `H[i][j]`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

#[inline]
fn weight_of(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

#[inline]
fn parity_of_and(a: &[u64], b: &[u64]) -> bool {
    let ones: u32 = a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum();
    ones & 1 == 1
}

/// A binary vector of fixed length.
#[derive(Clone, PartialEq, Eq, Hash)]
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

    /// Builds a vector of length `len <= 64` from the low bits of `bits`.
    pub fn from_u64(len: usize, bits: u64) -> Self {
        assert!(len <= WORD_BITS, "from_u64 needs len <= 64");
        let mask = if len == WORD_BITS { u64::MAX } else { (1u64 << len) - 1 };
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = bits & mask;
        }
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (j, &b) in bits.iter().enumerate() {
            v.set(j, b);
        }
        v
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

    pub fn get(&self, j: usize) -> bool {
        assert!(j < self.len);
        (self.words[j / WORD_BITS] >> (j % WORD_BITS)) & 1 == 1
    }

    pub fn set(&mut self, j: usize, value: bool) {
        assert!(j < self.len);
        let mask = 1u64 << (j % WORD_BITS);
        if value {
            self.words[j / WORD_BITS] |= mask;
        } else {
            self.words[j / WORD_BITS] &= !mask;
        }
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        weight_of(&self.words)
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVector) -> bool {
        assert_eq!(self.len, other.len);
        parity_of_and(&self.words, &other.words)
    }

    /// Low 64 bits, for vectors of length at most 64.
    pub fn as_u64(&self) -> u64 {
        assert!(self.len <= WORD_BITS);
        self.words.first().copied().unwrap_or(0)
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.len {
            f.write_str(if self.get(j) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut v = BitVector::zeros(s.len());
        for (j, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(j, true),
                other => return Err(Error::Parse(format!("unexpected character {other:?} in bit string"))),
            }
        }
        Ok(v)
    }
}

/// An `m x n` binary matrix, bit-packed by rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    /// All-zero `rows x cols` matrix. Panics if `cols == 0`.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(cols >= 1, "a parity-check matrix needs at least one column");
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut h = Self::zeros(n, n);
        for i in 0..n {
            h.set(i, i, true);
        }
        h
    }

    pub fn from_rows(cols: usize, rows: &[BitVector]) -> Result<Self> {
        let mut h = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::LengthMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            h.row_words_mut(i).copy_from_slice(r.words());
        }
        Ok(h)
    }

    /// Matrix number `index` in the enumeration order of the ensemble:
    /// bit `i * n + j` of `index` (LSB first) is `H[i][j]`.
    pub fn from_index(rows: usize, cols: usize, index: u64) -> Self {
        assert!(rows * cols <= 64, "index enumeration needs m*n <= 64");
        let mut h = Self::zeros(rows, cols);
        let mask = if cols == 64 { u64::MAX } else { (1u64 << cols) - 1 };
        for i in 0..rows {
            let shift = i * cols;
            h.data[i * h.stride] = if shift >= 64 { 0 } else { (index >> shift) & mask };
        }
        h
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    fn row_words_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.stride..(i + 1) * self.stride]
    }

    pub fn row(&self, i: usize) -> BitVector {
        BitVector {
            len: self.cols,
            words: self.row_words(i).to_vec(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.rows && j < self.cols);
        (self.data[i * self.stride + j / WORD_BITS] >> (j % WORD_BITS)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        assert!(i < self.rows && j < self.cols);
        let mask = 1u64 << (j % WORD_BITS);
        let w = &mut self.data[i * self.stride + j / WORD_BITS];
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    /// Column `j` as an integer whose bit `i` is `H[i][j]` (needs `m <= 64`).
    pub fn column_bits(&self, j: usize) -> u64 {
        assert!(self.rows <= 64);
        (0..self.rows).fold(0u64, |acc, i| acc | (u64::from(self.get(i, j)) << i))
    }

    /// Reduced row echelon form with leftmost-first pivots.
    /// Returns the reduced rows (only the first `rank` are nonzero) and the pivot columns.
    fn reduced_echelon(&self) -> (Vec<u64>, Vec<usize>) {
        let stride = self.stride;
        let mut a = self.data.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..self.cols {
            if r == self.rows {
                break;
            }
            let (wi, bit) = (col / WORD_BITS, 1u64 << (col % WORD_BITS));
            let Some(p) = (r..self.rows).find(|&i| a[i * stride + wi] & bit != 0) else {
                continue;
            };
            if p != r {
                for k in 0..stride {
                    a.swap(p * stride + k, r * stride + k);
                }
            }
            for i in 0..self.rows {
                if i != r && a[i * stride + wi] & bit != 0 {
                    for k in wi..stride {
                        let v = a[r * stride + k];
                        a[i * stride + k] ^= v;
                    }
                }
            }
            pivots.push(col);
            r += 1;
        }
        (a, pivots)
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "{}", self.row(i))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", self.row(i))?;
        }
        f.write_str("]")
    }
}

impl FromStr for BitMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty matrix text".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad header {header:?}"))))
            .collect::<Result<_>>()?;
        let [m, n] = dims[..] else {
            return Err(Error::Parse(format!("header must be \"m n\", got {header:?}")));
        };
        if n == 0 {
            return Err(Error::Parse("matrix needs n >= 1".into()));
        }
        let rows: Vec<BitVector> = lines.by_ref().take(m).map(str::parse).collect::<Result<_>>()?;
        if rows.len() != m {
            return Err(Error::Parse(format!("expected {m} rows, found {}", rows.len())));
        }
        if lines.next().is_some() {
            return Err(Error::Parse(format!("more than {m} rows")));
        }
        BitMatrix::from_rows(n, &rows)
    }
}

/// GF(2) row rank.
pub fn rank(h: &BitMatrix) -> usize {
    h.reduced_echelon().1.len()
}

/// A basis of `C(H)`, one codeword per row (`(n - rank) x n`).
pub fn nullspace_basis(h: &BitMatrix) -> BitMatrix {
    let n = h.cols;
    let (rref, pivots) = h.reduced_echelon();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..n).filter(|&j| !is_pivot[j]).collect();
    let mut basis = BitMatrix::zeros(free.len(), n);
    let (stride, wf) = (h.stride, |j: usize| (j / WORD_BITS, 1u64 << (j % WORD_BITS)));
    for (b, &f) in free.iter().enumerate() {
        basis.set(b, f, true);
        let (wi, bit) = wf(f);
        for (r, &p) in pivots.iter().enumerate() {
            if rref[r * stride + wi] & bit != 0 {
                basis.set(b, p, true);
            }
        }
    }
    basis
}

/// `true` iff `Hx = 0`, i.e. `x` is a codeword of `C(H)`.
pub fn syndrome_is_zero(h: &BitMatrix, x: &BitVector) -> Result<bool> {
    if x.len() != h.cols {
        return Err(Error::LengthMismatch {
            expected: h.cols,
            found: x.len(),
        });
    }
    Ok((0..h.rows).all(|i| !parity_of_and(h.row_words(i), x.words())))
}

/// Largest code dimension `k = n - rank(H)` the enumerator will walk (`2^k` codewords).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationLimit(u32);

impl EnumerationLimit {
    pub const DEFAULT: Self = Self(28);

    /// Panics above 63, where codeword counts stop fitting the walk counter.
    pub fn new(max_dimension: u32) -> Self {
        assert!(max_dimension <= 63, "enumeration limit must be <= 63");
        Self(max_dimension)
    }

    pub fn max_dimension(self) -> u32 {
        self.0
    }
}

impl Default for EnumerationLimit {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Exact weight distribution `A_0..A_n` of one code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightDistribution {
    counts: Vec<BigUint>,
}

impl WeightDistribution {
    /// Wraps raw counts `A_0..A_n`; requires `counts[0] == 1`.
    pub fn from_counts(counts: Vec<BigUint>) -> Result<Self> {
        if counts.len() < 2 {
            return Err(Error::InvalidParams("weight distribution needs n >= 1".into()));
        }
        if !counts[0].is_one() {
            return Err(Error::InvalidParams("A_0 must be 1".into()));
        }
        Ok(Self { counts })
    }

    pub fn from_u64_counts(counts: &[u64]) -> Result<Self> {
        Self::from_counts(counts.iter().map(|&c| BigUint::from(c)).collect())
    }

    pub fn n(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    pub fn count(&self, w: usize) -> &BigUint {
        &self.counts[w]
    }

    /// Number of codewords, `2^(n - rank)`.
    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// Number of nonzero codewords.
    pub fn nonzero_total(&self) -> BigUint {
        self.counts[1..].iter().sum()
    }
}

impl fmt::Display for WeightDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (w, c) in self.counts.iter().enumerate() {
            if w > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

/// Weight distribution of `C(H)` with the default enumeration limit.
pub fn weight_distribution(h: &BitMatrix) -> Result<WeightDistribution> {
    weight_distribution_with_limit(h, EnumerationLimit::DEFAULT)
}

pub fn weight_distribution_with_limit(h: &BitMatrix, limit: EnumerationLimit) -> Result<WeightDistribution> {
    let counts = weight_counts(h, limit)?;
    WeightDistribution::from_u64_counts(&counts)
}

/// Counts codewords by weight with a Gray-code walk over the nullspace basis:
/// each step XORs a single basis row into the running codeword.
pub fn weight_counts(h: &BitMatrix, limit: EnumerationLimit) -> Result<Vec<u64>> {
    let basis = nullspace_basis(h);
    let k = basis.rows;
    if k > limit.0 as usize {
        return Err(Error::DimensionTooLarge {
            dimension: k,
            limit: limit.0,
        });
    }
    let n = h.cols;
    let mut counts = vec![0u64; n + 1];
    counts[0] = 1;
    let steps = 1u64 << k;
    if basis.stride == 1 {
        let rows: Vec<u64> = (0..k).map(|b| basis.data[b]).collect();
        let mut word = 0u64;
        for step in 1..steps {
            word ^= rows[step.trailing_zeros() as usize];
            counts[word.count_ones() as usize] += 1;
        }
    } else {
        let mut word = vec![0u64; basis.stride];
        for step in 1..steps {
            let b = step.trailing_zeros() as usize;
            for (acc, v) in word.iter_mut().zip(basis.row_words(b)) {
                *acc ^= v;
            }
            counts[weight_of(&word)] += 1;
        }
    }
    Ok(counts)
}

/// Counts codewords by weight with a dynamic program over columns, tracking
/// `(weight, syndrome)` pairs. Costs `O(n^2 2^m)` and never builds a basis,
/// so it is the cheaper route when `m` is small relative to `n - m`.
pub fn syndrome_weight_counts(h: &BitMatrix) -> Vec<u64> {
    let (m, n) = (h.rows, h.cols);
    assert!(m <= 24, "syndrome table limited to m <= 24");
    let states = 1usize << m;
    let mut table = vec![0u64; (n + 1) * states];
    table[0] = 1;
    for j in 0..n {
        let col = h.column_bits(j) as usize;
        for w in (0..=j).rev() {
            let (lo, hi) = table.split_at_mut((w + 1) * states);
            let src = &lo[w * states..];
            let dst = &mut hi[..states];
            for s in 0..states {
                dst[s ^ col] += src[s];
            }
        }
    }
    (0..=n).map(|w| table[w * states]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(s: &str) -> BitMatrix {
        s.parse().unwrap()
    }

    fn wd(h: &BitMatrix) -> Vec<u64> {
        weight_counts(h, EnumerationLimit::DEFAULT).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&BitMatrix::zeros(2, 3)), 0);
        assert_eq!(rank(&mat("2 3\n100\n010")), 2);
        assert_eq!(rank(&mat("2 3\n110\n110")), 1);
    }

    #[test]
    fn nullspace_examples() {
        let b = nullspace_basis(&mat("2 3\n110\n011"));
        assert_eq!(b.rows(), 1);
        assert_eq!(b.row(0).to_string(), "111");

        let full = nullspace_basis(&BitMatrix::zeros(2, 3));
        assert_eq!(full.rows(), 3);
        assert_eq!(rank(&full), 3);

        assert_eq!(nullspace_basis(&BitMatrix::identity(3)).rows(), 0);
    }

    #[test]
    fn weight_distribution_examples() {
        assert_eq!(wd(&mat("2 3\n110\n011")), vec![1, 0, 0, 1]);
        assert_eq!(wd(&mat("2 3\n100\n010")), vec![1, 1, 0, 0]);
        assert_eq!(wd(&BitMatrix::zeros(2, 4)), vec![1, 4, 6, 4, 1]);
    }

    #[test]
    fn syndrome_examples() {
        let h = mat("2 3\n110\n011");
        assert!(syndrome_is_zero(&h, &"111".parse().unwrap()).unwrap());
        assert!(!syndrome_is_zero(&h, &"100".parse().unwrap()).unwrap());
        assert!(syndrome_is_zero(&h, &BitVector::zeros(3)).unwrap());
        assert_eq!(
            syndrome_is_zero(&h, &BitVector::zeros(4)),
            Err(Error::LengthMismatch { expected: 3, found: 4 })
        );
    }

    #[test]
    fn dimension_limit_is_enforced() {
        let h = BitMatrix::zeros(1, 12);
        let err = weight_counts(&h, EnumerationLimit::new(10)).unwrap_err();
        assert_eq!(
            err,
            Error::DimensionTooLarge {
                dimension: 12,
                limit: 10
            }
        );
        assert!(weight_counts(&h, EnumerationLimit::new(12)).is_ok());
    }

    #[test]
    fn wide_matrix_uses_multiword_rows() {
        // 1 x 70 single parity check on the first and last column
        let mut h = BitMatrix::zeros(1, 70);
        h.set(0, 0, true);
        h.set(0, 69, true);
        let mut h2 = BitMatrix::zeros(68, 70);
        for i in 0..68 {
            h2.set(i, i + 1, true);
        }
        let stacked = BitMatrix::from_rows(
            70,
            &[h.row(0)]
                .into_iter()
                .chain((0..68).map(|i| h2.row(i)))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        assert_eq!(rank(&stacked), 69);
        // the only nonzero codeword is e_0 + e_69
        let mut expected = vec![0u64; 71];
        expected[0] = 1;
        expected[2] = 1;
        assert_eq!(wd(&stacked), expected);
    }

    #[test]
    fn syndrome_dp_matches_gray_walk() {
        for idx in 0..(1u64 << 12) {
            let h = BitMatrix::from_index(3, 4, idx);
            assert_eq!(syndrome_weight_counts(&h), wd(&h), "{h:?}");
        }
    }

    #[test]
    fn text_format_roundtrip() {
        let h = mat("3 5\n10110\n01011\n00000\n");
        assert_eq!(h.to_string(), "3 5\n10110\n01011\n00000\n");
        assert_eq!(h.to_string().parse::<BitMatrix>().unwrap(), h);
        assert!("2 3\n101".parse::<BitMatrix>().is_err());
        assert!("1 3\n1021".parse::<BitMatrix>().is_err());
        assert!("1 3\n1011".parse::<BitMatrix>().is_err());
        assert_eq!("0 4".parse::<BitMatrix>().unwrap().rows(), 0);
    }

    #[test]
    fn from_index_is_row_major_lsb_first() {
        // bit 0 -> H[0][0], bit 3 -> H[1][0] for n = 3
        let h = BitMatrix::from_index(2, 3, 0b1001);
        assert!(h.get(0, 0) && h.get(1, 0));
        assert_eq!(h.row(0).to_string(), "100");
        assert_eq!(h.row(1).to_string(), "100");
    }

    #[test]
    fn weight_distribution_rejects_bad_counts() {
        assert!(WeightDistribution::from_u64_counts(&[0, 1]).is_err());
        assert!(WeightDistribution::from_u64_counts(&[1]).is_err());
        let w = WeightDistribution::from_u64_counts(&[1, 3, 3, 1]).unwrap();
        assert_eq!(w.total(), BigUint::from(8u32));
    }
}

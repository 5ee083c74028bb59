//! Dense GF(2) linear algebra over bit-packed rows.
//!
//! Column `c` of a row lives in word `c / 64` at bit `c % 64`. Bits past
//! `cols` in the last word of each row are kept at zero so that whole-word
//! comparisons are exact.

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(cols: usize) -> usize {
    cols.div_ceil(WORD)
}

/// Dense GF(2) matrix, row-major with 64-bit packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

/// Output of [`BitMatrix::rref_with_transform`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    /// The reduced row echelon form, same shape as the input.
    pub rref: BitMatrix,
    /// Invertible `rows x rows` matrix with `elim * input == rref`.
    pub elim: BitMatrix,
    /// Pivot column of each nonzero row of `rref`, increasing.
    pub pivots: Vec<usize>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        BitMatrix { rows, cols, stride, data: vec![0; rows * stride] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows of 0/1 values. All rows must share a length.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::Shape(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (j, &b) in row.iter().enumerate() {
                match b {
                    0 => {}
                    1 => m.set(i, j, true),
                    _ => return Err(Error::Parse(format!("entry ({i},{j}) is {b}, not a bit"))),
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

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        (self.data[r * self.stride + c / WORD] >> (c % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.stride + c / WORD];
        let mask = 1u64 << (c % WORD);
        if v {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    /// Packed words of row `r`.
    #[inline]
    pub fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    /// Row `r` unpacked to 0/1 values.
    pub fn row(&self, r: usize) -> Vec<u8> {
        (0..self.cols).map(|c| self.get(r, c) as u8).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn row_is_zero(&self, r: usize) -> bool {
        self.row_words(r).iter().all(|&w| w == 0)
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_words(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.data.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    /// `row[dst] ^= row[src]`.
    #[inline]
    pub fn xor_row(&mut self, dst: usize, src: usize) {
        debug_assert_ne!(dst, src);
        let s = self.stride;
        for w in 0..s {
            let v = self.data[src * s + w];
            self.data[dst * s + w] ^= v;
        }
    }

    /// Appends a row of 0/1 values.
    pub fn push_row(&mut self, row: &[u8]) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::Shape(format!("row length {} != cols {}", row.len(), self.cols)));
        }
        self.data.extend(std::iter::repeat_n(0, self.stride));
        self.rows += 1;
        let r = self.rows - 1;
        for (c, &b) in row.iter().enumerate() {
            if b & 1 == 1 {
                self.set(r, c, true);
            }
        }
        Ok(())
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

    /// GF(2) product `self * other`.
    pub fn matmul(&self, other: &BitMatrix) -> Result<BitMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "matmul {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = BitMatrix::zeros(self.rows, other.cols);
        let s = out.stride;
        for i in 0..self.rows {
            for t in 0..self.cols {
                if self.get(i, t) {
                    let src = other.row_words(t);
                    let dst = &mut out.data[i * s..(i + 1) * s];
                    for (d, &w) in dst.iter_mut().zip(src) {
                        *d ^= w;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix, `v * self`.
    pub fn vec_mul(&self, v: &[u8]) -> Result<Vec<u8>> {
        if v.len() != self.rows {
            return Err(Error::Shape(format!("vector length {} != rows {}", v.len(), self.rows)));
        }
        let mut acc = vec![0u64; self.stride];
        for (r, &b) in v.iter().enumerate() {
            if b & 1 == 1 {
                for (a, &w) in acc.iter_mut().zip(self.row_words(r)) {
                    *a ^= w;
                }
            }
        }
        Ok(unpack(&acc, self.cols))
    }

    /// Whether `self · vᵀ` is zero, i.e. `v` passes every row as a parity check.
    pub fn annihilates(&self, v: &[u8]) -> bool {
        if v.len() != self.cols {
            return false;
        }
        let packed = pack(v);
        (0..self.rows).all(|r| {
            let ones: u32 = self.row_words(r).iter().zip(&packed).map(|(a, b)| (a & b).count_ones()).sum();
            ones.is_multiple_of(2)
        })
    }

    /// Returns the matrix whose column `j` is column `source[j]` of `self`.
    pub fn select_columns(&self, source: &[usize]) -> Result<BitMatrix> {
        let mut out = BitMatrix::zeros(self.rows, source.len());
        for (j, &c) in source.iter().enumerate() {
            if c >= self.cols {
                return Err(Error::Shape(format!("column {c} out of range {}", self.cols)));
            }
            for r in 0..self.rows {
                if self.get(r, c) {
                    out.set(r, j, true);
                }
            }
        }
        Ok(out)
    }

    /// Reduces to RREF while tracking the row operations.
    ///
    /// Pivots are taken at the leftmost remaining nonzero column, from the
    /// topmost candidate row. A forward pass clears entries below each pivot,
    /// then back-substitution clears entries above.
    pub fn rref_with_transform(&self) -> Rref {
        let mut a = self.clone();
        let mut e = BitMatrix::identity(self.rows);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| a.get(i, c)) else {
                continue;
            };
            a.swap_rows(r, p);
            e.swap_rows(r, p);
            for i in r + 1..self.rows {
                if a.get(i, c) {
                    a.xor_row(i, r);
                    e.xor_row(i, r);
                }
            }
            pivots.push(c);
            r += 1;
        }
        for (pr, &pc) in pivots.iter().enumerate().rev() {
            for i in 0..pr {
                if a.get(i, pc) {
                    a.xor_row(i, pr);
                    e.xor_row(i, pr);
                }
            }
        }
        Rref { rref: a, elim: e, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref_with_transform().pivots.len()
    }

    /// True when `self` is in reduced row echelon form.
    pub fn is_rref(&self) -> bool {
        let mut last: Option<usize> = None;
        let mut seen_zero = false;
        for r in 0..self.rows {
            let lead = (0..self.cols).find(|&c| self.get(r, c));
            match lead {
                None => seen_zero = true,
                Some(c) => {
                    if seen_zero || last.is_some_and(|l| c <= l) {
                        return false;
                    }
                    if (0..self.rows).any(|i| i != r && self.get(i, c)) {
                        return false;
                    }
                    last = Some(c);
                }
            }
        }
        true
    }

    pub fn invert(&self) -> Result<BitMatrix> {
        if self.rows != self.cols {
            return Err(Error::Shape(format!("cannot invert {}x{}", self.rows, self.cols)));
        }
        let red = self.rref_with_transform();
        if red.pivots.len() != self.rows {
            return Err(Error::Singular);
        }
        Ok(red.elim)
    }

    /// Whether `self` and `other` span the same row space.
    pub fn rowspan_equal(&self, other: &BitMatrix) -> Result<bool> {
        if self.cols != other.cols {
            return Err(Error::Shape(format!(
                "rowspan comparison of {} and {} columns",
                self.cols, other.cols
            )));
        }
        let a = self.rref_with_transform();
        let b = other.rref_with_transform();
        if a.pivots != b.pivots {
            return Ok(false);
        }
        let k = a.pivots.len();
        Ok((0..k).all(|r| a.rref.row_words(r) == b.rref.row_words(r)))
    }

    /// Solves `x * self == target`. `Ok(None)` means `target` is outside the row space.
    ///
    /// Requires full row rank so the solution is unique.
    pub fn solve_right(&self, target: &[u8]) -> Result<Option<Vec<u8>>> {
        if target.len() != self.cols {
            return Err(Error::Shape(format!(
                "target length {} != cols {}",
                target.len(),
                self.cols
            )));
        }
        let red = self.rref_with_transform();
        if red.pivots.len() != self.rows {
            return Err(Error::Validation("solve_right needs full row rank".into()));
        }
        // In RREF coordinates the pivot entries of the target are the coefficients.
        let y: Vec<u8> = red.pivots.iter().map(|&p| target[p] & 1).collect();
        if red.rref.vec_mul(&y)? != target.iter().map(|b| b & 1).collect::<Vec<_>>() {
            return Ok(None);
        }
        Ok(Some(red.elim.vec_mul(&y)?))
    }

    /// Text form: `rows cols` header, then one line of `0`/`1` per row.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                s.push(if self.get(r, c) { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<BitMatrix> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty matrix text".into()))?;
        let dims: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad header token {t:?}"))))
            .collect::<Result<_>>()?;
        let [rows, cols] = dims[..] else {
            return Err(Error::Parse(format!("header {header:?} is not 'rows cols'")));
        };
        let mut m = BitMatrix::zeros(rows, cols);
        for r in 0..rows {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing row {r} of {rows}")))?;
            if line.chars().count() != cols {
                return Err(Error::Parse(format!("row {r} has {} characters, expected {cols}", line.len())));
            }
            for (c, ch) in line.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => m.set(r, c, true),
                    _ => return Err(Error::Parse(format!("row {r}: unexpected character {ch:?}"))),
                }
            }
        }
        if lines.next().is_some() {
            return Err(Error::Parse("trailing lines after matrix".into()));
        }
        Ok(m)
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            for c in 0..self.cols {
                f.write_str(if self.get(r, c) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Packs 0/1 values into 64-bit words.
pub fn pack(bits: &[u8]) -> Vec<u64> {
    let mut out = vec![0u64; words_for(bits.len())];
    for (i, &b) in bits.iter().enumerate() {
        if b & 1 == 1 {
            out[i / WORD] |= 1 << (i % WORD);
        }
    }
    out
}

pub fn unpack(words: &[u64], len: usize) -> Vec<u8> {
    (0..len).map(|i| ((words[i / WORD] >> (i % WORD)) & 1) as u8).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn m(rows: &[&str]) -> BitMatrix {
        let rows: Vec<Vec<u8>> =
            rows.iter().map(|r| r.bytes().map(|b| b - b'0').collect()).collect();
        BitMatrix::from_rows(&rows).unwrap()
    }

    fn random(rng: &mut impl Rng, rows: usize, cols: usize) -> BitMatrix {
        let mut a = BitMatrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                a.set(r, c, rng.random());
            }
        }
        a
    }

    fn random_invertible(rng: &mut impl Rng, n: usize) -> BitMatrix {
        loop {
            let a = random(rng, n, n);
            if a.rank() == n {
                return a;
            }
        }
    }

    /// Plain elimination on unpacked rows, independent of the packed code path.
    fn naive_rank(a: &BitMatrix) -> usize {
        let mut rows = a.to_rows();
        let mut rank = 0;
        for c in 0..a.cols() {
            if let Some(p) = (rank..rows.len()).find(|&i| rows[i][c] == 1) {
                rows.swap(rank, p);
                let pivot = rows[rank].clone();
                for (i, row) in rows.iter_mut().enumerate() {
                    if i != rank && row[c] == 1 {
                        for (x, y) in row.iter_mut().zip(&pivot) {
                            *x ^= y;
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    fn naive_matmul(a: &BitMatrix, b: &BitMatrix) -> BitMatrix {
        let mut out = BitMatrix::zeros(a.rows(), b.cols());
        for i in 0..a.rows() {
            for j in 0..b.cols() {
                let mut acc = false;
                for t in 0..a.cols() {
                    acc ^= a.get(i, t) & b.get(t, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    #[test]
    fn identity_product() {
        let g = m(&["11100000", "00011100", "00000011"]);
        assert_eq!(BitMatrix::identity(3).matmul(&g).unwrap(), g);
    }

    #[test]
    fn kernel_is_self_inverse() {
        let f = m(&["10", "11"]);
        assert_eq!(f.matmul(&f).unwrap(), BitMatrix::identity(2));
        assert_eq!(f.invert().unwrap(), f);
    }

    #[test]
    fn matmul_shape_error() {
        let a = BitMatrix::zeros(2, 3);
        assert!(matches!(a.matmul(&a), Err(Error::Shape(_))));
    }

    #[test]
    fn row_swap_reduces_swapped_repetition_generator() {
        // G with its first two rows exchanged reduces back by one row swap.
        let gp = m(&["00011100", "11100000", "00000011"]);
        let red = gp.rref_with_transform();
        assert_eq!(red.elim, m(&["010", "100", "001"]));
        assert_eq!(red.rref, m(&["11100000", "00011100", "00000011"]));
        assert_eq!(red.pivots, vec![0, 3, 6]);
        assert_eq!(red.elim.matmul(&gp).unwrap(), red.rref);
    }

    #[test]
    fn rref_of_rref_is_noop() {
        let a = m(&["1010", "0110", "0000"]);
        let red = a.rref_with_transform();
        assert_eq!(red.rref, a);
        assert_eq!(red.elim, BitMatrix::identity(3));
        assert_eq!(red.pivots, vec![0, 1]);
    }

    #[test]
    fn random_full_rank_rref_transform() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut done = 0;
        while done < 50 {
            let a = random(&mut rng, 5, 8);
            if a.rank() < 5 {
                continue;
            }
            let red = a.rref_with_transform();
            assert_eq!(naive_matmul(&red.elim, &a), red.rref);
            assert_eq!(naive_rank(&red.elim), 5);
            assert!(red.rref.is_rref());
            done += 1;
        }
    }

    #[test]
    fn invert_cases() {
        assert_eq!(BitMatrix::identity(6).invert().unwrap(), BitMatrix::identity(6));
        let f = m(&["10", "11"]);
        let f2 = kron(&f, &f);
        let f3 = kron(&f2, &f);
        assert_eq!(f3.invert().unwrap(), f3);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let a = random_invertible(&mut rng, 8);
            let inv = a.invert().unwrap();
            assert_eq!(naive_matmul(&a, &inv), BitMatrix::identity(8));
        }
        assert_eq!(m(&["11", "11"]).invert(), Err(Error::Singular));
        assert!(matches!(BitMatrix::zeros(2, 3).invert(), Err(Error::Shape(_))));
    }

    fn kron(a: &BitMatrix, b: &BitMatrix) -> BitMatrix {
        let mut out = BitMatrix::zeros(a.rows() * b.rows(), a.cols() * b.cols());
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                if a.get(i, j) {
                    for p in 0..b.rows() {
                        for q in 0..b.cols() {
                            out.set(i * b.rows() + p, j * b.cols() + q, b.get(p, q));
                        }
                    }
                }
            }
        }
        out
    }

    /// Every vector in the row space, by enumerating all combinations.
    fn span(a: &BitMatrix) -> std::collections::BTreeSet<Vec<u8>> {
        (0u32..1 << a.rows())
            .map(|mask| {
                let v: Vec<u8> = (0..a.rows()).map(|i| ((mask >> i) & 1) as u8).collect();
                a.vec_mul(&v).unwrap()
            })
            .collect()
    }

    #[test]
    fn rowspan_equal_cases() {
        let g = m(&["11100000", "00011100", "00000011"]);
        let swapped = m(&["00011100", "11100000", "00000011"]);
        assert!(g.rowspan_equal(&swapped).unwrap());
        let flipped = m(&["11100000", "00011100", "00000001"]);
        assert_eq!(span(&g) == span(&flipped), g.rowspan_equal(&flipped).unwrap());
        assert!(!g.rowspan_equal(&flipped).unwrap());
        assert!(matches!(g.rowspan_equal(&BitMatrix::zeros(3, 7)), Err(Error::Shape(_))));
    }

    #[test]
    fn solve_right_cases() {
        let g = m(&["11100000", "00011100", "00000011"]);
        assert_eq!(g.solve_right(&g.row(0)).unwrap(), Some(vec![1, 0, 0]));
        for mask in 0u8..8 {
            let msg: Vec<u8> = (0..3).map(|i| (mask >> i) & 1).collect();
            let c = g.vec_mul(&msg).unwrap();
            assert_eq!(g.solve_right(&c).unwrap(), Some(msg));
        }
        let even = m(&["1100"]);
        assert_eq!(even.solve_right(&[1, 1, 1, 1]).unwrap(), None);
        assert!(matches!(even.solve_right(&[1, 1]), Err(Error::Shape(_))));
    }

    #[test]
    fn text_format() {
        let a = m(&["101", "011"]);
        assert_eq!(a.to_text(), "2 3\n101\n011\n");
        assert_eq!(BitMatrix::from_text(&a.to_text()).unwrap(), a);
        assert!(BitMatrix::from_text("2 3\n101\n").is_err());
        assert!(BitMatrix::from_text("1 3\n1x1\n").is_err());
    }

    #[test]
    fn high_bits_stay_clear() {
        let mut a = BitMatrix::zeros(3, 70);
        a.set(0, 69, true);
        a.set(1, 69, true);
        a.xor_row(1, 0);
        assert!(a.row_is_zero(1));
        let t = a.transpose().transpose();
        assert_eq!(t, a);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn elim_times_input_is_rref(rows in 1usize..=64, cols in 1usize..=128, seed: u64) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random(&mut rng, rows, cols);
            let red = a.rref_with_transform();
            prop_assert_eq!(red.elim.matmul(&a).unwrap(), red.rref.clone());
            prop_assert!(red.rref.is_rref());
            prop_assert_eq!(red.pivots.len(), naive_rank(&a));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn invert_is_involutive(n in 1usize..=24, seed: u64) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_invertible(&mut rng, n);
            prop_assert_eq!(a.invert().unwrap().invert().unwrap(), a);
        }

        #[test]
        fn rowspan_equal_is_an_equivalence(k in 1usize..=6, n in 6usize..=20, seed: u64) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let base = loop {
                let b = random(&mut rng, k, n);
                if b.rank() == k { break b; }
            };
            let a = random_invertible(&mut rng, k).matmul(&base).unwrap();
            let b = random_invertible(&mut rng, k).matmul(&base).unwrap();
            let c = random_invertible(&mut rng, k).matmul(&base).unwrap();
            prop_assert!(a.rowspan_equal(&a).unwrap());
            prop_assert_eq!(a.rowspan_equal(&b).unwrap(), b.rowspan_equal(&a).unwrap());
            prop_assert!(a.rowspan_equal(&b).unwrap() && b.rowspan_equal(&c).unwrap());
            prop_assert!(a.rowspan_equal(&c).unwrap());
        }
    }
}

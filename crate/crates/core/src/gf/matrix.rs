use std::fmt;

/// Dense GF(2) matrix with bit-packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_row = cols.div_ceil(64);
        Gf2Matrix {
            rows,
            cols,
            words_per_row,
            data: vec![0; rows * words_per_row],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Gf2Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows of 0/1 values.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Gf2Matrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged rows");
            for (j, &b) in r.iter().enumerate() {
                if b != 0 {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn words_per_row(&self) -> usize {
        self.words_per_row
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        (self.data[r * self.words_per_row + c / 64] >> (c % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        let w = &mut self.data[r * self.words_per_row + c / 64];
        if v {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        let v = self.get(r, c);
        self.set(r, c, !v);
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.words_per_row..(r + 1) * self.words_per_row]
    }

    /// Row as 0/1 values.
    pub fn row_bits(&self, r: usize) -> Vec<u8> {
        (0..self.cols).map(|c| u8::from(self.get(r, c))).collect()
    }

    /// `row[dst] ^= row[src]`.
    #[inline]
    pub fn xor_row_into(&mut self, src: usize, dst: usize) {
        let w = self.words_per_row;
        if src == dst {
            self.row_mut(dst).fill(0);
            return;
        }
        let (s, d) = (src * w, dst * w);
        for i in 0..w {
            self.data[d + i] ^= self.data[s + i];
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let w = self.words_per_row;
        for i in 0..w {
            self.data.swap(a * w + i, b * w + i);
        }
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row(r).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn transpose(&self) -> Gf2Matrix {
        let mut t = Gf2Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Gf2Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self.get(r, k) {
                    let w = out.words_per_row;
                    for i in 0..w {
                        out.data[r * w + i] ^= other.data[k * w + i];
                    }
                }
            }
        }
        out
    }

    /// Row vector times matrix: `bits * self`, `bits.len() == rows`.
    pub fn vec_mul(&self, bits: &[u8]) -> Vec<u8> {
        assert_eq!(bits.len(), self.rows);
        let mut acc = vec![0u64; self.words_per_row];
        for (r, &b) in bits.iter().enumerate() {
            if b != 0 {
                for (a, w) in acc.iter_mut().zip(self.row(r)) {
                    *a ^= w;
                }
            }
        }
        (0..self.cols)
            .map(|c| ((acc[c / 64] >> (c % 64)) & 1) as u8)
            .collect()
    }

    /// `self * bits^T`, i.e. the syndrome when `self` is a parity-check matrix.
    pub fn mul_vec(&self, bits: &[u8]) -> Vec<u8> {
        assert_eq!(bits.len(), self.cols);
        let packed = pack_bits(bits);
        (0..self.rows)
            .map(|r| {
                let ones: u32 = self
                    .row(r)
                    .iter()
                    .zip(&packed)
                    .map(|(a, b)| (a & b).count_ones())
                    .sum();
                (ones & 1) as u8
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn rank(&self) -> usize {
        rref(self, None).rank
    }

    /// Submatrix made of the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Gf2Matrix {
        let mut out = Gf2Matrix::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                if self.get(r, c) {
                    out.set(r, j, true);
                }
            }
        }
        out
    }

    /// Vertical concatenation.
    pub fn stack(&self, other: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Gf2Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            words_per_row: self.words_per_row,
            data,
        }
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let s: String = (0..self.cols)
                .map(|c| if self.get(r, c) { '1' } else { '.' })
                .collect();
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Packs 0/1 values into little-endian words.
pub(crate) fn pack_bits(bits: &[u8]) -> Vec<u64> {
    let mut out = vec![0u64; bits.len().div_ceil(64)];
    for (i, &b) in bits.iter().enumerate() {
        if b != 0 {
            out[i / 64] |= 1 << (i % 64);
        }
    }
    out
}

/// Reduced row-echelon form together with its rank and pivot columns.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: Gf2Matrix,
    pub rank: usize,
    /// Pivot column of row `i`, listed in the order the columns were visited.
    pub pivots: Vec<usize>,
}

/// Gauss-Jordan elimination visiting columns in `column_order` (all columns
/// in natural order when `None`). A column that is dependent on the columns
/// already visited is skipped. Pivot `i` sits in row `i` of the result.
pub fn rref(mat: &Gf2Matrix, column_order: Option<&[usize]>) -> Rref {
    let mut m = mat.clone();
    let natural: Vec<usize>;
    let order = match column_order {
        Some(o) => o,
        None => {
            natural = (0..m.cols).collect();
            &natural
        }
    };
    let mut rank = 0;
    let mut pivots = Vec::new();
    for &c in order {
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
        pivots.push(c);
        rank += 1;
    }
    Rref {
        matrix: m,
        rank,
        pivots,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Gf2Matrix {
        let mut m = Gf2Matrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, rng.random_bool(0.5));
            }
        }
        m
    }

    // Plain elimination on Vec<Vec<u8>>, kept independent of the packed code.
    fn naive_rank(rows: &[Vec<u8>]) -> usize {
        let mut a: Vec<Vec<u8>> = rows.to_vec();
        let cols = a.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for c in 0..cols {
            if let Some(p) = (rank..a.len()).find(|&r| a[r][c] == 1) {
                a.swap(rank, p);
                for r in 0..a.len() {
                    if r != rank && a[r][c] == 1 {
                        for j in 0..cols {
                            a[r][j] ^= a[rank][j];
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    fn is_rref(r: &Rref) -> bool {
        for (i, &p) in r.pivots.iter().enumerate() {
            for row in 0..r.matrix.rows() {
                if r.matrix.get(row, p) != (row == i) {
                    return false;
                }
            }
        }
        (r.rank..r.matrix.rows()).all(|row| r.matrix.row_weight(row) == 0)
    }

    #[test]
    fn identity_is_fixed_point() {
        let id = Gf2Matrix::identity(70);
        let r = rref(&id, None);
        assert_eq!(r.matrix, id);
        assert_eq!(r.rank, 70);
        assert_eq!(r.pivots, (0..70).collect::<Vec<_>>());
    }

    #[test]
    fn duplicated_row_keeps_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = random_matrix(&mut rng, 10, 30);
        let rank = m.rank();
        let dup = m.stack(&Gf2Matrix::from_rows(&[m.row_bits(3)]));
        assert_eq!(dup.rank(), rank);
    }

    #[test]
    fn random_rank_matches_naive_elimination() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let rows = rng.random_range(1..=20);
            let m = random_matrix(&mut rng, rows, 40);
            let r = rref(&m, None);
            let naive: Vec<Vec<u8>> = (0..rows).map(|i| m.row_bits(i)).collect();
            assert_eq!(r.rank, naive_rank(&naive));
            assert!(is_rref(&r));
            // the pivot columns alone carry the full rank
            assert_eq!(m.select_columns(&r.pivots).rank(), r.rank);
        }
    }

    #[test]
    fn custom_column_order_respected() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random_matrix(&mut rng, 8, 20);
        let order: Vec<usize> = (0..20).rev().collect();
        let r = rref(&m, Some(&order));
        assert!(is_rref(&r));
        // pivots appear in visiting order, so they are decreasing here
        assert!(r.pivots.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn row_space_preserved() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let m = random_matrix(&mut rng, 16, 32);
            let r = rref(&m, None);
            // mutual containment: stacking either with the other does not grow the rank
            assert_eq!(m.stack(&r.matrix).rank(), m.rank());
            assert_eq!(r.matrix.stack(&m).rank(), r.rank);
        }
    }

    #[test]
    fn products_and_vectors() {
        let a = Gf2Matrix::from_rows(&[[1u8, 0, 1], [0, 1, 1]]);
        let t = a.transpose();
        assert_eq!(t.rows(), 3);
        let p = a.mul(&t);
        assert_eq!(p, Gf2Matrix::from_rows(&[[0u8, 1], [1, 0]]));
        assert_eq!(a.vec_mul(&[1, 1]), vec![1, 1, 0]);
        assert_eq!(a.mul_vec(&[1, 1, 1]), vec![0, 0]);
    }

    #[test]
    #[should_panic]
    fn out_of_bounds_panics() {
        Gf2Matrix::zeros(2, 2).get(2, 0);
    }
}

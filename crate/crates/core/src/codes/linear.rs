use crate::gf::{rref, Gf2Matrix};
use crate::{error::check_len, Bit, Error, Result};

use super::BchInfo;

/// An (n, k) binary linear code with a systematic generator matrix and a
/// full-rank parity-check matrix.
///
/// `g` is kept in reduced row-echelon form: row `i` has its pivot at
/// `info_positions[i]`, so encoding `u` places `u[i]` verbatim at that
/// position.
#[derive(Debug, Clone)]
pub struct BinaryLinearCode {
    pub name: String,
    n: usize,
    k: usize,
    g: Gf2Matrix,
    h: Gf2Matrix,
    info_positions: Vec<usize>,
    pub algebraic: Option<BchInfo>,
}

/// Basis of `{x : mat * x^T = 0}` as the rows of a matrix.
pub fn null_space(mat: &Gf2Matrix) -> Gf2Matrix {
    let r = rref(mat, None);
    let n = mat.cols();
    let mut is_pivot = vec![false; n];
    for &p in &r.pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
    let mut out = Gf2Matrix::zeros(free.len(), n);
    for (row, &f) in free.iter().enumerate() {
        out.set(row, f, true);
        for (i, &p) in r.pivots.iter().enumerate() {
            if r.matrix.get(i, f) {
                out.set(row, p, true);
            }
        }
    }
    out
}

fn systematic(g: &Gf2Matrix) -> Result<(Gf2Matrix, Vec<usize>)> {
    let r = rref(g, None);
    if r.rank != g.rows() {
        return Err(Error::InvalidArgument(format!(
            "generator matrix has rank {} < {} rows",
            r.rank,
            g.rows()
        )));
    }
    Ok((r.matrix, r.pivots))
}

impl BinaryLinearCode {
    /// Code spanned by the rows of `g` (which must be independent).
    pub fn from_generator(name: impl Into<String>, g: &Gf2Matrix) -> Result<Self> {
        let (gs, info_positions) = systematic(g)?;
        let h = null_space(&gs);
        Ok(BinaryLinearCode {
            name: name.into(),
            n: g.cols(),
            k: g.rows(),
            g: gs,
            h,
            info_positions,
            algebraic: None,
        })
    }

    /// Null space of `h`; redundant rows of `h` are allowed.
    pub fn from_parity_check(name: impl Into<String>, h: &Gf2Matrix) -> Result<Self> {
        let g = null_space(h);
        if g.rows() == 0 {
            return Err(Error::InvalidArgument("parity-check matrix has full column rank".into()));
        }
        let mut code = Self::from_generator(name, &g)?;
        // keep a full-rank H
        code.h = null_space(&code.g);
        Ok(code)
    }

    /// Assembles a code from matrices already known to be consistent.
    pub(crate) fn from_parts(
        name: impl Into<String>,
        g: Gf2Matrix,
        h: Gf2Matrix,
        info_positions: Vec<usize>,
        algebraic: Option<BchInfo>,
    ) -> Self {
        BinaryLinearCode {
            name: name.into(),
            n: g.cols(),
            k: g.rows(),
            g,
            h,
            info_positions,
            algebraic,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    pub fn generator(&self) -> &Gf2Matrix {
        &self.g
    }

    pub fn parity_check(&self) -> &Gf2Matrix {
        &self.h
    }

    /// Positions that carry the information bits, in information-bit order.
    pub fn info_positions(&self) -> &[usize] {
        &self.info_positions
    }

    pub fn encode_systematic(&self, info: &[Bit]) -> Result<Vec<Bit>> {
        check_len(self.k, info.len())?;
        Ok(self.g.vec_mul(info))
    }

    pub fn syndrome(&self, word: &[Bit]) -> Result<Vec<Bit>> {
        check_len(self.n, word.len())?;
        Ok(self.h.mul_vec(word))
    }

    pub fn is_codeword(&self, word: &[Bit]) -> bool {
        word.len() == self.n && self.h.mul_vec(word).iter().all(|&s| s == 0)
    }

    /// Reads the information bits back out of a codeword.
    pub fn extract_info(&self, codeword: &[Bit]) -> Vec<Bit> {
        self.info_positions.iter().map(|&p| codeword[p]).collect()
    }

    /// All 2^k codewords; only sensible for small k.
    pub fn codewords(&self) -> Result<Vec<Vec<Bit>>> {
        if self.k > 24 {
            return Err(Error::Refused(format!(
                "enumerating 2^{} codewords",
                self.k
            )));
        }
        let mut out = Vec::with_capacity(1 << self.k);
        for m in 0u64..(1u64 << self.k) {
            let info: Vec<Bit> = (0..self.k).map(|i| ((m >> i) & 1) as Bit).collect();
            out.push(self.g.vec_mul(&info));
        }
        Ok(out)
    }
    /// The (8,4,4) extended Hamming code.
    pub fn extended_hamming_8_4() -> BinaryLinearCode {
        let g = Gf2Matrix::from_rows(&[
            [1u8, 0, 0, 0, 0, 1, 1, 1],
            [0, 1, 0, 0, 1, 0, 1, 1],
            [0, 0, 1, 0, 1, 1, 0, 1],
            [0, 0, 0, 1, 1, 1, 1, 0],
        ]);
        BinaryLinearCode::from_generator("ehamming8_4", &g).expect("independent rows")
    }
}

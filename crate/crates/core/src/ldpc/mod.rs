//! Binary LDPC codes: sparse parity-check representation, alist files,
//! a multiple serially concatenated multiple-parity-check construction and
//! flooding belief propagation.

mod alist;
mod decode;
mod mscmpc;

use serde::{Deserialize, Serialize};

use crate::codes::BinaryLinearCode;
use crate::gf::Gf2Matrix;
use crate::{Bit, Error, Result};

pub use alist::{load_alist, parse_alist, save_alist, to_alist};
pub use decode::{spa_decode, spa_posteriors, SpaConfig, SpaVariant};
pub use mscmpc::{build_mscmpc, MSCMPC_MAX_DRAWS};

/// How an [`LdpcCode`] was obtained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    Alist,
    Mscmpc { counts: Vec<usize>, seed: u64 },
}

/// Sparse parity-check matrix plus a dense systematic encoder.
#[derive(Debug, Clone)]
pub struct LdpcCode {
    n: usize,
    k: usize,
    rows: Vec<Vec<usize>>,
    cols: Vec<Vec<usize>>,
    construction: Construction,
    dense: BinaryLinearCode,
}

impl LdpcCode {
    /// Builds a code from per-row column index lists (0-based).
    pub fn from_rows(
        name: impl Into<String>,
        n: usize,
        rows: Vec<Vec<usize>>,
        construction: Construction,
    ) -> Result<Self> {
        let mut cols = vec![Vec::new(); n];
        for (r, row) in rows.iter().enumerate() {
            let mut seen = row.clone();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != row.len() {
                return Err(Error::InvalidArgument(format!("row {r} repeats a column")));
            }
            for &c in row {
                if c >= n {
                    return Err(Error::InvalidArgument(format!(
                        "row {r} references column {c} >= n = {n}"
                    )));
                }
                cols[c].push(r);
            }
        }
        let mut h = Gf2Matrix::zeros(rows.len(), n);
        for (r, row) in rows.iter().enumerate() {
            for &c in row {
                h.set(r, c, true);
            }
        }
        let dense = BinaryLinearCode::from_parity_check(name, &h)?;
        Ok(LdpcCode {
            n,
            k: dense.k(),
            rows,
            cols,
            construction,
            dense,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn name(&self) -> &str {
        &self.dense.name
    }

    /// Number of rows of the sparse H (may exceed `n - k` if rows are redundant).
    pub fn check_count(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn cols(&self) -> &[Vec<usize>] {
        &self.cols
    }

    pub fn construction(&self) -> &Construction {
        &self.construction
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// The same code as a dense [`BinaryLinearCode`].
    pub fn dense(&self) -> &BinaryLinearCode {
        &self.dense
    }

    pub fn parity_check_dense(&self) -> Gf2Matrix {
        let mut h = Gf2Matrix::zeros(self.rows.len(), self.n);
        for (r, row) in self.rows.iter().enumerate() {
            for &c in row {
                h.set(r, c, true);
            }
        }
        h
    }

    /// `(degree, count)` pairs of the column degree distribution.
    pub fn column_degree_histogram(&self) -> Vec<(usize, usize)> {
        histogram(self.cols.iter().map(Vec::len))
    }

    pub fn row_degree_histogram(&self) -> Vec<(usize, usize)> {
        histogram(self.rows.iter().map(Vec::len))
    }

    pub fn encode(&self, info: &[Bit]) -> Result<Vec<Bit>> {
        self.dense.encode_systematic(info)
    }

    pub fn info_positions(&self) -> &[usize] {
        self.dense.info_positions()
    }

    pub fn satisfies_checks(&self, word: &[Bit]) -> bool {
        self.rows
            .iter()
            .all(|row| row.iter().fold(0u8, |acc, &c| acc ^ word[c]) == 0)
    }

    /// True when the Tanner graph is a single connected component.
    pub fn is_connected(&self) -> bool {
        let mut seen_var = vec![false; self.n];
        let mut seen_chk = vec![false; self.rows.len()];
        let mut stack = vec![0usize];
        seen_var[0] = true;
        while let Some(v) = stack.pop() {
            for &r in &self.cols[v] {
                if !seen_chk[r] {
                    seen_chk[r] = true;
                    for &u in &self.rows[r] {
                        if !seen_var[u] {
                            seen_var[u] = true;
                            stack.push(u);
                        }
                    }
                }
            }
        }
        seen_var.iter().all(|&s| s)
    }
}

/// Encodes `info` into a codeword of `code`.
pub fn ldpc_encode(code: &LdpcCode, info: &[Bit]) -> Result<Vec<Bit>> {
    code.encode(info)
}

fn histogram(it: impl Iterator<Item = usize>) -> Vec<(usize, usize)> {
    let mut counts = std::collections::BTreeMap::new();
    for d in it {
        *counts.entry(d).or_insert(0usize) += 1;
    }
    counts.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(super) fn small() -> LdpcCode {
        LdpcCode::from_rows(
            "small",
            8,
            vec![vec![0, 1, 2, 4], vec![1, 2, 3, 5], vec![0, 2, 3, 6], vec![0, 1, 3, 7]],
            Construction::Alist,
        )
        .unwrap()
    }

    #[test]
    fn adjacency_consistent() {
        let c = small();
        for (r, row) in c.rows().iter().enumerate() {
            for &v in row {
                assert!(c.cols()[v].contains(&r));
            }
        }
        assert_eq!(c.k(), 4);
        assert!(c.is_connected());
    }

    #[test]
    fn encoding_is_linear_and_valid() {
        let c = small();
        assert_eq!(c.encode(&[0; 4]).unwrap(), vec![0; 8]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let a: Vec<u8> = (0..4).map(|_| rng.random_range(0..2)).collect();
            let b: Vec<u8> = (0..4).map(|_| rng.random_range(0..2)).collect();
            let ab: Vec<u8> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
            let (ea, eb, eab) = (c.encode(&a).unwrap(), c.encode(&b).unwrap(), c.encode(&ab).unwrap());
            assert!(c.satisfies_checks(&ea));
            let sum: Vec<u8> = ea.iter().zip(&eb).map(|(x, y)| x ^ y).collect();
            assert_eq!(sum, eab);
        }
        assert!(c.encode(&[0; 3]).is_err());
    }

    #[test]
    fn rejects_bad_rows() {
        assert!(LdpcCode::from_rows("bad", 4, vec![vec![0, 4]], Construction::Alist).is_err());
        assert!(LdpcCode::from_rows("bad", 4, vec![vec![1, 1]], Construction::Alist).is_err());
    }
}

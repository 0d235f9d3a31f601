//! Most reliable basis (ordered statistics) decoding.

use serde::{Deserialize, Serialize};

use crate::codes::BinaryLinearCode;
use crate::error::check_len;
use crate::gf::rref;
use crate::ldpc::LdpcCode;
use crate::{Bit, DecodeOutcome, DecodeStatus, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MrbConfig {
    /// Maximum number of flipped basis positions.
    pub order: usize,
    /// Stop after this many test patterns (the all-zero pattern included).
    pub candidate_limit: Option<usize>,
    /// Skip patterns whose flipped basis positions alone already cost at
    /// least the best discrepancy. Never changes the decision.
    pub early_termination: bool,
}

impl MrbConfig {
    pub fn order(order: usize) -> Self {
        MrbConfig {
            order,
            candidate_limit: None,
            early_termination: true,
        }
    }
}

/// Per-frame search state.
struct Search<'a> {
    words: usize,
    basis: &'a [u64],
    tables: Vec<[f64; 256]>,
    rel: Vec<f64>,
    // smallest[m] = sum of the m least reliable basis magnitudes.
    smallest: Vec<f64>,
    prune: bool,
    limit: usize,
    seen: usize,
    best: f64,
    best_word: Vec<u64>,
}

impl Search<'_> {
    fn discrepancy(&self, diff: &[u64]) -> f64 {
        let mut sum = 0.0;
        for (w, &word) in diff.iter().enumerate() {
            let mut x = word;
            let mut b = w * 8;
            while x != 0 {
                sum += self.tables[b][(x & 0xff) as usize];
                x >>= 8;
                b += 1;
            }
        }
        sum
    }

    fn score(&mut self, diff: &[u64]) {
        self.seen += 1;
        let d = self.discrepancy(diff);
        if d < self.best {
            self.best = d;
            self.best_word.copy_from_slice(diff);
        }
    }

    // Extends a pattern of `depth` flips (accumulated in `stack[depth]`) up to `target` flips.
    fn extend(&mut self, stack: &mut [Vec<u64>], start: usize, depth: usize, target: usize, cost: f64) -> bool {
        let k = self.rel.len();
        let remaining = target - depth;
        for j in start..=k - remaining {
            if self.seen >= self.limit {
                return false;
            }
            let c = cost + self.rel[j];
            if self.prune && c + self.smallest[remaining - 1] >= self.best {
                continue;
            }
            let (lower, upper) = stack.split_at_mut(depth + 1);
            let next = &mut upper[0];
            let row = &self.basis[j * self.words..(j + 1) * self.words];
            for ((n, a), r) in next.iter_mut().zip(&lower[depth]).zip(row) {
                *n = a ^ r;
            }
            if remaining == 1 {
                let diff = std::mem::take(&mut upper[0]);
                self.score(&diff);
                upper[0] = diff;
            } else if !self.extend(stack, j + 1, depth + 1, target, c) {
                return false;
            }
        }
        true
    }
}

/// Order-`cfg.order` most reliable basis decoding of `code`.
pub fn mrb_decode(code: &BinaryLinearCode, llr: &[f64], cfg: &MrbConfig) -> Result<DecodeOutcome> {
    let n = code.n();
    let k = code.k();
    check_len(n, llr.len())?;
    if cfg.order > k {
        return Err(Error::InvalidArgument(format!("order {} exceeds k = {k}", cfg.order)));
    }
    if cfg.candidate_limit == Some(0) {
        return Err(Error::InvalidArgument("candidate_limit must be at least 1".into()));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| llr[b].abs().total_cmp(&llr[a].abs()).then(a.cmp(&b)));
    let reduced = rref(code.generator(), Some(&order));
    debug_assert_eq!(reduced.rank, k);
    let g = &reduced.matrix;
    let words = g.words_per_row();

    let hard: Vec<Bit> = llr.iter().map(|&l| (l < 0.0) as u8).collect();
    let mut y = vec![0u64; words];
    for (i, &b) in hard.iter().enumerate() {
        if b == 1 {
            y[i / 64] |= 1 << (i % 64);
        }
    }
    let mut basis = Vec::with_capacity(k * words);
    let mut start = y.clone();
    for (i, &p) in reduced.pivots.iter().enumerate() {
        let row = g.row(i);
        basis.extend_from_slice(row);
        if hard[p] == 1 {
            for (s, r) in start.iter_mut().zip(row) {
                *s ^= r;
            }
        }
    }

    let mut tables = vec![[0.0f64; 256]; words * 8];
    for (b, table) in tables.iter_mut().enumerate() {
        for v in 1..256usize {
            let low = v.trailing_zeros() as usize;
            let pos = b * 8 + low;
            let mag = if pos < n { llr[pos].abs() } else { 0.0 };
            table[v] = table[v & (v - 1)] + mag;
        }
    }
    let rel: Vec<f64> = reduced.pivots.iter().map(|&p| llr[p].abs()).collect();
    let mut smallest = vec![0.0; k + 1];
    for m in 1..=k {
        smallest[m] = smallest[m - 1] + rel[k - m];
    }

    let mut search = Search {
        words,
        basis: &basis,
        tables,
        rel,
        smallest,
        prune: cfg.early_termination,
        limit: cfg.candidate_limit.unwrap_or(usize::MAX),
        seen: 0,
        best: f64::INFINITY,
        best_word: vec![0; words],
    };
    search.score(&start);
    let mut stack = vec![vec![0u64; words]; cfg.order + 1];
    stack[0].copy_from_slice(&start);
    for w in 1..=cfg.order {
        if search.prune && search.smallest[w] >= search.best {
            break;
        }
        if !search.extend(&mut stack, 0, 0, w, 0.0) {
            break;
        }
    }

    let codeword: Vec<Bit> = (0..n)
        .map(|i| hard[i] ^ ((search.best_word[i / 64] >> (i % 64)) & 1) as u8)
        .collect();
    debug_assert!(code.is_codeword(&codeword));
    Ok(DecodeOutcome {
        info_bits: code.extract_info(&codeword),
        codeword: Some(codeword),
        status: DecodeStatus::Success,
        iterations_used: search.seen,
        soft_metric: Some(search.best),
    })
}

/// [`mrb_decode`] on the dense form of an LDPC code.
pub fn mrb_on_ldpc(code: &LdpcCode, llr: &[f64], cfg: &MrbConfig) -> Result<DecodeOutcome> {
    mrb_decode(code.dense(), llr, cfg)
}

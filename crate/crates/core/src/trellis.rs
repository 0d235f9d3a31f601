//! Syndrome (Wolf) trellises of binary linear block codes, with Viterbi and
//! BCJR decoding.

use std::collections::HashMap;

use crate::codes::BinaryLinearCode;
use crate::error::check_len;
use crate::{Bit, DecodeOutcome, DecodeStatus, Error, Result};

/// Largest `min(k, n-k)` for which a trellis is built.
pub const MAX_STATE_BITS: usize = 24;

const NONE: u32 = u32::MAX;

/// Time-varying syndrome trellis.
///
/// States at depth `t` are the partial syndromes `H[:, ..t] * c[..t]` of
/// codewords `c`, so only states lying on some codeword path are kept.
#[derive(Debug, Clone)]
pub struct Trellis {
    n: usize,
    k: usize,
    columns: Vec<u64>,
    states: Vec<Vec<u64>>,
    next: Vec<Vec<[u32; 2]>>,
    info_positions: Vec<usize>,
}

/// Exact (`log1p` corrected) or max-log BCJR.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BcjrMode {
    Exact,
    MaxLog,
}

#[inline]
fn max_star(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    a.max(b) + (-(a - b).abs()).exp().ln_1p()
}

#[inline]
fn combine(mode: BcjrMode, a: f64, b: f64) -> f64 {
    match mode {
        BcjrMode::Exact => max_star(a, b),
        BcjrMode::MaxLog => a.max(b),
    }
}

// Echelon basis, reduce-by-leading-bit membership test.
#[derive(Clone, Default)]
struct Span {
    basis: Vec<u64>,
}

impl Span {
    fn reduce(&self, mut v: u64) -> u64 {
        for &b in &self.basis {
            let lead = 63 - b.leading_zeros();
            if v >> lead & 1 == 1 {
                v ^= b;
            }
        }
        v
    }

    fn insert(&mut self, v: u64) {
        let r = self.reduce(v);
        if r != 0 {
            self.basis.push(r);
            self.basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }

    fn contains(&self, v: u64) -> bool {
        self.reduce(v) == 0
    }
}

impl Trellis {
    /// Builds the trellis of `code` from its parity-check matrix.
    pub fn build(code: &BinaryLinearCode) -> Result<Trellis> {
        let n = code.n();
        let k = code.k();
        let r = n - k;
        let x = k.min(r);
        if x > MAX_STATE_BITS || r > 64 {
            return Err(Error::Refused(format!(
                "trellis of {} would need up to 2^{x} states (limit 2^{MAX_STATE_BITS}); \
                 a (128,64) code already reaches 2^64 states",
                code.name
            )));
        }
        let h = code.parity_check();
        let columns: Vec<u64> = (0..n)
            .map(|c| (0..r).fold(0u64, |acc, row| acc | (h.get(row, c) as u64) << row))
            .collect();

        // future[t] = span of columns t..n, i.e. the states at depth t that can still reach zero.
        let mut future = vec![Span::default(); n + 1];
        for t in (0..n).rev() {
            let mut s = future[t + 1].clone();
            s.insert(columns[t]);
            future[t] = s;
        }

        let mut states: Vec<Vec<u64>> = vec![vec![0]];
        let mut next: Vec<Vec<[u32; 2]>> = Vec::with_capacity(n);
        for t in 0..n {
            let cur = &states[t];
            let mut index: HashMap<u64, u32> = HashMap::with_capacity(cur.len() * 2);
            let mut following: Vec<u64> = Vec::with_capacity(cur.len() * 2);
            let mut edges = Vec::with_capacity(cur.len());
            for &s in cur {
                let mut e = [NONE; 2];
                for bit in 0..2usize {
                    let ns = if bit == 1 { s ^ columns[t] } else { s };
                    if !future[t + 1].contains(ns) {
                        continue;
                    }
                    let id = *index.entry(ns).or_insert_with(|| {
                        following.push(ns);
                        (following.len() - 1) as u32
                    });
                    e[bit] = id;
                }
                edges.push(e);
            }
            next.push(edges);
            states.push(following);
        }
        debug_assert_eq!(states[n], vec![0]);
        Ok(Trellis {
            n,
            k,
            columns,
            states,
            next,
            info_positions: code.info_positions().to_vec(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of states at each depth `0..=n`.
    pub fn state_counts(&self) -> Vec<usize> {
        self.states.iter().map(Vec::len).collect()
    }

    pub fn max_states(&self) -> usize {
        self.states.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.next
            .iter()
            .flatten()
            .map(|e| e.iter().filter(|&&x| x != NONE).count())
            .sum()
    }

    /// Number of start-to-end paths, which equals the number of codewords.
    pub fn path_count(&self) -> u128 {
        let mut count = vec![1u128];
        for t in 0..self.n {
            let mut nxt = vec![0u128; self.states[t + 1].len()];
            for (s, e) in self.next[t].iter().enumerate() {
                for &d in e {
                    if d != NONE {
                        nxt[d as usize] += count[s];
                    }
                }
            }
            count = nxt;
        }
        count[0]
    }

    /// Every codeword spelled by the trellis, in depth-first order. Only for small `k`.
    pub fn paths(&self) -> Result<Vec<Vec<Bit>>> {
        if self.k > 20 {
            return Err(Error::Refused(format!("enumerating 2^{} paths", self.k)));
        }
        let mut out = Vec::new();
        let mut word = Vec::with_capacity(self.n);
        self.walk(0, 0, &mut word, &mut out);
        Ok(out)
    }

    fn walk(&self, t: usize, s: u32, word: &mut Vec<Bit>, out: &mut Vec<Vec<Bit>>) {
        if t == self.n {
            out.push(word.clone());
            return;
        }
        for bit in 0..2u8 {
            let d = self.next[t][s as usize][bit as usize];
            if d != NONE {
                word.push(bit);
                self.walk(t + 1, d, word, out);
                word.pop();
            }
        }
    }

    fn is_codeword(&self, bits: &[Bit]) -> bool {
        bits.iter()
            .zip(&self.columns)
            .fold(0u64, |acc, (&b, &c)| if b == 1 { acc ^ c } else { acc })
            == 0
    }

    fn info_of(&self, bits: &[Bit]) -> Vec<Bit> {
        self.info_positions.iter().map(|&p| bits[p]).collect()
    }

    /// Maximum-likelihood codeword: maximizes `Σ ±llr/2`.
    pub fn viterbi(&self, llr: &[f64]) -> Result<DecodeOutcome> {
        check_len(self.n, llr.len())?;
        let mut metric = vec![0.0f64];
        let mut back: Vec<Vec<u32>> = Vec::with_capacity(self.n);
        for t in 0..self.n {
            let half = llr[t] / 2.0;
            let width = self.states[t + 1].len();
            let mut nm = vec![f64::NEG_INFINITY; width];
            let mut from = vec![NONE; width];
            for (s, e) in self.next[t].iter().enumerate() {
                for bit in 0..2 {
                    let d = e[bit];
                    if d == NONE {
                        continue;
                    }
                    let m = metric[s] + if bit == 0 { half } else { -half };
                    if m > nm[d as usize] {
                        nm[d as usize] = m;
                        from[d as usize] = (s as u32) << 1 | bit as u32;
                    }
                }
            }
            metric = nm;
            back.push(from);
        }
        let mut word = vec![0u8; self.n];
        let mut s = 0usize;
        for t in (0..self.n).rev() {
            let f = back[t][s];
            word[t] = (f & 1) as u8;
            s = (f >> 1) as usize;
        }
        Ok(DecodeOutcome {
            info_bits: self.info_of(&word),
            codeword: Some(word),
            status: DecodeStatus::Success,
            iterations_used: 1,
            soft_metric: Some(metric[0]),
        })
    }

    fn forward_backward(&self, llr: &[f64], mode: BcjrMode) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
        let mut alpha: Vec<Vec<f64>> = Vec::with_capacity(self.n + 1);
        alpha.push(vec![0.0]);
        for t in 0..self.n {
            let half = llr[t] / 2.0;
            let mut a = vec![f64::NEG_INFINITY; self.states[t + 1].len()];
            for (s, e) in self.next[t].iter().enumerate() {
                for bit in 0..2 {
                    let d = e[bit];
                    if d != NONE {
                        let m = alpha[t][s] + if bit == 0 { half } else { -half };
                        a[d as usize] = combine(mode, a[d as usize], m);
                    }
                }
            }
            let top = a.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            a.iter_mut().for_each(|v| *v -= top);
            alpha.push(a);
        }
        let mut beta: Vec<Vec<f64>> = vec![Vec::new(); self.n + 1];
        beta[self.n] = vec![0.0];
        for t in (0..self.n).rev() {
            let half = llr[t] / 2.0;
            let mut b = vec![f64::NEG_INFINITY; self.states[t].len()];
            for (s, e) in self.next[t].iter().enumerate() {
                for bit in 0..2 {
                    let d = e[bit];
                    if d != NONE {
                        let m = beta[t + 1][d as usize] + if bit == 0 { half } else { -half };
                        b[s] = combine(mode, b[s], m);
                    }
                }
            }
            let top = b.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            b.iter_mut().for_each(|v| *v -= top);
            beta[t] = b;
        }
        (alpha, beta)
    }

    /// Per-bit a posteriori LLRs (positive favours 0) and the hard decision they imply.
    pub fn bcjr(&self, llr: &[f64], mode: BcjrMode) -> Result<(Vec<f64>, DecodeOutcome)> {
        check_len(self.n, llr.len())?;
        let (alpha, beta) = self.forward_backward(llr, mode);
        let mut post = Vec::with_capacity(self.n);
        for t in 0..self.n {
            let half = llr[t] / 2.0;
            let mut acc = [f64::NEG_INFINITY; 2];
            for (s, e) in self.next[t].iter().enumerate() {
                for bit in 0..2 {
                    let d = e[bit];
                    if d != NONE {
                        let m = alpha[t][s]
                            + if bit == 0 { half } else { -half }
                            + beta[t + 1][d as usize];
                        acc[bit] = combine(mode, acc[bit], m);
                    }
                }
            }
            post.push(acc[0] - acc[1]);
        }
        let hard: Vec<Bit> = post.iter().map(|&l| (l < 0.0) as u8).collect();
        let ok = self.is_codeword(&hard);
        let outcome = DecodeOutcome {
            info_bits: self.info_of(&hard),
            codeword: ok.then(|| hard.clone()),
            status: if ok {
                DecodeStatus::Success
            } else {
                DecodeStatus::DetectedFailure
            },
            iterations_used: 1,
            soft_metric: None,
        };
        Ok((post, outcome))
    }

    /// Posterior probability of each state at each depth.
    pub fn state_posteriors(&self, llr: &[f64]) -> Result<Vec<Vec<f64>>> {
        check_len(self.n, llr.len())?;
        let (alpha, beta) = self.forward_backward(llr, BcjrMode::Exact);
        Ok(alpha
            .iter()
            .zip(&beta)
            .map(|(a, b)| {
                let joint: Vec<f64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let norm = joint.iter().cloned().fold(f64::NEG_INFINITY, max_star);
                joint.iter().map(|v| (v - norm).exp()).collect()
            })
            .collect())
    }
}

/// Convenience wrapper around [`Trellis::build`].
pub fn build_wolf_trellis(code: &BinaryLinearCode) -> Result<Trellis> {
    Trellis::build(code)
}

//! Punctured parallel concatenated (turbo) codes built from two identical
//! recursive systematic convolutional encoders.
//!
//! Frame layout before puncturing, for `k` information bits and encoder
//! memory `m`:
//!
//! ```text
//! u0 p0 u1 p1 ... u(k-1) p(k-1) | t0 q0 ... t(m-1) q(m-1)
//! ```
//!
//! `p_i` is the parity of the first encoder for even `i` and of the second
//! encoder (fed with the interleaved bits) for odd `i`. The tail repeats the
//! pattern: `t_j` are the first encoder's termination inputs, `q_j` the
//! termination parity of the first encoder for even `j` and of the second for
//! odd `j`. Both encoders are terminated; the second encoder's termination
//! inputs are not transmitted. The frame has `2(k + m)` bits.

mod distance;
mod interleaver;
mod puncture;
mod rsc;

use serde::{Deserialize, Serialize};

use crate::error::check_len;
use crate::llr::correlation;
use crate::{Bit, DecodeOutcome, DecodeStatus, Error, Result};

pub use distance::{
    design_search, distance_search, drp_candidates, pattern_candidates, random_candidates,
    DesignCandidate, DesignConfig, DistanceReport, DISTANCE_GUARD,
};
pub use interleaver::{satisfies_spread, Interleaver, InterleaverParams, DRP_WINDOW};
pub use puncture::{depuncture, puncture, PuncturingPattern};
pub use rsc::{Branch, RscSpec};

const LLR_CLAMP: f64 = 60.0;

/// A complete punctured turbo code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TurboCodeSpec {
    rsc: RscSpec,
    interleaver: Interleaver,
    puncturing: PuncturingPattern,
    mask: Vec<bool>,
    n_punctured: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TurboAlgo {
    LogMap,
    MaxLogMap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TurboDecoderConfig {
    pub iterations: usize,
    pub algo: TurboAlgo,
    pub early_stop: bool,
}

impl Default for TurboDecoderConfig {
    fn default() -> Self {
        TurboDecoderConfig {
            iterations: 10,
            algo: TurboAlgo::LogMap,
            early_stop: true,
        }
    }
}

impl TurboCodeSpec {
    pub fn new(rsc: RscSpec, interleaver: Interleaver, puncturing: PuncturingPattern) -> Result<Self> {
        let mask = puncturing.keep_mask(interleaver.len(), rsc.memory)?;
        let n_punctured = mask.iter().filter(|&&b| b).count();
        Ok(TurboCodeSpec {
            rsc,
            interleaver,
            puncturing,
            mask,
            n_punctured,
        })
    }

    pub fn k(&self) -> usize {
        self.interleaver.len()
    }

    pub fn n_unpunctured(&self) -> usize {
        2 * (self.k() + self.rsc.memory)
    }

    pub fn n_punctured(&self) -> usize {
        self.n_punctured
    }

    pub fn rsc(&self) -> &RscSpec {
        &self.rsc
    }

    pub fn interleaver(&self) -> &Interleaver {
        &self.interleaver
    }

    pub fn puncturing(&self) -> &PuncturingPattern {
        &self.puncturing
    }

    pub fn keep_mask(&self) -> &[bool] {
        &self.mask
    }

    /// The `2(k + m)`-bit frame before puncturing.
    pub fn encode_unpunctured(&self, info: &[Bit]) -> Result<Vec<Bit>> {
        let k = self.k();
        check_len(k, info.len())?;
        let (p1, t1, q1) = self.rsc.encode(info);
        let (p2, _, q2) = self.rsc.encode(&self.interleaver.permute(info));
        let mut frame = Vec::with_capacity(self.n_unpunctured());
        for i in 0..k {
            frame.push(info[i]);
            frame.push(if i % 2 == 0 { p1[i] } else { p2[i] });
        }
        for j in 0..self.rsc.memory {
            frame.push(t1[j]);
            frame.push(if j % 2 == 0 { q1[j] } else { q2[j] });
        }
        Ok(frame)
    }

    pub fn encode(&self, info: &[Bit]) -> Result<Vec<Bit>> {
        puncture(&self.encode_unpunctured(info)?, &self.mask)
    }
}

pub fn turbo_encode(spec: &TurboCodeSpec, info: &[Bit]) -> Result<Vec<Bit>> {
    spec.encode(info)
}

struct Component<'a> {
    branches: &'a [[Branch; 2]],
    states: usize,
}

impl Component<'_> {
    /// A posteriori LLRs of the first `k` inputs of a terminated trellis.
    fn decode(&self, sys: &[f64], apriori: &[f64], par: &[f64], algo: TurboAlgo) -> Vec<f64> {
        match algo {
            TurboAlgo::LogMap => self.linear(sys, apriori, par),
            TurboAlgo::MaxLogMap => self.max_log(sys, apriori, par),
        }
    }

    fn linear(&self, sys: &[f64], apriori: &[f64], par: &[f64]) -> Vec<f64> {
        let steps = sys.len();
        let k = apriori.len();
        let ns = self.states;
        let gammas: Vec<[[f64; 2]; 2]> = (0..steps)
            .map(|t| {
                let x = (sys[t] + if t < k { apriori[t] } else { 0.0 }) / 2.0;
                let y = par[t] / 2.0;
                let gu = [(x - x.abs()).exp(), (-x - x.abs()).exp()];
                let gc = [(y - y.abs()).exp(), (-y - y.abs()).exp()];
                [[gu[0] * gc[0], gu[0] * gc[1]], [gu[1] * gc[0], gu[1] * gc[1]]]
            })
            .collect();
        let mut alpha = vec![0.0f64; (steps + 1) * ns];
        alpha[0] = 1.0;
        for t in 0..steps {
            let (cur, next) = alpha.split_at_mut((t + 1) * ns);
            let cur = &cur[t * ns..];
            let next = &mut next[..ns];
            for s in 0..ns {
                let a = cur[s];
                if a == 0.0 {
                    continue;
                }
                for u in 0..2 {
                    let b = self.branches[s][u];
                    next[b.to as usize] += a * gammas[t][u][b.parity as usize];
                }
            }
            let sum: f64 = next.iter().sum();
            next.iter_mut().for_each(|v| *v /= sum);
        }
        let mut beta = vec![0.0f64; ns];
        beta[0] = 1.0;
        let mut prev = vec![0.0f64; ns];
        let mut out = vec![0.0; k];
        for t in (0..steps).rev() {
            let a = &alpha[t * ns..(t + 1) * ns];
            let mut num = [0.0f64; 2];
            for s in 0..ns {
                let mut acc = 0.0;
                for u in 0..2 {
                    let b = self.branches[s][u];
                    let v = gammas[t][u][b.parity as usize] * beta[b.to as usize];
                    acc += v;
                    num[u] += a[s] * v;
                }
                prev[s] = acc;
            }
            if t < k {
                out[t] = (num[0].ln() - num[1].ln()).clamp(-LLR_CLAMP, LLR_CLAMP);
            }
            let sum: f64 = prev.iter().sum();
            for (b, p) in beta.iter_mut().zip(&prev) {
                *b = p / sum;
            }
        }
        out
    }

    fn max_log(&self, sys: &[f64], apriori: &[f64], par: &[f64]) -> Vec<f64> {
        let steps = sys.len();
        let k = apriori.len();
        let ns = self.states;
        let metric = |t: usize, u: usize, c: Bit| {
            let x = (sys[t] + if t < k { apriori[t] } else { 0.0 }) / 2.0;
            let y = par[t] / 2.0;
            (if u == 0 { x } else { -x }) + if c == 0 { y } else { -y }
        };
        let mut alpha = vec![f64::NEG_INFINITY; (steps + 1) * ns];
        alpha[0] = 0.0;
        for t in 0..steps {
            let (cur, next) = alpha.split_at_mut((t + 1) * ns);
            let cur = &cur[t * ns..];
            let next = &mut next[..ns];
            for s in 0..ns {
                if cur[s] == f64::NEG_INFINITY {
                    continue;
                }
                for u in 0..2 {
                    let b = self.branches[s][u];
                    let m = cur[s] + metric(t, u, b.parity);
                    if m > next[b.to as usize] {
                        next[b.to as usize] = m;
                    }
                }
            }
            let top = next.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            next.iter_mut().for_each(|v| *v -= top);
        }
        let mut beta = vec![f64::NEG_INFINITY; ns];
        beta[0] = 0.0;
        let mut prev = vec![f64::NEG_INFINITY; ns];
        let mut out = vec![0.0; k];
        for t in (0..steps).rev() {
            let a = &alpha[t * ns..(t + 1) * ns];
            let mut best = [f64::NEG_INFINITY; 2];
            for s in 0..ns {
                let mut acc = f64::NEG_INFINITY;
                for u in 0..2 {
                    let b = self.branches[s][u];
                    let v = metric(t, u, b.parity) + beta[b.to as usize];
                    acc = acc.max(v);
                    best[u] = best[u].max(a[s] + v);
                }
                prev[s] = acc;
            }
            if t < k {
                out[t] = (best[0] - best[1]).clamp(-LLR_CLAMP, LLR_CLAMP);
            }
            let top = prev.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            for (b, p) in beta.iter_mut().zip(&prev) {
                *b = p - top;
            }
        }
        out
    }
}

/// Iterative decoding of a punctured frame of channel LLRs.
pub fn turbo_decode(spec: &TurboCodeSpec, llr: &[f64], cfg: &TurboDecoderConfig) -> Result<DecodeOutcome> {
    check_len(spec.n_punctured(), llr.len())?;
    if cfg.iterations == 0 {
        return Err(Error::InvalidArgument("turbo decoding needs at least one iteration".into()));
    }
    let k = spec.k();
    let m = spec.rsc.memory;
    let full = depuncture(llr, &spec.mask)?;
    let steps = k + m;
    let mut sys1 = vec![0.0; steps];
    let mut par1 = vec![0.0; steps];
    let mut sys2 = vec![0.0; steps];
    let mut par2 = vec![0.0; steps];
    let mut sys = vec![0.0; k];
    for i in 0..k {
        sys[i] = full[2 * i];
        if i % 2 == 0 {
            par1[i] = full[2 * i + 1];
        } else {
            par2[i] = full[2 * i + 1];
        }
    }
    sys1[..k].copy_from_slice(&sys);
    sys2[..k].copy_from_slice(&spec.interleaver.permute(&sys));
    for j in 0..m {
        sys1[k + j] = full[2 * k + 2 * j];
        if j % 2 == 0 {
            par1[k + j] = full[2 * k + 2 * j + 1];
        } else {
            par2[k + j] = full[2 * k + 2 * j + 1];
        }
    }

    let branches = spec.rsc.branches();
    let comp = Component {
        branches: &branches,
        states: spec.rsc.states(),
    };
    let mut la1 = vec![0.0; k];
    let mut decision = vec![0u8; k];
    let mut used = 0;
    for it in 1..=cfg.iterations {
        used = it;
        let post1 = comp.decode(&sys1, &la1, &par1, cfg.algo);
        let le1: Vec<f64> = (0..k)
            .map(|i| (post1[i] - sys[i] - la1[i]).clamp(-LLR_CLAMP, LLR_CLAMP))
            .collect();
        let la2 = spec.interleaver.permute(&le1);
        let post2 = comp.decode(&sys2, &la2, &par2, cfg.algo);
        let le2: Vec<f64> = (0..k)
            .map(|i| (post2[i] - sys2[i] - la2[i]).clamp(-LLR_CLAMP, LLR_CLAMP))
            .collect();
        la1 = spec.interleaver.unpermute(&le2);
        let post = spec.interleaver.unpermute(&post2);
        let mut agree = true;
        for i in 0..k {
            decision[i] = (post[i] < 0.0) as u8;
            agree &= decision[i] == (post1[i] < 0.0) as u8;
        }
        if cfg.early_stop && agree {
            break;
        }
    }
    let codeword = spec.encode(&decision)?;
    let metric = correlation(llr, &codeword);
    Ok(DecodeOutcome {
        info_bits: decision,
        codeword: Some(codeword),
        status: DecodeStatus::Success,
        iterations_used: used,
        soft_metric: Some(metric),
    })
}

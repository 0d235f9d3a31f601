use serde::{Deserialize, Serialize};

use super::LdpcCode;
use crate::error::check_len;
use crate::{Bit, DecodeOutcome, DecodeStatus, Error, Result};

const TANH_CLIP: f64 = 1.0 - 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaVariant {
    SumProduct,
    MinSum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaConfig {
    pub max_iterations: usize,
    pub variant: SpaVariant,
    pub min_sum_scale: f64,
    pub early_stop: bool,
}

impl Default for SpaConfig {
    fn default() -> Self {
        SpaConfig {
            max_iterations: 100,
            variant: SpaVariant::SumProduct,
            min_sum_scale: 0.75,
            early_stop: true,
        }
    }
}

impl SpaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::InvalidArgument("max_iterations must be at least 1".into()));
        }
        if !(self.min_sum_scale > 0.0 && self.min_sum_scale <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "min_sum_scale {} outside (0, 1]",
                self.min_sum_scale
            )));
        }
        Ok(())
    }
}

struct Run {
    posterior: Vec<f64>,
    hard: Vec<Bit>,
    iterations: usize,
    valid: bool,
}

fn check_update_spa(inputs: &[f64], out: &mut [f64], fwd: &mut Vec<f64>) {
    let d = inputs.len();
    fwd.clear();
    let mut acc = 1.0;
    for &m in inputs {
        fwd.push(acc);
        acc *= (m / 2.0).tanh();
    }
    let mut bwd = 1.0;
    for i in (0..d).rev() {
        let p = (fwd[i] * bwd).clamp(-TANH_CLIP, TANH_CLIP);
        out[i] = 2.0 * p.atanh();
        bwd *= (inputs[i] / 2.0).tanh();
    }
}

fn check_update_min_sum(inputs: &[f64], out: &mut [f64], scale: f64) {
    let mut min1 = f64::INFINITY;
    let mut min2 = f64::INFINITY;
    let mut arg = usize::MAX;
    let mut negative = false;
    for (i, &m) in inputs.iter().enumerate() {
        let a = m.abs();
        if a < min1 {
            min2 = min1;
            min1 = a;
            arg = i;
        } else if a < min2 {
            min2 = a;
        }
        negative ^= m < 0.0;
    }
    for (i, &m) in inputs.iter().enumerate() {
        let mag = if i == arg { min2 } else { min1 };
        let sign_neg = negative ^ (m < 0.0);
        out[i] = if sign_neg { -scale * mag } else { scale * mag };
    }
}

fn run(code: &LdpcCode, llr: &[f64], cfg: &SpaConfig) -> Result<Run> {
    cfg.validate()?;
    check_len(code.n(), llr.len())?;
    let rows = code.rows();
    let offsets: Vec<usize> = rows
        .iter()
        .scan(0, |acc, r| {
            let start = *acc;
            *acc += r.len();
            Some(start)
        })
        .collect();
    let edges = code.edge_count();
    let mut c2v = vec![0.0f64; edges];
    let mut v2c = vec![0.0f64; edges];
    let mut total = llr.to_vec();
    let mut hard: Vec<Bit> = vec![0; code.n()];
    let mut scratch = Vec::new();
    let mut inputs = Vec::new();
    let mut iterations = 0;
    let mut valid = false;

    for it in 1..=cfg.max_iterations {
        iterations = it;
        for (r, row) in rows.iter().enumerate() {
            let base = offsets[r];
            for (j, &v) in row.iter().enumerate() {
                v2c[base + j] = total[v] - c2v[base + j];
            }
        }
        total.copy_from_slice(llr);
        for (r, row) in rows.iter().enumerate() {
            let base = offsets[r];
            let d = row.len();
            inputs.clear();
            inputs.extend_from_slice(&v2c[base..base + d]);
            let out = &mut c2v[base..base + d];
            match cfg.variant {
                SpaVariant::SumProduct => check_update_spa(&inputs, out, &mut scratch),
                SpaVariant::MinSum => check_update_min_sum(&inputs, out, cfg.min_sum_scale),
            }
            for (j, &v) in row.iter().enumerate() {
                total[v] += c2v[base + j];
            }
        }
        for (h, &t) in hard.iter_mut().zip(&total) {
            *h = (t < 0.0) as u8;
        }
        valid = code.satisfies_checks(&hard);
        if valid && cfg.early_stop {
            break;
        }
    }
    Ok(Run {
        posterior: total,
        hard,
        iterations,
        valid,
    })
}

/// Flooding belief propagation; stops as soon as the hard decision is a codeword
/// when `cfg.early_stop` is set.
pub fn spa_decode(code: &LdpcCode, llr: &[f64], cfg: &SpaConfig) -> Result<DecodeOutcome> {
    let r = run(code, llr, cfg)?;
    let info = code.info_positions().iter().map(|&p| r.hard[p]).collect();
    Ok(DecodeOutcome {
        info_bits: info,
        codeword: r.valid.then_some(r.hard),
        status: if r.valid {
            DecodeStatus::Success
        } else {
            DecodeStatus::DetectedFailure
        },
        iterations_used: r.iterations,
        soft_metric: None,
    })
}

/// Posterior LLRs after decoding (channel plus all incoming check messages).
pub fn spa_posteriors(code: &LdpcCode, llr: &[f64], cfg: &SpaConfig) -> Result<(Vec<f64>, DecodeOutcome)> {
    let r = run(code, llr, cfg)?;
    let info = code.info_positions().iter().map(|&p| r.hard[p]).collect();
    let outcome = DecodeOutcome {
        info_bits: info,
        codeword: r.valid.then(|| r.hard.clone()),
        status: if r.valid {
            DecodeStatus::Success
        } else {
            DecodeStatus::DetectedFailure
        },
        iterations_used: r.iterations,
        soft_metric: None,
    };
    Ok((r.posterior, outcome))
}

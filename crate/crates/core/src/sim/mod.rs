//! Monte Carlo engine: BER/CER/UFER against Eb/N0 for any registered pipeline.
//!
//! Frame `i` of a run draws its information bits and noise from
//! `frame_rng(seed, i)`. Frames are decoded in fixed batches spread over a
//! worker pool, and the batch results are merged strictly in frame order, so
//! the stopping frame and every tally depend only on the seed. The wall
//! clock budget in [`StopRule::max_seconds`] is the one exception: it is
//! checked between rounds of batches.

mod pipeline;
mod report;

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::beta::inv_beta_reg;

use crate::channel::{add_awgn, channel_llr, frame_rng, modulate, random_bits, ChannelConfig};
use crate::{DecodeStatus, Error, Result};

pub use pipeline::{BuiltCode, CodeSpec, DecoderSpec, Pipeline, PipelineSpec, MAX_ML_DIM};
pub use report::{read_csv, write_csv, write_json, CsvRow, CSV_HEADER};

/// Frames decoded per work unit.
pub const BATCH: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StopRule {
    pub min_frame_errors: u64,
    pub max_frames: u64,
    pub max_seconds: Option<f64>,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule {
            min_frame_errors: 100,
            max_frames: 10_000_000,
            max_seconds: None,
        }
    }
}

impl StopRule {
    pub fn new(min_frame_errors: u64, max_frames: u64) -> Result<Self> {
        let rule = StopRule {
            min_frame_errors,
            max_frames,
            max_seconds: None,
        };
        rule.validate()?;
        Ok(rule)
    }

    pub fn validate(&self) -> Result<()> {
        if self.min_frame_errors == 0 || self.max_frames == 0 {
            return Err(Error::InvalidArgument(
                "min_frame_errors and max_frames must both be at least 1".into(),
            ));
        }
        if let Some(s) = self.max_seconds {
            if !(s >= 0.0) {
                return Err(Error::InvalidArgument(format!("max_seconds {s} is negative")));
            }
        }
        Ok(())
    }
}

/// Tallies for one Eb/N0 point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointReport {
    pub code: String,
    pub decoder: String,
    pub ebn0_db: f64,
    pub frames: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub undetected_frame_errors: u64,
    pub detected_failures: u64,
    pub ber: f64,
    pub cer: f64,
    pub ufer: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
    pub elapsed_s: f64,
}

impl PointReport {
    /// Every tally except the wall clock.
    pub fn tallies(&self) -> (u64, u64, u64, u64, u64) {
        (
            self.frames,
            self.bit_errors,
            self.frame_errors,
            self.undetected_frame_errors,
            self.detected_failures,
        )
    }

    /// Conservation of frame error counts.
    pub fn check_invariants(&self) -> Result<()> {
        let ok = self.frames > 0
            && self.undetected_frame_errors + self.detected_failures == self.frame_errors
            && self.frame_errors <= self.frames
            && self.ber <= 1.0
            && self.cer == self.frame_errors as f64 / self.frames as f64
            && self.ufer == self.undetected_frame_errors as f64 / self.frames as f64
            && self.ci_low <= self.cer
            && self.cer <= self.ci_high;
        if ok {
            Ok(())
        } else {
            Err(Error::Numeric(format!("inconsistent tallies: {self:?}")))
        }
    }
}

/// Rows of a sweep, in grid order.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub points: Vec<PointReport>,
}

/// Clopper-Pearson interval for a binomial proportion.
pub fn confidence_interval(errors: u64, trials: u64, level: f64) -> Result<(f64, f64)> {
    if trials == 0 || errors > trials || !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "confidence interval needs 0 <= errors <= trials, trials >= 1 and level in (0,1); \
             got errors={errors}, trials={trials}, level={level}"
        )));
    }
    let alpha = 1.0 - level;
    let (x, n) = (errors as f64, trials as f64);
    let low = if errors == 0 {
        0.0
    } else {
        inv_beta_reg(x, n - x + 1.0, alpha / 2.0)
    };
    let high = if errors == trials {
        1.0
    } else {
        inv_beta_reg(x + 1.0, n - x, 1.0 - alpha / 2.0)
    };
    Ok((low, high))
}

#[derive(Clone, Copy, Default)]
struct FrameTally {
    bit_errors: u32,
    error: bool,
    detected: bool,
}

fn run_frame(p: &Pipeline, ch: &ChannelConfig, seed: u64, idx: u64) -> Result<FrameTally> {
    let mut rng = frame_rng(seed, idx);
    let info = random_bits(&mut rng, p.k());
    let cw = p.encode(&info)?;
    let y = add_awgn(&modulate(&cw), ch, &mut rng);
    let llr = channel_llr(&y, ch)?;
    let out = p.decode(llr.as_slice())?;
    let bit_errors = out.info_bits.iter().zip(&info).filter(|(a, b)| a != b).count() as u32;
    let detected = out.status == DecodeStatus::DetectedFailure;
    Ok(FrameTally {
        bit_errors,
        error: detected || bit_errors > 0,
        detected,
    })
}

/// Simulates one Eb/N0 point. The result does not depend on `workers`.
pub fn run_point(
    pipeline: &Pipeline,
    ebn0_db: f64,
    stop: &StopRule,
    seed: u64,
    workers: usize,
) -> Result<PointReport> {
    stop.validate()?;
    if workers == 0 {
        return Err(Error::InvalidArgument("workers must be at least 1".into()));
    }
    let ch = ChannelConfig::new(ebn0_db, pipeline.rate())?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("worker pool: {e}")))?;
    let start = Instant::now();
    let (mut frames, mut bit_errors, mut frame_errors, mut detected) = (0u64, 0u64, 0u64, 0u64);
    let round = (workers as u64 * 2).max(1);
    let mut next_batch = 0u64;
    'outer: loop {
        let batches: Vec<u64> = (next_batch..next_batch + round)
            .take_while(|b| b * BATCH < stop.max_frames)
            .collect();
        if batches.is_empty() {
            break;
        }
        next_batch += batches.len() as u64;
        let results: Vec<Result<Vec<FrameTally>>> = pool.install(|| {
            batches
                .par_iter()
                .map(|&b| {
                    let end = ((b + 1) * BATCH).min(stop.max_frames);
                    (b * BATCH..end).map(|i| run_frame(pipeline, &ch, seed, i)).collect()
                })
                .collect()
        });
        for batch in results {
            for t in batch? {
                frames += 1;
                bit_errors += t.bit_errors as u64;
                frame_errors += t.error as u64;
                detected += t.detected as u64;
                if frame_errors >= stop.min_frame_errors || frames >= stop.max_frames {
                    break 'outer;
                }
            }
        }
        if let Some(limit) = stop.max_seconds {
            if start.elapsed().as_secs_f64() >= limit {
                break;
            }
        }
    }
    if frames == 0 {
        return Err(Error::Numeric("simulation produced no frames".into()));
    }
    let (ci_low, ci_high) = confidence_interval(frame_errors, frames, 0.95)?;
    let undetected = frame_errors - detected;
    let report = PointReport {
        code: pipeline.code_label().to_string(),
        decoder: pipeline.decoder_label(),
        ebn0_db,
        frames,
        bit_errors,
        frame_errors,
        undetected_frame_errors: undetected,
        detected_failures: detected,
        ber: bit_errors as f64 / (frames * pipeline.k() as u64) as f64,
        cer: frame_errors as f64 / frames as f64,
        ufer: undetected as f64 / frames as f64,
        ci_low,
        ci_high,
        seed,
        elapsed_s: start.elapsed().as_secs_f64(),
    };
    report.check_invariants()?;
    if pipeline.is_complete() && report.detected_failures != 0 {
        return Err(Error::Numeric(format!(
            "complete decoder {} reported {} detected failures",
            report.decoder, report.detected_failures
        )));
    }
    Ok(report)
}

/// Runs `run_point` over `points` in order, stopping after the first point
/// whose CER falls below `cer_floor`.
pub fn run_sweep(
    pipeline: &Pipeline,
    points: &[f64],
    stop: &StopRule,
    seed: u64,
    workers: usize,
    cer_floor: Option<f64>,
) -> Result<SimReport> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("empty Eb/N0 grid".into()));
    }
    let mut report = SimReport::default();
    for &db in points {
        let row = run_point(pipeline, db, stop, seed, workers)?;
        let below = cer_floor.is_some_and(|f| row.cer < f);
        report.points.push(row);
        if below {
            break;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{analytic_hard_bch, SnrGrid};
    use rand::{Rng, SeedableRng};

    fn uncoded(n: usize) -> Pipeline {
        Pipeline::build(&PipelineSpec {
            code: CodeSpec::Uncoded { n },
            decoder: DecoderSpec::Hard,
        })
        .unwrap()
    }

    #[test]
    fn interval_edges() {
        let (lo, hi) = confidence_interval(0, 50, 0.95).unwrap();
        assert_eq!(lo, 0.0);
        assert!((hi - (1.0 - 0.025f64.powf(1.0 / 50.0))).abs() < 1e-9);
        assert_eq!(confidence_interval(7, 7, 0.95).unwrap().1, 1.0);
        assert!(confidence_interval(8, 7, 0.95).is_err());
        assert!(confidence_interval(1, 7, 1.0).is_err());
        // Beta quantiles for 10 errors in 1000 trials, computed with scipy.
        let (lo, hi) = confidence_interval(10, 1000, 0.95).unwrap();
        assert!((lo - 0.004805_511).abs() < 1e-8 && (hi - 0.018313_243).abs() < 1e-8, "{lo} {hi}");
    }

    #[test]
    fn interval_coverage() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let (n, p) = (200u64, 0.03);
        let mut covered = 0;
        for _ in 0..10_000 {
            let x = (0..n).filter(|_| rng.random::<f64>() < p).count() as u64;
            let (lo, hi) = confidence_interval(x, n, 0.95).unwrap();
            covered += (lo <= p && p <= hi) as u32;
        }
        assert!(covered >= 9500, "coverage {covered}");
    }

    #[test]
    fn noiseless_pipeline_hits_max_frames() {
        let p = Pipeline::build(&PipelineSpec {
            code: CodeSpec::Bch { n: 15, k: 7 },
            decoder: DecoderSpec::Viterbi,
        })
        .unwrap();
        let r = run_point(&p, 300.0, &StopRule::new(1, 500).unwrap(), 1, 2).unwrap();
        assert_eq!((r.frames, r.frame_errors, r.bit_errors), (500, 0, 0));
    }

    #[test]
    fn uncoded_ber_matches_closed_form() {
        let p = uncoded(100);
        let db: f64 = 6.0;
        let r = run_point(&p, db, &StopRule::new(400, 1_000_000).unwrap(), 9, 1).unwrap();
        let pb = crate::bounds::q_function((2.0 * 10f64.powf(db / 10.0)).sqrt());
        let bits = r.frames * 100;
        let (lo, hi) = confidence_interval(r.bit_errors, bits, 0.95).unwrap();
        assert!(lo <= pb && pb <= hi, "{pb} not in [{lo}, {hi}]");
    }

    #[test]
    fn hard_bch_matches_analytic() {
        let p = Pipeline::build(&PipelineSpec {
            code: CodeSpec::Bch { n: 63, k: 57 },
            decoder: DecoderSpec::Hard,
        })
        .unwrap();
        let grid = SnrGrid::new(vec![4.0, 5.0], p.rate()).unwrap();
        let curve = analytic_hard_bch(63, 1, p.rate(), &grid).unwrap();
        for (i, &db) in grid.points().iter().enumerate() {
            let r = run_point(&p, db, &StopRule::new(200, 2_000_000).unwrap(), 4, 1).unwrap();
            let want = curve.points[i].1;
            assert!(r.ci_low <= want && want <= r.ci_high, "{db}: {want} vs {r:?}");
        }
    }

    #[test]
    fn workers_do_not_change_tallies() {
        let p = Pipeline::build(&PipelineSpec {
            code: CodeSpec::Bch { n: 15, k: 7 },
            decoder: DecoderSpec::Mrb { order: 1 },
        })
        .unwrap();
        let stop = StopRule::new(37, 100_000).unwrap();
        let a = run_sweep(&p, &[2.0, 3.0], &stop, 11, 1, None).unwrap();
        let b = run_sweep(&p, &[2.0, 3.0], &stop, 11, 8, None).unwrap();
        for (x, y) in a.points.iter().zip(&b.points) {
            assert_eq!(x.tallies(), y.tallies());
            assert_eq!(x.frame_errors, 37);
        }
    }

    #[test]
    fn sweep_floor_and_monotonicity() {
        let p = uncoded(32);
        let stop = StopRule::new(50, 20_000).unwrap();
        let r = run_sweep(&p, &[0.0, 2.0, 4.0, 6.0, 8.0], &stop, 2, 2, None).unwrap();
        assert!(r.points.windows(2).all(|w| w[1].cer <= w[0].cer));
        let single = run_point(&p, 0.0, &stop, 2, 2).unwrap();
        assert_eq!(r.points[0].tallies(), single.tallies());
        let cut = run_sweep(&p, &[0.0, 2.0, 4.0, 6.0, 8.0], &stop, 2, 2, Some(0.5)).unwrap();
        assert!(cut.points.len() < 5 && cut.points.last().unwrap().cer < 0.5);
        assert!(run_sweep(&p, &[], &stop, 2, 2, None).is_err());
    }
}

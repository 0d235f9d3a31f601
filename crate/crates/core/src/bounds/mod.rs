//! Analytic reference curves: truncated union bound, the 1959 sphere-packing
//! lower bound and the closed-form hard-decision block error rate.

mod erfc;
mod quad;
mod sp59;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::codes::WeightSpectrum;
use crate::{Error, Result};

pub use erfc::{erfc, log_erfc, q_function};
pub use quad::log_integrate;
pub use sp59::{cone_half_angle, ln_outside_cone};

/// Eb/N0 grid in dB plus the code rate used to convert to Es/N0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnrGrid {
    points: Vec<f64>,
    rate: f64,
}

impl SnrGrid {
    pub fn new(points: Vec<f64>, rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(Error::InvalidArgument(format!("rate {rate} outside (0, 1]")));
        }
        if points.is_empty() {
            return Err(Error::InvalidArgument("empty SNR grid".into()));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidArgument("non-finite SNR grid point".into()));
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument(
                "SNR grid must be strictly increasing".into(),
            ));
        }
        Ok(SnrGrid { points, rate })
    }

    /// `start, start+step, ...` up to and including `stop` (within rounding).
    pub fn linspace(start: f64, stop: f64, step: f64, rate: f64) -> Result<Self> {
        if !(step > 0.0) {
            return Err(Error::InvalidArgument(format!("step {step} must be positive")));
        }
        let count = ((stop - start) / step + 1e-9).floor();
        if count < 0.0 {
            return Err(Error::InvalidArgument("stop below start".into()));
        }
        // Snap to 1e-9 dB so that 0.1-dB steps print cleanly.
        let points = (0..=count as usize)
            .map(|i| ((start + step * i as f64) * 1e9).round() / 1e9)
            .collect();
        SnrGrid::new(points, rate)
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// Linear Eb/N0 for each grid point.
    pub fn linear(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|db| 10f64.powf(db / 10.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Tub,
    Sp59,
    AnalyticHd,
}

impl BoundKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundKind::Tub => "tub",
            BoundKind::Sp59 => "sp59",
            BoundKind::AnalyticHd => "analytic_hd",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCurve {
    pub kind: BoundKind,
    pub n: usize,
    pub k: usize,
    pub d_star: Option<usize>,
    pub t: Option<usize>,
    pub points: Vec<(f64, f64)>,
}

impl BoundCurve {
    fn checked(self) -> Result<Self> {
        for &(db, p) in &self.points {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Numeric(format!(
                    "{} value {p} at {db} dB outside [0, 1]",
                    self.kind.as_str()
                )));
            }
        }
        for w in self.points.windows(2) {
            if w[1].1 > w[0].1 * (1.0 + 1e-9) {
                return Err(Error::Numeric(format!(
                    "{} curve increases between {} dB and {} dB",
                    self.kind.as_str(),
                    w[0].0,
                    w[1].0
                )));
            }
        }
        Ok(self)
    }

    /// Eb/N0 at which the curve crosses `target`, interpolating log10(probability)
    /// linearly between neighbouring points.
    pub fn crossing(&self, target: f64) -> Option<f64> {
        crossing(&self.points, target)
    }

    /// Label used in the `decoder` column of exported rows.
    pub fn label(&self) -> String {
        match self.kind {
            BoundKind::Tub => format!("dstar{}", self.d_star.unwrap_or(0)),
            BoundKind::Sp59 => String::new(),
            BoundKind::AnalyticHd => format!("t{}", self.t.unwrap_or(0)),
        }
    }
}

/// First Eb/N0 where a decreasing curve falls to `target`, interpolating in
/// log10 of the ordinate.
pub fn crossing(points: &[(f64, f64)], target: f64) -> Option<f64> {
    for w in points.windows(2) {
        let (x0, y0) = w[0];
        let (x1, y1) = w[1];
        if y0 >= target && y1 <= target && y0 > 0.0 && y1 > 0.0 {
            let (l0, l1, lt) = (y0.log10(), y1.log10(), target.log10());
            if l0 == l1 {
                return Some(x0);
            }
            return Some(x0 + (x1 - x0) * (l0 - lt) / (l0 - l1));
        }
    }
    None
}

/// Truncated union bound, summing weights `1..=d_star`, clamped to 1.
pub fn tub(spectrum: &WeightSpectrum, d_star: usize, grid: &SnrGrid) -> Result<BoundCurve> {
    let covered = spectrum.covered_up_to();
    if d_star > covered && !(spectrum.is_complete()) {
        return Err(Error::InvalidArgument(format!(
            "spectrum only covers weights up to {covered}, d* = {d_star} requested"
        )));
    }
    let terms: Vec<(usize, f64)> = spectrum
        .entries()
        .iter()
        .filter(|(w, _)| *w >= 1 && *w <= d_star)
        .map(|(w, a)| (*w, a.to_f64().unwrap_or(f64::INFINITY)))
        .collect();
    let points = tub_unclamped(&terms, grid)
        .into_iter()
        .map(|(db, v)| (db, v.min(1.0)))
        .collect();
    BoundCurve {
        kind: BoundKind::Tub,
        n: spectrum.n,
        k: spectrum.k,
        d_star: Some(d_star),
        t: None,
        points,
    }
    .checked()
}

/// Raw union-bound sum over `(weight, multiplicity)` pairs, no clamping.
pub fn tub_unclamped(terms: &[(usize, f64)], grid: &SnrGrid) -> Vec<(f64, f64)> {
    grid.points()
        .iter()
        .zip(grid.linear())
        .map(|(&db, lin)| {
            let sum = terms
                .iter()
                .map(|&(w, a)| 0.5 * a * erfc((w as f64 * grid.rate() * lin).sqrt()))
                .sum();
            (db, sum)
        })
        .collect()
}

/// Sphere-packing lower bound for `2^k` equal-energy signals in `n` dimensions.
///
/// The grid's rate is ignored in favour of `k/n`.
pub fn sp59(n: usize, k: usize, grid: &SnrGrid) -> Result<BoundCurve> {
    let theta = cone_half_angle(n, k)?;
    let points = grid
        .points()
        .iter()
        .map(|&db| (db, sp59::sp59_point(n, k, theta, db)))
        .collect();
    BoundCurve {
        kind: BoundKind::Sp59,
        n,
        k,
        d_star: None,
        t: None,
        points,
    }
    .checked()
}

/// Block error rate of a bounded-distance decoder correcting up to `t` errors
/// on a BPSK hard-decision channel.
pub fn analytic_hard_bch(n: usize, t: usize, rate: f64, grid: &SnrGrid) -> Result<BoundCurve> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::InvalidArgument(format!("rate {rate} outside (0, 1]")));
    }
    let points = grid
        .points()
        .iter()
        .zip(grid.linear())
        .map(|(&db, lin)| {
            let p = 0.5 * erfc((rate * lin).sqrt());
            (db, binomial_tail(n, t, p))
        })
        .collect();
    BoundCurve {
        kind: BoundKind::AnalyticHd,
        n,
        k: (rate * n as f64).round() as usize,
        d_star: None,
        t: Some(t),
        points,
    }
    .checked()
}

/// `P(Binomial(n, p) > t)`, summed over the upper tail so small values keep precision.
pub fn binomial_tail(n: usize, t: usize, p: f64) -> f64 {
    if t >= n || p <= 0.0 {
        return 0.0;
    }
    if p >= 1.0 {
        return 1.0;
    }
    let nf = n as f64;
    let (lp, lq) = (p.ln(), (-p).ln_1p());
    let sum: f64 = (t + 1..=n)
        .map(|j| {
            let jf = j as f64;
            let ln_c = ln_gamma(nf + 1.0) - ln_gamma(jf + 1.0) - ln_gamma(nf - jf + 1.0);
            (ln_c + jf * lp + (nf - jf) * lq).exp()
        })
        .sum();
    sum.min(1.0)
}

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{PointReport, SimReport};
use crate::bounds::BoundCurve;
use crate::{Error, Result};

pub const CSV_HEADER: &str = "kind,code,decoder,ebn0_db,frames,bit_errors,frame_errors,\
undetected_frame_errors,ber,cer,ufer,ci_low,ci_high,seed,elapsed_s";

/// One line of the results table, shared by simulations and bounds.
///
/// Bound rows leave every count column empty and carry the bound in `cer`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub kind: String,
    pub code: String,
    pub decoder: String,
    pub ebn0_db: f64,
    pub frames: Option<u64>,
    pub bit_errors: Option<u64>,
    pub frame_errors: Option<u64>,
    pub undetected_frame_errors: Option<u64>,
    pub ber: Option<f64>,
    pub cer: f64,
    pub ufer: Option<f64>,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub seed: Option<u64>,
    pub elapsed_s: Option<f64>,
}

impl From<&PointReport> for CsvRow {
    fn from(r: &PointReport) -> Self {
        CsvRow {
            kind: "sim".into(),
            code: r.code.clone(),
            decoder: r.decoder.clone(),
            ebn0_db: r.ebn0_db,
            frames: Some(r.frames),
            bit_errors: Some(r.bit_errors),
            frame_errors: Some(r.frame_errors),
            undetected_frame_errors: Some(r.undetected_frame_errors),
            ber: Some(r.ber),
            cer: r.cer,
            ufer: Some(r.ufer),
            ci_low: Some(r.ci_low),
            ci_high: Some(r.ci_high),
            seed: Some(r.seed),
            elapsed_s: Some(r.elapsed_s),
        }
    }
}

impl CsvRow {
    pub fn from_sim(report: &SimReport) -> Vec<CsvRow> {
        report.points.iter().map(CsvRow::from).collect()
    }

    pub fn from_bound(curve: &BoundCurve, code: &str) -> Vec<CsvRow> {
        curve
            .points
            .iter()
            .map(|&(db, p)| CsvRow {
                kind: curve.kind.as_str().into(),
                code: code.into(),
                decoder: curve.label(),
                ebn0_db: db,
                frames: None,
                bit_errors: None,
                frame_errors: None,
                undetected_frame_errors: None,
                ber: None,
                cer: p,
                ufer: None,
                ci_low: None,
                ci_high: None,
                seed: None,
                elapsed_s: None,
            })
            .collect()
    }

    pub fn to_line(&self) -> String {
        fn opt<T: std::fmt::Display>(v: &Option<T>) -> String {
            v.as_ref().map(|x| x.to_string()).unwrap_or_default()
        }
        fn prob(v: f64) -> String {
            if v == 0.0 || v == 1.0 {
                v.to_string()
            } else {
                format!("{v:e}")
            }
        }
        fn opt_prob(v: &Option<f64>) -> String {
            v.map(prob).unwrap_or_default()
        }
        let mut s = String::new();
        let _ = write!(
            s,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.kind,
            self.code,
            self.decoder,
            self.ebn0_db,
            opt(&self.frames),
            opt(&self.bit_errors),
            opt(&self.frame_errors),
            opt(&self.undetected_frame_errors),
            opt_prob(&self.ber),
            prob(self.cer),
            opt_prob(&self.ufer),
            opt_prob(&self.ci_low),
            opt_prob(&self.ci_high),
            opt(&self.seed),
            self.elapsed_s.map(|e| format!("{e:.3}")).unwrap_or_default(),
        );
        s
    }

    fn parse_line(line: &str, origin: &Path, lineno: usize) -> Result<CsvRow> {
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 15 {
            return Err(Error::parse(origin, lineno, format!("expected 15 fields, found {}", f.len())));
        }
        fn req<T: std::str::FromStr>(s: &str, what: &str, origin: &Path, l: usize) -> Result<T> {
            s.parse().map_err(|_| Error::parse(origin, l, format!("bad {what} {s:?}")))
        }
        fn opt<T: std::str::FromStr>(s: &str, what: &str, origin: &Path, l: usize) -> Result<Option<T>> {
            if s.is_empty() {
                Ok(None)
            } else {
                req(s, what, origin, l).map(Some)
            }
        }
        let (o, l) = (origin, lineno);
        Ok(CsvRow {
            kind: f[0].into(),
            code: f[1].into(),
            decoder: f[2].into(),
            ebn0_db: req(f[3], "ebn0_db", o, l)?,
            frames: opt(f[4], "frames", o, l)?,
            bit_errors: opt(f[5], "bit_errors", o, l)?,
            frame_errors: opt(f[6], "frame_errors", o, l)?,
            undetected_frame_errors: opt(f[7], "undetected_frame_errors", o, l)?,
            ber: opt(f[8], "ber", o, l)?,
            cer: req(f[9], "cer", o, l)?,
            ufer: opt(f[10], "ufer", o, l)?,
            ci_low: opt(f[11], "ci_low", o, l)?,
            ci_high: opt(f[12], "ci_high", o, l)?,
            seed: opt(f[13], "seed", o, l)?,
            elapsed_s: opt(f[14], "elapsed_s", o, l)?,
        })
    }
}

/// Writes rows to `path`, or appends them when `append` is set and the file
/// already holds a table with the same header.
pub fn write_csv(path: impl AsRef<Path>, rows: &[CsvRow], append: bool) -> Result<()> {
    let path = path.as_ref();
    let mut text = String::new();
    let existing = if append { std::fs::read_to_string(path).ok() } else { None };
    match existing {
        Some(old) if !old.is_empty() => {
            if old.lines().next() != Some(CSV_HEADER) {
                return Err(Error::parse(path, 1, "existing file has a different header"));
            }
            text.push_str(&old);
            if !old.ends_with('\n') {
                text.push('\n');
            }
        }
        _ => {
            text.push_str(CSV_HEADER);
            text.push('\n');
        }
    }
    for r in rows {
        text.push_str(&r.to_line());
        text.push('\n');
    }
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<CsvRow>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(Error::parse(path, 1, "missing or unexpected header"));
    }
    lines
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| CsvRow::parse_line(l, path, i + 2))
        .collect()
}

pub fn write_json(path: impl AsRef<Path>, rows: &[CsvRow]) -> Result<()> {
    let path = path.as_ref();
    let text = serde_json::to_string_pretty(rows)
        .map_err(|e| Error::InvalidArgument(format!("JSON encoding: {e}")))?;
    std::fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bounds::SnrGrid;
use crate::sim::{CodeSpec, DecoderSpec, StopRule};
use crate::{Error, Result};

/// Eb/N0 points, either listed or as an inclusive linear range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Points { points: Vec<f64> },
    Range { start: f64, stop: f64, step: f64 },
}

impl GridSpec {
    pub fn to_grid(&self, rate: f64) -> Result<SnrGrid> {
        match self {
            GridSpec::Points { points } => SnrGrid::new(points.clone(), rate),
            GridSpec::Range { start, stop, step } => SnrGrid::linspace(*start, *stop, *step, rate),
        }
    }

    /// Parses `START:STOP:STEP`.
    pub fn parse_range(text: &str) -> Result<GridSpec> {
        let parts: Vec<&str> = text.split(':').collect();
        let bad = || Error::InvalidArgument(format!("expected START:STOP:STEP, got {text:?}"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let v: Vec<f64> = parts
            .iter()
            .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        Ok(GridSpec::Range {
            start: v[0],
            stop: v[1],
            step: v[2],
        })
    }

    /// Parses a comma-separated list; an empty string gives an empty list.
    pub fn parse_points(text: &str) -> Result<GridSpec> {
        let points = text
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|_| Error::InvalidArgument(format!("bad Eb/N0 value {s:?}")))
            })
            .collect::<Result<_>>()?;
        Ok(GridSpec::Points { points })
    }
}

/// Partial stopping rule; unset fields fall back to [`StopRule::default`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StopSpec {
    pub min_frame_errors: Option<u64>,
    pub max_frames: Option<u64>,
    pub max_seconds: Option<f64>,
}

impl StopSpec {
    pub fn overlay(&self, over: &StopSpec) -> StopSpec {
        StopSpec {
            min_frame_errors: over.min_frame_errors.or(self.min_frame_errors),
            max_frames: over.max_frames.or(self.max_frames),
            max_seconds: over.max_seconds.or(self.max_seconds),
        }
    }

    pub fn to_rule(&self) -> Result<StopRule> {
        let d = StopRule::default();
        let rule = StopRule {
            min_frame_errors: self.min_frame_errors.unwrap_or(d.min_frame_errors),
            max_frames: self.max_frames.unwrap_or(d.max_frames),
            max_seconds: self.max_seconds.or(d.max_seconds),
        };
        rule.validate()?;
        Ok(rule)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimJob {
    pub code: CodeSpec,
    pub decoder: DecoderSpec,
    pub grid: Option<GridSpec>,
    pub stop: Option<StopSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundJobKind {
    Tub,
    Sp59,
    AnalyticHd,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundJob {
    pub kind: BoundJobKind,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub t: Option<usize>,
    /// Spectrum file for `tub`.
    pub spectrum: Option<PathBuf>,
    /// Code whose exact spectrum feeds `tub` when no file is given.
    pub from_code: Option<CodeSpec>,
    pub dstar: Option<usize>,
    /// Value of the `code` column.
    pub label: Option<String>,
    pub grid: Option<GridSpec>,
}

/// Declarative run description read from a TOML file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub output: Option<PathBuf>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub cer_floor: Option<f64>,
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub stop: StopSpec,
    #[serde(default)]
    pub simulate: Vec<SimJob>,
    #[serde(default)]
    pub bounds: Vec<BoundJob>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        RunConfig::parse(&text, path)
    }

    pub fn parse(text: &str, origin: &Path) -> Result<RunConfig> {
        toml::from_str(text).map_err(|e| {
            let line = e
                .span()
                .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1)
                .unwrap_or(1);
            Error::parse(origin, line, e.message().to_string())
        })
    }
}

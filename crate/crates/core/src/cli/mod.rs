//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 for usage or configuration errors, 3 for I/O
//! failures. The default worker count comes from `TCFEC_WORKERS` when set.

mod config;

use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::bounds::{analytic_hard_bch, sp59, tub, BoundCurve};
use crate::codes::{load_spectrum, spectrum_bruteforce, WeightSpectrum, MAX_BRUTEFORCE_DIM};
use crate::sim::{
    run_sweep, write_csv, BuiltCode, CodeSpec, CsvRow, DecoderSpec, Pipeline, PipelineSpec,
};
use crate::turbo::{
    design_search, distance_search, drp_candidates, pattern_candidates, DesignConfig, RscSpec,
};
use crate::{Error, Result};

pub use config::{BoundJob, BoundJobKind, GridSpec, RunConfig, SimJob, StopSpec};

pub const WORKERS_ENV: &str = "TCFEC_WORKERS";

#[derive(Debug, Parser)]
#[command(name = "tcfec", version, about = "Short block-code FEC workbench")]
pub struct Cli {
    /// TOML run configuration; flags given on the command line take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Code construction and summaries.
    Code {
        #[command(subcommand)]
        cmd: CodeCmd,
    },
    /// Monte Carlo error-rate curves.
    Simulate(SimulateArgs),
    /// Analytic curves: truncated union bound, sphere packing, hard-decision BCH.
    Bounds(BoundsArgs),
    /// Code design searches.
    Design {
        #[command(subcommand)]
        cmd: DesignCmd,
    },
    /// Weight spectrum files.
    Spectrum {
        #[command(subcommand)]
        cmd: SpectrumCmd,
    },
}

#[derive(Debug, Subcommand)]
pub enum CodeCmd {
    /// Print n, k, rate and what is known about the distance.
    Info(CodeInfoArgs),
}

#[derive(Debug, Subcommand)]
pub enum DesignCmd {
    /// Joint interleaver and puncturing search for the punctured turbo code.
    Ptc(DesignArgs),
}

#[derive(Debug, Subcommand)]
pub enum SpectrumCmd {
    /// Validate a spectrum file, optionally against a code's exact spectrum.
    Check(SpectrumCheckArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct CodeArgs {
    /// Primitive BCH code (or its even-weight subcode) of length N and dimension K.
    #[arg(long, num_args = 2, value_names = ["N", "K"])]
    pub bch: Option<Vec<usize>>,
    /// Extended BCH code.
    #[arg(long, num_args = 2, value_names = ["N", "K"])]
    pub ebch: Option<Vec<usize>>,
    /// The (8,4) extended Hamming code.
    #[arg(long)]
    pub hamming: bool,
    /// LDPC code from an alist file.
    #[arg(long, value_name = "PATH")]
    pub alist: Option<PathBuf>,
    /// The shipped (128,64) LDPC code.
    #[arg(long)]
    pub ldpc128: bool,
    /// M-SC-MPC LDPC code; needs --counts.
    #[arg(long, num_args = 2, value_names = ["N", "K"])]
    pub mscmpc: Option<Vec<usize>>,
    /// Group counts of the M-SC-MPC components, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub counts: Option<Vec<usize>>,
    /// Seed of the M-SC-MPC construction.
    #[arg(long, default_value_t = 1)]
    pub code_seed: u64,
    /// Punctured turbo code from interleaver and pattern files.
    #[arg(long, num_args = 2, value_names = ["INTERLEAVER", "PATTERN"])]
    pub turbo: Option<Vec<PathBuf>>,
    /// Uncoded BPSK frames of N bits.
    #[arg(long, value_name = "N")]
    pub uncoded: Option<usize>,
}

impl CodeArgs {
    pub fn to_spec(&self) -> Result<Option<CodeSpec>> {
        let mut found = Vec::new();
        if let Some(v) = &self.bch {
            found.push(CodeSpec::Bch { n: v[0], k: v[1] });
        }
        if let Some(v) = &self.ebch {
            found.push(CodeSpec::Ebch { n: v[0], k: v[1] });
        }
        if self.hamming {
            found.push(CodeSpec::ExtendedHamming);
        }
        if let Some(p) = &self.alist {
            found.push(CodeSpec::LdpcAlist { path: p.clone() });
        }
        if self.ldpc128 {
            found.push(CodeSpec::LdpcBuiltin);
        }
        if let Some(v) = &self.mscmpc {
            let counts = self
                .counts
                .clone()
                .ok_or_else(|| Error::InvalidArgument("--mscmpc needs --counts".into()))?;
            found.push(CodeSpec::Mscmpc {
                n: v[0],
                k: v[1],
                counts,
                seed: self.code_seed,
            });
        }
        if let Some(v) = &self.turbo {
            found.push(CodeSpec::Turbo {
                interleaver: v[0].clone(),
                pattern: v[1].clone(),
            });
        }
        if let Some(n) = self.uncoded {
            found.push(CodeSpec::Uncoded { n });
        }
        if found.len() > 1 {
            return Err(Error::InvalidArgument("select at most one code".into()));
        }
        Ok(found.pop())
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct DecoderArgs {
    /// hard, viterbi, bcjr, ml, spa, minsum, mrb, logmap or maxlogmap.
    #[arg(long)]
    pub decoder: Option<String>,
    /// MRB reprocessing order.
    #[arg(long)]
    pub order: Option<usize>,
    /// Iteration limit of iterative decoders.
    #[arg(long)]
    pub iterations: Option<usize>,
    /// Min-sum scaling factor.
    #[arg(long)]
    pub scale: Option<f64>,
}

impl DecoderArgs {
    pub fn to_spec(&self) -> Result<Option<DecoderSpec>> {
        let Some(name) = &self.decoder else {
            return Ok(None);
        };
        let it = |default| self.iterations.unwrap_or(default);
        Ok(Some(match name.as_str() {
            "hard" => DecoderSpec::Hard,
            "viterbi" => DecoderSpec::Viterbi,
            "bcjr" => DecoderSpec::Bcjr,
            "ml" => DecoderSpec::Ml,
            "spa" => DecoderSpec::Spa { iterations: it(100) },
            "minsum" => DecoderSpec::MinSum {
                iterations: it(100),
                scale: self.scale.unwrap_or(0.75),
            },
            "mrb" => DecoderSpec::Mrb {
                order: self
                    .order
                    .ok_or_else(|| Error::InvalidArgument("--decoder mrb needs --order".into()))?,
            },
            "logmap" => DecoderSpec::LogMap { iterations: it(10) },
            "maxlogmap" => DecoderSpec::MaxLogMap { iterations: it(10) },
            other => return Err(Error::UnknownPipeline(format!("unknown decoder {other:?}"))),
        }))
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct GridArgs {
    /// Eb/N0 range in dB as START:STOP:STEP.
    #[arg(long, value_name = "START:STOP:STEP", conflicts_with = "points")]
    pub ebn0: Option<String>,
    /// Comma-separated Eb/N0 values in dB.
    #[arg(long)]
    pub points: Option<String>,
}

impl GridArgs {
    pub fn to_spec(&self) -> Result<Option<GridSpec>> {
        match (&self.ebn0, &self.points) {
            (Some(r), _) => GridSpec::parse_range(r).map(Some),
            (_, Some(p)) => GridSpec::parse_points(p).map(Some),
            _ => Ok(None),
        }
    }
}

#[derive(Debug, Args)]
pub struct CodeInfoArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    /// Spectrum file to report instead of computing one.
    #[arg(long)]
    pub spectrum: Option<PathBuf>,
    /// Print JSON instead of text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    #[command(flatten)]
    pub decoder: DecoderArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Stop a point after this many frame errors.
    #[arg(long)]
    pub min_errors: Option<u64>,
    /// Stop a point after this many frames.
    #[arg(long)]
    pub max_frames: Option<u64>,
    /// Wall-clock budget per point in seconds.
    #[arg(long)]
    pub max_seconds: Option<f64>,
    /// Stop the sweep after the first point with CER below this value.
    #[arg(long)]
    pub cer_floor: Option<f64>,
    /// Master seed of the per-frame noise streams (default 1).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (default from TCFEC_WORKERS, else 1); results do not depend on it.
    #[arg(long)]
    pub workers: Option<usize>,
    /// CSV output; a JSON sidecar is written next to it. Standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Append to an existing CSV instead of replacing it.
    #[arg(long)]
    pub append: bool,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Sphere packing bound; needs --n and --k.
    #[arg(long)]
    pub sp59: bool,
    /// Truncated union bound; needs --dstar and --spectrum or a code flag.
    #[arg(long)]
    pub tub: bool,
    /// Bounded-distance hard-decision CER; needs --n, --k and --t.
    #[arg(long)]
    pub analytic_hd: bool,
    /// Code length.
    #[arg(long)]
    pub n: Option<usize>,
    /// Code dimension.
    #[arg(long)]
    pub k: Option<usize>,
    /// Number of correctable errors.
    #[arg(long)]
    pub t: Option<usize>,
    /// Weight spectrum file for --tub.
    #[arg(long)]
    pub spectrum: Option<PathBuf>,
    /// Largest weight summed by --tub.
    #[arg(long)]
    pub dstar: Option<usize>,
    /// Value for the `code` column.
    #[arg(long)]
    pub label: Option<String>,
    #[command(flatten)]
    pub code: CodeArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// CSV output. Standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Append to an existing CSV instead of replacing it.
    #[arg(long)]
    pub append: bool,
}

#[derive(Debug, Args)]
pub struct DesignArgs {
    /// Number of (interleaver, pattern) pairs screened.
    #[arg(long, default_value_t = 32_000)]
    pub budget: usize,
    /// Information length.
    #[arg(long, default_value_t = 64)]
    pub k: usize,
    /// Random two-drop period-16 patterns added to the 64 single-drop ones.
    #[arg(long, default_value_t = 0)]
    pub extra_patterns: usize,
    /// Seed of the interleaver and pattern draws.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Input weight limit of the screening search.
    #[arg(long, default_value_t = 4)]
    pub w_screen: usize,
    /// Input weight limit of the final search.
    #[arg(long, default_value_t = 6)]
    pub w_final: usize,
    /// Number of designs kept and written out.
    #[arg(long, default_value_t = 10)]
    pub top: usize,
    /// Worker threads (default from TCFEC_WORKERS, else 1).
    #[arg(long)]
    pub workers: Option<usize>,
    /// Directory for the report and the interleaver and pattern files.
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct SpectrumCheckArgs {
    /// Spectrum file compared with the exact spectrum of the selected code.
    pub file: PathBuf,
    #[command(flatten)]
    pub code: CodeArgs,
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("tcfec: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io { .. } => 3,
        _ => 2,
    }
}

pub fn execute(cli: &Cli) -> Result<()> {
    let file = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    match &cli.command {
        Command::Code { cmd: CodeCmd::Info(a) } => cmd_code_info(a),
        Command::Simulate(a) => cmd_simulate(a, &file),
        Command::Bounds(a) => cmd_bounds(a, &file),
        Command::Design { cmd: DesignCmd::Ptc(a) } => cmd_design_ptc(a),
        Command::Spectrum { cmd: SpectrumCmd::Check(a) } => cmd_spectrum_check(a),
    }
}

fn default_workers() -> Result<usize> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&w| w >= 1)
            .ok_or_else(|| Error::InvalidArgument(format!("{WORKERS_ENV}={v:?} is not a positive integer"))),
        Err(_) => Ok(1),
    }
}

fn print_or_write(rows: &[CsvRow], out: Option<&Path>, append: bool) -> Result<()> {
    match out {
        Some(p) => write_csv(p, rows, append),
        None => {
            let mut stdout = std::io::stdout().lock();
            let mut text = String::from(crate::sim::CSV_HEADER);
            text.push('\n');
            for r in rows {
                text.push_str(&r.to_line());
                text.push('\n');
            }
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Error::io("<stdout>", e))
        }
    }
}

#[derive(Serialize)]
struct CodeSummary {
    code: String,
    n: usize,
    k: usize,
    rate: f64,
    d_min: Option<usize>,
    d_min_source: String,
    spectrum_head: Vec<(usize, String)>,
}

fn exact_spectrum(code: &BuiltCode) -> Option<WeightSpectrum> {
    let lin = code.linear()?;
    if lin.k().min(lin.n() - lin.k()) > 20 {
        return None;
    }
    spectrum_bruteforce(lin).ok()
}

fn cmd_code_info(a: &CodeInfoArgs) -> Result<()> {
    let spec = a
        .code
        .to_spec()?
        .ok_or_else(|| Error::InvalidArgument("select a code, e.g. --bch 63 56".into()))?;
    let (label, code) = BuiltCode::build(&spec)?;
    let (n, k) = (code.n(), code.k());
    let mut spectrum = None;
    let mut source = String::from("unknown");
    if let Some(p) = &a.spectrum {
        spectrum = Some(load_spectrum(p)?);
        source = format!("spectrum file {}", p.display());
    } else if spec == (CodeSpec::Ebch { n: 128, k: 64 }) {
        spectrum = Some(crate::data::ebch_128_64_spectrum()?);
        source = "shipped spectrum data/ebch128_64.ws".into();
    } else if let Some(ws) = exact_spectrum(&code) {
        spectrum = Some(ws);
        source = "exact enumeration".into();
    }
    let mut d_min = spectrum.as_ref().and_then(|s| s.min_distance());
    if let BuiltCode::Turbo(tc) = &code {
        let r = distance_search(tc, 4)?;
        d_min = Some(r.d_min_upper);
        source = format!("upper bound from input weights <= 4 ({} words)", r.a_at_d);
    }
    if let Some(ws) = &spectrum {
        if ws.n != n || ws.k != k {
            return Err(Error::InvalidArgument(format!(
                "spectrum is for ({}, {}), code is ({n}, {k})",
                ws.n, ws.k
            )));
        }
    }
    let summary = CodeSummary {
        code: label,
        n,
        k,
        rate: k as f64 / n as f64,
        d_min,
        d_min_source: source,
        spectrum_head: spectrum
            .map(|s| s.entries().iter().take(6).map(|(w, a)| (*w, a.to_string())).collect())
            .unwrap_or_default(),
    };
    if a.json {
        let text = serde_json::to_string_pretty(&summary)
            .map_err(|e| Error::InvalidArgument(format!("JSON encoding: {e}")))?;
        println!("{text}");
    } else {
        println!("code      {}", summary.code);
        println!("n         {}", summary.n);
        println!("k         {}", summary.k);
        println!("rate      {:.6}", summary.rate);
        match summary.d_min {
            Some(d) => println!("d_min     {d} ({})", summary.d_min_source),
            None => println!("d_min     unknown"),
        }
        if !summary.spectrum_head.is_empty() {
            let head: Vec<String> = summary.spectrum_head.iter().map(|(w, a)| format!("{w}:{a}")).collect();
            println!("spectrum  {}", head.join(" "));
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct Sidecar<'a> {
    tool: &'static str,
    version: &'static str,
    seed: u64,
    workers: usize,
    cer_floor: Option<f64>,
    jobs: &'a [SimJob],
    rows: &'a [CsvRow],
}

/// Resolves the simulation jobs: command-line code and decoder flags replace
/// the file's job list, and scalar flags override the file's values.
fn resolve_jobs(a: &SimulateArgs, file: &RunConfig) -> Result<Vec<SimJob>> {
    let code = a.code.to_spec()?;
    let decoder = a.decoder.to_spec()?;
    let mut jobs = match (code, decoder) {
        (Some(code), Some(decoder)) => vec![SimJob {
            code,
            decoder,
            grid: None,
            stop: None,
        }],
        (None, None) => file.simulate.clone(),
        (Some(code), None) if file.simulate.len() == 1 => vec![SimJob {
            code,
            ..file.simulate[0].clone()
        }],
        (None, Some(decoder)) if file.simulate.len() == 1 => vec![SimJob {
            decoder,
            ..file.simulate[0].clone()
        }],
        _ => {
            return Err(Error::InvalidArgument(
                "give both a code and --decoder, or a config file with [[simulate]] entries".into(),
            ))
        }
    };
    if jobs.is_empty() {
        return Err(Error::InvalidArgument("nothing to simulate".into()));
    }
    let flag_grid = a.grid.to_spec()?;
    let flag_stop = StopSpec {
        min_frame_errors: a.min_errors,
        max_frames: a.max_frames,
        max_seconds: a.max_seconds,
    };
    for job in &mut jobs {
        job.grid = flag_grid.clone().or(job.grid.take()).or(file.grid.clone());
        if job.grid.is_none() {
            return Err(Error::InvalidArgument("no Eb/N0 grid: use --ebn0 or --points".into()));
        }
        let base = file.stop.overlay(job.stop.as_ref().unwrap_or(&StopSpec::default()));
        job.stop = Some(base.overlay(&flag_stop));
    }
    Ok(jobs)
}

fn cmd_simulate(a: &SimulateArgs, file: &RunConfig) -> Result<()> {
    let jobs = resolve_jobs(a, file)?;
    let seed = a.seed.or(file.seed).unwrap_or(1);
    let workers = match a.workers.or(file.workers) {
        Some(0) => return Err(Error::InvalidArgument("--workers must be at least 1".into())),
        Some(w) => w,
        None => default_workers()?,
    };
    let cer_floor = a.cer_floor.or(file.cer_floor);
    let out = a.out.clone().or(file.output.clone());
    // Validate every job before spending time on any of them.
    let mut prepared = Vec::new();
    for job in &jobs {
        let pipeline = Pipeline::build(&PipelineSpec {
            code: job.code.clone(),
            decoder: job.decoder,
        })?;
        let grid = job.grid.as_ref().expect("resolved").to_grid(pipeline.rate())?;
        let stop = job.stop.as_ref().expect("resolved").to_rule()?;
        prepared.push((pipeline, grid, stop));
    }
    if let Some(p) = &out {
        std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(p)
            .map_err(|e| Error::io(p, e))?;
    }
    let mut rows = Vec::new();
    for (pipeline, grid, stop) in &prepared {
        let t = Instant::now();
        let report = run_sweep(pipeline, grid.points(), stop, seed, workers, cer_floor)?;
        eprintln!(
            "{} / {}: {} points in {:.1} s",
            pipeline.code_label(),
            pipeline.decoder_label(),
            report.points.len(),
            t.elapsed().as_secs_f64()
        );
        rows.extend(CsvRow::from_sim(&report));
    }
    print_or_write(&rows, out.as_deref(), a.append)?;
    if let Some(out) = &out {
        let sidecar = Sidecar {
            tool: "tcfec",
            version: env!("CARGO_PKG_VERSION"),
            seed,
            workers,
            cer_floor,
            jobs: &jobs,
            rows: &rows,
        };
        let path = sidecar_path(out);
        let text = serde_json::to_string_pretty(&sidecar)
            .map_err(|e| Error::InvalidArgument(format!("JSON encoding: {e}")))?;
        std::fs::write(&path, text + "\n").map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}

/// `results.csv` gets `results.json` alongside.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

fn bound_rows(job: &BoundJob, fallback_grid: Option<&GridSpec>) -> Result<Vec<CsvRow>> {
    let grid_spec = job
        .grid
        .as_ref()
        .or(fallback_grid)
        .ok_or_else(|| Error::InvalidArgument("no Eb/N0 grid: use --ebn0 or --points".into()))?;
    let need = |v: Option<usize>, what: &str| {
        v.ok_or_else(|| Error::InvalidArgument(format!("{:?} bound needs {what}", job.kind)))
    };
    let (curve, label): (BoundCurve, String) = match job.kind {
        BoundJobKind::Sp59 => {
            let (n, k) = (need(job.n, "n")?, need(job.k, "k")?);
            let grid = grid_spec.to_grid(k as f64 / n as f64)?;
            (sp59(n, k, &grid)?, format!("n{n}_k{k}"))
        }
        BoundJobKind::AnalyticHd => {
            let (n, k, t) = (need(job.n, "n")?, need(job.k, "k")?, need(job.t, "t")?);
            let rate = k as f64 / n as f64;
            let grid = grid_spec.to_grid(rate)?;
            (analytic_hard_bch(n, t, rate, &grid)?, format!("bch{n}_{k}"))
        }
        BoundJobKind::Tub => {
            let dstar = need(job.dstar, "dstar")?;
            let (ws, label) = match (&job.spectrum, &job.from_code) {
                (Some(p), None) => (
                    load_spectrum(p)?,
                    p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
                ),
                (None, Some(spec)) => {
                    let (label, code) = BuiltCode::build(spec)?;
                    let lin = code.linear().ok_or_else(|| {
                        Error::InvalidArgument(format!("{label} has no dense description"))
                    })?;
                    let small = lin.k().min(lin.n() - lin.k());
                    if small > MAX_BRUTEFORCE_DIM {
                        return Err(Error::Refused(format!(
                            "exact spectrum of {label} needs 2^{small} words; pass --spectrum"
                        )));
                    }
                    (spectrum_bruteforce(lin)?, label)
                }
                _ => {
                    return Err(Error::InvalidArgument(
                        "tub needs exactly one of a spectrum file or a code".into(),
                    ))
                }
            };
            let grid = grid_spec.to_grid(ws.k as f64 / ws.n as f64)?;
            (tub(&ws, dstar, &grid)?, label)
        }
    };
    let label = job.label.clone().unwrap_or(label);
    Ok(CsvRow::from_bound(&curve, &label))
}

fn cmd_bounds(a: &BoundsArgs, file: &RunConfig) -> Result<()> {
    let kinds: Vec<BoundJobKind> = [
        (a.sp59, BoundJobKind::Sp59),
        (a.tub, BoundJobKind::Tub),
        (a.analytic_hd, BoundJobKind::AnalyticHd),
    ]
    .into_iter()
    .filter(|(on, _)| *on)
    .map(|(_, k)| k)
    .collect();
    let flag_grid = a.grid.to_spec()?;
    let jobs: Vec<BoundJob> = if kinds.is_empty() {
        file.bounds.clone()
    } else {
        let from_code = a.code.to_spec()?;
        kinds
            .into_iter()
            .map(|kind| BoundJob {
                kind,
                n: a.n,
                k: a.k,
                t: a.t,
                spectrum: a.spectrum.clone(),
                from_code: from_code.clone(),
                dstar: a.dstar,
                label: a.label.clone(),
                grid: None,
            })
            .collect()
    };
    if jobs.is_empty() {
        return Err(Error::InvalidArgument(
            "choose --sp59, --tub or --analytic-hd, or a config file with [[bounds]] entries".into(),
        ));
    }
    let mut rows = Vec::new();
    for job in &jobs {
        let grid = flag_grid.as_ref().or(job.grid.as_ref()).or(file.grid.as_ref());
        let job = BoundJob {
            grid: grid.cloned(),
            ..job.clone()
        };
        rows.extend(bound_rows(&job, None)?);
    }
    let out = a.out.clone().or(file.output.clone());
    print_or_write(&rows, out.as_deref(), a.append)
}

fn cmd_design_ptc(a: &DesignArgs) -> Result<()> {
    if a.budget == 0 || a.top == 0 {
        return Err(Error::InvalidArgument("--budget and --top must be at least 1".into()));
    }
    let workers = match a.workers {
        Some(w) => w,
        None => default_workers()?,
    };
    let rsc = RscSpec::default_16_state();
    let target = 2 * a.k;
    let patterns = pattern_candidates(a.k, rsc.memory, target, a.extra_patterns, a.seed)?;
    let interleavers = drp_candidates(a.k, a.budget.div_ceil(patterns.len()), a.seed)?;
    let cfg = DesignConfig {
        rsc,
        w_screen: a.w_screen,
        w_final: a.w_final,
        keep_top: a.top,
        budget: a.budget,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("worker pool: {e}")))?;
    let t = Instant::now();
    let designs = pool.install(|| design_search(&interleavers, &patterns, &cfg))?;
    std::fs::create_dir_all(&a.out_dir).map_err(|e| Error::io(&a.out_dir, e))?;
    let mut report = String::from(
        "rank,d_min_upper,a_at_d,w_max_searched,exhaustive,interleaver_file,pattern_file\n",
    );
    for (rank, d) in designs.iter().enumerate() {
        let il = format!("interleaver_{rank:02}.txt");
        let pat = format!("pattern_{rank:02}.txt");
        d.interleaver.save(a.out_dir.join(&il))?;
        d.pattern.save(a.out_dir.join(&pat))?;
        report.push_str(&format!(
            "{rank},{},{},{},{},{il},{pat}\n",
            d.report.d_min_upper, d.report.a_at_d, d.report.w_max_searched, d.report.exhaustive
        ));
    }
    let path = a.out_dir.join("design.csv");
    std::fs::write(&path, &report).map_err(|e| Error::io(&path, e))?;
    eprintln!(
        "screened {} pairs in {:.1} s; best d <= {} with {} words",
        a.budget.min(interleavers.len() * patterns.len()),
        t.elapsed().as_secs_f64(),
        designs[0].report.d_min_upper,
        designs[0].report.a_at_d
    );
    print!("{report}");
    Ok(())
}

fn cmd_spectrum_check(a: &SpectrumCheckArgs) -> Result<()> {
    let ws = load_spectrum(&a.file)?;
    println!("n         {}", ws.n);
    println!("k         {}", ws.k);
    println!(
        "coverage  {}",
        if ws.is_complete() {
            "complete".to_string()
        } else {
            format!("truncated at weight {}", ws.covered_up_to())
        }
    );
    match ws.min_distance() {
        Some(d) => println!("d_min     {d}"),
        None => println!("d_min     not within coverage"),
    }
    if let Some(spec) = a.code.to_spec()? {
        let (label, code) = BuiltCode::build(&spec)?;
        let exact = exact_spectrum(&code).ok_or_else(|| {
            Error::Refused(format!("exact spectrum of {label} is too expensive to enumerate"))
        })?;
        if (exact.n, exact.k) != (ws.n, ws.k) {
            return Err(Error::InvalidArgument(format!(
                "file is for ({}, {}), {label} is ({}, {})",
                ws.n, ws.k, exact.n, exact.k
            )));
        }
        for w in 0..=ws.covered_up_to() {
            if ws.multiplicity(w) != exact.multiplicity(w) {
                return Err(Error::InvalidArgument(format!(
                    "A_{w} = {} in file, {} in {label}",
                    ws.multiplicity(w),
                    exact.multiplicity(w)
                )));
            }
        }
        println!("matches   {label} up to weight {}", ws.covered_up_to());
    }
    Ok(())
}

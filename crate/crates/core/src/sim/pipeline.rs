use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::codes::{build_bch, hard_decode_bch, BchVariant, BinaryLinearCode};
use crate::ldpc::{build_mscmpc, load_alist, spa_decode, LdpcCode, SpaConfig, SpaVariant};
use crate::llr::correlation;
use crate::osd::{mrb_decode, MrbConfig};
use crate::trellis::{BcjrMode, Trellis};
use crate::turbo::{
    turbo_decode, turbo_encode, Interleaver, PuncturingPattern, RscSpec, TurboAlgo, TurboCodeSpec,
    TurboDecoderConfig,
};
use crate::{Bit, DecodeOutcome, DecodeStatus, Error, Result};

/// Largest dimension for which the exhaustive ML decoder lists the code.
pub const MAX_ML_DIM: usize = 16;

/// Code selection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum CodeSpec {
    /// Plain BPSK of `n` information bits.
    Uncoded { n: usize },
    /// Primitive narrow-sense BCH of length `2^m - 1`, or its even-weight subcode.
    Bch { n: usize, k: usize },
    /// Extended BCH of length `2^m`.
    Ebch { n: usize, k: usize },
    /// The (8,4) extended Hamming code.
    ExtendedHamming,
    /// LDPC code read from an alist file.
    LdpcAlist { path: PathBuf },
    /// The shipped (128,64) LDPC code.
    LdpcBuiltin,
    /// Multiple serially concatenated multiple-parity-check LDPC code.
    Mscmpc {
        n: usize,
        k: usize,
        counts: Vec<usize>,
        seed: u64,
    },
    /// Punctured parallel turbo code with the default 16-state constituent.
    Turbo { interleaver: PathBuf, pattern: PathBuf },
}

/// Decoder selection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algo", rename_all = "snake_case")]
pub enum DecoderSpec {
    Hard,
    Viterbi,
    Bcjr,
    Ml,
    Spa { iterations: usize },
    MinSum { iterations: usize, scale: f64 },
    Mrb { order: usize },
    LogMap { iterations: usize },
    MaxLogMap { iterations: usize },
}

impl DecoderSpec {
    pub fn label(&self) -> String {
        match self {
            DecoderSpec::Hard => "hard".into(),
            DecoderSpec::Viterbi => "viterbi".into(),
            DecoderSpec::Bcjr => "bcjr".into(),
            DecoderSpec::Ml => "ml".into(),
            DecoderSpec::Spa { iterations } => format!("spa{iterations}"),
            DecoderSpec::MinSum { iterations, .. } => format!("minsum{iterations}"),
            DecoderSpec::Mrb { order } => format!("mrb{order}"),
            DecoderSpec::LogMap { iterations } => format!("logmap{iterations}"),
            DecoderSpec::MaxLogMap { iterations } => format!("maxlogmap{iterations}"),
        }
    }

    /// Decoders that always return a codeword, so every frame error is undetected.
    pub fn is_complete(&self) -> bool {
        matches!(
            self,
            DecoderSpec::Viterbi
                | DecoderSpec::Ml
                | DecoderSpec::Mrb { .. }
                | DecoderSpec::LogMap { .. }
                | DecoderSpec::MaxLogMap { .. }
        )
    }
}

/// A (code, decoder) pair as registered with the simulator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineSpec {
    pub code: CodeSpec,
    pub decoder: DecoderSpec,
}

/// A constructed code, ready for encoding.
pub enum BuiltCode {
    Uncoded(usize),
    Linear(BinaryLinearCode),
    Ldpc(LdpcCode),
    Turbo(TurboCodeSpec),
}

enum Engine {
    Hard,
    Trellis(Trellis, bool),
    Ml(Vec<Vec<Bit>>),
    Spa(SpaConfig),
    Mrb(MrbConfig),
    Turbo(TurboDecoderConfig),
}

/// A ready-to-run encoder/decoder pair.
pub struct Pipeline {
    // None for pipelines assembled from in-memory codes.
    code_spec: Option<CodeSpec>,
    decoder: DecoderSpec,
    code_label: String,
    codec: BuiltCode,
    engine: Engine,
}

fn find_bch(n: usize, k: usize, extended: bool) -> Result<BinaryLinearCode> {
    let core = if extended { n.wrapping_sub(1) } else { n };
    let m = (core + 1).trailing_zeros();
    if core < 3 || (core + 1) != 1 << m {
        return Err(Error::UnknownPipeline(format!(
            "no primitive BCH code of length {n}"
        )));
    }
    let variants: &[BchVariant] = if extended {
        &[BchVariant::Extended]
    } else {
        &[BchVariant::Plain, BchVariant::Expurgated]
    };
    for t in 1..=core / 2 {
        let mut below = true;
        for &v in variants {
            let code = build_bch(m, t, v)?;
            if code.k() == k {
                return Ok(code);
            }
            below &= code.k() < k;
        }
        if below {
            break;
        }
    }
    Err(Error::UnknownPipeline(format!(
        "no {}BCH code with n = {n}, k = {k}",
        if extended { "extended " } else { "" }
    )))
}

fn incompatible(code: &str, decoder: &DecoderSpec) -> Error {
    Error::UnknownPipeline(format!(
        "decoder {} is not available for code {code}",
        decoder.label()
    ))
}

fn linear_engine(code: &BinaryLinearCode, decoder: &DecoderSpec) -> Result<Engine> {
    Ok(match *decoder {
        DecoderSpec::Hard if code.algebraic.is_some() => Engine::Hard,
        DecoderSpec::Viterbi => Engine::Trellis(Trellis::build(code)?, false),
        DecoderSpec::Bcjr => Engine::Trellis(Trellis::build(code)?, true),
        DecoderSpec::Ml => {
            if code.k() > MAX_ML_DIM {
                return Err(Error::Refused(format!(
                    "exhaustive ML over 2^{} codewords exceeds the 2^{MAX_ML_DIM} limit",
                    code.k()
                )));
            }
            Engine::Ml(code.codewords()?)
        }
        DecoderSpec::Mrb { order } => Engine::Mrb(MrbConfig::order(order)),
        _ => return Err(incompatible(&code.name, decoder)),
    })
}

fn ldpc_engine(code: &LdpcCode, decoder: &DecoderSpec) -> Result<Engine> {
    let cfg = match *decoder {
        DecoderSpec::Spa { iterations } => SpaConfig {
            max_iterations: iterations,
            ..SpaConfig::default()
        },
        DecoderSpec::MinSum { iterations, scale } => SpaConfig {
            max_iterations: iterations,
            variant: SpaVariant::MinSum,
            min_sum_scale: scale,
            early_stop: true,
        },
        _ => return linear_engine(code.dense(), decoder),
    };
    cfg.validate()?;
    Ok(Engine::Spa(cfg))
}

impl BuiltCode {
    /// Constructs the selected code and its display label.
    pub fn build(spec: &CodeSpec) -> Result<(String, BuiltCode)> {
        Ok(match spec {
            CodeSpec::Uncoded { n } => {
                if *n == 0 {
                    return Err(Error::InvalidArgument("uncoded frame length must be positive".into()));
                }
                (format!("uncoded{n}"), BuiltCode::Uncoded(*n))
            }
            CodeSpec::Bch { n, k } => (format!("bch{n}_{k}"), BuiltCode::Linear(find_bch(*n, *k, false)?)),
            CodeSpec::Ebch { n, k } => (format!("ebch{n}_{k}"), BuiltCode::Linear(find_bch(*n, *k, true)?)),
            CodeSpec::ExtendedHamming => {
                let code = BinaryLinearCode::extended_hamming_8_4();
                (code.name.clone(), BuiltCode::Linear(code))
            }
            CodeSpec::LdpcAlist { path } => {
                let code = load_alist(path)?;
                (code.name().to_string(), BuiltCode::Ldpc(code))
            }
            CodeSpec::LdpcBuiltin => ("ldpc128_64".into(), BuiltCode::Ldpc(crate::data::ldpc_128_64()?)),
            CodeSpec::Mscmpc { n, k, counts, seed } => {
                let code = build_mscmpc(*n, *k, counts, *seed)?;
                (format!("mscmpc{n}_{k}"), BuiltCode::Ldpc(code))
            }
            CodeSpec::Turbo { interleaver, pattern } => {
                let il = Interleaver::load(interleaver)?;
                let pat = PuncturingPattern::load(pattern)?;
                let tc = TurboCodeSpec::new(RscSpec::default_16_state(), il, pat)?;
                (format!("ptc{}_{}", tc.n_punctured(), tc.k()), BuiltCode::Turbo(tc))
            }
        })
    }

    pub fn k(&self) -> usize {
        match self {
            BuiltCode::Uncoded(n) => *n,
            BuiltCode::Linear(c) => c.k(),
            BuiltCode::Ldpc(c) => c.k(),
            BuiltCode::Turbo(c) => c.k(),
        }
    }

    /// Transmitted symbols per frame.
    pub fn n(&self) -> usize {
        match self {
            BuiltCode::Uncoded(n) => *n,
            BuiltCode::Linear(c) => c.n(),
            BuiltCode::Ldpc(c) => c.n(),
            BuiltCode::Turbo(c) => c.n_punctured(),
        }
    }

    /// The code as a generic linear code, when it has a dense description.
    pub fn linear(&self) -> Option<&BinaryLinearCode> {
        match self {
            BuiltCode::Linear(c) => Some(c),
            BuiltCode::Ldpc(c) => Some(c.dense()),
            _ => None,
        }
    }
}

impl Pipeline {
    /// Builds the pipeline, reading any referenced files.
    pub fn build(spec: &PipelineSpec) -> Result<Pipeline> {
        let (label, code) = BuiltCode::build(&spec.code)?;
        let mut p = Pipeline::assemble(label, code, spec.decoder)?;
        p.code_spec = Some(spec.code.clone());
        Ok(p)
    }

    /// Attaches a decoder to an already constructed code.
    pub fn assemble(code_label: String, codec: BuiltCode, decoder: DecoderSpec) -> Result<Pipeline> {
        let d = &decoder;
        let engine = match &codec {
            BuiltCode::Uncoded(_) if *d == DecoderSpec::Hard => Engine::Hard,
            BuiltCode::Uncoded(_) => return Err(incompatible("uncoded", d)),
            BuiltCode::Linear(code) => linear_engine(code, d)?,
            BuiltCode::Ldpc(code) => ldpc_engine(code, d)?,
            BuiltCode::Turbo(_) => match *d {
                DecoderSpec::LogMap { iterations } | DecoderSpec::MaxLogMap { iterations } => {
                    if iterations == 0 {
                        return Err(Error::InvalidArgument("turbo iterations must be at least 1".into()));
                    }
                    Engine::Turbo(TurboDecoderConfig {
                        iterations,
                        algo: if matches!(d, DecoderSpec::LogMap { .. }) {
                            TurboAlgo::LogMap
                        } else {
                            TurboAlgo::MaxLogMap
                        },
                        early_stop: true,
                    })
                }
                _ => return Err(incompatible(&code_label, d)),
            },
        };
        Ok(Pipeline {
            code_spec: None,
            decoder,
            code_label,
            codec,
            engine,
        })
    }

    pub fn code_spec(&self) -> Option<&CodeSpec> {
        self.code_spec.as_ref()
    }

    pub fn decoder(&self) -> DecoderSpec {
        self.decoder
    }

    pub fn code_label(&self) -> &str {
        &self.code_label
    }

    pub fn decoder_label(&self) -> String {
        self.decoder.label()
    }

    pub fn is_complete(&self) -> bool {
        self.decoder.is_complete()
    }

    pub fn code(&self) -> &BuiltCode {
        &self.codec
    }

    /// Information bits per frame.
    pub fn k(&self) -> usize {
        self.codec.k()
    }

    /// Transmitted symbols per frame.
    pub fn n(&self) -> usize {
        self.codec.n()
    }

    pub fn rate(&self) -> f64 {
        self.k() as f64 / self.n() as f64
    }

    pub fn encode(&self, info: &[Bit]) -> Result<Vec<Bit>> {
        match &self.codec {
            BuiltCode::Uncoded(_) => Ok(info.to_vec()),
            BuiltCode::Linear(c) => c.encode_systematic(info),
            BuiltCode::Ldpc(c) => c.encode(info),
            BuiltCode::Turbo(c) => turbo_encode(c, info),
        }
    }

    fn linear(&self) -> &BinaryLinearCode {
        self.codec.linear().expect("linear engines are only built for linear codes")
    }

    pub fn decode(&self, llr: &[f64]) -> Result<DecodeOutcome> {
        match (&self.engine, &self.codec) {
            (Engine::Hard, BuiltCode::Uncoded(_)) => {
                let bits: Vec<Bit> = llr.iter().map(|&l| (l < 0.0) as Bit).collect();
                Ok(DecodeOutcome {
                    info_bits: bits.clone(),
                    codeword: Some(bits),
                    status: DecodeStatus::Success,
                    iterations_used: 0,
                    soft_metric: None,
                })
            }
            (Engine::Hard, _) => {
                let bits: Vec<Bit> = llr.iter().map(|&l| (l < 0.0) as Bit).collect();
                hard_decode_bch(self.linear(), &bits)
            }
            (Engine::Trellis(t, false), _) => t.viterbi(llr),
            (Engine::Trellis(t, true), _) => Ok(t.bcjr(llr, BcjrMode::Exact)?.1),
            (Engine::Ml(words), _) => {
                let code = self.linear();
                crate::error::check_len(code.n(), llr.len())?;
                let (best, metric) = words
                    .iter()
                    .map(|w| (w, correlation(llr, w)))
                    .fold((&words[0], f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
                Ok(DecodeOutcome {
                    info_bits: code.extract_info(best),
                    codeword: Some(best.clone()),
                    status: DecodeStatus::Success,
                    iterations_used: words.len(),
                    soft_metric: Some(metric),
                })
            }
            (Engine::Spa(cfg), BuiltCode::Ldpc(c)) => spa_decode(c, llr, cfg),
            (Engine::Spa(_), _) => unreachable!("sum-product is only built for LDPC codecs"),
            (Engine::Mrb(cfg), _) => mrb_decode(self.linear(), llr, cfg),
            (Engine::Turbo(cfg), BuiltCode::Turbo(c)) => turbo_decode(c, llr, cfg),
            (Engine::Turbo(_), _) => unreachable!("turbo decoding is only built for turbo codecs"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bch_lookup() {
        assert_eq!(find_bch(63, 56, false).unwrap().k(), 56);
        assert_eq!(find_bch(63, 57, false).unwrap().k(), 57);
        assert_eq!(find_bch(15, 7, false).unwrap().k(), 7);
        assert!(find_bch(63, 55, false).is_err());
        assert!(find_bch(64, 56, false).is_err());
    }

    #[test]
    fn labels_and_compatibility() {
        let p = Pipeline::build(&PipelineSpec {
            code: CodeSpec::Bch { n: 15, k: 7 },
            decoder: DecoderSpec::Mrb { order: 3 },
        })
        .unwrap();
        assert_eq!((p.code_label(), p.decoder_label().as_str()), ("bch15_7", "mrb3"));
        let bad = Pipeline::build(&PipelineSpec {
            code: CodeSpec::ExtendedHamming,
            decoder: DecoderSpec::Spa { iterations: 10 },
        });
        assert!(matches!(bad, Err(Error::UnknownPipeline(_))));
    }

    #[test]
    fn ml_decoder_corrects_single_flip() {
        let p = Pipeline::build(&PipelineSpec {
            code: CodeSpec::ExtendedHamming,
            decoder: DecoderSpec::Ml,
        })
        .unwrap();
        let info = [1, 0, 1, 1];
        let cw = p.encode(&info).unwrap();
        let mut llr: Vec<f64> = cw.iter().map(|&b| if b == 0 { 2.0 } else { -2.0 }).collect();
        llr[5] = -llr[5] * 0.5;
        assert_eq!(p.decode(&llr).unwrap().info_bits, info);
    }
}

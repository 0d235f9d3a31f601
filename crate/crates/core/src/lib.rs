//! Short block-code forward error correction workbench.
//!
//! The crate builds, encodes, decodes and bounds the rate-1/2 short codes
//! considered for space telecommand uplinks:
//!
//! * BCH(63,56) with algebraic hard decoding and ML soft decoding on its
//!   syndrome trellis ([`codes`], [`trellis`]),
//! * binary (128,64) LDPC codes with sum-product decoding ([`ldpc`]),
//! * a (128,64) punctured parallel turbo code and its design search ([`turbo`]),
//! * most-reliable-basis (ordered statistics) decoding for any binary
//!   linear code, including eBCH(128,64) ([`osd`]).
//!
//! Analytic reference curves live in [`bounds`], the BPSK/AWGN channel in
//! [`channel`] and the Monte Carlo engine in [`sim`].

pub mod bounds;
pub mod channel;
pub mod cli;
pub mod codes;
pub mod data;
pub mod error;
pub mod gf;
pub mod ldpc;
pub mod llr;
pub mod osd;
pub mod sim;
pub mod trellis;
pub mod turbo;

pub use error::{Error, Result};
pub use llr::LlrVector;

/// A hard bit, stored as 0 or 1.
pub type Bit = u8;

/// Whether a decoder believes its output is a valid codeword.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecodeStatus {
    Success,
    DetectedFailure,
}

/// Result of decoding one frame.
///
/// `status == Success` means the decoder emitted a codeword of its code;
/// whether it is the transmitted one is for the caller to judge. A
/// `DetectedFailure` still carries the decoder's best guess of the
/// information bits so that bit errors can be tallied.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeOutcome {
    pub info_bits: Vec<Bit>,
    pub codeword: Option<Vec<Bit>>,
    pub status: DecodeStatus,
    pub iterations_used: usize,
    pub soft_metric: Option<f64>,
}

impl DecodeOutcome {
    pub fn is_success(&self) -> bool {
        self.status == DecodeStatus::Success
    }
}

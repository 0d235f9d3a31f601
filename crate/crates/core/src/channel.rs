//! BPSK over AWGN with rate-aware Eb/N0 accounting.
//!
//! Gaussian samples come from the Marsaglia polar transform applied to a
//! ChaCha8 stream, implemented here so that seeded runs stay bit-stable
//! independent of upstream sampler changes.

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{Bit, Error, LlrVector, Result};

/// Noise configuration for one Eb/N0 point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig {
    pub ebn0_db: f64,
    pub rate: f64,
    /// Noise variance per real dimension at unit symbol energy.
    pub sigma2: f64,
}

impl ChannelConfig {
    /// `sigma^2 = 1 / (2 R 10^(EbN0/10))`.
    pub fn new(ebn0_db: f64, rate: f64) -> Result<Self> {
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(Error::InvalidArgument(format!("rate {rate} outside (0, 1]")));
        }
        if !ebn0_db.is_finite() {
            return Err(Error::InvalidArgument("Eb/N0 must be finite".into()));
        }
        let sigma2 = 1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0));
        if !(sigma2 > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "Eb/N0 {ebn0_db} dB gives a non-positive noise variance"
            )));
        }
        Ok(ChannelConfig {
            ebn0_db,
            rate,
            sigma2,
        })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma2.sqrt()
    }
}

/// Random stream for one frame, derived from `(master seed, frame index)`.
///
/// Frame streams are disjoint ChaCha8 streams, so a frame's noise does not
/// depend on how frames are spread over workers.
pub fn frame_rng(seed: u64, frame: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(b"tcfec-v1");
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(frame);
    rng
}

/// Uniform on [0, 1) with 53 random bits.
#[inline]
pub fn uniform<R: RngCore>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Pair of independent standard normals by the Marsaglia polar method.
pub fn standard_normal_pair<R: RngCore>(rng: &mut R) -> (f64, f64) {
    loop {
        let u = 2.0 * uniform(rng) - 1.0;
        let v = 2.0 * uniform(rng) - 1.0;
        let s = u * u + v * v;
        if s > 0.0 && s < 1.0 {
            let f = (-2.0 * s.ln() / s).sqrt();
            return (u * f, v * f);
        }
    }
}

/// `n` uniformly random bits.
pub fn random_bits<R: RngCore>(rng: &mut R, n: usize) -> Vec<Bit> {
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let w = rng.next_u64();
        for i in 0..64.min(n - out.len()) {
            out.push(((w >> i) & 1) as Bit);
        }
    }
    out
}

/// Bit 0 maps to +1, bit 1 to -1.
pub fn modulate(bits: &[Bit]) -> Vec<f64> {
    bits.iter().map(|&b| if b == 0 { 1.0 } else { -1.0 }).collect()
}

/// `y = x + n` with `n ~ N(0, sigma^2)` i.i.d.
pub fn add_awgn<R: RngCore>(symbols: &[f64], cfg: &ChannelConfig, rng: &mut R) -> Vec<f64> {
    let sigma = cfg.sigma();
    let mut out = Vec::with_capacity(symbols.len());
    let mut chunks = symbols.chunks(2);
    for pair in &mut chunks {
        let (a, b) = standard_normal_pair(rng);
        out.push(pair[0] + sigma * a);
        if pair.len() == 2 {
            out.push(pair[1] + sigma * b);
        }
    }
    out
}

/// Channel LLRs `2 y / sigma^2`.
pub fn channel_llr(received: &[f64], cfg: &ChannelConfig) -> Result<LlrVector> {
    if !(cfg.sigma2 > 0.0) {
        return Err(Error::InvalidArgument("noise variance must be positive".into()));
    }
    let scale = 2.0 / cfg.sigma2;
    LlrVector::new(received.iter().map(|y| scale * y).collect())
}

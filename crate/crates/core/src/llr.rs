use std::ops::Deref;

use crate::{Bit, Error, Result};

/// Per-bit log-likelihood ratios, `ln P(b=0)/P(b=1)`. Positive favours 0.
#[derive(Debug, Clone, PartialEq)]
pub struct LlrVector(Vec<f64>);

impl LlrVector {
    /// Wraps `values`, rejecting NaN and infinities.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "LLR at position {i} is not finite ({})",
                values[i]
            )));
        }
        Ok(LlrVector(values))
    }

    /// Noise-free LLRs of magnitude `magnitude` for the given bits.
    pub fn from_bits(bits: &[Bit], magnitude: f64) -> Self {
        LlrVector(
            bits.iter()
                .map(|&b| if b == 0 { magnitude } else { -magnitude })
                .collect(),
        )
    }

    /// Sign decisions; a zero LLR decides 0.
    pub fn hard_decision(&self) -> Vec<Bit> {
        self.0.iter().map(|&l| Bit::from(l < 0.0)).collect()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

impl Deref for LlrVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Correlation of a codeword with the LLRs: `sum (1 - 2 c_i) * llr_i / 2`.
pub fn correlation(llr: &[f64], bits: &[Bit]) -> f64 {
    llr.iter()
        .zip(bits)
        .map(|(&l, &b)| if b == 0 { 0.5 * l } else { -0.5 * l })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite() {
        assert!(LlrVector::new(vec![0.0, f64::NAN]).is_err());
        assert!(LlrVector::new(vec![f64::INFINITY]).is_err());
        assert!(LlrVector::new(vec![1.0, -2.0]).is_ok());
    }

    #[test]
    fn hard_decision_follows_sign() {
        let l = LlrVector::new(vec![1.0, -0.5, 0.0]).unwrap();
        assert_eq!(l.hard_decision(), vec![0, 1, 0]);
    }
}

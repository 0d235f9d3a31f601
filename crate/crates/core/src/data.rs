//! Code data shipped with the crate.

use std::path::Path;

use crate::codes::{parse_spectrum, WeightSpectrum};
use crate::ldpc::{parse_alist, LdpcCode};
use crate::Result;

const LDPC_128_64: &str = include_str!("../data/ccsds_128_64.alist");
const EBCH_128_64: &str = include_str!("../data/ebch128_64.ws");

/// The external (128,64) LDPC code, transcribed from its circulant description.
pub fn ldpc_128_64() -> Result<LdpcCode> {
    parse_alist(LDPC_128_64, Path::new("data/ccsds_128_64.alist"), "ldpc128_64")
}

/// Weight spectrum of eBCH(128,64) up to weight 50 (binomial approximation).
pub fn ebch_128_64_spectrum() -> Result<WeightSpectrum> {
    parse_spectrum(EBCH_128_64, Path::new("data/ebch128_64.ws"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_data_parses() {
        let code = ldpc_128_64().unwrap();
        assert_eq!((code.n(), code.k()), (128, 64));
        let ws = ebch_128_64_spectrum().unwrap();
        assert_eq!((ws.min_distance(), ws.covered_up_to()), (Some(22), 50));
    }
}

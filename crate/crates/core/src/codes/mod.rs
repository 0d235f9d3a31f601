//! Binary linear block codes: BCH construction, systematic encoding,
//! algebraic hard decoding and weight-spectrum tools.

mod bch;
mod linear;
mod spectrum;

pub use bch::{build_bch, build_bch_with_field, hard_decode_bch, BchInfo, BchVariant};
pub use linear::{null_space, BinaryLinearCode};
pub use spectrum::{
    load_spectrum, macwilliams, parse_spectrum, spectrum_bruteforce, WeightSpectrum,
    MAX_BRUTEFORCE_DIM,
};

use crate::gf::{minimal_polynomial, Gf2Matrix, Gf2Poly, Gf2mField};
use crate::{error::check_len, Bit, DecodeOutcome, DecodeStatus, Error, Result};

use super::BinaryLinearCode;

/// Which member of the BCH family to build on top of the primitive code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BchVariant {
    Plain,
    /// Even-weight subcode: generator multiplied by `x + 1`.
    Expurgated,
    /// Primitive code plus an overall even-parity bit in the last position.
    Extended,
}

/// Algebraic description kept alongside a BCH code for hard decoding.
#[derive(Debug, Clone)]
pub struct BchInfo {
    pub field: Gf2mField,
    pub generator: Gf2Poly,
    /// Designed correction capability.
    pub t: usize,
    pub variant: BchVariant,
}

impl BchInfo {
    /// Length of the cyclic core, `2^m - 1`.
    pub fn core_len(&self) -> usize {
        self.field.order()
    }
}

/// Narrow-sense primitive BCH code over the default field for `m`.
pub fn build_bch(m: u32, designed_t: usize, variant: BchVariant) -> Result<BinaryLinearCode> {
    build_bch_with_field(Gf2mField::with_default_poly(m)?, designed_t, variant)
}

pub fn build_bch_with_field(
    field: Gf2mField,
    designed_t: usize,
    variant: BchVariant,
) -> Result<BinaryLinearCode> {
    if designed_t == 0 {
        return Err(Error::InvalidArgument("designed t must be at least 1".into()));
    }
    let n = field.order();
    let mut g = Gf2Poly::one();
    let mut seen: Vec<Gf2Poly> = Vec::new();
    for i in 1..=2 * designed_t {
        let mp = minimal_polynomial(&field, field.alpha_pow(i as i64))?;
        if !seen.contains(&mp) {
            g = g.mul(&mp);
            seen.push(mp);
        }
    }
    let x_plus_1 = Gf2Poly::from_exponents(&[0, 1]);
    if variant == BchVariant::Expurgated && !g.rem(&x_plus_1).is_zero() {
        g = g.mul(&x_plus_1);
    }
    let deg = g.degree().unwrap_or(0);
    if deg >= n {
        return Err(Error::InvalidArgument(format!(
            "generator degree {deg} leaves no information bits for n={n}"
        )));
    }
    let k = n - deg;

    // Bit i of a codeword is the coefficient of x^(n-1-i): information first.
    let mut gen = Gf2Matrix::zeros(k, n);
    for i in 0..k {
        gen.set(i, i, true);
        let rem = Gf2Poly::monomial(n - 1 - i).rem(&g);
        for j in 0..deg {
            if rem.coeff(j) {
                gen.set(i, n - 1 - j, true);
            }
        }
    }
    let mut h = Gf2Matrix::zeros(n - k, n);
    for i in 0..k {
        for j in 0..n - k {
            if gen.get(i, k + j) {
                h.set(j, i, true);
            }
        }
    }
    for j in 0..n - k {
        h.set(j, k + j, true);
    }

    let (gen, h, name) = if variant == BchVariant::Extended {
        let mut ge = Gf2Matrix::zeros(k, n + 1);
        for i in 0..k {
            for c in 0..n {
                if gen.get(i, c) {
                    ge.set(i, c, true);
                }
            }
            if gen.row_weight(i) % 2 == 1 {
                ge.set(i, n, true);
            }
        }
        let mut he = Gf2Matrix::zeros(n - k + 1, n + 1);
        for r in 0..n - k {
            for c in 0..n {
                if h.get(r, c) {
                    he.set(r, c, true);
                }
            }
        }
        for c in 0..=n {
            he.set(n - k, c, true);
        }
        (ge, he, format!("ebch{}_{}", n + 1, k))
    } else {
        (gen, h, format!("bch{n}_{k}"))
    };

    let info = BchInfo {
        field,
        generator: g,
        t: designed_t,
        variant,
    };
    Ok(BinaryLinearCode::from_parts(
        name,
        gen,
        h,
        (0..k).collect(),
        Some(info),
    ))
}

/// Berlekamp-Massey: shortest LFSR (error locator) generating the syndromes
/// `s[0] = S_1, s[1] = S_2, ...`. Returns the connection polynomial (lowest
/// degree first) and the register length.
fn berlekamp_massey(field: &Gf2mField, s: &[u32]) -> (Vec<u32>, usize) {
    let mut lambda = vec![1u32];
    let mut prev = vec![1u32];
    let mut l = 0usize;
    let mut shift = 1usize;
    let mut b = 1u32;
    for r in 0..s.len() {
        let mut d = s[r];
        for i in 1..=l.min(lambda.len() - 1) {
            d ^= field.mul(lambda[i], s[r - i]);
        }
        if d == 0 {
            shift += 1;
            continue;
        }
        let coef = field.div(d, b).expect("b is nonzero");
        let mut next = lambda.clone();
        if next.len() < prev.len() + shift {
            next.resize(prev.len() + shift, 0);
        }
        for (i, &p) in prev.iter().enumerate() {
            next[i + shift] ^= field.mul(coef, p);
        }
        if 2 * l <= r {
            l = r + 1 - l;
            prev = lambda;
            b = d;
            shift = 1;
        } else {
            shift += 1;
        }
        lambda = next;
    }
    while lambda.len() > 1 && lambda.last() == Some(&0) {
        lambda.pop();
    }
    (lambda, l)
}

/// Corrects up to `t` errors in a word of the cyclic core. Returns the flipped
/// bit indices, or `None` when the error pattern is not decodable.
fn decode_core(info: &BchInfo, word: &mut [Bit]) -> Option<Vec<usize>> {
    let field = &info.field;
    let n = info.core_len();
    let ones: Vec<usize> = (0..n).filter(|&i| word[i] != 0).map(|i| n - 1 - i).collect();
    let syn: Vec<u32> = (1..=2 * info.t)
        .map(|j| {
            ones.iter()
                .fold(0u32, |acc, &p| acc ^ field.alpha_pow((j * p) as i64))
        })
        .collect();
    if syn.iter().all(|&s| s == 0) {
        return Some(Vec::new());
    }
    let (lambda, deg) = berlekamp_massey(field, &syn);
    if deg == 0 || deg > info.t || lambda.len() != deg + 1 {
        return None;
    }
    // Chien search: error at exponent p iff lambda(alpha^-p) = 0.
    let mut flips = Vec::with_capacity(deg);
    for p in 0..n {
        let x = field.alpha_pow(-(p as i64));
        let mut acc = 0u32;
        for &c in lambda.iter().rev() {
            acc = field.mul(acc, x) ^ c;
        }
        if acc == 0 {
            flips.push(n - 1 - p);
        }
    }
    if flips.len() != deg {
        return None;
    }
    for &i in &flips {
        word[i] ^= 1;
    }
    Some(flips)
}

/// Algebraic hard-decision decoding (Berlekamp-Massey plus Chien search).
///
/// Extended codes use the overall parity bit to detect `t + 1` errors;
/// expurgated codes reject corrections that leave an odd-weight word.
pub fn hard_decode_bch(code: &BinaryLinearCode, received: &[Bit]) -> Result<DecodeOutcome> {
    let info = code.algebraic.as_ref().ok_or_else(|| {
        Error::InvalidArgument(format!("code {} has no algebraic description", code.name))
    })?;
    check_len(code.n(), received.len())?;
    let failure = |word: &[Bit]| DecodeOutcome {
        info_bits: code.extract_info(word),
        codeword: None,
        status: DecodeStatus::DetectedFailure,
        iterations_used: 0,
        soft_metric: None,
    };
    if code.is_codeword(received) {
        return Ok(DecodeOutcome {
            info_bits: code.extract_info(received),
            codeword: Some(received.to_vec()),
            status: DecodeStatus::Success,
            iterations_used: 0,
            soft_metric: Some(0.0),
        });
    }
    let core_n = info.core_len();
    let mut word = received.to_vec();
    let Some(flips) = decode_core(info, &mut word[..core_n]) else {
        return Ok(failure(received));
    };
    let mut n_corrected = flips.len();
    if info.variant == BchVariant::Extended {
        let parity = word.iter().fold(0u8, |a, &b| a ^ b);
        if parity != 0 {
            if n_corrected < info.t {
                word[core_n] ^= 1;
                n_corrected += 1;
            } else {
                return Ok(failure(received));
            }
        }
    }
    if !code.is_codeword(&word) {
        return Ok(failure(received));
    }
    Ok(DecodeOutcome {
        info_bits: code.extract_info(&word),
        codeword: Some(word),
        status: DecodeStatus::Success,
        iterations_used: 0,
        soft_metric: Some(n_corrected as f64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{seq::index::sample, Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_bits(rng: &mut ChaCha8Rng, n: usize) -> Vec<Bit> {
        (0..n).map(|_| rng.random_range(0..2u8)).collect()
    }

    #[test]
    fn bch63_56_expurgated_matches_tc_generator() {
        let c = build_bch(6, 1, BchVariant::Expurgated).unwrap();
        assert_eq!((c.n(), c.k()), (63, 56));
        let g = &c.algebraic.as_ref().unwrap().generator;
        // x^7 + x^6 + x^2 + 1
        assert_eq!(g, &Gf2Poly::from_exponents(&[0, 2, 6, 7]));
        assert!(c.generator().mul(&c.parity_check().transpose()).is_zero());
        assert_eq!(c.generator().rank(), 56);
        assert_eq!(c.parity_check().rank(), 7);
    }

    #[test]
    fn ebch128_64_dimensions() {
        let c = build_bch(7, 10, BchVariant::Extended).unwrap();
        assert_eq!((c.n(), c.k()), (128, 64));
        assert_eq!(c.parity_check().rank(), 64);
        assert!(c.generator().mul(&c.parity_check().transpose()).is_zero());
        for r in 0..c.k() {
            assert_eq!(c.generator().row_weight(r) % 2, 0);
        }
    }

    #[test]
    fn generators_divide_x_n_minus_1() {
        for (m, t, v) in [(6, 1, BchVariant::Expurgated), (7, 10, BchVariant::Extended), (4, 2, BchVariant::Plain)] {
            let c = build_bch(m, t, v).unwrap();
            let info = c.algebraic.as_ref().unwrap();
            let n = info.core_len();
            let xn1 = Gf2Poly::from_exponents(&[0, n]);
            assert!(xn1.rem(&info.generator).is_zero(), "m={m} t={t}");
        }
    }

    #[test]
    fn too_large_t_rejected() {
        assert!(build_bch(3, 4, BchVariant::Plain).is_err());
    }

    #[test]
    fn parity_bits_equal_polynomial_remainder() {
        let c = build_bch(6, 1, BchVariant::Expurgated).unwrap();
        let g = c.algebraic.as_ref().unwrap().generator.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let u = random_bits(&mut rng, 56);
            let cw = c.encode_systematic(&u).unwrap();
            assert_eq!(&cw[..56], &u[..]);
            // x^7 u(x) mod g(x), bit i <-> coefficient of x^(62-i)
            let mut ux = Gf2Poly::zero();
            for (i, &b) in u.iter().enumerate() {
                if b == 1 {
                    ux.flip(62 - i);
                }
            }
            let rem = ux.rem(&g);
            for j in 0..7 {
                assert_eq!(cw[62 - j] == 1, rem.coeff(j));
            }
        }
    }

    #[test]
    fn every_single_flip_corrected_on_63_56() {
        let c = build_bch(6, 1, BchVariant::Expurgated).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let u = random_bits(&mut rng, 56);
        let cw = c.encode_systematic(&u).unwrap();
        let clean = hard_decode_bch(&c, &cw).unwrap();
        assert!(clean.is_success());
        assert_eq!(clean.codeword.as_deref(), Some(&cw[..]));
        for i in 0..63 {
            let mut r = cw.clone();
            r[i] ^= 1;
            let out = hard_decode_bch(&c, &r).unwrap();
            assert!(out.is_success(), "flip {i}");
            assert_eq!(out.codeword.as_deref(), Some(&cw[..]));
            assert_eq!(out.info_bits, u);
        }
    }

    #[test]
    fn double_errors_detected_on_63_56() {
        let c = build_bch(6, 1, BchVariant::Expurgated).unwrap();
        let cw = vec![0u8; 63];
        for i in 0..63 {
            for j in i + 1..63 {
                let mut r = cw.clone();
                r[i] = 1;
                r[j] = 1;
                let out = hard_decode_bch(&c, &r).unwrap();
                assert_eq!(out.status, DecodeStatus::DetectedFailure, "({i},{j})");
            }
        }
    }

    #[test]
    fn core_127_64_corrects_10_and_never_emits_invalid() {
        let c = build_bch(7, 10, BchVariant::Plain).unwrap();
        assert_eq!((c.n(), c.k()), (127, 64));
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for trial in 0..10_000 {
            let u = random_bits(&mut rng, 64);
            let cw = c.encode_systematic(&u).unwrap();
            let nerr = if trial % 2 == 0 { 10 } else { 11 };
            let mut r = cw.clone();
            for i in sample(&mut rng, 127, nerr) {
                r[i] ^= 1;
            }
            let out = hard_decode_bch(&c, &r).unwrap();
            if nerr == 10 {
                assert!(out.is_success());
                assert_eq!(out.codeword.as_deref(), Some(&cw[..]));
            } else if out.is_success() {
                // a miscorrection must still be a codeword
                assert!(c.is_codeword(out.codeword.as_ref().unwrap()));
                assert_ne!(out.codeword.as_deref(), Some(&cw[..]));
            }
        }
    }

    #[test]
    fn extended_code_uses_parity_bit() {
        let c = build_bch(7, 10, BchVariant::Extended).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let u = random_bits(&mut rng, 64);
        let cw = c.encode_systematic(&u).unwrap();
        // 9 core errors plus the parity bit: still within t
        let mut r = cw.clone();
        for i in sample(&mut rng, 127, 9) {
            r[i] ^= 1;
        }
        r[127] ^= 1;
        let out = hard_decode_bch(&c, &r).unwrap();
        assert_eq!(out.codeword.as_deref(), Some(&cw[..]));
        // 11 errors including the parity bit: 10 core errors + parity => detected
        let mut r = cw.clone();
        for i in sample(&mut rng, 127, 10) {
            r[i] ^= 1;
        }
        r[127] ^= 1;
        let out = hard_decode_bch(&c, &r).unwrap();
        assert_eq!(out.status, DecodeStatus::DetectedFailure);
    }

    #[test]
    fn plain_code_without_algebra_rejected() {
        let g = Gf2Matrix::from_rows(&[[1u8, 1, 1]]);
        let c = BinaryLinearCode::from_generator("rep", &g).unwrap();
        assert!(hard_decode_bch(&c, &[1, 1, 1]).is_err());
    }
}

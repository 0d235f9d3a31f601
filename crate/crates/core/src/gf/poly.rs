use std::fmt;

use super::Gf2mField;

/// Polynomial over GF(2), coefficient `i` stored at bit `i`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Gf2Poly {
    words: Vec<u64>,
}

impl Gf2Poly {
    pub fn zero() -> Self {
        Gf2Poly { words: Vec::new() }
    }

    pub fn one() -> Self {
        Gf2Poly::from_u64(1)
    }

    pub fn from_u64(bits: u64) -> Self {
        let mut p = Gf2Poly { words: vec![bits] };
        p.trim();
        p
    }

    /// Builds a polynomial from the exponents of its nonzero terms.
    pub fn from_exponents(exps: &[usize]) -> Self {
        let mut p = Gf2Poly::zero();
        for &e in exps {
            p.flip(e);
        }
        p
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some(64 * (self.words.len() - 1) + 63 - last.leading_zeros() as usize)
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words
            .get(i / 64)
            .is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    pub fn flip(&mut self, i: usize) {
        if self.words.len() <= i / 64 {
            self.words.resize(i / 64 + 1, 0);
        }
        self.words[i / 64] ^= 1 << (i % 64);
        self.trim();
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn add(&self, other: &Gf2Poly) -> Gf2Poly {
        let len = self.words.len().max(other.words.len());
        let mut words = vec![0u64; len];
        for (i, w) in words.iter_mut().enumerate() {
            *w = self.words.get(i).copied().unwrap_or(0) ^ other.words.get(i).copied().unwrap_or(0);
        }
        let mut p = Gf2Poly { words };
        p.trim();
        p
    }

    fn shifted(&self, s: usize) -> Gf2Poly {
        if self.is_zero() {
            return Gf2Poly::zero();
        }
        let (ws, bs) = (s / 64, s % 64);
        let mut words = vec![0u64; self.words.len() + ws + 1];
        for (i, &w) in self.words.iter().enumerate() {
            words[i + ws] ^= w << bs;
            if bs != 0 {
                words[i + ws + 1] ^= w >> (64 - bs);
            }
        }
        let mut p = Gf2Poly { words };
        p.trim();
        p
    }

    pub fn mul(&self, other: &Gf2Poly) -> Gf2Poly {
        let mut acc = Gf2Poly::zero();
        if let Some(d) = other.degree() {
            for i in 0..=d {
                if other.coeff(i) {
                    acc = acc.add(&self.shifted(i));
                }
            }
        }
        acc
    }

    /// Quotient and remainder of division by a nonzero `divisor`.
    pub fn div_rem(&self, divisor: &Gf2Poly) -> (Gf2Poly, Gf2Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let mut rem = self.clone();
        let mut quot = Gf2Poly::zero();
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            quot.flip(rd - dd);
            rem = rem.add(&divisor.shifted(rd - dd));
        }
        (quot, rem)
    }

    pub fn rem(&self, divisor: &Gf2Poly) -> Gf2Poly {
        self.div_rem(divisor).1
    }

    pub fn gcd(&self, other: &Gf2Poly) -> Gf2Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }

    /// `x^e`.
    pub fn monomial(e: usize) -> Gf2Poly {
        Gf2Poly::from_exponents(&[e])
    }

    /// Evaluates the polynomial at an element of an extension field.
    pub fn eval(&self, field: &Gf2mField, x: u32) -> u32 {
        let Some(d) = self.degree() else { return 0 };
        // Horner from the top coefficient.
        let mut acc = 0u32;
        for i in (0..=d).rev() {
            acc = field.mul(acc, x) ^ u32::from(self.coeff(i));
        }
        acc
    }

    /// Low 64 coefficients as a word (for small-degree polynomials).
    pub fn low_word(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }
}

impl fmt::Debug for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Poly({self})")
    }
}

impl fmt::Display for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(d) = self.degree() else {
            return write!(f, "0");
        };
        let mut first = true;
        for i in (0..=d).rev() {
            if !self.coeff(i) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "1")?,
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_small() {
        let a = Gf2Poly::from_exponents(&[0, 1]); // x + 1
        let sq = a.mul(&a);
        assert_eq!(sq, Gf2Poly::from_exponents(&[0, 2]));
        let (q, r) = sq.div_rem(&a);
        assert_eq!(q, a);
        assert!(r.is_zero());
        assert_eq!(format!("{sq}"), "x^2 + 1");
    }

    #[test]
    fn long_shift_crosses_words() {
        let p = Gf2Poly::monomial(63).mul(&Gf2Poly::from_exponents(&[0, 1, 70]));
        assert_eq!(p, Gf2Poly::from_exponents(&[63, 64, 133]));
        assert_eq!(p.degree(), Some(133));
    }

    #[test]
    fn gcd_of_coprime_is_one() {
        let a = Gf2Poly::from_exponents(&[0, 1, 3]);
        let b = Gf2Poly::from_exponents(&[0, 2, 3]);
        assert_eq!(a.gcd(&b), Gf2Poly::one());
    }
}

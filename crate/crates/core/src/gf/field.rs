use super::Gf2Poly;
use crate::{Error, Result};

/// GF(2^m) with log/antilog tables. Elements are `u32` bit patterns in the
/// polynomial basis; `0` is the zero element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf2mField {
    m: u32,
    primitive_poly: u32,
    // exp[i] = alpha^i for i in 0..2*(q-1), doubled to skip a modulo in mul.
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// Standard primitive polynomial for each degree, bit `i` = coefficient of `x^i`.
pub fn default_primitive_poly(m: u32) -> Option<u32> {
    Some(match m {
        2 => 0b111,
        3 => 0b1011,
        4 => 0x13,
        5 => 0x25,
        6 => 0x43,
        7 => 0x89,
        8 => 0x11D,
        9 => 0x211,
        10 => 0x409,
        11 => 0x805,
        12 => 0x1053,
        13 => 0x201B,
        14 => 0x4443,
        15 => 0x8003,
        16 => 0x1100B,
        _ => return None,
    })
}

fn is_irreducible(poly: u32, m: u32) -> bool {
    let p = Gf2Poly::from_u64(u64::from(poly));
    for d in 1..=m / 2 {
        for cand in (1u64 << d)..(1u64 << (d + 1)) {
            if p.rem(&Gf2Poly::from_u64(cand)).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Builds GF(2^m) from a primitive polynomial of degree `m`.
pub fn make_field(m: u32, primitive_poly: u32) -> Result<Gf2mField> {
    if !(2..=16).contains(&m) {
        return Err(Error::Field(format!("degree m={m} outside 2..=16")));
    }
    if primitive_poly >> m != 1 {
        return Err(Error::Field(format!(
            "polynomial {} does not have degree {m}",
            Gf2Poly::from_u64(u64::from(primitive_poly))
        )));
    }
    if primitive_poly & 1 == 0 {
        return Err(Error::Field("polynomial has zero constant term".into()));
    }
    if !is_irreducible(primitive_poly, m) {
        return Err(Error::Field(format!(
            "polynomial {} is reducible",
            Gf2Poly::from_u64(u64::from(primitive_poly))
        )));
    }
    let q1 = (1usize << m) - 1;
    let mut exp = vec![0u32; 2 * q1];
    let mut log = vec![0u32; q1 + 1];
    let mut x = 1u32;
    for (i, e) in exp.iter_mut().take(q1).enumerate() {
        if i > 0 && x == 1 {
            return Err(Error::Field(format!(
                "polynomial {} is irreducible but not primitive (order of x is {i})",
                Gf2Poly::from_u64(u64::from(primitive_poly))
            )));
        }
        *e = x;
        log[x as usize] = i as u32;
        x <<= 1;
        if x >> m != 0 {
            x ^= primitive_poly;
        }
    }
    for i in q1..2 * q1 {
        exp[i] = exp[i - q1];
    }
    Ok(Gf2mField {
        m,
        primitive_poly,
        exp,
        log,
    })
}

impl Gf2mField {
    /// Field with the default primitive polynomial for `m`.
    pub fn with_default_poly(m: u32) -> Result<Self> {
        let poly = default_primitive_poly(m)
            .ok_or_else(|| Error::Field(format!("no default polynomial for m={m}")))?;
        make_field(m, poly)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn primitive_poly(&self) -> u32 {
        self.primitive_poly
    }

    /// Number of nonzero elements, `2^m - 1`.
    pub fn order(&self) -> usize {
        (1usize << self.m) - 1
    }

    /// `alpha^i`, any integer exponent.
    pub fn alpha_pow(&self, i: i64) -> u32 {
        let q1 = self.order() as i64;
        self.exp[i.rem_euclid(q1) as usize]
    }

    /// Discrete log of a nonzero element.
    pub fn log(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.log[a as usize])
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            0
        } else {
            self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
        }
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        let l = self.log(a)? as usize;
        Some(self.exp[(self.order() - l) % self.order()])
    }

    pub fn div(&self, a: u32, b: u32) -> Option<u32> {
        Some(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if a == 0 {
            return u32::from(e == 0);
        }
        let l = u64::from(self.log[a as usize]);
        self.exp[((l * (e % self.order() as u64)) % self.order() as u64) as usize]
    }
}

/// Lowest-degree monic binary polynomial having `elem` as a root.
pub fn minimal_polynomial(field: &Gf2mField, elem: u32) -> Result<Gf2Poly> {
    if elem == 0 {
        return Err(Error::InvalidArgument(
            "minimal polynomial of the zero element".into(),
        ));
    }
    let mut conjugates = vec![elem];
    let mut c = field.mul(elem, elem);
    while c != elem {
        conjugates.push(c);
        c = field.mul(c, c);
    }
    // Product of (x + c) with coefficients in GF(2^m), lowest degree first.
    let mut coeffs: Vec<u32> = vec![1];
    for &c in &conjugates {
        let mut next = vec![0u32; coeffs.len() + 1];
        for (i, &a) in coeffs.iter().enumerate() {
            next[i + 1] ^= a;
            next[i] ^= field.mul(a, c);
        }
        coeffs = next;
    }
    let mut poly = Gf2Poly::zero();
    for (i, &a) in coeffs.iter().enumerate() {
        match a {
            0 => {}
            1 => poly.flip(i),
            _ => {
                return Err(Error::Numeric(
                    "minimal polynomial has a non-binary coefficient".into(),
                ))
            }
        }
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_field() {
        let f = make_field(2, 0b111).unwrap();
        assert_eq!(f.order(), 3);
        let a = f.alpha_pow(1);
        assert_eq!(f.mul(f.mul(a, a), a), 1);
        let mut elems: Vec<u32> = (0..3).map(|i| f.alpha_pow(i)).collect();
        elems.sort();
        assert_eq!(elems, vec![1, 2, 3]);
    }

    #[test]
    fn alpha_has_order_63_in_gf64() {
        let f = make_field(6, 0x43).unwrap();
        let a = f.alpha_pow(1);
        let mut x = 1;
        for i in 1..=63 {
            x = f.mul(x, a);
            if i < 63 {
                assert_ne!(x, 1, "alpha^{i} = 1 too early");
            }
        }
        assert_eq!(x, 1);
    }

    #[test]
    fn rejects_reducible_and_bad_degree() {
        // x^3 + x^2 + x + 1 = (x + 1)^3
        let err = make_field(3, 0b1111).unwrap_err();
        assert!(err.to_string().contains("reducible"), "{err}");
        assert!(make_field(3, 0b10011).is_err());
        assert!(make_field(4, 0b10010).is_err());
        // x^4 + x^3 + x^2 + x + 1 is irreducible but alpha has order 5
        let err = make_field(4, 0b11111).unwrap_err();
        assert!(err.to_string().contains("not primitive"), "{err}");
    }

    #[test]
    fn default_polys_are_primitive() {
        for m in 2..=16 {
            Gf2mField::with_default_poly(m).unwrap();
        }
    }

    #[test]
    fn field_axioms_exhaustive_up_to_gf256() {
        for m in 2..=8 {
            let f = Gf2mField::with_default_poly(m).unwrap();
            let q = 1u32 << m;
            for a in 1..q {
                let ai = f.inv(a).unwrap();
                assert_eq!(f.mul(a, ai), 1);
                for b in 1..q {
                    let ab = f.mul(a, b);
                    assert_eq!(ab, f.mul(b, a));
                    if m <= 5 {
                        for c in 1..q {
                            assert_eq!(f.mul(ab, c), f.mul(a, f.mul(b, c)));
                        }
                    }
                }
            }
            if m > 5 {
                // associativity on a deterministic sample for the larger fields
                for a in (1..q).step_by(7) {
                    for b in (1..q).step_by(5) {
                        for c in (1..q).step_by(3) {
                            assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn minimal_polynomial_of_one() {
        let f = Gf2mField::with_default_poly(4).unwrap();
        assert_eq!(minimal_polynomial(&f, 1).unwrap(), Gf2Poly::from_exponents(&[0, 1]));
        assert!(minimal_polynomial(&f, 0).is_err());
    }

    #[test]
    fn minimal_polynomial_gf8_alpha() {
        let f = Gf2mField::with_default_poly(3).unwrap();
        let a = f.alpha_pow(1);
        let p = minimal_polynomial(&f, a).unwrap();
        assert_eq!(p.degree(), Some(3));
        for e in [1, 2, 4] {
            assert_eq!(p.eval(&f, f.alpha_pow(e)), 0);
        }
    }

    #[test]
    fn minimal_polynomial_gf64_alpha9() {
        let f = Gf2mField::with_default_poly(6).unwrap();
        let p = minimal_polynomial(&f, f.alpha_pow(9)).unwrap();
        // Conjugacy class of 9 mod 63 by repeated doubling.
        let mut class = vec![9usize];
        let mut e = 18 % 63;
        while e != 9 {
            class.push(e);
            e = (2 * e) % 63;
        }
        let deg = p.degree().unwrap();
        assert_eq!(deg, class.len());
        assert_eq!(6 % deg, 0);
        let roots: Vec<usize> = (0..63)
            .filter(|&i| p.eval(&f, f.alpha_pow(i as i64)) == 0)
            .collect();
        let mut sorted = class.clone();
        sorted.sort();
        assert_eq!(roots, sorted);
    }
}

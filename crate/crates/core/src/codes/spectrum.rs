use std::fmt::Write as _;
use std::path::Path;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use super::BinaryLinearCode;
use crate::{Error, Result};

/// Largest dimension (of the code or of its dual) enumerated by
/// [`spectrum_bruteforce`].
pub const MAX_BRUTEFORCE_DIM: usize = 28;

/// Weight distribution `(i, A_i)` of an (n, k) code, zero entries omitted.
///
/// A truncated spectrum is only known up to its largest listed weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSpectrum {
    pub n: usize,
    pub k: usize,
    entries: Vec<(usize, BigUint)>,
    complete: bool,
}

impl WeightSpectrum {
    /// Validates and wraps a list of `(weight, multiplicity)` pairs.
    pub fn new(
        n: usize,
        k: usize,
        entries: Vec<(usize, BigUint)>,
        complete: bool,
    ) -> Result<Self> {
        let entries: Vec<(usize, BigUint)> =
            entries.into_iter().filter(|(_, a)| !a.is_zero()).collect();
        match entries.first() {
            Some((0, a)) if a.is_one() => {}
            _ => {
                return Err(Error::InvalidArgument(
                    "spectrum must start with A_0 = 1".into(),
                ))
            }
        }
        for w in entries.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::InvalidArgument(format!(
                    "weights not strictly increasing at {}",
                    w[1].0
                )));
            }
        }
        if let Some((w, _)) = entries.last() {
            if *w > n {
                return Err(Error::InvalidArgument(format!("weight {w} exceeds n={n}")));
            }
        }
        let s = WeightSpectrum {
            n,
            k,
            entries,
            complete,
        };
        if complete && s.total() != BigUint::one() << k {
            return Err(Error::InvalidArgument(format!(
                "complete spectrum sums to {} instead of 2^{k}",
                s.total()
            )));
        }
        Ok(s)
    }

    pub fn entries(&self) -> &[(usize, BigUint)] {
        &self.entries
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// Largest weight for which the multiplicity is known.
    pub fn covered_up_to(&self) -> usize {
        if self.complete {
            self.n
        } else {
            self.entries.last().map_or(0, |e| e.0)
        }
    }

    pub fn multiplicity(&self, w: usize) -> BigUint {
        self.entries
            .iter()
            .find(|e| e.0 == w)
            .map_or_else(BigUint::zero, |e| e.1.clone())
    }

    pub fn total(&self) -> BigUint {
        self.entries.iter().map(|e| &e.1).sum()
    }

    /// Smallest nonzero weight present.
    pub fn min_distance(&self) -> Option<usize> {
        self.entries.iter().map(|e| e.0).find(|&w| w > 0)
    }

    /// Pointwise sum of two spectra of equal length (not itself a code spectrum).
    pub fn sum_entries(&self, other: &WeightSpectrum) -> Vec<(usize, f64)> {
        let mut out: Vec<(usize, f64)> = Vec::new();
        for w in 0..=self.n.max(other.n) {
            let a = self.multiplicity(w) + other.multiplicity(w);
            if !a.is_zero() {
                out.push((w, a.to_f64().unwrap_or(f64::INFINITY)));
            }
        }
        out
    }

    /// Serialises to the text weight-spectrum format.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{} {} {}\n",
            self.n,
            self.k,
            if self.complete { "complete" } else { "truncated" }
        );
        for (w, a) in &self.entries {
            let _ = writeln!(s, "{w} {a}");
        }
        s
    }
}

/// Parses the text weight-spectrum format. `origin` only labels errors.
pub fn parse_spectrum(text: &str, origin: &Path) -> Result<WeightSpectrum> {
    let mut header: Option<(usize, usize, bool)> = None;
    let mut entries: Vec<(usize, BigUint)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let Some((n, _, _)) = header else {
            if toks.len() != 3 {
                return Err(Error::parse(origin, lineno, "header must be `n k complete|truncated`"));
            }
            let n = toks[0]
                .parse()
                .map_err(|_| Error::parse(origin, lineno, "bad n"))?;
            let k = toks[1]
                .parse()
                .map_err(|_| Error::parse(origin, lineno, "bad k"))?;
            let complete = match toks[2] {
                "complete" => true,
                "truncated" => false,
                other => {
                    return Err(Error::parse(
                        origin,
                        lineno,
                        format!("expected complete|truncated, found `{other}`"),
                    ))
                }
            };
            header = Some((n, k, complete));
            continue;
        };
        if toks.len() != 2 {
            return Err(Error::parse(origin, lineno, "expected `<weight> <multiplicity>`"));
        }
        let w: usize = toks[0]
            .parse()
            .map_err(|_| Error::parse(origin, lineno, format!("bad weight `{}`", toks[0])))?;
        let a: BigUint = toks[1].parse().map_err(|_| {
            Error::parse(origin, lineno, format!("bad multiplicity `{}`", toks[1]))
        })?;
        if w > n {
            return Err(Error::parse(origin, lineno, format!("weight {w} exceeds n={n}")));
        }
        match entries.last() {
            None if w != 0 || !a.is_one() => {
                return Err(Error::parse(origin, lineno, "first entry must be `0 1`"));
            }
            Some((prev, _)) if w <= *prev => {
                let what = if w == *prev { "duplicate" } else { "decreasing" };
                return Err(Error::parse(origin, lineno, format!("{what} weight {w}")));
            }
            _ => {}
        }
        entries.push((w, a));
    }
    let (n, k, complete) = header.ok_or_else(|| Error::parse(origin, 1, "empty spectrum file"))?;
    if entries.is_empty() {
        return Err(Error::parse(origin, 1, "no entries"));
    }
    WeightSpectrum::new(n, k, entries, complete).map_err(|e| Error::parse(origin, 0, e.to_string()))
}

pub fn load_spectrum(path: impl AsRef<Path>) -> Result<WeightSpectrum> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_spectrum(&text, path)
}

fn binomial_table(n: usize) -> Vec<Vec<BigInt>> {
    let mut c = vec![vec![BigInt::zero(); n + 1]; n + 1];
    for i in 0..=n {
        c[i][0] = BigInt::one();
        for j in 1..=i {
            c[i][j] = &c[i - 1][j - 1] + &c[i - 1][j];
        }
    }
    c
}

/// MacWilliams transform: primal spectrum from the complete spectrum of the dual.
pub fn macwilliams(dual: &WeightSpectrum) -> Result<WeightSpectrum> {
    if !dual.complete {
        return Err(Error::InvalidArgument(
            "MacWilliams transform needs a complete dual spectrum".into(),
        ));
    }
    let n = dual.n;
    let c = binomial_table(n);
    let denom = BigInt::one() << dual.k;
    let mut out = Vec::new();
    for j in 0..=n {
        let mut acc = BigInt::zero();
        for (i, b) in &dual.entries {
            let i = *i;
            // Krawtchouk K_j(i) = sum_s (-1)^s C(i,s) C(n-i, j-s)
            let mut kraw = BigInt::zero();
            for s in 0..=j.min(i) {
                if j - s > n - i {
                    continue;
                }
                let term = &c[i][s] * &c[n - i][j - s];
                if s % 2 == 0 {
                    kraw += term;
                } else {
                    kraw -= term;
                }
            }
            acc += BigInt::from(b.clone()) * kraw;
        }
        if acc.is_zero() {
            continue;
        }
        let (q, r) = (&acc / &denom, &acc % &denom);
        if !r.is_zero() || q.sign() == num_bigint::Sign::Minus {
            return Err(Error::Numeric(format!(
                "input is not the spectrum of a linear code (A_{j} = {acc}/{denom})"
            )));
        }
        out.push((j, q.to_biguint().expect("non-negative")));
    }
    WeightSpectrum::new(n, n - dual.k, out, true)
}

fn enumerate_row_space(rows: &[Vec<u64>], n: usize) -> Vec<u64> {
    let mut hist = vec![0u64; n + 1];
    let words = rows.first().map_or(1, |r| r.len());
    let mut acc = vec![0u64; words];
    hist[0] = 1;
    let d = rows.len();
    for i in 1u64..(1u64 << d) {
        let r = &rows[i.trailing_zeros() as usize];
        let mut w = 0u32;
        for (a, x) in acc.iter_mut().zip(r) {
            *a ^= x;
            w += a.count_ones();
        }
        hist[w as usize] += 1;
    }
    hist
}

/// Exact weight spectrum by enumerating the smaller of the code and its dual.
pub fn spectrum_bruteforce(code: &BinaryLinearCode) -> Result<WeightSpectrum> {
    let (n, k) = (code.n(), code.k());
    let small = k.min(n - k);
    if small > MAX_BRUTEFORCE_DIM {
        return Err(Error::Refused(format!(
            "min(k, n-k) = {small} exceeds {MAX_BRUTEFORCE_DIM}; 2^{small} words are too many to enumerate"
        )));
    }
    let to_spectrum = |hist: Vec<u64>, dim: usize| {
        let entries = hist
            .into_iter()
            .enumerate()
            .filter(|(_, a)| *a > 0)
            .map(|(w, a)| (w, BigUint::from(a)))
            .collect();
        WeightSpectrum::new(n, dim, entries, true)
    };
    if k <= n - k {
        let g = code.generator();
        let rows: Vec<Vec<u64>> = (0..k).map(|r| g.row(r).to_vec()).collect();
        to_spectrum(enumerate_row_space(&rows, n), k)
    } else {
        let h = code.parity_check();
        let rows: Vec<Vec<u64>> = (0..h.rows()).map(|r| h.row(r).to_vec()).collect();
        let dual = to_spectrum(enumerate_row_space(&rows, n), n - k)?;
        macwilliams(&dual)
    }
}

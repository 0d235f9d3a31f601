use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Dither window of DRP interleavers.
pub const DRP_WINDOW: usize = 4;

const SPREAD_ATTEMPTS: usize = 2000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InterleaverParams {
    Random,
    Spread { s: usize },
    Qpp { f1: u64, f2: u64 },
    Drp {
        p: usize,
        start: usize,
        read: Vec<usize>,
        write: Vec<usize>,
    },
}

impl InterleaverParams {
    pub fn kind(&self) -> &'static str {
        match self {
            InterleaverParams::Random => "random",
            InterleaverParams::Spread { .. } => "spread",
            InterleaverParams::Qpp { .. } => "qpp",
            InterleaverParams::Drp { .. } => "drp",
        }
    }
}

/// Permutation `π` on `0..K`; the second encoder reads `u[π(i)]` at time `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interleaver {
    params: InterleaverParams,
    seed: u64,
    perm: Vec<usize>,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn check_bijection(perm: &[usize]) -> Result<()> {
    let mut seen = vec![false; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        if p >= perm.len() || seen[p] {
            return Err(Error::InvalidArgument(format!(
                "not a permutation: entry {i} = {p}"
            )));
        }
        seen[p] = true;
    }
    Ok(())
}

fn is_dither(v: &[usize]) -> bool {
    let mut s = v.to_vec();
    s.sort_unstable();
    s == (0..DRP_WINDOW).collect::<Vec<_>>()
}

/// `π(i) = R((start + W(i)·p) mod K)` with `R`, `W` the window-expanded read/write dithers.
fn drp_perm(k: usize, p: usize, start: usize, read: &[usize], write: &[usize]) -> Vec<usize> {
    let expand = |d: &[usize], i: usize| DRP_WINDOW * (i / DRP_WINDOW) + d[i % DRP_WINDOW];
    (0..k)
        .map(|i| expand(read, (start + expand(write, i) * p) % k))
        .collect()
}

/// The S-random spread predicate: `0 < |i-j| <= s` implies `|π(i)-π(j)| >= s`.
pub fn satisfies_spread(perm: &[usize], s: usize) -> bool {
    for i in 0..perm.len() {
        for j in i + 1..perm.len().min(i + s + 1) {
            if perm[i].abs_diff(perm[j]) < s {
                return false;
            }
        }
    }
    true
}

fn spread_perm(k: usize, s: usize, seed: u64) -> Result<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    'attempt: for _ in 0..SPREAD_ATTEMPTS {
        let mut pool: Vec<usize> = (0..k).collect();
        pool.shuffle(&mut rng);
        let mut perm = Vec::with_capacity(k);
        while !pool.is_empty() {
            let i = perm.len();
            let lo = i.saturating_sub(s);
            let pick = pool
                .iter()
                .position(|&v| perm[lo..i].iter().all(|&q: &usize| q.abs_diff(v) >= s));
            match pick {
                Some(idx) => perm.push(pool.swap_remove(idx)),
                None => continue 'attempt,
            }
        }
        return Ok(perm);
    }
    Err(Error::Numeric(format!(
        "no spread permutation with S = {s} for K = {k} after {SPREAD_ATTEMPTS} attempts"
    )))
}

impl Interleaver {
    /// Builds and checks an interleaver of length `k`.
    pub fn new(params: InterleaverParams, k: usize, seed: u64) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidArgument(format!("interleaver length {k} < 2")));
        }
        let perm = match &params {
            InterleaverParams::Random => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut p: Vec<usize> = (0..k).collect();
                p.shuffle(&mut rng);
                p
            }
            InterleaverParams::Spread { s } => spread_perm(k, *s, seed)?,
            InterleaverParams::Qpp { f1, f2 } => {
                let kk = k as u64;
                if gcd(*f1 % kk, kk) != 1 {
                    return Err(Error::InvalidArgument(format!("QPP needs gcd(f1, K) = 1, f1 = {f1}")));
                }
                if let Some(p) = prime_factors(kk).into_iter().find(|p| f2 % p != 0) {
                    return Err(Error::InvalidArgument(format!(
                        "QPP needs every prime factor of K to divide f2; {p} does not divide {f2}"
                    )));
                }
                (0..kk)
                    .map(|i| ((f1 % kk * i + (f2 % kk) * (i * i % kk)) % kk) as usize)
                    .collect()
            }
            InterleaverParams::Drp { p, start, read, write } => {
                if k % DRP_WINDOW != 0 {
                    return Err(Error::InvalidArgument(format!(
                        "DRP length {k} not a multiple of the dither window {DRP_WINDOW}"
                    )));
                }
                if gcd(*p as u64, k as u64) != 1 {
                    return Err(Error::InvalidArgument(format!("DRP step {p} not coprime with {k}")));
                }
                if !is_dither(read) || !is_dither(write) {
                    return Err(Error::InvalidArgument(format!(
                        "DRP dithers must be permutations of 0..{DRP_WINDOW}"
                    )));
                }
                drp_perm(k, *p, *start, read, write)
            }
        };
        check_bijection(&perm)?;
        Ok(Interleaver { params, seed, perm })
    }

    /// A random DRP drawn from `rng`: random dithers, step coprime with `k`, random start.
    pub fn random_drp(k: usize, rng: &mut impl Rng, seed: u64) -> Result<Self> {
        let mut read: Vec<usize> = (0..DRP_WINDOW).collect();
        let mut write = read.clone();
        read.shuffle(rng);
        write.shuffle(rng);
        let p = loop {
            let p = rng.random_range(3..k);
            if gcd(p as u64, k as u64) == 1 {
                break p;
            }
        };
        let start = rng.random_range(0..k);
        Interleaver::new(InterleaverParams::Drp { p, start, read, write }, k, seed)
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn params(&self) -> &InterleaverParams {
        &self.params
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `out[i] = x[π(i)]`.
    pub fn permute<T: Copy>(&self, x: &[T]) -> Vec<T> {
        self.perm.iter().map(|&p| x[p]).collect()
    }

    /// Inverse of [`Interleaver::permute`].
    pub fn unpermute<T: Copy + Default>(&self, y: &[T]) -> Vec<T> {
        let mut out = vec![T::default(); y.len()];
        for (i, &p) in self.perm.iter().enumerate() {
            out[p] = y[i];
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut head = format!("{} {} {}", self.params.kind(), self.len(), self.seed);
        let list = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match &self.params {
            InterleaverParams::Random => {}
            InterleaverParams::Spread { s } => write!(head, " s={s}").unwrap(),
            InterleaverParams::Qpp { f1, f2 } => write!(head, " f1={f1} f2={f2}").unwrap(),
            InterleaverParams::Drp { p, start, read, write } => write!(
                head,
                " p={p} start={start} read={} write={}",
                list(read),
                list(write)
            )
            .unwrap(),
        }
        let mut out = head;
        out.push('\n');
        for p in &self.perm {
            writeln!(out, "{p}").unwrap();
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Interleaver::parse(&text, path)
    }

    /// Parses the text form. The explicit permutation is authoritative and is
    /// checked for bijectivity and against the parameters in the header.
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, head) = lines.next().ok_or_else(|| Error::parse(origin, 1, "empty file"))?;
        let toks: Vec<&str> = head.split_whitespace().collect();
        if toks.len() < 3 {
            return Err(Error::parse(origin, 1, "expected `kind K seed params...`"));
        }
        let num = |s: &str| -> Result<u64> {
            s.parse().map_err(|_| Error::parse(origin, 1, format!("bad number {s:?}")))
        };
        let k = num(toks[1])? as usize;
        let seed = num(toks[2])?;
        let mut kv = std::collections::HashMap::new();
        for t in &toks[3..] {
            let (key, val) = t
                .split_once('=')
                .ok_or_else(|| Error::parse(origin, 1, format!("expected key=value, got {t:?}")))?;
            kv.insert(key, val);
        }
        let get = |key: &str| -> Result<&str> {
            kv.get(key)
                .copied()
                .ok_or_else(|| Error::parse(origin, 1, format!("missing parameter {key}")))
        };
        let list = |s: &str| -> Result<Vec<usize>> {
            s.split(',').map(|x| num(x).map(|v| v as usize)).collect()
        };
        let params = match toks[0] {
            "random" => InterleaverParams::Random,
            "spread" => InterleaverParams::Spread { s: num(get("s")?)? as usize },
            "qpp" => InterleaverParams::Qpp {
                f1: num(get("f1")?)?,
                f2: num(get("f2")?)?,
            },
            "drp" => InterleaverParams::Drp {
                p: num(get("p")?)? as usize,
                start: num(get("start")?)? as usize,
                read: list(get("read")?)?,
                write: list(get("write")?)?,
            },
            other => return Err(Error::parse(origin, 1, format!("unknown interleaver kind {other:?}"))),
        };
        let mut perm = Vec::with_capacity(k);
        for (i, line) in lines {
            let v = line
                .trim()
                .parse::<usize>()
                .map_err(|_| Error::parse(origin, i + 1, format!("bad index {:?}", line.trim())))?;
            perm.push(v);
        }
        if perm.len() != k {
            return Err(Error::parse(origin, 1, format!("header says K = {k}, file lists {}", perm.len())));
        }
        check_bijection(&perm).map_err(|e| Error::parse(origin, 1, e.to_string()))?;
        match &params {
            InterleaverParams::Random => {}
            InterleaverParams::Spread { s } => {
                if !satisfies_spread(&perm, *s) {
                    return Err(Error::parse(origin, 1, format!("permutation violates spread S = {s}")));
                }
            }
            _ => {
                let rebuilt = Interleaver::new(params.clone(), k, seed)?;
                if rebuilt.perm != perm {
                    return Err(Error::parse(origin, 1, "permutation does not match header parameters"));
                }
            }
        }
        Ok(Interleaver { params, seed, perm })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qpp_identity() {
        let i = Interleaver::new(InterleaverParams::Qpp { f1: 1, f2: 0 }, 64, 0).unwrap();
        assert_eq!(i.perm(), (0..64).collect::<Vec<_>>().as_slice());
        assert!(Interleaver::new(InterleaverParams::Qpp { f1: 2, f2: 0 }, 64, 0).is_err());
        assert!(Interleaver::new(InterleaverParams::Qpp { f1: 3, f2: 3 }, 64, 0).is_err());
        assert!(Interleaver::new(InterleaverParams::Qpp { f1: 7, f2: 16 }, 64, 0).is_ok());
    }

    #[test]
    fn drp_without_dither_is_relative_prime() {
        let id: Vec<usize> = (0..DRP_WINDOW).collect();
        let params = InterleaverParams::Drp { p: 9, start: 5, read: id.clone(), write: id };
        let i = Interleaver::new(params, 64, 0).unwrap();
        for (n, &v) in i.perm().iter().enumerate() {
            assert_eq!(v, (5 + n * 9) % 64);
        }
    }

    #[test]
    fn random_drps_are_bijections() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for s in 0..200 {
            let i = Interleaver::random_drp(64, &mut rng, s).unwrap();
            check_bijection(i.perm()).unwrap();
        }
    }

    #[test]
    fn spread_predicate_holds() {
        let i = Interleaver::new(InterleaverParams::Spread { s: 4 }, 64, 3).unwrap();
        assert!(satisfies_spread(i.perm(), 4));
        let err = Interleaver::new(InterleaverParams::Spread { s: 40 }, 64, 3).unwrap_err();
        assert!(err.to_string().contains("S = 40"));
    }

    #[test]
    fn text_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let i = Interleaver::random_drp(64, &mut rng, 17).unwrap();
        let back = Interleaver::parse(&i.to_text(), Path::new("x")).unwrap();
        assert_eq!(back, i);
        let r = Interleaver::new(InterleaverParams::Random, 16, 4).unwrap();
        assert_eq!(Interleaver::parse(&r.to_text(), Path::new("x")).unwrap(), r);
        let broken = r.to_text().replacen('\n', "\n0\n", 1);
        assert!(Interleaver::parse(&broken, Path::new("x")).is_err());
    }

    #[test]
    fn permute_inverse() {
        let i = Interleaver::new(InterleaverParams::Random, 20, 9).unwrap();
        let x: Vec<u32> = (0..20).map(|v| v * 3).collect();
        assert_eq!(i.unpermute(&i.permute(&x)), x);
    }
}

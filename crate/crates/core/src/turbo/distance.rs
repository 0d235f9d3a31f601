use std::cmp::Ordering;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Interleaver, InterleaverParams, PuncturingPattern, RscSpec, TurboCodeSpec};
use crate::{Error, Result};

/// Upper limit on the number of input patterns a distance search may visit.
pub const DISTANCE_GUARD: f64 = 1e8;

const WORDS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceReport {
    /// Smallest codeword weight found; an upper bound on the minimum distance.
    pub d_min_upper: usize,
    /// Number of inputs (of weight at most `w_max_searched`) reaching it.
    pub a_at_d: u64,
    pub w_max_searched: usize,
    /// Every nonzero input was enumerated, so `d_min_upper` is exact.
    pub exhaustive: bool,
}

impl DistanceReport {
    /// Better reports sort first: larger distance, then smaller multiplicity.
    pub fn rank_cmp(&self, other: &Self) -> Ordering {
        other
            .d_min_upper
            .cmp(&self.d_min_upper)
            .then(self.a_at_d.cmp(&other.a_at_d))
    }
}

fn patterns_up_to(k: usize, w: usize) -> f64 {
    let mut total = 0.0;
    let mut c = 1.0;
    for i in 1..=w {
        c = c * (k + 1 - i) as f64 / i as f64;
        total += c;
    }
    total
}

type Packed = [u64; WORDS];

fn pack(bits: impl Iterator<Item = u8>) -> Packed {
    let mut out = [0u64; WORDS];
    for (i, b) in bits.enumerate() {
        if b == 1 {
            out[i / 64] |= 1 << (i % 64);
        }
    }
    out
}

struct Tally {
    best: usize,
    count: u64,
}

fn dfs(resp: &[Packed], start: usize, left: usize, acc: &Packed, tally: &mut Tally) {
    for j in start..resp.len() {
        let mut a = *acc;
        let mut w = 0;
        for (x, r) in a.iter_mut().zip(&resp[j]) {
            *x ^= r;
            w += x.count_ones() as usize;
        }
        match w.cmp(&tally.best) {
            Ordering::Less => {
                tally.best = w;
                tally.count = 1;
            }
            Ordering::Equal => tally.count += 1,
            Ordering::Greater => {}
        }
        if left > 1 {
            dfs(resp, j + 1, left - 1, &a, tally);
        }
    }
}

fn search_responses(resp: &[Packed], w_max: usize) -> Result<DistanceReport> {
    let k = resp.len();
    let w = w_max.min(k);
    if w == 0 {
        return Err(Error::InvalidArgument("w_max must be at least 1".into()));
    }
    let visits = patterns_up_to(k, w);
    if visits > DISTANCE_GUARD {
        return Err(Error::Refused(format!(
            "distance search over {visits:.3e} input patterns exceeds the limit of {DISTANCE_GUARD:e}"
        )));
    }
    let mut tally = Tally {
        best: usize::MAX,
        count: 0,
    };
    dfs(resp, 0, w, &[0; WORDS], &mut tally);
    Ok(DistanceReport {
        d_min_upper: tally.best,
        a_at_d: tally.count,
        w_max_searched: w,
        exhaustive: w == k,
    })
}

fn unpunctured_responses(rsc: &RscSpec, il: &Interleaver, pattern: &PuncturingPattern) -> Result<Vec<Vec<u8>>> {
    let spec = TurboCodeSpec::new(*rsc, il.clone(), pattern.clone())?;
    let k = il.len();
    (0..k)
        .map(|i| {
            let mut e = vec![0u8; k];
            e[i] = 1;
            spec.encode_unpunctured(&e)
        })
        .collect()
}

fn punctured_responses(full: &[Vec<u8>], mask: &[bool]) -> Vec<Packed> {
    full.iter()
        .map(|f| pack(f.iter().zip(mask).filter(|(_, &k)| k).map(|(&b, _)| b)))
        .collect()
}

/// Minimum-weight search over all inputs of weight `1..=w_max`.
///
/// The code is linear, so each codeword is the XOR of the single-bit impulse
/// responses of its input bits.
pub fn distance_search(spec: &TurboCodeSpec, w_max: usize) -> Result<DistanceReport> {
    if spec.n_punctured() > 64 * WORDS {
        return Err(Error::InvalidArgument(format!(
            "distance search supports frames up to {} bits",
            64 * WORDS
        )));
    }
    let full = unpunctured_responses(spec.rsc(), spec.interleaver(), spec.puncturing())?;
    search_responses(&punctured_responses(&full, spec.keep_mask()), w_max)
}

/// `count` random DRP interleavers; candidate `i` uses stream `i` of `seed`.
pub fn drp_candidates(k: usize, count: usize, seed: u64) -> Result<Vec<Interleaver>> {
    (0..count)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            Interleaver::random_drp(k, &mut rng, seed.wrapping_add(i as u64))
        })
        .collect()
}

/// `count` uniformly random interleavers with seeds `seed, seed+1, ...`.
pub fn random_candidates(k: usize, count: usize, seed: u64) -> Result<Vec<Interleaver>> {
    (0..count)
        .map(|i| Interleaver::new(InterleaverParams::Random, k, seed.wrapping_add(i as u64)))
        .collect()
}

/// Puncturing patterns removing `2(k+m) - target` parity bits, tail kept.
///
/// Always contains the family with one dropped position per period in each
/// parity sub-stream (when the numbers fit), followed by `extra` randomly
/// drawn patterns of twice that period.
pub fn pattern_candidates(k: usize, memory: usize, target: usize, extra: usize, seed: u64) -> Result<Vec<PuncturingPattern>> {
    let nominal = 2 * (k + memory);
    if target > nominal || target < k + 2 * memory {
        return Err(Error::InvalidArgument(format!(
            "cannot puncture a {nominal}-bit frame to {target} bits"
        )));
    }
    let drop = nominal - target;
    let sub = k / 2;
    if drop == 0 {
        return Ok(vec![PuncturingPattern::keep_all(memory)]);
    }
    if drop % 2 != 0 || k % 2 != 0 || sub % (drop / 2) != 0 {
        return Err(Error::InvalidArgument(format!(
            "no periodic pattern drops {drop} bits evenly from two {sub}-bit parity streams"
        )));
    }
    let per_stream = drop / 2;
    let period = sub / per_stream;
    let mut out = Vec::new();
    for a in 0..period {
        for b in 0..period {
            let mut p1 = vec![true; period];
            let mut p2 = vec![true; period];
            p1[a] = false;
            p2[b] = false;
            out.push(PuncturingPattern::new(period, p1, p2, vec![true; 2 * memory])?);
        }
    }
    if sub % (2 * period) == 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let wide = 2 * period;
        for _ in 0..extra {
            let mut p1 = vec![true; wide];
            let mut p2 = vec![true; wide];
            for i in sample(&mut rng, wide, 2) {
                p1[i] = false;
            }
            for i in sample(&mut rng, wide, 2) {
                p2[i] = false;
            }
            out.push(PuncturingPattern::new(wide, p1, p2, vec![true; 2 * memory])?);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignConfig {
    pub rsc: RscSpec,
    /// Input-weight horizon used to screen every candidate pair.
    pub w_screen: usize,
    /// Horizon used to re-check the best `keep_top` pairs.
    pub w_final: usize,
    pub keep_top: usize,
    /// Maximum number of (interleaver, pattern) pairs screened.
    pub budget: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesignCandidate {
    pub interleaver_index: usize,
    pub pattern_index: usize,
    pub interleaver: Interleaver,
    pub pattern: PuncturingPattern,
    pub report: DistanceReport,
}

/// Joint interleaver and puncturing search, maximizing the distance bound and
/// then minimizing its multiplicity. Returns the re-checked best candidates, best first.
pub fn design_search(
    interleavers: &[Interleaver],
    patterns: &[PuncturingPattern],
    cfg: &DesignConfig,
) -> Result<Vec<DesignCandidate>> {
    if interleavers.is_empty() || patterns.is_empty() {
        return Err(Error::InvalidArgument("empty candidate set".into()));
    }
    if cfg.budget == 0 || cfg.keep_top == 0 {
        return Err(Error::InvalidArgument("budget and keep_top must be at least 1".into()));
    }
    let per_il = patterns.len();
    let il_needed = cfg.budget.div_ceil(per_il).min(interleavers.len());
    let screened: Vec<Vec<(usize, usize, DistanceReport)>> = (0..il_needed)
        .into_par_iter()
        .map(|ii| -> Result<Vec<(usize, usize, DistanceReport)>> {
            let full = unpunctured_responses(&cfg.rsc, &interleavers[ii], &patterns[0])?;
            let mut out = Vec::new();
            for (pi, pat) in patterns.iter().enumerate() {
                if ii * per_il + pi >= cfg.budget {
                    break;
                }
                let mask = pat.keep_mask(interleavers[ii].len(), cfg.rsc.memory)?;
                let report = search_responses(&punctured_responses(&full, &mask), cfg.w_screen)?;
                out.push((ii, pi, report));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut flat: Vec<(usize, usize, DistanceReport)> = screened.into_iter().flatten().collect();
    let order = |a: &(usize, usize, DistanceReport), b: &(usize, usize, DistanceReport)| {
        a.2.rank_cmp(&b.2).then((a.0, a.1).cmp(&(b.0, b.1)))
    };
    flat.sort_by(order);
    flat.truncate(cfg.keep_top);
    let mut finals: Vec<(usize, usize, DistanceReport)> = flat
        .par_iter()
        .map(|&(ii, pi, _)| -> Result<(usize, usize, DistanceReport)> {
            let spec = TurboCodeSpec::new(cfg.rsc, interleavers[ii].clone(), patterns[pi].clone())?;
            Ok((ii, pi, distance_search(&spec, cfg.w_final.max(cfg.w_screen))?))
        })
        .collect::<Result<_>>()?;
    finals.sort_by(order);
    Ok(finals
        .into_iter()
        .map(|(ii, pi, report)| DesignCandidate {
            interleaver_index: ii,
            pattern_index: pi,
            interleaver: interleavers[ii].clone(),
            pattern: patterns[pi].clone(),
            report,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> TurboCodeSpec {
        let il = Interleaver::new(InterleaverParams::Random, 8, 3).unwrap();
        TurboCodeSpec::new(RscSpec::default_16_state(), il, PuncturingPattern::keep_all(4)).unwrap()
    }

    #[test]
    fn exhaustive_on_toy_code() {
        let spec = toy();
        let rep = distance_search(&spec, 8).unwrap();
        assert!(rep.exhaustive);
        let mut best = usize::MAX;
        let mut count = 0;
        for x in 1u32..256 {
            let info: Vec<u8> = (0..8).map(|i| (x >> i & 1) as u8).collect();
            let w = spec.encode(&info).unwrap().iter().filter(|&&b| b == 1).count();
            if w < best {
                best = w;
                count = 1;
            } else if w == best {
                count += 1;
            }
        }
        assert_eq!((rep.d_min_upper, rep.a_at_d), (best, count));
    }

    #[test]
    fn horizon_is_monotone() {
        let spec = super::super::tests::spec64();
        let mut last = usize::MAX;
        for w in 1..=4 {
            let r = distance_search(&spec, w).unwrap();
            assert!(r.d_min_upper <= last);
            assert!(!r.exhaustive);
            last = r.d_min_upper;
        }
    }

    #[test]
    fn guard_refuses_huge_searches() {
        let spec = super::super::tests::spec64();
        assert!(distance_search(&spec, 8).is_err());
    }

    #[test]
    fn ranking_is_lexicographic() {
        let r = |d, a| DistanceReport { d_min_upper: d, a_at_d: a, w_max_searched: 4, exhaustive: false };
        let mut v = vec![r(8, 3), r(9, 7), r(9, 2)];
        v.sort_by(|a, b| a.rank_cmp(b));
        assert_eq!(v, vec![r(9, 2), r(9, 7), r(8, 3)]);
    }

    #[test]
    fn pattern_family_sizes() {
        let pats = pattern_candidates(64, 4, 128, 10, 1).unwrap();
        assert_eq!(pats.len(), 64 + 10);
        for p in &pats {
            assert_eq!(p.kept(64, 4).unwrap(), 128);
        }
    }

    #[test]
    fn single_candidate_design() {
        let ils = drp_candidates(64, 1, 9).unwrap();
        let pats = pattern_candidates(64, 4, 128, 0, 1).unwrap();
        let cfg = DesignConfig {
            rsc: RscSpec::default_16_state(),
            w_screen: 3,
            w_final: 3,
            keep_top: 1,
            budget: 1,
        };
        let out = design_search(&ils, &pats[..1], &cfg).unwrap();
        assert_eq!(out.len(), 1);
        let spec = TurboCodeSpec::new(cfg.rsc, ils[0].clone(), pats[0].clone()).unwrap();
        assert_eq!(out[0].report, distance_search(&spec, 3).unwrap());
        assert!(design_search(&[], &pats, &cfg).is_err());
    }
}

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Construction, LdpcCode};
use crate::{Error, Result};

/// Number of permutation draws tried before giving up on a connected code.
pub const MSCMPC_MAX_DRAWS: u64 = 200;

/// Serially concatenated multiple-parity-check code.
///
/// Component `i` adds `counts[i]` parity bits. The bits produced so far
/// (information bits plus earlier parities) are shuffled and cut into
/// `counts[i]` nearly equal groups; each group and one new parity bit form a
/// check. The result is lower triangular in the parity part, hence always of
/// full rank; draws whose Tanner graph is disconnected are rejected.
pub fn build_mscmpc(n: usize, k: usize, counts: &[usize], seed: u64) -> Result<LdpcCode> {
    if k == 0 || n <= k {
        return Err(Error::InvalidArgument(format!("need 0 < k < n, got n={n}, k={k}")));
    }
    if counts.iter().sum::<usize>() != n - k {
        return Err(Error::InvalidArgument(format!(
            "parity counts {counts:?} sum to {}, n - k = {}",
            counts.iter().sum::<usize>(),
            n - k
        )));
    }
    if let Some(c) = counts.iter().find(|&&c| c < 2) {
        return Err(Error::InvalidArgument(format!("component with {c} parity bits; need at least 2")));
    }
    for draw in 0..MSCMPC_MAX_DRAWS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(draw);
        let mut rows: Vec<Vec<usize>> = Vec::with_capacity(n - k);
        let mut produced = k;
        for &r in counts {
            if r > produced {
                return Err(Error::InvalidArgument(format!(
                    "component with {r} parity bits but only {produced} input bits"
                )));
            }
            let mut order: Vec<usize> = (0..produced).collect();
            order.shuffle(&mut rng);
            for g in 0..r {
                let lo = g * produced / r;
                let hi = (g + 1) * produced / r;
                let mut row: Vec<usize> = order[lo..hi].to_vec();
                row.sort_unstable();
                row.push(produced + g);
                rows.push(row);
            }
            produced += r;
        }
        let code = LdpcCode::from_rows(
            format!("mscmpc{n}_{k}"),
            n,
            rows,
            Construction::Mscmpc {
                counts: counts.to_vec(),
                seed,
            },
        )?;
        if code.k() == k && code.is_connected() {
            return Ok(code);
        }
    }
    Err(Error::Refused(format!(
        "no connected full-rank draw for counts {counts:?} in {MSCMPC_MAX_DRAWS} attempts"
    )))
}

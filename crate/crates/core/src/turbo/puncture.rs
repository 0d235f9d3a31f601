use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Periodic puncturing of the nominal rate-1/2 frame.
///
/// The nominal frame of `k` information bits and memory `m` is
/// `[u0 p0 u1 p1 ...]` followed by `2m` tail bits, where `p_i` comes from the
/// first encoder for even `i` and from the second for odd `i`. The parity
/// bits of each encoder form a sub-stream of `k/2` bits; `parity1[j % period]`
/// and `parity2[j % period]` decide whether the `j`-th bit of each sub-stream
/// survives. `tail` masks the tail region bit by bit. Information bits are
/// always kept.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PuncturingPattern {
    pub period: usize,
    pub parity1: Vec<bool>,
    pub parity2: Vec<bool>,
    pub tail: Vec<bool>,
}

impl PuncturingPattern {
    pub fn new(period: usize, parity1: Vec<bool>, parity2: Vec<bool>, tail: Vec<bool>) -> Result<Self> {
        if period == 0 || parity1.len() != period || parity2.len() != period {
            return Err(Error::InvalidArgument(format!(
                "parity masks must have exactly period = {period} entries"
            )));
        }
        Ok(PuncturingPattern {
            period,
            parity1,
            parity2,
            tail,
        })
    }

    /// Keeps every bit of the nominal frame.
    pub fn keep_all(memory: usize) -> Self {
        PuncturingPattern {
            period: 1,
            parity1: vec![true],
            parity2: vec![true],
            tail: vec![true; 2 * memory],
        }
    }

    /// Keep mask over the nominal frame of `k` information bits.
    pub fn keep_mask(&self, k: usize, memory: usize) -> Result<Vec<bool>> {
        if self.tail.len() != 2 * memory {
            return Err(Error::InvalidArgument(format!(
                "tail mask has {} entries, frame has {} tail bits",
                self.tail.len(),
                2 * memory
            )));
        }
        let mut mask = Vec::with_capacity(2 * (k + memory));
        for i in 0..k {
            let stream = if i % 2 == 0 { &self.parity1 } else { &self.parity2 };
            mask.push(true);
            mask.push(stream[(i / 2) % self.period]);
        }
        mask.extend_from_slice(&self.tail);
        Ok(mask)
    }

    pub fn kept(&self, k: usize, memory: usize) -> Result<usize> {
        Ok(self.keep_mask(k, memory)?.iter().filter(|&&b| b).count())
    }

    pub fn to_text(&self) -> String {
        let bits = |v: &[bool]| v.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>();
        format!(
            "period {}\nparity1 {}\nparity2 {}\ntail {}\n",
            self.period,
            bits(&self.parity1),
            bits(&self.parity2),
            bits(&self.tail)
        )
    }

    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let mut period = None;
        let (mut p1, mut p2, mut tail) = (None, None, None);
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, val) = line
                .split_once(char::is_whitespace)
                .ok_or_else(|| Error::parse(origin, i + 1, "expected `key value`"))?;
            let val = val.trim();
            let bits = || -> Result<Vec<bool>> {
                val.chars()
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        _ => Err(Error::parse(origin, i + 1, format!("mask character {c:?}"))),
                    })
                    .collect()
            };
            match key {
                "period" => {
                    period = Some(val.parse::<usize>().map_err(|_| {
                        Error::parse(origin, i + 1, format!("bad period {val:?}"))
                    })?)
                }
                "parity1" => p1 = Some(bits()?),
                "parity2" => p2 = Some(bits()?),
                "tail" => tail = Some(bits()?),
                other => return Err(Error::parse(origin, i + 1, format!("unknown key {other:?}"))),
            }
        }
        let missing = |what: &str| Error::parse(origin, text.lines().count(), format!("missing {what}"));
        PuncturingPattern::new(
            period.ok_or_else(|| missing("period"))?,
            p1.ok_or_else(|| missing("parity1"))?,
            p2.ok_or_else(|| missing("parity2"))?,
            tail.ok_or_else(|| missing("tail"))?,
        )
        .map_err(|e| Error::parse(origin, 1, e.to_string()))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        PuncturingPattern::parse(&text, path)
    }
}

/// Drops the positions where `mask` is false.
pub fn puncture<T: Copy>(frame: &[T], mask: &[bool]) -> Result<Vec<T>> {
    if frame.len() != mask.len() {
        return Err(Error::LengthMismatch {
            expected: mask.len(),
            actual: frame.len(),
        });
    }
    Ok(frame.iter().zip(mask).filter(|(_, &k)| k).map(|(&x, _)| x).collect())
}

/// Re-inserts zero LLRs at punctured positions.
pub fn depuncture(llr: &[f64], mask: &[bool]) -> Result<Vec<f64>> {
    let kept = mask.iter().filter(|&&k| k).count();
    if llr.len() != kept {
        return Err(Error::LengthMismatch {
            expected: kept,
            actual: llr.len(),
        });
    }
    let mut it = llr.iter();
    Ok(mask
        .iter()
        .map(|&k| if k { *it.next().unwrap() } else { 0.0 })
        .collect())
}

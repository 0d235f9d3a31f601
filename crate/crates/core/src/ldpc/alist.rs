use std::path::Path;

use super::{Construction, LdpcCode};
use crate::{Error, Result};

/// Reads an alist file.
pub fn load_alist(path: impl AsRef<Path>) -> Result<LdpcCode> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "alist".into());
    parse_alist(&text, path, name)
}

fn numbers(line: &str, lineno: usize, origin: &Path) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| Error::parse(origin, lineno, format!("bad integer {tok:?}")))
        })
        .collect()
}

/// Parses alist text. `origin` is only used in error messages.
pub fn parse_alist(text: &str, origin: &Path, name: impl Into<String>) -> Result<LdpcCode> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let mut next = |what: &str| {
        lines
            .next()
            .ok_or_else(|| Error::parse(origin, text.lines().count(), format!("missing {what}")))
    };

    let (ln, l) = next("header")?;
    let head = numbers(l, ln, origin)?;
    let [n, m] = head[..] else {
        return Err(Error::parse(origin, ln, "expected `n m`"));
    };
    let (ln, l) = next("maximum degrees")?;
    let maxes = numbers(l, ln, origin)?;
    let [max_col, max_row] = maxes[..] else {
        return Err(Error::parse(origin, ln, "expected `max_col_degree max_row_degree`"));
    };
    let (ln, l) = next("column degrees")?;
    let col_deg = numbers(l, ln, origin)?;
    if col_deg.len() != n {
        return Err(Error::parse(origin, ln, format!("expected {n} column degrees, got {}", col_deg.len())));
    }
    if let Some(&d) = col_deg.iter().find(|&&d| d > max_col) {
        return Err(Error::parse(origin, ln, format!("column degree {d} exceeds maximum {max_col}")));
    }
    let (ln, l) = next("row degrees")?;
    let row_deg = numbers(l, ln, origin)?;
    if row_deg.len() != m {
        return Err(Error::parse(origin, ln, format!("expected {m} row degrees, got {}", row_deg.len())));
    }
    if let Some(&d) = row_deg.iter().find(|&&d| d > max_row) {
        return Err(Error::parse(origin, ln, format!("row degree {d} exceeds maximum {max_row}")));
    }

    if col_deg.iter().sum::<usize>() != row_deg.iter().sum::<usize>() {
        return Err(Error::parse(origin, ln, "column and row degrees count different edges"));
    }

    let mut col_lists = Vec::with_capacity(n);
    for c in 0..n {
        let (ln, l) = next("column index list")?;
        let idx: Vec<usize> = numbers(l, ln, origin)?.into_iter().filter(|&x| x != 0).collect();
        if idx.len() != col_deg[c] {
            return Err(Error::parse(
                origin,
                ln,
                format!("column {} lists {} rows, degree says {}", c + 1, idx.len(), col_deg[c]),
            ));
        }
        if let Some(&x) = idx.iter().find(|&&x| x > m) {
            return Err(Error::parse(origin, ln, format!("row index {x} out of range 1..={m}")));
        }
        col_lists.push((ln, idx));
    }
    let mut rows = Vec::with_capacity(m);
    for r in 0..m {
        let (ln, l) = next("row index list")?;
        let idx: Vec<usize> = numbers(l, ln, origin)?.into_iter().filter(|&x| x != 0).collect();
        if idx.len() != row_deg[r] {
            return Err(Error::parse(
                origin,
                ln,
                format!("row {} lists {} columns, degree says {}", r + 1, idx.len(), row_deg[r]),
            ));
        }
        if let Some(&x) = idx.iter().find(|&&x| x > n) {
            return Err(Error::parse(origin, ln, format!("column index {x} out of range 1..={n}")));
        }
        rows.push((ln, idx.into_iter().map(|x| x - 1).collect::<Vec<_>>()));
    }

    for (c, (ln, idx)) in col_lists.iter().enumerate() {
        for &r in idx {
            if !rows[r - 1].1.contains(&c) {
                return Err(Error::parse(
                    origin,
                    *ln,
                    format!("column {} lists row {r}, but that row does not list the column", c + 1),
                ));
            }
        }
    }
    let rows: Vec<Vec<usize>> = rows.into_iter().map(|(_, r)| r).collect();
    LdpcCode::from_rows(name, n, rows, Construction::Alist)
}

/// Renders a code in alist format (no zero padding).
pub fn to_alist(code: &LdpcCode) -> String {
    let join = |v: &mut dyn Iterator<Item = usize>| {
        v.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
    };
    let max_col = code.cols().iter().map(Vec::len).max().unwrap_or(0);
    let max_row = code.rows().iter().map(Vec::len).max().unwrap_or(0);
    let mut out = format!("{} {}\n{} {}\n", code.n(), code.check_count(), max_col, max_row);
    out += &join(&mut code.cols().iter().map(Vec::len));
    out.push('\n');
    out += &join(&mut code.rows().iter().map(Vec::len));
    out.push('\n');
    for col in code.cols() {
        let mut c = col.clone();
        c.sort_unstable();
        out += &join(&mut c.into_iter().map(|r| r + 1));
        out.push('\n');
    }
    for row in code.rows() {
        let mut r = row.clone();
        r.sort_unstable();
        out += &join(&mut r.into_iter().map(|c| c + 1));
        out.push('\n');
    }
    out
}

pub fn save_alist(code: &LdpcCode, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, to_alist(code)).map_err(|e| Error::io(path, e))
}

//! Text formats for codes.
//!
//! * alist: the sparse interchange format for parity-check matrices
//!   (`n m`, max weights, column weights, row weights, then the 1-based
//!   row indices of each column and the column indices of each row, with
//!   zero padding allowed).
//! * dense: `n k` on the first line followed by `k` generator rows, each
//!   written as `⌈n/4⌉` hex digits. Column 0 is the most significant bit of
//!   the first digit; the padding bits of the last digit are zero.
//!
//! Blank lines and lines starting with `#` are ignored by both parsers.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::LinearCode;
use crate::gf2::BitMatrix;
use crate::{Error, Result};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Content lines paired with their 1-based line numbers.
struct Lines<'a> {
    inner: Box<dyn Iterator<Item = (usize, &'a str)> + 'a>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            inner: Box::new(
                text.lines()
                    .enumerate()
                    .map(|(i, l)| (i + 1, l.trim()))
                    .filter(|(_, l)| !l.is_empty() && !l.starts_with('#')),
            ),
            last: 0,
        }
    }

    fn next_line(&mut self, what: &str) -> Result<(usize, &'a str)> {
        match self.inner.next() {
            Some((no, l)) => {
                self.last = no;
                Ok((no, l))
            }
            None => Err(parse_err(
                self.last + 1,
                format!("unexpected end of file, expected {what}"),
            )),
        }
    }

    fn numbers(&mut self, what: &str) -> Result<(usize, Vec<usize>)> {
        let (no, l) = self.next_line(what)?;
        let nums = l
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| parse_err(no, format!("invalid integer {t:?} in {what}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((no, nums))
    }

    fn exact(&mut self, count: usize, what: &str) -> Result<(usize, Vec<usize>)> {
        let (no, nums) = self.numbers(what)?;
        if nums.len() != count {
            return Err(parse_err(
                no,
                format!("expected {count} values for {what}, found {}", nums.len()),
            ));
        }
        Ok((no, nums))
    }
}

pub fn parse_alist(text: &str) -> Result<BitMatrix> {
    let mut lines = Lines::new(text);
    let (_, dims) = lines.exact(2, "dimensions")?;
    let (n, m) = (dims[0], dims[1]);
    let (no, max_w) = lines.exact(2, "maximum weights")?;
    let (_, col_w) = lines.exact(n, "column weights")?;
    let (no_rw, row_w) = lines.exact(m, "row weights")?;
    if col_w.iter().any(|&w| w > max_w[0]) || row_w.iter().any(|&w| w > max_w[1]) {
        return Err(parse_err(no, "a weight exceeds the declared maximum"));
    }
    if col_w.iter().sum::<usize>() != row_w.iter().sum::<usize>() {
        return Err(parse_err(no_rw, "column and row weights disagree"));
    }

    let mut h = BitMatrix::zeros(m, n);
    for (c, &w) in col_w.iter().enumerate() {
        let (no, entries) = lines.numbers(&format!("column {}", c + 1))?;
        let rows: Vec<usize> = entries.into_iter().filter(|&r| r != 0).collect();
        if rows.len() != w {
            return Err(parse_err(
                no,
                format!("column {} lists {} rows, weight is {w}", c + 1, rows.len()),
            ));
        }
        for r in rows {
            if r > m {
                return Err(parse_err(no, format!("row index {r} exceeds {m}")));
            }
            h.set(r - 1, c, true);
        }
    }
    for (r, &w) in row_w.iter().enumerate() {
        let (no, entries) = lines.numbers(&format!("row {}", r + 1))?;
        let cols: Vec<usize> = entries.into_iter().filter(|&c| c != 0).collect();
        if cols.len() != w {
            return Err(parse_err(
                no,
                format!("row {} lists {} columns, weight is {w}", r + 1, cols.len()),
            ));
        }
        for c in cols {
            if c > n || !h.get(r, c - 1) {
                return Err(parse_err(
                    no,
                    format!("row {} entry {c} disagrees with the column lists", r + 1),
                ));
            }
        }
    }
    Ok(h)
}

pub fn write_alist(h: &BitMatrix) -> String {
    let (m, n) = (h.rows(), h.cols());
    let cols: Vec<Vec<usize>> = (0..n)
        .map(|c| (0..m).filter(|&r| h.get(r, c)).map(|r| r + 1).collect())
        .collect();
    let rows: Vec<Vec<usize>> = (0..m)
        .map(|r| h.row(r).ones().map(|c| c + 1).collect())
        .collect();
    let max_c = cols.iter().map(Vec::len).max().unwrap_or(0);
    let max_r = rows.iter().map(Vec::len).max().unwrap_or(0);
    let join = |v: &[usize]| {
        v.iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    };
    let padded = |v: &[usize], width: usize| {
        let mut p = v.to_vec();
        p.resize(width, 0);
        join(&p)
    };
    let mut out = String::new();
    writeln!(out, "{n} {m}").unwrap();
    writeln!(out, "{max_c} {max_r}").unwrap();
    writeln!(
        out,
        "{}",
        join(&cols.iter().map(Vec::len).collect::<Vec<_>>())
    )
    .unwrap();
    writeln!(
        out,
        "{}",
        join(&rows.iter().map(Vec::len).collect::<Vec<_>>())
    )
    .unwrap();
    for c in &cols {
        writeln!(out, "{}", padded(c, max_c)).unwrap();
    }
    for r in &rows {
        writeln!(out, "{}", padded(r, max_r)).unwrap();
    }
    out
}

pub fn parse_dense(text: &str) -> Result<BitMatrix> {
    let mut lines = Lines::new(text);
    let (_, dims) = lines.exact(2, "header \"n k\"")?;
    let (n, k) = (dims[0], dims[1]);
    let digits = n.div_ceil(4);
    let mut g = BitMatrix::zeros(k, n);
    for r in 0..k {
        let (no, l) = lines.next_line(&format!("generator row {}", r + 1))?;
        if l.len() != digits {
            return Err(parse_err(
                no,
                format!(
                    "row {} has {} hex digits, expected {digits}",
                    r + 1,
                    l.len()
                ),
            ));
        }
        for (d, ch) in l.chars().enumerate() {
            let v = ch
                .to_digit(16)
                .ok_or_else(|| parse_err(no, format!("invalid hex digit {ch:?}")))?;
            for b in 0..4 {
                if v >> (3 - b) & 1 == 1 {
                    let col = 4 * d + b;
                    if col >= n {
                        return Err(parse_err(no, "padding bits must be zero"));
                    }
                    g.set(r, col, true);
                }
            }
        }
    }
    if let Ok((no, _)) = lines.next_line("end of file") {
        return Err(parse_err(no, format!("more than {k} generator rows")));
    }
    Ok(g)
}

pub fn write_dense(g: &BitMatrix) -> String {
    let n = g.cols();
    let mut out = format!("{} {}\n", n, g.rows());
    for r in 0..g.rows() {
        for d in 0..n.div_ceil(4) {
            let v = (0..4).fold(0u32, |acc, b| {
                let col = 4 * d + b;
                acc << 1 | (col < n && g.get(r, col)) as u32
            });
            out.push(char::from_digit(v, 16).expect("nibble"));
        }
        out.push('\n');
    }
    out
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "code".into())
}

/// Loads a parity-check matrix in alist form and derives `G` and `G⁻¹`.
pub fn load_alist(path: impl AsRef<Path>) -> Result<LinearCode> {
    let path = path.as_ref();
    let h = parse_alist(&fs::read_to_string(path)?)?;
    LinearCode::from_parity_check(h, stem(path))
}

pub fn save_alist(code: &LinearCode, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, write_alist(code.parity_check()))?;
    Ok(())
}

/// Loads a dense generator matrix and derives `H` and `G⁻¹`.
pub fn load_dense(path: impl AsRef<Path>) -> Result<LinearCode> {
    let path = path.as_ref();
    let g = parse_dense(&fs::read_to_string(path)?)?;
    LinearCode::from_generator(g, stem(path))
}

pub fn save_dense(code: &LinearCode, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, write_dense(code.generator()))?;
    Ok(())
}

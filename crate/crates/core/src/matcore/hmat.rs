//! `HMAT 1` text format.
//!
//! ```text
//! HMAT 1 <n>
//! re im re im ...   (n entries per row, n rows)
//! ```
//!
//! The parser takes the Hermitian part of what it reads and rejects input
//! whose anti-Hermitian part exceeds `1e-10 · max(1, ‖M‖_F)` in Frobenius norm.

use super::hermitian::{frobenius, CMatrix, HermitianMatrix, C64, MAX_DIM};
use crate::error::{Error, Result};

pub const ANTI_HERMITIAN_TOL: f64 = 1e-10;

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

/// Parses one matrix block starting at `lines[0]`, whose 1-based line number is `first_line`.
/// Returns the matrix and the number of lines consumed.
pub fn parse_block(lines: &[&str], first_line: usize) -> Result<(HermitianMatrix, usize)> {
    let header = lines
        .first()
        .ok_or_else(|| parse_err(first_line, 1, "missing HMAT header"))?;
    let toks = tokens(header);
    if toks.len() != 3 || toks[0].1 != "HMAT" {
        return Err(parse_err(first_line, 1, "expected header `HMAT 1 <n>`"));
    }
    if toks[1].1 != "1" {
        return Err(parse_err(first_line, toks[1].0, format!("unsupported version `{}`", toks[1].1)));
    }
    let n: usize = toks[2]
        .1
        .parse()
        .map_err(|_| parse_err(first_line, toks[2].0, format!("invalid dimension `{}`", toks[2].1)))?;
    if n == 0 || n > MAX_DIM {
        return Err(parse_err(first_line, toks[2].0, format!("dimension {n} outside 1..={MAX_DIM}")));
    }
    let mut m = CMatrix::zeros(n, n);
    for i in 0..n {
        let line_no = first_line + 1 + i;
        let line = lines
            .get(1 + i)
            .ok_or_else(|| parse_err(line_no, 1, format!("expected {n} rows, found {i}")))?;
        let toks = tokens(line);
        if toks.len() != 2 * n {
            let col = toks.get(2 * n).map(|t| t.0).unwrap_or(line.len() + 1);
            return Err(parse_err(
                line_no,
                col,
                format!("expected {} numbers (re im pairs), found {}", 2 * n, toks.len()),
            ));
        }
        let mut vals = Vec::with_capacity(2 * n);
        for (col, tok) in toks {
            let v: f64 = tok
                .parse()
                .map_err(|_| parse_err(line_no, col, format!("invalid number `{tok}`")))?;
            if !v.is_finite() {
                return Err(parse_err(line_no, col, format!("non-finite value `{tok}`")));
            }
            vals.push(v);
        }
        for j in 0..n {
            m[(i, j)] = C64::new(vals[2 * j], vals[2 * j + 1]);
        }
    }
    let anti = (&m - m.adjoint()) * C64::new(0.5, 0.0);
    let limit = ANTI_HERMITIAN_TOL * frobenius(&m).max(1.0);
    if frobenius(&anti) > limit {
        return Err(parse_err(
            first_line,
            1,
            format!("matrix is not Hermitian (anti-Hermitian part {:e})", frobenius(&anti)),
        ));
    }
    Ok((HermitianMatrix::new(m)?, n + 1))
}

/// Parses a document containing exactly one matrix; leading and trailing blank lines are ignored.
pub fn parse_hmat(text: &str) -> Result<HermitianMatrix> {
    let lines: Vec<&str> = text.lines().collect();
    let Some(first) = lines.iter().position(|l| !l.trim().is_empty()) else {
        return Err(parse_err(1, 1, "empty input"));
    };
    let (m, used) = parse_block(&lines[first..], first + 1)?;
    if let Some(extra) = lines[first + used..].iter().position(|l| !l.trim().is_empty()) {
        return Err(parse_err(first + used + extra + 1, 1, "unexpected trailing content"));
    }
    Ok(m)
}

/// Serializes with shortest round-trip float formatting, so parsing the output
/// reproduces the matrix bit for bit.
pub fn write_hmat(m: &HermitianMatrix) -> String {
    let n = m.dim();
    let mut s = format!("HMAT 1 {n}\n");
    for i in 0..n {
        let row: Vec<String> = (0..n)
            .map(|j| {
                let c = m.get(i, j);
                format!("{:e} {:e}", c.re, c.im)
            })
            .collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}

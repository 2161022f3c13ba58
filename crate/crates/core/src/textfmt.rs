//! Plain-text formats.
//!
//! Matrix format: line 1 is the dimension `k`, followed by `k` lines of `k`
//! whitespace-separated numbers. A number is either a decimal (`-0.25`, `1e-3`)
//! or an exact rational `p/q`. Decimals are converted to rationals exactly, so
//! `0.1` reads as `1/10`, not as the nearest double.
//!
//! Blank lines and lines starting with `#` are skipped everywhere.

use crate::error::{Error, Result};
use crate::Rational;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Parses a decimal or `p/q` token into an exact rational.
pub fn parse_rational(tok: &str) -> std::result::Result<Rational, String> {
    let tok = tok.trim();
    if let Some((p, q)) = tok.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| format!("bad numerator in {tok:?}"))?;
        let q: BigInt = q.trim().parse().map_err(|_| format!("bad denominator in {tok:?}"))?;
        if q.is_zero() {
            return Err(format!("zero denominator in {tok:?}"));
        }
        return Ok(Rational::new(p, q));
    }
    parse_decimal(tok).ok_or_else(|| format!("not a number: {tok:?}"))
}

fn parse_decimal(tok: &str) -> Option<Rational> {
    let (mantissa, exp) = match tok.find(['e', 'E']) {
        Some(i) => (&tok[..i], tok[i + 1..].parse::<i64>().ok()?),
        None => (tok, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut num: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().ok()? };
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    let value = if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Some(value)
}

/// Renders `p/q` in lowest terms with `q > 0`, or just `p` when `q = 1`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    if let (Some(p), Some(q)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if p.is_finite() && q.is_finite() && q != 0.0 {
            return p / q;
        }
    }
    // Very large numerator/denominator: shift both down before dividing.
    let bits = r.numer().bits().max(r.denom().bits()) as i64 - 900;
    let shift = bits.max(0) as usize;
    let p = (r.numer().abs() >> shift).to_f64().unwrap_or(0.0);
    let q = (r.denom() >> shift).to_f64().unwrap_or(f64::INFINITY);
    let v = p / q;
    if r.is_negative() {
        -v
    } else {
        v
    }
}

/// Meaningful lines with their 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Parses the square matrix format into exact rationals (row-major rows).
pub fn parse_matrix(text: &str) -> Result<Vec<Vec<Rational>>> {
    let mut lines = content_lines(text);
    let (ln, header) = lines.next().ok_or_else(|| Error::parse(1, "empty matrix file"))?;
    let k: usize = header.parse().map_err(|_| Error::parse(ln, format!("expected dimension, got {header:?}")))?;
    if k == 0 {
        return Err(Error::parse(ln, "dimension must be positive"));
    }
    let rows = parse_rows(&mut lines, k, k, ln)?;
    if let Some((ln, extra)) = lines.next() {
        return Err(Error::parse(ln, format!("unexpected trailing content {extra:?}")));
    }
    Ok(rows)
}

pub(crate) fn parse_rows<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    nrows: usize,
    ncols: usize,
    prev_line: usize,
) -> Result<Vec<Vec<Rational>>> {
    let mut rows = Vec::with_capacity(nrows);
    let mut last = prev_line;
    for r in 0..nrows {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| Error::parse(last + 1, format!("expected {nrows} matrix rows, found {r}")))?;
        last = ln;
        let row: Vec<Rational> = line
            .split_whitespace()
            .map(|t| parse_rational(t).map_err(|e| Error::parse(ln, e)))
            .collect::<Result<_>>()?;
        if row.len() != ncols {
            return Err(Error::parse(ln, format!("expected {ncols} entries, found {}", row.len())));
        }
        rows.push(row);
    }
    Ok(rows)
}

pub fn write_matrix(rows: &[Vec<Rational>]) -> String {
    let mut out = format!("{}\n", rows.len());
    for row in rows {
        out.push_str(&row.iter().map(format_rational).collect::<Vec<_>>().join(" "));
        out.push('\n');
    }
    out
}

pub fn write_matrix_f64(rows: usize, cols: usize, get: impl Fn(usize, usize) -> f64) -> String {
    let mut out = format!("{rows}\n");
    for i in 0..rows {
        let line: Vec<String> = (0..cols).map(|j| format!("{}", get(i, j))).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

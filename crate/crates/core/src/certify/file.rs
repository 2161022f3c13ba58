//! Certificate text format:
//!
//! ```text
//! candidate H6
//! bound 8/7
//! k m dimQ
//! <dimQ rows of dimQ rationals>   (Q)
//! <m rows of m rationals>         (T)
//! ```
//!
//! Rows of `Q` follow the block order of `V(x) = (1, x)ᵀ ⊗ I_m` with pairs in
//! lexicographic order. Comment and blank lines are ignored.

use super::Certificate;
use crate::error::{Error, Result};
use crate::stepmodel::Candidate;
use crate::textfmt::{content_lines, format_rational, parse_rational, parse_rows};

pub fn write_certificate(cert: &Certificate) -> String {
    let mut out = String::new();
    out.push_str(&format!("candidate {}\n", cert.candidate.name()));
    out.push_str(&format!("bound {}\n", format_rational(&cert.bound)));
    out.push_str(&format!("{} {} {}\n", cert.k, cert.m, cert.q.len()));
    for row in cert.q.iter().chain(&cert.t) {
        let line: Vec<String> = row.iter().map(format_rational).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

fn next_line<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>, what: &str, prev: usize) -> Result<(usize, &'a str)> {
    lines.next().ok_or_else(|| Error::parse(prev + 1, format!("missing {what} line")))
}

pub fn parse_certificate(text: &str) -> Result<Certificate> {
    let mut lines = content_lines(text);

    let (ln, line) = next_line(&mut lines, "candidate", 0)?;
    let name = line
        .strip_prefix("candidate")
        .filter(|r| r.starts_with(char::is_whitespace))
        .ok_or_else(|| Error::parse(ln, format!("expected \"candidate <name>\", got {line:?}")))?;
    let candidate: Candidate = name.parse().map_err(|e: Error| Error::parse(ln, e.to_string()))?;

    let (ln, line) = next_line(&mut lines, "bound", ln)?;
    let bound = line
        .strip_prefix("bound")
        .filter(|r| r.starts_with(char::is_whitespace))
        .ok_or_else(|| Error::parse(ln, format!("expected \"bound p/q\", got {line:?}")))
        .and_then(|r| parse_rational(r).map_err(|e| Error::parse(ln, e)))?;

    let (ln, line) = next_line(&mut lines, "dimension", ln)?;
    let dims: Vec<usize> = line
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::parse(ln, format!("bad dimension {t:?}"))))
        .collect::<Result<_>>()?;
    let [k, m, dim_q] = dims[..] else {
        return Err(Error::parse(ln, format!("expected \"k m dimQ\", got {line:?}")));
    };
    let want_k = candidate.k();
    let want_m = want_k * (want_k - 1) / 2;
    if (k, m, dim_q) != (want_k, want_m, (want_k + 1) * want_m) {
        return Err(Error::parse(
            ln,
            format!("dimensions {k} {m} {dim_q} do not match {candidate} (expected {want_k} {want_m} {})", (want_k + 1) * want_m),
        ));
    }

    let q = parse_rows(&mut lines, dim_q, dim_q, ln)?;
    let t = parse_rows(&mut lines, m, m, ln + dim_q)?;
    if let Some((ln, extra)) = lines.next() {
        return Err(Error::parse(ln, format!("unexpected trailing content {extra:?}")));
    }
    Ok(Certificate { candidate, bound, k, m, q, t })
}

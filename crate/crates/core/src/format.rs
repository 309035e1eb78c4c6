//! Line-oriented text formats for rngs and semigroups.
//!
//! Rng files:
//!
//! ```text
//! rng <name>
//! factors d1 d2 ... dk
//! c i j t1 t2 ... tk      # e_i e_j = t1 e_1 + ... + tk e_k, i and j 1-based
//! ```
//!
//! Semigroup files:
//!
//! ```text
//! semigroup <name> <N>
//! a00 a01 ... a0(N-1)     # row a: products a·b, entries in 0..N-1
//! ...
//! ```
//!
//! `#` starts a comment. Omitted `c` lines in rng files mean `eᵢeⱼ = 0`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::rng::FiniteRng;
use crate::semigroups::FiniteSemigroup;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(n, line)| {
        let body = line.split('#').next().unwrap_or("");
        let toks: Vec<&str> = body.split_whitespace().collect();
        (!toks.is_empty()).then_some((n + 1, toks))
    })
}

fn parse_int<T: std::str::FromStr>(tok: &str, line: usize) -> Result<T> {
    tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("expected an integer, found {tok:?}"),
    })
}

fn sanitize(name: &str) -> String {
    let s: String = name
        .chars()
        .map(|c| if c.is_whitespace() || c == '#' { '_' } else { c })
        .collect();
    if s.is_empty() {
        "unnamed".into()
    } else {
        s
    }
}

pub fn parse_rng(text: &str) -> Result<FiniteRng> {
    let mut lines = content_lines(text);
    let perr = |line, msg: &str| Error::Parse {
        line,
        msg: msg.to_string(),
    };
    let (ln, header) = lines.next().ok_or_else(|| perr(1, "empty rng file"))?;
    if header[0] != "rng" || header.len() != 2 {
        return Err(perr(ln, "expected `rng <name>`"));
    }
    let name = header[1].to_string();
    let (ln, fac) = lines.next().ok_or_else(|| perr(ln, "missing `factors` line"))?;
    if fac[0] != "factors" {
        return Err(perr(ln, "expected `factors d1 ... dk`"));
    }
    let factors: Vec<i64> = fac[1..]
        .iter()
        .map(|t| parse_int(t, ln))
        .collect::<Result<_>>()?;
    let k = factors.len();
    let mut consts = vec![vec![vec![0i64; k]; k]; k];
    let mut seen = vec![vec![false; k]; k];
    for (ln, toks) in lines {
        if toks[0] != "c" {
            return Err(perr(ln, "expected `c i j t1 ... tk`"));
        }
        if toks.len() != 3 + k {
            return Err(perr(ln, &format!("expected {} coefficients", k)));
        }
        let i: usize = parse_int(toks[1], ln)?;
        let j: usize = parse_int(toks[2], ln)?;
        if !(1..=k).contains(&i) || !(1..=k).contains(&j) {
            return Err(perr(ln, "basis index out of range"));
        }
        if std::mem::replace(&mut seen[i - 1][j - 1], true) {
            return Err(perr(ln, &format!("duplicate product e{i} e{j}")));
        }
        consts[i - 1][j - 1] = toks[3..]
            .iter()
            .map(|t| parse_int(t, ln))
            .collect::<Result<_>>()?;
    }
    FiniteRng::new(name, factors, consts)
}

/// Canonical serialization: every product listed, sorted by `(i, j)`.
pub fn write_rng(rng: &FiniteRng) -> String {
    let k = rng.rank();
    let mut out = String::new();
    let _ = writeln!(out, "rng {}", sanitize(rng.name()));
    out.push_str("factors");
    for d in rng.invariant_factors() {
        let _ = write!(out, " {d}");
    }
    out.push('\n');
    for i in 0..k {
        for j in 0..k {
            let _ = write!(out, "c {} {}", i + 1, j + 1);
            for c in rng.basis_product(i, j) {
                let _ = write!(out, " {c}");
            }
            out.push('\n');
        }
    }
    out
}

pub fn parse_semigroup(text: &str) -> Result<FiniteSemigroup> {
    let mut lines = content_lines(text);
    let perr = |line, msg: &str| Error::Parse {
        line,
        msg: msg.to_string(),
    };
    let (ln, header) = lines.next().ok_or_else(|| perr(1, "empty semigroup file"))?;
    if header[0] != "semigroup" || header.len() != 3 {
        return Err(perr(ln, "expected `semigroup <name> <N>`"));
    }
    let name = header[1].to_string();
    let n: usize = parse_int(header[2], ln)?;
    let mut table = Vec::with_capacity(n);
    for (ln, toks) in lines {
        if toks.len() != n {
            return Err(perr(ln, &format!("expected {n} entries")));
        }
        table.push(toks.iter().map(|t| parse_int(t, ln)).collect::<Result<Vec<usize>>>()?);
    }
    if table.len() != n {
        return Err(perr(ln, &format!("expected {n} rows, found {}", table.len())));
    }
    FiniteSemigroup::new(name, table)
}

pub fn write_semigroup(s: &FiniteSemigroup) -> String {
    let n = s.order();
    let mut out = format!("semigroup {} {n}\n", sanitize(s.name()));
    for a in 0..n {
        let row: Vec<String> = (0..n).map(|b| s.mul(a, b).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

//! Text form `H[m,n,p,q; a1:A1,a2:A2; b1:B1]`.
//!
//! ```text
//! spec := "H" "[" int "," int "," int "," int ";" list ";" list "]"
//! list := ε | pair ("," pair)*
//! pair := real ":" real
//! ```
//!
//! Whitespace is allowed between tokens. `p` and `q` must equal the lengths
//! of the two lists. Reals use Rust's float syntax; printing uses the
//! shortest representation that reads back to the same value.

use super::HFunctionSpec;
use crate::error::{Error, Result};
use std::fmt;
use std::str::FromStr;

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn parse_list(s: &str, what: &str) -> Result<Vec<(f64, f64)>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|pair| {
            let (c, w) = pair
                .split_once(':')
                .ok_or_else(|| perr(format!("{what} entry '{}' lacks ':'", pair.trim())))?;
            let num = |t: &str| -> Result<f64> {
                let t = t.trim();
                let v: f64 = t
                    .parse()
                    .map_err(|_| perr(format!("{what} entry has bad number '{t}'")))?;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(perr(format!("{what} entry '{t}' is not finite")))
                }
            };
            Ok((num(c)?, num(w)?))
        })
        .collect()
}

impl FromStr for HFunctionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let body = s
            .strip_prefix('H')
            .map(str::trim_start)
            .and_then(|r| r.strip_prefix('['))
            .and_then(|r| r.trim_end().strip_suffix(']'))
            .ok_or_else(|| perr("expected H[...]"))?;
        let parts: Vec<&str> = body.split(';').collect();
        if parts.len() != 3 {
            return Err(perr(format!(
                "expected 3 ';'-separated sections, found {}",
                parts.len()
            )));
        }
        let orders: Vec<usize> = parts[0]
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| perr(format!("bad order '{}'", t.trim())))
            })
            .collect::<Result<_>>()?;
        let [m, n, p, q] = orders[..] else {
            return Err(perr(format!("expected 4 orders m,n,p,q, found {}", orders.len())));
        };
        let upper = parse_list(parts[1], "upper")?;
        let lower = parse_list(parts[2], "lower")?;
        if upper.len() != p || lower.len() != q {
            return Err(perr(format!(
                "p={p}, q={q} but lists have {} and {} entries",
                upper.len(),
                lower.len()
            )));
        }
        HFunctionSpec::new(m, n, upper, lower).map_err(|e| match e {
            Error::InvalidParams(msg) => perr(msg),
            other => other,
        })
    }
}

impl fmt::Display for HFunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[(f64, f64)]| {
            v.iter()
                .map(|(c, w)| format!("{c:?}:{w:?}"))
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(
            f,
            "H[{},{},{},{}; {}; {}]",
            self.m,
            self.n,
            self.p(),
            self.q(),
            list(&self.upper),
            list(&self.lower)
        )
    }
}

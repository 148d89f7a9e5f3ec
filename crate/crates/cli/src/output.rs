use std::io::{BufRead, Write};

use anyhow::{bail, Context, Result};

/// Formats `x` with `digits` significant digits, like C's `%.*g`.
pub fn sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        format!("{mantissa}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_ranks<W: Write>(ranks: &[f64], mut out: W) -> std::io::Result<()> {
    for (v, r) in ranks.iter().enumerate() {
        writeln!(out, "{v}\t{}", sig(*r, 12))?;
    }
    out.flush()
}

/// Reads `vertex<TAB>weight` lines. Vertices not listed get 0.
pub fn parse_weights<R: BufRead>(reader: R, n: usize) -> Result<Vec<f64>> {
    let mut w = vec![0.0; n];
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_ascii_whitespace();
        let (Some(v), Some(x), None) = (fields.next(), fields.next(), fields.next()) else {
            bail!("line {}: expected `vertex<TAB>weight`", i + 1);
        };
        let v: usize = v.parse().with_context(|| format!("line {}: bad vertex id", i + 1))?;
        let x: f64 = x.parse().with_context(|| format!("line {}: bad weight", i + 1))?;
        if v >= n {
            bail!("line {}: vertex {v} out of range (graph has {n})", i + 1);
        }
        if !(x >= 0.0) || !x.is_finite() {
            bail!("line {}: weight must be finite and non-negative", i + 1);
        }
        w[v] = x;
    }
    Ok(w)
}

//! `start:end:step` ranges and comma-separated lists.

use anyhow::{bail, Result};

/// Parses `a`, `a,b,c` or `start:end:step`. Ranges start at `start` and
/// include `end` when a step lands on it up to `1e-9 * step`, in which case
/// the last value is snapped to `end` exactly.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let s = s.trim();
    if s.is_empty() {
        bail!("empty grid");
    }
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            bail!("range `{s}` must have the form start:end:step");
        }
        let start = num(parts[0])?;
        let end = num(parts[1])?;
        let step = num(parts[2])?;
        if !(step > 0.0) {
            bail!("range step must be positive, got {step}");
        }
        if end < start {
            bail!("empty range `{s}`");
        }
        let n = ((end - start) / step + 1e-9).floor() as usize;
        let mut v: Vec<f64> = (0..=n).map(|i| start + i as f64 * step).collect();
        let last = v.last_mut().unwrap();
        if (*last - end).abs() <= 1e-9 * step {
            *last = end;
        }
        return Ok(v);
    }
    s.split(',').map(num).collect()
}

pub fn parse_usize_list(s: &str) -> Result<Vec<usize>> {
    let v: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| anyhow::anyhow!("bad integer `{p}`: {e}")))
        .collect::<Result<_>>()?;
    if v.is_empty() {
        bail!("empty list");
    }
    Ok(v)
}

fn num(p: &str) -> Result<f64> {
    let x: f64 = p.trim().parse().map_err(|e| anyhow::anyhow!("bad number `{p}`: {e}"))?;
    if !x.is_finite() {
        bail!("non-finite number `{p}`");
    }
    Ok(x)
}

//! Parsers for angle, grid and size-list arguments.

use std::f64::consts::PI;

use anyhow::{anyhow, bail, Context, Result};
use hcs_core::css::Family;

/// A number, or a multiple of pi such as `pi/8`, `3pi/16` or `-pi/4`.
pub fn parse_angle(text: &str) -> Result<f64> {
    let t = text.trim().to_ascii_lowercase();
    let value = match t.find("pi") {
        None => t.parse::<f64>().with_context(|| format!("bad angle {text:?}"))?,
        Some(at) => {
            let coeff = match t[..at].trim_end_matches('*') {
                "" => 1.0,
                "-" => -1.0,
                c => c.parse::<f64>().with_context(|| format!("bad angle {text:?}"))?,
            };
            let denom = match t[at + 2..].strip_prefix('/') {
                None if t.len() == at + 2 => 1.0,
                None => bail!("bad angle {text:?}"),
                Some(d) => d.parse::<f64>().with_context(|| format!("bad angle {text:?}"))?,
            };
            coeff * PI / denom
        }
    };
    if !value.is_finite() {
        bail!("angle {text:?} is not finite");
    }
    Ok(value)
}

/// Comma-separated angles and inclusive `start:stop:step` ranges.
pub fn parse_theta_grid(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [single] => out.push(parse_angle(single)?),
            [start, stop, step] => {
                let (start, stop, step) = (parse_angle(start)?, parse_angle(stop)?, parse_angle(step)?);
                if step <= 0.0 || stop < start {
                    bail!("theta range {item:?} needs step > 0 and stop >= start");
                }
                let count = ((stop - start) / step + 1e-9).floor() as usize;
                out.extend((0..=count).map(|i| start + i as f64 * step));
            }
            _ => bail!("theta item {item:?} is neither an angle nor start:stop:step"),
        }
    }
    if out.is_empty() {
        bail!("empty theta grid");
    }
    Ok(out)
}

/// Comma-separated families.
pub fn parse_families(text: &str) -> Result<Vec<Family>> {
    let families = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<Family>().map_err(|e| anyhow!(e)))
        .collect::<Result<Vec<_>>>()?;
    if families.is_empty() {
        bail!("no family given");
    }
    Ok(families)
}

/// Comma-separated sizes; `family:n` pins a size to one family, a bare
/// `n` applies to every family in `families`.
pub fn parse_n_list(text: &str, families: &[Family]) -> Result<Vec<(Family, usize)>> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match item.split_once(':') {
            Some((f, n)) => {
                let family: Family = f.parse().map_err(|e| anyhow!("{e}"))?;
                out.push((family, n.parse().with_context(|| format!("bad size in {item:?}"))?));
            }
            None => {
                let n: usize = item.parse().with_context(|| format!("bad size {item:?}"))?;
                out.extend(families.iter().map(|&f| (f, n)));
            }
        }
    }
    if out.is_empty() {
        bail!("empty size list");
    }
    out.sort();
    out.dedup();
    Ok(out)
}

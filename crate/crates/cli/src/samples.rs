//! Sample files: one `n`-character 0/1 line per shot.

use std::path::Path;

use anyhow::{bail, Context, Result};
use hcs_core::dists::SampleBatch;
use hcs_core::gf2::BitVector;

pub fn to_text(batch: &SampleBatch) -> String {
    let mut out = String::with_capacity(batch.len() * (batch.n + 1));
    for x in &batch.shots {
        out.push_str(&x.to_string());
        out.push('\n');
    }
    out
}

pub fn parse(text: &str, n: usize) -> Result<SampleBatch> {
    let mut shots = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let x = BitVector::parse_bits(line).with_context(|| format!("sample line {}", i + 1))?;
        if x.len() != n {
            bail!("sample line {} has {} bits, expected {n}", i + 1, x.len());
        }
        shots.push(x);
    }
    if shots.is_empty() {
        bail!("no samples");
    }
    Ok(SampleBatch { n, shots })
}

pub fn read(path: &Path, n: usize) -> Result<SampleBatch> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse(&text, n).with_context(|| format!("malformed sample file {}", path.display()))
}

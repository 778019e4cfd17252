//! Plain-text sample files: one value per line, optional
//! `# sample_rate=<sps>` header.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use seisnoise::Series64;

use crate::usage;

/// Read a series from a CSV/text file. A `--rate` style override takes
/// precedence over the file header; one of the two must provide the rate.
pub fn read_csv(path: &Path, rate_override: Option<f64>) -> Result<Series64> {
    let text = fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let mut rate = rate_override;
    let mut values = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(v) = rest.strip_prefix("sample_rate=") {
                let parsed: f64 = v.trim().parse().with_context(|| {
                    format!("{}:{}: bad sample_rate header", path.display(), lineno + 1)
                })?;
                if rate.is_none() {
                    rate = Some(parsed);
                }
            }
            continue;
        }
        let v: f64 = line.parse().map_err(|_| {
            usage(format!(
                "{}:{}: cannot parse sample {line:?}",
                path.display(),
                lineno + 1
            ))
        })?;
        if !v.is_finite() {
            return Err(usage(format!(
                "{}:{}: non-finite sample",
                path.display(),
                lineno + 1
            )));
        }
        values.push(v);
    }
    let rate = rate.ok_or_else(|| {
        usage(format!(
            "{}: no `# sample_rate=` header and no --rate given",
            path.display()
        ))
    })?;
    let mut s = Series64::new(values, rate)
        .with_context(|| format!("{}: invalid series", path.display()))?;
    s.meta_mut()
        .insert("source".into(), path.display().to_string());
    Ok(s)
}

/// Write a series in the same format `read_csv` accepts.
pub fn write_csv(s: &Series64, path: &Path) -> Result<()> {
    let mut out = String::with_capacity(s.len() * 12);
    out.push_str(&format!("# sample_rate={}\n", s.sample_rate()));
    for v in s.values() {
        out.push_str(&format!("{v}\n"));
    }
    fs::write(path, out).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

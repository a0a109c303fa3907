//! Sample-file reading and evaluation-grid parsing.

use std::path::Path;

use iorstat::SortedSample;

use crate::{input_error, CliResult};

/// Reads one nonnegative decimal per line; blank lines and `#` comments
/// are ignored. Errors carry the offending line number.
pub fn read_sample_file(path: &Path) -> CliResult<SortedSample> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?;
    let mut values = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let value: f64 = line.parse().map_err(|_| {
            input_error(format!(
                "{}:{}: cannot parse '{line}' as a number",
                path.display(),
                idx + 1
            ))
        })?;
        if !value.is_finite() || value < 0.0 {
            return Err(input_error(format!(
                "{}:{}: observations must be finite and nonnegative, got {value}",
                path.display(),
                idx + 1
            )));
        }
        values.push(value);
    }
    if values.is_empty() {
        return Err(input_error(format!(
            "{}: no observations found",
            path.display()
        )));
    }
    Ok(SortedSample::new(values)?)
}

/// Parses a grid spec `start:stop:count` into an inclusive linspace.
pub fn parse_grid(spec: &str) -> CliResult<Vec<f64>> {
    let bad = |msg: &str| input_error(format!("grid '{spec}': {msg}"));
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(bad("expected start:stop:count"));
    }
    let start: f64 = parts[0].parse().map_err(|_| bad("bad start"))?;
    let stop: f64 = parts[1].parse().map_err(|_| bad("bad stop"))?;
    let count: usize = parts[2].parse().map_err(|_| bad("bad count"))?;
    if !(start.is_finite() && stop.is_finite()) || start < 0.0 || stop <= start {
        return Err(bad("need finite 0 <= start < stop"));
    }
    if count < 2 {
        return Err(bad("count must be at least 2"));
    }
    let step = (stop - start) / (count - 1) as f64;
    Ok((0..count).map(|i| start + step * i as f64).collect())
}

//! Parsing of p-value input and numeric grid flags.

use std::io::Read;
use std::path::Path;

use crate::error::{CliError, CliResult};

/// Parses p-values written one per line or comma-separated, with `#`
/// starting a comment. Errors name the offending line.
pub fn parse_p_values(text: &str) -> CliResult<Vec<f64>> {
    let mut values = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        for field in line.split(',') {
            let field = field.trim();
            if field.is_empty() {
                continue;
            }
            let v: f64 = field
                .parse()
                .map_err(|_| CliError::validation(format!("line {}: '{field}' is not a number", i + 1)))?;
            if !(0.0..=1.0).contains(&v) {
                return Err(CliError::validation(format!(
                    "line {}: p-value {field} is outside [0, 1]",
                    i + 1
                )));
            }
            values.push(v);
        }
    }
    if values.is_empty() {
        return Err(CliError::validation("no p-values in input"));
    }
    Ok(values)
}

/// Reads p-values from `--values`, `--input` (`-` for stdin) or stdin.
pub fn read_p_values(values: Option<&str>, input: Option<&Path>) -> CliResult<(Vec<f64>, String)> {
    match (values, input) {
        (Some(_), Some(_)) => Err(CliError::validation("give either --values or --input, not both")),
        (Some(v), None) => Ok((parse_p_values(v)?, "values".into())),
        (None, Some(path)) if path.as_os_str() != "-" => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
            let p = parse_p_values(&text).map_err(|e| match e {
                CliError::Validation(msg) => CliError::Validation(format!("{}: {msg}", path.display())),
                other => other,
            })?;
            Ok((p, path.display().to_string()))
        }
        _ => {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| CliError::Io(format!("reading stdin: {e}")))?;
            Ok((parse_p_values(&text)?, "stdin".into()))
        }
    }
}

/// Parses a list `a,b,c` or an inclusive evenly spaced range `lo:hi:n`.
pub fn parse_grid(text: &str, flag: &str) -> CliResult<Vec<f64>> {
    let bad = |what: &str| CliError::validation(format!("{flag}: {what} in '{text}'"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(&format!("'{}' is not a number", s.trim())));
    let values = if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("a range needs the form lo:hi:n"));
        }
        let (lo, hi) = (num(parts[0])?, num(parts[1])?);
        let n: usize = parts[2].trim().parse().map_err(|_| bad("the point count is not a positive integer"))?;
        match n {
            0 => return Err(bad("the point count is zero")),
            1 => vec![lo],
            _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
        }
    } else {
        text.split(',').map(num).collect::<CliResult<Vec<_>>>()?
    };
    if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
        return Err(bad("values must be finite"));
    }
    Ok(values)
}

/// Parses a comma-separated list of positive integers.
pub fn parse_counts(text: &str, flag: &str) -> CliResult<Vec<usize>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .ok()
                .filter(|&n| n >= 1)
                .ok_or_else(|| CliError::validation(format!("{flag}: '{}' is not a positive integer", s.trim())))
        })
        .collect()
}

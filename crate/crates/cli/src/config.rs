//! Run configuration: JSON config files, list/range flag parsing, and the
//! flag-over-file resolution rule.

use std::path::Path;

use serde::Deserialize;

/// Values a JSON config document may carry. Field names match the flag names
/// (underscores for dashes); explicit flags override file values.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub n: Option<u64>,
    pub pool: Option<u64>,
    pub mu: Option<Vec<f64>>,
    pub alpha: Option<f64>,
    pub rho: Option<f64>,
    pub rings: Option<Vec<u64>>,
    pub ring_offsets: Option<Vec<u64>>,
    pub ring_factors: Option<Vec<f64>>,
    pub k1_values: Option<Vec<u64>>,
    pub alphas: Option<Vec<f64>>,
    pub pairs: Option<Vec<(u64, u64)>>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub sigma: Option<f64>,
    pub paired_disk: Option<bool>,
    pub literal_pairs: Option<bool>,
    pub axis: Option<String>,
    pub bound_exponent: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config file {}: {e}", path.display()))?;
        serde_json::from_str(&text)
            .map_err(|e| format!("invalid config file {}: {e}", path.display()))
    }
}

pub fn parse_u64_list(text: &str, flag: &str) -> Result<Vec<u64>, String> {
    if let Some(range) = parse_range_spec(text)? {
        let (start, end, step) = range;
        if step == 0.0 || start.fract() != 0.0 || end.fract() != 0.0 || step.fract() != 0.0 {
            return Err(format!("{flag}: integer range requires integer start:end:step"));
        }
        let mut values = Vec::new();
        let mut v = start as u64;
        while v <= end as u64 {
            values.push(v);
            v += step as u64;
        }
        return Ok(values);
    }
    text.split(',')
        .map(|item| {
            item.trim()
                .parse::<u64>()
                .map_err(|_| format!("{flag}: cannot parse '{item}' as an integer"))
        })
        .collect()
}

pub fn parse_f64_list(text: &str, flag: &str) -> Result<Vec<f64>, String> {
    if let Some((start, end, step)) = parse_range_spec(text)? {
        if step <= 0.0 {
            return Err(format!("{flag}: range step must be positive"));
        }
        let mut values = Vec::new();
        let mut index = 0u32;
        loop {
            let v = start + step * f64::from(index);
            if v > end + 1e-12 {
                break;
            }
            values.push(v);
            index += 1;
        }
        return Ok(values);
    }
    text.split(',')
        .map(|item| {
            item.trim()
                .parse::<f64>()
                .map_err(|_| format!("{flag}: cannot parse '{item}' as a number"))
        })
        .collect()
}

/// `start:end:step` range shorthand; returns `None` for plain comma lists.
fn parse_range_spec(text: &str) -> Result<Option<(f64, f64, f64)>, String> {
    if !text.contains(':') || text.contains(',') {
        return Ok(None);
    }
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("range '{text}' must be start:end:step"));
    }
    let mut numbers = [0.0f64; 3];
    for (slot, part) in numbers.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse::<f64>()
            .map_err(|_| format!("range '{text}': cannot parse '{part}'"))?;
    }
    Ok(Some((numbers[0], numbers[1], numbers[2])))
}

/// `k1:k2` pairs separated by commas, e.g. `10:70,20:60`.
pub fn parse_pair_list(text: &str, flag: &str) -> Result<Vec<(u64, u64)>, String> {
    text.split(',')
        .map(|item| {
            let (a, b) = item
                .trim()
                .split_once(':')
                .ok_or_else(|| format!("{flag}: pair '{item}' must be k1:k2"))?;
            let k1 = a
                .trim()
                .parse::<u64>()
                .map_err(|_| format!("{flag}: cannot parse '{a}'"))?;
            let k2 = b
                .trim()
                .parse::<u64>()
                .map_err(|_| format!("{flag}: cannot parse '{b}'"))?;
            Ok((k1, k2))
        })
        .collect()
}

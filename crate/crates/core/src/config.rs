// SPDX-License-Identifier: Apache-2.0

//! Flat `key = value` run configuration.
//!
//! ```text
//! # one community of 10000 power-law vertices
//! c = 1
//! n_i = 10000
//! b = 2
//! q = 0.5
//! r = 1
//! a = 0.1
//! h = id
//! gamma = 2.5
//! kmin = 2
//! kmax = 30
//! seed = 7
//! ```
//!
//! Degrees come from `degrees = FILE` (one degree per line, blank line
//! between communities), `pmf = FILE` (`k<TAB>p_k` lines) or the power law
//! `gamma`, `kmin`, `kmax`, in that order of precedence. Relative paths are
//! resolved against the config file's directory. `h` is `id`, `rev` or a
//! one-based image list such as `2,1`. `strict = true` rejects block
//! partitions where a degree straddles two blocks.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::degree::{pmf_from_sequence, DegreeDistribution};
use crate::error::{Error, Result};
use crate::generator::{DegreeSource, Involution, ModelConfig};
use crate::io::{read_degree_sequence, read_pmf};

const KEYS: [&str; 14] = ["c", "n_i", "b", "q", "r", "a", "h", "gamma", "kmin", "kmax", "seed", "degrees", "pmf", "strict"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub model: ModelConfig,
    /// The pmf the closed forms evaluate.
    pub pmf: DegreeDistribution,
    /// `None` when the file sets no seed.
    pub seed: Option<u64>,
    /// Every key as written, after defaults.
    pub entries: BTreeMap<String, String>,
    /// Files the config pulled in.
    pub inputs: Vec<PathBuf>,
}

fn parse_entries(text: &str, source: &str) -> Result<BTreeMap<String, String>> {
    let mut entries = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Parse { source_name: source.into(), line: i + 1, reason: format!("expected `key = value`, got `{line}`") });
        };
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(Error::config(key, format!("unknown key (known: {})", KEYS.join(", "))));
        }
        if entries.insert(key.to_string(), value.to_string()).is_some() {
            return Err(Error::config(key, "set more than once"));
        }
    }
    Ok(entries)
}

fn get<T: std::str::FromStr>(entries: &BTreeMap<String, String>, key: &str, default: T) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    match entries.get(key) {
        Some(v) => v.parse().map_err(|e| Error::config(key, format!("`{v}`: {e}"))),
        None => Ok(default),
    }
}

fn unit(entries: &BTreeMap<String, String>, key: &str, default: f64) -> Result<f64> {
    let v: f64 = get(entries, key, default)?;
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::config(key, format!("{v} outside [0, 1]")));
    }
    Ok(v)
}

fn rekey(key: &'static str, e: Error) -> Error {
    match e {
        Error::InvalidParameter { reason, .. } => Error::config(key, reason),
        other => other,
    }
}

pub fn parse_config(text: &str, source: &str, base_dir: &Path) -> Result<RunConfig> {
    let entries = parse_entries(text, source)?;
    let mut inputs = Vec::new();
    let mut read = |key: &str| -> Result<Option<(String, String)>> {
        let Some(rel) = entries.get(key) else { return Ok(None) };
        let path = base_dir.join(rel);
        let text = std::fs::read_to_string(&path).map_err(|e| Error::config(key, format!("{}: {e}", path.display())))?;
        inputs.push(path.clone());
        Ok(Some((text, path.display().to_string())))
    };
    let degrees_file = read("degrees")?;
    let pmf_file = read("pmf")?;

    let b: usize = get(&entries, "b", 1)?;
    if b == 0 {
        return Err(Error::config("b", "must be at least 1"));
    }
    let q = unit(&entries, "q", 0.0)?;
    let r = unit(&entries, "r", 1.0)?;
    let a = unit(&entries, "a", 0.0)?;
    let h = Involution::parse(entries.get("h").map_or("id", String::as_str), b).map_err(|e| rekey("h", e))?;
    let seed = entries.get("seed").map(|s| s.parse::<u64>().map_err(|e| Error::config("seed", format!("`{s}`: {e}")))).transpose()?;
    let strict: bool = get(&entries, "strict", false)?;

    let (degrees, pmf, sizes) = if let Some((text, name)) = degrees_file {
        let seq = read_degree_sequence(&text, &name)?;
        if let Some(c) = entries.get("c") {
            if c.parse::<usize>().ok() != Some(seq.community_count()) {
                return Err(Error::config("c", format!("`{c}` but the degree file has {} communities", seq.community_count())));
            }
        }
        let pmf = match pmf_file {
            Some((text, name)) => read_pmf(&text, &name)?,
            None => pmf_from_sequence(&seq)?,
        };
        let sizes = seq.community_sizes();
        (DegreeSource::Explicit(seq), pmf, sizes)
    } else {
        let c: usize = get(&entries, "c", 1)?;
        if c == 0 {
            return Err(Error::config("c", "must be at least 1"));
        }
        let sizes: Vec<usize> = match entries.get("n_i") {
            None => vec![1000; c],
            Some(list) => {
                let parsed = list
                    .split(',')
                    .map(|s| s.trim().parse::<usize>().map_err(|e| Error::config("n_i", format!("`{s}`: {e}"))))
                    .collect::<Result<Vec<_>>>()?;
                match parsed.len() {
                    1 => vec![parsed[0]; c],
                    len if len == c => parsed,
                    len => return Err(Error::config("n_i", format!("{len} sizes for c = {c} communities"))),
                }
            }
        };
        if sizes.contains(&0) {
            return Err(Error::config("n_i", "every community needs at least one vertex"));
        }
        match pmf_file {
            Some((text, name)) => {
                let pmf = read_pmf(&text, &name)?;
                (DegreeSource::Distribution(pmf.clone()), pmf, sizes)
            }
            None => {
                let gamma: f64 = get(&entries, "gamma", 2.5)?;
                let kmin: u32 = get(&entries, "kmin", 1)?;
                let kmax: u32 = get(&entries, "kmax", 100)?;
                let pmf = DegreeDistribution::power_law(gamma, kmin, kmax).map_err(|e| rekey("gamma", e))?;
                (DegreeSource::PowerLaw { gamma, kmin, kmax }, pmf, sizes)
            }
        }
    };

    let model = ModelConfig {
        community_sizes: sizes,
        b,
        q,
        r,
        a,
        h,
        seed: seed.unwrap_or(0),
        degrees,
        strict_blocks: strict,
    };
    Ok(RunConfig { model, pmf, seed, entries, inputs })
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::config("--config", format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    parse_config(&text, &path.display().to_string(), base)
}

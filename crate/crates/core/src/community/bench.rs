// SPDX-License-Identifier: Apache-2.0

use serde::Serialize;

use super::Detector;
use crate::empirical::{nmi, ReplicaStat};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::generator::{generate, Generation, ModelConfig};
use crate::rng::derive_seed;

/// A parameter and the grid it runs over.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sweep {
    pub param: String,
    pub values: Vec<f64>,
}

impl Sweep {
    pub fn new(param: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::param("sweep", "empty grid"));
        }
        Ok(Self { param: param.into(), values })
    }

    /// Parses `KEY=START:STOP:STEP` (inclusive stop).
    pub fn parse(spec: &str) -> Result<Self> {
        let (key, range) = spec
            .split_once('=')
            .ok_or_else(|| Error::param("sweep", format!("`{spec}` is not KEY=START:STOP:STEP")))?;
        let parts: Vec<f64> = range
            .split(':')
            .map(|s| s.trim().parse::<f64>().map_err(|e| Error::param("sweep", format!("`{s}`: {e}"))))
            .collect::<Result<_>>()?;
        let [start, stop, step] = parts[..] else {
            return Err(Error::param("sweep", format!("`{range}` needs three fields START:STOP:STEP")));
        };
        if step.is_nan() || step <= 0.0 || stop < start {
            return Err(Error::param("sweep", "need STEP > 0 and STOP >= START"));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        // Round to the step's decimal places so grid values print cleanly.
        let values = (0..count).map(|i| ((start + i as f64 * step) * 1e9).round() / 1e9).collect();
        Self::new(key.trim(), values)
    }
}

/// One generated graph handed to a detector.
pub struct BenchCase<'a> {
    pub cell: usize,
    pub value: f64,
    pub rep: usize,
    pub generation: &'a Generation,
    /// Seed reserved for the detector.
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchCell {
    pub value: f64,
    pub nmi: Vec<f64>,
    pub mean: f64,
    /// `None` with a single replica.
    pub stderr: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub param: String,
    pub detector: String,
    pub reps: usize,
    pub base_seed: u64,
    pub cells: Vec<BenchCell>,
    /// Digest of the generating config, filled in by the caller.
    pub config_digest: Option<String>,
}

impl BenchReport {
    /// `param,value,rep,nmi`
    pub fn per_rep_csv(&self) -> String {
        let mut out = String::from("param,value,rep,nmi\n");
        for cell in &self.cells {
            for (rep, v) in cell.nmi.iter().enumerate() {
                out.push_str(&format!("{},{},{rep},{v}\n", self.param, cell.value));
            }
        }
        out
    }

    /// `param,value,mean_nmi,stderr`; the stderr field is `NA` for one replica.
    pub fn summary_csv(&self) -> String {
        let mut out = String::from("param,value,mean_nmi,stderr\n");
        for cell in &self.cells {
            let se = cell.stderr.map_or_else(|| "NA".to_string(), |s| s.to_string());
            out.push_str(&format!("{},{},{},{se}\n", self.param, cell.value, cell.mean));
        }
        out
    }

    pub fn means(&self) -> Vec<f64> {
        self.cells.iter().map(|c| c.mean).collect()
    }
}

fn replica_config(base: &ModelConfig, sweep: &Sweep, cell: usize, rep: usize) -> Result<ModelConfig> {
    let mut cfg = base.with_param(&sweep.param, sweep.values[cell])?;
    cfg.seed = derive_seed(derive_seed(base.seed, "bench-cell", cell as u64), "bench-rep", rep as u64);
    Ok(cfg)
}

/// Benchmark with a caller-supplied detector returning a label per vertex.
pub fn run_benchmark_with<F>(base: &ModelConfig, sweep: &Sweep, reps: usize, name: &str, exec: Exec, detect: F) -> Result<BenchReport>
where
    F: Fn(&BenchCase<'_>) -> Result<Vec<u32>> + Sync + Send,
{
    if reps == 0 {
        return Err(Error::param("reps", "must be at least 1"));
    }
    for &v in &sweep.values {
        base.with_param(&sweep.param, v)?;
    }
    let jobs: Vec<(usize, usize)> = (0..sweep.values.len()).flat_map(|c| (0..reps).map(move |r| (c, r))).collect();
    let scores = exec.map_slice(&jobs, |&(cell, rep)| -> Result<f64> {
        let cfg = replica_config(base, sweep, cell, rep)?;
        let generation = generate(&cfg, Exec::Sequential)?;
        let case = BenchCase { cell, value: sweep.values[cell], rep, generation: &generation, seed: derive_seed(cfg.seed, "detector", 0) };
        let labels = detect(&case)?;
        nmi(&generation.graph.community, &labels)
    });
    let scores: Vec<f64> = scores.into_iter().collect::<Result<_>>()?;
    let cells = sweep
        .values
        .iter()
        .zip(scores.chunks(reps))
        .map(|(&value, chunk)| {
            let stat = ReplicaStat::from_values(chunk);
            BenchCell { value, nmi: chunk.to_vec(), mean: stat.mean, stderr: (reps > 1).then_some(stat.stderr) }
        })
        .collect();
    Ok(BenchReport {
        param: sweep.param.clone(),
        detector: name.to_string(),
        reps,
        base_seed: base.seed,
        cells,
        config_digest: None,
    })
}

/// Benchmark with a built-in detector run on the simple projection of all
/// edges.
pub fn run_benchmark(base: &ModelConfig, sweep: &Sweep, reps: usize, detector: Detector, exec: Exec) -> Result<BenchReport> {
    run_benchmark_with(base, sweep, reps, detector.name(), exec, |case| {
        Ok(detector.detect(&case.generation.graph.simple, case.seed))
    })
}

fn ranks(values: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut out = vec![0.0; values.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && values[idx[j + 1]] == values[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            out[k] = avg;
        }
        i = j + 1;
    }
    out
}

/// Spearman rank correlation with average ranks for ties; `None` when
/// either side is constant.
pub fn spearman(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let n = rx.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx).powi(2);
        syy += (b - my).powi(2);
    }
    (sxx > 0.0 && syy > 0.0).then(|| sxy / (sxx * syy).sqrt())
}

// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;

use ctc_core::closed_form::{local_clustering_coefficient, sweep, sweep_csv, AnalyticReport, BlockModel, SweepParam};
use ctc_core::community::{run_benchmark_with, BenchReport, Detector, Sweep};
use ctc_core::config::{load_config, RunConfig};
use ctc_core::empirical::ReplicaStat;
use ctc_core::generator::generate;
use ctc_core::io::{read_communities, write_communities, write_edges};
use ctc_core::validation::{verify, CellComparison, Comparison};
use ctc_core::Exec;

use crate::error::{CliError, CliResult};
use crate::manifest::{digest_inputs, sha256_hex, OutputDir, RunRecord};

const TOOL_VERSION: &str = concat!("ctc ", env!("CARGO_PKG_VERSION"));
pub const DETECTORS: [&str; 3] = ["fast_unfolding", "label_propagation", "external"];

/// A loaded config with its seed resolved.
struct Loaded {
    run: RunConfig,
    config_path: PathBuf,
    seed_from_entropy: bool,
}

fn load(path: &Path, seed: Option<u64>) -> CliResult<Loaded> {
    let mut run = load_config(path)?;
    run.model.validate()?;
    let (seed, seed_from_entropy) = match seed.or(run.seed) {
        Some(s) => (s, false),
        None => (rand::random::<u64>(), true),
    };
    run.model.seed = seed;
    run.seed = Some(seed);
    Ok(Loaded { run, config_path: path.to_path_buf(), seed_from_entropy })
}

impl Loaded {
    fn record(&self, command: &str, options: BTreeMap<String, String>) -> CliResult<RunRecord> {
        let mut files = vec![self.config_path.clone()];
        files.extend(self.run.inputs.iter().cloned());
        Ok(RunRecord {
            command: command.to_string(),
            config: self.run.entries.clone(),
            options,
            seed: self.run.seed,
            seed_from_entropy: self.seed_from_entropy,
            inputs: digest_inputs(&files)?,
            outputs: Vec::new(),
            tool_version: TOOL_VERSION.to_string(),
        })
    }

    fn config_digest(&self) -> CliResult<String> {
        let bytes = fs::read(&self.config_path).map_err(|e| CliError::io(&self.config_path, e))?;
        Ok(sha256_hex(&bytes))
    }

    fn block_model(&self) -> CliResult<BlockModel> {
        let m = &self.run.model;
        Ok(BlockModel::from_distribution(&self.run.pmf, m.b, m.h.clone(), m.strict_blocks)?)
    }
}

pub fn generate_cmd(config: &Path, out: &Path, seed: Option<u64>) -> CliResult<()> {
    let started = Instant::now();
    let loaded = load(config, seed)?;
    let generation = generate(&loaded.run.model, Exec::default())?;
    let mut dir = OutputDir::create(out)?;
    dir.write("edges.tsv", write_edges(&generation.graph).as_bytes())?;
    dir.write("communities.tsv", write_communities(&generation.graph.community).as_bytes())?;
    let g = &generation.graph;
    eprintln!(
        "{} vertices, {} regular edges, {} transitive edges ({} self-loops, {} multi-edges)",
        g.vertex_count(),
        generation.wiring.len(),
        g.transitive_edge_count(),
        g.self_loops,
        g.multi_edges
    );
    dir.finish(loaded.record("generate", BTreeMap::new())?, started)
}

#[derive(Serialize)]
struct ClusteringPoint {
    k: u32,
    kprime: u32,
    predicted: f64,
}

#[derive(Serialize)]
struct AnalyzeOutput<'a> {
    #[serde(flatten)]
    report: &'a AnalyticReport,
    /// Prediction for each support degree `k` and `k' = 0..=k`.
    clustering: Vec<ClusteringPoint>,
}

pub fn analyze_cmd(config: &Path, out: Option<&Path>, sweep_spec: Option<&str>) -> CliResult<()> {
    let started = Instant::now();
    let loaded = load(config, Some(0))?;
    let m = &loaded.run.model;
    let model = loaded.block_model()?;
    let report = AnalyticReport::evaluate(&model, m.a, m.q * m.r)?;
    let clustering = loaded
        .run
        .pmf
        .support()
        .iter()
        .flat_map(|&(k, _)| (0..=k).map(move |kp| (k, kp)))
        .map(|(k, kprime)| ClusteringPoint { k, kprime, predicted: local_clustering_coefficient(k, kprime, m.a) })
        .collect();
    let json = serde_json::to_string_pretty(&AnalyzeOutput { report: &report, clustering }).expect("report serializes") + "\n";

    let csv = match sweep_spec {
        Some(spec) => {
            let grid = Sweep::parse(spec)?;
            let param = SweepParam::parse(&grid.param)?;
            let reports = sweep(&model, param, &grid.values, m.a, m.q, m.r)?;
            Some(sweep_csv(param, &grid.values, &reports))
        }
        None => None,
    };

    match out {
        None => {
            print!("{}", csv.as_deref().unwrap_or(&json));
            Ok(())
        }
        Some(out) => {
            let mut dir = OutputDir::create(out)?;
            dir.write("report.json", json.as_bytes())?;
            let mut options = BTreeMap::new();
            if let (Some(csv), Some(spec)) = (&csv, sweep_spec) {
                dir.write("sweep.csv", csv.as_bytes())?;
                options.insert("sweep".into(), spec.to_string());
            }
            let mut record = loaded.record("analyze", options)?;
            record.seed = None;
            dir.finish(record, started)
        }
    }
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    replicas: usize,
    analytic: &'a AnalyticReport,
    comparisons: &'a [Comparison],
    transitive_edges: ReplicaStat,
    wedge_overcount: ReplicaStat,
    clustering: &'a [CellComparison],
}

fn clustering_csv(cells: &[CellComparison]) -> String {
    let mut out = String::from("k,kprime,count,empirical,predicted\n");
    for c in cells {
        out.push_str(&format!("{},{},{},{},{}\n", c.k, c.kprime, c.count, c.empirical, c.predicted));
    }
    out
}

pub fn verify_cmd(config: &Path, out: Option<&Path>, reps: usize, seed: Option<u64>) -> CliResult<()> {
    let started = Instant::now();
    let loaded = load(config, seed)?;
    let report = verify(&loaded.run.model, &loaded.run.pmf, reps, Exec::default())?;

    println!("{:<20} {:>14} {:>14} {:>12} {:>8}", "quantity", "analytic", "empirical", "se", "z");
    for c in &report.comparisons {
        let z = c.z.map_or_else(|| "NA".to_string(), |z| format!("{z:+.2}"));
        println!("{:<20} {:>14.6} {:>14.6} {:>12.6} {:>8}", c.quantity, c.analytic, c.empirical.mean, c.empirical.stderr, z);
    }
    println!("transitive edges per replica {:.1}, open wedges per candidate pair {:.4}", report.transitive_edges.mean, report.wedge_overcount.mean);

    if let Some(out) = out {
        let mut dir = OutputDir::create(out)?;
        let body = VerifyOutput {
            replicas: report.replicas,
            analytic: &report.analytic,
            comparisons: &report.comparisons,
            transitive_edges: report.transitive_edges,
            wedge_overcount: report.wedge_overcount,
            clustering: &report.clustering,
        };
        dir.write_json("verify.json", &body)?;
        dir.write("clustering.csv", clustering_csv(&report.clustering).as_bytes())?;
        let options = BTreeMap::from([("reps".to_string(), reps.to_string())]);
        dir.finish(loaded.record("verify", options)?, started)?;
    }
    Ok(())
}

pub struct BenchArgs<'a> {
    pub config: &'a Path,
    pub out: &'a Path,
    pub sweep: &'a str,
    pub detector: &'a str,
    pub reps: usize,
    pub seed: Option<u64>,
    pub partitions: Option<&'a Path>,
    pub emit_graphs: bool,
}

fn case_name(cell: usize, rep: usize) -> String {
    format!("cell{cell}-rep{rep}")
}

pub fn bench_cmd(args: &BenchArgs<'_>) -> CliResult<()> {
    let started = Instant::now();
    let external = args.detector == "external";
    let builtin = if external {
        None
    } else {
        Some(Detector::parse(args.detector).map_err(|_| {
            CliError::usage(format!("unknown detector `{}` (available: {})", args.detector, DETECTORS.join(", ")))
        })?)
    };
    let partitions = match (external, args.partitions) {
        (true, None) => return Err(CliError::usage("--detector external needs --partitions DIR")),
        (_, p) => p,
    };
    let loaded = load(args.config, args.seed)?;
    let grid = Sweep::parse(args.sweep)?;
    let mut dir = OutputDir::create(args.out)?;

    // Graphs are collected first and written serially.
    if args.emit_graphs {
        emit_graphs(&mut dir, &loaded, &grid, args.reps)?;
    }

    let mut report: BenchReport = run_benchmark_with(&loaded.run.model, &grid, args.reps, args.detector, Exec::default(), |case| {
        match (builtin, partitions) {
            (Some(d), _) => Ok(d.detect(&case.generation.graph.simple, case.seed)),
            (None, Some(root)) => {
                let path = root.join(format!("{}.tsv", case_name(case.cell, case.rep)));
                let text = fs::read_to_string(&path).map_err(|e| ctc_core::Error::Config {
                    key: "--partitions".into(),
                    reason: format!("{}: {e}", path.display()),
                })?;
                read_communities(&text, &path.display().to_string())
            }
            (None, None) => unreachable!("checked above"),
        }
    })?;
    report.config_digest = Some(loaded.config_digest()?);

    dir.write("summary.csv", report.summary_csv().as_bytes())?;
    dir.write("per_rep.csv", report.per_rep_csv().as_bytes())?;
    dir.write_json("bench.json", &report)?;
    print!("{}", report.summary_csv());

    let mut options = BTreeMap::from([
        ("sweep".to_string(), args.sweep.to_string()),
        ("detector".to_string(), args.detector.to_string()),
        ("reps".to_string(), args.reps.to_string()),
    ]);
    if let Some(p) = partitions {
        options.insert("partitions".into(), p.display().to_string());
    }
    let mut record = loaded.record("bench", options)?;
    if let Some(p) = partitions {
        let files: Vec<PathBuf> = (0..grid.values.len())
            .flat_map(|c| (0..args.reps).map(move |r| p.join(format!("{}.tsv", case_name(c, r)))))
            .collect();
        record.inputs.extend(digest_inputs(&files)?);
    }
    dir.finish(record, started)
}

fn emit_graphs(dir: &mut OutputDir, loaded: &Loaded, grid: &Sweep, reps: usize) -> CliResult<()> {
    let graphs = std::sync::Mutex::new(Vec::new());
    run_benchmark_with(&loaded.run.model, grid, reps, "emit", Exec::default(), |case| {
        let g = &case.generation.graph;
        let entry = ((case.cell, case.rep), write_edges(g), write_communities(&g.community));
        graphs.lock().expect("no poisoned writers").push(entry);
        Ok(g.community.clone())
    })?;
    let mut graphs = graphs.into_inner().expect("no poisoned writers");
    graphs.sort_by_key(|g| g.0);
    for ((cell, rep), edges, communities) in graphs {
        let name = case_name(cell, rep);
        dir.write(&format!("graphs/{name}.edges.tsv"), edges.as_bytes())?;
        dir.write(&format!("graphs/{name}.communities.tsv"), communities.as_bytes())?;
    }
    Ok(())
}

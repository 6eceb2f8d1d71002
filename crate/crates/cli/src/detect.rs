use std::path::PathBuf;

use clap::{Args, ValueEnum};
use comdet::io::{write_community_graph, write_partition};
use comdet::quality::QualityReport;
use comdet::{
    run_epp, run_plm, run_plmr, run_plp, EnsembleConfig, Graph, LouvainConfig, Partition,
    PlpConfig, RunReport, Workers,
};
use serde::Serialize;

use crate::failure::{CliResult, Context, Failure};
use crate::input::{self, GraphArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algo {
    /// Parallel label propagation
    Plp,
    /// Parallel Louvain method
    Plm,
    /// Parallel Louvain method with refinement
    Plmr,
    /// Ensemble preprocessing: PLP ensemble, then PLMR on the core graph
    Epp,
}

/// Algorithm parameters shared by `detect` and `bench`.
#[derive(Debug, Clone, Args)]
pub struct AlgoParams {
    /// Algorithm to run
    #[arg(long, value_enum)]
    pub algo: Algo,
    /// Label propagation stops once an iteration updates at most this many
    /// labels [default: max(1, n / 100000)]
    #[arg(long)]
    pub theta: Option<usize>,
    /// Resolution of the Louvain methods; 1 is standard modularity
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    /// Number of base runs of the ensemble
    #[arg(long, default_value_t = 4)]
    pub ensemble: usize,
}

impl AlgoParams {
    pub fn run(&self, g: &Graph, seed: u64, workers: &Workers) -> CliResult<(Partition, RunReport)> {
        let plp = PlpConfig {
            theta: self.theta.unwrap_or_else(|| comdet::plp::default_theta(g.node_count())),
            seed,
            ..PlpConfig::for_graph(g)
        };
        let louvain = LouvainConfig {
            gamma: self.gamma,
            seed,
            ..LouvainConfig::default()
        };
        let out = match self.algo {
            Algo::Plp => run_plp(g, &plp, None, workers),
            Algo::Plm => run_plm(g, &louvain, workers),
            Algo::Plmr => run_plmr(g, &louvain, workers),
            Algo::Epp => {
                let mut cfg = EnsembleConfig::new(self.ensemble, plp);
                cfg.final_detector = std::sync::Arc::new(LouvainConfig {
                    refine: true,
                    ..louvain
                });
                cfg.seed = seed;
                run_epp(g, &cfg, workers)
            }
        };
        let (z, mut report) = out?;
        input::check_output(g, &z, &report.algorithm)?;
        report
            .attach_quality(g, &z)
            .invariant_context("scoring the detected partition")?;
        Ok((z, report))
    }
}

#[derive(Debug, Args)]
pub struct DetectArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub params: AlgoParams,
    /// Worker threads [default: available CPUs]
    #[arg(long)]
    pub threads: Option<usize>,
    /// Seed of the first run; run r uses seed + r
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of runs; the partition with the highest modularity is kept
    #[arg(long, default_value_t = 1)]
    pub runs: usize,
    /// Write the best partition here, one community id per line
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Write a JSON report with per-run details and averages here
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Write the contracted community graph (METIS) and a `.sizes` sidecar here
    #[arg(long)]
    pub community_graph: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
pub struct Averages {
    pub total_seconds: f64,
    pub modularity: Option<f64>,
    pub coverage: Option<f64>,
    pub community_count: f64,
}

impl Averages {
    pub fn of(reports: &[RunReport]) -> Self {
        let n = reports.len() as f64;
        let mean_opt = |f: fn(&RunReport) -> Option<f64>| -> Option<f64> {
            reports.iter().map(f).sum::<Option<f64>>().map(|s| s / n)
        };
        Self {
            total_seconds: reports.iter().map(|r| r.total_seconds).sum::<f64>() / n,
            modularity: mean_opt(|r| r.modularity),
            coverage: mean_opt(|r| r.coverage),
            community_count: reports.iter().map(|r| r.community_count as f64).sum::<f64>() / n,
        }
    }
}

/// Record written by `detect --report`.
#[derive(Debug, Serialize)]
struct DetectReport<'a> {
    algorithm: &'a str,
    input: String,
    workers: usize,
    runs: usize,
    best_run: usize,
    mean: Averages,
    reports: &'a [RunReport],
}

pub fn run(args: &DetectArgs) -> CliResult {
    if args.runs == 0 {
        return Err(Failure::usage(anyhow::anyhow!("--runs must be at least 1")));
    }
    let g = args.graph.load()?;
    let workers = input::workers(args.threads)?;
    let mut best: Option<(usize, Partition, f64)> = None;
    let mut reports = Vec::with_capacity(args.runs);
    for r in 0..args.runs {
        let (mut z, mut report) = args
            .params
            .run(&g, args.seed.wrapping_add(r as u64), &workers)?;
        report.input = Some(input::describe(&args.graph.input));
        // PLP labels are node ids; compact so every algorithm writes 0..k
        z = z.compact();
        let q = report.modularity.unwrap_or(f64::NEG_INFINITY);
        if best.as_ref().is_none_or(|(_, _, bq)| q > *bq) {
            best = Some((r, z, q));
        }
        reports.push(report);
    }
    let (best_run, z, _) = best.expect("at least one run");

    if let Some(path) = &args.output {
        write_partition(&z, path)?;
    }
    if let Some(path) = &args.community_graph {
        write_community_graph(&g, &z, path, &workers)?;
    }
    let algorithm = reports[best_run].algorithm.clone();
    let mean = Averages::of(&reports);
    println!("algorithm {algorithm}");
    println!("workers {}", workers.count());
    println!("runs {}", args.runs);
    println!("seconds_mean {:.6}", mean.total_seconds);
    print!("{}", QualityReport::compute(&g, &z)?.to_key_value());
    if let Some(path) = &args.report {
        let record = DetectReport {
            algorithm: &algorithm,
            input: input::describe(&args.graph.input),
            workers: workers.count(),
            runs: args.runs,
            best_run,
            mean,
            reports: &reports,
        };
        let json = serde_json::to_string_pretty(&record).invariant_context("serializing the report")?;
        std::fs::write(path, json + "\n")
            .input_context(format!("cannot write {}", path.display()))?;
    }
    Ok(())
}

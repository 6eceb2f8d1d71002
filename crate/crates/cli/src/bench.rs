use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use comdet::gen::generate_planted;
use comdet::Graph;

use crate::detect::{AlgoParams, Averages};
use crate::failure::{CliResult, Context, Failure};
use crate::generate::PlantedArgs;
use crate::input::{self, Format, GraphArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Fixed input, growing thread count
    Strong,
    /// Input grows with the thread count: nodes and blocks scale with
    /// threads / first thread count, degrees stay constant
    Weak,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    pub mode: Mode,
    #[command(flatten)]
    pub params: AlgoParams,
    /// Input graph for strong scaling; without it a planted graph is generated
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Metis)]
    pub format: Format,
    #[arg(long)]
    pub merge_duplicates: bool,
    #[command(flatten)]
    pub planted: PlantedArgs,
    /// Comma-separated thread counts, one table row each
    #[arg(long, value_delimiter = ',', default_value = "1,2,4")]
    pub threads_list: Vec<usize>,
    /// Runs per row; times and qualities are averaged
    #[arg(long, default_value_t = 3)]
    pub runs: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the table as tab-separated data here
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub threads: usize,
    pub nodes: usize,
    pub edges: usize,
    pub seconds: f64,
    pub speedup: f64,
    pub modularity: Option<f64>,
}

fn usage(msg: String) -> Failure {
    Failure::usage(anyhow::anyhow!(msg))
}

/// Graph for a row with `threads` workers.
fn instance(args: &BenchArgs, threads: usize, fixed: Option<&Graph>) -> CliResult<Graph> {
    if let Some(g) = fixed {
        return Ok(g.clone());
    }
    let mut planted = args.planted.clone();
    if args.mode == Mode::Weak {
        let factor = threads as f64 / args.threads_list[0] as f64;
        planted.nodes = ((planted.nodes as f64 * factor).round() as usize).max(1);
        planted.blocks = ((planted.blocks as f64 * factor).round() as usize).max(1);
        planted.p_out /= factor;
    }
    let workers = input::workers(Some(threads))?;
    Ok(generate_planted(&planted.spec(args.seed), &workers)?.0)
}

pub fn measure(args: &BenchArgs) -> CliResult<Vec<Row>> {
    if args.threads_list.is_empty() || args.threads_list.contains(&0) {
        return Err(usage("--threads-list needs positive thread counts".into()));
    }
    if args.runs == 0 {
        return Err(usage("--runs must be at least 1".into()));
    }
    let fixed = match (&args.input, args.mode) {
        (Some(_), Mode::Weak) => {
            return Err(usage("weak scaling generates its inputs; drop --input".into()));
        }
        (Some(path), Mode::Strong) => Some(
            GraphArgs {
                input: path.clone(),
                format: args.format,
                merge_duplicates: args.merge_duplicates,
            }
            .load()?,
        ),
        (None, _) => None,
    };
    let mut rows: Vec<Row> = Vec::new();
    for &threads in &args.threads_list {
        let g = instance(args, threads, fixed.as_ref())?;
        let workers = input::workers(Some(threads))?;
        let mut reports = Vec::with_capacity(args.runs);
        for r in 0..args.runs {
            let (_, report) = args.params.run(&g, args.seed.wrapping_add(r as u64), &workers)?;
            reports.push(report);
        }
        let mean = Averages::of(&reports);
        let baseline = rows.first().map_or(mean.total_seconds, |r| r.seconds);
        rows.push(Row {
            threads,
            nodes: g.node_count(),
            edges: g.edge_count(),
            seconds: mean.total_seconds,
            speedup: if mean.total_seconds > 0.0 {
                baseline / mean.total_seconds
            } else {
                1.0
            },
            modularity: mean.modularity,
        });
    }
    Ok(rows)
}

pub fn format_table(rows: &[Row], separator: &str) -> String {
    let mut out = String::new();
    let header = ["threads", "nodes", "edges", "time", "speedup", "modularity"];
    writeln!(out, "{}", header.join(separator)).unwrap();
    for r in rows {
        let q = r.modularity.map_or("undefined".to_string(), |q| format!("{q:.6}"));
        let cells = [
            r.threads.to_string(),
            r.nodes.to_string(),
            r.edges.to_string(),
            format!("{:.6}", r.seconds),
            format!("{:.3}", r.speedup),
            q,
        ];
        writeln!(out, "{}", cells.join(separator)).unwrap();
    }
    out
}

pub fn run(args: &BenchArgs) -> CliResult {
    let rows = measure(args)?;
    print!("{}", format_table(&rows, "  "));
    if let Some(path) = &args.output {
        std::fs::write(path, format_table(&rows, "\t"))
            .input_context(format!("cannot write {}", path.display()))?;
    }
    Ok(())
}

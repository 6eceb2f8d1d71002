use std::path::PathBuf;

use clap::Args;
use comdet::gen::{generate_planted, PlantedPartitionSpec};
use comdet::io::{write_metis, write_partition};

use crate::failure::{CliResult, Context};
use crate::input;

/// Planted partition parameters shared by `generate` and `bench`.
#[derive(Debug, Clone, Args)]
pub struct PlantedArgs {
    /// Number of nodes
    #[arg(long, default_value_t = 1000)]
    pub nodes: usize,
    /// Number of blocks (planted communities)
    #[arg(long, default_value_t = 10)]
    pub blocks: usize,
    /// Probability of an edge inside a block
    #[arg(long, default_value_t = 0.1)]
    pub p_in: f64,
    /// Probability of an edge between blocks
    #[arg(long, default_value_t = 0.002)]
    pub p_out: f64,
}

impl PlantedArgs {
    pub fn spec(&self, seed: u64) -> PlantedPartitionSpec {
        PlantedPartitionSpec {
            nodes: self.nodes,
            blocks: self.blocks,
            p_in: self.p_in,
            p_out: self.p_out,
            seed,
        }
    }
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub planted: PlantedArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads [default: available CPUs]; the output does not depend on it
    #[arg(long)]
    pub threads: Option<usize>,
    /// Graph output path (METIS)
    #[arg(long)]
    pub output: PathBuf,
    /// Ground-truth partition path [default: <output>.truth]
    #[arg(long)]
    pub truth: Option<PathBuf>,
}

pub fn run(args: &GenerateArgs) -> CliResult {
    let workers = input::workers(args.threads)?;
    let (g, truth) = generate_planted(&args.planted.spec(args.seed), &workers)?;
    g.check_invariants().invariant_context("generated graph")?;
    write_metis(&g, &args.output, false)?;
    let truth_path = args.truth.clone().unwrap_or_else(|| {
        let mut p = args.output.clone().into_os_string();
        p.push(".truth");
        PathBuf::from(p)
    });
    write_partition(&truth, &truth_path)?;
    println!("nodes {}", g.node_count());
    println!("edges {}", g.edge_count());
    println!("graph {}", args.output.display());
    println!("truth {}", truth_path.display());
    Ok(())
}

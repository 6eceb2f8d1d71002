//! Graph loading and worker setup shared by the subcommands.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use comdet::io::{read_edge_list, read_metis};
use comdet::{Graph, Partition, Workers};

use crate::failure::{CliResult, Context, Failure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// METIS adjacency format (1-based neighbor lists)
    Metis,
    /// Whitespace-separated `u v [w]` lines
    Edges,
}

#[derive(Debug, Clone, Args)]
pub struct GraphArgs {
    /// Input graph file
    #[arg(long)]
    pub input: PathBuf,
    /// Input format
    #[arg(long, value_enum, default_value_t = Format::Metis)]
    pub format: Format,
    /// Sum the weights of repeated edges in an edge list instead of
    /// rejecting the file
    #[arg(long)]
    pub merge_duplicates: bool,
}

impl GraphArgs {
    pub fn load(&self) -> CliResult<Graph> {
        let path = &self.input;
        let g = match self.format {
            Format::Metis => read_metis(path).map_err(Failure::from)?,
            Format::Edges => read_edge_list(path, self.merge_duplicates)?.graph,
        };
        g.check_invariants()
            .invariant_context(format!("graph loaded from {}", path.display()))?;
        Ok(g)
    }
}

pub fn workers(threads: Option<usize>) -> CliResult<Workers> {
    let count = threads.unwrap_or_else(|| {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    });
    Workers::new(count).input_context("--threads")
}

/// Checks a detector's output before it is written or scored.
pub fn check_output(g: &Graph, z: &Partition, algorithm: &str) -> CliResult {
    z.check_covers(g)
        .invariant_context(format!("{algorithm} returned an invalid partition"))
}

pub fn describe(path: &Path) -> String {
    path.display().to_string()
}

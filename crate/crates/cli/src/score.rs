use std::path::PathBuf;

use clap::Args;
use comdet::io::read_partition;
use comdet::quality::{graph_rand_index, QualityReport};

use crate::failure::CliResult;
use crate::input::GraphArgs;

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Partition to score, one community id per line
    #[arg(long)]
    pub partition: PathBuf,
    /// Reference partition; adds the graph-structural Rand index
    #[arg(long)]
    pub reference: Option<PathBuf>,
    /// Print a JSON record instead of `key value` lines
    #[arg(long)]
    pub json: bool,
}

pub fn run(args: &ScoreArgs) -> CliResult {
    let g = args.graph.load()?;
    let z = read_partition(&args.partition)?;
    z.check_covers(&g)?;
    let quality = QualityReport::compute(&g, &z)?;
    let rand = match &args.reference {
        Some(path) => {
            let reference = read_partition(path)?;
            reference.check_covers(&g)?;
            Some(graph_rand_index(&g, &z, &reference)?)
        }
        None => None,
    };
    if args.json {
        let mut record = serde_json::to_value(&quality).expect("quality report is serializable");
        if let Some(r) = rand {
            record["rand_index"] = r.into();
        }
        println!("{record}");
    } else {
        print!("{}", quality.to_key_value());
        if let Some(r) = rand {
            println!("rand {r}");
        }
    }
    Ok(())
}

//! Common interface of the detection algorithms, used by ensembles and
//! drivers that select an algorithm at run time.

use crate::error::Result;
use crate::graph::Graph;
use crate::louvain::{run_louvain, LouvainConfig};
use crate::parallel::Workers;
use crate::partition::Partition;
use crate::plp::{run_plp, PlpConfig};
use crate::report::RunReport;

pub trait CommunityDetector: Send + Sync {
    fn name(&self) -> String;

    /// Runs on `g`; `seed` overrides the configured seed.
    fn detect(&self, g: &Graph, seed: u64, workers: &Workers) -> Result<(Partition, RunReport)>;
}

impl CommunityDetector for PlpConfig {
    fn name(&self) -> String {
        "plp".into()
    }

    fn detect(&self, g: &Graph, seed: u64, workers: &Workers) -> Result<(Partition, RunReport)> {
        let cfg = PlpConfig {
            seed,
            ..self.clone()
        };
        run_plp(g, &cfg, None, workers)
    }
}

impl CommunityDetector for LouvainConfig {
    fn name(&self) -> String {
        LouvainConfig::name(self).into()
    }

    fn detect(&self, g: &Graph, seed: u64, workers: &Workers) -> Result<(Partition, RunReport)> {
        run_louvain(g, &LouvainConfig { seed, ..self.clone() }, workers)
    }
}

/// Returns every node in its own community.
#[derive(Debug, Clone, Copy, Default)]
pub struct SingletonDetector;

impl CommunityDetector for SingletonDetector {
    fn name(&self) -> String {
        "singleton".into()
    }

    fn detect(&self, g: &Graph, seed: u64, workers: &Workers) -> Result<(Partition, RunReport)> {
        let mut report = RunReport::new("singleton", workers.count(), seed);
        report.community_count = g.node_count();
        Ok((Partition::singleton_for(g), report))
    }
}

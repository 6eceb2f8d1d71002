//! Parallel Louvain method, with optional refinement after each prolongation.
//!
//! Each level runs the move phase from singletons. If any node moved, the
//! graph is contracted by community, the coarse graph is solved recursively
//! and the coarse solution is prolonged back. With refinement enabled, the
//! prolonged solution gets one more move phase on the fine graph.

mod coarsen;
mod moves;

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::parallel::Workers;
use crate::partition::Partition;
use crate::report::{LevelTrace, Phase, RunReport};

pub use coarsen::{coarsen, prolong, CoarseningResult};
pub use moves::{delta_mod, move_phase, CommunityVolumes, MoveEvent, MoveObserver};

pub const DEFAULT_MAX_MOVE_ITERATIONS: usize = 32;
pub const DEFAULT_MAX_LEVELS: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LouvainConfig {
    /// Resolution: 0 merges each connected component, 1 is standard
    /// modularity, `2m` keeps singletons on unweighted graphs.
    pub gamma: f64,
    /// Pass cap per move phase.
    pub max_move_iterations: usize,
    pub max_levels: usize,
    pub seed: u64,
    pub refine: bool,
}

impl Default for LouvainConfig {
    fn default() -> Self {
        Self {
            gamma: 1.0,
            max_move_iterations: DEFAULT_MAX_MOVE_ITERATIONS,
            max_levels: DEFAULT_MAX_LEVELS,
            seed: 0,
            refine: false,
        }
    }
}

impl LouvainConfig {
    pub fn refined() -> Self {
        Self {
            refine: true,
            ..Self::default()
        }
    }

    pub fn name(&self) -> &'static str {
        if self.refine {
            "plmr"
        } else {
            "plm"
        }
    }

    fn validate(&self) -> Result<()> {
        if !self.gamma.is_finite() || self.gamma < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "gamma must be a finite nonnegative number, got {}",
                self.gamma
            )));
        }
        Ok(())
    }
}

/// Parallel Louvain method without refinement.
pub fn run_plm(g: &Graph, cfg: &LouvainConfig, workers: &Workers) -> Result<(Partition, RunReport)> {
    run_louvain(
        g,
        &LouvainConfig {
            refine: false,
            ..cfg.clone()
        },
        workers,
    )
}

/// Parallel Louvain method with a refining move phase after every
/// prolongation.
pub fn run_plmr(
    g: &Graph,
    cfg: &LouvainConfig,
    workers: &Workers,
) -> Result<(Partition, RunReport)> {
    run_louvain(
        g,
        &LouvainConfig {
            refine: true,
            ..cfg.clone()
        },
        workers,
    )
}

/// Runs the method selected by `cfg.refine`.
pub fn run_louvain(
    g: &Graph,
    cfg: &LouvainConfig,
    workers: &Workers,
) -> Result<(Partition, RunReport)> {
    run_with(g, cfg, workers, None)
}

/// Single-worker run that reports every applied move to `observer` before it
/// is performed.
pub fn run_louvain_observed(
    g: &Graph,
    cfg: &LouvainConfig,
    observer: MoveObserver<'_>,
) -> Result<(Partition, RunReport)> {
    run_with(g, cfg, &Workers::sequential(), Some(observer))
}

fn run_with(
    g: &Graph,
    cfg: &LouvainConfig,
    workers: &Workers,
    observer: Option<MoveObserver<'_>>,
) -> Result<(Partition, RunReport)> {
    cfg.validate()?;
    if g.total_edge_weight() == 0.0 {
        return Err(Error::ZeroTotalWeight);
    }
    let start = Instant::now();
    let mut report = RunReport::new(cfg.name(), workers.count(), cfg.seed);
    let z = level(g, cfg, workers, observer, 0, &mut report)?.compact();
    report.total_seconds = start.elapsed().as_secs_f64();
    report.community_count = z.community_count();
    Ok((z, report))
}

fn level(
    g: &Graph,
    cfg: &LouvainConfig,
    workers: &Workers,
    observer: Option<MoveObserver<'_>>,
    depth: usize,
    report: &mut RunReport,
) -> Result<Partition> {
    let singletons = Partition::singleton_for(g);
    let t = Instant::now();
    let (z, stats) = moves::move_phase_observed(g, &singletons, cfg, workers, observer)?;
    report.record(Phase::Move, depth, t.elapsed());
    report.levels.push(LevelTrace {
        level: depth,
        nodes: g.node_count(),
        edges: g.edge_count(),
        move_passes: stats.passes,
        moved: stats.moved,
    });
    if stats.moved == 0 || depth + 1 >= cfg.max_levels {
        return Ok(z);
    }

    let z = z.compact();
    let t = Instant::now();
    let CoarseningResult { coarse, pi } = coarsen(g, &z, workers)?;
    report.record(Phase::Coarsen, depth, t.elapsed());

    let z_coarse = level(&coarse, cfg, workers, observer, depth + 1, report)?;

    let t = Instant::now();
    let z = prolong(&z_coarse, &pi)?;
    report.record(Phase::Prolong, depth, t.elapsed());

    if !cfg.refine {
        return Ok(z);
    }
    let t = Instant::now();
    let (z, refine_stats) = moves::move_phase_observed(g, &z, cfg, workers, observer)?;
    report.record(Phase::Refine, depth, t.elapsed());
    if let Some(trace) = report.levels.iter_mut().find(|l| l.level == depth) {
        trace.move_passes += refine_stats.passes;
        trace.moved += refine_stats.moved;
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::EdgeList;
    use crate::quality::modularity;

    #[test]
    fn two_triangles_optimum() {
        let g = two_triangles();
        for cfg in [LouvainConfig::default(), LouvainConfig::refined()] {
            let (z, _) = run_louvain(&g, &cfg, &Workers::sequential()).unwrap();
            assert!((modularity(&g, &z, 1.0).unwrap() - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn barbell_optimum() {
        let g = barbell();
        let (z, report) = run_plm(&g, &LouvainConfig::default(), &Workers::sequential()).unwrap();
        assert!((modularity(&g, &z, 1.0).unwrap() - 5.0 / 14.0).abs() < 1e-12);
        assert_eq!(z.assignment(), &[0, 0, 0, 1, 1, 1]);
        assert_eq!(report.levels.len(), 2);
        assert_eq!(report.levels[1].moved, 0);
    }

    #[test]
    fn single_edge() {
        let g = Graph::from_edges(2, &[(0, 1)].into_iter().collect()).unwrap();
        let (z, _) = run_plm(&g, &LouvainConfig::default(), &Workers::sequential()).unwrap();
        assert_eq!(z.community_count(), 1);
        assert!(modularity(&g, &z, 1.0).unwrap().abs() < 1e-15);
        // with gamma = 2m the pair stays apart
        let cfg = LouvainConfig {
            gamma: 2.0,
            ..LouvainConfig::default()
        };
        let (z, _) = run_plm(&g, &cfg, &Workers::sequential()).unwrap();
        assert_eq!(z.community_count(), 2);
    }

    #[test]
    fn gamma_zero_merges_components() {
        let g = barbell();
        let cfg = LouvainConfig {
            gamma: 0.0,
            ..LouvainConfig::default()
        };
        let (z, _) = run_plm(&g, &cfg, &Workers::sequential()).unwrap();
        assert_eq!(z.community_count(), 1);
    }

    #[test]
    fn rejects_empty_and_bad_gamma() {
        let g = Graph::empty(3);
        assert!(matches!(
            run_plm(&g, &LouvainConfig::default(), &Workers::sequential()),
            Err(Error::ZeroTotalWeight)
        ));
        let cfg = LouvainConfig {
            gamma: -1.0,
            ..LouvainConfig::default()
        };
        assert!(run_plm(&barbell(), &cfg, &Workers::sequential()).is_err());
    }

    #[test]
    fn refinement_without_coarsening_equals_plm() {
        // no move on level 0, so there is nothing to prolong or refine
        let g = Graph::from_edges(2, &EdgeList::from_iter([(0usize, 1usize)])).unwrap();
        let cfg = LouvainConfig {
            gamma: 2.0,
            ..LouvainConfig::default()
        };
        let (a, ra) = run_plm(&g, &cfg, &Workers::sequential()).unwrap();
        let (b, rb) = run_plmr(&g, &cfg, &Workers::sequential()).unwrap();
        assert_eq!(a, b);
        assert_eq!(ra.levels, rb.levels);
        assert_eq!(rb.phase_seconds(Phase::Refine), 0.0);
    }

    #[test]
    fn level_cap() {
        let g = barbell();
        let cfg = LouvainConfig {
            max_levels: 1,
            ..LouvainConfig::default()
        };
        let (z, report) = run_plm(&g, &cfg, &Workers::sequential()).unwrap();
        assert_eq!(report.levels.len(), 1);
        assert_eq!(z.community_count(), 2);
    }

    #[test]
    fn multi_worker_runs_are_valid() {
        let g = barbell();
        let w = Workers::new(3).unwrap();
        for cfg in [LouvainConfig::default(), LouvainConfig::refined()] {
            let (z, report) = run_louvain(&g, &cfg, &w).unwrap();
            assert_eq!(z.len(), 6);
            assert!(z.is_compact());
            assert_eq!(report.workers, 3);
        }
    }
}

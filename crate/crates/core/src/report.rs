use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::Graph;
use crate::partition::Partition;
use crate::quality;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Propagate,
    Move,
    Coarsen,
    Prolong,
    Refine,
    Base,
    Combine,
    Final,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseTime {
    pub phase: Phase,
    /// Hierarchy level; 0 is the input graph.
    pub level: usize,
    pub seconds: f64,
}

/// One label propagation iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationTrace {
    pub iteration: usize,
    pub active: usize,
    pub updated: usize,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelTrace {
    pub level: usize,
    pub nodes: usize,
    pub edges: usize,
    pub move_passes: usize,
    pub moved: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub algorithm: String,
    pub workers: usize,
    pub seed: u64,
    pub input: Option<String>,
    pub total_seconds: f64,
    pub phases: Vec<PhaseTime>,
    pub iterations: Vec<IterationTrace>,
    pub levels: Vec<LevelTrace>,
    pub modularity: Option<f64>,
    pub coverage: Option<f64>,
    pub community_count: usize,
}

impl RunReport {
    pub(crate) fn new(algorithm: impl Into<String>, workers: usize, seed: u64) -> Self {
        Self {
            algorithm: algorithm.into(),
            workers,
            seed,
            ..Self::default()
        }
    }

    pub(crate) fn record(&mut self, phase: Phase, level: usize, elapsed: Duration) {
        self.phases.push(PhaseTime {
            phase,
            level,
            seconds: elapsed.as_secs_f64(),
        });
    }

    pub(crate) fn timed<R>(&mut self, phase: Phase, level: usize, f: impl FnOnce() -> R) -> R {
        let start = Instant::now();
        let out = f();
        self.record(phase, level, start.elapsed());
        out
    }

    /// Total time spent in `phase` across all levels.
    pub fn phase_seconds(&self, phase: Phase) -> f64 {
        self.phases
            .iter()
            .filter(|p| p.phase == phase)
            .map(|p| p.seconds)
            .sum()
    }

    /// Fills in modularity, coverage and community count for `z`.
    pub fn attach_quality(&mut self, g: &Graph, z: &Partition) -> Result<()> {
        let q = quality::QualityReport::compute(g, z)?;
        self.modularity = q.modularity;
        self.coverage = Some(q.coverage);
        self.community_count = q.community_count;
        Ok(())
    }

    /// Adds the timings of a nested run at an offset level.
    pub(crate) fn absorb(&mut self, other: &RunReport, level_offset: usize) {
        self.phases.extend(other.phases.iter().map(|p| PhaseTime {
            level: p.level + level_offset,
            ..p.clone()
        }));
        self.levels.extend(other.levels.iter().map(|l| LevelTrace {
            level: l.level + level_offset,
            ..l.clone()
        }));
        self.iterations.extend(other.iterations.iter().cloned());
    }
}

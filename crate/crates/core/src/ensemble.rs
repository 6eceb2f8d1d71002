//! Ensemble preprocessing.
//!
//! `b` base detectors run concurrently. Two nodes share a core community iff
//! every base solution puts them together. The graph is contracted by core
//! communities, the final detector solves the contracted graph, and its
//! solution is prolonged to the input.

use std::collections::HashMap;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;

use crate::detector::CommunityDetector;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::louvain::{coarsen, prolong, LouvainConfig};
use crate::parallel::Workers;
use crate::partition::{CommunityId, Partition};
use crate::plp::PlpConfig;
use crate::report::{Phase, RunReport};

const DJB2_INIT: u64 = 5381;

/// Bernstein's djb2: `h = h * 33 + byte`, starting from 5381.
pub fn djb2(bytes: &[u8]) -> u64 {
    bytes
        .iter()
        .fold(DJB2_INIT, |h, &b| h.wrapping_mul(33).wrapping_add(u64::from(b)))
}

/// djb2 over the ids of one node, each encoded as 8 little-endian bytes.
pub fn djb2_ids(ids: impl IntoIterator<Item = CommunityId>) -> u64 {
    ids.into_iter().fold(DJB2_INIT, |h, id| {
        (id as u64)
            .to_le_bytes()
            .iter()
            .fold(h, |h, &b| h.wrapping_mul(33).wrapping_add(u64::from(b)))
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Combiner {
    #[default]
    Hashed,
    Exact,
}

#[derive(Clone)]
pub struct EnsembleConfig {
    pub size: usize,
    pub base: Arc<dyn CommunityDetector>,
    pub final_detector: Arc<dyn CommunityDetector>,
    pub combiner: Combiner,
    pub seed: u64,
}

impl std::fmt::Debug for EnsembleConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EnsembleConfig")
            .field("size", &self.size)
            .field("base", &self.base.name())
            .field("final_detector", &self.final_detector.name())
            .field("combiner", &self.combiner)
            .field("seed", &self.seed)
            .finish()
    }
}

impl EnsembleConfig {
    /// `b` label propagation runs combined, refined Louvain on the core graph.
    ///
    /// Base runs visit nodes in a seeded random order: with a fixed order and
    /// deterministic ties, single-worker members would all be identical and
    /// the ensemble would degenerate to one run.
    pub fn new(size: usize, plp: PlpConfig) -> Self {
        Self {
            size,
            base: Arc::new(PlpConfig {
                randomize_order: true,
                ..plp
            }),
            final_detector: Arc::new(LouvainConfig::refined()),
            combiner: Combiner::Hashed,
            seed: 0,
        }
    }

    pub fn for_graph(g: &Graph) -> Self {
        Self::new(4, PlpConfig::for_graph(g))
    }

    pub fn name(&self) -> String {
        format!(
            "epp({},{},{})",
            self.size,
            self.base.name(),
            self.final_detector.name()
        )
    }
}

fn check_lengths(solutions: &[Partition]) -> Result<usize> {
    let n = solutions.first().map_or(0, Partition::len);
    match solutions.iter().find(|z| z.len() != n) {
        Some(z) => Err(Error::LengthMismatch {
            expected: n,
            found: z.len(),
        }),
        None => Ok(n),
    }
}

/// Core communities by grouping identical id tuples.
pub fn combine_exact(solutions: &[Partition]) -> Result<Partition> {
    let n = check_lengths(solutions)?;
    let tuple = |u: usize| solutions.iter().map(move |z| z.community_of(u));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| tuple(a).cmp(tuple(b)));
    let mut assignment = vec![0; n];
    let mut group = 0;
    for (i, &u) in order.iter().enumerate() {
        if i > 0 && !tuple(order[i - 1]).eq(tuple(u)) {
            group += 1;
        }
        assignment[u] = group;
    }
    let upper = if n == 0 { 0 } else { group + 1 };
    Ok(Partition::from_raw(assignment, upper).compact())
}

/// Core communities by hashing each node's id tuple with djb2, then
/// compacting the hash values. Distinct tuples may collide.
pub fn combine_hashed(solutions: &[Partition]) -> Result<Partition> {
    let n = check_lengths(solutions)?;
    let hashes: Vec<u64> = (0..n)
        .into_par_iter()
        .map(|u| djb2_ids(solutions.iter().map(|z| z.community_of(u))))
        .collect();
    let mut ids: HashMap<u64, CommunityId> = HashMap::new();
    let assignment = hashes
        .iter()
        .map(|h| {
            let next = ids.len();
            *ids.entry(*h).or_insert(next)
        })
        .collect();
    Ok(Partition::from_raw(assignment, ids.len()))
}

pub fn combine(solutions: &[Partition], combiner: Combiner) -> Result<Partition> {
    match combiner {
        Combiner::Hashed => combine_hashed(solutions),
        Combiner::Exact => combine_exact(solutions),
    }
}

/// Runs the `b` base detectors with seeds `seed + i`, at most as many at once
/// as the worker budget allows.
pub fn run_base(
    g: &Graph,
    cfg: &EnsembleConfig,
    workers: &Workers,
) -> Result<Vec<(Partition, RunReport)>> {
    let (concurrent, per_base) = workers.split(cfg.size);
    let seeds: Vec<u64> = (0..cfg.size as u64).map(|i| cfg.seed.wrapping_add(i)).collect();
    let mut out = Vec::with_capacity(cfg.size);
    if concurrent == 1 {
        for &seed in &seeds {
            out.push(cfg.base.detect(g, seed, workers)?);
        }
        return Ok(out);
    }
    let budgets: Vec<Workers> = (0..concurrent)
        .map(|_| Workers::new(per_base))
        .collect::<Result<_>>()?;
    for wave in seeds.chunks(concurrent) {
        let results: Vec<Result<(Partition, RunReport)>> = std::thread::scope(|s| {
            let handles: Vec<_> = wave
                .iter()
                .zip(&budgets)
                .map(|(&seed, w)| s.spawn(move || cfg.base.detect(g, seed, w)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("base detector panicked"))
                .collect()
        });
        for r in results {
            out.push(r?);
        }
    }
    Ok(out)
}

pub fn run_epp(g: &Graph, cfg: &EnsembleConfig, workers: &Workers) -> Result<(Partition, RunReport)> {
    if cfg.size == 0 {
        return Err(Error::InvalidParameter("ensemble size must be at least 1".into()));
    }
    if g.total_edge_weight() == 0.0 {
        return Err(Error::ZeroTotalWeight);
    }
    let start = Instant::now();
    let mut report = RunReport::new(cfg.name(), workers.count(), cfg.seed);

    let t = Instant::now();
    let base = run_base(g, cfg, workers)?;
    report.record(Phase::Base, 0, t.elapsed());
    let solutions: Vec<Partition> = base.into_iter().map(|(z, _)| z).collect();

    let core = report.timed(Phase::Combine, 0, || {
        workers.install(|| combine(&solutions, cfg.combiner))
    })?;
    let contracted = report.timed(Phase::Coarsen, 0, || coarsen(g, &core, workers))?;

    let t = Instant::now();
    let (z_coarse, final_report) = cfg.final_detector.detect(&contracted.coarse, cfg.seed, workers)?;
    report.record(Phase::Final, 1, t.elapsed());
    report.absorb(&final_report, 1);

    let z = report
        .timed(Phase::Prolong, 0, || prolong(&z_coarse, &contracted.pi))?
        .compact();
    report.total_seconds = start.elapsed().as_secs_f64();
    report.community_count = z.community_count();
    Ok((z, report))
}

//! Parallel label propagation.
//!
//! Every node with at least one neighbor repeatedly adopts the label of
//! maximal incident weight. Nodes whose neighborhood did not change since
//! their last evaluation are skipped. Iteration stops once an iteration
//! updates at most `theta` nodes.
//!
//! Workers share one label array and may observe labels written in the same
//! iteration (asynchronous updating), so runs with several workers are not
//! reproducible. With one worker the node order is ascending (or a seeded
//! shuffle) and results are deterministic.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::parallel::Workers;
use crate::partition::{CommunityId, Partition};
use crate::report::{IterationTrace, Phase, RunReport};

pub const DEFAULT_MAX_ITERATIONS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlpConfig {
    pub theta: usize,
    pub max_iterations: usize,
    pub randomize_order: bool,
    pub seed: u64,
}

impl PlpConfig {
    /// Defaults for a graph with `node_count` nodes.
    pub fn for_nodes(node_count: usize) -> Self {
        Self {
            theta: default_theta(node_count),
            max_iterations: DEFAULT_MAX_ITERATIONS,
            randomize_order: false,
            seed: 0,
        }
    }

    pub fn for_graph(g: &Graph) -> Self {
        Self::for_nodes(g.node_count())
    }
}

/// `floor(n * 1e-5)`, at least 1.
pub fn default_theta(node_count: usize) -> usize {
    (node_count / 100_000).max(1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieBreak {
    /// Among maximal labels pick the smallest id.
    SmallestLabel,
    /// Among maximal labels pick the one met first in the neighbor list.
    FirstSeen,
}

/// Per-worker dense label-weight accumulator, cleared through the list of
/// touched labels.
pub(crate) struct LabelScratch {
    weight: Vec<f64>,
    touched: Vec<CommunityId>,
}

impl LabelScratch {
    pub(crate) fn new(labels: usize) -> Self {
        Self {
            weight: vec![0.0; labels],
            touched: Vec::new(),
        }
    }

    fn add(&mut self, label: CommunityId, w: f64) {
        if self.weight[label] == 0.0 {
            self.touched.push(label);
        }
        self.weight[label] += w;
    }

    fn clear(&mut self) {
        for &l in &self.touched {
            self.weight[l] = 0.0;
        }
        self.touched.clear();
    }
}

/// Label of maximal incident weight around `u`. The current label wins ties;
/// remaining ties follow `tie`. Returns `None` for nodes without neighbors.
fn dominant_with(
    g: &Graph,
    u: NodeId,
    label_of: impl Fn(NodeId) -> CommunityId,
    tie: TieBreak,
    scratch: &mut LabelScratch,
) -> Option<CommunityId> {
    if g.degree(u) == 0 {
        return None;
    }
    for (v, w) in g.neighbors(u) {
        scratch.add(label_of(v), w);
    }
    let current = label_of(u);
    let mut best = scratch.touched[0];
    let mut best_w = scratch.weight[best];
    for &l in &scratch.touched[1..] {
        let w = scratch.weight[l];
        let better = w > best_w
            || (w == best_w
                && best != current
                && (l == current || (tie == TieBreak::SmallestLabel && l < best)));
        if better {
            best = l;
            best_w = w;
        }
    }
    scratch.clear();
    Some(best)
}

/// Label of maximal incident weight around `u` under the deterministic rule:
/// the current label wins ties, otherwise the smallest label id.
pub fn dominant_label(g: &Graph, z: &Partition, u: NodeId) -> Result<CommunityId> {
    z.check_covers(g)?;
    if u >= g.node_count() {
        return Err(Error::NodeOutOfRange {
            node: u,
            node_count: g.node_count(),
        });
    }
    let mut scratch = LabelScratch::new(z.upper_bound());
    dominant_with(
        g,
        u,
        |v| z.community_of(v),
        TieBreak::SmallestLabel,
        &mut scratch,
    )
    .ok_or(Error::IsolatedNode(u))
}

/// True if no node with neighbors would change its label under
/// [`dominant_label`].
pub fn is_stable(g: &Graph, z: &Partition) -> bool {
    if z.len() != g.node_count() {
        return false;
    }
    let mut scratch = LabelScratch::new(z.upper_bound());
    (0..g.node_count()).all(|u| {
        dominant_with(
            g,
            u,
            |v| z.community_of(v),
            TieBreak::SmallestLabel,
            &mut scratch,
        )
        .is_none_or(|l| l == z.community_of(u))
    })
}

/// Runs label propagation from `initial` (singletons when absent).
pub fn run_plp(
    g: &Graph,
    cfg: &PlpConfig,
    initial: Option<&Partition>,
    workers: &Workers,
) -> Result<(Partition, RunReport)> {
    let start = Instant::now();
    let n = g.node_count();
    let initial = match initial {
        Some(z) => {
            z.check_covers(g)?;
            z.clone()
        }
        None => Partition::singleton(n),
    };
    let upper_bound = initial.upper_bound();
    let labels: Vec<AtomicUsize> = initial
        .assignment()
        .iter()
        .map(|&l| AtomicUsize::new(l))
        .collect();
    let active: Vec<AtomicBool> = (0..n).map(|_| AtomicBool::new(true)).collect();
    let tie = if workers.is_sequential() {
        TieBreak::SmallestLabel
    } else {
        TieBreak::FirstSeen
    };
    let mut order: Vec<NodeId> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut report = RunReport::new("plp", workers.count(), cfg.seed);
    let mut updated = n;
    let mut iteration = 0;
    while updated > cfg.theta && iteration < cfg.max_iterations {
        let iter_start = Instant::now();
        if cfg.randomize_order {
            order.shuffle(&mut rng);
        }
        let updated_count = AtomicUsize::new(0);
        let active_count = AtomicUsize::new(0);
        let label_of = |v: NodeId| labels[v].load(Ordering::Relaxed);
        workers.for_each_guided_with(
            n,
            || LabelScratch::new(upper_bound),
            |scratch, i| {
                let v = order[i];
                if !active[v].load(Ordering::Relaxed) {
                    return;
                }
                active_count.fetch_add(1, Ordering::Relaxed);
                let Some(best) = dominant_with(g, v, label_of, tie, scratch) else {
                    return;
                };
                if best != label_of(v) {
                    labels[v].store(best, Ordering::Relaxed);
                    updated_count.fetch_add(1, Ordering::Relaxed);
                    for &x in g.neighbor_ids(v) {
                        active[x].store(true, Ordering::Relaxed);
                    }
                } else {
                    active[v].store(false, Ordering::Relaxed);
                }
            },
        );
        updated = updated_count.into_inner();
        iteration += 1;
        report.iterations.push(IterationTrace {
            iteration,
            active: active_count.into_inner(),
            updated,
            seconds: iter_start.elapsed().as_secs_f64(),
        });
        report.record(Phase::Propagate, 0, iter_start.elapsed());
    }

    let labels = labels.into_iter().map(AtomicUsize::into_inner).collect();
    let z = Partition::from_raw(labels, upper_bound);
    report.total_seconds = start.elapsed().as_secs_f64();
    report.community_count = z.community_count();
    Ok((z, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::{Edge, EdgeList};
    use crate::quality::{coverage, modularity};

    #[test]
    fn theta_default() {
        assert_eq!(default_theta(10), 1);
        assert_eq!(default_theta(100_000), 1);
        assert_eq!(default_theta(250_000), 2);
        assert_eq!(default_theta(0), 1);
    }

    #[test]
    fn dominant_label_tie_smallest() {
        let g = barbell();
        let z = Partition::singleton(6);
        assert_eq!(dominant_label(&g, &z, 0).unwrap(), 1);
    }

    #[test]
    fn dominant_label_strict_maximum() {
        // node 0 sees label 7 with weight 3 and label 4 with weight 2
        let g = Graph::from_edges(
            4,
            &EdgeList(vec![
                Edge::new(0, 1, 1.0),
                Edge::new(0, 2, 2.0),
                Edge::new(0, 3, 2.0),
            ]),
        )
        .unwrap();
        let z = Partition::from_vec(vec![0, 7, 7, 4]);
        assert_eq!(dominant_label(&g, &z, 0).unwrap(), 7);
        let z = Partition::from_vec(vec![0, 4, 7, 7]);
        assert_eq!(dominant_label(&g, &z, 0).unwrap(), 7);
    }

    #[test]
    fn dominant_label_heavy_spoke() {
        // four light spokes share label 9 (total 4), one heavy spoke weighs 5
        let mut edges = EdgeList::new();
        for v in 1..=4 {
            edges.push(0, v, 1.0);
        }
        edges.push(0, 5, 5.0);
        let g = Graph::from_edges(6, &edges).unwrap();
        let z = Partition::from_vec(vec![0, 9, 9, 9, 9, 3]);
        assert_eq!(dominant_label(&g, &z, 0).unwrap(), 3);
    }

    #[test]
    fn dominant_label_keeps_current_on_tie() {
        let g = Graph::from_edges(3, &[(0, 1), (0, 2)].into_iter().collect()).unwrap();
        let z = Partition::from_vec(vec![5, 1, 5]);
        assert_eq!(dominant_label(&g, &z, 0).unwrap(), 5);
    }

    #[test]
    fn dominant_label_isolated() {
        let g = Graph::empty(2);
        let z = Partition::singleton(2);
        assert!(matches!(dominant_label(&g, &z, 1), Err(Error::IsolatedNode(1))));
    }

    #[test]
    fn two_triangles_converge() {
        let g = two_triangles();
        let (z, report) = run_plp(&g, &PlpConfig::for_graph(&g), None, &Workers::sequential())
            .unwrap();
        assert_eq!(z.community_count(), 2);
        assert!((modularity(&g, &z, 1.0).unwrap() - 0.5).abs() < 1e-12);
        assert!(report.iterations.len() <= DEFAULT_MAX_ITERATIONS);
    }

    #[test]
    fn edgeless_graph_single_iteration() {
        let g = Graph::empty(5);
        let (z, report) =
            run_plp(&g, &PlpConfig::for_graph(&g), None, &Workers::sequential()).unwrap();
        assert_eq!(z, Partition::singleton(5));
        assert_eq!(report.iterations.len(), 1);
        assert_eq!(report.iterations[0].updated, 0);
    }

    #[test]
    fn barbell_triangles_are_a_fixed_point() {
        let g = barbell();
        let tri = Partition::from_vec(vec![0, 0, 0, 1, 1, 1]);
        assert!(is_stable(&g, &tri));
        let cfg = PlpConfig {
            theta: 0,
            ..PlpConfig::for_graph(&g)
        };
        let (z, report) = run_plp(&g, &cfg, Some(&tri), &Workers::sequential()).unwrap();
        assert_eq!(z, tri);
        assert_eq!(report.iterations[0].updated, 0);

        let (z, _) = run_plp(&g, &cfg, None, &Workers::sequential()).unwrap();
        assert!(is_stable(&g, &z));
        assert!(coverage(&g, &z).unwrap() >= 6.0 / 7.0 - 1e-12);
    }

    #[test]
    fn stability_checks() {
        let tri = Graph::from_edges(3, &[(0, 1), (0, 2), (1, 2)].into_iter().collect()).unwrap();
        assert!(!is_stable(&tri, &Partition::singleton(3)));
        assert!(is_stable(&two_triangles(), &Partition::from_vec(vec![0, 0, 0, 1, 1, 1])));
    }

    #[test]
    fn labels_are_conserved() {
        let g = barbell();
        let init = Partition::from_vec(vec![10, 20, 30, 40, 50, 60]);
        let (z, _) = run_plp(&g, &PlpConfig::for_graph(&g), Some(&init), &Workers::sequential())
            .unwrap();
        assert!(z.assignment().iter().all(|l| init.assignment().contains(l)));
    }

    #[test]
    fn iteration_cap_is_honored() {
        let g = barbell();
        let cfg = PlpConfig {
            theta: 0,
            max_iterations: 1,
            ..PlpConfig::for_graph(&g)
        };
        let (_, report) = run_plp(&g, &cfg, None, &Workers::sequential()).unwrap();
        assert_eq!(report.iterations.len(), 1);
    }

    #[test]
    fn seeded_shuffle_is_deterministic() {
        let g = barbell();
        let cfg = PlpConfig {
            randomize_order: true,
            seed: 7,
            theta: 0,
            ..PlpConfig::for_graph(&g)
        };
        let a = run_plp(&g, &cfg, None, &Workers::sequential()).unwrap().0;
        let b = run_plp(&g, &cfg, None, &Workers::sequential()).unwrap().0;
        assert_eq!(a, b);
    }

    #[test]
    fn multi_worker_output_is_valid() {
        let g = barbell();
        let w = Workers::new(4).unwrap();
        let (z, report) = run_plp(&g, &PlpConfig::for_graph(&g), None, &w).unwrap();
        assert_eq!(z.len(), 6);
        assert!(report.iterations.len() <= DEFAULT_MAX_ITERATIONS);
        assert!(report.iterations.iter().all(|it| it.updated <= 6));
    }
}

//! Local node moves for modularity gain.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::parallel::{AtomicF64, Workers};
use crate::partition::{CommunityId, Partition};

use super::LouvainConfig;

/// Volume of every community, kept in step with node moves.
#[derive(Debug)]
pub struct CommunityVolumes {
    vol: Vec<AtomicF64>,
}

impl CommunityVolumes {
    pub fn from_partition(g: &Graph, z: &Partition) -> Result<Self> {
        z.check_covers(g)?;
        let vol: Vec<AtomicF64> = (0..z.upper_bound()).map(|_| AtomicF64::default()).collect();
        for (u, &c) in z.assignment().iter().enumerate() {
            vol[c].fetch_add(g.volumes()[u]);
        }
        Ok(Self { vol })
    }

    pub fn get(&self, c: CommunityId) -> f64 {
        self.vol[c].load()
    }

    pub fn len(&self) -> usize {
        self.vol.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vol.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.vol.iter().map(AtomicF64::load).sum()
    }

    /// Moves `volume` from community `from` to `to`.
    pub fn transfer(&self, from: CommunityId, to: CommunityId, volume: f64) {
        self.vol[from].fetch_add(-volume);
        self.vol[to].fetch_add(volume);
    }
}

/// Modularity change of moving a node out of its community `C` into `D`.
///
/// `to_target` and `to_current` are the node's edge weights into `D` and
/// `C \ {u}` (self-loops excluded); `vol_current` is `vol(C \ {u})`.
#[inline]
pub(crate) fn modularity_gain(
    to_target: f64,
    to_current: f64,
    vol_current: f64,
    vol_target: f64,
    vol_node: f64,
    total_weight: f64,
    gamma: f64,
) -> f64 {
    (to_target - to_current) / total_weight
        + gamma * (vol_current - vol_target) * vol_node / (2.0 * total_weight * total_weight)
}

/// Modularity difference of moving `u` from its community to `target`.
pub fn delta_mod(
    g: &Graph,
    z: &Partition,
    vols: &CommunityVolumes,
    u: NodeId,
    target: CommunityId,
    gamma: f64,
) -> Result<f64> {
    z.check_covers(g)?;
    if u >= g.node_count() {
        return Err(Error::NodeOutOfRange {
            node: u,
            node_count: g.node_count(),
        });
    }
    let total = g.total_edge_weight();
    if total == 0.0 {
        return Err(Error::ZeroTotalWeight);
    }
    let current = z.community_of(u);
    if target == current {
        return Ok(0.0);
    }
    if target >= vols.len() {
        return Err(Error::InvalidParameter(format!(
            "community {target} has no cached volume"
        )));
    }
    let (mut to_target, mut to_current) = (0.0, 0.0);
    for (v, w) in g.neighbors(u).filter(|&(v, _)| v != u) {
        let c = z.community_of(v);
        if c == target {
            to_target += w;
        } else if c == current {
            to_current += w;
        }
    }
    let vol_u = g.volumes()[u];
    debug_assert!(vols.get(current) >= vol_u - 1e-9 * vol_u.max(1.0));
    Ok(modularity_gain(
        to_target,
        to_current,
        vols.get(current) - vol_u,
        vols.get(target),
        vol_u,
        total,
        gamma,
    ))
}

/// A node move performed by the move phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoveEvent {
    pub node: NodeId,
    pub from: CommunityId,
    pub to: CommunityId,
    pub gain: f64,
}

/// Called before each move with the graph, the assignment before the move and
/// the move itself. Only used by single-worker runs.
pub type MoveObserver<'a> = &'a (dyn Fn(&Graph, &[CommunityId], &MoveEvent) + Sync);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MovePhaseStats {
    pub passes: usize,
    pub moved: usize,
}

/// Per-worker accumulator of edge weight towards neighboring communities.
struct CommunityScratch {
    weight: Vec<f64>,
    touched: Vec<CommunityId>,
}

impl CommunityScratch {
    fn new(communities: usize) -> Self {
        Self {
            weight: vec![0.0; communities],
            touched: Vec::new(),
        }
    }
}

/// Best strictly improving move for `u`, evaluating each distinct
/// neighboring community once.
fn best_move(
    g: &Graph,
    u: NodeId,
    community_of: impl Fn(NodeId) -> CommunityId,
    volume_of: impl Fn(CommunityId) -> f64,
    gamma: f64,
    scratch: &mut CommunityScratch,
) -> Option<(CommunityId, CommunityId, f64)> {
    let current = community_of(u);
    let mut has_other = false;
    for (v, w) in g.neighbors(u) {
        if v == u {
            continue;
        }
        let c = community_of(v);
        has_other |= c != current;
        if scratch.weight[c] == 0.0 {
            scratch.touched.push(c);
        }
        scratch.weight[c] += w;
    }
    let mut best = None;
    if has_other {
        let total = g.total_edge_weight();
        let vol_u = g.volumes()[u];
        let to_current = scratch.weight[current];
        let vol_current = volume_of(current) - vol_u;
        let mut best_gain = 0.0;
        for &c in &scratch.touched {
            if c == current {
                continue;
            }
            let gain = modularity_gain(
                scratch.weight[c],
                to_current,
                vol_current,
                volume_of(c),
                vol_u,
                total,
                gamma,
            );
            if gain > best_gain {
                best_gain = gain;
                best = Some((current, c, gain));
            }
        }
    }
    for &c in &scratch.touched {
        scratch.weight[c] = 0.0;
    }
    scratch.touched.clear();
    best
}

/// Repeatedly moves nodes to the neighboring community of largest positive
/// modularity gain until a pass moves nothing or the pass cap is reached.
pub fn move_phase(
    g: &Graph,
    z: &Partition,
    cfg: &LouvainConfig,
    workers: &Workers,
) -> Result<(Partition, bool)> {
    let (z, stats) = move_phase_observed(g, z, cfg, workers, None)?;
    Ok((z, stats.moved > 0))
}

pub(crate) fn move_phase_observed(
    g: &Graph,
    z: &Partition,
    cfg: &LouvainConfig,
    workers: &Workers,
    observer: Option<MoveObserver<'_>>,
) -> Result<(Partition, MovePhaseStats)> {
    let vols = CommunityVolumes::from_partition(g, z)?;
    let mut stats = MovePhaseStats::default();
    if g.total_edge_weight() == 0.0 {
        return Ok((z.clone(), stats));
    }
    let sequential;
    let workers = if observer.is_some() {
        sequential = Workers::sequential();
        &sequential
    } else {
        workers
    };
    let communities = z.upper_bound();
    let zeta: Vec<AtomicUsize> = z
        .assignment()
        .iter()
        .map(|&c| AtomicUsize::new(c))
        .collect();
    let community_of = |v: NodeId| zeta[v].load(Ordering::Relaxed);
    let volume_of = |c: CommunityId| vols.get(c);

    while stats.passes < cfg.max_move_iterations {
        let moved = AtomicUsize::new(0);
        workers.for_each_guided_with(
            g.node_count(),
            || CommunityScratch::new(communities),
            |scratch, u| {
                let Some((from, to, gain)) =
                    best_move(g, u, community_of, volume_of, cfg.gamma, scratch)
                else {
                    return;
                };
                if let Some(observe) = observer {
                    let snapshot: Vec<CommunityId> = (0..zeta.len()).map(community_of).collect();
                    observe(g, &snapshot, &MoveEvent { node: u, from, to, gain });
                }
                zeta[u].store(to, Ordering::Relaxed);
                vols.transfer(from, to, g.volumes()[u]);
                moved.fetch_add(1, Ordering::Relaxed);
            },
        );
        stats.passes += 1;
        let moved = moved.into_inner();
        stats.moved += moved;
        if moved == 0 {
            break;
        }
    }
    let assignment = zeta.into_iter().map(AtomicUsize::into_inner).collect();
    Ok((Partition::from_raw(assignment, communities), stats))
}

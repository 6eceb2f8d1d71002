//! Planted partition graphs with known ground truth.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, EdgeList, Graph, NodeId};
use crate::parallel::Workers;
use crate::partition::Partition;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedPartitionSpec {
    pub nodes: usize,
    pub blocks: usize,
    pub p_in: f64,
    pub p_out: f64,
    pub seed: u64,
}

impl PlantedPartitionSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.blocks == 0 {
            return bad("at least one block is required".into());
        }
        if self.nodes > 0 && self.blocks > self.nodes {
            return bad(format!(
                "{} blocks cannot be filled by {} nodes",
                self.blocks, self.nodes
            ));
        }
        if !(0.0..=1.0).contains(&self.p_in) || !(0.0..=1.0).contains(&self.p_out) {
            return bad("edge probabilities must lie in [0, 1]".into());
        }
        if self.p_out > self.p_in {
            return bad(format!(
                "p_out = {} exceeds p_in = {}",
                self.p_out, self.p_in
            ));
        }
        Ok(())
    }

    /// Block of node `u`; block sizes differ by at most one.
    pub fn block_of(&self, u: NodeId) -> usize {
        ((u as u128 * self.blocks as u128) / self.nodes as u128) as usize
    }

    /// First node of block `b` (`nodes` for `b == blocks`).
    fn block_start(&self, b: usize) -> NodeId {
        ((b as u128 * self.nodes as u128).div_ceil(self.blocks as u128)) as usize
    }

    pub fn ground_truth(&self) -> Partition {
        Partition::from_vec((0..self.nodes).map(|u| self.block_of(u)).collect())
    }

    pub fn expected_edges(&self) -> f64 {
        let pairs = |s: f64| s * (s - 1.0) / 2.0;
        let intra: f64 = (0..self.blocks)
            .map(|b| pairs((self.block_start(b + 1) - self.block_start(b)) as f64))
            .sum();
        let all = pairs(self.nodes as f64);
        intra * self.p_in + (all - intra) * self.p_out
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Appends every `v` in `range` independently with probability `p`, drawing
/// geometric gaps between successive hits.
fn sample_range(
    rng: &mut ChaCha8Rng,
    u: NodeId,
    range: std::ops::Range<NodeId>,
    p: f64,
    out: &mut Vec<Edge>,
) {
    if p <= 0.0 || range.is_empty() {
        return;
    }
    if p >= 1.0 {
        out.extend(range.map(|v| Edge::unit(u, v)));
        return;
    }
    let log_q = (1.0 - p).ln();
    let mut v = range.start;
    loop {
        // uniform in (0, 1]
        let r: f64 = 1.0 - rng.random::<f64>();
        let gap = (r.ln() / log_q).floor();
        if gap >= (range.end - v) as f64 {
            return;
        }
        v += gap as usize;
        out.push(Edge::unit(u, v));
        v += 1;
        if v >= range.end {
            return;
        }
    }
}

/// Generates the graph and its block partition. Each row `u` draws from its
/// own stream keyed by `(seed, u)`, so output does not depend on the number
/// of workers.
pub fn generate_planted(
    spec: &PlantedPartitionSpec,
    workers: &Workers,
) -> Result<(Graph, Partition)> {
    spec.validate()?;
    let n = spec.nodes;
    let rows: Vec<Vec<Edge>> = workers.install(|| {
        (0..n)
            .into_par_iter()
            .map(|u| {
                let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(spec.seed ^ splitmix64(u as u64)));
                let block_end = spec.block_start(spec.block_of(u) + 1);
                let mut row = Vec::new();
                sample_range(&mut rng, u, u + 1..block_end, spec.p_in, &mut row);
                sample_range(&mut rng, u, block_end..n, spec.p_out, &mut row);
                row
            })
            .collect()
    });
    let edges = EdgeList(rows.into_iter().flatten().collect());
    let g = Graph::from_edges(n, &edges)?;
    Ok((g, spec.ground_truth()))
}

//! Weighted undirected graph in adjacency-array form.
//!
//! Every undirected edge `{u, v}` with `u != v` is stored in both endpoint
//! lists. A self-loop `{u, u}` is stored once, in `u`'s list, and counts
//! twice towards `u`'s volume. Neighbor lists are sorted by neighbor id.

use crate::error::{Error, Result};
use crate::parallel::Workers;

pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub weight: f64,
}

impl Edge {
    pub fn new(u: NodeId, v: NodeId, weight: f64) -> Self {
        Self { u, v, weight }
    }

    pub fn unit(u: NodeId, v: NodeId) -> Self {
        Self::new(u, v, 1.0)
    }
}

/// Input edges for [`Graph::from_edges`]. Unordered pairs must be unique.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EdgeList(pub Vec<Edge>);

impl EdgeList {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, u: NodeId, v: NodeId, weight: f64) {
        self.0.push(Edge::new(u, v, weight));
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<Edge>> for EdgeList {
    fn from(edges: Vec<Edge>) -> Self {
        Self(edges)
    }
}

impl FromIterator<(NodeId, NodeId)> for EdgeList {
    fn from_iter<T: IntoIterator<Item = (NodeId, NodeId)>>(iter: T) -> Self {
        Self(iter.into_iter().map(|(u, v)| Edge::unit(u, v)).collect())
    }
}

impl FromIterator<(NodeId, NodeId, f64)> for EdgeList {
    fn from_iter<T: IntoIterator<Item = (NodeId, NodeId, f64)>>(iter: T) -> Self {
        Self(
            iter.into_iter()
                .map(|(u, v, w)| Edge::new(u, v, w))
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
    weights: Vec<f64>,
    edge_count: usize,
    total_weight: f64,
    volumes: Vec<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Duplicates {
    Reject,
    Merge,
}

impl Graph {
    pub fn empty(node_count: usize) -> Self {
        Self::from_csr(vec![0; node_count + 1], Vec::new(), Vec::new())
    }

    /// Builds a graph, rejecting duplicate unordered pairs.
    pub fn from_edges(node_count: usize, edges: &EdgeList) -> Result<Self> {
        Self::build(node_count, edges, Duplicates::Reject)
    }

    /// Builds a graph, summing the weights of duplicate unordered pairs.
    pub fn from_edges_merged(node_count: usize, edges: &EdgeList) -> Result<Self> {
        Self::build(node_count, edges, Duplicates::Merge)
    }

    fn build(node_count: usize, edges: &EdgeList, duplicates: Duplicates) -> Result<Self> {
        let mut degree = vec![0usize; node_count];
        for e in &edges.0 {
            for x in [e.u, e.v] {
                if x >= node_count {
                    return Err(Error::NodeOutOfRange {
                        node: x,
                        node_count,
                    });
                }
            }
            // rejects NaN as well
            if !e.weight.is_finite() || e.weight <= 0.0 {
                return Err(Error::NonPositiveWeight {
                    u: e.u,
                    v: e.v,
                    weight: e.weight,
                });
            }
            degree[e.u] += 1;
            if e.u != e.v {
                degree[e.v] += 1;
            }
        }

        let mut offsets = Vec::with_capacity(node_count + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..node_count].to_vec();
        let mut adjacency = vec![(0usize, 0f64); *offsets.last().unwrap()];
        for e in &edges.0 {
            adjacency[fill[e.u]] = (e.v, e.weight);
            fill[e.u] += 1;
            if e.u != e.v {
                adjacency[fill[e.v]] = (e.u, e.weight);
                fill[e.v] += 1;
            }
        }

        let mut new_offsets = Vec::with_capacity(node_count + 1);
        new_offsets.push(0);
        let mut targets = Vec::with_capacity(adjacency.len());
        let mut weights = Vec::with_capacity(adjacency.len());
        for u in 0..node_count {
            let list = &mut adjacency[offsets[u]..offsets[u + 1]];
            list.sort_by_key(|&(v, _)| v);
            for &(v, w) in list.iter() {
                if targets.len() > *new_offsets.last().unwrap() && *targets.last().unwrap() == v {
                    match duplicates {
                        Duplicates::Reject => {
                            return Err(Error::DuplicateEdge {
                                u: u.min(v),
                                v: u.max(v),
                            })
                        }
                        Duplicates::Merge => *weights.last_mut().unwrap() += w,
                    }
                } else {
                    targets.push(v);
                    weights.push(w);
                }
            }
            new_offsets.push(targets.len());
        }
        Ok(Self::from_csr(new_offsets, targets, weights))
    }

    /// Assembles a graph from already symmetric, sorted adjacency arrays.
    pub(crate) fn from_csr(offsets: Vec<usize>, targets: Vec<NodeId>, weights: Vec<f64>) -> Self {
        let n = offsets.len() - 1;
        let mut volumes = vec![0.0; n];
        let mut edge_count = 0;
        let mut loop_weight = 0.0;
        let mut half_weight = 0.0;
        for u in 0..n {
            let mut vol = 0.0;
            for i in offsets[u]..offsets[u + 1] {
                let (v, w) = (targets[i], weights[i]);
                if v == u {
                    vol += 2.0 * w;
                    loop_weight += w;
                    edge_count += 2;
                } else {
                    vol += w;
                    half_weight += w;
                    edge_count += 1;
                }
            }
            volumes[u] = vol;
        }
        Self {
            offsets,
            targets,
            weights,
            edge_count: edge_count / 2,
            total_weight: half_weight / 2.0 + loop_weight,
            volumes,
        }
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of distinct undirected edges, self-loops included.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Sum of all edge weights, each undirected edge and self-loop once.
    pub fn total_edge_weight(&self) -> f64 {
        self.total_weight
    }

    /// Number of adjacency entries of `u`.
    pub fn degree(&self, u: NodeId) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    /// Weighted degree of `u` with its self-loop counted twice.
    pub fn volume(&self, u: NodeId) -> Result<f64> {
        self.volumes
            .get(u)
            .copied()
            .ok_or(Error::NodeOutOfRange {
                node: u,
                node_count: self.node_count(),
            })
    }

    pub fn volumes(&self) -> &[f64] {
        &self.volumes
    }

    /// Neighbors of `u` and the connecting edge weights, sorted by neighbor id.
    pub fn neighbors(&self, u: NodeId) -> impl ExactSizeIterator<Item = (NodeId, f64)> + '_ {
        let range = self.offsets[u]..self.offsets[u + 1];
        self.targets[range.clone()]
            .iter()
            .copied()
            .zip(self.weights[range].iter().copied())
    }

    pub fn neighbor_ids(&self, u: NodeId) -> &[NodeId] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    pub fn self_loop_weight(&self, u: NodeId) -> f64 {
        let ids = self.neighbor_ids(u);
        match ids.binary_search(&u) {
            Ok(i) => self.weights[self.offsets[u] + i],
            Err(_) => 0.0,
        }
    }

    /// Each undirected edge once, as `(u, v, w)` with `u <= v`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, f64)> + '_ {
        (0..self.node_count()).flat_map(move |u| {
            self.neighbors(u)
                .filter(move |&(v, _)| u <= v)
                .map(move |(v, w)| (u, v, w))
        })
    }

    pub fn to_edge_list(&self) -> EdgeList {
        self.edges().collect()
    }

    /// Applies `f` once to every node using guided scheduling.
    pub fn for_nodes_parallel<F>(&self, workers: &Workers, f: F)
    where
        F: Fn(NodeId) + Sync,
    {
        workers.for_each_guided(self.node_count(), f);
    }

    /// Verifies symmetry, positive weights, sorted lists and the total weight
    /// identity.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.node_count();
        for u in 0..n {
            let ids = self.neighbor_ids(u);
            if ids.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidParameter(format!(
                    "adjacency of node {u} is not strictly sorted"
                )));
            }
            for (v, w) in self.neighbors(u) {
                if v >= n {
                    return Err(Error::NodeOutOfRange { node: v, node_count: n });
                }
                if w.is_nan() || w <= 0.0 {
                    return Err(Error::NonPositiveWeight { u, v, weight: w });
                }
                if v != u {
                    let back = self
                        .neighbor_ids(v)
                        .binary_search(&u)
                        .ok()
                        .map(|i| self.weights[self.offsets[v] + i]);
                    if back != Some(w) {
                        return Err(Error::InvalidParameter(format!(
                            "asymmetric edge {{{u}, {v}}}"
                        )));
                    }
                }
            }
        }
        let sum: f64 = self.edges().map(|(_, _, w)| w).sum();
        if (sum - self.total_weight).abs() > 1e-9 * sum.abs().max(1.0) {
            return Err(Error::InvalidParameter(format!(
                "total weight {} disagrees with edge sum {sum}",
                self.total_weight
            )));
        }
        Ok(())
    }
}

//! Contraction of communities into supernodes and the inverse mapping.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::parallel::Workers;
use crate::partition::Partition;

#[derive(Debug, Clone, PartialEq)]
pub struct CoarseningResult {
    pub coarse: Graph,
    /// fine node -> coarse node
    pub pi: Vec<NodeId>,
}

/// Edge entries of one worker's share of the fine graph, bucketed by coarse
/// source node in fine-node order.
struct PartialCoarse {
    offsets: Vec<usize>,
    entries: Vec<(NodeId, f64)>,
}

/// Contracts each community of the compacted partition `z` into one node.
///
/// Inter-community weights are summed into coarse edges, intra-community
/// weights (fine self-loops included) into coarse self-loops. Weights are
/// summed in fine-node order, so the result does not depend on the number of
/// workers.
pub fn coarsen(g: &Graph, z: &Partition, workers: &Workers) -> Result<CoarseningResult> {
    z.check_covers(g)?;
    z.check_compact()?;
    let coarse_n = z.upper_bound();
    let pi = z.assignment().to_vec();

    let ranges = edge_balanced_ranges(g, workers.count());
    let partials: Vec<PartialCoarse> = workers.install(|| {
        ranges
            .par_iter()
            .map(|range| scan_range(g, &pi, coarse_n, range.clone()))
            .collect()
    });

    let adjacency: Vec<Vec<(NodeId, f64)>> = workers.install(|| {
        (0..coarse_n)
            .into_par_iter()
            .map(|c| merge_node(&partials, c))
            .collect()
    });

    let mut offsets = Vec::with_capacity(coarse_n + 1);
    offsets.push(0);
    let total: usize = adjacency.iter().map(Vec::len).sum();
    let mut targets = Vec::with_capacity(total);
    let mut weights = Vec::with_capacity(total);
    for list in adjacency {
        for (d, w) in list {
            targets.push(d);
            weights.push(w);
        }
        offsets.push(targets.len());
    }
    Ok(CoarseningResult {
        coarse: Graph::from_csr(offsets, targets, weights),
        pi,
    })
}

fn edge_balanced_ranges(g: &Graph, parts: usize) -> Vec<std::ops::Range<NodeId>> {
    let n = g.node_count();
    let parts = parts.max(1);
    let total: usize = (0..n).map(|u| g.degree(u) + 1).sum();
    let target = total.div_ceil(parts).max(1);
    let mut ranges = Vec::with_capacity(parts);
    let mut start = 0;
    let mut acc = 0;
    for u in 0..n {
        acc += g.degree(u) + 1;
        if acc >= target {
            ranges.push(start..u + 1);
            start = u + 1;
            acc = 0;
        }
    }
    if start < n || ranges.is_empty() {
        ranges.push(start..n);
    }
    ranges
}

fn scan_range(
    g: &Graph,
    pi: &[NodeId],
    coarse_n: usize,
    range: std::ops::Range<NodeId>,
) -> PartialCoarse {
    let mut counts = vec![0usize; coarse_n + 1];
    let each_edge = |f: &mut dyn FnMut(NodeId, NodeId, f64)| {
        for u in range.clone() {
            let cu = pi[u];
            for (v, w) in g.neighbors(u) {
                // every undirected edge once, from its smaller endpoint
                if v < u {
                    continue;
                }
                let cv = pi[v];
                f(cu, cv, w);
                if cu != cv {
                    f(cv, cu, w);
                }
            }
        }
    };
    each_edge(&mut |c, _, _| counts[c + 1] += 1);
    for c in 0..coarse_n {
        counts[c + 1] += counts[c];
    }
    let mut fill = counts[..coarse_n].to_vec();
    let mut entries = vec![(0, 0.0); counts[coarse_n]];
    each_edge(&mut |c, d, w| {
        entries[fill[c]] = (d, w);
        fill[c] += 1;
    });
    PartialCoarse {
        offsets: counts,
        entries,
    }
}

fn merge_node(partials: &[PartialCoarse], c: NodeId) -> Vec<(NodeId, f64)> {
    let mut list: Vec<(NodeId, f64)> = partials
        .iter()
        .flat_map(|p| p.entries[p.offsets[c]..p.offsets[c + 1]].iter().copied())
        .collect();
    // stable: equal targets keep fine-node order
    list.sort_by_key(|&(d, _)| d);
    let mut merged: Vec<(NodeId, f64)> = Vec::with_capacity(list.len());
    for (d, w) in list {
        match merged.last_mut() {
            Some(last) if last.0 == d => last.1 += w,
            _ => merged.push((d, w)),
        }
    }
    merged
}

/// Maps a coarse partition back to fine nodes: `z(v) = z_coarse(pi(v))`.
pub fn prolong(z_coarse: &Partition, pi: &[NodeId]) -> Result<Partition> {
    let assignment = pi
        .iter()
        .map(|&c| {
            if c < z_coarse.len() {
                Ok(z_coarse.community_of(c))
            } else {
                Err(Error::ProlongationOutOfRange {
                    node: c,
                    len: z_coarse.len(),
                })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Partition::from_raw(assignment, z_coarse.upper_bound()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::{Edge, EdgeList};
    use crate::quality::modularity;

    #[test]
    fn singletons_give_identity() {
        let g = barbell();
        let r = coarsen(&g, &Partition::singleton(6), &Workers::sequential()).unwrap();
        assert_eq!(r.coarse, g);
        assert_eq!(r.pi, (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn barbell_triangles() {
        let g = barbell();
        let z = Partition::from_vec(vec![0, 0, 0, 1, 1, 1]);
        let r = coarsen(&g, &z, &Workers::sequential()).unwrap();
        let c = &r.coarse;
        assert_eq!(c.node_count(), 2);
        assert_eq!(c.neighbors(0).collect::<Vec<_>>(), vec![(0, 3.0), (1, 1.0)]);
        assert_eq!(c.neighbors(1).collect::<Vec<_>>(), vec![(0, 1.0), (1, 3.0)]);
        assert_eq!(c.volumes(), &[7.0, 7.0]);
        assert_eq!(c.total_edge_weight(), 7.0);
    }

    #[test]
    fn all_in_one_gives_single_loop() {
        let g = barbell();
        let r = coarsen(&g, &Partition::all_in_one(6), &Workers::sequential()).unwrap();
        assert_eq!(r.coarse.node_count(), 1);
        assert_eq!(r.coarse.self_loop_weight(0), 7.0);
        assert_eq!(r.coarse.edge_count(), 1);
    }

    #[test]
    fn fine_self_loops_fold_into_coarse_loops() {
        let g = Graph::from_edges(
            3,
            &EdgeList(vec![
                Edge::new(0, 0, 2.0),
                Edge::new(0, 1, 1.5),
                Edge::new(1, 2, 0.5),
            ]),
        )
        .unwrap();
        let z = Partition::from_vec(vec![0, 0, 1]);
        let r = coarsen(&g, &z, &Workers::sequential()).unwrap();
        assert_eq!(r.coarse.self_loop_weight(0), 3.5);
        assert_eq!(r.coarse.total_edge_weight(), g.total_edge_weight());
        let q_fine = modularity(&g, &z, 1.0).unwrap();
        let q_coarse = modularity(&r.coarse, &Partition::singleton(2), 1.0).unwrap();
        assert!((q_fine - q_coarse).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_compact() {
        let g = barbell();
        let z = Partition::from_vec(vec![0, 0, 0, 2, 2, 2]);
        assert!(matches!(
            coarsen(&g, &z, &Workers::sequential()),
            Err(Error::NotCompacted(_))
        ));
    }

    #[test]
    fn worker_count_does_not_change_result() {
        let mut edges = EdgeList::new();
        for u in 0..200usize {
            for v in [u + 1, u + 7, u * 3 + 1] {
                if v < 200 && v != u {
                    edges.push(u, v, 0.1 + (u * v % 13) as f64 / 7.0);
                }
            }
        }
        let g = Graph::from_edges_merged(200, &edges).unwrap();
        let z = Partition::from_vec((0..200).map(|u| (u * 31 % 17) % 9).collect()).compact();
        let seq = coarsen(&g, &z, &Workers::sequential()).unwrap();
        for workers in [2, 3, 4] {
            let par = coarsen(&g, &z, &Workers::new(workers).unwrap()).unwrap();
            assert_eq!(par, seq);
        }
    }

    #[test]
    fn prolongation() {
        let pi = vec![0, 0, 0, 1, 1, 1];
        let z = prolong(&Partition::from_vec(vec![4, 9]), &pi).unwrap();
        assert_eq!(z.compact().assignment(), &[0, 0, 0, 1, 1, 1]);
        let id: Vec<usize> = (0..4).collect();
        let z = Partition::from_vec(vec![3, 1, 1, 0]);
        assert_eq!(prolong(&z, &id).unwrap(), z);
        let z = prolong(&Partition::all_in_one(2), &pi).unwrap();
        assert_eq!(z.community_count(), 1);
        assert!(matches!(
            prolong(&Partition::singleton(1), &pi),
            Err(Error::ProlongationOutOfRange { node: 1, len: 1 })
        ));
    }
}

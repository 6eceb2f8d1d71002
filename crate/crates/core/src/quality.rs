//! Partition quality measures.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::Partition;

/// Fraction of the total edge weight inside communities. Zero when the graph
/// has no edge weight.
pub fn coverage(g: &Graph, z: &Partition) -> Result<f64> {
    z.check_covers(g)?;
    let total = g.total_edge_weight();
    if total == 0.0 {
        return Ok(0.0);
    }
    Ok(intra_weight(g, z) / total)
}

fn intra_weight(g: &Graph, z: &Partition) -> f64 {
    g.edges()
        .filter(|&(u, v, _)| z.in_same(u, v))
        .map(|(_, _, w)| w)
        .sum()
}

/// Modularity with resolution `gamma` scaling the volume term:
/// `sum_C w(C)/w(E) - gamma * vol(C)^2 / (4 w(E)^2)`.
pub fn modularity(g: &Graph, z: &Partition, gamma: f64) -> Result<f64> {
    z.check_covers(g)?;
    let total = g.total_edge_weight();
    if total == 0.0 {
        return Err(Error::ZeroTotalWeight);
    }
    let mut vol = vec![0.0; z.upper_bound()];
    for (u, &c) in z.assignment().iter().enumerate() {
        vol[c] += g.volumes()[u];
    }
    let penalty: f64 = vol.iter().map(|v| v * v).sum::<f64>() / (4.0 * total * total);
    Ok(intra_weight(g, z) / total - gamma * penalty)
}

/// Fraction of edges on which two partitions agree: both keep the endpoints
/// together or both separate them. Self-loops always agree.
pub fn graph_rand_index(g: &Graph, a: &Partition, b: &Partition) -> Result<f64> {
    a.check_covers(g)?;
    b.check_covers(g)?;
    if g.edge_count() == 0 {
        return Err(Error::NoEdges);
    }
    let agree = g
        .edges()
        .filter(|&(u, v, _)| a.in_same(u, v) == b.in_same(u, v))
        .count();
    Ok(agree as f64 / g.edge_count() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QualityReport {
    pub modularity: Option<f64>,
    pub coverage: f64,
    pub community_count: usize,
    /// community size -> number of communities of that size
    pub size_histogram: BTreeMap<usize, usize>,
}

impl QualityReport {
    pub fn compute(g: &Graph, z: &Partition) -> Result<Self> {
        let modularity = match modularity(g, z, 1.0) {
            Ok(q) => Some(q),
            Err(Error::ZeroTotalWeight) => None,
            Err(e) => return Err(e),
        };
        let mut size_histogram = BTreeMap::new();
        for size in z.community_sizes().into_iter().filter(|&s| s > 0) {
            *size_histogram.entry(size).or_insert(0) += 1;
        }
        Ok(Self {
            modularity,
            coverage: coverage(g, z)?,
            community_count: z.community_count(),
            size_histogram,
        })
    }

    /// `key value` lines.
    pub fn to_key_value(&self) -> String {
        let mut out = String::new();
        match self.modularity {
            Some(q) => writeln!(out, "modularity {q}").unwrap(),
            None => writeln!(out, "modularity undefined").unwrap(),
        }
        writeln!(out, "coverage {}", self.coverage).unwrap();
        writeln!(out, "communities {}", self.community_count).unwrap();
        if let (Some(min), Some(max)) = (
            self.size_histogram.keys().next(),
            self.size_histogram.keys().next_back(),
        ) {
            writeln!(out, "min_community_size {min}").unwrap();
            writeln!(out, "max_community_size {max}").unwrap();
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("quality report is always serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::{Edge, EdgeList};

    fn triangles() -> Partition {
        Partition::from_vec(vec![0, 0, 0, 1, 1, 1])
    }

    #[test]
    fn coverage_values() {
        let g = barbell();
        assert!((coverage(&g, &triangles()).unwrap() - 6.0 / 7.0).abs() < 1e-15);
        assert_eq!(coverage(&g, &Partition::all_in_one(6)).unwrap(), 1.0);
        assert_eq!(coverage(&g, &Partition::singleton(6)).unwrap(), 0.0);
        assert_eq!(coverage(&Graph::empty(3), &Partition::singleton(3)).unwrap(), 0.0);
    }

    #[test]
    fn coverage_length_mismatch() {
        let err = coverage(&barbell(), &Partition::singleton(5));
        assert!(matches!(err, Err(Error::LengthMismatch { expected: 6, found: 5 })));
    }

    #[test]
    fn modularity_values() {
        let g = barbell();
        assert!(modularity(&g, &Partition::all_in_one(6), 1.0).unwrap().abs() < 1e-15);
        let q = modularity(&g, &triangles(), 1.0).unwrap();
        assert!((q - 5.0 / 14.0).abs() < 1e-12);
        let q = modularity(&two_triangles(), &triangles(), 1.0).unwrap();
        assert!((q - 0.5).abs() < 1e-12);
    }

    #[test]
    fn modularity_is_coverage_minus_penalty() {
        let g = barbell();
        let z = Partition::from_vec(vec![0, 0, 1, 1, 2, 2]);
        let vols = [4.0, 6.0, 4.0];
        let penalty: f64 = vols.iter().map(|v| v * v).sum::<f64>() / (4.0 * 49.0);
        let q = modularity(&g, &z, 1.0).unwrap();
        assert!((q - (coverage(&g, &z).unwrap() - penalty)).abs() < 1e-12);
    }

    #[test]
    fn modularity_gamma_zero_is_coverage() {
        let g = barbell();
        let z = triangles();
        assert_eq!(modularity(&g, &z, 0.0).unwrap(), coverage(&g, &z).unwrap());
    }

    #[test]
    fn modularity_undefined_without_edges() {
        let g = Graph::empty(4);
        assert!(matches!(
            modularity(&g, &Partition::singleton(4), 1.0),
            Err(Error::ZeroTotalWeight)
        ));
    }

    #[test]
    fn modularity_with_self_loops() {
        // two coarse nodes, loops of 3 and a bridge of 1: same value as the barbell
        let g = Graph::from_edges(
            2,
            &EdgeList(vec![Edge::new(0, 0, 3.0), Edge::new(1, 1, 3.0), Edge::new(0, 1, 1.0)]),
        )
        .unwrap();
        let q = modularity(&g, &Partition::singleton(2), 1.0).unwrap();
        assert!((q - 5.0 / 14.0).abs() < 1e-12);
    }

    #[test]
    fn rand_index_values() {
        let g = barbell();
        let z = triangles();
        assert_eq!(graph_rand_index(&g, &z, &z).unwrap(), 1.0);
        let r = graph_rand_index(&g, &Partition::all_in_one(6), &Partition::singleton(6)).unwrap();
        assert_eq!(r, 0.0);
        // {01|2345}: agrees on 01 (together) and 34, 35, 45 (together)
        let other = Partition::from_vec(vec![0, 0, 1, 1, 1, 1]);
        let r = graph_rand_index(&g, &z, &other).unwrap();
        assert!((r - 4.0 / 7.0).abs() < 1e-15);
        assert_eq!(r, graph_rand_index(&g, &other, &z).unwrap());
    }

    #[test]
    fn rand_index_compaction_invariant() {
        let g = barbell();
        let z = Partition::from_vec(vec![7, 7, 3, 3, 9, 9]);
        assert_eq!(graph_rand_index(&g, &z, &z.compact()).unwrap(), 1.0);
    }

    #[test]
    fn rand_index_needs_edges() {
        let g = Graph::empty(2);
        let z = Partition::singleton(2);
        assert!(matches!(graph_rand_index(&g, &z, &z), Err(Error::NoEdges)));
    }

    #[test]
    fn self_loops_always_agree() {
        let g = Graph::from_edges(2, &EdgeList(vec![Edge::new(0, 0, 1.0), Edge::new(0, 1, 1.0)]))
            .unwrap();
        let r = graph_rand_index(&g, &Partition::singleton(2), &Partition::all_in_one(2)).unwrap();
        assert_eq!(r, 0.5);
    }

    #[test]
    fn report_serializations() {
        let report = QualityReport::compute(&barbell(), &triangles()).unwrap();
        assert_eq!(report.community_count, 2);
        assert_eq!(report.size_histogram.get(&3), Some(&2));
        let kv = report.to_key_value();
        assert!(kv.contains("communities 2\n"));
        assert!(kv.starts_with("modularity 0.357142857"));
        let back: QualityReport = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(back, report);
    }
}

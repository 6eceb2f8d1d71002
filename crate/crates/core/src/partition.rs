use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

pub type CommunityId = usize;

/// Disjoint community assignment, one id per node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    assignment: Vec<CommunityId>,
    upper_bound: CommunityId,
}

impl Partition {
    /// Every node in its own community.
    pub fn singleton(node_count: usize) -> Self {
        Self {
            assignment: (0..node_count).collect(),
            upper_bound: node_count,
        }
    }

    pub fn singleton_for(g: &Graph) -> Self {
        Self::singleton(g.node_count())
    }

    /// Every node in community 0.
    pub fn all_in_one(node_count: usize) -> Self {
        Self {
            assignment: vec![0; node_count],
            upper_bound: usize::from(node_count > 0),
        }
    }

    pub fn from_vec(assignment: Vec<CommunityId>) -> Self {
        let upper_bound = assignment.iter().max().map_or(0, |&m| m + 1);
        Self {
            assignment,
            upper_bound,
        }
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// Strictly greater than every community id in use.
    pub fn upper_bound(&self) -> CommunityId {
        self.upper_bound
    }

    pub fn community_of(&self, u: NodeId) -> CommunityId {
        self.assignment[u]
    }

    pub fn assignment(&self) -> &[CommunityId] {
        &self.assignment
    }

    pub fn into_vec(self) -> Vec<CommunityId> {
        self.assignment
    }

    pub fn in_same(&self, u: NodeId, v: NodeId) -> bool {
        self.assignment[u] == self.assignment[v]
    }

    /// Number of nonempty communities.
    pub fn community_count(&self) -> usize {
        let mut seen = vec![false; self.upper_bound];
        self.assignment
            .iter()
            .filter(|&&c| !std::mem::replace(&mut seen[c], true))
            .count()
    }

    /// Size of each community id below the upper bound (zero for unused ids).
    pub fn community_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.upper_bound];
        for &c in &self.assignment {
            sizes[c] += 1;
        }
        sizes
    }

    /// Nodes of community `c`, ascending.
    pub fn members(&self, c: CommunityId) -> Vec<NodeId> {
        (0..self.len()).filter(|&u| self.assignment[u] == c).collect()
    }

    /// Renumbers communities to `0..k` in order of first appearance.
    pub fn compact(&self) -> Self {
        let mut map = vec![usize::MAX; self.upper_bound];
        let mut next = 0;
        let assignment = self
            .assignment
            .iter()
            .map(|&c| {
                if map[c] == usize::MAX {
                    map[c] = next;
                    next += 1;
                }
                map[c]
            })
            .collect();
        Self {
            assignment,
            upper_bound: next,
        }
    }

    /// True when ids are exactly `0..k` with every id in use.
    pub fn is_compact(&self) -> bool {
        self.community_count() == self.upper_bound
    }

    pub(crate) fn check_compact(&self) -> Result<()> {
        if self.is_compact() {
            Ok(())
        } else {
            Err(Error::NotCompacted(format!(
                "{} communities but ids reach {}",
                self.community_count(),
                self.upper_bound
            )))
        }
    }

    pub fn check_covers(&self, g: &Graph) -> Result<()> {
        if self.len() == g.node_count() {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                expected: g.node_count(),
                found: self.len(),
            })
        }
    }

    /// True if every community of `self` lies inside one community of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let mut parent: HashMap<CommunityId, CommunityId> = HashMap::new();
        self.assignment
            .iter()
            .zip(&other.assignment)
            .all(|(&a, &b)| *parent.entry(a).or_insert(b) == b)
    }

    pub(crate) fn from_raw(assignment: Vec<CommunityId>, upper_bound: CommunityId) -> Self {
        debug_assert!(assignment.iter().all(|&c| c < upper_bound));
        Self {
            assignment,
            upper_bound,
        }
    }
}

impl From<Vec<CommunityId>> for Partition {
    fn from(v: Vec<CommunityId>) -> Self {
        Self::from_vec(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::barbell;

    #[test]
    fn singleton_partition() {
        let z = Partition::singleton_for(&barbell());
        assert_eq!(z.community_count(), 6);
        assert_eq!(z.compact(), z);
        assert!(Partition::singleton(0).is_empty());
        assert_eq!(Partition::singleton(0).community_count(), 0);
    }

    #[test]
    fn compact_renumbers_by_first_appearance() {
        let z = Partition::from_vec(vec![5, 5, 9]);
        assert_eq!(z.compact().assignment(), &[0, 0, 1]);
        assert_eq!(z.compact().upper_bound(), 2);
        assert!(!z.is_compact());
        assert!(z.compact().is_compact());
        let c = z.compact();
        assert_eq!(c.compact(), c);
    }

    #[test]
    fn refinement() {
        let fine = Partition::from_vec(vec![0, 1, 2, 2]);
        let coarse = Partition::from_vec(vec![0, 0, 1, 1]);
        assert!(fine.refines(&coarse));
        assert!(!coarse.refines(&fine));
        assert!(coarse.refines(&coarse));
    }

    #[test]
    fn sizes_and_members() {
        let z = Partition::from_vec(vec![1, 0, 1, 3]);
        assert_eq!(z.community_sizes(), vec![1, 2, 0, 1]);
        assert_eq!(z.members(1), vec![0, 2]);
        assert_eq!(z.community_count(), 3);
    }
}

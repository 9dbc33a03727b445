use alloc::vec;
use alloc::vec::Vec;

use super::{is_structurally_balanced, strongly_connected_components, SignedDigraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupKind {
    /// A single node without incoming edges.
    Root,
    /// A multi-node source SCC that is structurally balanced.
    SccSb,
    /// A multi-node source SCC that is structurally unbalanced.
    SccSub,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeaderGroup {
    pub kind: GroupKind,
    pub members: Vec<usize>,
}

/// Source SCCs of the condensation, classified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeaderStructure {
    pub groups: Vec<LeaderGroup>,
    pub l1: usize,
    pub l2_sb: usize,
    pub l2_sub: usize,
    pub leaders: Vec<usize>,
    pub followers: Vec<usize>,
}

impl LeaderStructure {
    pub fn group_count(&self) -> usize {
        self.groups.len()
    }

    pub fn has_root(&self) -> bool {
        self.l1 > 0
    }
}

pub fn leader_groups(g: &SignedDigraph) -> LeaderStructure {
    let cond = strongly_connected_components(g);
    let mut groups = Vec::new();
    let (mut l1, mut l2_sb, mut l2_sub) = (0, 0, 0);
    for c in cond.sources() {
        let members = cond.components[c].clone();
        // Self-loops are rejected at construction, so a singleton SCC has no
        // internal edge.
        let kind = if members.len() == 1 {
            l1 += 1;
            GroupKind::Root
        } else if is_structurally_balanced(g, Some(&members)).is_some() {
            l2_sb += 1;
            GroupKind::SccSb
        } else {
            l2_sub += 1;
            GroupKind::SccSub
        };
        groups.push(LeaderGroup { kind, members });
    }
    let mut is_leader = vec![false; g.node_count()];
    for grp in &groups {
        for &v in &grp.members {
            is_leader[v] = true;
        }
    }
    let leaders = (0..g.node_count()).filter(|&v| is_leader[v]).collect();
    let followers = (0..g.node_count()).filter(|&v| !is_leader[v]).collect();
    LeaderStructure {
        groups,
        l1,
        l2_sb,
        l2_sub,
        leaders,
        followers,
    }
}

/// More than one leader group, and every follower reachable from at least
/// one leader node.
pub fn check_multi_leader_hypothesis(g: &SignedDigraph, ls: &LeaderStructure) -> bool {
    if ls.groups.len() <= 1 {
        return false;
    }
    let reach = g.reachable_from(&ls.leaders);
    ls.followers.iter().all(|&f| reach[f])
}

/// Stricter diagnostic: every follower is reachable from every leader group.
pub fn every_follower_reachable_from_every_leader(g: &SignedDigraph, ls: &LeaderStructure) -> bool {
    ls.groups.iter().all(|grp| {
        let reach = g.reachable_from(&grp.members);
        ls.followers.iter().all(|&f| reach[f])
    })
}

//! Signed digraph model and its combinatorial analyses.
//!
//! Nodes are stored 0-based. Everything that leaves the crate as text (the
//! `Display` impls of violations, file formats in the CLI) uses 1-based
//! labels `1..=n`.

mod balance;
mod leaders;
mod random;
mod scc;

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

pub use balance::{is_structurally_balanced, GaugeVector};
pub use leaders::{
    check_multi_leader_hypothesis, every_follower_reachable_from_every_leader, leader_groups,
    GroupKind, LeaderGroup, LeaderStructure,
};
pub use random::{random_leader_graph, RandomGraphParams};
pub use scc::{strongly_connected_components, Condensation};

use crate::{Error, Result};

/// Edge sign: `+1` cooperative, `-1` antagonistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn from_i64(v: i64) -> Option<Self> {
        match v {
            1 => Some(Sign::Positive),
            -1 => Some(Sign::Negative),
            _ => None,
        }
    }

    pub fn value(self) -> i32 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

/// A directed edge `tail -> head`; the head node is the one whose control
/// input uses the edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub sign: Sign,
}

impl Edge {
    pub fn new(tail: usize, head: usize, sign: Sign) -> Self {
        Self { tail, head, sign }
    }
}

/// An edge as it appears in a graph document: 1-based endpoints and an
/// integer sign, before any validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RawEdge {
    pub from: i64,
    pub to: i64,
    pub sign: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyGraph,
    NodeOutOfRange { edge: usize, node: i64 },
    InvalidSign { edge: usize, value: i64 },
    SelfLoop { edge: usize, node: usize },
    DuplicateEdge { first: usize, second: usize, tail: usize, head: usize },
    DigonSignAsymmetry { forward: usize, backward: usize, a: usize, b: usize },
}

impl fmt::Display for Violation {
    // Node and edge labels are 1-based here.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::EmptyGraph => f.write_str("graph has no nodes"),
            Violation::NodeOutOfRange { edge, node } => {
                write!(f, "edge e{} references node {node} outside 1..=n", edge + 1)
            }
            Violation::InvalidSign { edge, value } => {
                write!(f, "edge e{} has sign {value}, expected 1 or -1", edge + 1)
            }
            Violation::SelfLoop { edge, node } => {
                write!(f, "self-loop at node {} (edge e{})", node + 1, edge + 1)
            }
            Violation::DuplicateEdge {
                first,
                second,
                tail,
                head,
            } => write!(
                f,
                "duplicate edge ({},{}) at e{} and e{}",
                tail + 1,
                head + 1,
                first + 1,
                second + 1
            ),
            Violation::DigonSignAsymmetry { a, b, .. } => write!(
                f,
                "digon sign asymmetry at ({},{})/({},{})",
                a + 1,
                b + 1,
                b + 1,
                a + 1
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks a raw edge list against the signed digraph invariants: endpoints in
/// range, signs in `{+1, -1}`, no self-loops, no duplicate directed edges and
/// equal signs on both directions of a digon.
pub fn validate(n: usize, edges: &[RawEdge]) -> ValidationReport {
    let mut violations = Vec::new();
    if n == 0 {
        violations.push(Violation::EmptyGraph);
    }
    let mut typed: Vec<Option<Edge>> = Vec::with_capacity(edges.len());
    for (k, raw) in edges.iter().enumerate() {
        let mut good = true;
        for node in [raw.from, raw.to] {
            if node < 1 || node > n as i64 {
                violations.push(Violation::NodeOutOfRange { edge: k, node });
                good = false;
            }
        }
        let sign = Sign::from_i64(raw.sign);
        if sign.is_none() {
            violations.push(Violation::InvalidSign {
                edge: k,
                value: raw.sign,
            });
            good = false;
        }
        typed.push(match (good, sign) {
            (true, Some(sign)) => Some(Edge::new(raw.from as usize - 1, raw.to as usize - 1, sign)),
            _ => None,
        });
    }
    structural_violations(&typed, &mut violations);
    ValidationReport { violations }
}

fn structural_violations(edges: &[Option<Edge>], out: &mut Vec<Violation>) {
    let mut seen: alloc::collections::BTreeMap<(usize, usize), usize> = Default::default();
    for (k, e) in edges.iter().enumerate() {
        let Some(e) = e else { continue };
        if e.tail == e.head {
            out.push(Violation::SelfLoop {
                edge: k,
                node: e.tail,
            });
            continue;
        }
        if let Some(&first) = seen.get(&(e.tail, e.head)) {
            out.push(Violation::DuplicateEdge {
                first,
                second: k,
                tail: e.tail,
                head: e.head,
            });
            continue;
        }
        seen.insert((e.tail, e.head), k);
    }
    for (&(a, b), &k) in &seen {
        if a < b {
            if let Some(&back) = seen.get(&(b, a)) {
                let (ef, eb) = (edges[k].unwrap(), edges[back].unwrap());
                if ef.sign != eb.sign {
                    out.push(Violation::DigonSignAsymmetry {
                        forward: k,
                        backward: back,
                        a,
                        b,
                    });
                }
            }
        }
    }
}

/// A validated signed digraph. The position of an edge in [`edges`] fixes
/// its column in every incidence matrix.
///
/// [`edges`]: SignedDigraph::edges
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedDigraph {
    n: usize,
    edges: Vec<Edge>,
}

impl SignedDigraph {
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self> {
        let mut violations = Vec::new();
        if n == 0 {
            violations.push(Violation::EmptyGraph);
        }
        let mut typed = Vec::with_capacity(edges.len());
        for (k, e) in edges.iter().enumerate() {
            let mut good = true;
            for node in [e.tail, e.head] {
                if node >= n {
                    violations.push(Violation::NodeOutOfRange {
                        edge: k,
                        node: node as i64 + 1,
                    });
                    good = false;
                }
            }
            typed.push(good.then_some(*e));
        }
        structural_violations(&typed, &mut violations);
        if violations.is_empty() {
            Ok(Self { n, edges })
        } else {
            Err(Error::InvalidGraph(ValidationReport { violations }))
        }
    }

    /// Builds a graph from 1-based `(from, to, sign)` records.
    pub fn from_raw(n: usize, edges: &[RawEdge]) -> Result<Self> {
        let report = validate(n, edges);
        if !report.ok() {
            return Err(Error::InvalidGraph(report));
        }
        let edges = edges
            .iter()
            .map(|r| {
                Edge::new(
                    r.from as usize - 1,
                    r.to as usize - 1,
                    Sign::from_i64(r.sign).unwrap(),
                )
            })
            .collect();
        Ok(Self { n, edges })
    }

    /// Shorthand for fixtures: 1-based `(from, to, sign)` triples.
    pub fn from_triples(n: usize, triples: &[(usize, usize, i64)]) -> Result<Self> {
        let raw: Vec<RawEdge> = triples
            .iter()
            .map(|&(from, to, sign)| RawEdge {
                from: from as i64,
                to: to as i64,
                sign,
            })
            .collect();
        Self::from_raw(n, &raw)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn to_raw(&self) -> Vec<RawEdge> {
        self.edges
            .iter()
            .map(|e| RawEdge {
                from: e.tail as i64 + 1,
                to: e.head as i64 + 1,
                sign: e.sign.value() as i64,
            })
            .collect()
    }

    /// Returns a copy with the sign of edge `k` flipped, or the validation
    /// error if that breaks digon symmetry.
    pub fn with_flipped_sign(&self, k: usize) -> Result<Self> {
        let mut edges = self.edges.clone();
        if k >= edges.len() {
            return Err(Error::DimensionMismatch {
                what: "edge index",
                expected: edges.len(),
                found: k,
            });
        }
        edges[k].sign = edges[k].sign.flipped();
        Self::new(self.n, edges)
    }

    /// Out-neighbour lists.
    pub fn successors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.tail].push(e.head);
        }
        adj
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            deg[e.head] += 1;
        }
        deg
    }

    /// Nodes reachable from `sources` along directed edges (sources included).
    pub fn reachable_from(&self, sources: &[usize]) -> Vec<bool> {
        let adj = self.successors();
        let mut seen = vec![false; self.n];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for &s in sources {
            if !seen[s] {
                seen[s] = true;
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    /// Whether the underlying undirected graph is connected.
    pub fn is_weakly_connected(&self) -> bool {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.tail].push(e.head);
            adj[e.head].push(e.tail);
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }
}

/// True iff the condensation has exactly one source component, i.e. some
/// node reaches every node.
pub fn has_directed_spanning_tree(g: &SignedDigraph) -> bool {
    strongly_connected_components(g).sources().len() == 1
}

/// Which connectivity hypothesis a graph satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// A directed spanning tree exists (one leader group).
    SpanningTree,
    /// Several leader groups, every follower reachable from some leader.
    MultiLeader,
}

pub fn regime(g: &SignedDigraph, ls: &LeaderStructure) -> Result<Regime> {
    if ls.groups.len() == 1 {
        Ok(Regime::SpanningTree)
    } else if check_multi_leader_hypothesis(g, ls) {
        Ok(Regime::MultiLeader)
    } else {
        Err(Error::AssumptionViolated)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(from: i64, to: i64, sign: i64) -> RawEdge {
        RawEdge { from, to, sign }
    }

    #[test]
    fn symmetric_digon_is_valid() {
        assert!(validate(2, &[raw(1, 2, 1), raw(2, 1, 1)]).ok());
    }

    #[test]
    fn asymmetric_digon_is_reported() {
        let report = validate(2, &[raw(1, 2, 1), raw(2, 1, -1)]);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(
            alloc::format!("{}", report.violations[0]),
            "digon sign asymmetry at (1,2)/(2,1)"
        );
    }

    #[test]
    fn self_loop_duplicate_range_and_sign() {
        let report = validate(
            3,
            &[raw(1, 1, 1), raw(1, 2, 1), raw(1, 2, 1), raw(4, 1, 1), raw(2, 3, 0)],
        );
        let v = &report.violations;
        assert!(v.contains(&Violation::NodeOutOfRange { edge: 3, node: 4 }));
        assert!(v.contains(&Violation::InvalidSign { edge: 4, value: 0 }));
        assert!(v.contains(&Violation::SelfLoop { edge: 0, node: 0 }));
        assert!(v.contains(&Violation::DuplicateEdge {
            first: 1,
            second: 2,
            tail: 0,
            head: 1
        }));
        assert_eq!(v.len(), 4);
    }

    #[test]
    fn empty_graph_rejected() {
        assert!(!validate(0, &[]).ok());
    }

    #[test]
    fn g1_is_valid_and_has_spanning_tree() {
        let g = SignedDigraph::from_triples(
            5,
            &[(1, 2, -1), (1, 3, 1), (2, 4, 1), (3, 4, 1), (5, 1, 1)],
        )
        .unwrap();
        assert!(has_directed_spanning_tree(&g));
        assert!(g.reachable_from(&[4]).iter().all(|&r| r));
    }

    #[test]
    fn single_node_has_spanning_tree() {
        let g = SignedDigraph::new(1, Vec::new()).unwrap();
        assert!(has_directed_spanning_tree(&g));
    }

    #[test]
    fn flipping_one_side_of_digon_is_rejected() {
        let g = SignedDigraph::from_triples(2, &[(1, 2, 1), (2, 1, 1)]).unwrap();
        assert!(matches!(g.with_flipped_sign(0), Err(Error::InvalidGraph(_))));
    }
}

use alloc::vec;
use alloc::vec::Vec;

use super::SignedDigraph;

/// Per-node `±1` labels with `d_i * d_j = sign` on every edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaugeVector {
    d: Vec<i8>,
}

impl GaugeVector {
    pub fn new(d: Vec<i8>) -> Self {
        Self { d }
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    pub fn get(&self, i: usize) -> i8 {
        self.d[i]
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.d
    }

    /// Nodes labelled `+1`.
    pub fn positive_part(&self) -> Vec<usize> {
        (0..self.d.len()).filter(|&i| self.d[i] > 0).collect()
    }

    /// Nodes labelled `-1`.
    pub fn negative_part(&self) -> Vec<usize> {
        (0..self.d.len()).filter(|&i| self.d[i] < 0).collect()
    }

    /// Whether `d_tail * d_head == sign` on every edge of `g`.
    pub fn is_consistent_with(&self, g: &SignedDigraph) -> bool {
        self.d.len() == g.node_count()
            && g.edges()
                .iter()
                .all(|e| (self.d[e.tail] as i32) * (self.d[e.head] as i32) == e.sign.value())
    }
}

/// Structural balance of `g`, or of the subgraph induced by `nodes`.
///
/// Signs are propagated over the underlying undirected graph; orientation is
/// irrelevant. Returns the gauge on success, with the lowest-indexed node of
/// each connected component set to `+1`. When a node subset is given the
/// gauge still has length `n`, and nodes outside the subset are `+1`.
pub fn is_structurally_balanced(g: &SignedDigraph, nodes: Option<&[usize]>) -> Option<GaugeVector> {
    let n = g.node_count();
    let mut included = vec![nodes.is_none(); n];
    if let Some(nodes) = nodes {
        for &v in nodes {
            included[v] = true;
        }
    }
    let mut adj: Vec<Vec<(usize, i8)>> = vec![Vec::new(); n];
    for e in g.edges() {
        if included[e.tail] && included[e.head] {
            let s = e.sign.value() as i8;
            adj[e.tail].push((e.head, s));
            adj[e.head].push((e.tail, s));
        }
    }
    let mut d = vec![0i8; n];
    let mut stack = Vec::new();
    for start in 0..n {
        if !included[start] || d[start] != 0 {
            continue;
        }
        d[start] = 1;
        stack.push(start);
        while let Some(u) = stack.pop() {
            for &(v, s) in &adj[u] {
                let want = d[u] * s;
                if d[v] == 0 {
                    d[v] = want;
                    stack.push(v);
                } else if d[v] != want {
                    return None;
                }
            }
        }
    }
    for x in d.iter_mut() {
        if *x == 0 {
            *x = 1;
        }
    }
    Some(GaugeVector { d })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g2() -> SignedDigraph {
        SignedDigraph::from_triples(
            9,
            &[
                (1, 2, -1),
                (1, 3, 1),
                (2, 4, 1),
                (3, 4, -1),
                (1, 5, 1),
                (3, 6, -1),
                (7, 1, -1),
                (7, 8, 1),
                (8, 1, -1),
                (9, 3, 1),
            ],
        )
        .unwrap()
    }

    #[test]
    fn g2_partition() {
        let d = is_structurally_balanced(&g2(), None).expect("G2 is balanced");
        assert_eq!(d.positive_part(), alloc::vec![0, 2, 4, 8]);
        assert_eq!(d.negative_part(), alloc::vec![1, 3, 5, 6, 7]);
        assert!(d.is_consistent_with(&g2()));
    }

    #[test]
    fn g1_unbalanced() {
        let g = SignedDigraph::from_triples(
            5,
            &[(1, 2, -1), (1, 3, 1), (2, 4, 1), (3, 4, 1), (5, 1, 1)],
        )
        .unwrap();
        assert!(is_structurally_balanced(&g, None).is_none());
        // Removing node 4 breaks the only unbalanced cycle.
        assert!(is_structurally_balanced(&g, Some(&[0, 1, 2, 4])).is_some());
    }

    #[test]
    fn all_positive_is_trivially_balanced() {
        let g = SignedDigraph::from_triples(3, &[(1, 2, 1), (2, 3, 1), (3, 1, 1)]).unwrap();
        let d = is_structurally_balanced(&g, None).unwrap();
        assert!(d.as_slice().iter().all(|&x| x == 1));
    }

    #[test]
    fn tie_break_per_component() {
        // Two components; the first node of each gets +1.
        let g = SignedDigraph::from_triples(4, &[(2, 1, -1), (4, 3, -1)]).unwrap();
        let d = is_structurally_balanced(&g, None).unwrap();
        assert_eq!(d.as_slice(), &[1, -1, 1, -1]);
    }
}

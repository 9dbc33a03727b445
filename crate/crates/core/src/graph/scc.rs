use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use super::SignedDigraph;

/// SCC partition plus the condensation DAG.
///
/// Components are ordered by their smallest member and members are sorted,
/// so the layout is independent of traversal order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condensation {
    pub components: Vec<Vec<usize>>,
    pub component_of: Vec<usize>,
    /// `(a, b)` iff some edge runs from component `a` to component `b != a`.
    pub edges: BTreeSet<(usize, usize)>,
}

impl Condensation {
    /// Components without incoming condensation edges.
    pub fn sources(&self) -> Vec<usize> {
        let mut has_in = vec![false; self.components.len()];
        for &(_, b) in &self.edges {
            has_in[b] = true;
        }
        (0..self.components.len()).filter(|&c| !has_in[c]).collect()
    }
}

/// Tarjan's algorithm, iterative so deep graphs cannot overflow the stack.
pub fn strongly_connected_components(g: &SignedDigraph) -> Condensation {
    let n = g.node_count();
    let adj = g.successors();
    const UNVISITED: usize = usize::MAX;
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut raw_components: Vec<Vec<usize>> = Vec::new();
    let mut next_index = 0;

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        // (node, next child position)
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos < adj[v].len() {
                let w = adj[v][*pos];
                *pos += 1;
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    raw_components.push(comp);
                }
            }
        }
    }

    raw_components.sort_by_key(|c| c[0]);
    let mut component_of = vec![0; n];
    for (c, members) in raw_components.iter().enumerate() {
        for &v in members {
            component_of[v] = c;
        }
    }
    let edges = g
        .edges()
        .iter()
        .map(|e| (component_of[e.tail], component_of[e.head]))
        .filter(|(a, b)| a != b)
        .collect();
    Condensation {
        components: raw_components,
        component_of,
        edges,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn g0_components() {
        let g = SignedDigraph::from_triples(
            9,
            &[
                (1, 2, -1),
                (3, 1, 1),
                (2, 4, 1),
                (4, 3, -1),
                (5, 6, 1),
                (6, 7, 1),
                (7, 5, -1),
                (2, 9, -1),
                (5, 9, 1),
                (8, 9, -1),
            ],
        )
        .unwrap();
        let c = strongly_connected_components(&g);
        assert_eq!(
            c.components,
            vec![vec![0, 1, 2, 3], vec![4, 5, 6], vec![7], vec![8]]
        );
        assert_eq!(c.sources(), vec![0, 1, 2]);
        assert!(c.edges.contains(&(0, 3)));
        assert!(c.edges.contains(&(1, 3)));
        assert!(c.edges.contains(&(2, 3)));
        assert_eq!(c.edges.len(), 3);
    }

    #[test]
    fn single_node() {
        let g = SignedDigraph::new(1, Vec::new()).unwrap();
        let c = strongly_connected_components(&g);
        assert_eq!(c.components, vec![vec![0]]);
    }

    #[test]
    fn long_path_does_not_recurse() {
        let n = 20_000;
        let edges = (0..n - 1)
            .map(|i| super::super::Edge::new(i, i + 1, super::super::Sign::Positive))
            .collect();
        let g = SignedDigraph::new(n, edges).unwrap();
        let c = strongly_connected_components(&g);
        assert_eq!(c.components.len(), n);
        assert_eq!(c.sources(), vec![0]);
    }
}

//! Permutation ⇄ reducible permutation flow-graph codec.
//!
//! Each element `i` of the permutation becomes a body node `u_i` with two
//! outpointers: a list pointer to `u_{i-1}` and a max-didomination pointer to
//! `u_{p(i)}`, where `p(i)` is the nearest element left of `i` that is
//! larger than `i` (or the header `n+1` when there is none). `p` is computed
//! with one monotonic-stack pass; [`build_didomination_dag`] is the
//! quadratic reference used to cross-check it.
//!
//! Decoding drops the list pointers, reverses the forward pointers into a
//! tree rooted at the header and reads the permutation off a preorder walk
//! that visits children smallest label first.

use crate::analysis::validate_rpg;
use crate::graph::{Edge, FlowGraph, GraphError};
use crate::perm::Permutation;

/// `p(i)` for every element `i` of a permutation of `1..=n`; the header is
/// `n+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxDidominatorMap(Vec<usize>);

impl MaxDidominatorMap {
    /// `p(element)`.
    pub fn get(&self, element: usize) -> usize {
        self.0[element - 1]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `(i, p(i))` for `i = 1..=n`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.iter().enumerate().map(|(idx, &m)| (idx + 1, m))
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }
}

/// Nearest-greater-to-the-left via a monotonic stack seeded with `n+1`.
pub fn compute_max_didominators(p: &Permutation) -> MaxDidominatorMap {
    let n = p.len();
    let mut out = vec![0; n];
    let mut stack = Vec::with_capacity(n + 1);
    stack.push(n + 1);
    for &v in p.iter() {
        while let Some(&top) = stack.last() {
            if top >= v {
                break;
            }
            stack.pop();
        }
        // `n+1` is never popped.
        out[v - 1] = *stack.last().expect("sentinel stays on the stack");
        stack.push(v);
    }
    MaxDidominatorMap(out)
}

/// Directed acyclic graph of the didomination relation: vertices `0` (`t`),
/// `1..=n`, `n+1` (`s`); an edge `(i, j)` whenever `i` directly dominates
/// `j`, plus `s` to every body vertex without predecessors and every body
/// vertex without successors to `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DidominationDag {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl DidominationDag {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn source(&self) -> usize {
        self.n + 1
    }

    pub fn sink(&self) -> usize {
        0
    }

    /// Sorted edge list.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Edges between body vertices only.
    pub fn body_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let s = self.source();
        self.edges
            .iter()
            .copied()
            .filter(move |&(a, b)| a != s && b != 0)
    }

    /// Body vertices that `i` directly dominates.
    pub fn didominated_by(&self, i: usize) -> Vec<usize> {
        self.body_edges()
            .filter(|&(a, _)| a == i)
            .map(|(_, b)| b)
            .collect()
    }

    pub fn predecessors(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter(|&&(_, b)| b == v)
            .map(|&(a, _)| a)
            .collect()
    }

    /// Largest-labeled predecessor of each body vertex, `s` counting as
    /// `n+1`. Index `i - 1` holds the value for vertex `i`.
    pub fn max_predecessors(&self) -> Vec<usize> {
        let mut best = vec![0; self.n];
        for &(a, b) in &self.edges {
            if (1..=self.n).contains(&b) {
                best[b - 1] = best[b - 1].max(a);
            }
        }
        best
    }

    pub fn is_acyclic(&self) -> bool {
        let size = self.n + 2;
        let mut indeg = vec![0usize; size];
        let mut succ = vec![Vec::new(); size];
        for &(a, b) in &self.edges {
            indeg[b] += 1;
            succ[a].push(b);
        }
        let mut ready: Vec<usize> = (0..size).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = ready.pop() {
            seen += 1;
            for &w in &succ[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    ready.push(w);
                }
            }
        }
        seen == size
    }
}

/// Builds the didomination DAG directly from the definition. Quadratic; for
/// diagnostics and cross-checks only.
///
/// `i` directly dominates `j` iff `i > j`, `i` precedes `j`, and no element
/// strictly between them in position has a value strictly between them.
/// Scanning left from `j` while tracking the smallest value above `j` seen so
/// far decides this for every `i` in one pass per `j`.
pub fn build_didomination_dag(p: &Permutation) -> DidominationDag {
    let n = p.len();
    let values = p.as_slice();
    let positions = p.positions();
    let mut edges = Vec::new();
    let mut has_pred = vec![false; n + 1];
    let mut has_succ = vec![false; n + 1];
    for j in 1..=n {
        let mut bound = usize::MAX;
        for &v in values[..positions[j - 1] - 1].iter().rev() {
            if v > j && v < bound {
                edges.push((v, j));
                has_succ[v] = true;
                has_pred[j] = true;
                bound = v;
            }
        }
    }
    for v in 1..=n {
        if !has_pred[v] {
            edges.push((n + 1, v));
        }
        if !has_succ[v] {
            edges.push((v, 0));
        }
    }
    edges.sort_unstable();
    DidominationDag { n, edges }
}

/// A codec flow-graph `F[π]`: footer `u_0`, body `u_1..u_n`, header
/// `u_{n+1}`. List pointers are implied by the labels; only the forward
/// targets are stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReduciblePermutationGraph {
    forward: Vec<usize>,
}

impl ReduciblePermutationGraph {
    /// `targets[i - 1]` is the forward target of `u_i`; each must satisfy
    /// `i < target <= n + 1`.
    pub fn from_forward_targets(targets: Vec<usize>) -> Result<Self, GraphError> {
        let n = targets.len();
        if n == 0 {
            return Err(GraphError::EmptyBody);
        }
        for (idx, &m) in targets.iter().enumerate() {
            if m <= idx + 1 || m > n + 1 {
                return Err(GraphError::BadForwardTarget {
                    node: idx + 1,
                    target: m,
                    max: n + 1,
                });
            }
        }
        Ok(ReduciblePermutationGraph { forward: targets })
    }

    pub fn n(&self) -> usize {
        self.forward.len()
    }

    pub fn node_count(&self) -> usize {
        self.n() + 2
    }

    pub fn header(&self) -> usize {
        self.n() + 1
    }

    pub fn footer(&self) -> usize {
        0
    }

    pub fn edge_count(&self) -> usize {
        2 * self.n() + 1
    }

    /// Forward target of body node `u_i`.
    pub fn forward_target(&self, i: usize) -> usize {
        self.forward[i - 1]
    }

    pub fn forward_targets(&self) -> &[usize] {
        &self.forward
    }

    /// `(u_{i+1}, u_i)` for `i = n` down to `0`.
    pub fn list_edges(&self) -> impl Iterator<Item = Edge> {
        (1..=self.header())
            .rev()
            .map(|from| Edge::list(from, from - 1))
    }

    /// `(u_i, u_{p(i)})` for `i = 1..=n`.
    pub fn forward_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.forward
            .iter()
            .enumerate()
            .map(|(idx, &m)| Edge::forward(idx + 1, m))
    }

    /// All edges in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.list_edges().chain(self.forward_edges())
    }

    pub fn to_flow_graph(&self) -> FlowGraph {
        FlowGraph::new(self.n(), self.edges().collect()).expect("labels in range by construction")
    }

    pub fn decoding_tree(&self) -> DecodingTree {
        DecodingTree::from_graph(self)
    }
}

impl TryFrom<&FlowGraph> for ReduciblePermutationGraph {
    type Error = GraphError;

    /// Accepts the graph iff [`validate_rpg`] finds no violation.
    fn try_from(g: &FlowGraph) -> Result<Self, Self::Error> {
        let report = validate_rpg(g);
        if !report.ok() {
            return Err(GraphError::Invalid(report));
        }
        let mut forward = vec![0; g.n()];
        for e in g.edges() {
            if (1..=g.n()).contains(&e.from) && e.to > e.from {
                forward[e.from - 1] = e.to;
            }
        }
        ReduciblePermutationGraph::from_forward_targets(forward)
    }
}

impl From<&ReduciblePermutationGraph> for FlowGraph {
    fn from(g: &ReduciblePermutationGraph) -> Self {
        g.to_flow_graph()
    }
}

/// Forward pointers reversed: a tree rooted at the header whose children
/// lists are sorted by label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodingTree {
    n: usize,
    children: Vec<Vec<usize>>,
}

impl DecodingTree {
    fn from_graph(g: &ReduciblePermutationGraph) -> Self {
        let n = g.n();
        let mut children = vec![Vec::new(); n + 2];
        // Ascending i keeps every child list sorted.
        for (i, &m) in (1..=n).zip(g.forward_targets()) {
            children[m].push(i);
        }
        DecodingTree { n, children }
    }

    pub fn root(&self) -> usize {
        self.n + 1
    }

    pub fn children(&self, node: usize) -> &[usize] {
        &self.children[node]
    }

    /// Nodes in preorder, smallest child first, root included.
    pub fn preorder(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.n + 1);
        let mut stack = vec![self.root()];
        while let Some(v) = stack.pop() {
            order.push(v);
            stack.extend(self.children[v].iter().rev());
        }
        order
    }
}

pub fn encode_sip_to_rpg(p: &Permutation) -> ReduciblePermutationGraph {
    ReduciblePermutationGraph {
        forward: compute_max_didominators(p).into_vec(),
    }
}

/// Recovers the permutation from a codec graph. Every valid graph decodes,
/// whether or not the result is self-inverting.
pub fn decode_rpg_to_sip(g: &ReduciblePermutationGraph) -> Permutation {
    let mut order = g.decoding_tree().preorder();
    order.remove(0);
    Permutation::from_vec_unchecked(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn stack_trace_matches_hand_trace() {
        let p = compute_max_didominators(&perm(&[5, 6, 9, 8, 1, 2, 7, 4, 3]));
        let expected = [
            (5, 10),
            (6, 10),
            (9, 10),
            (8, 9),
            (1, 8),
            (2, 8),
            (7, 8),
            (4, 7),
            (3, 4),
        ];
        for (i, m) in expected {
            assert_eq!(p.get(i), m, "p({i})");
        }
        assert_eq!(compute_max_didominators(&perm(&[1])).into_vec(), vec![2]);
        let p = compute_max_didominators(&perm(&[2, 1, 3]));
        assert_eq!((p.get(2), p.get(1), p.get(3)), (4, 2, 4));
    }

    #[test]
    fn didomination_example() {
        let dag = build_didomination_dag(&perm(&[8, 3, 2, 7, 1, 9, 6, 5, 4]));
        let mut d = dag.didominated_by(7);
        d.sort_unstable();
        assert_eq!(d, vec![1, 6]);
        assert!(dag.is_acyclic());
    }

    #[test]
    fn didomination_small_cases() {
        let dag = build_didomination_dag(&perm(&[1, 2, 3]));
        assert_eq!(dag.body_edges().count(), 0);
        // isolated vertices get both an s-edge and a t-edge
        assert_eq!(
            dag.edges(),
            &[(1, 0), (2, 0), (3, 0), (4, 1), (4, 2), (4, 3)]
        );

        let dag = build_didomination_dag(&perm(&[2, 1, 3]));
        assert_eq!(dag.body_edges().collect::<Vec<_>>(), vec![(2, 1)]);
        assert_eq!(dag.edges(), &[(1, 0), (2, 1), (3, 0), (4, 2), (4, 3)]);
        assert_eq!(dag.max_predecessors(), vec![2, 4, 4]);
    }

    #[test]
    fn encode_small() {
        let g = encode_sip_to_rpg(&perm(&[2, 1, 3]));
        assert_eq!(g.forward_targets(), &[2, 4, 4]);
        let list: Vec<_> = g.list_edges().map(|e| (e.from, e.to)).collect();
        assert_eq!(list, vec![(4, 3), (3, 2), (2, 1), (1, 0)]);

        let g = encode_sip_to_rpg(&perm(&[1]));
        assert_eq!(
            g.edges().collect::<Vec<_>>(),
            vec![Edge::list(2, 1), Edge::list(1, 0), Edge::forward(1, 2)]
        );
    }

    #[test]
    fn encode_worked_example() {
        let g = encode_sip_to_rpg(&perm(&[5, 6, 9, 8, 1, 2, 7, 4, 3]));
        let fwd: Vec<_> = g.forward_edges().map(|e| (e.from, e.to)).collect();
        assert_eq!(
            fwd,
            vec![
                (1, 8),
                (2, 8),
                (3, 4),
                (4, 7),
                (5, 10),
                (6, 10),
                (7, 8),
                (8, 9),
                (9, 10)
            ]
        );
        assert_eq!(g.edge_count(), 19);
    }

    #[test]
    fn decode_examples() {
        for p in [&[2, 1, 3][..], &[5, 6, 9, 8, 1, 2, 7, 4, 3], &[1]] {
            let g = encode_sip_to_rpg(&perm(p));
            assert_eq!(decode_rpg_to_sip(&g).as_slice(), p);
        }
        let tree = encode_sip_to_rpg(&perm(&[2, 1, 3])).decoding_tree();
        assert_eq!(tree.children(4), &[2, 3]);
        assert_eq!(tree.children(2), &[1]);
        assert_eq!(tree.preorder(), vec![4, 2, 1, 3]);
    }

    #[test]
    fn forward_targets_are_checked() {
        assert!(ReduciblePermutationGraph::from_forward_targets(vec![]).is_err());
        assert!(ReduciblePermutationGraph::from_forward_targets(vec![1]).is_err());
        assert!(ReduciblePermutationGraph::from_forward_targets(vec![3]).is_err());
        assert!(ReduciblePermutationGraph::from_forward_targets(vec![3, 3]).is_ok());
    }
}

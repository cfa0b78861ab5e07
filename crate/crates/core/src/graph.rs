//! Labeled and unlabeled directed graphs that may carry damage.
//!
//! [`FlowGraph`] is the permissive, labeled view used wherever a graph may
//! have been attacked: nodes are `0..=n+1`, edges are free-form. The strict
//! codec type is [`crate::rpg::ReduciblePermutationGraph`].

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use crate::analysis::RpgValidationReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge ({from}, {to}) references a label outside 0..={max}")]
    LabelOutOfRange { from: usize, to: usize, max: usize },
    #[error("body node u{node} has forward target {target}, expected {node} < target <= {max}")]
    BadForwardTarget {
        node: usize,
        target: usize,
        max: usize,
    },
    #[error("graph has no body nodes")]
    EmptyBody,
    #[error("not a reducible permutation graph: {0}")]
    Invalid(RpgValidationReport),
    #[error("expected exactly one node with outdegree {outdegree}, found {found}")]
    OutdegreeProfile { outdegree: usize, found: usize },
    #[error("node {node} has outdegree {outdegree}; codec graphs have outdegree at most 2")]
    OutdegreeTooHigh { node: u64, outdegree: usize },
    #[error("label walk stalled at node {node} after {labeled} of {total} nodes")]
    WalkStalled {
        node: u64,
        labeled: usize,
        total: usize,
    },
    #[error("label walk is ambiguous at node {node}: {choices} unvisited successors")]
    WalkAmbiguous { node: u64, choices: usize },
    #[error("discovery order is not a Hamiltonian path: {0}")]
    NotHamiltonian(String),
    #[error("forward pointer damage at u{node}: {reason}")]
    ForwardDamage { node: usize, reason: String },
    #[error("self-loop on node {0}")]
    SelfLoop(u64),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(u64, u64),
    #[error("graph has no edges")]
    NoEdges,
}

/// Which of the two outpointers an edge claims to be.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeKind {
    /// `(u_{i+1}, u_i)`.
    List,
    /// Max-didomination pointer `(u_i, u_m)`, `m > i`.
    Forward,
}

impl EdgeKind {
    pub fn tag(self) -> char {
        match self {
            EdgeKind::List => 'L',
            EdgeKind::Forward => 'F',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub kind: EdgeKind,
}

impl Edge {
    pub fn list(from: usize, to: usize) -> Self {
        Edge {
            from,
            to,
            kind: EdgeKind::List,
        }
    }

    pub fn forward(from: usize, to: usize) -> Self {
        Edge {
            from,
            to,
            kind: EdgeKind::Forward,
        }
    }

    pub fn reversed(self) -> Self {
        Edge {
            from: self.to,
            to: self.from,
            kind: self.kind,
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u{}->u{} ({})", self.from, self.to, self.kind.tag())
    }
}

/// A labeled graph on nodes `0..=n+1` (footer `0`, header `n+1`) with an
/// arbitrary edge list. Edge kind tags are carried along but structural
/// checks only look at labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowGraph {
    n: usize,
    edges: Vec<Edge>,
}

impl FlowGraph {
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self, GraphError> {
        let max = n + 1;
        if let Some(e) = edges.iter().find(|e| e.from > max || e.to > max) {
            return Err(GraphError::LabelOutOfRange {
                from: e.from,
                to: e.to,
                max,
            });
        }
        Ok(FlowGraph { n, edges })
    }

    /// Number of body nodes.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn node_count(&self) -> usize {
        self.n + 2
    }

    pub fn header(&self) -> usize {
        self.n + 1
    }

    pub fn footer(&self) -> usize {
        0
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edges_mut(&mut self) -> &mut Vec<Edge> {
        &mut self.edges
    }

    pub fn into_edges(self) -> Vec<Edge> {
        self.edges
    }

    /// Outgoing targets per node, duplicates kept, in edge-list order.
    pub fn successors(&self) -> Vec<Vec<usize>> {
        let mut succ = vec![Vec::new(); self.node_count()];
        for e in &self.edges {
            succ[e.from].push(e.to);
        }
        succ
    }

    pub fn outdegrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.node_count()];
        for e in &self.edges {
            deg[e.from] += 1;
        }
        deg
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.edges.iter().any(|e| e.from == from && e.to == to)
    }

    /// Edge list in the canonical file order: list edges by descending
    /// source, then forward edges by ascending source.
    pub fn canonical_edges(&self) -> Vec<Edge> {
        let mut edges = self.edges.clone();
        edges.sort_by(|a, b| {
            a.kind.cmp(&b.kind).then_with(|| match a.kind {
                EdgeKind::List => b.from.cmp(&a.from).then(b.to.cmp(&a.to)),
                EdgeKind::Forward => a.from.cmp(&b.from).then(a.to.cmp(&b.to)),
            })
        });
        edges
    }

    /// Forgets the labels; node ids become the old labels. Isolated nodes
    /// are not representable and drop out.
    pub fn strip_labels(&self) -> UnlabeledGraph {
        let edges: Vec<(u64, u64)> = self
            .edges
            .iter()
            .map(|e| (e.from as u64, e.to as u64))
            .collect();
        let node_count = edges
            .iter()
            .flat_map(|&(a, b)| [a, b])
            .collect::<BTreeSet<_>>()
            .len();
        UnlabeledGraph { node_count, edges }
    }
}

/// A graph whose node ids carry no codec meaning.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnlabeledGraph {
    node_count: usize,
    edges: Vec<(u64, u64)>,
}

impl UnlabeledGraph {
    /// Nodes are the ids mentioned by the edges. Rejects an empty edge list,
    /// self-loops and repeated edges.
    pub fn new(edges: Vec<(u64, u64)>) -> Result<Self, GraphError> {
        if edges.is_empty() {
            return Err(GraphError::NoEdges);
        }
        let mut seen = HashSet::with_capacity(edges.len());
        let mut nodes = BTreeSet::new();
        for &(a, b) in &edges {
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            if !seen.insert((a, b)) {
                return Err(GraphError::DuplicateEdge(a, b));
            }
            nodes.insert(a);
            nodes.insert(b);
        }
        Ok(UnlabeledGraph {
            node_count: nodes.len(),
            edges,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edges(&self) -> &[(u64, u64)] {
        &self.edges
    }

    /// Sorted distinct node ids.
    pub fn nodes(&self) -> Vec<u64> {
        let set: BTreeSet<u64> = self.edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        set.into_iter().collect()
    }

    /// Renames every node through `f`, which must be injective.
    pub fn relabel(&self, mut f: impl FnMut(u64) -> u64) -> UnlabeledGraph {
        UnlabeledGraph {
            node_count: self.node_count,
            edges: self.edges.iter().map(|&(a, b)| (f(a), f(b))).collect(),
        }
    }

    /// Edge multiset in sorted order, for comparisons that ignore list order.
    pub fn sorted_edges(&self) -> Vec<(u64, u64)> {
        let mut e = self.edges.clone();
        e.sort_unstable();
        e
    }
}

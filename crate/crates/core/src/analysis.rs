//! Structural checks and recovery on possibly damaged flow-graphs.
//!
//! Every body node of a codec graph has exactly two outpointers (list and
//! forward), the header has one and the footer none. Any single edge edit
//! breaks that outdegree profile somewhere, which is what [`validate_rpg`]
//! reports. List pointers are fully determined by the labels, so they can be
//! rebuilt; forward pointers carry the payload and cannot.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::graph::{Edge, FlowGraph, GraphError, UnlabeledGraph};
use crate::rpg::ReduciblePermutationGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ViolationKind {
    HeaderOutdegree,
    FooterOutdegree,
    BodyOutdegree,
    MissingListPointer,
    ForwardPointerNotHigher,
    DuplicateEdge,
    UnreachableNode,
}

impl ViolationKind {
    pub fn name(self) -> &'static str {
        match self {
            ViolationKind::HeaderOutdegree => "header-outdegree",
            ViolationKind::FooterOutdegree => "footer-outdegree",
            ViolationKind::BodyOutdegree => "body-outdegree",
            ViolationKind::MissingListPointer => "missing-list-pointer",
            ViolationKind::ForwardPointerNotHigher => "forward-pointer-not-higher",
            ViolationKind::DuplicateEdge => "duplicate-edge",
            ViolationKind::UnreachableNode => "unreachable-node",
        }
    }
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub node: usize,
    pub kind: ViolationKind,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u{}: {} ({})", self.node, self.kind, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RpgValidationReport {
    pub violations: Vec<Violation>,
}

impl RpgValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, node: usize, kind: ViolationKind) -> bool {
        self.violations
            .iter()
            .any(|v| v.node == node && v.kind == kind)
    }

    pub fn kinds(&self) -> Vec<ViolationKind> {
        let mut k: Vec<_> = self.violations.iter().map(|v| v.kind).collect();
        k.sort_unstable();
        k.dedup();
        k
    }
}

impl fmt::Display for RpgValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            return f.write_str("ok");
        }
        for (idx, v) in self.violations.iter().enumerate() {
            if idx > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

pub fn validate_rpg(g: &FlowGraph) -> RpgValidationReport {
    let n = g.n();
    let header = g.header();
    let succ = g.successors();
    let mut violations = Vec::new();
    let mut push = |node, kind, detail: String| violations.push(Violation { node, kind, detail });

    let mut seen = HashSet::with_capacity(g.edges().len());
    for e in g.edges() {
        if !seen.insert((e.from, e.to)) {
            push(
                e.from,
                ViolationKind::DuplicateEdge,
                format!("u{}->u{}", e.from, e.to),
            );
        }
    }

    let out = &succ[header];
    if out.len() != 1 {
        push(
            header,
            ViolationKind::HeaderOutdegree,
            format!("outdegree {}", out.len()),
        );
    }
    if !out.contains(&n) {
        push(
            header,
            ViolationKind::MissingListPointer,
            format!("no edge to u{n}"),
        );
    }

    if !succ[0].is_empty() {
        push(
            0,
            ViolationKind::FooterOutdegree,
            format!("outdegree {}", succ[0].len()),
        );
    }

    for (i, out) in succ.iter().enumerate().take(n + 1).skip(1) {
        if out.len() != 2 {
            push(
                i,
                ViolationKind::BodyOutdegree,
                format!("outdegree {}", out.len()),
            );
        }
        if !out.contains(&(i - 1)) {
            push(
                i,
                ViolationKind::MissingListPointer,
                format!("no edge to u{}", i - 1),
            );
        }
        for &m in out.iter().filter(|&&m| m != i - 1 && m <= i) {
            push(
                i,
                ViolationKind::ForwardPointerNotHigher,
                format!("edge to u{m}"),
            );
        }
    }

    let mut reached = vec![false; g.node_count()];
    let mut stack = vec![header];
    reached[header] = true;
    while let Some(v) = stack.pop() {
        for &w in &succ[v] {
            if !std::mem::replace(&mut reached[w], true) {
                stack.push(w);
            }
        }
    }
    for (v, _) in reached.iter().enumerate().filter(|(_, r)| !**r) {
        push(
            v,
            ViolationKind::UnreachableNode,
            "not reachable from header".into(),
        );
    }

    RpgValidationReport { violations }
}

/// All `n+2` labels in discovery order, header first, footer last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HamiltonianPath(Vec<usize>);

impl HamiltonianPath {
    pub fn order(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }
}

/// Order in which DFS tries the successors of a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NeighborOrder {
    #[default]
    Ascending,
    Descending,
}

pub fn unique_hamiltonian_path(g: &FlowGraph) -> Result<HamiltonianPath, GraphError> {
    unique_hamiltonian_path_with(g, NeighborOrder::Ascending)
}

/// DFS from the unique outdegree-one node; the discovery order must itself
/// be a Hamiltonian path.
pub fn unique_hamiltonian_path_with(
    g: &FlowGraph,
    order: NeighborOrder,
) -> Result<HamiltonianPath, GraphError> {
    let mut succ = g.successors();
    for s in &mut succ {
        s.sort_unstable();
        s.dedup();
        if order == NeighborOrder::Descending {
            s.reverse();
        }
    }
    let starts: Vec<usize> = (0..g.node_count())
        .filter(|&v| succ[v].len() == 1)
        .collect();
    let [start] = starts[..] else {
        return Err(GraphError::OutdegreeProfile {
            outdegree: 1,
            found: starts.len(),
        });
    };

    let mut visited = vec![false; g.node_count()];
    let mut discovery = Vec::with_capacity(g.node_count());
    let mut stack = vec![(start, 0usize)];
    visited[start] = true;
    discovery.push(start);
    while let Some((v, next)) = stack.last_mut() {
        let v = *v;
        match succ[v].get(*next) {
            Some(&w) => {
                *next += 1;
                if !visited[w] {
                    visited[w] = true;
                    discovery.push(w);
                    stack.push((w, 0));
                }
            }
            None => {
                stack.pop();
            }
        }
    }

    if discovery.len() != g.node_count() {
        return Err(GraphError::NotHamiltonian(format!(
            "reached {} of {} nodes",
            discovery.len(),
            g.node_count()
        )));
    }
    if let Some(w) = discovery.windows(2).find(|w| !succ[w[0]].contains(&w[1])) {
        return Err(GraphError::NotHamiltonian(format!(
            "no edge u{}->u{}",
            w[0], w[1]
        )));
    }
    Ok(HamiltonianPath(discovery))
}

/// Reassigns codec labels to a graph whose labels were stripped or
/// scrambled.
pub fn restore_labels(g: &UnlabeledGraph) -> Result<ReduciblePermutationGraph, GraphError> {
    restore_labels_with_mapping(g).map(|(rpg, _)| rpg)
}

/// Like [`restore_labels`], also returning the `id -> label` assignment.
///
/// The footer is the only sink and the header the only outdegree-one node.
/// Walking from the header, every node has exactly one successor that has
/// not been labeled yet (its forward pointer always targets an
/// already-labeled, higher node), so labels `n+1, n, …, 0` follow the walk.
pub fn restore_labels_with_mapping(
    g: &UnlabeledGraph,
) -> Result<(ReduciblePermutationGraph, HashMap<u64, usize>), GraphError> {
    let ids = g.nodes();
    let total = ids.len();
    let index: HashMap<u64, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let mut succ = vec![Vec::new(); total];
    for &(a, b) in g.edges() {
        succ[index[&a]].push(index[&b]);
    }

    for (v, s) in succ.iter().enumerate() {
        if s.len() > 2 {
            return Err(GraphError::OutdegreeTooHigh {
                node: ids[v],
                outdegree: s.len(),
            });
        }
    }
    let with_degree =
        |d: usize| -> Vec<usize> { (0..total).filter(|&v| succ[v].len() == d).collect() };
    let sinks = with_degree(0);
    if sinks.len() != 1 {
        return Err(GraphError::OutdegreeProfile {
            outdegree: 0,
            found: sinks.len(),
        });
    }
    let heads = with_degree(1);
    if heads.len() != 1 {
        return Err(GraphError::OutdegreeProfile {
            outdegree: 1,
            found: heads.len(),
        });
    }
    if total < 3 {
        return Err(GraphError::EmptyBody);
    }

    let mut label = vec![usize::MAX; total];
    let mut next_label = total - 1;
    let mut current = heads[0];
    label[current] = next_label;
    while current != sinks[0] {
        let fresh: Vec<usize> = succ[current]
            .iter()
            .copied()
            .filter(|&w| label[w] == usize::MAX)
            .collect();
        current = match fresh[..] {
            [w] => w,
            [] => {
                return Err(GraphError::WalkStalled {
                    node: ids[current],
                    labeled: total - next_label,
                    total,
                })
            }
            _ => {
                return Err(GraphError::WalkAmbiguous {
                    node: ids[current],
                    choices: fresh.len(),
                })
            }
        };
        next_label -= 1;
        label[current] = next_label;
    }
    if next_label != 0 {
        return Err(GraphError::WalkStalled {
            node: ids[current],
            labeled: total - next_label,
            total,
        });
    }

    let edges = g
        .edges()
        .iter()
        .map(|&(a, b)| {
            let (from, to) = (label[index[&a]], label[index[&b]]);
            if to + 1 == from {
                Edge::list(from, to)
            } else {
                Edge::forward(from, to)
            }
        })
        .collect();
    let labeled = FlowGraph::new(total - 2, edges)?;
    let rpg = ReduciblePermutationGraph::try_from(&labeled)?;
    let mapping = ids.iter().zip(&label).map(|(&id, &l)| (id, l)).collect();
    Ok((rpg, mapping))
}

/// What [`repair_list_pointers`] changed.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RepairReport {
    /// Canonical list edges that were absent and have been restored.
    pub missing: Vec<(usize, usize)>,
    /// List-shaped edges that were dropped (reversed or repeated pointers).
    pub extra: Vec<(usize, usize)>,
}

impl RepairReport {
    pub fn is_empty(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }
}

impl fmt::Display for RepairReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |edges: &[(usize, usize)]| {
            edges
                .iter()
                .map(|(a, b)| format!("u{a}->u{b}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        write!(
            f,
            "restored [{}] removed [{}]",
            show(&self.missing),
            show(&self.extra)
        )
    }
}

/// Rebuilds every list pointer from the labels. The forward pointers must be
/// intact: each body node needs exactly one outgoing edge to a higher label,
/// ignoring a reversed list pointer to its successor `u_{i+1}`.
pub fn repair_list_pointers(
    g: &FlowGraph,
) -> Result<(ReduciblePermutationGraph, RepairReport), GraphError> {
    let n = g.n();
    if n == 0 {
        return Err(GraphError::EmptyBody);
    }
    let header = g.header();
    let succ = g.successors();
    let damage = |node: usize, reason: String| GraphError::ForwardDamage { node, reason };

    if let Some(&m) = succ[header].iter().find(|&&m| m != n) {
        return Err(damage(header, format!("header points to u{m}")));
    }
    if let Some(&m) = succ[0].iter().find(|&&m| m != 1) {
        return Err(damage(0, format!("footer points to u{m}")));
    }

    let mut forward = Vec::with_capacity(n);
    for (i, out) in succ.iter().enumerate().take(n + 1).skip(1) {
        if let Some(&m) = out.iter().find(|&&m| (m < i && m != i - 1) || m == i) {
            return Err(damage(i, format!("edge to lower label u{m}")));
        }
        let mut higher: Vec<usize> = out.iter().copied().filter(|&m| m > i).collect();
        higher.sort_unstable();
        higher.dedup();
        let target = match higher[..] {
            [m] => m,
            [a, b] if a == i + 1 => b,
            [] => return Err(damage(i, "no forward pointer".into())),
            _ => return Err(damage(i, format!("competing forward targets {higher:?}"))),
        };
        forward.push(target);
    }
    let rpg = ReduciblePermutationGraph::from_forward_targets(forward)?;

    // Multiset difference between the damaged edges and the rebuilt graph.
    let mut expected: HashMap<(usize, usize), usize> = HashMap::new();
    for e in rpg.edges() {
        *expected.entry((e.from, e.to)).or_default() += 1;
    }
    let mut report = RepairReport::default();
    for e in g.edges() {
        match expected.get_mut(&(e.from, e.to)) {
            Some(c) if *c > 0 => *c -= 1,
            _ => report.extra.push((e.from, e.to)),
        }
    }
    for e in rpg.list_edges() {
        if expected[&(e.from, e.to)] > 0 {
            report.missing.push((e.from, e.to));
        }
    }
    Ok((rpg, report))
}

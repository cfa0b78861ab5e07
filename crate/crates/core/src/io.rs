//! Text formats: permutations, labeled graphs, unlabeled edge lists, DOT.
//!
//! ```text
//! RPG 1          EDGES 3        digraph rpg {
//! 2 1 L          70 40            ...
//! 1 0 L          40 90          }
//! 1 2 F          40 70
//! ```
//!
//! All formats are UTF-8 with LF line endings and single-space separators.
//! Writers are canonical: equal inputs produce identical bytes.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Edge, EdgeKind, FlowGraph, GraphError, UnlabeledGraph};
use crate::rpg::ReduciblePermutationGraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("empty input")]
    Empty,
    #[error("line 1: expected `{expected} <count>`, got {got:?}")]
    MalformedHeader { expected: &'static str, got: String },
    #[error("line {line}: malformed record {text:?}")]
    MalformedRecord { line: usize, text: String },
    #[error("line {line}: label out of range 0..={max}")]
    LabelOutOfRange { line: usize, max: usize },
    #[error("line {line}: duplicate edge {from} {to}")]
    DuplicateEdge { line: usize, from: u64, to: u64 },
    #[error("line {line}: self-loop on {node}")]
    SelfLoop { line: usize, node: u64 },
    #[error("node {node}: {reason}")]
    EdgeKindArity { node: usize, reason: String },
    #[error("edge list is empty")]
    NoEdges,
    #[error("header declares {declared} nodes, edges mention {found}")]
    NodeCount { declared: usize, found: usize },
    #[error("not a permutation line: {0:?}")]
    MalformedPermutation(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// `5 6 9 8 1 2 7 4 3\n`.
pub fn format_permutation(values: &[usize]) -> String {
    let mut s = values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ");
    s.push('\n');
    s
}

/// Parses one line of space-separated positive integers. The values are not
/// checked to form a permutation, so tampered sequences can be read.
pub fn parse_permutation(text: &str) -> Result<Vec<usize>, FormatError> {
    let line = text.strip_suffix('\n').unwrap_or(text);
    let bad = || FormatError::MalformedPermutation(text.to_owned());
    if line.is_empty() || line.contains('\n') {
        return Err(bad());
    }
    line.split(' ')
        .map(|tok| parse_decimal(tok).ok_or_else(bad))
        .collect()
}

fn parse_decimal(tok: &str) -> Option<usize> {
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    tok.parse().ok()
}

fn parse_u64(tok: &str) -> Option<u64> {
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    tok.parse().ok()
}

fn lines(text: &str) -> Vec<&str> {
    let body = text.strip_suffix('\n').unwrap_or(text);
    body.split('\n').collect()
}

fn parse_header(line: &str, keyword: &'static str) -> Result<usize, FormatError> {
    let bad = || FormatError::MalformedHeader {
        expected: keyword,
        got: line.to_owned(),
    };
    let mut parts = line.split(' ');
    if parts.next() != Some(keyword) {
        return Err(bad());
    }
    let count = parts.next().and_then(parse_decimal).ok_or_else(bad)?;
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok(count)
}

pub fn write_rpg(g: &ReduciblePermutationGraph) -> String {
    write_flow_graph(&g.to_flow_graph())
}

/// Same layout as [`write_rpg`]; damaged graphs keep whatever records they
/// have, in canonical order.
pub fn write_flow_graph(g: &FlowGraph) -> String {
    let mut out = String::with_capacity(16 * (g.edges().len() + 1));
    let _ = writeln!(out, "RPG {}", g.n());
    for e in g.canonical_edges() {
        let _ = writeln!(out, "{} {} {}", e.from, e.to, e.kind.tag());
    }
    out
}

/// Reads the labeled format without structural checks beyond label range,
/// so attacked graphs stay readable.
pub fn read_flow_graph(text: &str) -> Result<FlowGraph, FormatError> {
    if text.is_empty() {
        return Err(FormatError::Empty);
    }
    let lines = lines(text);
    let n = parse_header(lines[0], "RPG")?;
    let max = n + 1;
    let mut edges = Vec::with_capacity(lines.len() - 1);
    for (idx, &line) in lines.iter().enumerate().skip(1) {
        let lineno = idx + 1;
        let bad = || FormatError::MalformedRecord {
            line: lineno,
            text: line.to_owned(),
        };
        let parts: Vec<&str> = line.split(' ').collect();
        let [from, to, kind] = parts[..] else {
            return Err(bad());
        };
        let from = parse_decimal(from).ok_or_else(bad)?;
        let to = parse_decimal(to).ok_or_else(bad)?;
        let kind = match kind {
            "L" => EdgeKind::List,
            "F" => EdgeKind::Forward,
            _ => return Err(bad()),
        };
        if from > max || to > max {
            return Err(FormatError::LabelOutOfRange { line: lineno, max });
        }
        edges.push(Edge { from, to, kind });
    }
    Ok(FlowGraph::new(n, edges)?)
}

/// Reads and re-validates a codec graph: no duplicate records, every body
/// node has one `L` record to its predecessor and one `F` record to a higher
/// label, the header has a single `L` record and the footer none.
pub fn read_rpg(text: &str) -> Result<ReduciblePermutationGraph, FormatError> {
    let g = read_flow_graph(text)?;
    let n = g.n();
    let mut seen = HashSet::new();
    let mut list = vec![0usize; n + 2];
    let mut forward: Vec<Option<usize>> = vec![None; n + 2];
    let arity = |node: usize, reason: String| FormatError::EdgeKindArity { node, reason };
    for (idx, e) in g.edges().iter().enumerate() {
        if !seen.insert((e.from, e.to)) {
            return Err(FormatError::DuplicateEdge {
                line: idx + 2,
                from: e.from as u64,
                to: e.to as u64,
            });
        }
        match e.kind {
            EdgeKind::List => {
                if e.from == 0 || e.to != e.from - 1 {
                    return Err(arity(e.from, format!("L record to {}", e.to)));
                }
                list[e.from] += 1;
            }
            EdgeKind::Forward => {
                if e.from == 0 || e.from > n || e.to <= e.from {
                    return Err(arity(e.from, format!("F record to {}", e.to)));
                }
                if forward[e.from].replace(e.to).is_some() {
                    return Err(arity(e.from, "more than one F record".into()));
                }
            }
        }
    }
    for (node, &count) in list.iter().enumerate().skip(1) {
        if count != 1 {
            return Err(arity(node, format!("{count} L records")));
        }
    }
    let targets = forward[1..=n]
        .iter()
        .enumerate()
        .map(|(idx, t)| t.ok_or_else(|| arity(idx + 1, "no F record".into())))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ReduciblePermutationGraph::from_forward_targets(targets)?)
}

pub fn write_unlabeled(g: &UnlabeledGraph) -> String {
    let mut out = String::with_capacity(16 * (g.edges().len() + 1));
    let _ = writeln!(out, "EDGES {}", g.node_count());
    for (a, b) in g.edges() {
        let _ = writeln!(out, "{a} {b}");
    }
    out
}

pub fn read_unlabeled(text: &str) -> Result<UnlabeledGraph, FormatError> {
    if text.is_empty() {
        return Err(FormatError::Empty);
    }
    let lines = lines(text);
    let declared = parse_header(lines[0], "EDGES")?;
    let mut edges = Vec::with_capacity(lines.len() - 1);
    let mut seen = HashSet::new();
    for (idx, &line) in lines.iter().enumerate().skip(1) {
        let lineno = idx + 1;
        let bad = || FormatError::MalformedRecord {
            line: lineno,
            text: line.to_owned(),
        };
        let parts: Vec<&str> = line.split(' ').collect();
        let [a, b] = parts[..] else {
            return Err(bad());
        };
        let a = parse_u64(a).ok_or_else(bad)?;
        let b = parse_u64(b).ok_or_else(bad)?;
        if a == b {
            return Err(FormatError::SelfLoop {
                line: lineno,
                node: a,
            });
        }
        if !seen.insert((a, b)) {
            return Err(FormatError::DuplicateEdge {
                line: lineno,
                from: a,
                to: b,
            });
        }
        edges.push((a, b));
    }
    if edges.is_empty() {
        return Err(FormatError::NoEdges);
    }
    let g = UnlabeledGraph::new(edges)?;
    if g.node_count() != declared {
        return Err(FormatError::NodeCount {
            declared,
            found: g.node_count(),
        });
    }
    Ok(g)
}

/// Graphviz rendering: list pointers solid, forward pointers dashed, header
/// drawn as a bold box and footer as a double circle. `annotate` adds the
/// `s`/`t` names and per-node labels.
pub fn export_dot(g: &ReduciblePermutationGraph, annotate: bool) -> String {
    let mut out = String::from("digraph rpg {\n");
    let header = g.header();
    for v in (0..=header).rev() {
        let mut attrs = Vec::new();
        if annotate {
            let name = match v {
                v if v == header => format!("s\\nu{v}"),
                0 => "t\\nu0".to_owned(),
                v => format!("u{v}"),
            };
            attrs.push(format!("label=\"{name}\""));
        }
        if v == header {
            attrs.push("shape=box".into());
            attrs.push("style=bold".into());
        } else if v == 0 {
            attrs.push("shape=doublecircle".into());
        }
        if attrs.is_empty() {
            let _ = writeln!(out, "  u{v};");
        } else {
            let _ = writeln!(out, "  u{v} [{}];", attrs.join(", "));
        }
    }
    for e in g.edges() {
        match e.kind {
            EdgeKind::List => {
                let _ = writeln!(out, "  u{} -> u{};", e.from, e.to);
            }
            EdgeKind::Forward => {
                let _ = writeln!(out, "  u{} -> u{} [style=dashed];", e.from, e.to);
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;
    use crate::rpg::encode_sip_to_rpg;

    fn graph_of(p: &[usize]) -> ReduciblePermutationGraph {
        encode_sip_to_rpg(&Permutation::new(p.to_vec()).unwrap())
    }

    #[test]
    fn smallest_graph_bytes() {
        assert_eq!(write_rpg(&graph_of(&[1])), "RPG 1\n2 1 L\n1 0 L\n1 2 F\n");
    }

    #[test]
    fn worked_example_records() {
        let text = write_rpg(&graph_of(&[5, 6, 9, 8, 1, 2, 7, 4, 3]));
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "RPG 9");
        assert_eq!(
            lines[1..11].iter().filter(|l| l.ends_with(" L")).count(),
            10
        );
        assert_eq!(
            &lines[11..],
            &["1 8 F", "2 8 F", "3 4 F", "4 7 F", "5 10 F", "6 10 F", "7 8 F", "8 9 F", "9 10 F"]
        );
        assert_eq!(
            read_rpg(&text).unwrap(),
            graph_of(&[5, 6, 9, 8, 1, 2, 7, 4, 3])
        );
    }

    #[test]
    fn read_rpg_rejections() {
        let cases = [
            ("", "empty"),
            ("RPG\n", "header"),
            ("RPG x\n", "header"),
            ("GRAPH 1\n", "header"),
            ("RPG 1\n2 1 L\n1 0 L\n1 2 F\n1 2 F\n", "duplicate"),
            ("RPG 1\n2 1 L\n1 0 L\n1 3 F\n", "range"),
            ("RPG 1\n2 1 L\n1 0 F\n1 2 F\n", "arity"),
            ("RPG 1\n2 1 L\n1 2 F\n", "arity"),
            ("RPG 1\n2 1 L\n1 0 L\n", "arity"),
            ("RPG 1\n2 1 L\n1 0 L\n1  2 F\n", "record"),
            ("RPG 1\n2 1 L\n1 0 L\n1 2 X\n", "record"),
        ];
        for (text, why) in cases {
            assert!(read_rpg(text).is_err(), "{why}: {text:?} accepted");
        }
    }

    #[test]
    fn damaged_graph_is_readable_but_not_an_rpg() {
        let text = "RPG 1\n2 1 L\n1 2 F\n";
        let g = read_flow_graph(text).unwrap();
        assert_eq!(g.edges().len(), 2);
        assert_eq!(write_flow_graph(&g), text);
        assert!(read_rpg(text).is_err());
    }

    #[test]
    fn permutation_text() {
        assert_eq!(format_permutation(&[5, 6, 9]), "5 6 9\n");
        assert_eq!(parse_permutation("5 6 9\n").unwrap(), vec![5, 6, 9]);
        assert_eq!(parse_permutation("2 2").unwrap(), vec![2, 2]);
        assert!(parse_permutation("").is_err());
        assert!(parse_permutation("1 -2 3\n").is_err());
        assert!(parse_permutation("1  2\n").is_err());
        assert!(parse_permutation("1 2\n3\n").is_err());
    }

    #[test]
    fn unlabeled_round_trip_and_rejections() {
        let g = graph_of(&[5, 6, 9, 8, 1, 2, 7, 4, 3])
            .to_flow_graph()
            .strip_labels();
        let text = write_unlabeled(&g);
        assert!(text.starts_with("EDGES 11\n"));
        assert_eq!(read_unlabeled(&text).unwrap(), g);

        assert_eq!(read_unlabeled("EDGES 0\n"), Err(FormatError::NoEdges));
        assert!(matches!(
            read_unlabeled("EDGES 2\n1 2\n1 2\n"),
            Err(FormatError::DuplicateEdge { line: 3, .. })
        ));
        assert!(matches!(
            read_unlabeled("EDGES 1\n4 4\n"),
            Err(FormatError::SelfLoop { .. })
        ));
        assert!(matches!(
            read_unlabeled("EDGES 2\na 2\n"),
            Err(FormatError::MalformedRecord { .. })
        ));
        assert!(matches!(
            read_unlabeled("EDGES 5\n1 2\n"),
            Err(FormatError::NodeCount {
                declared: 5,
                found: 2
            })
        ));
    }

    #[test]
    fn dot_export() {
        let g = graph_of(&[5, 6, 9, 8, 1, 2, 7, 4, 3]);
        let dot = export_dot(&g, true);
        assert_eq!(dot.matches("->").count(), 19);
        assert_eq!(dot.matches("style=dashed").count(), 9);
        assert!(dot.contains("u10 [label=\"s\\nu10\", shape=box, style=bold];"));
        assert!(dot.contains("u0 [label=\"t\\nu0\", shape=doublecircle];"));
        assert_eq!(dot, export_dot(&g, true));
        let plain = export_dot(&g, false);
        assert!(plain.contains("u10 [shape=box, style=bold];"));
        assert!(!plain.contains("label="));
    }
}

//! Seeded attacks on permutations and flow-graphs, and a campaign runner
//! that scores how the decoders react to them.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::io;
use std::ops::RangeInclusive;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::analysis::{repair_list_pointers, restore_labels, validate_rpg};
use crate::graph::{Edge, FlowGraph, UnlabeledGraph};
use crate::rpg::{decode_rpg_to_sip, encode_sip_to_rpg, ReduciblePermutationGraph};
use crate::sip::{decode_sip_to_w, encode_w_to_sip, validate_sip, DecodeMode, SipError, Watermark};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AttackError {
    #[error("attack count must be at least 1")]
    ZeroCount,
    #[error("unknown attack kind {0:?}")]
    UnknownKind(String),
    #[error("{kind} cannot be applied: {reason}")]
    Inapplicable { kind: AttackKind, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AttackKind {
    EdgeFlip,
    EdgeAdd,
    EdgeDel,
    LabelScramble,
    LabelStrip,
    NodeDel,
    SipSwap,
    SipValueChange,
}

impl AttackKind {
    pub const ALL: [AttackKind; 8] = [
        AttackKind::EdgeFlip,
        AttackKind::EdgeAdd,
        AttackKind::EdgeDel,
        AttackKind::LabelScramble,
        AttackKind::LabelStrip,
        AttackKind::NodeDel,
        AttackKind::SipSwap,
        AttackKind::SipValueChange,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AttackKind::EdgeFlip => "edge-flip",
            AttackKind::EdgeAdd => "edge-add",
            AttackKind::EdgeDel => "edge-del",
            AttackKind::LabelScramble => "label-scramble",
            AttackKind::LabelStrip => "label-strip",
            AttackKind::NodeDel => "node-del",
            AttackKind::SipSwap => "sip-swap",
            AttackKind::SipValueChange => "sip-value-change",
        }
    }

    pub fn applies_to_graph(self) -> bool {
        !matches!(self, AttackKind::SipSwap | AttackKind::SipValueChange)
    }

    pub fn applies_to_sip(self) -> bool {
        matches!(
            self,
            AttackKind::SipSwap | AttackKind::SipValueChange | AttackKind::NodeDel
        )
    }
}

impl fmt::Display for AttackKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AttackKind {
    type Err = AttackError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AttackKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| AttackError::UnknownKind(s.to_owned()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AttackSpec {
    kind: AttackKind,
    count: usize,
    seed: u64,
}

impl AttackSpec {
    pub fn new(kind: AttackKind, count: usize, seed: u64) -> Result<Self, AttackError> {
        if count == 0 {
            return Err(AttackError::ZeroCount);
        }
        Ok(AttackSpec { kind, count, seed })
    }

    pub fn single(kind: AttackKind, seed: u64) -> Self {
        AttackSpec {
            kind,
            count: 1,
            seed,
        }
    }

    pub fn kind(&self) -> AttackKind {
        self.kind
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn with_seed(self, seed: u64) -> Self {
        AttackSpec { seed, ..self }
    }

    fn inapplicable(&self, reason: impl Into<String>) -> AttackError {
        AttackError::Inapplicable {
            kind: self.kind,
            reason: reason.into(),
        }
    }
}

/// Ground truth for one applied graph edit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphEdit {
    Deleted(Edge),
    Added(Edge),
    /// The original edge, now stored reversed.
    Flipped(Edge),
    /// Body node removed; higher labels shift down by one.
    NodeDeleted(usize),
    /// `ids[label]` is the new id of the node formerly labeled `label`.
    LabelsScrambled(Vec<u64>),
    LabelsStripped,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AttackedGraph {
    Labeled(FlowGraph),
    Unlabeled(UnlabeledGraph),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphAttack {
    pub graph: AttackedGraph,
    pub log: Vec<GraphEdit>,
}

pub fn apply_graph_attack(
    g: &ReduciblePermutationGraph,
    spec: &AttackSpec,
) -> Result<GraphAttack, AttackError> {
    apply_graph_attack_to(&g.to_flow_graph(), spec)
}

/// Applies `spec` to an already labeled (possibly damaged) graph.
pub fn apply_graph_attack_to(g: &FlowGraph, spec: &AttackSpec) -> Result<GraphAttack, AttackError> {
    if !spec.kind.applies_to_graph() {
        return Err(spec.inapplicable("permutation-only attack"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut log = Vec::with_capacity(spec.count);
    let mut n = g.n();
    let mut edges = g.edges().to_vec();

    match spec.kind {
        AttackKind::EdgeDel | AttackKind::EdgeFlip => {
            if spec.count > edges.len() {
                return Err(spec.inapplicable(format!(
                    "{} edits requested, graph has {} edges",
                    spec.count,
                    edges.len()
                )));
            }
            let mut picked = sample(&mut rng, edges.len(), spec.count).into_vec();
            if spec.kind == AttackKind::EdgeFlip {
                for idx in picked {
                    log.push(GraphEdit::Flipped(edges[idx]));
                    edges[idx] = edges[idx].reversed();
                }
            } else {
                picked.sort_unstable_by(|a, b| b.cmp(a));
                for idx in picked {
                    log.push(GraphEdit::Deleted(edges.remove(idx)));
                }
            }
        }
        AttackKind::EdgeAdd => {
            let size = n + 2;
            for _ in 0..spec.count {
                let present: HashSet<(usize, usize)> =
                    edges.iter().map(|e| (e.from, e.to)).collect();
                let free: Vec<(usize, usize)> = (0..size)
                    .flat_map(|a| (0..size).map(move |b| (a, b)))
                    .filter(|&(a, b)| a != b && !present.contains(&(a, b)))
                    .collect();
                let Some(&(from, to)) = free.choose(&mut rng) else {
                    return Err(spec.inapplicable("graph is complete"));
                };
                let e = Edge::forward(from, to);
                edges.push(e);
                log.push(GraphEdit::Added(e));
            }
        }
        AttackKind::NodeDel => {
            for _ in 0..spec.count {
                if n == 0 {
                    return Err(spec.inapplicable("no body nodes left"));
                }
                let k = rng.gen_range(1..=n);
                edges = delete_node(&edges, k);
                n -= 1;
                log.push(GraphEdit::NodeDeleted(k));
            }
        }
        AttackKind::LabelScramble => {
            let mut ids: Vec<u64> = (0..(n as u64 + 2)).collect();
            for _ in 0..spec.count {
                ids.shuffle(&mut rng);
            }
            let stripped = FlowGraph::new(n, edges)
                .expect("labels unchanged")
                .strip_labels();
            let graph = stripped.relabel(|label| ids[label as usize]);
            log.push(GraphEdit::LabelsScrambled(ids));
            return Ok(GraphAttack {
                graph: AttackedGraph::Unlabeled(graph),
                log,
            });
        }
        AttackKind::LabelStrip => {
            log.push(GraphEdit::LabelsStripped);
            return Ok(GraphAttack {
                graph: AttackedGraph::Unlabeled(g.strip_labels()),
                log,
            });
        }
        AttackKind::SipSwap | AttackKind::SipValueChange => unreachable!(),
    }

    let graph = FlowGraph::new(n, edges).expect("edits keep labels in range");
    Ok(GraphAttack {
        graph: AttackedGraph::Labeled(graph),
        log,
    })
}

/// Drops every edge touching `k` and shifts labels above `k` down by one.
fn delete_node(edges: &[Edge], k: usize) -> Vec<Edge> {
    let shift = |v: usize| if v > k { v - 1 } else { v };
    edges
        .iter()
        .filter(|e| e.from != k && e.to != k)
        .map(|e| Edge {
            from: shift(e.from),
            to: shift(e.to),
            kind: e.kind,
        })
        .collect()
}

/// Re-applies a logged edit sequence to `g`.
pub fn replay_graph_edits(g: &FlowGraph, log: &[GraphEdit]) -> AttackedGraph {
    let mut n = g.n();
    let mut edges = g.edges().to_vec();
    for edit in log {
        match edit {
            GraphEdit::Deleted(e) => {
                let idx = edges
                    .iter()
                    .position(|x| x == e)
                    .expect("logged edge exists");
                edges.remove(idx);
            }
            GraphEdit::Added(e) => edges.push(*e),
            GraphEdit::Flipped(e) => {
                let idx = edges
                    .iter()
                    .position(|x| x == e)
                    .expect("logged edge exists");
                edges[idx] = e.reversed();
            }
            GraphEdit::NodeDeleted(k) => {
                edges = delete_node(&edges, *k);
                n -= 1;
            }
            GraphEdit::LabelsScrambled(ids) => {
                let g = FlowGraph::new(n, edges).expect("labels in range");
                return AttackedGraph::Unlabeled(
                    g.strip_labels().relabel(|label| ids[label as usize]),
                );
            }
            GraphEdit::LabelsStripped => {
                let g = FlowGraph::new(n, edges).expect("labels in range");
                return AttackedGraph::Unlabeled(g.strip_labels());
            }
        }
    }
    AttackedGraph::Labeled(FlowGraph::new(n, edges).expect("labels in range"))
}

/// Ground truth for one permutation edit; positions are one-indexed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SipEdit {
    Swapped(usize, usize),
    ValueChanged {
        position: usize,
        old: usize,
        new: usize,
    },
    Deleted {
        position: usize,
        value: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SipAttack {
    pub sequence: Vec<usize>,
    pub log: Vec<SipEdit>,
}

pub fn swap_positions(seq: &[usize], i: usize, j: usize) -> Vec<usize> {
    let mut out = seq.to_vec();
    out.swap(i - 1, j - 1);
    out
}

pub fn change_value(seq: &[usize], position: usize, value: usize) -> Vec<usize> {
    let mut out = seq.to_vec();
    out[position - 1] = value;
    out
}

pub fn delete_position(seq: &[usize], position: usize) -> Vec<usize> {
    let mut out = seq.to_vec();
    out.remove(position - 1);
    out
}

pub fn apply_sip_attack(seq: &[usize], spec: &AttackSpec) -> Result<SipAttack, AttackError> {
    if !spec.kind.applies_to_sip() {
        return Err(spec.inapplicable("graph-only attack"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = seq.to_vec();
    let mut log = Vec::with_capacity(spec.count);
    for _ in 0..spec.count {
        let len = out.len();
        match spec.kind {
            AttackKind::SipSwap => {
                if len < 2 {
                    return Err(spec.inapplicable("fewer than two elements"));
                }
                let picked = sample(&mut rng, len, 2);
                let (i, j) = (picked.index(0) + 1, picked.index(1) + 1);
                out.swap(i - 1, j - 1);
                log.push(SipEdit::Swapped(i, j));
            }
            AttackKind::SipValueChange => {
                if len == 0 {
                    return Err(spec.inapplicable("empty sequence"));
                }
                let position = rng.gen_range(1..=len);
                let old = out[position - 1];
                let new = if len == 1 {
                    old + 1
                } else {
                    let v = rng.gen_range(1..len);
                    if v >= old {
                        v + 1
                    } else {
                        v
                    }
                };
                out[position - 1] = new;
                log.push(SipEdit::ValueChanged { position, old, new });
            }
            AttackKind::NodeDel => {
                if len == 0 {
                    return Err(spec.inapplicable("empty sequence"));
                }
                let position = rng.gen_range(1..=len);
                let value = out.remove(position - 1);
                log.push(SipEdit::Deleted { position, value });
            }
            _ => unreachable!(),
        }
    }
    Ok(SipAttack { sequence: out, log })
}

/// How one trial ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Outcome {
    /// Decoded to the embedded watermark without any check firing.
    Correct,
    /// At least one structural check fired.
    Detected,
    /// All checks passed but the decoded watermark differs.
    FalseDecode,
}

impl Outcome {
    pub fn name(self) -> &'static str {
        match self {
            Outcome::Correct => "correct",
            Outcome::Detected => "detected",
            Outcome::FalseDecode => "false-decode",
        }
    }
}

/// Which artifact a campaign entry attacks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Graph,
    Sip,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialRecord {
    pub w: u64,
    /// `None` for the unattacked control trial.
    pub kind: Option<AttackKind>,
    pub target: Target,
    pub count: usize,
    /// RNG seed, or the edit index for exhaustive enumeration.
    pub seed: u64,
    pub outcome: Outcome,
    /// List pointers were rebuilt or labels restored and the watermark came
    /// back intact.
    pub repaired: bool,
    /// Properties that fired: `length`, `sip`, `bitonic`, `block`,
    /// `graph-structural`.
    pub violated: Vec<&'static str>,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    w: u64,
    attack: &'a str,
    target: &'a str,
    count: usize,
    seed: u64,
    outcome: &'a str,
    repaired: bool,
    violated: String,
}

pub const GRAPH_STRUCTURAL: &str = "graph-structural";

#[derive(Debug, Clone)]
pub struct CampaignConfig {
    pub watermarks: RangeInclusive<u64>,
    pub specs: Vec<AttackSpec>,
    /// Random trials per watermark and spec. Ignored for specs that are
    /// enumerated exhaustively.
    pub trials: usize,
    /// Replace random single-edit trials by every possible single edit for
    /// edge-del, edge-flip, edge-add, node-del, sip-swap and sip-value-change.
    pub exhaustive: bool,
    /// Add one unattacked trial per watermark.
    pub control: bool,
    /// Route node-del to the permutation rather than the graph.
    pub node_del_on_sip: bool,
}

impl CampaignConfig {
    pub fn new(watermarks: RangeInclusive<u64>, specs: Vec<AttackSpec>) -> Self {
        CampaignConfig {
            watermarks,
            specs,
            trials: 1,
            exhaustive: false,
            control: false,
            node_del_on_sip: false,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CampaignReport {
    pub records: Vec<TrialRecord>,
}

impl CampaignReport {
    pub fn trials(&self) -> usize {
        self.records.len()
    }

    fn count_outcome(&self, o: Outcome) -> usize {
        self.records.iter().filter(|r| r.outcome == o).count()
    }

    pub fn detected(&self) -> usize {
        self.count_outcome(Outcome::Detected)
    }

    pub fn correct_decodes(&self) -> usize {
        self.count_outcome(Outcome::Correct)
    }

    pub fn false_decodes(&self) -> usize {
        self.count_outcome(Outcome::FalseDecode)
    }

    pub fn repaired(&self) -> usize {
        self.records.iter().filter(|r| r.repaired).count()
    }

    /// Number of trials on which each property fired.
    pub fn breakdown(&self) -> BTreeMap<&'static str, usize> {
        let mut m = BTreeMap::new();
        for r in &self.records {
            for &p in &r.violated {
                *m.entry(p).or_default() += 1;
            }
        }
        m
    }

    /// Restricts the report to one attack kind (`None` selects controls).
    pub fn for_kind(&self, kind: Option<AttackKind>) -> CampaignReport {
        CampaignReport {
            records: self
                .records
                .iter()
                .filter(|r| r.kind == kind)
                .cloned()
                .collect(),
        }
    }

    pub fn write_csv<W: io::Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut wtr = csv::Writer::from_writer(out);
        for r in &self.records {
            wtr.serialize(CsvRow {
                w: r.w,
                attack: r.kind.map_or("none", AttackKind::name),
                target: match r.target {
                    Target::Graph => "graph",
                    Target::Sip => "sip",
                },
                count: r.count,
                seed: r.seed,
                outcome: r.outcome.name(),
                repaired: r.repaired,
                violated: r.violated.join(";"),
            })?;
        }
        wtr.flush()?;
        Ok(())
    }

    /// One line per attack kind plus a total.
    pub fn summary(&self) -> String {
        let mut kinds: Vec<Option<AttackKind>> = self.records.iter().map(|r| r.kind).collect();
        kinds.sort_unstable();
        kinds.dedup();
        let mut out = String::new();
        let line = |label: &str, r: &CampaignReport| {
            let pct = |x: usize| 100.0 * x as f64 / r.trials().max(1) as f64;
            let props: Vec<String> = r
                .breakdown()
                .into_iter()
                .map(|(p, c)| format!("{p}={c}"))
                .collect();
            format!(
                "{label:<17} trials={:<7} detected={:<7} ({:6.2}%) correct={:<7} repaired={:<7} false={:<7} ({:6.2}%) [{}]\n",
                r.trials(),
                r.detected(),
                pct(r.detected()),
                r.correct_decodes(),
                r.repaired(),
                r.false_decodes(),
                pct(r.false_decodes()),
                props.join(" ")
            )
        };
        for k in kinds {
            out.push_str(&line(k.map_or("none", AttackKind::name), &self.for_kind(k)));
        }
        out.push_str(&line("total", self));
        out
    }
}

/// Every trial is independent; watermarks run in parallel and records come
/// back in watermark order.
pub fn run_detection_campaign(config: &CampaignConfig) -> CampaignReport {
    let per_w: Vec<Vec<TrialRecord>> = config
        .watermarks
        .clone()
        .into_par_iter()
        .map(|w| trials_for(config, w))
        .collect();
    CampaignReport {
        records: per_w.into_iter().flatten().collect(),
    }
}

fn trial_seed(base: u64, w: u64, trial: u64) -> u64 {
    // splitmix64 finaliser over the combined inputs
    let mut z =
        base ^ w.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ trial.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn trials_for(config: &CampaignConfig, w_value: u64) -> Vec<TrialRecord> {
    let Ok(w) = Watermark::try_from(w_value) else {
        return Vec::new();
    };
    let sip = encode_w_to_sip(&w);
    let rpg = encode_sip_to_rpg(&sip);
    let flow = rpg.to_flow_graph();
    let mut records = Vec::new();

    if config.control {
        let (outcome, violated) = score_sip(sip.as_slice(), &w);
        records.push(TrialRecord {
            w: w_value,
            kind: None,
            target: Target::Graph,
            count: 0,
            seed: 0,
            outcome,
            repaired: false,
            violated,
        });
    }

    for spec in &config.specs {
        let on_sip = !spec.kind.applies_to_graph()
            || (spec.kind == AttackKind::NodeDel && config.node_del_on_sip);
        let target = if on_sip { Target::Sip } else { Target::Graph };
        let record =
            |seed: u64, (outcome, repaired, violated): (Outcome, bool, Vec<&'static str>)| {
                TrialRecord {
                    w: w_value,
                    kind: Some(spec.kind),
                    target,
                    count: spec.count,
                    seed,
                    outcome,
                    repaired,
                    violated,
                }
            };

        if config.exhaustive && spec.count == 1 {
            let edits = if on_sip {
                exhaustive_sip_edits(sip.as_slice(), spec.kind)
                    .map(|v| v.into_iter().map(|s| score_sip_trial(&s, &w)).collect())
            } else {
                exhaustive_graph_edits(&flow, spec.kind).map(|v| {
                    v.into_iter()
                        .map(|g| score_graph(&g, &w))
                        .collect::<Vec<_>>()
                })
            };
            if let Some(scored) = edits {
                records.extend(
                    scored
                        .into_iter()
                        .enumerate()
                        .map(|(idx, s)| record(idx as u64, s)),
                );
                continue;
            }
        }

        for t in 0..config.trials {
            let seed = trial_seed(spec.seed, w_value, t as u64);
            let spec = spec.with_seed(seed);
            let scored = if on_sip {
                match apply_sip_attack(sip.as_slice(), &spec) {
                    Ok(a) => score_sip_trial(&a.sequence, &w),
                    Err(_) => continue,
                }
            } else {
                match apply_graph_attack_to(&flow, &spec) {
                    Ok(a) => score_graph(&a.graph, &w),
                    Err(_) => continue,
                }
            };
            records.push(record(seed, scored));
        }
    }
    records
}

/// Every single edit of the given kind, or `None` if the kind is not
/// enumerable.
pub fn exhaustive_graph_edits(g: &FlowGraph, kind: AttackKind) -> Option<Vec<AttackedGraph>> {
    let edges = g.edges();
    let rebuild = |n: usize, e: Vec<Edge>| {
        AttackedGraph::Labeled(FlowGraph::new(n, e).expect("labels in range"))
    };
    let out = match kind {
        AttackKind::EdgeDel => (0..edges.len())
            .map(|i| {
                let mut e = edges.to_vec();
                e.remove(i);
                rebuild(g.n(), e)
            })
            .collect(),
        AttackKind::EdgeFlip => (0..edges.len())
            .map(|i| {
                let mut e = edges.to_vec();
                e[i] = e[i].reversed();
                rebuild(g.n(), e)
            })
            .collect(),
        AttackKind::EdgeAdd => {
            let size = g.node_count();
            (0..size)
                .flat_map(|a| (0..size).map(move |b| (a, b)))
                .filter(|&(a, b)| a != b && !g.has_edge(a, b))
                .map(|(a, b)| {
                    let mut e = edges.to_vec();
                    e.push(Edge::forward(a, b));
                    rebuild(g.n(), e)
                })
                .collect()
        }
        AttackKind::NodeDel => (1..=g.n())
            .map(|k| rebuild(g.n() - 1, delete_node(edges, k)))
            .collect(),
        _ => return None,
    };
    Some(out)
}

/// Every single edit of the given kind on a permutation, or `None` if the
/// kind is not enumerable.
pub fn exhaustive_sip_edits(seq: &[usize], kind: AttackKind) -> Option<Vec<Vec<usize>>> {
    let len = seq.len();
    let out = match kind {
        AttackKind::SipSwap => (1..=len)
            .flat_map(|i| (i + 1..=len).map(move |j| (i, j)))
            .map(|(i, j)| swap_positions(seq, i, j))
            .collect(),
        AttackKind::SipValueChange => (1..=len)
            .flat_map(|p| (1..=len).map(move |v| (p, v)))
            .filter(|&(p, v)| seq[p - 1] != v)
            .map(|(p, v)| change_value(seq, p, v))
            .collect(),
        AttackKind::NodeDel => (1..=len).map(|p| delete_position(seq, p)).collect(),
        _ => return None,
    };
    Some(out)
}

fn score_sip_trial(seq: &[usize], w: &Watermark) -> (Outcome, bool, Vec<&'static str>) {
    let (o, v) = score_sip(seq, w);
    (o, false, v)
}

/// Strict decode of a permutation and comparison with `w`.
fn score_sip(seq: &[usize], w: &Watermark) -> (Outcome, Vec<&'static str>) {
    let report = validate_sip(seq);
    if !report.is_valid() {
        return (Outcome::Detected, report.failed());
    }
    match decode_sip_to_w(seq, DecodeMode::Strict) {
        Ok(got) if &got == w => (Outcome::Correct, Vec::new()),
        Ok(_) => (Outcome::FalseDecode, Vec::new()),
        Err(SipError::Tampered(r)) => (Outcome::Detected, r.failed()),
        Err(_) => (Outcome::Detected, vec!["sip"]),
    }
}

fn decodes_to(rpg: &ReduciblePermutationGraph, w: &Watermark) -> bool {
    let p = decode_rpg_to_sip(rpg);
    decode_sip_to_w(p.as_slice(), DecodeMode::Strict).is_ok_and(|got| &got == w)
}

/// Full extraction pipeline on an attacked graph.
pub fn score_graph(g: &AttackedGraph, w: &Watermark) -> (Outcome, bool, Vec<&'static str>) {
    let (rpg, restored) = match g {
        AttackedGraph::Unlabeled(u) => match restore_labels(u) {
            Ok(rpg) => (rpg, true),
            Err(_) => return (Outcome::Detected, false, vec![GRAPH_STRUCTURAL]),
        },
        AttackedGraph::Labeled(f) => {
            if !validate_rpg(f).ok() {
                let repaired = repair_list_pointers(f).is_ok_and(|(rpg, _)| decodes_to(&rpg, w));
                return (Outcome::Detected, repaired, vec![GRAPH_STRUCTURAL]);
            }
            match ReduciblePermutationGraph::try_from(f) {
                Ok(rpg) => (rpg, false),
                Err(_) => return (Outcome::Detected, false, vec![GRAPH_STRUCTURAL]),
            }
        }
    };
    let p = decode_rpg_to_sip(&rpg);
    let (outcome, violated) = score_sip(p.as_slice(), w);
    (outcome, restored && outcome == Outcome::Correct, violated)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Permutation;

    const W12: [usize; 9] = [5, 6, 9, 8, 1, 2, 7, 4, 3];

    fn graph12() -> ReduciblePermutationGraph {
        encode_sip_to_rpg(&Permutation::new(W12.to_vec()).unwrap())
    }

    #[test]
    fn kind_names_round_trip() {
        for k in AttackKind::ALL {
            assert_eq!(k.name().parse::<AttackKind>().unwrap(), k);
        }
        assert!("bogus".parse::<AttackKind>().is_err());
        assert_eq!(
            AttackSpec::new(AttackKind::EdgeDel, 0, 1),
            Err(AttackError::ZeroCount)
        );
    }

    #[test]
    fn edge_deletion_is_logged() {
        let g = graph12();
        let a = apply_graph_attack(&g, &AttackSpec::single(AttackKind::EdgeDel, 7)).unwrap();
        let [GraphEdit::Deleted(e)] = a.log[..] else {
            panic!("unexpected log {:?}", a.log);
        };
        let AttackedGraph::Labeled(damaged) = &a.graph else {
            panic!("expected labeled graph");
        };
        assert_eq!(damaged.edges().len(), g.edge_count() - 1);
        assert!(!damaged.has_edge(e.from, e.to));
    }

    #[test]
    fn label_strip_keeps_edges() {
        let g = graph12();
        let a = apply_graph_attack(&g, &AttackSpec::single(AttackKind::LabelStrip, 1)).unwrap();
        let AttackedGraph::Unlabeled(u) = &a.graph else {
            panic!("expected unlabeled graph");
        };
        assert_eq!(
            u.sorted_edges(),
            g.to_flow_graph().strip_labels().sorted_edges()
        );
    }

    #[test]
    fn edge_flip_reverses_one_edge() {
        let g = graph12();
        let a = apply_graph_attack(&g, &AttackSpec::single(AttackKind::EdgeFlip, 3)).unwrap();
        let AttackedGraph::Labeled(damaged) = &a.graph else {
            panic!("expected labeled graph");
        };
        let original: Vec<Edge> = g.edges().collect();
        let changed: Vec<(Edge, Edge)> = original
            .iter()
            .zip(damaged.edges())
            .filter(|(a, b)| a != b)
            .map(|(a, b)| (*a, *b))
            .collect();
        assert_eq!(changed.len(), 1);
        assert_eq!(changed[0].0.reversed(), changed[0].1);
    }

    #[test]
    fn node_del_needs_a_body() {
        let g = encode_sip_to_rpg(&Permutation::new(vec![1]).unwrap());
        let spec = AttackSpec::new(AttackKind::NodeDel, 2, 0).unwrap();
        assert!(matches!(
            apply_graph_attack(&g, &spec),
            Err(AttackError::Inapplicable { .. })
        ));
    }

    #[test]
    fn sip_edits() {
        let del = delete_position(&W12, 5);
        assert_eq!(del, vec![5, 6, 9, 8, 2, 7, 4, 3]);
        assert!(!validate_sip(&del).length_ok());

        let sw = swap_positions(&W12, 1, 2);
        assert_eq!(sw, vec![6, 5, 9, 8, 1, 2, 7, 4, 3]);
        assert!(!validate_sip(&sw).sip_ok());

        let ch = change_value(&[2, 1, 3], 3, 2);
        assert_eq!(ch, vec![2, 1, 2]);
        assert!(!validate_sip(&ch).sip_ok());
    }

    #[test]
    fn sip_attack_is_seeded() {
        let spec = AttackSpec::new(AttackKind::SipValueChange, 3, 99).unwrap();
        let a = apply_sip_attack(&W12, &spec).unwrap();
        assert_eq!(a, apply_sip_attack(&W12, &spec).unwrap());
        assert_eq!(a.log.len(), 3);
        for edit in &a.log {
            let SipEdit::ValueChanged { old, new, .. } = *edit else {
                panic!("unexpected edit");
            };
            assert_ne!(old, new);
            assert!((1..=9).contains(&new));
        }
        assert!(apply_sip_attack(&W12, &AttackSpec::single(AttackKind::EdgeAdd, 0)).is_err());
    }

    #[test]
    fn control_group_decodes() {
        let mut cfg = CampaignConfig::new(12..=12, vec![]);
        cfg.control = true;
        let report = run_detection_campaign(&cfg);
        assert_eq!(report.trials(), 1);
        assert_eq!(report.correct_decodes(), 1);
    }

    #[test]
    fn csv_has_one_row_per_trial() {
        let mut cfg = CampaignConfig::new(1..=4, vec![AttackSpec::single(AttackKind::EdgeDel, 5)]);
        cfg.trials = 3;
        let report = run_detection_campaign(&cfg);
        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 1 + report.trials());
        assert!(text.starts_with("w,attack,target,count,seed,outcome,repaired,violated\n"));
    }
}

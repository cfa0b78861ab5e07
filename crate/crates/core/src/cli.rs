//! Command-line front end. Exit codes: 0 success, 1 validation or tamper
//! failure, 2 usage or I/O error. Results go to stdout, diagnostics to
//! stderr.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::analysis::{
    repair_list_pointers, restore_labels, unique_hamiltonian_path, validate_rpg,
};
use crate::attack::{
    apply_graph_attack_to, apply_sip_attack, run_detection_campaign, AttackKind, AttackSpec,
    AttackedGraph, CampaignConfig,
};
use crate::graph::FlowGraph;
use crate::io::{
    export_dot, format_permutation, parse_permutation, read_flow_graph, read_rpg, read_unlabeled,
    write_flow_graph, write_rpg, write_unlabeled,
};
use crate::rpg::{decode_rpg_to_sip, ReduciblePermutationGraph};
use crate::sip::{decode_sip_to_w, validate_sip, Check, DecodeMode, SipError, Watermark};
use crate::{decode_watermark, encode_watermark};

pub const EXIT_OK: i32 = 0;
pub const EXIT_TAMPER: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "rpgmark",
    version,
    about = "Watermark integers as reducible permutation flow-graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Encode a watermark into a flow-graph file.
    Encode {
        #[arg(short = 'w', long = "watermark")]
        w: String,
        /// Output file (stdout if omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write a Graphviz rendering.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Print the self-inverting permutation of a watermark.
    Sip {
        #[arg(short = 'w', long = "watermark")]
        w: String,
    },
    /// Decode a graph, edge list or permutation file to its watermark.
    Decode {
        #[arg(short, long)]
        input: PathBuf,
        /// Skip the permutation tamper checks.
        #[arg(long)]
        lenient: bool,
    },
    /// Report structural and permutation-level checks for a graph file.
    Validate {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Print the unique Hamiltonian path of a graph file.
    Hp {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Reassign labels to an unlabeled edge list.
    Restore {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Rebuild damaged list pointers.
    Repair {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Apply a seeded attack to a graph or permutation file.
    Attack {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Round-trip every watermark up to a bound, then run an attack campaign
    /// and print one CSV row per trial.
    Fuzz {
        #[arg(long)]
        max_w: u64,
        /// Enumerate every single edit instead of sampling.
        #[arg(long)]
        exhaustive_attacks: bool,
        /// Random trials per watermark and attack kind.
        #[arg(long, default_value_t = 4)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// A failed command: exit code and message for stderr.
struct Failure(i32, String);

impl Failure {
    fn usage(msg: impl std::fmt::Display) -> Self {
        Failure(EXIT_USAGE, msg.to_string())
    }

    fn tamper(msg: impl std::fmt::Display) -> Self {
        Failure(EXIT_TAMPER, msg.to_string())
    }
}

type CmdResult = Result<(), Failure>;

pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(Failure(code, msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            code
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    match cmd {
        Command::Encode { w, output, dot } => {
            let w = parse_watermark(&w)?;
            let (_, graph) = encode_watermark(&w);
            emit(out, output.as_deref(), &write_rpg(&graph))?;
            if let Some(path) = dot {
                write_file(&path, &export_dot(&graph, true))?;
            }
            Ok(())
        }
        Command::Sip { w } => {
            let w = parse_watermark(&w)?;
            let (sip, _) = encode_watermark(&w);
            emit(out, None, &format_permutation(sip.as_slice()))
        }
        Command::Decode { input, lenient } => {
            let mode = if lenient {
                DecodeMode::Lenient
            } else {
                DecodeMode::Strict
            };
            let w = match read_input(&input)? {
                Input::Graph(g) => decode_watermark(&checked_graph(&g)?, mode),
                Input::Unlabeled(text) => {
                    let u = read_unlabeled(&text).map_err(Failure::usage)?;
                    let g = restore_labels(&u)
                        .map_err(|e| Failure::tamper(format!("graph-structural: {e}")))?;
                    decode_watermark(&g, mode)
                }
                Input::Permutation(seq) => decode_sip_to_w(&seq, mode),
            };
            let w = w.map_err(sip_failure)?;
            emit(out, None, &format!("{w}\n"))
        }
        Command::Validate { input } => validate(&input, out, err),
        Command::Hp { input } => {
            let Input::Graph(g) = read_input(&input)? else {
                return Err(Failure::usage("hp expects a labeled graph file"));
            };
            let hp = unique_hamiltonian_path(&g).map_err(Failure::tamper)?;
            let line = hp
                .order()
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            emit(out, None, &format!("{line}\n"))
        }
        Command::Restore { input, output } => {
            let u = read_unlabeled(&read_file(&input)?).map_err(Failure::usage)?;
            let g = restore_labels(&u).map_err(Failure::tamper)?;
            write_file(&output, &write_rpg(&g))
        }
        Command::Repair { input, output } => {
            let Input::Graph(g) = read_input(&input)? else {
                return Err(Failure::usage("repair expects a labeled graph file"));
            };
            let (fixed, report) = repair_list_pointers(&g).map_err(Failure::tamper)?;
            let _ = writeln!(err, "repair: {report}");
            write_file(&output, &write_rpg(&fixed))
        }
        Command::Attack {
            input,
            kind,
            count,
            seed,
            output,
        } => {
            let kind: AttackKind = kind.parse().map_err(Failure::usage)?;
            let spec = AttackSpec::new(kind, count, seed).map_err(Failure::usage)?;
            let text = match read_input(&input)? {
                Input::Permutation(seq) => {
                    let a = apply_sip_attack(&seq, &spec).map_err(Failure::usage)?;
                    for e in &a.log {
                        let _ = writeln!(err, "edit: {e:?}");
                    }
                    format_permutation(&a.sequence)
                }
                Input::Graph(g) => {
                    let a = apply_graph_attack_to(&g, &spec).map_err(Failure::usage)?;
                    for e in &a.log {
                        let _ = writeln!(err, "edit: {e:?}");
                    }
                    match a.graph {
                        AttackedGraph::Labeled(g) => write_flow_graph(&g),
                        AttackedGraph::Unlabeled(u) => write_unlabeled(&u),
                    }
                }
                Input::Unlabeled(_) => {
                    return Err(Failure::usage("cannot attack an unlabeled edge list"))
                }
            };
            write_file(&output, &text)
        }
        Command::Fuzz {
            max_w,
            exhaustive_attacks,
            trials,
            seed,
        } => fuzz(max_w, exhaustive_attacks, trials, seed, out, err),
    }
}

enum Input {
    Graph(FlowGraph),
    Unlabeled(String),
    Permutation(Vec<usize>),
}

fn read_input(path: &Path) -> Result<Input, Failure> {
    let text = read_file(path)?;
    if text.starts_with("RPG") {
        read_flow_graph(&text)
            .map(Input::Graph)
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
    } else if text.starts_with("EDGES") {
        Ok(Input::Unlabeled(text))
    } else {
        parse_permutation(&text)
            .map(Input::Permutation)
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
    }
}

fn checked_graph(g: &FlowGraph) -> Result<ReduciblePermutationGraph, Failure> {
    let report = validate_rpg(g);
    if !report.ok() {
        return Err(Failure::tamper(format!(
            "tamper detected: graph-structural: {report}"
        )));
    }
    ReduciblePermutationGraph::try_from(g).map_err(Failure::tamper)
}

fn sip_failure(e: SipError) -> Failure {
    match e {
        SipError::Tampered(report) => Failure::tamper(format!(
            "tamper detected: {}: {}",
            report.failed().join(","),
            report.details.join("; ")
        )),
        other => Failure::tamper(format!("tamper detected: {other}")),
    }
}

fn validate(input: &Path, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let check = |c: Check| match c {
        Check::Pass => "pass",
        Check::Fail => "fail",
        Check::Skipped => "skipped",
    };
    let mut lines = Vec::new();
    let seq = match read_input(input)? {
        Input::Graph(g) => {
            let report = validate_rpg(&g);
            if report.ok() {
                lines.push("graph=pass".to_owned());
                let rpg = ReduciblePermutationGraph::try_from(&g).map_err(Failure::tamper)?;
                Some(decode_rpg_to_sip(&rpg).into_vec())
            } else {
                lines.push("graph=fail".to_owned());
                for v in &report.violations {
                    lines.push(format!("violation=u{} {} {}", v.node, v.kind, v.detail));
                }
                None
            }
        }
        Input::Permutation(seq) => Some(seq),
        Input::Unlabeled(_) => return Err(Failure::usage("validate expects a labeled graph file")),
    };
    let mut valid = lines[0] != "graph=fail";
    match seq {
        Some(seq) => {
            let r = validate_sip(&seq);
            valid &= r.is_valid();
            lines.push(format!("length={}", check(r.length)));
            lines.push(format!("sip={}", check(r.sip)));
            lines.push(format!("bitonic={}", check(r.bitonic)));
            lines.push(format!("block={}", check(r.block)));
            for d in &r.details {
                lines.push(format!("detail={d}"));
            }
        }
        None => {
            for name in ["length", "sip", "bitonic", "block"] {
                lines.push(format!("{name}=skipped"));
            }
        }
    }
    let mut text = lines.join("\n");
    text.push('\n');
    emit(out, None, &text)?;
    if valid {
        Ok(())
    } else {
        let _ = err.write_all(text.as_bytes());
        Err(Failure::tamper("validation failed"))
    }
}

fn fuzz(
    max_w: u64,
    exhaustive: bool,
    trials: usize,
    seed: u64,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    if max_w == 0 {
        return Err(Failure::usage("--max-w must be at least 1"));
    }
    let mut failures = 0usize;
    for v in 1..=max_w {
        let w = Watermark::try_from(v).expect("v >= 1");
        let (sip, graph) = encode_watermark(&w);
        let back = read_rpg(&write_rpg(&graph)).ok();
        let ok = back.as_ref() == Some(&graph)
            && decode_rpg_to_sip(&graph).as_slice() == sip.as_slice()
            && decode_watermark(&graph, DecodeMode::Strict).as_ref() == Ok(&w);
        if !ok {
            failures += 1;
            let _ = writeln!(err, "round-trip failure at w={v}");
        }
    }
    let _ = writeln!(err, "round-trip: {max_w} watermarks, {failures} failures");

    let specs: Vec<AttackSpec> = AttackKind::ALL
        .into_iter()
        .map(|k| AttackSpec::single(k, seed))
        .collect();
    let mut config = CampaignConfig::new(1..=max_w, specs);
    config.trials = trials;
    config.exhaustive = exhaustive;
    config.control = true;
    let mut report = run_detection_campaign(&config);

    let mut sip_node_del = CampaignConfig::new(
        1..=max_w,
        vec![AttackSpec::single(AttackKind::NodeDel, seed)],
    );
    sip_node_del.trials = trials;
    sip_node_del.exhaustive = exhaustive;
    sip_node_del.node_del_on_sip = true;
    report
        .records
        .extend(run_detection_campaign(&sip_node_del).records);

    report
        .write_csv(&mut *out)
        .map_err(|e| Failure::usage(format!("writing CSV: {e}")))?;
    let _ = err.write_all(report.summary().as_bytes());
    if failures > 0 {
        return Err(Failure::tamper(format!("{failures} round-trip failures")));
    }
    Ok(())
}

fn parse_watermark(s: &str) -> Result<Watermark, Failure> {
    s.parse().map_err(Failure::usage)
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> CmdResult {
    fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> CmdResult {
    match path {
        Some(p) => write_file(p, text),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::usage(format!("stdout: {e}"))),
    }
}

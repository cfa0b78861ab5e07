//! Encode watermark integers as self-inverting permutations and reducible
//! permutation flow-graphs, decode them back, and detect or repair damage.
//!
//! ```
//! use rpgmark::{decode_watermark, encode_watermark, DecodeMode, Watermark};
//!
//! let w: Watermark = "12".parse().unwrap();
//! let (sip, graph) = encode_watermark(&w);
//! assert_eq!(sip.to_string(), "5 6 9 8 1 2 7 4 3");
//! assert_eq!(decode_watermark(&graph, DecodeMode::Strict).unwrap(), w);
//! ```
//!
//! The pipeline is split across modules:
//!
//! - [`sip`]: watermark ⇄ self-inverting permutation, plus the tamper checks
//!   on permutations.
//! - [`rpg`]: permutation ⇄ flow-graph, and the didomination DAG.
//! - [`analysis`]: structural validation, unique Hamiltonian path, label
//!   restoration and list-pointer repair.
//! - [`attack`]: seeded attacks and detection campaigns.
//! - [`io`]: text formats and DOT export.

pub mod analysis;
pub mod attack;
pub mod cli;
pub mod graph;
pub mod io;
pub mod perm;
pub mod rpg;
pub mod sip;

pub use analysis::{
    repair_list_pointers, restore_labels, unique_hamiltonian_path, validate_rpg, HamiltonianPath,
    RepairReport, RpgValidationReport, ViolationKind,
};
pub use attack::{AttackKind, AttackSpec, CampaignConfig, CampaignReport};
pub use graph::{Edge, EdgeKind, FlowGraph, GraphError, UnlabeledGraph};
pub use perm::{Permutation, PermutationError, SelfInvertingPermutation};
pub use rpg::{
    compute_max_didominators, decode_rpg_to_sip, encode_sip_to_rpg, ReduciblePermutationGraph,
};
pub use sip::{
    decode_sip_to_w, encode_w_to_sip, validate_sip, DecodeMode, SipError, SipTamperReport,
    Watermark,
};

/// `w → π* → F[π*]`.
pub fn encode_watermark(w: &Watermark) -> (SelfInvertingPermutation, ReduciblePermutationGraph) {
    let sip = encode_w_to_sip(w);
    let graph = encode_sip_to_rpg(&sip);
    (sip, graph)
}

/// `F[π*] → π* → w`.
pub fn decode_watermark(
    g: &ReduciblePermutationGraph,
    mode: DecodeMode,
) -> Result<Watermark, SipError> {
    decode_sip_to_w(decode_rpg_to_sip(g).as_slice(), mode)
}

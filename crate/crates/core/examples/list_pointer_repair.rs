//! Delete a list pointer, watch validation fail, rebuild it.

use rpgmark::{
    decode_watermark, encode_watermark, repair_list_pointers, validate_rpg, DecodeMode, EdgeKind,
    Watermark,
};

fn main() {
    let w = Watermark::from(2024u32);
    let (_, graph) = encode_watermark(&w);
    let mut damaged = graph.to_flow_graph();

    let idx = damaged
        .edges()
        .iter()
        .position(|e| e.kind == EdgeKind::List && e.from == 6)
        .unwrap();
    let gone = damaged.edges_mut().remove(idx);
    println!("deleted u{} -> u{}", gone.from, gone.to);
    println!("validation: {}", validate_rpg(&damaged));

    let (fixed, report) = repair_list_pointers(&damaged).expect("forward pointers intact");
    println!("repair: {report}");
    assert_eq!(fixed, graph);
    println!(
        "decoded: {}",
        decode_watermark(&fixed, DecodeMode::Strict).unwrap()
    );
}

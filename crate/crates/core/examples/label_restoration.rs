//! Scramble node ids, throw the labels away and recover them from the
//! structure alone.

use rpgmark::attack::{apply_graph_attack, AttackedGraph};
use rpgmark::io::write_unlabeled;
use rpgmark::{
    decode_watermark, encode_watermark, restore_labels, AttackKind, AttackSpec, DecodeMode,
    Watermark,
};

fn main() {
    let w = Watermark::from(37u32);
    let (_, graph) = encode_watermark(&w);

    let attack = apply_graph_attack(&graph, &AttackSpec::single(AttackKind::LabelScramble, 5))
        .expect("graph attack");
    let AttackedGraph::Unlabeled(bare) = attack.graph else {
        unreachable!("label attacks drop labels")
    };
    print!("{}", write_unlabeled(&bare));

    let restored = restore_labels(&bare).expect("codec graph");
    assert_eq!(restored, graph);
    let back = decode_watermark(&restored, DecodeMode::Strict).unwrap();
    println!("restored and decoded: {back}");
}

//! Encode a watermark, show every intermediate, decode it back.
//!
//! cargo run --example encode_decode -- 12

use rpgmark::sip::{BitBlocks, BitonicPermutation, PositionSequences};
use rpgmark::{decode_watermark, encode_watermark, DecodeMode, Watermark};

fn main() {
    let arg = std::env::args().nth(1).unwrap_or_else(|| "12".into());
    let w: Watermark = match arg.parse() {
        Ok(w) => w,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };

    let bits = |b: &[u8]| b.iter().map(|x| x.to_string()).collect::<String>();
    let blocks = BitBlocks::from_watermark(&w);
    let seqs = PositionSequences::from_bits(&blocks.b_star);
    let bitonic = BitonicPermutation::from_positions(&seqs);

    println!("w       = {w}");
    println!("B       = {}", bits(&w.bits()));
    println!("B'      = {}", bits(&blocks.b_prime));
    println!("B*      = {}", bits(&blocks.b_star));
    println!("X       = {:?}", seqs.x);
    println!("Y       = {:?}", seqs.y);
    println!("bitonic = {:?}", bitonic.as_slice());

    let (sip, graph) = encode_watermark(&w);
    println!("sip     = ({sip})");
    println!("forward = {:?}", graph.forward_targets());

    let back = decode_watermark(&graph, DecodeMode::Strict).expect("fresh graph decodes");
    println!("decoded = {back}");
    assert_eq!(back, w);
}

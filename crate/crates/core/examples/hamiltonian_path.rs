//! The codec graph has exactly one Hamiltonian path, and DFS finds it
//! whichever way neighbors are ordered.

use rpgmark::analysis::{unique_hamiltonian_path_with, NeighborOrder};
use rpgmark::{encode_watermark, Watermark};

fn main() {
    let w: Watermark = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "1234".into())
        .parse()
        .expect("positive integer");
    let g = encode_watermark(&w).1.to_flow_graph();
    for order in [NeighborOrder::Ascending, NeighborOrder::Descending] {
        let hp = unique_hamiltonian_path_with(&g, order).expect("codec graphs have one");
        println!("{order:?}: {:?}", hp.order());
    }
}

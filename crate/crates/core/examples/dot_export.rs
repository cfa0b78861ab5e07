//! Write a Graphviz rendering of a codec graph.
//!
//! cargo run --example dot_export -- 12 | dot -Tsvg > w12.svg

use rpgmark::io::export_dot;
use rpgmark::{encode_watermark, Watermark};

fn main() {
    let w: Watermark = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "12".into())
        .parse()
        .expect("positive integer");
    print!("{}", export_dot(&encode_watermark(&w).1, true));
}

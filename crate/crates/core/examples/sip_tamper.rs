//! Tamper with a codec permutation and see which checks fire.

use rpgmark::attack::{change_value, delete_position, swap_positions};
use rpgmark::{encode_w_to_sip, validate_sip, Watermark};

fn show(label: &str, seq: &[usize]) {
    let report = validate_sip(seq);
    println!("{label:<12} {seq:?}");
    println!("{:<12} {report}", "");
}

fn main() {
    let sip = encode_w_to_sip(&Watermark::from(12u32));
    let s = sip.as_slice();
    show("original", s);
    show("deleted 4", &delete_position(s, 4));
    show("value 7->3", &change_value(s, 7, 3));
    // swapping the two halves of a 2-cycle keeps the involution
    show("swap 1,5", &swap_positions(s, 1, 5));
    show("swap 3,4", &swap_positions(s, 3, 4));
}

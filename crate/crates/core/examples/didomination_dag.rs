//! Max-didominator pointers from the stack pass, cross-checked against the
//! full didomination DAG.
//!
//! cargo run --example didomination_dag -- 8 3 2 7 1 9 6 5 4

use rpgmark::rpg::build_didomination_dag;
use rpgmark::{compute_max_didominators, Permutation};

fn main() {
    let values: Vec<usize> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("positive integers"))
        .collect();
    let values = if values.is_empty() {
        vec![8, 3, 2, 7, 1, 9, 6, 5, 4]
    } else {
        values
    };
    let p = Permutation::new(values).unwrap_or_else(|e| {
        eprintln!("{e}");
        std::process::exit(2);
    });

    let dag = build_didomination_dag(&p);
    println!("pi = ({p})");
    for i in 1..=p.len() {
        println!("  {i} directly dominates {:?}", dag.didominated_by(i));
    }
    println!("DAG edges (s = {}, t = 0): {:?}", dag.source(), dag.edges());

    let stack = compute_max_didominators(&p);
    for (i, m) in stack.iter() {
        println!("  p({i}) = {m}");
    }
    assert_eq!(stack.into_vec(), dag.max_predecessors());
}

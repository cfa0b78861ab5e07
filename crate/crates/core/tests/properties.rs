use std::collections::{HashMap, HashSet};

use num_bigint::BigUint;
use proptest::prelude::*;
use rpgmark::analysis::{unique_hamiltonian_path_with, NeighborOrder};
use rpgmark::attack::{apply_graph_attack, replay_graph_edits, AttackedGraph};
use rpgmark::io::{read_rpg, read_unlabeled, write_rpg, write_unlabeled};
use rpgmark::sip::{to_cycle_representation, BitBlocks, Cycle, PositionSequences};
use rpgmark::*;

mod common;

fn watermark_bits() -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..=1, 0..300).prop_map(|mut tail| {
        tail.insert(0, 1);
        tail
    })
}

fn permutation(max: usize) -> impl Strategy<Value = Vec<usize>> {
    (1..=max).prop_flat_map(|n| Just((1..=n).collect::<Vec<_>>()).prop_shuffle())
}

fn rpg_of(values: Vec<usize>) -> ReduciblePermutationGraph {
    encode_sip_to_rpg(&Permutation::new(values).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn sip_round_trip(bits in watermark_bits()) {
        let w = Watermark::from_bits(&bits).unwrap();
        let sip = encode_w_to_sip(&w);
        prop_assert_eq!(decode_sip_to_w(sip.as_slice(), DecodeMode::Strict).unwrap(), w.clone());
        prop_assert_eq!(decode_sip_to_w(sip.as_slice(), DecodeMode::Lenient).unwrap(), w);
    }

    #[test]
    fn sip_matches_string_oracle(w in 1u64..=u64::MAX) {
        let sip = encode_w_to_sip(&Watermark::try_from(w).unwrap());
        prop_assert_eq!(sip.as_slice(), &common::naive_sip(w)[..]);
    }

    #[test]
    fn sip_shape(bits in watermark_bits()) {
        let w = Watermark::from_bits(&bits).unwrap();
        let n = bits.len();
        let sip = encode_w_to_sip(&w);
        let s = sip.as_slice();
        prop_assert_eq!(s.len(), 2 * n + 1);
        for (idx, &v) in s.iter().enumerate() {
            prop_assert_eq!(s[v - 1], idx + 1);
        }
        let cycles = to_cycle_representation(&sip);
        let fixed = cycles.cycles().iter().filter(|c| matches!(c, Cycle::Fixed(_))).count();
        prop_assert_eq!(fixed, 1);
        prop_assert_eq!(cycles.cycles().len(), n + 1);
        prop_assert_eq!(cycles.len(), 2 * n + 1);
        prop_assert!(validate_sip(s).is_valid());
    }

    #[test]
    fn x_prefix_is_zero_positions(bits in watermark_bits()) {
        let w = Watermark::from_bits(&bits).unwrap();
        let blocks = BitBlocks::from_watermark(&w);
        let seqs = PositionSequences::from_bits(&blocks.b_star);
        let n = bits.len();
        // B* starts with n ones, so X never touches the padding block
        prop_assert!(seqs.x.iter().all(|&p| p > n));
        prop_assert_eq!(seqs.x.len() + seqs.y.len(), 2 * n + 1);
        prop_assert_eq!(*seqs.x.last().unwrap(), 2 * n + 1);
    }

    #[test]
    fn big_watermark_value_round_trip(bytes in prop::collection::vec(any::<u8>(), 1..64)) {
        let v = BigUint::from_bytes_be(&bytes);
        prop_assume!(v.bits() > 0);
        let w = Watermark::new(v.clone()).unwrap();
        let (_, graph) = encode_watermark(&w);
        prop_assert_eq!(decode_watermark(&graph, DecodeMode::Strict).unwrap().into_value(), v);
    }

    #[test]
    fn rpg_round_trip_any_permutation(p in permutation(60)) {
        let g = rpg_of(p.clone());
        prop_assert_eq!(decode_rpg_to_sip(&g).into_vec(), p);
    }

    #[test]
    fn rpg_forward_targets_match_oracle(p in permutation(40)) {
        let oracle = common::naive_max_didominators(&p);
        let g = rpg_of(p.clone());
        for (i, &m) in oracle.iter().enumerate().skip(1) {
            prop_assert_eq!(g.forward_target(i), m, "element {}", i);
        }
    }

    #[test]
    fn rpg_edge_structure(p in permutation(60)) {
        let n = p.len();
        let g = rpg_of(p).to_flow_graph();
        prop_assert_eq!(g.edges().len(), 2 * n + 1);
        prop_assert!(validate_rpg(&g).ok());

        // forward edges alone: every edge climbs, so no cycle
        for e in g.edges().iter().filter(|e| e.kind == EdgeKind::Forward) {
            prop_assert!(e.to > e.from);
        }

        // list edges alone: one path header → footer
        let list: HashMap<usize, usize> = g
            .edges()
            .iter()
            .filter(|e| e.kind == EdgeKind::List)
            .map(|e| (e.from, e.to))
            .collect();
        prop_assert_eq!(list.len(), n + 1);
        let mut at = g.header();
        let mut visited = HashSet::from([at]);
        while let Some(&next) = list.get(&at) {
            prop_assert!(visited.insert(next));
            at = next;
        }
        prop_assert_eq!(at, g.footer());
        prop_assert_eq!(visited.len(), n + 2);
    }

    #[test]
    fn hamiltonian_path_is_descending(p in permutation(60)) {
        let g = rpg_of(p).to_flow_graph();
        let expect: Vec<usize> = (0..g.node_count()).rev().collect();
        for order in [NeighborOrder::Ascending, NeighborOrder::Descending] {
            let hp = unique_hamiltonian_path_with(&g, order).unwrap();
            prop_assert_eq!(hp.order(), &expect[..]);
        }
    }

    #[test]
    fn serialization_round_trip(p in permutation(60)) {
        let g = rpg_of(p);
        let text = write_rpg(&g);
        prop_assert_eq!(&read_rpg(&text).unwrap(), &g);
        prop_assert_eq!(write_rpg(&read_rpg(&text).unwrap()), text);

        let u = g.to_flow_graph().strip_labels();
        let text = write_unlabeled(&u);
        prop_assert_eq!(read_unlabeled(&text).unwrap().sorted_edges(), u.sorted_edges());
    }

    #[test]
    fn restore_undoes_any_relabeling(p in permutation(50), seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let g = rpg_of(p);
        let mut ids: Vec<u64> = (0..g.node_count() as u64).map(|i| i * 7 + 1000).collect();
        ids.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let scrambled = g.to_flow_graph().strip_labels().relabel(|v| ids[v as usize]);
        prop_assert_eq!(restore_labels(&scrambled).unwrap(), g);
    }

    #[test]
    fn repair_is_idempotent(p in permutation(50), drop in any::<prop::sample::Index>()) {
        let g = rpg_of(p);
        let (same, report) = repair_list_pointers(&g.to_flow_graph()).unwrap();
        prop_assert_eq!(&same, &g);
        prop_assert!(report.is_empty());

        let mut damaged = g.to_flow_graph();
        let list: Vec<usize> = damaged
            .edges()
            .iter()
            .enumerate()
            .filter(|(_, e)| e.kind == EdgeKind::List)
            .map(|(i, _)| i)
            .collect();
        damaged.edges_mut().remove(list[drop.index(list.len())]);
        let (fixed, report) = repair_list_pointers(&damaged).unwrap();
        prop_assert_eq!(&fixed, &g);
        prop_assert_eq!(report.missing.len(), 1);
        let (again, report) = repair_list_pointers(&fixed.to_flow_graph()).unwrap();
        prop_assert_eq!(again, fixed);
        prop_assert!(report.is_empty());
    }

    #[test]
    fn graph_attacks_are_deterministic_and_replayable(
        p in permutation(30),
        kind in prop::sample::select(vec![
            AttackKind::EdgeFlip,
            AttackKind::EdgeAdd,
            AttackKind::EdgeDel,
            AttackKind::LabelScramble,
            AttackKind::LabelStrip,
            AttackKind::NodeDel,
        ]),
        count in 1usize..3,
        seed in any::<u64>(),
    ) {
        let g = rpg_of(p);
        let spec = AttackSpec::new(kind, count, seed).unwrap();
        let (Ok(a), Ok(b)) = (apply_graph_attack(&g, &spec), apply_graph_attack(&g, &spec)) else {
            // too many edits for a tiny graph
            return Ok(());
        };
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(replay_graph_edits(&g.to_flow_graph(), &a.log), a.graph.clone());
        if let AttackedGraph::Unlabeled(u) = &a.graph {
            prop_assert_eq!(restore_labels(u).unwrap(), g);
        }
    }

    #[test]
    fn single_edge_damage_is_detected(p in permutation(40), pick in any::<prop::sample::Index>(), flip in any::<bool>()) {
        let g = rpg_of(p).to_flow_graph();
        let mut damaged = g.clone();
        let i = pick.index(damaged.edges().len());
        if flip {
            let e = damaged.edges()[i].reversed();
            damaged.edges_mut()[i] = e;
        } else {
            damaged.edges_mut().remove(i);
        }
        prop_assert!(!validate_rpg(&damaged).ok());
    }
}

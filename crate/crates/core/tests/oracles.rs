use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rpgmark::attack::{run_detection_campaign, Outcome};
use rpgmark::rpg::build_didomination_dag;
use rpgmark::*;

mod common;

#[test]
fn encoder_matches_string_oracle_for_small_watermarks() {
    for w in 1..=5000u64 {
        let sip = encode_w_to_sip(&Watermark::try_from(w).unwrap());
        assert_eq!(sip.as_slice(), &common::naive_sip(w)[..], "w = {w}");
    }
}

#[test]
fn didomination_dag_matches_cubic_definition() {
    for n in 1..=7 {
        for p in common::all_permutations(n) {
            let dag = build_didomination_dag(&Permutation::new(p.clone()).unwrap());
            let body: Vec<_> = dag.body_edges().collect();
            assert_eq!(body, common::naive_didominations(&p), "{p:?}");
            assert!(dag.is_acyclic());
        }
    }
}

#[test]
fn didomination_dag_source_and_sink_edges() {
    let p = vec![8, 3, 2, 7, 1, 9, 6, 5, 4];
    let dag = build_didomination_dag(&Permutation::new(p.clone()).unwrap());
    let naive = common::naive_didominations(&p);
    for v in 1..=9 {
        let has_pred = naive.iter().any(|&(_, b)| b == v);
        let has_succ = naive.iter().any(|&(a, _)| a == v);
        assert_eq!(dag.edges().contains(&(10, v)), !has_pred, "s -> {v}");
        assert_eq!(dag.edges().contains(&(v, 0)), !has_succ, "{v} -> t");
    }
    let mut d7 = dag.didominated_by(7);
    d7.sort_unstable();
    assert_eq!(d7, vec![1, 6]);
}

#[test]
fn stack_matches_cubic_oracle_on_random_permutations() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..200 {
        let len = rng.gen_range(1..=120);
        let p = common::random_sip(&mut rng, len);
        let stack = compute_max_didominators(&Permutation::new(p.clone()).unwrap());
        let naive = common::naive_max_didominators(&p);
        for (i, &m) in naive.iter().enumerate().skip(1) {
            assert_eq!(stack.get(i), m, "{p:?} element {i}");
        }
    }
}

#[test]
fn max_didominators_of_worked_example() {
    let p = Permutation::new(vec![5, 6, 9, 8, 1, 2, 7, 4, 3]).unwrap();
    let got: Vec<usize> = (1..=9)
        .map(|i| compute_max_didominators(&p).get(i))
        .collect();
    let naive = common::naive_max_didominators(p.as_slice());
    assert_eq!(got, naive[1..]);
    // 5↦10, 6↦10, 9↦10, 8↦9, 1↦8, 2↦8, 7↦8, 4↦7, 3↦4
    assert_eq!(got, vec![8, 8, 4, 7, 10, 10, 8, 9, 10]);
}

#[test]
fn control_trials_decode_and_single_flips_are_caught() {
    let mut cfg = CampaignConfig::new(
        1..=64,
        vec![
            AttackSpec::single(AttackKind::EdgeFlip, 0),
            AttackSpec::single(AttackKind::EdgeDel, 0),
            AttackSpec::single(AttackKind::LabelStrip, 0),
        ],
    );
    cfg.control = true;
    cfg.exhaustive = true;
    let report = run_detection_campaign(&cfg);
    for r in &report.records {
        match r.kind {
            None | Some(AttackKind::LabelStrip) => assert_eq!(r.outcome, Outcome::Correct, "{r:?}"),
            Some(_) => assert_eq!(r.outcome, Outcome::Detected, "{r:?}"),
        }
    }
    assert_eq!(report, run_detection_campaign(&cfg));

    let mut csv = Vec::new();
    report.write_csv(&mut csv).unwrap();
    let csv = String::from_utf8(csv).unwrap();
    assert!(csv.starts_with("w,attack,target,count,seed,outcome,repaired,violated\n"));
    assert_eq!(csv.lines().count(), report.trials() + 1);
}

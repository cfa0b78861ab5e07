//! Run every attack kind over a range of watermarks and summarize the
//! outcomes; pass `--csv` for the per-trial rows.

use rpgmark::attack::run_detection_campaign;
use rpgmark::{AttackKind, AttackSpec, CampaignConfig};

fn main() {
    let csv = std::env::args().any(|a| a == "--csv");
    let specs = AttackKind::ALL
        .into_iter()
        .filter(|k| k.applies_to_graph())
        .flat_map(|k| (1..=2).map(move |count| AttackSpec::new(k, count, 7).unwrap()))
        .collect();
    let mut cfg = CampaignConfig::new(1..=200, specs);
    cfg.trials = 8;
    cfg.control = true;

    let report = run_detection_campaign(&cfg);
    if csv {
        if report.write_csv(std::io::stdout().lock()).is_err() {
            std::process::exit(1);
        }
        return;
    }
    println!("{}", report.summary());
}

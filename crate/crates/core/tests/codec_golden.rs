mod common;

use common::q;
use structroute::codec::{build_schedule, simulate, SimReport, SourceModel, SymbolSource};
use structroute::corpus;
use structroute::flows::{sequential_construct, DemandVector};

const GOLDEN: &str = "tests/golden/butterfly_skewed.txt";

fn butterfly_report(seed: u64) -> SimReport {
    let net = corpus::butterfly().network;
    let h = DemandVector::uniform(2, q(1, 2)).unwrap();
    let flow = sequential_construct(&net, &h).unwrap().flow;
    let sources = SourceModel {
        sources: vec![
            SymbolSource {
                probs: vec![q(3, 4), q(1, 4)],
                period: 2,
            },
            SymbolSource::uniform(2, 2),
        ],
    };
    let schedule = build_schedule(&net, &flow, &sources, &q(0, 1), Some(8)).unwrap();
    simulate(&net, &schedule, &sources, 200, seed).unwrap()
}

#[test]
fn report_matches_golden_file() {
    let text = butterfly_report(7).to_text();
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join(GOLDEN);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &text).unwrap();
    }
    let expected =
        std::fs::read_to_string(&path).expect("golden file; set UPDATE_GOLDEN=1 to create");
    assert_eq!(text, expected);
}

#[test]
fn report_is_reproducible_and_seed_sensitive() {
    assert_eq!(butterfly_report(3), butterfly_report(3));
    assert_ne!(butterfly_report(3).to_text(), butterfly_report(4).to_text());
}

#[test]
fn skewed_source_compresses_below_its_routed_rate() {
    let r = butterfly_report(11);
    assert!(r.all_reconstructed() && r.all_within_bound());
    let p1 = &r.pairs[0];
    assert!(p1.entropy_rate < 0.5);
    assert!(p1.expected_code_bits_per_step <= p1.entropy_rate + 1.0 / 8.0 + 1e-12);
}

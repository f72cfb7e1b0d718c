//! Every constructed state meeting a lemma's hypothesis, checked for safety.
//!
//! `cargo run --release --example lemmas -- 14`

use babylon::harness::{emit_report, verify_lemma, ReportFormat};
use babylon::strategy::LemmaId;
use babylon::Solver;

fn main() {
    let max_n = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(14);
    let solver = Solver::new();
    for lemma in [
        LemmaId::TallLoneStack,
        LemmaId::ShortLoneStack,
        LemmaId::TwoSingletons,
        LemmaId::ThreeSingletons,
    ] {
        let report = verify_lemma(&solver, lemma, max_n).expect("within the bound");
        print!("{}", emit_report(&report, ReportFormat::Text));
    }
}

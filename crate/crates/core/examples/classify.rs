//! Who wins p-versus-q, in closed form, checked against the solver.
//!
//! `cargo run --release --example classify -- 16`

use babylon::harness::{emit_report, verify_theorem, ReportFormat};
use babylon::strategy::{classify_winner, GameConfig};
use babylon::Solver;

fn main() {
    let max_n = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(16);
    for (p, q) in [(1, 1), (2, 6), (3, 4), (3, 9), (5, 5)] {
        let c = classify_winner(GameConfig::new(p, q).expect("p <= q"));
        println!("({p},{q}): {c}");
    }
    let report = verify_theorem(&Solver::new(), max_n).expect("within the bound");
    print!("{}", emit_report(&report, ReportFormat::Text));
    print!("{}", emit_report(&report, ReportFormat::Csv));
}

//! Exhaustive walks of both scripted strategies.
//!
//! `cargo run --release --example strategy_walks -- 12`

use babylon::harness::{emit_report, verify_alice_range, verify_bob_range, ReportFormat};
use babylon::Solver;

fn main() {
    let max_n = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(12);
    let solver = Solver::new();
    for report in [
        verify_bob_range(&solver, max_n).expect("within bounds"),
        verify_alice_range(&solver, max_n - 1).expect("within bounds"),
    ] {
        print!("{}", emit_report(&report, ReportFormat::Text));
        print!("{}", emit_report(&report, ReportFormat::Csv));
    }
}

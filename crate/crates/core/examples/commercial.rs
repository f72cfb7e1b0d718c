//! The boxed game: four colors, three chips each. The second player wins.
//!
//! `cargo run --release --example commercial`

use babylon::harness::{emit_report, verify_commercial, ReportFormat};
use babylon::solver::state_space_stats;
use babylon::{Solver, SolverLimits};

fn main() {
    let solver = Solver::new();
    let report = verify_commercial(&solver).expect("within the bound");
    print!("{}", emit_report(&report, ReportFormat::Text));
    println!("{} canonical positions solved", solver.table().len());
    let stats = state_space_stats(&[3, 3, 3, 3], &SolverLimits::default()).expect("within the bound");
    println!("reachable: {stats:?}");
}

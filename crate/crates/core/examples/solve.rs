//! Perfect play from arbitrary states, and the size of the reachable space.
//!
//! `cargo run --release --example solve -- "<2,4;4;2>"`

use babylon::solver::state_space_stats;
use babylon::{format_move, parse_state, Solver, SolverLimits};

fn main() {
    let solver = Solver::new();
    let states: Vec<String> = std::env::args().skip(1).collect();
    let states = if states.is_empty() {
        vec!["<2,2;2;2>".to_string(), "<2,4;4;2>".into(), "<2,0;2;2>".into(), "<3,9;;>".into()]
    } else {
        states
    };
    for text in &states {
        let state = parse_state(text).expect("valid state");
        let outcome = solver.solve(&state).expect("within the bound");
        let best: Vec<String> = solver
            .optimal_moves(&state)
            .expect("within the bound")
            .iter()
            .map(format_move)
            .collect();
        println!(
            "{text:<14} {} to move, {} wins; winning moves: [{}]",
            state.mover(),
            outcome.winner,
            best.join(" ")
        );
    }
    println!("table: {} entries, {} hits", solver.table().len(), solver.table().hits());

    let limits = SolverLimits::default();
    for counts in [&[2, 2][..], &[3, 3], &[4, 6], &[3, 3, 3, 3]] {
        let s = state_space_stats(counts, &limits).expect("within the bound");
        println!(
            "{counts:?}: {} labelled states, {} up to color swaps, {} terminal, depth {}",
            s.labelled_states, s.canonical_states, s.terminal_states, s.max_depth
        );
    }
}

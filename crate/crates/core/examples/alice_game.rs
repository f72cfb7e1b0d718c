//! Alice's scripts for one or two minority chips, against a random Bob.
//!
//! `cargo run --release --example alice_game -- 2 7 3`

use babylon::codec::display_state;
use babylon::strategy::{alice_move, GameConfig};
use babylon::Solver;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

fn main() {
    let args: Vec<u64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (p, q, seed) = match args[..] {
        [p, q, seed, ..] => (p as u32, q as u32, seed),
        _ => (2, 7, 1),
    };
    let config = GameConfig::new(p, q).expect("p <= q");
    let solver = Solver::new();
    let mut rng = StdRng::seed_from_u64(seed);
    let mut state = config.initial_state();
    println!("start {}", display_state(&state));
    loop {
        let d = alice_move(&solver, &state, config).expect("Alice to move");
        state = state.apply(&d.mv).expect("scripted moves are legal");
        println!("alice {:<9} [{}] -> {}", d.mv.to_string(), d.rule_tag, display_state(&state));
        let moves = state.legal_moves();
        let Some(bob) = moves.choose(&mut rng) else {
            println!("Bob cannot move: Alice wins");
            break;
        };
        state = state.apply(bob).expect("legal");
        println!("bob   {:<9}    -> {}", bob.to_string(), display_state(&state));
        if state.is_terminal() {
            println!("Alice cannot move: Bob wins");
            break;
        }
    }
}

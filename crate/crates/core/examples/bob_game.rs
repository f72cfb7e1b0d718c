//! Bob's scripted strategy against a random Alice, one game per seed,
//! printing every reply with the rule that produced it.
//!
//! `cargo run --release --example bob_game -- 6 8 42`

use babylon::codec::display_state;
use babylon::strategy::{bob_move, GameConfig, PhaseMemory};
use babylon::Solver;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

fn main() {
    let args: Vec<u64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (p, q, seed) = match args[..] {
        [p, q, seed, ..] => (p as u32, q as u32, seed),
        _ => (6, 8, 1),
    };
    let solver = Solver::new();
    let mut rng = StdRng::seed_from_u64(seed);
    let mut memory = PhaseMemory::new(GameConfig::new(p, q).expect("p <= q")).expect("even n, p >= 3");
    println!("start {}", display_state(&memory.position));
    loop {
        let moves = memory.position.legal_moves();
        let Some(alice) = moves.choose(&mut rng) else {
            println!("Alice cannot move: Bob wins");
            break;
        };
        let (decision, next) = bob_move(&solver, &memory, alice).expect("legal Alice move");
        let after = memory.position.apply(alice).expect("legal");
        println!(
            "alice {alice:<9} {:<16} bob {:<9} [{}{}] phase {}",
            display_state(&after),
            decision.mv.to_string(),
            decision.rule_tag,
            decision.waiver.map(|w| format!(", {w}")).unwrap_or_default(),
            next.phase.as_str()
        );
        memory = next;
    }
    println!("end {}", display_state(&memory.position));
}

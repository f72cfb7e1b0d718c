//! The move rule: a stack goes onto another of the same top color or the
//! same height. Illegal moves name the clause they break.
//!
//! `cargo run --example rules`

use babylon::codec::display_state;
use babylon::{parse_move, parse_state};

fn main() {
    let state = parse_state("r:2,1,1|b:2,1").expect("valid state");
    println!("state {}, {} to move", display_state(&state), state.mover());
    for mv in state.legal_moves() {
        let next = state.apply(&mv).expect("listed moves are legal");
        println!("  {:<10} -> {}", mv.to_string(), display_state(&next));
    }
    for text in ["r@2>b@1", "r@3>r@1", "b@2>b@2"] {
        let mv = parse_move(text).expect("well-formed");
        match state.apply(&mv) {
            Ok(next) => println!("{text}: ok -> {}", display_state(&next)),
            Err(e) => println!("{text}: rejected [{}] {e}", e.clause()),
        }
    }
    let end = parse_state("r:3|b:2").expect("valid state");
    println!("{}: terminal = {}", display_state(&end), end.is_terminal());
}

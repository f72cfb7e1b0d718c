//! Both state grammars and the move grammar, with round trips.
//!
//! `cargo run --example notation`

use babylon::codec::display_state;
use babylon::{format_move, format_state, parse_move, parse_state, ShapeDescriptor, Style};

fn main() {
    for text in ["<3,9;;>", "<2,2;2;2>", "<1,3;2,2;>", "r:4,1,1|b:2,1,1", "r:1,1,1|b:1,1,1|g:1,1,1|y:1,1,1"] {
        let state = parse_state(text).expect("valid");
        let generic = format_state(&state, Style::Generic).expect("always formats");
        let shape = format_state(&state, Style::Shape).unwrap_or_else(|e| format!("({e})"));
        assert_eq!(parse_state(&display_state(&state)).expect("round trip"), state);
        println!("{text:<32} generic {generic:<28} shape {shape}");
    }
    let shape = ShapeDescriptor::of(&parse_state("<3,5;4;2>").expect("valid")).expect("two colors");
    println!("descriptor {shape:?}, reflected {}", shape.reflect());
    let mv = parse_move(" r@1 > b@1 ").expect("whitespace is allowed");
    println!("move {} (result {})", format_move(&mv), mv.result());
    for bad in ["<3,9;", "r:0|b:1", "x:1"] {
        println!("{bad:<10} {}", parse_state(bad).unwrap_err());
    }
}

//! Two-color Babylon: rules, text formats, a perfect-play solver, the
//! scripted winning strategies, and an exhaustive verification harness.
//!
//! ```
//! use babylon::codec::parse_state;
//! use babylon::solver::Solver;
//!
//! let solver = Solver::new();
//! assert!(solver.is_safe(&parse_state("<2,2;2;2>").unwrap()).unwrap());
//! ```

pub mod cli;
pub mod codec;
pub mod game;
pub mod harness;
pub mod service;
pub mod solver;
pub mod strategy;

pub use codec::{format_move, format_state, parse_move, parse_state, ShapeDescriptor, Style};
pub use game::{CanonicalKey, Color, GameState, IllegalMove, Move, Player, StackClass, StackId};
pub use solver::{Outcome, Solver, SolverLimits};

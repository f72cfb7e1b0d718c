//! Alice's strategies with one or two red chips.
//!
//! Even chip count: get rid of red, after which the one-color game has an odd
//! number of moves left. Odd chip count: keep a single red stack alive and
//! double it onto any blue stack that threatens it.

use crate::game::{Color, GameState, Move, Player, StackId};
use crate::solver::Solver;
use crate::strategy::{GameConfig, RuleTag, StrategyDecision, StrategyError, Waiver};

fn blue(h: u32) -> StackId {
    StackId::new(Color::BLUE, h)
}

fn red(h: u32) -> StackId {
    StackId::new(Color::RED, h)
}

/// Alice's move from `state` in the game started from `config`.
///
/// Configurations with three or more red chips get a flagged solver move.
pub fn alice_move(
    solver: &Solver,
    state: &GameState,
    config: GameConfig,
) -> Result<StrategyDecision, StrategyError> {
    if state.mover() != Player::First {
        return Err(StrategyError::precondition("it is not Alice's turn"));
    }
    if state.is_terminal() {
        return Err(StrategyError::precondition("the game is over"));
    }
    let fallback = || StrategyDecision::fallback(solver, state, RuleTag::Fallback, Waiver::AliceDeferred);
    if config.p > 2 || state.color_count() != 2 {
        return fallback();
    }
    let reds = state.heights_of(Color::RED);
    let blues = state.heights_of(Color::BLUE);
    if reds.is_empty() || blues.is_empty() {
        let mv = state.legal_moves()[0];
        return Ok(StrategyDecision::scripted(mv, RuleTag::AliceOneColor));
    }
    let has_blue = |h| blues.contains(&h);
    let odd = state.total_chips() % 2 == 1;
    let scripted = match (odd, reds.as_slice()) {
        (_, [1, 1]) => Some((Move::new(red(1), red(1)), RuleTag::AliceStackRed)),
        (false, [1]) if has_blue(1) => Some((Move::new(blue(1), red(1)), RuleTag::AliceCoverRed)),
        (false, [2]) if has_blue(2) => {
            Some((Move::new(blue(2), red(2)), RuleTag::AliceCoverRedHill))
        }
        (true, [1]) if has_blue(1) => Some((Move::new(red(1), blue(1)), RuleTag::AliceRedOnBlue)),
        (true, [h]) if has_blue(*h) => Some((Move::new(red(*h), blue(*h)), RuleTag::AliceDouble)),
        (true, [h]) => blue_merge(&blues, *h).map(|mv| (mv, RuleTag::AliceBlueMerge)),
        _ => None,
    };
    match scripted {
        Some((mv, tag)) => Ok(StrategyDecision::scripted(mv, tag)),
        None => fallback(),
    }
}

/// First pair of blue stacks whose merged height differs from the red one.
fn blue_merge(blues: &[u32], red_height: u32) -> Option<Move> {
    for (i, &a) in blues.iter().enumerate() {
        for &b in &blues[i + 1..] {
            if a + b != red_height {
                return Some(Move::new(blue(a), blue(b)));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::parse_move;

    fn first(p: u32, q: u32) -> StrategyDecision {
        let config = GameConfig::new(p, q).unwrap();
        alice_move(&Solver::new(), &config.initial_state(), config).unwrap()
    }

    #[test]
    fn opening_moves() {
        assert_eq!(first(1, 5).mv, parse_move("b@1>r@1").unwrap());
        assert_eq!(first(1, 5).rule_tag, RuleTag::AliceCoverRed);
        assert_eq!(first(2, 6).mv, parse_move("r@1>r@1").unwrap());
        assert_eq!(first(1, 6).mv, parse_move("r@1>b@1").unwrap());
        assert_eq!(first(1, 6).rule_tag, RuleTag::AliceRedOnBlue);
    }

    #[test]
    fn doubles_onto_a_challenger() {
        let state = crate::codec::parse_state("r:4|b:4,1,1,1,1,1").unwrap();
        let config = GameConfig::new(2, 7).unwrap();
        let d = alice_move(&Solver::new(), &state, config).unwrap();
        assert_eq!(d.rule_tag, RuleTag::AliceDouble);
        assert_eq!(d.mv, parse_move("r@4>b@4").unwrap());
    }

    #[test]
    fn larger_minorities_fall_back() {
        let d = first(3, 4);
        assert!(d.fallback_used);
        assert_eq!(d.waiver, Some(Waiver::AliceDeferred));
    }
}

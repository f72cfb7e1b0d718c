//! Hypotheses of the four safety lemmas, and the lone-stack endgame moves.

use serde::{Deserialize, Serialize};

use crate::game::{Color, GameState, Move};
#[cfg(test)]
use crate::game::StackId;
use crate::strategy::shape::{half, is_even_state, three_singleton_forms, two_singleton_forms};
use crate::strategy::{RuleTag, StrategyDecision, StrategyError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LemmaId {
    /// Even state, lone stack taller than half the chips.
    TallLoneStack = 1,
    /// Odd state, lone stack shorter than half the chips.
    ShortLoneStack = 2,
    /// `<2,2s;2u;2v>`
    TwoSingletons = 3,
    /// `<3,k;2u;2v>`
    ThreeSingletons = 4,
}

impl LemmaId {
    pub const ALL: [LemmaId; 4] = [
        LemmaId::TallLoneStack,
        LemmaId::ShortLoneStack,
        LemmaId::TwoSingletons,
        LemmaId::ThreeSingletons,
    ];

    pub fn from_number(n: u8) -> Option<LemmaId> {
        LemmaId::ALL.into_iter().find(|l| l.number() == n)
    }

    pub fn number(self) -> u8 {
        self as u8
    }
}

/// The color with exactly one stack, and that stack's height, when the other
/// color still has at least one stack.
pub fn lone_stack(state: &GameState) -> Option<(Color, u32)> {
    if state.color_count() != 2 {
        return None;
    }
    lone_stack_candidates(state).next()
}

/// Whether the state meets the full hypothesis of the lemma, in either color
/// orientation. Only two-color states with an even chip count qualify.
pub fn lemma_applies(lemma: LemmaId, state: &GameState) -> bool {
    if state.color_count() != 2 {
        return false;
    }
    let Some(m) = half(state) else {
        return false;
    };
    match lemma {
        LemmaId::TallLoneStack => {
            is_even_state(state) && lone_stack_candidates(state).any(|(_, h)| h > m)
        }
        LemmaId::ShortLoneStack => {
            !is_even_state(state)
                && lone_stack_candidates(state).any(|(c, u)| short_lone_stack_ok(state, c, u, m))
        }
        LemmaId::TwoSingletons => !two_singleton_forms(state, true).is_empty(),
        LemmaId::ThreeSingletons => !three_singleton_forms(state).is_empty(),
    }
}

fn lone_stack_candidates(state: &GameState) -> impl Iterator<Item = (Color, u32)> + '_ {
    [Color::RED, Color::BLUE].into_iter().filter_map(|c| {
        let mine = state.heights_of(c);
        (mine.len() == 1 && state.stack_count_of(c.other()) > 0).then(|| (c, mine[0]))
    })
}

fn short_lone_stack_ok(state: &GameState, lone: Color, u: u32, m: u32) -> bool {
    let others = state.heights_of(lone.other());
    let all_half = others.iter().all(|&h| 2 * h == u);
    let at_u = others.iter().filter(|&&h| h == u).count();
    u < m && !all_half && at_u <= 2
}

/// Bookkeeping for one lone-stack endgame move.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma2Context {
    /// Height of the lone stack.
    pub lone_height: u32,
    pub lone_color: Color,
    /// Heights of the other color's stacks, ascending.
    pub other_heights: Vec<u32>,
    /// Number of stacks of the other color.
    pub t: usize,
    /// Height of the stack the move builds.
    pub built: u32,
}

/// Bob's move from an odd state with a short lone stack.
pub fn lemma2_move(state: &GameState) -> Result<(StrategyDecision, Lemma2Context), StrategyError> {
    let m = half(state).ok_or_else(|| StrategyError::precondition("chip count is odd"))?;
    if is_even_state(state) {
        return Err(StrategyError::precondition("lone-stack endgame needs an odd state"));
    }
    let (lone, u) = lone_stack_candidates(state)
        .find(|&(c, u)| short_lone_stack_ok(state, c, u, m))
        .ok_or_else(|| StrategyError::precondition("no short lone stack"))?;
    let y = lone.other();
    let heights = state.heights_of(y);
    let at_u = heights.iter().filter(|&&h| h == u).count();
    let (mv, tag) = if at_u == 2 {
        (Move::stacks(y, u, y, u), RuleTag::Lemma2PairU)
    } else if at_u == 1 {
        let other = heights
            .iter()
            .copied()
            .find(|&h| h != u)
            .ok_or_else(|| StrategyError::precondition("no second stack of the other color"))?;
        (Move::stacks(y, u, y, other), RuleTag::Lemma2KillU)
    } else {
        let mut best: Option<(u32, u32)> = None;
        for (i, &a) in heights.iter().enumerate() {
            for &b in &heights[i + 1..] {
                if a + b != u && best.is_none_or(|(x, y)| a + b > x + y) {
                    best = Some((a, b));
                }
            }
        }
        let (a, b) = best.ok_or_else(|| {
            StrategyError::precondition("every pair of stacks sums to the lone height")
        })?;
        (Move::stacks(y, a, y, b), RuleTag::Lemma2Main)
    };
    let context = Lemma2Context {
        lone_height: u,
        lone_color: lone,
        t: heights.len(),
        built: mv.result().height,
        other_heights: heights,
    };
    Ok((StrategyDecision::scripted(mv, tag), context))
}

/// Endgame rule for Bob's turn: a lone stack taller than half the chips can
/// never be covered (any move will do); a short one is handled by
/// [`lemma2_move`]. `None` when neither applies.
pub fn endgame_move(state: &GameState) -> Option<StrategyDecision> {
    let m = half(state)?;
    if is_even_state(state) {
        return None;
    }
    if lone_stack_candidates(state).any(|(_, h)| h > m) {
        let mv = *state.legal_moves().first()?;
        return Some(StrategyDecision::scripted(mv, RuleTag::Lemma1Free));
    }
    lemma2_move(state).ok().map(|(d, _)| d)
}

//! Bob's winning strategy for an even number of chips with at least three of
//! the minority color.
//!
//! Dispatch runs on the state Alice just moved from:
//!
//! 1. the opening reply (tables for five, four and six-or-more minority chips);
//! 2. from a target state, the even-hill replies, switching to the
//!    three-singleton or two-singleton regimes when a reply would leave fewer
//!    than four singletons of a color;
//! 3. the case tables for `<3,k;2u;2v>` and `<2,2s;2u;2v>`;
//! 4. lone-stack endgames;
//! 5. the solver, flagged as a fallback.

use serde::{Deserialize, Serialize};

use crate::codec::display_state;
use crate::game::{GameState, Move, Player, StackId};
use crate::solver::Solver;
use crate::strategy::lemmas::{endgame_move, lone_stack};
use crate::strategy::shape::{
    half, hills, is_target_state, singletons, three_singleton_forms, two_singleton_forms, Play,
    Roles, TwoHillShape,
};
use crate::strategy::{GameConfig, RuleTag, StrategyDecision, StrategyError, Waiver};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyPhase {
    Opening,
    TargetLoop,
    /// Alice moves from `<3,k;2u;2v>`.
    ThreeSingletons,
    /// Alice moves from `<2,2s;2u;2v>`.
    TwoSingletons,
    /// One color is down to a single stack.
    LoneStack,
    /// Three minority chips: no script.
    SmallMinority,
    /// Between scripted shapes.
    Continuation,
}

impl StrategyPhase {
    pub fn as_str(self) -> &'static str {
        match self {
            StrategyPhase::Opening => "opening",
            StrategyPhase::TargetLoop => "target-loop",
            StrategyPhase::ThreeSingletons => "lemma4-regime",
            StrategyPhase::TwoSingletons => "lemma3-regime",
            StrategyPhase::LoneStack => "single-stack-endgame",
            StrategyPhase::SmallMinority => "small-p",
            StrategyPhase::Continuation => "fallback",
        }
    }
}

/// Follow-up move promised by an earlier reply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pending {
    /// Bob just played `br`; if Alice answers `rb`, bury it under Bob's pair.
    /// With `threat`, otherwise finish red with `rR`.
    BuryRedOnBlue { roles: Roles, threat: bool },
    /// Cover every blue 2-stack Alice makes with Bob's red pair.
    CoverBlueTwo { roles: Roles },
    /// Merge the two red stacks into one.
    MergeRed { roles: Roles },
}

/// Everything Bob remembers between moves.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PhaseMemory {
    pub config: GameConfig,
    pub phase: StrategyPhase,
    /// The state Alice moves from next.
    pub position: GameState,
    pub pending: Option<Pending>,
    /// Reason recorded on a fallback in the current continuation.
    pub waiver: Waiver,
    pub last_alice_move: Option<Move>,
}

impl PhaseMemory {
    pub fn new(config: GameConfig) -> Result<Self, StrategyError> {
        if config.m().is_none() || config.p < 3 {
            return Err(StrategyError::Config(format!(
                "Bob's strategy needs an even chip count and p >= 3, got p = {}, q = {}",
                config.p, config.q
            )));
        }
        let small = config.p == 3;
        Ok(PhaseMemory {
            config,
            phase: if small {
                StrategyPhase::SmallMinority
            } else {
                StrategyPhase::Opening
            },
            position: config.initial_state(),
            pending: None,
            waiver: if small {
                Waiver::ThreeMinority
            } else {
                Waiver::Unscripted
            },
            last_alice_move: None,
        })
    }

    /// Memory for Alice to move from `position` with nothing pending, as if
    /// the game had just reached it. The phase is read off the shape.
    pub fn at(config: GameConfig, position: GameState) -> Result<Self, StrategyError> {
        let fresh = PhaseMemory::new(config)?;
        if position.color_count() != 2 || position.total_chips() != config.n() {
            return Err(StrategyError::precondition(format!(
                "{} is not a position of the ({}, {}) game",
                display_state(&position),
                config.p,
                config.q
            )));
        }
        if position.mover() != Player::First {
            return Err(StrategyError::precondition("it is not Alice's turn"));
        }
        if position == fresh.position {
            return Ok(fresh);
        }
        Ok(PhaseMemory {
            phase: phase_of(config, &position),
            position,
            ..fresh
        })
    }
}

struct Reply {
    decision: StrategyDecision,
    pending: Option<Pending>,
    /// Context for fallbacks until the next scripted shape.
    waiver: Waiver,
}

impl Reply {
    fn new(mv: Move, tag: RuleTag, waiver: Waiver) -> Self {
        Reply {
            decision: StrategyDecision::scripted(mv, tag),
            pending: None,
            waiver,
        }
    }

    fn with_pending(mut self, pending: Pending) -> Self {
        self.pending = Some(pending);
        self
    }
}

fn unmatched(prev: &GameState, alice: &Move) -> StrategyError {
    StrategyError::UnmatchedCase {
        state: display_state(prev),
        play: alice.to_string(),
    }
}

fn join(a: StackId, b: StackId) -> Move {
    Move::new(a, b)
}

/// Bob's reply to Alice's first move.
pub fn opening_move(config: GameConfig, alice: &Move) -> Result<StrategyDecision, StrategyError> {
    opening_reply(config, alice).map(|r| r.decision)
}

fn opening_reply(config: GameConfig, alice: &Move) -> Result<Reply, StrategyError> {
    let r = Roles::IDENTITY;
    let prev = config.initial_state();
    let play = Play::classify(alice, r);
    let (rr, bb) = (join(r.red(1), r.red(1)), join(r.blue(1), r.blue(1)));
    let (rb, br) = (join(r.red(1), r.blue(1)), join(r.blue(1), r.red(1)));
    let scripted = |mv, tag| Ok(Reply::new(mv, tag, Waiver::Unscripted));
    match config.p {
        0..=3 => Err(StrategyError::precondition("no scripted opening for p <= 3")),
        4 if config.q == 4 => {
            let mv = match play {
                Play::RedRed => rb,
                Play::BlueBlue => br,
                Play::RedOnBlue => rr,
                Play::BlueOnRed => bb,
                _ => return Err(unmatched(&prev, alice)),
            };
            Ok(Reply::new(mv, RuleTag::P4Q4Force, Waiver::FourEach))
        }
        5 => match play {
            Play::BlueBlue => scripted(rb, RuleTag::P5BbRb),
            Play::RedOnBlue => scripted(bb, RuleTag::P5RbBb),
            Play::BlueOnRed => scripted(rr, RuleTag::P5BrRr),
            Play::RedRed => Ok(Reply::new(rr, RuleTag::P5RrRr, Waiver::EasyContinuation)),
            _ => Err(unmatched(&prev, alice)),
        },
        _ => match play {
            Play::RedRed => scripted(bb, RuleTag::OpeningXxYy),
            Play::BlueBlue => scripted(rr, RuleTag::OpeningXxYy),
            Play::RedOnBlue => scripted(br, RuleTag::OpeningXyYx),
            Play::BlueOnRed => scripted(rb, RuleTag::OpeningXyYx),
            _ => Err(unmatched(&prev, alice)),
        },
    }
}

/// The even-hill reply to Alice's move from a target state, regardless of
/// how many singletons it leaves.
pub fn even_hill_reply(prev: &GameState, alice: &Move) -> Result<StrategyDecision, StrategyError> {
    if !is_target_state(prev) {
        return Err(StrategyError::precondition(format!(
            "{} is not a target state",
            display_state(prev)
        )));
    }
    even_hill_move(prev, alice)
}

fn even_hill_move(prev: &GameState, alice: &Move) -> Result<StrategyDecision, StrategyError> {
    let hill = |c| hills(prev, c)[0];
    let (src, dst) = (alice.source, alice.destination);
    let (mv, tag) = match (src.height, dst.height) {
        // xz: the new 2-stack goes on the hill of its top color
        (1, 1) => {
            let x = src.color;
            (
                join(StackId::new(x, 2), StackId::new(x, hill(x))),
                RuleTag::EvenHillXz,
            )
        }
        // xX: another x singleton on the grown hill
        (1, _) | (_, 1) if src.color == dst.color => {
            let x = src.color;
            (
                join(StackId::new(x, 1), StackId::new(x, hill(x) + 1)),
                RuleTag::EvenHillXX,
            )
        }
        // XY: a new hill of the buried color
        _ if src.color != dst.color => {
            let y = dst.color;
            (
                join(StackId::new(y, 1), StackId::new(y, 1)),
                RuleTag::EvenHillXY,
            )
        }
        _ => return Err(unmatched(prev, alice)),
    };
    Ok(StrategyDecision::scripted(mv, tag))
}

fn target_reply(prev: &GameState, alice: &Move) -> Result<Reply, StrategyError> {
    let decision = even_hill_reply(prev, alice)?;
    let state = prev.apply_unchecked(alice);
    let after = state.apply(&decision.mv)?;
    let fewest = [crate::game::Color::RED, crate::game::Color::BLUE]
        .into_iter()
        .map(|c| (singletons(&after, c), c))
        .min()
        .expect("two colors");
    if fewest.0 >= 3 {
        // still a target state, or the three-singleton shape
        return Ok(Reply {
            decision,
            pending: None,
            waiver: Waiver::Unscripted,
        });
    }
    // two singletons left in color `c`
    let roles = Roles::with_red(fewest.1);
    let m = half(prev).expect("target states have an even chip count");
    let red_hill = hills(prev, roles.red)[0];
    let danger = red_hill + 4 == m;
    let cover = join(roles.blue(1), roles.red(1));
    match Play::classify(alice, roles) {
        Play::RedToHill if danger => Ok(Reply::new(
            cover,
            RuleTag::Position1Exception,
            Waiver::PositionException,
        )),
        Play::RedToHill => Ok(Reply::new(
            join(roles.red(1), roles.red(red_hill + 1)),
            RuleTag::Position1,
            Waiver::Unscripted,
        )),
        Play::RedRed if danger => Ok(Reply::new(
            cover,
            RuleTag::Position2Exception,
            Waiver::PositionException,
        )),
        Play::RedRed => Ok(Reply::new(
            join(roles.red(2), roles.red(red_hill)),
            RuleTag::Position2,
            Waiver::Unscripted,
        )),
        Play::BlueHillOnRed => {
            debug_assert!(m > 4);
            Ok(Reply::new(
                join(roles.red(1), roles.red(1)),
                RuleTag::Position3,
                Waiver::Unscripted,
            ))
        }
        _ => Err(unmatched(prev, alice)),
    }
}

/// Reply to Alice's move from `<3,k;2u;2v>` (either color orientation).
pub fn lemma4_reply(prev: &GameState, alice: &Move) -> Result<StrategyDecision, StrategyError> {
    three_singleton_reply(prev, alice).map(|r| r.decision)
}

fn three_singleton_reply(prev: &GameState, alice: &Move) -> Result<Reply, StrategyError> {
    let forms = three_singleton_forms(prev);
    // with three singletons of each color, a blue pair or blue hill growth is
    // read with the colors switched
    let shape = forms
        .iter()
        .find(|f| {
            let play = Play::classify(alice, f.roles);
            f.blue_singletons > 3 || !matches!(play, Play::BlueBlue | Play::BlueToHill)
        })
        .or(forms.first())
        .copied()
        .ok_or_else(|| {
            StrategyError::precondition(format!(
                "{} is not of the form <3,k;2u;2v>",
                display_state(prev)
            ))
        })?;
    let TwoHillShape {
        roles: r,
        blue_singletons: k,
        red_hill: hr,
        blue_hill: hb,
        m,
        ..
    } = shape;
    let br = join(r.blue(1), r.red(1));
    let rr = join(r.red(1), r.red(1));
    let easy = Waiver::EasyContinuation;
    let reply = match Play::classify(alice, r) {
        Play::RedOnBlue if hr + 4 == m && k > 3 => {
            Reply::new(br, RuleTag::Lemma4IException, Waiver::ColorsSurvive)
        }
        Play::RedOnBlue => Reply::new(
            join(r.red(2), r.red(hr)),
            RuleTag::Lemma4I,
            Waiver::Unscripted,
        ),
        Play::BlueOnRed if hr + 2 == m && k > 3 => {
            Reply::new(br, RuleTag::Lemma4IIException, easy).with_pending(Pending::BuryRedOnBlue {
                roles: r,
                threat: true,
            })
        }
        Play::BlueOnRed => Reply::new(
            join(r.blue(2), r.blue(hb)),
            RuleTag::Lemma4II,
            Waiver::Unscripted,
        ),
        Play::RedRed if hr + 3 == m => Reply::new(br, RuleTag::Lemma4IIIBr, easy),
        Play::RedRed if hr == hb => {
            Reply::new(join(r.blue(hb), r.red(hr)), RuleTag::Lemma4IIIBR, easy)
        }
        Play::RedRed => Reply::new(join(r.red(1), r.red(2)), RuleTag::Lemma4IIIRrr, easy)
            .with_pending(Pending::MergeRed { roles: r }),
        Play::RedToHill if hr + 3 == m || hr + 3 == m + 2 || hr + 5 == m => {
            Reply::new(br, RuleTag::Lemma4IVBr, easy)
        }
        Play::RedToHill => Reply::new(rr, RuleTag::Lemma4IVRr, easy),
        Play::RedHillOnBlue => {
            let h = hr + hb;
            if h + 3 == m || h + 2 == m {
                Reply::new(br, RuleTag::Lemma4VBr, easy)
            } else if h + 1 == m {
                Reply::new(rr, RuleTag::Lemma4VRr, easy)
            } else {
                // "the other cases are easy"
                return Ok(Reply {
                    decision: StrategyDecision {
                        mv: br,
                        rule_tag: RuleTag::Fallback,
                        fallback_used: true,
                        waiver: Some(easy),
                        overrides: None,
                    },
                    pending: None,
                    waiver: easy,
                });
            }
        }
        Play::BlueHillOnRed => Reply::new(rr, RuleTag::Lemma4VI, Waiver::ColorsSurvive),
        Play::BlueBlue if k > 3 => Reply::new(
            join(r.blue(2), r.blue(hb)),
            RuleTag::Lemma4VII,
            Waiver::Unscripted,
        ),
        Play::BlueToHill if k > 3 => Reply::new(
            join(r.blue(1), r.blue(hb + 1)),
            RuleTag::Lemma4VII,
            Waiver::Unscripted,
        ),
        _ => return Err(unmatched(prev, alice)),
    };
    Ok(reply)
}

/// Reply to Alice's move from `<2,2s;2u;2v>` outside its excluded shape.
pub fn lemma3_reply(prev: &GameState, alice: &Move) -> Result<StrategyDecision, StrategyError> {
    two_singleton_reply(prev, alice).map(|r| r.decision)
}

fn two_singleton_reply(prev: &GameState, alice: &Move) -> Result<Reply, StrategyError> {
    let shape = two_singleton_forms(prev, true)
        .first()
        .copied()
        .ok_or_else(|| {
            StrategyError::precondition(format!(
                "{} is not a safe <2,2s;2u;2v> shape",
                display_state(prev)
            ))
        })?;
    let TwoHillShape {
        roles: r,
        red_hill: hr,
        blue_hill: hb,
        m,
        ..
    } = shape;
    let s = shape.s();
    let br = join(r.blue(1), r.red(1));
    let rr = join(r.red(1), r.red(1));
    let capture = join(r.blue(hb), r.red(hr));
    let easy = Waiver::EasyContinuation;
    let reply = match Play::classify(alice, r) {
        Play::BlueHillOnRed => Reply::new(rr, RuleTag::Lemma3I, Waiver::ColorsSurvive)
            .with_pending(Pending::CoverBlueTwo { roles: r }),
        Play::RedHillOnBlue => {
            let h = hr + hb;
            if h > m || h + 2 < m {
                Reply::new(rr, RuleTag::Lemma3IIRr, easy)
            } else if h == m {
                Reply::new(join(r.red(1), r.red(h)), RuleTag::Lemma3IIRx, easy)
            } else if h + 1 == m {
                Reply::new(rr, RuleTag::Lemma3IIMinusOne, easy)
            } else {
                Reply::new(br, RuleTag::Lemma3IIBr, easy).with_pending(Pending::BuryRedOnBlue {
                    roles: r,
                    threat: false,
                })
            }
        }
        Play::BlueBlue if hb + 2 != m || s > 1 => Reply::new(
            join(r.blue(2), r.blue(hb)),
            RuleTag::Lemma3IIIBbB,
            Waiver::Unscripted,
        ),
        Play::BlueBlue => Reply::new(capture, RuleTag::Lemma3IIIBR, easy),
        Play::BlueToHill if hb + 2 != m || s > 1 => Reply::new(
            join(r.blue(1), r.blue(hb + 1)),
            RuleTag::Lemma3IVBbB,
            Waiver::Unscripted,
        ),
        Play::BlueToHill => Reply::new(join(r.red(1), r.blue(1)), RuleTag::Lemma3IVRb, easy),
        Play::BlueOnRed if hr + 1 == m => Reply::new(br, RuleTag::Lemma3VBr, easy),
        Play::BlueOnRed => Reply::new(join(r.red(1), r.red(hr)), RuleTag::Lemma3VRR, easy),
        Play::RedOnBlue if hr + 3 == m => Reply::new(br, RuleTag::Lemma3VIBr, easy),
        Play::RedOnBlue => Reply::new(join(r.red(1), r.red(2)), RuleTag::Lemma3VIRrb, easy),
        Play::RedRed if hr + 2 == m => Reply::new(capture, RuleTag::Lemma3VIIIBR, easy),
        Play::RedRed => Reply::new(join(r.red(2), r.red(hr)), RuleTag::Lemma3VIIIRrR, easy),
        _ => return Err(unmatched(prev, alice)),
    };
    Ok(reply)
}

fn pending_reply(pending: Pending, state: &GameState, alice: &Move) -> Option<Reply> {
    let m = half(state)?;
    match pending {
        Pending::BuryRedOnBlue { roles: r, threat } => {
            let bury = join(r.blue(2), r.red(2));
            if Play::classify(alice, r) == Play::RedOnBlue && state.is_legal(&bury) {
                let tag = if threat {
                    RuleTag::Lemma4IIBrrb
                } else {
                    RuleTag::Lemma3IIBrrb
                };
                return Some(Reply::new(bury, tag, Waiver::EasyContinuation));
            }
            if threat && lone_stack(state).is_none() {
                if let [1, hill] = state.heights_of(r.red).as_slice() {
                    return Some(Reply::new(
                        join(r.red(1), r.red(*hill)),
                        RuleTag::Lemma4IIThreat,
                        Waiver::EasyContinuation,
                    ));
                }
            }
            None
        }
        Pending::CoverBlueTwo { roles: r } => {
            let cover = join(r.red(2), r.blue(2));
            let made_blue_two = alice.result() == r.blue(2);
            if made_blue_two && state.heights_of(r.red) == [2] && state.is_legal(&cover) {
                Some(Reply::new(
                    cover,
                    RuleTag::Lemma3IObliterate,
                    Waiver::ColorsSurvive,
                ))
            } else {
                None
            }
        }
        // only when the single red stack can be neither half the chips nor
        // captured at once
        Pending::MergeRed { roles: r } => match state.heights_of(r.red).as_slice() {
            [a, b] if a + b != m && state.count(r.blue(a + b)) == 0 => Some(Reply::new(
                join(r.red(*a), r.red(*b)),
                RuleTag::Lemma4IIIMerge,
                Waiver::EasyContinuation,
            )),
            _ => None,
        },
    }
}

fn continuation_reply(
    solver: &Solver,
    memory: &PhaseMemory,
    state: &GameState,
    alice: &Move,
) -> Result<Reply, StrategyError> {
    if let Some(pending) = memory.pending {
        if let Some(reply) = pending_reply(pending, state, alice) {
            return Ok(reply);
        }
    }
    let keep = match memory.pending {
        Some(Pending::CoverBlueTwo { roles }) if state.heights_of(roles.red) == [2] => {
            memory.pending
        }
        _ => None,
    };
    if let Some(decision) = endgame_move(state) {
        return Ok(Reply {
            decision,
            pending: keep,
            waiver: memory.waiver,
        });
    }
    Ok(Reply {
        decision: StrategyDecision::fallback(solver, state, RuleTag::Fallback, memory.waiver)?,
        pending: keep,
        waiver: memory.waiver,
    })
}

/// Replaces a scripted move that hands Alice the win by a solver move,
/// remembering which rule was overridden.
fn guard(solver: &Solver, state: &GameState, reply: Reply) -> Result<Reply, StrategyError> {
    if reply.decision.fallback_used || solver.is_safe(&state.apply(&reply.decision.mv)?)? {
        return Ok(reply);
    }
    let Some(&mv) = solver.optimal_moves(state)?.first() else {
        // lost either way
        return Ok(reply);
    };
    Ok(Reply {
        decision: StrategyDecision {
            mv,
            rule_tag: RuleTag::Fallback,
            fallback_used: true,
            waiver: Some(Waiver::ScriptDefect),
            overrides: Some(reply.decision.rule_tag),
        },
        pending: None,
        waiver: Waiver::ScriptDefect,
    })
}

fn phase_of(config: GameConfig, state: &GameState) -> StrategyPhase {
    if config.p == 3 {
        StrategyPhase::SmallMinority
    } else if is_target_state(state) {
        StrategyPhase::TargetLoop
    } else if !three_singleton_forms(state).is_empty() {
        StrategyPhase::ThreeSingletons
    } else if !two_singleton_forms(state, true).is_empty() {
        StrategyPhase::TwoSingletons
    } else if lone_stack(state).is_some() {
        StrategyPhase::LoneStack
    } else {
        StrategyPhase::Continuation
    }
}

/// Bob's reply to `alice`, played from `memory.position`.
///
/// Never fails on a legal Alice move: when no scripted case matches, the
/// solver move is returned with [`Waiver::Unscripted`] so the harness can
/// count the hole.
pub fn bob_move(
    solver: &Solver,
    memory: &PhaseMemory,
    alice: &Move,
) -> Result<(StrategyDecision, PhaseMemory), StrategyError> {
    let prev = &memory.position;
    let state = prev.apply(alice)?;
    if state.mover() != Player::Second {
        return Err(StrategyError::precondition("it is not Bob's turn"));
    }
    let scripted = match memory.phase {
        StrategyPhase::SmallMinority => Ok(Reply {
            decision: StrategyDecision::fallback(
                solver,
                &state,
                RuleTag::Fallback,
                Waiver::ThreeMinority,
            )?,
            pending: None,
            waiver: Waiver::ThreeMinority,
        }),
        StrategyPhase::Opening => opening_reply(memory.config, alice),
        StrategyPhase::TargetLoop => target_reply(prev, alice),
        StrategyPhase::ThreeSingletons => three_singleton_reply(prev, alice),
        StrategyPhase::TwoSingletons => match two_singleton_reply(prev, alice) {
            // growing the red hill has no constructible written reply
            Err(StrategyError::UnmatchedCase { .. })
                if Play::classify(
                    alice,
                    two_singleton_forms(prev, true)[0].roles,
                ) == Play::RedToHill =>
            {
                Ok(Reply {
                    decision: StrategyDecision::fallback(
                        solver,
                        &state,
                        RuleTag::Lemma3VIIAmbiguous,
                        Waiver::TwoSingletonHillGrowth,
                    )?,
                    pending: None,
                    waiver: Waiver::TwoSingletonHillGrowth,
                })
            }
            other => other,
        },
        StrategyPhase::LoneStack | StrategyPhase::Continuation => {
            continuation_reply(solver, memory, &state, alice)
        }
    };
    let reply = match scripted {
        Ok(reply) => reply,
        Err(StrategyError::UnmatchedCase { .. }) => Reply {
            decision: StrategyDecision::fallback(
                solver,
                &state,
                RuleTag::Fallback,
                Waiver::Unscripted,
            )?,
            pending: None,
            waiver: Waiver::Unscripted,
        },
        Err(e) => return Err(e),
    };
    let reply = guard(solver, &state, reply)?;
    let next = state.apply(&reply.decision.mv)?;
    let memory = PhaseMemory {
        config: memory.config,
        phase: phase_of(memory.config, &next),
        position: next,
        pending: reply.pending,
        waiver: reply.waiver,
        last_alice_move: Some(*alice),
    };
    Ok((reply.decision, memory))
}

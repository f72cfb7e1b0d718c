//! Adversarial walks: a scripted player against every reply of the opponent.

use std::collections::{BTreeSet, HashMap};
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use super::{elapsed_ms, Exemplar, VerificationReport};
use crate::codec::display_state;
use crate::game::{Color, GameState, Move, Player};
use crate::solver::{Solver, SolverError};
use crate::strategy::lemmas::lone_stack;
use crate::strategy::shape::half;
use crate::strategy::{
    alice_move, bob_move, lemma_applies, GameConfig, LemmaId, PhaseMemory, RuleTag, StrategyPhase,
    Waiver,
};

const WALK_COLUMNS: [&str; 7] = ["p", "q", "n", "lines", "nodes", "fallbacks", "failures"];

struct BobWalk<'a> {
    solver: &'a Solver,
    report: VerificationReport,
    /// Lines below each visited memory node.
    lines: HashMap<PhaseMemory, u64>,
    path: Vec<String>,
    first_replies: BTreeSet<String>,
    minus_one_firings: u64,
}

impl<'a> BobWalk<'a> {
    fn new(solver: &'a Solver, suite: &str, params: String) -> Self {
        BobWalk {
            solver,
            report: VerificationReport::new(suite, params, &WALK_COLUMNS),
            lines: HashMap::new(),
            path: Vec::new(),
            first_replies: BTreeSet::new(),
            minus_one_firings: 0,
        }
    }

    fn fail(&mut self, state: &GameState, expected: &str, actual: String) {
        let line = self.path.clone();
        self.report.fail(Exemplar {
            state: display_state(state),
            line,
            expected: expected.to_string(),
            actual,
        });
    }

    /// Checks Alice's move `alice` and Bob's reply; returns the memory to
    /// continue from, or `None` when the line ends here.
    fn exchange(
        &mut self,
        memory: &PhaseMemory,
        alice: &Move,
    ) -> Result<Option<(PhaseMemory, Move)>, SolverError> {
        let after_alice = memory.position.apply_unchecked(alice);
        if after_alice.is_terminal() {
            self.fail(&after_alice, "Bob moves last", "Alice made the last move".into());
            return Ok(None);
        }
        let safe = self.solver.is_safe(&after_alice)?;
        if safe {
            self.report.pass();
        } else {
            self.fail(&after_alice, "safe before Bob's move", "unsafe".into());
        }
        let (decision, next) = match bob_move(self.solver, memory, alice) {
            Ok(x) => x,
            Err(e) => {
                self.fail(&after_alice, "a strategy move", e.to_string());
                return Ok(None);
            }
        };
        self.path.push(decision.mv.to_string());
        if decision.fallback_used {
            let waiver = decision.waiver.unwrap_or(Waiver::Unscripted);
            let tag = match decision.overrides {
                Some(rule) => format!("{}<-{rule}", decision.rule_tag),
                None => decision.rule_tag.to_string(),
            };
            self.report
                .count_fallback(&tag, memory.phase.as_str(), waiver.as_str());
            if !waiver.is_documented() {
                self.fail(
                    &after_alice,
                    "a scripted or waived move",
                    format!("{waiver} fallback ({tag}) in phase {}", memory.phase.as_str()),
                );
            }
        }
        if decision.rule_tag == RuleTag::Lemma3IIMinusOne {
            self.minus_one_firings += 1;
        }
        if memory.phase == StrategyPhase::Opening {
            self.first_replies.insert(display_state(&next.position));
        }
        if self.solver.is_safe(&next.position)? {
            self.report.pass();
        } else {
            let tag = decision.rule_tag.as_str();
            self.fail(&next.position, "safe after Bob's move", format!("unsafe after {tag}"));
        }
        if matches!(
            decision.rule_tag,
            RuleTag::Lemma2Main | RuleTag::Lemma2PairU | RuleTag::Lemma2KillU
        ) {
            self.check_lone_stack_induction(&next.position);
        }
        self.path.pop();
        Ok(Some((next, decision.mv)))
    }

    /// After a lone-stack endgame move, every Alice reply ends the game or
    /// leaves a lone-stack state Bob can handle again.
    fn check_lone_stack_induction(&mut self, state: &GameState) {
        let m = half(state).expect("even chip count");
        for reply in state.legal_moves() {
            let s = state.apply_unchecked(&reply);
            let tall = lone_stack(&s).is_some_and(|(_, h)| h > m);
            let ok = s.is_terminal() || tall || lemma_applies(LemmaId::ShortLoneStack, &s);
            if ok {
                self.report.pass();
            } else {
                self.fail(
                    &s,
                    "lone-stack hypothesis preserved",
                    format!("lost after Alice {reply}"),
                );
            }
        }
    }

    fn visit(&mut self, memory: &PhaseMemory) -> Result<u64, SolverError> {
        if let Some(&n) = self.lines.get(memory) {
            return Ok(n);
        }
        let mut total = 0;
        let moves = memory.position.legal_moves();
        if moves.is_empty() {
            // Bob made the last move
            total = 1;
        }
        for alice in moves {
            self.path.push(alice.to_string());
            if let Some((next, bob)) = self.exchange(memory, &alice)? {
                self.path.push(bob.to_string());
                total += self.visit(&next)?;
                self.path.pop();
            } else {
                total += 1;
            }
            self.path.pop();
        }
        self.lines.insert(memory.clone(), total);
        Ok(total)
    }
}

fn walk_row(p: u32, q: u32, lines: u64, nodes: usize, report: &VerificationReport) -> Vec<String> {
    vec![
        p.to_string(),
        q.to_string(),
        (p + q).to_string(),
        lines.to_string(),
        nodes.to_string(),
        report.fallback_total().to_string(),
        report.failures.to_string(),
    ]
}

fn bob_config(p: u32, q: u32) -> Result<PhaseMemory, String> {
    GameConfig::new(p, q)
        .and_then(PhaseMemory::new)
        .map_err(|e| e.to_string())
}

/// Scripted Bob against every Alice line from `<p,q;;>`.
///
/// Checks that the state is safe before and after each Bob move, that Bob
/// moves last in every line, that fallbacks happen only where a waiver is
/// documented, and that lone-stack endgame moves keep their hypothesis.
/// Fallbacks are counted once per distinct (position, memory) node.
pub fn verify_bob_strategy(
    solver: &Solver,
    p: u32,
    q: u32,
) -> Result<VerificationReport, SolverError> {
    let start = Instant::now();
    let mut walk = BobWalk::new(solver, "bob-strategy", format!("p={p} q={q}"));
    match bob_config(p, q) {
        Ok(memory) => {
            solver.limits().check(&memory.position)?;
            let lines = walk.visit(&memory)?;
            let nodes = walk.lines.len();
            let row = walk_row(p, q, lines, nodes, &walk.report);
            walk.report.rows.push(row);
            if !walk.first_replies.is_empty() {
                walk.report.notes.push(format!(
                    "({p},{q}) first replies reach {}",
                    walk.first_replies.iter().cloned().collect::<Vec<_>>().join(" ")
                ));
            }
            if walk.minus_one_firings > 0 {
                walk.report.notes.push(format!(
                    "({p},{q}) lemma3.ii.m-1 fired at {} node(s) (m is odd)",
                    walk.minus_one_firings
                ));
            }
        }
        Err(e) => walk.report.fail(Exemplar {
            state: format!("<{p},{q};;>"),
            line: Vec::new(),
            expected: "a configuration Bob wins".into(),
            actual: e,
        }),
    }
    walk.report.duration_ms = elapsed_ms(start);
    Ok(walk.report)
}

/// [`verify_bob_strategy`] for every even `p + q <= max_n` with `3 <= p <= q`.
pub fn verify_bob_range(solver: &Solver, max_n: u32) -> Result<VerificationReport, SolverError> {
    let configs: Vec<(u32, u32)> = (6..=max_n)
        .step_by(2)
        .flat_map(|n| (3..=n / 2).map(move |p| (p, n - p)))
        .collect();
    combine(
        "bob-strategy",
        format!("max_n={max_n}"),
        configs
            .par_iter()
            .map(|&(p, q)| verify_bob_strategy(solver, p, q))
            .collect::<Result<Vec<_>, _>>()?,
    )
}

/// Scripted Bob against `lines` random Alice lines drawn from a seeded RNG.
pub fn sample_bob_strategy(
    solver: &Solver,
    p: u32,
    q: u32,
    seed: u64,
    lines: u32,
) -> Result<VerificationReport, SolverError> {
    let start = Instant::now();
    let mut walk = BobWalk::new(
        solver,
        "bob-strategy-sampled",
        format!("p={p} q={q} seed={seed} lines={lines}"),
    );
    let initial = match bob_config(p, q) {
        Ok(m) => m,
        Err(e) => {
            walk.report.fail(Exemplar {
                state: format!("<{p},{q};;>"),
                line: Vec::new(),
                expected: "a configuration Bob wins".into(),
                actual: e,
            });
            return Ok(walk.report);
        }
    };
    solver.limits().check(&initial.position)?;
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..lines {
        let mut memory = initial.clone();
        walk.path.clear();
        loop {
            let moves = memory.position.legal_moves();
            if moves.is_empty() {
                break;
            }
            let alice = moves[rng.gen_range(0..moves.len())];
            walk.path.push(alice.to_string());
            match walk.exchange(&memory, &alice)? {
                Some((next, bob)) => {
                    walk.path.push(bob.to_string());
                    memory = next;
                }
                None => break,
            }
        }
    }
    let row = walk_row(p, q, lines as u64, 0, &walk.report);
    walk.report.rows.push(row);
    walk.report.duration_ms = elapsed_ms(start);
    Ok(walk.report)
}

struct AliceWalk<'a> {
    solver: &'a Solver,
    config: GameConfig,
    report: VerificationReport,
    lines: HashMap<GameState, u64>,
    path: Vec<String>,
}

impl AliceWalk<'_> {
    fn fail(&mut self, state: &GameState, expected: &str, actual: String) {
        let line = self.path.clone();
        self.report.fail(Exemplar {
            state: display_state(state),
            line,
            expected: expected.to_string(),
            actual,
        });
    }

    /// With an odd chip count, red stacks above height 2 are powers of 2.
    fn check_red_heights(&mut self, state: &GameState) {
        if self.config.n().is_multiple_of(2) {
            return;
        }
        let bad = state
            .heights_of(Color::RED)
            .into_iter()
            .find(|&h| h > 2 && !h.is_power_of_two());
        match bad {
            None => self.report.pass(),
            Some(h) => self.fail(state, "red height a power of 2", format!("red stack of height {h}")),
        }
    }

    fn visit(&mut self, state: &GameState) -> Result<u64, SolverError> {
        if let Some(&n) = self.lines.get(state) {
            return Ok(n);
        }
        let total = self.alice_turn(state)?;
        self.lines.insert(state.clone(), total);
        Ok(total)
    }

    fn alice_turn(&mut self, state: &GameState) -> Result<u64, SolverError> {
        if state.is_terminal() {
            self.fail(state, "Alice moves last", "Bob made the last move".into());
            return Ok(1);
        }
        let decision = match alice_move(self.solver, state, self.config) {
            Ok(d) => d,
            Err(e) => {
                self.fail(state, "a strategy move", e.to_string());
                return Ok(1);
            }
        };
        if decision.fallback_used {
            let waiver = decision.waiver.unwrap_or(Waiver::Unscripted);
            self.report
                .count_fallback(decision.rule_tag.as_str(), "alice", waiver.as_str());
            if self.config.p <= 2 {
                self.fail(state, "a scripted move", "solver fallback".into());
            }
        }
        let after = state.apply_unchecked(&decision.mv);
        self.path.push(decision.mv.to_string());
        self.check_red_heights(&after);
        let mut total = 0;
        if after.is_terminal() {
            total = 1;
        } else {
            let won = self.solver.solve(&after)?.winner == Player::First;
            if won {
                self.report.pass();
            } else {
                self.fail(&after, "lost for Bob", format!("Bob wins after {}", decision.rule_tag));
            }
            for bob in after.legal_moves() {
                let next = after.apply_unchecked(&bob);
                self.path.push(bob.to_string());
                self.check_red_heights(&next);
                total += self.visit(&next)?;
                self.path.pop();
            }
        }
        self.path.pop();
        Ok(total)
    }
}

/// Scripted Alice (one or two red chips) against every Bob line.
pub fn verify_alice_strategy(
    solver: &Solver,
    p: u32,
    q: u32,
) -> Result<VerificationReport, SolverError> {
    let start = Instant::now();
    let mut report = VerificationReport::new("alice-strategy", format!("p={p} q={q}"), &WALK_COLUMNS);
    let config = match GameConfig::new(p, q) {
        Ok(c) => c,
        Err(e) => {
            report.fail(Exemplar {
                state: format!("<{p},{q};;>"),
                line: Vec::new(),
                expected: "a valid configuration".into(),
                actual: e.to_string(),
            });
            return Ok(report);
        }
    };
    let initial = config.initial_state();
    solver.limits().check(&initial)?;
    let mut walk = AliceWalk {
        solver,
        config,
        report,
        lines: HashMap::new(),
        path: Vec::new(),
    };
    let lines = walk.visit(&initial)?;
    let row = walk_row(p, q, lines, walk.lines.len(), &walk.report);
    walk.report.rows.push(row);
    walk.report.duration_ms = elapsed_ms(start);
    Ok(walk.report)
}

/// [`verify_alice_strategy`] for `p` in {1, 2} and every `q >= p` with
/// `p + q <= max_n`.
pub fn verify_alice_range(solver: &Solver, max_n: u32) -> Result<VerificationReport, SolverError> {
    let configs: Vec<(u32, u32)> = (1..=2)
        .flat_map(|p| (p..=max_n.saturating_sub(p)).map(move |q| (p, q)))
        .collect();
    combine(
        "alice-strategy",
        format!("max_n={max_n}"),
        configs
            .par_iter()
            .map(|&(p, q)| verify_alice_strategy(solver, p, q))
            .collect::<Result<Vec<_>, _>>()?,
    )
}

fn combine(
    suite: &str,
    params: String,
    parts: Vec<VerificationReport>,
) -> Result<VerificationReport, SolverError> {
    let mut report = VerificationReport::new(suite, params, &WALK_COLUMNS);
    for part in parts {
        report.absorb(part);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alice_small_games() {
        let solver = Solver::new();
        for (p, q) in [(1, 1), (1, 5), (2, 5), (2, 6)] {
            let r = verify_alice_strategy(&solver, p, q).unwrap();
            assert!(r.passed(), "{}", super::super::emit_report(&r, super::super::ReportFormat::Text));
        }
    }

    #[test]
    fn bob_six_six_opening() {
        let solver = Solver::new();
        let r = verify_bob_strategy(&solver, 6, 6).unwrap();
        assert!(r.notes[0].ends_with("first replies reach <4,4;2;2>"), "{:?}", r.notes);
    }
}

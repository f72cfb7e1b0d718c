//! Exhaustive desk-scale certification against the solver.
//!
//! Every suite returns a [`VerificationReport`] whose content (apart from the
//! duration) depends only on the suite parameters: work is spread over rayon
//! but collected in a fixed order.

mod report;
mod walk;

use std::time::Instant;

use rayon::prelude::*;

use crate::codec::display_state;
use crate::game::{Color, GameState, StackId};
use crate::solver::{Solver, SolverError};
use crate::strategy::shape::TwoHillShape;
use crate::strategy::{classify_winner, lemma_applies, GameConfig, LemmaId};

pub use report::{emit_report, Exemplar, ReportFormat, UnknownFormat, VerificationReport, REPORT_VERSION};
pub use walk::{
    sample_bob_strategy, verify_alice_range, verify_alice_strategy, verify_bob_range,
    verify_bob_strategy,
};

pub(crate) fn elapsed_ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

/// Checks the winner classification against the solver for every
/// `1 <= p <= q` with `p + q <= max_n`.
pub fn verify_theorem(solver: &Solver, max_n: u32) -> Result<VerificationReport, SolverError> {
    let start = Instant::now();
    let mut report = VerificationReport::new(
        "theorem",
        format!("max_n={max_n}"),
        &["p", "q", "n", "claimed", "solved", "agree"],
    );
    if max_n >= 2 {
        solver.limits().check(&GameState::two_color(1, max_n - 1).expect("p, q >= 1"))?;
    }
    let configs: Vec<(u32, u32)> = (2..=max_n)
        .flat_map(|n| (1..=n / 2).map(move |p| (p, n - p)))
        .collect();
    let results: Vec<_> = configs
        .par_iter()
        .map(|&(p, q)| {
            let claimed = classify_winner(GameConfig { p, q }).winner;
            solver
                .solve(&GameState::two_color(p, q).expect("p, q >= 1"))
                .map(|o| (p, q, claimed, o.winner))
        })
        .collect::<Result<_, _>>()?;
    for (p, q, claimed, solved) in results {
        let agree = claimed == solved;
        report.rows.push(vec![
            p.to_string(),
            q.to_string(),
            (p + q).to_string(),
            claimed.name().to_string(),
            solved.name().to_string(),
            agree.to_string(),
        ]);
        report.check(agree, || Exemplar {
            state: format!("<{p},{q};;>"),
            line: Vec::new(),
            expected: claimed.name().to_string(),
            actual: solved.name().to_string(),
        });
    }
    report.duration_ms = elapsed_ms(start);
    Ok(report)
}

/// The four-color game with three chips of each color: a second-player win.
pub fn verify_commercial(solver: &Solver) -> Result<VerificationReport, SolverError> {
    let start = Instant::now();
    let mut report = VerificationReport::new(
        "commercial",
        "colors=4 chips_per_color=3",
        &["state", "expected", "solved", "agree"],
    );
    let state = GameState::initial(&[3, 3, 3, 3]).expect("valid");
    let solved = solver.solve(&state)?.winner;
    let expected = crate::game::Player::Second;
    let text = display_state(&state);
    report.rows.push(vec![
        text.clone(),
        expected.name().into(),
        solved.name().into(),
        (solved == expected).to_string(),
    ]);
    report.check(solved == expected, || Exemplar {
        state: text,
        line: Vec::new(),
        expected: expected.name().into(),
        actual: solved.name().into(),
    });
    report.duration_ms = elapsed_ms(start);
    Ok(report)
}

/// Multisets of `parts` positive integers summing to `total`, each part
/// ascending.
pub fn partitions(total: u32, parts: u32) -> Vec<Vec<u32>> {
    fn go(total: u32, parts: u32, min: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts == 0 {
            if total == 0 {
                out.push(acc.clone());
            }
            return;
        }
        let mut part = min;
        while part * parts <= total {
            acc.push(part);
            go(total - part, parts - 1, part, acc, out);
            acc.pop();
            part += 1;
        }
    }
    let mut out = Vec::new();
    go(total, parts, 1, &mut Vec::new(), &mut out);
    out
}

fn lone_red(height: u32, blues: &[u32]) -> GameState {
    let stacks = std::iter::once(StackId::new(Color::RED, height))
        .chain(blues.iter().map(|&h| StackId::new(Color::BLUE, h)));
    GameState::from_stacks(2, stacks).expect("valid")
}

fn two_hill(j: u32, k: u32, red_hill: u32, blue_hill: u32) -> GameState {
    let stacks = std::iter::repeat_n(StackId::new(Color::RED, 1), j as usize)
        .chain(std::iter::repeat_n(StackId::new(Color::BLUE, 1), k as usize))
        .chain([
            StackId::new(Color::RED, red_hill),
            StackId::new(Color::BLUE, blue_hill),
        ]);
    GameState::from_stacks(2, stacks).expect("valid")
}

/// A constructed lemma state with the verdict the suite expects.
struct Case {
    state: GameState,
    hypothesis: &'static str,
    expect_safe: bool,
}

/// States satisfying the lemma's hypothesis with at most `max_n` chips, built
/// directly from their shape (red as the distinguished color).
fn lemma_cases(lemma: LemmaId, max_n: u32) -> Vec<Case> {
    let mut cases = Vec::new();
    for n in (2..=max_n).step_by(2) {
        let m = n / 2;
        match lemma {
            LemmaId::TallLoneStack => {
                for h in m + 1..n {
                    // even state: an odd number of blue stacks
                    for t in (1..=n - h).step_by(2) {
                        for blues in partitions(n - h, t) {
                            cases.push(Case {
                                state: lone_red(h, &blues),
                                hypothesis: "tall-lone-stack",
                                expect_safe: true,
                            });
                        }
                    }
                }
            }
            LemmaId::ShortLoneStack => {
                for u in 1..m {
                    for t in (2..=n - u).step_by(2) {
                        for blues in partitions(n - u, t) {
                            let all_half = blues.iter().all(|&b| 2 * b == u);
                            let at_u = blues.iter().filter(|&&b| b == u).count();
                            if !all_half && at_u <= 2 {
                                cases.push(Case {
                                    state: lone_red(u, &blues),
                                    hypothesis: "short-lone-stack",
                                    expect_safe: true,
                                });
                            }
                        }
                    }
                }
            }
            LemmaId::TwoSingletons => {
                for s in 1..=n {
                    for u in 1..=n {
                        for v in 1..=n {
                            if 2 + 2 * s + 2 * u + 2 * v != n {
                                continue;
                            }
                            let excluded = 2 * u + 2 == m && s > 1;
                            cases.push(Case {
                                state: two_hill(2, 2 * s, 2 * u, 2 * v),
                                hypothesis: if excluded {
                                    "two-singletons-unless"
                                } else {
                                    "two-singletons"
                                },
                                expect_safe: !excluded,
                            });
                        }
                    }
                }
            }
            LemmaId::ThreeSingletons => {
                for k in 3..=n {
                    for u in 1..=n {
                        for v in 1..=n {
                            if 3 + k + 2 * u + 2 * v == n && u + v >= 3 {
                                cases.push(Case {
                                    state: two_hill(3, k, 2 * u, 2 * v),
                                    hypothesis: "three-singletons",
                                    expect_safe: true,
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    cases
}

/// Every constructed state meeting the lemma's hypothesis with at most
/// `max_n` chips must be safe. For the two-singleton lemma, states in its
/// "unless" clause are listed too, expected unsafe.
pub fn verify_lemma(
    solver: &Solver,
    lemma: LemmaId,
    max_n: u32,
) -> Result<VerificationReport, SolverError> {
    let start = Instant::now();
    let mut report = VerificationReport::new(
        format!("lemma{}", lemma.number()),
        format!("max_n={max_n}"),
        &["state", "n", "hypothesis", "expected", "solved", "agree"],
    );
    let cases = lemma_cases(lemma, max_n);
    let verdicts: Vec<bool> = cases
        .par_iter()
        .map(|c| solver.is_safe(&c.state))
        .collect::<Result<_, _>>()?;
    let mut unless_total = 0;
    let mut unless_safe = 0;
    for (case, safe) in cases.iter().zip(verdicts) {
        let text = display_state(&case.state);
        let word = |b: bool| if b { "safe" } else { "unsafe" };
        let applies = lemma_applies(lemma, &case.state);
        // the predicate must agree with the construction
        report.check(applies == case.expect_safe, || Exemplar {
            state: text.clone(),
            line: Vec::new(),
            expected: format!("lemma_applies = {}", case.expect_safe),
            actual: format!("lemma_applies = {applies}"),
        });
        if !case.expect_safe {
            unless_total += 1;
            unless_safe += safe as u32;
        }
        report.rows.push(vec![
            text.clone(),
            case.state.total_chips().to_string(),
            case.hypothesis.to_string(),
            word(case.expect_safe).to_string(),
            word(safe).to_string(),
            (safe == case.expect_safe).to_string(),
        ]);
        report.check(safe == case.expect_safe, || Exemplar {
            state: text,
            line: Vec::new(),
            expected: word(case.expect_safe).to_string(),
            actual: word(safe).to_string(),
        });
    }
    if lemma == LemmaId::TwoSingletons {
        report.notes.push(format!(
            "{unless_total} state(s) in the unless clause (2u+2=m, s>1); {unless_safe} of them solver-safe"
        ));
    }
    report.duration_ms = elapsed_ms(start);
    Ok(report)
}

/// Whether `state` is in the two-singleton lemma's "unless" clause.
pub fn is_two_singleton_exception(state: &GameState) -> bool {
    crate::strategy::shape::Roles::both().into_iter().any(|r| {
        TwoHillShape::read(state, r).is_some_and(|s| {
            s.is_two_singleton_form() && s.is_excluded() && crate::strategy::shape::is_even_state(state)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partitions_of_small_numbers() {
        assert_eq!(partitions(4, 2), vec![vec![1, 3], vec![2, 2]]);
        assert_eq!(partitions(3, 3), vec![vec![1, 1, 1]]);
        assert!(partitions(2, 3).is_empty());
        let total: usize = (1..=6).map(|k| partitions(6, k).len()).sum();
        assert_eq!(total, 11);
    }

    #[test]
    fn theorem_small() {
        let solver = Solver::new();
        let r = verify_theorem(&solver, 8).unwrap();
        assert!(r.passed());
        assert_eq!(r.rows.len(), (2..=8).map(|n| n / 2).sum::<u32>() as usize);
        assert_eq!(r.rows[0], vec!["1", "1", "2", "first", "first", "true"]);
    }

    #[test]
    fn lemma_cases_match_the_predicate() {
        let solver = Solver::new();
        for lemma in [LemmaId::TallLoneStack, LemmaId::ShortLoneStack, LemmaId::ThreeSingletons] {
            let r = verify_lemma(&solver, lemma, 10).unwrap();
            assert!(r.passed(), "{}", emit_report(&r, ReportFormat::Text));
        }
        assert!(is_two_singleton_exception(&crate::codec::parse_state("<2,4;4;2>").unwrap()));
    }
}

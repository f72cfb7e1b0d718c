//! Exact win/loss solver under normal play (a player unable to move loses).
//!
//! Memoized depth-first search keyed on color-canonical states. The winner of
//! a position depends only on move parity, so relabeling colors never changes
//! it. The mover is a function of `(n, stack_count)` and is not stored.

use std::collections::{HashSet, VecDeque};
use std::sync::atomic::{AtomicU64, Ordering};

use dashmap::DashMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{CanonicalKey, Color, GameState, Move, Player, StackId};

/// Environment variable overriding [`SolverLimits::max_chips_two_color`] and
/// [`SolverLimits::max_chips_multi_color`].
pub const MAX_N_ENV: &str = "BABYLON_MAX_N";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("{chips} chips in {colors} colors exceeds the solver bound of {bound}")]
    BoundExceeded { chips: u32, colors: usize, bound: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverLimits {
    pub max_chips_two_color: u32,
    pub max_chips_multi_color: u32,
}

impl Default for SolverLimits {
    fn default() -> Self {
        SolverLimits {
            max_chips_two_color: 24,
            max_chips_multi_color: 16,
        }
    }
}

impl SolverLimits {
    /// Defaults, with both bounds replaced by `BABYLON_MAX_N` when it is set.
    pub fn from_env() -> Self {
        let mut limits = SolverLimits::default();
        if let Some(n) = std::env::var(MAX_N_ENV).ok().and_then(|v| v.parse().ok()) {
            limits.max_chips_two_color = n;
            limits.max_chips_multi_color = n;
        }
        limits
    }

    pub fn bound_for(&self, colors: usize) -> u32 {
        // heights are packed into one byte in canonical keys
        let bound = if colors <= 2 {
            self.max_chips_two_color
        } else {
            self.max_chips_multi_color
        };
        bound.min(255)
    }

    pub fn check(&self, state: &GameState) -> Result<(), SolverError> {
        let bound = self.bound_for(state.color_count());
        if state.total_chips() > bound {
            return Err(SolverError::BoundExceeded {
                chips: state.total_chips(),
                colors: state.color_count(),
                bound,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcome {
    pub winner: Player,
}

/// Memo table from canonical key to "the player on move wins".
#[derive(Debug, Default)]
pub struct TranspositionTable {
    map: DashMap<CanonicalKey, bool>,
    hits: AtomicU64,
    misses: AtomicU64,
}

impl TranspositionTable {
    fn get(&self, key: &CanonicalKey) -> Option<bool> {
        let found = self.map.get(key).map(|v| *v);
        match found {
            Some(_) => self.hits.fetch_add(1, Ordering::Relaxed),
            None => self.misses.fetch_add(1, Ordering::Relaxed),
        };
        found
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn hits(&self) -> u64 {
        self.hits.load(Ordering::Relaxed)
    }

    pub fn misses(&self) -> u64 {
        self.misses.load(Ordering::Relaxed)
    }

    /// Snapshot of all entries as (representative state, mover wins).
    pub fn entries(&self) -> Vec<(GameState, bool)> {
        self.map
            .iter()
            .map(|e| (decode_key(e.key()), *e.value()))
            .collect()
    }
}

fn decode_key(key: &CanonicalKey) -> GameState {
    let bytes = key.as_bytes();
    let colors = bytes[0] as usize;
    let stacks = bytes[1..].chunks(3).flat_map(|c| {
        std::iter::repeat_n(StackId::new(Color(c[0]), c[1] as u32), c[2] as usize)
    });
    GameState::from_stacks(colors, stacks).expect("keys encode valid states")
}

/// Thread-safe memoizing solver. Concurrent callers may duplicate work but
/// always agree on outcomes.
#[derive(Debug, Default)]
pub struct Solver {
    limits: SolverLimits,
    table: TranspositionTable,
}

impl Solver {
    pub fn new() -> Self {
        Solver::with_limits(SolverLimits::default())
    }

    pub fn with_limits(limits: SolverLimits) -> Self {
        Solver {
            limits,
            table: TranspositionTable::default(),
        }
    }

    pub fn limits(&self) -> SolverLimits {
        self.limits
    }

    pub fn table(&self) -> &TranspositionTable {
        &self.table
    }

    pub fn solve(&self, state: &GameState) -> Result<Outcome, SolverError> {
        self.limits.check(state)?;
        let mover = state.mover();
        let winner = if self.mover_wins(state) {
            mover
        } else {
            mover.opponent()
        };
        Ok(Outcome { winner })
    }

    /// True iff the second player wins with best play.
    pub fn is_safe(&self, state: &GameState) -> Result<bool, SolverError> {
        Ok(self.solve(state)?.winner == Player::Second)
    }

    /// Moves after which the opponent, now on move, loses.
    pub fn optimal_moves(&self, state: &GameState) -> Result<Vec<Move>, SolverError> {
        self.limits.check(state)?;
        Ok(state
            .legal_moves()
            .into_iter()
            .filter(|m| !self.mover_wins(&state.apply_unchecked(m)))
            .collect())
    }

    fn mover_wins(&self, state: &GameState) -> bool {
        let key = state.canonical_key();
        if let Some(v) = self.table.get(&key) {
            return v;
        }
        let wins = state
            .legal_moves()
            .iter()
            .any(|m| !self.mover_wins(&state.apply_unchecked(m)));
        self.table.map.insert(key, wins);
        wins
    }

    /// Re-derives every stored entry from its successors' stored values.
    /// Returns the states whose entry disagrees (empty when sound).
    pub fn audit_table(&self) -> Vec<GameState> {
        self.table
            .entries()
            .into_iter()
            .filter(|(state, wins)| {
                let derived = state
                    .legal_moves()
                    .iter()
                    .any(|m| !self.mover_wins(&state.apply_unchecked(m)));
                derived != *wins
            })
            .map(|(s, _)| s)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateSpaceStats {
    pub chips: u32,
    /// Reachable positions counted up to color permutation.
    pub canonical_states: usize,
    /// Reachable positions with colors told apart.
    pub labelled_states: usize,
    pub terminal_states: usize,
    pub max_depth: u32,
}

/// Breadth-first reachability from the all-singleton start.
pub fn state_space_stats(
    color_counts: &[u32],
    limits: &SolverLimits,
) -> Result<StateSpaceStats, SolverError> {
    let start = GameState::initial(color_counts).map_err(|_| SolverError::BoundExceeded {
        chips: 0,
        colors: color_counts.len(),
        bound: limits.bound_for(color_counts.len()),
    })?;
    limits.check(&start)?;
    let mut seen: HashSet<GameState> = HashSet::new();
    let mut canonical: HashSet<CanonicalKey> = HashSet::new();
    let mut queue = VecDeque::new();
    let mut terminal = 0;
    let mut max_depth = 0;
    seen.insert(start.clone());
    queue.push_back((start, 0u32));
    while let Some((state, depth)) = queue.pop_front() {
        canonical.insert(state.canonical_key());
        max_depth = max_depth.max(depth);
        let moves = state.legal_moves();
        if moves.is_empty() {
            terminal += 1;
        }
        for m in moves {
            let next = state.apply_unchecked(&m);
            if seen.insert(next.clone()) {
                queue.push_back((next, depth + 1));
            }
        }
    }
    Ok(StateSpaceStats {
        chips: color_counts.iter().sum(),
        canonical_states: canonical.len(),
        labelled_states: seen.len(),
        terminal_states: terminal,
        max_depth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::parse_state;

    fn state(text: &str) -> GameState {
        parse_state(text).unwrap()
    }

    #[test]
    fn last_move_wins() {
        let solver = Solver::new();
        let s = GameState::two_color(1, 1).unwrap();
        assert_eq!(solver.solve(&s).unwrap().winner, Player::First);
        let s = state("r:1,1|b:");
        assert_eq!(solver.optimal_moves(&s).unwrap().len(), 1);
    }

    #[test]
    fn terminal_state_loses_for_mover() {
        let solver = Solver::new();
        let s = state("r:3|b:2");
        assert_eq!(s.mover(), Player::Second);
        assert_eq!(solver.solve(&s).unwrap().winner, Player::First);
        assert!(solver.optimal_moves(&s).unwrap().is_empty());
    }

    #[test]
    fn one_color_parity() {
        let solver = Solver::new();
        for n in 1..=12 {
            let s = GameState::initial(&[n]).unwrap();
            let expected = if n % 2 == 0 {
                Player::First
            } else {
                Player::Second
            };
            assert_eq!(solver.solve(&s).unwrap().winner, expected, "n = {n}");
        }
    }

    #[test]
    fn safety_examples() {
        let solver = Solver::new();
        assert!(solver.is_safe(&state("r:5|b:1,1,1")).unwrap());
        // outside the two-singleton safety claim, but safe all the same
        assert!(solver.is_safe(&state("<2,4;4;2>")).unwrap());
        assert!(!solver.is_safe(&state("<2,6;;>")).unwrap());
        assert!(solver.is_safe(&state("<2,2;2;2>")).unwrap());
        assert!(solver.is_safe(&GameState::two_color(3, 9).unwrap()).unwrap());
    }

    #[test]
    fn bound_is_enforced() {
        let solver = Solver::with_limits(SolverLimits {
            max_chips_two_color: 10,
            max_chips_multi_color: 6,
        });
        let s = GameState::two_color(5, 6).unwrap();
        assert!(matches!(
            solver.solve(&s),
            Err(SolverError::BoundExceeded { chips: 11, .. })
        ));
        let s = GameState::initial(&[2, 2, 3]).unwrap();
        assert!(solver.solve(&s).is_err());
    }

    #[test]
    fn table_audit_is_clean() {
        let solver = Solver::new();
        solver.solve(&GameState::two_color(4, 6).unwrap()).unwrap();
        assert!(solver.table().len() > 10);
        assert!(solver.audit_table().is_empty());
        assert!(solver.table().hits() > 0);
    }

    #[test]
    fn reachability_counts() {
        let limits = SolverLimits::default();
        let stats = state_space_stats(&[1, 1], &limits).unwrap();
        assert_eq!(stats.canonical_states, 2);
        assert_eq!(stats.labelled_states, 3);
        assert_eq!(stats.terminal_states, 2);
        let limits = SolverLimits {
            max_chips_two_color: 3,
            max_chips_multi_color: 3,
        };
        assert!(state_space_stats(&[2, 2], &limits).is_err());
    }
}

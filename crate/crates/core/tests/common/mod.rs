//! Reference game code shared by the oracle tests and the acceptance run.
//! It works on raw stack lists with no memo table and no color
//! canonicalization, so it shares nothing with the solver.

#![allow(dead_code)]

use std::collections::BTreeSet;

use babylon::game::{Color, StackId};
use babylon::GameState;

pub type Raw = Vec<(u8, u32)>;

pub fn successors(stacks: &Raw) -> BTreeSet<Raw> {
    let mut out = BTreeSet::new();
    for i in 0..stacks.len() {
        for j in 0..stacks.len() {
            let (a, b) = (stacks[i], stacks[j]);
            if i == j || (a.0 != b.0 && a.1 != b.1) {
                continue;
            }
            let mut next: Raw = stacks
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != i && k != j)
                .map(|(_, s)| *s)
                .collect();
            next.push((a.0, a.1 + b.1));
            next.sort();
            out.insert(next);
        }
    }
    out
}

/// Plain recursion; duplicate successors are skipped but nothing is cached
/// between calls.
pub fn reference_mover_wins(stacks: &Raw) -> bool {
    successors(stacks).iter().any(|s| !reference_mover_wins(s))
}

pub fn partitions(n: u32, max: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=n.min(max)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Every state with `colors` colors and between 1 and `max_n` chips.
pub fn all_states(colors: u8, max_n: u32) -> Vec<Raw> {
    let mut states: Vec<Raw> = vec![vec![]];
    for c in 0..colors {
        let mut next = Vec::new();
        for s in &states {
            let used: u32 = s.iter().map(|x| x.1).sum();
            for n in 0..=max_n - used {
                for part in partitions(n, n) {
                    let mut t = s.clone();
                    t.extend(part.into_iter().map(|h| (c, h)));
                    next.push(t);
                }
            }
        }
        states = next;
    }
    states.retain(|s| !s.is_empty());
    states
}

pub fn to_state(colors: u8, raw: &Raw) -> GameState {
    GameState::from_stacks(
        colors as usize,
        raw.iter().map(|&(c, h)| StackId::new(Color(c), h)),
    )
    .unwrap()
}

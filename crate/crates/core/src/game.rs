//! Color-generic Babylon rules.
//!
//! A position is a multiset of stack classes. Only the color of the top chip
//! and the height of a stack influence the rest of the game, so buried chips
//! are never represented.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Labels used by the text formats, indexed by color.
pub const COLOR_LABELS: [&str; 8] = ["r", "b", "g", "y", "p", "o", "w", "k"];

/// Largest supported number of colors.
pub const MAX_COLORS: usize = COLOR_LABELS.len();

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Color(pub u8);

impl Color {
    /// Minority color in two-color play.
    pub const RED: Color = Color(0);
    pub const BLUE: Color = Color(1);

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn label(self) -> &'static str {
        COLOR_LABELS[self.index()]
    }

    pub fn from_label(label: &str) -> Option<Color> {
        COLOR_LABELS
            .iter()
            .position(|l| *l == label)
            .map(|i| Color(i as u8))
    }

    /// The other color of a two-color game.
    pub fn other(self) -> Color {
        Color(1 - self.0.min(1))
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A stack identity: top color and height.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StackId {
    pub color: Color,
    pub height: u32,
}

impl StackId {
    pub fn new(color: Color, height: u32) -> Self {
        StackId { color, height }
    }
}

impl fmt::Display for StackId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.color, self.height)
    }
}

/// All stacks of one (color, height) pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StackClass {
    pub color: Color,
    pub height: u32,
    pub multiplicity: u32,
}

impl StackClass {
    pub fn id(&self) -> StackId {
        StackId::new(self.color, self.height)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Player {
    /// Alice.
    First,
    /// Bob.
    Second,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::First => Player::Second,
            Player::Second => Player::First,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Player::First => "first",
            Player::Second => "second",
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Place the `source` stack on top of the `destination` stack.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Move {
    pub source: StackId,
    pub destination: StackId,
}

impl Move {
    pub fn new(source: StackId, destination: StackId) -> Self {
        Move {
            source,
            destination,
        }
    }

    /// Shorthand used all over the strategy code.
    pub fn stacks(src_color: Color, src_height: u32, dst_color: Color, dst_height: u32) -> Self {
        Move::new(
            StackId::new(src_color, src_height),
            StackId::new(dst_color, dst_height),
        )
    }

    /// The stack produced by the move.
    pub fn result(&self) -> StackId {
        StackId::new(
            self.source.color,
            self.source.height + self.destination.height,
        )
    }

    /// Both stacks must match in color or in height.
    pub fn is_compatible(&self) -> bool {
        self.source.color == self.destination.color
            || self.source.height == self.destination.height
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}>{}", self.source, self.destination)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IllegalMove {
    #[error("source stack {0} is not on the table")]
    MissingSource(StackId),
    #[error("destination stack {0} is not on the table")]
    MissingDestination(StackId),
    #[error("only one stack {0} exists; a stack cannot be placed on itself")]
    SingleStack(StackId),
    #[error("stacks {from} and {onto} differ in color and differ in height")]
    Incompatible { from: StackId, onto: StackId },
    #[error("color {0} does not exist in this game")]
    UnknownColor(Color),
}

impl IllegalMove {
    /// Short identifier of the violated legality clause.
    pub fn clause(&self) -> &'static str {
        match self {
            IllegalMove::MissingSource(_) => "source-missing",
            IllegalMove::MissingDestination(_) => "destination-missing",
            IllegalMove::SingleStack(_) => "same-stack",
            IllegalMove::Incompatible { .. } => "color-or-height",
            IllegalMove::UnknownColor(_) => "unknown-color",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StateError {
    #[error("a game needs between 1 and {MAX_COLORS} colors, got {0}")]
    ColorCount(usize),
    #[error("stack heights must be positive")]
    ZeroHeight,
    #[error("color index {0} out of range")]
    ColorOutOfRange(u8),
    #[error("a game needs at least one chip")]
    Empty,
}

/// A Babylon position.
///
/// Classes are kept sorted by (color, height) with merged multiplicities, so
/// derived equality is equality of positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GameState {
    colors: u8,
    total: u32,
    classes: Vec<StackClass>,
}

impl GameState {
    /// Builds a state from arbitrary (color, height) stacks; duplicates merge.
    pub fn from_stacks<I>(colors: usize, stacks: I) -> Result<Self, StateError>
    where
        I: IntoIterator<Item = StackId>,
    {
        if colors == 0 || colors > MAX_COLORS {
            return Err(StateError::ColorCount(colors));
        }
        let mut ids: Vec<StackId> = stacks.into_iter().collect();
        for id in &ids {
            if id.height == 0 {
                return Err(StateError::ZeroHeight);
            }
            if id.color.index() >= colors {
                return Err(StateError::ColorOutOfRange(id.color.0));
            }
        }
        if ids.is_empty() {
            return Err(StateError::Empty);
        }
        ids.sort_unstable();
        let mut classes: Vec<StackClass> = Vec::new();
        for id in ids {
            match classes.last_mut() {
                Some(c) if c.id() == id => c.multiplicity += 1,
                _ => classes.push(StackClass {
                    color: id.color,
                    height: id.height,
                    multiplicity: 1,
                }),
            }
        }
        let total = classes.iter().map(|c| c.height * c.multiplicity).sum();
        Ok(GameState {
            colors: colors as u8,
            total,
            classes,
        })
    }

    /// All-singleton start with `counts[c]` chips of color `c`.
    pub fn initial(counts: &[u32]) -> Result<Self, StateError> {
        let stacks = counts.iter().enumerate().flat_map(|(c, &k)| {
            std::iter::repeat_n(StackId::new(Color(c as u8), 1), k as usize)
        });
        GameState::from_stacks(counts.len(), stacks)
    }

    /// Two-color start with `red` minority chips and `blue` majority chips.
    pub fn two_color(red: u32, blue: u32) -> Result<Self, StateError> {
        GameState::initial(&[red, blue])
    }

    pub fn color_count(&self) -> usize {
        self.colors as usize
    }

    pub fn total_chips(&self) -> u32 {
        self.total
    }

    pub fn classes(&self) -> &[StackClass] {
        &self.classes
    }

    pub fn stack_count(&self) -> u32 {
        self.classes.iter().map(|c| c.multiplicity).sum()
    }

    /// Number of stacks with identity `id`.
    pub fn count(&self, id: StackId) -> u32 {
        self.classes
            .binary_search_by(|c| c.id().cmp(&id))
            .map(|i| self.classes[i].multiplicity)
            .unwrap_or(0)
    }

    /// Stacks of one color, tallest last.
    pub fn stacks_of(&self, color: Color) -> impl Iterator<Item = &StackClass> + '_ {
        self.classes.iter().filter(move |c| c.color == color)
    }

    pub fn stack_count_of(&self, color: Color) -> u32 {
        self.stacks_of(color).map(|c| c.multiplicity).sum()
    }

    /// Heights of every stack of `color` in ascending order, one entry per stack.
    pub fn heights_of(&self, color: Color) -> Vec<u32> {
        self.stacks_of(color)
            .flat_map(|c| std::iter::repeat_n(c.height, c.multiplicity as usize))
            .collect()
    }

    /// Every stack, one entry per physical stack.
    pub fn stacks(&self) -> impl Iterator<Item = StackId> + '_ {
        self.classes
            .iter()
            .flat_map(|c| std::iter::repeat_n(c.id(), c.multiplicity as usize))
    }

    pub fn mover(&self) -> Player {
        if (self.total - self.stack_count()).is_multiple_of(2) {
            Player::First
        } else {
            Player::Second
        }
    }

    /// Checks a move against the rules, naming the violated clause.
    pub fn check_move(&self, mv: &Move) -> Result<(), IllegalMove> {
        for id in [mv.source, mv.destination] {
            if id.color.index() >= self.color_count() {
                return Err(IllegalMove::UnknownColor(id.color));
            }
        }
        let have_src = self.count(mv.source);
        if have_src == 0 {
            return Err(IllegalMove::MissingSource(mv.source));
        }
        let have_dst = self.count(mv.destination);
        if have_dst == 0 {
            return Err(IllegalMove::MissingDestination(mv.destination));
        }
        if mv.source == mv.destination && have_src < 2 {
            return Err(IllegalMove::SingleStack(mv.source));
        }
        if !mv.is_compatible() {
            return Err(IllegalMove::Incompatible {
                from: mv.source,
                onto: mv.destination,
            });
        }
        Ok(())
    }

    pub fn is_legal(&self, mv: &Move) -> bool {
        self.check_move(mv).is_ok()
    }

    /// Every legal class-level move, sorted by source then destination.
    pub fn legal_moves(&self) -> Vec<Move> {
        let mut moves = Vec::new();
        for src in &self.classes {
            for dst in &self.classes {
                let same = src.id() == dst.id();
                if same && src.multiplicity < 2 {
                    continue;
                }
                if src.color == dst.color || src.height == dst.height {
                    moves.push(Move::new(src.id(), dst.id()));
                }
            }
        }
        moves
    }

    pub fn has_legal_move(&self) -> bool {
        self.classes.iter().any(|src| {
            self.classes.iter().any(|dst| {
                (src.id() != dst.id() || src.multiplicity >= 2)
                    && (src.color == dst.color || src.height == dst.height)
            })
        })
    }

    pub fn is_terminal(&self) -> bool {
        !self.has_legal_move()
    }

    /// Applies a move after checking it.
    pub fn apply(&self, mv: &Move) -> Result<GameState, IllegalMove> {
        self.check_move(mv)?;
        Ok(self.apply_unchecked(mv))
    }

    /// Applies a move known to be legal.
    pub fn apply_unchecked(&self, mv: &Move) -> GameState {
        let mut classes = self.classes.clone();
        for id in [mv.source, mv.destination] {
            let i = classes
                .binary_search_by(|c| c.id().cmp(&id))
                .expect("move checked against state");
            classes[i].multiplicity -= 1;
            if classes[i].multiplicity == 0 {
                classes.remove(i);
            }
        }
        let made = mv.result();
        match classes.binary_search_by(|c| c.id().cmp(&made)) {
            Ok(i) => classes[i].multiplicity += 1,
            Err(i) => classes.insert(
                i,
                StackClass {
                    color: made.color,
                    height: made.height,
                    multiplicity: 1,
                },
            ),
        }
        GameState {
            colors: self.colors,
            total: self.total,
            classes,
        }
    }

    /// Relabels colors: color `c` becomes `perm[c]`.
    pub fn permute_colors(&self, perm: &[u8]) -> GameState {
        let mut classes: Vec<StackClass> = self
            .classes
            .iter()
            .map(|c| StackClass {
                color: Color(perm[c.color.index()]),
                ..*c
            })
            .collect();
        classes.sort_unstable();
        GameState {
            colors: self.colors,
            total: self.total,
            classes,
        }
    }

    /// Swaps the two colors of a two-color state.
    pub fn reflect(&self) -> GameState {
        debug_assert_eq!(self.colors, 2);
        self.permute_colors(&[1, 0])
    }

    /// Key shared by exactly the states that are equal up to a color permutation.
    pub fn canonical_key(&self) -> CanonicalKey {
        let encode = |classes: &[StackClass]| -> Vec<u8> {
            let mut key = Vec::with_capacity(classes.len() * 3 + 1);
            key.push(self.colors);
            for c in classes {
                key.push(c.color.0);
                key.push(c.height as u8);
                key.push(c.multiplicity as u8);
            }
            key
        };
        if self.colors == 1 {
            return CanonicalKey(encode(&self.classes));
        }
        let mut best: Option<Vec<u8>> = None;
        for perm in permutations(self.color_count()) {
            let mut classes: Vec<StackClass> = self
                .classes
                .iter()
                .map(|c| StackClass {
                    color: Color(perm[c.color.index()]),
                    ..*c
                })
                .collect();
            classes.sort_unstable();
            let key = encode(&classes);
            if best.as_ref().is_none_or(|b| key.cmp(b) == Ordering::Less) {
                best = Some(key);
            }
        }
        CanonicalKey(best.expect("at least one permutation"))
    }
}

/// Opaque memoization key; see [`GameState::canonical_key`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    /// Color count, then (color, height, multiplicity) byte triples.
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

/// All permutations of `0..k` in lexicographic order.
pub fn permutations(k: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut current: Vec<u8> = (0..k as u8).collect();
    loop {
        out.push(current.clone());
        // next lexicographic permutation
        let Some(i) = (1..k).rev().find(|&i| current[i - 1] < current[i]) else {
            break;
        };
        let j = (i..k).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const R: Color = Color::RED;
    const B: Color = Color::BLUE;

    fn st(stacks: &[(Color, u32)]) -> GameState {
        GameState::from_stacks(2, stacks.iter().map(|&(c, h)| StackId::new(c, h))).unwrap()
    }

    #[test]
    fn two_equal_singletons_have_both_orders() {
        let s = st(&[(R, 1), (B, 1)]);
        assert_eq!(
            s.legal_moves(),
            vec![Move::stacks(R, 1, B, 1), Move::stacks(B, 1, R, 1)]
        );
    }

    #[test]
    fn different_color_and_height_is_terminal() {
        let s = st(&[(R, 3), (B, 2)]);
        assert!(s.legal_moves().is_empty());
        assert!(s.is_terminal());
        assert!(!st(&[(R, 2), (B, 2)]).is_terminal());
        assert!(st(&[(B, 7)]).is_terminal());
    }

    #[test]
    fn shape_2_2_2_2_has_ten_moves() {
        // brute force over ordered pairs of physical stacks, deduplicated by class
        let s = st(&[(R, 1), (R, 1), (B, 1), (B, 1), (R, 2), (B, 2)]);
        let stacks: Vec<StackId> = s.stacks().collect();
        let mut pairs = std::collections::BTreeSet::new();
        for (i, a) in stacks.iter().enumerate() {
            for (j, b) in stacks.iter().enumerate() {
                if i != j && (a.color == b.color || a.height == b.height) {
                    pairs.insert((*a, *b));
                }
            }
        }
        assert_eq!(pairs.len(), 10);
        assert_eq!(s.legal_moves().len(), 10);
    }

    #[test]
    fn apply_merges_and_removes() {
        let s = st(&[(R, 1), (R, 1)]);
        assert_eq!(s.apply(&Move::stacks(R, 1, R, 1)).unwrap(), st(&[(R, 2)]));

        let s = st(&[(R, 1), (R, 4)]);
        assert_eq!(s.apply(&Move::stacks(R, 1, R, 4)).unwrap(), st(&[(R, 5)]));

        // <4,4;2;2> with RB: red hill of height 4, blue hill gone
        let mut stacks = vec![(R, 2), (B, 2)];
        stacks.extend(std::iter::repeat_n((R, 1), 4));
        stacks.extend(std::iter::repeat_n((B, 1), 4));
        let s = st(&stacks);
        let t = s.apply(&Move::stacks(R, 2, B, 2)).unwrap();
        assert_eq!(t.count(StackId::new(R, 4)), 1);
        assert_eq!(t.stack_count_of(B), 4);
        assert_eq!(t.total_chips(), 12);
        assert_eq!(t.stack_count(), s.stack_count() - 1);
    }

    #[test]
    fn illegal_moves_name_their_clause() {
        let s = st(&[(R, 1), (B, 2), (B, 1)]);
        let err = s.apply(&Move::stacks(R, 1, B, 2)).unwrap_err();
        assert_eq!(err.clause(), "color-or-height");
        assert_eq!(
            s.apply(&Move::stacks(R, 1, R, 1)).unwrap_err(),
            IllegalMove::SingleStack(StackId::new(R, 1))
        );
        assert_eq!(
            s.apply(&Move::stacks(R, 5, B, 1)).unwrap_err().clause(),
            "source-missing"
        );
        assert_eq!(
            s.apply(&Move::stacks(B, 1, R, 3)).unwrap_err().clause(),
            "destination-missing"
        );
    }

    #[test]
    fn mover_follows_parity() {
        let s = GameState::two_color(3, 9).unwrap();
        assert_eq!(s.mover(), Player::First);
        let t = s.apply(&s.legal_moves()[0]).unwrap();
        assert_eq!(t.mover(), Player::Second);
        // n = 12 with 7 stacks
        let u = st(&[(R, 1), (R, 1), (R, 1), (B, 1), (B, 2), (B, 3), (R, 3)]);
        assert_eq!(u.total_chips(), 12);
        assert_eq!(u.mover(), Player::Second);
    }

    #[test]
    fn canonical_key_ignores_color_names() {
        let a = st(&[(R, 1), (R, 1), (B, 3)]);
        let b = st(&[(B, 1), (B, 1), (R, 3)]);
        let c = st(&[(R, 1), (B, 3), (B, 3)]);
        assert_eq!(a.canonical_key(), b.canonical_key());
        assert_ne!(a.canonical_key(), c.canonical_key());
        assert_eq!(a.canonical_key(), a.clone().canonical_key());
    }

    #[test]
    fn permutations_are_complete() {
        assert_eq!(permutations(1).len(), 1);
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(permutations(3)[1], vec![0, 2, 1]);
    }
}

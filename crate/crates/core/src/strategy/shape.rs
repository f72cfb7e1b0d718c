//! Two-color shape queries used by the scripted strategies.

use crate::game::{Color, GameState, Move, StackId};

/// Assignment of the strategy's "red" and "blue" roles to actual colors.
///
/// Scripted cases are written for red as the color with fewer singletons;
/// reflected positions are handled by swapping the roles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Roles {
    pub red: Color,
    pub blue: Color,
}

impl Roles {
    pub const IDENTITY: Roles = Roles {
        red: Color::RED,
        blue: Color::BLUE,
    };
    pub const REFLECTED: Roles = Roles {
        red: Color::BLUE,
        blue: Color::RED,
    };

    pub fn both() -> [Roles; 2] {
        [Roles::IDENTITY, Roles::REFLECTED]
    }

    pub fn with_red(red: Color) -> Roles {
        Roles {
            red,
            blue: red.other(),
        }
    }

    pub fn red(&self, height: u32) -> StackId {
        StackId::new(self.red, height)
    }

    pub fn blue(&self, height: u32) -> StackId {
        StackId::new(self.blue, height)
    }
}

/// Alice's move described relative to the role colors, ignoring which of the
/// two stacks went on top when that does not change the result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Play {
    /// `rr`: two red singletons.
    RedRed,
    /// `rb`: red singleton on a blue singleton.
    RedOnBlue,
    /// `br`: blue singleton on a red singleton.
    BlueOnRed,
    /// `bb`
    BlueBlue,
    /// `rR`: red singleton joins a red hill.
    RedToHill,
    /// `bB`
    BlueToHill,
    /// `RB`: red hill on the blue hill.
    RedHillOnBlue,
    /// `BR`
    BlueHillOnRed,
    Other,
}

impl Play {
    pub fn classify(mv: &Move, roles: Roles) -> Play {
        let (src, dst) = (mv.source, mv.destination);
        let red = |id: StackId| id.color == roles.red;
        match (src.height, dst.height) {
            (1, 1) => match (red(src), red(dst)) {
                (true, true) => Play::RedRed,
                (true, false) => Play::RedOnBlue,
                (false, true) => Play::BlueOnRed,
                (false, false) => Play::BlueBlue,
            },
            (1, _) | (_, 1) if src.color == dst.color => {
                if red(src) {
                    Play::RedToHill
                } else {
                    Play::BlueToHill
                }
            }
            (a, b) if a >= 2 && b >= 2 && src.color != dst.color => {
                if red(src) {
                    Play::RedHillOnBlue
                } else {
                    Play::BlueHillOnRed
                }
            }
            _ => Play::Other,
        }
    }
}

pub fn singletons(state: &GameState, color: Color) -> u32 {
    state.count(StackId::new(color, 1))
}

/// Hill heights of one color, tallest first.
pub fn hills(state: &GameState, color: Color) -> Vec<u32> {
    let mut h: Vec<u32> = state
        .heights_of(color)
        .into_iter()
        .filter(|&h| h >= 2)
        .collect();
    h.reverse();
    h
}

/// Height of the only hill of `color`, if there is exactly one.
pub fn only_hill(state: &GameState, color: Color) -> Option<u32> {
    match hills(state, color).as_slice() {
        [h] => Some(*h),
        _ => None,
    }
}

pub fn is_even_state(state: &GameState) -> bool {
    state.stack_count().is_multiple_of(2)
}

/// Half the chip count, for games with an even number of chips.
pub fn half(state: &GameState) -> Option<u32> {
    let n = state.total_chips();
    n.is_multiple_of(2).then_some(n / 2)
}

/// Even state with one even hill per color and at least four singletons of
/// each color.
pub fn is_target_state(state: &GameState) -> bool {
    if state.color_count() != 2 || !is_even_state(state) {
        return false;
    }
    [Color::RED, Color::BLUE].into_iter().all(|c| {
        singletons(state, c) >= 4 && only_hill(state, c).is_some_and(|h| h % 2 == 0)
    })
}

/// `<2,2s;2u;2v>` read in some role orientation. Heights are stored whole.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TwoHillShape {
    pub roles: Roles,
    pub red_singletons: u32,
    pub blue_singletons: u32,
    pub red_hill: u32,
    pub blue_hill: u32,
    pub m: u32,
}

impl TwoHillShape {
    /// Reads a state with exactly one even hill per color in the given roles.
    pub fn read(state: &GameState, roles: Roles) -> Option<TwoHillShape> {
        if state.color_count() != 2 {
            return None;
        }
        let m = half(state)?;
        let red_hill = only_hill(state, roles.red)?;
        let blue_hill = only_hill(state, roles.blue)?;
        if red_hill % 2 != 0 || blue_hill % 2 != 0 {
            return None;
        }
        Some(TwoHillShape {
            roles,
            red_singletons: singletons(state, roles.red),
            blue_singletons: singletons(state, roles.blue),
            red_hill,
            blue_hill,
            m,
        })
    }

    /// `<2,2s;2u;2v>` with `s >= 1`, without the exclusion clause.
    /// (`<2,0;2;2>` and `<2,0;4;4>` are lost for Bob.)
    pub fn is_two_singleton_form(&self) -> bool {
        self.red_singletons == 2 && self.blue_singletons >= 2 && self.blue_singletons.is_multiple_of(2)
    }

    /// `s` in `<2,2s;2u;2v>`.
    pub fn s(&self) -> u32 {
        self.blue_singletons / 2
    }

    /// The one shape of the two-singleton form not covered by the safety claim.
    pub fn is_excluded(&self) -> bool {
        self.red_hill + 2 == self.m && self.s() > 1
    }

    /// `<3,k;2u;2v>` with `k >= 3` and `u + v >= 3`.
    pub fn is_three_singleton_form(&self) -> bool {
        self.red_singletons == 3
            && self.blue_singletons >= 3
            && self.red_hill + self.blue_hill >= 6
    }
}

/// Orientations in which `state` has the two-singleton form, optionally
/// keeping only those outside the exclusion.
pub fn two_singleton_forms(state: &GameState, skip_excluded: bool) -> Vec<TwoHillShape> {
    if !is_even_state(state) {
        return Vec::new();
    }
    Roles::both()
        .into_iter()
        .filter_map(|r| TwoHillShape::read(state, r))
        .filter(|s| s.is_two_singleton_form() && !(skip_excluded && s.is_excluded()))
        .collect()
}

pub fn three_singleton_forms(state: &GameState) -> Vec<TwoHillShape> {
    if !is_even_state(state) {
        return Vec::new();
    }
    Roles::both()
        .into_iter()
        .filter_map(|r| TwoHillShape::read(state, r))
        .filter(|s| s.is_three_singleton_form())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::parse_state;

    #[test]
    fn target_states() {
        assert!(is_target_state(&parse_state("<4,4;2;2>").unwrap()));
        assert!(!is_target_state(&parse_state("<3,4;2;2>").unwrap()));
        assert!(!is_target_state(&parse_state("<4,4;3;2>").unwrap()));
        assert!(!is_target_state(&parse_state("<4,4;2,2;2>").unwrap()));
        assert!(!is_target_state(&parse_state("<6,6;;>").unwrap()));
    }

    #[test]
    fn plays_are_read_through_roles() {
        let rb = Move::stacks(Color::RED, 1, Color::BLUE, 1);
        assert_eq!(Play::classify(&rb, Roles::IDENTITY), Play::RedOnBlue);
        assert_eq!(Play::classify(&rb, Roles::REFLECTED), Play::BlueOnRed);
        let hill_first = Move::stacks(Color::RED, 4, Color::RED, 1);
        assert_eq!(Play::classify(&hill_first, Roles::IDENTITY), Play::RedToHill);
        let hills = Move::stacks(Color::BLUE, 2, Color::RED, 2);
        assert_eq!(Play::classify(&hills, Roles::IDENTITY), Play::BlueHillOnRed);
        let pair_on_pair = Move::stacks(Color::RED, 2, Color::RED, 2);
        assert_eq!(Play::classify(&pair_on_pair, Roles::IDENTITY), Play::Other);
    }

    #[test]
    fn forms_in_both_orientations() {
        let s = parse_state("<2,2;2;2>").unwrap();
        assert_eq!(two_singleton_forms(&s, true).len(), 2);
        let s = parse_state("<2,4;4;2>").unwrap();
        let forms = two_singleton_forms(&s, false);
        assert_eq!(forms.len(), 1);
        assert!(forms[0].is_excluded());
        assert!(two_singleton_forms(&s, true).is_empty());
        let s = parse_state("<5,3;2;4>").unwrap();
        let forms = three_singleton_forms(&s);
        assert_eq!(forms.len(), 1);
        assert_eq!(forms[0].roles, Roles::REFLECTED);
        assert_eq!(forms[0].red_hill, 4);
    }
}

//! Text formats for states and moves.
//!
//! Two state grammars are accepted:
//!
//! * generic, one section per color: `r:1,1,4|b:2,2` (an empty section such
//!   as `b:` means the color has no stacks left);
//! * shape notation for two-color states: `<j,k;u1,u2;v1,v2>` with `j` red
//!   and `k` blue singletons and the listed red and blue hills. A lone `0`
//!   in a hill list stands for "no hill".
//!
//! Moves are written `r@1>b@1`: the red singleton goes on top of a blue one.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::game::{Color, GameState, Move, StackId, StateError, COLOR_LABELS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid height {height} at {pos}: {msg}")]
    Height {
        pos: usize,
        height: u32,
        msg: &'static str,
    },
    #[error("unknown color label {0:?}")]
    UnknownColor(String),
    #[error("shape notation needs a two-color state, this one has {0} colors")]
    NotTwoColor(usize),
    #[error(transparent)]
    State(#[from] StateError),
}

fn parse_err(pos: usize, msg: impl Into<String>) -> CodecError {
    CodecError::Parse {
        pos,
        msg: msg.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Style {
    #[default]
    Generic,
    /// `<j,k;u..;v..>`
    Shape,
}

/// Two-color view of a state: singleton counts plus hill heights.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShapeDescriptor {
    /// Red singletons.
    pub j: u32,
    /// Blue singletons.
    pub k: u32,
    /// Red hill heights, descending.
    pub red_hills: Vec<u32>,
    /// Blue hill heights, descending.
    pub blue_hills: Vec<u32>,
}

impl ShapeDescriptor {
    pub fn of(state: &GameState) -> Result<Self, CodecError> {
        if state.color_count() != 2 {
            return Err(CodecError::NotTwoColor(state.color_count()));
        }
        let hills = |c: Color| -> Vec<u32> {
            let mut h: Vec<u32> = state.heights_of(c).into_iter().filter(|&h| h >= 2).collect();
            h.reverse();
            h
        };
        Ok(ShapeDescriptor {
            j: state.count(StackId::new(Color::RED, 1)),
            k: state.count(StackId::new(Color::BLUE, 1)),
            red_hills: hills(Color::RED),
            blue_hills: hills(Color::BLUE),
        })
    }

    pub fn to_state(&self) -> Result<GameState, CodecError> {
        let single = |c: Color, n: u32| std::iter::repeat_n(StackId::new(c, 1), n as usize);
        let stacks = single(Color::RED, self.j)
            .chain(single(Color::BLUE, self.k))
            .chain(self.red_hills.iter().map(|&h| StackId::new(Color::RED, h)))
            .chain(self.blue_hills.iter().map(|&h| StackId::new(Color::BLUE, h)));
        Ok(GameState::from_stacks(2, stacks)?)
    }

    pub fn reflect(&self) -> ShapeDescriptor {
        ShapeDescriptor {
            j: self.k,
            k: self.j,
            red_hills: self.blue_hills.clone(),
            blue_hills: self.red_hills.clone(),
        }
    }
}

impl fmt::Display for ShapeDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |h: &[u32]| {
            h.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(
            f,
            "<{},{};{};{}>",
            self.j,
            self.k,
            list(&self.red_hills),
            list(&self.blue_hills)
        )
    }
}

/// Parses either state grammar; the leading `<` selects shape notation.
pub fn parse_state(text: &str) -> Result<GameState, CodecError> {
    let trimmed = text.trim();
    let offset = text.len() - text.trim_start().len();
    if trimmed.starts_with('<') {
        parse_shape(trimmed, offset)
    } else {
        parse_generic(trimmed, offset)
    }
}

pub fn format_state(state: &GameState, style: Style) -> Result<String, CodecError> {
    match style {
        Style::Shape => Ok(ShapeDescriptor::of(state)?.to_string()),
        Style::Generic => Ok(format_generic(state)),
    }
}

/// Shape notation for two-color states, generic otherwise.
pub fn display_state(state: &GameState) -> String {
    format_state(state, Style::Shape).unwrap_or_else(|_| format_generic(state))
}

fn format_generic(state: &GameState) -> String {
    (0..state.color_count())
        .map(|c| {
            let color = Color(c as u8);
            let heights = state
                .heights_of(color)
                .iter()
                .map(|h| h.to_string())
                .collect::<Vec<_>>()
                .join(",");
            format!("{}:{}", color.label(), heights)
        })
        .collect::<Vec<_>>()
        .join("|")
}

/// Parses a comma separated list of positive integers starting at byte `pos`.
fn parse_numbers(text: &str, pos: usize) -> Result<Vec<(u32, usize)>, CodecError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut at = pos;
    for item in text.split(',') {
        let lead = item.len() - item.trim_start().len();
        let word = item.trim();
        if word.is_empty() {
            return Err(parse_err(at, "empty list entry"));
        }
        let value: u32 = word
            .parse()
            .map_err(|_| parse_err(at + lead, format!("expected a number, found {word:?}")))?;
        out.push((value, at + lead));
        at += item.len() + 1;
    }
    Ok(out)
}

fn parse_generic(text: &str, offset: usize) -> Result<GameState, CodecError> {
    let mut stacks = Vec::new();
    let mut at = offset;
    let mut colors = 0;
    for (index, section) in text.split('|').enumerate() {
        let Some(colon) = section.find(':') else {
            return Err(parse_err(at, "expected `label:heights`"));
        };
        let label = section[..colon].trim();
        let color = Color::from_label(label)
            .ok_or_else(|| CodecError::UnknownColor(label.to_string()))?;
        if color.index() != index {
            return Err(parse_err(
                at,
                format!(
                    "color sections must be in order {}; found {label:?} in position {index}",
                    COLOR_LABELS.join(",")
                ),
            ));
        }
        for (height, pos) in parse_numbers(&section[colon + 1..], at + colon + 1)? {
            if height < 1 {
                return Err(CodecError::Height {
                    pos,
                    height,
                    msg: "stack heights must be at least 1",
                });
            }
            stacks.push(StackId::new(color, height));
        }
        colors += 1;
        at += section.len() + 1;
    }
    Ok(GameState::from_stacks(colors, stacks)?)
}

fn parse_shape(text: &str, offset: usize) -> Result<GameState, CodecError> {
    let Some(body) = text.strip_prefix('<').and_then(|t| t.strip_suffix('>')) else {
        return Err(parse_err(offset + text.len(), "expected closing `>`"));
    };
    let sections: Vec<&str> = body.split(';').collect();
    if sections.len() != 3 {
        return Err(parse_err(
            offset + 1,
            format!(
                "expected three `;`-separated sections, found {}",
                sections.len()
            ),
        ));
    }
    let mut at = offset + 1;
    let counts = parse_numbers(sections[0], at)?;
    if counts.len() != 2 {
        return Err(parse_err(at, "expected singleton counts `j,k`"));
    }
    at += sections[0].len() + 1;
    let mut hills = [Vec::new(), Vec::new()];
    for (slot, section) in sections[1..].iter().enumerate() {
        let listed = parse_numbers(section, at)?;
        let empty = listed.len() == 1 && listed[0].0 == 0;
        if !empty {
            for (height, pos) in listed {
                if height < 2 {
                    return Err(CodecError::Height {
                        pos,
                        height,
                        msg: "hills are at least two chips tall",
                    });
                }
                hills[slot].push(height);
            }
        }
        at += section.len() + 1;
    }
    let [red_hills, blue_hills] = hills;
    ShapeDescriptor {
        j: counts[0].0,
        k: counts[1].0,
        red_hills,
        blue_hills,
    }
    .to_state()
}

fn parse_stack_id(text: &str, pos: usize) -> Result<StackId, CodecError> {
    let Some((label, height)) = text.split_once('@') else {
        return Err(parse_err(pos, format!("expected `color@height`, found {text:?}")));
    };
    let color = Color::from_label(label.trim())
        .ok_or_else(|| CodecError::UnknownColor(label.trim().to_string()))?;
    let hpos = pos + label.len() + 1;
    let height: u32 = height
        .trim()
        .parse()
        .map_err(|_| parse_err(hpos, format!("expected a height, found {height:?}")))?;
    if height == 0 {
        return Err(CodecError::Height {
            pos: hpos,
            height,
            msg: "stack heights must be at least 1",
        });
    }
    Ok(StackId::new(color, height))
}

pub fn parse_move(text: &str) -> Result<Move, CodecError> {
    let text = text.trim();
    let Some((src, dst)) = text.split_once('>') else {
        return Err(parse_err(0, "expected `source>destination`"));
    };
    Ok(Move::new(
        parse_stack_id(src, 0)?,
        parse_stack_id(dst, src.len() + 1)?,
    ))
}

pub fn format_move(mv: &Move) -> String {
    mv.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(text: &str) -> ShapeDescriptor {
        ShapeDescriptor::of(&parse_state(text).unwrap()).unwrap()
    }

    #[test]
    fn shape_notation_examples() {
        let d = shape("<3,5;4;2>");
        assert_eq!((d.j, d.k), (3, 5));
        assert_eq!(d.red_hills, vec![4]);
        assert_eq!(d.blue_hills, vec![2]);

        let d = shape("<5,7;0;2>");
        assert_eq!((d.j, d.k), (5, 7));
        assert!(d.red_hills.is_empty());
        assert_eq!(d.blue_hills, vec![2]);

        let s = parse_state("<6,9;;>").unwrap();
        assert_eq!(s, GameState::two_color(6, 9).unwrap());
    }

    #[test]
    fn generic_examples() {
        let s = parse_state("r:1|b:1").unwrap();
        assert_eq!(s, GameState::two_color(1, 1).unwrap());
        let s = parse_state("r:1,1,4|b:2,2").unwrap();
        assert_eq!(s.total_chips(), 10);
        assert_eq!(format_state(&s, Style::Generic).unwrap(), "r:1,1,4|b:2,2");
        let s = GameState::two_color(2, 3).unwrap();
        assert_eq!(format_state(&s, Style::Generic).unwrap(), "r:1,1|b:1,1,1");
        let s = parse_state("r:|b:12").unwrap();
        assert_eq!(s.stack_count(), 1);
    }

    #[test]
    fn shape_round_trip_is_identical_text() {
        for text in ["<3,5;4;2>", "<2,4;4;2>", "<1,3;2,2;>", "<3,9;;>", "<0,0;5;3,2>"] {
            let s = parse_state(text).unwrap();
            assert_eq!(format_state(&s, Style::Shape).unwrap(), text);
        }
    }

    #[test]
    fn shape_style_needs_two_colors() {
        let s = GameState::initial(&[3, 3, 3, 3]).unwrap();
        assert_eq!(
            format_state(&s, Style::Shape),
            Err(CodecError::NotTwoColor(4))
        );
        assert_eq!(display_state(&s), "r:1,1,1|b:1,1,1|g:1,1,1|y:1,1,1");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            parse_state("<3,5;1;2>"),
            Err(CodecError::Height { height: 1, .. })
        ));
        assert!(matches!(
            parse_state("r:1,0|b:1"),
            Err(CodecError::Height { height: 0, .. })
        ));
        assert!(matches!(
            parse_state("<2,4;4,2>"),
            Err(CodecError::Parse { .. })
        ));
        assert!(matches!(
            parse_state("<2,x;4;2>"),
            Err(CodecError::Parse { pos: 3, .. })
        ));
        assert!(matches!(
            parse_state("r:1|q:1"),
            Err(CodecError::UnknownColor(_))
        ));
        assert!(matches!(
            parse_state("b:1|r:1"),
            Err(CodecError::Parse { .. })
        ));
        assert!(parse_state("<0,0;;>").is_err());
    }

    #[test]
    fn move_grammar() {
        let m = parse_move("r@1>r@4").unwrap();
        assert_eq!(m, Move::stacks(Color::RED, 1, Color::RED, 4));
        let m = parse_move("b@2>r@2").unwrap();
        assert_eq!(m, Move::stacks(Color::BLUE, 2, Color::RED, 2));
        assert_eq!(format_move(&m), "b@2>r@2");
        assert!(matches!(parse_move("x@1>r@1"), Err(CodecError::UnknownColor(_))));
        assert!(parse_move("r@1").is_err());
        assert!(parse_move("r@0>r@1").is_err());
    }
}

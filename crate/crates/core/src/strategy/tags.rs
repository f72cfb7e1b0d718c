use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

macro_rules! rule_tags {
    ($($variant:ident => $text:literal, $help:literal;)*) => {
        /// Identifies which scripted case produced an engine move.
        ///
        /// The string forms are a stable vocabulary shared by the harness
        /// reports, the CLI, the game service and the browser client.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum RuleTag {
            $($variant,)*
        }

        impl RuleTag {
            pub const ALL: &'static [RuleTag] = &[$(RuleTag::$variant,)*];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(RuleTag::$variant => $text,)*
                }
            }

            /// One-line explanation for humans watching a game.
            pub fn description(self) -> &'static str {
                match self {
                    $(RuleTag::$variant => $help,)*
                }
            }
        }
    };
}

rule_tags! {
    OpeningXxYy => "opening.xx->yy", "Alice paired two chips of one color; Bob pairs two of the other color";
    OpeningXyYx => "opening.xy->yx", "Alice put one color on the other; Bob does the reverse";
    P5BbRb => "p5.bb->rb", "five minority chips: Bob answers a blue pair by putting red on blue";
    P5RbBb => "p5.rb->bb", "five minority chips: Bob answers red-on-blue by pairing blues";
    P5BrRr => "p5.br->rr", "five minority chips: Bob answers blue-on-red by pairing reds";
    P5RrRr => "p5.rr->rr", "five minority chips: Bob answers a red pair with another red pair";
    P4Q4Force => "p4q4.force", "four chips of each color: Bob steers to one red singleton, two red 2-stacks, three blue singletons";
    EvenHillXz => "even-hill.xz", "Bob stacks Alice's new 2-stack onto his hill of the same color";
    EvenHillXX => "even-hill.xX", "Bob adds another singleton to the hill Alice just grew";
    EvenHillXY => "even-hill.XY", "Alice merged the hills; Bob starts a new hill of the buried color";
    Position1 => "position1.rR", "Bob grows the red hill again, reaching a two-singleton shape";
    Position1Exception => "position1.exception", "growing the red hill would give Alice a half-size red stack; Bob covers a red singleton";
    Position2 => "position2.mirrored", "Bob stacks Alice's red pair onto the red hill";
    Position2Exception => "position2.mirrored.exception", "stacking the red pair would give Alice a half-size red stack; Bob covers a red singleton";
    Position3 => "position3.rr", "after Alice merged the hills Bob pairs two red singletons";
    Lemma4I => "lemma4.i", "Bob stacks Alice's red-on-blue pair onto the red hill";
    Lemma4IException => "lemma4.i.exception", "Bob covers a red singleton to keep both colors alive";
    Lemma4II => "lemma4.ii", "Bob stacks Alice's blue-on-red pair onto the blue hill";
    Lemma4IIException => "lemma4.ii.exception", "Bob covers a red singleton, threatening to finish red";
    Lemma4IIBrrb => "lemma4.ii.brrb", "Bob buries Alice's red-on-blue pair under his blue-on-red pair";
    Lemma4IIThreat => "lemma4.ii.threat", "Bob puts the last red singleton on the red hill";
    Lemma4IIIBr => "lemma4.iii.br", "Bob covers a red singleton";
    Lemma4IIIBR => "lemma4.iii.BR", "Bob captures the red hill with the blue hill";
    Lemma4IIIRrr => "lemma4.iii.rrr", "Bob puts the last red singleton on Alice's red pair";
    Lemma4IIIMerge => "lemma4.iii.merge", "Bob merges the two red stacks into one";
    Lemma4IVBr => "lemma4.iv.br", "Bob covers a red singleton";
    Lemma4IVRr => "lemma4.iv.rr", "Bob pairs the two red singletons";
    Lemma4VBr => "lemma4.v.br", "Bob covers a red singleton";
    Lemma4VRr => "lemma4.v.rr", "Bob pairs the two red singletons";
    Lemma4VI => "lemma4.vi", "Bob pairs two red singletons so red survives";
    Lemma4VII => "lemma4.vii", "Bob adds a blue singleton to the blue hill, repeating the shape";
    Lemma3I => "lemma3.i", "Bob pairs the red singletons after Alice captured the red hill";
    Lemma3IObliterate => "lemma3.i.obliterate", "Bob covers Alice's new blue 2-stack with his red pair";
    Lemma3IIRr => "lemma3.ii.rr", "Bob pairs the red singletons";
    Lemma3IIRx => "lemma3.ii.rX", "Bob puts a red singleton on the new half-size red hill";
    Lemma3IIMinusOne => "lemma3.ii.m-1", "Bob pairs the red singletons (odd-height branch)";
    Lemma3IIBr => "lemma3.ii.br", "Bob covers a red singleton";
    Lemma3IIBrrb => "lemma3.ii.brrb", "Bob buries Alice's red-on-blue pair under his blue-on-red pair";
    Lemma3IIIBbB => "lemma3.iii.bbB", "Bob stacks Alice's blue pair onto the blue hill";
    Lemma3IIIBR => "lemma3.iii.BR", "Bob captures the red hill with the blue hill";
    Lemma3IVBbB => "lemma3.iv.bbB", "Bob adds a blue singleton to the blue hill";
    Lemma3IVRb => "lemma3.iv.rb", "Bob puts a red singleton on the last blue singleton";
    Lemma3VBr => "lemma3.v.br", "Bob covers the last red singleton";
    Lemma3VRR => "lemma3.v.rR", "Bob puts the last red singleton on the red hill";
    Lemma3VIRrb => "lemma3.vi.rrb", "Bob puts the last red singleton on Alice's red-on-blue pair";
    Lemma3VIBr => "lemma3.vi.br", "Bob covers the last red singleton";
    Lemma3VIIAmbiguous => "lemma3.vii.ambiguous", "no scripted reply exists here; Bob plays a solver move";
    Lemma3VIIIBR => "lemma3.viii.BR", "Bob captures the red hill with the blue hill before red reaches half the chips";
    Lemma3VIIIRrR => "lemma3.viii.rrR", "Bob stacks Alice's red pair onto the red hill, leaving one red stack";
    Lemma1Free => "lemma1.free", "the lone tall stack can never be covered; any move keeps both colors";
    Lemma2PairU => "lemma2.pair-u", "Bob stacks the two stacks that match the lone stack's height";
    Lemma2KillU => "lemma2.kill-u", "Bob removes the one stack matching the lone stack's height";
    Lemma2Main => "lemma2.main", "Bob builds the tallest stack whose height differs from the lone stack";
    AliceCoverRed => "alice.cover-red", "Alice covers the lone red chip with a blue chip";
    AliceStackRed => "alice.stack-red", "Alice stacks the two red chips";
    AliceCoverRedHill => "alice.cover-red-hill", "Alice covers the red pair with Bob's blue pair";
    AliceOneColor => "alice.one-color", "only one color is left; every move is fine";
    AliceRedOnBlue => "alice.red-on-blue", "Alice puts the red chip on a blue chip to keep red alive";
    AliceDouble => "alice.double", "Alice piles the red stack onto the blue stack that matched its height";
    AliceBlueMerge => "alice.blue-merge", "Alice merges blue stacks without matching the red height";
    Fallback => "fallback", "no scripted reply applies; the engine plays a solver move";
    SolverOptimal => "solver-optimal", "the engine plays a move that wins with best play";
    LosingPosition => "losing-position", "every move loses; the engine plays the first legal one";
}

impl RuleTag {
    pub fn is_fallback(self) -> bool {
        matches!(self, RuleTag::Fallback | RuleTag::Lemma3VIIAmbiguous)
    }
}

impl fmt::Display for RuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RuleTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleTag::ALL
            .iter()
            .copied()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| format!("unknown rule tag {s:?}"))
    }
}

impl Serialize for RuleTag {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for RuleTag {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strings_are_unique_and_parse_back() {
        let mut seen = std::collections::HashSet::new();
        for tag in RuleTag::ALL {
            assert!(seen.insert(tag.as_str()), "duplicate {tag}");
            assert_eq!(tag.as_str().parse::<RuleTag>().unwrap(), *tag);
            assert!(!tag.description().is_empty());
        }
        assert!("nope".parse::<RuleTag>().is_err());
    }
}

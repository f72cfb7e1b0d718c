use serde::{Deserialize, Serialize};

use crate::codec::{display_state, format_move, format_state, parse_move, ShapeDescriptor, Style};
use crate::game::{GameState, Move, Player, StackClass};
use crate::solver::Solver;
use crate::strategy::{
    alice_move, bob_move, classify_one_color, classify_winner, GameConfig, PhaseMemory, RuleTag,
    StrategyDecision,
};

use super::ServiceError;

/// Wire format version of every JSON document the service returns.
pub const API_VERSION: u32 = 1;

/// Body of `POST /games`: either `p`/`q` or a `colors` vector.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameSetup {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colors: Option<Vec<u32>>,
    /// Defaults to the side predicted to lose, so the engine demonstrates the win.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub human_side: Option<Player>,
}

impl GameSetup {
    pub fn two_color(p: u32, q: u32) -> Self {
        GameSetup {
            p: Some(p),
            q: Some(q),
            ..GameSetup::default()
        }
    }

    pub fn human(mut self, side: Player) -> Self {
        self.human_side = Some(side);
        self
    }

    fn counts(&self) -> Result<Vec<u32>, ServiceError> {
        match (self.p, self.q, &self.colors) {
            (Some(p), Some(q), None) => Ok(vec![p, q]),
            (None, None, Some(c)) => Ok(c.clone()),
            _ => Err(ServiceError::InvalidConfig(
                "give either p and q, or colors".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EngineMode {
    /// Bob's scripted strategy (even chip count, at least three minority chips).
    BobScript,
    /// Alice's scripted strategy (one or two minority chips).
    AliceScript,
    /// Perfect play straight from the solver.
    Solver,
}

impl EngineMode {
    pub fn as_str(self) -> &'static str {
        match self {
            EngineMode::BobScript => "bob-script",
            EngineMode::AliceScript => "alice-script",
            EngineMode::Solver => "solver",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Actor {
    Human,
    Engine,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub seq: u32,
    pub actor: Actor,
    #[serde(rename = "move")]
    pub mv: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule_tag: Option<RuleTag>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    InProgress,
    Finished,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateView {
    pub generic: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub descriptor: Option<ShapeDescriptor>,
    pub stacks: Vec<StackClass>,
}

impl StateView {
    pub fn of(state: &GameState) -> Self {
        StateView {
            generic: format_state(state, Style::Generic).expect("generic always formats"),
            shape: format_state(state, Style::Shape).ok(),
            descriptor: ShapeDescriptor::of(state).ok(),
            stacks: state.classes().to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameView {
    pub version: u32,
    pub id: String,
    pub colors: Vec<u32>,
    pub state: StateView,
    pub to_move: Player,
    pub human_side: Player,
    pub engine_side: Player,
    pub engine_mode: EngineMode,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub winner: Option<Player>,
    /// Classification of the starting position, where one is known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicted_winner: Option<Player>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prediction_reason: Option<String>,
    pub history: Vec<HistoryEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub version: u32,
    pub id: String,
    /// Replaying the history reproduces the stored state.
    pub replay_matches: bool,
    /// Consecutive entries never share an actor, and each actor moved on its own turn.
    pub alternation_ok: bool,
    pub replayed_state: String,
    pub stored_state: String,
}

/// One game in progress. Pure state machine; the HTTP layer adds locking.
#[derive(Debug, Clone)]
pub struct Session {
    pub id: String,
    pub setup: GameSetup,
    colors: Vec<u32>,
    initial: GameState,
    state: GameState,
    human_side: Player,
    mode: EngineMode,
    config: Option<GameConfig>,
    memory: Option<PhaseMemory>,
    history: Vec<HistoryEntry>,
}

impl Session {
    pub fn create(id: String, setup: GameSetup, solver: &Solver) -> Result<Self, ServiceError> {
        let colors = setup.counts()?;
        if colors.is_empty() || colors.contains(&0) {
            return Err(ServiceError::InvalidConfig(
                "every color needs at least one chip".into(),
            ));
        }
        let initial = GameState::initial(&colors)
            .map_err(|e| ServiceError::InvalidConfig(e.to_string()))?;
        solver.limits().check(&initial)?;
        let config = match colors[..] {
            [p, q] => Some(GameConfig::new(p, q).map_err(|e| ServiceError::InvalidConfig(e.to_string()))?),
            _ => None,
        };
        let predicted = predicted(&colors, config);
        let human_side = setup
            .human_side
            .unwrap_or_else(|| predicted.map_or(Player::First, |(w, _)| w.opponent()));
        let engine = human_side.opponent();
        let mode = match config {
            Some(c) if engine == Player::Second && c.m().is_some() && c.p >= 3 => EngineMode::BobScript,
            Some(c) if engine == Player::First && c.p <= 2 => EngineMode::AliceScript,
            _ => EngineMode::Solver,
        };
        let memory = match (mode, config) {
            (EngineMode::BobScript, Some(c)) => Some(PhaseMemory::new(c)?),
            _ => None,
        };
        Ok(Session {
            id,
            setup,
            colors,
            state: initial.clone(),
            initial,
            human_side,
            mode,
            config,
            memory,
            history: Vec::new(),
        })
    }

    pub fn state(&self) -> &GameState {
        &self.state
    }

    pub fn history(&self) -> &[HistoryEntry] {
        &self.history
    }

    pub fn mode(&self) -> EngineMode {
        self.mode
    }

    pub fn human_side(&self) -> Player {
        self.human_side
    }

    pub fn is_finished(&self) -> bool {
        self.state.is_terminal()
    }

    /// The player who made the last move, once nobody can move.
    pub fn winner(&self) -> Option<Player> {
        self.is_finished().then(|| self.state.mover().opponent())
    }

    pub fn legal_moves(&self) -> Vec<String> {
        self.state.legal_moves().iter().map(format_move).collect()
    }

    pub fn view(&self) -> GameView {
        let predicted = predicted(&self.colors, self.config);
        GameView {
            version: API_VERSION,
            id: self.id.clone(),
            colors: self.colors.clone(),
            state: StateView::of(&self.state),
            to_move: self.state.mover(),
            human_side: self.human_side,
            engine_side: self.human_side.opponent(),
            engine_mode: self.mode,
            status: if self.is_finished() {
                Status::Finished
            } else {
                Status::InProgress
            },
            winner: self.winner(),
            predicted_winner: predicted.map(|(w, _)| w),
            prediction_reason: predicted.map(|(_, r)| r.to_string()),
            history: self.history.clone(),
        }
    }

    fn ensure_turn(&self, actor: Actor) -> Result<(), ServiceError> {
        if self.is_finished() {
            return Err(ServiceError::GameFinished);
        }
        let side = match actor {
            Actor::Human => self.human_side,
            Actor::Engine => self.human_side.opponent(),
        };
        if self.state.mover() != side {
            return Err(match actor {
                Actor::Human => ServiceError::NotYourTurn,
                Actor::Engine => ServiceError::NotEngineTurn,
            });
        }
        Ok(())
    }

    fn push(&mut self, actor: Actor, mv: &Move, rule_tag: Option<RuleTag>) -> &HistoryEntry {
        self.state = self.state.apply_unchecked(mv);
        self.history.push(HistoryEntry {
            seq: self.history.len() as u32 + 1,
            actor,
            mv: format_move(mv),
            rule_tag,
        });
        self.history.last().expect("just pushed")
    }

    /// Applies a human move given in move grammar.
    pub fn submit(&mut self, text: &str) -> Result<&HistoryEntry, ServiceError> {
        self.ensure_turn(Actor::Human)?;
        let mv = parse_move(text)?;
        self.state.check_move(&mv)?;
        Ok(self.push(Actor::Human, &mv, None))
    }

    /// Picks and applies the engine's reply.
    pub fn engine_move(&mut self, solver: &Solver) -> Result<StrategyDecision, ServiceError> {
        self.ensure_turn(Actor::Engine)?;
        let decision = self.decide(solver)?;
        self.push(Actor::Engine, &decision.mv, Some(decision.rule_tag));
        Ok(decision)
    }

    fn decide(&mut self, solver: &Solver) -> Result<StrategyDecision, ServiceError> {
        match (self.mode, self.config) {
            (EngineMode::BobScript, _) => {
                let memory = self.memory.as_ref().expect("bob sessions keep a memory");
                let last = self
                    .history
                    .last()
                    .ok_or(ServiceError::NotEngineTurn)
                    .and_then(|e| Ok(parse_move(&e.mv)?))?;
                let (decision, next) = bob_move(solver, memory, &last)?;
                self.memory = Some(next);
                Ok(decision)
            }
            (EngineMode::AliceScript, Some(config)) => Ok(alice_move(solver, &self.state, config)?),
            _ => solver_choice(solver, &self.state),
        }
    }

    /// Re-applies every history entry from the start.
    pub fn audit(&self) -> AuditReport {
        let mut replayed = self.initial.clone();
        let mut replay_ok = true;
        let mut alternation_ok = true;
        for (i, entry) in self.history.iter().enumerate() {
            let side = match entry.actor {
                Actor::Human => self.human_side,
                Actor::Engine => self.human_side.opponent(),
            };
            if replayed.mover() != side || (i > 0 && self.history[i - 1].actor == entry.actor) {
                alternation_ok = false;
            }
            match parse_move(&entry.mv).ok().and_then(|m| replayed.apply(&m).ok()) {
                Some(next) => replayed = next,
                None => {
                    replay_ok = false;
                    break;
                }
            }
        }
        AuditReport {
            version: API_VERSION,
            id: self.id.clone(),
            replay_matches: replay_ok && replayed == self.state,
            alternation_ok,
            replayed_state: display_state(&replayed),
            stored_state: display_state(&self.state),
        }
    }

    /// Rebuilds a session by replaying journaled moves. Engine moves are
    /// recomputed, which also restores the strategy memory.
    pub fn restore(
        id: String,
        setup: GameSetup,
        moves: &[(Actor, String)],
        solver: &Solver,
    ) -> Result<Self, ServiceError> {
        let mut session = Session::create(id, setup, solver)?;
        for (actor, text) in moves {
            match actor {
                Actor::Human => {
                    session.submit(text)?;
                }
                Actor::Engine => {
                    let recorded = parse_move(text)?;
                    session.ensure_turn(Actor::Engine)?;
                    let decision = session.decide(solver)?;
                    let tag = (decision.mv == recorded).then_some(decision.rule_tag);
                    session.state.check_move(&recorded)?;
                    session.push(Actor::Engine, &recorded, tag);
                }
            }
        }
        Ok(session)
    }
}

fn predicted(colors: &[u32], config: Option<GameConfig>) -> Option<(Player, &'static str)> {
    match (colors, config) {
        (_, Some(c)) => {
            let k = classify_winner(c);
            Some((k.winner, k.reason.clause()))
        }
        ([n], None) => {
            let k = classify_one_color(*n);
            Some((k.winner, k.reason.clause()))
        }
        _ => None,
    }
}

/// A winning move if there is one, otherwise the first legal move.
pub fn solver_choice(solver: &Solver, state: &GameState) -> Result<StrategyDecision, ServiceError> {
    let (mv, tag) = match solver.optimal_moves(state)?.first() {
        Some(mv) => (*mv, RuleTag::SolverOptimal),
        None => (
            *state.legal_moves().first().ok_or(ServiceError::GameFinished)?,
            RuleTag::LosingPosition,
        ),
    };
    Ok(StrategyDecision {
        fallback_used: true,
        ..StrategyDecision::scripted(mv, tag)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn session(setup: GameSetup) -> Session {
        Session::create("t".into(), setup, &Solver::new()).unwrap()
    }

    #[test]
    fn defaults_put_the_engine_on_the_winning_side() {
        let s = session(GameSetup::two_color(3, 9));
        assert_eq!(s.human_side(), Player::First);
        assert_eq!(s.mode(), EngineMode::BobScript);
        assert_eq!(s.view().state.shape.as_deref(), Some("<3,9;;>"));
        let s = session(GameSetup::two_color(2, 6));
        assert_eq!(s.human_side(), Player::Second);
        assert_eq!(s.mode(), EngineMode::AliceScript);
        let s = session(GameSetup {
            colors: Some(vec![3, 3, 3, 3]),
            ..GameSetup::default()
        });
        assert_eq!(s.mode(), EngineMode::Solver);
        assert_eq!(s.state().stack_count(), 12);
    }

    #[test]
    fn turns_are_enforced() {
        let solver = Solver::new();
        let mut s = session(GameSetup::two_color(4, 6));
        assert!(matches!(s.engine_move(&solver), Err(ServiceError::NotEngineTurn)));
        s.submit("r@1>r@1").unwrap();
        assert!(matches!(s.submit("b@1>b@1"), Err(ServiceError::NotYourTurn)));
        let d = s.engine_move(&solver).unwrap();
        assert_eq!(d.rule_tag, RuleTag::OpeningXxYy);
        let mut p3 = session(GameSetup::two_color(3, 5));
        p3.submit("r@1>r@1").unwrap();
        let d = p3.engine_move(&solver).unwrap();
        assert_eq!((d.rule_tag, d.fallback_used), (RuleTag::Fallback, true));
        assert!(s.audit().replay_matches && s.audit().alternation_ok);
    }

    #[test]
    fn restore_reproduces_the_game() {
        let solver = Solver::new();
        let mut s = session(GameSetup::two_color(4, 6));
        while !s.is_finished() {
            if s.state().mover() == s.human_side() {
                let mv = s.legal_moves()[0].clone();
                s.submit(&mv).unwrap();
            } else {
                s.engine_move(&solver).unwrap();
            }
        }
        assert_eq!(s.winner(), Some(Player::Second));
        let moves: Vec<_> = s.history().iter().map(|e| (e.actor, e.mv.clone())).collect();
        let r = Session::restore("t".into(), s.setup.clone(), &moves, &solver).unwrap();
        assert_eq!(r.view(), s.view());
    }
}

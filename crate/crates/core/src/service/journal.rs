use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::session::{Actor, GameSetup, HistoryEntry, Session};
use super::ServiceError;
use crate::solver::Solver;
use crate::strategy::RuleTag;

/// One journal line. Creation events have `seq` 0, no move and carry the
/// setup; move events mirror the history entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JournalEvent {
    pub session: String,
    pub seq: u32,
    /// `create`, `human` or `engine`.
    pub actor: String,
    #[serde(rename = "move")]
    pub mv: Option<String>,
    pub rule_tag: Option<RuleTag>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub setup: Option<GameSetup>,
}

impl JournalEvent {
    pub fn created(session: &str, setup: GameSetup) -> Self {
        JournalEvent {
            session: session.to_string(),
            seq: 0,
            actor: "create".into(),
            mv: None,
            rule_tag: None,
            setup: Some(setup),
        }
    }

    pub fn moved(session: &str, entry: &HistoryEntry) -> Self {
        JournalEvent {
            session: session.to_string(),
            seq: entry.seq,
            actor: match entry.actor {
                Actor::Human => "human",
                Actor::Engine => "engine",
            }
            .into(),
            mv: Some(entry.mv.clone()),
            rule_tag: entry.rule_tag,
            setup: None,
        }
    }
}

/// Append-only JSON-lines file.
#[derive(Debug)]
pub struct Journal {
    file: Mutex<File>,
}

impl Journal {
    /// Opens `path` for appending and replays whatever it already holds.
    /// Unreadable lines and sessions that fail to replay are skipped.
    pub fn open(path: &Path, solver: &Solver) -> Result<(Journal, Vec<Session>), ServiceError> {
        let mut setups: BTreeMap<String, GameSetup> = BTreeMap::new();
        let mut moves: BTreeMap<String, Vec<(Actor, String)>> = BTreeMap::new();
        let mut order = Vec::new();
        if path.exists() {
            for line in BufReader::new(File::open(path)?).lines() {
                let Ok(event) = serde_json::from_str::<JournalEvent>(&line?) else {
                    continue;
                };
                match (event.actor.as_str(), event.setup, event.mv) {
                    ("create", Some(setup), _) => {
                        order.push(event.session.clone());
                        setups.insert(event.session, setup);
                    }
                    ("human", _, Some(mv)) => moves.entry(event.session).or_default().push((Actor::Human, mv)),
                    ("engine", _, Some(mv)) => moves.entry(event.session).or_default().push((Actor::Engine, mv)),
                    _ => {}
                }
            }
        }
        let sessions = order
            .into_iter()
            .filter_map(|id| {
                let setup = setups.remove(&id)?;
                let history = moves.remove(&id).unwrap_or_default();
                Session::restore(id, setup, &history, solver).ok()
            })
            .collect();
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok((Journal { file: Mutex::new(file) }, sessions))
    }

    pub fn append(&self, event: &JournalEvent) -> io::Result<()> {
        let mut line = serde_json::to_string(event).map_err(io::Error::other)?;
        line.push('\n');
        let mut file = self.file.lock().unwrap_or_else(|e| e.into_inner());
        file.write_all(line.as_bytes())?;
        file.flush()
    }
}

//! The `babylon` command line.
//!
//! Exit statuses: 0 success, 1 suite failure, 2 usage or validation error,
//! 3 solver bound exceeded. `BABYLON_MAX_N` overrides the solver bound.

use std::io::{self, BufRead, Write};
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::codec::{display_state, format_move, parse_move, parse_state, CodecError};
use crate::game::Player;
use crate::harness::{self, emit_report, ReportFormat, VerificationReport};
use crate::service::{self, AppState, GameSetup, ServiceError, Session};
use crate::solver::{Solver, SolverError, SolverLimits};
use crate::strategy::{
    alice_move, bob_move, classify_winner, GameConfig, LemmaId, PhaseMemory, StrategyDecision,
    StrategyError,
};

#[derive(Debug, Parser)]
#[command(name = "babylon", version, about = "Two-color Babylon: classify, solve, verify, play")]
pub struct Cli {
    /// Output format: text, json, or csv (csv applies to verify only).
    #[arg(long, global = true, default_value = "text")]
    pub format: ReportFormat,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Winner of the p-versus-q game from the all-singleton start.
    Classify {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
    },
    /// Winner with perfect play from any state.
    Solve {
        #[arg(long)]
        state: String,
    },
    /// Winning moves, plus the scripted strategy's choice where one applies.
    Best {
        #[arg(long)]
        state: String,
        /// Alice's move from `state`; shows Bob's scripted reply.
        #[arg(long)]
        after: Option<String>,
        /// Starting counts, needed for the scripted choice.
        #[arg(long, requires = "q")]
        p: Option<u32>,
        #[arg(long, requires = "p")]
        q: Option<u32>,
    },
    /// Run a verification suite.
    Verify {
        suite: Suite,
        /// Largest chip count covered (suite default when omitted).
        #[arg(long)]
        max_n: Option<u32>,
        /// Minority count for the sampled walk.
        #[arg(long, default_value_t = 8)]
        p: u32,
        #[arg(long, default_value_t = 8)]
        q: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 2000)]
        lines: u32,
    },
    /// Play against the engine on the terminal.
    Play {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
        /// The engine's side; defaults to the predicted winner.
        #[arg(long)]
        side: Option<Side>,
    },
    /// Start the HTTP game service.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: SocketAddr,
        /// Append-only event log; sessions in it are restored on start.
        #[arg(long)]
        journal: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Side {
    First,
    Second,
}

impl From<Side> for Player {
    fn from(s: Side) -> Player {
        match s {
            Side::First => Player::First,
            Side::Second => Player::Second,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Theorem,
    Commercial,
    Lemma1,
    Lemma2,
    Lemma3,
    Lemma4,
    Bob,
    BobSample,
    Alice,
    All,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid state or move: {0}")]
    Codec(#[from] CodecError),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Bound(#[from] SolverError),
    #[error("verification failed")]
    SuiteFailed,
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl From<StrategyError> for CliError {
    fn from(e: StrategyError) -> Self {
        match e {
            StrategyError::Solver(s) => CliError::Bound(s),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl From<ServiceError> for CliError {
    fn from(e: ServiceError) -> Self {
        match e {
            ServiceError::Bound(s) => CliError::Bound(s),
            ServiceError::Journal(io) => CliError::Io(io),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::SuiteFailed | CliError::Io(_) => 1,
            CliError::Usage(_) | CliError::Codec(_) | CliError::Invalid(_) => 2,
            CliError::Bound(_) => 3,
        }
    }
}

/// Parses `args` (program name first) and runs the command. Returns the
/// exit status; diagnostics go to `err`.
pub fn run<I, T>(args: I, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli, input, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli, input: &mut dyn BufRead, out: &mut dyn Write) -> Result<(), CliError> {
    let json = cli.format == ReportFormat::Json;
    let solver = Solver::with_limits(SolverLimits::from_env());
    match &cli.command {
        Command::Classify { p, q } => classify(*p, *q, json, out),
        Command::Solve { state } => solve(&solver, state, json, out),
        Command::Best { state, after, p, q } => best(&solver, state, after.as_deref(), p.zip(*q), json, out),
        Command::Verify { suite, max_n, p, q, seed, lines } => {
            let reports = verify(&solver, *suite, *max_n, (*p, *q, *seed, *lines))?;
            for r in &reports {
                out.write_all(emit_report(r, cli.format).as_bytes())?;
            }
            if reports.iter().all(VerificationReport::passed) {
                Ok(())
            } else {
                Err(CliError::SuiteFailed)
            }
        }
        Command::Play { p, q, side } => play(solver, *p, *q, side.map(Player::from), json, input, out),
        Command::Serve { addr, journal } => serve(solver, *addr, journal.clone(), out),
    }
}

fn print_json(out: &mut dyn Write, value: &impl Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).expect("plain data serializes");
    writeln!(out, "{text}")?;
    Ok(())
}

fn classify(p: u32, q: u32, json: bool, out: &mut dyn Write) -> Result<(), CliError> {
    // the classification is symmetric in the colors
    let config = GameConfig::new(p.min(q), p.max(q))?;
    let c = classify_winner(config);
    if json {
        print_json(out, &json!({
            "p": p, "q": q, "winner": c.winner, "reason": c.reason, "clause": c.reason.clause(),
        }))
    } else {
        writeln!(out, "{c}")?;
        Ok(())
    }
}

fn solve(solver: &Solver, text: &str, json: bool, out: &mut dyn Write) -> Result<(), CliError> {
    let state = parse_state(text)?;
    let winner = solver.solve(&state)?.winner;
    let safe = winner == Player::Second;
    if json {
        print_json(out, &json!({
            "state": display_state(&state), "to_move": state.mover(), "winner": winner, "safe": safe,
        }))
    } else {
        let word = if safe { "safe" } else { "unsafe" };
        writeln!(out, "{word}: {winner} player wins")?;
        Ok(())
    }
}

#[derive(Debug, Serialize)]
struct BestView {
    state: String,
    to_move: Player,
    winning_moves: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    scripted: Option<StrategyDecision>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

fn best(
    solver: &Solver,
    text: &str,
    after: Option<&str>,
    counts: Option<(u32, u32)>,
    json: bool,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let from = parse_state(text)?;
    let alice = after.map(parse_move).transpose()?;
    let state = match &alice {
        Some(mv) => from.apply(mv).map_err(|e| CliError::Invalid(e.to_string()))?,
        None => from.clone(),
    };
    let winning_moves = solver.optimal_moves(&state)?.iter().map(format_move).collect();
    let config = counts.map(|(p, q)| GameConfig::new(p, q)).transpose()?;
    let (scripted, note) = match (config, &alice) {
        (None, _) => (None, None),
        (Some(c), Some(mv)) if c.m().is_some() && c.p >= 3 => {
            let memory = PhaseMemory::at(c, from.clone())?;
            (Some(bob_move(solver, &memory, mv)?.0), None)
        }
        (Some(c), None) if c.p <= 2 && state.mover() == Player::First => {
            (Some(alice_move(solver, &state, c)?), None)
        }
        (Some(c), None) if c.m().is_some() && c.p >= 3 => {
            (None, Some("Bob's script needs Alice's move: pass --after".to_string()))
        }
        (Some(_), _) => (None, Some("no scripted strategy for this side".to_string())),
    };
    let view = BestView {
        state: display_state(&state),
        to_move: state.mover(),
        winning_moves,
        scripted,
        note,
    };
    if json {
        return print_json(out, &view);
    }
    writeln!(out, "state {} ({} player to move)", view.state, view.to_move)?;
    if view.winning_moves.is_empty() {
        writeln!(out, "winning moves: none")?;
    } else {
        writeln!(out, "winning moves: {}", view.winning_moves.join(" "))?;
    }
    if let Some(d) = &view.scripted {
        writeln!(out, "scripted: {}", decision_text(d))?;
    }
    if let Some(n) = &view.note {
        writeln!(out, "note: {n}")?;
    }
    Ok(())
}

fn decision_text(d: &StrategyDecision) -> String {
    let mut s = format!("{} [{}]", format_move(&d.mv), d.rule_tag);
    if let Some(w) = d.waiver {
        s.push_str(&format!(" (solver move, {w})"));
    }
    if let Some(o) = d.overrides {
        s.push_str(&format!(" replacing {o}"));
    }
    s
}

fn verify(
    solver: &Solver,
    suite: Suite,
    max_n: Option<u32>,
    (p, q, seed, lines): (u32, u32, u64, u32),
) -> Result<Vec<VerificationReport>, CliError> {
    let lemma = |id, solver| -> Result<_, CliError> { Ok(harness::verify_lemma(solver, id, max_n.unwrap_or(14))?) };
    Ok(match suite {
        Suite::Theorem => vec![harness::verify_theorem(solver, max_n.unwrap_or(16))?],
        Suite::Commercial => vec![harness::verify_commercial(solver)?],
        Suite::Lemma1 => vec![lemma(LemmaId::TallLoneStack, solver)?],
        Suite::Lemma2 => vec![lemma(LemmaId::ShortLoneStack, solver)?],
        Suite::Lemma3 => vec![lemma(LemmaId::TwoSingletons, solver)?],
        Suite::Lemma4 => vec![lemma(LemmaId::ThreeSingletons, solver)?],
        Suite::Bob => vec![harness::verify_bob_range(solver, max_n.unwrap_or(14))?],
        Suite::BobSample => vec![harness::sample_bob_strategy(solver, p, q, seed, lines)?],
        Suite::Alice => vec![harness::verify_alice_range(solver, max_n.unwrap_or(13))?],
        Suite::All => {
            let mut all = Vec::new();
            for s in [
                Suite::Theorem,
                Suite::Commercial,
                Suite::Lemma1,
                Suite::Lemma2,
                Suite::Lemma3,
                Suite::Lemma4,
                Suite::Bob,
                Suite::Alice,
            ] {
                all.extend(verify(solver, s, max_n, (p, q, seed, lines))?);
            }
            all
        }
    })
}

fn play(
    solver: Solver,
    p: u32,
    q: u32,
    engine: Option<Player>,
    json: bool,
    input: &mut dyn BufRead,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let mut setup = GameSetup::two_color(p, q);
    setup.human_side = engine.map(Player::opponent);
    let mut session = Session::create("terminal".into(), setup, &solver)?;
    let human = session.human_side();
    if !json {
        writeln!(
            out,
            "you play {human}; the engine plays {} ({}). Enter moves like r@1>b@1, 'moves' to list, 'quit' to stop.",
            human.opponent(),
            session.mode().as_str()
        )?;
    }
    while !session.is_finished() {
        if session.state().mover() != human {
            let d = session.engine_move(&solver)?;
            if json {
                writeln!(out, "{}", json!({"event": "engine", "decision": d, "state": display_state(session.state())}))?;
            } else {
                writeln!(out, "engine: {}  -> {}", decision_text(&d), display_state(session.state()))?;
            }
            continue;
        }
        if !json {
            write!(out, "{} > ", display_state(session.state()))?;
            out.flush()?;
        }
        let mut line = String::new();
        if input.read_line(&mut line)? == 0 {
            break;
        }
        match line.trim() {
            "" => {}
            "quit" => break,
            "moves" => writeln!(out, "{}", session.legal_moves().join(" "))?,
            text => match session.submit(text) {
                Ok(_) => {}
                Err(e) => {
                    if json {
                        writeln!(out, "{}", json!({"event": "rejected", "error": e.body()}))?;
                    } else {
                        let clause = e.body().clause.map(|c| format!(" [{c}]")).unwrap_or_default();
                        writeln!(out, "rejected: {e}{clause}")?;
                    }
                }
            },
        }
    }
    let state = display_state(session.state());
    match session.winner() {
        Some(w) if json => writeln!(out, "{}", json!({"event": "finished", "winner": w, "state": state}))?,
        Some(w) => writeln!(out, "game over at {state}: {w} player wins{}", if w == human { " (you)" } else { "" })?,
        None if json => writeln!(out, "{}", json!({"event": "stopped", "state": state}))?,
        None => writeln!(out, "stopped at {state}")?,
    }
    Ok(())
}

fn serve(solver: Solver, addr: SocketAddr, journal: Option<PathBuf>, out: &mut dyn Write) -> Result<(), CliError> {
    let solver = Arc::new(solver);
    let app = match &journal {
        Some(path) => AppState::with_journal(solver, path)?,
        None => AppState::new(solver),
    };
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(addr).await?;
        writeln!(out, "listening on http://{}", listener.local_addr()?)?;
        out.flush()?;
        service::serve(listener, app).await
    })?;
    Ok(())
}

/// Entry point for the binary.
pub fn main_from_env() -> i32 {
    let stdin = io::stdin();
    let mut input = stdin.lock();
    run(std::env::args_os(), &mut input, &mut io::stdout(), &mut io::stderr())
}

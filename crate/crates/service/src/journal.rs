//! Append-only session log: one JSON object per line, replayed on start.

use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use parking_lot::Mutex;
use serde::{Deserialize, Serialize};

use cmnim::{Move, PlayConvention, Position, RuleSet};

use crate::session::{GameSession, Player, TurnMode};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum Event {
    Create {
        id: String,
        game: Option<String>,
        rules: RuleSet,
        convention: PlayConvention,
        position: Position,
        first: TurnMode,
    },
    Move {
        id: String,
        player: Player,
        #[serde(rename = "move")]
        mv: Move,
    },
}

impl Event {
    pub fn created(s: &GameSession) -> Event {
        Event::Create {
            id: s.id.clone(),
            game: s.game.clone(),
            rules: s.rules.clone(),
            convention: s.convention,
            position: s.initial.clone(),
            first: s.first,
        }
    }
}

pub struct Journal {
    file: Mutex<File>,
}

impl Journal {
    /// Replays `path` (if it exists) and opens it for appending.
    pub fn open(path: &Path) -> io::Result<(Journal, Vec<GameSession>)> {
        let sessions = if path.exists() {
            replay(BufReader::new(File::open(path)?))?
        } else {
            Vec::new()
        };
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok((
            Journal {
                file: Mutex::new(file),
            },
            sessions,
        ))
    }

    pub fn record(&self, event: &Event) -> io::Result<()> {
        let mut line = serde_json::to_string(event)?;
        line.push('\n');
        let mut f = self.file.lock();
        f.write_all(line.as_bytes())?;
        f.flush()
    }
}

fn invalid(line: usize, why: impl std::fmt::Display) -> io::Error {
    io::Error::new(
        io::ErrorKind::InvalidData,
        format!("session log line {line}: {why}"),
    )
}

/// Sessions in creation order.
pub fn replay(reader: impl BufRead) -> io::Result<Vec<GameSession>> {
    let mut sessions: Vec<GameSession> = Vec::new();
    for (n, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let event: Event = serde_json::from_str(&line).map_err(|e| invalid(n + 1, e))?;
        match event {
            Event::Create {
                id,
                game,
                rules,
                convention,
                position,
                first,
            } => {
                if sessions.iter().any(|s| s.id == id) {
                    return Err(invalid(n + 1, format!("session {id} created twice")));
                }
                let s = GameSession::new(id, game, rules, convention, position, first)
                    .map_err(|e| invalid(n + 1, e))?;
                sessions.push(s);
            }
            Event::Move { id, player, mv } => {
                let s = sessions
                    .iter_mut()
                    .find(|s| s.id == id)
                    .ok_or_else(|| invalid(n + 1, format!("unknown session {id}")))?;
                s.play(player, mv).map_err(|e| invalid(n + 1, e))?;
            }
        }
    }
    Ok(sessions)
}

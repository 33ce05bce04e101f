use serde::{Deserialize, Serialize};

use cmnim::{apply_move, is_terminal, Move, PlayConvention, Position, RuleSet};

/// Who may move first, and whether turns alternate at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TurnMode {
    Human,
    Engine,
    /// Hot-seat play: anyone may move at any time.
    Either,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Human,
    Engine,
}

impl Player {
    fn other(self) -> Player {
        match self {
            Player::Human => Player::Engine,
            Player::Engine => Player::Human,
        }
    }
}

impl std::fmt::Display for Player {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Player::Human => "human",
            Player::Engine => "engine",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GameStatus {
    InProgress,
    /// Terminal under normal play: whoever moved last won.
    PreviousMoverWon,
    /// Terminal under misère play: whoever moved last lost.
    PreviousMoverLost,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub player: Player,
    #[serde(rename = "move")]
    pub mv: Move,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MoveError {
    Finished,
    OutOfTurn { expected: Player },
    Illegal(cmnim::Error),
}

impl std::fmt::Display for MoveError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MoveError::Finished => f.write_str("the game is over"),
            MoveError::OutOfTurn { expected } => write!(f, "it is the {expected}'s turn"),
            MoveError::Illegal(e) => write!(f, "{e}"),
        }
    }
}

/// One game in progress.
#[derive(Debug, Clone)]
pub struct GameSession {
    pub id: String,
    /// Preset the rules came from, if any.
    pub game: Option<String>,
    pub rules: RuleSet,
    pub convention: PlayConvention,
    pub initial: Position,
    pub position: Position,
    pub history: Vec<HistoryEntry>,
    pub first: TurnMode,
}

/// What clients see of a session.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SessionState {
    pub id: String,
    pub game: Option<String>,
    pub rules: RuleSet,
    pub convention: PlayConvention,
    pub initial: Position,
    pub position: Position,
    pub history: Vec<HistoryEntry>,
    pub status: GameStatus,
    pub turn: TurnMode,
    pub first: TurnMode,
    /// Only known when turns alternate.
    pub winner: Option<Player>,
}

impl GameSession {
    pub fn new(
        id: String,
        game: Option<String>,
        rules: RuleSet,
        convention: PlayConvention,
        position: Position,
        first: TurnMode,
    ) -> cmnim::Result<Self> {
        is_terminal(&position, &rules)?;
        Ok(GameSession {
            id,
            game,
            rules,
            convention,
            initial: position.clone(),
            position,
            history: Vec::new(),
            first,
        })
    }

    pub fn turn(&self) -> TurnMode {
        let parity = self.history.len() % 2 == 1;
        match (self.first, parity) {
            (TurnMode::Either, _) => TurnMode::Either,
            (TurnMode::Human, false) | (TurnMode::Engine, true) => TurnMode::Human,
            _ => TurnMode::Engine,
        }
    }

    pub fn is_finished(&self) -> bool {
        is_terminal(&self.position, &self.rules).expect("arity checked on creation")
    }

    pub fn status(&self) -> GameStatus {
        match (self.is_finished(), self.convention) {
            (false, _) => GameStatus::InProgress,
            (true, PlayConvention::Normal) => GameStatus::PreviousMoverWon,
            (true, PlayConvention::Misere) => GameStatus::PreviousMoverLost,
        }
    }

    pub fn winner(&self) -> Option<Player> {
        let to_move = match self.turn() {
            TurnMode::Human => Player::Human,
            TurnMode::Engine => Player::Engine,
            TurnMode::Either => return None,
        };
        match self.status() {
            GameStatus::InProgress => None,
            GameStatus::PreviousMoverWon => Some(to_move.other()),
            GameStatus::PreviousMoverLost => Some(to_move),
        }
    }

    /// Checks turn order and legality, then plays `mv`.
    pub fn play(&mut self, player: Player, mv: Move) -> Result<(), MoveError> {
        if self.is_finished() {
            return Err(MoveError::Finished);
        }
        let expected = match self.turn() {
            TurnMode::Human => Some(Player::Human),
            TurnMode::Engine => Some(Player::Engine),
            TurnMode::Either => None,
        };
        if let Some(expected) = expected.filter(|&e| e != player) {
            return Err(MoveError::OutOfTurn { expected });
        }
        self.rules
            .check_move(&self.position, mv)
            .map_err(MoveError::Illegal)?;
        self.position = apply_move(&self.position, mv).map_err(MoveError::Illegal)?;
        self.history.push(HistoryEntry { player, mv });
        Ok(())
    }

    /// Folding the history over the initial position gives the current one.
    pub fn replays(&self) -> bool {
        self.history
            .iter()
            .try_fold(self.initial.clone(), |p, e| apply_move(&p, e.mv))
            .is_ok_and(|p| p == self.position)
    }

    pub fn state(&self) -> SessionState {
        SessionState {
            id: self.id.clone(),
            game: self.game.clone(),
            rules: self.rules.clone(),
            convention: self.convention,
            initial: self.initial.clone(),
            position: self.position.clone(),
            history: self.history.clone(),
            status: self.status(),
            turn: self.turn(),
            first: self.first,
            winner: self.winner(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use cmnim::preset;

    fn session(first: TurnMode, conv: PlayConvention, pos: &[u32]) -> GameSession {
        let rules = preset("nim", pos.len()).unwrap();
        GameSession::new(
            "t".into(),
            None,
            rules,
            conv,
            Position::new(pos.to_vec()),
            first,
        )
        .unwrap()
    }

    #[test]
    fn strict_turns_alternate() {
        let mut s = session(TurnMode::Human, PlayConvention::Normal, &[1, 3, 5, 7]);
        assert_eq!(s.turn(), TurnMode::Human);
        assert_eq!(
            s.play(Player::Engine, Move::of(&[1], 1)),
            Err(MoveError::OutOfTurn {
                expected: Player::Human
            })
        );
        s.play(Player::Human, Move::of(&[1], 1)).unwrap();
        assert_eq!(s.position, Position::from([0, 3, 5, 7]));
        assert_eq!(s.turn(), TurnMode::Engine);
        assert!(s.replays());
    }

    #[test]
    fn illegal_moves_leave_the_session_alone() {
        let mut s = session(TurnMode::Either, PlayConvention::Normal, &[5, 5]);
        assert!(matches!(
            s.play(Player::Human, Move::of(&[1, 2], 5)),
            Err(MoveError::Illegal(_))
        ));
        assert!(matches!(
            s.play(Player::Human, Move::of(&[1], 6)),
            Err(MoveError::Illegal(_))
        ));
        assert!(s.history.is_empty());
    }

    #[test]
    fn misere_last_mover_loses() {
        let mut s = session(TurnMode::Human, PlayConvention::Misere, &[0, 1]);
        s.play(Player::Human, Move::of(&[2], 1)).unwrap();
        assert_eq!(s.status(), GameStatus::PreviousMoverLost);
        assert_eq!(s.winner(), Some(Player::Engine));
        assert_eq!(
            s.play(Player::Engine, Move::of(&[1], 1)),
            Err(MoveError::Finished)
        );
    }

    #[test]
    fn terminal_from_the_start() {
        let s = session(TurnMode::Human, PlayConvention::Normal, &[0]);
        assert_eq!(s.status(), GameStatus::PreviousMoverWon);
        assert_eq!(s.winner(), Some(Player::Engine));
        let s = session(TurnMode::Either, PlayConvention::Normal, &[0]);
        assert_eq!(s.winner(), None);
    }
}

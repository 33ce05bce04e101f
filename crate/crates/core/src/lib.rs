//! Solver and verifier for CM-Nim games.
//!
//! A CM-Nim game is played on `k` jars of cookies. The rules name the
//! *permissible* sets of jars; a move picks one of them and removes the same
//! positive number of cookies from every jar in it. Nim permits single jars,
//! Wythoff's game permits `{1}`, `{2}` and `{1,2}`, and Cookie Monster
//! permits every non-empty set.
//!
//! ```
//! use cmnim::{engine, preset, OutcomeClass, PlayConvention, Position};
//!
//! let cm3 = preset("cookie_monster", 3)?;
//! let pos: Position = "1,7,9".parse()?;
//! assert_eq!(engine::outcome(&pos, &cm3, PlayConvention::Normal)?, OutcomeClass::N);
//! # Ok::<(), cmnim::Error>(())
//! ```

pub mod closedform;
pub mod cmnumber;
pub mod engine;
mod error;
mod game;
mod preset;
pub mod tablefile;
pub mod verifier;

pub use error::{Error, Result};
pub use game::{
    apply_move, is_terminal, legal_moves, JarSet, Move, OutcomeClass, PlayConvention, Position,
    RuleFile, RuleSet, MAX_JARS,
};
pub use preset::{find_preset, preset, presets, resolve_game, GamePreset, JarCount};

// the guide's code blocks run as doctests
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/positions.md")]
    mod positions {}
    #[doc = include_str!("../../../book/src/outcomes.md")]
    mod outcomes {}
    #[doc = include_str!("../../../book/src/grundy.md")]
    mod grundy {}
    #[doc = include_str!("../../../book/src/closed-forms.md")]
    mod closed_forms {}
    #[doc = include_str!("../../../book/src/completion.md")]
    mod completion {}
    #[doc = include_str!("../../../book/src/cookie-monster-number.md")]
    mod cookie_monster_number {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
}

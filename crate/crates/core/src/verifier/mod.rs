//! Executable checks: reference P-position lists and the structural
//! theorems about CM-Nim games, each run exhaustively over a bounded box.
//!
//! Every check returns a [`VerificationReport`]. A failing report always
//! names at least one counterexample position that can be replayed with
//! the CLI; a passing report names none.

mod golden;
mod theorems;

use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::Result;
use crate::game::Position;

pub use golden::{golden_tables, verify_golden_table, verify_golden_tables, GoldenTable};
pub use theorems::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// The theorem's hypothesis does not hold for these inputs.
    NotApplicable,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::NotApplicable => "N/A",
        })
    }
}

/// Outcome of one check.
///
/// Equality ignores `elapsed`, so two runs with the same parameters compare
/// equal.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub name: String,
    pub parameters: String,
    pub status: Status,
    pub counterexamples: Vec<Position>,
    pub notes: Vec<String>,
    #[serde(serialize_with = "as_millis")]
    pub elapsed: Duration,
}

fn as_millis<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u128(d.as_millis())
}

impl PartialEq for VerificationReport {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.parameters == other.parameters
            && self.status == other.status
            && self.counterexamples == other.counterexamples
            && self.notes == other.notes
    }
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<4}  {:<28} {:<44} {:>8.1?}",
            self.status.to_string(),
            self.name,
            self.parameters,
            self.elapsed
        )?;
        for note in &self.notes {
            write!(f, "\n      note: {note}")?;
        }
        if !self.counterexamples.is_empty() {
            let shown: Vec<String> = self
                .counterexamples
                .iter()
                .take(10)
                .map(Position::to_string)
                .collect();
            write!(f, "\n      counterexamples: {}", shown.join(" "))?;
            if self.counterexamples.len() > 10 {
                write!(f, " (+{} more)", self.counterexamples.len() - 10)?;
            }
        }
        Ok(())
    }
}

/// Collects counterexamples while a check runs.
pub(crate) struct Check {
    name: String,
    parameters: String,
    start: Instant,
    counterexamples: Vec<Position>,
    notes: Vec<String>,
    not_applicable: bool,
}

impl Check {
    pub(crate) fn new(name: &str, parameters: impl Into<String>) -> Self {
        Check {
            name: name.to_string(),
            parameters: parameters.into(),
            start: Instant::now(),
            counterexamples: Vec::new(),
            notes: Vec::new(),
            not_applicable: false,
        }
    }

    pub(crate) fn fail(&mut self, pos: Position, why: impl FnOnce() -> String) {
        // one note per distinct kind of failure is plenty
        if self.notes.len() < 5 {
            self.notes.push(why());
        }
        self.counterexamples.push(pos);
    }

    pub(crate) fn expect(&mut self, ok: bool, pos: Position, why: impl FnOnce() -> String) {
        if !ok {
            self.fail(pos, why);
        }
    }

    pub(crate) fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub(crate) fn not_applicable(&mut self, witness: Position, why: String) {
        self.not_applicable = true;
        self.notes.push(format!("theorem not applicable: {why}"));
        self.counterexamples.push(witness);
    }

    pub(crate) fn finish(self) -> VerificationReport {
        let status = if self.not_applicable {
            Status::NotApplicable
        } else if self.counterexamples.is_empty() {
            Status::Pass
        } else {
            Status::Fail
        };
        VerificationReport {
            name: self.name,
            parameters: self.parameters,
            status,
            counterexamples: self.counterexamples,
            notes: self.notes,
            elapsed: self.start.elapsed(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Golden,
    Theorems,
}

impl std::str::FromStr for Suite {
    type Err = crate::error::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Suite::All),
            "golden" => Ok(Suite::Golden),
            "theorems" => Ok(Suite::Theorems),
            other => Err(crate::error::Error::Input(format!(
                "unknown suite `{other}` (expected all, golden or theorems)"
            ))),
        }
    }
}

/// Runs a suite with `max` as the common per-jar bound (at least 9).
pub fn run_suite(suite: Suite, max: u32) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    if matches!(suite, Suite::All | Suite::Golden) {
        for table in golden_tables() {
            out.push(verify_golden_table(&table, max)?);
        }
        out.push(verify_refutation_1_7_9()?);
        out.push(verify_marienbad()?);
    }
    if matches!(suite, Suite::All | Suite::Theorems) {
        out.extend(theorem_suite(max)?);
    }
    Ok(out)
}

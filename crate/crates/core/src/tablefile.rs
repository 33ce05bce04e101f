//! Plain-text position tables.
//!
//! Used for the reference lists the verifier checks against and for the
//! output of the `table` command, so one can be diffed against the other.
//!
//! ```text
//! # free-form comment
//! game: cookie_monster
//! jars: 3
//! convention: normal
//! normalization: sorted
//! filter: nonempty
//! max: 9
//! 1,1,4
//! 1,3,3
//! ```
//!
//! A data line may carry a Sprague-Grundy value as `3,3 = 6`.

use std::fmt;
use std::str::FromStr;

use crate::engine::Nimber;
use crate::error::{Error, Result};
use crate::game::{PlayConvention, Position};

/// How a list picks one representative per symmetry class.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// Positions as they are.
    Raw,
    /// Jars sorted ascending; for fully symmetric games.
    Sorted,
    /// Jars 1 and 2 swapped so that jar 1 holds no more than jar 2.
    FirstLeSecond,
    /// Jars 1 and k swapped so that jar 1 holds no more than jar k.
    FirstLeLast,
}

impl Normalization {
    pub fn apply(self, pos: &Position) -> Position {
        let mut v = pos.jars().to_vec();
        match self {
            Normalization::Raw => {}
            Normalization::Sorted => v.sort_unstable(),
            Normalization::FirstLeSecond => {
                if v.len() >= 2 && v[0] > v[1] {
                    v.swap(0, 1);
                }
            }
            Normalization::FirstLeLast => {
                let last = v.len() - 1;
                if v[0] > v[last] {
                    v.swap(0, last);
                }
            }
        }
        Position::new(v)
    }

    pub fn is_normal(self, pos: &Position) -> bool {
        self.apply(pos) == *pos
    }

    fn name(self) -> &'static str {
        match self {
            Normalization::Raw => "raw",
            Normalization::Sorted => "sorted",
            Normalization::FirstLeSecond => "first_le_second",
            Normalization::FirstLeLast => "first_le_last",
        }
    }
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Normalization {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "raw" => Normalization::Raw,
            "sorted" => Normalization::Sorted,
            "first_le_second" => Normalization::FirstLeSecond,
            "first_le_last" => Normalization::FirstLeLast,
            other => return Err(Error::Input(format!("unknown normalization `{other}`"))),
        })
    }
}

/// Which positions of the box a list covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Filter {
    All,
    /// Every jar holds at least one cookie.
    NonEmpty,
    /// At least two jars hold exactly one cookie.
    TwoOnes,
}

impl Filter {
    pub fn accepts(self, pos: &Position) -> bool {
        match self {
            Filter::All => true,
            Filter::NonEmpty => pos.jars().iter().all(|&c| c > 0),
            Filter::TwoOnes => pos.jars().iter().filter(|&&c| c == 1).count() >= 2,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Filter::All => "all",
            Filter::NonEmpty => "nonempty",
            Filter::TwoOnes => "two_ones",
        }
    }
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Filter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Filter::All,
            "nonempty" => Filter::NonEmpty,
            "two_ones" => Filter::TwoOnes,
            other => return Err(Error::Input(format!("unknown filter `{other}`"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableFile {
    pub comments: Vec<String>,
    pub game: String,
    pub jars: usize,
    pub convention: PlayConvention,
    pub normalization: Normalization,
    pub filter: Filter,
    /// Per-jar bound the list claims to cover.
    pub max: u32,
    pub entries: Vec<(Position, Option<Nimber>)>,
}

impl TableFile {
    pub fn positions(&self) -> impl Iterator<Item = &Position> {
        self.entries.iter().map(|(p, _)| p)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut comments = Vec::new();
        let mut game = None;
        let mut jars = None;
        let mut convention = PlayConvention::Normal;
        let mut normalization = Normalization::Raw;
        let mut filter = Filter::All;
        let mut max = None;
        let mut entries = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let bad = |what: String| Error::Input(format!("line {}: {what}", n + 1));
            if line.is_empty() {
                continue;
            }
            if let Some(c) = line.strip_prefix('#') {
                comments.push(c.trim().to_string());
                continue;
            }
            if let Some((key, value)) = line.split_once(':') {
                let value = value.trim();
                match key.trim() {
                    "game" => game = Some(value.to_string()),
                    "jars" => {
                        jars = Some(
                            value
                                .parse()
                                .map_err(|_| bad(format!("bad jar count `{value}`")))?,
                        )
                    }
                    "convention" => {
                        convention = match value {
                            "normal" => PlayConvention::Normal,
                            "misere" => PlayConvention::Misere,
                            other => return Err(bad(format!("unknown convention `{other}`"))),
                        }
                    }
                    "normalization" => normalization = value.parse()?,
                    "filter" => filter = value.parse()?,
                    "max" => {
                        max = Some(
                            value
                                .parse()
                                .map_err(|_| bad(format!("bad bound `{value}`")))?,
                        )
                    }
                    other => return Err(bad(format!("unknown header `{other}`"))),
                }
                continue;
            }
            let (pos, nimber) = match line.split_once('=') {
                Some((p, g)) => {
                    let g = g
                        .trim()
                        .parse()
                        .map_err(|_| bad(format!("bad nimber `{g}`")))?;
                    (p.trim(), Some(Nimber(g)))
                }
                None => (line, None),
            };
            let pos = pos.parse::<Position>().map_err(|e| bad(e.to_string()))?;
            entries.push((pos, nimber));
        }
        let jars = jars.ok_or_else(|| Error::Input("missing `jars:` header".into()))?;
        if let Some((p, _)) = entries.iter().find(|(p, _)| p.arity() != jars) {
            return Err(Error::Input(format!("{p} does not have {jars} jars")));
        }
        Ok(TableFile {
            comments,
            game: game.ok_or_else(|| Error::Input("missing `game:` header".into()))?,
            jars,
            convention,
            normalization,
            filter,
            max: max.ok_or_else(|| Error::Input("missing `max:` header".into()))?,
            entries,
        })
    }
}

fn csv_position(p: &Position) -> String {
    p.jars()
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Display for TableFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.comments {
            writeln!(f, "# {c}")?;
        }
        writeln!(f, "game: {}", self.game)?;
        writeln!(f, "jars: {}", self.jars)?;
        writeln!(f, "convention: {}", self.convention)?;
        writeln!(f, "normalization: {}", self.normalization.name())?;
        writeln!(f, "filter: {}", self.filter.name())?;
        writeln!(f, "max: {}", self.max)?;
        for (p, g) in &self.entries {
            match g {
                Some(g) => writeln!(f, "{} = {g}", csv_position(p))?,
                None => writeln!(f, "{}", csv_position(p))?,
            }
        }
        Ok(())
    }
}

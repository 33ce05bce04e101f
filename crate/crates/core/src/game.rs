//! Positions, moves and rule sets.
//!
//! Jars are numbered from 1 in every external representation. Internally a
//! set of jars is a bitmask where jar `i` occupies bit `i - 1`, and the
//! canonical order of sets is the numeric order of their masks, so `{1}`
//! comes before `{2}`, which comes before `{1,2}`, then `{3}`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported number of jars.
pub const MAX_JARS: usize = 16;

/// Game state: the number of cookies in each jar, in jar order.
///
/// Positions are ordered tuples. Nothing in this crate sorts a position
/// implicitly, since several games treat their jars asymmetrically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Position(Vec<u32>);

impl Position {
    pub fn new(jars: Vec<u32>) -> Self {
        Position(jars)
    }

    pub fn zeros(k: usize) -> Self {
        Position(vec![0; k])
    }

    pub fn jars(&self) -> &[u32] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&c| u64::from(c)).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn into_inner(self) -> Vec<u32> {
        self.0
    }
}

impl From<Vec<u32>> for Position {
    fn from(v: Vec<u32>) -> Self {
        Position(v)
    }
}

impl<const N: usize> From<[u32; N]> for Position {
    fn from(v: [u32; N]) -> Self {
        Position(v.to_vec())
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// Parses `1,7,9`, optionally wrapped in parentheses.
impl FromStr for Position {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim();
        let body = body
            .strip_prefix('(')
            .and_then(|b| b.strip_suffix(')'))
            .unwrap_or(body);
        if body.trim().is_empty() {
            return Err(Error::Input(format!("empty position `{s}`")));
        }
        body.split(',')
            .map(|part| {
                part.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::Input(format!("bad jar count `{part}` in `{s}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Position)
    }
}

/// A non-empty set of jars, stored as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JarSet(u32);

impl JarSet {
    /// Builds a set from 1-based jar indices. Indices are only checked for
    /// being non-zero and representable; arity checks happen against rules.
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Result<Self> {
        let indices: Vec<usize> = indices.into_iter().collect();
        let mut mask = 0u32;
        for &i in &indices {
            if i == 0 || i > MAX_JARS {
                return Err(Error::InvalidSet {
                    set: format_indices(&indices),
                    reason: format!("jar index {i} outside 1..={MAX_JARS}"),
                });
            }
            let bit = 1u32 << (i - 1);
            if mask & bit != 0 {
                return Err(Error::InvalidSet {
                    set: format_indices(&indices),
                    reason: format!("jar {i} listed twice"),
                });
            }
            mask |= bit;
        }
        if mask == 0 {
            return Err(Error::InvalidSet {
                set: format_indices(&indices),
                reason: "set is empty".into(),
            });
        }
        Ok(JarSet(mask))
    }

    pub fn from_mask(mask: u32) -> Option<Self> {
        (mask != 0 && mask < (1u32 << MAX_JARS)).then_some(JarSet(mask))
    }

    pub fn singleton(jar: usize) -> Self {
        assert!(
            (1..=MAX_JARS).contains(&jar),
            "jar index {jar} out of range"
        );
        JarSet(1 << (jar - 1))
    }

    /// `{1, ..., k}`.
    pub fn full(k: usize) -> Self {
        assert!((1..=MAX_JARS).contains(&k));
        JarSet(((1u64 << k) - 1) as u32)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    #[allow(clippy::len_without_is_empty)] // never empty by construction
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, jar: usize) -> bool {
        (1..=MAX_JARS).contains(&jar) && self.0 & (1 << (jar - 1)) != 0
    }

    /// Largest jar index in the set.
    pub fn max_jar(self) -> usize {
        32 - self.0.leading_zeros() as usize
    }

    /// 1-based jar indices, ascending.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..MAX_JARS)
            .filter(move |b| mask & (1 << b) != 0)
            .map(|b| b + 1)
    }

    /// 0-based offsets into a position, ascending.
    pub(crate) fn offsets(self) -> impl Iterator<Item = usize> {
        self.indices().map(|i| i - 1)
    }
}

fn format_indices(indices: &[usize]) -> String {
    let parts: Vec<String> = indices.iter().map(|i| i.to_string()).collect();
    format!("[{}]", parts.join(","))
}

impl fmt::Display for JarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl Serialize for JarSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<usize> = self.indices().collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for JarSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        JarSet::from_indices(v).map_err(serde::de::Error::custom)
    }
}

/// Remove `amount` cookies from every jar in `subset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Move {
    pub subset: JarSet,
    pub amount: u32,
}

impl Move {
    pub fn new(subset: JarSet, amount: u32) -> Self {
        Move { subset, amount }
    }

    /// Convenience constructor from 1-based indices; panics on bad input.
    pub fn of(indices: &[usize], amount: u32) -> Self {
        Move {
            subset: JarSet::from_indices(indices.iter().copied()).expect("valid jar set"),
            amount,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.subset, self.amount)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlayConvention {
    /// The player who cannot move loses.
    Normal,
    /// The player who makes the last move loses.
    Misere,
}

impl fmt::Display for PlayConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PlayConvention::Normal => "normal",
            PlayConvention::Misere => "misere",
        })
    }
}

/// `P`: the player to move loses. `N`: the player to move wins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OutcomeClass {
    P,
    N,
}

impl fmt::Display for OutcomeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutcomeClass::P => "P",
            OutcomeClass::N => "N",
        })
    }
}

/// The family of permissible jar sets for a game on `k` jars.
///
/// Sets are kept in canonical (mask) order without duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RuleFile", into = "RuleFile")]
pub struct RuleSet {
    jar_count: usize,
    sets: Vec<JarSet>,
}

/// On-disk shape of a rule set: `{"jars": 3, "permissible_sets": [[1],[2],[3],[1,2]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleFile {
    pub jars: usize,
    pub permissible_sets: Vec<Vec<usize>>,
}

impl RuleSet {
    pub fn new<I: IntoIterator<Item = JarSet>>(jar_count: usize, sets: I) -> Result<Self> {
        if jar_count == 0 || jar_count > MAX_JARS {
            return Err(Error::InvalidRules(format!(
                "jar count {jar_count} outside 1..={MAX_JARS}"
            )));
        }
        let mut out: Vec<JarSet> = Vec::new();
        for set in sets {
            if set.max_jar() > jar_count {
                return Err(Error::InvalidSet {
                    set: set.to_string(),
                    reason: format!("not a subset of the {jar_count} jars"),
                });
            }
            if out.contains(&set) {
                return Err(Error::InvalidSet {
                    set: set.to_string(),
                    reason: "duplicate permissible set".into(),
                });
            }
            out.push(set);
        }
        out.sort();
        Ok(RuleSet {
            jar_count,
            sets: out,
        })
    }

    /// Parses the JSON rule-set format.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: RuleFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidRules(e.to_string()))?;
        RuleSet::try_from(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&RuleFile::from(self.clone())).expect("rule sets always serialize")
    }

    pub fn jar_count(&self) -> usize {
        self.jar_count
    }

    pub fn sets(&self) -> &[JarSet] {
        &self.sets
    }

    pub fn permits(&self, set: JarSet) -> bool {
        self.sets.binary_search(&set).is_ok()
    }

    /// Every singleton is permissible, which is what makes a game CM-Nim.
    pub fn is_cm_nim(&self) -> bool {
        (1..=self.jar_count).all(|j| self.permits(JarSet::singleton(j)))
    }

    pub(crate) fn check_arity(&self, pos: &Position) -> Result<()> {
        if pos.arity() != self.jar_count {
            return Err(Error::ArityMismatch {
                expected: self.jar_count,
                found: pos.arity(),
            });
        }
        Ok(())
    }

    /// Legality of `mv` at `pos` under these rules.
    pub fn check_move(&self, pos: &Position, mv: Move) -> Result<()> {
        self.check_arity(pos)?;
        if !self.permits(mv.subset) {
            return Err(Error::IllegalMove {
                mv: mv.to_string(),
                reason: format!("jar set {} is not permissible", mv.subset),
            });
        }
        check_amounts(pos, mv)
    }
}

impl TryFrom<RuleFile> for RuleSet {
    type Error = Error;

    fn try_from(file: RuleFile) -> Result<Self> {
        if file.jars == 0 || file.jars > MAX_JARS {
            return Err(Error::InvalidRules(format!(
                "jar count {} outside 1..={MAX_JARS}",
                file.jars
            )));
        }
        let mut sets = Vec::with_capacity(file.permissible_sets.len());
        for raw in file.permissible_sets {
            if let Some(&bad) = raw.iter().find(|&&i| i == 0 || i > file.jars) {
                return Err(Error::InvalidSet {
                    set: format_indices(&raw),
                    reason: format!("jar index {bad} outside 1..={}", file.jars),
                });
            }
            sets.push(JarSet::from_indices(raw)?);
        }
        RuleSet::new(file.jars, sets)
    }
}

impl From<RuleSet> for RuleFile {
    fn from(r: RuleSet) -> Self {
        RuleFile {
            jars: r.jar_count,
            permissible_sets: r.sets.iter().map(|s| s.indices().collect()).collect(),
        }
    }
}

fn check_amounts(pos: &Position, mv: Move) -> Result<()> {
    if mv.amount == 0 {
        return Err(Error::IllegalMove {
            mv: mv.to_string(),
            reason: "amount must be at least 1".into(),
        });
    }
    if mv.subset.max_jar() > pos.arity() {
        return Err(Error::IllegalMove {
            mv: mv.to_string(),
            reason: format!("position has only {} jars", pos.arity()),
        });
    }
    for j in mv.subset.indices() {
        let have = pos.jars()[j - 1];
        if have < mv.amount {
            return Err(Error::IllegalMove {
                mv: mv.to_string(),
                reason: format!("jar {j} holds only {have} cookies"),
            });
        }
    }
    Ok(())
}

/// Smallest count among the jars of `set`.
#[inline]
pub(crate) fn min_over(jars: &[u32], set: JarSet) -> u32 {
    set.offsets().map(|o| jars[o]).min().unwrap_or(0)
}

/// Calls `f` for each legal move in canonical order (sets by mask, amounts
/// ascending). Stops early when `f` returns `false`.
#[inline]
pub(crate) fn for_each_move(jars: &[u32], rules: &RuleSet, mut f: impl FnMut(Move) -> bool) {
    for &set in &rules.sets {
        let cap = min_over(jars, set);
        for amount in 1..=cap {
            if !f(Move::new(set, amount)) {
                return;
            }
        }
    }
}

/// Successor of `jars` under `mv`, written into `buf`. The move must fit.
#[inline]
pub(crate) fn apply_into(jars: &[u32], mv: Move, buf: &mut Vec<u32>) {
    buf.clear();
    buf.extend_from_slice(jars);
    for o in mv.subset.offsets() {
        buf[o] -= mv.amount;
    }
}

/// Every legal move, with sets in canonical order and amounts ascending.
pub fn legal_moves(pos: &Position, rules: &RuleSet) -> Result<Vec<Move>> {
    rules.check_arity(pos)?;
    let mut out = Vec::new();
    for_each_move(pos.jars(), rules, |mv| {
        out.push(mv);
        true
    });
    Ok(out)
}

/// Applies a move without consulting any rule set; only the amounts are checked.
pub fn apply_move(pos: &Position, mv: Move) -> Result<Position> {
    check_amounts(pos, mv)?;
    let mut buf = Vec::with_capacity(pos.arity());
    apply_into(pos.jars(), mv, &mut buf);
    Ok(Position(buf))
}

/// True when no legal move exists. Without singletons this can happen
/// while cookies remain.
pub fn is_terminal(pos: &Position, rules: &RuleSet) -> Result<bool> {
    rules.check_arity(pos)?;
    let mut any = false;
    for_each_move(pos.jars(), rules, |_| {
        any = true;
        false
    });
    Ok(!any)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preset::preset;

    fn wythoff() -> RuleSet {
        preset("wythoff", 2).unwrap()
    }

    #[test]
    fn no_moves_from_empty_jars() {
        for name in ["nim", "cookie_monster", "odd", "all_but_k"] {
            let rules = preset(name, 3).unwrap();
            assert!(legal_moves(&Position::zeros(3), &rules).unwrap().is_empty());
        }
    }

    #[test]
    fn wythoff_moves_from_one_two() {
        let moves = legal_moves(&Position::from([1, 2]), &wythoff()).unwrap();
        assert_eq!(
            moves,
            vec![
                Move::of(&[1], 1),
                Move::of(&[2], 1),
                Move::of(&[2], 2),
                Move::of(&[1, 2], 1)
            ]
        );
    }

    #[test]
    fn equal_jars_can_be_emptied_together() {
        for n in 1..20 {
            let moves = legal_moves(&Position::from([n, n]), &wythoff()).unwrap();
            assert!(moves.contains(&Move::of(&[1, 2], n)));
        }
    }

    #[test]
    fn apply_examples() {
        assert_eq!(
            apply_move(&Position::from([1, 7, 9]), Move::of(&[2, 3], 7)).unwrap(),
            Position::from([1, 0, 2])
        );
        assert_eq!(
            apply_move(&Position::from([5, 5]), Move::of(&[1, 2], 5)).unwrap(),
            Position::from([0, 0])
        );
        assert_eq!(
            apply_move(&Position::from([1, 3, 5, 7]), Move::of(&[1], 1)).unwrap(),
            Position::from([0, 3, 5, 7])
        );
    }

    #[test]
    fn apply_rejects_overdraw_and_zero() {
        let err = apply_move(&Position::from([1, 7, 9]), Move::of(&[1, 2], 2)).unwrap_err();
        assert!(matches!(err, Error::IllegalMove { .. }), "{err}");
        let err = apply_move(&Position::from([1, 7]), Move::of(&[1], 0)).unwrap_err();
        assert!(matches!(err, Error::IllegalMove { .. }));
        let err = apply_move(&Position::from([1, 7]), Move::of(&[3], 1)).unwrap_err();
        assert!(matches!(err, Error::IllegalMove { .. }));
    }

    #[test]
    fn terminal_positions() {
        let nim2 = preset("nim", 2).unwrap();
        assert!(is_terminal(&Position::from([0, 0]), &nim2).unwrap());
        assert!(!is_terminal(&Position::from([1, 0]), &nim2).unwrap());
        let only_outer = RuleSet::new(3, [JarSet::from_indices([1, 3]).unwrap()]).unwrap();
        assert!(is_terminal(&Position::from([0, 5, 0]), &only_outer).unwrap());
        assert!(!only_outer.is_cm_nim());
    }

    #[test]
    fn arity_is_checked() {
        let err = legal_moves(&Position::from([1, 2, 3]), &wythoff()).unwrap_err();
        assert_eq!(
            err,
            Error::ArityMismatch {
                expected: 2,
                found: 3
            }
        );
        assert!(is_terminal(&Position::from([1]), &wythoff()).is_err());
    }

    #[test]
    fn rule_file_round_trip_and_validation() {
        let rules =
            RuleSet::from_json(r#"{"jars": 3, "permissible_sets": [[1,2],[1],[2],[3]]}"#).unwrap();
        assert_eq!(rules, preset("wythoff_plus_nim", 3).unwrap());
        assert_eq!(
            rules.to_json(),
            r#"{"jars":3,"permissible_sets":[[1],[2],[1,2],[3]]}"#
        );

        let err =
            RuleSet::from_json(r#"{"jars": 3, "permissible_sets": [[1],[2,4]]}"#).unwrap_err();
        assert!(err.to_string().contains("[2,4]"), "{err}");
        let err = RuleSet::from_json(r#"{"jars": 2, "permissible_sets": [[1],[]]}"#).unwrap_err();
        assert!(err.to_string().contains("[]"), "{err}");
        let err =
            RuleSet::from_json(r#"{"jars": 2, "permissible_sets": [[1],[2],[2]]}"#).unwrap_err();
        assert!(err.to_string().contains("{2}"), "{err}");
        assert!(RuleSet::from_json(r#"{"jars": 0, "permissible_sets": []}"#).is_err());
    }

    #[test]
    fn check_move_against_rules() {
        let nim2 = preset("nim", 2).unwrap();
        let err = nim2
            .check_move(&Position::from([5, 5]), Move::of(&[1, 2], 5))
            .unwrap_err();
        assert!(err.to_string().contains("not permissible"));
        nim2.check_move(&Position::from([5, 5]), Move::of(&[2], 5))
            .unwrap();
    }

    #[test]
    fn parse_and_display() {
        let p: Position = "1,7,9".parse().unwrap();
        assert_eq!(p.to_string(), "(1,7,9)");
        assert_eq!("(2,3)".parse::<Position>().unwrap(), Position::from([2, 3]));
        assert!("1,,2".parse::<Position>().is_err());
        assert!("".parse::<Position>().is_err());
        assert_eq!(Move::of(&[2, 3], 7).to_string(), "({2,3},7)");
        let json = serde_json::to_string(&Move::of(&[3, 1], 2)).unwrap();
        assert_eq!(json, r#"{"subset":[1,3],"amount":2}"#);
    }
}

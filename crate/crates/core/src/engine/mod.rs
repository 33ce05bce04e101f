//! Exhaustive solver: outcome classes, Sprague-Grundy values, P-position
//! enumeration, move recommendation and completion search.
//!
//! Single-position queries go through [`Solver`], a memoized depth-first
//! search. Whole-box queries (enumeration, tables, completions) go through
//! [`OutcomeTable`] and [`GrundyTable`], which sweep the box once in
//! increasing order so no recursion is needed.

mod solver;
mod table;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{Move, OutcomeClass, PlayConvention, Position, RuleSet};

pub use solver::{SolveCache, Solver};
pub use table::{GrundyTable, OutcomeTable};

/// Size of the Nim heap a position is equivalent to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Nimber(pub u32);

impl Nimber {
    pub fn value(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Nimber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Resource ceilings for a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Most positions any memo or table may hold.
    pub max_entries: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_entries: 50_000_000,
        }
    }
}

/// Outcome class of a single position.
pub fn outcome(pos: &Position, rules: &RuleSet, conv: PlayConvention) -> Result<OutcomeClass> {
    Solver::default().outcome(pos, rules, conv)
}

/// Sprague-Grundy value of a single position (normal play).
pub fn grundy(pos: &Position, rules: &RuleSet) -> Result<Nimber> {
    Solver::default().grundy(pos, rules)
}

/// See [`Solver::best_move`].
pub fn best_move(pos: &Position, rules: &RuleSet, conv: PlayConvention) -> Result<Option<Move>> {
    Solver::default().best_move(pos, rules, conv)
}

/// All P-positions with every jar at most `max_per_jar`, in lexicographic order.
pub fn p_positions(
    rules: &RuleSet,
    conv: PlayConvention,
    max_per_jar: u32,
) -> Result<BTreeSet<Position>> {
    Ok(OutcomeTable::cube(rules, conv, max_per_jar, &Limits::default())?.p_set())
}

/// Sprague-Grundy value of every position with every jar at most `max_per_jar`.
pub fn grundy_table(rules: &RuleSet, max_per_jar: u32) -> Result<BTreeMap<Position, Nimber>> {
    Ok(GrundyTable::cube(rules, max_per_jar, &Limits::default())?.to_map())
}

/// Largest value the free jar can take in a P-position: twice the sum of
/// the other jars.
pub fn completion_ceiling(prefix: &[u32]) -> Result<u32> {
    let sum: u64 = prefix.iter().map(|&c| u64::from(c)).sum();
    u32::try_from(2 * sum)
        .map_err(|_| Error::Overflow(format!("completion ceiling for {prefix:?}")))
}

/// Inserts `x` into `prefix` at 1-based `index`.
pub fn insert_at(prefix: &[u32], index: usize, x: u32) -> Position {
    let mut jars = prefix.to_vec();
    jars.insert(index - 1, x);
    Position::new(jars)
}

fn check_completion_args(prefix: &[u32], index: usize, rules: &RuleSet) -> Result<()> {
    if !rules.is_cm_nim() {
        return Err(Error::Input(
            "completion search needs every single jar to be permissible".into(),
        ));
    }
    if prefix.len() + 1 != rules.jar_count() {
        return Err(Error::ArityMismatch {
            expected: rules.jar_count() - 1,
            found: prefix.len(),
        });
    }
    if index == 0 || index > rules.jar_count() {
        return Err(Error::Input(format!(
            "index {index} outside 1..={}",
            rules.jar_count()
        )));
    }
    Ok(())
}

/// The unique count for jar `index` (1-based) that, together with the other
/// jars in `prefix`, forms a P-position under normal play.
///
/// The search runs up to [`completion_ceiling`]. Finding no candidate or
/// more than one is reported as [`Error::Invariant`].
pub fn find_completion(prefix: &[u32], index: usize, rules: &RuleSet) -> Result<u32> {
    find_completion_with(prefix, index, rules, &Limits::default())
}

pub fn find_completion_with(
    prefix: &[u32],
    index: usize,
    rules: &RuleSet,
    limits: &Limits,
) -> Result<u32> {
    check_completion_args(prefix, index, rules)?;
    let ceiling = completion_ceiling(prefix)?;
    let maxes = insert_at(prefix, index, ceiling).into_inner();
    let table = OutcomeTable::compute(rules, PlayConvention::Normal, &maxes, limits)?;
    let found: Vec<u32> = (0..=ceiling)
        .filter(|&x| {
            table
                .is_p(insert_at(prefix, index, x).jars())
                .expect("inside box")
        })
        .collect();
    match found.as_slice() {
        [x] => Ok(*x),
        [] => Err(Error::Invariant(format!(
            "no completion of {prefix:?} at jar {index} up to {ceiling}"
        ))),
        many => Err(Error::Invariant(format!(
            "several completions of {prefix:?} at jar {index}: {many:?}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{apply_move, legal_moves};
    use crate::preset::preset;

    use OutcomeClass::{N, P};
    use PlayConvention::{Misere, Normal};

    fn pos<const K: usize>(v: [u32; K]) -> Position {
        Position::from(v)
    }

    #[test]
    fn outcome_examples() {
        assert_eq!(
            outcome(&pos([0, 0, 0]), &preset("nim", 3).unwrap(), Normal).unwrap(),
            P
        );
        assert_eq!(
            outcome(&pos([1, 3, 5, 7]), &preset("nim", 4).unwrap(), Misere).unwrap(),
            P
        );
        let cm3 = preset("cookie_monster", 3).unwrap();
        assert_eq!(outcome(&pos([1, 7, 9]), &cm3, Normal).unwrap(), N);
        assert_eq!(outcome(&pos([1, 1, 4]), &cm3, Normal).unwrap(), P);
    }

    #[test]
    fn grundy_examples() {
        assert_eq!(
            grundy(&pos([5]), &preset("nim", 1).unwrap()).unwrap(),
            Nimber(5)
        );
        let wy = preset("wythoff", 2).unwrap();
        assert_eq!(grundy(&pos([1, 2]), &wy).unwrap(), Nimber(0));
        assert_eq!(grundy(&pos([3, 3]), &wy).unwrap(), Nimber(6));
    }

    #[test]
    fn best_move_examples() {
        let cm3 = preset("cookie_monster", 3).unwrap();
        let mv = best_move(&pos([1, 7, 9]), &cm3, Normal).unwrap().unwrap();
        let next = apply_move(&pos([1, 7, 9]), mv).unwrap();
        assert_eq!(outcome(&next, &cm3, Normal).unwrap(), P);
        assert_eq!(outcome(&pos([1, 0, 2]), &cm3, Normal).unwrap(), P);

        let wy = preset("wythoff", 2).unwrap();
        assert_eq!(best_move(&pos([0, 0]), &wy, Normal).unwrap(), None);
        let ps = p_positions(&wy, Normal, 12).unwrap();
        for n in 1..=12 {
            let mv = best_move(&pos([n, n]), &wy, Normal).unwrap().unwrap();
            assert!(ps.contains(&apply_move(&pos([n, n]), mv).unwrap()));
        }
    }

    #[test]
    fn delaying_move_from_p_positions() {
        let cm3 = preset("cookie_monster", 3).unwrap();
        assert_eq!(
            best_move(&pos([1, 1, 4]), &cm3, Normal).unwrap(),
            Some(Move::of(&[3], 1))
        );
        // tie on the largest jar goes to the lowest index
        let nim2 = preset("nim", 2).unwrap();
        assert_eq!(
            best_move(&pos([4, 4]), &nim2, Normal).unwrap(),
            Some(Move::of(&[1], 1))
        );
    }

    #[test]
    fn enumeration_examples() {
        let cm3 = preset("cookie_monster", 3).unwrap();
        let ps = p_positions(&cm3, Normal, 9).unwrap();
        let mut sorted: Vec<Vec<u32>> = ps
            .iter()
            .filter(|p| p.jars().iter().all(|&c| c > 0))
            .map(|p| {
                let mut v = p.jars().to_vec();
                v.sort();
                v
            })
            .collect();
        sorted.sort();
        sorted.dedup();
        let expected: Vec<Vec<u32>> = [
            [1, 1, 4],
            [1, 3, 3],
            [1, 5, 6],
            [2, 2, 6],
            [2, 3, 8],
            [2, 7, 7],
            [3, 4, 4],
            [3, 6, 9],
            [5, 5, 7],
            [5, 8, 8],
        ]
        .iter()
        .map(|a| a.to_vec())
        .collect();
        assert_eq!(sorted, expected);

        let wy = p_positions(&preset("wythoff", 2).unwrap(), Normal, 13).unwrap();
        for (a, b) in [(1, 2), (3, 5), (4, 7), (6, 10), (8, 13)] {
            assert!(wy.contains(&pos([a, b])) && wy.contains(&pos([b, a])));
        }

        for name in ["nim", "cookie_monster", "odd", "all_but_k"] {
            let only: BTreeSet<_> = [Position::zeros(3)].into();
            assert_eq!(
                p_positions(&preset(name, 3).unwrap(), Normal, 0).unwrap(),
                only
            );
        }
    }

    #[test]
    fn completion_examples() {
        assert_eq!(
            find_completion(&[2, 5], 3, &preset("nim", 3).unwrap()).unwrap(),
            7
        );
        for name in ["nim", "cookie_monster", "at_most_2"] {
            assert_eq!(
                find_completion(&[0, 0], 3, &preset(name, 3).unwrap()).unwrap(),
                0
            );
        }
        let x = find_completion(&[1, 7], 3, &preset("cookie_monster", 3).unwrap()).unwrap();
        assert_ne!(x, 9);
    }

    #[test]
    fn completion_preconditions() {
        let nim3 = preset("nim", 3).unwrap();
        assert!(find_completion(&[1], 3, &nim3).is_err());
        assert!(find_completion(&[1, 2], 4, &nim3).is_err());
        assert!(find_completion(&[1, 2], 0, &nim3).is_err());
        let pairs_only = RuleSet::from_json(r#"{"jars":2,"permissible_sets":[[1,2]]}"#).unwrap();
        assert!(find_completion(&[1], 2, &pairs_only).is_err());
    }

    #[test]
    fn grundy_table_examples() {
        let t = grundy_table(&preset("wythoff", 2).unwrap(), 6).unwrap();
        assert_eq!(t[&pos([3, 3])], Nimber(6));
        let t = grundy_table(&preset("nim", 1).unwrap(), 9).unwrap();
        assert!((0..=9).all(|j| t[&pos([j])] == Nimber(j)));
        for name in ["nim", "cookie_monster"] {
            let t = grundy_table(&preset(name, 3).unwrap(), 0).unwrap();
            assert_eq!(t.len(), 1);
            assert_eq!(t[&Position::zeros(3)], Nimber(0));
        }
    }

    #[test]
    fn legal_moves_shrink_total() {
        let rules = preset("cookie_monster", 3).unwrap();
        let p = pos([3, 1, 2]);
        for mv in legal_moves(&p, &rules).unwrap() {
            assert!(apply_move(&p, mv).unwrap().total() < p.total());
        }
    }
}

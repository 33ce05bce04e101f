//! The Cookie Monster number: fewest moves that empty every jar, where a
//! move takes the same amount from each jar of any chosen subset.
//!
//! Only the set of distinct non-zero counts matters (jars holding the same
//! count can always be handled together), so search states are sorted,
//! deduplicated value sets. Search is iterative deepening from the lower
//! bound `ceil(log2(d + 1))` for `d` distinct values: one move can at most
//! halve the number of distinct values, counting the zero it may create.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::game::{JarSet, Move};

/// Jar contents for the Cookie Monster problem, sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CmInstance {
    jars: Vec<u32>,
}

impl CmInstance {
    pub fn new<I: IntoIterator<Item = u32>>(jars: I) -> Result<Self> {
        let mut jars: Vec<u32> = jars.into_iter().collect();
        if jars.contains(&0) {
            return Err(Error::Input("Cookie Monster jars must be non-empty".into()));
        }
        jars.sort_unstable();
        Ok(CmInstance { jars })
    }

    pub fn jars(&self) -> &[u32] {
        &self.jars
    }

    fn distinct(&self) -> Vec<u32> {
        let mut d = self.jars.clone();
        d.dedup();
        d
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CmConfig {
    pub max_jars: usize,
    pub max_value: u32,
    /// Search nodes allowed before giving up with a resource error.
    pub max_nodes: u64,
    /// Try only amounts equal to a count or a difference of two counts
    /// first, falling back to the full range when that does not reach the
    /// lower bound.
    pub restricted_amounts: bool,
}

impl Default for CmConfig {
    fn default() -> Self {
        CmConfig {
            max_jars: 6,
            max_value: 200,
            max_nodes: 50_000_000,
            restricted_amounts: false,
        }
    }
}

impl CmConfig {
    fn check(&self, inst: &CmInstance) -> Result<()> {
        if inst.jars.len() > self.max_jars {
            return Err(Error::ResourceLimit {
                what: format!("Cookie Monster search over {} jars", inst.jars.len()),
                limit: self.max_jars,
            });
        }
        if let Some(&v) = inst.jars.last().filter(|&&v| v > self.max_value) {
            return Err(Error::ResourceLimit {
                what: format!("Cookie Monster search with a jar of {v}"),
                limit: self.max_value as usize,
            });
        }
        Ok(())
    }
}

/// `ceil(log2(d + 1))`.
fn lower_bound(distinct: usize) -> u32 {
    usize::BITS - distinct.leading_zeros()
}

/// Distinct values `state` may have while still being emptiable in `moves` moves.
fn capacity(moves: u32) -> usize {
    if moves >= usize::BITS - 1 {
        usize::MAX
    } else {
        (1usize << moves) - 1
    }
}

fn normalize(mut v: Vec<u32>) -> Vec<u32> {
    v.retain(|&x| x != 0);
    v.sort_unstable();
    v.dedup();
    v
}

struct Search {
    /// Largest depth known to be insufficient for each state.
    failed: HashMap<Vec<u32>, u32>,
    nodes: u64,
    max_nodes: u64,
    restricted: bool,
}

impl Search {
    fn new(cfg: &CmConfig, restricted: bool) -> Self {
        Search {
            failed: HashMap::new(),
            nodes: 0,
            max_nodes: cfg.max_nodes,
            restricted,
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(Error::ResourceLimit {
                what: "Cookie Monster search nodes".into(),
                limit: self.max_nodes as usize,
            });
        }
        Ok(())
    }

    fn known_failure(&self, state: &[u32], depth: u32) -> bool {
        self.failed.get(state).is_some_and(|&d| d >= depth)
    }

    fn record_failure(&mut self, state: Vec<u32>, depth: u32) {
        let e = self.failed.entry(state).or_insert(depth);
        *e = (*e).max(depth);
    }

    fn amounts(&self, state: &[u32], cap: u32) -> Vec<u32> {
        if !self.restricted {
            return (1..=cap).collect();
        }
        let mut out: Vec<u32> = state.iter().copied().filter(|&v| v <= cap).collect();
        for (i, &a) in state.iter().enumerate() {
            for &b in &state[..i] {
                if a - b <= cap {
                    out.push(a - b);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Can the distinct-value `state` be emptied in at most `depth` moves?
    ///
    /// Moves commute (each jar only cares which moves include it), so some
    /// optimal sequence starts with a move that touches the largest value;
    /// only such moves are tried.
    fn solvable(&mut self, state: &[u32], depth: u32) -> Result<bool> {
        if state.is_empty() {
            return Ok(true);
        }
        if depth == 0 || state.len() > capacity(depth) || self.known_failure(state, depth) {
            return Ok(false);
        }
        self.tick()?;
        let d = state.len();
        let top = d - 1;
        let room = capacity(depth - 1);
        for rest in 0u32..(1 << top) {
            let chosen = rest | (1 << top);
            let cap = (0..d)
                .filter(|&i| chosen & (1 << i) != 0)
                .map(|i| state[i])
                .min()
                .expect("chosen is non-empty");
            for c in self.amounts(state, cap) {
                let next = normalize(
                    (0..d)
                        .map(|i| {
                            if chosen & (1 << i) != 0 {
                                state[i] - c
                            } else {
                                state[i]
                            }
                        })
                        .collect(),
                );
                if next.len() <= room && self.solvable(&next, depth - 1)? {
                    return Ok(true);
                }
            }
        }
        self.record_failure(state.to_vec(), depth);
        Ok(false)
    }
}

fn deepen(distinct: &[u32], cfg: &CmConfig, restricted: bool) -> Result<u32> {
    let mut search = Search::new(cfg, restricted);
    let ub = distinct.len() as u32;
    for m in lower_bound(distinct.len())..ub {
        if search.solvable(distinct, m)? {
            return Ok(m);
        }
    }
    Ok(ub)
}

/// Cookie Monster number with the default configuration.
pub fn cm_number(inst: &CmInstance) -> Result<u32> {
    cm_number_with(inst, &CmConfig::default())
}

pub fn cm_number_with(inst: &CmInstance, cfg: &CmConfig) -> Result<u32> {
    cfg.check(inst)?;
    let distinct = inst.distinct();
    if cfg.restricted_amounts {
        let m = deepen(&distinct, cfg, true)?;
        if m == lower_bound(distinct.len()) {
            return Ok(m);
        }
    }
    deepen(&distinct, cfg, false)
}

/// An optimal move sequence over the sorted jars of `inst` (jar 1 holds the
/// fewest cookies).
///
/// Among all optimal sequences this returns the lexicographically smallest
/// when moves compare by amount first and then by jar-set mask.
pub fn cm_decomposition(inst: &CmInstance) -> Result<Vec<Move>> {
    cm_decomposition_with(inst, &CmConfig::default())
}

pub fn cm_decomposition_with(inst: &CmInstance, cfg: &CmConfig) -> Result<Vec<Move>> {
    let m = cm_number_with(inst, cfg)?;
    let mut search = Search::new(cfg, false);
    let mut jars = inst.jars.clone();
    let mut out = Vec::with_capacity(m as usize);
    for remaining in (1..=m).rev() {
        let mv = first_move(&mut search, &jars, remaining)?
            .ok_or_else(|| Error::Invariant(format!("no {remaining}-move finish from {jars:?}")))?;
        for j in mv.subset.indices() {
            jars[j - 1] -= mv.amount;
        }
        out.push(mv);
    }
    if jars.iter().any(|&c| c != 0) {
        return Err(Error::Invariant(format!("decomposition left {jars:?}")));
    }
    Ok(out)
}

/// Smallest `(amount, mask)` move after which `jars` can be emptied in
/// `remaining - 1` moves.
fn first_move(search: &mut Search, jars: &[u32], remaining: u32) -> Result<Option<Move>> {
    let nonzero: u32 = jars
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .fold(0, |m, (i, _)| m | (1 << i));
    let max = jars.iter().copied().max().unwrap_or(0);
    for c in 1..=max {
        for mask in 1..=nonzero {
            if mask & !nonzero != 0 {
                continue;
            }
            let set = JarSet::from_mask(mask).expect("non-zero mask");
            if set.offsets().any(|o| jars[o] < c) {
                continue;
            }
            let next: Vec<u32> = jars
                .iter()
                .enumerate()
                .map(|(i, &v)| if mask & (1 << i) != 0 { v - c } else { v })
                .collect();
            if search.solvable(&normalize(next), remaining - 1)? {
                return Ok(Some(Move::new(set, c)));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{apply_move, Position};

    fn inst(v: &[u32]) -> CmInstance {
        CmInstance::new(v.iter().copied()).unwrap()
    }

    fn replay(i: &CmInstance, moves: &[Move]) -> Position {
        moves
            .iter()
            .fold(Position::new(i.jars().to_vec()), |p, &mv| {
                apply_move(&p, mv).unwrap()
            })
    }

    #[test]
    fn published_values() {
        assert_eq!(cm_number(&inst(&[1, 2, 4])).unwrap(), 3);
        assert_eq!(cm_number(&inst(&[1, 2, 3])).unwrap(), 2);
        assert_eq!(cm_number(&inst(&[1, 2, 3, 5, 8])).unwrap(), 3);
        assert_eq!(cm_number(&inst(&[17])).unwrap(), 1);
        assert_eq!(cm_number(&inst(&[])).unwrap(), 0);
    }

    #[test]
    fn decomposition_examples() {
        assert_eq!(
            cm_decomposition(&inst(&[1, 2, 3])).unwrap(),
            vec![Move::of(&[1, 3], 1), Move::of(&[2, 3], 2)]
        );
        assert_eq!(
            cm_decomposition(&inst(&[9])).unwrap(),
            vec![Move::of(&[1], 9)]
        );
        let i = inst(&[4, 1, 2]);
        let moves = cm_decomposition(&i).unwrap();
        assert_eq!(moves.len(), 3);
        assert!(replay(&i, &moves).is_empty());
        assert!(cm_decomposition(&inst(&[])).unwrap().is_empty());
    }

    #[test]
    fn duplicates_merge() {
        assert_eq!(cm_number(&inst(&[3, 3, 5, 5])).unwrap(), 2);
        let i = inst(&[2, 2]);
        assert_eq!(cm_decomposition(&i).unwrap(), vec![Move::of(&[1, 2], 2)]);
    }

    #[test]
    fn restricted_amounts_agree() {
        let cfg = CmConfig {
            restricted_amounts: true,
            ..CmConfig::default()
        };
        for v in [
            &[1, 2, 4][..],
            &[1, 2, 3, 5, 8],
            &[3, 7, 11, 12],
            &[5, 6, 9, 10, 13],
        ] {
            assert_eq!(
                cm_number_with(&inst(v), &cfg).unwrap(),
                cm_number(&inst(v)).unwrap(),
                "{v:?}"
            );
        }
    }

    #[test]
    fn limits() {
        assert!(CmInstance::new([0, 1]).is_err());
        assert!(cm_number(&inst(&[1, 2, 3, 4, 5, 6, 7]))
            .unwrap_err()
            .is_resource_limit());
        assert!(cm_number(&inst(&[201])).unwrap_err().is_resource_limit());
        let tiny = CmConfig {
            max_nodes: 3,
            ..CmConfig::default()
        };
        assert!(cm_number_with(&inst(&[1, 2, 4, 8, 16, 32]), &tiny)
            .unwrap_err()
            .is_resource_limit());
    }

    #[test]
    fn lower_bound_values() {
        assert_eq!(lower_bound(0), 0);
        assert_eq!(lower_bound(1), 1);
        assert_eq!(lower_bound(3), 2);
        assert_eq!(lower_bound(4), 3);
        assert_eq!(lower_bound(7), 3);
    }
}

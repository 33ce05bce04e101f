use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::game::{
    apply_into, for_each_move, is_terminal, JarSet, Move, OutcomeClass, PlayConvention, Position,
    RuleSet,
};

use super::{Limits, Nimber};

/// Memo of solved positions, keyed by rule set (and convention for outcomes).
#[derive(Debug, Default, Clone)]
pub struct SolveCache {
    outcomes: HashMap<(RuleSet, PlayConvention), HashMap<Vec<u32>, OutcomeClass>>,
    nimbers: HashMap<RuleSet, HashMap<Vec<u32>, u32>>,
}

impl SolveCache {
    pub fn len(&self) -> usize {
        self.outcomes.values().map(HashMap::len).sum::<usize>()
            + self.nimbers.values().map(HashMap::len).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn clear(&mut self) {
        self.outcomes.clear();
        self.nimbers.clear();
    }
}

/// Single-position solver.
///
/// With a cache, queries run as an explicit-stack depth-first search that
/// memoizes every position it settles. Without one, the game tree is
/// expanded directly by recursion; that mode exists to cross-check the
/// memoized path on small positions.
#[derive(Debug, Clone)]
pub struct Solver {
    limits: Limits,
    cache: Option<SolveCache>,
}

impl Default for Solver {
    fn default() -> Self {
        Solver::new(Limits::default())
    }
}

impl Solver {
    pub fn new(limits: Limits) -> Self {
        Solver {
            limits,
            cache: Some(SolveCache::default()),
        }
    }

    pub fn uncached(limits: Limits) -> Self {
        Solver {
            limits,
            cache: None,
        }
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    pub fn cache(&self) -> Option<&SolveCache> {
        self.cache.as_ref()
    }

    pub fn outcome(
        &mut self,
        pos: &Position,
        rules: &RuleSet,
        conv: PlayConvention,
    ) -> Result<OutcomeClass> {
        rules.check_arity(pos)?;
        let limit = self.limits.max_entries;
        let Some(cache) = self.cache.as_mut() else {
            let mut budget = limit;
            return naive_outcome(pos.jars(), rules, conv, &mut budget)
                .ok_or_else(|| resource("uncached outcome search", limit));
        };
        let other_entries = cache.len();
        let memo = cache.outcomes.entry((rules.clone(), conv)).or_default();
        let before = memo.len();

        let mut stack: Vec<Vec<u32>> = vec![pos.jars().to_vec()];
        let mut buf = Vec::with_capacity(pos.arity());
        let mut pending: Vec<Vec<u32>> = Vec::new();
        while let Some(top) = stack.last() {
            if memo.contains_key(top) {
                stack.pop();
                continue;
            }
            let mut any_move = false;
            let mut reaches_p = false;
            pending.clear();
            for_each_move(top, rules, |mv| {
                any_move = true;
                apply_into(top, mv, &mut buf);
                match memo.get(&buf) {
                    Some(OutcomeClass::P) => {
                        reaches_p = true;
                        false
                    }
                    Some(OutcomeClass::N) => true,
                    None => {
                        pending.push(buf.clone());
                        true
                    }
                }
            });
            if reaches_p || pending.is_empty() {
                let class = match (any_move, reaches_p, conv) {
                    (false, _, PlayConvention::Normal) => OutcomeClass::P,
                    (false, _, PlayConvention::Misere) => OutcomeClass::N,
                    (true, true, _) => OutcomeClass::N,
                    (true, false, _) => OutcomeClass::P,
                };
                let key = stack.pop().expect("non-empty stack");
                memo.insert(key, class);
                if other_entries + memo.len() - before + stack.len() > limit {
                    memo.clear();
                    return Err(resource("outcome memo", limit));
                }
            } else {
                stack.append(&mut pending);
                if other_entries + memo.len() - before + stack.len() > limit {
                    memo.clear();
                    return Err(resource("outcome search stack", limit));
                }
            }
        }
        Ok(memo[pos.jars()])
    }

    /// Sprague-Grundy value under normal play.
    pub fn grundy(&mut self, pos: &Position, rules: &RuleSet) -> Result<Nimber> {
        rules.check_arity(pos)?;
        let limit = self.limits.max_entries;
        let Some(cache) = self.cache.as_mut() else {
            let mut budget = limit;
            return naive_grundy(pos.jars(), rules, &mut budget)
                .map(Nimber)
                .ok_or_else(|| resource("uncached grundy search", limit));
        };
        let other_entries = cache.len();
        let memo = cache.nimbers.entry(rules.clone()).or_default();
        let before = memo.len();

        let mut stack: Vec<Vec<u32>> = vec![pos.jars().to_vec()];
        let mut buf = Vec::with_capacity(pos.arity());
        let mut pending: Vec<Vec<u32>> = Vec::new();
        let mut values: Vec<u32> = Vec::new();
        while let Some(top) = stack.last() {
            if memo.contains_key(top) {
                stack.pop();
                continue;
            }
            pending.clear();
            values.clear();
            for_each_move(top, rules, |mv| {
                apply_into(top, mv, &mut buf);
                match memo.get(&buf) {
                    Some(&v) => values.push(v),
                    None => pending.push(buf.clone()),
                }
                true
            });
            if pending.is_empty() {
                let g = mex(&mut values);
                let key = stack.pop().expect("non-empty stack");
                memo.insert(key, g);
            } else {
                stack.append(&mut pending);
            }
            if other_entries + memo.len() - before + stack.len() > limit {
                memo.clear();
                return Err(resource("grundy memo", limit));
            }
        }
        Ok(Nimber(memo[pos.jars()]))
    }

    /// A recommended move, or `None` at a terminal position.
    ///
    /// From an N-position this is the first winning move in canonical order
    /// (smallest set mask, then smallest amount). From a P-position every move
    /// loses, so the solver stalls: one cookie from the fullest jar that a
    /// permissible singleton can reach, lowest index on ties. Rule sets with
    /// no such jar fall back to the first legal move.
    pub fn best_move(
        &mut self,
        pos: &Position,
        rules: &RuleSet,
        conv: PlayConvention,
    ) -> Result<Option<Move>> {
        if is_terminal(pos, rules)? {
            return Ok(None);
        }
        let mut moves = Vec::new();
        for_each_move(pos.jars(), rules, |mv| {
            moves.push(mv);
            true
        });
        if self.outcome(pos, rules, conv)? == OutcomeClass::N {
            let mut buf = Vec::with_capacity(pos.arity());
            for mv in moves {
                apply_into(pos.jars(), mv, &mut buf);
                let next = Position::new(buf.clone());
                if self.outcome(&next, rules, conv)? == OutcomeClass::P {
                    return Ok(Some(mv));
                }
            }
            return Err(Error::Invariant(format!(
                "{pos} classified N but no move reaches a P-position"
            )));
        }
        let mut delay: Option<(usize, u32)> = None;
        for (i, &c) in pos.jars().iter().enumerate() {
            let jar = i + 1;
            if c > 0
                && rules.permits(JarSet::singleton(jar))
                && delay.is_none_or(|(_, best)| c > best)
            {
                delay = Some((jar, c));
            }
        }
        Ok(Some(match delay {
            Some((jar, _)) => Move::new(JarSet::singleton(jar), 1),
            None => moves[0],
        }))
    }
}

fn resource(what: &str, limit: usize) -> Error {
    Error::ResourceLimit {
        what: what.to_string(),
        limit,
    }
}

pub(crate) fn mex(values: &mut Vec<u32>) -> u32 {
    values.sort_unstable();
    values.dedup();
    let mut m = 0;
    for &v in values.iter() {
        if v != m {
            break;
        }
        m += 1;
    }
    m
}

/// Plain recursion from the definition; `None` once `budget` nodes are used.
fn naive_outcome(
    jars: &[u32],
    rules: &RuleSet,
    conv: PlayConvention,
    budget: &mut usize,
) -> Option<OutcomeClass> {
    if *budget == 0 {
        return None;
    }
    *budget -= 1;
    let mut moves = Vec::new();
    for_each_move(jars, rules, |mv| {
        moves.push(mv);
        true
    });
    if moves.is_empty() {
        return Some(match conv {
            PlayConvention::Normal => OutcomeClass::P,
            PlayConvention::Misere => OutcomeClass::N,
        });
    }
    let mut buf = Vec::with_capacity(jars.len());
    for mv in moves {
        apply_into(jars, mv, &mut buf);
        let next = buf.clone();
        if naive_outcome(&next, rules, conv, budget)? == OutcomeClass::P {
            return Some(OutcomeClass::N);
        }
    }
    Some(OutcomeClass::P)
}

fn naive_grundy(jars: &[u32], rules: &RuleSet, budget: &mut usize) -> Option<u32> {
    if *budget == 0 {
        return None;
    }
    *budget -= 1;
    let mut moves = Vec::new();
    for_each_move(jars, rules, |mv| {
        moves.push(mv);
        true
    });
    let mut buf = Vec::with_capacity(jars.len());
    let mut values = Vec::with_capacity(moves.len());
    for mv in moves {
        apply_into(jars, mv, &mut buf);
        let next = buf.clone();
        values.push(naive_grundy(&next, rules, budget)?);
    }
    Some(mex(&mut values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preset::preset;

    #[test]
    fn mex_of_sets() {
        assert_eq!(mex(&mut vec![]), 0);
        assert_eq!(mex(&mut vec![1, 2]), 0);
        assert_eq!(mex(&mut vec![2, 0, 1, 1, 4]), 3);
    }

    #[test]
    fn memo_limit_is_reported_not_guessed() {
        let mut s = Solver::new(Limits { max_entries: 50 });
        let err = s
            .outcome(
                &Position::from([9, 9, 9]),
                &preset("cookie_monster", 3).unwrap(),
                PlayConvention::Normal,
            )
            .unwrap_err();
        assert!(err.is_resource_limit());
        let mut s = Solver::uncached(Limits { max_entries: 50 });
        let err = s
            .grundy(
                &Position::from([9, 9, 9]),
                &preset("cookie_monster", 3).unwrap(),
            )
            .unwrap_err();
        assert!(err.is_resource_limit());
    }

    #[test]
    fn cache_is_keyed_by_rules_and_convention() {
        let mut s = Solver::default();
        let nim2 = preset("nim", 2).unwrap();
        let wy = preset("wythoff", 2).unwrap();
        let p = Position::from([3, 3]);
        assert_eq!(
            s.outcome(&p, &nim2, PlayConvention::Normal).unwrap(),
            OutcomeClass::P
        );
        assert_eq!(
            s.outcome(&p, &wy, PlayConvention::Normal).unwrap(),
            OutcomeClass::N
        );
        let one = Position::from([1, 1]);
        assert_eq!(
            s.outcome(&one, &nim2, PlayConvention::Normal).unwrap(),
            OutcomeClass::P
        );
        assert_eq!(
            s.outcome(&one, &nim2, PlayConvention::Misere).unwrap(),
            OutcomeClass::N
        );
        assert!(!s.cache().unwrap().is_empty());
    }
}

//! Dense retrograde tables over a box `[0, m_1] x ... x [0, m_k]`.
//!
//! Every move lowers at least one coordinate and raises none, so a box that
//! contains a position contains all of its successors. Positions are laid
//! out row-major (last jar fastest); a move `(S, c)` then moves the flat
//! index down by `c * sum(stride[j] for j in S)`, and a single ascending pass
//! sees every successor before the position itself.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::game::{OutcomeClass, PlayConvention, Position, RuleSet};

use super::{Limits, Nimber};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct BoxShape {
    maxes: Vec<u32>,
    strides: Vec<usize>,
    len: usize,
}

impl BoxShape {
    pub(crate) fn new(maxes: &[u32], limits: &Limits, what: &str) -> Result<Self> {
        let mut strides = vec![0usize; maxes.len()];
        let mut len = 1usize;
        for (i, &m) in maxes.iter().enumerate().rev() {
            strides[i] = len;
            len = (m as usize)
                .checked_add(1)
                .and_then(|side| len.checked_mul(side))
                .filter(|&n| n <= limits.max_entries)
                .ok_or_else(|| Error::ResourceLimit {
                    what: what.to_string(),
                    limit: limits.max_entries,
                })?;
        }
        Ok(BoxShape {
            maxes: maxes.to_vec(),
            strides,
            len,
        })
    }

    pub(crate) fn index_of(&self, jars: &[u32]) -> Option<usize> {
        if jars.len() != self.maxes.len() {
            return None;
        }
        let mut idx = 0;
        for ((&c, &m), &s) in jars.iter().zip(&self.maxes).zip(&self.strides) {
            if c > m {
                return None;
            }
            idx += c as usize * s;
        }
        Some(idx)
    }

    /// Visits every position in ascending index (= lexicographic) order.
    pub(crate) fn for_each(&self, mut f: impl FnMut(usize, &[u32])) {
        let k = self.maxes.len();
        let mut coords = vec![0u32; k];
        for idx in 0..self.len {
            f(idx, &coords);
            for j in (0..k).rev() {
                if coords[j] < self.maxes[j] {
                    coords[j] += 1;
                    break;
                }
                coords[j] = 0;
            }
        }
    }
}

/// Per-set data for the sweep: 0-based jar offsets and the flat-index step.
struct SetStep {
    offsets: Vec<usize>,
    step: usize,
}

fn steps(rules: &RuleSet, shape: &BoxShape) -> Vec<SetStep> {
    rules
        .sets()
        .iter()
        .map(|s| {
            let offsets: Vec<usize> = s.offsets().collect();
            let step = offsets.iter().map(|&o| shape.strides[o]).sum();
            SetStep { offsets, step }
        })
        .collect()
}

fn check_maxes(rules: &RuleSet, maxes: &[u32]) -> Result<()> {
    if maxes.len() != rules.jar_count() {
        return Err(Error::ArityMismatch {
            expected: rules.jar_count(),
            found: maxes.len(),
        });
    }
    Ok(())
}

/// Outcome class of every position in a box.
#[derive(Debug, Clone)]
pub struct OutcomeTable {
    shape: BoxShape,
    convention: PlayConvention,
    is_p: Vec<bool>,
}

impl OutcomeTable {
    /// Classifies the box with the given per-jar maxima.
    pub fn compute(
        rules: &RuleSet,
        convention: PlayConvention,
        maxes: &[u32],
        limits: &Limits,
    ) -> Result<Self> {
        check_maxes(rules, maxes)?;
        let shape = BoxShape::new(maxes, limits, "outcome table")?;
        let steps = steps(rules, &shape);
        let mut is_p = vec![false; shape.len];
        shape.for_each(|idx, coords| {
            let mut any_move = false;
            let mut reaches_p = false;
            'sets: for st in &steps {
                let cap = st.offsets.iter().map(|&o| coords[o]).min().unwrap_or(0);
                for c in 1..=cap as usize {
                    any_move = true;
                    if is_p[idx - c * st.step] {
                        reaches_p = true;
                        break 'sets;
                    }
                }
            }
            is_p[idx] = if any_move {
                !reaches_p
            } else {
                convention == PlayConvention::Normal
            };
        });
        Ok(OutcomeTable {
            shape,
            convention,
            is_p,
        })
    }

    /// Cube `[0, max]^k`.
    pub fn cube(
        rules: &RuleSet,
        convention: PlayConvention,
        max_per_jar: u32,
        limits: &Limits,
    ) -> Result<Self> {
        let maxes = vec![max_per_jar; rules.jar_count()];
        Self::compute(rules, convention, &maxes, limits)
    }

    pub fn convention(&self) -> PlayConvention {
        self.convention
    }

    pub fn maxes(&self) -> &[u32] {
        &self.shape.maxes
    }

    /// `None` when the position lies outside the box.
    pub fn class(&self, jars: &[u32]) -> Option<OutcomeClass> {
        self.shape.index_of(jars).map(|i| {
            if self.is_p[i] {
                OutcomeClass::P
            } else {
                OutcomeClass::N
            }
        })
    }

    pub fn is_p(&self, jars: &[u32]) -> Option<bool> {
        self.shape.index_of(jars).map(|i| self.is_p[i])
    }

    /// P-positions in lexicographic order.
    pub fn p_positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        self.shape.for_each(|idx, coords| {
            if self.is_p[idx] {
                out.push(Position::new(coords.to_vec()));
            }
        });
        out
    }

    pub fn p_set(&self) -> BTreeSet<Position> {
        self.p_positions().into_iter().collect()
    }
}

/// Sprague-Grundy value of every position in a box, normal play.
#[derive(Debug, Clone)]
pub struct GrundyTable {
    shape: BoxShape,
    values: Vec<u32>,
}

impl GrundyTable {
    pub fn compute(rules: &RuleSet, maxes: &[u32], limits: &Limits) -> Result<Self> {
        check_maxes(rules, maxes)?;
        let shape = BoxShape::new(maxes, limits, "grundy table")?;
        let steps = steps(rules, &shape);
        let mut values = vec![0u32; shape.len];
        // seen[v] == stamp marks v as a successor value of the current position
        let mut seen: Vec<usize> = Vec::new();
        shape.for_each(|idx, coords| {
            let stamp = idx + 1;
            for st in &steps {
                let cap = st.offsets.iter().map(|&o| coords[o]).min().unwrap_or(0);
                for c in 1..=cap as usize {
                    let v = values[idx - c * st.step] as usize;
                    if v >= seen.len() {
                        seen.resize(v + 1, 0);
                    }
                    seen[v] = stamp;
                }
            }
            let mex = seen.iter().position(|&s| s != stamp).unwrap_or(seen.len());
            values[idx] = mex as u32;
        });
        Ok(GrundyTable { shape, values })
    }

    pub fn cube(rules: &RuleSet, max_per_jar: u32, limits: &Limits) -> Result<Self> {
        let maxes = vec![max_per_jar; rules.jar_count()];
        Self::compute(rules, &maxes, limits)
    }

    pub fn get(&self, jars: &[u32]) -> Option<Nimber> {
        self.shape.index_of(jars).map(|i| Nimber(self.values[i]))
    }

    pub fn to_map(&self) -> BTreeMap<Position, Nimber> {
        let mut out = BTreeMap::new();
        self.shape.for_each(|idx, coords| {
            out.insert(Position::new(coords.to_vec()), Nimber(self.values[idx]));
        });
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preset::preset;

    #[test]
    fn shape_indexing_is_lexicographic() {
        let shape = BoxShape::new(&[2, 1, 3], &Limits::default(), "t").unwrap();
        assert_eq!(shape.len, 3 * 2 * 4);
        let mut seen = Vec::new();
        shape.for_each(|idx, c| {
            assert_eq!(shape.index_of(c), Some(idx));
            seen.push(c.to_vec());
        });
        let mut sorted = seen.clone();
        sorted.sort();
        assert_eq!(seen, sorted);
        assert_eq!(shape.index_of(&[3, 0, 0]), None);
    }

    #[test]
    fn box_too_large_is_a_resource_error() {
        let limits = Limits { max_entries: 1000 };
        let err = OutcomeTable::cube(
            &preset("nim", 3).unwrap(),
            PlayConvention::Normal,
            10,
            &limits,
        )
        .unwrap_err();
        assert!(err.is_resource_limit());
        let err =
            GrundyTable::cube(&preset("nim", 16).unwrap(), 1000, &Limits::default()).unwrap_err();
        assert!(err.is_resource_limit());
    }

    #[test]
    fn single_heap_nimbers() {
        let t = GrundyTable::cube(&preset("nim", 1).unwrap(), 20, &Limits::default()).unwrap();
        for j in 0..=20 {
            assert_eq!(t.get(&[j]), Some(Nimber(j)));
        }
    }
}

//! Closed-form answers that need no search: Nim via the nim-sum, Wythoff via
//! Zeckendorf representations, and the structural results for the odd and
//! All-but-k games.
//!
//! Fibonacci numbers are indexed with `F(1) = F(2) = 1`, `F(3) = 2`. In a
//! Zeckendorf representation the value 1 always carries index 2.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{JarSet, OutcomeClass, Position, RuleSet};

/// Bitwise XOR of all values: binary addition without carry.
pub fn nim_sum<I: IntoIterator<Item = u64>>(values: I) -> u64 {
    values.into_iter().fold(0, |acc, v| acc ^ v)
}

fn position_nim_sum(pos: &Position) -> u64 {
    nim_sum(pos.jars().iter().map(|&c| u64::from(c)))
}

/// Nim P-positions are exactly those with nim-sum zero.
pub fn is_nim_p(pos: &Position) -> bool {
    position_nim_sum(pos) == 0
}

/// The pile that completes `others` to a Nim P-position.
pub fn nim_completion(others: &[u32]) -> u32 {
    others.iter().fold(0, |acc, &c| acc ^ c)
}

/// Largest index `i` with `F(i)` representable in a `u64`.
const MAX_FIB_INDEX: u32 = 93;

const FIB: [u64; MAX_FIB_INDEX as usize + 1] = {
    let mut t = [0u64; MAX_FIB_INDEX as usize + 1];
    t[1] = 1;
    t[2] = 1;
    let mut i = 3;
    while i <= MAX_FIB_INDEX as usize {
        t[i] = t[i - 1] + t[i - 2];
        i += 1;
    }
    t
};

/// `F(i)` for `1 <= i <= 93`.
pub fn fibonacci(i: u32) -> u64 {
    assert!(
        (1..=MAX_FIB_INDEX).contains(&i),
        "fibonacci index {i} out of range"
    );
    FIB[i as usize]
}

/// `n` as a sum of non-consecutive Fibonacci numbers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ZeckendorfRep {
    /// Strictly increasing, pairwise non-adjacent, all `>= 2`.
    indices: Vec<u32>,
}

impl ZeckendorfRep {
    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    /// Fibonacci terms, smallest first.
    pub fn terms(&self) -> Vec<u64> {
        self.indices.iter().map(|&i| fibonacci(i)).collect()
    }

    pub fn value(&self) -> u64 {
        self.terms().iter().sum()
    }

    /// Index of the smallest term; `None` for zero.
    pub fn lowest_index(&self) -> Option<u32> {
        self.indices.first().copied()
    }

    /// Sum after moving every index by `delta`, with index 1 valued as
    /// `F(1) = 1`. `None` on overflow.
    fn shifted_value(&self, delta: i32) -> Option<u64> {
        self.indices.iter().try_fold(0u64, |acc, &i| {
            let j = (i as i32 + delta).max(1) as usize;
            FIB.get(j).and_then(|&f| acc.checked_add(f))
        })
    }
}

/// Greedy Zeckendorf representation; zero maps to the empty sum.
pub fn zeckendorf(mut n: u64) -> ZeckendorfRep {
    let mut indices = Vec::new();
    while n > 0 {
        // largest i >= 2 with F(i) <= n
        let i = FIB[2..].partition_point(|&f| f <= n) + 1;
        indices.push(i as u32);
        n -= FIB[i];
    }
    indices.reverse();
    ZeckendorfRep { indices }
}

/// Fibonacci successor: shift every Zeckendorf index up by one.
///
/// Panics when the result does not fit in a `u64`; see
/// [`checked_fib_successor`].
pub fn fib_successor(n: u64) -> u64 {
    checked_fib_successor(n).unwrap_or_else(|| panic!("Fibonacci successor of {n} overflows u64"))
}

pub fn checked_fib_successor(n: u64) -> Option<u64> {
    zeckendorf(n).shifted_value(1)
}

/// The Wythoff P-position containing `n >= 1`.
///
/// `n` comes first when the lowest index of its Zeckendorf representation
/// is even; then the pair is `(n, σ(n))`. Otherwise `n` is the second
/// coordinate of the pair `(m, σ(m))` with `σ(m) = n`.
pub fn wythoff_pair(n: u32) -> Result<Position> {
    if n == 0 {
        return Ok(Position::zeros(2));
    }
    let rep = zeckendorf(u64::from(n));
    if rep.lowest_index().expect("n > 0").is_multiple_of(2) {
        let partner = u32::try_from(checked_fib_successor(u64::from(n)).expect("n < 2^32"))
            .map_err(|_| Error::Overflow(format!("Wythoff partner of {n}")))?;
        Ok(Position::new(vec![n, partner]))
    } else {
        // km_to_miles inverts σ on its image, and odd-lowest-index numbers
        // lie in that image
        let m = km_to_miles(u64::from(n)) as u32;
        debug_assert_eq!(fib_successor(u64::from(m)), u64::from(n));
        Ok(Position::new(vec![m, n]))
    }
}

/// Wythoff P-positions: `(0,0)` and the pairs `{n, σ(n)}` with `n` first.
pub fn is_wythoff_p(pos: &Position) -> bool {
    let [a, b] = pos.jars() else {
        return false;
    };
    let (lo, hi) = (u64::from(*a.min(b)), u64::from(*a.max(b)));
    if lo == 0 {
        return hi == 0;
    }
    zeckendorf(lo)
        .lowest_index()
        .expect("lo > 0")
        .is_multiple_of(2)
        && checked_fib_successor(lo) == Some(hi)
}

pub fn miles_to_km(n: u64) -> u64 {
    fib_successor(n)
}

/// Shift every Zeckendorf index down by one. A term of 1 (index 2) stays 1.
pub fn km_to_miles(n: u64) -> u64 {
    zeckendorf(n)
        .shifted_value(-1)
        .expect("shifting down never grows the sum")
}

/// Taking equally from an odd number of jars leaves the Nim P-positions unchanged.
pub fn odd_game_is_p(pos: &Position) -> bool {
    is_nim_p(pos)
}

/// What the All-but-k theorem decides: all jars equal is P, exactly two
/// distinct counts is N, anything else is left open.
pub fn all_but_k_classify(pos: &Position) -> Option<OutcomeClass> {
    if pos.arity() < 2 {
        return None;
    }
    let mut distinct: Vec<u32> = pos.jars().to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    match distinct.len() {
        1 => Some(OutcomeClass::P),
        2 => Some(OutcomeClass::N),
        _ => None,
    }
}

/// Every permissible set has a non-empty, permissible complement.
///
/// The full set has an empty complement, so any rule set containing it is
/// not complement-closed.
pub fn is_complement_closed(rules: &RuleSet) -> bool {
    let full = JarSet::full(rules.jar_count()).mask();
    rules
        .sets()
        .iter()
        .all(|s| JarSet::from_mask(full & !s.mask()).is_some_and(|c| rules.permits(c)))
}

/// Every jar count doubled.
pub fn double_position(pos: &Position) -> Result<Position> {
    pos.jars()
        .iter()
        .map(|&c| {
            c.checked_mul(2)
                .ok_or_else(|| Error::Overflow(format!("doubling {pos}")))
        })
        .collect::<Result<Vec<_>>>()
        .map(Position::new)
}

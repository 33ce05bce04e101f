use std::collections::{BTreeSet, HashMap};

use crate::closedform::{
    all_but_k_classify, fibonacci, is_complement_closed, is_nim_p, is_wythoff_p, nim_completion,
    odd_game_is_p, wythoff_pair,
};
use crate::engine::{
    completion_ceiling, find_completion, insert_at, GrundyTable, Limits, OutcomeTable, Solver,
};
use crate::error::{Error, Result};
use crate::game::{
    apply_into, apply_move, for_each_move, min_over, JarSet, Move, OutcomeClass, PlayConvention,
    Position, RuleSet,
};
use crate::preset::{preset, JarCount};

use super::golden::{golden_tables, verify_golden_table};
use super::{Check, VerificationReport};

use PlayConvention::{Misere, Normal};

fn describe(rules: &RuleSet) -> String {
    let k = rules.jar_count();
    let matching: Vec<_> = crate::preset::presets()
        .iter()
        .filter(|p| p.rules(k).as_ref() == Ok(rules))
        .collect();
    // a fixed-size normal-play name (at_most_2) beats a family (all_but_k)
    matching
        .iter()
        .find(|p| matches!(p.jars, JarCount::Fixed(_)) && p.default_convention == Normal)
        .or(matching.first())
        .map(|p| format!("{}({k})", p.name))
        .unwrap_or_else(|| rules.to_json())
}

fn require_cm_nim(rules: &RuleSet) -> Result<()> {
    if rules.is_cm_nim() {
        Ok(())
    } else {
        Err(Error::Input(format!(
            "{} is not a CM-Nim game",
            describe(rules)
        )))
    }
}

fn cube(rules: &RuleSet, conv: PlayConvention, bound: u32) -> Result<OutcomeTable> {
    OutcomeTable::cube(rules, conv, bound, &Limits::default())
}

/// Every point of `[0, bound]^k`, lexicographically.
fn each_point(k: usize, bound: u32, mut f: impl FnMut(&[u32])) {
    let mut v = vec![0u32; k];
    loop {
        f(&v);
        let mut j = k;
        loop {
            if j == 0 {
                return;
            }
            j -= 1;
            if v[j] < bound {
                v[j] += 1;
                break;
            }
            v[j] = 0;
        }
    }
}

/// For every prefix in `[0, bound]^(k-1)` and every free jar, exactly one
/// count completes it to a P-position, and it is at most twice the prefix
/// sum. Cross-checked against the P-positions of the cube and, for Nim and
/// Wythoff, against their closed forms.
pub fn verify_unique_completion(rules: &RuleSet, bound: u32) -> Result<VerificationReport> {
    require_cm_nim(rules)?;
    let k = rules.jar_count();
    let mut check = Check::new(
        "unique_completion",
        format!("{} bound={bound}", describe(rules)),
    );
    let free_max = 2 * bound * (k as u32 - 1);
    let is_nim = *rules == preset("nim", k)?;
    let is_wythoff = k == 2 && *rules == preset("wythoff", 2)?;
    let mut completions: HashMap<(usize, Vec<u32>), u32> = HashMap::new();

    for index in 1..=k {
        let mut maxes = vec![bound; k - 1];
        maxes.insert(index - 1, free_max);
        let table = OutcomeTable::compute(rules, Normal, &maxes, &Limits::default())?;
        each_point(k - 1, bound, |prefix| {
            let ceiling = 2 * prefix.iter().sum::<u32>();
            let found: Vec<u32> = (0..=free_max)
                .filter(|&x| table.is_p(insert_at(prefix, index, x).jars()) == Some(true))
                .collect();
            match found.as_slice() {
                [x] if *x <= ceiling => {
                    completions.insert((index, prefix.to_vec()), *x);
                }
                [x] => check.fail(insert_at(prefix, index, *x), || {
                    format!("completion of {prefix:?} at jar {index} exceeds ceiling {ceiling}")
                }),
                [] => check.fail(insert_at(prefix, index, 0), || {
                    format!("no completion of {prefix:?} at jar {index}")
                }),
                many => {
                    for &x in many {
                        check.fail(insert_at(prefix, index, x), || {
                            format!("several completions of {prefix:?} at jar {index}: {many:?}")
                        });
                    }
                }
            }
        });
    }

    for p in cube(rules, Normal, bound)?.p_positions() {
        for index in 1..=k {
            let mut prefix = p.jars().to_vec();
            let x = prefix.remove(index - 1);
            let c = completions.get(&(index, prefix));
            check.expect(c == Some(&x), p.clone(), || {
                format!("cube P-position {p} disagrees with completion {c:?} at jar {index}")
            });
        }
    }

    for ((index, prefix), &x) in &completions {
        let p = insert_at(prefix, *index, x);
        if is_nim {
            check.expect(x == nim_completion(prefix), p.clone(), || {
                format!("{p}: completion differs from the nim-sum")
            });
        }
        if is_wythoff {
            let n = prefix[0];
            let pair = wythoff_pair(n)?;
            let partner = if pair.jars()[0] == n {
                pair.jars()[1]
            } else {
                pair.jars()[0]
            };
            check.expect(x == partner, p.clone(), || {
                format!("{p}: completion differs from the Zeckendorf pair {pair}")
            });
        }
    }

    let top = vec![bound; k - 1];
    for index in 1..=k {
        let x = find_completion(&top, index, rules)?;
        let expected = completions.get(&(index, top.clone())).copied();
        check.expect(Some(x) == expected, insert_at(&top, index, x), || {
            format!("find_completion disagrees with the table at jar {index}")
        });
        debug_assert!(x <= completion_ceiling(&top)?);
    }
    Ok(check.finish())
}

/// In every P-position each count is at most twice the sum of the others.
pub fn verify_double_bound(rules: &RuleSet, bound: u32) -> Result<VerificationReport> {
    require_cm_nim(rules)?;
    let mut check = Check::new("double_bound", format!("{} bound={bound}", describe(rules)));
    for p in cube(rules, Normal, bound)?.p_positions() {
        let sum: u64 = p.total();
        let max = u64::from(*p.jars().iter().max().expect("k >= 1"));
        check.expect(max <= 2 * (sum - max), p.clone(), || {
            format!("{p}: largest jar exceeds twice the others")
        });
    }
    Ok(check.finish())
}

/// From a P-position, two consecutive moves on the same jar set never
/// reach a P-position.
pub fn verify_same_set_lemma(rules: &RuleSet, bound: u32) -> Result<VerificationReport> {
    require_cm_nim(rules)?;
    let mut check = Check::new(
        "same_set_lemma",
        format!("{} bound={bound}", describe(rules)),
    );
    let table = cube(rules, Normal, bound)?;
    let mut mid = Vec::new();
    let mut end = Vec::new();
    for p in table.p_positions() {
        for &set in rules.sets() {
            for c in 1..=min_over(p.jars(), set) {
                apply_into(p.jars(), Move::new(set, c), &mut mid);
                for c2 in 1..=min_over(&mid, set) {
                    apply_into(&mid, Move::new(set, c2), &mut end);
                    if table.is_p(&end) == Some(true) {
                        let q = Position::new(end.clone());
                        check.fail(q.clone(), || {
                            format!("{p} -({set},{c})-> -({set},{c2})-> {q} is P")
                        });
                    }
                }
            }
        }
    }
    Ok(check.finish())
}

fn symmetric_difference(
    check: &mut Check,
    a: &BTreeSet<Position>,
    b: &BTreeSet<Position>,
    what: &str,
) {
    for p in a.symmetric_difference(b) {
        check.fail(p.clone(), || format!("{p} is P in only one of {what}"));
    }
}

/// The odd game on `k` jars has exactly the Nim P-positions.
pub fn verify_odd_equals_nim(k: usize, bound: u32) -> Result<VerificationReport> {
    let mut check = Check::new("odd_equals_nim", format!("k={k} bound={bound}"));
    let odd = cube(&preset("odd", k)?, Normal, bound)?.p_set();
    let nim = cube(&preset("nim", k)?, Normal, bound)?.p_set();
    symmetric_difference(&mut check, &odd, &nim, "odd and Nim");
    Ok(check.finish())
}

/// Adding moves that only lead from old P-positions to old N-positions
/// keeps the P-positions. Reports "not applicable" with a witness when the
/// added moves break the hypothesis inside the box.
pub fn verify_added_moves_theorem(
    base: &RuleSet,
    extra: &RuleSet,
    bound: u32,
) -> Result<VerificationReport> {
    if base.jar_count() != extra.jar_count() || !base.sets().iter().all(|&s| extra.permits(s)) {
        return Err(Error::Input(format!(
            "{} does not extend {}",
            describe(extra),
            describe(base)
        )));
    }
    let mut check = Check::new(
        "added_moves",
        format!("{} -> {} bound={bound}", describe(base), describe(extra)),
    );
    let old = cube(base, Normal, bound)?;
    let added: Vec<JarSet> = extra
        .sets()
        .iter()
        .copied()
        .filter(|&s| !base.permits(s))
        .collect();
    let mut buf = Vec::new();
    for p in old.p_positions() {
        for &set in &added {
            for c in 1..=min_over(p.jars(), set) {
                apply_into(p.jars(), Move::new(set, c), &mut buf);
                if old.is_p(&buf) == Some(true) {
                    let q = Position::new(buf.clone());
                    check.not_applicable(
                        p.clone(),
                        format!("added move ({set},{c}) takes P-position {p} to P-position {q}"),
                    );
                    return Ok(check.finish());
                }
            }
        }
    }
    let new = cube(extra, Normal, bound)?.p_set();
    symmetric_difference(&mut check, &old.p_set(), &new, "the two games");
    Ok(check.finish())
}

/// (1,7,9) is not a three-jar Cookie Monster P-position: taking 7 from the
/// last two jars reaches the P-position (1,0,2).
pub fn verify_refutation_1_7_9() -> Result<VerificationReport> {
    let mut check = Check::new("refute_1_7_9", "cookie_monster(3)");
    let rules = preset("cookie_monster", 3)?;
    let mut solver = Solver::default();
    let start = Position::from([1, 7, 9]);
    check.expect(
        solver.outcome(&start, &rules, Normal)? == OutcomeClass::N,
        start.clone(),
        || "(1,7,9) is not N".into(),
    );
    let next = apply_move(&start, Move::of(&[2, 3], 7))?;
    check.expect(next == Position::from([1, 0, 2]), next.clone(), || {
        format!("({{2,3}},7) gave {next}")
    });
    check.expect(
        solver.outcome(&next, &rules, Normal)? == OutcomeClass::P,
        next.clone(),
        || format!("{next} is not P"),
    );
    // with one jar empty the game is Wythoff's
    let mut sorted = next.jars().to_vec();
    sorted.sort_unstable();
    check.expect(
        is_wythoff_p(&Position::new(sorted[1..].to_vec())),
        next.clone(),
        || "(1,2) is not a Wythoff P-position".into(),
    );
    Ok(check.finish())
}

/// Wythoff plus a Nim heap: (a,b,c) is P exactly when c is the Wythoff
/// Sprague-Grundy value of (a,b). Also checks the published list.
pub fn verify_sum_decomposition(bound: u32) -> Result<VerificationReport> {
    let mut check = Check::new(
        "sum_decomposition",
        format!("wythoff_plus_nim(3) bound={bound}"),
    );
    let table = cube(&preset("wythoff_plus_nim", 3)?, Normal, bound)?;
    let sg = GrundyTable::cube(&preset("wythoff", 2)?, bound, &Limits::default())?;
    each_point(3, bound, |p| {
        let g = sg.get(&p[..2]).expect("in box").value();
        let is_p = table.is_p(p) == Some(true);
        check.expect(is_p == (p[2] == g), Position::new(p.to_vec()), || {
            format!("{:?}: P={is_p} but grundy of the first two jars is {g}", p)
        });
    });
    let list = golden_tables()
        .into_iter()
        .find(|g| g.name == "wythoff_plus_nim")
        .expect("shipped list");
    let r = verify_golden_table(&list, bound.max(list.table.max))?;
    for p in r.counterexamples {
        check.fail(p, || "published list mismatch".into());
    }
    Ok(check.finish())
}

/// Positions of the Marienbad discussion.
pub const MARIENBAD_P_POSITIONS: &[&[u32]] = &[
    &[1, 3, 5, 7],
    &[1, 2, 3],
    &[1, 4, 5],
    &[2, 4, 6],
    &[2, 5, 7],
    &[3, 4, 7],
    &[3, 5, 6],
    &[1, 2, 4, 7],
    &[1, 2, 5, 6],
    &[1, 3, 4, 6],
];

/// Each Marienbad position is P under misère play and also under normal
/// play (they all contain a pile of two or more); (1,1) is where the two
/// conventions part.
pub fn verify_marienbad() -> Result<VerificationReport> {
    let mut check = Check::new("marienbad", "nim misere");
    let mut solver = Solver::default();
    for &jars in MARIENBAD_P_POSITIONS {
        let p = Position::new(jars.to_vec());
        let rules = preset("nim", p.arity())?;
        let mis = solver.outcome(&p, &rules, Misere)?;
        let nor = solver.outcome(&p, &rules, Normal)?;
        check.expect(mis == OutcomeClass::P, p.clone(), || {
            format!("{p} is {mis} under misere")
        });
        check.expect(nor == mis, p.clone(), || {
            format!("{p}: conventions disagree")
        });
    }
    let ones = Position::from([1, 1]);
    let nim2 = preset("nim", 2)?;
    check.expect(
        solver.outcome(&ones, &nim2, Misere)? == OutcomeClass::N
            && solver.outcome(&ones, &nim2, Normal)? == OutcomeClass::P,
        ones,
        || "(1,1) should be N under misere and P under normal play".into(),
    );
    Ok(check.finish())
}

/// All-but-k: equal jars are P, exactly two distinct counts are N.
pub fn verify_all_but_k(k: usize, bound: u32) -> Result<VerificationReport> {
    let mut check = Check::new("all_but_k", format!("k={k} bound={bound}"));
    let table = cube(&preset("all_but_k", k)?, Normal, bound)?;
    each_point(k, bound, |p| {
        let pos = Position::new(p.to_vec());
        if let Some(expected) = all_but_k_classify(&pos) {
            let got = table.class(p).expect("in box");
            check.expect(got == expected, pos.clone(), || {
                format!("{pos} is {got}, theorem says {expected}")
            });
        }
    });
    Ok(check.finish())
}

/// When every permissible set has a permissible complement, (n,...,n) is P.
pub fn verify_complement_closed(rules: &RuleSet, bound: u32) -> Result<VerificationReport> {
    let k = rules.jar_count();
    let mut check = Check::new(
        "complement_closed",
        format!("{} bound={bound}", describe(rules)),
    );
    if !is_complement_closed(rules) {
        check.not_applicable(
            Position::zeros(k),
            "rule set is not complement-closed".into(),
        );
        return Ok(check.finish());
    }
    let table = cube(rules, Normal, bound)?;
    for n in 0..=bound {
        let p = Position::new(vec![n; k]);
        check.expect(table.is_p(p.jars()) == Some(true), p.clone(), || {
            format!("{p} is not P")
        });
    }
    Ok(check.finish())
}

fn verify_closed_form(
    name: &str,
    rules: &RuleSet,
    bound: u32,
    predicate: fn(&Position) -> bool,
) -> Result<VerificationReport> {
    let mut check = Check::new(name, format!("{} bound={bound}", describe(rules)));
    let table = cube(rules, Normal, bound)?;
    each_point(rules.jar_count(), bound, |p| {
        let pos = Position::new(p.to_vec());
        let engine = table.is_p(p) == Some(true);
        check.expect(predicate(&pos) == engine, pos.clone(), || {
            format!("{pos}: closed form says P={}, engine P={engine}", !engine)
        });
    });
    Ok(check.finish())
}

/// Nim-sum zero matches the engine on `[0, bound]^k`.
pub fn verify_nim_closed_form(k: usize, bound: u32) -> Result<VerificationReport> {
    verify_closed_form("nim_closed_form", &preset("nim", k)?, bound, is_nim_p)
}

/// The Zeckendorf characterization matches the engine on `[0, bound]^2`.
pub fn verify_wythoff_closed_form(bound: u32) -> Result<VerificationReport> {
    verify_closed_form(
        "wythoff_closed_form",
        &preset("wythoff", 2)?,
        bound,
        is_wythoff_p,
    )
}

pub fn verify_odd_closed_form(k: usize, bound: u32) -> Result<VerificationReport> {
    verify_closed_form("odd_closed_form", &preset("odd", k)?, bound, odd_game_is_p)
}

/// Every positive integer up to `bound` lies in exactly one Wythoff
/// P-position, and the only P-positions made of two different Fibonacci
/// numbers are `(F(2m), F(2m+1))`.
pub fn verify_wythoff_structure(bound: u32) -> Result<VerificationReport> {
    let mut check = Check::new("wythoff_structure", format!("bound={bound}"));
    let limit = 2 * bound;
    let table = cube(&preset("wythoff", 2)?, Normal, limit)?;
    let pairs: Vec<(u32, u32)> = table
        .p_positions()
        .into_iter()
        .map(|p| (p.jars()[0], p.jars()[1]))
        .filter(|&(a, b)| a <= b)
        .collect();
    for n in 1..=bound {
        let hits = pairs.iter().filter(|&&(a, b)| a == n || b == n).count();
        check.expect(hits == 1, Position::from([n, 0]), || {
            format!("{n} appears in {hits} P-positions")
        });
    }
    let fibs: Vec<(u32, u64)> = (2..40)
        .map(|i| (i, fibonacci(i)))
        .take_while(|&(_, f)| f <= u64::from(limit))
        .collect();
    for &(i, x) in &fibs {
        for &(j, y) in fibs.iter().filter(|&&(j, _)| j > i) {
            let p = Position::from([x as u32, y as u32]);
            let expected = i % 2 == 0 && j == i + 1;
            check.expect(table.is_p(p.jars()) == Some(expected), p.clone(), || {
                format!("Fibonacci pair {p}: expected P={expected}")
            });
        }
    }
    Ok(check.finish())
}

/// Doubling every pile of a Nim P-position gives a P-position.
pub fn verify_doubling(k: usize, bound: u32) -> Result<VerificationReport> {
    let mut check = Check::new("doubling", format!("nim({k}) bound={bound}"));
    let rules = preset("nim", k)?;
    let small = cube(&rules, Normal, bound)?;
    let big = cube(&rules, Normal, 2 * bound)?;
    for p in small.p_positions() {
        let d = crate::closedform::double_position(&p)?;
        check.expect(big.is_p(d.jars()) == Some(true), d.clone(), || {
            format!("double of {p} is not P")
        });
    }
    Ok(check.finish())
}

/// Rule sets whose P-positions the structural theorems are checked on.
pub fn theorem_games() -> Result<Vec<RuleSet>> {
    [
        ("nim", 3),
        ("wythoff", 2),
        ("cookie_monster", 3),
        ("at_most_2", 3),
        ("consecutive_at_most_2", 3),
        ("consecutive_include_first", 3),
        ("consecutive", 3),
    ]
    .into_iter()
    .map(|(name, k)| preset(name, k))
    .collect()
}

/// Every theorem check with `max` as the main per-jar bound.
pub fn theorem_suite(max: u32) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for rules in theorem_games()? {
        out.push(verify_unique_completion(&rules, max)?);
        out.push(verify_double_bound(&rules, max)?);
        out.push(verify_same_set_lemma(&rules, max)?);
    }
    out.push(verify_nim_closed_form(3, max.max(7))?);
    out.push(verify_nim_closed_form(4, 7)?);
    out.push(verify_wythoff_closed_form(max.max(30))?);
    out.push(verify_odd_closed_form(3, max.max(7))?);
    out.push(verify_odd_closed_form(5, 4)?);
    out.push(verify_odd_equals_nim(3, max)?);
    out.push(verify_odd_equals_nim(5, 4)?);
    out.push(verify_added_moves_theorem(
        &preset("nim", 3)?,
        &preset("odd", 3)?,
        max,
    )?);
    out.push(verify_added_moves_theorem(
        &preset("nim", 2)?,
        &preset("wythoff", 2)?,
        max,
    )?);
    out.push(verify_sum_decomposition(max)?);
    out.push(verify_all_but_k(3, max)?);
    out.push(verify_all_but_k(4, 6)?);
    out.push(verify_complement_closed(&preset("all_but_k", 4)?, 6)?);
    out.push(verify_complement_closed(
        &RuleSet::new(3, [JarSet::singleton(1), JarSet::from_indices([2, 3])?])?,
        max,
    )?);
    out.push(verify_wythoff_structure(max.max(30))?);
    out.push(verify_doubling(3, max)?);
    Ok(out)
}

#[allow(dead_code)]
fn successors(p: &Position, rules: &RuleSet) -> Vec<Position> {
    let mut out = Vec::new();
    let mut buf = Vec::new();
    for_each_move(p.jars(), rules, |mv| {
        apply_into(p.jars(), mv, &mut buf);
        out.push(Position::new(buf.clone()));
        true
    });
    out
}

use std::collections::BTreeSet;

use crate::engine::{Limits, OutcomeTable};
use crate::error::{Error, Result};
use crate::game::Position;
use crate::preset::preset;
use crate::tablefile::TableFile;

use super::{Check, VerificationReport};

/// A reference list: one of those shipped with the crate, or any parsed
/// [`TableFile`].
#[derive(Debug, Clone)]
pub struct GoldenTable {
    pub name: String,
    pub table: TableFile,
}

macro_rules! golden {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../../golden/", $name, ".txt")))),*]
    };
}

static SOURCES: &[(&str, &str)] = golden![
    "wythoff_pairs",
    "cookie_monster_3",
    "wythoff_plus_nim",
    "at_most_2",
    "consecutive_at_most_2",
    "consecutive_include_first",
    "consecutive",
    "two_ones_nim",
    "two_ones_wythoff_plus_nim",
    "two_ones_odd",
    "two_ones_cookie_monster",
    "two_ones_at_most_2",
    "two_ones_consecutive_at_most_2",
    "two_ones_consecutive_include_first",
    "two_ones_consecutive",
];

pub fn golden_tables() -> Vec<GoldenTable> {
    SOURCES
        .iter()
        .map(|&(name, text)| GoldenTable {
            name: name.to_string(),
            table: TableFile::parse(text)
                .unwrap_or_else(|e| panic!("embedded table {name} is malformed: {e}")),
        })
        .collect()
}

/// Checks one list in both directions: every listed position is a
/// P-position, and every P-position within the list's stated bound (after
/// filtering and normalization) is listed.
///
/// Listed positions beyond the stated bound are checked individually and
/// flagged in the notes. The engine box is at least `max` per jar.
pub fn verify_golden_table(golden: &GoldenTable, max: u32) -> Result<VerificationReport> {
    let t = &golden.table;
    let rules = preset(&t.game, t.jars)?;
    let mut check = Check::new(
        &format!("golden:{}", golden.name),
        format!(
            "{} {} max={} {}",
            t.game, t.convention, t.max, t.normalization
        ),
    );
    let listed_max = t
        .positions()
        .flat_map(|p| p.jars())
        .copied()
        .max()
        .unwrap_or(0);
    let bound = max.max(t.max).max(listed_max);
    let table = OutcomeTable::cube(&rules, t.convention, bound, &Limits::default())?;

    let listed: BTreeSet<Position> = t.positions().cloned().collect();
    for p in t.positions() {
        check.expect(
            t.normalization.is_normal(p) && t.filter.accepts(p),
            p.clone(),
            || format!("listed {p} is not in the list's normal form"),
        );
        check.expect(table.is_p(p.jars()) == Some(true), p.clone(), || {
            format!("listed {p} is not a P-position")
        });
        if p.jars().iter().any(|&c| c > t.max) {
            check.note(format!(
                "listed {p} lies beyond the stated bound of {}; checked individually",
                t.max
            ));
        }
    }
    let computed: BTreeSet<Position> = table
        .p_positions()
        .into_iter()
        .filter(|p| p.jars().iter().all(|&c| c <= t.max) && t.filter.accepts(p))
        .map(|p| t.normalization.apply(&p))
        .collect();
    for p in computed.difference(&listed) {
        check.fail(p.clone(), || {
            format!("P-position {p} is missing from the list")
        });
    }
    check.note(format!(
        "{} listed, {} computed",
        listed.len(),
        computed.len()
    ));
    Ok(check.finish())
}

/// All shipped lists folded into one report.
pub fn verify_golden_tables(max_per_jar: u32) -> Result<VerificationReport> {
    if max_per_jar < 9 {
        return Err(Error::Input(format!(
            "golden tables need a bound of at least 9, got {max_per_jar}"
        )));
    }
    let mut check = Check::new("golden_tables", format!("max={max_per_jar}"));
    for g in golden_tables() {
        let r = verify_golden_table(&g, max_per_jar)?;
        for n in r.notes {
            check.note(format!("{}: {n}", g.name));
        }
        for p in r.counterexamples {
            check.fail(p, || format!("{} mismatch", g.name));
        }
    }
    Ok(check.finish())
}

//! Named games.

use crate::error::{Error, Result};
use crate::game::{JarSet, PlayConvention, Position, RuleSet, MAX_JARS};

/// Which jar counts a preset accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JarCount {
    Fixed(usize),
    AtLeast(usize),
}

impl JarCount {
    fn accepts(self, k: usize) -> bool {
        match self {
            JarCount::Fixed(n) => k == n,
            JarCount::AtLeast(n) => k >= n && k <= MAX_JARS,
        }
    }
}

/// A named rule family.
#[derive(Debug, Clone, Copy)]
pub struct GamePreset {
    pub name: &'static str,
    pub summary: &'static str,
    pub jars: JarCount,
    /// Jar count used when the caller has none in mind.
    pub default_jars: usize,
    pub default_position: Option<&'static [u32]>,
    pub default_convention: PlayConvention,
    build: fn(usize) -> Vec<JarSet>,
}

impl GamePreset {
    pub fn rules(&self, k: usize) -> Result<RuleSet> {
        if !self.jars.accepts(k) {
            let reason = match self.jars {
                JarCount::Fixed(n) => format!("needs exactly {n} jars"),
                JarCount::AtLeast(n) => format!("needs between {n} and {MAX_JARS} jars"),
            };
            return Err(Error::IncompatibleJarCount {
                name: self.name.into(),
                jars: k,
                reason,
            });
        }
        RuleSet::new(k, (self.build)(k))
    }

    pub fn default_rules(&self) -> RuleSet {
        self.rules(self.default_jars)
            .expect("default jar count is always compatible")
    }

    pub fn default_position(&self) -> Option<Position> {
        self.default_position.map(|p| Position::new(p.to_vec()))
    }
}

fn all_subsets(k: usize) -> impl Iterator<Item = JarSet> {
    (1u32..(1u32 << k)).filter_map(JarSet::from_mask)
}

fn singletons(k: usize) -> Vec<JarSet> {
    (1..=k).map(JarSet::singleton).collect()
}

fn with_extra(k: usize, extra: &[&[usize]]) -> Vec<JarSet> {
    let mut v = singletons(k);
    v.extend(
        extra
            .iter()
            .map(|s| JarSet::from_indices(s.iter().copied()).expect("static preset set")),
    );
    v
}

static PRESETS: &[GamePreset] = &[
    GamePreset {
        name: "nim",
        summary: "take any amount from a single jar",
        jars: JarCount::AtLeast(1),
        default_jars: 3,
        default_position: None,
        default_convention: PlayConvention::Normal,
        build: singletons,
    },
    GamePreset {
        name: "marienbad",
        summary: "four-row Nim from (1,3,5,7) where taking the last match loses",
        jars: JarCount::Fixed(4),
        default_jars: 4,
        default_position: Some(&[1, 3, 5, 7]),
        default_convention: PlayConvention::Misere,
        build: singletons,
    },
    GamePreset {
        name: "wythoff",
        summary: "two jars; take from one jar or equally from both",
        jars: JarCount::Fixed(2),
        default_jars: 2,
        default_position: None,
        default_convention: PlayConvention::Normal,
        build: |k| all_subsets(k).collect(),
    },
    GamePreset {
        name: "cookie_monster",
        summary: "take equally from any non-empty set of jars",
        jars: JarCount::AtLeast(1),
        default_jars: 3,
        default_position: None,
        default_convention: PlayConvention::Normal,
        build: |k| all_subsets(k).collect(),
    },
    GamePreset {
        name: "odd",
        summary: "take equally from an odd number of jars",
        jars: JarCount::AtLeast(1),
        default_jars: 3,
        default_position: None,
        default_convention: PlayConvention::Normal,
        build: |k| all_subsets(k).filter(|s| s.len() % 2 == 1).collect(),
    },
    GamePreset {
        name: "all_but_k",
        summary: "take equally from any set of jars except all of them",
        jars: JarCount::AtLeast(2),
        default_jars: 3,
        default_position: None,
        default_convention: PlayConvention::Normal,
        build: |k| all_subsets(k).filter(|&s| s != JarSet::full(k)).collect(),
    },
    GamePreset {
        name: "at_most_2",
        summary: "Nim plus equal removal from any two jars",
        jars: JarCount::Fixed(3),
        default_jars: 3,
        default_position: None,
        default_convention: PlayConvention::Normal,
        build: |k| with_extra(k, &[&[1, 2], &[1, 3], &[2, 3]]),
    },
    GamePreset {
        name: "consecutive_at_most_2",
        summary: "Nim plus equal removal from jars {1,2} or {2,3}",
        jars: JarCount::Fixed(3),
        default_jars: 3,
        default_position: None,
        default_convention: PlayConvention::Normal,
        build: |k| with_extra(k, &[&[1, 2], &[2, 3]]),
    },
    GamePreset {
        name: "consecutive_include_first",
        summary: "Nim plus equal removal from {1,2} or {1,2,3}",
        jars: JarCount::Fixed(3),
        default_jars: 3,
        default_position: None,
        default_convention: PlayConvention::Normal,
        build: |k| with_extra(k, &[&[1, 2], &[1, 2, 3]]),
    },
    GamePreset {
        name: "consecutive",
        summary: "Nim plus equal removal from {1,2}, {2,3} or {1,2,3}",
        jars: JarCount::Fixed(3),
        default_jars: 3,
        default_position: None,
        default_convention: PlayConvention::Normal,
        build: |k| with_extra(k, &[&[1, 2], &[2, 3], &[1, 2, 3]]),
    },
    GamePreset {
        name: "wythoff_plus_nim",
        summary: "Wythoff on jars 1 and 2 alongside a Nim heap in jar 3",
        jars: JarCount::Fixed(3),
        default_jars: 3,
        default_position: None,
        default_convention: PlayConvention::Normal,
        build: |k| with_extra(k, &[&[1, 2]]),
    },
];

/// All registered presets, in a stable order.
pub fn presets() -> &'static [GamePreset] {
    PRESETS
}

/// Looks a preset up by name. A leading `preset:` is ignored.
pub fn find_preset(name: &str) -> Result<&'static GamePreset> {
    let name = name.strip_prefix("preset:").unwrap_or(name);
    PRESETS
        .iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::UnknownPreset(name.to_string()))
}

/// Rule set of the named preset on `k` jars.
pub fn preset(name: &str, k: usize) -> Result<RuleSet> {
    find_preset(name)?.rules(k)
}

/// Resolves a game identifier as accepted by the CLI and the service.
///
/// Accepted forms: `name`, `preset:name`, and either with a `:k` suffix
/// (`nim:4`, `preset:cookie_monster:5`). A suffix wins over `jars`; with
/// neither, the preset's default jar count is used.
pub fn resolve_game(id: &str, jars: Option<usize>) -> Result<RuleSet> {
    let body = id.strip_prefix("preset:").unwrap_or(id);
    let (name, k) = match body.rsplit_once(':') {
        Some((name, k)) => {
            let k = k
                .parse::<usize>()
                .map_err(|_| Error::Input(format!("bad jar count in game `{id}`")))?;
            (name, Some(k))
        }
        None => (body, None),
    };
    let p = find_preset(name)?;
    p.rules(k.or(jars).unwrap_or(p.default_jars))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sets(r: &RuleSet) -> Vec<Vec<usize>> {
        r.sets().iter().map(|s| s.indices().collect()).collect()
    }

    #[test]
    fn two_jar_cookie_monster_is_wythoff() {
        assert_eq!(
            preset("cookie_monster", 2).unwrap(),
            preset("wythoff", 2).unwrap()
        );
    }

    #[test]
    fn at_most_two_pairs() {
        let r = preset("at_most_2", 3).unwrap();
        let pairs: Vec<_> = sets(&r).into_iter().filter(|s| s.len() == 2).collect();
        assert_eq!(pairs, vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(r.sets().len(), 6);
    }

    #[test]
    fn odd_three_jars() {
        let r = preset("odd", 3).unwrap();
        assert!(r.sets().iter().all(|s| s.len() == 1 || s.len() == 3));
        assert_eq!(r.sets().len(), 4);
    }

    #[test]
    fn subset_counts() {
        for k in 1..=6 {
            assert_eq!(
                preset("cookie_monster", k).unwrap().sets().len(),
                (1 << k) - 1
            );
            if k >= 2 {
                assert_eq!(preset("all_but_k", k).unwrap().sets().len(), (1 << k) - 2);
            }
        }
    }

    #[test]
    fn three_jar_named_games() {
        assert_eq!(
            sets(&preset("consecutive_at_most_2", 3).unwrap()),
            vec![vec![1], vec![2], vec![1, 2], vec![3], vec![2, 3]]
        );
        assert_eq!(
            sets(&preset("consecutive_include_first", 3).unwrap()),
            vec![vec![1], vec![2], vec![1, 2], vec![3], vec![1, 2, 3]]
        );
        assert_eq!(
            sets(&preset("consecutive", 3).unwrap()),
            vec![
                vec![1],
                vec![2],
                vec![1, 2],
                vec![3],
                vec![2, 3],
                vec![1, 2, 3]
            ]
        );
    }

    #[test]
    fn every_preset_is_cm_nim_and_names_are_unique() {
        let mut names: Vec<_> = presets().iter().map(|p| p.name).collect();
        for p in presets() {
            assert!(p.default_rules().is_cm_nim(), "{}", p.name);
        }
        names.sort();
        names.dedup();
        assert_eq!(names.len(), presets().len());
    }

    #[test]
    fn errors() {
        assert!(matches!(preset("chess", 3), Err(Error::UnknownPreset(_))));
        assert!(matches!(
            preset("wythoff", 3),
            Err(Error::IncompatibleJarCount { .. })
        ));
        assert!(matches!(
            preset("all_but_k", 1),
            Err(Error::IncompatibleJarCount { .. })
        ));
    }

    #[test]
    fn game_identifiers() {
        assert_eq!(
            resolve_game("preset:wythoff", None).unwrap(),
            preset("wythoff", 2).unwrap()
        );
        assert_eq!(
            resolve_game("nim:4", Some(2)).unwrap(),
            preset("nim", 4).unwrap()
        );
        assert_eq!(
            resolve_game("nim", Some(2)).unwrap(),
            preset("nim", 2).unwrap()
        );
        assert_eq!(resolve_game("odd", None).unwrap().jar_count(), 3);
        assert!(resolve_game("nim:x", None).is_err());
    }
}

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cmnim::closedform::{km_to_miles, miles_to_km};
use cmnim::cmnumber::{cm_decomposition_with, cm_number_with, CmConfig, CmInstance};
use cmnim::engine::{self, Limits, Solver};
use cmnim::tablefile::{Filter, Normalization, TableFile};
use cmnim::verifier::{run_suite, verify_golden_table, GoldenTable, Suite};
use cmnim::{apply_move, resolve_game, Error, OutcomeClass, PlayConvention, Position, RuleSet};

/// Solver and verifier for CM-Nim games: each move removes the same number
/// of cookies from every jar of a permissible set.
#[derive(Parser)]
#[command(name = "cmnim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GameArgs {
    /// Preset name, optionally with a jar count: `cookie_monster`, `nim:4`.
    #[arg(long, short, conflicts_with = "rules")]
    game: Option<String>,
    /// JSON rule file: {"jars": 3, "permissible_sets": [[1],[2,3]]}.
    #[arg(long)]
    rules: Option<PathBuf>,
    /// Jar count for presets that accept several.
    #[arg(long)]
    jars: Option<usize>,
    /// Largest table the engine may allocate.
    #[arg(long, default_value_t = Limits::default().max_entries)]
    max_entries: usize,
}

impl GameArgs {
    fn limits(&self) -> Limits {
        Limits {
            max_entries: self.max_entries,
        }
    }

    /// Rules and a name for table headers; `arity` is the jar count implied
    /// by other arguments.
    fn resolve(&self, arity: Option<usize>) -> Result<(RuleSet, String), Failure> {
        match (&self.game, &self.rules) {
            (Some(g), None) => {
                let rules = resolve_game(g, self.jars.or(arity))?;
                let name = g
                    .trim_start_matches("preset:")
                    .split(':')
                    .next()
                    .unwrap_or(g);
                Ok((rules, name.to_string()))
            }
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                Ok((RuleSet::from_json(&text)?, "custom".to_string()))
            }
            _ => Err(Failure::Usage("give --game or --rules".into())),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Normalize {
    Raw,
    Sorted,
    FirstLeSecond,
    FirstLeLast,
}

impl From<Normalize> for Normalization {
    fn from(n: Normalize) -> Self {
        match n {
            Normalize::Raw => Normalization::Raw,
            Normalize::Sorted => Normalization::Sorted,
            Normalize::FirstLeSecond => Normalization::FirstLeSecond,
            Normalize::FirstLeLast => Normalization::FirstLeLast,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify a position as P or N and show a winning move.
    Solve {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, short)]
        position: Position,
        #[arg(long)]
        misere: bool,
    },
    /// Sprague-Grundy value of a position (normal play).
    Grundy {
        #[command(flatten)]
        game: GameArgs,
        #[arg(long, short)]
        position: Position,
    },
    /// P-positions or Sprague-Grundy values of every position up to a bound.
    Table {
        #[command(flatten)]
        game: GameArgs,
        /// Largest count per jar.
        #[arg(long)]
        max: u32,
        /// List P-positions only instead of every nimber.
        #[arg(long)]
        p_only: bool,
        /// Misère play; needs --p-only.
        #[arg(long, requires = "p_only")]
        misere: bool,
        /// Keep one representative per symmetry class (with --p-only).
        #[arg(long, value_enum, default_value = "raw", requires = "p_only")]
        normalize: Normalize,
        /// Skip positions with an empty jar.
        #[arg(long)]
        nonempty: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// The unique count that makes a P-position with the given jars.
    Complete {
        #[command(flatten)]
        game: GameArgs,
        /// Counts of the other jars, in order.
        #[arg(long)]
        prefix: Position,
        /// 1-based jar that receives the completing count.
        #[arg(long)]
        index: usize,
    },
    /// Fewest moves that empty every jar when any set of jars may be used.
    CmNumber {
        /// Jar counts, e.g. 1,2,4.
        jars: Position,
        /// Also print an optimal sequence of moves.
        #[arg(long)]
        witness: bool,
        /// Try amounts equal to counts or their differences first.
        #[arg(long)]
        restricted: bool,
    },
    /// Miles to kilometers (or back) through Zeckendorf representations.
    Convert {
        #[arg(long, conflicts_with = "km", required_unless_present = "km")]
        miles: Option<u64>,
        #[arg(long)]
        km: Option<u64>,
    },
    /// Check the shipped reference lists and the structural theorems.
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
        /// Per-jar bound for the exhaustive checks (at least 9).
        #[arg(long, default_value_t = 9)]
        max: u32,
        /// One JSON report per line instead of a table.
        #[arg(long)]
        json: bool,
        /// Check this position list (as printed by `table --p-only`)
        /// instead of a suite.
        #[arg(long, conflicts_with = "suite")]
        table: Option<PathBuf>,
    },
    /// Run the HTTP game service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Directory with the web UI bundle, served at /.
        #[arg(long = "static")]
        static_dir: Option<PathBuf>,
        /// Session log replayed on start and appended to.
        #[arg(long)]
        snapshot: Option<PathBuf>,
        #[arg(long, default_value_t = Limits::default().max_entries)]
        max_entries: usize,
    },
}

enum Failure {
    Usage(String),
    Engine(Error),
    Verification(String),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

impl Failure {
    fn exit(self) -> ExitCode {
        let (code, msg) = match self {
            Failure::Usage(m) => (2, m),
            Failure::Verification(m) => (1, m),
            Failure::Io(e) => (2, e.to_string()),
            Failure::Engine(e) if e.is_resource_limit() => (3, e.to_string()),
            Failure::Engine(e) if e.is_invariant() => (4, e.to_string()),
            Failure::Engine(e) => (2, e.to_string()),
        };
        if !msg.is_empty() {
            eprintln!("cmnim: {msg}");
        }
        ExitCode::from(code)
    }
}

fn convention(misere: bool) -> PlayConvention {
    if misere {
        PlayConvention::Misere
    } else {
        PlayConvention::Normal
    }
}

fn csv_line(p: &Position) -> String {
    p.jars()
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn run(cli: Cli) -> Result<String, Failure> {
    let mut out = String::new();
    match cli.command {
        Command::Solve {
            game,
            position,
            misere,
        } => {
            let (rules, _) = game.resolve(Some(position.arity()))?;
            let conv = convention(misere);
            let mut solver = Solver::new(game.limits());
            let class = solver.outcome(&position, &rules, conv)?;
            writeln!(out, "{class}").unwrap();
            if class == OutcomeClass::N {
                if let Some(mv) = solver.best_move(&position, &rules, conv)? {
                    writeln!(out, "winning move: {mv} -> {}", apply_move(&position, mv)?).unwrap();
                }
            }
        }
        Command::Grundy { game, position } => {
            let (rules, _) = game.resolve(Some(position.arity()))?;
            let g = Solver::new(game.limits()).grundy(&position, &rules)?;
            writeln!(out, "{g}").unwrap();
        }
        Command::Table {
            game,
            max,
            p_only,
            misere,
            normalize,
            nonempty,
            format,
        } => {
            let (rules, name) = game.resolve(None)?;
            let conv = convention(misere);
            let filter = if nonempty {
                Filter::NonEmpty
            } else {
                Filter::All
            };
            let normalization = Normalization::from(normalize);
            let entries = if p_only {
                let table = engine::OutcomeTable::cube(&rules, conv, max, &game.limits())?;
                let mut ps: Vec<Position> = table
                    .p_positions()
                    .into_iter()
                    .filter(|p| filter.accepts(p))
                    .map(|p| normalization.apply(&p))
                    .collect();
                ps.sort();
                ps.dedup();
                ps.into_iter().map(|p| (p, None)).collect()
            } else {
                engine::GrundyTable::cube(&rules, max, &game.limits())?
                    .to_map()
                    .into_iter()
                    .filter(|(p, _)| filter.accepts(p))
                    .map(|(p, g)| (p, Some(g)))
                    .collect()
            };
            let file = TableFile {
                comments: vec![if p_only {
                    "P-positions".into()
                } else {
                    "Sprague-Grundy values".into()
                }],
                game: name,
                jars: rules.jar_count(),
                convention: conv,
                normalization,
                filter,
                max,
                entries,
            };
            match format {
                Format::Text => write!(out, "{file}").unwrap(),
                Format::Csv => {
                    let mut head: Vec<String> =
                        (1..=rules.jar_count()).map(|j| format!("jar{j}")).collect();
                    if !p_only {
                        head.push("grundy".into());
                    }
                    writeln!(out, "{}", head.join(",")).unwrap();
                    for (p, g) in &file.entries {
                        match g {
                            Some(g) => writeln!(out, "{},{g}", csv_line(p)).unwrap(),
                            None => writeln!(out, "{}", csv_line(p)).unwrap(),
                        }
                    }
                }
            }
        }
        Command::Complete {
            game,
            prefix,
            index,
        } => {
            let k = prefix.arity() + 1;
            if index == 0 || index > k {
                return Err(Failure::Usage(format!("--index must be between 1 and {k}")));
            }
            let (rules, _) = game.resolve(Some(k))?;
            let x = engine::find_completion_with(prefix.jars(), index, &rules, &game.limits())?;
            writeln!(out, "{x}").unwrap();
        }
        Command::CmNumber {
            jars,
            witness,
            restricted,
        } => {
            let inst = CmInstance::new(jars.into_inner())?;
            let cfg = CmConfig {
                restricted_amounts: restricted,
                ..CmConfig::default()
            };
            writeln!(out, "{}", cm_number_with(&inst, &cfg)?).unwrap();
            if witness {
                let mut pos = Position::new(inst.jars().to_vec());
                writeln!(out, "jars sorted: {pos}").unwrap();
                for mv in cm_decomposition_with(&inst, &cfg)? {
                    pos = apply_move(&pos, mv)?;
                    writeln!(out, "take {} from jars {} -> {pos}", mv.amount, mv.subset).unwrap();
                }
            }
        }
        Command::Convert { miles, km } => {
            let n = match (miles, km) {
                (Some(m), _) => miles_to_km(m),
                (None, Some(k)) => km_to_miles(k),
                (None, None) => unreachable!("clap requires one of them"),
            };
            writeln!(out, "{n}").unwrap();
        }
        Command::Verify {
            suite,
            max,
            json,
            table,
        } => {
            let reports = match table {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                    let golden = GoldenTable {
                        name: path.display().to_string(),
                        table: TableFile::parse(&text)?,
                    };
                    vec![verify_golden_table(&golden, max)?]
                }
                None if max < 9 => {
                    return Err(Failure::Usage(format!(
                        "--max must be at least 9, got {max}"
                    )))
                }
                None => run_suite(suite, max)?,
            };
            for r in &reports {
                if json {
                    writeln!(
                        out,
                        "{}",
                        serde_json::to_string(r).expect("reports serialize")
                    )
                    .unwrap();
                } else {
                    writeln!(out, "{r}").unwrap();
                }
            }
            let failed = reports.iter().filter(|r| !r.passed()).count();
            if !json {
                writeln!(out, "{} checks, {failed} failed", reports.len()).unwrap();
            }
            if failed > 0 {
                print!("{out}");
                return Err(Failure::Verification(format!("{failed} checks failed")));
            }
        }
        Command::Serve {
            port,
            host,
            static_dir,
            snapshot,
            max_entries,
        } => {
            let config = cmnim_service::ServiceConfig {
                limits: Limits { max_entries },
                snapshot,
                static_dir,
            };
            let rt = tokio::runtime::Runtime::new().map_err(Failure::Io)?;
            rt.block_on(async {
                let listener = tokio::net::TcpListener::bind((host.as_str(), port)).await?;
                eprintln!("cmnim: listening on http://{}", listener.local_addr()?);
                cmnim_service::serve(listener, config).await
            })
            .map_err(Failure::Io)?;
        }
    }
    Ok(out)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => f.exit(),
    }
}

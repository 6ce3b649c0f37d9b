//! Command-line front end for the free-group toolkit.
//!
//! One binary, one subcommand per operation. Words are typed as letters
//! `a..z` with capitals for inverses and optional `^k` exponents (`a^-2`
//! means `AA`). Boolean subcommands exit 0 for "yes" and 1 for "no";
//! usage or parse problems exit 2; resource caps exit 3. `--json` switches
//! every result line to a JSON object; JSON output carries no wall-clock
//! fields, so it is byte-stable across runs for a fixed seed.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use fgkit_core::blockers::{orbit_blocker, orbit_blocker_slender, BlockerSpec};
use fgkit_core::graph::build_graph;
use fgkit_core::hybrid::{bench_average_case, decide, precompute, Mode, Route, Strategy};
use fgkit_core::oracle::{orbit_ball_with_cap, refute_pb, verify_orbit_blocking, DEFAULT_BALL_CAP};
use fgkit_core::pb2::is_pb_f2_traced;
use fgkit_core::whitehead::{is_primitive, minimize, same_orbit};
use fgkit_core::word::MAX_TEXT_RANK;
use fgkit_core::{CyclicWord, EndoMap, Error, Word};

/// Seed used when neither `--seed` nor `FGKIT_SEED` is given.
pub const DEFAULT_SEED: u64 = 42;

#[derive(Parser)]
#[command(
    name = "fgkit",
    version,
    about = "Free-group word toolkit: reduction, Whitehead graphs and minimization, \
             primitivity-blocking words, orbit blockers, and a fixed-target orbit decider",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Ambient free-group rank (number of generators)
    #[arg(long, global = true, default_value_t = 2)]
    rank: u16,
    /// Emit one JSON object per result line
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Freely reduce a word and print it
    Reduce { word: String },
    /// Print the canonical rotation of a word's cyclic reduction
    Cyclic { word: String },
    /// Emit the Whitehead graph in DOT format (wrap-around edge dashed)
    Graph { word: String },
    /// Minimize cyclic length over the automorphism orbit
    Minimize { word: String },
    /// Test whether a word is primitive (part of some basis)
    Primitive { word: String },
    /// Test whether two words lie in the same automorphism orbit
    Orbit { u: String, v: String },
    /// Test whether a rank-2 word blocks primitivity
    Pb2 {
        word: String,
        /// Print one line per step of the decision
        #[arg(long)]
        trace: bool,
    },
    /// Build an orbit blocker for a target word (JSON result)
    Blocker {
        word: String,
        /// Use the shorter slender-decomposition bound (rank >= 3)
        #[arg(long)]
        slender: bool,
    },
    /// Decide fixed-target orbit membership with fast rejection tracks
    Decide {
        target: String,
        #[arg(required = true)]
        queries: Vec<String>,
        #[arg(long, value_enum, default_value_t)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t)]
        strategy: StrategyArg,
    },
    /// Measure average letters examined and wall time per query (CSV)
    Bench {
        /// Fixed target word
        #[arg(long)]
        target: String,
        /// Query lengths, comma separated
        #[arg(long, value_delimiter = ',', default_value = "1024,4096,16384,65536")]
        lengths: Vec<usize>,
        /// Samples per length
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// RNG seed (default: FGKIT_SEED env var, then 42)
        #[arg(long)]
        seed: Option<u64>,
        /// Write CSV here instead of stdout
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        mode: ModeArg,
    },
    /// Exhaustive checks against bounded orbit enumeration
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Apply an endomorphism given as semicolon-separated generator images
    Apply { map: String, word: String },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Enumerate all orbit members up to a cyclic length and print the count
    Ball {
        word: String,
        /// Maximum cyclic length kept
        #[arg(long)]
        radius: usize,
        /// Abort (exit 3) past this many members
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Search bounded-length primitives for one containing the word
    RefutePb {
        word: String,
        /// Maximum primitive length searched
        #[arg(long)]
        max_len: usize,
    },
    /// Check that no bounded-length orbit member contains the blocker
    VerifyBlocker {
        word: String,
        blocker: String,
        /// Maximum cyclic length enumerated
        #[arg(long)]
        radius: usize,
    },
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum ModeArg {
    /// Plain orbit blocker
    #[default]
    Blocking,
    /// Slender-decomposition blocker (rank >= 3)
    Slender,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum StrategyArg {
    /// Both rejection tracks, then the full algorithm
    #[default]
    Race,
    /// Minimization and orbit lookup only
    Full,
    /// Blocker substring track only
    Scan,
    /// Blocking-word counting track only
    Count,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Blocking => Mode::Blocking,
            ModeArg::Slender => Mode::Slender,
        }
    }
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::Race => Strategy::Race,
            StrategyArg::Full => Strategy::FullOnly,
            StrategyArg::Scan => Strategy::ScannerOnly,
            StrategyArg::Count => Strategy::CountingOnly,
        }
    }
}

enum Failure {
    Core(Error),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::Io(e)
    }
}

fn exit_code(f: &Failure) -> i32 {
    match f {
        Failure::Core(Error::CapExceeded { .. }) => 3,
        _ => 2,
    }
}

/// Parses and runs one invocation, writing results to `out` (diagnostics go
/// to stderr). Returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    eprint!("{e}");
                    2
                }
            };
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(f) => {
            match &f {
                Failure::Core(e) => eprintln!("error: {e}"),
                Failure::Io(e) => eprintln!("error: {e}"),
            }
            exit_code(&f)
        }
    }
}

fn parse_word(s: &str, rank: u16) -> Result<Word, Failure> {
    let w = Word::parse(s)?;
    if w.max_generator() > rank {
        return Err(Error::RankExceeded { generator: w.max_generator(), rank }.into());
    }
    Ok(w)
}

fn bool_line(
    out: &mut dyn Write,
    json: bool,
    obj: serde_json::Value,
    value: bool,
) -> Result<i32, Failure> {
    if json {
        writeln!(out, "{obj}")?;
    } else {
        writeln!(out, "{value}")?;
    }
    Ok(if value { 0 } else { 1 })
}

fn route_name(r: Route) -> &'static str {
    match r {
        Route::ScannerReject => "scanner-reject",
        Route::CountingReject => "counting-reject",
        Route::FullAlgorithm => "full",
    }
}

fn blocker_json(spec: &BlockerSpec) -> serde_json::Value {
    json!({
        "rank": spec.rank(),
        "bound": spec.bound(),
        "sequence": spec.sequence().iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        "product": spec.product().to_string(),
        "length": spec.product().len(),
    })
}

fn seed_from_env() -> Result<u64, Failure> {
    match std::env::var("FGKIT_SEED") {
        Ok(s) => s
            .parse()
            .map_err(|_| Error::Invalid(format!("FGKIT_SEED is not an integer: {s:?}")).into()),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let rank = cli.rank;
    if !(2..=MAX_TEXT_RANK).contains(&rank) {
        return Err(Error::Invalid(format!("rank must be in 2..={MAX_TEXT_RANK}, got {rank}")).into());
    }
    let json = cli.json;
    match cli.cmd {
        Cmd::Reduce { word } => {
            let w = parse_word(&word, rank)?;
            if json {
                writeln!(out, "{}", json!({"word": w.to_string(), "length": w.len()}))?;
            } else {
                writeln!(out, "{w}")?;
            }
            Ok(0)
        }
        Cmd::Cyclic { word } => {
            let w = parse_word(&word, rank)?;
            let (core, conj) = w.cyclic_reduce();
            let canon = CyclicWord::from_word(&core);
            if json {
                writeln!(
                    out,
                    "{}",
                    json!({
                        "core": canon.to_string(),
                        "conjugator": conj.to_string(),
                        "length": canon.len(),
                    })
                )?;
            } else {
                writeln!(out, "{canon}")?;
            }
            Ok(0)
        }
        Cmd::Graph { word } => {
            let w = parse_word(&word, rank)?;
            let g = build_graph(&w, rank, true)?;
            let edges = g.edges();
            if json {
                let vertices: Vec<String> = (0..2 * rank)
                    .map(|c| fgkit_core::Letter::from_code(c).to_char().to_string())
                    .collect();
                let list: Vec<serde_json::Value> = edges
                    .iter()
                    .enumerate()
                    .map(|(i, (u, v))| {
                        json!({
                            "from": u.to_char().to_string(),
                            "to": v.to_char().to_string(),
                            "external": i + 1 == edges.len(),
                        })
                    })
                    .collect();
                writeln!(out, "{}", json!({"rank": rank, "vertices": vertices, "edges": list}))?;
            } else {
                writeln!(out, "graph whitehead {{")?;
                for c in 0..2 * rank {
                    writeln!(out, "  \"{}\";", fgkit_core::Letter::from_code(c).to_char())?;
                }
                for (i, (u, v)) in edges.iter().enumerate() {
                    let style = if i + 1 == edges.len() { " [style=dashed]" } else { "" };
                    writeln!(out, "  \"{}\" -- \"{}\"{};", u.to_char(), v.to_char(), style)?;
                }
                writeln!(out, "}}")?;
            }
            Ok(0)
        }
        Cmd::Minimize { word } => {
            let w = parse_word(&word, rank)?;
            let res = minimize(&w, rank)?;
            if json {
                let applied: Vec<String> =
                    res.applied.iter().map(|t| t.to_endo().to_string()).collect();
                writeln!(
                    out,
                    "{}",
                    json!({
                        "minimal": res.minimal.to_string(),
                        "length": res.minimal.len(),
                        "steps": res.steps,
                        "applied": applied,
                    })
                )?;
            } else {
                writeln!(out, "{}", res.minimal)?;
            }
            Ok(0)
        }
        Cmd::Primitive { word } => {
            let w = parse_word(&word, rank)?;
            let ans = is_primitive(&w, rank)?;
            bool_line(out, json, json!({"word": w.to_string(), "primitive": ans}), ans)
        }
        Cmd::Orbit { u, v } => {
            let wu = parse_word(&u, rank)?;
            let wv = parse_word(&v, rank)?;
            let ans = same_orbit(&wu, &wv, rank)?;
            bool_line(
                out,
                json,
                json!({"u": wu.to_string(), "v": wv.to_string(), "same_orbit": ans}),
                ans,
            )
        }
        Cmd::Pb2 { word, trace } => {
            let w = parse_word(&word, rank.max(2))?;
            let (ans, steps) = is_pb_f2_traced(&w)?;
            if json {
                let mut obj = json!({"word": w.to_string(), "blocking": ans});
                if trace {
                    obj["trace"] = json!(steps);
                }
                writeln!(out, "{obj}")?;
            } else {
                if trace {
                    for line in &steps {
                        writeln!(out, "{line}")?;
                    }
                }
                writeln!(out, "{ans}")?;
            }
            Ok(if ans { 0 } else { 1 })
        }
        Cmd::Blocker { word, slender } => {
            let w = parse_word(&word, rank)?;
            let spec =
                if slender { orbit_blocker_slender(&w, rank)? } else { orbit_blocker(&w, rank)? };
            writeln!(out, "{}", blocker_json(&spec))?;
            Ok(0)
        }
        Cmd::Decide { target, queries, mode, strategy } => {
            let tw = parse_word(&target, rank)?;
            let ft = precompute(&tw, rank, mode.into())?;
            let single = queries.len() == 1;
            let mut last = 0;
            for q in &queries {
                let v = parse_word(q, rank)?;
                let d = decide(&ft, &v, strategy.into());
                if json {
                    writeln!(
                        out,
                        "{}",
                        json!({
                            "word": v.to_string(),
                            "answer": d.answer,
                            "route": route_name(d.route),
                            "letters": d.letters_examined,
                        })
                    )?;
                } else {
                    writeln!(
                        out,
                        "{} {} {} {}",
                        d.answer,
                        route_name(d.route),
                        d.letters_examined,
                        d.elapsed.as_nanos()
                    )?;
                }
                last = if d.answer { 0 } else { 1 };
            }
            Ok(if single { last } else { 0 })
        }
        Cmd::Bench { target, lengths, samples, seed, csv, mode } => {
            let tw = parse_word(&target, rank)?;
            if lengths.is_empty() || samples == 0 {
                return Err(Error::Invalid("need at least one length and one sample".into()).into());
            }
            let seed = match seed {
                Some(s) => s,
                None => seed_from_env()?,
            };
            let ft = precompute(&tw, rank, mode.into())?;
            let rows = bench_average_case(&ft, &lengths, samples, seed);
            if let Some(path) = csv {
                let mut buf = Vec::new();
                write_csv(&mut buf, &rows)?;
                fs::write(path, buf)?;
            } else if json {
                for r in &rows {
                    writeln!(
                        out,
                        "{}",
                        json!({
                            "n": r.n,
                            "samples": r.samples,
                            "mean_letters": r.mean_letters,
                            "p95_letters": r.p95_letters,
                            "reject_fraction": r.reject_fraction,
                        })
                    )?;
                }
            } else {
                write_csv(out, &rows)?;
            }
            Ok(0)
        }
        Cmd::Oracle(cmd) => oracle_dispatch(cmd, rank, json, out),
        Cmd::Apply { map, word } => {
            let m = EndoMap::parse(&map)?;
            let w = Word::parse(&word)?;
            if w.max_generator() > m.rank() {
                return Err(Error::RankExceeded {
                    generator: w.max_generator(),
                    rank: m.rank(),
                }
                .into());
            }
            let image = m.apply(&w);
            if json {
                writeln!(
                    out,
                    "{}",
                    json!({"map": m.to_string(), "word": w.to_string(), "image": image.to_string()})
                )?;
            } else {
                writeln!(out, "{image}")?;
            }
            Ok(0)
        }
    }
}

fn oracle_dispatch(
    cmd: OracleCmd,
    rank: u16,
    json: bool,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    match cmd {
        OracleCmd::Ball { word, radius, cap } => {
            let w = parse_word(&word, rank)?;
            let ball = orbit_ball_with_cap(&w, rank, radius, cap.unwrap_or(DEFAULT_BALL_CAP))?;
            if json {
                writeln!(
                    out,
                    "{}",
                    json!({
                        "word": w.to_string(),
                        "rank": rank,
                        "radius": radius,
                        "size": ball.len(),
                        "pruned": ball.pruned(),
                    })
                )?;
            } else {
                writeln!(out, "{}", ball.len())?;
            }
            Ok(0)
        }
        OracleCmd::RefutePb { word, max_len } => {
            let w = parse_word(&word, rank)?;
            let witness = refute_pb(&w, rank, max_len)?;
            let found = witness.is_some();
            if json {
                writeln!(
                    out,
                    "{}",
                    json!({
                        "word": w.to_string(),
                        "max_len": max_len,
                        "witness": witness.as_ref().map(|c| c.to_string()),
                    })
                )?;
            } else {
                match &witness {
                    Some(c) => writeln!(out, "{c}")?,
                    None => writeln!(out, "none")?,
                }
            }
            Ok(if found { 0 } else { 1 })
        }
        OracleCmd::VerifyBlocker { word, blocker, radius } => {
            let w = parse_word(&word, rank)?;
            let b = parse_word(&blocker, rank)?;
            let report = verify_orbit_blocking(&w, &b, rank, radius)?;
            let ok = report.passed();
            if json {
                writeln!(
                    out,
                    "{}",
                    json!({
                        "word": w.to_string(),
                        "blocker": b.to_string(),
                        "radius": radius,
                        "ball_size": report.ball_size,
                        "pruned": report.pruned,
                        "counterexample": report.counterexample.as_ref().map(|c| c.to_string()),
                    })
                )?;
            } else {
                match &report.counterexample {
                    None => writeln!(out, "pass")?,
                    Some(c) => writeln!(out, "fail {c}")?,
                }
            }
            Ok(if ok { 0 } else { 1 })
        }
    }
}

fn write_csv(out: &mut dyn Write, rows: &[fgkit_core::hybrid::BenchRow]) -> Result<(), Failure> {
    writeln!(out, "n,samples,mean_letters,p95_letters,mean_ns,reject_fraction")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.n, r.samples, r.mean_letters, r.p95_letters, r.mean_ns, r.reject_fraction
        )?;
    }
    Ok(())
}

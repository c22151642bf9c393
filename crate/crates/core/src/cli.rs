//! Command-line front end.
//!
//! Every solver command prints a table for all vertices followed by a
//! machine-readable block between `--- result ---` and `--- end ---`.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::digraph::VertexId;
use crate::error::{Error, Result};
use crate::format::{parse_game, parse_profile, parse_utility, render_game};
use crate::game::{Player, PositionalStructure, StrategyProfile, UtilityFunction, Value, WinLosePartition};
use crate::generate::{chain_partition, gen_chain, gen_household, gen_random, RandomParams};
use crate::nash::build_nash;
use crate::oracle::{Oracle, DEFAULT_PROFILE_CAP};
use crate::winlose::solve_winlose;
use crate::zerosum::solve_zerosum;

#[derive(Parser, Debug)]
#[command(name = "dgms", version, about = "Solve games on digraphs with cycles by backward induction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Winners and a subgame-perfect strategy profile of a win/lose game.
    SolveWinlose {
        #[command(flatten)]
        game: GameArg,
        /// Outcomes won by player 1, comma separated; all others go to player 2.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        win: Vec<String>,
        #[arg(long)]
        from: Option<String>,
    },
    /// Values and a subgame-perfect saddle point of a zero-sum game.
    SolveZerosum {
        #[command(flatten)]
        game: GameArg,
        #[arg(long)]
        utils: PathBuf,
        #[arg(long)]
        from: Option<String>,
    },
    /// A Nash equilibrium of a two-person game from one initial position.
    Nash {
        #[command(flatten)]
        game: GameArg,
        #[arg(long)]
        utils: PathBuf,
        #[arg(long)]
        from: String,
    },
    /// Exhaustive checks over all positional strategy profiles.
    Oracle {
        #[command(flatten)]
        game: GameArg,
        #[arg(long)]
        utils: PathBuf,
        /// Profile file with `vertex -> target` lines; required for ne and spne.
        #[arg(long)]
        profile: Option<PathBuf>,
        #[arg(long, value_enum)]
        check: Check,
        /// Initial position; ne and value default to every vertex.
        #[arg(long)]
        from: Option<String>,
        #[arg(long, default_value_t = DEFAULT_PROFILE_CAP)]
        max_profiles: u64,
    },
    /// Write a generated game document.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Time the win/lose solver on chains of 2-cycles of doubling size.
    Bench {
        #[arg(long, default_value_t = 1_000)]
        min: usize,
        #[arg(long, default_value_t = 1_000_000)]
        max: usize,
        /// Runs per size; the fastest is reported.
        #[arg(long, default_value_t = 3)]
        repeat: usize,
    },
}

#[derive(Args, Debug)]
struct GameArg {
    /// Game document; read from stdin when omitted or `-`.
    #[arg(long)]
    game: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Check {
    Ne,
    Spne,
    Value,
}

#[derive(Subcommand, Debug)]
enum GenKind {
    Household {
        #[arg(long)]
        n: usize,
    },
    Random {
        #[arg(long)]
        vertices: usize,
        #[arg(long, default_value_t = 2)]
        players: usize,
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        #[arg(long, default_value_t = 0.25)]
        terminal_fraction: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Runs the command line `argv` (program name first) and returns the exit
/// code: 0 on success, 1 on input errors, 2 on contract violations.
pub fn run_cli(argv: &[String], stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                1
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    match execute(cli.command, stdin) {
        Ok(text) => match stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(stderr, "error: {e}");
                1
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            match e {
                Error::ContractViolation(_) => 2,
                _ => 1,
            }
        }
    }
}

fn read_file(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn load_game(arg: &GameArg, stdin: &mut dyn Read) -> Result<PositionalStructure> {
    let text = match &arg.game {
        Some(p) if p.as_os_str() != "-" => read_file(p)?,
        _ => {
            let mut text = String::new();
            stdin.read_to_string(&mut text)?;
            text
        }
    };
    parse_game(&text)
}

fn load_utility(path: &PathBuf, s: &PositionalStructure) -> Result<UtilityFunction> {
    parse_utility(&read_file(path)?, s)
}

fn vertex(s: &PositionalStructure, name: &str) -> Result<VertexId> {
    s.digraph().vertex(name).ok_or_else(|| Error::UnknownVertex(name.to_string()))
}

fn owner_cell(s: &PositionalStructure, v: VertexId) -> String {
    s.owner(v).map_or("-".to_string(), |p| p.to_string())
}

fn move_cell(s: &PositionalStructure, profile: &StrategyProfile, v: VertexId) -> String {
    profile.move_at(v).map_or("-".to_string(), |e| s.digraph().name(s.digraph().edge(e).target).to_string())
}

/// Left-aligned columns separated by two spaces.
fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut width: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &mut dyn Iterator<Item = &str>| {
        let mut text = String::new();
        for (cell, w) in cells.zip(&width) {
            write!(text, "{cell:<w$}  ").unwrap();
        }
        writeln!(out, "{}", text.trim_end()).unwrap();
    };
    line(&mut header.iter().copied());
    for row in rows {
        line(&mut row.iter().map(String::as_str));
    }
    out
}

fn strategy_lines(out: &mut String, s: &PositionalStructure, profile: &StrategyProfile) {
    for (v, w) in profile.targets(s) {
        writeln!(out, "{} -> {}", s.digraph().name(v), s.digraph().name(w)).unwrap();
    }
}

fn execute(command: Command, stdin: &mut dyn Read) -> Result<String> {
    match command {
        Command::SolveWinlose { game, win, from } => {
            let s = load_game(&game, stdin)?;
            let a1: Vec<&str> = win.iter().map(|w| w.trim()).filter(|w| !w.is_empty()).collect();
            let partition = WinLosePartition::from_names(&s, &a1)?;
            let start = from.as_deref().map(|f| vertex(&s, f)).transpose()?;
            let sol = solve_winlose(&s, &partition)?;
            let g = s.digraph();
            let rows: Vec<Vec<String>> = g
                .vertices()
                .map(|v| vec![g.name(v).to_string(), owner_cell(&s, v), sol.winner[v].to_string(), move_cell(&s, &sol.profile, v)])
                .collect();
            let mut out = table(&["vertex", "owner", "winner", "move"], &rows);
            writeln!(out, "--- result ---").unwrap();
            for v in g.vertices() {
                writeln!(out, "winner({})={}", g.name(v), sol.winner[v]).unwrap();
            }
            strategy_lines(&mut out, &s, &sol.profile);
            if let Some(v) = start {
                writeln!(out, "outcome={}", s.outcome(s.play_outcome(&sol.profile, v)).name).unwrap();
            }
            writeln!(out, "steps={}", sol.steps).unwrap();
            writeln!(out, "--- end ---").unwrap();
            Ok(out)
        }
        Command::SolveZerosum { game, utils, from } => {
            let s = load_game(&game, stdin)?;
            let u = load_utility(&utils, &s)?;
            let start = from.as_deref().map(|f| vertex(&s, f)).transpose()?;
            let sol = solve_zerosum(&s, &u)?;
            let g = s.digraph();
            let rows: Vec<Vec<String>> = g
                .vertices()
                .map(|v| {
                    vec![
                        g.name(v).to_string(),
                        owner_cell(&s, v),
                        sol.value[v].to_string(),
                        move_cell(&s, &sol.profile, v),
                        s.outcome(sol.outcome_at[v]).name.clone(),
                    ]
                })
                .collect();
            let mut out = table(&["vertex", "owner", "value", "move", "outcome"], &rows);
            writeln!(out, "--- result ---").unwrap();
            for v in g.vertices() {
                writeln!(out, "value({})={}", g.name(v), sol.value[v]).unwrap();
            }
            strategy_lines(&mut out, &s, &sol.profile);
            if let Some(v) = start {
                writeln!(out, "outcome={}", s.outcome(sol.outcome_at[v]).name).unwrap();
            }
            writeln!(out, "--- end ---").unwrap();
            Ok(out)
        }
        Command::Nash { game, utils, from } => {
            let s = load_game(&game, stdin)?;
            let u = load_utility(&utils, &s)?;
            let start = vertex(&s, &from)?;
            let cert = build_nash(&s, &u, start)?;
            let name = |a: usize| s.outcome(a).name.clone();
            let set = |xs: &std::collections::BTreeSet<usize>| xs.iter().map(|&a| name(a)).collect::<Vec<_>>().join(",");
            let rows: Vec<Vec<String>> = cert
                .partition_trace
                .iter()
                .enumerate()
                .map(|(k, step)| vec![(k + 1).to_string(), set(&step.w), set(&step.w1), set(&step.w2)])
                .collect();
            let mut out = table(&["step", "W", "W1", "W2"], &rows);
            writeln!(out, "--- result ---").unwrap();
            strategy_lines(&mut out, &s, &cert.profile);
            writeln!(out, "outcome={}", name(cert.equilibrium_outcome)).unwrap();
            writeln!(out, "solve_count={}", cert.solve_count).unwrap();
            writeln!(out, "simple={}", cert.simple).unwrap();
            writeln!(out, "--- end ---").unwrap();
            Ok(out)
        }
        Command::Oracle { game, utils, profile, check, from, max_profiles } => {
            let s = load_game(&game, stdin)?;
            let u = load_utility(&utils, &s)?;
            let oracle = Oracle::new(&s).with_cap(max_profiles);
            let g = s.digraph();
            let starts: Vec<VertexId> = match &from {
                Some(f) => vec![vertex(&s, f)?],
                None => g.vertices().collect(),
            };
            let profile = profile.map(|p| read_file(&p).and_then(|t| parse_profile(&t, &s))).transpose()?;
            let need_profile = || profile.as_ref().ok_or_else(|| Error::InvalidParameter("--profile is required for this check".into()));
            let mut out = String::new();
            writeln!(out, "--- result ---").unwrap();
            match check {
                Check::Ne => {
                    let p = need_profile()?;
                    let mut all = true;
                    for &v in &starts {
                        let ok = oracle.is_nash(v, &u, p)?;
                        all &= ok;
                        writeln!(out, "nash({})={}", g.name(v), ok).unwrap();
                    }
                    writeln!(out, "result={all}").unwrap();
                }
                Check::Spne => {
                    let ok = oracle.is_subgame_perfect(&u, need_profile()?)?;
                    writeln!(out, "result={ok}").unwrap();
                }
                Check::Value => {
                    for &v in &starts {
                        let value: Value = oracle.brute_force_value(v, &u)?;
                        writeln!(out, "value({})={}", g.name(v), value).unwrap();
                    }
                }
            }
            writeln!(out, "--- end ---").unwrap();
            Ok(out)
        }
        Command::Gen { kind, out } => {
            let s = match kind {
                GenKind::Household { n } => gen_household(n)?,
                GenKind::Random { vertices, players, density, terminal_fraction, seed } => {
                    gen_random(&RandomParams { vertices, players, density, terminal_fraction, seed })?
                }
            };
            let text = render_game(&s);
            match out {
                Some(path) => {
                    std::fs::write(&path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                    Ok(String::new())
                }
                None => Ok(text),
            }
        }
        Command::Bench { min, max, repeat } => {
            if min == 0 || min > max || repeat == 0 {
                return Err(Error::InvalidParameter("bench needs 0 < min <= max and repeat >= 1".into()));
            }
            let mut out = String::new();
            writeln!(out, "{:>10}  {:>12}", "vertices", "seconds").unwrap();
            let mut size = min;
            loop {
                let secs = bench_chain(size, repeat)?;
                writeln!(out, "{size:>10}  {secs:>12.6}").unwrap();
                if size == max {
                    break;
                }
                size = (size * 2).min(max);
            }
            Ok(out)
        }
    }
}

/// Fastest of `repeat` win/lose solves on a chain of `size` vertices.
pub fn bench_chain(size: usize, repeat: usize) -> Result<f64> {
    let s = gen_chain(size)?;
    let partition = chain_partition(&s);
    let mut best = f64::INFINITY;
    for _ in 0..repeat {
        let t = Instant::now();
        let sol = solve_winlose(&s, &partition)?;
        best = best.min(t.elapsed().as_secs_f64());
        std::hint::black_box(sol.winner.first().copied().unwrap_or(Player::ONE));
    }
    Ok(best)
}

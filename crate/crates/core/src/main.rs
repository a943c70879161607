use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use scrabble_core::family::random_family;
use scrabble_core::io::{read_instance, render_board, write_instance};
use scrabble_core::logic::{parse_dimacs, parse_qdimacs, Qbf};
use scrabble_core::model::{Mode, Move};
use scrabble_core::reduction::{reduce_qbf, reduce_sat};
use scrabble_core::rules::{is_finished, outcome, Engine};
use scrabble_core::search::{
    solve_game_with, solve_solitaire, SolitaireStatus, SolveError, SolveLimits, SolveOptions,
};
use scrabble_core::sweep::{verify_qbf, verify_sat, CaseError, DEFAULT_FACTS_BUDGET};

const EXIT_DISAGREE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_LIMIT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "scrabble",
    about = "Derandomized Scrabble reductions and solvers"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
struct Limits {
    #[arg(long, default_value_t = 50_000_000)]
    max_nodes: u64,
    #[arg(long, default_value_t = 600_000)]
    timeout_ms: u64,
}

impl Limits {
    fn get(&self) -> Result<SolveLimits> {
        Ok(SolveLimits::new(self.max_nodes, self.timeout_ms)?)
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// DIMACS CNF to a solitaire instance file.
    ReduceSat {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// QDIMACS to a two-player instance file.
    ReduceQbf {
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve an instance file.
    Solve {
        instance: PathBuf,
        #[command(flatten)]
        limits: Limits,
        /// Solve root moves on separate threads (two-player only).
        #[arg(long)]
        parallel: bool,
    },
    /// Check a DIMACS formula end to end.
    VerifySat {
        input: PathBuf,
        #[command(flatten)]
        limits: Limits,
    },
    /// Check a QDIMACS formula end to end.
    VerifyQbf {
        input: PathBuf,
        #[command(flatten)]
        limits: Limits,
    },
    /// Verify seeded random formulas.
    Sweep {
        #[arg(long, default_value_t = 3)]
        vars: u32,
        #[arg(long, default_value_t = 2)]
        clauses: usize,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Treat each formula as a QBF.
        #[arg(long)]
        qbf: bool,
        #[command(flatten)]
        limits: Limits,
    },
    /// Print the board of an instance file.
    Render { instance: PathBuf },
    /// Step through a game from an instance file.
    Play { instance: PathBuf },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn limit_exit(e: SolveError) -> anyhow::Error {
    match e {
        SolveError::LimitExceeded { nodes } => {
            anyhow::Error::msg(format!("limit exceeded after {nodes} nodes")).context(LimitHit)
        }
        other => other.into(),
    }
}

#[derive(Debug)]
struct LimitHit;

impl std::fmt::Display for LimitHit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("solver limit")
    }
}

fn case_err(e: CaseError) -> anyhow::Error {
    match e {
        CaseError::Solve(s) => limit_exit(s),
        other => other.into(),
    }
}

fn run(cmd: Cmd) -> Result<u8> {
    match cmd {
        Cmd::ReduceSat { input, out } => {
            let f = parse_dimacs(&read(&input)?)?;
            emit(&write_instance(&reduce_sat(&f)), out.as_deref())?;
        }
        Cmd::ReduceQbf { input, out } => {
            let q = parse_qdimacs(&read(&input)?)?;
            emit(&write_instance(&reduce_qbf(&q)), out.as_deref())?;
        }
        Cmd::Solve {
            instance,
            limits,
            parallel,
        } => {
            let inst = read_instance(&read(&instance)?)?;
            let lim = limits.get()?;
            match inst.variant.mode {
                Mode::Solitaire => {
                    let r = solve_solitaire(&inst, lim)?;
                    match r.status {
                        SolitaireStatus::Solvable(w) => {
                            println!("status=solvable");
                            println!("witness_len={}", w.len());
                            for mv in w {
                                println!("move={mv}");
                            }
                        }
                        SolitaireStatus::Unsolvable => println!("status=unsolvable"),
                        SolitaireStatus::LimitExceeded => {
                            println!("status=limit_exceeded");
                            println!("nodes={}", r.nodes);
                            return Ok(EXIT_LIMIT);
                        }
                    }
                    println!("nodes={}", r.nodes);
                }
                Mode::TwoPlayer => {
                    let opts = SolveOptions {
                        memo: true,
                        parallel_root: parallel,
                    };
                    let r = solve_game_with(&inst, lim, opts).map_err(limit_exit)?;
                    let winner = match r.winner {
                        scrabble_core::Outcome::P1Wins => "P1",
                        scrabble_core::Outcome::P2Wins => "P2",
                        scrabble_core::Outcome::Draw => "draw",
                    };
                    println!("winner={winner}");
                    println!("margin={}", r.margin);
                    println!("pv_len={}", r.principal_variation.len());
                    for mv in &r.principal_variation {
                        println!("move={mv}");
                    }
                    println!("nodes={}", r.nodes);
                }
            }
        }
        Cmd::VerifySat { input, limits } => {
            let f = parse_dimacs(&read(&input)?)?;
            let case = verify_sat(&f, limits.get()?, DEFAULT_FACTS_BUDGET).map_err(case_err)?;
            println!("{case}");
            if !case.agree() {
                return Ok(EXIT_DISAGREE);
            }
        }
        Cmd::VerifyQbf { input, limits } => {
            let q = parse_qdimacs(&read(&input)?)?;
            let case = verify_qbf(
                &q,
                limits.get()?,
                SolveOptions::default(),
                DEFAULT_FACTS_BUDGET,
            )
            .map_err(case_err)?;
            println!("{case}");
            if !case.agree() {
                return Ok(EXIT_DISAGREE);
            }
        }
        Cmd::Sweep {
            vars,
            clauses,
            count,
            seed,
            qbf,
            limits,
        } => {
            if vars == 0 || clauses == 0 {
                eprintln!("error: --vars and --clauses must be positive");
                return Ok(EXIT_USAGE);
            }
            let lim = limits.get()?;
            let mut disagree = 0;
            for (i, f) in random_family(seed, vars, clauses, count).iter().enumerate() {
                let (line, ok) = if qbf {
                    let q = Qbf::new(f.clone());
                    let c = verify_qbf(&q, lim, SolveOptions::default(), DEFAULT_FACTS_BUDGET)
                        .map_err(case_err)?;
                    (c.to_string(), c.agree())
                } else {
                    let c = verify_sat(f, lim, DEFAULT_FACTS_BUDGET).map_err(case_err)?;
                    (c.to_string(), c.agree())
                };
                println!("case={} {line}", i + 1);
                if !ok {
                    disagree += 1;
                }
            }
            println!("agree={} disagree={disagree}", count - disagree);
            if disagree > 0 {
                return Ok(EXIT_DISAGREE);
            }
        }
        Cmd::Render { instance } => {
            let inst = read_instance(&read(&instance)?)?;
            print!("{}", render_board(&inst.board, None));
        }
        Cmd::Play { instance } => play(&read_instance(&read(&instance)?)?)?,
    }
    Ok(0)
}

fn play(inst: &scrabble_core::Instance) -> Result<()> {
    let engine = Engine::new(inst.dictionary.clone());
    let mut state = inst.initial_state();
    let stdin = io::stdin();
    let mut lines = stdin.lock().lines();
    let mut last: Option<Move> = None;
    loop {
        let highlight = match &last {
            Some(Move::Place(p)) => Some(p),
            _ => None,
        };
        print!("{}", render_board(&state.board, highlight));
        println!(
            "scores={},{} active={} passes={}",
            state.scores[0], state.scores[1], state.active, state.pass_streak
        );
        let rack: Vec<String> = state
            .active_rack()
            .letters()
            .iter()
            .map(|s| s.to_string())
            .collect();
        println!("rack={}", rack.join(" "));
        if is_finished(&state) {
            println!("finished outcome={:?}", outcome(&state)?);
            return Ok(());
        }
        let moves = engine.legal_moves(&state);
        for (i, mv) in moves.iter().enumerate() {
            println!("{:>3}: {mv}", i + 1);
        }
        print!("move (q to quit)> ");
        io::stdout().flush()?;
        let Some(line) = lines.next() else {
            return Ok(());
        };
        let line = line?;
        let line = line.trim();
        if line == "q" {
            return Ok(());
        }
        match line.parse::<usize>() {
            Ok(n) if (1..=moves.len()).contains(&n) => {
                let mv = moves[n - 1].clone();
                state = engine.apply_move(&state, &mv)?.next;
                last = Some(mv);
            }
            _ => println!("enter a number between 1 and {}", moves.len()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            if e.downcast_ref::<LimitHit>().is_some() {
                println!("status=limit_exceeded");
                eprintln!("error: {e:#}");
                return ExitCode::from(EXIT_LIMIT);
            }
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

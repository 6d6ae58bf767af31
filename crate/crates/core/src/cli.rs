//! Command-line front end: single searches, single episodes, sweeps and reports.
//!
//! Exit codes: 0 success, 2 input parse error, 3 flag out of range,
//! 4 data or schema error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::harness::{
    self, max_curve, percentile_curves, read_csv, run_sweep, write_csv, write_plot_data, Algorithm,
    ReportRow, RunConfig, StartPolicy, SweepGrid, Tradeoff, DEFAULT_START_DISTANCE,
    PERCENTILE_LEVELS, ROLLOUT_LENGTHS,
};
use crate::hmcts::{h_search, HConfig};
use crate::pbmcts::{pb_search, PBConfig};
use crate::puzzle8::{Board, DistanceTable, Goal, Puzzle8, DIAMETER};
use crate::search::{derive_seed, Budget, RngStream};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_RANGE: i32 = 3;
pub const EXIT_DATA: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "prefsearch",
    version,
    about = "Heuristic and preference-based MCTS on the 8-puzzle"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum AlgoArg {
    Hmcts,
    Pbmcts,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Hmcts => Algorithm::Hmcts,
            AlgoArg::Pbmcts => Algorithm::Pbmcts,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ReportMode {
    Max,
    Percentiles,
}

#[derive(Debug, clap::Args)]
pub struct SearchArgs {
    #[arg(long, value_enum, default_value = "pbmcts")]
    pub algo: AlgoArg,
    /// Transition samples per move.
    #[arg(long, default_value_t = 10_000)]
    pub budget: u64,
    /// Rollout depth limit: 5, 10, 25 or 50.
    #[arg(long, default_value_t = 10)]
    pub rollout: usize,
    /// C_p for hmcts, alpha_hat for pbmcts (positive, one decimal).
    #[arg(long, default_value_t = 0.5)]
    pub tradeoff: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one search from a board and print the chosen move.
    Solve {
        #[arg(long)]
        board: String,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Play one episode (at most 100 moves).
    Episode {
        /// Start board; a random board at --distance is used when omitted.
        #[arg(long)]
        board: Option<String>,
        /// Optimal distance of the random start board.
        #[arg(long, default_value_t = DEFAULT_START_DISTANCE)]
        distance: u32,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Run a hyperparameter sweep described by a grid file and write a CSV.
    Sweep {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Summarise sweep records as plot data.
    Report {
        /// Sweep CSV to read.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "max")]
        mode: ReportMode,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl ToString) -> Self {
        Failure {
            code,
            message: message.to_string(),
        }
    }

    fn range(message: impl ToString) -> Self {
        Failure::new(EXIT_RANGE, message)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::new(EXIT_DATA, e)
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    match cmd {
        Command::Solve { board, search } => solve(&board, &search, out, err),
        Command::Episode {
            board,
            distance,
            search,
        } => episode(board.as_deref(), distance, &search, out, err),
        Command::Sweep {
            grid,
            out: path,
            workers,
        } => sweep(&grid, &path, workers, out),
        Command::Report {
            input,
            mode,
            out: path,
        } => report(&input, mode, path, out),
    }
}

fn parse_board(text: &str) -> Result<Board, Failure> {
    text.parse().map_err(|e: Error| Failure::new(EXIT_PARSE, e))
}

fn run_config(args: &SearchArgs) -> Result<RunConfig, Failure> {
    if !ROLLOUT_LENGTHS.contains(&args.rollout) {
        return Err(Failure::range(format!(
            "--rollout must be one of 5, 10, 25, 50 (got {})",
            args.rollout
        )));
    }
    if args.budget == 0 {
        return Err(Failure::range("--budget must be at least 1"));
    }
    let tradeoff = Tradeoff::new(args.tradeoff).map_err(Failure::range)?;
    Ok(RunConfig {
        algorithm: args.algo.into(),
        rollout_len: args.rollout,
        tradeoff,
        budget: args.budget,
    })
}

fn warn_unsolvable(board: &Board, err: &mut dyn Write) -> std::io::Result<()> {
    if !Goal::default().is_solvable(board) {
        writeln!(err, "warning: board {board} cannot reach the goal")?;
    }
    Ok(())
}

fn solve(
    board: &str,
    args: &SearchArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Failure> {
    let board = parse_board(board)?;
    let config = run_config(args)?;
    warn_unsolvable(&board, err)?;
    let env = Puzzle8::new(board);
    if env.goal().is_goal(&board) {
        writeln!(out, "board {board} is already solved")?;
        return Ok(());
    }
    let mut budget = Budget::new(config.budget);
    let mut rng = RngStream::new(derive_seed(&[args.seed, 1, 0]));
    writeln!(out, "board {board}")?;
    writeln!(out, "algorithm {}", config.algorithm)?;
    match config.algorithm {
        Algorithm::Hmcts => {
            let cfg = HConfig {
                exploration: config.tradeoff.value(),
                rollout_depth: config.rollout_len,
            };
            let res = h_search(&board, &env, &cfg, &mut budget, &mut rng)
                .map_err(|e| Failure::new(EXIT_DATA, e))?;
            writeln!(out, "move {}", res.action)?;
            writeln!(out, "samples {}", budget.used())?;
            writeln!(out, "iterations {}", res.iterations)?;
            for ((m, visits), mean) in board
                .legal_moves()
                .iter()
                .zip(&res.root_visits)
                .zip(&res.root_means)
            {
                let mean = mean.map_or("-".to_string(), |m| format!("{m:.4}"));
                writeln!(out, "  {m:<5} visits {visits:>8} mean {mean}")?;
            }
        }
        Algorithm::Pbmcts => {
            let cfg = PBConfig {
                alpha_hat: config.tradeoff.value(),
                rollout_depth: config.rollout_len,
            };
            let res = pb_search(&board, &env, &cfg, &mut budget, &mut rng)
                .map_err(|e| Failure::new(EXIT_DATA, e))?;
            writeln!(out, "move {}", res.action)?;
            writeln!(out, "samples {}", budget.used())?;
            writeln!(out, "iterations {}", res.iterations)?;
            let moves = board.legal_moves();
            writeln!(out, "root wins (row beats column):")?;
            for (i, m) in moves.iter().enumerate() {
                let row: Vec<String> = (0..moves.len())
                    .map(|j| format!("{:>8}", res.root_wins.get(i, j)))
                    .collect();
                writeln!(
                    out,
                    "  {m:<5} {}  copeland {}",
                    row.join(""),
                    res.root_wins.copeland(i)
                )?;
            }
        }
    }
    Ok(())
}

fn episode(
    board: Option<&str>,
    distance: u32,
    args: &SearchArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Failure> {
    let config = run_config(args)?;
    let start = match board {
        Some(text) => parse_board(text)?,
        None => {
            if distance > DIAMETER {
                return Err(Failure::range(format!(
                    "--distance must be at most {DIAMETER}"
                )));
            }
            let table = DistanceTable::build(&Goal::default());
            StartPolicy::Random {
                distance: Some(distance),
            }
            .board(args.seed, 0, Some(&table))
            .map_err(Failure::range)?
        }
    };
    warn_unsolvable(&start, err)?;
    let seed = config.episode_seed(args.seed, 0);
    let result = config
        .play(start, seed)
        .map_err(|e| Failure::new(EXIT_DATA, e))?;
    writeln!(out, "start {start}")?;
    writeln!(out, "config {config}")?;
    writeln!(out, "result {}", if result.win { "win" } else { "loss" })?;
    writeln!(out, "moves {}", result.moves_played)?;
    let actions: Vec<String> = result.actions.iter().map(|m| m.to_string()).collect();
    writeln!(out, "actions {}", actions.join(" "))?;
    let samples: Vec<String> = result
        .samples_per_move
        .iter()
        .map(|s| s.to_string())
        .collect();
    writeln!(out, "samples_per_move {}", samples.join(" "))?;
    writeln!(out, "samples_total {}", result.total_samples())?;
    Ok(())
}

fn sweep(
    grid: &std::path::Path,
    path: &std::path::Path,
    workers: usize,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    if workers == 0 {
        return Err(Failure::range("--workers must be at least 1"));
    }
    let text = fs::read_to_string(grid).map_err(|e| {
        Failure::new(
            EXIT_PARSE,
            format!("cannot read grid {}: {e}", grid.display()),
        )
    })?;
    let grid = SweepGrid::parse(&text).map_err(|e| Failure::new(EXIT_PARSE, e))?;
    let records = run_sweep(&grid, workers).map_err(|e| Failure::new(EXIT_DATA, e))?;
    write_csv(&records, path).map_err(|e| Failure::new(EXIT_DATA, e))?;
    writeln!(out, "wrote {} records to {}", records.len(), path.display())?;
    Ok(())
}

fn report(
    input: &std::path::Path,
    mode: ReportMode,
    path: Option<PathBuf>,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let records = read_csv(input).map_err(|e| Failure::new(EXIT_DATA, e))?;
    if records.is_empty() {
        return Err(Failure::new(
            EXIT_DATA,
            Error::EmptyInput("sweep CSV has no records"),
        ));
    }
    let mut rows: Vec<ReportRow> = Vec::new();
    for algo in Algorithm::ALL {
        if !records.iter().any(|r| r.config.algorithm == algo) {
            continue;
        }
        let curve = match mode {
            ReportMode::Max => max_curve(&records, algo),
            ReportMode::Percentiles => percentile_curves(&records, algo, &PERCENTILE_LEVELS),
        }
        .map_err(|e| Failure::new(EXIT_DATA, e))?;
        rows.extend(curve.into_iter().map(|r| ReportRow {
            label: format!("{algo}:{}", r.label),
            ..r
        }));
    }
    match path {
        Some(p) => {
            harness::emit_plot_data(&rows, &p).map_err(|e| Failure::new(EXIT_DATA, e))?;
            writeln!(out, "wrote {} rows to {}", rows.len(), p.display())?;
        }
        None => write_plot_data(&rows, &mut *out)?,
    }
    Ok(())
}

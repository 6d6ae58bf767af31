//! Hyperparameter sweeps over both agents on the 8-puzzle, their CSV record
//! format, and the best-configuration and percentile win-rate curves.
//!
//! Every episode gets a seed derived from the master seed and its full
//! configuration, and every start board is derived from the master seed and
//! the episode index alone, so all configurations face the same starts and a
//! sweep gives the same records for any worker count.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hmcts::{HConfig, HMcts};
use crate::pbmcts::{PBConfig, PbMcts};
use crate::puzzle8::{random_solvable, Board, DistanceTable, Goal, Move, Puzzle8};
use crate::search::{derive_seed, play_episode, EpisodeResult, RngStream, MAX_EPISODE_STEPS};

pub const ROLLOUT_LENGTHS: [usize; 4] = [5, 10, 25, 50];

pub const BUDGETS: [u64; 15] = [
    100, 200, 500, 1_000, 2_500, 5_000, 10_000, 20_000, 50_000, 100_000, 200_000, 500_000,
    1_000_000, 2_000_000, 5_000_000,
];

pub const PERCENTILE_LEVELS: [f64; 6] = [1.0, 0.8, 0.6, 0.4, 0.2, 0.0];

pub const DEFAULT_START_DISTANCE: u32 = 20;

pub const CSV_HEADER: [&str; 10] = [
    "algo",
    "rollout_len",
    "tradeoff",
    "budget",
    "episode",
    "seed",
    "start",
    "win",
    "moves",
    "samples_used",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Hmcts,
    Pbmcts,
}

impl Algorithm {
    pub const ALL: [Algorithm; 2] = [Algorithm::Hmcts, Algorithm::Pbmcts];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Hmcts => "hmcts",
            Algorithm::Pbmcts => "pbmcts",
        }
    }

    fn code(self) -> u64 {
        match self {
            Algorithm::Hmcts => 1,
            Algorithm::Pbmcts => 2,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "hmcts" => Ok(Algorithm::Hmcts),
            "pbmcts" => Ok(Algorithm::Pbmcts),
            other => Err(Error::InvalidConfig(format!("unknown algorithm {other:?}"))),
        }
    }
}

/// Exploration trade-off in tenths: `C_p` for H-MCTS, `alpha_hat` for PB-MCTS.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tradeoff(u32);

impl Tradeoff {
    pub fn from_tenths(tenths: u32) -> Self {
        Tradeoff(tenths)
    }

    /// Accepts positive values with at most one decimal.
    pub fn new(value: f64) -> Result<Self> {
        let tenths = (value * 10.0).round();
        if !(value > 0.0) || !value.is_finite() || (tenths / 10.0 - value).abs() > 1e-9 {
            return Err(Error::InvalidConfig(format!(
                "trade-off {value} must be positive with at most one decimal"
            )));
        }
        Ok(Tradeoff(tenths as u32))
    }

    pub fn tenths(self) -> u32 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 10.0
    }

    /// The ten values 0.1, 0.2, ..., 1.0.
    pub fn grid() -> Vec<Tradeoff> {
        (1..=10).map(Tradeoff).collect()
    }
}

impl fmt::Display for Tradeoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.0 / 10, self.0 % 10)
    }
}

impl FromStr for Tradeoff {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let v: f64 = s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("bad trade-off {s:?}")))?;
        Tradeoff::new(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StartPolicy {
    Fixed(Board),
    /// Uniform over solvable boards, or over boards at an exact optimal distance.
    Random {
        distance: Option<u32>,
    },
}

impl Default for StartPolicy {
    fn default() -> Self {
        StartPolicy::Random {
            distance: Some(DEFAULT_START_DISTANCE),
        }
    }
}

impl fmt::Display for StartPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StartPolicy::Fixed(b) => write!(f, "{b}"),
            StartPolicy::Random { distance: None } => f.write_str("random"),
            StartPolicy::Random { distance: Some(d) } => write!(f, "random:{d}"),
        }
    }
}

impl FromStr for StartPolicy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "random" {
            return Ok(StartPolicy::Random { distance: None });
        }
        if let Some(d) = s.strip_prefix("random:") {
            let d = d
                .trim()
                .parse()
                .map_err(|_| Error::InvalidGrid(format!("bad start distance {d:?}")))?;
            return Ok(StartPolicy::Random { distance: Some(d) });
        }
        Ok(StartPolicy::Fixed(s.parse()?))
    }
}

impl StartPolicy {
    /// Start board for an episode index; depends only on the master seed.
    pub fn board(&self, master: u64, episode: u64, table: Option<&DistanceTable>) -> Result<Board> {
        let mut rng = RngStream::new(derive_seed(&[master, 0x5741_5254, episode]));
        match *self {
            StartPolicy::Fixed(b) => Ok(b),
            StartPolicy::Random { distance: None } => {
                Ok(random_solvable(&Goal::default(), &mut rng))
            }
            StartPolicy::Random { distance: Some(d) } => {
                let table = table.ok_or_else(|| {
                    Error::InvalidConfig("distance-based starts need a distance table".into())
                })?;
                table.random_at_distance(d, &mut rng)
            }
        }
    }

    fn needs_table(&self) -> bool {
        matches!(self, StartPolicy::Random { distance: Some(_) })
    }
}

/// One point of the hyperparameter grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    pub rollout_len: usize,
    pub tradeoff: Tradeoff,
    pub budget: u64,
}

impl fmt::Display for RunConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} rollout={} tradeoff={} budget={}",
            self.algorithm, self.rollout_len, self.tradeoff, self.budget
        )
    }
}

impl RunConfig {
    pub fn episode_seed(&self, master: u64, episode: u64) -> u64 {
        derive_seed(&[
            master,
            self.algorithm.code(),
            self.rollout_len as u64,
            self.tradeoff.tenths() as u64,
            self.budget,
            episode,
        ])
    }

    /// Plays one episode of this configuration from `start`.
    pub fn play(&self, start: Board, seed: u64) -> Result<EpisodeResult<Move>> {
        self.play_in(&Puzzle8::new(start), seed)
    }

    /// Plays one episode in a prepared environment.
    pub fn play_in(&self, env: &Puzzle8, seed: u64) -> Result<EpisodeResult<Move>> {
        match self.algorithm {
            Algorithm::Hmcts => {
                let mut agent = HMcts::new(HConfig {
                    exploration: self.tradeoff.value(),
                    rollout_depth: self.rollout_len,
                });
                play_episode(&mut agent, env, MAX_EPISODE_STEPS, self.budget, seed)
            }
            Algorithm::Pbmcts => {
                let mut agent = PbMcts::new(PBConfig {
                    alpha_hat: self.tradeoff.value(),
                    rollout_depth: self.rollout_len,
                });
                play_episode(&mut agent, env, MAX_EPISODE_STEPS, self.budget, seed)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub algorithms: Vec<Algorithm>,
    pub rollout_lengths: Vec<usize>,
    pub tradeoffs: Vec<Tradeoff>,
    pub budgets: Vec<u64>,
    pub runs: u64,
    pub start: StartPolicy,
    pub seed: u64,
}

impl Default for SweepGrid {
    /// The full grid: both agents, four rollout lengths, ten trade-offs,
    /// fifteen budgets and 100 runs per configuration.
    fn default() -> Self {
        SweepGrid {
            algorithms: Algorithm::ALL.to_vec(),
            rollout_lengths: ROLLOUT_LENGTHS.to_vec(),
            tradeoffs: Tradeoff::grid(),
            budgets: BUDGETS.to_vec(),
            runs: 100,
            start: StartPolicy::default(),
            seed: 0,
        }
    }
}

impl SweepGrid {
    pub fn validate(&self) -> Result<()> {
        let empty = |what: &str| Err(Error::InvalidGrid(format!("{what} must not be empty")));
        if self.algorithms.is_empty() {
            return empty("algorithms");
        }
        if self.rollout_lengths.is_empty() {
            return empty("rollout_lengths");
        }
        if self.tradeoffs.is_empty() {
            return empty("tradeoffs");
        }
        if self.budgets.is_empty() {
            return empty("budgets");
        }
        if self.runs == 0 {
            return Err(Error::InvalidGrid("runs must be at least 1".into()));
        }
        if self.tradeoffs.iter().any(|t| t.tenths() == 0) {
            return Err(Error::InvalidGrid("trade-offs must be positive".into()));
        }
        if self.budgets.contains(&0) {
            return Err(Error::InvalidGrid("budgets must be positive".into()));
        }
        Ok(())
    }

    /// All configurations in (algorithm, rollout, trade-off, budget) order.
    pub fn configs(&self) -> Vec<RunConfig> {
        let mut out = Vec::new();
        for &algorithm in &self.algorithms {
            for &rollout_len in &self.rollout_lengths {
                for &tradeoff in &self.tradeoffs {
                    for &budget in &self.budgets {
                        out.push(RunConfig {
                            algorithm,
                            rollout_len,
                            tradeoff,
                            budget,
                        });
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Parses `key = value` lines; lists are comma-separated and `#` starts a
    /// comment. Missing keys keep their [`Default`] values.
    pub fn parse(text: &str) -> Result<Self> {
        let mut grid = SweepGrid::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: String| Error::InvalidGrid(format!("line {}: {msg}", lineno + 1));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key = value, got {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            let wrap = |e: Error| bad(e.to_string());
            match key {
                "algorithms" => grid.algorithms = parse_list(value).map_err(wrap)?,
                "rollout_lengths" => grid.rollout_lengths = parse_list(value).map_err(wrap)?,
                "tradeoffs" => grid.tradeoffs = parse_list(value).map_err(wrap)?,
                "budgets" => grid.budgets = parse_list(value).map_err(wrap)?,
                "runs" => grid.runs = parse_one(value).map_err(wrap)?,
                "seed" => grid.seed = parse_one(value).map_err(wrap)?,
                "start" => grid.start = value.parse().map_err(wrap)?,
                other => return Err(bad(format!("unknown key {other:?}"))),
            }
        }
        grid.validate()?;
        Ok(grid)
    }

    pub fn to_text(&self) -> String {
        let join = |xs: Vec<String>| xs.join(", ");
        format!(
            "algorithms = {}\nrollout_lengths = {}\ntradeoffs = {}\nbudgets = {}\nruns = {}\nstart = {}\nseed = {}\n",
            join(self.algorithms.iter().map(|a| a.to_string()).collect()),
            join(self.rollout_lengths.iter().map(|r| r.to_string()).collect()),
            join(self.tradeoffs.iter().map(|t| t.to_string()).collect()),
            join(self.budgets.iter().map(|b| b.to_string()).collect()),
            self.runs,
            self.start,
            self.seed,
        )
    }
}

fn parse_one<T: FromStr>(s: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::InvalidGrid(format!("cannot parse {s:?}")))
}

fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| {
            x.parse()
                .map_err(|_| Error::InvalidGrid(format!("cannot parse {x:?}")))
        })
        .collect()
}

/// One played episode of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RunRecord {
    pub config: RunConfig,
    pub episode: u64,
    pub seed: u64,
    pub start: Board,
    pub win: bool,
    pub moves: u64,
    pub samples_used: u64,
}

/// Plays episode `episode` of `config` under the grid's start policy.
pub fn run_episode(
    config: &RunConfig,
    episode: u64,
    master: u64,
    start: &StartPolicy,
    table: Option<&DistanceTable>,
) -> Result<RunRecord> {
    let board = start.board(master, episode, table)?;
    let seed = config.episode_seed(master, episode);
    let result = config.play(board, seed)?;
    Ok(RunRecord {
        config: *config,
        episode,
        seed,
        start: board,
        win: result.win,
        moves: result.moves_played as u64,
        samples_used: result.total_samples(),
    })
}

/// Runs every (configuration, episode) pair on a pool of `workers` threads.
/// Records come back sorted by configuration then episode.
pub fn run_sweep(grid: &SweepGrid, workers: usize) -> Result<Vec<RunRecord>> {
    grid.validate()?;
    if workers == 0 {
        return Err(Error::InvalidConfig(
            "worker count must be at least 1".into(),
        ));
    }
    let table = grid
        .start
        .needs_table()
        .then(|| DistanceTable::build(&Goal::default()));

    let jobs: Vec<(RunConfig, u64)> = grid
        .configs()
        .into_iter()
        .flat_map(|c| (0..grid.runs).map(move |e| (c, e)))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;

    let mut records = pool.install(|| {
        jobs.par_iter()
            .map(|(config, episode)| {
                run_episode(config, *episode, grid.seed, &grid.start, table.as_ref()).map_err(|e| {
                    Error::Episode {
                        config: format!("{config} episode={episode}"),
                        source: Box::new(e),
                    }
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    records.sort();
    Ok(records)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub budget: u64,
    pub label: String,
    pub win_rate: f64,
}

/// Win rate of every configuration of `algorithm`, grouped by budget.
pub fn config_win_rates(
    records: &[RunRecord],
    algorithm: Algorithm,
) -> BTreeMap<u64, Vec<(RunConfig, f64)>> {
    let mut tally: BTreeMap<RunConfig, (u64, u64)> = BTreeMap::new();
    for r in records.iter().filter(|r| r.config.algorithm == algorithm) {
        let e = tally.entry(r.config).or_default();
        e.0 += r.win as u64;
        e.1 += 1;
    }
    let mut by_budget: BTreeMap<u64, Vec<(RunConfig, f64)>> = BTreeMap::new();
    for (config, (wins, runs)) in tally {
        by_budget
            .entry(config.budget)
            .or_default()
            .push((config, wins as f64 / runs as f64));
    }
    by_budget
}

/// Best win rate over all configurations at each budget.
pub fn max_curve(records: &[RunRecord], algorithm: Algorithm) -> Result<Vec<ReportRow>> {
    let rates = config_win_rates(records, algorithm);
    if rates.is_empty() {
        return Err(Error::EmptyInput("no records for the requested algorithm"));
    }
    Ok(rates
        .into_iter()
        .map(|(budget, rs)| ReportRow {
            budget,
            label: "max".to_string(),
            win_rate: rs.iter().map(|&(_, r)| r).fold(f64::NEG_INFINITY, f64::max),
        })
        .collect())
}

/// Label of a percentile level, e.g. `p80` for 0.8.
pub fn level_label(level: f64) -> String {
    format!("p{}", (level * 100.0).round() as u64)
}

/// Nearest-rank quantile of an ascending list: the element at index
/// `ceil(level * (k - 1))`.
pub fn quantile(sorted: &[f64], level: f64) -> f64 {
    let k = sorted.len() as u64;
    let pct = (level * 100.0).round() as u64;
    let idx = (pct * (k - 1)).div_ceil(100);
    sorted[idx as usize]
}

/// Percentile curves over configurations, computed per budget. Rows are
/// grouped by level in the order given.
pub fn percentile_curves(
    records: &[RunRecord],
    algorithm: Algorithm,
    levels: &[f64],
) -> Result<Vec<ReportRow>> {
    let rates = config_win_rates(records, algorithm);
    if rates.is_empty() {
        return Err(Error::EmptyInput("no records for the requested algorithm"));
    }
    if levels.iter().any(|l| !(0.0..=1.0).contains(l)) {
        return Err(Error::InvalidConfig(
            "percentile levels must lie in [0, 1]".into(),
        ));
    }
    let sorted: Vec<(u64, Vec<f64>)> = rates
        .into_iter()
        .map(|(b, rs)| {
            let mut v: Vec<f64> = rs.into_iter().map(|(_, r)| r).collect();
            v.sort_by(f64::total_cmp);
            (b, v)
        })
        .collect();
    let mut rows = Vec::new();
    for &level in levels {
        for (budget, v) in &sorted {
            rows.push(ReportRow {
                budget: *budget,
                label: level_label(level),
                win_rate: quantile(v, level),
            });
        }
    }
    Ok(rows)
}

pub fn write_csv_to<W: Write>(records: &[RunRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.config.algorithm.name().to_string(),
            r.config.rollout_len.to_string(),
            r.config.tradeoff.to_string(),
            r.config.budget.to_string(),
            r.episode.to_string(),
            r.seed.to_string(),
            r.start.to_string(),
            (r.win as u8).to_string(),
            r.moves.to_string(),
            r.samples_used.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

pub fn write_csv(records: &[RunRecord], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv_to(records, BufWriter::new(file))
}

pub fn read_csv_from<R: Read>(input: R) -> Result<Vec<RunRecord>> {
    let mut rdr = csv::Reader::from_reader(input);
    let headers = rdr.headers()?.clone();
    let mut idx = [0usize; CSV_HEADER.len()];
    for (slot, name) in idx.iter_mut().zip(CSV_HEADER) {
        *slot = headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Schema(format!("missing column {name:?}")))?;
    }
    let mut records = Vec::new();
    for (line, row) in rdr.records().enumerate() {
        let row = row?;
        let field = |k: usize| -> Result<&str> {
            row.get(idx[k]).ok_or_else(|| {
                Error::Schema(format!("row {}: missing {}", line + 1, CSV_HEADER[k]))
            })
        };
        let parse = |k: usize| -> Result<u64> {
            let s = field(k)?;
            s.parse().map_err(|_| {
                Error::Schema(format!("row {}: bad {} {s:?}", line + 1, CSV_HEADER[k]))
            })
        };
        let schema =
            |k: usize, e: Error| Error::Schema(format!("row {}: {}: {e}", line + 1, CSV_HEADER[k]));
        let win = match field(7)? {
            "0" => false,
            "1" => true,
            other => {
                return Err(Error::Schema(format!(
                    "row {}: bad win {other:?}",
                    line + 1
                )))
            }
        };
        records.push(RunRecord {
            config: RunConfig {
                algorithm: field(0)?.parse().map_err(|e| schema(0, e))?,
                rollout_len: parse(1)? as usize,
                tradeoff: field(2)?.parse().map_err(|e| schema(2, e))?,
                budget: parse(3)?,
            },
            episode: parse(4)?,
            seed: parse(5)?,
            start: field(6)?.parse().map_err(|e| schema(6, e))?,
            win,
            moves: parse(8)?,
            samples_used: parse(9)?,
        });
    }
    Ok(records)
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<RunRecord>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv_from(BufReader::new(file))
}

/// Writes `#label <name>` blocks of tab-separated `budget value` lines, one
/// block per label in order of first appearance.
pub fn write_plot_data<W: Write>(rows: &[ReportRow], mut out: W) -> std::io::Result<()> {
    let mut labels: Vec<&str> = Vec::new();
    for r in rows {
        if !labels.contains(&r.label.as_str()) {
            labels.push(&r.label);
        }
    }
    for label in labels {
        writeln!(out, "#label {label}")?;
        for r in rows.iter().filter(|r| r.label == label) {
            writeln!(out, "{}\t{}", r.budget, r.win_rate)?;
        }
        writeln!(out)?;
    }
    out.flush()
}

pub fn emit_plot_data(rows: &[ReportRow], path: impl AsRef<Path>) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::EmptyInput("no report rows to plot"));
    }
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_plot_data(rows, BufWriter::new(file)).map_err(|e| Error::io(path, e))
}

pub fn read_plot_data<R: BufRead>(input: R) -> Result<Vec<ReportRow>> {
    let mut rows = Vec::new();
    let mut label: Option<String> = None;
    for line in input.lines() {
        let line = line.map_err(|e| Error::io("<plot data>", e))?;
        if line.trim().is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix("#label ") {
            label = Some(name.to_string());
            continue;
        }
        let bad = || Error::Schema(format!("bad plot data line {line:?}"));
        let (b, v) = line.split_once('\t').ok_or_else(bad)?;
        rows.push(ReportRow {
            budget: b.parse().map_err(|_| bad())?,
            label: label.clone().ok_or_else(bad)?,
            win_rate: v.parse().map_err(|_| bad())?,
        });
    }
    Ok(rows)
}

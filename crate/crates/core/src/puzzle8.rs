//! The 8-puzzle: boards, moves, heuristics, solvability and an exhaustive
//! distance table.
//!
//! Boards are written as 9 digits in row-major order with `0` for the blank,
//! e.g. `123456780` is the default goal.

use std::collections::VecDeque;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::search::{Environment, OrdinalKey, RngStream};

pub const CELLS: usize = 9;
const WIDTH: usize = 3;

/// Number of boards reachable from any fixed goal (9!/2).
pub const REACHABLE_STATES: usize = 181_440;

/// Largest optimal solution length of the 8-puzzle.
pub const DIAMETER: u32 = 31;

/// Heuristic values above this saturate in [`Goal::heuristic_value`].
pub const H_MAX: f64 = 40.0;

const PERMUTATIONS: usize = 362_880;
const UNREACHED: u8 = u8::MAX;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Board {
    cells: [u8; CELLS],
}

/// Direction the blank travels. The neighbouring tile slides the other way.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    Up,
    Down,
    Left,
    Right,
}

impl Move {
    pub const ALL: [Move; 4] = [Move::Up, Move::Down, Move::Left, Move::Right];

    pub fn inverse(self) -> Move {
        match self {
            Move::Up => Move::Down,
            Move::Down => Move::Up,
            Move::Left => Move::Right,
            Move::Right => Move::Left,
        }
    }

    fn target(self, blank: usize) -> Option<usize> {
        let (row, col) = (blank / WIDTH, blank % WIDTH);
        match self {
            Move::Up if row > 0 => Some(blank - WIDTH),
            Move::Down if row + 1 < WIDTH => Some(blank + WIDTH),
            Move::Left if col > 0 => Some(blank - 1),
            Move::Right if col + 1 < WIDTH => Some(blank + 1),
            _ => None,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Move::Up => "up",
            Move::Down => "down",
            Move::Left => "left",
            Move::Right => "right",
        };
        f.pad(s)
    }
}

impl Board {
    pub fn new(cells: [u8; CELLS]) -> Result<Self> {
        let mut seen = [false; CELLS];
        for &c in &cells {
            if c as usize >= CELLS || seen[c as usize] {
                return Err(Error::MalformedBoard {
                    input: cells.iter().map(|c| c.to_string()).collect(),
                    reason: "cells must be a permutation of 0..=8",
                });
            }
            seen[c as usize] = true;
        }
        Ok(Board { cells })
    }

    /// The default goal `123456780`.
    pub fn solved() -> Self {
        Board {
            cells: [1, 2, 3, 4, 5, 6, 7, 8, 0],
        }
    }

    pub fn cells(&self) -> &[u8; CELLS] {
        &self.cells
    }

    pub fn blank(&self) -> usize {
        self.cells
            .iter()
            .position(|&c| c == 0)
            .expect("board has a blank")
    }

    /// Moves in the fixed order up, down, left, right.
    pub fn legal_moves(&self) -> Vec<Move> {
        let mut buf = [Move::Up; 4];
        let n = self.legal_moves_into(&mut buf);
        buf[..n].to_vec()
    }

    fn legal_moves_into(&self, buf: &mut [Move; 4]) -> usize {
        let blank = self.blank();
        let mut n = 0;
        for m in Move::ALL {
            if m.target(blank).is_some() {
                buf[n] = m;
                n += 1;
            }
        }
        n
    }

    pub fn apply(&self, m: Move) -> Result<Board> {
        let blank = self.blank();
        let target = m
            .target(blank)
            .ok_or_else(|| Error::IllegalMove(format!("{m} on {self}")))?;
        let mut cells = self.cells;
        cells.swap(blank, target);
        Ok(Board { cells })
    }

    fn rank(&self) -> usize {
        // Lehmer code; ranks follow the lexicographic order of the cells.
        let mut rank = 0;
        for i in 0..CELLS {
            let smaller = self.cells[i + 1..]
                .iter()
                .filter(|&&c| c < self.cells[i])
                .count();
            rank = rank * (CELLS - i) + smaller;
        }
        rank
    }

    fn unrank(mut rank: usize) -> Board {
        let mut digits = [0usize; CELLS];
        for i in (0..CELLS).rev() {
            let base = CELLS - i;
            digits[i] = rank % base;
            rank /= base;
        }
        let mut pool: Vec<u8> = (0..CELLS as u8).collect();
        let mut cells = [0u8; CELLS];
        for i in 0..CELLS {
            cells[i] = pool.remove(digits[i]);
        }
        Board { cells }
    }
}

impl Default for Board {
    fn default() -> Self {
        Board::solved()
    }
}

impl fmt::Display for Board {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in self.cells {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Board {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Board({self})")
    }
}

impl FromStr for Board {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let malformed = |reason| Error::MalformedBoard {
            input: text.to_string(),
            reason,
        };
        let bytes = text.as_bytes();
        if bytes.len() != CELLS {
            return Err(malformed("expected exactly 9 digits"));
        }
        let mut cells = [0u8; CELLS];
        let mut seen = [false; CELLS];
        for (cell, &b) in cells.iter_mut().zip(bytes) {
            if !(b'0'..=b'8').contains(&b) {
                return Err(malformed("only digits 0-8 are allowed"));
            }
            let v = b - b'0';
            if seen[v as usize] {
                return Err(malformed("duplicate digit"));
            }
            seen[v as usize] = true;
            *cell = v;
        }
        Ok(Board { cells })
    }
}

/// A goal board with its tile coordinates precomputed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Goal {
    board: Board,
    row: [u8; CELLS],
    col: [u8; CELLS],
    slot: [u8; CELLS],
}

impl Default for Goal {
    fn default() -> Self {
        Goal::new(Board::solved())
    }
}

impl Goal {
    pub fn new(board: Board) -> Self {
        let mut row = [0; CELLS];
        let mut col = [0; CELLS];
        let mut slot = [0; CELLS];
        for (i, &t) in board.cells.iter().enumerate() {
            row[t as usize] = (i / WIDTH) as u8;
            col[t as usize] = (i % WIDTH) as u8;
            slot[t as usize] = i as u8;
        }
        Goal {
            board,
            row,
            col,
            slot,
        }
    }

    pub fn board(&self) -> Board {
        self.board
    }

    pub fn is_goal(&self, b: &Board) -> bool {
        *b == self.board
    }

    /// Sum of tile distances to their goal cells; the blank is not counted.
    pub fn manhattan(&self, b: &Board) -> u32 {
        let mut sum = 0;
        for (i, &t) in b.cells.iter().enumerate() {
            if t == 0 {
                continue;
            }
            let (r, c) = ((i / WIDTH) as i32, (i % WIDTH) as i32);
            sum += (r - self.row[t as usize] as i32).unsigned_abs()
                + (c - self.col[t as usize] as i32).unsigned_abs();
        }
        sum
    }

    /// Linear conflicts summed over rows and columns. In each line, the tiles
    /// that belong to it must pass each other; the count is the fewest of them
    /// that have to leave the line so the rest are in goal order. A swapped
    /// pair is one conflict, a reversed triple two.
    pub fn linear_conflicts(&self, b: &Board) -> u32 {
        let mut conflicts = 0;
        for line in 0..WIDTH {
            // tiles in row `line` whose goal row is `line`, keyed by goal column
            let mut in_row = [0u8; WIDTH];
            let mut nr = 0;
            let mut in_col = [0u8; WIDTH];
            let mut nc = 0;
            for k in 0..WIDTH {
                let t = b.cells[line * WIDTH + k] as usize;
                if t != 0 && self.row[t] as usize == line {
                    in_row[nr] = self.col[t];
                    nr += 1;
                }
                let t = b.cells[k * WIDTH + line] as usize;
                if t != 0 && self.col[t] as usize == line {
                    in_col[nc] = self.row[t];
                    nc += 1;
                }
            }
            conflicts += out_of_order(&in_row[..nr]) + out_of_order(&in_col[..nc]);
        }
        conflicts
    }

    /// Manhattan distance plus two moves per linear conflict.
    pub fn mdc(&self, b: &Board) -> u32 {
        self.manhattan(b) + 2 * self.linear_conflicts(b)
    }

    /// Whether `b` can reach this goal: the tile permutation relative to the
    /// goal must have even inversion parity (grid width is odd).
    pub fn is_solvable(&self, b: &Board) -> bool {
        let mut seq = [0u8; CELLS - 1];
        let mut n = 0;
        for &t in &b.cells {
            if t != 0 {
                seq[n] = self.slot[t as usize];
                n += 1;
            }
        }
        inversions(&seq) % 2 == 0
    }

    /// Numeric evaluation in `[0, 1]`: 1 for the goal, otherwise
    /// `1 - min(mdc, H_MAX) / (H_MAX + 1)`.
    pub fn heuristic_value(&self, b: &Board) -> f64 {
        if self.is_goal(b) {
            1.0
        } else {
            normalized_value(self.mdc(b) as f64)
        }
    }

    pub fn ordinal_key(&self, b: &Board) -> OrdinalKey {
        if self.is_goal(b) {
            OrdinalKey::Goal
        } else {
            OrdinalKey::NonGoal(self.mdc(b) as f64)
        }
    }
}

/// Length minus the longest increasing subsequence of `keys`.
fn out_of_order(keys: &[u8]) -> u32 {
    let mut best = [1u32; WIDTH];
    for i in 0..keys.len() {
        for j in 0..i {
            if keys[j] < keys[i] {
                best[i] = best[i].max(best[j] + 1);
            }
        }
    }
    let longest = best[..keys.len()].iter().copied().max().unwrap_or(0);
    keys.len() as u32 - longest
}

/// Maps a non-goal cost to `(0, 1)`, strictly decreasing on `[0, H_MAX]`.
pub fn normalized_value(cost: f64) -> f64 {
    1.0 - cost.min(H_MAX) / (H_MAX + 1.0)
}

fn inversions(xs: &[u8]) -> u32 {
    let mut n = 0;
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            if xs[i] > xs[j] {
                n += 1;
            }
        }
    }
    n
}

/// Uniformly random board in the goal's reachability class.
pub fn random_solvable(goal: &Goal, rng: &mut RngStream) -> Board {
    let mut cells: [u8; CELLS] = [0, 1, 2, 3, 4, 5, 6, 7, 8];
    for i in (1..CELLS).rev() {
        let j = rng.below(i + 1);
        cells.swap(i, j);
    }
    let mut board = Board { cells };
    if !goal.is_solvable(&board) {
        // swapping two tiles flips parity; a bijection between the classes
        let mut tiles = board
            .cells
            .iter()
            .enumerate()
            .filter(|(_, &t)| t != 0)
            .map(|(i, _)| i);
        let (a, b) = (tiles.next().unwrap(), tiles.next().unwrap());
        board.cells.swap(a, b);
    }
    board
}

/// Exact optimal solution lengths for every board reachable from a goal.
#[derive(Clone)]
pub struct DistanceTable {
    goal: Board,
    dist: Vec<u8>,
    by_distance: Vec<Vec<u32>>,
}

impl fmt::Debug for DistanceTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DistanceTable")
            .field("goal", &self.goal)
            .field("states", &self.len())
            .field("max_distance", &self.max_distance())
            .finish()
    }
}

impl DistanceTable {
    /// Breadth-first search from the goal over all reachable boards.
    pub fn build(goal: &Goal) -> Self {
        let mut dist = vec![UNREACHED; PERMUTATIONS];
        let mut queue = VecDeque::with_capacity(REACHABLE_STATES);
        let start = goal.board();
        dist[start.rank()] = 0;
        queue.push_back(start);
        let mut buf = [Move::Up; 4];
        while let Some(b) = queue.pop_front() {
            let d = dist[b.rank()];
            let n = b.legal_moves_into(&mut buf);
            for &m in &buf[..n] {
                let next = b.apply(m).expect("legal move");
                let r = next.rank();
                if dist[r] == UNREACHED {
                    dist[r] = d + 1;
                    queue.push_back(next);
                }
            }
        }
        Self::from_parts(start, dist)
    }

    fn from_parts(goal: Board, dist: Vec<u8>) -> Self {
        let max = dist
            .iter()
            .filter(|&&d| d != UNREACHED)
            .max()
            .copied()
            .unwrap_or(0);
        let mut by_distance = vec![Vec::new(); max as usize + 1];
        for (rank, &d) in dist.iter().enumerate() {
            if d != UNREACHED {
                by_distance[d as usize].push(rank as u32);
            }
        }
        DistanceTable {
            goal,
            dist,
            by_distance,
        }
    }

    pub fn goal(&self) -> Board {
        self.goal
    }

    pub fn distance(&self, b: &Board) -> Option<u32> {
        match self.dist[b.rank()] {
            UNREACHED => None,
            d => Some(d as u32),
        }
    }

    /// Number of reachable boards.
    pub fn len(&self) -> usize {
        self.by_distance.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn max_distance(&self) -> u32 {
        self.by_distance.len() as u32 - 1
    }

    /// Reachable boards with their distances, in lexicographic board order.
    pub fn iter(&self) -> impl Iterator<Item = (Board, u32)> + '_ {
        self.dist
            .iter()
            .enumerate()
            .filter(|(_, &d)| d != UNREACHED)
            .map(|(r, &d)| (Board::unrank(r), d as u32))
    }

    /// Boards at exactly `d` moves from the goal, in lexicographic order.
    pub fn boards_at(&self, d: u32) -> Vec<Board> {
        self.by_distance
            .get(d as usize)
            .map(|rs| rs.iter().map(|&r| Board::unrank(r as usize)).collect())
            .unwrap_or_default()
    }

    /// Uniformly random board whose optimal solution length is exactly `d`.
    pub fn random_at_distance(&self, d: u32, rng: &mut RngStream) -> Result<Board> {
        match self.by_distance.get(d as usize) {
            Some(ranks) if d <= DIAMETER && !ranks.is_empty() => {
                Ok(Board::unrank(*rng.choose(ranks) as usize))
            }
            _ => Err(Error::UnreachableDistance(d)),
        }
    }

    /// Writes one 10-byte record per reachable board: the 9 ASCII digits of
    /// the board followed by its distance byte, sorted by board string.
    pub fn write_binary<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let mut rec = [0u8; CELLS + 1];
        for (b, d) in self.iter() {
            for (dst, &c) in rec.iter_mut().zip(b.cells()) {
                *dst = b'0' + c;
            }
            rec[CELLS] = d as u8;
            out.write_all(&rec)?;
        }
        out.flush()
    }

    /// Reads a table written by [`DistanceTable::write_binary`]. The goal is
    /// the record at distance 0.
    pub fn read_binary<R: Read>(mut input: R) -> Result<Self> {
        let mut bytes = Vec::new();
        input
            .read_to_end(&mut bytes)
            .map_err(|e| Error::io("<distance table>", e))?;
        if bytes.len() % (CELLS + 1) != 0 {
            return Err(Error::Schema(
                "distance table length is not a multiple of 10".into(),
            ));
        }
        let mut dist = vec![UNREACHED; PERMUTATIONS];
        let mut goal = None;
        for rec in bytes.chunks_exact(CELLS + 1) {
            let text = std::str::from_utf8(&rec[..CELLS])
                .map_err(|_| Error::Schema("non-ASCII board in distance table".into()))?;
            let b: Board = text.parse()?;
            let d = rec[CELLS];
            if d == UNREACHED {
                return Err(Error::Schema(format!("invalid distance for {b}")));
            }
            if d == 0 {
                goal = Some(b);
            }
            dist[b.rank()] = d;
        }
        let goal = goal.ok_or_else(|| Error::Schema("distance table has no goal record".into()))?;
        Ok(Self::from_parts(goal, dist))
    }
}

/// Monotone transform applied to the heuristic cost before it is evaluated.
#[derive(Clone)]
pub struct CostTransform(Arc<dyn Fn(f64) -> f64 + Send + Sync>);

impl CostTransform {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        CostTransform(Arc::new(f))
    }

    pub fn identity() -> Self {
        CostTransform::new(|h| h)
    }

    pub fn apply(&self, h: f64) -> f64 {
        (self.0)(h)
    }
}

impl fmt::Debug for CostTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("CostTransform")
    }
}

/// The 8-puzzle as an [`Environment`]. The goal is the only terminal state.
///
/// Non-goal cutoffs are scored from `transform(mdc)`: the ordinal key carries
/// the transformed cost and the numeric value is its [`normalized_value`].
/// With the identity transform these equal [`Goal::ordinal_key`] and
/// [`Goal::heuristic_value`].
#[derive(Debug, Clone)]
pub struct Puzzle8 {
    start: Board,
    goal: Goal,
    transform: CostTransform,
}

impl Puzzle8 {
    pub fn new(start: Board) -> Self {
        Puzzle8 {
            start,
            goal: Goal::default(),
            transform: CostTransform::identity(),
        }
    }

    pub fn with_goal(mut self, goal: Goal) -> Self {
        self.goal = goal;
        self
    }

    pub fn with_transform(mut self, transform: CostTransform) -> Self {
        self.transform = transform;
        self
    }

    pub fn goal(&self) -> &Goal {
        &self.goal
    }

    fn cost(&self, b: &Board) -> f64 {
        self.transform.apply(self.goal.mdc(b) as f64)
    }
}

impl Environment for Puzzle8 {
    type State = Board;
    type Action = Move;

    fn start(&self) -> Board {
        self.start
    }

    fn actions(&self, state: &Board) -> Vec<Move> {
        state.legal_moves()
    }

    fn sample_transition(&self, state: &Board, action: Move, _rng: &mut RngStream) -> Board {
        state
            .apply(action)
            .expect("search only applies legal moves")
    }

    fn is_terminal(&self, state: &Board) -> bool {
        self.goal.is_goal(state)
    }

    fn terminal_reward(&self, state: &Board) -> f64 {
        if self.goal.is_goal(state) {
            1.0
        } else {
            0.0
        }
    }

    fn heuristic_numeric(&self, state: &Board) -> f64 {
        if self.goal.is_goal(state) {
            1.0
        } else {
            normalized_value(self.cost(state))
        }
    }

    fn heuristic_ordinal(&self, state: &Board) -> OrdinalKey {
        if self.goal.is_goal(state) {
            OrdinalKey::Goal
        } else {
            OrdinalKey::NonGoal(self.cost(state))
        }
    }

    fn random_action(&self, state: &Board, rng: &mut RngStream) -> Option<Move> {
        let mut buf = [Move::Up; 4];
        let n = state.legal_moves_into(&mut buf);
        Some(buf[rng.below(n)])
    }
}

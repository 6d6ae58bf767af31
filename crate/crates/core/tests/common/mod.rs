#![allow(dead_code)]

use std::cell::Cell;

use prefsearch::puzzle8::{Board, Move, Puzzle8};
use prefsearch::search::{Environment, OrdinalKey, RngStream};

/// Puzzle8 that counts every transition it is asked for.
pub struct Counting {
    pub inner: Puzzle8,
    pub calls: Cell<u64>,
}

impl Counting {
    pub fn new(start: Board) -> Self {
        Counting {
            inner: Puzzle8::new(start),
            calls: Cell::new(0),
        }
    }

    pub fn take(&self) -> u64 {
        self.calls.replace(0)
    }
}

impl Environment for Counting {
    type State = Board;
    type Action = Move;

    fn start(&self) -> Board {
        self.inner.start()
    }
    fn actions(&self, s: &Board) -> Vec<Move> {
        self.inner.actions(s)
    }
    fn sample_transition(&self, s: &Board, a: Move, rng: &mut RngStream) -> Board {
        self.calls.set(self.calls.get() + 1);
        self.inner.sample_transition(s, a, rng)
    }
    fn is_terminal(&self, s: &Board) -> bool {
        self.inner.is_terminal(s)
    }
    fn terminal_reward(&self, s: &Board) -> f64 {
        self.inner.terminal_reward(s)
    }
    fn heuristic_numeric(&self, s: &Board) -> f64 {
        self.inner.heuristic_numeric(s)
    }
    fn heuristic_ordinal(&self, s: &Board) -> OrdinalKey {
        self.inner.heuristic_ordinal(s)
    }
}

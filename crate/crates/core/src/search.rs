//! Environment contract, sample budget, rollouts and the episode loop shared
//! by both tree-search agents.
//!
//! Every transition drawn from an [`Environment`] during search goes through
//! [`step`], which charges exactly one unit to the running [`Budget`]. The
//! budget is checked only between iterations, so the last iteration of a
//! search may overshoot the limit.

use std::cmp::Ordering;
use std::fmt::Debug;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Outcome of evaluating a state on a qualitative scale.
///
/// `Goal` is preferred to every `NonGoal`. Among non-goal states, a smaller
/// cost (estimated distance to go) is preferred; equal costs are indifferent.
/// The `Ord` implementation sorts better keys as greater.
#[derive(Debug, Clone, Copy)]
pub enum OrdinalKey {
    Goal,
    NonGoal(f64),
}

impl OrdinalKey {
    pub fn is_goal(&self) -> bool {
        matches!(self, OrdinalKey::Goal)
    }
}

impl PartialEq for OrdinalKey {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for OrdinalKey {}

impl PartialOrd for OrdinalKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdinalKey {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (OrdinalKey::Goal, OrdinalKey::Goal) => Ordering::Equal,
            (OrdinalKey::Goal, OrdinalKey::NonGoal(_)) => Ordering::Greater,
            (OrdinalKey::NonGoal(_), OrdinalKey::Goal) => Ordering::Less,
            // lower cost is better, so compare reversed
            (OrdinalKey::NonGoal(a), OrdinalKey::NonGoal(b)) => b.total_cmp(a),
        }
    }
}

/// A sequential decision problem with a single start state.
///
/// Implementations must be immutable once built; all randomness comes from
/// the [`RngStream`] passed to [`Environment::sample_transition`].
pub trait Environment {
    type State: Clone + PartialEq + Debug;
    type Action: Copy + PartialEq + Debug;

    fn start(&self) -> Self::State;

    /// Applicable actions in a fixed order. Nonempty for non-terminal states.
    fn actions(&self, state: &Self::State) -> Vec<Self::Action>;

    fn sample_transition(
        &self,
        state: &Self::State,
        action: Self::Action,
        rng: &mut RngStream,
    ) -> Self::State;

    fn is_terminal(&self, state: &Self::State) -> bool;

    /// Extrinsic reward in `[0, 1]`; only meaningful on terminal states.
    fn terminal_reward(&self, state: &Self::State) -> f64;

    /// Numeric evaluation of a non-terminal cutoff, in `[0, 1]`.
    fn heuristic_numeric(&self, state: &Self::State) -> f64;

    /// Qualitative evaluation of a non-terminal cutoff.
    fn heuristic_ordinal(&self, state: &Self::State) -> OrdinalKey;

    /// Qualitative evaluation of a terminal state. Winning terminals are `Goal`.
    fn terminal_ordinal(&self, state: &Self::State) -> OrdinalKey {
        if self.terminal_reward(state) >= 1.0 {
            OrdinalKey::Goal
        } else {
            OrdinalKey::NonGoal(f64::INFINITY)
        }
    }

    /// Uniformly random applicable action, drawn as `actions(state)[rng.below(len)]`.
    ///
    /// Overrides must consume the stream identically.
    fn random_action(&self, state: &Self::State, rng: &mut RngStream) -> Option<Self::Action> {
        let actions = self.actions(state);
        if actions.is_empty() {
            None
        } else {
            Some(actions[rng.below(actions.len())])
        }
    }
}

/// Deterministic pseudo-random stream. Identical seeds give identical draws on
/// every platform.
#[derive(Debug, Clone)]
pub struct RngStream {
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        RngStream {
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform index in `0..n`. Panics if `n == 0`.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0, "below(0)");
        if n == 1 {
            return 0;
        }
        self.inner.gen_range(0..n as u64) as usize
    }

    /// Fair coin, drawn as `below(2) == 0`.
    pub fn coin(&mut self) -> bool {
        self.below(2) == 0
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform choice from a nonempty slice.
    pub fn choose<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len())]
    }
}

/// Mixes a sequence of words into one 64-bit seed (splitmix64 finalizer per word).
pub fn derive_seed(parts: &[u64]) -> u64 {
    let mut h: u64 = 0x9E37_79B9_7F4A_7C15;
    for &p in parts {
        h = splitmix(h ^ splitmix(p));
    }
    h
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Transition-sample allowance for one move.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, used: 0 }
    }

    pub fn charge(&mut self, n: u64) {
        self.used += n;
    }

    pub fn exhausted(&self) -> bool {
        self.used >= self.limit
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }
}

/// Draws one transition and charges it to the budget.
pub fn step<E: Environment>(
    env: &E,
    state: &E::State,
    action: E::Action,
    rng: &mut RngStream,
    budget: &mut Budget,
) -> E::State {
    budget.charge(1);
    env.sample_transition(state, action, rng)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RolloutOutcome<S> {
    pub terminal: bool,
    pub reward: f64,
    pub ordinal: OrdinalKey,
    pub final_state: S,
    pub steps: usize,
}

impl<S> RolloutOutcome<S> {
    /// Outcome for a state reached without simulating further.
    pub fn evaluate<E: Environment<State = S>>(env: &E, state: S, steps: usize) -> Self {
        if env.is_terminal(&state) {
            RolloutOutcome {
                terminal: true,
                reward: env.terminal_reward(&state),
                ordinal: env.terminal_ordinal(&state),
                final_state: state,
                steps,
            }
        } else {
            RolloutOutcome {
                terminal: false,
                reward: env.heuristic_numeric(&state),
                ordinal: env.heuristic_ordinal(&state),
                final_state: state,
                steps,
            }
        }
    }
}

/// Uniformly random simulation from `state` for at most `depth_limit` actions.
pub fn rollout<E: Environment>(
    env: &E,
    state: &E::State,
    depth_limit: usize,
    rng: &mut RngStream,
    budget: &mut Budget,
) -> RolloutOutcome<E::State> {
    let mut current = state.clone();
    let mut steps = 0;
    while steps < depth_limit && !env.is_terminal(&current) {
        let Some(action) = env.random_action(&current, rng) else {
            break;
        };
        current = step(env, &current, action, rng, budget);
        steps += 1;
    }
    RolloutOutcome::evaluate(env, current, steps)
}

/// A move-selection policy driven by a transition-sample budget.
pub trait Agent<E: Environment> {
    fn select_action(
        &mut self,
        env: &E,
        state: &E::State,
        budget: &mut Budget,
        rng: &mut RngStream,
    ) -> Result<E::Action>;
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeResult<A> {
    pub win: bool,
    pub moves_played: usize,
    pub samples_per_move: Vec<u64>,
    pub actions: Vec<A>,
}

impl<A> EpisodeResult<A> {
    pub fn total_samples(&self) -> u64 {
        self.samples_per_move.iter().sum()
    }
}

pub const MAX_EPISODE_STEPS: usize = 100;

/// Plays from `env.start()` until a terminal state or `max_steps` moves.
///
/// Reaching a terminal state counts as a win when its reward is 1. The agent
/// gets a fresh budget and a fresh search stream for every move; the real
/// transitions use a separate episode stream and are not charged.
pub fn play_episode<E, G>(
    agent: &mut G,
    env: &E,
    max_steps: usize,
    budget_per_move: u64,
    seed: u64,
) -> Result<EpisodeResult<E::Action>>
where
    E: Environment,
    G: Agent<E>,
{
    let mut env_rng = RngStream::new(derive_seed(&[seed, 0]));
    let mut state = env.start();
    let mut samples_per_move = Vec::new();
    let mut actions = Vec::new();

    while !env.is_terminal(&state) && actions.len() < max_steps {
        let mut budget = Budget::new(budget_per_move);
        let mut search_rng = RngStream::new(derive_seed(&[seed, 1, actions.len() as u64]));
        let action = agent.select_action(env, &state, &mut budget, &mut search_rng)?;
        samples_per_move.push(budget.used());
        actions.push(action);
        state = env.sample_transition(&state, action, &mut env_rng);
    }

    let win = env.is_terminal(&state) && env.terminal_reward(&state) >= 1.0;
    Ok(EpisodeResult {
        win,
        moves_played: actions.len(),
        samples_per_move,
        actions,
    })
}

pub(crate) fn ensure_searchable<E: Environment>(
    env: &E,
    state: &E::State,
) -> Result<Vec<E::Action>> {
    if env.is_terminal(state) {
        return Err(Error::TerminalState);
    }
    let actions = env.actions(state);
    if actions.is_empty() {
        return Err(Error::NoActions);
    }
    Ok(actions)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cell::Cell;

    /// Counter on a line: start at 0, actions +1/-1, terminal at `goal`.
    struct Line {
        goal: i32,
        calls: Cell<u64>,
    }

    impl Environment for Line {
        type State = i32;
        type Action = i32;
        fn start(&self) -> i32 {
            0
        }
        fn actions(&self, _: &i32) -> Vec<i32> {
            vec![-1, 1]
        }
        fn sample_transition(&self, s: &i32, a: i32, _: &mut RngStream) -> i32 {
            self.calls.set(self.calls.get() + 1);
            s + a
        }
        fn is_terminal(&self, s: &i32) -> bool {
            *s == self.goal
        }
        fn terminal_reward(&self, _: &i32) -> f64 {
            1.0
        }
        fn heuristic_numeric(&self, s: &i32) -> f64 {
            1.0 / (1.0 + (self.goal - s).abs() as f64)
        }
        fn heuristic_ordinal(&self, s: &i32) -> OrdinalKey {
            OrdinalKey::NonGoal((self.goal - s).abs() as f64)
        }
    }

    fn far_line() -> Line {
        Line {
            goal: 1000,
            calls: Cell::new(0),
        }
    }

    #[test]
    fn budget_charges_accumulate() {
        let mut b = Budget::new(10);
        b.charge(3);
        assert_eq!(b.used(), 3);
        b.charge(2);
        b.charge(5);
        assert_eq!(b.used(), 10);
        assert!(b.exhausted());
        assert!(!Budget::new(1).exhausted());
    }

    #[test]
    fn rollout_from_terminal_is_free() {
        let env = Line {
            goal: 0,
            calls: Cell::new(0),
        };
        let mut budget = Budget::new(100);
        let out = rollout(&env, &0, 10, &mut RngStream::new(1), &mut budget);
        assert!(out.terminal);
        assert_eq!(out.reward, 1.0);
        assert_eq!(out.ordinal, OrdinalKey::Goal);
        assert_eq!(out.steps, 0);
        assert_eq!(budget.used(), 0);
    }

    #[test]
    fn zero_depth_rollout_evaluates_in_place() {
        let env = far_line();
        let mut budget = Budget::new(100);
        let out = rollout(&env, &5, 0, &mut RngStream::new(1), &mut budget);
        assert!(!out.terminal);
        assert_eq!(out.steps, 0);
        assert_eq!(out.final_state, 5);
        assert_eq!(out.reward, env.heuristic_numeric(&5));
        assert_eq!(budget.used(), 0);
    }

    #[test]
    fn depth_limited_rollout_charges_each_step() {
        let env = far_line();
        let mut budget = Budget::new(100);
        let out = rollout(&env, &0, 5, &mut RngStream::new(9), &mut budget);
        assert!(!out.terminal);
        assert_eq!(out.steps, 5);
        assert_eq!(budget.used(), 5);
        assert_eq!(env.calls.get(), 5);
    }

    #[test]
    fn rollout_stops_at_terminal() {
        let env = Line {
            goal: 1,
            calls: Cell::new(0),
        };
        let mut budget = Budget::new(1000);
        // a 2-step walk from 0 can only end at 1 after an odd number of steps
        for seed in 0..50 {
            let out = rollout(&env, &0, 200, &mut RngStream::new(seed), &mut budget);
            if out.terminal {
                assert_eq!(out.final_state, 1);
                assert_eq!(out.ordinal, OrdinalKey::Goal);
                assert_eq!(out.steps % 2, 1);
            } else {
                assert_eq!(out.steps, 200);
            }
        }
        assert_eq!(budget.used(), env.calls.get());
    }

    #[test]
    fn ordinal_key_order() {
        assert!(OrdinalKey::Goal > OrdinalKey::NonGoal(0.0));
        assert!(OrdinalKey::NonGoal(4.0) > OrdinalKey::NonGoal(7.0));
        assert_eq!(OrdinalKey::NonGoal(5.0), OrdinalKey::NonGoal(5.0));
        assert_eq!(OrdinalKey::Goal, OrdinalKey::Goal);
    }

    #[test]
    fn rng_is_reproducible() {
        let mut a = RngStream::new(42);
        let mut b = RngStream::new(42);
        let xs: Vec<usize> = (0..100).map(|_| a.below(7)).collect();
        let ys: Vec<usize> = (0..100).map(|_| b.below(7)).collect();
        assert_eq!(xs, ys);
        assert!(xs.iter().all(|&x| x < 7));
        assert_ne!(derive_seed(&[1, 2]), derive_seed(&[2, 1]));
    }

    struct AlwaysUp;
    impl Agent<Line> for AlwaysUp {
        fn select_action(
            &mut self,
            _: &Line,
            _: &i32,
            budget: &mut Budget,
            _: &mut RngStream,
        ) -> Result<i32> {
            budget.charge(3);
            Ok(1)
        }
    }

    #[test]
    fn episode_win_and_cap() {
        let env = Line {
            goal: 4,
            calls: Cell::new(0),
        };
        let res = play_episode(&mut AlwaysUp, &env, 100, 10, 7).unwrap();
        assert!(res.win);
        assert_eq!(res.moves_played, 4);
        assert_eq!(res.samples_per_move, vec![3; 4]);

        let env = Line {
            goal: -1,
            calls: Cell::new(0),
        };
        let res = play_episode(&mut AlwaysUp, &env, 100, 10, 7).unwrap();
        assert!(!res.win);
        assert_eq!(res.moves_played, 100);
    }
}

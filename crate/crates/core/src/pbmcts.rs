//! Preference-based MCTS.
//!
//! Each node runs a relative-UCB dueling bandit over its actions. An
//! iteration selects a pair of actions at every node it visits, so the
//! traversal below the root is a binary subtree whose leaves are rollouts.
//! Every node with two distinct actions compares the two outcomes returned by
//! its children, records the preference in its win matrix and passes the
//! preferred outcome up (ties go to a fair coin). When both selected actions
//! coincide only one child is explored and no preference is recorded.
//!
//! Outcomes are compared through [`OrdinalKey`] only, so the search never
//! looks at numeric rewards.

use crate::bandits::{select_action_pair, Preference, PreferenceMatrix};
use crate::error::Result;
use crate::search::{
    ensure_searchable, rollout, step, Agent, Budget, Environment, OrdinalKey, RngStream,
    RolloutOutcome,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PBConfig {
    /// Combined exploration constant of the tree RUCB bound; must be positive.
    pub alpha_hat: f64,
    /// Maximum number of actions per rollout.
    pub rollout_depth: usize,
}

/// Preference between two rollout outcomes.
pub fn compare<S>(first: &RolloutOutcome<S>, second: &RolloutOutcome<S>) -> Preference {
    compare_keys(&first.ordinal, &second.ordinal)
}

pub fn compare_keys(first: &OrdinalKey, second: &OrdinalKey) -> Preference {
    use std::cmp::Ordering::*;
    match first.cmp(second) {
        Greater => Preference::First,
        Less => Preference::Second,
        Equal => Preference::Indifferent,
    }
}

#[derive(Debug, Clone)]
pub struct PrefNode<S, A> {
    pub state: S,
    pub actions: Vec<A>,
    pub wins: PreferenceMatrix,
    pub last_pick: Option<usize>,
    /// Number of traversals of this node.
    pub visits: u64,
    pub children: Vec<(usize, S, usize)>,
}

/// One visit of a node during an iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Traversal {
    pub node: usize,
    pub first: usize,
    pub second: usize,
}

#[derive(Debug, Clone)]
pub struct PrefTree<S, A> {
    nodes: Vec<PrefNode<S, A>>,
    trace: Option<Vec<Traversal>>,
}

impl<S: Clone + PartialEq, A: Copy + PartialEq> PrefTree<S, A> {
    /// Tree rooted at a non-terminal state.
    pub fn new<E>(env: &E, root: S) -> Self
    where
        E: Environment<State = S, Action = A>,
    {
        let mut tree = PrefTree {
            nodes: Vec::new(),
            trace: None,
        };
        tree.push_node(env, root);
        tree
    }

    fn push_node<E>(&mut self, env: &E, state: S) -> usize
    where
        E: Environment<State = S, Action = A>,
    {
        let actions = env.actions(&state);
        let k = actions.len();
        self.nodes.push(PrefNode {
            state,
            actions,
            wins: PreferenceMatrix::new(k),
            last_pick: None,
            visits: 0,
            children: Vec::new(),
        });
        self.nodes.len() - 1
    }

    pub fn root(&self) -> &PrefNode<S, A> {
        &self.nodes[0]
    }

    pub fn nodes(&self) -> &[PrefNode<S, A>] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Start recording every node traversal.
    pub fn enable_trace(&mut self) {
        self.trace = Some(Vec::new());
    }

    /// Traversals recorded since the last call.
    pub fn take_trace(&mut self) -> Vec<Traversal> {
        self.trace.as_mut().map(std::mem::take).unwrap_or_default()
    }

    /// One iteration from the root; returns the outcome propagated to it.
    pub fn iterate<E>(
        &mut self,
        env: &E,
        cfg: &PBConfig,
        budget: &mut Budget,
        rng: &mut RngStream,
    ) -> RolloutOutcome<S>
    where
        E: Environment<State = S, Action = A>,
    {
        self.iterate_from(0, env, cfg, budget, rng)
    }

    fn iterate_from<E>(
        &mut self,
        id: usize,
        env: &E,
        cfg: &PBConfig,
        budget: &mut Budget,
        rng: &mut RngStream,
    ) -> RolloutOutcome<S>
    where
        E: Environment<State = S, Action = A>,
    {
        let node = &mut self.nodes[id];
        node.visits += 1;
        let pair = select_action_pair(&node.wins, node.last_pick, node.visits, cfg.alpha_hat, rng);
        node.last_pick = Some(pair.first);
        if let Some(trace) = &mut self.trace {
            trace.push(Traversal {
                node: id,
                first: pair.first,
                second: pair.second,
            });
        }

        let first = self.explore(id, pair.first, env, cfg, budget, rng);
        if pair.first == pair.second {
            return first;
        }
        let second = self.explore(id, pair.second, env, cfg, budget, rng);

        let preference = compare(&first, &second);
        self.nodes[id]
            .wins
            .record(pair.first, pair.second, preference)
            .expect("distinct actions");
        match preference {
            Preference::First => first,
            Preference::Second => second,
            Preference::Indifferent => {
                if rng.coin() {
                    first
                } else {
                    second
                }
            }
        }
    }

    /// Samples a successor for action `a` and evaluates it: terminal states
    /// directly, known children by recursion, new children by a rollout.
    fn explore<E>(
        &mut self,
        id: usize,
        a: usize,
        env: &E,
        cfg: &PBConfig,
        budget: &mut Budget,
        rng: &mut RngStream,
    ) -> RolloutOutcome<S>
    where
        E: Environment<State = S, Action = A>,
    {
        let node = &self.nodes[id];
        let next = step(env, &node.state, node.actions[a], rng, budget);
        if env.is_terminal(&next) {
            return RolloutOutcome::evaluate(env, next, 0);
        }
        let known = node
            .children
            .iter()
            .find(|(b, s, _)| *b == a && *s == next)
            .map(|&(_, _, c)| c);
        match known {
            Some(child) => self.iterate_from(child, env, cfg, budget, rng),
            None => {
                let child = self.push_node(env, next.clone());
                self.nodes[id].children.push((a, next.clone(), child));
                rollout(env, &next, cfg.rollout_depth, rng, budget)
            }
        }
    }

    /// Root action with the best Copeland score on the root win matrix; ties
    /// go to the higher overall win fraction, then to the stream.
    pub fn recommend(&self, rng: &mut RngStream) -> usize {
        let w = &self.root().wins;
        let key = |j: usize| (w.copeland(j), w.win_fraction(j));
        let best = (0..w.size())
            .map(key)
            .max_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)))
            .expect("root has actions");
        let ties: Vec<usize> = (0..w.size()).filter(|&j| key(j) == best).collect();
        *rng.choose(&ties)
    }
}

#[derive(Debug, Clone)]
pub struct PbSearchResult<A> {
    pub action: A,
    pub iterations: u64,
    pub root_wins: PreferenceMatrix,
    pub root_visits: u64,
}

/// Runs iterations from a fresh root while the budget lasts.
pub fn pb_search<E: Environment>(
    state: &E::State,
    env: &E,
    cfg: &PBConfig,
    budget: &mut Budget,
    rng: &mut RngStream,
) -> Result<PbSearchResult<E::Action>> {
    ensure_searchable(env, state)?;
    let mut tree = PrefTree::new(env, state.clone());
    let mut iterations = 0;
    while !budget.exhausted() {
        tree.iterate(env, cfg, budget, rng);
        iterations += 1;
    }
    let action = tree.root().actions[tree.recommend(rng)];
    Ok(PbSearchResult {
        action,
        iterations,
        root_wins: tree.root().wins.clone(),
        root_visits: tree.root().visits,
    })
}

/// PB-MCTS as an episode [`Agent`]. Optionally keeps the root win matrix of
/// every search it runs.
#[derive(Debug, Clone)]
pub struct PbMcts {
    pub config: PBConfig,
    record_roots: bool,
    roots: Vec<PreferenceMatrix>,
}

impl PbMcts {
    pub fn new(config: PBConfig) -> Self {
        PbMcts {
            config,
            record_roots: false,
            roots: Vec::new(),
        }
    }

    pub fn recording_roots(mut self) -> Self {
        self.record_roots = true;
        self
    }

    pub fn root_history(&self) -> &[PreferenceMatrix] {
        &self.roots
    }
}

impl<E: Environment> Agent<E> for PbMcts {
    fn select_action(
        &mut self,
        env: &E,
        state: &E::State,
        budget: &mut Budget,
        rng: &mut RngStream,
    ) -> Result<E::Action> {
        let res = pb_search(state, env, &self.config, budget, rng)?;
        if self.record_roots {
            self.roots.push(res.root_wins);
        }
        Ok(res.action)
    }
}

//! Heuristic MCTS: UCT selection, one expansion per iteration, depth-capped
//! random rollouts scored by the environment's numeric heuristic.

use crate::bandits::{uct, ArmStats};
use crate::error::Result;
use crate::search::{ensure_searchable, rollout, step, Agent, Budget, Environment, RngStream};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HConfig {
    /// `C_p` in the UCT bound.
    pub exploration: f64,
    /// Maximum number of actions per rollout.
    pub rollout_depth: usize,
}

#[derive(Debug, Clone)]
pub struct HNode<S, A> {
    pub state: S,
    pub terminal: bool,
    pub actions: Vec<A>,
    pub stats: Vec<ArmStats>,
    pub visits: u64,
    /// Observed successors as (action index, state, node id).
    pub children: Vec<(usize, S, usize)>,
    untried: Vec<usize>,
}

/// One search tree, owned by a single search.
#[derive(Debug, Clone)]
pub struct HTree<S, A> {
    nodes: Vec<HNode<S, A>>,
    path: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationSummary {
    pub reward: f64,
    pub new_nodes: usize,
    /// Tree nodes visited, including the one simulated from.
    pub path_len: usize,
}

impl<S: Clone + PartialEq, A: Copy + PartialEq> HTree<S, A> {
    pub fn new<E>(env: &E, root: S) -> Self
    where
        E: Environment<State = S, Action = A>,
    {
        let mut tree = HTree {
            nodes: Vec::new(),
            path: Vec::new(),
        };
        tree.push_node(env, root);
        tree
    }

    fn push_node<E>(&mut self, env: &E, state: S) -> usize
    where
        E: Environment<State = S, Action = A>,
    {
        let terminal = env.is_terminal(&state);
        let actions = if terminal {
            Vec::new()
        } else {
            env.actions(&state)
        };
        let k = actions.len();
        self.nodes.push(HNode {
            state,
            terminal,
            actions,
            stats: vec![ArmStats::default(); k],
            visits: 0,
            children: Vec::new(),
            untried: (0..k).collect(),
        });
        self.nodes.len() - 1
    }

    pub fn root(&self) -> &HNode<S, A> {
        &self.nodes[0]
    }

    pub fn nodes(&self) -> &[HNode<S, A>] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Selection, expansion, simulation and backpropagation, once.
    pub fn iterate<E>(
        &mut self,
        env: &E,
        cfg: &HConfig,
        budget: &mut Budget,
        rng: &mut RngStream,
    ) -> IterationSummary
    where
        E: Environment<State = S, Action = A>,
    {
        let before = self.nodes.len();
        let mut path = std::mem::take(&mut self.path);
        path.clear();
        let mut id = 0;

        let (leaf, reward) = loop {
            let node = &mut self.nodes[id];
            if node.terminal {
                break (id, env.terminal_reward(&node.state));
            }

            let (a, untried) = if node.untried.is_empty() {
                (self.best_uct(id, cfg.exploration, rng), false)
            } else {
                let k = rng.below(node.untried.len());
                (node.untried.swap_remove(k), true)
            };

            let node = &self.nodes[id];
            let next = step(env, &node.state, node.actions[a], rng, budget);
            path.push((id, a));

            let known = if untried {
                None
            } else {
                node.children
                    .iter()
                    .find(|(b, s, _)| *b == a && *s == next)
                    .map(|&(_, _, c)| c)
            };
            match known {
                Some(child) => id = child,
                None => {
                    let child = self.push_node(env, next.clone());
                    self.nodes[id].children.push((a, next.clone(), child));
                    let reward = if self.nodes[child].terminal {
                        env.terminal_reward(&next)
                    } else {
                        rollout(env, &next, cfg.rollout_depth, rng, budget).reward
                    };
                    break (child, reward);
                }
            }
        };

        for &(node, a) in &path {
            let node = &mut self.nodes[node];
            node.stats[a].record(reward);
            node.visits += 1;
        }
        self.nodes[leaf].visits += 1;

        let path_len = path.len() + 1;
        self.path = path;
        IterationSummary {
            reward,
            new_nodes: self.nodes.len() - before,
            path_len,
        }
    }

    fn best_uct(&self, id: usize, exploration: f64, rng: &mut RngStream) -> usize {
        let node = &self.nodes[id];
        let n = node.visits as f64;
        let mut best = f64::NEG_INFINITY;
        let mut ties = 0;
        for stats in &node.stats {
            let v = uct(stats, n, exploration);
            if v > best {
                best = v;
                ties = 1;
            } else if v == best {
                ties += 1;
            }
        }
        // same draw as choosing from the list of tied arms
        let k = rng.below(ties);
        node.stats
            .iter()
            .enumerate()
            .filter(|(_, s)| uct(s, n, exploration) == best)
            .nth(k)
            .map(|(j, _)| j)
            .expect("tie index in range")
    }

    /// Most visited root action; ties go to the higher mean, then to the stream.
    pub fn recommend(&self, rng: &mut RngStream) -> usize {
        let root = self.root();
        let key = |j: usize| {
            (
                root.stats[j].pulls,
                root.stats[j].mean().unwrap_or(f64::NEG_INFINITY),
            )
        };
        let best = (0..root.actions.len())
            .map(key)
            .max_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)))
            .expect("root has actions");
        let ties: Vec<usize> = (0..root.actions.len())
            .filter(|&j| key(j) == best)
            .collect();
        *rng.choose(&ties)
    }
}

#[derive(Debug, Clone)]
pub struct HSearchResult<A> {
    pub action: A,
    pub iterations: u64,
    pub root_visits: Vec<u64>,
    pub root_means: Vec<Option<f64>>,
}

/// Runs iterations from a fresh root while the budget lasts.
pub fn h_search<E: Environment>(
    state: &E::State,
    env: &E,
    cfg: &HConfig,
    budget: &mut Budget,
    rng: &mut RngStream,
) -> Result<HSearchResult<E::Action>> {
    ensure_searchable(env, state)?;
    let mut tree = HTree::new(env, state.clone());
    let mut iterations = 0;
    while !budget.exhausted() {
        tree.iterate(env, cfg, budget, rng);
        iterations += 1;
    }
    let root = tree.root();
    let action = root.actions[tree.recommend(rng)];
    Ok(HSearchResult {
        action,
        iterations,
        root_visits: root.stats.iter().map(|s| s.pulls).collect(),
        root_means: root.stats.iter().map(ArmStats::mean).collect(),
    })
}

/// H-MCTS as an episode [`Agent`].
#[derive(Debug, Clone)]
pub struct HMcts {
    pub config: HConfig,
}

impl HMcts {
    pub fn new(config: HConfig) -> Self {
        HMcts { config }
    }
}

impl<E: Environment> Agent<E> for HMcts {
    fn select_action(
        &mut self,
        env: &E,
        state: &E::State,
        budget: &mut Budget,
        rng: &mut RngStream,
    ) -> Result<E::Action> {
        Ok(h_search(state, env, &self.config, budget, rng)?.action)
    }
}

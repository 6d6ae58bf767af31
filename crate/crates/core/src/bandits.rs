//! Upper confidence bounds for numeric and pairwise (dueling) bandits.
//!
//! The dueling side follows relative UCB: every node keeps a win matrix `W`,
//! derives optimistic pairwise win rates `U`, keeps the actions that could
//! still be a Condorcet winner and tests one of them against the action most
//! likely to beat it.

use crate::error::{Error, Result};
use crate::search::RngStream;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ArmStats {
    pub reward_sum: f64,
    pub pulls: u64,
}

impl ArmStats {
    pub fn record(&mut self, reward: f64) {
        self.reward_sum += reward;
        self.pulls += 1;
    }

    /// Mean reward, or `None` before the first pull.
    pub fn mean(&self) -> Option<f64> {
        (self.pulls > 0).then(|| self.reward_sum / self.pulls as f64)
    }
}

/// `mean + sqrt(2 ln n / n_j)` where `n` is the total number of pulls;
/// unpulled arms are `+inf`.
pub fn ucb1(stats: &ArmStats, n: f64) -> f64 {
    uct(stats, n, 0.5)
}

/// `mean + 2 C_p sqrt(2 ln n / n_j)`; unpulled arms are `+inf`.
pub fn uct(stats: &ArmStats, n: f64, exploration: f64) -> f64 {
    match stats.mean() {
        None => f64::INFINITY,
        Some(mean) => mean + 2.0 * exploration * (2.0 * n.ln() / stats.pulls as f64).sqrt(),
    }
}

/// Optimistic win rate of `i` over `j` given `w_ij` wins of i and `w_ji` of j.
///
/// `alpha_hat` folds the scale factor and the RUCB exploration parameter into
/// a single positive constant. Pairs never compared are `+inf`.
pub fn rucb_bound(w_ij: f64, w_ji: f64, t: u64, alpha_hat: f64) -> f64 {
    bound_with_log(w_ij, w_ji, (t as f64).ln(), alpha_hat)
}

fn bound_with_log(w_ij: f64, w_ji: f64, ln_t: f64, alpha_hat: f64) -> f64 {
    let n = w_ij + w_ji;
    if n == 0.0 {
        return f64::INFINITY;
    }
    w_ij / n + (alpha_hat * ln_t / n).sqrt()
}

/// Result of one pairwise comparison, from the point of view of the first item.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preference {
    First,
    Second,
    Indifferent,
}

impl Preference {
    pub fn reversed(self) -> Preference {
        match self {
            Preference::First => Preference::Second,
            Preference::Second => Preference::First,
            Preference::Indifferent => Preference::Indifferent,
        }
    }
}

/// Square matrix of pairwise win credit; entry `(i, j)` is the credit of
/// action `i` over action `j`. Ties give half a credit to each side.
#[derive(Debug, Clone, PartialEq)]
pub struct PreferenceMatrix {
    size: usize,
    wins: Vec<f64>,
}

impl PreferenceMatrix {
    pub fn new(size: usize) -> Self {
        PreferenceMatrix {
            size,
            wins: vec![0.0; size * size],
        }
    }

    /// Builds a matrix from row-major entries. The diagonal must be zero.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let size = rows.len();
        let mut m = PreferenceMatrix::new(size);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != size {
                return Err(Error::InvalidConfig(
                    "preference matrix must be square".into(),
                ));
            }
            for (j, &w) in row.iter().enumerate() {
                if !(w >= 0.0) || (i == j && w != 0.0) {
                    return Err(Error::InvalidConfig(format!("bad entry w[{i}][{j}] = {w}")));
                }
                m.wins[i * size + j] = w;
            }
        }
        Ok(m)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.wins[i * self.size + j]
    }

    /// Number of comparisons recorded between `i` and `j`.
    pub fn pair_mass(&self, i: usize, j: usize) -> f64 {
        self.get(i, j) + self.get(j, i)
    }

    /// Number of comparisons recorded at this node.
    pub fn total_mass(&self) -> f64 {
        self.wins.iter().sum()
    }

    /// Credits one comparison between distinct actions `i` and `j`.
    pub fn record(&mut self, i: usize, j: usize, outcome: Preference) -> Result<()> {
        if i == j {
            return Err(Error::SelfComparison(i));
        }
        let (ij, ji) = (i * self.size + j, j * self.size + i);
        match outcome {
            Preference::First => self.wins[ij] += 1.0,
            Preference::Second => self.wins[ji] += 1.0,
            Preference::Indifferent => {
                self.wins[ij] += 0.5;
                self.wins[ji] += 0.5;
            }
        }
        Ok(())
    }

    /// Copeland score: opponents `j` with `w_ij / (w_ij + w_ji) > 1/2`.
    pub fn copeland(&self, i: usize) -> usize {
        (0..self.size)
            .filter(|&j| j != i && self.get(i, j) > self.get(j, i))
            .count()
    }

    /// Share of all comparisons involving `i` that `i` won; 0 with no data.
    pub fn win_fraction(&self, i: usize) -> f64 {
        let (mut won, mut total) = (0.0, 0.0);
        for j in 0..self.size {
            won += self.get(i, j);
            total += self.pair_mass(i, j);
        }
        if total == 0.0 {
            0.0
        } else {
            won / total
        }
    }

    /// Matrix of [`rucb_bound`] values with the diagonal fixed at 1/2.
    pub fn bounds(&self, t: u64, alpha_hat: f64) -> BoundMatrix {
        let n = self.size;
        let mut u = vec![0.5; n * n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    u[i * n + j] = rucb_bound(self.get(i, j), self.get(j, i), t, alpha_hat);
                }
            }
        }
        BoundMatrix { size: n, bounds: u }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundMatrix {
    size: usize,
    bounds: Vec<f64>,
}

impl BoundMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let size = rows.len();
        BoundMatrix {
            size,
            bounds: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.bounds[i * self.size + j]
    }
}

/// Actions `c` with `u_cj >= 1/2` for every `j`. May be empty.
pub fn condorcet_candidates(u: &BoundMatrix) -> Vec<usize> {
    (0..u.size())
        .filter(|&c| (0..u.size()).all(|j| u.get(c, j) >= 0.5))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairSelection {
    pub first: usize,
    pub second: usize,
    pub candidates: Vec<usize>,
}

/// Picks a Condorcet candidate and its strongest challenger.
///
/// The first action is uniform over the candidates, except that a previous
/// pick still in the candidate set is kept with probability 1/2; with no
/// candidates it is uniform over all actions. The second action maximizes
/// `u_{l, first}` over every `l`, including `first` itself at 1/2, with ties
/// broken uniformly. The caller stores `first` as the next `last_pick`.
///
/// Stream usage: one `below` draw for the first action (a `coin` followed by
/// an optional `below` when the previous pick competes with others), then one
/// `below` draw over the tied maximizers when there is more than one.
pub fn select_action_pair(
    w: &PreferenceMatrix,
    last_pick: Option<usize>,
    t: u64,
    alpha_hat: f64,
    rng: &mut RngStream,
) -> PairSelection {
    let n = w.size();
    assert!(n > 0, "pair selection needs at least one action");
    let ln_t = (t as f64).ln();
    let u = |i: usize, j: usize| {
        if i == j {
            0.5
        } else {
            bound_with_log(w.get(i, j), w.get(j, i), ln_t, alpha_hat)
        }
    };
    let candidates: Vec<usize> = (0..n).filter(|&c| (0..n).all(|j| u(c, j) >= 0.5)).collect();

    let first = match last_pick.filter(|b| candidates.contains(b)) {
        _ if candidates.is_empty() => rng.below(n),
        Some(b) if candidates.len() == 1 => b,
        Some(b) => {
            if rng.coin() {
                b
            } else {
                let others: Vec<usize> = candidates.iter().copied().filter(|&c| c != b).collect();
                *rng.choose(&others)
            }
        }
        None => *rng.choose(&candidates),
    };

    let mut best = f64::NEG_INFINITY;
    let mut ties = 0;
    for l in 0..n {
        let v = u(l, first);
        if v > best {
            best = v;
            ties = 1;
        } else if v == best {
            ties += 1;
        }
    }
    let k = rng.below(ties);
    let second = (0..n)
        .filter(|&l| u(l, first) == best)
        .nth(k)
        .expect("tie index in range");

    PairSelection {
        first,
        second,
        candidates,
    }
}

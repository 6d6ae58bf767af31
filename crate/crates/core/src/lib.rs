//! Monte Carlo tree search driven by numeric or by purely ordinal feedback.
//!
//! Two agents share one [`search::Environment`] contract and one
//! transition-sample budget:
//!
//! - [`hmcts`]: UCT search with depth-capped rollouts scored by a numeric
//!   heuristic in `[0, 1]`.
//! - [`pbmcts`]: preference-based search where every node runs a relative-UCB
//!   dueling bandit, explores a pair of actions per visit and only ever
//!   compares rollout outcomes.
//!
//! [`puzzle8`] is the reference domain (boards, Manhattan distance with linear
//! conflicts, an exhaustive distance table) and [`harness`] runs reproducible
//! hyperparameter sweeps and summarises them as win-rate curves.
//!
//! ```
//! use prefsearch::pbmcts::{pb_search, PBConfig};
//! use prefsearch::puzzle8::{Board, Puzzle8};
//! use prefsearch::search::{Budget, RngStream};
//!
//! let start: Board = "123456078".parse().unwrap();
//! let env = Puzzle8::new(start);
//! let cfg = PBConfig { alpha_hat: 0.5, rollout_depth: 10 };
//! let mut budget = Budget::new(500);
//! let res = pb_search(&start, &env, &cfg, &mut budget, &mut RngStream::new(7)).unwrap();
//! println!("play {}", res.action);
//! ```

pub mod bandits;
pub mod cli;
pub mod error;
pub mod harness;
pub mod hmcts;
pub mod pbmcts;
pub mod puzzle8;
pub mod search;

pub use error::{Error, Result};

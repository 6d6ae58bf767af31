//! Plugs a new domain into both agents.
//!
//! The domain is a noisy walk on a line: move left or right, but one step in
//! five slips the other way. The agents only see the `Environment` trait; the
//! preference agent never looks at numbers, only at the ordinal key.

use prefsearch::hmcts::{h_search, HConfig};
use prefsearch::pbmcts::{pb_search, PBConfig};
use prefsearch::search::{Budget, Environment, OrdinalKey, RngStream};

const GOAL: i32 = 12;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Step {
    Left,
    Right,
}

struct SlipperyLine {
    start: i32,
}

impl Environment for SlipperyLine {
    type State = i32;
    type Action = Step;

    fn start(&self) -> i32 {
        self.start
    }

    fn actions(&self, _: &i32) -> Vec<Step> {
        vec![Step::Left, Step::Right]
    }

    fn sample_transition(&self, s: &i32, a: Step, rng: &mut RngStream) -> i32 {
        let dir = if a == Step::Right { 1 } else { -1 };
        if rng.below(5) == 0 {
            s - dir
        } else {
            s + dir
        }
    }

    fn is_terminal(&self, s: &i32) -> bool {
        *s == GOAL
    }

    fn terminal_reward(&self, _: &i32) -> f64 {
        1.0
    }

    fn heuristic_numeric(&self, s: &i32) -> f64 {
        1.0 / (1.0 + (GOAL - s).abs() as f64)
    }

    fn heuristic_ordinal(&self, s: &i32) -> OrdinalKey {
        OrdinalKey::NonGoal((GOAL - s).abs() as f64)
    }
}

fn main() -> prefsearch::Result<()> {
    let env = SlipperyLine { start: 0 };
    let mut rng = RngStream::new(11);
    let mut h_state = env.start();
    let mut p_state = env.start();
    let (mut h_moves, mut p_moves) = (0, 0);

    for _ in 0..60 {
        if !env.is_terminal(&h_state) {
            let cfg = HConfig {
                exploration: 0.5,
                rollout_depth: 5,
            };
            let res = h_search(&h_state, &env, &cfg, &mut Budget::new(2_000), &mut rng)?;
            h_state = env.sample_transition(&h_state, res.action, &mut rng);
            h_moves += 1;
        }
        if !env.is_terminal(&p_state) {
            let cfg = PBConfig {
                alpha_hat: 0.5,
                rollout_depth: 5,
            };
            let res = pb_search(&p_state, &env, &cfg, &mut Budget::new(2_000), &mut rng)?;
            p_state = env.sample_transition(&p_state, res.action, &mut rng);
            p_moves += 1;
        }
    }
    println!("hmcts at {h_state} after {h_moves} moves");
    println!("pbmcts at {p_state} after {p_moves} moves");
    Ok(())
}

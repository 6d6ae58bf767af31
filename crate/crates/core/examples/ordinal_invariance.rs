//! Replaces the heuristic cost by a monotone transform and checks which agent
//! notices. The preference agent plays the same moves; the numeric agent
//! generally does not.

use prefsearch::hmcts::{HConfig, HMcts};
use prefsearch::pbmcts::{PBConfig, PbMcts};
use prefsearch::puzzle8::{Board, CostTransform, Puzzle8};
use prefsearch::search::{play_episode, MAX_EPISODE_STEPS};

fn main() -> prefsearch::Result<()> {
    let start: Board = "413726580".parse()?;
    let budget = 5_000;
    let seed = 42;
    let transforms = [
        ("h", CostTransform::identity()),
        ("2h", CostTransform::new(|h| 2.0 * h)),
        ("h^3 + 5", CostTransform::new(|h| h * h * h + 5.0)),
        ("exp(h/10)", CostTransform::new(|h| (h / 10.0).exp())),
    ];

    for (name, f) in &transforms {
        let env = Puzzle8::new(start).with_transform(f.clone());
        let mut pb = PbMcts::new(PBConfig {
            alpha_hat: 0.5,
            rollout_depth: 10,
        });
        let mut h = HMcts::new(HConfig {
            exploration: 0.5,
            rollout_depth: 10,
        });
        let p = play_episode(&mut pb, &env, MAX_EPISODE_STEPS, budget, seed)?;
        let n = play_episode(&mut h, &env, MAX_EPISODE_STEPS, budget, seed)?;
        let path = |moves: &[prefsearch::puzzle8::Move]| {
            moves
                .iter()
                .map(|m| m.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        println!("{name:>10}  pbmcts: {}", path(&p.actions));
        println!("{:>10}  hmcts:  {}", "", path(&n.actions));
    }
    Ok(())
}

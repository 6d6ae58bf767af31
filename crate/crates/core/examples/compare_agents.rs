//! Plays a handful of episodes with both agents from the same starts and
//! prints win rates, moves and throughput.
//!
//! ```text
//! cargo run --release --example compare_agents -- [budget] [episodes] [distance]
//! ```

use std::time::Instant;

use prefsearch::harness::{Algorithm, RunConfig, StartPolicy, Tradeoff};
use prefsearch::puzzle8::{DistanceTable, Goal};

fn main() -> prefsearch::Result<()> {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let budget = args.first().copied().unwrap_or(10_000);
    let episodes = args.get(1).copied().unwrap_or(10);
    let distance = args.get(2).copied().unwrap_or(20) as u32;

    let table = DistanceTable::build(&Goal::default());
    let starts = StartPolicy::Random {
        distance: Some(distance),
    };

    for (algorithm, rollout_len, tradeoff) in
        [(Algorithm::Hmcts, 10, 0.5), (Algorithm::Pbmcts, 10, 0.5)]
    {
        let config = RunConfig {
            algorithm,
            rollout_len,
            tradeoff: Tradeoff::new(tradeoff)?,
            budget,
        };
        let clock = Instant::now();
        let (mut wins, mut samples, mut moves) = (0, 0, 0);
        for episode in 0..episodes {
            let start = starts.board(1, episode, Some(&table))?;
            let result = config.play(start, config.episode_seed(1, episode))?;
            wins += result.win as u64;
            samples += result.total_samples();
            moves += result.moves_played;
        }
        let secs = clock.elapsed().as_secs_f64();
        println!(
            "{config}: won {wins}/{episodes}, {:.1} moves/episode, {:.2e} samples/s, {secs:.1}s",
            moves as f64 / episodes as f64,
            samples as f64 / secs,
        );
    }
    Ok(())
}

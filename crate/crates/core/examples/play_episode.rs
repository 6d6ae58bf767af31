//! Plays a full episode with a fixed per-move budget and prints the path.
//!
//! ```text
//! cargo run --release --example play_episode -- [hmcts|pbmcts] [board] [budget]
//! ```

use prefsearch::harness::{Algorithm, RunConfig, Tradeoff};
use prefsearch::puzzle8::{Board, Goal};

fn main() -> prefsearch::Result<()> {
    let mut args = std::env::args().skip(1);
    let algorithm: Algorithm = args.next().as_deref().unwrap_or("pbmcts").parse()?;
    let start: Board = args.next().as_deref().unwrap_or("867254301").parse()?;
    let budget = args.next().and_then(|b| b.parse().ok()).unwrap_or(50_000);

    let config = RunConfig {
        algorithm,
        rollout_len: 10,
        tradeoff: Tradeoff::new(0.5)?,
        budget,
    };
    let result = config.play(start, config.episode_seed(0, 0))?;

    let goal = Goal::default();
    let mut board = start;
    println!("start {board} (mdc {})", goal.mdc(&board));
    for (i, m) in result.actions.iter().enumerate() {
        board = board.apply(*m)?;
        println!(
            "{:>3} {m:<5} {board}  mdc {:>2}  samples {}",
            i + 1,
            goal.mdc(&board),
            result.samples_per_move[i]
        );
    }
    println!(
        "{} after {} moves, {} samples",
        if result.win { "solved" } else { "not solved" },
        result.moves_played,
        result.total_samples()
    );
    Ok(())
}

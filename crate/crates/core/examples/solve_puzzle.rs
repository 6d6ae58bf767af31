//! Runs one search per agent from a board and shows what each one learned at
//! the root.
//!
//! ```text
//! cargo run --release --example solve_puzzle -- [board] [budget]
//! ```

use prefsearch::hmcts::{h_search, HConfig};
use prefsearch::pbmcts::{pb_search, PBConfig};
use prefsearch::puzzle8::{Board, Puzzle8};
use prefsearch::search::{Budget, RngStream};

fn main() -> prefsearch::Result<()> {
    let mut args = std::env::args().skip(1);
    let board: Board = args.next().as_deref().unwrap_or("413726580").parse()?;
    let budget: u64 = args.next().and_then(|b| b.parse().ok()).unwrap_or(20_000);

    let env = Puzzle8::new(board);
    let goal = env.goal();
    println!(
        "{board}: manhattan {}, with linear conflicts {}",
        goal.manhattan(&board),
        goal.mdc(&board)
    );
    let moves = board.legal_moves();

    let mut spent = Budget::new(budget);
    let h = h_search(
        &board,
        &env,
        &HConfig {
            exploration: 0.5,
            rollout_depth: 10,
        },
        &mut spent,
        &mut RngStream::new(1),
    )?;
    println!(
        "\nhmcts plays {} after {} iterations ({} samples)",
        h.action,
        h.iterations,
        spent.used()
    );
    for (m, (visits, mean)) in moves.iter().zip(h.root_visits.iter().zip(&h.root_means)) {
        println!(
            "  {m:<5} visits {visits:>6}  mean {:.4}",
            mean.unwrap_or(f64::NAN)
        );
    }

    let mut spent = Budget::new(budget);
    let p = pb_search(
        &board,
        &env,
        &PBConfig {
            alpha_hat: 0.5,
            rollout_depth: 10,
        },
        &mut spent,
        &mut RngStream::new(1),
    )?;
    println!(
        "\npbmcts plays {} after {} iterations ({} samples)",
        p.action,
        p.iterations,
        spent.used()
    );
    for (i, m) in moves.iter().enumerate() {
        let row: Vec<String> = (0..moves.len())
            .map(|j| format!("{:>6}", p.root_wins.get(i, j)))
            .collect();
        println!(
            "  {m:<5} {}   copeland {}",
            row.join(""),
            p.root_wins.copeland(i)
        );
    }
    Ok(())
}

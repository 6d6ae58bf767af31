//! Walks through relative-UCB pair selection on a few hand-made win matrices.

use prefsearch::bandits::{condorcet_candidates, select_action_pair, PreferenceMatrix};
use prefsearch::search::RngStream;

fn show(
    name: &str,
    rows: &[Vec<f64>],
    last: Option<usize>,
    t: u64,
    alpha: f64,
) -> prefsearch::Result<()> {
    let w = PreferenceMatrix::from_rows(rows)?;
    let u = w.bounds(t, alpha);
    println!("{name} (t = {t}, alpha = {alpha})");
    for i in 0..w.size() {
        let bounds: Vec<String> = (0..w.size())
            .map(|j| format!("{:>7.3}", u.get(i, j)))
            .collect();
        println!("  u[{i}] {}", bounds.join(""));
    }
    println!("  candidates {:?}", condorcet_candidates(&u));
    let mut rng = RngStream::new(3);
    let mut tally = vec![vec![0u32; w.size()]; w.size()];
    for _ in 0..1000 {
        let pick = select_action_pair(&w, last, t, alpha, &mut rng);
        tally[pick.first][pick.second] += 1;
    }
    println!("  pairs drawn over 1000 selections (row = first, column = second):");
    for (i, row) in tally.iter().enumerate() {
        println!("    {i}: {row:?}");
    }
    Ok(())
}

fn main() -> prefsearch::Result<()> {
    show(
        "fresh node",
        &[vec![0.0; 3], vec![0.0; 3], vec![0.0; 3]],
        None,
        1,
        0.5,
    )?;
    show(
        "rock-paper-scissors",
        &[
            vec![0.0, 30.0, 0.0],
            vec![0.0, 0.0, 30.0],
            vec![30.0, 0.0, 0.0],
        ],
        None,
        90,
        0.5,
    )?;
    show(
        "clear winner",
        &[vec![0.0, 0.0], vec![40.0, 0.0]],
        Some(1),
        41,
        0.5,
    )?;
    show(
        "close duel",
        &[vec![0.0, 6.0], vec![4.0, 0.0]],
        Some(0),
        10,
        0.5,
    )?;
    Ok(())
}

//! Builds the exhaustive distance table, prints the distance histogram and how
//! tight the heuristic is, and optionally caches the table on disk.
//!
//! ```text
//! cargo run --release --example distance_table -- [cache-file]
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter};

use prefsearch::puzzle8::{DistanceTable, Goal};
use prefsearch::search::RngStream;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let goal = Goal::default();
    let table = DistanceTable::build(&goal);
    println!("{} boards, diameter {}", table.len(), table.max_distance());

    println!("dist  boards  mean md  mean mdc");
    for d in 0..=table.max_distance() {
        let boards = table.boards_at(d);
        let n = boards.len() as f64;
        let md: f64 = boards.iter().map(|b| goal.manhattan(b) as f64).sum::<f64>() / n;
        let mdc: f64 = boards.iter().map(|b| goal.mdc(b) as f64).sum::<f64>() / n;
        println!("{d:>4}  {:>6}  {md:>7.2}  {mdc:>8.2}", boards.len());
    }

    let mut rng = RngStream::new(20);
    let hardest = table.random_at_distance(table.max_distance(), &mut rng)?;
    println!("a hardest board: {hardest}");

    if let Some(path) = std::env::args().nth(1) {
        table.write_binary(BufWriter::new(File::create(&path)?))?;
        let back = DistanceTable::read_binary(BufReader::new(File::open(&path)?))?;
        println!("cached to {path}, reread {} boards", back.len());
    }
    Ok(())
}

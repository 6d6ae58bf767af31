//! Runs a small hyperparameter sweep, saves the records as CSV and prints the
//! best-configuration and percentile curves as plot data.
//!
//! ```text
//! cargo run --release --example sweep_and_report -- [out.csv] [workers]
//! ```

use prefsearch::harness::{
    max_curve, percentile_curves, run_sweep, write_csv, write_plot_data, Algorithm, StartPolicy,
    SweepGrid, Tradeoff, PERCENTILE_LEVELS,
};

fn main() -> prefsearch::Result<()> {
    let mut args = std::env::args().skip(1);
    let out = args.next().unwrap_or_else(|| "sweep.csv".to_string());
    let workers = args.next().and_then(|w| w.parse().ok()).unwrap_or(1);

    let grid = SweepGrid {
        algorithms: Algorithm::ALL.to_vec(),
        rollout_lengths: vec![5, 25],
        tradeoffs: [2, 5, 10].map(Tradeoff::from_tenths).to_vec(),
        budgets: vec![300, 1_000, 3_000],
        runs: 10,
        start: StartPolicy::Random { distance: Some(10) },
        seed: 7,
    };
    print!("{}", grid.to_text());
    let records = run_sweep(&grid, workers)?;
    write_csv(&records, &out)?;
    println!("# {} records written to {out}\n", records.len());

    let mut rows = Vec::new();
    for algo in Algorithm::ALL {
        let mut curves = max_curve(&records, algo)?;
        curves.extend(percentile_curves(&records, algo, &PERCENTILE_LEVELS[1..])?);
        rows.extend(curves.into_iter().map(|mut r| {
            r.label = format!("{algo}:{}", r.label);
            r
        }));
    }
    write_plot_data(&rows, std::io::stdout().lock()).map_err(|e| prefsearch::Error::Io {
        path: "<stdout>".into(),
        source: e,
    })?;
    Ok(())
}

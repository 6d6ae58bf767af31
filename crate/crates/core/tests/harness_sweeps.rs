use proptest::prelude::*;

use prefsearch::harness::{
    max_curve, percentile_curves, read_csv, read_csv_from, read_plot_data, run_sweep, write_csv,
    write_csv_to, write_plot_data, Algorithm, RunConfig, RunRecord, StartPolicy, SweepGrid,
    Tradeoff, PERCENTILE_LEVELS,
};
use prefsearch::puzzle8::{Board, Goal};

fn tiny_grid(runs: u64) -> SweepGrid {
    SweepGrid {
        algorithms: vec![Algorithm::Pbmcts],
        rollout_lengths: vec![10],
        tradeoffs: vec![Tradeoff::from_tenths(5)],
        budgets: vec![200],
        runs,
        start: StartPolicy::Random { distance: Some(6) },
        seed: 11,
    }
}

#[test]
fn tiny_sweep_has_one_record_per_episode() {
    let records = run_sweep(&tiny_grid(3), 1).unwrap();
    assert_eq!(records.len(), 3);
    let episodes: Vec<u64> = records.iter().map(|r| r.episode).collect();
    assert_eq!(episodes, vec![0, 1, 2]);
    assert!(records[0].seed != records[1].seed && records[1].seed != records[2].seed);
    for r in &records {
        assert!(Goal::default().is_solvable(&r.start));
        assert!(r.moves <= 100);
        if r.moves < 100 {
            assert!(r.win);
        }
    }
}

#[test]
fn worker_count_does_not_change_records() {
    let mut grid = tiny_grid(3);
    grid.algorithms = Algorithm::ALL.to_vec();
    grid.rollout_lengths = vec![5, 25];
    let one = run_sweep(&grid, 1).unwrap();
    let four = run_sweep(&grid, 4).unwrap();
    assert_eq!(one.len(), 12);
    assert_eq!(one, four);
}

#[test]
fn starts_are_shared_across_configs() {
    let mut grid = tiny_grid(2);
    grid.algorithms = Algorithm::ALL.to_vec();
    let records = run_sweep(&grid, 1).unwrap();
    let starts = |a: Algorithm| -> Vec<Board> {
        records
            .iter()
            .filter(|r| r.config.algorithm == a)
            .map(|r| r.start)
            .collect()
    };
    assert_eq!(starts(Algorithm::Hmcts), starts(Algorithm::Pbmcts));
}

#[test]
fn more_runs_extend_fewer_runs() {
    let small = run_sweep(&tiny_grid(2), 1).unwrap();
    let large = run_sweep(&tiny_grid(4), 1).unwrap();
    assert_eq!(&large[..2], &small[..]);
}

#[test]
fn bad_grids_are_rejected() {
    let mut g = tiny_grid(1);
    g.runs = 0;
    assert!(run_sweep(&g, 1).is_err());
    assert!(run_sweep(&tiny_grid(1), 0).is_err());
    assert!(SweepGrid::parse("budgets = 100\nnonsense").is_err());
    assert!(SweepGrid::parse("colour = blue").is_err());
    assert!(SweepGrid::parse("tradeoffs = 0.0").is_err());
}

#[test]
fn grid_text_roundtrip() {
    let g = SweepGrid::default();
    assert_eq!(g.configs().len(), 2 * 4 * 10 * 15);
    assert_eq!(SweepGrid::parse(&g.to_text()).unwrap(), g);
    let t = tiny_grid(7);
    assert_eq!(SweepGrid::parse(&t.to_text()).unwrap(), t);
}

#[test]
fn csv_file_roundtrip() {
    let records = run_sweep(&tiny_grid(2), 1).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    write_csv(&records, &path).unwrap();
    assert_eq!(read_csv(&path).unwrap(), records);
    assert!(read_csv(dir.path().join("absent.csv")).is_err());
}

/// `wins` wins out of `runs` for one configuration.
fn synthetic(
    algorithm: Algorithm,
    rollout_len: usize,
    tenths: u32,
    budget: u64,
    wins: u64,
    runs: u64,
) -> Vec<RunRecord> {
    (0..runs)
        .map(|episode| RunRecord {
            config: RunConfig {
                algorithm,
                rollout_len,
                tradeoff: Tradeoff::from_tenths(tenths),
                budget,
            },
            episode,
            seed: episode,
            start: Board::solved(),
            win: episode < wins,
            moves: 1,
            samples_used: budget,
        })
        .collect()
}

#[test]
fn best_configuration_curve_reproduces_published_points() {
    let mut records = Vec::new();
    for (budget, best) in [(100_000, 82), (200_000, 91), (500_000, 100)] {
        records.extend(synthetic(Algorithm::Pbmcts, 10, 5, budget, best, 100));
        records.extend(synthetic(Algorithm::Pbmcts, 50, 2, budget, best - 20, 100));
        records.extend(synthetic(Algorithm::Hmcts, 10, 5, budget, 3, 100));
    }
    let curve = max_curve(&records, Algorithm::Pbmcts).unwrap();
    let points: Vec<(u64, f64)> = curve.iter().map(|r| (r.budget, r.win_rate)).collect();
    assert_eq!(
        points,
        vec![(100_000, 0.82), (200_000, 0.91), (500_000, 1.0)]
    );
}

fn rates_strategy() -> impl Strategy<Value = Vec<Vec<RunRecord>>> {
    proptest::collection::vec(
        proptest::collection::vec((0u64..=10, 1u64..=10), 1..8),
        1..4,
    )
    .prop_map(|budgets| {
        budgets
            .into_iter()
            .enumerate()
            .map(|(b, configs)| {
                configs
                    .into_iter()
                    .enumerate()
                    .flat_map(|(c, (wins, runs))| {
                        synthetic(
                            Algorithm::Hmcts,
                            5,
                            1 + c as u32,
                            1000 * (b as u64 + 1),
                            wins.min(runs),
                            runs,
                        )
                    })
                    .collect()
            })
            .collect()
    })
}

proptest! {
    #[test]
    fn percentiles_are_ordered_and_bounded_by_max(groups in rates_strategy()) {
        let records: Vec<RunRecord> = groups.concat();
        let max = max_curve(&records, Algorithm::Hmcts).unwrap();
        let rows = percentile_curves(&records, Algorithm::Hmcts, &PERCENTILE_LEVELS).unwrap();
        let budgets = max.len();
        prop_assert_eq!(rows.len(), budgets * PERCENTILE_LEVELS.len());
        for (i, m) in max.iter().enumerate() {
            let at: Vec<f64> = (0..PERCENTILE_LEVELS.len()).map(|l| rows[l * budgets + i].win_rate).collect();
            prop_assert_eq!(at[0], m.win_rate);
            prop_assert!(at.windows(2).all(|w| w[0] >= w[1]));
            prop_assert!(at.iter().all(|&r| r <= m.win_rate));
        }
    }

    #[test]
    fn csv_roundtrip(raw in proptest::collection::vec(
        (0usize..2, 0usize..4, 1u32..=30, 1u64..10_000_000, 0u64..1000, any::<u64>(), any::<bool>(), 0u64..=100),
        0..20,
    )) {
        let records: Vec<RunRecord> = raw
            .into_iter()
            .map(|(a, r, t, budget, episode, seed, win, moves)| RunRecord {
                config: RunConfig {
                    algorithm: Algorithm::ALL[a],
                    rollout_len: [5, 10, 25, 50][r],
                    tradeoff: Tradeoff::from_tenths(t),
                    budget,
                },
                episode,
                seed,
                start: "876543210".parse().unwrap(),
                win,
                moves,
                samples_used: budget * moves,
            })
            .collect();
        let mut buf = Vec::new();
        write_csv_to(&records, &mut buf).unwrap();
        prop_assert_eq!(read_csv_from(buf.as_slice()).unwrap(), records);
    }

    #[test]
    fn plot_data_roundtrip(groups in rates_strategy()) {
        let records: Vec<RunRecord> = groups.concat();
        let rows = percentile_curves(&records, Algorithm::Hmcts, &PERCENTILE_LEVELS).unwrap();
        let mut buf = Vec::new();
        write_plot_data(&rows, &mut buf).unwrap();
        prop_assert_eq!(read_plot_data(buf.as_slice()).unwrap(), rows);
    }
}

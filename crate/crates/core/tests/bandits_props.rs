use proptest::prelude::*;

use prefsearch::bandits::{
    condorcet_candidates, rucb_bound, select_action_pair, Preference, PreferenceMatrix,
};
use prefsearch::search::RngStream;

/// Direct transcription of the bound and candidate rules, written without
/// sharing code with the library.
fn oracle(w: &[Vec<f64>], t: u64, alpha: f64) -> (Vec<Vec<f64>>, Vec<usize>) {
    let n = w.len();
    let mut u = vec![vec![0.5; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let m = w[i][j] + w[j][i];
            u[i][j] = if m == 0.0 {
                f64::INFINITY
            } else {
                w[i][j] / m + (alpha * (t as f64).ln() / m).sqrt()
            };
        }
    }
    let c = (0..n).filter(|&i| u[i].iter().all(|&x| x >= 0.5)).collect();
    (u, c)
}

fn matrix() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (2usize..=4).prop_flat_map(|n| {
        proptest::collection::vec(proptest::collection::vec(0u32..30, n), n).prop_map(|rows| {
            rows.iter()
                .enumerate()
                .map(|(i, r)| {
                    r.iter()
                        .enumerate()
                        .map(|(j, &x)| if i == j { 0.0 } else { x as f64 })
                        .collect()
                })
                .collect()
        })
    })
}

proptest! {
    #[test]
    fn selection_matches_oracle(
        rows in matrix(),
        t in 1u64..1_000_000,
        last in proptest::option::of(0usize..4),
        seed in any::<u64>(),
    ) {
        let n = rows.len();
        let last = last.filter(|&l| l < n);
        let w = PreferenceMatrix::from_rows(&rows).unwrap();
        let (u, c) = oracle(&rows, t, 1.0);
        let mut rng = RngStream::new(seed);
        let pick = select_action_pair(&w, last, t, 1.0, &mut rng);
        prop_assert_eq!(&pick.candidates, &c);
        if c.is_empty() {
            prop_assert!(pick.first < n);
        } else {
            prop_assert!(c.contains(&pick.first));
        }
        let best = (0..n).map(|l| u[l][pick.first]).fold(f64::NEG_INFINITY, f64::max);
        prop_assert_eq!(u[pick.second][pick.first], best);
    }

    #[test]
    fn bound_falls_with_losses_and_grows_with_time(
        wins in 0u32..50, losses in 0u32..50, t in 2u64..100_000,
    ) {
        let (a, b) = (wins as f64, losses as f64);
        if a + b > 0.0 {
            prop_assert!(rucb_bound(a, b + 1.0, t, 1.0) < rucb_bound(a, b, t, 1.0));
        }
        prop_assert!(rucb_bound(a, b, t + 1, 1.0) >= rucb_bound(a, b, t, 1.0));
        if a + b > 0.0 {
            prop_assert!(rucb_bound(a, b, t, 1.0) >= a / (a + b));
        }
    }

    #[test]
    fn records_keep_pair_mass(ops in proptest::collection::vec((0usize..3, 0usize..3, 0u8..3), 0..40)) {
        let mut w = PreferenceMatrix::new(3);
        let mut expected = 0.0;
        for (i, j, o) in ops {
            let pref = [Preference::First, Preference::Second, Preference::Indifferent][o as usize];
            let res = w.record(i, j, pref);
            if i == j {
                prop_assert!(res.is_err());
            } else {
                prop_assert!(res.is_ok());
                expected += 1.0;
            }
        }
        prop_assert!((w.total_mass() - expected).abs() < 1e-9);
        for i in 0..3 {
            prop_assert_eq!(w.get(i, i), 0.0);
        }
    }
}

#[test]
fn previous_pick_kept_half_the_time() {
    // two candidates, neither beaten yet
    let w = PreferenceMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
    assert_eq!(condorcet_candidates(&w.bounds(4, 1.0)), vec![0, 1]);
    let mut rng = RngStream::new(99);
    let trials = 10_000;
    let kept = (0..trials)
        .filter(|_| select_action_pair(&w, Some(1), 4, 1.0, &mut rng).first == 1)
        .count();
    let rate = kept as f64 / trials as f64;
    assert!((rate - 0.5).abs() < 0.05, "kept rate {rate}");
}

#[test]
fn fresh_candidates_are_uniform() {
    let w = PreferenceMatrix::new(4);
    let mut rng = RngStream::new(3);
    let mut counts = [0usize; 4];
    for _ in 0..8000 {
        counts[select_action_pair(&w, None, 1, 1.0, &mut rng).first] += 1;
    }
    for c in counts {
        assert!((1700..2300).contains(&c), "{counts:?}");
    }
}

#[test]
fn half_split_bound_is_above_half() {
    // equal wins leave the candidate in C at any time step
    for t in [1u64, 10, 1000] {
        assert!(rucb_bound(5.0, 5.0, t, 1.0) >= 0.5);
    }
}

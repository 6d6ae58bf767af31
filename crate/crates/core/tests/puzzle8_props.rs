use std::sync::OnceLock;

use proptest::prelude::*;

use prefsearch::puzzle8::{
    normalized_value, random_solvable, Board, DistanceTable, Goal, Move, DIAMETER, H_MAX,
    REACHABLE_STATES,
};
use prefsearch::search::RngStream;
use prefsearch::Error;

fn table() -> &'static DistanceTable {
    static TABLE: OnceLock<DistanceTable> = OnceLock::new();
    TABLE.get_or_init(|| DistanceTable::build(&Goal::default()))
}

fn any_board() -> impl Strategy<Value = Board> {
    Just((0u8..9).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Board::new(v.try_into().unwrap()).unwrap())
}

proptest! {
    #[test]
    fn moves_preserve_permutation_and_parity(b in any_board()) {
        let goal = Goal::default();
        for m in b.legal_moves() {
            let next = b.apply(m).unwrap();
            let mut cells = *next.cells();
            cells.sort_unstable();
            prop_assert_eq!(cells, [0, 1, 2, 3, 4, 5, 6, 7, 8]);
            prop_assert_eq!(goal.is_solvable(&next), goal.is_solvable(&b));
            let (before, after) = (goal.manhattan(&b) as i64, goal.manhattan(&next) as i64);
            prop_assert_eq!((after - before).abs(), 1);
        }
    }

    #[test]
    fn illegal_moves_are_rejected(b in any_board()) {
        let legal = b.legal_moves();
        prop_assert!((2..=4).contains(&legal.len()));
        for m in Move::ALL {
            prop_assert_eq!(b.apply(m).is_ok(), legal.contains(&m));
        }
    }

    #[test]
    fn text_roundtrip(b in any_board()) {
        let text = b.to_string();
        prop_assert_eq!(text.len(), 9);
        prop_assert_eq!(text.parse::<Board>().unwrap(), b);
    }

    #[test]
    fn heuristic_value_orders_like_negative_mdc(a in any_board(), b in any_board()) {
        let goal = Goal::default();
        let (ha, hb) = (goal.mdc(&a), goal.mdc(&b));
        if !goal.is_goal(&a) && !goal.is_goal(&b) && ha < hb && (hb as f64) <= H_MAX {
            prop_assert!(goal.heuristic_value(&a) > goal.heuristic_value(&b));
        }
        if !goal.is_goal(&a) {
            prop_assert!(goal.heuristic_value(&a) < 1.0);
            prop_assert!(goal.heuristic_value(&a) > 0.0);
        }
    }

    #[test]
    fn solvable_iff_in_table(b in any_board()) {
        prop_assert_eq!(Goal::default().is_solvable(&b), table().distance(&b).is_some());
    }
}

#[test]
fn table_shape() {
    let t = table();
    assert_eq!(t.len(), REACHABLE_STATES);
    assert_eq!(t.max_distance(), DIAMETER);
    assert_eq!(t.distance(&Board::solved()), Some(0));
    assert_eq!(t.boards_at(0), vec![Board::solved()]);
    let one: Vec<String> = t.boards_at(1).iter().map(|b| b.to_string()).collect();
    assert_eq!(one, vec!["123450786", "123456708"]);
    // the two hardest positions for the standard goal
    assert_eq!(t.boards_at(31).len(), 2);
}

#[test]
fn swapped_tiles_unreachable() {
    let b: Board = "213456780".parse().unwrap();
    assert!(!Goal::default().is_solvable(&b));
    assert_eq!(table().distance(&b), None);
}

#[test]
fn random_boards_at_distance() {
    let mut rng = RngStream::new(17);
    assert_eq!(
        table().random_at_distance(0, &mut rng).unwrap(),
        Board::solved()
    );
    for _ in 0..20 {
        let b = table().random_at_distance(1, &mut rng).unwrap();
        assert!(["123450786", "123456708"].contains(&b.to_string().as_str()));
    }
    for d in [10, 20, 31] {
        let b = table().random_at_distance(d, &mut rng).unwrap();
        assert_eq!(table().distance(&b), Some(d));
    }
    assert!(matches!(
        table().random_at_distance(32, &mut rng),
        Err(Error::UnreachableDistance(32))
    ));
}

#[test]
fn random_solvable_covers_both_halves_of_the_grid() {
    let goal = Goal::default();
    let mut rng = RngStream::new(5);
    let mut blank_seen = [false; 9];
    for _ in 0..500 {
        let b = random_solvable(&goal, &mut rng);
        assert!(table().distance(&b).is_some());
        blank_seen[b.blank()] = true;
    }
    assert!(blank_seen.iter().all(|&s| s));
}

#[test]
fn binary_cache_roundtrip() {
    let mut buf = Vec::new();
    table().write_binary(&mut buf).unwrap();
    assert_eq!(buf.len(), REACHABLE_STATES * 10);
    // records are sorted by board string and start with the smallest one
    assert_eq!(&buf[..9], b"012345678");
    let first: Vec<&[u8]> = buf.chunks(10).map(|r| &r[..9]).collect();
    assert!(first.windows(2).all(|w| w[0] < w[1]));
    let back = DistanceTable::read_binary(buf.as_slice()).unwrap();
    assert_eq!(back.len(), REACHABLE_STATES);
    assert_eq!(back.goal(), Board::solved());
    for (b, d) in table().iter().step_by(997) {
        assert_eq!(back.distance(&b), Some(d));
    }
    assert!(DistanceTable::read_binary(&buf[..15]).is_err());
}

#[test]
fn non_default_goal_table() {
    let goal = Goal::new("012345678".parse().unwrap());
    let t = DistanceTable::build(&goal);
    assert_eq!(t.len(), REACHABLE_STATES);
    assert_eq!(t.max_distance(), DIAMETER);
    assert_eq!(t.distance(&goal.board()), Some(0));
}

#[test]
fn normalization_endpoint() {
    assert!((normalized_value(40.0) - 0.024_390_243_902_439_046).abs() < 1e-15);
    assert_eq!(normalized_value(55.0), normalized_value(40.0));
}

use knotmosaic::grid::Setting;
use knotmosaic::par::Exec;
use knotmosaic::search::{search_max_knot, search_max_knot_with, SearchMode};

#[test]
fn hexagonal_two_board_carries_only_trefoils() {
    let rec = search_max_knot(2, Setting::HexStandard, SearchMode::Exhaustive).unwrap();
    assert_eq!(rec.max_crossings, 3);
    assert_eq!(rec.bound, Some(3));
    assert!(!rec.exceeded_bound);
    assert_eq!(rec.witness.unwrap().crossing_count(), 3);
}

#[test]
fn square_four_board_max() {
    let rec = search_max_knot(4, Setting::Rect, SearchMode::Exhaustive).unwrap();
    assert_eq!((rec.max_crossings, rec.bound, rec.exceeded_bound), (3, Some(3), false));
}

#[test]
fn square_three_board_has_no_crossings() {
    let rec = search_max_knot(3, Setting::Rect, SearchMode::Exhaustive).unwrap();
    assert_eq!(rec.max_crossings, 0);
    assert_eq!(rec.bound, None);
}

#[test]
fn smoothing_reaches_the_bound_at_three() {
    let rec = search_max_knot(
        3,
        Setting::HexStandard,
        SearchMode::SaturatedSmoothing { max_smoothings: 2 },
    )
    .unwrap();
    assert_eq!(rec.max_crossings, 19);
    assert!(!rec.exceeded_bound);
    let a = rec.witness_analysis.unwrap();
    assert!(a.alternating && a.components == 1);
}

#[test]
fn size_guards() {
    for (r, s, mode) in [
        (3, Setting::HexStandard, SearchMode::Exhaustive),
        (5, Setting::Rect, SearchMode::Exhaustive),
        (
            4,
            Setting::HexStandard,
            SearchMode::SaturatedSmoothing { max_smoothings: 1 },
        ),
        (4, Setting::Rect, SearchMode::SaturatedSmoothing { max_smoothings: 1 }),
    ] {
        assert!(search_max_knot(r, s, mode).is_err(), "{s} r={r} {mode:?}");
    }
}

#[test]
fn randomized_runs_agree_across_executors() {
    let mode = SearchMode::Randomized {
        seed: 11,
        samples: 1500,
    };
    for s in [Setting::HexEnhanced, Setting::Rect] {
        let a = search_max_knot_with(Exec::Auto, 5, s, mode).unwrap();
        let b = search_max_knot_with(Exec::Sequential, 5, s, mode).unwrap();
        assert_eq!(
            (a.max_crossings, a.knots, a.witness.clone()),
            (b.max_crossings, b.knots, b.witness)
        );
        assert!(!a.exceeded_bound, "{s}: {} > {:?}", a.max_crossings, a.bound);
    }
}

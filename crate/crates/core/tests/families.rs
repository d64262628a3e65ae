use knotmosaic::diagram::{extract, extract_unchecked, CrossingNumber};
use knotmosaic::families::{derive_knot, gen_link, make_alternating, predicted, saturated_interior, Role};
use knotmosaic::grid::{BoardSpec, Setting};

fn ceil_half(r: usize) -> usize {
    r.div_ceil(2)
}

/// Crossing number expected of the generated knot, straight from the closed forms.
fn knot_formula(r: usize, s: Setting) -> usize {
    if r == 2 && s != Setting::Rect {
        return 3;
    }
    match s {
        Setting::HexStandard if r == 3 => 19,
        Setting::HexStandard => 9 * r * r + 23 - 28 * r,
        Setting::HexSemiEnhanced => 9 * r * r + 22 - 27 * r - ceil_half(r),
        Setting::HexEnhanced => 9 * r * r + 15 - 25 * r,
        Setting::Rect if r.is_multiple_of(2) => (r - 2) * (r - 2) - (r - 3),
        Setting::Rect => (r - 2) * (r - 2) - 2,
    }
}

#[test]
fn knot_values_by_setting() {
    let table = |s: Setting, rs: std::ops::RangeInclusive<usize>| rs.map(|r| knot_formula(r, s)).collect::<Vec<_>>();
    assert_eq!(table(Setting::HexStandard, 2..=7), [3, 19, 55, 108, 179, 268]);
    assert_eq!(table(Setting::HexSemiEnhanced, 2..=7), [3, 20, 56, 109, 181, 270]);
    assert_eq!(table(Setting::HexEnhanced, 3..=7), [21, 59, 115, 189, 281]);
    assert_eq!(table(Setting::Rect, 4..=7), [3, 7, 13, 23]);
}

#[test]
fn generated_knots_match_closed_forms() {
    for s in Setting::ALL {
        let lo = if s == Setting::Rect { 4 } else { 2 };
        for r in lo..=8 {
            let d = derive_knot(r, s).unwrap();
            let kd = extract(&d.knot).unwrap();
            assert_eq!(
                kd.certify_crossing_number(),
                CrossingNumber::Certified(knot_formula(r, s)),
                "{s} r={r}"
            );
            assert_eq!(predicted(r, s).unwrap().knot_crossing_bound, knot_formula(r, s));
            assert_eq!(d.schedule.apply(&d.parent).unwrap(), d.knot, "{s} r={r}");
            assert_eq!(
                d.parent.crossing_count() - d.knot.crossing_count(),
                d.schedule.len(),
                "{s} r={r}"
            );
        }
    }
}

#[test]
fn links_match_closed_forms() {
    for r in 2..=8 {
        let sat = 9 * r * r + 21 - 27 * r;
        for s in Setting::HEX {
            let d = extract_unchecked(&gen_link(r, s).unwrap());
            let (crossings, components) = match (s, r) {
                (_, 2) => (3, 1),
                (Setting::HexStandard, _) => (sat, r - 1),
                (Setting::HexSemiEnhanced, _) => (sat, ceil_half(r)),
                _ => (9 * r * r + 15 - 24 * r, r + 1),
            };
            assert_eq!(
                (d.crossing_count(), d.component_count()),
                (crossings, components),
                "{s} r={r}"
            );
            assert!(d.is_alternating());
            let interior = saturated_interior(BoardSpec::new(s, r).unwrap()).unwrap();
            assert_eq!(interior.crossing_count(), sat);
        }
    }
    for r in [4, 6, 8] {
        let d = extract_unchecked(&gen_link(r, Setting::Rect).unwrap());
        assert_eq!((d.crossing_count(), d.component_count()), ((r - 2) * (r - 2), r - 2));
    }
}

#[test]
fn spot_values() {
    assert_eq!(
        extract_unchecked(&gen_link(7, Setting::HexSemiEnhanced).unwrap()).component_count(),
        4
    );
    assert_eq!(gen_link(4, Setting::HexEnhanced).unwrap().crossing_count(), 63);
    assert_eq!(
        saturated_interior(BoardSpec::hex(Setting::HexStandard, 5).unwrap())
            .unwrap()
            .crossing_count(),
        111
    );
    assert_eq!(
        extract_unchecked(&gen_link(6, Setting::Rect).unwrap()).component_count(),
        4
    );
}

#[test]
fn merges_account_for_components() {
    for s in Setting::HEX {
        for r in 4..=7 {
            let d = derive_knot(r, s).unwrap();
            let merges = d
                .schedule
                .entries
                .iter()
                .filter(|e| e.role != Role::NugatoryRemoval)
                .count();
            let parent = extract_unchecked(&d.parent).component_count();
            assert_eq!(merges, parent - 1, "{s} r={r}");
        }
    }
}

#[test]
fn alternating_states_are_recovered() {
    let link = gen_link(5, Setting::HexStandard).unwrap();
    let mut scrambled = link.clone();
    for c in 0..scrambled.board().len() {
        let f = *scrambled.face(c);
        if f.crossing_count() > 0 {
            scrambled.set(c, f.with_state_bits((c % 8) as u8 & ((1 << f.crossing_count()) - 1)));
        }
    }
    let fixed = make_alternating(&scrambled).unwrap();
    assert!(extract_unchecked(&fixed).is_alternating());
    assert_eq!(extract_unchecked(&fixed).component_count(), 4);
}

#[test]
fn no_square_generator_below_four() {
    assert!(predicted(3, Setting::Rect).is_err());
    assert!(gen_link(3, Setting::Rect).is_err());
    assert!(gen_link(5, Setting::Rect).is_err());
}

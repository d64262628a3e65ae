use std::collections::{BTreeSet, HashMap};

use proptest::prelude::*;

use knotmosaic::complement::{
    check_complement, compute_complement, enumerate_complements, merge_loop, reduce_to_trivial, Policy,
};
use knotmosaic::families::gen_knot;
use knotmosaic::grid::{Board, BoardSpec, Setting};
use knotmosaic::mosaic::Mosaic;
use knotmosaic::sample::{seeded, Sampler};
use knotmosaic::tiles::TileFace;

fn crosses(p: (u8, u8), q: (u8, u8)) -> bool {
    let inside = |x: u8| p.0 < x && x < p.1;
    inside(q.0) != inside(q.1) && p.0 != q.0 && p.0 != q.1 && p.1 != q.0 && p.1 != q.1
}

/// Per-tile choices worked out by hand: caps on blank tiles, non-crossing
/// pairings of the free slots otherwise.
fn options(face: &TileFace) -> Vec<Vec<(u8, u8)>> {
    if face.is_blank() {
        return vec![vec![(0, 1), (2, 3), (4, 5)], vec![(0, 5), (1, 2), (3, 4)]];
    }
    let free: Vec<u8> = (0..6).filter(|&k| !face.uses(k)).collect();
    let mut out = Vec::new();
    fn go(free: &[u8], cur: &mut Vec<(u8, u8)>, out: &mut Vec<Vec<(u8, u8)>>) {
        if free.is_empty() {
            let mut m = cur.clone();
            m.sort();
            out.push(m);
            return;
        }
        for i in 1..free.len() {
            let p = (free[0], free[i]);
            if cur.iter().any(|&q| crosses(p, q)) {
                continue;
            }
            let rest: Vec<u8> = free
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != 0 && k != i)
                .map(|(_, &s)| s)
                .collect();
            cur.push(p);
            go(&rest, cur, out);
            cur.pop();
        }
    }
    go(&free, &mut Vec::new(), &mut out);
    out
}

/// (loops, arcs) of a complement given as slot pairs per cell, by union-find
/// over connection points.
fn oracle_sw(b: &Board, arcs: &[Vec<(u8, u8)>]) -> (usize, usize) {
    let point = |cell: usize, slot: u8| match b.neighbor(cell, slot) {
        Some(n) => (cell, slot).min((n, b.opposite(slot))),
        None => (cell, slot),
    };
    let mut parent: HashMap<(usize, u8), (usize, u8)> = HashMap::new();
    let mut degree: HashMap<(usize, u8), usize> = HashMap::new();
    fn find(parent: &mut HashMap<(usize, u8), (usize, u8)>, x: (usize, u8)) -> (usize, u8) {
        let p = *parent.entry(x).or_insert(x);
        if p == x {
            return x;
        }
        let r = find(parent, p);
        parent.insert(x, r);
        r
    }
    for (cell, pairs) in arcs.iter().enumerate() {
        for &(a, c) in pairs {
            let (pa, pc) = (point(cell, a), point(cell, c));
            *degree.entry(pa).or_default() += 1;
            *degree.entry(pc).or_default() += 1;
            let (ra, rc) = (find(&mut parent, pa), find(&mut parent, pc));
            parent.insert(ra, rc);
        }
    }
    let mut open: HashMap<(usize, u8), bool> = HashMap::new();
    let points: Vec<_> = degree.keys().copied().collect();
    for p in points {
        let root = find(&mut parent, p);
        *open.entry(root).or_default() |= degree[&p] == 1;
    }
    let w = open.values().filter(|&&o| o).count();
    (open.len() - w, w)
}

/// Hex r=3 board holding one small unknot around the vertex shared by the
/// center and its NE and E neighbours.
fn small_unknot() -> Mosaic {
    let mut m = Mosaic::blank(BoardSpec::hex(Setting::HexStandard, 3).unwrap()).unwrap();
    let b = m.shared_board();
    let center = (0..b.len()).find(|&c| b.corona(c) == 0).unwrap();
    let ne = b.neighbor(center, 0).unwrap();
    let e = b.neighbor(center, 1).unwrap();
    let t = |s: &str| TileFace::parse(knotmosaic::grid::Geometry::Hex, s).unwrap();
    m.set(center, t("(0-1)"));
    m.set(ne, t("(2-3)"));
    m.set(e, t("(4-5)"));
    m.check().unwrap();
    m
}

#[test]
fn small_unknot_against_brute_force() {
    let m = small_unknot();
    let b = m.board();
    let interior: Vec<usize> = b.interior_cells().collect();
    let tables: Vec<Vec<Vec<(u8, u8)>>> = interior.iter().map(|&c| options(m.face(c))).collect();

    // every combination of per-tile choices
    let total: usize = tables.iter().map(Vec::len).product();
    let mut all_sw = Vec::new();
    for mut k in 0..total {
        let mut arcs = vec![Vec::new(); b.len()];
        for (i, &c) in interior.iter().enumerate() {
            arcs[c] = tables[i][k % tables[i].len()].clone();
            k /= tables[i].len();
        }
        all_sw.push(oracle_sw(b, &arcs));
    }
    assert_eq!(total, 128);

    let canon = compute_complement(&m, Policy::Canonical).unwrap();
    for (i, &c) in interior.iter().enumerate() {
        assert!(tables[i].contains(&canon.arcs[c]), "cell {c}");
    }
    assert_eq!(canon.sw(), oracle_sw(b, &canon.arcs));
    assert!(!canon.is_trivial());
    assert!(check_complement(&m, &canon).is_ok());

    let greedy = compute_complement(&m, Policy::Greedy).unwrap();
    assert!(greedy.sw() <= canon.sw());
    assert!(all_sw.contains(&greedy.sw()));

    let mut lib: Vec<(usize, usize)> = enumerate_complements(&m, 1000)
        .unwrap()
        .iter()
        .map(|c| c.sw())
        .collect();
    lib.sort();
    all_sw.sort();
    assert_eq!(lib, all_sw);
}

#[test]
fn generated_knots_have_trivial_complements() {
    for s in Setting::ALL {
        for r in 2..=6 {
            let Ok((k, _)) = gen_knot(r, s) else { continue };
            let c = compute_complement(&k, Policy::Greedy).unwrap();
            if k.board()
                .interior_cells()
                .all(|cell| k.face(cell).used_slots().len() == k.board().slots() as usize)
            {
                assert!(c.is_trivial(), "{s} r={r}");
                let red = reduce_to_trivial(&k).unwrap();
                assert_eq!(red.history, vec![(0, 0)]);
                assert_eq!(red.knot, k);
            }
        }
    }
}

#[test]
fn enumeration_guard() {
    let m = Mosaic::blank(BoardSpec::hex(Setting::HexStandard, 4).unwrap()).unwrap();
    assert!(enumerate_complements(&m, 100).is_err());
}

fn setting_strategy() -> impl Strategy<Value = (Setting, usize)> {
    prop_oneof![
        (3usize..=5).prop_map(|r| (Setting::HexStandard, r)),
        (3usize..=5).prop_map(|r| (Setting::HexSemiEnhanced, r)),
        (3usize..=5).prop_map(|r| (Setting::HexEnhanced, r)),
        (3usize..=6).prop_map(|r| (Setting::Rect, r)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn complements_are_well_formed((s, r) in setting_strategy(), seed in any::<u64>()) {
        let m = Sampler::new(BoardSpec::new(s, r).unwrap()).unwrap().mosaic(&mut seeded(seed, 0)).unwrap();
        for policy in [Policy::Canonical, Policy::Greedy] {
            let c = compute_complement(&m, policy).unwrap();
            prop_assert!(check_complement(&m, &c).is_ok());
            let ends: usize = c.components.iter().filter(|k| !k.closed).count();
            prop_assert_eq!(ends, c.w());
            prop_assert_eq!(oracle_hits(&m, &c.arcs), BTreeSet::from([1]));
        }
    }

    #[test]
    fn merging_a_loop_shrinks_the_complement((s, r) in setting_strategy(), seed in any::<u64>()) {
        let m = Sampler::new(BoardSpec::new(s, r).unwrap()).unwrap().mosaic(&mut seeded(seed, 1)).unwrap();
        let c = compute_complement(&m, Policy::Canonical).unwrap();
        if let Some(&id) = c.loop_ids().first() {
            let (m2, c2) = merge_loop(&m, &c, id).unwrap();
            prop_assert!(m2.is_valid());
            prop_assert!(check_complement(&m2, &c2).is_ok());
            prop_assert!(c2.sw() < c.sw());
        }
    }
}

/// How often each interior connection point is met by link or complement.
fn oracle_hits(m: &Mosaic, arcs: &[Vec<(u8, u8)>]) -> BTreeSet<usize> {
    let b = m.board();
    let mut out = BTreeSet::new();
    for cell in b.interior_cells() {
        for k in 0..b.slots() {
            out.insert(m.face(cell).uses(k) as usize + arcs[cell].iter().filter(|p| p.0 == k || p.1 == k).count());
        }
    }
    out
}

#[test]
fn loops_occur_and_merge() {
    let sampler = Sampler::new(BoardSpec::hex(Setting::HexStandard, 4).unwrap()).unwrap();
    let mut merged = 0;
    for i in 0..200 {
        let m = sampler.mosaic(&mut seeded(9, i)).unwrap();
        let c = compute_complement(&m, Policy::Canonical).unwrap();
        for &id in c.loop_ids().iter().take(1) {
            let (m2, c2) = merge_loop(&m, &c, id).unwrap();
            assert!(m2.is_valid() && c2.sw() < c.sw());
            merged += 1;
        }
    }
    assert!(merged > 20, "only {merged} boards had a complement loop");
}

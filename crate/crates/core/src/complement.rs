//! The complement of a link mosaic, loop merging, and outermost-arc elimination.
//!
//! On every interior tile the complement adds arcs on the connection points
//! the link leaves unused, so that link and complement together meet each
//! point once. Complement arcs never cross one another and pass under the
//! link. Globally they form `s` closed loops and `w` arcs whose ends sit on
//! edges between the interior and the boundary corona.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::diagram::{extract_unchecked, LinkDiagram};
use crate::error::{Error, Result};
use crate::families::gen_link;
use crate::grid::{Board, CellClass, EdgeRef, Geometry, Setting};
use crate::mosaic::{best_closure_on, closures_on, face_allowed, ClosureOptions, Mosaic};
use crate::tiles::{all_faces, alternating_tile, interleave, slot_angle, TileFace};

/// Ways to complete the unused slots of `face`, least code first.
///
/// A blank tile takes three (two on a square) boundary-hugging caps in one of
/// two rotations; otherwise every non-crossing matching of the free slots.
pub fn complement_options(face: &TileFace) -> Vec<Vec<(u8, u8)>> {
    let g = face.geometry();
    let n = g.slots();
    let mut out: Vec<Vec<(u8, u8)>> = if face.is_blank() {
        (0..2u8)
            .map(|s| {
                let mut caps: Vec<(u8, u8)> = (0..n / 2)
                    .map(|k| {
                        let a = (s + 2 * k) % n;
                        let b = (a + 1) % n;
                        (a.min(b), a.max(b))
                    })
                    .collect();
                caps.sort();
                caps
            })
            .collect()
    } else {
        let free: Vec<u8> = (0..n).filter(|&k| !face.uses(k)).collect();
        let mut acc = Vec::new();
        noncrossing_matchings(&free, &mut Vec::new(), &mut acc);
        acc
    };
    out.sort_by_cached_key(|arcs| arcs_code(g, arcs));
    out
}

fn noncrossing_matchings(free: &[u8], cur: &mut Vec<(u8, u8)>, out: &mut Vec<Vec<(u8, u8)>>) {
    let Some((&first, rest)) = free.split_first() else {
        let mut m = cur.clone();
        m.sort();
        out.push(m);
        return;
    };
    for (i, &other) in rest.iter().enumerate() {
        let pair = (first, other);
        if cur.iter().any(|&p| interleave(p, pair)) {
            continue;
        }
        let remaining: Vec<u8> = rest
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i)
            .map(|(_, &s)| s)
            .collect();
        cur.push(pair);
        noncrossing_matchings(&remaining, cur, out);
        cur.pop();
    }
}

fn arcs_code(g: Geometry, arcs: &[(u8, u8)]) -> String {
    TileFace::new(g, arcs).map(|f| f.code()).unwrap_or_default()
}

/// `face` with `extra` strands added underneath everything already there.
pub fn add_under(face: &TileFace, extra: &[(u8, u8)]) -> Result<TileFace> {
    let mut strands = face.strands().to_vec();
    strands.extend(extra.iter().map(|&(a, b)| (a.min(b), a.max(b))));
    let idx = |s: (u8, u8)| face.strands().iter().position(|&t| t == s);
    TileFace::build(face.geometry(), &strands, |s, t| match (idx(s), idx(t)) {
        (Some(i), Some(j)) => face.is_over(i, j),
        (Some(_), None) => true,
        (None, _) => false,
    })
}

/// One tile-local piece of a complement component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Piece {
    pub cell: usize,
    pub entry: u8,
    pub exit: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplementComponent {
    pub pieces: Vec<Piece>,
    pub closed: bool,
    /// first and last edge of an arc, least first
    pub ends: Option<(EdgeRef, EdgeRef)>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Policy {
    /// least option on every ambiguous tile
    #[default]
    Canonical,
    /// start canonical, then switch single tiles while `(s, w)` drops
    Greedy,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplementDecomposition {
    /// complement slot pairs per cell; always empty on boundary cells
    pub arcs: Vec<Vec<(u8, u8)>>,
    /// `(cell, option index)` for every tile with more than one option
    pub choices: Vec<(usize, usize)>,
    pub components: Vec<ComplementComponent>,
}

impl ComplementDecomposition {
    /// Number of closed loops.
    pub fn s(&self) -> usize {
        self.components.iter().filter(|c| c.closed).count()
    }

    /// Number of boundary-to-boundary arcs.
    pub fn w(&self) -> usize {
        self.components.len() - self.s()
    }

    pub fn sw(&self) -> (usize, usize) {
        (self.s(), self.w())
    }

    pub fn is_trivial(&self) -> bool {
        self.components.is_empty()
    }

    pub fn loop_ids(&self) -> Vec<usize> {
        (0..self.components.len())
            .filter(|&i| self.components[i].closed)
            .collect()
    }

    pub fn arc_ids(&self) -> Vec<usize> {
        (0..self.components.len())
            .filter(|&i| !self.components[i].closed)
            .collect()
    }

    /// Every arc endpoint edge.
    pub fn endpoints(&self) -> BTreeSet<EdgeRef> {
        self.components
            .iter()
            .filter_map(|c| c.ends)
            .flat_map(|(a, b)| [a, b])
            .collect()
    }

    fn build(board: &Board, arcs: Vec<Vec<(u8, u8)>>, choices: Vec<(usize, usize)>) -> Self {
        let components = trace(board, &arcs);
        ComplementDecomposition {
            arcs,
            choices,
            components,
        }
    }
}

fn trace(b: &Board, arcs: &[Vec<(u8, u8)>]) -> Vec<ComplementComponent> {
    let n = b.slots() as usize;
    let mut at = vec![usize::MAX; b.len() * n];
    let mut pieces: Vec<(usize, (u8, u8))> = Vec::new();
    for (cell, list) in arcs.iter().enumerate() {
        for &(p, q) in list {
            at[cell * n + p as usize] = pieces.len();
            at[cell * n + q as usize] = pieces.len();
            pieces.push((cell, (p, q)));
        }
    }
    let step = |cell: usize, slot: u8| -> Option<(usize, u8)> {
        let nb = b.neighbor(cell, slot)?;
        (!b.is_boundary(nb)).then(|| (nb, b.opposite(slot)))
    };
    // Follow pieces from `cell` entering at `entry` until the walk leaves the
    // interior or returns to `stop`.
    let walk = |cell: usize, entry: u8, stop: usize| -> (Vec<Piece>, bool) {
        let mut out = Vec::new();
        let (mut cell, mut entry) = (cell, entry);
        loop {
            let id = at[cell * n + entry as usize];
            let (_, (p, q)) = pieces[id];
            let exit = if p == entry { q } else { p };
            out.push(Piece { cell, entry, exit });
            match step(cell, exit) {
                None => return (out, false),
                Some((c, s)) => {
                    if at[c * n + s as usize] == stop {
                        return (out, true);
                    }
                    cell = c;
                    entry = s;
                }
            }
        }
    };
    let mut seen = vec![false; pieces.len()];
    let mut comps = Vec::new();
    for start in 0..pieces.len() {
        if seen[start] {
            continue;
        }
        let (cell, (_, q)) = pieces[start];
        let (probe, closed) = walk(cell, q, start);
        let mut comp = if closed {
            ComplementComponent {
                pieces: probe,
                closed: true,
                ends: None,
            }
        } else {
            let last = *probe.last().unwrap();
            let (mut full, _) = walk(last.cell, last.exit, usize::MAX);
            // the probe found one end; walk back from it to the other
            let first = full[0];
            let end = *full.last().unwrap();
            let (e0, e1) = (b.edge(first.cell, first.entry), b.edge(end.cell, end.exit));
            if e1 < e0 {
                full.reverse();
                for piece in &mut full {
                    std::mem::swap(&mut piece.entry, &mut piece.exit);
                }
            }
            ComplementComponent {
                pieces: full,
                closed: false,
                ends: Some((e0.min(e1), e0.max(e1))),
            }
        };
        for piece in &comp.pieces {
            seen[at[piece.cell * n + piece.entry as usize]] = true;
        }
        comp.pieces.shrink_to_fit();
        comps.push(comp);
    }
    comps
}

fn option_table(m: &Mosaic) -> Vec<Vec<Vec<(u8, u8)>>> {
    let b = m.board();
    (0..b.len())
        .map(|c| {
            if b.is_boundary(c) {
                vec![Vec::new()]
            } else {
                complement_options(m.face(c))
            }
        })
        .collect()
}

fn assemble(m: &Mosaic, table: &[Vec<Vec<(u8, u8)>>], pick: &[usize]) -> ComplementDecomposition {
    let arcs = table.iter().zip(pick).map(|(opts, &k)| opts[k].clone()).collect();
    let choices = (0..table.len())
        .filter(|&c| table[c].len() > 1)
        .map(|c| (c, pick[c]))
        .collect();
    ComplementDecomposition::build(m.board(), arcs, choices)
}

/// The complement of a valid mosaic under `policy`.
pub fn compute_complement(m: &Mosaic, policy: Policy) -> Result<ComplementDecomposition> {
    m.check()?;
    let table = option_table(m);
    let mut pick = vec![0usize; table.len()];
    let mut best = assemble(m, &table, &pick);
    if policy == Policy::Greedy {
        let ambiguous: Vec<usize> = (0..table.len()).filter(|&c| table[c].len() > 1).collect();
        for _ in 0..8 {
            let mut improved = false;
            for &c in &ambiguous {
                for k in 0..table[c].len() {
                    if k == pick[c] {
                        continue;
                    }
                    let old = pick[c];
                    pick[c] = k;
                    let cand = assemble(m, &table, &pick);
                    if cand.sw() < best.sw() {
                        best = cand;
                        improved = true;
                    } else {
                        pick[c] = old;
                    }
                }
            }
            if !improved {
                break;
            }
        }
    }
    Ok(best)
}

/// Every complement of `m`, one per combination of per-tile options.
pub fn enumerate_complements(m: &Mosaic, limit: usize) -> Result<Vec<ComplementDecomposition>> {
    m.check()?;
    let table = option_table(m);
    let total = table.iter().try_fold(1usize, |acc, o| acc.checked_mul(o.len()));
    match total {
        Some(t) if t <= limit => {}
        _ => return Err(Error::TooLarge(format!("more than {limit} complements"))),
    }
    let mut pick = vec![0usize; table.len()];
    let mut out = Vec::new();
    loop {
        out.push(assemble(m, &table, &pick));
        let mut c = 0;
        loop {
            if c == pick.len() {
                return Ok(out);
            }
            pick[c] += 1;
            if pick[c] < table[c].len() {
                break;
            }
            pick[c] = 0;
            c += 1;
        }
    }
}

/// Complement of `m` that keeps, tile by tile, whatever arcs of `prev` still fit.
pub fn retained_complement(m: &Mosaic, prev: &ComplementDecomposition) -> ComplementDecomposition {
    let table = option_table(m);
    let pick: Vec<usize> = table
        .iter()
        .enumerate()
        .map(|(c, opts)| {
            let old = prev.arcs.get(c).map(Vec::as_slice).unwrap_or(&[]);
            opts.iter().position(|o| o.iter().all(|p| old.contains(p))).unwrap_or(0)
        })
        .collect();
    assemble(m, &table, &pick)
}

/// Link strands and complement arcs of one tile drawn together, complement underneath.
pub fn overlay_face(m: &Mosaic, comp: &ComplementDecomposition, cell: usize) -> Result<TileFace> {
    add_under(m.face(cell), &comp.arcs[cell])
}

/// Defects found by [`check_complement`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ComplementCheck {
    /// connection points met zero or several times
    pub coverage: Vec<(usize, u8)>,
    /// tiles where two complement arcs cross
    pub crossing: Vec<usize>,
    /// tiles where a complement arc passes over the link
    pub over_link: Vec<usize>,
    /// arcs ending anywhere but an interior/boundary edge
    pub bad_ends: Vec<usize>,
}

impl ComplementCheck {
    pub fn is_ok(&self) -> bool {
        self.coverage.is_empty() && self.crossing.is_empty() && self.over_link.is_empty() && self.bad_ends.is_empty()
    }
}

pub fn check_complement(m: &Mosaic, comp: &ComplementDecomposition) -> ComplementCheck {
    let b = m.board();
    let mut out = ComplementCheck::default();
    for cell in 0..b.len() {
        let arcs = &comp.arcs[cell];
        if b.is_boundary(cell) {
            if !arcs.is_empty() {
                out.coverage.push((cell, arcs[0].0));
            }
            continue;
        }
        for k in 0..b.slots() {
            let hits = usize::from(m.face(cell).uses(k)) + arcs.iter().filter(|&&(p, q)| p == k || q == k).count();
            if hits != 1 {
                out.coverage.push((cell, k));
            }
        }
        if arcs
            .iter()
            .enumerate()
            .any(|(i, &s)| arcs[i + 1..].iter().any(|&t| interleave(s, t)))
        {
            out.crossing.push(cell);
        }
        if let Ok(o) = overlay_face(m, comp, cell) {
            let link = m.face(cell).strands();
            let under_ok = o.crossings().into_iter().all(|(i, j)| {
                let (si, sj) = (o.strands()[i], o.strands()[j]);
                match (link.contains(&si), link.contains(&sj)) {
                    (true, false) => o.is_over(i, j),
                    (false, true) => o.is_over(j, i),
                    _ => true,
                }
            });
            if !under_ok {
                out.over_link.push(cell);
            }
        }
    }
    for (id, c) in comp.components.iter().enumerate() {
        if c.closed {
            continue;
        }
        let first = c.pieces[0];
        let last = *c.pieces.last().unwrap();
        let ok =
            |cell: usize, slot: u8| b.neighbor(cell, slot).is_some_and(|nb| b.is_boundary(nb)) && !b.is_boundary(cell);
        if !ok(first.cell, first.entry) || !ok(last.cell, last.exit) {
            out.bad_ends.push(id);
        }
    }
    out
}

/// Reconnections of two strands of one tile, crossing option first.
fn reconnections(s: (u8, u8), t: (u8, u8)) -> Vec<[(u8, u8); 2]> {
    let mut p = [s.0, s.1, t.0, t.1];
    p.sort();
    let all = [
        [(p[0], p[2]), (p[1], p[3])],
        [(p[0], p[1]), (p[2], p[3])],
        [(p[0], p[3]), (p[1], p[2])],
    ];
    let norm = |x: (u8, u8)| (x.0.min(x.1), x.0.max(x.1));
    let (s, t) = (norm(s), norm(t));
    all.into_iter()
        .filter(|m| !(m.contains(&s) && m.contains(&t)))
        .collect()
}

/// Replace strands `s` and `t` of `face` by `new`; untouched pairs keep their
/// bits, anything involving a new strand puts the lower strand on top.
fn rewire(face: &TileFace, s: (u8, u8), t: (u8, u8), new: [(u8, u8); 2]) -> Option<TileFace> {
    let mut strands: Vec<(u8, u8)> = face.strands().iter().copied().filter(|&x| x != s && x != t).collect();
    strands.extend(new);
    let idx = |x: (u8, u8)| face.strands().iter().position(|&y| y == x).filter(|_| x != s && x != t);
    TileFace::build(face.geometry(), &strands, |a, b| match (idx(a), idx(b)) {
        (Some(i), Some(j)) => face.is_over(i, j),
        _ => true,
    })
    .ok()
}

/// Fold loop `id` of the complement into the link, or into another complement
/// component when the loop never meets the link.
pub fn merge_loop(m: &Mosaic, comp: &ComplementDecomposition, id: usize) -> Result<(Mosaic, ComplementDecomposition)> {
    let lp = comp
        .components
        .get(id)
        .filter(|c| c.closed)
        .ok_or(Error::NoSuchComponent(id))?;
    let b = m.board();
    let s0 = comp.s();
    let before = extract_unchecked(m);
    let mut loop_pairs: HashMap<usize, Vec<(u8, u8)>> = HashMap::new();
    let mut cells = Vec::new();
    for p in &lp.pieces {
        if !loop_pairs.contains_key(&p.cell) {
            cells.push(p.cell);
        }
        loop_pairs
            .entry(p.cell)
            .or_default()
            .push((p.entry.min(p.exit), p.entry.max(p.exit)));
    }
    for &band_cell in &cells {
        let link = *m.face(band_cell);
        if link.is_blank() {
            continue;
        }
        for &c in &loop_pairs[&band_cell] {
            for &l in link.strands() {
                for alt in reconnections(l, c) {
                    let mut faces = m.faces().to_vec();
                    for (&cell, pairs) in &loop_pairs {
                        let extra: Vec<(u8, u8)> = pairs
                            .iter()
                            .copied()
                            .filter(|&p| !(cell == band_cell && p == c))
                            .collect();
                        faces[cell] = add_under(m.face(cell), &extra)?;
                    }
                    let with_loop = faces[band_cell];
                    let Some(f) = rewire(&with_loop, l, c, alt) else {
                        continue;
                    };
                    faces[band_cell] = f;
                    let cand = Mosaic::from_faces(m.spec(), faces)?;
                    if !cand.is_valid() || cand.crossing_count() < m.crossing_count() {
                        continue;
                    }
                    if extract_unchecked(&cand).component_count() != before.component_count() {
                        continue;
                    }
                    let next = retained_complement(&cand, comp);
                    if next.s() + 1 == s0 {
                        return Ok((cand, next));
                    }
                }
            }
        }
    }
    // no link tile works: reband the complement inside one tile
    let table = option_table(m);
    let mut pick: Vec<usize> = vec![0; b.len()];
    for &(c, k) in &comp.choices {
        pick[c] = k;
    }
    for &cell in &cells {
        for k in 0..table[cell].len() {
            if k == pick[cell] {
                continue;
            }
            let mut alt = pick.clone();
            alt[cell] = k;
            let next = assemble(m, &table, &alt);
            if next.s() + 1 == s0 {
                return Ok((m.clone(), next));
            }
        }
    }
    Err(Error::precondition(
        "merge-loop",
        format!("no band or rebanding removes loop {id}"),
    ))
}

/// Tiles around one complement arc `a`: the tiles it runs through (A), the
/// boundary tiles holding its ends (Ã), and the interior and boundary tiles
/// on its outside (O, Õ) and inside (I, Ĩ).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegionPartition {
    pub arc: usize,
    pub a: Vec<usize>,
    pub a_tilde: Vec<usize>,
    pub i: Vec<usize>,
    pub i_tilde: Vec<usize>,
    pub o: Vec<usize>,
    pub o_tilde: Vec<usize>,
    pub ends: (EdgeRef, EdgeRef),
    /// boundary tiles where the arc, extended past its ends, stops
    pub end_tiles: (usize, usize),
    /// no other complement arc lies outside
    pub outermost: bool,
    /// both boundary sides have the same size
    pub diameter: bool,
}

fn edge_mid(b: &Board, cell: usize, slot: u8) -> (f64, f64) {
    let (x, y) = b.center(cell);
    let a = slot_angle(b.geometry(), slot);
    let h = b.apothem();
    (x + h * a.cos(), y + h * a.sin())
}

fn inside(poly: &[(f64, f64)], pt: (f64, f64)) -> bool {
    // tiny offset keeps the ray off polygon vertices
    let (px, py) = (pt.0, pt.1 + 1e-7 * std::f64::consts::PI);
    let mut hit = false;
    for k in 0..poly.len() {
        let (a, c) = (poly[k], poly[(k + 1) % poly.len()]);
        if (a.1 > py) != (c.1 > py) {
            let x = a.0 + (py - a.1) / (c.1 - a.1) * (c.0 - a.0);
            if x > px {
                hit = !hit;
            }
        }
    }
    hit
}

/// polygon, outside ring cells, end tiles, whether the sides tie
type RegionShape = (Vec<(f64, f64)>, Vec<usize>, (usize, usize), bool);

fn region_polygon(b: &Board, arc: &ComplementComponent) -> RegionShape {
    let first = arc.pieces[0];
    let last = *arc.pieces.last().unwrap();
    let t0 = b.neighbor(first.cell, first.entry).unwrap();
    let t1 = b.neighbor(last.cell, last.exit).unwrap();
    let ring = b.ring();
    let len = ring.len();
    let pos = |c: usize| ring.iter().position(|&x| x == c).unwrap();
    let (p, q) = (pos(t0), pos(t1));
    let between = |from: usize, to: usize| -> Vec<usize> {
        let mut v = Vec::new();
        let mut k = (from + 1) % len;
        while k != to {
            v.push(ring[k]);
            k = (k + 1) % len;
        }
        v
    };
    // outside cells listed in the order walked from t1 back to t0
    let (outside, diameter) = if p == q {
        (Vec::new(), false)
    } else {
        let qp = between(q, p);
        let mut pq = between(p, q);
        let weight = |v: &[usize]| v.iter().sum::<usize>();
        let take_qp = match qp.len().cmp(&pq.len()) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Greater => false,
            std::cmp::Ordering::Equal => weight(&qp) <= weight(&pq),
        };
        let diameter = qp.len() == pq.len();
        if take_qp {
            (qp, diameter)
        } else {
            pq.reverse();
            (pq, diameter)
        }
    };
    let mut poly = vec![b.center(t0), edge_mid(b, first.cell, first.entry)];
    poly.extend(arc.pieces.iter().map(|pc| edge_mid(b, pc.cell, pc.exit)));
    poly.push(b.center(t1));
    if p != q {
        poly.extend(outside.iter().map(|&c| b.center(c)));
    }
    (poly, outside, (t0, t1), diameter)
}

fn piece_mid(b: &Board, pc: &Piece) -> (f64, f64) {
    let (x0, y0) = edge_mid(b, pc.cell, pc.entry);
    let (x1, y1) = edge_mid(b, pc.cell, pc.exit);
    ((x0 + x1) / 2.0, (y0 + y1) / 2.0)
}

/// Split the board around complement arc `id`.
pub fn region_partition(m: &Mosaic, comp: &ComplementDecomposition, id: usize) -> Result<RegionPartition> {
    let arc = comp
        .components
        .get(id)
        .filter(|c| !c.closed)
        .ok_or(Error::NoSuchComponent(id))?;
    let b = m.board();
    let (poly, outside, end_tiles, diameter) = region_polygon(b, arc);
    let a: BTreeSet<usize> = arc.pieces.iter().map(|p| p.cell).collect();
    let a_tilde: BTreeSet<usize> = [end_tiles.0, end_tiles.1].into_iter().collect();
    let o_tilde: BTreeSet<usize> = outside.into_iter().collect();
    let mut o = BTreeSet::new();
    let mut i = BTreeSet::new();
    for c in b.interior_cells() {
        if a.contains(&c) {
            continue;
        }
        if inside(&poly, b.center(c)) {
            o.insert(c);
        } else {
            i.insert(c);
        }
    }
    let i_tilde: Vec<usize> = b
        .ring()
        .iter()
        .copied()
        .filter(|c| !a_tilde.contains(c) && !o_tilde.contains(c))
        .collect();
    let outermost = comp
        .components
        .iter()
        .enumerate()
        .filter(|&(k, c)| k != id && !c.closed)
        .all(|(_, c)| !inside(&poly, piece_mid(b, &c.pieces[0])));
    let mut i_tilde = i_tilde;
    i_tilde.sort();
    Ok(RegionPartition {
        arc: id,
        a: a.into_iter().collect(),
        a_tilde: a_tilde.into_iter().collect(),
        i: i.into_iter().collect(),
        i_tilde,
        o: o.into_iter().collect(),
        o_tilde: o_tilde.into_iter().collect(),
        ends: arc.ends.unwrap(),
        end_tiles,
        outermost,
        diameter,
    })
}

/// The outermost arc with the smallest outside, ties to the least end edge.
pub fn outermost_arc(m: &Mosaic, comp: &ComplementDecomposition) -> Option<RegionPartition> {
    comp.arc_ids()
        .into_iter()
        .filter_map(|id| region_partition(m, comp, id).ok())
        .filter(|p| p.outermost)
        .min_by_key(|p| (p.o_tilde.len(), p.ends))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ActionKind {
    /// smoothed a crossing between the arc and another component
    Smooth,
    /// banded a strand into the arc, adding a crossing
    Band,
    /// banded at both ends of an edge
    DoubleBand,
    /// the edge already crossed the arc
    AlreadyCrossing,
    /// no band kept a knot
    Skipped,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Action {
    pub step: u8,
    pub cell: usize,
    pub kind: ActionKind,
}

/// Every stage of one arc elimination.
#[derive(Clone, Debug)]
pub struct PipelineTrace {
    pub partition: RegionPartition,
    pub k1: Mosaic,
    pub l1: Mosaic,
    pub l2: Mosaic,
    pub k2: Mosaic,
    pub k3: Mosaic,
    pub crossings: [usize; 5],
    pub components: [usize; 5],
    /// closures available when re-closing the boundary
    pub closure_choices: usize,
    /// rotation of the saturated link whose pattern the outside copies
    pub lr_alignment: Option<(Setting, usize)>,
    /// boundary crossings lost outside the arc
    pub n: i64,
    /// edges outside the arc with both ends on the arc's tiles
    pub j: usize,
    pub actions: Vec<Action>,
    pub before: (usize, usize),
    pub after: (usize, usize),
    pub complement_after: ComplementDecomposition,
}

fn arc_slots(b: &Board, arc: &ComplementComponent) -> HashMap<usize, Vec<u8>> {
    let mut slots: HashMap<usize, Vec<u8>> = HashMap::new();
    for p in &arc.pieces {
        slots.entry(p.cell).or_default().extend([p.entry, p.exit]);
    }
    let first = arc.pieces[0];
    let last = *arc.pieces.last().unwrap();
    let t0 = b.neighbor(first.cell, first.entry).unwrap();
    let t1 = b.neighbor(last.cell, last.exit).unwrap();
    slots.entry(t0).or_default().push(b.opposite(first.entry));
    slots.entry(t1).or_default().push(b.opposite(last.exit));
    slots
}

fn on_arc(face: &TileFace, slots: Option<&Vec<u8>>, strand: usize) -> bool {
    let (p, q) = face.strands()[strand];
    slots.is_some_and(|s| s.contains(&p) || s.contains(&q))
}

fn components(m: &Mosaic) -> usize {
    extract_unchecked(m).component_count()
}

/// Step 1: put `a` into the link and re-close the boundary outside it.
fn step_one(k1: &Mosaic, comp: &ComplementDecomposition, part: &RegionPartition) -> Result<(Mosaic, usize)> {
    let arc = &comp.components[part.arc];
    let mut m = k1.clone();
    let mut pairs: HashMap<usize, Vec<(u8, u8)>> = HashMap::new();
    for p in &arc.pieces {
        pairs
            .entry(p.cell)
            .or_default()
            .push((p.entry.min(p.exit), p.entry.max(p.exit)));
    }
    for (&cell, extra) in &pairs {
        m.set(cell, add_under(k1.face(cell), extra)?);
    }
    let free: Vec<usize> = part.a_tilde.iter().chain(&part.o_tilde).copied().collect();
    let setting = k1.spec().setting;
    let no_band = |_: usize, f: &TileFace| !f.is_band_pairing();
    let opts = ClosureOptions {
        projection_only: true,
        limit: None,
    };
    let closed = match setting {
        Setting::HexEnhanced => {
            let n = closures_on(&m, &free, &|_, _| true, opts).len();
            best_closure_on(&m, &free, &|_, _| true).map(|x| (x, n))
        }
        Setting::HexSemiEnhanced => {
            let all = closures_on(&m, &free, &no_band, opts);
            let n = all.len();
            all.into_iter().next().map(|x| (x, n))
        }
        _ => {
            let all = closures_on(&m, &free, &|_, _| true, opts);
            let n = all.len();
            all.into_iter().next().map(|x| (x, n))
        }
    };
    closed.ok_or_else(|| Error::precondition("step1", "no boundary closure keeps the tiles inside the arc"))
}

/// Step 2: saturate the interior outside the arc, copying the saturated
/// link's over/under pattern where the outside matches it.
fn step_two(l1: &Mosaic, part: &RegionPartition) -> Result<(Mosaic, Option<(Setting, usize)>)> {
    let b = l1.board();
    let full = (1u8 << b.slots()) - 1;
    if part.o.iter().any(|&c| l1.face(c).used_mask() != full) {
        return Err(Error::precondition(
            "step2",
            "the complement reaches tiles outside the arc",
        ));
    }
    let sat = match b.geometry() {
        Geometry::Hex => alternating_tile(),
        Geometry::Rect => TileFace::parse(Geometry::Rect, "(0-2)(1-3):o")?,
    };
    let mut m = l1.clone();
    for &c in &part.o {
        m.set(c, sat);
    }
    let spec = l1.spec();
    let settings: &[Setting] = match spec.setting {
        Setting::HexSemiEnhanced => &[Setting::HexSemiEnhanced, Setting::HexStandard],
        Setting::HexStandard => &[Setting::HexStandard],
        Setting::HexEnhanced => &[Setting::HexEnhanced],
        _ => &[Setting::Rect],
    };
    let region: Vec<usize> = part.o.iter().chain(&part.o_tilde).copied().collect();
    for &s in settings {
        let Ok(lr) = gen_link(spec.r, s) else { continue };
        for k in 0..b.slots() as usize {
            let rot = lr.rotated(k);
            if region.iter().all(|&c| rot.face(c).strands() == m.face(c).strands()) {
                for &c in &region {
                    m.set(c, *rot.face(c));
                }
                return Ok((m, Some((s, k))));
            }
        }
    }
    Ok((m, None))
}

/// Step 3: join every other component to the arc's component.
fn step_three(
    l2: &Mosaic,
    part: &RegionPartition,
    slots: &HashMap<usize, Vec<u8>>,
    anchor: (usize, u8),
    actions: &mut Vec<Action>,
) -> Result<Mosaic> {
    let b = l2.board();
    let mut cur = l2.clone();
    let mut cells: Vec<usize> = part.a.clone();
    cells.extend(&part.a_tilde);
    loop {
        let d = extract_unchecked(&cur);
        let k = d.component_count();
        if k <= 1 {
            return Ok(cur);
        }
        let ca = anchor_component(&cur, &d, anchor);
        let mut next = None;
        'smooth: for &cell in &cells {
            let face = *cur.face(cell);
            for (i, j) in face.crossings() {
                let (ai, aj) = (on_arc(&face, slots.get(&cell), i), on_arc(&face, slots.get(&cell), j));
                if ai == aj {
                    continue;
                }
                let other = if ai { j } else { i };
                if d.component_of(cell, other) == Some(ca) {
                    continue;
                }
                for choice in 0..2 {
                    let Ok(f) = face.smooth(i, j, choice) else { continue };
                    if !face_allowed(b, cell, &f) {
                        continue;
                    }
                    let cand = cur.with_face(cell, f);
                    if components(&cand) + 1 == k {
                        next = Some((cand, cell, ActionKind::Smooth));
                        break 'smooth;
                    }
                }
            }
        }
        if next.is_none() {
            next = band_into_arc(&cur, &d, &part.a, slots, ca, None).map(|(m, c)| (m, c, ActionKind::Band));
        }
        match next {
            Some((m, cell, kind)) => {
                actions.push(Action { step: 3, cell, kind });
                cur = m;
            }
            None => {
                let near: BTreeSet<usize> = cells.iter().copied().collect();
                let stranded = (0..k)
                    .filter(|&c| c != ca)
                    .any(|c| d.components[c].iter().all(|s| !near.contains(&s.cell)));
                let interior: BTreeSet<usize> = part.a.iter().copied().collect();
                let boundary_only = (0..k)
                    .filter(|&c| c != ca)
                    .any(|c| d.components[c].iter().all(|s| !interior.contains(&s.cell)));
                let reason = if stranded {
                    "a component never meets the tiles of the arc"
                } else if boundary_only {
                    "a component meets the arc only in a boundary tile"
                } else {
                    "no smoothing or band joins a component to the arc"
                };
                return Err(Error::precondition("step3", reason));
            }
        }
    }
}

fn anchor_component(m: &Mosaic, d: &LinkDiagram, anchor: (usize, u8)) -> usize {
    let (strand, _) = m.face(anchor.0).strand_at(anchor.1).expect("arc slot is in use");
    d.component_of(anchor.0, strand).expect("strand lies on a component")
}

/// Band a strand of another component into the arc inside one of `cells`,
/// gaining a crossing. With `only`, band that exact strand (cell, slot) and
/// accept any result; otherwise require one component fewer.
fn band_into_arc(
    cur: &Mosaic,
    d: &LinkDiagram,
    cells: &[usize],
    slots: &HashMap<usize, Vec<u8>>,
    ca: usize,
    only: Option<(usize, u8)>,
) -> Option<(Mosaic, usize)> {
    let k = d.component_count();
    for &cell in cells {
        if only.is_some_and(|(c, _)| c != cell) {
            continue;
        }
        let face = *cur.face(cell);
        let n = face.arc_count();
        for sa in 0..n {
            if !on_arc(&face, slots.get(&cell), sa) {
                continue;
            }
            for sb in 0..n {
                if sb == sa || on_arc(&face, slots.get(&cell), sb) {
                    continue;
                }
                let (ta, tb) = (face.strands()[sa], face.strands()[sb]);
                if interleave(ta, tb) {
                    continue;
                }
                match only {
                    Some((_, slot)) => {
                        if tb.0 != slot && tb.1 != slot {
                            continue;
                        }
                    }
                    None => {
                        if d.component_of(cell, sb) == Some(ca) {
                            continue;
                        }
                    }
                }
                let alt = reconnections(ta, tb)[0];
                let Some(f) = rewire(&face, ta, tb, alt) else { continue };
                let cand = cur.with_face(cell, f);
                if only.is_some() || components(&cand) + 1 == k {
                    return Some((cand, cell));
                }
            }
        }
    }
    None
}

/// An edge of the outside: a maximal run of one component through O ∪ Õ,
/// given by the arc-tile slots where it leaves and re-enters A.
struct OutsideEdge {
    ends: [(usize, u8); 2],
}

fn outside_edges(m: &Mosaic, part: &RegionPartition) -> Vec<OutsideEdge> {
    let d = extract_unchecked(m);
    let region: BTreeSet<usize> = part.o.iter().chain(&part.o_tilde).copied().collect();
    let a: BTreeSet<usize> = part.a.iter().copied().collect();
    let mut out = Vec::new();
    for walk in &d.components {
        let len = walk.len();
        if walk.iter().all(|s| region.contains(&s.cell)) {
            continue;
        }
        for k in 0..len {
            let prev = walk[(k + len - 1) % len];
            if !region.contains(&walk[k].cell) || region.contains(&prev.cell) {
                continue;
            }
            let mut e = k;
            while region.contains(&walk[(e + 1) % len].cell) {
                e += 1;
            }
            let next = walk[(e + 1) % len];
            if a.contains(&prev.cell) && a.contains(&next.cell) {
                out.push(OutsideEdge {
                    ends: [(prev.cell, prev.exit), (next.cell, next.entry)],
                });
            }
        }
    }
    out
}

/// Step 4 (enhanced boards): win back boundary crossings lost in step 1.
fn step_four(
    k1: &Mosaic,
    k2: &Mosaic,
    part: &RegionPartition,
    slots: &HashMap<usize, Vec<u8>>,
    actions: &mut Vec<Action>,
) -> Result<(Mosaic, i64, usize)> {
    let n = k1.crossings_on(part.o_tilde.iter().copied()) as i64 - k2.crossings_on(part.o_tilde.iter().copied()) as i64;
    let edges = outside_edges(k2, part);
    let j = edges.len();
    let mut cur = k2.clone();
    let deficit = |m: &Mosaic| k1.crossing_count() as i64 - m.crossing_count() as i64;
    for e in &edges {
        if deficit(&cur) <= 0 {
            break;
        }
        let crosses_arc = e.ends.iter().any(|&(cell, slot)| {
            let face = cur.face(cell);
            let (s, _) = face.strand_at(slot).unwrap();
            face.crossings().into_iter().any(|(x, y)| {
                (x == s && on_arc(face, slots.get(&cell), y)) || (y == s && on_arc(face, slots.get(&cell), x))
            })
        });
        if crosses_arc {
            actions.push(Action {
                step: 4,
                cell: e.ends[0].0,
                kind: ActionKind::AlreadyCrossing,
            });
            continue;
        }
        let d = extract_unchecked(&cur);
        let mut done = false;
        for &end in &e.ends {
            if let Some((m, cell)) = band_into_arc(&cur, &d, &part.a, slots, usize::MAX, Some(end)) {
                if components(&m) == 1 {
                    actions.push(Action {
                        step: 4,
                        cell,
                        kind: ActionKind::Band,
                    });
                    cur = m;
                    done = true;
                    break;
                }
            }
        }
        if !done {
            let first = band_into_arc(&cur, &d, &part.a, slots, usize::MAX, Some(e.ends[0]));
            if let Some((m1, _)) = first {
                let d1 = extract_unchecked(&m1);
                if let Some((m2, cell)) = band_into_arc(&m1, &d1, &part.a, slots, usize::MAX, Some(e.ends[1])) {
                    if components(&m2) == 1 {
                        actions.push(Action {
                            step: 4,
                            cell,
                            kind: ActionKind::DoubleBand,
                        });
                        cur = m2;
                        done = true;
                    }
                }
            }
        }
        if !done {
            actions.push(Action {
                step: 4,
                cell: e.ends[0].0,
                kind: ActionKind::Skipped,
            });
        }
    }
    let short = deficit(&cur);
    if short > 0 {
        return Err(Error::precondition(
            "step4",
            format!("{short} crossing(s) short after {j} outside edge(s), n = {n}"),
        ));
    }
    Ok((cur, n, j))
}

/// Remove the outermost arc of the complement of knot `k1`.
pub fn eliminate_outermost_arc(k1: &Mosaic, comp: &ComplementDecomposition) -> Result<PipelineTrace> {
    k1.check()?;
    if !extract_unchecked(k1).is_knot() {
        return Err(Error::precondition("input", "mosaic is not a knot"));
    }
    if comp.s() > 0 {
        return Err(Error::precondition("input", "complement still has loops"));
    }
    if comp.w() == 0 {
        return Err(Error::precondition("input", "complement is trivial"));
    }
    let part = outermost_arc(k1, comp).ok_or_else(|| Error::precondition("input", "no outermost arc"))?;
    let b = k1.board();
    let arc = &comp.components[part.arc];
    let slots = arc_slots(b, arc);
    let anchor = (arc.pieces[0].cell, arc.pieces[0].entry);
    let mut actions = Vec::new();

    let (l1, closure_choices) = step_one(k1, comp, &part)?;
    let (l2, lr_alignment) = step_two(&l1, &part)?;
    let k2 = step_three(&l2, &part, &slots, anchor, &mut actions)?;
    let (k3, n, j) = if k1.spec().setting == Setting::HexEnhanced {
        step_four(k1, &k2, &part, &slots, &mut actions)?
    } else {
        (k2.clone(), 0, 0)
    };

    if !k3.is_valid() || !extract_unchecked(&k3).is_knot() {
        return Err(Error::postcondition("result", "final mosaic is not a valid knot"));
    }
    if k3.crossing_count() < k1.crossing_count() {
        return Err(Error::postcondition("result", "crossings decreased"));
    }
    if part.i.iter().chain(&part.i_tilde).any(|&c| k1.face(c) != k3.face(c)) {
        return Err(Error::postcondition("result", "a tile inside the arc changed"));
    }
    let after = retained_complement(&k3, comp);
    if after.sw() >= comp.sw() {
        return Err(Error::postcondition("result", "complement did not shrink"));
    }
    let stages = [k1, &l1, &l2, &k2, &k3];
    Ok(PipelineTrace {
        crossings: stages.map(|m| m.crossing_count()),
        components: stages.map(components),
        k1: k1.clone(),
        l1,
        l2,
        k2,
        k3,
        partition: part,
        closure_choices,
        lr_alignment,
        n,
        j,
        actions,
        before: comp.sw(),
        after: after.sw(),
        complement_after: after,
    })
}

/// Outcome of [`reduce_to_trivial`].
#[derive(Clone, Debug)]
pub struct Reduction {
    pub knot: Mosaic,
    pub complement: ComplementDecomposition,
    /// `(s, w)` before the first step and after each step
    pub history: Vec<(usize, usize)>,
    pub merges: usize,
    pub traces: Vec<PipelineTrace>,
}

/// A reduction that stopped early, with everything done up to that point.
#[derive(Clone, Debug)]
pub struct ReductionFailure {
    pub error: Error,
    pub partial: Reduction,
}

/// Merge every complement loop, then eliminate arcs until the complement is empty.
pub fn reduce_to_trivial(m: &Mosaic) -> Result<Reduction, Box<ReductionFailure>> {
    let fail = |error: Error, partial: Reduction| Box::new(ReductionFailure { error, partial });
    let comp = match compute_complement(m, Policy::Greedy) {
        Ok(c) => c,
        Err(e) => {
            let partial = Reduction {
                knot: m.clone(),
                complement: ComplementDecomposition::build(m.board(), vec![Vec::new(); m.board().len()], Vec::new()),
                history: Vec::new(),
                merges: 0,
                traces: Vec::new(),
            };
            return Err(fail(e, partial));
        }
    };
    if !extract_unchecked(m).is_knot() {
        let partial = Reduction {
            knot: m.clone(),
            history: vec![comp.sw()],
            complement: comp,
            merges: 0,
            traces: Vec::new(),
        };
        return Err(fail(Error::precondition("input", "mosaic is not a knot"), partial));
    }
    let mut red = Reduction {
        knot: m.clone(),
        history: vec![comp.sw()],
        complement: comp,
        merges: 0,
        traces: Vec::new(),
    };
    while red.complement.s() > 0 {
        let id = red.complement.loop_ids()[0];
        match merge_loop(&red.knot, &red.complement, id) {
            Ok((k, c)) => {
                red.history.push(c.sw());
                red.knot = k;
                red.complement = c;
                red.merges += 1;
            }
            Err(e) => return Err(fail(e, red)),
        }
    }
    while red.complement.w() > 0 {
        match eliminate_outermost_arc(&red.knot, &red.complement) {
            Ok(t) => {
                red.history.push(t.after);
                red.knot = t.k3.clone();
                red.complement = t.complement_after.clone();
                red.traces.push(t);
            }
            Err(e) => return Err(fail(e, red)),
        }
    }
    Ok(red)
}

/// Tally of the adjacent-sides check on enhanced boards.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AdjacentSidesReport {
    pub r: usize,
    /// corner stretches examined (corner, distance on each side)
    pub stretches: usize,
    /// consistent stretches with crossing tiles at both ends
    pub configurations: u64,
    /// of those, stretches where every interior-facing point between the
    /// crossing tiles is used, so no complement arc can end there
    pub counterexamples: u64,
}

fn corner_stretch(b: &Board, corner_pos: usize, before: usize, after: usize) -> Vec<usize> {
    let ring = b.ring();
    let len = ring.len();
    (0..=before + after)
        .map(|k| ring[(corner_pos + len - before + k) % len])
        .collect()
}

fn interior_slots(b: &Board, cell: usize) -> Vec<u8> {
    (0..b.slots())
        .filter(|&k| b.neighbor(cell, k).is_some_and(|n| !b.is_boundary(n)))
        .collect()
}

/// Exhaustive check on an enhanced hexagonal board of size `r`: crossing
/// tiles on two sides meeting at a corner always leave an interior-facing
/// connection point unused between them. Every stretch of boundary running
/// through a corner is filled in all consistent ways.
pub fn adjacent_sides_exhaustive(r: usize) -> Result<AdjacentSidesReport> {
    let spec = crate::grid::BoardSpec::hex(Setting::HexEnhanced, r)?;
    let b = crate::mosaic::board(spec)?;
    let mut rep = AdjacentSidesReport {
        r,
        ..Default::default()
    };
    if r < 3 {
        return Ok(rep);
    }
    let ring = b.ring().to_vec();
    for (pos, &corner) in ring.iter().enumerate() {
        if b.class(corner) != CellClass::BoundaryCorner {
            continue;
        }
        for before in 1..=r - 2 {
            for after in 1..=r - 2 {
                rep.stretches += 1;
                let path = corner_stretch(&b, pos, before, after);
                let (c, x) = count_stretch(&b, &path);
                rep.configurations += c;
                rep.counterexamples += x;
            }
        }
    }
    Ok(rep)
}

fn count_stretch(b: &Board, path: &[usize]) -> (u64, u64) {
    let last = path.len() - 1;
    let cands: Vec<Vec<TileFace>> = path
        .iter()
        .enumerate()
        .map(|(k, &cell)| {
            all_faces(Geometry::Hex)
                .iter()
                .filter(|f| face_allowed(b, cell, f))
                .filter(|f| (k != 0 && k != last) || f.crossing_count() > 0)
                .copied()
                .collect()
        })
        .collect();
    // shared slot between consecutive path cells
    let link: Vec<(u8, u8)> = path
        .windows(2)
        .map(|w| {
            let k = (0..b.slots()).find(|&k| b.neighbor(w[0], k) == Some(w[1])).unwrap();
            (k, b.opposite(k))
        })
        .collect();
    fn go(
        b: &Board,
        path: &[usize],
        cands: &[Vec<TileFace>],
        link: &[(u8, u8)],
        k: usize,
        prev: Option<&TileFace>,
        all_used: bool,
    ) -> (u64, u64) {
        if k == path.len() {
            return (1, u64::from(all_used));
        }
        let mut acc = (0, 0);
        for f in &cands[k] {
            if let Some(p) = prev {
                let (s, t) = link[k - 1];
                if p.uses(s) != f.uses(t) {
                    continue;
                }
            }
            let between = k != 0 && k != path.len() - 1;
            let used = !between || interior_slots(b, path[k]).iter().all(|&s| f.uses(s));
            let (c, x) = go(b, path, cands, link, k + 1, Some(f), all_used && used);
            acc.0 += c;
            acc.1 += x;
        }
        acc
    }
    go(b, path, &cands, &link, 0, None, true)
}

/// Check a whole enhanced mosaic: for every corner with crossing tiles on both
/// of its sides, the nearest such pair must have a complement arc ending
/// between them. Returns (pairs checked, pairs without an endpoint).
pub fn adjacent_sides_witnesses(m: &Mosaic, comp: &ComplementDecomposition) -> (usize, usize) {
    let b = m.board();
    let ring = b.ring();
    let len = ring.len();
    let ends = comp.endpoints();
    let (mut pairs, mut bad) = (0, 0);
    for (pos, &corner) in ring.iter().enumerate() {
        if b.class(corner) != CellClass::BoundaryCorner {
            continue;
        }
        let nearest = |dir: isize| -> Option<usize> {
            (1..len).find_map(|d| {
                let cell = ring[((pos as isize + dir * d as isize).rem_euclid(len as isize)) as usize];
                if b.class(cell) == CellClass::BoundaryCorner {
                    return Some(None);
                }
                (m.face(cell).crossing_count() > 0).then_some(Some(d))
            })?
        };
        let (Some(before), Some(after)) = (nearest(-1), nearest(1)) else {
            continue;
        };
        pairs += 1;
        let path = corner_stretch(b, pos, before, after);
        let witnessed = path[1..path.len() - 1].iter().any(|&cell| {
            interior_slots(b, cell)
                .into_iter()
                .any(|k| !m.face(cell).uses(k) && ends.contains(&b.edge(cell, k)))
        });
        if !witnessed {
            bad += 1;
        }
    }
    (pairs, bad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::BoardSpec;

    #[test]
    fn blank_hex_tile_has_two_cap_triples() {
        let opts = complement_options(&TileFace::blank(Geometry::Hex));
        assert_eq!(opts, vec![vec![(0, 1), (2, 3), (4, 5)], vec![(0, 5), (1, 2), (3, 4)]]);
    }

    #[test]
    fn full_tiles_have_empty_complement() {
        assert_eq!(complement_options(&alternating_tile()), vec![Vec::<(u8, u8)>::new()]);
    }

    #[test]
    fn reconnections_put_crossing_first() {
        let r = reconnections((0, 1), (2, 3));
        assert_eq!(r.len(), 2);
        assert!(interleave(r[0][0], r[0][1]));
    }

    #[test]
    fn blank_board_complement_counts() {
        let m = Mosaic::blank(BoardSpec::hex(Setting::HexStandard, 2).unwrap()).unwrap();
        let c = compute_complement(&m, Policy::Canonical).unwrap();
        // three caps on the single interior tile, each ending on the boundary
        assert_eq!(c.sw(), (0, 3));
        assert!(check_complement(&m, &c).is_ok());
    }
}

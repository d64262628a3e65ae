//! The extremal saturated links `L_r` and the knots `A_r` smoothed from them.

use serde::Serialize;

use crate::diagram::{extract_unchecked, LinkDiagram};
use crate::error::{Error, Result};
use crate::grid::{BoardSpec, CellClass, Geometry, Setting};
use crate::mosaic::{boundary_closures, closures_on, ClosureOptions, Mosaic};
use crate::tiles::{alternating_tile, TileFace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    BoundaryMerge,
    CentralMerge,
    NugatoryRemoval,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ScheduleEntry {
    pub cell: usize,
    /// strand indices in the tile as it stands when the entry is applied
    pub crossing: (usize, usize),
    pub choice: u8,
    pub role: Role,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SmoothingSchedule {
    pub entries: Vec<ScheduleEntry>,
}

impl SmoothingSchedule {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn apply(&self, m: &Mosaic) -> Result<Mosaic> {
        let mut out = m.clone();
        for e in &self.entries {
            let face = out.face(e.cell).smooth(e.crossing.0, e.crossing.1, e.choice)?;
            out.set(e.cell, face);
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Prediction {
    /// crossings of a saturated board without boundary crossings
    pub saturated_crossings: usize,
    /// crossings of `L_r` itself (adds the boundary crossings on enhanced boards)
    pub link_crossings: usize,
    pub link_components: usize,
    pub knot_crossing_bound: usize,
}

fn ceil_half(r: usize) -> usize {
    r.div_ceil(2)
}

/// Closed forms for crossings and components of `L_r` and `A_r`.
pub fn predicted(r: usize, setting: Setting) -> Result<Prediction> {
    match setting {
        Setting::Rect => {
            if r < 4 {
                return Err(Error::Unsupported(format!("rect r={r}")));
            }
            let sat = (r - 2) * (r - 2);
            let bound = if r % 2 == 1 { sat - 2 } else { sat - (r - 3) };
            Ok(Prediction {
                saturated_crossings: sat,
                link_crossings: sat,
                link_components: if r.is_multiple_of(2) { r - 2 } else { 1 },
                knot_crossing_bound: bound,
            })
        }
        _ => {
            if r < 2 {
                return Err(Error::Unsupported(format!("{setting} r={r}")));
            }
            let (r2, r1) = (9 * r * r, 27 * r);
            let sat = r2 + 21 - r1;
            let p = match setting {
                Setting::HexStandard => Prediction {
                    saturated_crossings: sat,
                    link_crossings: sat,
                    link_components: r - 1,
                    knot_crossing_bound: match r {
                        2 => 3,
                        3 => 19,
                        _ => r2 + 23 - 28 * r,
                    },
                },
                Setting::HexSemiEnhanced => Prediction {
                    saturated_crossings: sat,
                    link_crossings: sat,
                    link_components: if r == 2 { 1 } else { ceil_half(r) },
                    knot_crossing_bound: if r == 2 { 3 } else { r2 + 22 - r1 - ceil_half(r) },
                },
                Setting::HexEnhanced => Prediction {
                    saturated_crossings: sat,
                    link_crossings: r2 + 15 - 24 * r,
                    link_components: if r == 2 { 1 } else { r + 1 },
                    knot_crossing_bound: if r == 2 { 3 } else { r2 + 15 - 25 * r },
                },
                Setting::Rect => unreachable!(),
            };
            Ok(p)
        }
    }
}

/// Board with every interior cell holding the saturating tile.
pub fn saturated_interior(spec: BoardSpec) -> Result<Mosaic> {
    let mut m = Mosaic::blank(spec)?;
    let t = match spec.geometry {
        Geometry::Hex => alternating_tile(),
        Geometry::Rect => TileFace::parse(Geometry::Rect, "(0-2)(1-3):o")?,
    };
    let cells: Vec<usize> = m.board().interior_cells().collect();
    for c in cells {
        m.set(c, t);
    }
    Ok(m)
}

/// Reassign over/under bits so that every component alternates.
///
/// Each component gets a parity offset; the two passages of a crossing must
/// disagree, which fixes every offset relative to its neighbours. Of the two
/// solutions per connected piece, the one agreeing with more current bits is kept.
pub fn make_alternating(m: &Mosaic) -> Result<Mosaic> {
    let d = extract_unchecked(m);
    let k = d.component_count();
    // passages of each crossing: (component, position in walk, strand)
    let mut at: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); d.crossing_count()];
    for (c, seq) in d.passages.iter().enumerate() {
        for (pos, p) in seq.iter().enumerate() {
            at[p.crossing].push((c, pos, p.strand));
        }
    }
    // offset[c]: passage at position pos is over iff (pos + offset) is even
    let mut offset: Vec<Option<usize>> = vec![None; k];
    let mut piece: Vec<usize> = vec![usize::MAX; k];
    let mut pieces = 0;
    for start in 0..k {
        if offset[start].is_some() {
            continue;
        }
        offset[start] = Some(0);
        piece[start] = pieces;
        let mut stack = vec![start];
        while let Some(c) = stack.pop() {
            for p in &d.passages[c] {
                let [(c1, p1, _), (c2, p2, _)] = [at[p.crossing][0], at[p.crossing][1]];
                let (me, mypos, other, opos) = if c1 == c { (c1, p1, c2, p2) } else { (c2, p2, c1, p1) };
                let my_over = (mypos + offset[me].unwrap()).is_multiple_of(2);
                // other passage must be under when mine is over
                let want = if my_over { (opos + 1) % 2 } else { opos % 2 };
                match offset[other] {
                    None => {
                        offset[other] = Some(want);
                        piece[other] = pieces;
                        stack.push(other);
                    }
                    Some(o) if o != want => {
                        return Err(Error::Unsupported("projection admits no alternating state".into()));
                    }
                    _ => {}
                }
            }
        }
        pieces += 1;
    }
    // per piece: agreement with current bits for flip = false
    let mut agree = vec![0i64; pieces];
    for (x, passes) in at.iter().enumerate() {
        let (c, pos, strand) = passes[0];
        let over = (pos + offset[c].unwrap()).is_multiple_of(2);
        let current = d.crossings[x].over == strand;
        agree[piece[c]] += if over == current { 1 } else { -1 };
    }
    let mut out = m.clone();
    for (x, passes) in at.iter().enumerate() {
        let (c, pos, strand) = passes[0];
        let flip = agree[piece[c]] < 0;
        let over = (pos + offset[c].unwrap()).is_multiple_of(2) != flip;
        let cross = d.crossings[x];
        let other = if cross.strands.0 == strand {
            cross.strands.1
        } else {
            cross.strands.0
        };
        let face = *out.face(cross.cell);
        if face.is_over(strand, other) != over {
            out.set(cross.cell, face.flip(strand, other)?);
        }
    }
    Ok(out)
}

fn unsupported(r: usize, setting: Setting) -> Error {
    Error::Unsupported(format!("no generator for {setting} with r={r}"))
}

/// The saturated link `L_r` of the setting.
pub fn gen_link(r: usize, setting: Setting) -> Result<Mosaic> {
    match setting {
        Setting::HexStandard => standard_link(r),
        Setting::HexSemiEnhanced => semi_link(r),
        Setting::HexEnhanced => enhanced_link(r),
        Setting::Rect => {
            if r < 4 || r % 2 == 1 {
                return Err(unsupported(r, setting));
            }
            let closures = boundary_closures(&saturated_interior(BoardSpec::rect(r)?)?, ClosureOptions::default());
            pick_reduced(closures)
        }
    }
}

/// First closure (after alternating) with no nugatory crossing.
fn pick_reduced(closures: Vec<Mosaic>) -> Result<Mosaic> {
    for c in closures {
        let c = make_alternating(&c)?;
        if extract_unchecked(&c).is_reduced() {
            return Ok(c);
        }
    }
    Err(Error::Unsupported(
        "no reduced closure of the saturated interior".into(),
    ))
}

fn standard_link(r: usize) -> Result<Mosaic> {
    if r < 2 {
        return Err(unsupported(r, Setting::HexStandard));
    }
    let m = saturated_interior(BoardSpec::hex(Setting::HexStandard, r)?)?;
    pick_reduced(boundary_closures(&m, ClosureOptions::default()))
}

fn semi_link(r: usize) -> Result<Mosaic> {
    if r < 2 {
        return Err(unsupported(r, Setting::HexSemiEnhanced));
    }
    let mut m = standard_link(r)?.with_setting(Setting::HexSemiEnhanced)?;
    let ring: Vec<usize> = m.board().ring().to_vec();
    let mut comps = extract_unchecked(&m).component_count();
    for cell in ring {
        let face = *m.face(cell);
        if !face.is_parallel_pairing() {
            continue;
        }
        let swapped = m.with_face(cell, face.band_swap().expect("parallel pairing swaps"));
        let n = extract_unchecked(&swapped).component_count();
        if n < comps {
            m = swapped;
            comps = n;
        }
    }
    make_alternating(&m)
}

fn enhanced_link(r: usize) -> Result<Mosaic> {
    if r < 2 {
        return Err(unsupported(r, Setting::HexEnhanced));
    }
    let m = saturated_interior(BoardSpec::hex(Setting::HexEnhanced, r)?)?;
    if r == 2 {
        return pick_reduced(boundary_closures(&m, ClosureOptions::default()));
    }
    let b = m.shared_board();
    let ring: Vec<usize> = b.ring().to_vec();
    // crossing tiles along the top, lower-right and lower-left sides; caps elsewhere
    let allowed = |cell: usize, f: &TileFace| match b.class(cell) {
        CellClass::BoundaryEdge => {
            let side = b.boundary_sides(cell)[0];
            if side % 2 == 0 {
                f.crossing_count() == 1
            } else {
                f.arc_count() == 1
            }
        }
        _ => true,
    };
    let closures = closures_on(
        &m,
        &ring,
        &allowed,
        ClosureOptions {
            projection_only: true,
            limit: Some(2),
        },
    );
    let closed = closures
        .into_iter()
        .next()
        .ok_or_else(|| Error::Unsupported("enhanced closure not found".into()))?;
    make_alternating(&closed)
}

/// Try each crossing in `cells` (in order) between distinct components and
/// keep the first smoothing that merges them and leaves the diagram reduced.
fn merge_step(m: &Mosaic, cells: &[usize], role: Role) -> Option<(Mosaic, ScheduleEntry)> {
    let d = extract_unchecked(m);
    let comps = d.component_count();
    for &cell in cells {
        for (i, j) in m.face(cell).crossings() {
            let x = d
                .crossings
                .iter()
                .find(|x| x.cell == cell && x.strands == (i, j))
                .unwrap();
            if x.is_self() {
                continue;
            }
            for choice in 0..2u8 {
                let Ok(face) = m.face(cell).smooth(i, j, choice) else {
                    continue;
                };
                let next = m.with_face(cell, face);
                let nd = extract_unchecked(&next);
                if nd.component_count() + 1 == comps && nd.is_reduced() {
                    return Some((
                        next,
                        ScheduleEntry {
                            cell,
                            crossing: (i, j),
                            choice,
                            role,
                        },
                    ));
                }
            }
        }
    }
    None
}

/// Merge until one component is left, drawing crossings from each phase in turn.
fn merge_all(parent: Mosaic, phases: &[(Vec<usize>, Role)]) -> Result<Derived> {
    let mut m = parent.clone();
    let mut schedule = SmoothingSchedule::default();
    'outer: while extract_unchecked(&m).component_count() > 1 {
        for (cells, role) in phases {
            if let Some((next, entry)) = merge_step(&m, cells, *role) {
                m = next;
                schedule.entries.push(entry);
                continue 'outer;
            }
        }
        return Err(Error::Unsupported(
            "no merging smoothing keeps the diagram reduced".into(),
        ));
    }
    Ok(Derived {
        parent,
        knot: m,
        schedule,
    })
}

fn central_cells(m: &Mosaic) -> Vec<usize> {
    (0..m.board().len())
        .filter(|&c| m.board().class(c) == CellClass::Central)
        .collect()
}

/// A knot together with the saturated board it was smoothed from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derived {
    /// `L_r`, or for semi-enhanced `r = 3` and odd square boards the
    /// saturated closure the knot was cut from
    pub parent: Mosaic,
    pub knot: Mosaic,
    pub schedule: SmoothingSchedule,
}

/// Reduced alternating knot `A_r` and the smoothing schedule producing it from its parent.
pub fn gen_knot(r: usize, setting: Setting) -> Result<(Mosaic, SmoothingSchedule)> {
    let d = derive_knot(r, setting)?;
    Ok((d.knot, d.schedule))
}

pub fn derive_knot(r: usize, setting: Setting) -> Result<Derived> {
    match (setting, r) {
        (Setting::HexStandard | Setting::HexSemiEnhanced | Setting::HexEnhanced, 2) => {
            let m = gen_link(2, setting)?;
            Ok(Derived {
                parent: m.clone(),
                knot: m,
                schedule: SmoothingSchedule::default(),
            })
        }
        (Setting::HexStandard, 3) => standard_three(),
        (Setting::HexSemiEnhanced, 3) => semi_three(),
        (Setting::Rect, r) if r >= 5 && r % 2 == 1 => rect_odd(r),
        (Setting::HexEnhanced, r) if r >= 3 => {
            let m = gen_link(r, setting)?;
            let b = m.shared_board();
            let top: Vec<usize> = (1..=b.row_len(1)).map(|c| b.row_col_index(1, c).unwrap()).collect();
            let lower_left = vec![b.row_col_index(r + 1, 1).unwrap()];
            let interior: Vec<usize> = b.interior_cells().collect();
            merge_all(
                m.clone(),
                &[
                    (top, Role::BoundaryMerge),
                    (lower_left, Role::BoundaryMerge),
                    (central_cells(&m), Role::CentralMerge),
                    (interior, Role::CentralMerge),
                ],
            )
        }
        _ => {
            let m = gen_link(r, setting)?;
            let cells = match setting {
                Setting::Rect => m.board().interior_cells().collect(),
                _ => central_cells(&m),
            };
            merge_all(m, &[(cells, Role::CentralMerge)])
        }
    }
}

/// Standard `r = 3`: no single smoothing of `L_3` is reduced, so merge in the
/// penultimate corona and then smooth away the nugatory crossing it leaves.
fn standard_three() -> Result<Derived> {
    let link = gen_link(3, Setting::HexStandard)?;
    let d = extract_unchecked(&link);
    for x in d.crossings.iter().filter(|x| !x.is_self()) {
        for choice in 0..2u8 {
            let Ok(face) = link.face(x.cell).smooth(x.strands.0, x.strands.1, choice) else {
                continue;
            };
            let merged = link.with_face(x.cell, face);
            let md = extract_unchecked(&merged);
            if md.component_count() != 1 {
                continue;
            }
            for &n in &md.nugatory_crossings() {
                let y = md.crossings[n];
                for c2 in 0..2u8 {
                    let Ok(f2) = merged.face(y.cell).smooth(y.strands.0, y.strands.1, c2) else {
                        continue;
                    };
                    let out = merged.with_face(y.cell, f2);
                    let od = extract_unchecked(&out);
                    if od.is_knot() && od.is_reduced() && od.is_alternating() {
                        let schedule = SmoothingSchedule {
                            entries: vec![
                                ScheduleEntry {
                                    cell: x.cell,
                                    crossing: x.strands,
                                    choice,
                                    role: Role::CentralMerge,
                                },
                                ScheduleEntry {
                                    cell: y.cell,
                                    crossing: y.strands,
                                    choice: c2,
                                    role: Role::NugatoryRemoval,
                                },
                            ],
                        };
                        return Ok(Derived {
                            parent: link,
                            knot: out,
                            schedule,
                        });
                    }
                }
            }
        }
    }
    Err(Error::Unsupported("no reduced knot from standard L_3".into()))
}

/// Semi-enhanced `r = 3`: among the saturated semi-enhanced closures, the
/// first one where a single smoothing gives a reduced alternating knot.
fn semi_three() -> Result<Derived> {
    let m = saturated_interior(BoardSpec::hex(Setting::HexSemiEnhanced, 3)?)?;
    for closure in boundary_closures(&m, ClosureOptions::default()) {
        let closure = make_alternating(&closure)?;
        if extract_unchecked(&closure).component_count() != 2 {
            continue;
        }
        let cells: Vec<usize> = (0..closure.board().len()).collect();
        if let Ok(found) = merge_all(closure, &[(cells, Role::CentralMerge)]) {
            return Ok(found);
        }
    }
    Err(Error::Unsupported("no reduced knot on a semi-enhanced 3-mosaic".into()))
}

/// Odd square boards: close the saturated board into a knot and smooth away
/// the two corner kinks.
fn rect_odd(r: usize) -> Result<Derived> {
    let m = saturated_interior(BoardSpec::rect(r)?)?;
    for closure in boundary_closures(&m, ClosureOptions::default()) {
        let parent = make_alternating(&closure)?;
        let mut cur = parent.clone();
        if extract_unchecked(&cur).component_count() != 1 {
            continue;
        }
        let mut schedule = SmoothingSchedule::default();
        loop {
            let d = extract_unchecked(&cur);
            let Some(&n) = d.nugatory_crossings().iter().next() else {
                break;
            };
            let y = d.crossings[n];
            let mut fixed = false;
            for choice in 0..2u8 {
                let Ok(f) = cur.face(y.cell).smooth(y.strands.0, y.strands.1, choice) else {
                    continue;
                };
                let next = cur.with_face(y.cell, f);
                if extract_unchecked(&next).is_knot() {
                    schedule.entries.push(ScheduleEntry {
                        cell: y.cell,
                        crossing: y.strands,
                        choice,
                        role: Role::NugatoryRemoval,
                    });
                    cur = next;
                    fixed = true;
                    break;
                }
            }
            if !fixed {
                return Err(Error::Unsupported("corner kink could not be removed".into()));
            }
        }
        return Ok(Derived {
            parent,
            knot: cur,
            schedule,
        });
    }
    Err(Error::Unsupported(format!("no knot closure on the square {r}-mosaic")))
}

/// Diagram of `L_r` together with component statistics used by the census checks.
pub fn link_diagram(r: usize, setting: Setting) -> Result<LinkDiagram> {
    Ok(extract_unchecked(&gen_link(r, setting)?))
}

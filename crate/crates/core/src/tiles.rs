//! Tiles as planar matchings of connection slots with over/under data.
//!
//! A [`TileFace`] is an oriented tile: up to three strands (two on square
//! tiles), each joining two distinct slots, and one bit for every pair of
//! strands whose endpoints interleave around the tile boundary. Strands are
//! kept sorted by their least slot, and bit `p` of `over` refers to the
//! strand-index pair `(0,1)`, `(0,2)`, `(1,2)` in that order; a set bit means
//! the lower-indexed strand passes over.
//!
//! Faces are drawn as straight chords between points on a circle, one point
//! per slot. The points are nudged slightly off the regular positions so the
//! three diameters of a hexagon never meet in one point; that fixes the order
//! in which a strand meets its crossings.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Geometry;

const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

fn pair_index(i: usize, j: usize) -> usize {
    match (i.min(j), i.max(j)) {
        (0, 1) => 0,
        (0, 2) => 1,
        (1, 2) => 2,
        _ => unreachable!("strand pair out of range"),
    }
}

/// Whether chords `(a,b)` and `(c,d)` cross inside a convex tile.
pub fn interleave(s: (u8, u8), t: (u8, u8)) -> bool {
    let (a, b) = (s.0.min(s.1), s.0.max(s.1));
    let inside = |x: u8| a < x && x < b;
    inside(t.0) != inside(t.1)
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct TileFace {
    geometry: Geometry,
    len: u8,
    strands: [(u8, u8); 3],
    over: u8,
}

impl fmt::Debug for TileFace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TileFace({} {})", self.geometry, self.code())
    }
}

impl TileFace {
    pub fn blank(geometry: Geometry) -> Self {
        TileFace {
            geometry,
            len: 0,
            strands: [(0, 0); 3],
            over: 0,
        }
    }

    /// Build a face from slot pairs. `over(s, t)` is asked once for every
    /// crossing, with `s` the lower-indexed strand, and says whether `s` is on top.
    pub fn build(
        geometry: Geometry,
        strands: &[(u8, u8)],
        mut over: impl FnMut((u8, u8), (u8, u8)) -> bool,
    ) -> Result<Self> {
        let n = geometry.slots();
        if strands.len() > geometry.max_strands() {
            return Err(Error::InvalidTile(format!(
                "{} strands on a {geometry} tile",
                strands.len()
            )));
        }
        let mut seen = 0u8;
        let mut sorted: Vec<(u8, u8)> = Vec::with_capacity(strands.len());
        for &(a, b) in strands {
            if a >= n || b >= n || a == b {
                return Err(Error::InvalidTile(format!("bad strand ({a}-{b})")));
            }
            for s in [a, b] {
                if seen & (1 << s) != 0 {
                    return Err(Error::InvalidTile(format!("slot {s} used twice")));
                }
                seen |= 1 << s;
            }
            sorted.push((a.min(b), a.max(b)));
        }
        sorted.sort();
        let mut face = TileFace {
            geometry,
            len: sorted.len() as u8,
            strands: [(0, 0); 3],
            over: 0,
        };
        face.strands[..sorted.len()].copy_from_slice(&sorted);
        for (p, &(i, j)) in PAIRS.iter().enumerate() {
            if j < sorted.len() && interleave(sorted[i], sorted[j]) && over(sorted[i], sorted[j]) {
                face.over |= 1 << p;
            }
        }
        Ok(face)
    }

    /// Face with every lower-indexed strand on top.
    pub fn new(geometry: Geometry, strands: &[(u8, u8)]) -> Result<Self> {
        Self::build(geometry, strands, |_, _| true)
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn strands(&self) -> &[(u8, u8)] {
        &self.strands[..self.len as usize]
    }

    pub fn arc_count(&self) -> usize {
        self.len as usize
    }

    pub fn is_blank(&self) -> bool {
        self.len == 0
    }

    /// Bitmask of used slots.
    pub fn used_mask(&self) -> u8 {
        self.strands().iter().fold(0u8, |m, &(a, b)| m | (1 << a) | (1 << b))
    }

    pub fn uses(&self, slot: u8) -> bool {
        self.used_mask() & (1 << slot) != 0
    }

    pub fn used_slots(&self) -> Vec<u8> {
        (0..self.geometry.slots()).filter(|&k| self.uses(k)).collect()
    }

    /// Strand index and the far slot of the strand ending at `slot`.
    pub fn strand_at(&self, slot: u8) -> Option<(usize, u8)> {
        self.strands().iter().enumerate().find_map(|(i, &(a, b))| {
            if a == slot {
                Some((i, b))
            } else if b == slot {
                Some((i, a))
            } else {
                None
            }
        })
    }

    /// Crossing strand pairs `(i, j)` with `i < j`, in canonical order.
    pub fn crossings(&self) -> Vec<(usize, usize)> {
        let n = self.len as usize;
        PAIRS
            .iter()
            .copied()
            .filter(|&(i, j)| j < n && interleave(self.strands[i], self.strands[j]))
            .collect()
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings().len()
    }

    /// Whether strand `i` passes over strand `j`. Panics if they do not cross.
    pub fn is_over(&self, i: usize, j: usize) -> bool {
        assert!(
            i != j && interleave(self.strands[i], self.strands[j]),
            "strands {i} and {j} do not cross"
        );
        let bit = self.over & (1 << pair_index(i, j)) != 0;
        if i < j {
            bit
        } else {
            !bit
        }
    }

    /// Copy with the crossing of strands `i` and `j` flipped.
    pub fn flip(&self, i: usize, j: usize) -> Result<Self> {
        if i == j || i.max(j) >= self.arc_count() || !interleave(self.strands[i], self.strands[j]) {
            return Err(Error::NoSuchCrossing(i, j));
        }
        let mut out = *self;
        out.over ^= 1 << pair_index(i, j);
        Ok(out)
    }

    /// Copy with over/under chosen by `over(s, t)` for every crossing.
    pub fn with_states(&self, over: impl FnMut((u8, u8), (u8, u8)) -> bool) -> Self {
        Self::build(self.geometry, self.strands(), over).expect("same strands are valid")
    }

    /// Raw crossing bits in canonical order (bit `k` = `k`-th crossing, lower strand over).
    pub fn state_bits(&self) -> u8 {
        let mut bits = 0;
        for (k, (i, j)) in self.crossings().into_iter().enumerate() {
            if self.is_over(i, j) {
                bits |= 1 << k;
            }
        }
        bits
    }

    pub fn with_state_bits(&self, bits: u8) -> Self {
        let crossings = self.crossings();
        let strands = self.strands().to_vec();
        self.with_states(|s, t| {
            let i = strands.iter().position(|&x| x == s).unwrap();
            let j = strands.iter().position(|&x| x == t).unwrap();
            let k = crossings.iter().position(|&c| c == (i, j)).unwrap();
            bits & (1 << k) != 0
        })
    }

    /// Same strands and bits with slots renumbered by `map`.
    fn remap(&self, map: impl Fn(u8) -> u8) -> Self {
        let moved: Vec<((u8, u8), usize)> = self
            .strands()
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| ((map(a), map(b)), i))
            .collect();
        let old = *self;
        let lookup = |s: (u8, u8)| {
            moved
                .iter()
                .find(|(m, _)| (m.0.min(m.1), m.0.max(m.1)) == s)
                .map(|&(_, i)| i)
                .unwrap()
        };
        let strands: Vec<(u8, u8)> = moved.iter().map(|&(s, _)| s).collect();
        Self::build(self.geometry, &strands, |s, t| old.is_over(lookup(s), lookup(t)))
            .expect("remapped face stays valid")
    }

    pub fn rotate(&self, k: i32) -> Self {
        let n = self.geometry.slots() as i32;
        let k = k.rem_euclid(n) as u8;
        if k == 0 {
            return *self;
        }
        self.remap(|s| (s + k) % n as u8)
    }

    /// Mirror across the axis through slot 0 (reverses slot order; over/under kept).
    pub fn reflect(&self) -> Self {
        let n = self.geometry.slots();
        self.remap(|s| (n - s) % n)
    }

    /// Canonical tile code: `-` for a blank tile, otherwise `(a-b)...` with an
    /// optional `:` and one `o`/`u` per crossing.
    pub fn code(&self) -> String {
        if self.is_blank() {
            return "-".into();
        }
        let mut s = String::new();
        for &(a, b) in self.strands() {
            s.push_str(&format!("({a}-{b})"));
        }
        let crossings = self.crossings();
        if !crossings.is_empty() {
            s.push(':');
            for (i, j) in crossings {
                s.push(if self.is_over(i, j) { 'o' } else { 'u' });
            }
        }
        s
    }

    pub fn parse(geometry: Geometry, code: &str) -> Result<Self> {
        let code = code.trim();
        if code == "-" {
            return Ok(Self::blank(geometry));
        }
        let (body, bits) = match code.split_once(':') {
            Some((b, bits)) => (b, Some(bits)),
            None => (code, None),
        };
        let mut strands = Vec::new();
        let mut rest = body;
        while !rest.is_empty() {
            let inner = rest
                .strip_prefix('(')
                .and_then(|r| r.split_once(')'))
                .ok_or_else(|| Error::InvalidTile(format!("malformed strand list `{body}`")))?;
            let (pair, tail) = inner;
            let (a, b) = pair
                .split_once('-')
                .ok_or_else(|| Error::InvalidTile(format!("malformed strand `({pair})`")))?;
            let a: u8 = a.parse().map_err(|_| Error::InvalidTile(format!("bad slot `{a}`")))?;
            let b: u8 = b.parse().map_err(|_| Error::InvalidTile(format!("bad slot `{b}`")))?;
            if a >= b {
                return Err(Error::InvalidTile(format!("strand ({a}-{b}) not in ascending order")));
            }
            strands.push((a, b));
            rest = tail;
        }
        if strands.is_empty() {
            return Err(Error::InvalidTile("empty tile code".into()));
        }
        if strands.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidTile("strands not sorted".into()));
        }
        let face = Self::new(geometry, &strands)?;
        let crossings = face.crossings();
        let bits: Vec<char> = bits.unwrap_or("").chars().collect();
        if bits.len() != crossings.len() {
            return Err(Error::InvalidTile(format!(
                "expected {} crossing bit(s), found {}",
                crossings.len(),
                bits.len()
            )));
        }
        let mut state = 0u8;
        for (k, c) in bits.iter().enumerate() {
            match c {
                'o' => state |= 1 << k,
                'u' => {}
                _ => return Err(Error::InvalidTile(format!("bad crossing bit `{c}`"))),
            }
        }
        Ok(face.with_state_bits(state))
    }

    /// Least code over all rotations.
    pub fn canonical(&self) -> Self {
        let n = self.geometry.slots() as i32;
        (0..n)
            .map(|k| self.rotate(k))
            .min_by(|a, b| a.code().cmp(&b.code()))
            .unwrap()
    }

    pub fn same_class(&self, other: &TileFace) -> bool {
        self.geometry == other.geometry && self.canonical() == other.canonical()
    }

    pub fn properties(&self) -> TileProperties {
        tile_properties(self)
    }

    /// Three strands, three crossings, every strand over exactly once.
    pub fn is_alternating_3crossing(&self) -> bool {
        if self.len != 3 || self.crossing_count() != 3 {
            return false;
        }
        (0..3).all(|i| (0..3).filter(|&j| j != i && self.is_over(i, j)).count() == 1)
    }

    /// Two non-crossing strands on four consecutive slots, nested: the outer
    /// strand runs between the end slots and the inner one caps the middle two.
    /// This is the pairing a boundary band swap introduces.
    pub fn is_band_pairing(&self) -> bool {
        self.consecutive_pairing() == Some(Pairing::Nested)
    }

    /// Two non-crossing strands on four consecutive slots, each joining a
    /// neighbouring slot pair.
    pub fn is_parallel_pairing(&self) -> bool {
        self.consecutive_pairing() == Some(Pairing::Parallel)
    }

    fn consecutive_pairing(&self) -> Option<Pairing> {
        if self.len != 2 || self.crossing_count() != 0 {
            return None;
        }
        let n = self.geometry.slots();
        let mask = self.used_mask();
        let start = (0..n).find(|&s| (0..4).all(|d| mask & (1 << ((s + d) % n)) != 0))?;
        if n == 4 {
            // all four slots of a square tile are "consecutive" from every start;
            // square tiles carry no band semantics
            return None;
        }
        let pos = |x: u8| (x + n - start) % n;
        let (a, b) = self.strands[0];
        let (pa, pb) = (pos(a).min(pos(b)), pos(a).max(pos(b)));
        Some(if (pa, pb) == (0, 3) || (pa, pb) == (1, 2) {
            Pairing::Nested
        } else {
            Pairing::Parallel
        })
    }

    /// Swap a four-consecutive-slot non-crossing tile between its two pairings.
    pub fn band_swap(&self) -> Option<Self> {
        let n = self.geometry.slots();
        let pairing = self.consecutive_pairing()?;
        let mask = self.used_mask();
        let s = (0..n).find(|&s| (0..4).all(|d| mask & (1 << ((s + d) % n)) != 0))?;
        let at = |d: u8| (s + d) % n;
        let strands = match pairing {
            Pairing::Nested => [(at(0), at(1)), (at(2), at(3))],
            Pairing::Parallel => [(at(0), at(3)), (at(1), at(2))],
        };
        Self::new(self.geometry, &strands).ok()
    }

    /// Smooth the crossing of strands `i` and `j`.
    ///
    /// With the four endpoints sorted as `p1 < p2 < p3 < p4`, choice 0 joins
    /// `(p1,p2)(p3,p4)` and choice 1 joins `(p1,p4)(p2,p3)`. The other crossings
    /// keep their over/under bits. A choice that would wrap a new strand around
    /// a third strand (a bigon) is rejected.
    pub fn smooth(&self, i: usize, j: usize, choice: u8) -> Result<Self> {
        let n = self.arc_count();
        if i == j || i >= n || j >= n || !interleave(self.strands[i], self.strands[j]) {
            return Err(Error::NoSuchCrossing(i, j));
        }
        if choice > 1 {
            return Err(Error::InvalidTile(format!("smoothing choice {choice}")));
        }
        let geo = Drawing::of(self);
        let (i, j) = (i.min(j), i.max(j));
        let mut ends = [
            self.strands[i].0,
            self.strands[i].1,
            self.strands[j].0,
            self.strands[j].1,
        ];
        ends.sort();
        let new_pairs = if choice == 0 {
            [(ends[0], ends[1]), (ends[2], ends[3])]
        } else {
            [(ends[0], ends[3]), (ends[1], ends[2])]
        };
        let third: Vec<usize> = (0..n).filter(|&k| k != i && k != j).collect();
        let t_ij = geo.param(i, j);
        let t_ji = geo.param(j, i);
        // For each new strand: which third-strand crossings lie on its two halves.
        let half_of = |x: u8| -> (usize, bool) {
            // strand index containing slot x and whether the half runs from its low end
            if self.strands[i].0 == x {
                (i, true)
            } else if self.strands[i].1 == x {
                (i, false)
            } else if self.strands[j].0 == x {
                (j, true)
            } else {
                (j, false)
            }
        };
        let mut inherited: Vec<((u8, u8), usize, bool)> = Vec::new(); // (new strand, third, new over third)
        for &(x, y) in &new_pairs {
            for &k in &third {
                let mut hits = Vec::new();
                for end in [x, y] {
                    let (s, from_low) = half_of(end);
                    if !interleave(self.strands[s], self.strands[k]) {
                        continue;
                    }
                    let t_v = if s == i { t_ij } else { t_ji };
                    let t_k = geo.param(s, k);
                    let on_half = if from_low { t_k < t_v } else { t_k > t_v };
                    if on_half {
                        hits.push(self.is_over(s, k));
                    }
                }
                let minimal = interleave((x, y), self.strands[k]) as usize;
                if hits.len() != minimal {
                    return Err(Error::NonMinimalSmoothing { a: i, b: j, choice });
                }
                if let Some(&o) = hits.first() {
                    inherited.push(((x, y), k, o));
                }
            }
        }
        let mut strands: Vec<(u8, u8)> = third.iter().map(|&k| self.strands[k]).collect();
        strands.extend(new_pairs);
        let old = *self;
        let out = Self::build(self.geometry, &strands, |s, t| {
            let norm = |p: (u8, u8)| (p.0.min(p.1), p.0.max(p.1));
            for &(ns, k, o) in &inherited {
                let ks = old.strands[k];
                if norm(ns) == s && ks == t {
                    return o;
                }
                if ks == s && norm(ns) == t {
                    return !o;
                }
            }
            // both third strands: keep the old relation
            let a = old.strands().iter().position(|&q| q == s).unwrap();
            let b = old.strands().iter().position(|&q| q == t).unwrap();
            old.is_over(a, b)
        })?;
        debug_assert_eq!(out.crossing_count() + 1, self.crossing_count());
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Pairing {
    Parallel,
    Nested,
}

impl PartialOrd for TileFace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TileFace {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.geometry, self.code()).cmp(&(other.geometry, other.code()))
    }
}

impl fmt::Display for TileFace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.code())
    }
}

impl Serialize for TileFace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.code())
    }
}

/// Slot positions used for drawing, in tile-local units (circle of radius 1,
/// y up). Slot `k` sits at the midpoint direction of its edge.
pub fn slot_angle(geometry: Geometry, slot: u8) -> f64 {
    let deg = match geometry {
        Geometry::Hex => 60.0 - 60.0 * slot as f64,
        Geometry::Rect => 90.0 - 90.0 * slot as f64,
    };
    deg.to_radians()
}

/// Nudged slot positions for chord geometry.
pub fn chord_point(geometry: Geometry, slot: u8) -> (f64, f64) {
    let nudge = match (geometry, slot) {
        (Geometry::Hex, 1) => 0.12,
        _ => 0.0,
    };
    let a = slot_angle(geometry, slot) + nudge;
    (a.cos(), a.sin())
}

/// Chord geometry of a face: where each crossing sits along each strand.
#[derive(Clone, Debug)]
pub struct Drawing {
    /// `t[i][j]`: parameter along strand `i` (0 at its low slot) of its crossing with `j`.
    t: [[f64; 3]; 3],
    /// crossing points
    points: [[(f64, f64); 3]; 3],
}

impl Drawing {
    pub fn of(face: &TileFace) -> Self {
        let mut d = Drawing {
            t: [[f64::NAN; 3]; 3],
            points: [[(f64::NAN, f64::NAN); 3]; 3],
        };
        let g = face.geometry();
        let s = face.strands();
        for (i, j) in face.crossings() {
            let (p0, p1) = (chord_point(g, s[i].0), chord_point(g, s[i].1));
            let (q0, q1) = (chord_point(g, s[j].0), chord_point(g, s[j].1));
            let (ti, tj) = segment_intersection(p0, p1, q0, q1);
            d.t[i][j] = ti;
            d.t[j][i] = tj;
            let pt = (p0.0 + ti * (p1.0 - p0.0), p0.1 + ti * (p1.1 - p0.1));
            d.points[i][j] = pt;
            d.points[j][i] = pt;
        }
        d
    }

    pub fn param(&self, strand: usize, other: usize) -> f64 {
        self.t[strand][other]
    }

    pub fn point(&self, a: usize, b: usize) -> (f64, f64) {
        self.points[a][b]
    }
}

fn segment_intersection(p0: (f64, f64), p1: (f64, f64), q0: (f64, f64), q1: (f64, f64)) -> (f64, f64) {
    let r = (p1.0 - p0.0, p1.1 - p0.1);
    let s = (q1.0 - q0.0, q1.1 - q0.1);
    let denom = r.0 * s.1 - r.1 * s.0;
    let qp = (q0.0 - p0.0, q0.1 - p0.1);
    let t = (qp.0 * s.1 - qp.1 * s.0) / denom;
    let u = (qp.0 * r.1 - qp.1 * r.0) / denom;
    (t, u)
}

/// Crossings met while traversing strand `strand` of `face` starting at slot
/// `from`: `(other strand, passes over)` in order.
pub fn crossings_along(face: &TileFace, strand: usize, from: u8) -> &'static [(usize, bool)] {
    type Table = HashMap<TileFace, Vec<[Vec<(usize, bool)>; 2]>>;
    static TABLE: OnceLock<Table> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        all_faces(Geometry::Hex)
            .iter()
            .chain(all_faces(Geometry::Rect))
            .map(|f| {
                let per_strand = (0..f.arc_count())
                    .map(|i| {
                        let fwd = compute_crossings_along(f, i);
                        let mut back = fwd.clone();
                        back.reverse();
                        [fwd, back]
                    })
                    .collect();
                (*f, per_strand)
            })
            .collect()
    });
    let entry = &table[face][strand];
    if from == face.strands()[strand].0 {
        &entry[0]
    } else {
        &entry[1]
    }
}

fn compute_crossings_along(face: &TileFace, strand: usize) -> Vec<(usize, bool)> {
    let d = Drawing::of(face);
    let mut hits: Vec<(f64, usize, bool)> = (0..face.arc_count())
        .filter(|&k| k != strand && interleave(face.strands()[strand], face.strands()[k]))
        .map(|k| (d.param(strand, k), k, face.is_over(strand, k)))
        .collect();
    hits.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    hits.into_iter().map(|(_, k, o)| (k, o)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TileProperties {
    pub arc_count: usize,
    pub crossing_count: usize,
    pub used_slots: Vec<u8>,
    pub is_alternating_3crossing: bool,
    pub is_band_pairing: bool,
}

pub fn tile_properties(t: &TileFace) -> TileProperties {
    TileProperties {
        arc_count: t.arc_count(),
        crossing_count: t.crossing_count(),
        used_slots: t.used_slots(),
        is_alternating_3crossing: t.is_alternating_3crossing(),
        is_band_pairing: t.is_band_pairing(),
    }
}

pub fn rotate(t: &TileFace, k: i32) -> TileFace {
    t.rotate(k)
}

pub fn smooth_tile(t: &TileFace, crossing: (usize, usize), choice: u8) -> Result<TileFace> {
    t.smooth(crossing.0, crossing.1, choice)
}

/// All partial non-repeating matchings of `n` slots with at most `max` pairs.
fn matchings(n: u8, max: usize) -> Vec<Vec<(u8, u8)>> {
    fn go(n: u8, from: u8, used: u8, cur: &mut Vec<(u8, u8)>, max: usize, out: &mut Vec<Vec<(u8, u8)>>) {
        out.push(cur.clone());
        if cur.len() == max {
            return;
        }
        for a in from..n {
            if used & (1 << a) != 0 {
                continue;
            }
            for b in a + 1..n {
                if used & (1 << b) != 0 {
                    continue;
                }
                cur.push((a, b));
                go(n, a + 1, used | (1 << a) | (1 << b), cur, max, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(n, 0, 0, &mut Vec::new(), max, &mut out);
    out
}

/// Every oriented face of the geometry (113 hexagonal, 11 square).
pub fn all_faces(geometry: Geometry) -> &'static [TileFace] {
    static HEX: OnceLock<Vec<TileFace>> = OnceLock::new();
    static RECT: OnceLock<Vec<TileFace>> = OnceLock::new();
    let cell = match geometry {
        Geometry::Hex => &HEX,
        Geometry::Rect => &RECT,
    };
    cell.get_or_init(|| {
        let mut out = Vec::new();
        for m in matchings(geometry.slots(), geometry.max_strands()) {
            let base = TileFace::new(geometry, &m).unwrap();
            let k = base.crossing_count();
            for bits in 0..(1u8 << k) {
                out.push(base.with_state_bits(bits));
            }
        }
        out.sort();
        out
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TileClass {
    pub class_id: usize,
    pub canonical_face: TileFace,
    /// Conventional tile number, best effort.
    pub alias: Option<u8>,
    /// Number of oriented faces in the class.
    pub orbit_size: usize,
}

/// The pinned alternating three-crossing tile used to saturate hexagonal interiors.
pub fn alternating_tile() -> TileFace {
    TileFace::parse(Geometry::Hex, "(0-3)(1-4)(2-5):ouo").unwrap()
}

/// Its mirror image (all crossings flipped).
pub fn alternating_tile_mirror() -> TileFace {
    TileFace::parse(Geometry::Hex, "(0-3)(1-4)(2-5):uou").unwrap()
}

pub fn enumerate_catalog(geometry: Geometry) -> &'static [TileClass] {
    static HEX: OnceLock<Vec<TileClass>> = OnceLock::new();
    static RECT: OnceLock<Vec<TileClass>> = OnceLock::new();
    let cell = match geometry {
        Geometry::Hex => &HEX,
        Geometry::Rect => &RECT,
    };
    cell.get_or_init(|| {
        let mut classes: BTreeMap<(usize, usize, String), (TileFace, usize)> = BTreeMap::new();
        for f in all_faces(geometry) {
            let c = f.canonical();
            let e = classes
                .entry((c.arc_count(), c.crossing_count(), c.code()))
                .or_insert((c, 0));
            e.1 += 1;
        }
        let mut out: Vec<TileClass> = classes
            .into_values()
            .enumerate()
            .map(|(class_id, (canonical_face, orbit_size))| TileClass {
                class_id,
                canonical_face,
                alias: None,
                orbit_size,
            })
            .collect();
        assign_aliases(geometry, &mut out);
        out
    })
}

pub fn class_of(face: &TileFace) -> &'static TileClass {
    let c = face.canonical();
    enumerate_catalog(face.geometry())
        .iter()
        .find(|k| k.canonical_face == c)
        .expect("every face belongs to a class")
}

/// Best-effort conventional numbering. Strata run blank, one arc,
/// two arcs, crossing two arcs, three arcs by crossing count; inside a stratum
/// the pinned semantics come first (short cap = 2, parallel and nested
/// consecutive pairings = 5 and 6, consecutive crossing pair = 11/12, the two
/// alternating three-crossing tiles = 26/27 with the pinned tile as 27) and the
/// rest follow canonical order.
fn assign_aliases(geometry: Geometry, classes: &mut [TileClass]) {
    match geometry {
        Geometry::Rect => {
            // blank, corner arc, straight, double arc, crossing
            let key = |f: &TileFace| -> u8 {
                match (f.arc_count(), f.crossing_count()) {
                    (0, _) => 1,
                    (1, _) => {
                        let (a, b) = f.strands()[0];
                        if b - a == 2 {
                            3
                        } else {
                            2
                        }
                    }
                    (2, 0) => 4,
                    _ => 5,
                }
            };
            for c in classes.iter_mut() {
                c.alias = Some(key(&c.canonical_face));
            }
        }
        Geometry::Hex => {
            let mut strata: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
            for (idx, c) in classes.iter().enumerate() {
                let f = &c.canonical_face;
                strata.entry((f.arc_count(), f.crossing_count())).or_default().push(idx);
            }
            let rank = |f: &TileFace| -> u8 {
                let consecutive_cross = f.arc_count() == 2 && f.crossing_count() == 1 && {
                    let m = f.used_mask();
                    (0..6u8).any(|s| (0..4).all(|d| m & (1 << ((s + d) % 6)) != 0))
                };
                if f.is_parallel_pairing() || consecutive_cross {
                    0
                } else if f.is_band_pairing() {
                    1
                } else if f.is_alternating_3crossing() {
                    if f.same_class(&alternating_tile()) {
                        3
                    } else {
                        2
                    }
                } else if f.arc_count() == 3 && f.crossing_count() == 3 {
                    0
                } else {
                    2
                }
            };
            let mut next = 1u8;
            for (_, mut members) in strata {
                members.sort_by_key(|&i| (rank(&classes[i].canonical_face), classes[i].canonical_face.code()));
                for i in members {
                    classes[i].alias = Some(next);
                    next += 1;
                }
            }
        }
    }
}

/// Face carrying a conventional tile number, if the table has it.
pub fn face_by_alias(geometry: Geometry, alias: u8) -> Option<TileFace> {
    enumerate_catalog(geometry)
        .iter()
        .find(|c| c.alias == Some(alias))
        .map(|c| c.canonical_face)
}

impl FromStr for TileFace {
    type Err = Error;
    /// Parses a hexagonal tile code; use [`TileFace::parse`] for square tiles.
    fn from_str(s: &str) -> Result<Self> {
        TileFace::parse(Geometry::Hex, s)
    }
}

impl<'de> Deserialize<'de> for TileFace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        TileFace::parse(Geometry::Hex, &s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hex(code: &str) -> TileFace {
        TileFace::parse(Geometry::Hex, code).unwrap()
    }

    #[test]
    fn code_round_trip() {
        for f in all_faces(Geometry::Hex).iter().chain(all_faces(Geometry::Rect)) {
            assert_eq!(TileFace::parse(f.geometry(), &f.code()).unwrap(), *f);
        }
        assert_eq!(alternating_tile().code(), "(0-3)(1-4)(2-5):ouo");
    }

    #[test]
    fn bad_codes() {
        for bad in [
            "",
            "(0-0)",
            "(0-3)(1-4)(2-5):oo",
            "(1-4)(0-3)",
            "(0-6)",
            "(0-1)(1-2)",
            "(0-2)(1-3):x",
            "(3-0)",
        ] {
            assert!(TileFace::parse(Geometry::Hex, bad).is_err(), "{bad}");
        }
        assert!(TileFace::parse(Geometry::Rect, "(0-2)(1-3)(4-5)").is_err());
    }

    #[test]
    fn rotation_basics() {
        let blank = TileFace::blank(Geometry::Hex);
        for k in 0..6 {
            assert_eq!(blank.rotate(k), blank);
        }
        for f in all_faces(Geometry::Hex) {
            assert_eq!(f.rotate(3).rotate(3), *f);
            assert_eq!(f.rotate(0), *f);
            assert!(f.rotate(1).same_class(f));
            assert_eq!(f.rotate(1).crossing_count(), f.crossing_count());
        }
        let t = alternating_tile();
        assert!(t.rotate(1).same_class(&t));
    }

    #[test]
    fn alternating_states() {
        let base = hex("(0-3)(1-4)(2-5):ooo");
        let alt: Vec<TileFace> = (0..8u8)
            .map(|b| base.with_state_bits(b))
            .filter(|f| f.is_alternating_3crossing())
            .collect();
        assert_eq!(alt.len(), 2);
        assert!(alternating_tile().is_alternating_3crossing());
        assert!(alternating_tile_mirror().is_alternating_3crossing());
        assert!(!alternating_tile().same_class(&alternating_tile_mirror()));
    }

    #[test]
    fn smoothing_three_crossing_tile() {
        let t = alternating_tile();
        for (i, j) in t.crossings() {
            let results: Vec<TileFace> = (0..2).filter_map(|c| t.smooth(i, j, c).ok()).collect();
            assert_eq!(results.len(), 1, "exactly one choice avoids a bigon");
            assert_eq!(results[0].crossing_count(), 2);
            assert_eq!(results[0].used_mask(), t.used_mask());
        }
        let one = hex("(0-2)(1-3):o");
        for c in 0..2 {
            let s = one.smooth(0, 1, c).unwrap();
            assert_eq!(s.crossing_count(), 0);
            assert_eq!(s.arc_count(), 2);
        }
        let blank = TileFace::blank(Geometry::Hex);
        assert!(matches!(blank.smooth(0, 1, 0), Err(Error::NoSuchCrossing(..))));
    }

    #[test]
    fn smoothing_keeps_alternation_along_strands() {
        // each remaining strand of a smoothed alternating tile still alternates inside the tile
        let t = alternating_tile();
        for (i, j) in t.crossings() {
            let s = (0..2).find_map(|c| t.smooth(i, j, c).ok()).unwrap();
            for k in 0..s.arc_count() {
                let seq: Vec<bool> = crossings_along(&s, k, s.strands()[k].0).iter().map(|x| x.1).collect();
                assert!(seq.windows(2).all(|w| w[0] != w[1]), "{s:?}");
            }
        }
    }

    #[test]
    fn band_pairings() {
        let nested = hex("(0-3)(1-2)");
        let parallel = hex("(0-1)(2-3)");
        assert!(nested.is_band_pairing());
        assert!(!parallel.is_band_pairing());
        assert!(parallel.is_parallel_pairing());
        assert_eq!(nested.band_swap().unwrap(), parallel);
        assert_eq!(parallel.band_swap().unwrap(), nested);
        assert!(!hex("(0-4)(1-3)").is_band_pairing());
        assert!(hex("(0-1)(4-5)").is_parallel_pairing()); // wraps around slot 0
    }

    #[test]
    fn no_concurrent_chords() {
        // three chords never share a point, so crossing order along a strand is well defined
        for f in all_faces(Geometry::Hex) {
            if f.crossing_count() == 3 {
                let d = Drawing::of(f);
                let (a, b, c) = (d.point(0, 1), d.point(0, 2), d.point(1, 2));
                let dist = |p: (f64, f64), q: (f64, f64)| ((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt();
                assert!(dist(a, b) > 0.01 && dist(a, c) > 0.01 && dist(b, c) > 0.01);
            }
        }
    }

    #[test]
    fn catalog_counts() {
        assert_eq!(all_faces(Geometry::Hex).len(), 113);
        assert_eq!(all_faces(Geometry::Rect).len(), 11);
        let hex = enumerate_catalog(Geometry::Hex);
        assert_eq!(hex.len(), 27);
        assert_eq!(enumerate_catalog(Geometry::Rect).len(), 5);
        let mut strata = BTreeMap::new();
        for c in hex {
            *strata
                .entry((c.canonical_face.arc_count(), c.canonical_face.crossing_count()))
                .or_insert(0) += 1;
        }
        let counts: Vec<usize> = strata.values().copied().collect();
        assert_eq!(counts, vec![1, 3, 6, 6, 2, 2, 3, 4]);
        let orbit_total: usize = hex.iter().map(|c| c.orbit_size).sum();
        assert_eq!(orbit_total, 113);
        for (i, c) in hex.iter().enumerate() {
            assert_eq!(c.class_id, i);
            assert_eq!(c.canonical_face.canonical(), c.canonical_face);
        }
    }

    #[test]
    fn aliases_are_a_permutation() {
        let mut seen: Vec<u8> = enumerate_catalog(Geometry::Hex)
            .iter()
            .filter_map(|c| c.alias)
            .collect();
        seen.sort();
        assert_eq!(seen, (1..=27).collect::<Vec<u8>>());
        assert_eq!(
            face_by_alias(Geometry::Hex, 27).unwrap(),
            alternating_tile().canonical()
        );
        assert!(face_by_alias(Geometry::Hex, 5).unwrap().is_parallel_pairing());
        assert!(face_by_alias(Geometry::Hex, 6).unwrap().is_band_pairing());
        let two = face_by_alias(Geometry::Hex, 2).unwrap();
        assert_eq!(two.strands(), &[(0, 1)]);
    }
}

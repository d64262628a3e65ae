//! Tile assignments on a board, validity, saturation and boundary closures.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{Board, BoardSpec, CellClass, EdgeRef, Geometry, Setting};
use crate::tiles::{all_faces, TileFace};

/// Shared, cached board geometry for a spec.
pub fn board(spec: BoardSpec) -> Result<Arc<Board>> {
    static CACHE: OnceLock<Mutex<HashMap<BoardSpec, Arc<Board>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(b) = cache.lock().unwrap().get(&spec) {
        return Ok(b.clone());
    }
    let b = Arc::new(Board::new(spec)?);
    cache.lock().unwrap().insert(spec, b.clone());
    Ok(b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    /// A connection point used on one side of a shared edge only.
    Dangling,
    /// A strand ends on the outer edge of the board.
    LeavesBoard,
    /// A crossing tile on the boundary where the setting forbids it.
    BoundaryCrossing,
    /// The nested two-arc pairing on the boundary of a standard board.
    BoundaryBand,
    /// A tile drawn for the other geometry.
    WrongGeometry,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Violation {
    pub cell: usize,
    /// The offending edge, for edge-level violations.
    pub edge: Option<EdgeRef>,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.edge {
            Some(e) => write!(f, "{:?} at cell {} slot {}", self.kind, e.cell, e.slot),
            None => write!(f, "{:?} at cell {}", self.kind, self.cell),
        }
    }
}

/// Whether `face` may sit on `cell` in the board's setting, ignoring neighbours.
pub fn face_allowed(board: &Board, cell: usize, face: &TileFace) -> bool {
    face.geometry() == board.geometry()
        && board.off_board_slots(cell).iter().all(|&k| !face.uses(k))
        && setting_allows(board.spec().setting, board.class(cell), face)
}

fn setting_allows(setting: Setting, class: CellClass, face: &TileFace) -> bool {
    if !class.is_boundary() {
        return true;
    }
    match setting {
        Setting::HexStandard => face.crossing_count() == 0 && !face.is_band_pairing(),
        Setting::HexSemiEnhanced | Setting::Rect => face.crossing_count() == 0,
        Setting::HexEnhanced => true,
    }
}

#[derive(Clone)]
pub struct Mosaic {
    board: Arc<Board>,
    faces: Vec<TileFace>,
}

impl PartialEq for Mosaic {
    fn eq(&self, other: &Self) -> bool {
        self.spec() == other.spec() && self.faces == other.faces
    }
}

impl Eq for Mosaic {}

impl fmt::Debug for Mosaic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mosaic({} r={})", self.spec().setting, self.spec().r)?;
        for row in 1..=self.board.rows() {
            let codes: Vec<String> = (1..=self.board.row_len(row))
                .map(|c| self.faces[self.board.row_col_index(row, c).unwrap()].code())
                .collect();
            writeln!(f, "  {}", codes.join(" "))?;
        }
        Ok(())
    }
}

impl Mosaic {
    pub fn blank(spec: BoardSpec) -> Result<Self> {
        let board = board(spec)?;
        let faces = vec![TileFace::blank(spec.geometry); board.len()];
        Ok(Mosaic { board, faces })
    }

    pub fn from_faces(spec: BoardSpec, faces: Vec<TileFace>) -> Result<Self> {
        let board = board(spec)?;
        if faces.len() != board.len() {
            return Err(Error::InvalidBoard(format!(
                "expected {} tiles, got {}",
                board.len(),
                faces.len()
            )));
        }
        if let Some(f) = faces.iter().find(|f| f.geometry() != spec.geometry) {
            return Err(Error::InvalidTile(format!(
                "{} tile on a {} board",
                f.geometry(),
                spec.geometry
            )));
        }
        Ok(Mosaic { board, faces })
    }

    pub fn spec(&self) -> BoardSpec {
        self.board.spec()
    }

    pub fn board(&self) -> &Board {
        &self.board
    }

    pub fn shared_board(&self) -> Arc<Board> {
        self.board.clone()
    }

    pub fn faces(&self) -> &[TileFace] {
        &self.faces
    }

    pub fn face(&self, cell: usize) -> &TileFace {
        &self.faces[cell]
    }

    pub fn set(&mut self, cell: usize, face: TileFace) {
        assert_eq!(face.geometry(), self.spec().geometry, "tile geometry mismatch");
        self.faces[cell] = face;
    }

    pub fn with_face(&self, cell: usize, face: TileFace) -> Self {
        let mut m = self.clone();
        m.set(cell, face);
        m
    }

    /// Same tiles read in another setting of the same geometry.
    pub fn with_setting(&self, setting: Setting) -> Result<Self> {
        let spec = self.spec().with_setting(setting)?;
        Ok(Mosaic {
            board: board(spec)?,
            faces: self.faces.clone(),
        })
    }

    /// The mosaic turned `k` steps clockwise on its own board.
    pub fn rotated(&self, k: usize) -> Mosaic {
        let b = &self.board;
        let mut faces = vec![TileFace::blank(b.geometry()); b.len()];
        for c in 0..b.len() {
            faces[b.rotate_cell(c, k)] = self.faces[c].rotate(k as i32);
        }
        Mosaic {
            board: self.board.clone(),
            faces,
        }
    }

    pub fn crossing_count(&self) -> usize {
        self.faces.iter().map(|f| f.crossing_count()).sum()
    }

    pub fn crossings_on(&self, cells: impl IntoIterator<Item = usize>) -> usize {
        cells.into_iter().map(|c| self.faces[c].crossing_count()).sum()
    }

    /// Every violation of suitable connectedness and of the setting's boundary rules.
    pub fn validate(&self) -> Vec<Violation> {
        let b = &*self.board;
        let mut out = Vec::new();
        for cell in 0..b.len() {
            let face = &self.faces[cell];
            if face.geometry() != b.geometry() {
                out.push(Violation {
                    cell,
                    edge: None,
                    kind: ViolationKind::WrongGeometry,
                });
                continue;
            }
            for k in 0..b.slots() {
                let used = face.uses(k);
                match b.neighbor(cell, k) {
                    None if used => out.push(Violation {
                        cell,
                        edge: Some(b.edge(cell, k)),
                        kind: ViolationKind::LeavesBoard,
                    }),
                    Some(n) if n > cell && used != self.faces[n].uses(b.opposite(k)) => out.push(Violation {
                        cell,
                        edge: Some(b.edge(cell, k)),
                        kind: ViolationKind::Dangling,
                    }),
                    _ => {}
                }
            }
            if !setting_allows(b.spec().setting, b.class(cell), face) {
                let kind = if face.crossing_count() > 0 {
                    ViolationKind::BoundaryCrossing
                } else {
                    ViolationKind::BoundaryBand
                };
                out.push(Violation { cell, edge: None, kind });
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    pub fn check(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Invalid(v))
        }
    }

    /// Interior fully crossed: three crossings per hexagonal tile or one per
    /// square tile. Enhanced boards also need crossing tiles along every edge
    /// tile of three alternating boundary sides.
    pub fn is_saturated(&self) -> bool {
        let b = &*self.board;
        let full = match b.geometry() {
            Geometry::Hex => 3,
            Geometry::Rect => 1,
        };
        if b.is_empty() || b.interior_cells().next().is_none() {
            return false;
        }
        if !b.interior_cells().all(|c| self.faces[c].crossing_count() == full) {
            return false;
        }
        if b.spec().setting != Setting::HexEnhanced {
            return true;
        }
        let side_full = |side: usize| {
            (0..b.len())
                .filter(|&c| b.class(c) == CellClass::BoundaryEdge && b.boundary_sides(c) == [side])
                .all(|c| self.faces[c].crossing_count() > 0)
        };
        let crossing_sides: Vec<usize> = (0..6).filter(|&s| side_full(s)).collect();
        crossing_sides.len() >= 3
            && ([0, 2, 4].iter().all(|s| crossing_sides.contains(s))
                || [1, 3, 5].iter().all(|s| crossing_sides.contains(s)))
    }

    /// Whether every interior tile uses all of its connection points.
    pub fn interior_full(&self) -> bool {
        let full = (1u8 << self.board.slots()) - 1;
        self.board.interior_cells().all(|c| self.faces[c].used_mask() == full)
    }

    pub fn edit(&self, cell: usize, action: Edit) -> Result<Mosaic> {
        if cell >= self.board.len() {
            return Err(Error::OffBoard(format!("cell index {cell}")));
        }
        let face = match action {
            Edit::Replace(f) => f,
            Edit::Smooth { crossing, choice } => self.faces[cell].smooth(crossing.0, crossing.1, choice)?,
        };
        if face.geometry() != self.spec().geometry {
            return Err(Error::InvalidTile("tile geometry does not match the board".into()));
        }
        let m = self.with_face(cell, face);
        m.check()?;
        Ok(m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Edit {
    Replace(TileFace),
    Smooth { crossing: (usize, usize), choice: u8 },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClosureOptions {
    /// Keep one over/under state per projection (lower strand over).
    pub projection_only: bool,
    /// Stop after this many closures.
    pub limit: Option<usize>,
}

struct ClosureProblem<'a> {
    m: &'a Mosaic,
    free: Vec<usize>,
    pos_of: HashMap<usize, usize>,
    candidates: Vec<Vec<TileFace>>,
}

impl<'a> ClosureProblem<'a> {
    fn new(m: &'a Mosaic, free: &[usize], allowed: &dyn Fn(usize, &TileFace) -> bool, projection_only: bool) -> Self {
        let b = m.board();
        let free_set: Vec<bool> = {
            let mut v = vec![false; b.len()];
            for &c in free {
                v[c] = true;
            }
            v
        };
        let mut order: Vec<usize> = b.ring().iter().copied().filter(|&c| free_set[c]).collect();
        let rest: Vec<usize> = free.iter().copied().filter(|c| !order.contains(c)).collect();
        order.extend(rest);
        let pos_of = order.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let candidates = order
            .iter()
            .map(|&cell| {
                all_faces(b.geometry())
                    .iter()
                    .filter(|f| !projection_only || f.state_bits() == (1 << f.crossing_count()) - 1)
                    .filter(|f| face_allowed(b, cell, f) && allowed(cell, f))
                    .filter(|f| {
                        (0..b.slots()).all(|k| match b.neighbor(cell, k) {
                            Some(n) if !free_set[n] => f.uses(k) == m.face(n).uses(b.opposite(k)),
                            _ => true,
                        })
                    })
                    .copied()
                    .collect()
            })
            .collect();
        ClosureProblem {
            m,
            free: order,
            pos_of,
            candidates,
        }
    }

    /// Whether `face` at position `pos` agrees with already-chosen faces at earlier positions.
    fn consistent(&self, pos: usize, face: &TileFace, chosen: &[TileFace]) -> bool {
        let b = self.m.board();
        let cell = self.free[pos];
        (0..b.slots()).all(|k| match b.neighbor(cell, k).and_then(|n| self.pos_of.get(&n)) {
            Some(&p) if p < pos => face.uses(k) == chosen[p].uses(b.opposite(k)),
            _ => true,
        })
    }

    fn enumerate(&self, limit: Option<usize>) -> Vec<Vec<TileFace>> {
        let mut out = Vec::new();
        let mut chosen = Vec::with_capacity(self.free.len());
        self.dfs(&mut chosen, &mut out, limit);
        out
    }

    fn dfs(&self, chosen: &mut Vec<TileFace>, out: &mut Vec<Vec<TileFace>>, limit: Option<usize>) {
        if limit.is_some_and(|l| out.len() >= l) {
            return;
        }
        let pos = chosen.len();
        if pos == self.free.len() {
            out.push(chosen.clone());
            return;
        }
        for f in &self.candidates[pos] {
            if self.consistent(pos, f, chosen) {
                chosen.push(*f);
                self.dfs(chosen, out, limit);
                chosen.pop();
            }
        }
    }

    /// Slot usages still owed to positions `>= pos` by the choices before it.
    fn pending(&self, pos: usize, chosen: &[TileFace]) -> Vec<(usize, u8, bool)> {
        let b = self.m.board();
        let mut out = Vec::new();
        for (p, f) in chosen.iter().enumerate().take(pos) {
            let cell = self.free[p];
            for k in 0..b.slots() {
                if let Some(&q) = b.neighbor(cell, k).and_then(|n| self.pos_of.get(&n)) {
                    if q >= pos {
                        out.push((q, b.opposite(k), f.uses(k)));
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Closure maximizing `score`, ties broken by the least face sequence.
    fn best(&self, score: &dyn Fn(usize, &TileFace) -> usize) -> Option<Vec<TileFace>> {
        type Memo = HashMap<(usize, Vec<(usize, u8, bool)>), Option<(usize, Vec<TileFace>)>>;
        fn go(
            pb: &ClosureProblem,
            chosen: &mut Vec<TileFace>,
            score: &dyn Fn(usize, &TileFace) -> usize,
            memo: &mut Memo,
        ) -> Option<(usize, Vec<TileFace>)> {
            let pos = chosen.len();
            if pos == pb.free.len() {
                return Some((0, Vec::new()));
            }
            let key = (pos, pb.pending(pos, chosen));
            if let Some(v) = memo.get(&key) {
                return v.clone();
            }
            let mut best: Option<(usize, Vec<TileFace>)> = None;
            for f in &pb.candidates[pos] {
                if !pb.consistent(pos, f, chosen) {
                    continue;
                }
                chosen.push(*f);
                if let Some((s, rest)) = go(pb, chosen, score, memo) {
                    let total = s + score(pb.free[pos], f);
                    let mut seq = vec![*f];
                    seq.extend(rest);
                    let better = match &best {
                        None => true,
                        Some((bs, bseq)) => total > *bs || (total == *bs && seq < *bseq),
                    };
                    if better {
                        best = Some((total, seq));
                    }
                }
                chosen.pop();
            }
            memo.insert(key, best.clone());
            best
        }
        let mut memo = Memo::new();
        go(self, &mut Vec::new(), score, &mut memo).map(|(_, seq)| seq)
    }

    fn apply(&self, faces: &[TileFace]) -> Mosaic {
        let mut m = self.m.clone();
        for (i, f) in faces.iter().enumerate() {
            m.set(self.free[i], *f);
        }
        m
    }
}

/// All completions of the boundary corona around the fixed interior of `m`
/// that make the board valid in `m`'s setting, in a deterministic order.
pub fn boundary_closures(m: &Mosaic, opts: ClosureOptions) -> Vec<Mosaic> {
    let ring: Vec<usize> = m.board().ring().to_vec();
    closures_on(m, &ring, &|_, _| true, opts)
}

/// Completions of the given free cells, everything else held fixed; `allowed`
/// narrows the tiles a free cell may take.
pub fn closures_on(
    m: &Mosaic,
    free: &[usize],
    allowed: &dyn Fn(usize, &TileFace) -> bool,
    opts: ClosureOptions,
) -> Vec<Mosaic> {
    let pb = ClosureProblem::new(m, free, allowed, opts.projection_only);
    pb.enumerate(opts.limit).iter().map(|faces| pb.apply(faces)).collect()
}

/// The completion of the free cells carrying the most crossings, ties broken
/// by the least tile sequence in ring order. Over/under bits follow the
/// lower-strand-over convention.
pub fn best_closure_on(m: &Mosaic, free: &[usize], allowed: &dyn Fn(usize, &TileFace) -> bool) -> Option<Mosaic> {
    let pb = ClosureProblem::new(m, free, allowed, true);
    pb.best(&|_, f| f.crossing_count()).map(|faces| pb.apply(&faces))
}

/// Number of completions of the free cells, counted without listing them.
pub fn count_closures_on(
    m: &Mosaic,
    free: &[usize],
    allowed: &dyn Fn(usize, &TileFace) -> bool,
    projection_only: bool,
) -> u128 {
    let pb = ClosureProblem::new(m, free, allowed, projection_only);
    type Memo = HashMap<(usize, Vec<(usize, u8, bool)>), u128>;
    let mut memo = Memo::new();
    fn go(pb: &ClosureProblem, chosen: &mut Vec<TileFace>, memo: &mut Memo) -> u128 {
        let pos = chosen.len();
        if pos == pb.free.len() {
            return 1;
        }
        let key = (pos, pb.pending(pos, chosen));
        if let Some(&v) = memo.get(&key) {
            return v;
        }
        let mut total = 0;
        for f in &pb.candidates[pos] {
            if pb.consistent(pos, f, chosen) {
                chosen.push(*f);
                total += go(pb, chosen, memo);
                chosen.pop();
            }
        }
        memo.insert(key, total);
        total
    }
    go(&pb, &mut Vec::new(), &mut memo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiles::alternating_tile;

    fn saturated_interior(setting: Setting, r: usize) -> Mosaic {
        let spec = BoardSpec::new(setting, r).unwrap();
        let mut m = Mosaic::blank(spec).unwrap();
        let cells: Vec<usize> = m.board().interior_cells().collect();
        let t = match spec.geometry {
            Geometry::Hex => alternating_tile(),
            Geometry::Rect => TileFace::parse(Geometry::Rect, "(0-2)(1-3):o").unwrap(),
        };
        for c in cells {
            m.set(c, t);
        }
        m
    }

    #[test]
    fn blank_board_is_valid_not_saturated() {
        for s in Setting::ALL {
            let m = Mosaic::blank(BoardSpec::new(s, 4).unwrap()).unwrap();
            assert!(m.is_valid());
            assert!(!m.is_saturated());
        }
    }

    #[test]
    fn dangling_point_is_reported() {
        let spec = BoardSpec::hex(Setting::HexStandard, 3).unwrap();
        let m = Mosaic::blank(spec).unwrap();
        let center = m.board().index_of(crate::grid::CellCoord::hex(0, 0, 0)).unwrap();
        let m = m.with_face(center, TileFace::parse(Geometry::Hex, "(0-3)").unwrap());
        let v = m.validate();
        assert_eq!(v.len(), 2);
        assert!(v.iter().all(|x| x.kind == ViolationKind::Dangling));
        assert!(v.iter().any(|x| x.edge == Some(m.board().edge(center, 0))));
    }

    #[test]
    fn standard_closure_count_is_two() {
        for r in 2..=8 {
            let m = saturated_interior(Setting::HexStandard, r);
            let all = boundary_closures(&m, ClosureOptions::default());
            assert_eq!(all.len(), 2, "r={r}");
            assert!(all.iter().all(|c| c.is_valid() && c.is_saturated()));
            assert_eq!(count_closures_on(&m, m.board().ring(), &|_, _| true, false), 2);
        }
    }

    #[test]
    fn enhanced_best_closure_has_three_sides_of_crossings() {
        for r in 3..=6 {
            let m = saturated_interior(Setting::HexEnhanced, r);
            let best = best_closure_on(&m, m.board().ring(), &|_, _| true).unwrap();
            let ring: Vec<usize> = m.board().ring().to_vec();
            assert_eq!(best.crossings_on(ring), 3 * (r - 2), "r={r}");
            assert!(best.is_valid());
            assert!(best.is_saturated());
        }
    }

    #[test]
    fn blank_interior_admits_blank_closure() {
        let m = Mosaic::blank(BoardSpec::hex(Setting::HexStandard, 4).unwrap()).unwrap();
        let all = boundary_closures(&m, ClosureOptions::default());
        assert!(all.contains(&m));
    }

    #[test]
    fn boundary_rules_per_setting() {
        let spec = BoardSpec::hex(Setting::HexStandard, 4).unwrap();
        let m = Mosaic::blank(spec).unwrap();
        let b = m.board();
        let edge = (0..b.len()).find(|&c| b.class(c) == CellClass::BoundaryEdge).unwrap();
        let inner: Vec<u8> = (0..6).filter(|&k| b.neighbor(edge, k).is_some()).collect();
        assert_eq!(inner.len(), 4);
        let crossing = TileFace::new(Geometry::Hex, &[(0, 2), (1, 3)]).unwrap();
        assert!(!setting_allows(
            Setting::HexStandard,
            CellClass::BoundaryEdge,
            &crossing
        ));
        assert!(!setting_allows(
            Setting::HexSemiEnhanced,
            CellClass::BoundaryEdge,
            &crossing
        ));
        assert!(setting_allows(Setting::HexEnhanced, CellClass::BoundaryEdge, &crossing));
        let band = TileFace::parse(Geometry::Hex, "(0-3)(1-2)").unwrap();
        assert!(!setting_allows(Setting::HexStandard, CellClass::BoundaryEdge, &band));
        assert!(setting_allows(Setting::HexSemiEnhanced, CellClass::BoundaryEdge, &band));
    }

    #[test]
    fn rect_closures() {
        let m = saturated_interior(Setting::Rect, 4);
        let all = boundary_closures(&m, ClosureOptions::default());
        assert!(!all.is_empty());
        assert!(all.iter().all(|c| c.is_valid()));
    }
}

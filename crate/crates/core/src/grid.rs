//! Board geometry for hexagonal and rectangular mosaics.
//!
//! Hexagonal boards are built from pointy-top cells so that every row of the
//! board is a straight horizontal line and the board's top and bottom edges
//! are horizontal. Cells are addressed by cube coordinates internally and by
//! `(row, col)` (1-based, row-major from the top-left) at the presentation
//! layer.
//!
//! Slot numbering is clockwise. Hex: `0=NE 1=E 2=SE 3=SW 4=W 5=NW`.
//! Rect: `0=N 1=E 2=S 3=W`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Hex,
    Rect,
}

impl Geometry {
    /// Number of connection slots on a tile.
    pub const fn slots(self) -> u8 {
        match self {
            Geometry::Hex => 6,
            Geometry::Rect => 4,
        }
    }

    pub const fn opposite(self, slot: u8) -> u8 {
        let n = self.slots();
        (slot + n / 2) % n
    }

    /// Maximum number of strands on one tile.
    pub const fn max_strands(self) -> usize {
        self.slots() as usize / 2
    }
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Geometry::Hex => "hex",
            Geometry::Rect => "rect",
        })
    }
}

impl FromStr for Geometry {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hex" => Ok(Geometry::Hex),
            "rect" => Ok(Geometry::Rect),
            _ => Err(Error::Parse(format!("unknown geometry `{s}`"))),
        }
    }
}

/// Which boundary tiles a board admits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Setting {
    #[serde(rename = "rect")]
    Rect,
    #[serde(rename = "hex-standard")]
    HexStandard,
    #[serde(rename = "hex-semi-enhanced")]
    HexSemiEnhanced,
    #[serde(rename = "hex-enhanced")]
    HexEnhanced,
}

impl Setting {
    pub const ALL: [Setting; 4] = [
        Setting::Rect,
        Setting::HexStandard,
        Setting::HexSemiEnhanced,
        Setting::HexEnhanced,
    ];
    pub const HEX: [Setting; 3] = [Setting::HexStandard, Setting::HexSemiEnhanced, Setting::HexEnhanced];

    pub const fn geometry(self) -> Geometry {
        match self {
            Setting::Rect => Geometry::Rect,
            _ => Geometry::Hex,
        }
    }

    pub const fn name(self) -> &'static str {
        match self {
            Setting::Rect => "rect",
            Setting::HexStandard => "hex-standard",
            Setting::HexSemiEnhanced => "hex-semi-enhanced",
            Setting::HexEnhanced => "hex-enhanced",
        }
    }
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Setting {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Setting::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown setting `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoardSpec {
    pub geometry: Geometry,
    pub r: usize,
    pub setting: Setting,
}

impl BoardSpec {
    pub fn new(setting: Setting, r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidBoard("board size r must be at least 1".into()));
        }
        Ok(BoardSpec {
            geometry: setting.geometry(),
            r,
            setting,
        })
    }

    pub fn hex(setting: Setting, r: usize) -> Result<Self> {
        if setting.geometry() != Geometry::Hex {
            return Err(Error::InvalidBoard(format!("{setting} is not a hexagonal setting")));
        }
        Self::new(setting, r)
    }

    pub fn rect(r: usize) -> Result<Self> {
        Self::new(Setting::Rect, r)
    }

    /// Same board in another setting of the same geometry.
    pub fn with_setting(self, setting: Setting) -> Result<Self> {
        if setting.geometry() != self.geometry {
            return Err(Error::InvalidBoard(format!(
                "cannot move a {} board to setting {setting}",
                self.geometry
            )));
        }
        Ok(BoardSpec { setting, ..self })
    }

    pub fn cell_count(&self) -> usize {
        match self.geometry {
            Geometry::Hex => 3 * self.r * self.r - 3 * self.r + 1,
            Geometry::Rect => self.r * self.r,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CellCoord {
    Hex { x: i32, y: i32, z: i32 },
    Rect { row: i32, col: i32 },
}

impl CellCoord {
    pub fn hex(x: i32, y: i32, z: i32) -> Self {
        CellCoord::Hex { x, y, z }
    }

    pub fn rect(row: i32, col: i32) -> Self {
        CellCoord::Rect { row, col }
    }
}

impl fmt::Display for CellCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CellCoord::Hex { x, y, z } => write!(f, "({x},{y},{z})"),
            CellCoord::Rect { row, col } => write!(f, "[{row},{col}]"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CellClass {
    BoundaryCorner,
    BoundaryEdge,
    Penultimate,
    Central,
}

impl CellClass {
    pub fn is_boundary(self) -> bool {
        matches!(self, CellClass::BoundaryCorner | CellClass::BoundaryEdge)
    }

    pub fn is_interior(self) -> bool {
        !self.is_boundary()
    }
}

/// A tile edge, identified by one of the cells it borders and that cell's slot.
///
/// Built through [`Board::edge`], which canonicalizes shared edges to the
/// lower-indexed cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeRef {
    pub cell: usize,
    pub slot: u8,
}

const HEX_DIRS: [(i32, i32); 6] = [(1, -1), (1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1)];
const RECT_DIRS: [(i32, i32); 4] = [(-1, 0), (0, 1), (1, 0), (0, -1)];

/// Precomputed geometry of one board: cell order, adjacency and classes.
#[derive(Clone, Debug)]
pub struct Board {
    spec: BoardSpec,
    cells: Vec<CellCoord>,
    row_col: Vec<(usize, usize)>,
    row_start: Vec<usize>,
    classes: Vec<CellClass>,
    coronas: Vec<usize>,
    /// `neighbors[cell * slots + slot]`
    neighbors: Vec<Option<usize>>,
    ring: Vec<usize>,
}

impl Board {
    pub fn new(spec: BoardSpec) -> Result<Self> {
        if spec.r == 0 {
            return Err(Error::InvalidBoard("board size r must be at least 1".into()));
        }
        if spec.setting.geometry() != spec.geometry {
            return Err(Error::InvalidBoard(format!(
                "setting {} does not match geometry {}",
                spec.setting, spec.geometry
            )));
        }
        let r = spec.r as i32;
        let mut cells = Vec::with_capacity(spec.cell_count());
        let mut row_col = Vec::with_capacity(spec.cell_count());
        let mut row_start = Vec::new();
        match spec.geometry {
            Geometry::Hex => {
                let n = r - 1;
                for s in -n..=n {
                    row_start.push(cells.len());
                    let qmin = (-n).max(-n - s);
                    let qmax = n.min(n - s);
                    for q in qmin..=qmax {
                        cells.push(CellCoord::hex(q, -q - s, s));
                        row_col.push(((s + n + 1) as usize, (q - qmin + 1) as usize));
                    }
                }
            }
            Geometry::Rect => {
                for row in 1..=r {
                    row_start.push(cells.len());
                    for col in 1..=r {
                        cells.push(CellCoord::rect(row, col));
                        row_col.push((row as usize, col as usize));
                    }
                }
            }
        }
        let slots = spec.geometry.slots() as usize;
        let mut board = Board {
            spec,
            neighbors: vec![None; cells.len() * slots],
            classes: Vec::with_capacity(cells.len()),
            coronas: Vec::with_capacity(cells.len()),
            ring: Vec::new(),
            cells,
            row_col,
            row_start,
        };
        for i in 0..board.cells.len() {
            for k in 0..slots {
                board.neighbors[i * slots + k] = board.step(board.cells[i], k as u8).and_then(|c| board.index_of(c));
            }
        }
        let interior_count = board.cells.iter().filter(|&&c| board.depth(c) < spec.r - 1).count();
        for i in 0..board.cells.len() {
            let c = board.cells[i];
            let depth = board.depth(c);
            board.coronas.push(depth);
            let class = if depth == spec.r - 1 {
                if board.is_corner(c) {
                    CellClass::BoundaryCorner
                } else {
                    CellClass::BoundaryEdge
                }
            } else if interior_count == 1 || depth + 3 <= spec.r {
                CellClass::Central
            } else {
                CellClass::Penultimate
            };
            board.classes.push(class);
        }
        board.ring = board.build_ring();
        Ok(board)
    }

    pub fn spec(&self) -> BoardSpec {
        self.spec
    }

    pub fn geometry(&self) -> Geometry {
        self.spec.geometry
    }

    pub fn r(&self) -> usize {
        self.spec.r
    }

    pub fn slots(&self) -> u8 {
        self.spec.geometry.slots()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[CellCoord] {
        &self.cells
    }

    pub fn coord(&self, cell: usize) -> CellCoord {
        self.cells[cell]
    }

    pub fn index_of(&self, c: CellCoord) -> Option<usize> {
        let (row, col) = self.coord_to_row_col(c)?;
        self.row_col_index(row, col)
    }

    /// Row-major index of `T_{row,col}`.
    pub fn row_col_index(&self, row: usize, col: usize) -> Option<usize> {
        if row == 0 || col == 0 || row > self.row_start.len() {
            return None;
        }
        let start = self.row_start[row - 1];
        let end = self.row_start.get(row).copied().unwrap_or(self.cells.len());
        (col <= end - start).then(|| start + col - 1)
    }

    pub fn row_col(&self, cell: usize) -> (usize, usize) {
        self.row_col[cell]
    }

    pub fn rows(&self) -> usize {
        self.row_start.len()
    }

    pub fn row_len(&self, row: usize) -> usize {
        let start = self.row_start[row - 1];
        let end = self.row_start.get(row).copied().unwrap_or(self.cells.len());
        end - start
    }

    fn coord_to_row_col(&self, c: CellCoord) -> Option<(usize, usize)> {
        let r = self.spec.r as i32;
        match (self.spec.geometry, c) {
            (Geometry::Hex, CellCoord::Hex { x, y, z }) => {
                let n = r - 1;
                if x + y + z != 0 || x.abs().max(y.abs()).max(z.abs()) > n {
                    return None;
                }
                let qmin = (-n).max(-n - z);
                Some(((z + n + 1) as usize, (x - qmin + 1) as usize))
            }
            (Geometry::Rect, CellCoord::Rect { row, col }) => {
                if row < 1 || col < 1 || row > r || col > r {
                    return None;
                }
                Some((row as usize, col as usize))
            }
            _ => None,
        }
    }

    fn step(&self, c: CellCoord, slot: u8) -> Option<CellCoord> {
        match c {
            CellCoord::Hex { x, z, .. } => {
                let (dq, ds) = *HEX_DIRS.get(slot as usize)?;
                let (q, s) = (x + dq, z + ds);
                Some(CellCoord::hex(q, -q - s, s))
            }
            CellCoord::Rect { row, col } => {
                let (dr, dc) = *RECT_DIRS.get(slot as usize)?;
                Some(CellCoord::rect(row + dr, col + dc))
            }
        }
    }

    fn depth(&self, c: CellCoord) -> usize {
        let r = self.spec.r as i32;
        match c {
            CellCoord::Hex { x, y, z } => x.abs().max(y.abs()).max(z.abs()) as usize,
            // Rect "coronas" count inward from the board edge; re-expressed so that
            // the outer ring sits at r-1 like the hexagonal boundary corona.
            CellCoord::Rect { row, col } => {
                let from_edge = (row - 1).min(col - 1).min(r - row).min(r - col);
                (r - 1 - from_edge) as usize
            }
        }
    }

    fn is_corner(&self, c: CellCoord) -> bool {
        let n = self.spec.r as i32 - 1;
        match c {
            CellCoord::Hex { x, y, z } => [x, y, z].iter().filter(|v| v.abs() == n).count() >= 2,
            CellCoord::Rect { row, col } => (row == 1 || row == n + 1) && (col == 1 || col == n + 1),
        }
    }

    /// Distance of the cell from the board center (hex) or the matching ring
    /// index counted so that the outer ring is `r-1` (rect).
    pub fn corona(&self, cell: usize) -> usize {
        self.coronas[cell]
    }

    pub fn class(&self, cell: usize) -> CellClass {
        self.classes[cell]
    }

    pub fn is_boundary(&self, cell: usize) -> bool {
        self.classes[cell].is_boundary()
    }

    pub fn neighbor(&self, cell: usize, slot: u8) -> Option<usize> {
        self.neighbors[cell * self.slots() as usize + slot as usize]
    }

    /// All `(slot, neighbor)` pairs of a cell, `None` marking off-board.
    pub fn neighbors(&self, cell: usize) -> Vec<(u8, Option<usize>)> {
        (0..self.slots()).map(|k| (k, self.neighbor(cell, k))).collect()
    }

    pub fn opposite(&self, slot: u8) -> u8 {
        self.spec.geometry.opposite(slot)
    }

    /// Canonical reference to the edge at `slot` of `cell`.
    pub fn edge(&self, cell: usize, slot: u8) -> EdgeRef {
        match self.neighbor(cell, slot) {
            Some(other) if other < cell => EdgeRef {
                cell: other,
                slot: self.opposite(slot),
            },
            _ => EdgeRef { cell, slot },
        }
    }

    pub fn interior_cells(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&c| !self.is_boundary(c))
    }

    /// Boundary cells in clockwise cyclic order starting at `T_{1,1}`.
    pub fn ring(&self) -> &[usize] {
        &self.ring
    }

    fn build_ring(&self) -> Vec<usize> {
        let boundary: Vec<usize> = (0..self.len()).filter(|&c| self.is_boundary(c)).collect();
        if boundary.len() <= 1 {
            return boundary;
        }
        // Walk clockwise: from T_{1,1} head east along the top row and keep the
        // board interior on the right-hand side.
        let dirs: &[u8] = match self.geometry() {
            Geometry::Hex => &[1, 2, 3, 4, 5, 0],
            Geometry::Rect => &[1, 2, 3, 0],
        };
        let mut ring = vec![0usize];
        let mut dir_idx = 0usize;
        let mut cur = 0usize;
        while ring.len() < boundary.len() {
            let mut moved = false;
            for turn in 0..dirs.len() {
                let d = dirs[(dir_idx + turn) % dirs.len()];
                if let Some(next) = self.neighbor(cur, d) {
                    if self.is_boundary(next) && !ring.contains(&next) {
                        ring.push(next);
                        cur = next;
                        dir_idx = (dir_idx + turn) % dirs.len();
                        moved = true;
                        break;
                    }
                }
            }
            if !moved {
                break;
            }
        }
        ring
    }

    /// Which side of the boundary a boundary cell sits on, numbered clockwise
    /// from the top side (0..6 hex, 0..4 rect). Corners return both sides.
    pub fn boundary_sides(&self, cell: usize) -> Vec<usize> {
        if !self.is_boundary(cell) || self.spec.r < 2 {
            return Vec::new();
        }
        let n = self.spec.r as i32 - 1;
        let mut out = Vec::new();
        match self.coord(cell) {
            CellCoord::Hex { x, y, z } => {
                // top, upper-right, lower-right, bottom, lower-left, upper-left
                let tests = [z == -n, x == n, y == -n, z == n, x == -n, y == n];
                for (i, t) in tests.into_iter().enumerate() {
                    if t {
                        out.push(i);
                    }
                }
            }
            CellCoord::Rect { row, col } => {
                let tests = [row == 1, col == n + 1, row == n + 1, col == 1];
                for (i, t) in tests.into_iter().enumerate() {
                    if t {
                        out.push(i);
                    }
                }
            }
        }
        out
    }

    /// Drawing position of a cell center (y up). Hex cells have circumradius
    /// 1, square cells side 1.
    pub fn center(&self, cell: usize) -> (f64, f64) {
        match self.coord(cell) {
            CellCoord::Hex { x, z, .. } => {
                let (q, s) = (x as f64, z as f64);
                (3f64.sqrt() * (q + s / 2.0), -1.5 * s)
            }
            CellCoord::Rect { row, col } => (col as f64, -(row as f64)),
        }
    }

    /// Distance from a cell center to the midpoint of any of its edges.
    pub fn apothem(&self) -> f64 {
        match self.geometry() {
            Geometry::Hex => 3f64.sqrt() / 2.0,
            Geometry::Rect => 0.5,
        }
    }

    /// Image of `cell` under `k` clockwise turns of the board (60 degrees
    /// hex, 90 degrees rect). Slot `s` of the cell maps to slot `s + k`.
    pub fn rotate_cell(&self, cell: usize, k: usize) -> usize {
        let mut c = self.coord(cell);
        let r = self.spec.r as i32;
        for _ in 0..k % self.slots() as usize {
            c = match c {
                CellCoord::Hex { x, y, z } => CellCoord::hex(-z, -x, -y),
                CellCoord::Rect { row, col } => CellCoord::rect(col, r + 1 - row),
            };
        }
        self.index_of(c).expect("rotation maps the board onto itself")
    }

    /// Slots of a cell that face off the board.
    pub fn off_board_slots(&self, cell: usize) -> Vec<u8> {
        (0..self.slots())
            .filter(|&k| self.neighbor(cell, k).is_none())
            .collect()
    }
}

/// All cells of the board in row-major order.
pub fn board_cells(spec: BoardSpec) -> Result<Vec<CellCoord>> {
    Ok(Board::new(spec)?.cells)
}

pub fn classify_cell(c: CellCoord, spec: BoardSpec) -> Result<CellClass> {
    let b = Board::new(spec)?;
    let i = b.index_of(c).ok_or_else(|| Error::OffBoard(c.to_string()))?;
    Ok(b.class(i))
}

pub fn neighbors(c: CellCoord, spec: BoardSpec) -> Result<Vec<(u8, Option<CellCoord>)>> {
    let b = Board::new(spec)?;
    let i = b.index_of(c).ok_or_else(|| Error::OffBoard(c.to_string()))?;
    Ok(b.neighbors(i)
        .into_iter()
        .map(|(k, n)| (k, n.map(|j| b.coord(j))))
        .collect())
}

pub fn to_row_col(c: CellCoord, spec: BoardSpec) -> Result<(usize, usize)> {
    let b = Board::new(spec)?;
    let i = b.index_of(c).ok_or_else(|| Error::OffBoard(c.to_string()))?;
    Ok(b.row_col(i))
}

pub fn from_row_col(row: usize, col: usize, spec: BoardSpec) -> Result<CellCoord> {
    let b = Board::new(spec)?;
    let i = b
        .row_col_index(row, col)
        .ok_or_else(|| Error::OffBoard(format!("T_{{{row},{col}}}")))?;
    Ok(b.coord(i))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hex(r: usize) -> Board {
        Board::new(BoardSpec::hex(Setting::HexStandard, r).unwrap()).unwrap()
    }

    #[test]
    fn cell_counts() {
        assert_eq!(hex(2).len(), 7);
        assert_eq!(hex(4).len(), 37);
        // brute force over the cube
        for r in 1..8i32 {
            let n = r - 1;
            let mut count = 0;
            for x in -n..=n {
                for y in -n..=n {
                    let z = -x - y;
                    if z.abs() <= n {
                        count += 1;
                    }
                }
            }
            assert_eq!(hex(r as usize).len(), count as usize);
        }
        let rect = Board::new(BoardSpec::rect(6).unwrap()).unwrap();
        assert_eq!(rect.len(), 36);
        assert!(BoardSpec::rect(0).is_err());
    }

    #[test]
    fn corona_sizes() {
        let b = hex(6);
        for t in 1..6 {
            assert_eq!((0..b.len()).filter(|&c| b.corona(c) == t).count(), 6 * t);
        }
    }

    #[test]
    fn row_lengths_and_named_tiles() {
        let b = hex(4);
        assert_eq!(b.row_len(1), 4);
        assert_eq!(b.row_len(4), 7);
        assert_eq!(b.row_len(7), 4);
        let corner = |i, j| b.class(b.row_col_index(i, j).unwrap());
        for (i, j) in [(1, 1), (1, 4), (4, 1), (4, 7), (7, 1), (7, 4)] {
            assert_eq!(corner(i, j), CellClass::BoundaryCorner, "T_{i},{j}");
        }
        for (i, j) in [(1, 2), (1, 3), (2, 5)] {
            assert_eq!(corner(i, j), CellClass::BoundaryEdge);
        }
        assert!(b.row_col_index(1, 5).is_none());
        assert!(b.row_col_index(8, 1).is_none());
    }

    #[test]
    fn small_board_classes() {
        let b = hex(2);
        let center = b.index_of(CellCoord::hex(0, 0, 0)).unwrap();
        assert_eq!(b.class(center), CellClass::Central);
        assert_eq!(b.interior_cells().count(), 1);
        let b = hex(5);
        let pen = (0..b.len()).filter(|&c| b.class(c) == CellClass::Penultimate).count();
        let cen = (0..b.len()).filter(|&c| b.class(c) == CellClass::Central).count();
        assert_eq!(pen, 18);
        assert_eq!(cen, 19);
    }

    #[test]
    fn adjacency_is_symmetric() {
        for b in [hex(4), Board::new(BoardSpec::rect(5).unwrap()).unwrap()] {
            for c in 0..b.len() {
                for k in 0..b.slots() {
                    if let Some(n) = b.neighbor(c, k) {
                        assert_eq!(b.neighbor(n, b.opposite(k)), Some(c));
                        assert_eq!(b.edge(c, k), b.edge(n, b.opposite(k)));
                    }
                }
            }
        }
    }

    #[test]
    fn corner_has_three_neighbors() {
        let b = hex(4);
        let c = b.row_col_index(1, 1).unwrap();
        assert_eq!(b.neighbors(c).iter().filter(|(_, n)| n.is_some()).count(), 3);
        let center = b.index_of(CellCoord::hex(0, 0, 0)).unwrap();
        assert_eq!(b.neighbors(center).iter().filter(|(_, n)| n.is_some()).count(), 6);
        let rect = Board::new(BoardSpec::rect(4).unwrap()).unwrap();
        let on: Vec<u8> = rect
            .neighbors(0)
            .into_iter()
            .filter_map(|(k, n)| n.map(|_| k))
            .collect();
        assert_eq!(on, vec![1, 2]);
    }

    #[test]
    fn row_col_round_trip() {
        for spec in [
            BoardSpec::hex(Setting::HexEnhanced, 5).unwrap(),
            BoardSpec::rect(4).unwrap(),
        ] {
            for c in board_cells(spec).unwrap() {
                let (i, j) = to_row_col(c, spec).unwrap();
                assert_eq!(from_row_col(i, j, spec).unwrap(), c);
            }
        }
    }

    #[test]
    fn ring_is_a_cycle() {
        for b in [hex(2), hex(5), Board::new(BoardSpec::rect(5).unwrap()).unwrap()] {
            let ring = b.ring();
            assert_eq!(ring.len(), (0..b.len()).filter(|&c| b.is_boundary(c)).count());
            for i in 0..ring.len() {
                let (a, c) = (ring[i], ring[(i + 1) % ring.len()]);
                assert!((0..b.slots()).any(|k| b.neighbor(a, k) == Some(c)));
            }
        }
    }

    #[test]
    fn off_board_cell_rejected() {
        let spec = BoardSpec::hex(Setting::HexStandard, 3).unwrap();
        assert!(classify_cell(CellCoord::hex(3, -3, 0), spec).is_err());
        assert!(classify_cell(CellCoord::hex(1, 1, 1), spec).is_err());
    }
}

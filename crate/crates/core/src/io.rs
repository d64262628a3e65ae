//! The `hexmo v1` text format.
//!
//! ```text
//! hexmo v1
//! geometry: hex
//! r: 2
//! setting: hex-standard
//! cell 1 1: (2-3)
//! ...
//! ```
//!
//! One `cell <row> <col>: <tile-code>` line per cell in row-major order,
//! rows and columns counted from 1, `-` for a blank tile. Blank lines and
//! lines starting with `#` are ignored when reading.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::{BoardSpec, Geometry, Setting};
use crate::mosaic::Mosaic;
use crate::tiles::TileFace;

pub const MAGIC: &str = "hexmo v1";

pub fn write(m: &Mosaic) -> String {
    let spec = m.spec();
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC}");
    let _ = writeln!(out, "geometry: {}", spec.geometry);
    let _ = writeln!(out, "r: {}", spec.r);
    let _ = writeln!(out, "setting: {}", spec.setting);
    for cell in 0..m.board().len() {
        let (row, col) = m.board().row_col(cell);
        let _ = writeln!(out, "cell {row} {col}: {}", m.face(cell).code());
    }
    out
}

fn at(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::ParseAt {
        line,
        column,
        message: message.into(),
    }
}

/// Parse a mosaic. Only the format is checked; see [`load`] for validity.
pub fn read(text: &str) -> Result<Mosaic> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let (n, first) = lines.next().ok_or_else(|| at(1, 1, "empty file"))?;
    if first.trim() != MAGIC {
        return Err(at(n, 1, format!("expected `{MAGIC}`")));
    }
    let mut header = |key: &str| -> Result<(usize, String)> {
        let (n, line) = lines.next().ok_or_else(|| at(n, 1, format!("missing `{key}:` line")))?;
        let value = line
            .trim()
            .strip_prefix(key)
            .and_then(|r| r.strip_prefix(':'))
            .ok_or_else(|| at(n, 1, format!("expected `{key}:`")))?;
        Ok((n, value.trim().to_string()))
    };
    let (gl, g) = header("geometry")?;
    let geometry: Geometry = g.parse().map_err(|e: Error| at(gl, 11, e.to_string()))?;
    let (rl, r) = header("r")?;
    let r: usize = r.parse().map_err(|_| at(rl, 4, format!("bad size `{r}`")))?;
    let (sl, s) = header("setting")?;
    let setting: Setting = s.parse().map_err(|e: Error| at(sl, 10, e.to_string()))?;
    if setting.geometry() != geometry {
        return Err(at(
            sl,
            10,
            format!("setting {setting} does not fit geometry {geometry}"),
        ));
    }
    let spec = BoardSpec::new(setting, r).map_err(|e| at(rl, 4, e.to_string()))?;
    let mut m = Mosaic::blank(spec)?;
    let b = m.shared_board();
    let mut seen = vec![false; b.len()];
    for (n, line) in lines {
        let body = line
            .trim_start()
            .strip_prefix("cell ")
            .ok_or_else(|| at(n, 1, "expected `cell <row> <col>: <tile>`"))?;
        let (pos, code) = body.split_once(':').ok_or_else(|| at(n, 1, "missing `:`"))?;
        let mut nums = pos.split_whitespace().map(str::parse::<usize>);
        let (Some(Ok(row)), Some(Ok(col)), None) = (nums.next(), nums.next(), nums.next()) else {
            return Err(at(n, 6, format!("bad cell position `{}`", pos.trim())));
        };
        let cell = b
            .row_col_index(row, col)
            .ok_or_else(|| at(n, 6, format!("no cell at row {row}, column {col}")))?;
        if seen[cell] {
            return Err(at(n, 6, format!("cell {row} {col} given twice")));
        }
        seen[cell] = true;
        let column = line.find(':').map_or(1, |c| c + 2);
        let face = TileFace::parse(geometry, code).map_err(|e| at(n, column, e.to_string()))?;
        m.set(cell, face);
    }
    if let Some(missing) = seen.iter().position(|s| !s) {
        let (row, col) = b.row_col(missing);
        return Err(at(text.lines().count().max(1), 1, format!("cell {row} {col} missing")));
    }
    Ok(m)
}

/// Parse and require validity.
pub fn load(text: &str) -> Result<Mosaic> {
    let m = read(text)?;
    m.check()?;
    Ok(m)
}

pub fn read_file(path: impl AsRef<Path>) -> Result<Mosaic> {
    read(&std::fs::read_to_string(path)?)
}

pub fn write_file(m: &Mosaic, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, write(m))?;
    Ok(())
}

//! Rectangular and hexagonal knot mosaics.

pub mod complement;
pub mod diagram;
pub mod error;
pub mod families;
pub mod grid;
pub mod io;
pub mod mosaic;
pub mod par;
pub mod render;
pub mod sample;
pub mod search;
pub mod tiles;
pub mod verify;

pub use error::{Error, Result};
pub use grid::{Board, BoardSpec, CellClass, CellCoord, EdgeRef, Geometry, Setting};
pub use tiles::{TileClass, TileFace};

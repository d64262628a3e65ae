//! Largest knot a board can carry, by exhaustive, budgeted or random search.
//!
//! Every mode walks knot projections. A projection with `n` crossings of
//! which `k` are nugatory carries, under its alternating state, a knot of
//! crossing number exactly `n - k`, and no state does better; so the largest
//! `n - k` seen is the largest crossing number reachable on the searched set.

use serde::Serialize;

use crate::diagram::{extract_unchecked, keep_components, Analysis};
use crate::error::{Error, Result};
use crate::families::{make_alternating, predicted};
use crate::grid::{BoardSpec, Geometry, Setting};
use crate::mosaic::{boundary_closures, closures_on, ClosureOptions, Mosaic};
use crate::par::{self, Exec};
use crate::sample::{seeded, Sampler};
use crate::tiles::{all_faces, TileFace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum SearchMode {
    /// Every valid projection on the board (hex r=2, rect r<=4).
    Exhaustive,
    /// Interiors of fully used hexagonal tiles within `max_smoothings`
    /// smoothings of saturation, each with every boundary closure (hex r<=3).
    SaturatedSmoothing {
        max_smoothings: usize,
    },
    Randomized {
        seed: u64,
        samples: u64,
    },
}

#[derive(Clone, Debug)]
pub struct SearchRecord {
    pub spec: BoardSpec,
    pub mode: SearchMode,
    pub mosaics: u64,
    pub knots: u64,
    /// random draws that never produced a valid board
    pub failed_draws: u64,
    pub max_crossings: usize,
    /// the knot reaching `max_crossings`, alternating
    pub witness: Option<Mosaic>,
    pub witness_analysis: Option<Analysis>,
    pub bound: Option<usize>,
    pub exceeded_bound: bool,
}

/// Best knot on one mosaic: (reduced crossings, component).
fn best_knot(m: &Mosaic) -> (usize, Option<usize>, u64) {
    let d = extract_unchecked(m);
    let mut best = (0, None);
    for c in 0..d.component_count() {
        let k = extract_unchecked(&keep_components(m, &d, &[c]));
        let v = k.crossing_count() - k.nugatory_crossings().len();
        if best.1.is_none() || v > best.0 {
            best = (v, Some(c));
        }
    }
    (best.0, best.1, d.component_count() as u64)
}

struct Tally {
    mosaics: u64,
    knots: u64,
    failed: u64,
    best: Option<(usize, Mosaic, usize)>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            mosaics: 0,
            knots: 0,
            failed: 0,
            best: None,
        }
    }

    /// Earlier candidates win ties, so the result does not depend on threading.
    fn add(&mut self, m: Mosaic) {
        let (v, comp, knots) = best_knot(&m);
        self.mosaics += 1;
        self.knots += knots;
        if let Some(c) = comp {
            if self.best.as_ref().is_none_or(|b| v > b.0) {
                self.best = Some((v, m, c));
            }
        }
    }

    fn merge(&mut self, other: Tally) {
        self.mosaics += other.mosaics;
        self.knots += other.knots;
        self.failed += other.failed;
        if let Some(b) = other.best {
            if self.best.as_ref().is_none_or(|a| b.0 > a.0) {
                self.best = Some(b);
            }
        }
    }
}

fn projections(faces: &[TileFace]) -> Vec<TileFace> {
    faces
        .iter()
        .filter(|f| f.state_bits() == (1 << f.crossing_count()) - 1)
        .copied()
        .collect()
}

fn exhaustive_seeds(spec: BoardSpec) -> Result<Vec<Mosaic>> {
    let blank = Mosaic::blank(spec)?;
    match spec.geometry {
        Geometry::Hex if spec.r == 2 => {
            let center = blank.board().interior_cells().next().unwrap();
            Ok(all_faces(Geometry::Hex)
                .iter()
                .map(|f| blank.with_face(center, *f))
                .collect())
        }
        Geometry::Rect if spec.r <= 4 => Ok(vec![blank]),
        _ => Err(Error::TooLarge(format!(
            "exhaustive search covers hex r=2 and rect r<=4, not {} r={}",
            spec.setting, spec.r
        ))),
    }
}

fn smoothing_seeds(spec: BoardSpec, budget: usize) -> Result<Vec<Mosaic>> {
    if spec.geometry != Geometry::Hex || spec.r > 3 || spec.r < 2 {
        return Err(Error::TooLarge(format!(
            "saturated-smoothing search covers hex r<=3, not {} r={}",
            spec.setting, spec.r
        )));
    }
    let full: Vec<TileFace> = projections(all_faces(Geometry::Hex))
        .into_iter()
        .filter(|f| f.arc_count() == 3)
        .collect();
    let cells: Vec<usize> = Mosaic::blank(spec)?.board().interior_cells().collect();
    let mut out = Vec::new();
    let mut m = Mosaic::blank(spec)?;
    fn go(i: usize, left: usize, cells: &[usize], full: &[TileFace], m: &mut Mosaic, out: &mut Vec<Mosaic>) {
        if i == cells.len() {
            out.push(m.clone());
            return;
        }
        for f in full {
            let cost = 3 - f.crossing_count();
            if cost <= left {
                m.set(cells[i], *f);
                go(i + 1, left - cost, cells, full, m, out);
            }
        }
    }
    go(0, budget, &cells, &full, &mut m, &mut out);
    Ok(out)
}

fn closures_of(seed: &Mosaic, mode: SearchMode) -> Vec<Mosaic> {
    let opts = ClosureOptions {
        projection_only: true,
        limit: None,
    };
    match (mode, seed.board().geometry()) {
        (SearchMode::Exhaustive, Geometry::Rect) => {
            let all: Vec<usize> = (0..seed.board().len()).collect();
            closures_on(seed, &all, &|_, _| true, opts)
        }
        _ => boundary_closures(seed, opts),
    }
}

pub fn search_max_knot(r: usize, setting: Setting, mode: SearchMode) -> Result<SearchRecord> {
    search_max_knot_with(Exec::Auto, r, setting, mode)
}

pub fn search_max_knot_with(exec: Exec, r: usize, setting: Setting, mode: SearchMode) -> Result<SearchRecord> {
    let spec = BoardSpec::new(setting, r)?;
    let tally = match mode {
        SearchMode::Exhaustive | SearchMode::SaturatedSmoothing { .. } => {
            let seeds = match mode {
                SearchMode::SaturatedSmoothing { max_smoothings } => smoothing_seeds(spec, max_smoothings)?,
                _ => exhaustive_seeds(spec)?,
            };
            let parts = par::map(exec, &seeds, |s| {
                let mut t = Tally::new();
                for m in closures_of(s, mode) {
                    t.add(m);
                }
                t
            });
            parts.into_iter().fold(Tally::new(), |mut a, t| {
                a.merge(t);
                a
            })
        }
        SearchMode::Randomized { seed, samples } => {
            let sampler = Sampler::new(spec)?;
            const BATCH: u64 = 512;
            let batches = samples.div_ceil(BATCH) as usize;
            let parts = par::map_range(exec, batches, |b| {
                let mut t = Tally::new();
                let lo = b as u64 * BATCH;
                for i in lo..(lo + BATCH).min(samples) {
                    match sampler.mosaic(&mut seeded(seed, i)) {
                        Ok(m) => t.add(m),
                        Err(_) => t.failed += 1,
                    }
                }
                t
            });
            parts.into_iter().fold(Tally::new(), |mut a, t| {
                a.merge(t);
                a
            })
        }
    };
    let bound = predicted(r, setting).ok().map(|p| p.knot_crossing_bound);
    let (max_crossings, witness) = match tally.best {
        Some((v, m, c)) => {
            let knot = keep_components(&m, &extract_unchecked(&m), &[c]);
            (v, Some(make_alternating(&knot)?))
        }
        None => (0, None),
    };
    Ok(SearchRecord {
        spec,
        mode,
        mosaics: tally.mosaics,
        knots: tally.knots,
        failed_draws: tally.failed,
        max_crossings,
        witness_analysis: witness.as_ref().map(|w| extract_unchecked(w).analysis()),
        witness,
        bound,
        exceeded_bound: bound.is_some_and(|b| max_crossings > b),
    })
}

//! Random valid mosaics.
//!
//! Cells are filled in spiral order, center outward. Each cell draws
//! uniformly among the tiles that fit the slots already fixed by filled
//! neighbours and the board edge; a cell with no fitting tile restarts the
//! whole draw.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagram::{extract_unchecked, keep_components};
use crate::error::{Error, Result};
use crate::grid::{Board, BoardSpec};
use crate::mosaic::{face_allowed, Mosaic};
use crate::tiles::{all_faces, TileFace};

/// Cells by corona, then clockwise from the top.
pub fn spiral_order(b: &Board) -> Vec<usize> {
    let n = b.len() as f64;
    let (cx, cy) = (0..b.len())
        .map(|c| b.center(c))
        .fold((0.0, 0.0), |a, p| (a.0 + p.0 / n, a.1 + p.1 / n));
    let mut order: Vec<usize> = (0..b.len()).collect();
    let key = |c: usize| {
        let (x, y) = b.center(c);
        let mut ang = (x - cx).atan2(y - cy);
        if ang < -1e-9 {
            ang += std::f64::consts::TAU;
        }
        (b.corona(c), ang)
    };
    order.sort_by(|&p, &q| {
        let (a, b) = (key(p), key(q));
        a.0.cmp(&b.0).then(a.1.total_cmp(&b.1))
    });
    order
}

/// Deterministic generator for sample `index` of a run seeded with `seed`.
pub fn seeded(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub struct Sampler {
    spec: BoardSpec,
    order: Vec<usize>,
    candidates: Vec<Vec<TileFace>>,
    max_restarts: usize,
}

impl Sampler {
    pub fn new(spec: BoardSpec) -> Result<Self> {
        let b = crate::mosaic::board(spec)?;
        let candidates = (0..b.len())
            .map(|c| {
                all_faces(b.geometry())
                    .iter()
                    .filter(|f| face_allowed(&b, c, f))
                    .copied()
                    .collect()
            })
            .collect();
        Ok(Sampler {
            spec,
            order: spiral_order(&b),
            candidates,
            max_restarts: 10_000,
        })
    }

    pub fn spec(&self) -> BoardSpec {
        self.spec
    }

    /// A uniformly drawn tile at every step; always valid.
    pub fn mosaic<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Mosaic> {
        let mut m = Mosaic::blank(self.spec)?;
        let b = m.shared_board();
        let mut filled = vec![false; b.len()];
        let mut fits: Vec<TileFace> = Vec::new();
        'restart: for _ in 0..self.max_restarts {
            filled.iter_mut().for_each(|f| *f = false);
            for &cell in &self.order {
                let (mut need, mut forbid) = (0u8, 0u8);
                for k in 0..b.slots() {
                    match b.neighbor(cell, k) {
                        Some(nb) if filled[nb] => {
                            if m.face(nb).uses(b.opposite(k)) {
                                need |= 1 << k;
                            } else {
                                forbid |= 1 << k;
                            }
                        }
                        _ => {}
                    }
                }
                fits.clear();
                fits.extend(
                    self.candidates[cell]
                        .iter()
                        .filter(|f| f.used_mask() & need == need && f.used_mask() & forbid == 0),
                );
                match fits.choose(rng) {
                    Some(&f) => {
                        m.set(cell, f);
                        filled[cell] = true;
                    }
                    None => continue 'restart,
                }
            }
            debug_assert!(m.is_valid());
            return Ok(m);
        }
        Err(Error::TooLarge(format!(
            "no valid draw after {} restarts",
            self.max_restarts
        )))
    }

    /// A random mosaic cut down to its component with the most crossings;
    /// `None` when the draw holds no strands at all.
    pub fn knot<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Option<Mosaic>> {
        let m = self.mosaic(rng)?;
        let d = extract_unchecked(&m);
        if d.component_count() == 0 {
            return Ok(None);
        }
        let mut self_crossings = vec![0usize; d.component_count()];
        for x in &d.crossings {
            if x.is_self() {
                self_crossings[x.components.0] += 1;
            }
        }
        let best = (0..d.component_count())
            .max_by_key(|&c| (self_crossings[c], std::cmp::Reverse(c)))
            .unwrap();
        Ok(Some(keep_components(&m, &d, &[best])))
    }
}

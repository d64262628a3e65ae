//! Link diagrams traced from mosaics, and their analysis.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mosaic::Mosaic;
use crate::tiles::{crossings_along, TileFace};

/// One tile-local piece of a component walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Step {
    pub cell: usize,
    pub strand: usize,
    /// slot the walk enters through
    pub entry: u8,
    /// slot the walk leaves through
    pub exit: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Crossing {
    pub cell: usize,
    /// strand indices within the tile, lower first
    pub strands: (usize, usize),
    /// strand index on top
    pub over: usize,
    /// components of the two strands, in the order of `strands`
    pub components: (usize, usize),
}

impl Crossing {
    pub fn is_self(&self) -> bool {
        self.components.0 == self.components.1
    }
}

/// A crossing met along a component walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Passage {
    pub crossing: usize,
    /// strand index of the walking strand within the crossing's tile
    pub strand: usize,
    pub over: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkDiagram {
    pub components: Vec<Vec<Step>>,
    pub crossings: Vec<Crossing>,
    /// crossings met along each component, in walk order
    pub passages: Vec<Vec<Passage>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "crossings", rename_all = "kebab-case")]
pub enum CrossingNumber {
    Certified(usize),
    UpperBound(usize),
}

impl CrossingNumber {
    pub fn value(self) -> usize {
        match self {
            CrossingNumber::Certified(n) | CrossingNumber::UpperBound(n) => n,
        }
    }

    pub fn is_certified(self) -> bool {
        matches!(self, CrossingNumber::Certified(_))
    }
}

impl fmt::Display for CrossingNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CrossingNumber::Certified(n) => write!(f, "certified({n})"),
            CrossingNumber::UpperBound(n) => write!(f, "upper_bound({n})"),
        }
    }
}

pub fn extract(m: &Mosaic) -> Result<LinkDiagram> {
    m.check()?;
    Ok(extract_unchecked(m))
}

/// Trace a mosaic already known to be valid.
pub fn extract_unchecked(m: &Mosaic) -> LinkDiagram {
    let b = m.board();
    let max = b.geometry().max_strands();
    let key = |cell: usize, strand: usize| cell * max + strand;

    let mut crossings = Vec::new();
    let mut crossing_id = vec![usize::MAX; b.len() * 3];
    for cell in 0..b.len() {
        for (i, j) in m.face(cell).crossings() {
            crossing_id[cell * 3 + pair_slot(i, j)] = crossings.len();
            let over = if m.face(cell).is_over(i, j) { i } else { j };
            crossings.push(Crossing {
                cell,
                strands: (i, j),
                over,
                components: (usize::MAX, usize::MAX),
            });
        }
    }

    let mut comp_of = vec![usize::MAX; b.len() * max];
    let mut components = Vec::new();
    let mut passages = Vec::new();
    for cell in 0..b.len() {
        for strand in 0..m.face(cell).arc_count() {
            if comp_of[key(cell, strand)] != usize::MAX {
                continue;
            }
            let id = components.len();
            let mut walk = Vec::new();
            let mut seq = Vec::new();
            let (lo, hi) = m.face(cell).strands()[strand];
            let (mut c, mut s, mut entry, mut exit) = (cell, strand, hi, lo);
            loop {
                comp_of[key(c, s)] = id;
                walk.push(Step {
                    cell: c,
                    strand: s,
                    entry,
                    exit,
                });
                for &(other, over) in crossings_along(m.face(c), s, entry) {
                    seq.push(Passage {
                        crossing: crossing_id[c * 3 + pair_slot(s, other)],
                        strand: s,
                        over,
                    });
                }
                let next = b.neighbor(c, exit).expect("valid mosaic strands stay on the board");
                let slot = b.opposite(exit);
                let (ns, far) = m
                    .face(next)
                    .strand_at(slot)
                    .expect("valid mosaic connection points match");
                if next == cell && ns == strand {
                    break;
                }
                c = next;
                s = ns;
                entry = slot;
                exit = far;
            }
            components.push(walk);
            passages.push(seq);
        }
    }
    for x in &mut crossings {
        x.components = (comp_of[key(x.cell, x.strands.0)], comp_of[key(x.cell, x.strands.1)]);
    }
    LinkDiagram {
        components,
        crossings,
        passages,
    }
}

/// The mosaic with only the listed components of `d` left on it.
pub fn keep_components(m: &Mosaic, d: &LinkDiagram, keep: &[usize]) -> Mosaic {
    let mut kept: Vec<Vec<usize>> = vec![Vec::new(); m.board().len()];
    for &c in keep {
        for s in &d.components[c] {
            kept[s.cell].push(s.strand);
        }
    }
    let mut out = m.clone();
    for (cell, strands) in kept.iter_mut().enumerate() {
        strands.sort();
        strands.dedup();
        let face = m.face(cell);
        if strands.len() == face.arc_count() {
            continue;
        }
        let pairs: Vec<(u8, u8)> = strands.iter().map(|&i| face.strands()[i]).collect();
        let idx = |p: (u8, u8)| face.strands().iter().position(|&x| x == p).unwrap();
        let f = TileFace::build(face.geometry(), &pairs, |a, b| face.is_over(idx(a), idx(b)))
            .expect("subset of a valid face");
        out.set(cell, f);
    }
    out
}

fn pair_slot(i: usize, j: usize) -> usize {
    match (i.min(j), i.max(j)) {
        (0, 1) => 0,
        (0, 2) => 1,
        _ => 2,
    }
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let nxt = self.0[y];
            self.0[y] = r;
            y = nxt;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a] = b;
        }
    }
}

impl LinkDiagram {
    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_knot(&self) -> bool {
        self.components.len() == 1
    }

    /// Component holding strand `strand` of `cell`.
    pub fn component_of(&self, cell: usize, strand: usize) -> Option<usize> {
        self.components
            .iter()
            .position(|w| w.iter().any(|s| s.cell == cell && s.strand == strand))
    }

    /// Edges of the projection graph: consecutive passages along each
    /// component, as pairs of crossing ids.
    fn projection_edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for seq in &self.passages {
            let n = seq.len();
            for k in 0..n {
                edges.push((seq[k].crossing, seq[(k + 1) % n].crossing));
            }
        }
        edges
    }

    /// Crossings at which some circle meets the diagram in that crossing only.
    ///
    /// The four half-edges at each crossing are grouped by connectivity in the
    /// projection graph with that crossing removed; two or more groups make
    /// the crossing nugatory.
    pub fn nugatory_crossings(&self) -> BTreeSet<usize> {
        let n = self.crossings.len();
        let edges = self.projection_edges();
        let mut out = BTreeSet::new();
        for v in 0..n {
            let mut dsu = Dsu::new(n);
            for &(a, b) in &edges {
                if a != v && b != v {
                    dsu.union(a, b);
                }
            }
            // half-edges at v: (edge index, far end); a loop contributes two
            let mut halves: Vec<(usize, Option<usize>)> = Vec::new();
            for (e, &(a, b)) in edges.iter().enumerate() {
                if a == v && b == v {
                    halves.push((e, None));
                    halves.push((e, None));
                } else if a == v {
                    halves.push((e, Some(b)));
                } else if b == v {
                    halves.push((e, Some(a)));
                }
            }
            let mut groups = Dsu::new(halves.len());
            for x in 0..halves.len() {
                for y in x + 1..halves.len() {
                    let joined = match (halves[x].1, halves[y].1) {
                        (None, None) => halves[x].0 == halves[y].0,
                        (Some(p), Some(q)) => dsu.find(p) == dsu.find(q),
                        _ => false,
                    };
                    if joined {
                        groups.union(x, y);
                    }
                }
            }
            let roots: BTreeSet<usize> = (0..halves.len()).map(|x| groups.find(x)).collect();
            if roots.len() >= 2 {
                out.insert(v);
            }
        }
        out
    }

    pub fn is_reduced(&self) -> bool {
        self.nugatory_crossings().is_empty()
    }

    pub fn is_alternating(&self) -> bool {
        self.passages.iter().all(|seq| {
            let n = seq.len();
            (0..n).all(|k| seq[k].over != seq[(k + 1) % n].over)
        })
    }

    /// Whether the projection is one connected piece (crossing-free
    /// components count as separate pieces unless they are the only one).
    pub fn is_connected(&self) -> bool {
        let k = self.components.len();
        if k <= 1 {
            return true;
        }
        let mut dsu = Dsu::new(k);
        for x in &self.crossings {
            dsu.union(x.components.0, x.components.1);
        }
        let r = dsu.find(0);
        (1..k).all(|c| dsu.find(c) == r)
    }

    pub fn certify_crossing_number(&self) -> CrossingNumber {
        let n = self.crossing_count();
        if self.is_alternating() && self.is_connected() && self.is_reduced() {
            CrossingNumber::Certified(n)
        } else {
            CrossingNumber::UpperBound(n)
        }
    }

    /// Signed crossing labels per component: `+k` over, `-k` under, `k = id + 1`.
    pub fn gauss_code(&self) -> Vec<Vec<i64>> {
        self.passages
            .iter()
            .map(|seq| {
                seq.iter()
                    .map(|p| {
                        let k = p.crossing as i64 + 1;
                        if p.over {
                            k
                        } else {
                            -k
                        }
                    })
                    .collect()
            })
            .collect()
    }

    pub fn gauss_text(&self) -> String {
        self.gauss_code()
            .iter()
            .map(|c| c.iter().map(|k| format!("{k:+}")).collect::<Vec<_>>().join(","))
            .collect::<Vec<_>>()
            .join("|")
    }

    pub fn analysis(&self) -> Analysis {
        let nugatory: Vec<usize> = self.nugatory_crossings().into_iter().collect();
        Analysis {
            components: self.component_count(),
            crossings: self.crossing_count(),
            alternating: self.is_alternating(),
            connected: self.is_connected(),
            reduced: nugatory.is_empty(),
            nugatory,
            crossing_number: self.certify_crossing_number(),
            gauss_code: self.gauss_text(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Analysis {
    pub components: usize,
    pub crossings: usize,
    pub alternating: bool,
    pub connected: bool,
    pub reduced: bool,
    pub nugatory: Vec<usize>,
    pub crossing_number: CrossingNumber,
    pub gauss_code: String,
}

pub fn analyze(m: &Mosaic) -> Result<Analysis> {
    Ok(extract(m)?.analysis())
}

/// Crossing id of strands `(i, j)` on `cell`, if they cross.
pub fn crossing_at(d: &LinkDiagram, cell: usize, strands: (usize, usize)) -> Result<usize> {
    let key = (strands.0.min(strands.1), strands.0.max(strands.1));
    d.crossings
        .iter()
        .position(|x| x.cell == cell && x.strands == key)
        .ok_or(Error::NoSuchCrossing(strands.0, strands.1))
}

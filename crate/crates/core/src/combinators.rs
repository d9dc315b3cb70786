//! Block constructions of graph grid diagrams: disjoint union, wedge,
//! joining by a cut edge, connected sum, and adding a split unknot.
//!
//! The first diagram always goes in the upper-left block and the second in
//! the lower-right block. For the vertex-based constructions the chosen
//! vertices are the O* in the bottom-right corner of the first diagram and
//! the O* in the top-left corner of the second. Blocks may have different
//! sizes.
//!
//! By default both inputs must be good. [`PairCheck::CornersOnly`] drops
//! that requirement and only insists on the corner vertices; the block
//! placement realizes the same spatial graph either way, and it lets a
//! 5x5 trefoil take part where the smallest good trefoil is 6x6.

use std::collections::HashMap;

use thiserror::Error;

use crate::diagram::{DiagramError, GridDiagram, Marking, Pos, WeightedDiagram};
use crate::moves::{cyclic_permute_cols, cyclic_permute_rows, replay, Move};

#[derive(Debug, Error)]
pub enum CombinatorError {
    #[error("{which} diagram is not good")]
    NotGood { which: &'static str },
    #[error("{which} diagram has no O* in its {corner} corner")]
    VertexNotAtCorner { which: &'static str, corner: &'static str },
    #[error("vertex weights differ: {w1} vs {w2}")]
    WeightMismatch { w1: i64, w2: i64 },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// Places `d1` and `d2` in a grid of size `size`, with the lower-left cell
/// of `d1` at `(r1, 0)` and the lower-left cell of `d2` at `(0, c2)`.
/// Overlapping cells take `d2`'s marking. X weights go along.
struct Canvas {
    size: usize,
    cells: Vec<Option<Marking>>,
    x_weight: HashMap<Pos, i64>,
}

impl Canvas {
    fn new(size: usize) -> Self {
        Canvas { size, cells: vec![None; size * size], x_weight: HashMap::new() }
    }

    fn place(&mut self, wd: &WeightedDiagram, row0: usize, col0: usize) {
        let d = wd.diagram();
        let n = d.size();
        for r in 0..n {
            for c in 0..n {
                if let Some(m) = d.at(r, c) {
                    let p = Pos::new(r + row0, c + col0);
                    self.set(p, Some(m));
                    if m == Marking::X {
                        self.x_weight.insert(p, wd.weight(Pos::new(r, c)));
                    }
                }
            }
        }
    }

    fn set(&mut self, p: Pos, m: Option<Marking>) {
        self.cells[p.row * self.size + p.col] = m;
    }

    fn finish(self) -> Result<WeightedDiagram, CombinatorError> {
        let d = GridDiagram::from_cells(self.size, self.cells)?;
        Ok(WeightedDiagram::from_x_weights(d, &self.x_weight)?)
    }
}

fn top_left(d: &GridDiagram) -> Pos {
    Pos::new(d.size() - 1, 0)
}

fn bottom_right(d: &GridDiagram) -> Pos {
    Pos::new(0, d.size() - 1)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PairCheck {
    /// Both diagrams good, vertices in the corners.
    #[default]
    Good,
    /// Vertices in the corners only.
    CornersOnly,
}

/// Checks the shape required of a pair fed to a vertex-based construction.
fn check_pair(wd1: &WeightedDiagram, wd2: &WeightedDiagram, check: PairCheck) -> Result<(), CombinatorError> {
    let (d1, d2) = (wd1.diagram(), wd2.diagram());
    if check == PairCheck::Good {
        if !d1.is_good() {
            return Err(CombinatorError::NotGood { which: "first" });
        }
        if !d2.is_good() {
            return Err(CombinatorError::NotGood { which: "second" });
        }
    }
    if d1.cell(bottom_right(d1)) != Some(Marking::Star) {
        return Err(CombinatorError::VertexNotAtCorner { which: "first", corner: "bottom-right" });
    }
    if d2.cell(top_left(d2)) != Some(Marking::Star) {
        return Err(CombinatorError::VertexNotAtCorner { which: "second", corner: "top-left" });
    }
    Ok(())
}

fn corner_vertex_weight(wd: &WeightedDiagram, p: Pos) -> i64 {
    wd.weight(p)
}

/// Block-diagonal disjoint union.
pub fn disjoint_union(wd1: &WeightedDiagram, wd2: &WeightedDiagram) -> Result<WeightedDiagram, CombinatorError> {
    let (n1, n2) = (wd1.size(), wd2.size());
    let mut cv = Canvas::new(n1 + n2);
    cv.place(wd1, n2, 0);
    cv.place(wd2, 0, n1);
    cv.finish()
}

/// Identifies the bottom-right O* of `wd1` with the top-left O* of `wd2` in
/// a grid of size `n1 + n2 - 1`.
pub fn wedge(wd1: &WeightedDiagram, wd2: &WeightedDiagram) -> Result<WeightedDiagram, CombinatorError> {
    wedge_with(wd1, wd2, PairCheck::Good)
}

pub fn wedge_with(wd1: &WeightedDiagram, wd2: &WeightedDiagram, check: PairCheck) -> Result<WeightedDiagram, CombinatorError> {
    check_pair(wd1, wd2, check)?;
    let (n1, n2) = (wd1.size(), wd2.size());
    let mut cv = Canvas::new(n1 + n2 - 1);
    cv.place(wd1, n2 - 1, 0);
    cv.place(wd2, 0, n1 - 1);
    cv.finish()
}

/// Joins the bottom-right O* of `wd1` to the top-left O* of `wd2` by a new
/// edge through a single X in the corner between the blocks. The new edge is
/// a cut edge; balance forces its weight to be 0.
pub fn join_cut_edge(
    wd1: &WeightedDiagram,
    wd2: &WeightedDiagram,
    edge_weight: i64,
) -> Result<WeightedDiagram, CombinatorError> {
    join_cut_edge_with(wd1, wd2, edge_weight, PairCheck::Good)
}

pub fn join_cut_edge_with(
    wd1: &WeightedDiagram,
    wd2: &WeightedDiagram,
    edge_weight: i64,
    check: PairCheck,
) -> Result<WeightedDiagram, CombinatorError> {
    check_pair(wd1, wd2, check)?;
    let (n1, n2) = (wd1.size(), wd2.size());
    let mut cv = Canvas::new(n1 + n2);
    cv.place(wd1, n2, 0);
    cv.place(wd2, 0, n1);
    let x = Pos::new(n2, n1);
    cv.set(x, Some(Marking::X));
    cv.x_weight.insert(x, edge_weight);
    cv.finish()
}

/// Connected sum at the bottom-right O* of `wd1` and the top-left O* of
/// `wd2`. Same blocks as [`join_cut_edge`], except that the 2x2 block at the
/// junction carries two O*'s on its other diagonal and no X.
pub fn connected_sum(wd1: &WeightedDiagram, wd2: &WeightedDiagram) -> Result<WeightedDiagram, CombinatorError> {
    connected_sum_with(wd1, wd2, PairCheck::Good)
}

pub fn connected_sum_with(
    wd1: &WeightedDiagram,
    wd2: &WeightedDiagram,
    check: PairCheck,
) -> Result<WeightedDiagram, CombinatorError> {
    check_pair(wd1, wd2, check)?;
    let w1 = corner_vertex_weight(wd1, bottom_right(wd1.diagram()));
    let w2 = corner_vertex_weight(wd2, top_left(wd2.diagram()));
    if w1 != w2 {
        return Err(CombinatorError::WeightMismatch { w1, w2 });
    }
    let (n1, n2) = (wd1.size(), wd2.size());
    let mut cv = Canvas::new(n1 + n2);
    cv.place(wd1, n2, 0);
    cv.place(wd2, 0, n1);
    cv.set(Pos::new(n2, n1 - 1), None);
    cv.set(Pos::new(n2 - 1, n1), None);
    cv.set(Pos::new(n2, n1), Some(Marking::Star));
    cv.set(Pos::new(n2 - 1, n1 - 1), Some(Marking::Star));
    cv.finish()
}

/// The one-vertex unknot on a 2x2 grid, weight `w`.
pub fn unknot_vertex(w: i64) -> WeightedDiagram {
    let d = GridDiagram::new(2, &[(1, 0, false), (0, 1, true)], &[(1, 1), (0, 0)]).expect("valid unknot");
    WeightedDiagram::new(d, &[w]).expect("a loop is balanced")
}

/// `f` together with a split one-vertex unknot of weight 1.
pub fn add_unknot(wd: &WeightedDiagram) -> Result<WeightedDiagram, CombinatorError> {
    disjoint_union(wd, &unknot_vertex(1))
}

/// Searches the cyclic permutations of `d` for a good diagram, optionally
/// also demanding an O* in the bottom-right (`want_star = Some(true)`) or
/// top-left (`Some(false)`) corner.
pub fn make_good(d: &GridDiagram, want_star: Option<bool>) -> Result<GridDiagram, CombinatorError> {
    let n = d.size();
    for k in 0..n {
        let rows = cyclic_permute_rows(d, k);
        for l in 0..n {
            let e = cyclic_permute_cols(&rows, l);
            if !e.is_good() {
                continue;
            }
            let ok = match want_star {
                None => true,
                Some(true) => e.cell(bottom_right(&e)) == Some(Marking::Star),
                Some(false) => e.cell(top_left(&e)) == Some(Marking::Star),
            };
            if ok {
                return Ok(e);
            }
        }
    }
    Err(CombinatorError::NotGood { which: "input" })
}

/// [`make_good`] for a weighted diagram: the rotation carries the edge
/// weights along.
pub fn make_good_weighted(wd: &WeightedDiagram, want_star: Option<bool>) -> Result<WeightedDiagram, CombinatorError> {
    let n = wd.size();
    for k in 0..n {
        for l in 0..n {
            let e = replay(wd, &[Move::CyclicRow { k }, Move::CyclicCol { k: l }]).expect("cyclic moves are legal");
            let d = e.diagram();
            let ok = d.is_good()
                && match want_star {
                    None => true,
                    Some(true) => d.cell(bottom_right(d)) == Some(Marking::Star),
                    Some(false) => d.cell(top_left(d)) == Some(Marking::Star),
                };
            if ok {
                return Ok(e);
            }
        }
    }
    Err(CombinatorError::NotGood { which: "input" })
}

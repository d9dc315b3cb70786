//! Graph grid moves: cyclic permutation, commutation′ and
//! (de)stabilization′. Weighted variants carry each X's weight along with
//! the marking, so the coloring follows the diagram through a move sequence.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{DiagramError, GridDiagram, Marking, Pos, WeightedDiagram};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum Move {
    /// Row `r` goes to row `r + k` (mod n).
    CyclicRow { k: usize },
    /// Column `c` goes to column `c + k` (mod n).
    CyclicCol { k: usize },
    /// Exchange columns `i` and `i + 1`.
    CommuteCols { i: usize },
    /// Exchange rows `i` and `i + 1`.
    CommuteRows { i: usize },
    /// Stabilize at the X in this cell.
    Stabilize { row: usize, col: usize },
    /// Undo a stabilization whose new O sits in this cell.
    Destabilize { row: usize, col: usize },
}

#[derive(Debug, Error)]
pub enum MoveError {
    #[error("illegal move {0:?}")]
    IllegalMove(Move),
    #[error("no X marking at ({row}, {col})")]
    NotAnX { row: usize, col: usize },
    #[error("no destabilization pattern at ({row}, {col})")]
    PatternNotFound { row: usize, col: usize },
    #[error("step {step}: {source}")]
    AtStep {
        step: usize,
        #[source]
        source: Box<MoveError>,
    },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// Cells with the weight each marking carries; stars carry 0 since their
/// weight is recomputed from the edges.
#[derive(Clone, Debug)]
struct Tagged {
    n: usize,
    cells: Vec<Option<(Marking, i64)>>,
}

impl Tagged {
    fn from_weighted(wd: &WeightedDiagram) -> Self {
        let d = wd.diagram();
        let n = d.size();
        let cells = (0..n * n)
            .map(|i| {
                let p = Pos::new(i / n, i % n);
                d.cell(p).map(|m| (m, if m == Marking::Star { 0 } else { wd.weight(p) }))
            })
            .collect();
        Tagged { n, cells }
    }

    fn from_diagram(d: &GridDiagram) -> Self {
        Tagged { n: d.size(), cells: d.cells().iter().map(|c| c.map(|m| (m, 1))).collect() }
    }

    fn get(&self, r: usize, c: usize) -> Option<(Marking, i64)> {
        self.cells[r * self.n + c]
    }

    fn diagram(&self) -> Result<GridDiagram, DiagramError> {
        GridDiagram::from_cells(self.n, self.cells.iter().map(|c| c.map(|(m, _)| m)).collect())
    }

    fn weighted(&self) -> Result<WeightedDiagram, DiagramError> {
        let n = self.n;
        let xw: HashMap<Pos, i64> = (0..n * n)
            .filter_map(|i| match self.cells[i] {
                Some((Marking::X, w)) => Some((Pos::new(i / n, i % n), w)),
                _ => None,
            })
            .collect();
        WeightedDiagram::from_x_weights(self.diagram()?, &xw)
    }

    fn remap(&self, new_n: usize, f: impl Fn(usize, usize) -> (usize, usize)) -> Tagged {
        let mut cells = vec![None; new_n * new_n];
        for r in 0..self.n {
            for c in 0..self.n {
                if let Some(m) = self.get(r, c) {
                    let (nr, nc) = f(r, c);
                    cells[nr * new_n + nc] = Some(m);
                }
            }
        }
        Tagged { n: new_n, cells }
    }

    fn transpose(&self) -> Tagged {
        self.remap(self.n, |r, c| (c, r))
    }

    fn apply(&self, mv: Move) -> Result<Tagged, MoveError> {
        let n = self.n;
        match mv {
            Move::CyclicRow { k } => Ok(self.remap(n, |r, c| ((r + k) % n, c))),
            Move::CyclicCol { k } => Ok(self.remap(n, |r, c| (r, (c + k) % n))),
            Move::CommuteCols { i } => {
                if i + 1 >= n || !self.commutation_legal(i) {
                    return Err(MoveError::IllegalMove(mv));
                }
                Ok(self.remap(n, |r, c| (r, swap_index(c, i))))
            }
            Move::CommuteRows { i } => {
                let t = self.transpose();
                if i + 1 >= n || !t.commutation_legal(i) {
                    return Err(MoveError::IllegalMove(mv));
                }
                Ok(self.remap(n, |r, c| (swap_index(r, i), c)))
            }
            Move::Stabilize { row, col } => {
                if row >= n || col >= n {
                    return Err(MoveError::NotAnX { row, col });
                }
                let Some((Marking::X, w)) = self.get(row, col) else {
                    return Err(MoveError::NotAnX { row, col });
                };
                // new row row+1 and new column col+1
                let mut t = self.remap(n + 1, |r, c| (r + usize::from(r > row), c + usize::from(c > col)));
                let m = n + 1;
                t.cells[row * m + col] = None;
                t.cells[row * m + col + 1] = Some((Marking::X, w));
                t.cells[(row + 1) * m + col + 1] = Some((Marking::O, w));
                t.cells[(row + 1) * m + col] = Some((Marking::X, w));
                Ok(t)
            }
            Move::Destabilize { row, col } => {
                let not_found = MoveError::PatternNotFound { row, col };
                if row == 0 || col == 0 || row >= n || col >= n || n < 2 {
                    return Err(not_found);
                }
                let is = |r: usize, c: usize, m: Marking| self.get(r, c).is_some_and(|(k, _)| k == m);
                let row_count = (0..n).filter(|&c| self.get(row, c).is_some()).count();
                let col_count = (0..n).filter(|&r| self.get(r, col).is_some()).count();
                if !(is(row, col, Marking::O)
                    && is(row, col - 1, Marking::X)
                    && is(row - 1, col, Marking::X)
                    && row_count == 2
                    && col_count == 2
                    && self.get(row - 1, col - 1).is_none())
                {
                    return Err(not_found);
                }
                let w = self.get(row - 1, col).map_or(1, |(_, w)| w);
                let mut t = self.clone();
                t.cells[row * n + col] = None;
                t.cells[row * n + col - 1] = None;
                t.cells[(row - 1) * n + col] = None;
                t.cells[(row - 1) * n + col - 1] = Some((Marking::X, w));
                let t = t.remap_removing(row, col);
                t.diagram().map_err(|_| not_found)?;
                Ok(t)
            }
        }
    }

    fn remap_removing(&self, row: usize, col: usize) -> Tagged {
        let m = self.n - 1;
        let mut cells = vec![None; m * m];
        for r in 0..self.n {
            for c in 0..self.n {
                if r == row || c == col {
                    continue;
                }
                if let Some(x) = self.get(r, c) {
                    let nr = r - usize::from(r > row);
                    let nc = c - usize::from(c > col);
                    cells[nr * m + nc] = Some(x);
                }
            }
        }
        Tagged { n: m, cells }
    }

    fn marked_rows(&self, col: usize) -> Vec<usize> {
        (0..self.n).filter(|&r| self.get(r, col).is_some()).collect()
    }

    /// Whether two complementary arcs of the vertical circle, cut at integer
    /// heights `h1 != h2`, hold the markings of column `i` and of column
    /// `i + 1` respectively.
    fn commutation_legal(&self, i: usize) -> bool {
        let n = self.n;
        let a = self.marked_rows(i);
        let b = self.marked_rows(i + 1);
        // arc from height h1 up to h2 covers rows h1, .., h2 - 1 (mod n)
        let in_arc = |r: usize, h1: usize, h2: usize| (r + n - h1) % n < (h2 + n - h1) % n;
        (0..n).any(|h1| {
            (0..n).any(|h2| h1 != h2 && a.iter().all(|&r| in_arc(r, h1, h2)) && b.iter().all(|&r| in_arc(r, h2, h1)))
        })
    }
}

fn swap_index(x: usize, i: usize) -> usize {
    if x == i {
        i + 1
    } else if x == i + 1 {
        i
    } else {
        x
    }
}

pub fn commutation_legal(d: &GridDiagram, i: usize) -> bool {
    i + 1 < d.size() && Tagged::from_diagram(d).commutation_legal(i)
}

pub fn row_commutation_legal(d: &GridDiagram, i: usize) -> bool {
    i + 1 < d.size() && Tagged::from_diagram(d).transpose().commutation_legal(i)
}

pub fn apply(d: &GridDiagram, mv: Move) -> Result<GridDiagram, MoveError> {
    Ok(Tagged::from_diagram(d).apply(mv)?.diagram()?)
}

pub fn apply_weighted(wd: &WeightedDiagram, mv: Move) -> Result<WeightedDiagram, MoveError> {
    Ok(Tagged::from_weighted(wd).apply(mv)?.weighted()?)
}

/// Replays a move log, reporting the index of the first failing step.
pub fn replay(wd: &WeightedDiagram, log: &[Move]) -> Result<WeightedDiagram, MoveError> {
    let mut t = Tagged::from_weighted(wd);
    for (step, &mv) in log.iter().enumerate() {
        t = t.apply(mv).map_err(|e| MoveError::AtStep { step, source: Box::new(e) })?;
    }
    Ok(t.weighted()?)
}

pub fn cyclic_permute_rows(d: &GridDiagram, k: usize) -> GridDiagram {
    apply(d, Move::CyclicRow { k }).expect("cyclic permutation is always legal")
}

pub fn cyclic_permute_cols(d: &GridDiagram, k: usize) -> GridDiagram {
    apply(d, Move::CyclicCol { k }).expect("cyclic permutation is always legal")
}

pub fn commute(d: &GridDiagram, i: usize) -> Result<GridDiagram, MoveError> {
    apply(d, Move::CommuteCols { i })
}

pub fn stabilize(d: &GridDiagram, x: Pos) -> Result<GridDiagram, MoveError> {
    apply(d, Move::Stabilize { row: x.row, col: x.col })
}

pub fn destabilize(d: &GridDiagram, o: Pos) -> Result<GridDiagram, MoveError> {
    apply(d, Move::Destabilize { row: o.row, col: o.col })
}

/// Every move that is legal on `d`, with stabilizations only below `max_n`.
pub fn legal_moves(d: &GridDiagram, max_n: usize) -> Vec<Move> {
    let n = d.size();
    let mut out = Vec::new();
    for k in 1..n {
        out.push(Move::CyclicRow { k });
        out.push(Move::CyclicCol { k });
    }
    let t = Tagged::from_diagram(d);
    let tt = t.transpose();
    for i in 0..n.saturating_sub(1) {
        if t.commutation_legal(i) {
            out.push(Move::CommuteCols { i });
        }
        if tt.commutation_legal(i) {
            out.push(Move::CommuteRows { i });
        }
    }
    if n < max_n {
        out.extend(d.x_markings().into_iter().map(|p| Move::Stabilize { row: p.row, col: p.col }));
    }
    for p in d.plain_os() {
        let mv = Move::Destabilize { row: p.row, col: p.col };
        if t.apply(mv).is_ok() {
            out.push(mv);
        }
    }
    out
}

/// A reproducible random walk of legal moves, never growing past `max_n`.
pub fn random_move_walk(
    wd: &WeightedDiagram,
    steps: usize,
    seed: u64,
    max_n: usize,
) -> Result<(WeightedDiagram, Vec<Move>), MoveError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = wd.clone();
    let mut log = Vec::with_capacity(steps);
    for _ in 0..steps {
        let moves = legal_moves(cur.diagram(), max_n);
        // favour the moves that change the diagram in interesting ways
        let interesting: Vec<Move> =
            moves.iter().copied().filter(|m| !matches!(m, Move::CyclicRow { .. } | Move::CyclicCol { .. })).collect();
        let pool = if !interesting.is_empty() && rng.gen_bool(0.7) { &interesting } else { &moves };
        let Some(&mv) = pool.choose(&mut rng) else { break };
        cur = apply_weighted(&cur, mv)?;
        log.push(mv);
    }
    Ok((cur, log))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{trefoil, unknot_chain};

    #[test]
    fn cyclic_identity_cases() {
        let d = trefoil();
        assert_eq!(cyclic_permute_rows(&d, 0), d);
        assert_eq!(cyclic_permute_cols(&d, 5), d);
        assert_eq!(cyclic_permute_cols(&cyclic_permute_cols(&d, 2), 3), d);
    }

    fn columns(n: usize, a: &[usize], b: &[usize]) -> Tagged {
        let mut cells = vec![None; n * n];
        for &r in a {
            cells[r * n] = Some((Marking::X, 1));
        }
        for &r in b {
            cells[r * n + 1] = Some((Marking::X, 1));
        }
        Tagged { n, cells }
    }

    #[test]
    fn commutation_cases() {
        assert!(columns(4, &[0, 1], &[2, 3]).commutation_legal(0));
        // nested in the plane, disjoint on the circle
        assert!(columns(4, &[0, 3], &[1, 2]).commutation_legal(0));
        assert!(!columns(4, &[0, 2], &[1, 3]).commutation_legal(0));
        assert!(!columns(4, &[1, 2], &[2, 3]).commutation_legal(0));
        assert!(columns(3, &[1], &[2]).commutation_legal(0));
        // columns 1 and 2 hold rows {0,1} and {1,2}
        assert!(!commutation_legal(&unknot_chain(4), 1));
    }

    #[test]
    fn commute_is_an_involution() {
        let base = trefoil();
        let mut found = 0;
        for x in base.x_markings() {
            let d = stabilize(&base, x).unwrap();
            for i in 0..d.size() - 1 {
                if !commutation_legal(&d, i) {
                    assert!(matches!(commute(&d, i), Err(MoveError::IllegalMove(_))));
                    continue;
                }
                found += 1;
                let c = commute(&d, i).unwrap();
                assert_eq!(commute(&c, i).unwrap(), d);
                assert_eq!(c.trace().unwrap().shape(), d.trace().unwrap().shape());
            }
        }
        assert!(found > 0);
    }

    #[test]
    fn stabilize_then_destabilize() {
        let d = trefoil();
        for x in d.x_markings() {
            let s = stabilize(&d, x).unwrap();
            assert_eq!(s.size(), 6);
            assert_eq!(s.state_count(), 720);
            let o = Pos::new(x.row + 1, x.col + 1);
            assert_eq!(s.at(o.row, o.col), Some(Marking::O));
            assert_eq!(destabilize(&s, o).unwrap(), d);
            assert_eq!(s.trace().unwrap().shape(), d.trace().unwrap().shape());
        }
        assert!(matches!(destabilize(&d, Pos::new(2, 2)), Err(MoveError::PatternNotFound { .. })));
        assert!(matches!(stabilize(&d, Pos::new(0, 0)), Err(MoveError::NotAnX { .. })));
    }

    #[test]
    fn stabilizations_at_distinct_xs_commute() {
        let d = trefoil();
        // X's at (0,2) and (3,0): distinct rows and columns
        let (p, q) = (Pos::new(0, 2), Pos::new(3, 0));
        let pq = stabilize(&stabilize(&d, p).unwrap(), Pos::new(q.row + 1, q.col)).unwrap();
        let qp = stabilize(&stabilize(&d, q).unwrap(), Pos::new(p.row, p.col + 1)).unwrap();
        assert_eq!(pq, qp);
    }

    #[test]
    fn walks_are_reproducible_and_valid() {
        let wd = WeightedDiagram::unit(trefoil()).unwrap();
        let (a, la) = random_move_walk(&wd, 20, 11, 7).unwrap();
        let (b, lb) = random_move_walk(&wd, 20, 11, 7).unwrap();
        assert_eq!(la, lb);
        assert_eq!(a, b);
        assert!(a.size() <= 7);
        assert_eq!(replay(&wd, &la).unwrap(), a);
        let json = serde_json::to_string(&la).unwrap();
        let back: Vec<Move> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, la);
    }

    #[test]
    fn weights_follow_markings() {
        let d = GridDiagram::parse("n=2\n* X\nX *\n").unwrap();
        let wd = WeightedDiagram::new(d, &[3, 3]).unwrap();
        let s = apply_weighted(&wd, Move::Stabilize { row: 0, col: 0 }).unwrap();
        let mut ws = s.edge_weights().to_vec();
        ws.sort();
        assert_eq!(ws, vec![3, 3]);
        assert_eq!(s.plain_o_weights(), vec![3]);
    }
}

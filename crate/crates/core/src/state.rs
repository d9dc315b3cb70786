//! Grid states and their Maslov and Alexander gradings.
//!
//! A state is stored as `perm[c] = r`: the point of the state on the vertical
//! circle `c` lies on the horizontal circle `r`. All planar coordinates are
//! doubled so that marking centers `(c + 1/2, r + 1/2)` stay integral.

use serde::{Deserialize, Serialize};

use crate::diagram::{GridDiagram, Marking, PlanarRealization, Pos, WeightedDiagram};

/// Largest grid size whose states can be indexed by `u32`.
pub const MAX_INDEXED_SIZE: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    perm: Vec<u8>,
}

impl State {
    pub fn new(perm: Vec<u8>) -> Self {
        debug_assert!(is_permutation(&perm), "not a permutation: {perm:?}");
        State { perm }
    }

    pub fn identity(n: usize) -> Self {
        State { perm: (0..n as u8).collect() }
    }

    pub fn perm(&self) -> &[u8] {
        &self.perm
    }

    pub fn size(&self) -> usize {
        self.perm.len()
    }

    /// Row of the point on vertical circle `col`.
    pub fn row_at(&self, col: usize) -> usize {
        self.perm[col] as usize
    }

    /// Position of this state in the lexicographic order of permutations.
    pub fn index(&self) -> u64 {
        perm_rank(&self.perm)
    }

    /// Lattice points `(col, row)` of the state.
    pub fn points(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.perm.iter().enumerate().map(|(c, &r)| (c, r as usize))
    }

    /// Number of points shared with `other`.
    pub fn common_points(&self, other: &State) -> usize {
        self.perm.iter().zip(&other.perm).filter(|(a, b)| a == b).count()
    }
}

fn is_permutation(p: &[u8]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&v| (v as usize) < p.len() && !std::mem::replace(&mut seen[v as usize], true))
}

/// All `n!` states in lexicographic order.
pub fn enumerate_states(d: &GridDiagram) -> StateIter {
    StateIter::new(d.size())
}

pub struct StateIter {
    next: Option<Vec<u8>>,
}

impl StateIter {
    pub fn new(n: usize) -> Self {
        StateIter { next: Some((0..n as u8).collect()) }
    }
}

impl Iterator for StateIter {
    type Item = State;

    fn next(&mut self) -> Option<State> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        if next_permutation(&mut succ) {
            self.next = Some(succ);
        }
        Some(State { perm: cur })
    }
}

/// Advances to the lexicographic successor; false when `p` was the last one.
pub fn next_permutation(p: &mut [u8]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Lehmer-code rank of a permutation in lexicographic order.
pub fn perm_rank(p: &[u8]) -> u64 {
    let n = p.len();
    let mut rank = 0u64;
    for i in 0..n {
        let smaller_after = p[i + 1..].iter().filter(|&&v| v < p[i]).count() as u64;
        rank = rank * (n - i) as u64 + smaller_after;
    }
    rank
}

pub fn perm_unrank(n: usize, mut rank: u64) -> Vec<u8> {
    let mut digits = vec![0u64; n];
    for i in (0..n).rev() {
        let base = (n - i) as u64;
        digits[i] = rank % base;
        rank /= base;
    }
    let mut pool: Vec<u8> = (0..n as u8).collect();
    digits.iter().map(|&d| pool.remove(d as usize)).collect()
}

/// A point of the plane in doubled coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Point2 {
    pub x2: i64,
    pub y2: i64,
}

impl Point2 {
    pub fn lattice(x: i64, y: i64) -> Self {
        Point2 { x2: 2 * x, y2: 2 * y }
    }

    /// Center of the cell `[x, x+1] x [y, y+1]`.
    pub fn center(x: i64, y: i64) -> Self {
        Point2 { x2: 2 * x + 1, y2: 2 * y + 1 }
    }

    fn below_left_of(self, other: Point2) -> bool {
        self.x2 < other.x2 && self.y2 < other.y2
    }
}

/// A finite formal sum of points with integer coefficients.
pub type FormalSum = [(Point2, i64)];

/// `I(A, B)`: number of pairs `a < b` (both coordinates strictly smaller),
/// extended bilinearly to formal sums.
pub fn i_pairing(a: &FormalSum, b: &FormalSum) -> i64 {
    let mut total = 0;
    for &(pa, ca) in a {
        for &(pb, cb) in b {
            if pa.below_left_of(pb) {
                total += ca * cb;
            }
        }
    }
    total
}

/// `2 J(A, B) = I(A, B) + I(B, A)`.
pub fn j_pairing2(a: &FormalSum, b: &FormalSum) -> i64 {
    i_pairing(a, b) + i_pairing(b, a)
}

fn state_sum(pr: &PlanarRealization<'_>, x: &State) -> Vec<(Point2, i64)> {
    x.points().map(|(c, r)| (Point2::lattice(pr.planar_col(c) as i64, pr.planar_row(r) as i64), 1)).collect()
}

fn marking_point(pr: &PlanarRealization<'_>, p: Pos) -> Point2 {
    Point2::center(pr.planar_col(p.col) as i64, pr.planar_row(p.row) as i64)
}

/// `M(x) = J(x - O, x - O) + 1`, with `O` the O-type markings.
pub fn maslov(pr: &PlanarRealization<'_>, x: &State) -> i64 {
    let d = pr.diagram;
    let o_set: Vec<Pos> = d.o_markings().into_iter().map(|(r, c, _)| Pos::new(r, c)).collect();
    maslov_with_os(pr, &o_set, x)
}

/// Maslov grading against an explicit set of O-type markings. The `C_n`
/// fixture uses its single O* here.
pub fn maslov_with_os(pr: &PlanarRealization<'_>, o_set: &[Pos], x: &State) -> i64 {
    let mut sum = state_sum(pr, x);
    sum.extend(o_set.iter().map(|&p| (marking_point(pr, p), -1)));
    let j2 = j_pairing2(&sum, &sum);
    debug_assert_eq!(j2 % 2, 0);
    j2 / 2 + 1
}

/// Doubled Alexander grading `2 A(x) = 2 J(x, sum w(X) X - sum w(O) O)`.
pub fn alexander2(pr: &PlanarRealization<'_>, wd: &WeightedDiagram, x: &State) -> i64 {
    assert!(std::ptr::eq(pr.diagram, wd.diagram()) || pr.diagram == wd.diagram());
    let d = wd.diagram();
    let n = d.size();
    let mut marks = Vec::new();
    for r in 0..n {
        for c in 0..n {
            let p = Pos::new(r, c);
            match d.cell(p) {
                Some(Marking::X) => marks.push((marking_point(pr, p), wd.weight(p))),
                Some(_) => marks.push((marking_point(pr, p), -wd.weight(p))),
                None => {}
            }
        }
    }
    j_pairing2(&state_sum(pr, x), &marks)
}

/// Tabulated gradings for the canonical realization, `O(n)` per state.
///
/// `maslov = I(x, x) - sum_c o_pair[c][x_c] + I(O, O) + 1` and
/// `alex2 = sum_c a_pair[c][x_c]`, where the tables hold the pairing of a
/// single lattice point with the marking sums.
#[derive(Clone, Debug)]
pub struct GradingTable {
    n: usize,
    o_pair: Vec<i64>,
    a_pair: Vec<i64>,
    o_self: i64,
}

impl GradingTable {
    pub fn for_weighted(wd: &WeightedDiagram) -> Self {
        let d = wd.diagram();
        let o_set: Vec<Pos> = d.o_markings().into_iter().map(|(r, c, _)| Pos::new(r, c)).collect();
        let mut signed = Vec::new();
        for p in d.x_markings() {
            signed.push((p, wd.weight(p)));
        }
        for &p in &o_set {
            signed.push((p, -wd.weight(p)));
        }
        Self::build(d.size(), &o_set, &signed)
    }

    /// Maslov-only table; Alexander gradings are all zero.
    pub fn maslov_only(n: usize, o_set: &[Pos]) -> Self {
        Self::build(n, o_set, &[])
    }

    fn build(n: usize, o_set: &[Pos], signed: &[(Pos, i64)]) -> Self {
        // lattice point (c, r) < marking (mc, mr) iff c <= mc and r <= mr;
        // marking < point iff mc < c and mr < r
        let pair = |c: usize, r: usize, m: Pos| -> i64 {
            i64::from(c <= m.col && r <= m.row) + i64::from(m.col < c && m.row < r)
        };
        let mut o_pair = vec![0; n * n];
        let mut a_pair = vec![0; n * n];
        for c in 0..n {
            for r in 0..n {
                o_pair[c * n + r] = o_set.iter().map(|&m| pair(c, r, m)).sum();
                a_pair[c * n + r] = signed.iter().map(|&(m, w)| w * pair(c, r, m)).sum();
            }
        }
        let mut o_self = 0;
        for a in o_set {
            for b in o_set {
                if a.col < b.col && a.row < b.row {
                    o_self += 1;
                }
            }
        }
        GradingTable { n, o_pair, a_pair, o_self }
    }

    pub fn maslov(&self, perm: &[u8]) -> i64 {
        let n = self.n;
        let mut non_inv = 0i64;
        for i in 0..n {
            for j in i + 1..n {
                non_inv += i64::from(perm[i] < perm[j]);
            }
        }
        let cross: i64 = perm.iter().enumerate().map(|(c, &r)| self.o_pair[c * n + r as usize]).sum();
        non_inv - cross + self.o_self + 1
    }

    pub fn alex2(&self, perm: &[u8]) -> i64 {
        let n = self.n;
        perm.iter().enumerate().map(|(c, &r)| self.a_pair[c * n + r as usize]).sum()
    }
}

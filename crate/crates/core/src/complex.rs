//! Empty rectangles on the torus and the bigraded tilde complex.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{FixtureCn, GridDiagram, Marking, Pos, WeightedDiagram};
use crate::state::{factorial, next_permutation, perm_unrank, GradingTable, State, MAX_INDEXED_SIZE};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ComplexError {
    #[error("grid size {0} is too large (at most {MAX_INDEXED_SIZE})")]
    TooLarge(usize),
    #[error("rectangle from state {from} to state {to} changes the grading by ({dm}, {da2}) instead of (-1, 0)")]
    Grading { from: u64, to: u64, dm: i64, da2: i64 },
    #[error("boundary does not square to zero at state {0}")]
    NotAComplex(u64),
}

/// `(maslov, alex2)`; the Alexander grading is stored doubled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Bigrading {
    pub maslov: i64,
    pub alex2: i64,
}

impl Bigrading {
    pub fn new(maslov: i64, alex2: i64) -> Self {
        Bigrading { maslov, alex2 }
    }
}

/// An embedded rectangle on the torus: cells in columns `left .. left+width`
/// and rows `bottom .. bottom+height`, indices taken mod `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rectangle {
    pub left: usize,
    pub width: usize,
    pub bottom: usize,
    pub height: usize,
}

impl Rectangle {
    pub fn contains_cell(&self, n: usize, p: Pos) -> bool {
        (p.col + n - self.left) % n < self.width && (p.row + n - self.bottom) % n < self.height
    }

    pub fn cells(&self, n: usize) -> impl Iterator<Item = Pos> + '_ {
        (0..self.height)
            .flat_map(move |dr| (0..self.width).map(move |dc| Pos::new((self.bottom + dr) % n, (self.left + dc) % n)))
    }

    /// Whether the lattice point `(col, row)` lies strictly inside.
    pub fn contains_point_strictly(&self, n: usize, col: usize, row: usize) -> bool {
        let dc = (col + n - self.left) % n;
        let dr = (row + n - self.bottom) % n;
        dc > 0 && dc < self.width && dr > 0 && dr < self.height
    }

    /// The rectangle with the other horizontal and vertical spans; together
    /// with `self` it tiles the torus minus the two annuli through its
    /// corners.
    pub fn complement(&self, n: usize) -> Rectangle {
        Rectangle {
            left: (self.left + self.width) % n,
            width: n - self.width,
            bottom: (self.bottom + self.height) % n,
            height: n - self.height,
        }
    }
}

/// The rectangle with lower-left corner on the vertical circle `a` and
/// upper-right corner on `b`, both at points of `x`. It goes from `x` to the
/// state with the rows at `a` and `b` exchanged.
pub fn rectangle_at(x: &State, a: usize, b: usize) -> Rectangle {
    let n = x.size();
    Rectangle {
        left: a,
        width: (b + n - a) % n,
        bottom: x.row_at(a),
        height: (x.row_at(b) + n - x.row_at(a)) % n,
    }
}

fn swapped(x: &State, a: usize, b: usize) -> State {
    let mut p = x.perm().to_vec();
    p.swap(a, b);
    State::new(p)
}

/// The rectangles from `x` to `y`, empty or not: two when the states share
/// exactly `n - 2` points, none otherwise.
pub fn rectangles_between(x: &State, y: &State) -> Vec<Rectangle> {
    let n = x.size();
    let moved: Vec<usize> = (0..n).filter(|&c| x.row_at(c) != y.row_at(c)).collect();
    if moved.len() != 2 {
        return Vec::new();
    }
    let (a, b) = (moved[0], moved[1]);
    vec![rectangle_at(x, a, b), rectangle_at(x, b, a)]
}

/// A rectangle from `x` together with its target and the markings it covers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnotatedRect {
    pub target: State,
    pub rect: Rectangle,
    pub o_content: Vec<Pos>,
    pub x_content: Vec<Pos>,
    pub star_content: Vec<Pos>,
}

pub fn is_empty_rectangle(x: &State, r: &Rectangle) -> bool {
    let n = x.size();
    !x.points().any(|(c, row)| r.contains_point_strictly(n, c, row))
}

/// Every empty rectangle starting at `x`, annotated with its markings.
pub fn empty_rectangles_from(d: &GridDiagram, x: &State) -> Vec<AnnotatedRect> {
    let n = d.size();
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let rect = rectangle_at(x, a, b);
            if !is_empty_rectangle(x, &rect) {
                continue;
            }
            let mut ann = AnnotatedRect {
                target: swapped(x, a, b),
                rect,
                o_content: Vec::new(),
                x_content: Vec::new(),
                star_content: Vec::new(),
            };
            for p in rect.cells(n) {
                match d.cell(p) {
                    Some(Marking::O) => ann.o_content.push(p),
                    Some(Marking::X) => ann.x_content.push(p),
                    Some(Marking::Star) => ann.star_content.push(p),
                    None => {}
                }
            }
            out.push(ann);
        }
    }
    out
}

/// Rectangles counted by the hat differential avoid every X and O*. For a
/// counted rectangle this returns the plain O's it covers, which give the
/// exponents of the `U` variables; `None` means the rectangle is not counted.
pub fn hat_rectangle_filter(r: &AnnotatedRect) -> Option<&[Pos]> {
    (r.x_content.is_empty() && r.star_content.is_empty()).then_some(r.o_content.as_slice())
}

/// Rectangles counted by the tilde differential avoid every marking.
pub fn tilde_rectangle_filter(r: &AnnotatedRect) -> bool {
    r.x_content.is_empty() && r.star_content.is_empty() && r.o_content.is_empty()
}

/// `table[col * n + base]` is the smallest upward offset `(row - base) mod n`
/// of a blocked cell in `col`, or `n` when the column has none.
fn blocked_offsets(n: usize, blocked: &[Pos]) -> Vec<u8> {
    let mut table = vec![n as u8; n * n];
    for p in blocked {
        for base in 0..n {
            let off = ((p.row + n - base) % n) as u8;
            let slot = &mut table[p.col * n + base];
            *slot = (*slot).min(off);
        }
    }
    table
}

/// Calls `f(a, b)` for every empty rectangle from `perm` avoiding blocked
/// cells, where `a` and `b` are its left and right vertical circles.
#[inline]
fn for_each_free_rectangle(n: usize, perm: &[u8], offsets: &[u8], mut f: impl FnMut(usize, usize)) {
    for a in 0..n {
        let base = perm[a] as usize;
        let mut min_point = n;
        let mut min_mark = n;
        for step in 1..n {
            let prev = (a + step - 1) % n;
            min_mark = min_mark.min(offsets[prev * n + base] as usize);
            if min_mark == 0 {
                break;
            }
            let b = (a + step) % n;
            let h = (perm[b] as usize + n - base) % n;
            if h < min_point && h <= min_mark {
                f(a, b);
            }
            min_point = min_point.min(h);
            if min_point == 1 {
                break;
            }
        }
    }
}

/// Lexicographic rank of `perm` with positions `i < j` exchanged, given the
/// rank and Lehmer digits of `perm`.
fn swapped_rank(perm: &[u8], lehmer: &[u8], rank: u64, fact: &[u64], i: usize, j: usize) -> u64 {
    let n = perm.len();
    let (u, v) = (perm[i], perm[j]);
    let mut r = rank as i64;
    let w = |k: usize| fact[n - 1 - k] as i64;
    // digit i: smaller entries after i, with v now at i and u at j
    let mut li = 0i64;
    for k in i + 1..n {
        let pk = if k == j { u } else { perm[k] };
        li += i64::from(pk < v);
    }
    r += (li - lehmer[i] as i64) * w(i);
    for k in i + 1..j {
        let delta = i64::from(u < perm[k]) - i64::from(v < perm[k]);
        r += delta * w(k);
    }
    let lj = perm[j + 1..].iter().filter(|&&p| p < u).count() as i64;
    r += (lj - lehmer[j] as i64) * w(j);
    r as u64
}

/// Sorts `v[from..]` and drops entries that occur an even number of times.
fn cancel_pairs(v: &mut Vec<u32>, from: usize) {
    v[from..].sort_unstable();
    let mut w = from;
    let mut r = from;
    while r < v.len() {
        let mut k = r;
        while k < v.len() && v[k] == v[r] {
            k += 1;
        }
        if (k - r) % 2 == 1 {
            v[w] = v[r];
            w += 1;
        }
        r = k;
    }
    v.truncate(w);
}

fn lehmer_digits(perm: &[u8], out: &mut [u8]) {
    let n = perm.len();
    for i in 0..n {
        out[i] = perm[i + 1..].iter().filter(|&&p| p < perm[i]).count() as u8;
    }
}

/// A finite chain complex over GF(2) whose generators are grid states,
/// bucketed by bigrading. The boundary is stored as one sparse column per
/// state (global lexicographic indices).
#[derive(Clone, Debug)]
pub struct BigradedComplex {
    n: usize,
    gradings: Vec<Bigrading>,
    offsets: Vec<u32>,
    targets: Vec<u32>,
    strata: BTreeMap<Bigrading, Vec<u32>>,
    local: Vec<u32>,
}

/// Below this many states a complex is built on the calling thread.
const PARALLEL_THRESHOLD: u64 = 50_000;
const CHUNK: u64 = 1 << 15;

impl BigradedComplex {
    /// Builds the complex on `n x n` states whose differential counts empty
    /// rectangles avoiding `blocked`, graded by `table`.
    pub fn build(n: usize, blocked: &[Pos], table: &GradingTable) -> Result<Self, ComplexError> {
        if n > MAX_INDEXED_SIZE {
            return Err(ComplexError::TooLarge(n));
        }
        let total = factorial(n);
        let offsets_table = blocked_offsets(n, blocked);
        let fact: Vec<u64> = (0..=n).map(factorial).collect();

        let chunk_starts: Vec<u64> = (0..total).step_by(CHUNK as usize).collect();
        let work = |&start: &u64| -> (Vec<Bigrading>, Vec<u32>, Vec<u32>) {
            let end = (start + CHUNK).min(total);
            let mut perm = perm_unrank(n, start);
            let mut lehmer = vec![0u8; n];
            let mut gradings = Vec::with_capacity((end - start) as usize);
            let mut degrees = Vec::with_capacity((end - start) as usize);
            let mut targets = Vec::new();
            for rank in start..end {
                lehmer_digits(&perm, &mut lehmer);
                gradings.push(Bigrading::new(table.maslov(&perm), table.alex2(&perm)));
                let before = targets.len();
                for_each_free_rectangle(n, &perm, &offsets_table, |a, b| {
                    let (i, j) = if a < b { (a, b) } else { (b, a) };
                    targets.push(swapped_rank(&perm, &lehmer, rank, &fact, i, j) as u32);
                });
                cancel_pairs(&mut targets, before);
                degrees.push((targets.len() - before) as u32);
                next_permutation(&mut perm);
            }
            (gradings, degrees, targets)
        };
        let chunks: Vec<_> = if total < PARALLEL_THRESHOLD {
            chunk_starts.iter().map(work).collect()
        } else {
            chunk_starts.par_iter().map(work).collect()
        };

        let mut gradings = Vec::with_capacity(total as usize);
        let mut offsets = Vec::with_capacity(total as usize + 1);
        let mut targets = Vec::with_capacity(chunks.iter().map(|c| c.2.len()).sum());
        offsets.push(0u32);
        for (g, deg, t) in chunks {
            gradings.extend(g);
            for d in deg {
                offsets.push(offsets.last().unwrap() + d);
            }
            targets.extend(t);
        }

        let mut strata: BTreeMap<Bigrading, Vec<u32>> = BTreeMap::new();
        let mut local = vec![0u32; total as usize];
        for (s, g) in gradings.iter().enumerate() {
            let list = strata.entry(*g).or_default();
            local[s] = list.len() as u32;
            list.push(s as u32);
        }
        let complex = BigradedComplex { n, gradings, offsets, targets, strata, local };
        complex.check_gradings()?;
        Ok(complex)
    }

    fn check_gradings(&self) -> Result<(), ComplexError> {
        for s in 0..self.gradings.len() {
            let g = self.gradings[s];
            for &t in self.boundary(s as u32) {
                let h = self.gradings[t as usize];
                if h.maslov != g.maslov - 1 || h.alex2 != g.alex2 {
                    return Err(ComplexError::Grading {
                        from: s as u64,
                        to: t as u64,
                        dm: h.maslov - g.maslov,
                        da2: h.alex2 - g.alex2,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn grid_size(&self) -> usize {
        self.n
    }

    pub fn generator_count(&self) -> usize {
        self.gradings.len()
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    pub fn grading(&self, state: u32) -> Bigrading {
        self.gradings[state as usize]
    }

    /// States (global indices) of every nonempty bigrading.
    pub fn strata(&self) -> &BTreeMap<Bigrading, Vec<u32>> {
        &self.strata
    }

    /// Index of a state within its stratum.
    pub fn local_index(&self, state: u32) -> u32 {
        self.local[state as usize]
    }

    /// Targets of the boundary of a state, sorted; pairs of rectangles with
    /// the same target have already cancelled.
    pub fn boundary(&self, state: u32) -> &[u32] {
        let s = state as usize;
        &self.targets[self.offsets[s] as usize..self.offsets[s + 1] as usize]
    }

    /// The boundary map out of one stratum as sparse columns of local
    /// indices into the stratum one Maslov grading lower.
    pub fn boundary_matrix(&self, g: Bigrading) -> (usize, Vec<Vec<u32>>) {
        let below = Bigrading::new(g.maslov - 1, g.alex2);
        let nrows = self.strata.get(&below).map_or(0, Vec::len);
        let cols = self.strata.get(&g).map_or_else(Vec::new, |gens| {
            gens.iter().map(|&s| self.boundary(s).iter().map(|&t| self.local[t as usize]).collect()).collect()
        });
        (nrows, cols)
    }

    /// Verifies that the boundary squares to zero.
    pub fn check_d_squared(&self) -> Result<(), ComplexError> {
        let mut parity = vec![false; self.gradings.len()];
        let mut touched = Vec::new();
        for s in 0..self.gradings.len() as u32 {
            for &t in self.boundary(s) {
                for &u in self.boundary(t) {
                    parity[u as usize] ^= true;
                    touched.push(u);
                }
            }
            let bad = touched.iter().any(|&u| parity[u as usize]);
            for &u in &touched {
                parity[u as usize] = false;
            }
            touched.clear();
            if bad {
                return Err(ComplexError::NotAComplex(s as u64));
            }
        }
        Ok(())
    }

    /// Sum of `(-1)^M q^{alex2}` over generators.
    pub fn euler_characteristic(&self) -> crate::homology::LaurentPoly {
        let mut chi = crate::homology::LaurentPoly::default();
        for (g, gens) in &self.strata {
            let sign = if g.maslov.rem_euclid(2) == 0 { 1 } else { -1 };
            chi.add_term(g.alex2, sign * gens.len() as i64);
        }
        chi
    }
}

/// Tilde complex: rectangles avoiding every marking.
pub fn tilde_complex(wd: &WeightedDiagram) -> Result<BigradedComplex, ComplexError> {
    let d = wd.diagram();
    let n = d.size();
    let blocked: Vec<Pos> = (0..n * n).filter(|&i| d.cells()[i].is_some()).map(|i| Pos::new(i / n, i % n)).collect();
    BigradedComplex::build(n, &blocked, &GradingTable::for_weighted(wd))
}

/// The acyclic complex `C_n`: rectangles avoiding the O* and the X's,
/// Maslov grading computed against the single O*.
pub fn cn_complex(f: &FixtureCn) -> Result<BigradedComplex, ComplexError> {
    BigradedComplex::build(f.n, &f.blocked(), &GradingTable::maslov_only(f.n, &[f.star]))
}

//! A deliberately naive second implementation of tilde homology, sharing no
//! code with the main pipeline beyond the diagram types and the result
//! container. States come from a recursive enumeration, gradings from
//! literal pair counting, rectangles from a cell-by-cell scan, and ranks from
//! dense boolean elimination.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::diagram::{Marking, WeightedDiagram};
use crate::homology::PoincarePolynomial;

pub const ORACLE_MAX_N: usize = 7;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("grid of size {0} is too large for the dense oracle (max {ORACLE_MAX_N})")]
    TooLarge(usize),
    #[error("boundary does not square to zero")]
    NotAComplex,
}

/// What the oracle needs to know about a grid: the O-type cells for the
/// Maslov grading, signed weighted cells for the Alexander grading, and the
/// cells a counted rectangle must avoid. Cells are `(row, col)`.
#[derive(Clone, Debug)]
pub struct OracleInput {
    pub n: usize,
    pub o_cells: Vec<(usize, usize)>,
    pub signed: Vec<((usize, usize), i64)>,
    pub blocked: Vec<(usize, usize)>,
}

impl OracleInput {
    pub fn tilde(wd: &WeightedDiagram) -> Self {
        let d = wd.diagram();
        let n = d.size();
        let mut o_cells = Vec::new();
        let mut signed = Vec::new();
        let mut blocked = Vec::new();
        for r in 0..n {
            for c in 0..n {
                let Some(m) = d.at(r, c) else { continue };
                blocked.push((r, c));
                let w = wd.weight(crate::diagram::Pos::new(r, c));
                match m {
                    Marking::X => signed.push(((r, c), w)),
                    Marking::O | Marking::Star => {
                        o_cells.push((r, c));
                        signed.push(((r, c), -w));
                    }
                }
            }
        }
        OracleInput { n, o_cells, signed, blocked }
    }
}

fn all_perms(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Points in doubled coordinates `(2x, 2y)` with integer multiplicities.
type Pts = Vec<((i64, i64), i64)>;

fn i_count(a: &Pts, b: &Pts) -> i64 {
    let mut s = 0;
    for &((ax, ay), wa) in a {
        for &((bx, by), wb) in b {
            if ax < bx && ay < by {
                s += wa * wb;
            }
        }
    }
    s
}

fn j2(a: &Pts, b: &Pts) -> i64 {
    i_count(a, b) + i_count(b, a)
}

fn state_pts(p: &[usize]) -> Pts {
    p.iter().enumerate().map(|(c, &r)| ((2 * c as i64, 2 * r as i64), 1)).collect()
}

fn cell_pt((r, c): (usize, usize)) -> (i64, i64) {
    (2 * c as i64 + 1, 2 * r as i64 + 1)
}

fn gradings(inp: &OracleInput, p: &[usize]) -> (i64, i64) {
    let x = state_pts(p);
    let mut x_minus_o = x.clone();
    x_minus_o.extend(inp.o_cells.iter().map(|&c| (cell_pt(c), -1)));
    // 2J(x-O, x-O) is even; J itself is an integer here
    let m = j2(&x_minus_o, &x_minus_o) / 2 + 1;
    let s: Pts = inp.signed.iter().map(|&(c, w)| (cell_pt(c), w)).collect();
    (m, j2(&x, &s))
}

/// Targets of the rectangles from `p` that contain neither a point of `p`
/// in their interior nor a blocked cell, with multiplicity.
fn rect_targets(inp: &OracleInput, p: &[usize]) -> Vec<Vec<usize>> {
    let n = inp.n;
    let blocked: Vec<Vec<bool>> = {
        let mut b = vec![vec![false; n]; n];
        for &(r, c) in &inp.blocked {
            b[r][c] = true;
        }
        b
    };
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            // lower-left corner (a, p[a]); walk right to column b and up to row p[b]
            let w = (b + n - a) % n;
            let h = (p[b] + n - p[a]) % n;
            let mut ok = true;
            'cells: for dc in 0..w {
                for dr in 0..h {
                    if blocked[(p[a] + dr) % n][(a + dc) % n] {
                        ok = false;
                        break 'cells;
                    }
                }
            }
            if !ok {
                continue;
            }
            for dc in 1..w {
                let col = (a + dc) % n;
                let dr = (p[col] + n - p[a]) % n;
                if dr > 0 && dr < h {
                    ok = false;
                }
            }
            if ok {
                let mut q = p.to_vec();
                q.swap(a, b);
                out.push(q);
            }
        }
    }
    out
}

fn dense_rank(mut rows: Vec<Vec<bool>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&i| rows[i][col]) else { continue };
        rows.swap(rank, piv);
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[col] {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x ^= *y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Homology of the complex described by `inp`, checking `d^2 = 0` densely.
pub fn oracle_homology_of(inp: &OracleInput) -> Result<PoincarePolynomial, OracleError> {
    if inp.n > ORACLE_MAX_N {
        return Err(OracleError::TooLarge(inp.n));
    }
    let perms = all_perms(inp.n);
    let index: HashMap<Vec<usize>, usize> = perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
    let grades: Vec<(i64, i64)> = perms.iter().map(|p| gradings(inp, p)).collect();
    let mut d: Vec<Vec<usize>> = Vec::with_capacity(perms.len());
    for p in &perms {
        let mut parity: BTreeMap<usize, bool> = BTreeMap::new();
        for q in rect_targets(inp, p) {
            *parity.entry(index[&q]).or_insert(false) ^= true;
        }
        d.push(parity.into_iter().filter(|&(_, odd)| odd).map(|(t, _)| t).collect());
    }
    for s in 0..perms.len() {
        let mut count: BTreeMap<usize, u32> = BTreeMap::new();
        for &t in &d[s] {
            for &u in &d[t] {
                *count.entry(u).or_insert(0) += 1;
            }
        }
        if count.values().any(|c| c % 2 == 1) {
            return Err(OracleError::NotAComplex);
        }
    }
    let mut groups: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
    for (s, &g) in grades.iter().enumerate() {
        groups.entry(g).or_default().push(s);
    }
    let mut rank_out: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    for (&(m, a), gens) in &groups {
        let below = groups.get(&(m - 1, a));
        let rows: Vec<Vec<bool>> = gens
            .iter()
            .map(|&s| match below {
                Some(b) => b.iter().map(|t| d[s].contains(t)).collect(),
                None => Vec::new(),
            })
            .collect();
        // a target outside the stratum below would be a grading violation
        for &s in gens {
            for &t in &d[s] {
                assert_eq!(grades[t], (m - 1, a), "rectangle changes gradings");
            }
        }
        rank_out.insert((m, a), if below.is_some() { dense_rank(rows) } else { 0 });
    }
    let mut p = PoincarePolynomial::zero();
    for (&(m, a), gens) in &groups {
        let dim = gens.len() - rank_out[&(m, a)] - rank_out.get(&(m + 1, a)).copied().unwrap_or(0);
        p.add(m, a, dim as u64);
    }
    Ok(p)
}

/// Tilde homology of a weighted diagram.
pub fn oracle_homology(wd: &WeightedDiagram) -> Result<PoincarePolynomial, OracleError> {
    oracle_homology_of(&OracleInput::tilde(wd))
}

/// Signed chain-level Euler characteristic `sum (-1)^M q^alex2`, as
/// `(alex2, coefficient)` pairs without zeros.
pub fn oracle_chain_euler(wd: &WeightedDiagram) -> Result<BTreeMap<i64, i64>, OracleError> {
    let inp = OracleInput::tilde(wd);
    if inp.n > ORACLE_MAX_N {
        return Err(OracleError::TooLarge(inp.n));
    }
    let mut chi = BTreeMap::new();
    for p in all_perms(inp.n) {
        let (m, a) = gradings(&inp, &p);
        *chi.entry(a).or_insert(0) += if m % 2 == 0 { 1 } else { -1 };
    }
    chi.retain(|_, c| *c != 0);
    Ok(chi)
}

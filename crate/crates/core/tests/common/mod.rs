//! Checks shared by the property suite and the acceptance run. Each returns
//! `Err` with a description of the first violation.

#![allow(dead_code)]

use gridhom_core::complex::{empty_rectangles_from, tilde_complex, tilde_rectangle_filter};
use gridhom_core::diagram::PlanarRealization;
use gridhom_core::homology::{hat_from_tilde, homology};
use gridhom_core::moves::random_move_walk;
use gridhom_core::oracle::{oracle_chain_euler, oracle_homology};
use gridhom_core::state::{alexander2, enumerate_states, maslov, GradingTable};
use gridhom_core::{hat_homology, tilde_homology, LaurentPoly, PoincarePolynomial, WeightedDiagram};

pub type Check = Result<(), String>;

pub fn d_squared(wd: &WeightedDiagram) -> Check {
    let c = tilde_complex(wd).map_err(|e| e.to_string())?;
    c.check_d_squared().map_err(|e| e.to_string())
}

/// Every counted rectangle drops M by one and keeps A.
pub fn rectangle_gradings(wd: &WeightedDiagram) -> Check {
    let d = wd.diagram();
    let table = GradingTable::for_weighted(wd);
    for x in enumerate_states(d) {
        let (mx, ax) = (table.maslov(x.perm()), table.alex2(x.perm()));
        for r in empty_rectangles_from(d, &x).into_iter().filter(tilde_rectangle_filter) {
            let (my, ay) = (table.maslov(r.target.perm()), table.alex2(r.target.perm()));
            if mx - my != 1 || ax != ay {
                return Err(format!("{:?} -> {:?}: ({mx},{ax}) -> ({my},{ay})", x.perm(), r.target.perm()));
            }
        }
    }
    Ok(())
}

/// Maslov gradings do not depend on where the torus is cut open; Alexander
/// gradings change by a constant.
pub fn cut_independence(wd: &WeightedDiagram) -> Check {
    let d = wd.diagram();
    let n = d.size();
    let canon = PlanarRealization::canonical(d);
    let states: Vec<_> = enumerate_states(d).collect();
    let base: Vec<(i64, i64)> = states.iter().map(|x| (maslov(&canon, x), alexander2(&canon, wd, x))).collect();
    for cr in 0..n {
        for cc in 0..n {
            let pr = PlanarRealization::new(d, cr, cc);
            let mut offset = None;
            for (x, &(m0, a0)) in states.iter().zip(&base) {
                let (m, a) = (maslov(&pr, x), alexander2(&pr, wd, x));
                if m != m0 {
                    return Err(format!("cut ({cr},{cc}): M{:?} = {m}, canonical {m0}", x.perm()));
                }
                let off = *offset.get_or_insert(a - a0);
                if a - a0 != off {
                    return Err(format!("cut ({cr},{cc}): A shift not constant at {:?}", x.perm()));
                }
            }
        }
    }
    Ok(())
}

/// Main pipeline and dense oracle give identical tilde homology.
pub fn oracle_agrees(wd: &WeightedDiagram) -> Check {
    let main = tilde_homology(wd).map_err(|e| e.to_string())?;
    let oracle = oracle_homology(wd).map_err(|e| e.to_string())?;
    if main != oracle {
        return Err(format!("main {main} vs oracle {oracle}"));
    }
    Ok(())
}

/// dim tilde = 2^k dim hat for k plain O's, and the division is exact:
/// multiplying back by the W factors recovers tilde.
pub fn dimension_law(wd: &WeightedDiagram) -> Check {
    let tilde = tilde_homology(wd).map_err(|e| e.to_string())?;
    let ws = wd.plain_o_weights();
    let hat = hat_from_tilde(&tilde, &ws).map_err(|e| e.to_string())?;
    if tilde.total_dim() != hat.total_dim() << ws.len() {
        return Err(format!("dim tilde {} vs 2^{} * {}", tilde.total_dim(), ws.len(), hat.total_dim()));
    }
    let back = ws.iter().fold(hat, |acc, &w| acc.tensor_w(w));
    if back != tilde {
        return Err(format!("hat * W's = {back}, tilde = {tilde}"));
    }
    Ok(())
}

fn chi_map(p: &LaurentPoly) -> Vec<(i64, i64)> {
    p.terms().collect()
}

/// Chain-level and homology-level Euler characteristics agree, and the
/// chain-level one matches the oracle's alternating count.
pub fn euler_agrees(wd: &WeightedDiagram) -> Check {
    let c = tilde_complex(wd).map_err(|e| e.to_string())?;
    let chain = c.euler_characteristic();
    let hom = homology(&c).map_err(|e| e.to_string())?.euler_characteristic();
    if chain != hom {
        return Err(format!("chain {chain} vs homology {hom}"));
    }
    let oracle: Vec<(i64, i64)> = oracle_chain_euler(wd).map_err(|e| e.to_string())?.into_iter().collect();
    if chi_map(&chain) != oracle {
        return Err(format!("chain {chain} vs oracle {oracle:?}"));
    }
    Ok(())
}

/// Hat homology stays the same (up to A-shift) at every step of a seeded
/// random walk of moves.
pub fn walk_invariance(wd: &WeightedDiagram, steps: usize, seed: u64, max_n: usize) -> Check {
    let start = hat_homology(wd).map_err(|e| e.to_string())?;
    let (_, log) = random_move_walk(wd, steps, seed, max_n).map_err(|e| e.to_string())?;
    let mut cur = wd.clone();
    for (i, &mv) in log.iter().enumerate() {
        cur = gridhom_core::moves::apply_weighted(&cur, mv).map_err(|e| e.to_string())?;
        let h = hat_homology(&cur).map_err(|e| e.to_string())?;
        if !h.eq_up_to_ashift(&start) {
            return Err(format!("seed {seed}, step {i} ({mv:?}): {h} vs {start}"));
        }
    }
    Ok(())
}

pub fn hat_poly(wd: &WeightedDiagram) -> PoincarePolynomial {
    hat_homology(wd).expect("hat homology")
}

//! Small diagrams used throughout the tests and the verification harness.

use crate::combinators::{join_cut_edge, unknot_vertex};
use crate::diagram::{DiagramError, DiagramFile, GridDiagram, Marking, WeightedDiagram};
use crate::moves::{cyclic_permute_cols, cyclic_permute_rows};
use rand::seq::SliceRandom;
use rand::Rng;

/// The `n x n` unknot with O's on the diagonal, X's just right of them,
/// and the O in row 0 starred.
pub fn unknot_chain(n: usize) -> GridDiagram {
    assert!(n >= 2, "unknot_chain needs n >= 2");
    let os: Vec<(usize, usize, bool)> = (0..n).map(|i| (i, i, i == 0)).collect();
    let xs: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    GridDiagram::new(n, &os, &xs).expect("unknot chain is valid")
}

/// A 5x5 trefoil: O's on the diagonal, X's two steps to the right.
pub fn trefoil() -> GridDiagram {
    let os: Vec<(usize, usize, bool)> = (0..5).map(|i| (i, i, i == 0)).collect();
    let xs: Vec<(usize, usize)> = (0..5).map(|i| (i, (i + 2) % 5)).collect();
    GridDiagram::new(5, &os, &xs).expect("trefoil is valid")
}

/// Moves the star of a one-vertex diagram onto the O in `(row, col)`.
pub fn restar(d: &GridDiagram, row: usize, col: usize) -> GridDiagram {
    let n = d.size();
    let mut cells = d.cells().to_vec();
    for c in cells.iter_mut() {
        if *c == Some(Marking::Star) {
            *c = Some(Marking::O);
        }
    }
    assert!(cells[row * n + col].is_some_and(Marking::is_o_type), "no O at ({row}, {col})");
    cells[row * n + col] = Some(Marking::Star);
    GridDiagram::from_cells(n, cells).expect("restarred diagram is valid")
}

fn file(text: &str) -> DiagramFile {
    DiagramFile::parse(text).expect("shipped diagram parses")
}

/// Row and column rotation of `d` that brings an O-type marking into the
/// bottom-right corner (`bottom_right`) or the top-left one, with the star
/// moved onto it. For one-vertex diagrams.
pub fn with_corner_vertex(d: &GridDiagram, bottom_right: bool) -> GridDiagram {
    let n = d.size();
    let (r, c) = if bottom_right { (0, n - 1) } else { (n - 1, 0) };
    let o = d.o_in_row(0);
    // rotate the O of row 0 into the corner
    let rows = cyclic_permute_rows(d, (r + n - o.row) % n);
    let e = cyclic_permute_cols(&rows, (c + n - o.col) % n);
    restar(&e, r, c)
}

/// The 5x5 trefoil with its vertex moved into a corner. Not good: the
/// opposite corners are empty or hold an X.
pub fn trefoil_cornered(bottom_right: bool) -> GridDiagram {
    with_corner_vertex(&trefoil(), bottom_right)
}

/// A good 6x6 trefoil with its vertex in the bottom-right corner.
pub fn trefoil_good() -> GridDiagram {
    file(include_str!("../data/trefoil_good.grid")).diagram
}

/// [`trefoil_good`] with the vertex moved to the top-left O. Still good.
pub fn trefoil_good_top_left() -> GridDiagram {
    restar(&trefoil_good(), 5, 0)
}

/// A good 4x4 diagram of two unknotted loops at one vertex, loop weights
/// `a` and `b` in trace order.
pub fn bouquet_good(a: i64, b: i64) -> WeightedDiagram {
    let d = file(include_str!("../data/bouquet_good.grid")).diagram;
    WeightedDiagram::new(d, &[a, b]).expect("loops balance")
}

/// The 2x2 unknot vertex with its star in the top-left corner.
pub fn unknot_vertex_top_left(w: i64) -> WeightedDiagram {
    let d = restar(unknot_vertex(w).diagram(), 1, 0);
    WeightedDiagram::new(d, &[w]).expect("a loop is balanced")
}

/// Weights a handcuff: `a` on the loop at the lower-indexed vertex, `b` on
/// the other loop and 0 on the connecting edge.
pub fn weight_handcuff(d: GridDiagram, a: i64, b: i64) -> Result<WeightedDiagram, DiagramError> {
    let sk = d.trace()?;
    let ws: Vec<i64> = sk
        .edges
        .iter()
        .map(|e| match (e.from == e.to, e.from) {
            (true, 0) => a,
            (true, _) => b,
            (false, _) => 0,
        })
        .collect();
    WeightedDiagram::new(d, &ws)
}

/// First reference handcuff: two unknotted loops joined by a cut edge.
pub fn handcuff_g1(a: i64, b: i64) -> WeightedDiagram {
    join_cut_edge(&unknot_vertex(a), &unknot_vertex_top_left(b), 0).expect("good unknot vertices")
}

pub fn handcuff_g2(a: i64, b: i64) -> WeightedDiagram {
    let d = file(include_str!("../data/handcuff_g2.grid")).diagram;
    weight_handcuff(d, a, b).expect("handcuff weights balance")
}

pub fn handcuff_g3(a: i64, b: i64) -> WeightedDiagram {
    let d = file(include_str!("../data/handcuff_g3.grid")).diagram;
    weight_handcuff(d, a, b).expect("handcuff weights balance")
}

/// Every diagram shipped with the library, by name, with its default
/// weights.
pub fn shipped() -> Vec<(&'static str, WeightedDiagram)> {
    let unit = |d: GridDiagram| WeightedDiagram::unit(d).expect("unit weights balance on a knot");
    let weighted = |t: &str| file(t).weighted().expect("shipped weights balance");
    vec![
        ("unknot_chain_3", unit(unknot_chain(3))),
        ("trefoil", unit(trefoil())),
        ("trefoil_good", unit(trefoil_good())),
        ("bouquet_good", weighted(include_str!("../data/bouquet_good.grid"))),
        ("unknot_vertex", unknot_vertex(1)),
        ("handcuff_g1", handcuff_g1(1, 2)),
        ("handcuff_g2", handcuff_g2(1, 2)),
        ("handcuff_g3", handcuff_g3(1, 2)),
        ("arrow", weighted(include_str!("../data/arrow.grid"))),
        ("theta_source_sink", weighted(include_str!("../data/theta_source_sink.grid"))),
    ]
}

/// Shipped diagrams with a sink, a source or a cut edge, together with
/// further cut-edge joins built from the good fixtures.
pub fn trivial_by_structure() -> Vec<(&'static str, WeightedDiagram)> {
    let weighted = |t: &str| file(t).weighted().expect("shipped weights balance");
    let t = WeightedDiagram::unit(trefoil_good()).expect("knot");
    vec![
        ("arrow", weighted(include_str!("../data/arrow.grid"))),
        ("theta_source_sink", weighted(include_str!("../data/theta_source_sink.grid"))),
        ("handcuff_g1(1,2)", handcuff_g1(1, 2)),
        ("handcuff_g1(2,5)", handcuff_g1(2, 5)),
        ("trefoil -- unknot", join_cut_edge(&t, &unknot_vertex_top_left(1), 0).expect("good")),
        ("bouquet -- unknot", join_cut_edge(&bouquet_good(1, 2), &unknot_vertex_top_left(3), 0).expect("good")),
    ]
}

/// Samples a weighted diagram of size `n`: random O's with one or two
/// stars, a random X per row, then random removals and additions of X's in
/// star rows. Returns `None` when the sample breaks a marking rule.
/// Weights are drawn from `-2..=3` until they balance, falling back to 0.
pub fn random_weighted<R: Rng>(rng: &mut R, n: usize) -> Option<WeightedDiagram> {
    let mut s: Vec<usize> = (0..n).collect();
    s.shuffle(rng);
    let first = rng.gen_range(0..n);
    let stars: Vec<usize> = (0..n).filter(|&r| r == first || rng.gen_bool(0.3)).collect();
    let os: Vec<(usize, usize, bool)> = (0..n).map(|r| (r, s[r], stars.contains(&r))).collect();
    let mut xs: Vec<(usize, usize)> = Vec::new();
    if n > 1 {
        let t = loop {
            let mut t: Vec<usize> = (0..n).collect();
            t.shuffle(rng);
            if (0..n).all(|r| t[r] != s[r]) {
                break t;
            }
        };
        xs = (0..n).map(|r| (r, t[r])).collect();
    }
    for &r in &stars {
        if rng.gen_bool(0.3) {
            xs.retain(|&(xr, _)| xr != r);
        }
        if rng.gen_bool(0.4) {
            let c = rng.gen_range(0..n);
            if c != s[r] && !xs.contains(&(r, c)) {
                xs.push((r, c));
            }
        }
    }
    let d = GridDiagram::new(n, &os, &xs).ok()?;
    let m = d.trace().ok()?.edges.len();
    for _ in 0..64 {
        let ws: Vec<i64> = (0..m).map(|_| rng.gen_range(-2..=3)).collect();
        if let Ok(wd) = WeightedDiagram::new(d.clone(), &ws) {
            return Some(wd);
        }
    }
    WeightedDiagram::new(d, &vec![0; m]).ok()
}

/// Draws until [`random_weighted`] succeeds, with `n` uniform in `1..=max_n`.
pub fn random_valid<R: Rng>(rng: &mut R, max_n: usize) -> WeightedDiagram {
    loop {
        let n = rng.gen_range(1..=max_n);
        if let Some(wd) = random_weighted(rng, n) {
            return wd;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn data_files_parse_and_have_the_right_shape() {
        for (name, wd) in shipped() {
            assert!(wd.size() >= 1, "{name}");
        }
        assert!(trefoil_good().is_good());
        assert!(trefoil_good_top_left().is_good());
        assert!(bouquet_good(1, 2).diagram().is_good());
        for (a, b) in [(1, 2), (2, 5)] {
            for h in [handcuff_g1(a, b), handcuff_g2(a, b), handcuff_g3(a, b)] {
                let sk = h.skeleton();
                assert_eq!(sk.vertices.len(), 2);
                assert_eq!(sk.edges.len(), 3);
                let mut loops: Vec<i64> = sk
                    .edges
                    .iter()
                    .zip(h.edge_weights())
                    .filter(|(e, _)| e.from == e.to)
                    .map(|(_, &w)| w)
                    .collect();
                loops.sort();
                assert_eq!(loops, vec![a, b]);
            }
        }
    }

    #[test]
    fn random_diagrams_are_varied() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let ds: Vec<WeightedDiagram> = (0..200).map(|_| random_valid(&mut rng, 5)).collect();
        assert!(ds.iter().any(|d| d.skeleton().vertices.len() >= 2));
        assert!(ds.iter().any(|d| d.edge_weights().iter().any(|&w| w != 0 && w != 1)));
        assert!(ds.iter().any(|d| d.skeleton().has_sink_or_source()));
        assert!(ds.iter().any(|d| d.size() == 5));
    }

    #[test]
    fn corner_vertices() {
        let br = trefoil_cornered(true);
        assert_eq!(br.at(0, 4), Some(Marking::Star));
        assert_eq!(br.stars().len(), 1);
        let tl = trefoil_cornered(false);
        assert_eq!(tl.at(4, 0), Some(Marking::Star));
    }

    #[test]
    fn sinks_and_sources() {
        let arrow = &shipped()[8].1;
        let sk = arrow.skeleton();
        assert!(sk.has_sink_or_source());
    }
}

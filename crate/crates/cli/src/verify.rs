//! Numerical checks of the structural theorems. Each check computes both
//! sides independently and compares them up to Alexander shift.

use gridhom_core::combinators::{
    connected_sum_with, disjoint_union, join_cut_edge_with, make_good, make_good_weighted, wedge_with, PairCheck,
};
use gridhom_core::complex::cn_complex;
use gridhom_core::diagram::build_cn_fixture;
use gridhom_core::fixtures::{restar, with_corner_vertex};
use gridhom_core::homology::homology;
use gridhom_core::moves::{apply_weighted, random_move_walk};
use gridhom_core::{hat_homology, GridDiagram, Marking, PoincarePolynomial, WeightedDiagram};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::output::poly_json;

/// One compared pair of polynomials.
pub struct Side {
    pub label: String,
    pub poly: PoincarePolynomial,
}

pub struct Verdict {
    pub theorem: &'static str,
    pub lhs: Side,
    pub rhs: Side,
    pub notes: Vec<String>,
    pub pass: bool,
}

impl Verdict {
    fn compare(theorem: &'static str, lhs: Side, rhs: Side) -> Self {
        let pass = lhs.poly.eq_up_to_ashift(&rhs.poly);
        Verdict { theorem, lhs, rhs, notes: Vec::new(), pass }
    }

    pub fn text(&self) -> String {
        let mut out = format!("theorem: {}\n", self.theorem);
        for n in &self.notes {
            out.push_str(&format!("  {n}\n"));
        }
        let w = self.lhs.label.len().max(self.rhs.label.len());
        out.push_str(&format!("  {:<w$} = {}\n", self.lhs.label, self.lhs.poly));
        out.push_str(&format!("  {:<w$} = {}\n", self.rhs.label, self.rhs.poly));
        out.push_str(if self.pass { "PASS\n" } else { "FAIL\n" });
        out
    }

    pub fn json(&self) -> Value {
        json!({
            "theorem": self.theorem,
            "lhs": { "label": self.lhs.label, "hat": poly_json(&self.lhs.poly) },
            "rhs": { "label": self.rhs.label, "hat": poly_json(&self.rhs.poly) },
            "notes": self.notes,
            "verdict": if self.pass { "PASS" } else { "FAIL" },
        })
    }
}

fn side(label: impl Into<String>, poly: PoincarePolynomial) -> Side {
    Side { label: label.into(), poly }
}

fn hat(wd: &WeightedDiagram) -> Result<PoincarePolynomial, CliError> {
    Ok(hat_homology(wd)?)
}

/// Moves the chosen vertex into the required corner when a cyclic
/// permutation can do so; otherwise leaves the diagram for the combinator
/// to reject. On a knot the vertex may also slide to another O.
fn place(wd: &WeightedDiagram, bottom_right: bool, check: PairCheck) -> WeightedDiagram {
    let fits = |d: &GridDiagram| {
        let n = d.size();
        let corner = if bottom_right { d.at(0, n - 1) } else { d.at(n - 1, 0) };
        corner == Some(Marking::Star) && (check == PairCheck::CornersOnly || d.is_good())
    };
    if fits(wd.diagram()) {
        return wd.clone();
    }
    if let Ok(g) = make_good_weighted(wd, Some(bottom_right)) {
        return g;
    }
    let sk = wd.skeleton();
    if sk.vertices.len() == 1 && sk.edges.len() == 1 {
        let moved = match check {
            PairCheck::CornersOnly => Some(with_corner_vertex(wd.diagram(), bottom_right)),
            PairCheck::Good => make_good(wd.diagram(), None).ok().map(|g| {
                let n = g.size();
                let (r, c) = if bottom_right { (0, n - 1) } else { (n - 1, 0) };
                restar(&g, r, c)
            }),
        };
        if let Some(d) = moved.filter(|d| fits(d)) {
            return WeightedDiagram::new(d, wd.edge_weights()).expect("a knot keeps its balance");
        }
    }
    wd.clone()
}

fn pair(a: &WeightedDiagram, b: &WeightedDiagram, check: PairCheck) -> (WeightedDiagram, WeightedDiagram) {
    (place(a, true, check), place(b, false, check))
}

pub fn cut_edge(a: &WeightedDiagram, b: &WeightedDiagram, check: PairCheck) -> Result<Verdict, CliError> {
    let (a, b) = pair(a, b, check);
    let j = join_cut_edge_with(&a, &b, 0, check)?;
    let mut v = Verdict::compare("cut-edge", side("hat(A -- B)", hat(&j)?), side("expected", PoincarePolynomial::zero()));
    v.notes.push(format!("joined diagram is {0}x{0}", j.size()));
    Ok(v)
}

pub fn sink_source(wd: &WeightedDiagram) -> Result<Verdict, CliError> {
    let sk = wd.skeleton();
    let which: Vec<String> = (0..sk.vertices.len())
        .filter_map(|v| {
            if sk.is_sink(v) {
                Some(format!("vertex {v} is a sink"))
            } else if sk.is_source(v) {
                Some(format!("vertex {v} is a source"))
            } else {
                None
            }
        })
        .collect();
    if which.is_empty() {
        return Err(CliError::Validation("diagram has no sink or source".into()));
    }
    let mut v = Verdict::compare("sink-source", side("hat", hat(wd)?), side("expected", PoincarePolynomial::zero()));
    v.notes = which;
    Ok(v)
}

pub fn wedge(a: &WeightedDiagram, b: &WeightedDiagram, check: PairCheck) -> Result<Verdict, CliError> {
    let (a, b) = pair(a, b, check);
    let w = wedge_with(&a, &b, check)?;
    Ok(Verdict::compare("wedge", side("hat(A v B)", hat(&w)?), side("hat(A) x hat(B)", hat(&a)?.tensor(&hat(&b)?))))
}

pub fn connected_sum(a: &WeightedDiagram, b: &WeightedDiagram, check: PairCheck) -> Result<Verdict, CliError> {
    let (a, b) = pair(a, b, check);
    let s = connected_sum_with(&a, &b, check)?;
    let w = corner_weight(&a);
    Ok(Verdict::compare(
        "connected-sum",
        side("hat(A # B)", hat(&s)?),
        side(format!("hat(A) x hat(B) x W({w})"), hat(&a)?.tensor(&hat(&b)?).tensor_w(w)),
    ))
}

pub fn disjoint(a: &WeightedDiagram, b: &WeightedDiagram) -> Result<Verdict, CliError> {
    let u = disjoint_union(a, b)?;
    Ok(Verdict::compare(
        "disjoint",
        side("hat(A + B)", hat(&u)?),
        side("hat(A) x hat(B) x W(0)", hat(a)?.tensor(&hat(b)?).tensor_w(0)),
    ))
}

fn corner_weight(wd: &WeightedDiagram) -> i64 {
    let n = wd.size();
    wd.weight(gridhom_core::Pos::new(0, n - 1))
}

/// Knots only: the connected sum as a one-vertex knot against the product
/// of the factors.
pub fn kunneth(a: &WeightedDiagram, b: &WeightedDiagram, check: PairCheck) -> Result<Verdict, CliError> {
    for (name, k) in [("A", a), ("B", b)] {
        let sk = k.skeleton();
        if sk.vertices.len() != 1 || sk.edges.len() != 1 {
            return Err(CliError::Validation(format!("{name} is not a one-vertex knot")));
        }
    }
    let (a, b) = pair(a, b, check);
    let s = connected_sum_with(&a, &b, check)?;
    let keep = s.diagram().stars()[1];
    let knot = WeightedDiagram::new(restar(s.diagram(), keep.row, keep.col), &[a.edge_weights()[0]])?;
    let mut v = Verdict::compare(
        "kunneth",
        side("hat(A # B), one vertex", hat(&knot)?),
        side("hat(A) x hat(B)", hat(&a)?.tensor(&hat(&b)?)),
    );
    v.notes.push(format!("sum diagram is {0}x{0}", knot.size()));
    Ok(v)
}

pub fn cn_acyclic(from: usize, to: usize) -> Result<Vec<Verdict>, CliError> {
    if from < 2 || to < from {
        return Err(CliError::Validation(format!("need 2 <= from <= to, got {from}..{to}")));
    }
    (from..=to)
        .map(|n| {
            let c = cn_complex(&build_cn_fixture(n)).map_err(|e| CliError::Internal(e.to_string()))?;
            let mut v = Verdict::compare(
                "cn-acyclic",
                side(format!("H(C_{n})"), homology(&c)?),
                side("expected", PoincarePolynomial::zero()),
            );
            v.notes.push(format!("{} generators", c.generator_count()));
            Ok(v)
        })
        .collect()
}

pub fn move_invariance(wd: &WeightedDiagram, steps: usize, seed: u64, max_n: usize) -> Result<Verdict, CliError> {
    let start = hat(wd)?;
    let (_, log) = random_move_walk(wd, steps, seed, max_n)?;
    let mut cur = wd.clone();
    let mut notes = Vec::new();
    let mut pass = true;
    for (i, &mv) in log.iter().enumerate() {
        cur = apply_weighted(&cur, mv)?;
        let h = hat(&cur)?;
        let same = h.eq_up_to_ashift(&start);
        pass &= same;
        notes.push(format!(
            "step {i}: {} -> {1}x{1}{2}",
            serde_json::to_string(&mv).expect("move serializes"),
            cur.size(),
            if same { "" } else { " (differs)" }
        ));
    }
    Ok(Verdict {
        theorem: "move-invariance",
        lhs: side("hat(start)", start),
        rhs: side(format!("hat(after {} moves)", log.len()), hat(&cur)?),
        notes,
        pass,
    })
}

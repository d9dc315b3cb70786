//! Text and JSON rendering. Nothing here depends on timing or thread
//! count, so output is reproducible.

use gridhom_core::homology::{halved, GradedDim};
use gridhom_core::{LaurentPoly, PoincarePolynomial, WeightedDiagram};
use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA: u32 = 1;

/// Table of classes, highest Maslov grading first. `A` is printed halved,
/// with the doubled value alongside.
pub fn table(title: &str, p: &PoincarePolynomial) -> String {
    let mut out = format!("{title} (total dimension {})\n", p.total_dim());
    if p.is_zero() {
        out.push_str("  0\n");
        return out;
    }
    out.push_str(&format!("  {:>4} {:>6} {:>4} {:>4}\n", "M", "A", "2A", "dim"));
    for ((m, a2), d) in p.terms().rev() {
        out.push_str(&format!("  {m:>4} {:>6} {a2:>4} {d:>4}\n", halved(a2)));
    }
    out
}

#[derive(Serialize)]
struct Classes {
    total: u64,
    classes: Vec<GradedDim>,
    display: String,
}

pub fn poly_json(p: &PoincarePolynomial) -> Value {
    let c = Classes { total: p.total_dim(), classes: p.to_graded_dims(), display: p.to_string() };
    serde_json::to_value(c).expect("plain data serializes")
}

pub fn laurent_json(p: &LaurentPoly) -> Value {
    json!({
        "terms": p.terms().map(|(e, c)| json!({ "alex2": e, "coeff": c })).collect::<Vec<_>>(),
        "display": p.to_string(),
    })
}

pub fn input_json(label: &str, wd: &WeightedDiagram) -> Value {
    let sk = wd.skeleton();
    json!({
        "source": label,
        "n": wd.size(),
        "vertices": sk.vertices.len(),
        "edges": sk.edges.len(),
        "edge_weights": wd.edge_weights(),
    })
}

pub fn input_line(label: &str, wd: &WeightedDiagram) -> String {
    let sk = wd.skeleton();
    format!(
        "{label}: {n}x{n}, vertices {}, edges {}, edge weights {:?}\n",
        sk.vertices.len(),
        sk.edges.len(),
        wd.edge_weights(),
        n = wd.size()
    )
}

pub fn emit_json(mut v: Value) -> String {
    if let Value::Object(m) = &mut v {
        m.insert("schema".into(), json!(SCHEMA));
    }
    let mut s = serde_json::to_string_pretty(&v).expect("json value serializes");
    s.push('\n');
    s
}

//! Graph grid diagrams: parsing, validation, edge tracing and weights.
//!
//! Rows and columns are indexed `0..n` with row 0 at the bottom and column 0
//! on the left. The marking in cell `(row, col)` sits at the planar point
//! `(col + 1/2, row + 1/2)`; the lattice points of a state sit at integer
//! coordinates.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A cell of the grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Pos {
    pub row: usize,
    pub col: usize,
}

impl Pos {
    pub fn new(row: usize, col: usize) -> Self {
        Pos { row, col }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(r{}, c{})", self.row, self.col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Marking {
    /// Plain O: interior point of an edge.
    O,
    /// O*: a vertex of the spatial graph.
    Star,
    X,
}

impl Marking {
    pub fn is_o_type(self) -> bool {
        matches!(self, Marking::O | Marking::Star)
    }

    fn token(self) -> char {
        match self {
            Marking::O => 'O',
            Marking::Star => '*',
            Marking::X => 'X',
        }
    }
}

/// The three placement conditions a graph grid diagram must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Condition {
    /// Exactly one O or O* in every row and column.
    OnePerLine,
    /// A row or column with no X or with several X's carries an O*.
    StarRequired,
    /// An O-type marking and an X never share a square.
    SharedSquare,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Condition::OnePerLine => write!(f, "condition (i): exactly one O or O* per row and column"),
            Condition::StarRequired => {
                write!(f, "condition (ii): a row or column with zero or several X's needs an O*")
            }
            Condition::SharedSquare => write!(f, "condition (iii): O-type and X markings share a square"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiagramError {
    #[error("syntax error on line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("invalid diagram, {condition} ({detail})")]
    Validation { condition: Condition, detail: String },
    #[error("edge tracing failed: {0}")]
    Trace(String),
    #[error("weights are not balanced at vertex {vertex} {pos}: incoming {in_sum}, outgoing {out_sum}")]
    Balance { vertex: usize, pos: Pos, in_sum: i64, out_sum: i64 },
    #[error("expected {expected} edge weights, got {got}")]
    WeightCount { expected: usize, got: usize },
}

/// An `n x n` toroidal graph grid diagram satisfying conditions (i)-(iii).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GridDiagram {
    n: usize,
    cells: Vec<Option<Marking>>,
    o_col: Vec<usize>,
}

impl GridDiagram {
    /// Builds a diagram from marking lists, validating every condition.
    pub fn new(n: usize, o_markings: &[(usize, usize, bool)], x_markings: &[(usize, usize)]) -> Result<Self, DiagramError> {
        if n == 0 {
            return Err(DiagramError::Syntax { line: 1, msg: "grid size must be positive".into() });
        }
        let mut cells = vec![None; n * n];
        for &(r, c, star) in o_markings {
            check_bounds(n, r, c)?;
            if cells[r * n + c].is_some() {
                return Err(DiagramError::Validation {
                    condition: Condition::OnePerLine,
                    detail: format!("two O-type markings at {}", Pos::new(r, c)),
                });
            }
            cells[r * n + c] = Some(if star { Marking::Star } else { Marking::O });
        }
        for &(r, c) in x_markings {
            check_bounds(n, r, c)?;
            match cells[r * n + c] {
                Some(Marking::X) => {
                    return Err(DiagramError::Syntax { line: 0, msg: format!("duplicate X at {}", Pos::new(r, c)) })
                }
                Some(_) => {
                    return Err(DiagramError::Validation {
                        condition: Condition::SharedSquare,
                        detail: format!("O-type and X both at {}", Pos::new(r, c)),
                    })
                }
                None => cells[r * n + c] = Some(Marking::X),
            }
        }
        Self::from_cells(n, cells)
    }

    /// Builds a diagram from a row-major cell array (`cells[row * n + col]`).
    pub fn from_cells(n: usize, cells: Vec<Option<Marking>>) -> Result<Self, DiagramError> {
        assert_eq!(cells.len(), n * n, "cell array has the wrong length");
        let mut o_col = vec![usize::MAX; n];
        for line in 0..n {
            for (axis, name) in [(0, "row"), (1, "column")] {
                let at = |k: usize| if axis == 0 { cells[line * n + k] } else { cells[k * n + line] };
                let o_count = (0..n).filter(|&k| at(k).is_some_and(Marking::is_o_type)).count();
                let x_count = (0..n).filter(|&k| at(k) == Some(Marking::X)).count();
                let has_star = (0..n).any(|k| at(k) == Some(Marking::Star));
                if o_count != 1 {
                    return Err(DiagramError::Validation {
                        condition: Condition::OnePerLine,
                        detail: format!("{name} {line} has {o_count} O-type markings"),
                    });
                }
                if x_count != 1 && !has_star {
                    return Err(DiagramError::Validation {
                        condition: Condition::StarRequired,
                        detail: format!("{name} {line} has {x_count} X's and no O*"),
                    });
                }
                if axis == 0 {
                    o_col[line] = (0..n).find(|&k| at(k).is_some_and(Marking::is_o_type)).unwrap();
                }
            }
        }
        Ok(GridDiagram { n, cells, o_col })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn at(&self, row: usize, col: usize) -> Option<Marking> {
        self.cells[row * self.n + col]
    }

    pub fn cell(&self, p: Pos) -> Option<Marking> {
        self.at(p.row, p.col)
    }

    pub fn cells(&self) -> &[Option<Marking>] {
        &self.cells
    }

    /// Position of the O-type marking in `row`.
    pub fn o_in_row(&self, row: usize) -> Pos {
        Pos::new(row, self.o_col[row])
    }

    /// Position of the O-type marking in `col`.
    pub fn o_in_col(&self, col: usize) -> Pos {
        let row = (0..self.n).find(|&r| self.o_col[r] == col).expect("validated diagram");
        Pos::new(row, col)
    }

    /// O-type markings as `(row, col, is_star)`, one per row in row order.
    pub fn o_markings(&self) -> Vec<(usize, usize, bool)> {
        (0..self.n).map(|r| (r, self.o_col[r], self.at(r, self.o_col[r]) == Some(Marking::Star))).collect()
    }

    pub fn x_markings(&self) -> Vec<Pos> {
        self.positions_of(Marking::X)
    }

    pub fn stars(&self) -> Vec<Pos> {
        self.positions_of(Marking::Star)
    }

    pub fn plain_os(&self) -> Vec<Pos> {
        self.positions_of(Marking::O)
    }

    fn positions_of(&self, m: Marking) -> Vec<Pos> {
        let n = self.n;
        (0..n * n).filter(|&i| self.cells[i] == Some(m)).map(|i| Pos::new(i / n, i % n)).collect()
    }

    /// Number of states, `n!`.
    pub fn state_count(&self) -> u64 {
        (1..=self.n as u64).product()
    }

    /// Parses the text format (header, grid rows top first, optional weights).
    pub fn parse(text: &str) -> Result<Self, DiagramError> {
        DiagramFile::parse(text).map(|f| f.diagram)
    }

    /// Canonical text form: header plus grid rows, top row first.
    pub fn serialize(&self) -> String {
        let mut out = format!("n={}\n", self.n);
        for r in (0..self.n).rev() {
            let line: Vec<String> =
                (0..self.n).map(|c| self.at(r, c).map_or('.', Marking::token).to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Good diagrams: O-type at the top-left and bottom-right corners, X at
    /// the top-right corner.
    pub fn is_good(&self) -> bool {
        let top = self.n - 1;
        self.at(top, 0).is_some_and(Marking::is_o_type)
            && self.at(0, top).is_some_and(Marking::is_o_type)
            && self.at(top, top) == Some(Marking::X)
    }

    /// Traces the spatial graph realized by the diagram.
    pub fn trace(&self) -> Result<SpatialGraphSkeleton, DiagramError> {
        trace_edges(self)
    }
}

fn check_bounds(n: usize, r: usize, c: usize) -> Result<(), DiagramError> {
    if r >= n || c >= n {
        return Err(DiagramError::Syntax { line: 0, msg: format!("marking {} outside a {n}x{n} grid", Pos::new(r, c)) });
    }
    Ok(())
}

impl fmt::Display for GridDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

/// Contents of a diagram file: the grid and an optional edge-weight list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramFile {
    pub diagram: GridDiagram,
    pub weights: Option<Vec<i64>>,
}

impl DiagramFile {
    pub fn parse(text: &str) -> Result<Self, DiagramError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(DiagramError::Syntax { line: 1, msg: "empty input".into() })?;
        let n: usize = header
            .strip_prefix("n=")
            .and_then(|v| v.trim().parse().ok())
            .filter(|&n| n > 0)
            .ok_or_else(|| DiagramError::Syntax { line: hline, msg: format!("expected `n=<size>`, got `{header}`") })?;
        let mut cells = vec![None; n * n];
        for k in 0..n {
            let (lno, line) = lines
                .next()
                .ok_or_else(|| DiagramError::Syntax { line: hline + k + 1, msg: format!("expected {n} grid rows") })?;
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if tokens.len() != n {
                return Err(DiagramError::Syntax { line: lno, msg: format!("expected {n} tokens, got {}", tokens.len()) });
            }
            let row = n - 1 - k;
            for (col, tok) in tokens.iter().enumerate() {
                cells[row * n + col] = match *tok {
                    "." => None,
                    "X" => Some(Marking::X),
                    "O" => Some(Marking::O),
                    "*" => Some(Marking::Star),
                    other => {
                        return Err(DiagramError::Syntax { line: lno, msg: format!("unknown token `{other}`") })
                    }
                };
            }
        }
        let mut weights = None;
        if let Some((lno, line)) = lines.next() {
            let rest = line
                .strip_prefix("weights=")
                .ok_or_else(|| DiagramError::Syntax { line: lno, msg: format!("unexpected line `{line}`") })?;
            let ws = rest
                .split_whitespace()
                .map(|t| t.parse::<i64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| DiagramError::Syntax { line: lno, msg: format!("bad weight: {e}") })?;
            weights = Some(ws);
            if let Some((lno, line)) = lines.next() {
                return Err(DiagramError::Syntax { line: lno, msg: format!("trailing content `{line}`") });
            }
        }
        let diagram = GridDiagram::from_cells(n, cells)?;
        Ok(DiagramFile { diagram, weights })
    }

    pub fn serialize(&self) -> String {
        let mut out = self.diagram.serialize();
        if let Some(ws) = &self.weights {
            out.push_str("weights=");
            for w in ws {
                out.push_str(&format!(" {w}"));
            }
            out.push('\n');
        }
        out
    }

    /// Weighted diagram using the listed weights, or weight 1 on every edge.
    pub fn weighted(&self) -> Result<WeightedDiagram, DiagramError> {
        match &self.weights {
            Some(ws) => WeightedDiagram::new(self.diagram.clone(), ws),
            None => WeightedDiagram::unit(self.diagram.clone()),
        }
    }
}

/// A directed edge of the traced graph: `path` lists its interior markings
/// `X, O, X, ..., X` from the source vertex to the target vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub path: Vec<Pos>,
}

/// The abstract spatial graph realized by a diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpatialGraphSkeleton {
    /// O* positions, sorted by row.
    pub vertices: Vec<Pos>,
    pub edges: Vec<Edge>,
    pub in_edges: Vec<Vec<usize>>,
    pub out_edges: Vec<Vec<usize>>,
}

impl SpatialGraphSkeleton {
    pub fn is_sink(&self, v: usize) -> bool {
        self.out_edges[v].is_empty() && !self.in_edges[v].is_empty()
    }

    pub fn is_source(&self, v: usize) -> bool {
        self.in_edges[v].is_empty() && !self.out_edges[v].is_empty()
    }

    pub fn has_sink_or_source(&self) -> bool {
        (0..self.vertices.len()).any(|v| self.is_sink(v) || self.is_source(v))
    }

    /// Edge containing the given interior marking.
    pub fn edge_of(&self, p: Pos) -> Option<usize> {
        self.edges.iter().position(|e| e.path.contains(&p))
    }

    /// Sorted `(in-degree, out-degree)` per vertex and sorted edge endpoint
    /// degree pairs; equal for isomorphic traced graphs up to relabeling.
    pub fn shape(&self) -> (Vec<(usize, usize)>, usize) {
        let mut degs: Vec<(usize, usize)> =
            (0..self.vertices.len()).map(|v| (self.in_edges[v].len(), self.out_edges[v].len())).collect();
        degs.sort_unstable();
        (degs, self.edges.len())
    }
}

/// Traces edges: horizontal segments run from the O-type marking of a row to
/// its X's, vertical segments from the X's of a column to its O-type marking.
pub fn trace_edges(d: &GridDiagram) -> Result<SpatialGraphSkeleton, DiagramError> {
    let n = d.size();
    let vertices = d.stars();
    let vertex_index: HashMap<Pos, usize> = vertices.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut edges = Vec::new();
    let mut in_edges = vec![Vec::new(); vertices.len()];
    let mut out_edges = vec![Vec::new(); vertices.len()];
    let mut covered = 0usize;
    for (vi, &v) in vertices.iter().enumerate() {
        for col in 0..n {
            if d.at(v.row, col) != Some(Marking::X) {
                continue;
            }
            let mut path = vec![Pos::new(v.row, col)];
            loop {
                let x = *path.last().unwrap();
                let o = d.o_in_col(x.col);
                if let Some(&to) = vertex_index.get(&o) {
                    let ei = edges.len();
                    out_edges[vi].push(ei);
                    in_edges[to].push(ei);
                    covered += path.len();
                    edges.push(Edge { from: vi, to, path });
                    break;
                }
                if path.len() > 2 * n {
                    return Err(DiagramError::Trace(format!("edge leaving {v} does not terminate")));
                }
                let next_x = (0..n)
                    .find(|&c| d.at(o.row, c) == Some(Marking::X))
                    .ok_or_else(|| DiagramError::Trace(format!("row of {o} has no X")))?;
                path.push(o);
                path.push(Pos::new(o.row, next_x));
            }
        }
    }
    let interior = d.x_markings().len() + d.plain_os().len();
    if covered != interior {
        return Err(DiagramError::Trace(format!(
            "{} markings lie on closed curves not connected to any O*",
            interior - covered
        )));
    }
    Ok(SpatialGraphSkeleton { vertices, edges, in_edges, out_edges })
}

/// A diagram with a balanced coloring and the induced marking weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedDiagram {
    diagram: GridDiagram,
    skeleton: SpatialGraphSkeleton,
    edge_weights: Vec<i64>,
    marking_weight: Vec<i64>,
}

impl WeightedDiagram {
    /// Assigns edge weights in trace order and checks balance at every vertex.
    pub fn new(diagram: GridDiagram, edge_weights: &[i64]) -> Result<Self, DiagramError> {
        let skeleton = trace_edges(&diagram)?;
        Self::with_skeleton(diagram, skeleton, edge_weights.to_vec())
    }

    /// Weight 1 on every edge.
    pub fn unit(diagram: GridDiagram) -> Result<Self, DiagramError> {
        let skeleton = trace_edges(&diagram)?;
        let ws = vec![1; skeleton.edges.len()];
        Self::with_skeleton(diagram, skeleton, ws)
    }

    fn with_skeleton(diagram: GridDiagram, skeleton: SpatialGraphSkeleton, edge_weights: Vec<i64>) -> Result<Self, DiagramError> {
        if edge_weights.len() != skeleton.edges.len() {
            return Err(DiagramError::WeightCount { expected: skeleton.edges.len(), got: edge_weights.len() });
        }
        let n = diagram.size();
        let mut marking_weight = vec![0; n * n];
        for (e, &w) in skeleton.edges.iter().zip(&edge_weights) {
            for p in &e.path {
                marking_weight[p.row * n + p.col] = w;
            }
        }
        for (v, &p) in skeleton.vertices.iter().enumerate() {
            let in_sum: i64 = skeleton.in_edges[v].iter().map(|&e| edge_weights[e]).sum();
            let out_sum: i64 = skeleton.out_edges[v].iter().map(|&e| edge_weights[e]).sum();
            if in_sum != out_sum {
                return Err(DiagramError::Balance { vertex: v, pos: p, in_sum, out_sum });
            }
            marking_weight[p.row * n + p.col] = in_sum;
        }
        Ok(WeightedDiagram { diagram, skeleton, edge_weights, marking_weight })
    }

    /// Builds weights from per-X weights; each edge takes the weight of its
    /// first X. Used when a construction moves markings around.
    pub(crate) fn from_x_weights(diagram: GridDiagram, x_weight: &HashMap<Pos, i64>) -> Result<Self, DiagramError> {
        let skeleton = trace_edges(&diagram)?;
        let ws = skeleton
            .edges
            .iter()
            .map(|e| {
                x_weight.get(&e.path[0]).copied().ok_or_else(|| DiagramError::Trace(format!("no weight for X at {}", e.path[0])))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::with_skeleton(diagram, skeleton, ws)
    }

    pub fn diagram(&self) -> &GridDiagram {
        &self.diagram
    }

    pub fn skeleton(&self) -> &SpatialGraphSkeleton {
        &self.skeleton
    }

    pub fn edge_weights(&self) -> &[i64] {
        &self.edge_weights
    }

    /// Weight of the marking in cell `p` (0 for an empty cell).
    pub fn weight(&self, p: Pos) -> i64 {
        self.marking_weight[p.row * self.diagram.size() + p.col]
    }

    pub fn vertex_weight(&self, v: usize) -> i64 {
        self.weight(self.skeleton.vertices[v])
    }

    /// Weights of the plain O markings, in row order.
    pub fn plain_o_weights(&self) -> Vec<i64> {
        self.diagram.plain_os().into_iter().map(|p| self.weight(p)).collect()
    }

    pub fn size(&self) -> usize {
        self.diagram.size()
    }

    pub fn to_file(&self) -> DiagramFile {
        DiagramFile { diagram: self.diagram.clone(), weights: Some(self.edge_weights.clone()) }
    }
}

/// A toroidal diagram cut open along the horizontal circle `cut_row` and the
/// vertical circle `cut_col`; those circles become the bottom and left
/// edges of the planar square.
#[derive(Clone, Copy, Debug)]
pub struct PlanarRealization<'a> {
    pub diagram: &'a GridDiagram,
    pub cut_row: usize,
    pub cut_col: usize,
}

impl<'a> PlanarRealization<'a> {
    pub fn new(diagram: &'a GridDiagram, cut_row: usize, cut_col: usize) -> Self {
        let n = diagram.size();
        PlanarRealization { diagram, cut_row: cut_row % n, cut_col: cut_col % n }
    }

    pub fn canonical(diagram: &'a GridDiagram) -> Self {
        Self::new(diagram, 0, 0)
    }

    pub fn planar_row(&self, row: usize) -> usize {
        let n = self.diagram.size();
        (row + n - self.cut_row) % n
    }

    pub fn planar_col(&self, col: usize) -> usize {
        let n = self.diagram.size();
        (col + n - self.cut_col) % n
    }

    /// The cut-open diagram as an ordinary diagram with cut circles at 0.
    pub fn to_diagram(&self) -> GridDiagram {
        let n = self.diagram.size();
        let mut cells = vec![None; n * n];
        for r in 0..n {
            for c in 0..n {
                cells[self.planar_row(r) * n + self.planar_col(c)] = self.diagram.at(r, c);
            }
        }
        GridDiagram::from_cells(n, cells).expect("cyclic relabeling keeps a diagram valid")
    }
}

/// The grid-like diagram used for the acyclic complex `C_n`: one O* in the
/// top-right cell, X's filling the rest of the top row and right column, and
/// an empty lower-left `(n-1) x (n-1)` block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureCn {
    pub n: usize,
    pub star: Pos,
    pub xs: Vec<Pos>,
}

impl FixtureCn {
    /// Cells that block rectangles (the O* and every X).
    pub fn blocked(&self) -> Vec<Pos> {
        let mut v = self.xs.clone();
        v.push(self.star);
        v
    }
}

pub fn build_cn_fixture(n: usize) -> FixtureCn {
    assert!(n >= 2, "C_n needs n >= 2");
    let top = n - 1;
    let mut xs: Vec<Pos> = (0..top).map(|c| Pos::new(top, c)).collect();
    xs.extend((0..top).map(|r| Pos::new(r, top)));
    FixtureCn { n, star: Pos::new(top, top), xs }
}

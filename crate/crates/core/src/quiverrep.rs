//! Quivers, their doubled quivers, and representations by polynomial matrices.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactpoly::{Polynomial, Rational, VarId};
use crate::symmatrix::{MatrixError, SymMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuiverError {
    #[error("malformed quiver JSON at line {line}, column {column}: {msg}")]
    Json { line: usize, column: usize, msg: String },
    #[error("{location}: duplicate vertex id {id:?}")]
    DuplicateVertex { location: String, id: String },
    #[error("{location}: duplicate arrow id {id:?}")]
    DuplicateArrow { location: String, id: String },
    #[error("{location}: dangling vertex {id:?}")]
    DanglingVertex { location: String, id: String },
    #[error("{location}: dimension must be positive")]
    BadDimension { location: String },
    #[error("unknown edge {0:?}")]
    UnknownEdge(String),
    #[error("arrow {arrow:?} expects a {rows}x{cols} matrix, got {got_rows}x{got_cols}")]
    MatrixShape { arrow: String, rows: usize, cols: usize, got_rows: usize, got_cols: usize },
    #[error("representation is missing a matrix for arrow {0:?}")]
    MissingMatrix(String),
    #[error("arrow {arrow:?} has a non-square matrix ({rows}x{cols}); its reverse edge is undefined")]
    NonSquare { arrow: String, rows: usize, cols: usize },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Arrow {
    pub name: String,
    pub tail: String,
    pub head: String,
}

/// A finite directed multigraph; loops and parallel arrows are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    vertex_index: HashMap<String, usize>,
    arrow_index: HashMap<String, usize>,
    tails: Vec<usize>,
    heads: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QuiverJson {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    #[serde(default)]
    dims: Option<BTreeMap<String, i64>>,
}

/// A parsed quiver file: the quiver plus its dimension vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuiverFile {
    pub quiver: Quiver,
    pub dims: Vec<usize>,
}

impl Quiver {
    pub fn new(vertices: Vec<String>, arrows: Vec<Arrow>) -> Result<Self, QuiverError> {
        let mut vertex_index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.clone(), i).is_some() {
                return Err(QuiverError::DuplicateVertex { location: format!("vertices[{i}]"), id: v.clone() });
            }
        }
        let mut arrow_index = HashMap::new();
        let (mut tails, mut heads) = (Vec::new(), Vec::new());
        for (i, a) in arrows.iter().enumerate() {
            if arrow_index.insert(a.name.clone(), i).is_some() {
                return Err(QuiverError::DuplicateArrow { location: format!("arrows[{i}].name"), id: a.name.clone() });
            }
            let lookup = |id: &str, field: &str| {
                vertex_index.get(id).copied().ok_or_else(|| QuiverError::DanglingVertex {
                    location: format!("arrows[{i}].{field}"),
                    id: id.to_string(),
                })
            };
            tails.push(lookup(&a.tail, "tail")?);
            heads.push(lookup(&a.head, "head")?);
        }
        Ok(Quiver { vertices, arrows, vertex_index, arrow_index, tails, heads })
    }

    /// Convenience constructor from `(name, tail, head)` triples.
    pub fn from_triples(vertices: &[&str], arrows: &[(&str, &str, &str)]) -> Result<Self, QuiverError> {
        Quiver::new(
            vertices.iter().map(|s| s.to_string()).collect(),
            arrows
                .iter()
                .map(|(n, t, h)| Arrow { name: n.to_string(), tail: t.to_string(), head: h.to_string() })
                .collect(),
        )
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertex_index.get(id).copied()
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrow_index.get(name).copied()
    }

    pub fn tail(&self, arrow: usize) -> usize {
        self.tails[arrow]
    }

    pub fn head(&self, arrow: usize) -> usize {
        self.heads[arrow]
    }

    pub fn arrow_name(&self, arrow: usize) -> &str {
        &self.arrows[arrow].name
    }

    /// All-2 dimension vector.
    pub fn twos(&self) -> Vec<usize> {
        vec![2; self.vertices.len()]
    }
}

pub fn parse_quiver(text: &[u8]) -> Result<Quiver, QuiverError> {
    parse_quiver_file(text).map(|f| f.quiver)
}

/// Parses the quiver JSON format; `dims` defaults every vertex to 2.
pub fn parse_quiver_file(text: &[u8]) -> Result<QuiverFile, QuiverError> {
    let raw: QuiverJson = serde_json::from_slice(text).map_err(|e| QuiverError::Json {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })?;
    let quiver = Quiver::new(raw.vertices, raw.arrows)?;
    let mut dims = quiver.twos();
    if let Some(map) = raw.dims {
        for (v, d) in map {
            let idx = quiver.vertex_index(&v).ok_or_else(|| QuiverError::DanglingVertex {
                location: format!("dims.{v}"),
                id: v.clone(),
            })?;
            if d <= 0 {
                return Err(QuiverError::BadDimension { location: format!("dims.{v}") });
            }
            dims[idx] = d as usize;
        }
    }
    Ok(QuiverFile { quiver, dims })
}

/// An edge of the doubled quiver: an arrow or the reverse of one.
///
/// The derived order puts all base arrows before all reverse edges, each
/// group in arrow declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DoubledEdge {
    pub reversed: bool,
    pub arrow: usize,
}

impl DoubledEdge {
    pub fn base(arrow: usize) -> Self {
        DoubledEdge { reversed: false, arrow }
    }

    pub fn rev(arrow: usize) -> Self {
        DoubledEdge { reversed: true, arrow }
    }

    pub fn partner(self) -> Self {
        DoubledEdge { reversed: !self.reversed, arrow: self.arrow }
    }
}

/// The quiver with one reverse edge `rev_a` added per arrow `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubledQuiver {
    base: Quiver,
}

pub fn double(q: &Quiver) -> DoubledQuiver {
    DoubledQuiver { base: q.clone() }
}

impl DoubledQuiver {
    pub fn base(&self) -> &Quiver {
        &self.base
    }

    /// Base arrows first, then reverse edges.
    pub fn edges(&self) -> Vec<DoubledEdge> {
        let s = self.base.num_arrows();
        (0..s).map(DoubledEdge::base).chain((0..s).map(DoubledEdge::rev)).collect()
    }

    pub fn tail(&self, e: DoubledEdge) -> usize {
        edge_tail(&self.base, e)
    }

    pub fn head(&self, e: DoubledEdge) -> usize {
        edge_head(&self.base, e)
    }

    /// Identifier: `a` or `rev_a`.
    pub fn edge_id(&self, e: DoubledEdge) -> String {
        edge_id(&self.base, e)
    }
}

pub fn edge_tail(q: &Quiver, e: DoubledEdge) -> usize {
    if e.reversed {
        q.head(e.arrow)
    } else {
        q.tail(e.arrow)
    }
}

pub fn edge_head(q: &Quiver, e: DoubledEdge) -> usize {
    if e.reversed {
        q.tail(e.arrow)
    } else {
        q.head(e.arrow)
    }
}

pub fn edge_id(q: &Quiver, e: DoubledEdge) -> String {
    if e.reversed {
        format!("rev_{}", q.arrow_name(e.arrow))
    } else {
        q.arrow_name(e.arrow).to_string()
    }
}

/// Route text form of an edge: `a` or `~a`.
pub fn edge_text(q: &Quiver, e: DoubledEdge) -> String {
    if e.reversed {
        format!("~{}", q.arrow_name(e.arrow))
    } else {
        q.arrow_name(e.arrow).to_string()
    }
}

/// Accepts `a`, `~a` and `rev_a`.
pub fn parse_edge(q: &Quiver, text: &str) -> Result<DoubledEdge, QuiverError> {
    let t = text.trim();
    if let Some(rest) = t.strip_prefix('~') {
        return q.arrow_index(rest).map(DoubledEdge::rev).ok_or_else(|| QuiverError::UnknownEdge(t.into()));
    }
    if let Some(i) = q.arrow_index(t) {
        return Ok(DoubledEdge::base(i));
    }
    if let Some(rest) = t.strip_prefix("rev_") {
        if let Some(i) = q.arrow_index(rest) {
            return Ok(DoubledEdge::rev(i));
        }
    }
    Err(QuiverError::UnknownEdge(t.into()))
}

/// A representation: a dimension per vertex and a `dim(head) x dim(tail)`
/// matrix per arrow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    quiver: Quiver,
    dims: Vec<usize>,
    matrices: Vec<SymMatrix>,
}

impl Representation {
    pub fn new(quiver: &Quiver, dims: Vec<usize>, matrices: Vec<SymMatrix>) -> Result<Self, QuiverError> {
        assert_eq!(dims.len(), quiver.vertices().len(), "one dimension per vertex");
        if matrices.len() != quiver.num_arrows() {
            let missing = quiver.arrow_name(matrices.len().min(quiver.num_arrows().saturating_sub(1)));
            return Err(QuiverError::MissingMatrix(missing.to_string()));
        }
        for (i, m) in matrices.iter().enumerate() {
            let (rows, cols) = (dims[quiver.head(i)], dims[quiver.tail(i)]);
            if m.rows() != rows || m.cols() != cols {
                return Err(QuiverError::MatrixShape {
                    arrow: quiver.arrow_name(i).to_string(),
                    rows,
                    cols,
                    got_rows: m.rows(),
                    got_cols: m.cols(),
                });
            }
        }
        Ok(Representation { quiver: quiver.clone(), dims, matrices })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, vertex: usize) -> usize {
        self.dims[vertex]
    }

    pub fn matrix(&self, arrow: usize) -> &SymMatrix {
        &self.matrices[arrow]
    }

    pub fn matrices(&self) -> &[SymMatrix] {
        &self.matrices
    }

    pub fn all_dims_equal(&self, d: usize) -> bool {
        self.dims.iter().all(|&x| x == d)
    }

    /// Bindings sending each generic variable `x_<a>_<p>_<q>` to the
    /// corresponding entry of this representation.
    pub fn bindings(&self) -> HashMap<VarId, Polynomial> {
        let mut out = HashMap::new();
        for (i, m) in self.matrices.iter().enumerate() {
            let name = self.quiver.arrow_name(i);
            for r in 0..m.rows() {
                for c in 0..m.cols() {
                    out.insert(VarId::arrow(name, r as u32 + 1, c as u32 + 1), m.get(r, c).clone());
                }
            }
        }
        out
    }

    /// The entries as rational values, when every matrix is constant.
    pub fn values(&self) -> Option<HashMap<VarId, Rational>> {
        self.bindings().into_iter().map(|(v, p)| p.as_constant().map(|c| (v, c))).collect()
    }

    /// Same representation with the matrix of one arrow replaced.
    pub fn with_matrix(&self, arrow: usize, m: SymMatrix) -> Result<Self, QuiverError> {
        let mut matrices = self.matrices.clone();
        matrices[arrow] = m;
        Representation::new(&self.quiver, self.dims.clone(), matrices)
    }
}

/// Every arrow gets the matrix of fresh variables `x_<arrow>_<row>_<col>`.
pub fn generic_representation(q: &Quiver, dims: &[usize]) -> Representation {
    let matrices = (0..q.num_arrows())
        .map(|i| SymMatrix::generic(q.arrow_name(i), dims[q.head(i)], dims[q.tail(i)]))
        .collect();
    Representation { quiver: q.clone(), dims: dims.to_vec(), matrices }
}

/// The matrix of an edge in the associated representation of the doubled
/// quiver: the arrow's matrix, or its adjugate for a reverse edge.
pub fn associated_matrix(rep: &Representation, edge: DoubledEdge) -> Result<SymMatrix, QuiverError> {
    let m = rep.matrix(edge.arrow);
    if !edge.reversed {
        return Ok(m.clone());
    }
    if !m.is_square() {
        return Err(QuiverError::NonSquare {
            arrow: rep.quiver.arrow_name(edge.arrow).to_string(),
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    Ok(m.adjugate()?)
}

impl fmt::Display for Quiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "vertices {{{}}}; arrows", self.vertices.join(", "))?;
        for a in &self.arrows {
            write!(f, " {}: {} -> {}", a.name, a.tail, a.head)?;
        }
        Ok(())
    }
}

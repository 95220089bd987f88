//! Block matrices `Z = (y_rs F_rs)` whose determinants expand in the block
//! variables `y_rs` into semi-invariants, membership of those coefficients in
//! the algebra generated by route traces, and the dimension-3 counterexample.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use serde::Deserialize;
use thiserror::Error;

use crate::blockdet::{route_set_of_multidegree, BlockError, BlockMatrix};
use crate::exactpoly::{Monomial, Polynomial, Rational, VarId};
use crate::groupaction::{act, GroupElement};
use crate::linsolve;
use crate::quiverrep::{associated_matrix, DoubledEdge, Quiver, QuiverError, Representation};
use crate::routes::{enumerate_simple_routes, route_trace, Route, RouteError};
use crate::sampling::Sampler;
use crate::symmatrix::{MatrixError, SymMatrix};

/// Longest product of generator traces tried by the membership solver.
pub const DEFAULT_PRODUCT_CAP: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DzError {
    #[error("malformed block spec JSON at line {line}, column {column}: {msg}")]
    Json { line: usize, column: usize, msg: String },
    #[error("{location}: unknown vertex {id:?}")]
    UnknownVertex { location: String, id: String },
    #[error("filler grid must be {rows}x{cols} (|j| x |i|)")]
    GridShape { rows: usize, cols: usize },
    #[error("cell ({r},{s}): unrecognised filler {text:?} (expected \"0\", \"id\" or \"arrow:<name>\")")]
    BadFiller { r: usize, s: usize, text: String },
    #[error("cell ({r},{s}): unknown arrow {name:?}")]
    UnknownArrow { r: usize, s: usize, name: String },
    #[error("cell ({r},{s}): identity needs i_{s} = j_{r}, got {i:?} and {j:?}")]
    IdentityMismatch { r: usize, s: usize, i: String, j: String },
    #[error("cell ({r},{s}): arrow {arrow:?} goes {tail} -> {head}, cell needs {i} -> {j}")]
    ArrowMismatch { r: usize, s: usize, arrow: String, tail: String, head: String, i: String, j: String },
    #[error("block matrix is {rows}x{cols}; dimensions over i and j must have equal sums")]
    NotSquare { rows: usize, cols: usize },
    #[error("polynomial is not homogeneous in the variables of each arrow")]
    NotHomogeneous,
    #[error("membership search hit the product-length cap {cap} without finding a combination")]
    CapacityExceeded { cap: usize },
    #[error("route-trace comparison needs 2x2 blocks in a square block grid")]
    NotTwoBlocks,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Route(#[from] RouteError),
    #[error(transparent)]
    Block(#[from] BlockError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Filler {
    Zero,
    Identity,
    Arrow(String),
}

impl Filler {
    fn parse(text: &str) -> Option<Filler> {
        match text {
            "0" => Some(Filler::Zero),
            "id" => Some(Filler::Identity),
            _ => text.strip_prefix("arrow:").filter(|n| !n.is_empty()).map(|n| Filler::Arrow(n.to_string())),
        }
    }
}

impl fmt::Display for Filler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Filler::Zero => write!(f, "0"),
            Filler::Identity => write!(f, "id"),
            Filler::Arrow(a) => write!(f, "arrow:{a}"),
        }
    }
}

/// Vertex tuples `i` (block columns) and `j` (block rows) with one filler
/// per block; `fillers[r][s]` maps `W(i_s)` to `W(j_r)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DZSpec {
    pub i_tuple: Vec<String>,
    pub j_tuple: Vec<String>,
    pub fillers: Vec<Vec<Filler>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DZJson {
    i: Vec<String>,
    j: Vec<String>,
    #[serde(rename = "F")]
    f: Vec<Vec<String>>,
}

impl DZSpec {
    pub fn new(i_tuple: &[&str], j_tuple: &[&str], fillers: Vec<Vec<Filler>>) -> Self {
        DZSpec {
            i_tuple: i_tuple.iter().map(|s| s.to_string()).collect(),
            j_tuple: j_tuple.iter().map(|s| s.to_string()).collect(),
            fillers,
        }
    }

    /// Parses `{"i": [...], "j": [...], "F": [["0" | "id" | "arrow:<name>", ...], ...]}`.
    pub fn parse(text: &[u8]) -> Result<DZSpec, DzError> {
        let raw: DZJson = serde_json::from_slice(text).map_err(|e| DzError::Json {
            line: e.line(),
            column: e.column(),
            msg: e.to_string(),
        })?;
        if raw.f.len() != raw.j.len() || raw.f.iter().any(|row| row.len() != raw.i.len()) {
            return Err(DzError::GridShape { rows: raw.j.len(), cols: raw.i.len() });
        }
        let mut fillers = Vec::with_capacity(raw.f.len());
        for (r, row) in raw.f.iter().enumerate() {
            let mut out = Vec::with_capacity(row.len());
            for (s, cell) in row.iter().enumerate() {
                out.push(Filler::parse(cell).ok_or_else(|| DzError::BadFiller { r: r + 1, s: s + 1, text: cell.clone() })?);
            }
            fillers.push(out);
        }
        Ok(DZSpec { i_tuple: raw.i, j_tuple: raw.j, fillers })
    }

    pub fn block_rows(&self) -> usize {
        self.j_tuple.len()
    }

    pub fn block_cols(&self) -> usize {
        self.i_tuple.len()
    }

    /// Checks the block layout against a quiver and dimension vector, reporting the
    /// first offending cell (1-based).
    pub fn validate(&self, q: &Quiver, dims: &[usize]) -> Result<(), DzError> {
        let lookup = |location: String, id: &str| {
            q.vertex_index(id).ok_or_else(|| DzError::UnknownVertex { location, id: id.to_string() })
        };
        let is: Vec<usize> =
            self.i_tuple.iter().enumerate().map(|(s, v)| lookup(format!("i[{s}]"), v)).collect::<Result<_, _>>()?;
        let js: Vec<usize> =
            self.j_tuple.iter().enumerate().map(|(r, v)| lookup(format!("j[{r}]"), v)).collect::<Result<_, _>>()?;
        if self.fillers.len() != js.len() || self.fillers.iter().any(|row| row.len() != is.len()) {
            return Err(DzError::GridShape { rows: js.len(), cols: is.len() });
        }
        for (r, row) in self.fillers.iter().enumerate() {
            for (s, cell) in row.iter().enumerate() {
                let (iv, jv) = (&self.i_tuple[s], &self.j_tuple[r]);
                match cell {
                    Filler::Zero => {}
                    Filler::Identity => {
                        if is[s] != js[r] {
                            return Err(DzError::IdentityMismatch { r: r + 1, s: s + 1, i: iv.clone(), j: jv.clone() });
                        }
                    }
                    Filler::Arrow(name) => {
                        let a = q
                            .arrow_index(name)
                            .ok_or_else(|| DzError::UnknownArrow { r: r + 1, s: s + 1, name: name.clone() })?;
                        if q.tail(a) != is[s] || q.head(a) != js[r] {
                            return Err(DzError::ArrowMismatch {
                                r: r + 1,
                                s: s + 1,
                                arrow: name.clone(),
                                tail: q.vertices()[q.tail(a)].clone(),
                                head: q.vertices()[q.head(a)].clone(),
                                i: iv.clone(),
                                j: jv.clone(),
                            });
                        }
                    }
                }
            }
        }
        let rows: usize = js.iter().map(|&v| dims[v]).sum();
        let cols: usize = is.iter().map(|&v| dims[v]).sum();
        if rows != cols {
            return Err(DzError::NotSquare { rows, cols });
        }
        Ok(())
    }
}

/// The blocks `F_rs` evaluated on `rep`, without the `y` scalars.
pub fn dz_blocks(spec: &DZSpec, rep: &Representation) -> Result<Vec<Vec<SymMatrix>>, DzError> {
    let q = rep.quiver();
    spec.validate(q, rep.dims())?;
    let dim_of = |v: &str| rep.dim(q.vertex_index(v).expect("validated"));
    Ok(spec
        .fillers
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let rows = dim_of(&spec.j_tuple[r]);
            row.iter()
                .enumerate()
                .map(|(s, cell)| match cell {
                    Filler::Zero => SymMatrix::zeros(rows, dim_of(&spec.i_tuple[s])),
                    Filler::Identity => SymMatrix::identity(rows),
                    Filler::Arrow(name) => rep.matrix(q.arrow_index(name).expect("validated")).clone(),
                })
                .collect()
        })
        .collect())
}

/// The assembled matrix whose `(r, s)` block is `y_rs F_rs`.
pub fn build_dz_matrix(spec: &DZSpec, rep: &Representation) -> Result<SymMatrix, DzError> {
    let blocks = dz_blocks(spec, rep)?;
    let row_dims: Vec<usize> = blocks.iter().map(|row| row[0].rows()).collect();
    let col_dims: Vec<usize> = blocks[0].iter().map(SymMatrix::cols).collect();
    let n: usize = row_dims.iter().sum();
    let mut z = SymMatrix::zeros(n, n);
    let mut r0 = 0;
    for (r, row) in blocks.iter().enumerate() {
        let mut c0 = 0;
        for (s, b) in row.iter().enumerate() {
            let y = Polynomial::var(VarId::block(r as u32 + 1, s as u32 + 1));
            for i in 0..b.rows() {
                for j in 0..b.cols() {
                    if !b.get(i, j).is_zero() {
                        z.set(r0 + i, c0 + j, &y * b.get(i, j));
                    }
                }
            }
            c0 += col_dims[s];
        }
        r0 += row_dims[r];
    }
    Ok(z)
}

/// One coefficient `h_mu` of the block determinant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiInvariant {
    /// `multidegree[r][s]` is the exponent of `y_(r+1)(s+1)`.
    pub multidegree: Vec<Vec<u32>>,
    pub value: Polynomial,
}

impl SemiInvariant {
    pub fn monomial(&self) -> Monomial {
        multidegree_monomial(&self.multidegree)
    }
}

pub fn multidegree_monomial(mu: &[Vec<u32>]) -> Monomial {
    Monomial::from_pairs(mu.iter().enumerate().flat_map(|(r, row)| {
        row.iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(move |(s, &e)| (VarId::block(r as u32 + 1, s as u32 + 1), e))
    }))
}

/// All nonzero coefficients of the block determinant in the `y` variables,
/// in monomial order.
pub fn extract_semiinvariants(spec: &DZSpec, rep: &Representation) -> Result<Vec<SemiInvariant>, DzError> {
    let det = build_dz_matrix(spec, rep)?.det()?;
    let (rows, cols) = (spec.block_rows(), spec.block_cols());
    Ok(det
        .expand_in(VarId::is_block_var)
        .into_iter()
        .map(|(m, value)| {
            let mut mu = vec![vec![0u32; cols]; rows];
            for (v, e) in m.iter() {
                if let VarId::BlockVar { r, s } = v {
                    mu[*r as usize - 1][*s as usize - 1] = *e;
                }
            }
            SemiInvariant { multidegree: mu, value }
        })
        .collect())
}

/// The coefficient at `y^mu` alone. Minors are truncated to monomials whose
/// `y` exponents stay within `mu`, which keeps large specs tractable.
pub fn coefficient_at(spec: &DZSpec, rep: &Representation, mu: &[Vec<u32>]) -> Result<Polynomial, DzError> {
    let z = build_dz_matrix(spec, rep)?;
    let pattern = multidegree_monomial(mu);
    let within = |m: &Monomial| {
        m.iter().all(|(v, e)| match v {
            VarId::BlockVar { r, s } => mu
                .get(*r as usize - 1)
                .and_then(|row| row.get(*s as usize - 1))
                .is_some_and(|&cap| *e <= cap),
            _ => true,
        })
    };
    let det = z.det_filtered(within)?;
    let scope: BTreeSet<VarId> = (1..=spec.block_rows() as u32)
        .flat_map(|r| (1..=spec.block_cols() as u32).map(move |s| VarId::block(r, s)))
        .collect();
    det.coeff_extract(&pattern, &scope).map_err(|_| unreachable!("pattern built from scope"))
}

/// The route-trace product predicted for `h_mu` when every block is 2x2 and
/// `mu` selects exactly two blocks per block row and column.
pub fn coefficient_via_routes(spec: &DZSpec, rep: &Representation, mu: &[Vec<u32>]) -> Result<Polynomial, DzError> {
    let blocks = dz_blocks(spec, rep)?;
    let k = blocks.len();
    if blocks.iter().any(|row| row.len() != k || row.iter().any(|b| b.rows() != 2 || b.cols() != 2)) {
        return Err(DzError::NotTwoBlocks);
    }
    let z = BlockMatrix::from_fn(k, |r, s| blocks[r - 1][s - 1].clone())?;
    Ok(route_set_of_multidegree(mu)?.term(&z)?)
}

/// Per-arrow degree vector of a polynomial homogeneous in each arrow block.
pub fn arrow_multidegree(q: &Quiver, f: &Polynomial) -> Result<Vec<u32>, DzError> {
    let mut out: Option<Vec<u32>> = None;
    for (m, _) in f.terms() {
        let mut d = vec![0u32; q.num_arrows()];
        for (v, e) in m.iter() {
            match v.arrow_name().and_then(|a| q.arrow_index(a)) {
                Some(a) => d[a] += e,
                None => return Err(DzError::NotHomogeneous),
            }
        }
        match &out {
            None => out = Some(d),
            Some(prev) if *prev != d => return Err(DzError::NotHomogeneous),
            _ => {}
        }
    }
    Ok(out.unwrap_or_else(|| vec![0; q.num_arrows()]))
}

/// An exact expression `sum c * prod tr(P)` over a list of generator routes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Combination {
    pub generators: Vec<Route>,
    /// Multisets of generator indices (sorted) with their coefficients.
    pub terms: Vec<(Vec<usize>, Rational)>,
}

impl Combination {
    pub fn text(&self, q: &Quiver) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (idx, c)) in self.terms.iter().enumerate() {
            let neg = c < &Rational::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            for (pos, &g) in idx.iter().enumerate() {
                if pos > 0 && idx[pos - 1] == g {
                    continue;
                }
                let power = idx[pos..].iter().take_while(|&&h| h == g).count();
                let base = format!("tr{}", self.generators[g].text(q));
                factors.push(if power > 1 { format!("{base}^{power}") } else { base });
            }
            if factors.is_empty() {
                out.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    out.push_str(&format!("{abs}*"));
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }

    pub fn evaluate(&self, rep: &Representation) -> Result<Polynomial, DzError> {
        let traces = self.generators.iter().map(|g| route_trace(g, rep)).collect::<Result<Vec<_>, _>>()?;
        let mut acc = Polynomial::zero();
        for (idx, c) in &self.terms {
            let mut p = Polynomial::constant(c.clone());
            for &g in idx {
                p = &p * &traces[g];
            }
            acc += &p;
        }
        Ok(acc)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    Found(Combination),
    NotFound,
}

/// All multisets of generator indices whose degree vectors sum to `target`,
/// with at most `cap` factors. The flag records whether the cap cut off a
/// branch that still had degree left to fill.
fn degree_matched_products(degrees: &[Vec<u32>], target: &[u32], cap: usize) -> (Vec<Vec<usize>>, bool) {
    fn go(
        degrees: &[Vec<u32>],
        start: usize,
        left: &mut Vec<u32>,
        cap: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        hit: &mut bool,
    ) {
        if left.iter().all(|&x| x == 0) {
            out.push(cur.clone());
            return;
        }
        if cur.len() == cap {
            *hit = true;
            return;
        }
        for g in start..degrees.len() {
            if degrees[g].iter().zip(left.iter()).all(|(d, l)| d <= l) {
                for (l, d) in left.iter_mut().zip(&degrees[g]) {
                    *l -= d;
                }
                cur.push(g);
                go(degrees, g, left, cap, cur, out, hit);
                cur.pop();
                for (l, d) in left.iter_mut().zip(&degrees[g]) {
                    *l += d;
                }
            }
        }
    }
    let mut out = Vec::new();
    let mut hit = false;
    go(degrees, 0, &mut target.to_vec(), cap, &mut Vec::new(), &mut out, &mut hit);
    (out, hit)
}

/// Membership of `h` (in the generic variables) in the algebra generated by
/// the traces of `gens`, by exact linear solving over all degree-matched
/// products of at most `min(total degree of h, DEFAULT_PRODUCT_CAP)` traces.
pub fn membership_in_trace_algebra(h: &Polynomial, gens: &[Route], rep: &Representation) -> Result<Membership, DzError> {
    let cap = (h.total_degree().max(0) as usize).min(DEFAULT_PRODUCT_CAP);
    membership_with_cap(h, gens, rep, cap)
}

pub fn membership_with_cap(h: &Polynomial, gens: &[Route], rep: &Representation, cap: usize) -> Result<Membership, DzError> {
    let q = rep.quiver();
    let target = arrow_multidegree(q, h)?;
    let mut kept: Vec<Route> = Vec::new();
    let mut traces = Vec::new();
    let mut degrees = Vec::new();
    for g in gens {
        let t = route_trace(g, rep)?;
        if t.is_zero() {
            continue;
        }
        let d = arrow_multidegree(q, &t)?;
        if d.iter().all(|&x| x == 0) {
            continue;
        }
        kept.push(g.clone());
        traces.push(t);
        degrees.push(d);
    }
    let (products, hit) = degree_matched_products(&degrees, &target, cap);
    let columns: Vec<Polynomial> = products
        .iter()
        .map(|idx| idx.iter().fold(Polynomial::one(), |acc, &g| &acc * &traces[g]))
        .collect();
    let mut monomials: BTreeSet<Monomial> = h.terms().map(|(m, _)| m.clone()).collect();
    for c in &columns {
        monomials.extend(c.terms().map(|(m, _)| m.clone()));
    }
    let a: Vec<Vec<Rational>> = monomials.iter().map(|m| columns.iter().map(|c| c.coefficient(m)).collect()).collect();
    let b: Vec<Rational> = monomials.iter().map(|m| h.coefficient(m)).collect();
    match linsolve::solve(&a, &b, columns.len()) {
        Some(x) => Ok(Membership::Found(Combination {
            generators: kept,
            terms: products.into_iter().zip(x).filter(|(_, c)| !c.is_zero()).collect(),
        })),
        None if hit => Err(DzError::CapacityExceeded { cap }),
        None => Ok(Membership::NotFound),
    }
}

/// Per-arrow degree of `tr P` on a representation with square arrow
/// matrices: each `a` contributes 1 and each `~a` contributes `dim - 1`
/// (the degree of the adjugate entries).
pub fn route_degree(route: &Route, q: &Quiver, dims: &[usize]) -> Vec<u32> {
    (0..q.num_arrows())
        .map(|a| {
            let (base, rev) = route.arrow_count(a);
            (base + rev * (dims[q.tail(a)] - 1)) as u32
        })
        .collect()
}

/// The seven-arrow quiver on four vertices used for the counterexample.
pub fn counterexample_quiver() -> Quiver {
    Quiver::from_triples(
        &["1", "2", "3", "4"],
        &[
            ("a", "1", "2"),
            ("b1", "2", "3"),
            ("b2", "3", "2"),
            ("c", "3", "4"),
            ("d", "1", "4"),
            ("u", "1", "3"),
            ("v", "2", "4"),
        ],
    )
    .expect("fixture")
}

/// `i = (1, 2, 3)`, `j = (2, 3, 4)` and blocks
/// `(a, E, b2 / u, b1, E / d, v, c)`.
pub fn counterexample_spec() -> DZSpec {
    let a = |n: &str| Filler::Arrow(n.to_string());
    DZSpec::new(
        &["1", "2", "3"],
        &["2", "3", "4"],
        vec![
            vec![a("a"), Filler::Identity, a("b2")],
            vec![a("u"), a("b1"), Filler::Identity],
            vec![a("d"), a("v"), a("c")],
        ],
    )
}

fn all_ones(n: usize) -> Vec<Vec<u32>> {
    vec![vec![1; n]; n]
}

/// `F`, the coefficient of `prod y_ij` for the counterexample spec.
pub fn counterexample_f(rep: &Representation) -> Result<Polynomial, DzError> {
    coefficient_at(&counterexample_spec(), rep, &all_ones(3))
}

fn trace_with(route: &Route, mats: &HashMap<DoubledEdge, SymMatrix>, n: usize) -> Result<Polynomial, DzError> {
    let mut acc = SymMatrix::identity(n);
    for e in route.edges() {
        acc = mats[e].mul(&acc)?;
    }
    Ok(acc.trace()?)
}

fn edge_matrices(rep: &Representation) -> Result<HashMap<DoubledEdge, SymMatrix>, DzError> {
    let mut out = HashMap::new();
    for a in 0..rep.quiver().num_arrows() {
        for e in [DoubledEdge::base(a), DoubledEdge::rev(a)] {
            out.insert(e, associated_matrix(rep, e)?);
        }
    }
    Ok(out)
}

/// The route and its adjoint walk, deduplicated up to rotation.
fn route_representatives(q: &Quiver) -> Vec<Route> {
    let rotation_key = |r: &Route| (0..r.len()).map(|k| r.rotated(k).edges().to_vec()).min().unwrap_or_default();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for class in enumerate_simple_routes(q) {
        for r in [class.route().clone(), class.route().adjoint()] {
            if seen.insert(rotation_key(&r)) {
                out.push(r);
            }
        }
    }
    out
}

/// Findings of the dimension-3 counterexample check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterexampleReport {
    /// `F` at a seeded random rational representation.
    pub f_value: Rational,
    /// Degree of `F` in the variables of each arrow, others held at random values.
    pub arrow_degrees: Vec<(String, i64)>,
    /// `F(phi)` and `F(g . phi)` for `g = diag(2, 1, 1)` at vertex 1.
    pub gl_before: Rational,
    pub gl_after: Rational,
    /// Degree of `tr(a, ~a)` in the variables of `a`.
    pub adjoint_pair_degree: i64,
    /// Number of (route, reversed arrow) pairs checked, and the least degree
    /// found in the reversed arrow's variables.
    pub reverse_pairs_checked: usize,
    pub reverse_min_degree: i64,
    /// Products of route traces with the multidegree of `F`.
    pub basis: Vec<String>,
    /// Number of random evaluation points used to refute membership.
    pub points: usize,
    /// Whether the evaluation system `F = sum c_i b_i` was inconsistent.
    pub not_found: bool,
}

impl CounterexampleReport {
    pub fn passed(&self) -> bool {
        !self.f_value.is_zero()
            && self.arrow_degrees.iter().all(|(_, d)| *d == 1)
            && self.gl_before != self.gl_after
            && self.adjoint_pair_degree == 3
            && self.reverse_pairs_checked > 0
            && self.reverse_min_degree >= 2
            && self.not_found
    }
}

/// Routes of at most this length are checked for the reverse-edge degree bound.
pub const REVERSE_CHECK_MAX_LEN: usize = 6;

/// Runs the dimension-3 counterexample: `F` is nonzero, has degree 1 in
/// every arrow, is not invariant under a diagonal element of `GL_3`, and is
/// not a polynomial in route traces. Every route using `~a` has degree at
/// least 2 in `a`, so only adjoint-free routes (cycles of the quiver) can
/// appear in a product of multidegree `(1, ..., 1)`; membership is refuted
/// by exact solving at random points.
pub fn counterexample_check(seed: u64) -> Result<CounterexampleReport, DzError> {
    let q = counterexample_quiver();
    let dims = vec![3; 4];
    let n_arrows = q.num_arrows();
    let rep = Sampler::derived(seed, 0).representation(&q, &dims);
    let f_value = counterexample_f(&rep)?.as_constant().expect("numeric point");

    let mut arrow_degrees = Vec::new();
    for a in 0..n_arrows {
        let slice = rep.with_matrix(a, SymMatrix::generic(q.arrow_name(a), 3, 3))?;
        let f = counterexample_f(&slice)?;
        let vars: BTreeSet<VarId> = f.variables().into_iter().filter(|v| !v.is_block_var()).collect();
        arrow_degrees.push((q.arrow_name(a).to_string(), f.degree_in(&vars)));
    }

    let mut g = GroupElement::identity(&dims).components().to_vec();
    g[0] = SymMatrix::from_ints(3, 3, &[2, 0, 0, 0, 1, 0, 0, 0, 1])?;
    let moved = act(&GroupElement::new(g).expect("invertible"), &rep).expect("shapes match");
    let gl_after = counterexample_f(&moved)?.as_constant().expect("numeric point");

    // one-parameter slices phi_a = A + t D: the degree in t bounds the degree in
    // the entries of phi_a from below
    let t = Polynomial::var(VarId::Aux(0));
    let mut slice_sampler = Sampler::derived(seed, 1);
    let mut reverse_pairs_checked = 0;
    let mut reverse_min_degree = i64::MAX;
    let routes = route_representatives(&q);
    let mut adjoint_pair_degree = -1;
    for a in 0..n_arrows {
        let line = rep.matrix(a).add(&slice_sampler.matrix(3, 3).scale(&t))?;
        let mats = edge_matrices(&rep.with_matrix(a, line)?)?;
        for r in routes.iter().filter(|r| r.len() <= REVERSE_CHECK_MAX_LEN && r.arrow_count(a).1 > 0) {
            let d = trace_with(r, &mats, 3)?.degree_in(&BTreeSet::from([VarId::Aux(0)]));
            reverse_pairs_checked += 1;
            reverse_min_degree = reverse_min_degree.min(d);
        }
        if a == 0 {
            let pair = Route::new(&q, vec![DoubledEdge::base(0), DoubledEdge::rev(0)])?;
            adjoint_pair_degree = trace_with(&pair, &mats, 3)?.degree_in(&BTreeSet::from([VarId::Aux(0)]));
        }
    }

    let degrees: Vec<Vec<u32>> = routes.iter().map(|r| route_degree(r, &q, &dims)).collect();
    let (products, _) = degree_matched_products(&degrees, &vec![1; n_arrows], n_arrows);
    let points = products.len() + 3;
    let mut a_rows = Vec::with_capacity(points);
    let mut b = Vec::with_capacity(points);
    for p in 0..points {
        let point = Sampler::derived(seed, 100 + p as u64).representation(&q, &dims);
        let mats = edge_matrices(&point)?;
        let row = products
            .iter()
            .map(|idx| {
                idx.iter().try_fold(Rational::one(), |acc, &g| {
                    Ok::<_, DzError>(acc * trace_with(&routes[g], &mats, 3)?.as_constant().expect("numeric point"))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        a_rows.push(row);
        b.push(counterexample_f(&point)?.as_constant().expect("numeric point"));
    }
    let not_found = linsolve::solve(&a_rows, &b, products.len()).is_none();
    let basis = products
        .iter()
        .map(|idx| idx.iter().map(|&g| format!("tr{}", routes[g].text(&q))).collect::<Vec<_>>().join("*"))
        .collect();

    Ok(CounterexampleReport {
        f_value,
        arrow_degrees,
        gl_before: counterexample_f(&rep)?.as_constant().expect("numeric point"),
        gl_after,
        adjoint_pair_degree,
        reverse_pairs_checked,
        reverse_min_degree,
        basis,
        points,
        not_found,
    })
}

/// Human-readable text of a filler grid, one block row per line.
pub fn spec_text(spec: &DZSpec) -> String {
    let mut out = format!("i = ({}), j = ({})\n", spec.i_tuple.join(", "), spec.j_tuple.join(", "));
    for row in &spec.fillers {
        let cells: Vec<String> = row.iter().map(Filler::to_string).collect();
        out.push_str(&format!("  [{}]\n", cells.join(", ")));
    }
    out
}

/// `y_11^2*y_22^2`-style text for a multidegree.
pub fn multidegree_text(mu: &[Vec<u32>]) -> String {
    let m = multidegree_monomial(mu);
    if m.is_one() {
        return "1".into();
    }
    Polynomial::term(Rational::one(), m).to_string()
}

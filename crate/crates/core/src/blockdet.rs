//! Determinants of 2-block matrices as polynomials in traces of block routes.
//!
//! A `2k x 2k` matrix is cut into `k x k` blocks of size 2. Every term of the
//! Leibniz expansion picks two factors in each block row and two in each
//! block column; following them alternately along block rows and block
//! columns splits the term into closed block routes. Summing
//! `(-1)^(l/2 - 1) 2^(-nu) tr P` over the distinct route sets recovers the
//! determinant.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::exactpoly::{ratio, Polynomial, Rational};
use crate::symmatrix::{MatrixError, SymMatrix};

/// Largest `k` for which the `(2k)!` permutation sweep is run by default.
pub const DEFAULT_K_BOUND: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlockError {
    #[error("block size k = {k} exceeds the enumeration bound {bound}")]
    KBoundExceeded { k: usize, bound: usize },
    #[error("not a permutation of 1..={0}")]
    NotPermutation(usize),
    #[error("permutation length must be even and positive, got {0}")]
    OddLength(usize),
    #[error("block ({r},{s}) is {rows}x{cols}, expected 2x2")]
    BlockShape { r: usize, s: usize, rows: usize, cols: usize },
    #[error("multidegree row/column sums must all equal 2")]
    BadMultidegree,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// A `k x k` grid of 2x2 blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockMatrix {
    k: usize,
    blocks: Vec<SymMatrix>,
}

impl BlockMatrix {
    /// `blocks` in row-major order, `blocks[(r-1)*k + (s-1)] = X_rs`.
    pub fn new(k: usize, blocks: Vec<SymMatrix>) -> Result<Self, BlockError> {
        assert_eq!(blocks.len(), k * k, "k*k blocks required");
        for (i, b) in blocks.iter().enumerate() {
            if b.rows() != 2 || b.cols() != 2 {
                return Err(BlockError::BlockShape { r: i / k + 1, s: i % k + 1, rows: b.rows(), cols: b.cols() });
            }
        }
        Ok(BlockMatrix { k, blocks })
    }

    /// Blocks from 1-based `(r, s)`.
    pub fn from_fn(k: usize, mut f: impl FnMut(usize, usize) -> SymMatrix) -> Result<Self, BlockError> {
        let mut blocks = Vec::with_capacity(k * k);
        for r in 1..=k {
            for s in 1..=k {
                blocks.push(f(r, s));
            }
        }
        Self::new(k, blocks)
    }

    /// Fully generic blocks `X_rs` with entries `x_X<r><s>_<p>_<q>`.
    pub fn generic(k: usize) -> Self {
        Self::from_fn(k, |r, s| SymMatrix::generic(&format!("X{r}{s}"), 2, 2)).expect("2x2 blocks")
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn block(&self, r: usize, s: usize) -> &SymMatrix {
        &self.blocks[(r - 1) * self.k + (s - 1)]
    }

    /// The flat `2k x 2k` matrix.
    pub fn assemble(&self) -> SymMatrix {
        SymMatrix::from_fn(2 * self.k, 2 * self.k, |i, j| self.block(i / 2 + 1, j / 2 + 1).get(i % 2, j % 2).clone())
    }
}

pub fn assemble(z: &BlockMatrix) -> SymMatrix {
    z.assemble()
}

/// One factor of a block route: block `(r, s)` (1-based), possibly adjugated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockFactor {
    pub r: usize,
    pub s: usize,
    pub adjointed: bool,
}

/// A closed route through blocks; odd positions (1-based) are adjugated.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockRoute {
    factors: Vec<BlockFactor>,
}

impl BlockRoute {
    /// From the visited blocks; adjoint flags are set by position.
    pub fn from_blocks(blocks: &[(usize, usize)]) -> Self {
        let factors = blocks
            .iter()
            .enumerate()
            .map(|(i, &(r, s))| BlockFactor { r, s, adjointed: i % 2 == 0 })
            .collect();
        BlockRoute { factors }
    }

    pub fn factors(&self) -> &[BlockFactor] {
        &self.factors
    }

    /// Number of factors.
    pub fn length(&self) -> usize {
        self.factors.len()
    }

    /// 1 for `(adj X, X)` on a single block, 0 otherwise.
    pub fn index(&self) -> u32 {
        let f = &self.factors;
        u32::from(f.len() == 2 && (f[0].r, f[0].s) == (f[1].r, f[1].s))
    }

    /// Least representative under even rotations and adjoint reversal.
    pub fn canonical(&self) -> BlockRoute {
        let n = self.factors.len();
        let reversed: Vec<BlockFactor> = self
            .factors
            .iter()
            .rev()
            .map(|f| BlockFactor { adjointed: !f.adjointed, ..*f })
            .collect();
        let mut best: Option<Vec<BlockFactor>> = None;
        for seq in [&self.factors, &reversed] {
            for k in (0..n).step_by(2) {
                let mut v = seq.clone();
                v.rotate_left(k);
                if best.as_ref().is_none_or(|b| v < *b) {
                    best = Some(v);
                }
            }
        }
        BlockRoute { factors: best.unwrap_or_default() }
    }

    /// `(-1)^(l/2 - 1)`.
    pub fn sign(&self) -> i64 {
        if (self.length() / 2 - 1) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Trace of the product of factors, read left to right.
    pub fn trace(&self, z: &BlockMatrix) -> Result<Polynomial, BlockError> {
        let mut acc = SymMatrix::identity(2);
        for f in &self.factors {
            let b = z.block(f.r, f.s);
            let m = if f.adjointed { b.adjugate()? } else { b.clone() };
            acc = acc.mul(&m)?;
        }
        Ok(acc.trace()?)
    }

    /// `(-1)^(l/2 - 1) 2^(-nu) tr P`.
    pub fn weighted_trace(&self, z: &BlockMatrix) -> Result<Polynomial, BlockError> {
        let c = if self.index() == 1 { ratio(self.sign(), 2) } else { Rational::from_integer(self.sign().into()) };
        Ok(self.trace(z)?.scale(&c))
    }
}

impl fmt::Display for BlockRoute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if x.adjointed {
                write!(f, "adj X{}{}", x.r, x.s)?;
            } else {
                write!(f, "X{}{}", x.r, x.s)?;
            }
        }
        write!(f, ")")
    }
}

/// Routes covering every block row and block column exactly once, kept in
/// canonical form and sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockRouteSet {
    routes: Vec<BlockRoute>,
}

impl BlockRouteSet {
    pub fn new(routes: Vec<BlockRoute>) -> Self {
        let mut routes: Vec<BlockRoute> = routes.iter().map(BlockRoute::canonical).collect();
        routes.sort();
        BlockRouteSet { routes }
    }

    pub fn routes(&self) -> &[BlockRoute] {
        &self.routes
    }

    /// Each block row and column index in `1..=k` is used by exactly one
    /// route, and holds exactly two of its factors.
    pub fn is_partition(&self, k: usize) -> bool {
        let mut row_owner = vec![None; k + 1];
        let mut col_owner = vec![None; k + 1];
        let mut row_hits = vec![0; k + 1];
        let mut col_hits = vec![0; k + 1];
        for (i, route) in self.routes.iter().enumerate() {
            for f in route.factors() {
                if f.r == 0 || f.r > k || f.s == 0 || f.s > k {
                    return false;
                }
                if *row_owner[f.r].get_or_insert(i) != i || *col_owner[f.s].get_or_insert(i) != i {
                    return false;
                }
                row_hits[f.r] += 1;
                col_hits[f.s] += 1;
            }
        }
        (1..=k).all(|i| row_hits[i] == 2 && col_hits[i] == 2)
    }

    /// `prod_P (-1)^(l/2 - 1) 2^(-nu) tr P`.
    pub fn term(&self, z: &BlockMatrix) -> Result<Polynomial, BlockError> {
        let mut acc = Polynomial::one();
        for p in &self.routes {
            acc = &acc * &p.weighted_trace(z)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for BlockRouteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, r) in self.routes.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "}}")
    }
}

/// The route set of the Leibniz term `z_{1 sigma(1)} ... z_{2k sigma(2k)}`.
///
/// `sigma` is 1-based: `sigma[p-1]` is the column of the factor in row `p`.
pub fn associated_route_set(sigma: &[usize]) -> Result<BlockRouteSet, BlockError> {
    let n = sigma.len();
    if n == 0 || n % 2 == 1 {
        return Err(BlockError::OddLength(n));
    }
    let mut seen = vec![false; n + 1];
    for &c in sigma {
        if c == 0 || c > n || std::mem::replace(&mut seen[c], true) {
            return Err(BlockError::NotPermutation(n));
        }
    }
    // row of the factor sitting in each column
    let mut row_of_col = vec![0; n + 1];
    for (p, &c) in sigma.iter().enumerate() {
        row_of_col[c] = p + 1;
    }
    let block_row = |p: usize| p.div_ceil(2);
    let block_col = |p: usize| sigma[p - 1].div_ceil(2);
    let row_partner = |p: usize| if p % 2 == 1 { p + 1 } else { p - 1 };
    let col_partner = |p: usize| {
        let c = sigma[p - 1];
        row_of_col[if c % 2 == 1 { c + 1 } else { c - 1 }]
    };

    let mut used = vec![false; n + 1];
    let mut routes = Vec::new();
    for start in 1..=n {
        if used[start] {
            continue;
        }
        let start_col = block_col(start);
        let mut blocks = Vec::new();
        let mut p = start;
        loop {
            // p is at an odd position of the route; its row partner follows
            used[p] = true;
            blocks.push((block_row(p), block_col(p)));
            let q = row_partner(p);
            used[q] = true;
            blocks.push((block_row(q), block_col(q)));
            if block_col(q) == start_col {
                break;
            }
            p = col_partner(q);
        }
        routes.push(BlockRoute::from_blocks(&blocks));
    }
    Ok(BlockRouteSet::new(routes))
}

fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Distinct route sets over all of `S_{2k}`, with the default bound.
pub fn enumerate_route_set_classes(k: usize) -> Result<Vec<BlockRouteSet>, BlockError> {
    enumerate_route_set_classes_bounded(k, DEFAULT_K_BOUND)
}

pub fn enumerate_route_set_classes_bounded(k: usize, bound: usize) -> Result<Vec<BlockRouteSet>, BlockError> {
    if k == 0 || k > bound {
        return Err(BlockError::KBoundExceeded { k, bound });
    }
    let mut sigma: Vec<usize> = (1..=2 * k).collect();
    let mut classes = BTreeSet::new();
    loop {
        classes.insert(associated_route_set(&sigma)?);
        if !next_permutation(&mut sigma) {
            break;
        }
    }
    Ok(classes.into_iter().collect())
}

/// `sum over route-set classes of prod_P (-1)^(l/2 - 1) 2^(-nu) tr P`.
pub fn det_via_routes(z: &BlockMatrix) -> Result<Polynomial, BlockError> {
    det_via_routes_bounded(z, DEFAULT_K_BOUND)
}

pub fn det_via_routes_bounded(z: &BlockMatrix, bound: usize) -> Result<Polynomial, BlockError> {
    let mut total = Polynomial::zero();
    for set in enumerate_route_set_classes_bounded(z.k(), bound)? {
        total += &set.term(z)?;
    }
    Ok(total)
}

/// The route set whose blocks are selected by `mu`: `mu[r-1][s-1]` copies of
/// block `(r, s)`, every row and column sum equal to 2.
pub fn route_set_of_multidegree(mu: &[Vec<u32>]) -> Result<BlockRouteSet, BlockError> {
    let k = mu.len();
    if k == 0 || mu.iter().any(|row| row.len() != k) {
        return Err(BlockError::BadMultidegree);
    }
    let row_ok = mu.iter().all(|row| row.iter().sum::<u32>() == 2);
    let col_ok = (0..k).all(|s| mu.iter().map(|row| row[s]).sum::<u32>() == 2);
    if !row_ok || !col_ok {
        return Err(BlockError::BadMultidegree);
    }
    // give the two rows of block row r and the two columns of block column s
    // to the selected blocks, yielding one permutation with these blocks
    let mut next_col = vec![0usize; k];
    let mut sigma = Vec::with_capacity(2 * k);
    for row in mu {
        for (s, &m) in row.iter().enumerate() {
            for _ in 0..m {
                sigma.push(2 * s + 1 + next_col[s]);
                next_col[s] += 1;
            }
        }
    }
    associated_route_set(&sigma)
}

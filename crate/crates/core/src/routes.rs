//! Routes: closed walks in the doubled quiver.
//!
//! A route is stored in traversal order. Its trace is the trace of the
//! product of associated matrices with the last traversed edge leftmost.
//! Two routes are equivalent when one is a rotation of the other or of its
//! adjoint (reverse the walk and swap every edge with its partner); for
//! 2-dimensional representations equivalent routes have equal traces.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactpoly::{rat, ratio, Polynomial, Rational};
use crate::quiverrep::{
    associated_matrix, double, edge_head, edge_tail, edge_text, parse_edge, DoubledEdge, Quiver, QuiverError,
    Representation,
};
use crate::symmatrix::SymMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RouteError {
    #[error("a route needs at least one edge")]
    Empty,
    #[error("edges {0} and {1} do not chain (head of one is not the tail of the next)")]
    Broken(usize, usize),
    #[error("route is already simple; nothing to reduce")]
    AlreadySimple,
    #[error("route has no pair of reverse edges ~a, ~b with head(a) = tail(b) and tail(a) = head(b)")]
    NoAdjointPair,
    #[error("malformed route text {0:?}; expected e.g. (a,~b)")]
    Syntax(String),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

/// A nonempty closed walk in the doubled quiver, in traversal order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Route {
    edges: Vec<DoubledEdge>,
}

impl Route {
    pub fn new(q: &Quiver, edges: Vec<DoubledEdge>) -> Result<Self, RouteError> {
        if edges.is_empty() {
            return Err(RouteError::Empty);
        }
        let n = edges.len();
        for i in 0..n {
            let next = (i + 1) % n;
            if edge_head(q, edges[i]) != edge_tail(q, edges[next]) {
                return Err(RouteError::Broken(i, next));
            }
        }
        Ok(Route { edges })
    }

    /// Parses the text form `(a,~b,...)`; `rev_a` is accepted for `~a`.
    pub fn parse(q: &Quiver, text: &str) -> Result<Self, RouteError> {
        let t = text.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| RouteError::Syntax(t.to_string()))?;
        if inner.trim().is_empty() {
            return Err(RouteError::Empty);
        }
        let edges = inner.split(',').map(|s| parse_edge(q, s)).collect::<Result<Vec<_>, _>>()?;
        Route::new(q, edges)
    }

    pub fn edges(&self) -> &[DoubledEdge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn text(&self, q: &Quiver) -> String {
        route_text(q, &self.edges)
    }

    pub fn rotated(&self, k: usize) -> Route {
        let mut edges = self.edges.clone();
        edges.rotate_left(k % self.len());
        Route { edges }
    }

    /// The adjoint route: reversed walk, every edge swapped with its partner.
    pub fn adjoint(&self) -> Route {
        Route { edges: adjoint_edges(&self.edges) }
    }

    /// Occurrences of arrow `a` plus occurrences of its reverse edge.
    pub fn arrow_count(&self, arrow: usize) -> (usize, usize) {
        let base = self.edges.iter().filter(|e| e.arrow == arrow && !e.reversed).count();
        let rev = self.edges.iter().filter(|e| e.arrow == arrow && e.reversed).count();
        (base, rev)
    }

    pub fn has_reverse_edge(&self) -> bool {
        self.edges.iter().any(|e| e.reversed)
    }
}

fn adjoint_edges(edges: &[DoubledEdge]) -> Vec<DoubledEdge> {
    edges.iter().rev().map(|e| e.partner()).collect()
}

fn route_text(q: &Quiver, edges: &[DoubledEdge]) -> String {
    let parts: Vec<String> = edges.iter().map(|&e| edge_text(q, e)).collect();
    format!("({})", parts.join(","))
}

/// Equivalence class of routes, represented by its least member.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RouteClass {
    canonical: Route,
}

impl RouteClass {
    pub fn route(&self) -> &Route {
        &self.canonical
    }

    pub fn text(&self, q: &Quiver) -> String {
        self.canonical.text(q)
    }
}

/// No doubled edge occurs twice (`a` and `~a` are different edges).
pub fn is_simple(r: &Route) -> bool {
    let mut seen = BTreeSet::new();
    r.edges.iter().all(|e| seen.insert(*e))
}

fn least_rotation(edges: &[DoubledEdge]) -> Vec<DoubledEdge> {
    let n = edges.len();
    (0..n)
        .map(|k| {
            let mut v = edges.to_vec();
            v.rotate_left(k);
            v
        })
        .min()
        .unwrap_or_default()
}

pub fn canonicalize(r: &Route) -> RouteClass {
    let direct = least_rotation(&r.edges);
    let adjoint = least_rotation(&adjoint_edges(&r.edges));
    RouteClass { canonical: Route { edges: direct.min(adjoint) } }
}

/// All classes of simple routes, ordered by length and then by representative.
pub fn enumerate_simple_routes(q: &Quiver) -> Vec<RouteClass> {
    enumerate_simple_routes_pruned(q, |_| true)
}

/// Like [`enumerate_simple_routes`], abandoning every partial walk for which
/// `keep_prefix` returns false. The predicate must be monotone (once false
/// for a prefix, false for all extensions).
pub fn enumerate_simple_routes_pruned(q: &Quiver, keep_prefix: impl Fn(&[DoubledEdge]) -> bool) -> Vec<RouteClass> {
    let dq = double(q);
    let edges = dq.edges();
    let mut out_edges: HashMap<usize, Vec<DoubledEdge>> = HashMap::new();
    for &e in &edges {
        out_edges.entry(dq.tail(e)).or_default().push(e);
    }
    let mut classes = BTreeSet::new();
    for &start in &edges {
        let mut path = vec![start];
        if !keep_prefix(&path) {
            continue;
        }
        let mut used = BTreeSet::from([start]);
        dfs(q, &out_edges, start, &mut path, &mut used, &keep_prefix, &mut classes);
    }
    let mut v: Vec<RouteClass> = classes.into_iter().collect();
    v.sort_by(|a, b| a.canonical.len().cmp(&b.canonical.len()).then_with(|| a.cmp(b)));
    v
}

fn dfs(
    q: &Quiver,
    out_edges: &HashMap<usize, Vec<DoubledEdge>>,
    start: DoubledEdge,
    path: &mut Vec<DoubledEdge>,
    used: &mut BTreeSet<DoubledEdge>,
    keep_prefix: &impl Fn(&[DoubledEdge]) -> bool,
    classes: &mut BTreeSet<RouteClass>,
) {
    let here = edge_head(q, *path.last().expect("nonempty path"));
    if here == edge_tail(q, start) {
        classes.insert(canonicalize(&Route { edges: path.clone() }));
    }
    let Some(nexts) = out_edges.get(&here) else { return };
    for &e in nexts {
        // the start edge is the least edge of every walk generated from it
        if e <= start || used.contains(&e) {
            continue;
        }
        path.push(e);
        if keep_prefix(path) {
            used.insert(e);
            dfs(q, out_edges, start, path, used, keep_prefix, classes);
            used.remove(&e);
        }
        path.pop();
    }
}

/// Trace of the product of associated matrices along the route.
pub fn route_trace(r: &Route, rep: &Representation) -> Result<Polynomial, RouteError> {
    Ok(route_product(r.edges(), rep)?.trace().map_err(QuiverError::from)?)
}

/// `A(e_n) ... A(e_1)` for the walk `e_1, ..., e_n`.
pub fn route_product(edges: &[DoubledEdge], rep: &Representation) -> Result<SymMatrix, RouteError> {
    let first = edges.first().ok_or(RouteError::Empty)?;
    let mut acc = associated_matrix(rep, *first)?;
    for &e in &edges[1..] {
        acc = associated_matrix(rep, e)?.mul(&acc).map_err(QuiverError::from)?;
    }
    Ok(acc)
}

/// The character exponents of the route trace: each reverse edge `~a`
/// contributes `+1` at `head(a)` and `-1` at `tail(a)`.
pub fn route_weight(q: &Quiver, r: &Route) -> BTreeMap<String, i64> {
    let mut w = vec![0i64; q.vertices().len()];
    for e in r.edges.iter().filter(|e| e.reversed) {
        w[q.head(e.arrow)] += 1;
        w[q.tail(e.arrow)] -= 1;
    }
    q.vertices().iter().cloned().zip(w).collect()
}

/// A polynomial in formal route traces `tr(P)`, one symbol per route class.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TraceExpr {
    terms: BTreeMap<Vec<RouteClass>, Rational>,
}

impl TraceExpr {
    pub fn zero() -> Self {
        TraceExpr::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut e = TraceExpr::zero();
        e.add_term(Vec::new(), c);
        e
    }

    pub fn symbol(class: RouteClass) -> Self {
        let mut e = TraceExpr::zero();
        e.add_term(vec![class], Rational::one());
        e
    }

    fn add_term(&mut self, mut key: Vec<RouteClass>, c: Rational) {
        if c.is_zero() {
            return;
        }
        key.sort();
        let slot = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &TraceExpr) -> TraceExpr {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> TraceExpr {
        let mut out = TraceExpr::zero();
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &TraceExpr) -> TraceExpr {
        let mut out = TraceExpr::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let mut key = k1.clone();
                key.extend(k2.iter().cloned());
                out.add_term(key, c1 * c2);
            }
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<RouteClass>, &Rational)> {
        self.terms.iter()
    }

    /// Every route class referenced by some term.
    pub fn symbols(&self) -> BTreeSet<RouteClass> {
        self.terms.keys().flatten().cloned().collect()
    }

    pub fn only_simple_symbols(&self) -> bool {
        self.symbols().iter().all(|c| is_simple(c.route()))
    }

    /// Replaces every symbol by its route trace on `rep`.
    pub fn evaluate(&self, rep: &Representation) -> Result<Polynomial, RouteError> {
        let mut cache: HashMap<RouteClass, Polynomial> = HashMap::new();
        let mut total = Polynomial::zero();
        for (key, c) in &self.terms {
            let mut t = Polynomial::constant(c.clone());
            for class in key {
                if !cache.contains_key(class) {
                    cache.insert(class.clone(), route_trace(class.route(), rep)?);
                }
                t = &t * &cache[class];
            }
            total += &t;
        }
        Ok(total)
    }

    pub fn text(&self, q: &Quiver) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (key, c)) in self.terms.iter().enumerate() {
            let neg = c < &Rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            s.push_str(match (i, neg) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            });
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || key.is_empty() {
                factors.push(if mag.is_integer() {
                    mag.numer().to_string()
                } else {
                    format!("{}/{}", mag.numer(), mag.denom())
                });
            }
            let mut i = 0;
            while i < key.len() {
                let mut j = i;
                while j < key.len() && key[j] == key[i] {
                    j += 1;
                }
                let base = format!("tr{}", key[i].text(q));
                factors.push(if j - i == 1 { base } else { format!("{base}^{}", j - i) });
                i = j;
            }
            s.push_str(&factors.join("*"));
        }
        s
    }
}

/// `tr` of a walk that may be empty; the empty walk is the identity of a
/// 2-dimensional space and has trace 2.
fn tr2(edges: &[DoubledEdge]) -> TraceExpr {
    if edges.is_empty() {
        TraceExpr::constant(rat(2))
    } else {
        TraceExpr::symbol(canonicalize(&Route { edges: edges.to_vec() }))
    }
}

fn concat(parts: &[&[DoubledEdge]]) -> Vec<DoubledEdge> {
    parts.iter().flat_map(|p| p.iter().copied()).collect()
}

/// Rewrites a non-simple route trace into traces of simple routes using
/// `tr(X P1 X P2) = tr(X P1) tr(X P2) - 1/2 tr(~X X) tr(P1 ~P2)`, valid for
/// 2-dimensional representations, applied recursively.
///
/// The split uses the least repeated edge at its first two occurrences.
pub fn reduce_repeated(r: &Route) -> Result<TraceExpr, RouteError> {
    if is_simple(r) {
        return Err(RouteError::AlreadySimple);
    }
    let mut memo = HashMap::new();
    Ok(reduce_rec(&canonicalize(r).canonical.edges, &mut memo))
}

fn reduce_rec(edges: &[DoubledEdge], memo: &mut HashMap<Vec<DoubledEdge>, TraceExpr>) -> TraceExpr {
    let route = Route { edges: edges.to_vec() };
    if is_simple(&route) {
        return TraceExpr::symbol(canonicalize(&route));
    }
    let key = canonicalize(&route).canonical.edges;
    if let Some(hit) = memo.get(&key) {
        return hit.clone();
    }
    let (first, second) = split_point(edges);
    let mut rotated = edges.to_vec();
    rotated.rotate_left(first);
    let gap = second - first;
    let x = rotated[0];
    let q1 = &rotated[1..gap];
    let q2 = &rotated[gap + 1..];

    let mut sub = |walk: Vec<DoubledEdge>| -> TraceExpr {
        if walk.is_empty() {
            tr2(&walk)
        } else {
            reduce_rec(&walk, memo)
        }
    };
    let left = sub(concat(&[&[x], q1])).mul(&sub(concat(&[&[x], q2])));
    let pair = sub(vec![x, x.partner()]);
    let rest = sub(concat(&[q1, &adjoint_edges(q2)]));
    let out = left.add(&pair.mul(&rest).scale(&ratio(-1, 2)));
    memo.insert(key, out.clone());
    out
}

/// Positions of the first two occurrences of the least repeated edge.
fn split_point(edges: &[DoubledEdge]) -> (usize, usize) {
    let mut positions: BTreeMap<DoubledEdge, Vec<usize>> = BTreeMap::new();
    for (i, e) in edges.iter().enumerate() {
        positions.entry(*e).or_default().push(i);
    }
    let (_, pos) = positions.iter().find(|(_, p)| p.len() >= 2).expect("route has a repeated edge");
    (pos[0], pos[1])
}

/// Rewrites `tr(~a S ~b P)` (traversal order, `S` closed at `tail(a)`,
/// `P` closed at `head(a)`, and `a`, `b` forming a 2-cycle) as
/// `tr(ab) trP trS - trP tr(b a S) - trS tr(a b P) + tr(b P a S)`, written
/// here with matrix products read left to right.
///
/// Valid for 2-dimensional representations; the first such pair of
/// positions is used.
pub fn eliminate_adjoint_pair(q: &Quiver, r: &Route) -> Result<TraceExpr, RouteError> {
    let (i, j) = find_adjoint_pair(q, r).ok_or(RouteError::NoAdjointPair)?;
    let mut rotated = r.edges.clone();
    rotated.rotate_left(i);
    let gap = j - i;
    let a = DoubledEdge::base(rotated[0].arrow);
    let b = DoubledEdge::base(rotated[gap].arrow);
    let s = &rotated[1..gap];
    let p = &rotated[gap + 1..];

    // product words translated to traversal order (reversed)
    let tr_ab = tr2(&[b, a]);
    let (tr_p, tr_s) = (tr2(p), tr2(s));
    let tr_bas = tr2(&concat(&[s, &[a, b]]));
    let tr_abp = tr2(&concat(&[p, &[b, a]]));
    let tr_bpas = tr2(&concat(&[s, &[a], p, &[b]]));

    let one = Rational::one();
    Ok(tr_ab
        .mul(&tr_p)
        .mul(&tr_s)
        .add(&tr_p.mul(&tr_bas).scale(&-one.clone()))
        .add(&tr_s.mul(&tr_abp).scale(&-one))
        .add(&tr_bpas))
}

/// First positions `i < j` holding reverse edges `~a`, `~b` with
/// `head(a) = tail(b)` and `tail(a) = head(b)`.
pub fn find_adjoint_pair(q: &Quiver, r: &Route) -> Option<(usize, usize)> {
    let e = &r.edges;
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            if e[i].reversed && e[j].reversed {
                let (a, b) = (e[i].arrow, e[j].arrow);
                if q.head(a) == q.tail(b) && q.tail(a) == q.head(b) {
                    return Some((i, j));
                }
            }
        }
    }
    None
}

/// True when the walk contains an edge immediately followed (cyclically)
/// by its partner and has more than two edges. Such a trace factors as
/// `|phi_a| * tr(shorter route)`, so it is never needed as a generator.
pub fn has_backtrack(r: &Route) -> bool {
    let n = r.len();
    n > 2 && (0..n).any(|i| r.edges[(i + 1) % n] == r.edges[i].partner())
}

/// Simple route classes whose traces generate the semi-invariants in
/// dimension 2, with the classes containing a backtrack removed.
pub fn generator_routes(q: &Quiver) -> Vec<RouteClass> {
    enumerate_simple_routes(q).into_iter().filter(|c| !has_backtrack(c.route())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::VarId;
    use crate::quiverrep::generic_representation;

    fn kronecker() -> Quiver {
        Quiver::from_triples(&["1", "2"], &[("a", "1", "2"), ("b", "1", "2")]).unwrap()
    }

    fn x(arrow: &str, r: u32, c: u32) -> Polynomial {
        Polynomial::var(VarId::arrow(arrow, r, c))
    }

    #[test]
    fn simplicity() {
        let q = kronecker();
        assert!(is_simple(&Route::parse(&q, "(a,~b)").unwrap()));
        assert!(!is_simple(&Route::parse(&q, "(a,~a,a,~a)").unwrap()));
        assert!(is_simple(&Route::parse(&q, "(a,~a)").unwrap()));
    }

    #[test]
    fn parse_rejects_broken_walks() {
        let q = kronecker();
        assert_eq!(Route::parse(&q, "(a,b)"), Err(RouteError::Broken(0, 1)));
        assert_eq!(Route::parse(&q, "()"), Err(RouteError::Empty));
        assert!(matches!(Route::parse(&q, "a,~b"), Err(RouteError::Syntax(_))));
        assert!(matches!(Route::parse(&q, "(a,~c)"), Err(RouteError::Quiver(_))));
    }

    #[test]
    fn canonical_classes() {
        let q = kronecker();
        let c = |t: &str| canonicalize(&Route::parse(&q, t).unwrap());
        assert_eq!(c("(~b,a)"), c("(a,~b)"));
        assert_eq!(c("(b,~a)"), c("(a,~b)"));
        assert_eq!(c("(a,~b)").text(&q), "(a,~b)");
        let l = Quiver::from_triples(&["1"], &[("a", "1", "1")]).unwrap();
        let single = canonicalize(&Route::parse(&l, "(a)").unwrap());
        assert_eq!(single.text(&l), "(a)");
        assert_eq!(canonicalize(&Route::parse(&l, "(~a)").unwrap()), single);
    }

    #[test]
    fn kronecker_traces() {
        let q = kronecker();
        let rep = generic_representation(&q, &[2, 2]);
        let t = |s: &str| route_trace(&Route::parse(&q, s).unwrap(), &rep).unwrap();
        let det_a = &(&x("a", 1, 1) * &x("a", 2, 2)) - &(&x("a", 1, 2) * &x("a", 2, 1));
        assert_eq!(t("(a,~a)"), det_a.scale(&rat(2)));
        let mixed = &(&(&(&x("a", 1, 1) * &x("b", 2, 2)) - &(&x("a", 1, 2) * &x("b", 2, 1)))
            - &(&x("a", 2, 1) * &x("b", 1, 2)))
            + &(&x("a", 2, 2) * &x("b", 1, 1));
        assert_eq!(t("(a,~b)"), mixed);
        assert_eq!(t("(b,~a)"), mixed);

        let zero = Representation::new(&q, vec![2, 2], vec![SymMatrix::zeros(2, 2), SymMatrix::zeros(2, 2)]).unwrap();
        assert!(route_trace(&Route::parse(&q, "(a,~b,b,~a)").unwrap(), &zero).unwrap().is_zero());
    }

    #[test]
    fn weights() {
        let q = kronecker();
        let w = route_weight(&q, &Route::parse(&q, "(a,~a)").unwrap());
        assert_eq!(w, BTreeMap::from([("1".to_string(), -1), ("2".to_string(), 1)]));
        assert_eq!(route_weight(&q, &Route::parse(&q, "(a,~b)").unwrap()), w);
        let cyc = Quiver::from_triples(&["1", "2"], &[("a", "1", "2"), ("b", "2", "1")]).unwrap();
        let w0 = route_weight(&cyc, &Route::parse(&cyc, "(a,b)").unwrap());
        assert!(w0.values().all(|&v| v == 0));
    }

    #[test]
    fn enumeration_small_cases() {
        assert!(enumerate_simple_routes(&Quiver::from_triples(&["1"], &[]).unwrap()).is_empty());
        let l = Quiver::from_triples(&["1"], &[("a", "1", "1")]).unwrap();
        let texts: Vec<_> = enumerate_simple_routes(&l).iter().map(|c| c.text(&l)).collect();
        assert_eq!(texts, ["(a)", "(a,~a)"]);
        let q = kronecker();
        let texts: Vec<_> = enumerate_simple_routes(&q).iter().map(|c| c.text(&q)).collect();
        assert_eq!(texts, ["(a,~a)", "(a,~b)", "(b,~b)", "(a,~a,b,~b)", "(a,~b,b,~a)"]);
        let gens: Vec<_> = generator_routes(&q).iter().map(|c| c.text(&q)).collect();
        assert_eq!(gens, ["(a,~a)", "(a,~b)", "(b,~b)"]);
    }

    #[test]
    fn reduce_square_of_pair() {
        let q = kronecker();
        let r = Route::parse(&q, "(a,~a,a,~a)").unwrap();
        let e = reduce_repeated(&r).unwrap();
        assert_eq!(e.text(&q), "1/2*tr(a,~a)^2");
        let rep = generic_representation(&q, &[2, 2]);
        let det_a = rep.matrix(0).det().unwrap();
        assert_eq!(e.evaluate(&rep).unwrap(), det_a.pow(2).scale(&rat(2)));
        assert_eq!(reduce_repeated(&Route::parse(&q, "(a,~b)").unwrap()), Err(RouteError::AlreadySimple));
    }

    #[test]
    fn adjoint_pair_on_two_cycle() {
        let q = Quiver::from_triples(&["1", "2"], &[("a", "1", "2"), ("b", "2", "1")]).unwrap();
        let rep = generic_representation(&q, &[2, 2]);
        let r = Route::parse(&q, "(~a,~b)").unwrap();
        let e = eliminate_adjoint_pair(&q, &r).unwrap();
        assert_eq!(e.evaluate(&rep).unwrap(), route_trace(&r, &rep).unwrap());
        assert_eq!(e.text(&q), "tr(a,b)");
        assert_eq!(
            eliminate_adjoint_pair(&q, &Route::parse(&q, "(a,b)").unwrap()),
            Err(RouteError::NoAdjointPair)
        );
    }

    #[test]
    fn backtracks() {
        let q = kronecker();
        assert!(has_backtrack(&Route::parse(&q, "(a,~b,b,~a)").unwrap()));
        assert!(!has_backtrack(&Route::parse(&q, "(a,~a)").unwrap()));
    }
}

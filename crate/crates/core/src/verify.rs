//! Self-checking suites run by `semiinv verify`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::blockdet::{det_via_routes_bounded, BlockMatrix, DEFAULT_K_BOUND};
use crate::domzub::{
    self, build_dz_matrix, coefficient_via_routes, counterexample_check, extract_semiinvariants,
    membership_in_trace_algebra, DZSpec, Filler, Membership,
};
use crate::exactpoly::{Polynomial, VarId};
use crate::groupaction::{act, check_semiinvariance, random_general_linear, random_special_linear, GroupKind};
use crate::quiverrep::{edge_head, edge_tail, generic_representation, DoubledEdge, Quiver};
use crate::routes::{
    eliminate_adjoint_pair, enumerate_simple_routes, find_adjoint_pair, generator_routes, is_simple, reduce_repeated,
    route_trace, route_weight, Route,
};
use crate::sampling::{Sampler, DEFAULT_SEED};
use crate::symmatrix::SymMatrix;

pub const SUITES: [&str; 7] = ["lemma1", "prop1", "invariance", "reduction", "dz", "counterexample", "all"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Largest block count for the route expansion of determinants.
    pub k: usize,
    pub trials: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { k: 3, trials: 20, seed: DEFAULT_SEED }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Item {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub equal: bool,
}

impl Item {
    fn new(name: impl Into<String>, expected: impl ToString, actual: impl ToString, equal: bool) -> Item {
        Item { name: name.into(), expected: expected.to_string(), actual: actual.to_string(), equal }
    }

    fn poly(name: impl Into<String>, expected: &Polynomial, actual: &Polynomial) -> Item {
        Item::new(name, expected, actual, expected == actual)
    }

    fn flag(name: impl Into<String>, ok: bool, detail: impl ToString) -> Item {
        Item::new(name, "holds", if ok { "holds".to_string() } else { detail.to_string() }, ok)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub items: Vec<Item>,
}

impl Report {
    pub fn new(command: impl Into<String>, items: Vec<Item>) -> Report {
        let status = if items.iter().all(|i| i.equal) { Status::Pass } else { Status::Fail };
        Report { command: command.into(), status, items }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn text(&self) -> String {
        let ok = self.items.iter().filter(|i| i.equal).count();
        let status = if self.passed() { "pass" } else { "FAIL" };
        let mut out = format!("{}: {status} ({ok}/{} items)\n", self.command, self.items.len());
        for i in &self.items {
            if i.equal {
                out.push_str(&format!("  ok    {}\n", i.name));
            } else {
                out.push_str(&format!("  FAIL  {}\n        expected: {}\n        actual:   {}\n", i.name, i.expected, i.actual));
            }
        }
        out
    }

    pub fn json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report fields are plain strings")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("unknown suite {0:?} (expected one of: {list})", list = SUITES.join(", "))]
    UnknownSuite(String),
    #[error("--k {k} exceeds the supported bound {bound}")]
    KTooLarge { k: usize, bound: usize },
}

pub fn run_suite(name: &str, opts: &VerifyOptions) -> Result<Vec<Item>, VerifyError> {
    Ok(match name {
        "lemma1" => lemma1(),
        "prop1" => prop1(opts)?,
        "invariance" => invariance(opts),
        "reduction" => reduction(),
        "dz" => dz(opts),
        "counterexample" => counterexample(opts),
        "all" => {
            let mut items = Vec::new();
            for s in &SUITES[..SUITES.len() - 1] {
                for mut i in run_suite(s, opts)? {
                    i.name = format!("{s}: {}", i.name);
                    items.push(i);
                }
            }
            items
        }
        other => return Err(VerifyError::UnknownSuite(other.to_string())),
    })
}

fn det(m: &SymMatrix) -> Polynomial {
    m.det().expect("square")
}

fn tr(m: &SymMatrix) -> Polynomial {
    m.trace().expect("square")
}

fn adj(m: &SymMatrix) -> SymMatrix {
    m.adjugate().expect("square")
}

fn mul(ms: &[&SymMatrix]) -> SymMatrix {
    ms.iter().skip(1).fold(ms[0].clone(), |acc, m| acc.mul(m).expect("shapes"))
}

/// The 2x2 trace calculus on generic matrices `X`, `Y`, `Z`.
pub fn lemma1() -> Vec<Item> {
    let x = SymMatrix::generic("X", 2, 2);
    let y = SymMatrix::generic("Y", 2, 2);
    let z = SymMatrix::generic("Z", 2, 2);
    let (tx, ty, dx) = (tr(&x), tr(&y), det(&x));
    let txy = tr(&mul(&[&x, &y]));
    let split = &(&tx * &ty) - &txy;
    let cayley = x.mul(&x).unwrap().sub(&x.scale(&tx)).unwrap().add(&SymMatrix::identity(2).scale(&dx)).unwrap();
    vec![
        Item::poly("(a) tr(X adj Y) = tr X tr Y - tr(XY)", &split, &tr(&mul(&[&x, &adj(&y)]))),
        Item::poly("(a) tr(adj X Y) = tr X tr Y - tr(XY)", &split, &tr(&mul(&[&adj(&x), &y]))),
        Item::poly("(b) tr adj X = tr X", &tx, &tr(&adj(&x))),
        {
            let (e, a) = (mul(&[&adj(&y), &adj(&x)]), adj(&mul(&[&x, &y])));
            Item::new("(b) adj(XY) = adj Y adj X", &e, &a, e == a)
        },
        Item::poly("(c) tr(X^2 Y) = tr X tr(XY) - |X| tr Y", &(&(&tx * &txy) - &(&dx * &ty)), &tr(&mul(&[&x, &x, &y]))),
        Item::poly(
            "(d) tr(XYXZ) = tr(XY) tr(XZ) - |X| tr(Y adj Z)",
            &(&(&txy * &tr(&mul(&[&x, &z]))) - &(&dx * &tr(&mul(&[&y, &adj(&z)])))),
            &tr(&mul(&[&x, &y, &x, &z])),
        ),
        Item::new("(e) X^2 - tr(X) X + |X| E = 0", SymMatrix::zeros(2, 2), &cayley, cayley.is_zero()),
        {
            let aa = adj(&adj(&x));
            Item::new("adj adj X = X", &x, &aa, aa == x)
        },
    ]
}

/// Determinants of 2-block matrices against their route expansion:
/// symbolic for `k <= 2`, seeded random rational blocks beyond.
pub fn prop1(opts: &VerifyOptions) -> Result<Vec<Item>, VerifyError> {
    if opts.k > DEFAULT_K_BOUND {
        return Err(VerifyError::KTooLarge { k: opts.k, bound: DEFAULT_K_BOUND });
    }
    let mut items = Vec::new();
    let mut check = |name: String, z: &BlockMatrix| {
        let d = det(&z.assemble());
        match det_via_routes_bounded(z, DEFAULT_K_BOUND) {
            Ok(r) => items.push(Item::poly(name, &d, &r)),
            Err(e) => items.push(Item::new(name, &d, e, false)),
        }
    };
    for k in 1..=opts.k.min(2) {
        check(format!("k={k} generic blocks"), &BlockMatrix::generic(k));
    }
    let trials = opts.trials.clamp(1, 10);
    for k in 3..=opts.k {
        for t in 0..trials {
            let mut s = Sampler::derived(opts.seed, (k * 1000 + t) as u64);
            let z = BlockMatrix::from_fn(k, |_, _| s.matrix(2, 2)).expect("2x2 blocks");
            check(format!("k={k} random blocks #{t}"), &z);
        }
    }
    Ok(items)
}

pub fn kronecker() -> Quiver {
    Quiver::from_triples(&["1", "2"], &[("a", "1", "2"), ("b", "1", "2")]).expect("fixture")
}

/// A 3-cycle with a loop at the middle vertex.
pub fn three_vertex_quiver() -> Quiver {
    Quiver::from_triples(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3"), ("c", "3", "1"), ("e", "2", "2")])
        .expect("fixture")
}

fn weight_text(w: &BTreeMap<String, i64>) -> String {
    let parts: Vec<String> = w.iter().map(|(v, x)| format!("{v}:{x}")).collect();
    format!("[{}]", parts.join(", "))
}

/// `f(g_h phi adj(g_t)) = prod_v |g_v|^(w_v + d_v) f(phi)` with generic
/// matrices `g_v`, where `d_v` sums the degrees of `f` in the arrows leaving
/// `v`. Negative exponents are moved to the left-hand side.
fn symbolic_invariance(q: &Quiver, f: &Polynomial, weight: &BTreeMap<String, i64>) -> (Polynomial, Polynomial) {
    let n = q.vertices().len();
    let g: Vec<SymMatrix> = (0..n)
        .map(|v| SymMatrix::from_fn(2, 2, |i, j| Polynomial::var(VarId::Aux((4 * v + 2 * i + j) as u32))))
        .collect();
    let rep = generic_representation(q, &q.twos());
    let mut bindings = std::collections::HashMap::new();
    let degrees = domzub::arrow_multidegree(q, f).expect("route traces are multihomogeneous");
    let mut exps: Vec<i64> = q.vertices().iter().map(|v| weight.get(v).copied().unwrap_or(0)).collect();
    for a in 0..q.num_arrows() {
        exps[q.tail(a)] += degrees[a] as i64;
        let moved = mul(&[&g[q.head(a)], rep.matrix(a), &adj(&g[q.tail(a)])]);
        for r in 0..2 {
            for c in 0..2 {
                bindings.insert(VarId::arrow(q.arrow_name(a), r as u32 + 1, c as u32 + 1), moved.get(r, c).clone());
            }
        }
    }
    let mut lhs = f.substitute(&bindings);
    let mut rhs = f.clone();
    for (v, &e) in exps.iter().enumerate() {
        let d = det(&g[v]).pow(e.unsigned_abs() as u32);
        if e >= 0 {
            rhs = &rhs * &d;
        } else {
            lhs = &lhs * &d;
        }
    }
    (rhs, lhs)
}

/// Every simple-route trace is an `SL` invariant and transforms under `GL`
/// by the determinant character of its route weight; the action composes.
pub fn invariance(opts: &VerifyOptions) -> Vec<Item> {
    let mut items = Vec::new();
    for (label, q) in [("kronecker", kronecker()), ("three-vertex", three_vertex_quiver())] {
        let generic = generic_representation(&q, &q.twos());
        for (idx, class) in enumerate_simple_routes(&q).iter().enumerate() {
            let route = class.route();
            let f = route_trace(route, &generic).expect("square 2x2");
            let w = route_weight(&q, route);
            let point = Sampler::derived(opts.seed, idx as u64).representation(&q, &q.twos());
            for (kind, kind_name, weight) in [
                (GroupKind::SpecialLinear, "SL", zero_weight_of(&q)),
                (GroupKind::GeneralLinear, "GL", w.clone()),
            ] {
                let name = format!("{label} tr{} {kind_name} x{} weight {}", class.text(&q), opts.trials, weight_text(&weight));
                let outcome = check_semiinvariance(&f, &weight, &point, opts.trials, opts.seed, kind);
                items.push(match outcome {
                    Ok(()) => Item::flag(name, true, ""),
                    Err(c) => Item::new(name, &c.expected, &c.acted, false),
                });
            }
        }
    }
    let q = kronecker();
    for class in generator_routes(&q) {
        let f = route_trace(class.route(), &generic_representation(&q, &[2, 2])).expect("square");
        let (e, a) = symbolic_invariance(&q, &f, &route_weight(&q, class.route()));
        items.push(Item::poly(format!("kronecker tr{} symbolic GL", class.text(&q)), &e, &a));
    }
    let q = three_vertex_quiver();
    for t in 0..opts.trials.min(5) {
        let seed = opts.seed.wrapping_add(t as u64);
        let rep = Sampler::derived(seed, 7).representation(&q, &q.twos());
        let g = random_general_linear(&[2, 2, 2], seed);
        let h = random_special_linear(&[2, 2, 2], seed ^ 0x55);
        let two_step = act(&g, &act(&h, &rep).unwrap()).unwrap();
        let composed = act(&g.compose(&h).unwrap(), &rep).unwrap();
        items.push(Item::flag(format!("action composes #{t}"), two_step == composed, "g.(h.phi) differs from (gh).phi"));
    }
    items
}

fn zero_weight_of(q: &Quiver) -> BTreeMap<String, i64> {
    q.vertices().iter().map(|v| (v.clone(), 0)).collect()
}

/// All closed walks in the doubled quiver with `1..=max_len` edges.
pub fn closed_walks(q: &Quiver, max_len: usize) -> Vec<Route> {
    let mut edges: Vec<DoubledEdge> = (0..q.num_arrows()).map(DoubledEdge::base).collect();
    edges.extend((0..q.num_arrows()).map(DoubledEdge::rev));
    let mut out = Vec::new();
    fn go(q: &Quiver, edges: &[DoubledEdge], start: usize, cur: &mut Vec<DoubledEdge>, max_len: usize, out: &mut Vec<Route>) {
        let at = edge_head(q, *cur.last().expect("nonempty"));
        if at == start {
            out.push(Route::new(q, cur.clone()).expect("chained"));
        }
        if cur.len() == max_len {
            return;
        }
        for &e in edges {
            if edge_tail(q, e) == at {
                cur.push(e);
                go(q, edges, start, cur, max_len, out);
                cur.pop();
            }
        }
    }
    for &e in &edges {
        go(q, &edges, edge_tail(q, e), &mut vec![e], max_len, &mut out);
    }
    out
}

/// The two trace rewrites agree with direct evaluation on generic matrices.
pub fn reduction() -> Vec<Item> {
    let mut items = Vec::new();
    for (label, q, max_len) in [("kronecker", kronecker(), 6), ("three-vertex", three_vertex_quiver(), 4)] {
        let rep = generic_representation(&q, &q.twos());
        for walk in closed_walks(&q, max_len) {
            let direct = route_trace(&walk, &rep).expect("square");
            if !is_simple(&walk) {
                let expr = reduce_repeated(&walk).expect("repeated edge");
                let name = format!("{label} repeated tr{} = {}", walk.text(&q), expr.text(&q));
                let simple = expr.only_simple_symbols();
                let value = expr.evaluate(&rep).expect("square");
                items.push(Item::new(name, &direct, &value, simple && value == direct));
            }
            if find_adjoint_pair(&q, &walk).is_some() {
                let expr = eliminate_adjoint_pair(&q, &walk).expect("adjoint pair");
                let value = expr.evaluate(&rep).expect("square");
                items.push(Item::poly(format!("{label} adjoint pair tr{} = {}", walk.text(&q), expr.text(&q)), &direct, &value));
            }
        }
    }
    items
}

pub fn kronecker_spec() -> DZSpec {
    let a = |n: &str| Filler::Arrow(n.to_string());
    DZSpec::new(&["1", "1"], &["2", "2"], vec![vec![a("a"), a("b")], vec![a("a"), a("b")]])
}

pub fn kronecker_spec_swapped() -> DZSpec {
    let a = |n: &str| Filler::Arrow(n.to_string());
    DZSpec::new(&["1", "1"], &["2", "2"], vec![vec![a("a"), a("b")], vec![a("b"), a("a")]])
}

/// Coefficient extraction on the Kronecker quiver: closed forms, exact
/// reconstruction, agreement with route-trace products, invariance, and
/// membership in the algebra generated by the three generator traces.
pub fn dz(opts: &VerifyOptions) -> Vec<Item> {
    let q = kronecker();
    let rep = generic_representation(&q, &[2, 2]);
    let (a, b) = (rep.matrix(0), rep.matrix(1));
    let (da, db) = (det(a), det(b));
    let ab = &da * &db;
    let gens: Vec<Route> = generator_routes(&q).iter().map(|c| c.route().clone()).collect();
    let mut items = Vec::new();
    let closed: [(&str, DZSpec, Vec<(Vec<Vec<u32>>, Polynomial)>); 2] = [
        (
            "fillers (a,b/a,b)",
            kronecker_spec(),
            vec![
                (vec![vec![2, 0], vec![0, 2]], ab.clone()),
                (vec![vec![1, 1], vec![1, 1]], ab.scale(&crate::exactpoly::rat(-2))),
                (vec![vec![0, 2], vec![2, 0]], ab.clone()),
            ],
        ),
        (
            "fillers (a,b/b,a)",
            kronecker_spec_swapped(),
            vec![
                (vec![vec![2, 0], vec![0, 2]], da.pow(2)),
                (vec![vec![1, 1], vec![1, 1]], -tr(&mul(&[&adj(a), b, &adj(a), b]))),
                (vec![vec![0, 2], vec![2, 0]], db.pow(2)),
            ],
        ),
    ];
    for (label, spec, expected) in closed {
        let found = extract_semiinvariants(&spec, &rep).expect("valid spec");
        let got: BTreeMap<Vec<Vec<u32>>, Polynomial> = found.iter().map(|h| (h.multidegree.clone(), h.value.clone())).collect();
        let want: BTreeMap<Vec<Vec<u32>>, Polynomial> = expected.into_iter().collect();
        items.push(Item::new(
            format!("{label}: multidegrees"),
            format!("{:?}", want.keys().collect::<Vec<_>>()),
            format!("{:?}", got.keys().collect::<Vec<_>>()),
            got.keys().eq(want.keys()),
        ));
        for (mu, value) in &want {
            let actual = got.get(mu).cloned().unwrap_or_else(Polynomial::zero);
            items.push(Item::poly(format!("{label}: h at {}", domzub::multidegree_text(mu)), value, &actual));
        }
        let det_z = det(&build_dz_matrix(&spec, &rep).expect("valid"));
        let rebuilt = found.iter().fold(Polynomial::zero(), |acc, h| &acc + &h.value.mul_monomial(&h.monomial()));
        items.push(Item::poly(format!("{label}: sum y^mu h_mu = det Z"), &det_z, &rebuilt));
        for h in &found {
            let mu_text = domzub::multidegree_text(&h.multidegree);
            let via = coefficient_via_routes(&spec, &rep, &h.multidegree).expect("2-block spec");
            items.push(Item::poly(format!("{label}: h at {mu_text} equals its route-trace product"), &h.value, &via));
            let point = Sampler::derived(opts.seed, 31).representation(&q, &[2, 2]);
            let zero = zero_weight_of(&q);
            let ok = check_semiinvariance(&h.value, &zero, &point, opts.trials, opts.seed, GroupKind::SpecialLinear).is_ok();
            items.push(Item::flag(format!("{label}: h at {mu_text} SL x{}", opts.trials), ok, "counterexample found"));
            let name = format!("{label}: h at {mu_text} in trace algebra");
            items.push(match membership_in_trace_algebra(&h.value, &gens, &rep) {
                Ok(Membership::Found(c)) => {
                    let value = c.evaluate(&rep).expect("square");
                    Item::new(name, &h.value, c.text(&q), value == h.value)
                }
                Ok(Membership::NotFound) => Item::new(name, &h.value, "not found", false),
                Err(e) => Item::new(name, &h.value, e, false),
            });
        }
    }
    items
}

/// The dimension-3 counterexample, item by item.
pub fn counterexample(opts: &VerifyOptions) -> Vec<Item> {
    let r = match counterexample_check(opts.seed) {
        Ok(r) => r,
        Err(e) => return vec![Item::new("counterexample runs", "report", e, false)],
    };
    let zero = crate::exactpoly::Rational::from_integer(0.into());
    let mut items = vec![Item::new("F != 0 at a random point", "nonzero", &r.f_value, r.f_value != zero)];
    for (a, d) in &r.arrow_degrees {
        items.push(Item::new(format!("degree of F in arrow {a}"), 1, d, *d == 1));
    }
    items.push(Item::new(
        "F changes under diag(2,1,1) at vertex 1",
        format!("value != {}", r.gl_before),
        &r.gl_after,
        r.gl_after != r.gl_before,
    ));
    items.push(Item::new("degree of tr(a,~a) in arrow a", 3, r.adjoint_pair_degree, r.adjoint_pair_degree == 3));
    items.push(Item::new(
        format!("routes through ~a have degree >= 2 in a ({} pairs)", r.reverse_pairs_checked),
        ">= 2",
        r.reverse_min_degree,
        r.reverse_pairs_checked > 0 && r.reverse_min_degree >= 2,
    ));
    items.push(Item::new(
        format!("membership basis at multidegree (1,...,1): [{}]", r.basis.join(", ")),
        "not found",
        if r.not_found { "not found".to_string() } else { format!("consistent at {} points", r.points) },
        r.not_found,
    ));
    items
}

use std::collections::{BTreeMap, BTreeSet, HashMap};

use semiinv::exactpoly::{ratio, Polynomial, VarId};
use semiinv::quiverrep::{generic_representation, DoubledEdge, Quiver};
use semiinv::routes::*;

/// Edges as `(reversed, arrow)`; tails and heads computed here, not by the
/// library.
type E = (bool, usize);

fn ends(q: &Quiver, e: E) -> (usize, usize) {
    let (t, h) = (q.tail(e.1), q.head(e.1));
    if e.0 {
        (h, t)
    } else {
        (t, h)
    }
}

fn adjoint(walk: &[E]) -> Vec<E> {
    walk.iter().rev().map(|&(r, a)| (!r, a)).collect()
}

fn oracle_canonical(walk: &[E]) -> Vec<E> {
    let mut best: Option<Vec<E>> = None;
    for w in [walk.to_vec(), adjoint(walk)] {
        for k in 0..w.len() {
            let mut r = w[k..].to_vec();
            r.extend_from_slice(&w[..k]);
            if best.as_ref().is_none_or(|b| r < *b) {
                best = Some(r);
            }
        }
    }
    best.unwrap_or_default()
}

/// Every ordering of every subset of doubled edges, kept when it closes up.
fn brute_force_classes(q: &Quiver) -> BTreeSet<Vec<E>> {
    let edges: Vec<E> = (0..q.num_arrows()).flat_map(|a| [(false, a), (true, a)]).collect();
    let mut out = BTreeSet::new();
    fn rec(q: &Quiver, edges: &[E], used: &mut Vec<bool>, cur: &mut Vec<E>, out: &mut BTreeSet<Vec<E>>) {
        if !cur.is_empty() && ends(q, cur[cur.len() - 1]).1 == ends(q, cur[0]).0 {
            out.insert(oracle_canonical(cur));
        }
        for i in 0..edges.len() {
            if used[i] {
                continue;
            }
            if let Some(&last) = cur.last() {
                if ends(q, last).1 != ends(q, edges[i]).0 {
                    continue;
                }
            }
            used[i] = true;
            cur.push(edges[i]);
            rec(q, edges, used, cur, out);
            cur.pop();
            used[i] = false;
        }
    }
    rec(q, &edges, &mut vec![false; edges.len()], &mut Vec::new(), &mut out);
    out
}

fn as_pairs(r: &Route) -> Vec<E> {
    r.edges().iter().map(|e| (e.reversed, e.arrow)).collect()
}

fn small_quivers() -> Vec<(&'static str, Quiver)> {
    vec![
        ("arrowless", Quiver::from_triples(&["1", "2"], &[]).unwrap()),
        ("kronecker", Quiver::from_triples(&["1", "2"], &[("a", "1", "2"), ("b", "1", "2")]).unwrap()),
        ("two-cycle", Quiver::from_triples(&["1", "2"], &[("a", "1", "2"), ("b", "2", "1")]).unwrap()),
        ("loop", Quiver::from_triples(&["1"], &[("a", "1", "1")]).unwrap()),
        ("two loops", Quiver::from_triples(&["1"], &[("a", "1", "1"), ("b", "1", "1")]).unwrap()),
        ("triangle", Quiver::from_triples(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3"), ("c", "3", "1")]).unwrap()),
        ("3-kronecker", Quiver::from_triples(&["1", "2"], &[("a", "1", "2"), ("b", "1", "2"), ("c", "1", "2")]).unwrap()),
        ("loop and arrow", Quiver::from_triples(&["1", "2"], &[("a", "1", "1"), ("b", "1", "2"), ("c", "2", "1")]).unwrap()),
        ("path", Quiver::from_triples(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3")]).unwrap()),
    ]
}

#[test]
fn enumeration_matches_brute_force() {
    for (name, q) in small_quivers() {
        let lib = enumerate_simple_routes(&q);
        let lib_set: BTreeSet<Vec<E>> = lib.iter().map(|c| oracle_canonical(&as_pairs(c.route()))).collect();
        assert_eq!(lib_set.len(), lib.len(), "{name}: duplicate classes");
        assert_eq!(lib_set, brute_force_classes(&q), "{name}");
    }
}

#[test]
fn kronecker_listing_is_pinned() {
    let q = Quiver::from_triples(&["1", "2"], &[("a", "1", "2"), ("b", "1", "2")]).unwrap();
    let texts: Vec<String> = enumerate_simple_routes(&q).iter().map(|c| c.text(&q)).collect();
    assert_eq!(texts, ["(a,~a)", "(a,~b)", "(b,~b)", "(a,~a,b,~b)", "(a,~b,b,~a)"]);
    let gens: Vec<String> = generator_routes(&q).iter().map(|c| c.text(&q)).collect();
    assert_eq!(gens, ["(a,~a)", "(a,~b)", "(b,~b)"]);
}

#[test]
fn traces_are_cyclic_and_adjoint_invariant() {
    for (name, q) in small_quivers() {
        let rep = generic_representation(&q, &q.twos());
        for class in enumerate_simple_routes(&q) {
            let r = class.route();
            let t = route_trace(r, &rep).unwrap();
            for k in 0..r.len() {
                assert_eq!(route_trace(&r.rotated(k), &rep).unwrap(), t, "{name} {} rotated {k}", r.text(&q));
            }
            assert_eq!(route_trace(&r.adjoint(), &rep).unwrap(), t, "{name} {} adjoint", r.text(&q));
        }
    }
}

/// `g_v = 2 I` at one vertex scales `phi_a` by 2 when `a` ends at `v` and by
/// 1/2 when it starts there, so a trace of weight `w` picks up `4^(w_v)`.
#[test]
fn weight_matches_scaling() {
    for (name, q) in small_quivers() {
        let rep = generic_representation(&q, &q.twos());
        for class in enumerate_simple_routes(&q) {
            let t = route_trace(class.route(), &rep).unwrap();
            let w = route_weight(&q, class.route());
            for (v, vid) in q.vertices().iter().enumerate() {
                let mut bind = HashMap::new();
                for a in 0..q.num_arrows() {
                    let mut c = ratio(1, 1);
                    if q.head(a) == v {
                        c *= ratio(2, 1);
                    }
                    if q.tail(a) == v {
                        c *= ratio(1, 2);
                    }
                    for r in 1..=2 {
                        for s in 1..=2 {
                            let x = VarId::arrow(q.arrow_name(a), r, s);
                            bind.insert(x.clone(), Polynomial::var(x).scale(&c));
                        }
                    }
                }
                let e = w[vid];
                let factor = if e >= 0 { ratio(4i64.pow(e as u32), 1) } else { ratio(1, 4i64.pow((-e) as u32)) };
                assert_eq!(t.substitute(&bind), t.scale(&factor), "{name} {} at {vid}", class.text(&q));
            }
        }
    }
}

#[test]
fn weight_of_kronecker_generators() {
    let q = Quiver::from_triples(&["1", "2"], &[("a", "1", "2"), ("b", "1", "2")]).unwrap();
    let r = Route::parse(&q, "(a,~b)").unwrap();
    assert_eq!(route_weight(&q, &r), BTreeMap::from([("1".to_string(), -1), ("2".to_string(), 1)]));
}

/// All closed walks in the doubled quiver, by direct search.
fn closed_walks(q: &Quiver, max_len: usize) -> Vec<Vec<E>> {
    let edges: Vec<E> = (0..q.num_arrows()).flat_map(|a| [(false, a), (true, a)]).collect();
    let mut out = Vec::new();
    let mut stack: Vec<Vec<E>> = edges.iter().map(|&e| vec![e]).collect();
    while let Some(w) = stack.pop() {
        let end = ends(q, w[w.len() - 1]).1;
        if end == ends(q, w[0]).0 {
            out.push(w.clone());
        }
        if w.len() < max_len {
            for &e in &edges {
                if ends(q, e).0 == end {
                    let mut n = w.clone();
                    n.push(e);
                    stack.push(n);
                }
            }
        }
    }
    out.sort();
    out
}

fn to_route(q: &Quiver, w: &[E]) -> Route {
    Route::new(q, w.iter().map(|&(r, a)| DoubledEdge { reversed: r, arrow: a }).collect()).unwrap()
}

#[test]
fn repeated_edge_reduction_is_sound_on_kronecker() {
    let q = Quiver::from_triples(&["1", "2"], &[("a", "1", "2"), ("b", "1", "2")]).unwrap();
    let rep = generic_representation(&q, &[2, 2]);
    let walks = closed_walks(&q, 6);
    // 2^(2m+1) alternating walks of length 2m
    assert_eq!(walks.len(), 8 + 32 + 128);
    let mut reduced = 0;
    for w in walks {
        let r = to_route(&q, &w);
        if is_simple(&r) {
            assert_eq!(reduce_repeated(&r), Err(RouteError::AlreadySimple));
            continue;
        }
        let expr = reduce_repeated(&r).unwrap();
        assert!(expr.only_simple_symbols(), "{}", r.text(&q));
        assert_eq!(expr.evaluate(&rep).unwrap(), route_trace(&r, &rep).unwrap(), "{}", r.text(&q));
        reduced += 1;
    }
    assert!(reduced > 50);
}

#[test]
fn reduction_example_text() {
    let q = Quiver::from_triples(&["1", "2"], &[("a", "1", "2"), ("b", "1", "2")]).unwrap();
    let r = Route::parse(&q, "(a,~b,a,~b)").unwrap();
    assert_eq!(reduce_repeated(&r).unwrap().text(&q), "-1/2*tr(a,~a)*tr(b,~b) + tr(a,~b)^2");
    let r = Route::parse(&q, "(a,~a,a,~a)").unwrap();
    let rep = generic_representation(&q, &[2, 2]);
    let det_a = rep.matrix(0).det().unwrap();
    assert_eq!(route_trace(&r, &rep).unwrap(), (&det_a * &det_a).scale(&ratio(2, 1)));
}

#[test]
fn adjoint_pair_elimination_on_two_cycle() {
    let q = Quiver::from_triples(&["1", "2"], &[("a", "1", "2"), ("b", "2", "1")]).unwrap();
    let rep = generic_representation(&q, &[2, 2]);
    let r = Route::parse(&q, "(~a,~b)").unwrap();
    let expr = eliminate_adjoint_pair(&q, &r).unwrap();
    let ba = rep.matrix(1).mul(rep.matrix(0)).unwrap().trace().unwrap();
    assert_eq!(expr.evaluate(&rep).unwrap(), ba);
    assert_eq!(route_trace(&r, &rep).unwrap(), ba);
    for w in closed_walks(&q, 6) {
        let r = to_route(&q, &w);
        if find_adjoint_pair(&q, &r).is_some() {
            let expr = eliminate_adjoint_pair(&q, &r).unwrap();
            assert_eq!(expr.evaluate(&rep).unwrap(), route_trace(&r, &rep).unwrap(), "{}", r.text(&q));
        } else {
            assert_eq!(eliminate_adjoint_pair(&q, &r), Err(RouteError::NoAdjointPair));
        }
    }
}

#[test]
fn adjoint_pair_elimination_with_segments() {
    let q = Quiver::from_triples(
        &["1", "2", "3", "4"],
        &[("a", "1", "2"), ("b", "2", "1"), ("c", "2", "3"), ("d", "3", "2"), ("e", "1", "4"), ("f", "4", "1")],
    )
    .unwrap();
    let rep = generic_representation(&q, &q.twos());
    for text in ["(~a,~b,c,d)", "(~a,e,f,~b)", "(~a,e,f,~b,c,d)", "(~a,~f,~e,~b,~d,~c)"] {
        let r = Route::parse(&q, text).unwrap();
        let expr = eliminate_adjoint_pair(&q, &r).unwrap();
        assert_eq!(expr.evaluate(&rep).unwrap(), route_trace(&r, &rep).unwrap(), "{text}");
    }
}

#[test]
fn malformed_routes_rejected() {
    let q = Quiver::from_triples(&["1", "2"], &[("a", "1", "2"), ("b", "1", "2")]).unwrap();
    assert!(matches!(Route::parse(&q, "(a,b)"), Err(RouteError::Broken(..))));
    assert!(Route::parse(&q, "(a,~z)").is_err());
    assert!(Route::parse(&q, "()").is_err());
    assert!(Route::parse(&q, "(a").is_err());
}

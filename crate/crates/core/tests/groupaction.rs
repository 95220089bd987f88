use std::collections::BTreeMap;

use semiinv::exactpoly::{rat, Polynomial, VarId};
use semiinv::groupaction::*;
use semiinv::quiverrep::{generic_representation, Quiver};
use semiinv::routes::{enumerate_simple_routes, route_trace, route_weight, Route};
use semiinv::sampling::Sampler;
use semiinv::symmatrix::SymMatrix;

fn kronecker() -> Quiver {
    Quiver::from_triples(&["1", "2"], &[("a", "1", "2"), ("b", "1", "2")]).unwrap()
}

fn weight(pairs: &[(&str, i64)]) -> BTreeMap<String, i64> {
    pairs.iter().map(|(v, w)| (v.to_string(), *w)).collect()
}

#[test]
fn determinant_is_semi_invariant() {
    let q = kronecker();
    let f = generic_representation(&q, &[2, 2]).matrix(0).det().unwrap().scale(&rat(2));
    for seed in 0..3 {
        let rep = Sampler::new(seed).representation(&q, &[2, 2]);
        assert!(check_semiinvariance(&f, &weight(&[("1", -1), ("2", 1)]), &rep, 20, seed, GroupKind::GeneralLinear).is_ok());
    }
}

#[test]
fn mixed_trace_has_route_weight() {
    let q = kronecker();
    let r = Route::parse(&q, "(a,~b)").unwrap();
    let f = route_trace(&r, &generic_representation(&q, &[2, 2])).unwrap();
    assert_eq!(route_weight(&q, &r), weight(&[("1", -1), ("2", 1)]));
    let rep = Sampler::new(9).representation(&q, &[2, 2]);
    assert!(check_semiinvariance(&f, &route_weight(&q, &r), &rep, 20, 4, GroupKind::GeneralLinear).is_ok());
    let err = check_semiinvariance(&f, &weight(&[("1", 1), ("2", -1)]), &rep, 20, 4, GroupKind::GeneralLinear).unwrap_err();
    assert_ne!(err.acted, err.expected);
}

#[test]
fn raw_entry_fails_with_counterexample() {
    let q = kronecker();
    let rep = Sampler::new(1).representation(&q, &[2, 2]);
    let f = Polynomial::var(VarId::arrow("b", 2, 1));
    let c = check_semiinvariance(&f, &weight(&[("1", 0), ("2", 0)]), &rep, 20, 2, GroupKind::SpecialLinear).unwrap_err();
    assert!(c.element.is_special());
    assert_ne!(c.acted, c.expected);
}

#[test]
fn every_simple_route_is_semi_invariant() {
    let quivers = [
        kronecker(),
        Quiver::from_triples(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3"), ("c", "3", "1"), ("e", "2", "2")]).unwrap(),
        Quiver::from_triples(&["1", "2"], &[("a", "1", "2"), ("b", "2", "1"), ("c", "1", "1")]).unwrap(),
    ];
    for q in &quivers {
        let generic = generic_representation(q, &q.twos());
        let zero: BTreeMap<String, i64> = q.vertices().iter().map(|v| (v.clone(), 0)).collect();
        for (i, class) in enumerate_simple_routes(q).iter().enumerate() {
            let f = route_trace(class.route(), &generic).unwrap();
            let rep = Sampler::derived(0xC0FFEE, i as u64).representation(q, &q.twos());
            let w = route_weight(q, class.route());
            assert!(check_semiinvariance(&f, &zero, &rep, 20, 0xC0FFEE, GroupKind::SpecialLinear).is_ok(), "{}", class.text(q));
            assert!(check_semiinvariance(&f, &w, &rep, 5, 0xC0FFEE, GroupKind::GeneralLinear).is_ok(), "{}", class.text(q));
        }
    }
}

#[test]
fn action_composes_on_the_nose() {
    let q = Quiver::from_triples(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3"), ("c", "3", "1")]).unwrap();
    for seed in 0..8 {
        let rep = Sampler::new(seed).representation(&q, &[2, 2, 2]);
        let g = random_general_linear(&[2, 2, 2], seed);
        let h = random_general_linear(&[2, 2, 2], seed + 100);
        let lhs = act(&g, &act(&h, &rep).unwrap()).unwrap();
        assert_eq!(lhs, act(&g.compose(&h).unwrap(), &rep).unwrap());
        let back = act(&GroupElement::new(g.components().iter().map(|c| inverse(c).unwrap()).collect()).unwrap(), &act(&g, &rep).unwrap());
        assert_eq!(back.unwrap(), rep);
    }
}

#[test]
fn general_linear_diagonals_have_expected_determinants() {
    for seed in 0..20 {
        let g = random_general_linear(&[2, 3], seed);
        for v in 0..2 {
            let d = g.det(v);
            assert_ne!(d, rat(0));
            // shear products have determinant 1, so det is a product of
            // entries from {±1, ±2, ±3, ±1/2}
            let mut x = d.numer().clone() * d.denom().clone();
            for p in [2, 3] {
                while &x % p == 0.into() {
                    x /= p;
                }
            }
            assert!(x == 1.into() || x == (-1).into(), "det {d}");
        }
    }
}

#[test]
fn mismatched_element_rejected() {
    let q = kronecker();
    let rep = generic_representation(&q, &[2, 2]);
    assert!(matches!(act(&GroupElement::identity(&[2]), &rep), Err(GroupError::VertexCount { .. })));
    assert!(matches!(act(&GroupElement::identity(&[2, 3]), &rep), Err(GroupError::DimMismatch { vertex: 1, .. })));
    let singular = SymMatrix::from_ints(2, 2, &[1, 2, 2, 4]).unwrap();
    assert!(matches!(GroupElement::new(vec![SymMatrix::identity(2), singular]), Err(GroupError::NonInvertible { vertex: 1 })));
}

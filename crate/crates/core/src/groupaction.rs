//! The action of `prod_v GL(W_v)` on representations, and exact checks of
//! semi-invariance with a prescribed determinant character.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactpoly::{ratio, Polynomial, Rational};
use crate::quiverrep::{QuiverError, Representation};
use crate::sampling::Sampler;
use crate::symmatrix::{MatrixError, SymMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group element at vertex {vertex} is singular")]
    NonInvertible { vertex: usize },
    #[error("group element has {got} components, representation has {expected} vertices")]
    VertexCount { expected: usize, got: usize },
    #[error("group element at vertex {vertex} is {got}x{got}, expected {expected}x{expected}")]
    DimMismatch { vertex: usize, expected: usize, got: usize },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

/// Which sampler produced (or should produce) an element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    SpecialLinear,
    GeneralLinear,
}

/// One invertible rational matrix per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupElement {
    components: Vec<SymMatrix>,
    special: bool,
}

impl GroupElement {
    pub fn new(components: Vec<SymMatrix>) -> Result<Self, GroupError> {
        let mut special = true;
        for (v, g) in components.iter().enumerate() {
            let d = g.det()?;
            if d.is_zero() {
                return Err(GroupError::NonInvertible { vertex: v });
            }
            special &= d == Polynomial::one();
        }
        Ok(GroupElement { components, special })
    }

    pub fn identity(dims: &[usize]) -> Self {
        GroupElement { components: dims.iter().map(|&d| SymMatrix::identity(d)).collect(), special: true }
    }

    /// `t * I` at every vertex.
    pub fn central(dims: &[usize], t: Rational) -> Result<Self, GroupError> {
        let c = Polynomial::constant(t);
        Self::new(dims.iter().map(|&d| SymMatrix::identity(d).scale(&c)).collect())
    }

    pub fn component(&self, v: usize) -> &SymMatrix {
        &self.components[v]
    }

    pub fn components(&self) -> &[SymMatrix] {
        &self.components
    }

    pub fn is_special(&self) -> bool {
        self.special
    }

    pub fn det(&self, v: usize) -> Rational {
        self.components[v].det().expect("square").as_constant().expect("constant matrix")
    }

    /// Vertexwise product `self * other`.
    pub fn compose(&self, other: &GroupElement) -> Result<GroupElement, GroupError> {
        let comps = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.mul(b))
            .collect::<Result<Vec<_>, _>>()?;
        GroupElement::new(comps)
    }

    /// `prod_v det(g_v)^weight(v)`.
    pub fn character(&self, weight: &[i64]) -> Rational {
        let mut c = Rational::one();
        for (v, &w) in weight.iter().enumerate() {
            let d = self.det(v);
            let d = if w < 0 { d.recip() } else { d };
            for _ in 0..w.unsigned_abs() {
                c *= &d;
            }
        }
        c
    }
}

fn shear(n: usize, i: usize, j: usize, c: Rational) -> SymMatrix {
    let mut m = SymMatrix::identity(n);
    m.set(i, j, Polynomial::constant(c));
    m
}

fn shear_product(n: usize, s: &mut Sampler) -> SymMatrix {
    let mut g = SymMatrix::identity(n);
    if n < 2 {
        return g;
    }
    let count = s.int_in(4, 8);
    for _ in 0..count {
        let i = s.index(n);
        let mut j = s.index(n - 1);
        if j >= i {
            j += 1;
        }
        g = g.mul(&shear(n, i, j, s.nonzero_small())).expect("square");
    }
    g
}

/// Each component is a product of 4 to 8 elementary shears, so every
/// determinant is exactly 1.
pub fn random_special_linear(dims: &[usize], seed: u64) -> GroupElement {
    let mut s = Sampler::new(seed);
    GroupElement { components: dims.iter().map(|&d| shear_product(d, &mut s)).collect(), special: true }
}

/// Shear products times diagonals with entries in `{±1, ±2, ±3, ±1/2}`.
pub fn random_general_linear(dims: &[usize], seed: u64) -> GroupElement {
    let mut s = Sampler::new(seed);
    let choices = [ratio(1, 1), ratio(2, 1), ratio(3, 1), ratio(1, 2)];
    let comps: Vec<SymMatrix> = dims
        .iter()
        .map(|&d| {
            let sh = shear_product(d, &mut s);
            let diag = SymMatrix::from_fn(d, d, |i, j| {
                if i == j {
                    let v = choices[s.index(choices.len())].clone();
                    Polynomial::constant(if s.index(2) == 0 { v } else { -v })
                } else {
                    Polynomial::zero()
                }
            });
            sh.mul(&diag).expect("square")
        })
        .collect();
    GroupElement::new(comps).expect("invertible by construction")
}

pub fn random_element(kind: GroupKind, dims: &[usize], seed: u64) -> GroupElement {
    match kind {
        GroupKind::SpecialLinear => random_special_linear(dims, seed),
        GroupKind::GeneralLinear => random_general_linear(dims, seed),
    }
}

/// Exact inverse `adj(g) / det(g)` of a constant matrix.
pub fn inverse(g: &SymMatrix) -> Result<SymMatrix, GroupError> {
    let d = g.det()?.as_constant().expect("constant matrix");
    if d.is_zero() {
        return Err(GroupError::NonInvertible { vertex: usize::MAX });
    }
    let inv = Polynomial::constant(d.recip());
    Ok(g.adjugate()?.scale(&inv))
}

/// `(g . phi)_a = g_{head a} phi_a g_{tail a}^{-1}`.
pub fn act(g: &GroupElement, rep: &Representation) -> Result<Representation, GroupError> {
    let q = rep.quiver();
    let n = q.vertices().len();
    if g.components.len() != n {
        return Err(GroupError::VertexCount { expected: n, got: g.components.len() });
    }
    let mut inverses = Vec::with_capacity(n);
    for (v, c) in g.components.iter().enumerate() {
        if c.rows() != rep.dim(v) {
            return Err(GroupError::DimMismatch { vertex: v, expected: rep.dim(v), got: c.rows() });
        }
        inverses.push(inverse(c).map_err(|_| GroupError::NonInvertible { vertex: v })?);
    }
    let matrices = (0..q.num_arrows())
        .map(|i| g.components[q.head(i)].mul(rep.matrix(i))?.mul(&inverses[q.tail(i)]))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Representation::new(q, rep.dims().to_vec(), matrices)?)
}

/// A failed semi-invariance trial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub trial: usize,
    pub element: GroupElement,
    /// `f(g . phi)`
    pub acted: Polynomial,
    /// `prod det(g_v)^w(v) * f(phi)`
    pub expected: Polynomial,
}

pub type Invariance = Result<(), Box<Counterexample>>;

/// Checks `f(g . phi) = prod_v det(g_v)^weight(v) f(phi)` for `trials`
/// sampled elements, exactly. `f` is written in the generic variables
/// `x_<a>_<p>_<q>`; `rep` is the point `phi` (concrete or symbolic).
/// With special-linear elements the character is 1 whatever the weight.
pub fn check_semiinvariance(
    f: &Polynomial,
    weight: &BTreeMap<String, i64>,
    rep: &Representation,
    trials: usize,
    seed: u64,
    kind: GroupKind,
) -> Invariance {
    let q = rep.quiver();
    let w: Vec<i64> = q.vertices().iter().map(|v| weight.get(v).copied().unwrap_or(0)).collect();
    let base = value_at(f, rep);
    for trial in 0..trials {
        let g = random_element(kind, rep.dims(), seed.wrapping_add(trial as u64));
        let moved = act(&g, rep).expect("sampled elements are invertible with matching shapes");
        let acted = value_at(f, &moved);
        let expected = base.scale(&g.character(&w));
        if acted != expected {
            return Err(Box::new(Counterexample { trial, element: g, acted, expected }));
        }
    }
    Ok(())
}

/// `f` at the point `rep`, by rational evaluation when `rep` is concrete.
fn value_at(f: &Polynomial, rep: &Representation) -> Polynomial {
    rep.values()
        .and_then(|v| f.evaluate(&v))
        .map(Polynomial::constant)
        .unwrap_or_else(|| f.substitute(&rep.bindings()))
}

/// Weight vector keyed by vertex id, all zero.
pub fn zero_weight(rep: &Representation) -> BTreeMap<String, i64> {
    rep.quiver().vertices().iter().map(|v| (v.clone(), 0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{rat, VarId};
    use crate::quiverrep::{generic_representation, Quiver};

    fn kronecker() -> Quiver {
        Quiver::from_triples(&["1", "2"], &[("a", "1", "2"), ("b", "1", "2")]).unwrap()
    }

    #[test]
    fn special_linear_has_unit_determinants() {
        for seed in 0..10 {
            let g = random_special_linear(&[2, 3, 1], seed);
            for v in 0..3 {
                assert_eq!(g.det(v), rat(1));
            }
            assert!(g.is_special());
            assert_eq!(g, random_special_linear(&[2, 3, 1], seed));
        }
    }

    #[test]
    fn identity_and_center_act_trivially() {
        let q = kronecker();
        let rep = generic_representation(&q, &[2, 2]);
        assert_eq!(act(&GroupElement::identity(&[2, 2]), &rep).unwrap(), rep);
        let t = GroupElement::central(&[2, 2], ratio(-3, 7)).unwrap();
        assert_eq!(act(&t, &rep).unwrap(), rep);
    }

    #[test]
    fn diagonal_scales_rows() {
        let q = kronecker();
        let rep = generic_representation(&q, &[2, 2]);
        let g2 = SymMatrix::new(2, 2, vec![Polynomial::int(2), Polynomial::zero(), Polynomial::zero(), Polynomial::constant(ratio(1, 2))]).unwrap();
        let g = GroupElement::new(vec![SymMatrix::identity(2), g2]).unwrap();
        let moved = act(&g, &rep).unwrap();
        let x = |r, c| Polynomial::var(VarId::arrow("a", r, c));
        assert_eq!(moved.matrix(0).get(0, 1), &x(1, 2).scale(&rat(2)));
        assert_eq!(moved.matrix(0).get(1, 0), &x(2, 1).scale(&ratio(1, 2)));
    }

    #[test]
    fn singular_element_rejected() {
        assert_eq!(
            GroupElement::new(vec![SymMatrix::zeros(2, 2)]),
            Err(GroupError::NonInvertible { vertex: 0 })
        );
    }

    #[test]
    fn raw_entry_is_not_semi_invariant() {
        let q = kronecker();
        let rep = Sampler::new(3).representation(&q, &[2, 2]);
        let f = Polynomial::var(VarId::arrow("a", 1, 1));
        let w = zero_weight(&rep);
        assert!(check_semiinvariance(&f, &w, &rep, 5, 11, GroupKind::SpecialLinear).is_err());
        assert!(check_semiinvariance(&f, &w, &rep, 5, 11, GroupKind::GeneralLinear).is_err());
    }

    #[test]
    fn determinant_character() {
        let q = kronecker();
        let rep = Sampler::new(5).representation(&q, &[2, 2]);
        let det_a = generic_representation(&q, &[2, 2]).matrix(0).det().unwrap().scale(&rat(2));
        let w = BTreeMap::from([("1".to_string(), -1), ("2".to_string(), 1)]);
        assert!(check_semiinvariance(&det_a, &w, &rep, 20, 1, GroupKind::GeneralLinear).is_ok());
        assert!(check_semiinvariance(&det_a, &zero_weight(&rep), &rep, 20, 1, GroupKind::GeneralLinear).is_err());
    }
}

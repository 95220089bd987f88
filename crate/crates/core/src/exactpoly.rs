//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Variables are tagged ([`VarId`]) so that arrow-matrix entries, block
//! variables of a block matrix and auxiliary symbols live in one ring and
//! can be told apart when extracting coefficients.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for `n / d`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("pattern variable {0} lies outside the extraction scope")]
    PatternOutsideScope(VarId),
}

/// A polynomial variable.
///
/// The derived order is the one used everywhere: all arrow entries, then
/// block variables, then auxiliary symbols; lexicographic inside a kind.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarId {
    /// Entry `(row, col)` (1-based) of the matrix of an arrow.
    ArrowEntry { arrow: Arc<str>, row: u32, col: u32 },
    /// Formal variable multiplying block `(r, s)` of a block matrix.
    BlockVar { r: u32, s: u32 },
    Aux(u32),
}

impl VarId {
    pub fn arrow(arrow: &str, row: u32, col: u32) -> Self {
        VarId::ArrowEntry { arrow: Arc::from(arrow), row, col }
    }

    pub fn block(r: u32, s: u32) -> Self {
        VarId::BlockVar { r, s }
    }

    pub fn arrow_name(&self) -> Option<&str> {
        match self {
            VarId::ArrowEntry { arrow, .. } => Some(arrow),
            _ => None,
        }
    }

    pub fn is_block_var(&self) -> bool {
        matches!(self, VarId::BlockVar { .. })
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarId::ArrowEntry { arrow, row, col } => write!(f, "x_{arrow}_{row}_{col}"),
            VarId::BlockVar { r, s } => write!(f, "y_{r}_{s}"),
            VarId::Aux(i) => write!(f, "t_{i}"),
        }
    }
}

/// A power product, stored as a sorted association list without zero exponents.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(VarId, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: VarId) -> Self {
        Monomial(vec![(v, 1)])
    }

    /// Builds a monomial from arbitrary `(var, exponent)` pairs; repeated
    /// variables are merged and zero exponents dropped.
    pub fn from_pairs<I: IntoIterator<Item = (VarId, u32)>>(pairs: I) -> Self {
        let mut map: BTreeMap<VarId, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_insert(0) += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, v: &VarId) -> u32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(v))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = &(VarId, u32)> {
        self.0.iter()
    }

    /// Total degree in the variables accepted by `pred`.
    pub fn degree_where(&self, pred: impl Fn(&VarId) -> bool) -> u32 {
        self.0.iter().filter(|(v, _)| pred(v)).map(|(_, e)| e).sum()
    }

    /// Splits into the part over variables accepted by `pred` and the rest.
    pub fn split(&self, pred: impl Fn(&VarId) -> bool) -> (Monomial, Monomial) {
        let (inside, outside): (Vec<_>, Vec<_>) = self.0.iter().cloned().partition(|(v, _)| pred(v));
        (Monomial(inside), Monomial(outside))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Graded lexicographic comparison, earlier variables being more significant.
    pub fn grlex_cmp(&self, other: &Monomial) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for (x, y) in self.0.iter().zip(other.0.iter()) {
                match x.0.cmp(&y.0) {
                    // self carries the earlier variable, other has exponent 0 there
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match x.1.cmp(&y.1) {
                        Ordering::Equal => {}
                        ord => return ord,
                    },
                }
            }
            self.0.len().cmp(&other.0.len())
        })
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, (v, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial in canonical form: no zero coefficients are ever stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::term(c, Monomial::one())
    }

    pub fn int(n: i64) -> Self {
        Polynomial::constant(rat(n))
    }

    pub fn var(v: VarId) -> Self {
        Polynomial::term(Rational::one(), Monomial::var(v))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(it: I) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// The value of a constant polynomial, `None` otherwise.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn variables(&self) -> BTreeSet<VarId> {
        self.terms
            .keys()
            .flat_map(|m| m.iter().map(|(v, _)| v.clone()))
            .collect()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(n, k)| (n.mul(m), k.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Keeps only the terms whose monomial satisfies `keep`.
    ///
    /// When the rejected monomials form an ideal (for instance "some block
    /// variable has exponent above 1") this commutes with multiplication, so
    /// it can be applied to intermediate results of a product.
    pub fn retain(&mut self, keep: impl Fn(&Monomial) -> bool) {
        self.terms.retain(|m, _| keep(m));
    }

    /// Simultaneous substitution; unbound variables stay symbolic.
    pub fn substitute(&self, bindings: &HashMap<VarId, Polynomial>) -> Polynomial {
        let mut power_cache: HashMap<(VarId, u32), Polynomial> = HashMap::new();
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut acc = Polynomial::constant(c.clone());
            for (v, e) in m.iter() {
                match bindings.get(v) {
                    Some(value) => {
                        let pw = power_cache
                            .entry((v.clone(), *e))
                            .or_insert_with(|| value.pow(*e))
                            .clone();
                        acc = &acc * &pw;
                        if acc.is_zero() {
                            break;
                        }
                    }
                    None => kept.push((v.clone(), *e)),
                }
            }
            if acc.is_zero() {
                continue;
            }
            let rest = Monomial(kept);
            for (n, k) in acc.terms {
                out.add_term(n.mul(&rest), k);
            }
        }
        out
    }

    /// Evaluates at rational values; every variable must be bound.
    pub fn evaluate(&self, values: &HashMap<VarId, Rational>) -> Option<Rational> {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.iter() {
                let x = values.get(v)?;
                t *= num_traits::pow(x.clone(), *e as usize);
            }
            total += t;
        }
        Some(total)
    }

    /// Views `self` as a polynomial in the `scope` variables with
    /// coefficients in the remaining ones.
    pub fn expand_in(&self, scope: impl Fn(&VarId) -> bool) -> BTreeMap<Monomial, Polynomial> {
        let mut out: BTreeMap<Monomial, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (inside, outside) = m.split(&scope);
            out.entry(inside).or_default().add_term(outside, c.clone());
        }
        out
    }

    /// Coefficient of the exact monomial `pattern` in the scope variables.
    pub fn coeff_extract(&self, pattern: &Monomial, scope: &BTreeSet<VarId>) -> Result<Polynomial, PolyError> {
        if let Some((v, _)) = pattern.iter().find(|(v, _)| !scope.contains(v)) {
            return Err(PolyError::PatternOutsideScope(v.clone()));
        }
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let (inside, outside) = m.split(|v| scope.contains(v));
            if &inside == pattern {
                out.add_term(outside, c.clone());
            }
        }
        Ok(out)
    }

    /// Maximal total degree in the variables accepted by `pred`; `-1` for zero.
    pub fn degree_where(&self, pred: impl Fn(&VarId) -> bool) -> i64 {
        self.terms
            .keys()
            .map(|m| m.degree_where(&pred) as i64)
            .max()
            .unwrap_or(-1)
    }

    pub fn degree_in(&self, vars: &BTreeSet<VarId>) -> i64 {
        self.degree_where(|v| vars.contains(v))
    }

    pub fn total_degree(&self) -> i64 {
        self.degree_where(|_| true)
    }

    /// Terms in descending graded-lex order (the order of the text form).
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.grlex_cmp(a.0));
        v
    }

    /// True when every coefficient is an integer.
    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }
}

impl From<Rational> for Polynomial {
    fn from(c: Rational) -> Self {
        Polynomial::constant(c)
    }
}

impl From<VarId> for Polynomial {
    fn from(v: VarId) -> Self {
        Polynomial::var(v)
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(mut self, rhs: Polynomial) -> Polynomial {
        self += &rhs;
        self
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        for (m, c) in &self.terms {
            for (n, k) in &rhs.terms {
                out.add_term(m.mul(n), c * k);
            }
        }
        out
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, c: &Rational) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

/// Canonical text: descending graded-lex terms, `p/q` coefficients.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            let magnitude = c.abs();
            match (i, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write_rational(f, &magnitude)?;
            } else {
                if !magnitude.is_one() {
                    write_rational(f, &magnitude)?;
                    write!(f, "*")?;
                }
                write!(f, "{m}")?;
            }
        }
        Ok(())
    }
}

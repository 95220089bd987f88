//! Independent oracles shared by the integration tests. Nothing here calls
//! the determinant or enumeration code under test.
#![allow(dead_code)]

use semiinv::exactpoly::{Polynomial, Rational};
use semiinv::symmatrix::SymMatrix;

/// All permutations of `0..n` with their signs.
pub fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    fn rec(prefix: &mut Vec<usize>, left: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, i64)>) {
        if left.is_empty() {
            let p = prefix.clone();
            let mut inv = 0;
            for i in 0..p.len() {
                for j in i + 1..p.len() {
                    if p[i] > p[j] {
                        inv += 1;
                    }
                }
            }
            out.push((p, if inv % 2 == 0 { 1 } else { -1 }));
            return;
        }
        for i in 0..left.len() {
            let v = left.remove(i);
            prefix.push(v);
            rec(prefix, left, out);
            prefix.pop();
            left.insert(i, v);
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut (0..n).collect(), &mut out);
    out
}

/// Signed sum over permutations.
pub fn leibniz_det(m: &SymMatrix) -> Polynomial {
    let n = m.rows();
    let mut total = Polynomial::zero();
    for (p, sign) in permutations(n) {
        let mut t = Polynomial::int(sign);
        for (i, &j) in p.iter().enumerate() {
            t = &t * m.get(i, j);
        }
        total += &t;
    }
    total
}

/// Laplace expansion along the first row, over rationals.
pub fn cofactor_det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut total = Rational::from_integer(0.into());
    for j in 0..n {
        if m[0][j] == Rational::from_integer(0.into()) {
            continue;
        }
        let minor: Vec<Vec<Rational>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, v)| v.clone()).collect())
            .collect();
        let t = &m[0][j] * cofactor_det(&minor);
        if j % 2 == 0 {
            total += t;
        } else {
            total -= t;
        }
    }
    total
}

pub fn to_rows(m: &SymMatrix) -> Vec<Vec<Rational>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j).as_constant().expect("constant entry")).collect())
        .collect()
}

//! Exact Gauss-Jordan elimination over the rationals.

use num_traits::Zero;

use crate::exactpoly::Rational;

/// Reduced row echelon form of `[a | b]`.
struct Echelon {
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

fn eliminate(a: &[Vec<Rational>], b: &[Rational], cols: usize) -> Echelon {
    let mut rows: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut next = 0;
    for c in 0..cols {
        let Some(p) = (next..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(next, p);
        let inv = rows[next][c].recip();
        for x in rows[next].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[next].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == next || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        next += 1;
        if next == rows.len() {
            break;
        }
    }
    Echelon { rows, pivots }
}

/// Solves `a x = b` exactly, with free variables set to zero.
///
/// `a` is row-major with `cols` columns (rows may be empty when `cols = 0`).
/// Returns `None` when the system is inconsistent.
pub fn solve(a: &[Vec<Rational>], b: &[Rational], cols: usize) -> Option<Vec<Rational>> {
    assert_eq!(a.len(), b.len(), "one right-hand side per row");
    let e = eliminate(a, b, cols);
    let rank = e.pivots.len();
    if e.rows[rank..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (r, &c) in e.pivots.iter().enumerate() {
        x[c] = e.rows[r][cols].clone();
    }
    Some(x)
}

pub fn rank(a: &[Vec<Rational>], cols: usize) -> usize {
    let zeros = vec![Rational::zero(); a.len()];
    eliminate(a, &zeros, cols).pivots.len()
}

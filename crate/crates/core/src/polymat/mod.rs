//! Univariate polynomials, dense matrices, Laurent series and rational
//! functions over a [`Field`](crate::ff::Field).

mod matrix;
mod poly;
mod ratfunc;
mod series;

pub use matrix::Matrix;
pub use poly::Poly;
pub use ratfunc::{invert_ratfunc, solve_ratfunc, RatFunc};
pub use series::LaurentSeries;

use crate::error::Result;
use crate::ff::Field;

/// Determinant over `K[x]` by fraction-free elimination.
pub fn det_poly(field: &Field, mut m: Vec<Vec<Poly>>) -> Result<Poly> {
    let n = m.len();
    if n == 0 {
        return Ok(Poly::one(field));
    }
    let mut prev = Poly::one(field);
    let mut negate = false;
    for k in 0..n - 1 {
        let Some(pr) = (k..n).find(|&r| !m[r][k].is_zero()) else {
            return Ok(Poly::zero(field));
        };
        if pr != k {
            m.swap(pr, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = t.div_exact(&prev)?;
            }
            m[i][k] = Poly::zero(field);
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    Ok(if negate { d.neg() } else { d })
}

/// `Res_y(a, b)` for `a = Σ a_i(x) y^i`, `b = Σ b_j(x) y^j`.
pub fn resultant_y(field: &Field, a: &[Poly], b: &[Poly]) -> Result<Poly> {
    let trim = |v: &[Poly]| {
        let mut v = v.to_vec();
        while v.last().is_some_and(|p| p.is_zero()) {
            v.pop();
        }
        v
    };
    let (a, b) = (trim(a), trim(b));
    if a.is_empty() || b.is_empty() {
        return Ok(Poly::zero(field));
    }
    let (da, db) = (a.len() - 1, b.len() - 1);
    let n = da + db;
    if n == 0 {
        return Ok(Poly::one(field));
    }
    let mut m = vec![vec![Poly::zero(field); n]; n];
    for i in 0..db {
        for (j, c) in a.iter().rev().enumerate() {
            m[i][i + j] = c.clone();
        }
    }
    for i in 0..da {
        for (j, c) in b.iter().rev().enumerate() {
            m[db + i][i + j] = c.clone();
        }
    }
    det_poly(field, m)
}

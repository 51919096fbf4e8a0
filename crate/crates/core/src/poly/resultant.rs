//! Resultants with respect to the last variable.

use super::multipoly::MultiPoly;
use crate::error::{Error, Result};

/// Sylvester matrix of `f` and `g` viewed as univariate polynomials in the
/// last variable; entries are polynomials in the remaining variables.
pub fn sylvester_matrix(f: &MultiPoly, g: &MultiPoly) -> Result<Vec<Vec<MultiPoly>>> {
    if f.num_vars() != g.num_vars() {
        return Err(Error::DimensionMismatch {
            expected: f.num_vars(),
            found: g.num_vars(),
        });
    }
    if f.num_vars() == 0 {
        return Err(Error::ConstantInLastVariable);
    }
    let last = f.num_vars() - 1;
    let (m, n) = (f.degree_in(last) as usize, g.degree_in(last) as usize);
    if m == 0 || n == 0 {
        return Err(Error::ConstantInLastVariable);
    }
    let fc = f.coeffs_in_last();
    let gc = g.coeffs_in_last();
    let size = m + n;
    let zero = MultiPoly::zero(last);
    let mut rows = vec![vec![zero.clone(); size]; size];
    // Coefficients listed from the highest power down.
    for i in 0..n {
        for (j, c) in fc.iter().rev().enumerate() {
            rows[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in gc.iter().rev().enumerate() {
            rows[n + i][i + j] = c.clone();
        }
    }
    Ok(rows)
}

/// Determinant by fraction-free (Bareiss) elimination over the polynomial ring.
pub fn determinant(mut a: Vec<Vec<MultiPoly>>, num_vars: usize) -> MultiPoly {
    let n = a.len();
    if n == 0 {
        return MultiPoly::one(num_vars);
    }
    let mut prev = MultiPoly::one(num_vars);
    let mut negate = false;
    for k in 0..n.saturating_sub(1) {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return MultiPoly::zero(num_vars),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num
                    .exact_div(&prev)
                    .expect("Bareiss step divides exactly");
            }
            a[i][k] = MultiPoly::zero(num_vars);
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        -&det
    } else {
        det
    }
}

/// `res(f, g)` with respect to the last variable; the result has one
/// variable fewer and vanishes on the projection of every common zero.
pub fn resultant_wrt_last(f: &MultiPoly, g: &MultiPoly) -> Result<MultiPoly> {
    let m = sylvester_matrix(f, g)?;
    Ok(determinant(m, f.num_vars() - 1))
}

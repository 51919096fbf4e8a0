//! Exact dense linear algebra over the rationals.

use num_traits::{One, Zero};

use super::rational::Rational;

/// Reduced row echelon form of a set of rows.
#[derive(Clone, Debug)]
pub struct Echelon {
    /// Nonzero rows, each with a leading 1 in its pivot column.
    pub rows: Vec<Vec<Rational>>,
    /// Pivot column of each row.
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

impl Echelon {
    /// Row-reduces `rows`, scanning columns in the order given by `col_order`
    /// (a permutation of `0..ncols`). Pivots land on the earliest possible
    /// columns of that order.
    pub fn with_column_order(rows: Vec<Vec<Rational>>, ncols: usize, col_order: &[usize]) -> Self {
        let mut rows: Vec<Vec<Rational>> = rows
            .into_iter()
            .filter(|r| r.iter().any(|v| !v.is_zero()))
            .collect();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for &c in col_order {
            if rank == rows.len() {
                break;
            }
            let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
                continue;
            };
            rows.swap(rank, p);
            let inv = Rational::one() / &rows[rank][c];
            for v in rows[rank].iter_mut() {
                if !v.is_zero() {
                    *v *= &inv;
                }
            }
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r == rank || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for (j, pv) in pivot_row.iter().enumerate() {
                    if !pv.is_zero() {
                        row[j] -= &f * pv;
                    }
                }
            }
            pivots.push(c);
            rank += 1;
        }
        rows.truncate(rank);
        Echelon { rows, pivots, ncols }
    }

    pub fn new(rows: Vec<Vec<Rational>>, ncols: usize) -> Self {
        let order: Vec<usize> = (0..ncols).collect();
        Echelon::with_column_order(rows, ncols, &order)
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Residual of `v` after eliminating every pivot column; zero exactly when
    /// `v` lies in the row space.
    pub fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut out = v.to_vec();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            if out[c].is_zero() {
                continue;
            }
            let f = out[c].clone();
            for (j, rv) in row.iter().enumerate() {
                if !rv.is_zero() {
                    out[j] -= &f * rv;
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Basis of `{x : row · x = 0 for every row}`.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let mut is_pivot = vec![false; self.ncols];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        let mut out = Vec::new();
        for free in (0..self.ncols).filter(|&c| !is_pivot[c]) {
            let mut x = vec![Rational::zero(); self.ncols];
            x[free] = Rational::one();
            for (row, &c) in self.rows.iter().zip(&self.pivots) {
                x[c] = -row[free].clone();
            }
            out.push(x);
        }
        out
    }
}

pub fn rank(rows: Vec<Vec<Rational>>, ncols: usize) -> usize {
    Echelon::new(rows, ncols).rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational::int;

    fn row(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn rank_and_nullspace() {
        let rows = vec![row(&[1, 2, 3]), row(&[2, 4, 6]), row(&[1, 0, 1])];
        let e = Echelon::new(rows.clone(), 3);
        assert_eq!(e.rank(), 2);
        let ns = e.nullspace();
        assert_eq!(ns.len(), 1);
        for r in &rows {
            let dot: Rational = r.iter().zip(&ns[0]).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn column_order_moves_pivots() {
        let rows = vec![row(&[1, 1])];
        assert_eq!(Echelon::new(rows.clone(), 2).pivots, vec![0]);
        assert_eq!(Echelon::with_column_order(rows, 2, &[1, 0]).pivots, vec![1]);
    }

    #[test]
    fn membership() {
        let e = Echelon::new(vec![row(&[1, 1, 0])], 3);
        assert!(e.contains(&row(&[2, 2, 0])));
        assert!(!e.contains(&row(&[1, 0, 0])));
    }
}

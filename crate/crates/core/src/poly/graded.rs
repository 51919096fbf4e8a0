//! Degree-`e` slices of principal ideals in the homogeneous coordinate ring.
//!
//! For an affine `P` of degree `D` in `d` variables, `P†` is its
//! homogenization in `x0..xd`. The slice `(P†)_e` is spanned by
//! `m · P†` for the monomials `m` of degree `e - D`. A complement of the slice
//! inside the space of all degree-`e` forms supplies polynomials that are
//! certainly not multiples of `P`.

use std::collections::HashMap;

use num_traits::{One, Zero};

use super::linalg::Echelon;
use super::multipoly::{Exponents, MultiPoly};
use super::rational::Rational;

/// All exponent vectors of `num_vars` variables with total degree exactly `e`,
/// in ascending lexicographic order.
pub fn monomials_of_degree(num_vars: usize, e: u32) -> Vec<Exponents> {
    fn rec(n: usize, left: u32, cur: &mut Exponents, out: &mut Vec<Exponents>) {
        if cur.len() == n - 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in 0..=left {
            cur.push(k);
            rec(n, left - k, cur, out);
            cur.pop();
        }
    }
    if num_vars == 0 {
        return if e == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    rec(num_vars, e, &mut Vec::with_capacity(num_vars), &mut out);
    out
}

/// All exponent vectors with total degree at most `e`, graded by degree.
pub fn monomials_up_to(num_vars: usize, e: u32) -> Vec<Exponents> {
    (0..=e).flat_map(|k| monomials_of_degree(num_vars, k)).collect()
}

/// `C(n, k)`, saturating at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by i + 1 at every step.
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u64::MAX,
        };
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// The ideal slice `(P†)_e` together with a monomial complement.
#[derive(Clone, Debug)]
pub struct GradedSliceBasis {
    pub ambient_degree: u32,
    /// The affine polynomial whose ideal is sliced.
    pub poly: MultiPoly,
    /// `m · P†` for each monomial `m` of degree `e - D` (homogeneous, `x0` first).
    pub ideal_basis: Vec<MultiPoly>,
    /// Degree-`e` monomials spanning a complement of the slice.
    pub complement_basis: Vec<MultiPoly>,
    columns: HashMap<Exponents, usize>,
    echelon: Echelon,
}

impl GradedSliceBasis {
    pub fn ambient_dim(&self) -> usize {
        self.columns.len()
    }

    fn to_vector(&self, h: &MultiPoly) -> Option<Vec<Rational>> {
        let mut v = vec![Rational::zero(); self.columns.len()];
        for (e, c) in h.terms() {
            v[*self.columns.get(e)?] = c.clone();
        }
        Some(v)
    }

    /// Whether a homogeneous degree-`e` form lies in `(P†)_e`.
    pub fn ideal_contains(&self, h: &MultiPoly) -> bool {
        match self.to_vector(h) {
            Some(v) => self.echelon.contains(&v),
            None => false,
        }
    }

    /// Certificate that the affine polynomial `q` (of degree at most `e`) is not a
    /// multiple of `P`: its degree-`e` homogenization reduces to a nonzero
    /// vector modulo the slice.
    pub fn certifies_non_member(&self, q: &MultiPoly) -> bool {
        if q.is_zero() || q.degree() > self.ambient_degree {
            return false;
        }
        !self.ideal_contains(&q.homogenize_to(self.ambient_degree))
    }

    /// The complement monomials with `x0 = 1`.
    pub fn complement_affine(&self) -> Vec<MultiPoly> {
        self.complement_basis
            .iter()
            .map(|m| m.dehomogenize_unchecked())
            .collect()
    }
}

/// Builds `(P†)_e` and its lexicographically least monomial complement.
///
/// Greedily taking degree-`e` monomials in ascending lex order whenever they
/// stay independent of the slice is the same as row-reducing the slice with
/// columns scanned in descending lex order and keeping the non-pivot columns.
pub fn graded_slice(p: &MultiPoly, e: u32) -> GradedSliceBasis {
    assert!(!p.is_zero(), "graded slice of the zero polynomial");
    let d = p.num_vars();
    let deg = p.degree();
    let ph = p.homogenize();
    let monos = monomials_of_degree(d + 1, e);
    let columns: HashMap<Exponents, usize> =
        monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();

    let mut ideal_basis = Vec::new();
    if e >= deg {
        for m in monomials_of_degree(d + 1, e - deg) {
            ideal_basis.push(&MultiPoly::monomial(m, Rational::one()) * &ph);
        }
    }
    let rows: Vec<Vec<Rational>> = ideal_basis
        .iter()
        .map(|h| {
            let mut v = vec![Rational::zero(); monos.len()];
            for (ex, c) in h.terms() {
                v[columns[ex]] = c.clone();
            }
            v
        })
        .collect();
    let descending: Vec<usize> = (0..monos.len()).rev().collect();
    let echelon = Echelon::with_column_order(rows, monos.len(), &descending);
    let mut is_pivot = vec![false; monos.len()];
    for &c in &echelon.pivots {
        is_pivot[c] = true;
    }
    let complement_basis = monos
        .iter()
        .enumerate()
        .filter(|(i, _)| !is_pivot[*i])
        .map(|(_, m)| MultiPoly::monomial(m.clone(), Rational::one()))
        .collect();
    GradedSliceBasis {
        ambient_degree: e,
        poly: p.clone(),
        ideal_basis,
        complement_basis,
        columns,
        echelon,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::linalg::rank;

    fn p(s: &str) -> MultiPoly {
        MultiPoly::parse(s, 3).unwrap()
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials_of_degree(4, 2).len(), 10);
        assert_eq!(monomials_up_to(3, 2).len(), 10);
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(200, 34), u64::MAX);
        let m = monomials_of_degree(3, 2);
        let mut sorted = m.clone();
        sorted.sort();
        assert_eq!(m, sorted);
    }

    #[test]
    fn plane_slice_dimensions() {
        let g = graded_slice(&p("x1"), 2);
        assert_eq!(g.ideal_basis.len(), 4);
        assert_eq!(g.complement_basis.len(), 6);
        // Complement of (x1) is exactly the monomials free of x1.
        for m in &g.complement_basis {
            assert_eq!(m.degree_in(1), 0);
        }
    }

    #[test]
    fn degree_above_slice_gives_full_complement() {
        let g = graded_slice(&p("x1^3 + x2"), 2);
        assert!(g.ideal_basis.is_empty());
        assert_eq!(g.complement_basis.len(), 10);
    }

    #[test]
    fn sphere_slice_rank_oracle() {
        let sphere = p("x1^2 + x2^2 + x3^2 - 1");
        let g = graded_slice(&sphere, 3);
        assert_eq!(g.complement_basis.len(), 16);
        // Independent rank computation on the monomial-multiples matrix.
        let monos = monomials_of_degree(4, 3);
        let idx: HashMap<_, _> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let to_row = |h: &MultiPoly| {
            let mut v = vec![Rational::zero(); monos.len()];
            for (e, c) in h.terms() {
                v[idx[e]] = c.clone();
            }
            v
        };
        let ideal_rows: Vec<_> = g.ideal_basis.iter().map(to_row).collect();
        assert_eq!(rank(ideal_rows.clone(), monos.len()), 4);
        let mut all = ideal_rows;
        all.extend(g.complement_basis.iter().map(to_row));
        assert_eq!(rank(all, monos.len()), 20);
    }

    #[test]
    fn non_membership_certificates() {
        let sphere = p("x1^2 + x2^2 + x3^2 - 1");
        let g = graded_slice(&sphere, 3);
        assert!(!g.certifies_non_member(&(&sphere * &p("x1 + 2"))));
        assert!(g.certifies_non_member(&p("x1 x2")));
        assert!(g.certifies_non_member(&p("x1^2 + x2^2 + x3^2")));
        assert!(!g.certifies_non_member(&MultiPoly::zero(3)));
    }
}

//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{sign_of, to_f64, Point, Rational};
use super::univariate::UniPoly;
use crate::error::{Error, Result};

/// Exponent vector, one entry per variable.
pub type Exponents = Vec<u32>;

/// A polynomial in `num_vars` variables.
///
/// Terms are keyed by exponent vector in ascending lexicographic order; no
/// stored coefficient is zero. Variables are named `x1..xn` when printed,
/// except for homogenized polynomials where the extra variable is `x0`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiPoly {
    num_vars: usize,
    terms: BTreeMap<Exponents, Rational>,
}

impl MultiPoly {
    pub fn zero(num_vars: usize) -> Self {
        MultiPoly {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, c: Rational) -> Self {
        let mut p = MultiPoly::zero(num_vars);
        p.add_term(vec![0; num_vars], c);
        p
    }

    pub fn one(num_vars: usize) -> Self {
        MultiPoly::constant(num_vars, Rational::one())
    }

    /// The coordinate function `x_{index+1}` (zero-based index).
    pub fn var(num_vars: usize, index: usize) -> Self {
        let mut e = vec![0; num_vars];
        e[index] = 1;
        MultiPoly::monomial(e, Rational::one())
    }

    pub fn monomial(exps: Exponents, c: Rational) -> Self {
        let mut p = MultiPoly::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponents, Rational)>>(num_vars: usize, it: I) -> Self {
        let mut p = MultiPoly::zero(num_vars);
        for (e, c) in it {
            assert_eq!(e.len(), num_vars, "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    /// Linear form `c0 + Σ c_i x_i`.
    pub fn linear(constant: Rational, coeffs: &[Rational]) -> Self {
        let n = coeffs.len();
        let mut p = MultiPoly::constant(n, constant);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn add_term(&mut self, exps: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; the zero polynomial reports 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_constant() {
            Some(self.coefficient(&vec![0; self.num_vars]))
        } else {
            None
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    /// Lexicographically greatest term.
    pub fn leading_term(&self) -> Option<(&Exponents, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.num_vars);
        }
        MultiPoly {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(self.num_vars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: n,
            });
        }
        Ok(())
    }

    /// Exact value at `x`.
    pub fn evaluate(&self, x: &Point) -> Result<Rational> {
        self.check_dim(x.dim())?;
        Ok(self.evaluate_unchecked(&x.coords))
    }

    pub(crate) fn evaluate_unchecked(&self, x: &[Rational]) -> Rational {
        let mut powers: Vec<Vec<Rational>> = Vec::with_capacity(self.num_vars);
        for (i, xi) in x.iter().enumerate() {
            let max = self.degree_in(i) as usize;
            let mut row = Vec::with_capacity(max + 1);
            row.push(Rational::one());
            for k in 1..=max {
                let next = &row[k - 1] * xi;
                row.push(next);
            }
            powers.push(row);
        }
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t *= &powers[i][k as usize];
                }
            }
            acc += t;
        }
        acc
    }

    pub fn sign_at(&self, x: &Point) -> Result<i8> {
        Ok(sign_of(&self.evaluate(x)?))
    }

    /// Floating-point value, for sampling paths only.
    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(x)
                    .fold(to_f64(c), |acc, (&k, &xi)| acc * xi.powi(k as i32))
            })
            .sum()
    }

    /// Gradient in floating point.
    pub fn gradient_f64(&self, x: &[f64]) -> Vec<f64> {
        (0..self.num_vars).map(|i| self.partial(i).eval_f64(x)).collect()
    }

    pub fn partial(&self, var: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(self.num_vars);
        for (e, c) in &self.terms {
            if e[var] > 0 {
                let mut ne = e.clone();
                ne[var] -= 1;
                out.add_term(ne, c * Rational::from_integer(BigInt::from(e[var])));
            }
        }
        out
    }

    /// `Σ v_i ∂p/∂x_i`.
    pub fn directional_derivative(&self, v: &[Rational]) -> Result<MultiPoly> {
        self.check_dim(v.len())?;
        if v.iter().all(Zero::is_zero) {
            return Err(Error::ZeroDirection);
        }
        let mut out = MultiPoly::zero(self.num_vars);
        for (i, vi) in v.iter().enumerate() {
            if !vi.is_zero() {
                out = &out + &self.partial(i).scale(vi);
            }
        }
        Ok(out)
    }

    /// Adds `x0` in front so every term reaches total degree `deg p`.
    pub fn homogenize(&self) -> MultiPoly {
        self.homogenize_to(self.degree())
    }

    /// Homogenizes to an explicit degree `e >= deg p`.
    pub fn homogenize_to(&self, e: u32) -> MultiPoly {
        debug_assert!(self.is_zero() || e >= self.degree());
        let mut out = MultiPoly::zero(self.num_vars + 1);
        for (ex, c) in &self.terms {
            let d: u32 = ex.iter().sum();
            let mut ne = Vec::with_capacity(ex.len() + 1);
            ne.push(e - d);
            ne.extend_from_slice(ex);
            out.add_term(ne, c.clone());
        }
        out
    }

    /// Sets `x0 = 1` on a homogeneous polynomial.
    pub fn dehomogenize(&self) -> Result<MultiPoly> {
        if !self.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        Ok(self.dehomogenize_unchecked())
    }

    pub(crate) fn dehomogenize_unchecked(&self) -> MultiPoly {
        let mut out = MultiPoly::zero(self.num_vars - 1);
        for (ex, c) in &self.terms {
            out.add_term(ex[1..].to_vec(), c.clone());
        }
        out
    }

    /// `t ↦ p(base + t·dir)`.
    pub fn restrict_to_line(&self, base: &[Rational], dir: &[Rational]) -> Result<UniPoly> {
        self.check_dim(base.len())?;
        self.check_dim(dir.len())?;
        let lines: Vec<UniPoly> = base
            .iter()
            .zip(dir)
            .map(|(b, v)| UniPoly::new(vec![b.clone(), v.clone()]))
            .collect();
        let mut powers: Vec<Vec<UniPoly>> = Vec::with_capacity(self.num_vars);
        for (i, l) in lines.iter().enumerate() {
            let max = self.degree_in(i) as usize;
            let mut row = vec![UniPoly::constant(Rational::one())];
            for k in 1..=max {
                let next = &row[k - 1] * l;
                row.push(next);
            }
            powers.push(row);
        }
        let mut acc = UniPoly::zero();
        for (e, c) in &self.terms {
            let mut t = UniPoly::constant(c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = &t * &powers[i][k as usize];
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Coefficients of `p` viewed as a polynomial in the last variable, each a
    /// polynomial in the remaining `num_vars - 1` variables (index = power).
    pub fn coeffs_in_last(&self) -> Vec<MultiPoly> {
        let last = self.num_vars - 1;
        let deg = self.degree_in(last) as usize;
        let mut out = vec![MultiPoly::zero(last); deg + 1];
        for (e, c) in &self.terms {
            out[e[last] as usize].add_term(e[..last].to_vec(), c.clone());
        }
        out
    }

    /// Division with remainder by lexicographic leading terms. For a single
    /// divisor the remainder is zero exactly when the division is exact.
    pub fn div_rem(&self, divisor: &MultiPoly) -> (MultiPoly, MultiPoly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let (lead_e, lead_c) = divisor.leading_term().expect("nonzero divisor");
        let mut quotient = MultiPoly::zero(self.num_vars);
        let mut remainder = MultiPoly::zero(self.num_vars);
        let mut p = self.clone();
        while let Some((e, c)) = p.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
            if e.iter().zip(lead_e).all(|(a, b)| a >= b) {
                let qe: Exponents = e.iter().zip(lead_e).map(|(a, b)| a - b).collect();
                let qc = &c / lead_c;
                let t = MultiPoly::monomial(qe, qc);
                p = &p - &(&t * divisor);
                quotient = &quotient + &t;
            } else {
                p.terms.remove(&e);
                remainder.add_term(e, c);
            }
        }
        (quotient, remainder)
    }

    pub fn divides(&self, other: &MultiPoly) -> bool {
        !self.is_zero() && other.div_rem(self).1.is_zero()
    }

    /// Quotient of an exact division, `None` when the division leaves a remainder.
    pub fn exact_div(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    /// Scales to primitive integer coefficients with a positive leading term.
    pub fn normalize(&self) -> MultiPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut lcm = BigInt::one();
        for c in self.terms.values() {
            lcm = lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .terms
            .values()
            .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let mut g = BigInt::zero();
        for v in &ints {
            g = g.gcd(v);
        }
        let lead_negative = self.leading_term().map(|(_, c)| c.is_negative()).unwrap_or(false);
        let mut factor = Rational::new(lcm, g);
        if lead_negative {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// Sum of the coefficients' absolute values as a float; used for scale-aware
    /// tolerances on sampling paths.
    pub fn coefficient_mass(&self) -> f64 {
        self.terms.values().map(|c| to_f64(c).abs()).sum()
    }

    pub fn format_with_base(&self, base: usize) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&mag.to_string());
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(j, &k)| {
                    if k == 1 {
                        format!("x{}", j + base)
                    } else {
                        format!("x{}^{}", j + base, k)
                    }
                })
                .collect();
            if !mono.is_empty() {
                out.push_str(" * ");
                out.push_str(&mono.join(" "));
            }
        }
        out
    }

    /// Parses the text format with variables `x1..x{num_vars}`.
    pub fn parse(s: &str, num_vars: usize) -> Result<MultiPoly> {
        super::text::parse_poly(s, num_vars, 1)
    }

    /// Parses with at least `min_vars` variables, widened to the largest
    /// index that occurs in the text.
    pub fn parse_auto(s: &str, min_vars: usize) -> Result<MultiPoly> {
        let mut top = min_vars;
        let bytes = s.as_bytes();
        for (i, &b) in bytes.iter().enumerate() {
            if b == b'x' {
                let digits: String = s[i + 1..].chars().take_while(char::is_ascii_digit).collect();
                if let Ok(k) = digits.parse::<usize>() {
                    top = top.max(k);
                }
            }
        }
        MultiPoly::parse(s, top)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with_base(1))
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.num_vars, rhs.num_vars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.num_vars, rhs.num_vars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.num_vars, rhs.num_vars);
        let mut out = MultiPoly::zero(self.num_vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

impl serde::Serialize for MultiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for MultiPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = <String as serde::Deserialize>::deserialize(d)?;
        MultiPoly::parse_auto(&raw, 3).map_err(serde::de::Error::custom)
    }
}

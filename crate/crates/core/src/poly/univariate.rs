//! Univariate rational polynomials, Sturm sequences and real-root isolation.

use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::{sign_of, Rational};

/// Dense univariate polynomial, coefficients from the constant term up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

/// An open interval `(lo, hi)` containing exactly one real root, or the
/// degenerate interval `[r, r]` when the root `r` is known exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RootInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(BigInt::from(2))
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        UniPoly::new(vec![c])
    }

    pub fn from_ints(c: &[i64]) -> Self {
        UniPoly::new(c.iter().map(|&v| Rational::from_integer(BigInt::from(v))).collect())
    }

    /// `Π (t - r)` over the given roots.
    pub fn from_roots(roots: &[Rational]) -> Self {
        let mut p = UniPoly::constant(Rational::one());
        for r in roots {
            p = &p * &UniPoly::new(vec![-r.clone(), Rational::one()]);
        }
        p
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * t + super::rational::to_f64(c))
    }

    pub fn sign_at(&self, t: &Rational) -> i8 {
        sign_of(&self.eval(t))
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|v| v * c).collect())
    }

    pub fn monic(&self) -> UniPoly {
        match self.leading() {
            None => UniPoly::zero(),
            Some(l) => self.scale(&(Rational::one() / l)),
        }
    }

    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if self.coeffs.len() < d.coeffs.len() {
            return (UniPoly::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); self.coeffs.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = &rem[i] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                rem[idx] -= &c * dc;
            }
            q[i - dd] = c;
        }
        rem.truncate(dd);
        (UniPoly::new(q), UniPoly::new(rem))
    }

    pub fn rem(&self, d: &UniPoly) -> UniPoly {
        self.div_rem(d).1
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// `p / gcd(p, p')`: same roots, all simple.
    pub fn squarefree_part(&self) -> UniPoly {
        if self.degree().unwrap_or(0) < 1 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree().unwrap_or(0) == 0
    }

    /// Sturm sequence `p, p', -rem(p, p'), ...`, each entry scaled by a positive
    /// constant (which leaves sign variations unchanged).
    pub fn sturm_sequence(&self) -> Vec<UniPoly> {
        let mut seq = vec![normalize_positive(self)];
        if self.degree().unwrap_or(0) == 0 {
            return seq;
        }
        seq.push(normalize_positive(&self.derivative()));
        loop {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]);
            if r.is_zero() {
                break;
            }
            seq.push(normalize_positive(&r.scale(&-Rational::one())));
        }
        seq
    }

    /// Upper bound on the absolute value of every real root (Cauchy).
    pub fn root_bound(&self) -> Rational {
        let lead = self.leading().expect("nonzero polynomial").abs();
        let m = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.abs() / &lead)
            .fold(Rational::zero(), |a, b| if b > a { b } else { a });
        m + Rational::one()
    }

    /// Isolating intervals for all distinct real roots, in increasing order.
    pub fn isolate_real_roots(&self) -> Vec<RootInterval> {
        assert!(!self.is_zero(), "zero polynomial has no isolated roots");
        if self.degree() == Some(0) {
            return Vec::new();
        }
        let sq = self.squarefree_part();
        let seq = sq.sturm_sequence();
        let b = sq.root_bound();
        let mut out = Vec::new();
        isolate_in(&sq, &seq, -b.clone(), b, &mut out);
        out
    }

    /// Number of distinct real roots in the open interval `(a, b)`; neither
    /// endpoint may be a root.
    pub fn count_roots_between(&self, a: &Rational, b: &Rational) -> usize {
        let seq = self.squarefree_part().sturm_sequence();
        let va = sign_variations(&seq, a);
        let vb = sign_variations(&seq, b);
        va.saturating_sub(vb)
    }

    /// Shrinks an isolating interval of `self` until its width is below `width`.
    pub fn refine(&self, iv: &RootInterval, width: &Rational) -> RootInterval {
        let sq = self.squarefree_part();
        let mut lo = iv.lo.clone();
        let mut hi = iv.hi.clone();
        if lo == hi {
            return iv.clone();
        }
        let s_lo = sq.sign_at(&lo);
        while &(&hi - &lo) >= width {
            let mid = (&lo + &hi) / Rational::from_integer(BigInt::from(2));
            let s = sq.sign_at(&mid);
            if s == 0 {
                return RootInterval { lo: mid.clone(), hi: mid };
            }
            if s == s_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        RootInterval { lo, hi }
    }

    /// Integer coefficients with no common factor, same roots.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let mut l = BigInt::one();
        for c in &self.coeffs {
            l = l.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
            .collect();
        let mut g = BigInt::zero();
        for v in &ints {
            g = g.gcd(v);
        }
        if g.is_zero() {
            return ints;
        }
        ints.into_iter().map(|v| v / &g).collect()
    }

    /// All rational roots, exactly.
    ///
    /// Each real root is isolated and refined until its interval, scaled by the
    /// leading coefficient `a` of the primitive integer form, contains at most
    /// one integer `k`; a rational root `r` must have `a·r ∈ Z`.
    pub fn rational_roots(&self) -> Vec<Rational> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let ints = self.primitive_integer();
        if rootless_mod_some_prime(&ints) {
            return Vec::new();
        }
        let a = ints.last().unwrap().abs();
        let ar = Rational::from_integer(a.clone());
        let width = Rational::new(BigInt::one(), &a * BigInt::from(2));
        let mut out = Vec::new();
        for iv in self.isolate_real_roots() {
            let iv = self.refine(&iv, &width);
            if iv.is_exact() {
                out.push(iv.lo);
                continue;
            }
            let lo = (&iv.lo * &ar).ceil().to_integer();
            let hi = (&iv.hi * &ar).floor().to_integer();
            let mut k = lo;
            while k <= hi {
                let r = Rational::new(k.clone(), a.clone());
                if self.eval(&r).is_zero() {
                    out.push(r);
                }
                k += 1;
            }
        }
        out
    }
}

const SIEVE_PRIMES: [u64; 16] = [101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179];

/// True when some small prime `p` not dividing the leading coefficient leaves
/// the integer polynomial without roots mod `p`. A rational root `s/t` has
/// `t | lead`, so it would reduce to a root mod every such `p`.
fn rootless_mod_some_prime(ints: &[BigInt]) -> bool {
    for &p in &SIEVE_PRIMES {
        let pb = BigInt::from(p);
        let red: Vec<u64> = ints
            .iter()
            .map(|c| {
                let r = c % &pb;
                let r = if r.is_negative() { r + &pb } else { r };
                r.to_u64().unwrap_or(0)
            })
            .collect();
        if *red.last().unwrap() == 0 {
            continue;
        }
        let has_root = (0..p).any(|x| red.iter().rev().fold(0u64, |acc, &c| (acc * x + c) % p) == 0);
        if !has_root {
            return true;
        }
    }
    false
}

fn normalize_positive(p: &UniPoly) -> UniPoly {
    match p.leading() {
        None => p.clone(),
        Some(l) => p.scale(&(Rational::one() / l.abs())),
    }
}

fn sign_variations(seq: &[UniPoly], t: &Rational) -> usize {
    let mut last = 0i8;
    let mut v = 0;
    for p in seq {
        let s = p.sign_at(t);
        if s != 0 {
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
    }
    v
}

fn isolate_in(
    sq: &UniPoly,
    seq: &[UniPoly],
    lo: Rational,
    hi: Rational,
    out: &mut Vec<RootInterval>,
) {
    let count = sign_variations(seq, &lo).saturating_sub(sign_variations(seq, &hi));
    if count == 0 {
        return;
    }
    if count == 1 {
        out.push(RootInterval { lo, hi });
        return;
    }
    // Split near the middle, nudging off any exact root so endpoints stay
    // non-roots.
    let two = Rational::from_integer(BigInt::from(2));
    let width = &hi - &lo;
    let mut mid = (&lo + &hi) / &two;
    let mut k = 2u32;
    while sq.sign_at(&mid) == 0 {
        let nudge = &width / Rational::from_integer(BigInt::from(2u64).pow(k));
        mid = (&lo + &hi) / &two + nudge;
        k += 1;
    }
    isolate_in(sq, seq, lo, mid.clone(), out);
    isolate_in(sq, seq, mid, hi, out);
}

impl<'a> Add<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut c = vec![Rational::zero(); n];
        for (i, v) in self.coeffs.iter().enumerate() {
            c[i] += v;
        }
        for (i, v) in rhs.coeffs.iter().enumerate() {
            c[i] += v;
        }
        UniPoly::new(c)
    }
}

impl<'a> Sub<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        self + &rhs.scale(&-Rational::one())
    }
}

impl<'a> Mul<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut c = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        UniPoly::new(c)
    }
}

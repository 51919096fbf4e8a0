//! Deciding whether a principal ideal `(P)` is real, with exact witnesses
//! where possible.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::poly::rational::{int, ratio, serde_rational, sign_of, to_f64};
use crate::poly::{MultiPoly, Point, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RealStatus {
    Real,
    NotReal,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "criterion", rename_all = "snake_case")]
pub enum Evidence {
    /// `P` takes both strict signs; exact evaluations at both points.
    SignChange {
        positive: Point,
        #[serde(with = "serde_rational")]
        positive_value: Rational,
        negative: Point,
        #[serde(with = "serde_rational")]
        negative_value: Rational,
    },
    /// Every exponent is even and every coefficient has one sign, so `±P` is
    /// a nonnegative combination of squares and never changes sign.
    NonnegativeForm,
    /// No sign change was found and the gradient vanished at every located
    /// zero. Heuristic.
    GradientVanishesOnZeros { exact_zeros: usize, approximate_zeros: usize },
    /// No sign change and no real zero found. Heuristic.
    NoRealZeroFound { attempts: usize },
    /// Budget exhausted without decisive evidence.
    Undecided { reason: String },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RealIdealVerdict {
    pub status: RealStatus,
    pub evidence: Evidence,
    /// True when the status rests on sampling rather than an exact argument.
    pub heuristic: bool,
}

impl RealIdealVerdict {
    pub fn is_real(&self) -> bool {
        self.status == RealStatus::Real
    }

    fn real(positive: (Point, Rational), negative: (Point, Rational)) -> Self {
        RealIdealVerdict {
            status: RealStatus::Real,
            evidence: Evidence::SignChange {
                positive: positive.0,
                positive_value: positive.1,
                negative: negative.0,
                negative_value: negative.1,
            },
            heuristic: false,
        }
    }
}

/// Search effort for [`is_real_principal`].
#[derive(Clone, Debug)]
pub struct RealBudget {
    pub random_points: usize,
    pub lines: usize,
    /// Extra candidate points tried first, after the origin and axis points.
    pub hints: Vec<Point>,
}

impl Default for RealBudget {
    fn default() -> Self {
        RealBudget {
            random_points: 200,
            lines: 60,
            hints: Vec::new(),
        }
    }
}

fn is_nonnegative_form(p: &MultiPoly) -> bool {
    let mut sign = 0i8;
    for (e, c) in p.terms() {
        if e.iter().any(|k| k % 2 == 1) {
            return false;
        }
        let s = sign_of(c);
        if sign != 0 && s != sign {
            return false;
        }
        sign = s;
    }
    true
}

struct Witnesses {
    pos: Option<(Point, Rational)>,
    neg: Option<(Point, Rational)>,
}

impl Witnesses {
    fn offer(&mut self, p: &MultiPoly, x: Point) -> bool {
        let v = p.evaluate_unchecked(&x.coords);
        if v.is_positive() && self.pos.is_none() {
            self.pos = Some((x, v));
        } else if v.is_negative() && self.neg.is_none() {
            self.neg = Some((x, v));
        }
        self.done()
    }

    fn done(&self) -> bool {
        self.pos.is_some() && self.neg.is_some()
    }
}

/// Candidate points in a fixed order: origin, then `±r·e_i` for `r = 1, 2, 3`,
/// then the cube `{-2..2}^d`.
fn structured_points(d: usize) -> Vec<Point> {
    let mut out = vec![Point::origin(d)];
    for r in 1..=3 {
        for i in 0..d {
            for s in [1, -1] {
                let mut c = vec![Rational::zero(); d];
                c[i] = int(s * r);
                out.push(Point::new(c));
            }
        }
    }
    let mut idx = vec![-2i64; d];
    loop {
        out.push(Point::from_ints(&idx));
        let mut k = 0;
        while k < d && idx[k] == 2 {
            idx[k] = -2;
            k += 1;
        }
        if k == d {
            break;
        }
        idx[k] += 1;
    }
    out
}

pub(crate) fn random_rational(rng: &mut ChaCha8Rng, d: usize, range: i64, den: i64) -> Vec<Rational> {
    (0..d).map(|_| ratio(rng.gen_range(-range * den..=range * den), den)).collect()
}

pub(crate) fn random_direction(rng: &mut ChaCha8Rng, d: usize) -> Vec<Rational> {
    loop {
        let v: Vec<Rational> = (0..d).map(|_| int(rng.gen_range(-5..=5))).collect();
        if v.iter().any(|c| !c.is_zero()) {
            return v;
        }
    }
}

/// Exact zeros of `p` found on the coordinate axes through the origin and on
/// seeded random lines (rational roots of the restriction), plus approximate
/// zeros where the roots are irrational.
pub(crate) struct ZeroProbe {
    pub exact: Vec<Point>,
    pub approx: Vec<Vec<f64>>,
}

pub(crate) fn probe_zeros(p: &MultiPoly, lines: usize, rng: &mut ChaCha8Rng) -> ZeroProbe {
    let d = p.num_vars();
    let mut exact = Vec::new();
    let mut approx = Vec::new();
    let mut shots: Vec<(Vec<Rational>, Vec<Rational>)> = Vec::new();
    for i in 0..d {
        let mut dir = vec![Rational::zero(); d];
        dir[i] = Rational::one();
        shots.push((vec![Rational::zero(); d], dir));
    }
    for _ in 0..lines {
        shots.push((random_rational(rng, d, 3, 2), random_direction(rng, d)));
    }
    let width = ratio(1, 1 << 30);
    for (base, dir) in shots {
        let Ok(u) = p.restrict_to_line(&base, &dir) else {
            continue;
        };
        let b = Point::new(base);
        if u.is_zero() {
            for t in 0..3 {
                exact.push(b.along(&dir, &int(t)));
            }
            continue;
        }
        let rational = u.rational_roots();
        for r in &rational {
            exact.push(b.along(&dir, r));
        }
        for iv in u.isolate_real_roots() {
            if rational.iter().any(|r| &iv.lo <= r && r <= &iv.hi) {
                continue;
            }
            let iv = u.refine(&iv, &width);
            let t = to_f64(&iv.midpoint());
            approx.push(
                b.to_f64()
                    .iter()
                    .zip(&dir)
                    .map(|(x, v)| x + t * to_f64(v))
                    .collect(),
            );
        }
    }
    ZeroProbe { exact, approx }
}

/// At a zero `z` with `∇P(z) ≠ 0`, `P` changes sign along the gradient; the
/// step is halved until both sides have strict, opposite signs.
fn witnesses_across_gradient(p: &MultiPoly, z: &Point) -> Option<((Point, Rational), (Point, Rational))> {
    let g: Vec<Rational> = (0..p.num_vars()).map(|i| p.partial(i).evaluate_unchecked(&z.coords)).collect();
    if g.iter().all(Zero::is_zero) {
        return None;
    }
    let mut h = Rational::one();
    for _ in 0..80 {
        let a = z.along(&g, &h);
        let b = z.along(&g, &-h.clone());
        let va = p.evaluate_unchecked(&a.coords);
        let vb = p.evaluate_unchecked(&b.coords);
        if va.is_positive() && vb.is_negative() {
            return Some(((a, va), (b, vb)));
        }
        if vb.is_positive() && va.is_negative() {
            return Some(((b, vb), (a, va)));
        }
        h /= int(2);
    }
    None
}

/// Classifies `(P)` as real, not real, or unknown.
///
/// "Real" is only returned with two exact evaluations of opposite strict sign.
/// "Not real" is exact when `±P` is a nonnegative sum of even monomials and
/// heuristic otherwise.
pub fn is_real_principal(p: &MultiPoly, budget: &RealBudget, seed: u64) -> RealIdealVerdict {
    if p.is_constant() {
        return RealIdealVerdict {
            status: RealStatus::Unknown,
            evidence: Evidence::Undecided {
                reason: "constant polynomial".into(),
            },
            heuristic: true,
        };
    }
    let d = p.num_vars();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w = Witnesses { pos: None, neg: None };
    let forced = is_nonnegative_form(p);
    if !forced {
        let mut candidates = structured_points(d);
        candidates.splice(1..1, budget.hints.iter().filter(|h| h.dim() == d).cloned());
        for x in candidates {
            if w.offer(p, x) {
                break;
            }
        }
        for _ in 0..budget.random_points {
            if w.done() {
                break;
            }
            w.offer(p, Point::new(random_rational(&mut rng, d, 8, 4)));
        }
        if let (Some(a), Some(b)) = (w.pos.clone(), w.neg.clone()) {
            return RealIdealVerdict::real(a, b);
        }
    }
    let probe = probe_zeros(p, budget.lines, &mut rng);
    if !forced {
        for z in &probe.exact {
            if let Some((a, b)) = witnesses_across_gradient(p, z) {
                return RealIdealVerdict::real(a, b);
            }
        }
    }
    if forced {
        return RealIdealVerdict {
            status: RealStatus::NotReal,
            evidence: Evidence::NonnegativeForm,
            heuristic: false,
        };
    }
    if probe.exact.is_empty() && probe.approx.is_empty() {
        return RealIdealVerdict {
            status: RealStatus::NotReal,
            evidence: Evidence::NoRealZeroFound {
                attempts: budget.lines + d,
            },
            heuristic: true,
        };
    }
    let scale = p.coefficient_mass().max(1.0);
    let approx_flat = probe.approx.iter().all(|x| {
        let norm = x.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        let g = p.gradient_f64(x);
        let gn = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        gn <= 1e-6 * scale * norm.powi(p.degree() as i32)
    });
    if approx_flat {
        return RealIdealVerdict {
            status: RealStatus::NotReal,
            evidence: Evidence::GradientVanishesOnZeros {
                exact_zeros: probe.exact.len(),
                approximate_zeros: probe.approx.len(),
            },
            heuristic: true,
        };
    }
    RealIdealVerdict {
        status: RealStatus::Unknown,
        evidence: Evidence::Undecided {
            reason: "zeros with nonvanishing gradient found but no exact sign change".into(),
        },
        heuristic: true,
    }
}

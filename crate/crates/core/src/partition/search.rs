//! Floating-point search for balanced sign patterns, with exact integer
//! recounting of every candidate it proposes.

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poly::rational::{dyadic, to_f64};
use crate::poly::{Exponents, MultiPoly, Point, Rational};

/// Affine change of coordinates `x' = (x - center) / scale` used to keep the
/// floating-point features well scaled.
#[derive(Clone, Debug)]
pub(crate) struct Frame {
    center: Vec<Rational>,
    scale: Rational,
}

impl Frame {
    pub(crate) fn fit<'a>(points: impl Iterator<Item = &'a Point>, dim: usize, translate: bool) -> Frame {
        let mut lo = vec![f64::INFINITY; dim];
        let mut hi = vec![f64::NEG_INFINITY; dim];
        for p in points {
            for (i, c) in p.coords.iter().enumerate() {
                let v = to_f64(c);
                lo[i] = lo[i].min(v);
                hi[i] = hi[i].max(v);
            }
        }
        let mut center = vec![Rational::zero(); dim];
        let mut half: f64 = 0.0;
        for i in 0..dim {
            if !lo[i].is_finite() {
                continue;
            }
            let c = if translate { dyadic((lo[i] + hi[i]) / 2.0, 12) } else { Rational::zero() };
            let cf = to_f64(&c);
            half = half.max((hi[i] - cf).abs()).max((lo[i] - cf).abs());
            center[i] = c;
        }
        let k = if half > 0.0 { half.log2().ceil() as i32 } else { 0 };
        let two = BigInt::from(2);
        let scale = if k >= 0 {
            Rational::from_integer(num_traits::pow(two, k as usize))
        } else {
            Rational::new(BigInt::one(), num_traits::pow(two, (-k) as usize))
        };
        Frame { center, scale }
    }

    pub(crate) fn apply(&self, p: &Point) -> Vec<Rational> {
        p.coords
            .iter()
            .zip(&self.center)
            .map(|(x, c)| (x - c) / &self.scale)
            .collect()
    }

    /// `Σ c_α ((x - center)/scale)^α` expanded in the original coordinates.
    pub(crate) fn compose(&self, basis: &[Exponents], coeffs: &[BigInt], dim: usize) -> MultiPoly {
        let max_deg = basis.iter().map(|e| e.iter().sum::<u32>()).max().unwrap_or(0) as usize;
        if self.center.iter().all(Zero::is_zero) {
            let mut scale_pows = vec![Rational::one()];
            for k in 1..=max_deg {
                let next = &scale_pows[k - 1] * &self.scale;
                scale_pows.push(next);
            }
            return MultiPoly::from_terms(
                dim,
                basis.iter().zip(coeffs).filter(|(_, c)| !c.is_zero()).map(|(e, c)| {
                    let d: u32 = e.iter().sum();
                    (e.clone(), Rational::from_integer(c.clone()) / &scale_pows[d as usize])
                }),
            );
        }
        let inv = Rational::one() / &self.scale;
        let powers: Vec<Vec<MultiPoly>> = (0..dim)
            .map(|i| {
                let mut dir = vec![Rational::zero(); dim];
                dir[i] = inv.clone();
                let lin = MultiPoly::linear(-(&self.center[i] * &inv), &dir);
                let mut row = vec![MultiPoly::one(dim)];
                for k in 1..=max_deg {
                    let next = &row[k - 1] * &lin;
                    row.push(next);
                }
                row
            })
            .collect();
        let mut out = MultiPoly::zero(dim);
        for (e, c) in basis.iter().zip(coeffs) {
            if c.is_zero() {
                continue;
            }
            let mut t = MultiPoly::constant(dim, Rational::from_integer(c.clone()));
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = &t * &powers[i][k as usize];
                }
            }
            out = &out + &t;
        }
        out
    }
}

/// Basis monomials evaluated at a list of rows, both exactly (as integers after
/// clearing each row's denominators) and in floating point.
pub(crate) struct Lifted {
    exact: Vec<Vec<BigInt>>,
    approx: DMatrix<f64>,
    col_norms: Vec<f64>,
}

impl Lifted {
    pub(crate) fn new(rows: &[Vec<Rational>], basis: &[Exponents]) -> Lifted {
        let top = basis.iter().map(|e| e.iter().sum::<u32>()).max().unwrap_or(0) as usize;
        let dim = basis.first().map(|e| e.len()).unwrap_or(0);
        let mut exact = Vec::with_capacity(rows.len());
        let mut approx = DMatrix::<f64>::zeros(rows.len(), basis.len());
        for (r, q) in rows.iter().enumerate() {
            let mut l = BigInt::one();
            for c in q {
                l = l.lcm(c.denom());
            }
            let lr = Rational::from_integer(l.clone());
            let a: Vec<BigInt> = q.iter().map(|c| (c * &lr).to_integer()).collect();
            let mut apow: Vec<Vec<BigInt>> = Vec::with_capacity(dim);
            for ai in &a {
                let mut row = vec![BigInt::one()];
                for k in 1..=top {
                    let next = &row[k - 1] * ai;
                    row.push(next);
                }
                apow.push(row);
            }
            let mut lpow = vec![BigInt::one()];
            for k in 1..=top {
                let next = &lpow[k - 1] * &l;
                lpow.push(next);
            }
            let qf: Vec<f64> = q.iter().map(to_f64).collect();
            let mut er = Vec::with_capacity(basis.len());
            for (j, e) in basis.iter().enumerate() {
                let d: u32 = e.iter().sum();
                let mut v = lpow[top - d as usize].clone();
                let mut f = 1.0;
                for (i, &k) in e.iter().enumerate() {
                    if k > 0 {
                        v *= &apow[i][k as usize];
                        f *= qf[i].powi(k as i32);
                    }
                }
                er.push(v);
                approx[(r, j)] = f;
            }
            exact.push(er);
        }
        let mut col_norms = Vec::with_capacity(basis.len());
        for j in 0..basis.len() {
            let n = approx.column(j).norm();
            let n = if n > 0.0 { n } else { 1.0 };
            approx.column_mut(j).scale_mut(1.0 / n);
            col_norms.push(n);
        }
        Lifted {
            exact,
            approx,
            col_norms,
        }
    }

    /// Exact signs of `Σ c_j b_j` at every row.
    pub(crate) fn signs(&self, coeffs: &[BigInt]) -> Vec<i8> {
        self.exact
            .iter()
            .map(|row| {
                let mut acc = BigInt::zero();
                for (c, v) in coeffs.iter().zip(row) {
                    if !c.is_zero() {
                        acc += c * v;
                    }
                }
                if acc.is_zero() {
                    0
                } else if acc.is_positive() {
                    1
                } else {
                    -1
                }
            })
            .collect()
    }

    /// Integer coefficients in the raw basis approximating the normalized
    /// coefficient vector `c`.
    pub(crate) fn integer_coeffs(&self, c: &DVector<f64>) -> Vec<BigInt> {
        let raw: Vec<f64> = c.iter().zip(&self.col_norms).map(|(v, n)| v / n).collect();
        let max = raw.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if max == 0.0 || !max.is_finite() {
            return vec![BigInt::zero(); raw.len()];
        }
        let k = 52 - max.log2().ceil() as i32;
        let s = 2f64.powi(k.clamp(-1000, 1000));
        raw.iter().map(|v| BigInt::from((v * s).round() as i64)).collect()
    }
}

/// Per-family side caps and the row → family map.
pub(crate) struct Objective {
    pub(crate) family_of: Vec<usize>,
    pub(crate) caps: Vec<u64>,
}

type Score = (u64, u64);

impl Objective {
    fn family_cost(&self, f: usize, pos: usize, neg: usize) -> Score {
        let cap = self.caps[f] as usize;
        let viol = pos.saturating_sub(cap) + neg.saturating_sub(cap);
        (viol as u64, pos.abs_diff(neg) as u64)
    }

    fn counts(&self, signs: impl Iterator<Item = i8>) -> (Vec<usize>, Vec<usize>) {
        let mut pos = vec![0; self.caps.len()];
        let mut neg = vec![0; self.caps.len()];
        for (r, s) in signs.enumerate() {
            match s {
                1 => pos[self.family_of[r]] += 1,
                -1 => neg[self.family_of[r]] += 1,
                _ => {}
            }
        }
        (pos, neg)
    }

    fn total(&self, pos: &[usize], neg: &[usize]) -> Score {
        (0..self.caps.len()).fold((0, 0), |acc, f| {
            let c = self.family_cost(f, pos[f], neg[f]);
            (acc.0 + c.0, acc.1 + c.1)
        })
    }

    pub(crate) fn score_f64(&self, v: &DVector<f64>) -> Score {
        let (p, n) = self.counts(v.iter().map(|&x| fsign(x)));
        self.total(&p, &n)
    }
}

fn fsign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

fn add(a: Score, b: Score) -> Score {
    (a.0 + b.0, a.1 + b.1)
}

fn sub(a: Score, b: Score) -> Score {
    (a.0 - b.0, a.1 - b.1)
}

/// Least-squares fitting to target signs, margin reweighting and exact
/// one-dimensional line searches, restarted from seeded targets.
pub(crate) struct Search<'a> {
    pub(crate) lifted: &'a Lifted,
    pub(crate) objective: &'a Objective,
    /// Floating-point coordinates of each row, for choosing split targets.
    pub(crate) coords: Vec<Vec<f64>>,
    normal: Option<nalgebra::Cholesky<f64, nalgebra::Dyn>>,
}

impl<'a> Search<'a> {
    pub(crate) fn new(lifted: &'a Lifted, objective: &'a Objective, coords: Vec<Vec<f64>>) -> Self {
        let a = &lifted.approx;
        let mut ata = a.transpose() * a;
        let n = ata.nrows();
        let ridge = 1e-9 * (ata.trace() / n.max(1) as f64).max(1e-300);
        for i in 0..n {
            ata[(i, i)] += ridge;
        }
        let normal = ata.cholesky();
        Search {
            lifted,
            objective,
            coords,
            normal,
        }
    }

    fn targets(&self, rng: &mut ChaCha8Rng, restart: usize) -> DVector<f64> {
        let nf = self.objective.caps.len();
        let dim = self.coords.first().map(|c| c.len()).unwrap_or(0);
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); nf];
        for (r, &f) in self.objective.family_of.iter().enumerate() {
            members[f].push(r);
        }
        let mut t = DVector::<f64>::zeros(self.coords.len());
        for rows in &members {
            if rows.is_empty() {
                continue;
            }
            let dir: Vec<f64> = if restart == 0 {
                let mut best = (0, -1.0);
                for i in 0..dim {
                    let mean = rows.iter().map(|&r| self.coords[r][i]).sum::<f64>() / rows.len() as f64;
                    let var = rows.iter().map(|&r| (self.coords[r][i] - mean).powi(2)).sum::<f64>();
                    if var > best.1 {
                        best = (i, var);
                    }
                }
                (0..dim).map(|i| if i == best.0 { 1.0 } else { 0.0 }).collect()
            } else {
                (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect()
            };
            let mut order: Vec<(f64, usize)> = rows
                .iter()
                .map(|&r| (self.coords[r].iter().zip(&dir).map(|(a, b)| a * b).sum(), r))
                .collect();
            order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let half = order.len() / 2;
            for (k, &(_, r)) in order.iter().enumerate() {
                t[r] = if k < half { -1.0 } else { 1.0 };
            }
        }
        t
    }

    fn solve(&self, rhs: &DVector<f64>) -> DVector<f64> {
        let atb = self.lifted.approx.transpose() * rhs;
        match &self.normal {
            Some(ch) => ch.solve(&atb),
            None => atb,
        }
    }

    /// Margin-reweighted least squares towards the sign pattern `t`.
    fn fit(&self, t: &DVector<f64>) -> DVector<f64> {
        let a = &self.lifted.approx;
        let mut b = DVector::from_element(t.len(), 1.0);
        let mut best_c = self.solve(t);
        let mut best = self.objective.score_f64(&(a * &best_c));
        for _ in 0..12 {
            let c = self.solve(&t.component_mul(&b));
            let v = a * &c;
            let s = self.objective.score_f64(&v);
            if s < best {
                best = s;
                best_c = c.clone();
            }
            let e = t.component_mul(&v) - &b;
            for (bi, ei) in b.iter_mut().zip(e.iter()) {
                *bi += 0.5 * (ei + ei.abs());
            }
        }
        best_c
    }

    /// Exact minimization of the counting objective along coordinate `j`.
    /// Returns the step taken, if it strictly improves the score.
    fn line_search(&self, v: &DVector<f64>, j: usize, current: Score) -> Option<f64> {
        let col = self.lifted.approx.column(j);
        let fam = &self.objective.family_of;
        let nf = self.objective.caps.len();
        let mut pos = vec![0usize; nf];
        let mut neg = vec![0usize; nf];
        let mut breaks: Vec<(f64, usize)> = Vec::new();
        for r in 0..v.len() {
            let a = col[r];
            let s = if a == 0.0 { fsign(v[r]) } else { -fsign(a) };
            match s {
                1 => pos[fam[r]] += 1,
                -1 => neg[fam[r]] += 1,
                _ => {}
            }
            if a != 0.0 {
                breaks.push((-v[r] / a, r));
            }
        }
        if breaks.is_empty() {
            return None;
        }
        breaks.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut score = self.objective.total(&pos, &neg);
        let mut best: Option<(Score, f64)> = None;
        let spread = (breaks[breaks.len() - 1].0 - breaks[0].0).abs().max(1.0);
        let consider = |score: Score, s: f64, best: &mut Option<(Score, f64)>| {
            if score < current && best.map_or(true, |(b, bs)| score < b || (score == b && s.abs() < bs.abs())) {
                *best = Some((score, s));
            }
        };
        consider(score, breaks[0].0 - 0.5 * spread, &mut best);
        let mut k = 0;
        while k < breaks.len() {
            let at = breaks[k].0;
            while k < breaks.len() && breaks[k].0 == at {
                let r = breaks[k].1;
                let f = fam[r];
                let before = self.objective.family_cost(f, pos[f], neg[f]);
                if col[r] > 0.0 {
                    neg[f] -= 1;
                    pos[f] += 1;
                } else {
                    pos[f] -= 1;
                    neg[f] += 1;
                }
                let after = self.objective.family_cost(f, pos[f], neg[f]);
                score = add(sub(score, before), after);
                k += 1;
            }
            let next = if k < breaks.len() { 0.5 * (at + breaks[k].0) } else { at + 0.5 * spread };
            consider(score, next, &mut best);
        }
        best.map(|(_, s)| s)
    }

    fn descend(&self, c: &mut DVector<f64>, passes: usize) {
        let a = &self.lifted.approx;
        let mut v = a * &*c;
        let mut score = self.objective.score_f64(&v);
        for _ in 0..passes {
            let mut improved = false;
            for j in 0..c.len() {
                if score == (0, 0) {
                    return;
                }
                if let Some(step) = self.line_search(&v, j, score) {
                    c[j] += step;
                    v.axpy(step, &a.column(j), 1.0);
                    score = self.objective.score_f64(&v);
                    improved = true;
                }
            }
            if !improved {
                break;
            }
        }
    }

    /// Runs the seeded restarts; `accept` receives exact signs of each
    /// rationalized candidate and returns true to stop.
    pub(crate) fn run(
        &self,
        seed: u64,
        restarts: usize,
        passes: usize,
        mut accept: impl FnMut(&[BigInt], Vec<i8>) -> bool,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for r in 0..restarts.max(1) {
            let t = self.targets(&mut rng, r);
            let mut c = self.fit(&t);
            self.descend(&mut c, passes);
            let ints = self.lifted.integer_coeffs(&c);
            if ints.iter().all(Zero::is_zero) {
                continue;
            }
            let signs = self.lifted.signs(&ints);
            if accept(&ints, signs) {
                return;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::graded::monomials_up_to;
    use crate::poly::rational::{int, ratio};

    #[test]
    fn frame_compose_matches_frame_evaluation() {
        let pts = vec![
            Point::new(vec![int(3), ratio(7, 2), int(-1)]),
            Point::new(vec![int(9), int(0), ratio(1, 3)]),
        ];
        let frame = Frame::fit(pts.iter(), 3, true);
        let basis = monomials_up_to(3, 2);
        let coeffs: Vec<BigInt> = (0..basis.len() as i64).map(|k| BigInt::from(k - 4)).collect();
        let q = frame.compose(&basis, &coeffs, 3);
        let framed = MultiPoly::from_terms(
            3,
            basis.iter().zip(&coeffs).map(|(e, c)| (e.clone(), Rational::from_integer(c.clone()))),
        );
        for p in &pts {
            let lhs = q.evaluate(p).unwrap();
            let rhs = framed.evaluate(&Point::new(frame.apply(p))).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn lifted_signs_are_exact() {
        let rows = vec![vec![ratio(1, 3), ratio(-2, 5), int(1)], vec![int(0), int(0), int(0)]];
        let basis = monomials_up_to(3, 2);
        let lifted = Lifted::new(&rows, &basis);
        let coeffs: Vec<BigInt> = basis.iter().map(|e| BigInt::from(e[0] as i64 - e[1] as i64)).collect();
        let poly = MultiPoly::from_terms(
            3,
            basis.iter().zip(&coeffs).map(|(e, c)| (e.clone(), Rational::from_integer(c.clone()))),
        );
        let signs = lifted.signs(&coeffs);
        for (row, s) in rows.iter().zip(signs) {
            assert_eq!(poly.sign_at(&Point::new(row.clone())).unwrap(), s);
        }
    }
}

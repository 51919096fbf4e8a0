//! Floating-point copies of exact polynomials for sampling loops.

use super::multipoly::MultiPoly;
use super::rational::to_f64;

#[derive(Clone, Debug)]
pub struct FloatPoly {
    terms: Vec<(Vec<i32>, f64)>,
    grad: Vec<Vec<(Vec<i32>, f64)>>,
}

fn eval_terms(terms: &[(Vec<i32>, f64)], x: &[f64]) -> (f64, f64) {
    let mut v = 0.0;
    let mut mag = 0.0;
    for (e, c) in terms {
        let t = e.iter().zip(x).fold(*c, |acc, (&k, &xi)| acc * xi.powi(k));
        v += t;
        mag += t.abs();
    }
    (v, mag)
}

impl FloatPoly {
    pub fn new(p: &MultiPoly) -> Self {
        let terms: Vec<(Vec<i32>, f64)> = p
            .terms()
            .map(|(e, c)| (e.iter().map(|&k| k as i32).collect(), to_f64(c)))
            .collect();
        let grad = (0..p.num_vars())
            .map(|i| {
                terms
                    .iter()
                    .filter(|(e, _)| e[i] > 0)
                    .map(|(e, c)| {
                        let mut e2 = e.clone();
                        e2[i] -= 1;
                        (e2, c * e[i] as f64)
                    })
                    .collect()
            })
            .collect();
        FloatPoly { terms, grad }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        eval_terms(&self.terms, x).0
    }

    /// Value and `Σ |c_α x^α|`, the scale for relative zero tests.
    pub fn eval_with_magnitude(&self, x: &[f64]) -> (f64, f64) {
        eval_terms(&self.terms, x)
    }

    /// Whether `|P(x)|` is below `tol` relative to the term magnitudes.
    pub fn near_zero(&self, x: &[f64], tol: f64) -> bool {
        let (v, mag) = self.eval_with_magnitude(x);
        v.abs() <= tol * mag.max(f64::MIN_POSITIVE)
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        self.grad.iter().map(|g| eval_terms(g, x).0).collect()
    }
}

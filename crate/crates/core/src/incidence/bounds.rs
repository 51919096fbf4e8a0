//! Incidence bound formulas, all with unit constants.

use num_bigint::BigInt;
use serde::Serialize;

use crate::poly::Rational;

/// Edge bound for a bipartite graph on `m + n` vertices with no `K_{s,t}`:
/// the smaller of `n·m^{1-1/s} + m` and `m·n^{1-1/t} + n`.
pub fn kst_threshold(m: usize, n: usize, s: usize, t: usize) -> f64 {
    let (m, n) = (m as f64, n as f64);
    let a = n * m.powf(1.0 - 1.0 / s as f64) + m;
    let b = m * n.powf(1.0 - 1.0 / t as f64) + n;
    a.min(b)
}

/// `(m·n^{1-1/k} + n, m^{2/3}·n + m)`.
pub fn canham_bounds(m: usize, n: usize, k: usize) -> (f64, f64) {
    let (mf, nf) = (m as f64, n as f64);
    (
        mf * nf.powf(1.0 - 1.0 / k as f64) + nf,
        mf.powf(2.0 / 3.0) * nf + mf,
    )
}

/// `D = m^{k/(3k-1)} n^{-1/(3k-1)}`.
pub fn choose_d(m: usize, n: usize, k: usize) -> f64 {
    let e = 3.0 * k as f64 - 1.0;
    (m as f64).powf(k as f64 / e) * (n as f64).powf(-1.0 / e)
}

/// `E_j = (|P_j|^k / (n D_j^k))^{1/(2k-1)}`.
pub fn choose_e(pj_count: usize, n: usize, dj: u32, k: usize) -> f64 {
    let kf = k as f64;
    let ratio = (pj_count as f64 / dj as f64).powf(kf) / n as f64;
    ratio.powf(1.0 / (2.0 * kf - 1.0))
}

/// `m^{2k/(3k-1)} n^{(3k-3)/(3k-1)} + m + n`.
pub fn theoretical_bound(m: usize, n: usize, k: usize) -> f64 {
    let e = 3.0 * k as f64 - 1.0;
    let kf = k as f64;
    (m as f64).powf(2.0 * kf / e) * (n as f64).powf((3.0 * kf - 3.0) / e) + m as f64 + n as f64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `n < c m^k` and `m < c n^3`: the partition argument applies.
    Partition,
    /// `n >= c m^k`: the first threshold bound already suffices.
    ManySurfaces,
    /// `m >= c n^3`: the second threshold bound already suffices.
    ManyPoints,
    /// No points or no surfaces.
    Empty,
}

fn pow_big(x: usize, k: usize) -> Rational {
    Rational::from_integer(num_traits::pow(BigInt::from(x), k))
}

/// Exact regime test with constant `c`.
pub fn regime(m: usize, n: usize, k: usize, c: &Rational) -> Regime {
    if m == 0 || n == 0 {
        return Regime::Empty;
    }
    if pow_big(n, 1) >= c * pow_big(m, k) {
        Regime::ManySurfaces
    } else if pow_big(m, 1) >= c * pow_big(n, 3) {
        Regime::ManyPoints
    } else {
        Regime::Partition
    }
}

/// The bucket of a component with `points` points and degree `dj`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Bucket {
    A1,
    A2,
    A3,
}

/// `A1: |P_j|^k < D_j^k n`, `A2: D_j^k n <= |P_j|^k < c D_j^{3k-1} n`,
/// `A3` otherwise. Exact.
pub fn bucket_of(points: usize, dj: u32, n: usize, k: usize, c: &Rational) -> Bucket {
    let lhs = pow_big(points, k);
    let dk = pow_big(dj as usize, k) * pow_big(n, 1);
    if lhs < dk {
        return Bucket::A1;
    }
    let upper = c * pow_big(dj as usize, 3 * k - 1) * pow_big(n, 1);
    if lhs < upper {
        Bucket::A2
    } else {
        Bucket::A3
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rational::{int, ratio};

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-9 * b.abs().max(1.0)
    }

    #[test]
    fn closed_forms() {
        assert!(close(canham_bounds(10, 8, 3).0, 48.0));
        assert!(close(canham_bounds(0, 8, 3).0, 8.0));
        assert!(close(canham_bounds(27, 27, 3).1, 270.0));
        assert!(close(choose_d(256, 256, 3), 4.0));
        assert!(close(choose_e(64, 16, 2, 3), 2048f64.powf(0.2)));
        assert!(close(theoretical_bound(256, 256, 3), 4608.0));
        assert!(close(theoretical_bound(0, 7, 3), 7.0));
        let m = 1e4f64;
        assert!(close(
            theoretical_bound(10_000, 10_000, 4),
            m.powf(8.0 / 11.0) * m.powf(9.0 / 11.0) + 2.0 * m
        ));
    }

    #[test]
    fn kst_is_the_smaller_form() {
        assert!(close(kst_threshold(10, 8, 3, 3), canham_bounds(10, 8, 3).0.min(8.0 * 10f64.powf(2.0 / 3.0) + 10.0)));
        assert!(close(kst_threshold(0, 5, 2, 2), 0.0));
    }

    #[test]
    fn regimes() {
        let one = int(1);
        assert_eq!(regime(256, 256, 3, &one), Regime::Partition);
        assert_eq!(regime(2, 8, 3, &one), Regime::ManySurfaces);
        assert_eq!(regime(2, 7, 3, &one), Regime::Partition);
        assert_eq!(regime(28, 3, 3, &one), Regime::ManyPoints);
        assert_eq!(regime(0, 3, 3, &one), Regime::Empty);
        // D drops below 1 exactly when n exceeds m^k.
        assert!(choose_d(2, 9, 3) < 1.0);
    }

    #[test]
    fn buckets_follow_the_predicates() {
        let c = int(1);
        // n = 8, k = 3, D_j = 1: A1 below 2 points, A3 from 2 points on.
        assert_eq!(bucket_of(1, 1, 8, 3, &c), Bucket::A1);
        assert_eq!(bucket_of(2, 1, 8, 3, &c), Bucket::A3);
        // D_j = 2: A1 below 4, A2 in [4, (2^8 * 8)^{1/3}), A3 above.
        assert_eq!(bucket_of(3, 2, 8, 3, &c), Bucket::A1);
        assert_eq!(bucket_of(4, 2, 8, 3, &c), Bucket::A2);
        assert_eq!(bucket_of(12, 2, 8, 3, &c), Bucket::A2);
        assert_eq!(bucket_of(13, 2, 8, 3, &c), Bucket::A3);
        assert_eq!(bucket_of(13, 2, 8, 3, &ratio(2, 1)), Bucket::A2);
    }
}

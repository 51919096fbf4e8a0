use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use polypart::configgen::{generate, GeneratorSpec};
use polypart::incidence::{
    incidences_bruteforce, run_pipeline, unit_distance_pairs, Bucket, IncidenceReport, NondegeneracyParams,
    PipelineConfig,
};
use polypart::poly::rational::{int, ratio};
use polypart::poly::{FactoredPoly, MultiPoly, Point, Rational};
use polypart::realideal::{hat_poly, is_real_principal, realify_family, Evidence, RealBudget, RealStatus};
use polypart::surface::Surface;
use proptest::prelude::*;

fn lin(n: &[i64], p0: &[i64]) -> MultiPoly {
    // n · (x - p0)
    let c: i64 = -n.iter().zip(p0).map(|(a, b)| a * b).sum::<i64>();
    MultiPoly::linear(int(c), &n.iter().map(|&v| int(v)).collect::<Vec<_>>())
}

fn cross(a: &[i64], b: &[i64]) -> [i64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn small_vec() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// `L1² + L2²` vanishes exactly on a line; every one of 100 points on it
    /// must stay on the zero set of some output member.
    #[test]
    fn realify_keeps_zero_sets(n1 in small_vec(), n2 in small_vec(), p0 in small_vec(), seed in 0u64..100) {
        let dir = cross(&n1, &n2);
        prop_assume!(dir.iter().any(|&v| v != 0));
        let (l1, l2) = (lin(&n1, &p0), lin(&n2, &p0));
        let p = &(&l1 * &l1) + &(&l2 * &l2);
        let sphere = MultiPoly::parse("x1^2 + x2^2 + x3^2 - 4", 3).unwrap();
        let input = vec![p.clone(), sphere.clone()];
        let r = realify_family(&input, seed).unwrap();
        prop_assert!(r.degree_after <= r.degree_before);
        prop_assert_eq!(r.degree_before, 4);
        prop_assert!(r.degree_after < r.degree_before);
        prop_assert!(r.members.contains(&sphere.normalize()));
        for j in -50..50 {
            let t = ratio(j, 3);
            let z = Point::new((0..3).map(|i| int(p0[i]) + &t * int(dir[i])).collect());
            prop_assert!(p.evaluate(&z).unwrap().is_zero());
            prop_assert!(r.members.iter().any(|q| q.evaluate(&z).unwrap().is_zero()));
        }
    }

    #[test]
    fn real_verdicts_carry_witnesses(
        terms in prop::collection::vec(((0u32..=2), (0u32..=2), (0u32..=2), -4i64..=4), 1..=5),
        seed in 0u64..100,
    ) {
        let mut p = MultiPoly::zero(3);
        for (a, b, c, k) in terms {
            p.add_term(vec![a, b, c], int(k));
        }
        prop_assume!(!p.is_constant());
        let v = is_real_principal(&p, &RealBudget::default(), seed);
        if v.status == RealStatus::Real {
            match v.evidence {
                Evidence::SignChange { positive, positive_value, negative, negative_value } => {
                    prop_assert_eq!(p.evaluate(&positive).unwrap(), positive_value.clone());
                    prop_assert_eq!(p.evaluate(&negative).unwrap(), negative_value.clone());
                    prop_assert!(positive_value.is_positive() && negative_value.is_negative());
                }
                other => prop_assert!(false, "real verdict without witnesses: {:?}", other),
            }
            prop_assert!(!v.heuristic);
        }
    }

    #[test]
    fn hat_poly_is_real_and_idempotent(pick in prop::collection::vec(0usize..5, 1..=4), seed in 0u64..100) {
        let pool = [
            "x1^2 + x2^2 + x3^2 - 1",
            "x1^2 + x2^2",
            "x1^2 + 1",
            "x1 - x2 + 3",
            "x3^2 - x1",
        ];
        let mut factors: Vec<(MultiPoly, u32)> = Vec::new();
        for (k, &i) in pick.iter().enumerate() {
            let f = MultiPoly::parse(pool[i], 3).unwrap();
            if !factors.iter().any(|(g, _)| *g == f) {
                factors.push((f, 1 + (k as u32 % 2)));
            }
        }
        let fp = FactoredPoly::new(3, factors).unwrap();
        let h = hat_poly(&fp, seed).unwrap();
        for (f, _) in h.hat.factors() {
            prop_assert_eq!(is_real_principal(f, &RealBudget::default(), seed).status, RealStatus::Real);
        }
        let again = hat_poly(&h.hat, seed).unwrap();
        prop_assert_eq!(again.hat, h.hat);
    }
}

fn lattice_with_fifths(seed: u64, m: usize) -> Vec<Point> {
    // Integer points plus points offset by (3/5, 4/5, 0), so unit distances
    // occur along several directions.
    let spec: GeneratorSpec = serde_json::from_value(serde_json::json!({
        "kind": "union", "parts": [
            {"kind": "random_lattice", "m": m, "seed": seed, "side": 4},
            {"kind": "random_box", "m": m / 2, "seed": seed + 7, "half_width": 2, "denominator": 5}
        ]
    }))
    .unwrap();
    generate(&spec).unwrap().points
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn unit_distances_are_half_the_unit_sphere_incidences(seed in 0u64..10_000, m in 2usize..=40) {
        let pts = lattice_with_fifths(seed, m);
        let spheres: Vec<Surface> = pts.iter().map(|p| Surface::unit_sphere(p.clone())).collect();
        let (inc, _) = incidences_bruteforce(&pts, &spheres).unwrap();
        prop_assert_eq!(inc % 2, 0);
        prop_assert_eq!(unit_distance_pairs(&pts), inc / 2);
    }

    #[test]
    fn generators_are_deterministic_and_exact(seed in 0u64..10_000, m in 1usize..=30) {
        let spec: GeneratorSpec = serde_json::from_value(serde_json::json!({
            "kind": "sphere_rational_points", "m": m, "seed": seed, "center": ["1/2", "0", "-3"], "radius": "5/3"
        }))
        .unwrap();
        let a = generate(&spec).unwrap();
        let b = generate(&spec).unwrap();
        prop_assert_eq!(serde_json::to_string(&a.points).unwrap(), serde_json::to_string(&b.points).unwrap());
        prop_assert_eq!(a.points.len(), m);
        let f = a.surfaces[0].defining_poly();
        for p in &a.points {
            prop_assert!(f.evaluate(p).unwrap().is_zero());
        }
    }
}

fn waived(seed: u64) -> PipelineConfig {
    let mut c = PipelineConfig::new(seed);
    c.waive_nondegeneracy = true;
    c
}

fn params() -> NondegeneracyParams {
    NondegeneracyParams::new(3, 2).unwrap()
}

fn random_config(seed: u64) -> (Vec<Point>, Vec<Surface>) {
    let spec: GeneratorSpec = serde_json::from_value(serde_json::json!({
        "kind": "union", "parts": [
            {"kind": "random_lattice", "m": 30, "seed": seed, "side": 5},
            {"kind": "sphere_rational_points", "m": 10, "seed": seed + 1, "center": ["2", "2", "2"], "radius": "2"},
            {"kind": "random_spheres", "n": 25, "seed": seed + 2, "side": 5, "max_radius_sq": 6}
        ]
    }))
    .unwrap();
    let g = generate(&spec).unwrap();
    (g.points, g.surfaces)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn pipeline_matches_brute_force_and_is_monotone(seed in 0u64..10_000, extra in small_vec(), r2 in 1i64..=6) {
        let (pts, mut surfaces) = random_config(seed);
        let before = run_pipeline(&pts, &surfaces, &params(), &waived(seed)).unwrap();
        prop_assert_eq!(before.total_incidences, incidences_bruteforce(&pts, &surfaces).unwrap().0);
        surfaces.push(Surface::sphere(Point::new(extra.iter().map(|&v| int(v + 2)).collect()), int(r2)).unwrap());
        let after = run_pipeline(&pts, &surfaces, &params(), &waived(seed)).unwrap();
        prop_assert_eq!(after.total_incidences, incidences_bruteforce(&pts, &surfaces).unwrap().0);
        prop_assert!(after.total_incidences >= before.total_incidences);
        check_bucket_fidelity(&after);
    }
}

/// Recomputes every A1/A2/A3 assignment from the report with exact integers.
fn check_bucket_fidelity(r: &IncidenceReport) -> usize {
    let (n, k) = (BigInt::from(r.n), r.k as u32);
    let c: &Rational = &r.regime_constant;
    let mut seen = 0;
    for comp in r.buckets.all() {
        let pk = num_traits::pow(BigInt::from(comp.points), k as usize);
        let dj = BigInt::from(comp.d_j);
        let expected = if pk < num_traits::pow(dj.clone(), k as usize) * &n {
            Bucket::A1
        } else if Rational::from_integer(pk) < c * Rational::from_integer(num_traits::pow(dj, (3 * k - 1) as usize) * &n) {
            Bucket::A2
        } else {
            Bucket::A3
        };
        assert_eq!(comp.bucket, expected, "component {}", comp.j);
        seen += 1;
    }
    seen
}

#[test]
fn bucket_fidelity_on_grids() {
    let mut components = 0;
    for side in 2..=4 {
        let g = generate(&GeneratorSpec::UnitSpheresAt {
            of: Box::new(GeneratorSpec::Grid {
                n_per_side: side,
                spacing: "1".into(),
            }),
        })
        .unwrap();
        let r = run_pipeline(&g.points, &g.surfaces, &params(), &waived(side as u64)).unwrap();
        assert_eq!(r.total_incidences, r.brute_force_total);
        components += check_bucket_fidelity(&r);
    }
    for seed in 0..4 {
        let (pts, surfaces) = random_config(seed);
        let r = run_pipeline(&pts, &surfaces, &params(), &waived(seed)).unwrap();
        components += check_bucket_fidelity(&r);
    }
    assert!(components > 0, "no zero-set components were exercised");
}

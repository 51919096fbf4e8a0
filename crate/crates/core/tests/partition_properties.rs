use num_traits::Zero;
use polypart::configgen::{generate, GeneratorSpec};
use polypart::hypersurface::{build_surface_partition, realizations_on_surface, SurfaceConfig};
use polypart::partition::{
    assign_cells, build_partition, count_cells_met_by_surface, BisectionCertificate, PartitionConfig,
};
use polypart::poly::graded::graded_slice;
use polypart::poly::rational::{int, ratio};
use polypart::poly::{MultiPoly, Point, Rational};
use polypart::surface::Surface;
use proptest::prelude::*;

fn points_strategy(max: usize) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec(prop::collection::vec(-40i64..=40, 3), 1..=max)
        .prop_map(|v| v.into_iter().map(|c| Point::new(c.into_iter().map(|x| ratio(x, 4)).collect())).collect())
}

/// `⌈m·f⌉` for a rational `f`, computed without the library helpers.
fn ceil_times(m: usize, f: &Rational) -> u64 {
    let v = Rational::from_integer(m.into()) * f;
    v.ceil().to_integer().try_into().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn partition_invariants(pts in points_strategy(60), t in 0usize..=3, seed in 0u64..1000) {
        let cfg = PartitionConfig::new(t, ratio(1, 10), seed);
        let r = build_partition(&pts, &cfg).unwrap();
        let m = pts.len();
        prop_assert_eq!(r.round_polys.len(), t);

        // Conservation: every index exactly once.
        let mut seen = vec![0usize; m];
        for idx in r.pieces.values().chain(std::iter::once(&r.residual)) {
            for &i in idx {
                seen[i] += 1;
            }
        }
        prop_assert!(seen.iter().all(|&c| c == 1));

        // Pieces reproduce their sign conditions exactly.
        for (cond, idx) in &r.pieces {
            for &i in idx {
                let s: Vec<i8> = r.round_polys.iter().map(|q| q.sign_at(&pts[i]).unwrap()).collect();
                prop_assert_eq!(&s, &cond.signs);
            }
        }
        for &i in &r.residual {
            prop_assert!(r.round_polys.iter().any(|q| q.sign_at(&pts[i]).unwrap() == 0));
        }

        // Certificate soundness: round i's families are the cells of the
        // first i - 1 polynomials, recounted against Q_i.
        for i in 0..t {
            let (cells, _) = assign_cells(&pts, &r.round_polys[..i]).unwrap();
            let families: Vec<Vec<usize>> = cells.values().cloned().collect();
            let again = BisectionCertificate::recount(&r.round_polys[i], &families, &pts).unwrap();
            prop_assert_eq!(&again, &r.certificates[i]);
        }

        // Piece bound.
        let bound = ceil_times(m, &num_traits::pow(ratio(1, 2) + ratio(1, 10), t));
        prop_assert_eq!(r.piece_bound, bound);
        if r.certified {
            prop_assert!(r.pieces.values().all(|p| p.len() as u64 <= bound));
        }

        // Determinism.
        let again = build_partition(&pts, &cfg).unwrap();
        prop_assert_eq!(serde_json::to_string(&r).unwrap(), serde_json::to_string(&again).unwrap());
    }
}

fn sphere() -> MultiPoly {
    MultiPoly::parse("x1^2 + x2^2 + x3^2 - 1", 3).unwrap()
}

fn sphere_points(m: usize, seed: u64) -> Vec<Point> {
    let spec: GeneratorSpec = serde_json::from_value(serde_json::json!({
        "kind": "sphere_rational_points", "m": m, "seed": seed
    }))
    .unwrap();
    generate(&spec).unwrap().points
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn surface_partition_invariants(m in 4usize..=32, seed in 0u64..1000, e in 2u32..=4) {
        let pts = sphere_points(m, seed);
        let p = sphere();
        let cfg = SurfaceConfig::new(e, ratio(1, 10), seed);
        let r = build_surface_partition(&p, &pts, &cfg).unwrap();

        // t ≤ ⌈log₂(D·E²)⌉ + c₀ and Σ deg ≤ c₁·E.
        let target = 2 * e * e;
        let mut formula = 0;
        while (1u32 << formula) < target {
            formula += 1;
        }
        prop_assert_eq!(r.t_formula, formula as usize);
        prop_assert!(r.t <= formula as usize + r.c0 as usize);
        let degree_sum: u32 = r.polys.iter().map(MultiPoly::degree).sum();
        prop_assert!(degree_sum <= r.c1 * e);

        // Each Q_i is outside the ideal slice of P at its own degree.
        for q in &r.polys {
            prop_assert!(graded_slice(&p, q.degree().max(p.degree())).certifies_non_member(q));
            prop_assert!(!p.divides(q));
        }
        prop_assert!(r.non_member.iter().all(|&b| b));

        // Conservation against a fresh bucketing.
        let (buckets, boundary) = realizations_on_surface(&pts, &p, &r.polys).unwrap();
        prop_assert_eq!(&buckets, &r.realizations);
        prop_assert_eq!(&boundary, &r.boundary_residual);
        let total: usize = buckets.values().map(Vec::len).sum::<usize>() + boundary.len();
        prop_assert_eq!(total, m);
        if r.certified {
            prop_assert!(r.max_bucket() as u64 <= r.bucket_bound);
        }
    }

    #[test]
    fn cell_estimates_grow_with_density(seed in 0u64..1000) {
        let pts = points_strategy_fixed(seed);
        let r = build_partition(&pts, &PartitionConfig::new(3, ratio(1, 10), seed)).unwrap();
        let surfaces = [
            Surface::unit_sphere(Point::origin(3)),
            Surface::sphere(Point::new(vec![ratio(1, 2), int(0), int(-1)]), int(4)).unwrap(),
            Surface::general(MultiPoly::parse("x1^2 - x2 + 1/3", 3).unwrap()).unwrap(),
        ];
        for s in &surfaces {
            let mut prev = 0;
            for density in [8, 32, 128] {
                let c = count_cells_met_by_surface(s, &r.round_polys, density).unwrap();
                prop_assert!(c >= prev);
                prev = c;
            }
        }
    }
}

fn points_strategy_fixed(seed: u64) -> Vec<Point> {
    let spec: GeneratorSpec = serde_json::from_value(serde_json::json!({
        "kind": "random_box", "m": 40, "seed": seed, "half_width": 2, "denominator": 8
    }))
    .unwrap();
    generate(&spec).unwrap().points
}

#[test]
fn zero_slack_rounds_are_exact_on_24_point_set() {
    let pts = generate(&GeneratorSpec::Example1).unwrap().points;
    let r = build_partition(&pts, &PartitionConfig::new(3, Rational::zero(), 0)).unwrap();
    for c in &r.certificates {
        assert_eq!(c.slack_used, Rational::zero());
    }
    assert!(r.certified);
    assert!(r.round_polys.iter().all(|q| q.degree() == 1));
}

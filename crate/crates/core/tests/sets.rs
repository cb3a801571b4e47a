use proptest::prelude::*;
use simplex_projection::matching::{
    concurrencies, match_sets, project_set, reconstruct_set, MatchOptions,
};
use simplex_projection::BarycentricPoint;

fn composition(dim: usize) -> impl Strategy<Value = BarycentricPoint> {
    prop::collection::vec(0.05f64..1.0, dim).prop_map(|w| {
        let s: f64 = w.iter().sum();
        BarycentricPoint::new(w.iter().map(|x| x / s).collect()).unwrap()
    })
}

fn point_set() -> impl Strategy<Value = Vec<BarycentricPoint>> {
    (3usize..=5).prop_flat_map(|dim| prop::collection::vec(composition(dim), 1..8))
}

fn sorted(points: &[BarycentricPoint]) -> Vec<Vec<f64>> {
    let mut v: Vec<Vec<f64>> = points.iter().map(|p| p.weights().to_vec()).collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

fn well_separated(points: &[BarycentricPoint]) -> bool {
    points
        .iter()
        .enumerate()
        .all(|(i, a)| points[i + 1..].iter().all(|b| a.max_abs_diff(b) > 1e-3))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn set_round_trip(points in point_set(), seed in any::<u64>()) {
        prop_assume!(well_separated(&points));
        let u = project_set(&points, Some(seed)).unwrap();
        let m = match_sets(&u, MatchOptions::default()).unwrap();
        prop_assert_eq!(m.tuples.len(), points.len());
        let back = reconstruct_set(&u, &m, MatchOptions::default().tol_compat).unwrap();
        for (a, b) in sorted(&points).iter().zip(sorted(&back)) {
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x - y).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn exactly_one_concurrency_per_point(points in point_set(), seed in any::<u64>()) {
        prop_assume!(well_separated(&points));
        let u = project_set(&points, Some(seed)).unwrap();
        let found = concurrencies(&u, MatchOptions::default());
        prop_assert_eq!(found.len(), points.len());
        for (_, residual) in found {
            prop_assert!(residual < 1e-12);
        }
    }
}

use approx::assert_relative_eq;
use simplex_projection::density::{grid_integral, marginalize, DensityGrid, DirichletParams, Mode};
use simplex_projection::BarycentricPoint;

fn dir253() -> DirichletParams {
    DirichletParams::new(vec![2.0, 5.0, 3.0]).unwrap()
}

fn max_error(g: &DensityGrid, exact: &DirichletParams) -> f64 {
    g.nodes()
        .iter()
        .enumerate()
        .filter(|(i, _)| !g.is_boundary(*i))
        .map(|(i, n)| {
            let e = exact.pdf(&BarycentricPoint::new(n.clone()).unwrap()).unwrap();
            (g.values()[i] - e).abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn line_integral_matches_frozen_reference() {
    // Σ_{m=2}^{M-1} p(x_m)·|s|/M evaluated independently in double precision
    let cases: [(usize, [u32; 2], f64); 3] = [
        (1, [512, 512], 1.8249370303134764),
        (2, [256, 768], 3.4190344178900873),
        (3, [128, 896], 3.108620222822352),
    ];
    let d = dir253();
    for (facet, k, expected) in cases {
        let g = marginalize(&d, facet, 10, 1000, Mode::LineIntegral).unwrap();
        let i = g.node_at(&k).unwrap();
        assert_relative_eq!(g.values()[i], expected, max_relative = 1e-12);
        let total = grid_integral(&g);
        assert!(total.is_finite() && total > 0.0);
    }
}

#[test]
fn pushforward_edge_matches_beta_at_midpoint() {
    let g = marginalize(&dir253(), 1, 10, 1000, Mode::Pushforward).unwrap();
    assert_eq!(g.nodes().len(), 1025);
    let mid = g.node_at(&[512, 512]).unwrap();
    // Beta(5,3) at 1/2: 105 · 0.5^6
    assert_relative_eq!(g.values()[mid], 1.640625, epsilon = 1e-6);
}

#[test]
fn error_shrinks_as_accuracy_doubles() {
    let d = dir253();
    for facet in 1..=3 {
        let keep: Vec<usize> = (1..=3).filter(|&l| l != facet).collect();
        let exact = d.marginal(&keep).unwrap();
        let errors: Vec<f64> = [125, 250, 500, 1000, 2000]
            .iter()
            .map(|&m| max_error(&marginalize(&d, facet, 8, m, Mode::Pushforward).unwrap(), &exact))
            .collect();
        for w in errors.windows(2) {
            assert!(w[1] <= w[0] * 1.05 + 1e-10, "facet {facet}: {errors:?}");
        }
    }
}

#[test]
fn doubling_accuracy_moves_nodes_little() {
    let d = dir253();
    for facet in 1..=3 {
        let a = marginalize(&d, facet, 10, 1000, Mode::Pushforward).unwrap();
        let b = marginalize(&d, facet, 10, 2000, Mode::Pushforward).unwrap();
        let change = a
            .values()
            .iter()
            .zip(b.values())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        assert!(change < 1e-4, "facet {facet}: {change}");
    }
}

#[test]
fn grid_json_survives_a_file() {
    let g = marginalize(&dir253(), 2, 6, 100, Mode::LineIntegral).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    std::fs::write(&path, g.to_json()).unwrap();
    let back = DensityGrid::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(back, g);
    assert_eq!(back.mode(), Mode::LineIntegral);
}

use std::collections::BTreeMap;

use lampharm::graph::*;
use lampharm::potential::*;
use proptest::prelude::*;

/// Random connected graph: a random tree plus extra edges, with a random
/// nonempty boundary mask.
fn connected_graph(max_n: usize) -> impl Strategy<Value = FiniteGraph> {
    (3..=max_n)
        .prop_flat_map(|n| {
            (
                Just(n),
                proptest::collection::vec(any::<prop::sample::Index>(), n - 1),
                proptest::collection::vec((0..n, 0..n), 0..n),
                proptest::collection::vec(any::<bool>(), n),
            )
        })
        .prop_map(|(n, parents, extra, mask)| {
            let mut edges: Vec<(usize, usize)> = parents
                .iter()
                .enumerate()
                .map(|(i, p)| (p.index(i + 1), i + 1))
                .collect();
            edges.extend(extra.into_iter().filter(|(a, b)| a != b));
            let mut mask = mask;
            mask[0] = true;
            FiniteGraph::from_edges(n, &edges, mask).unwrap()
        })
}

fn values_for(g: &FiniteGraph, seed: &[f64]) -> Vec<f64> {
    (0..g.len()).map(|i| seed[i % seed.len()] + i as f64 * 0.01).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn energy_scales_homogeneously(g in connected_graph(30), seed in proptest::collection::vec(-3.0f64..3.0, 1..8),
                                  c in -4.0f64..4.0, p in 1.0f64..4.0) {
        let f = VertexFunction::on(&g, values_for(&g, &seed)).unwrap();
        let e = p_energy(&f, &g, p).unwrap();
        let scaled = p_energy(&f.scaled(c), &g, p).unwrap();
        prop_assert!((scaled - c.abs().powf(p) * e).abs() <= 1e-9 * (1.0 + scaled.abs()));
        // gradient is linear
        let gf = gradient(&f, &g).unwrap();
        let gs = gradient(&f.scaled(c), &g).unwrap();
        for (a, b) in gf.values().iter().zip(gs.values()) {
            prop_assert!((c * a - b).abs() <= 1e-12 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn deleting_edges_never_raises_energy(g in connected_graph(30), keep in proptest::collection::vec(any::<bool>(), 60),
                                          seed in proptest::collection::vec(-3.0f64..3.0, 1..8), p in 1.0f64..4.0) {
        let edges = g.edges();
        let kept: Vec<(usize, usize)> = edges.iter().enumerate().filter(|(i, _)| keep[i % keep.len()]).map(|(_, &e)| e).collect();
        let sub = g.with_edges(&kept).unwrap();
        let f = VertexFunction::on(&g, values_for(&g, &seed)).unwrap();
        prop_assert!(p_energy(&f, &sub, p).unwrap() <= p_energy(&f, &g, p).unwrap());
    }

    #[test]
    fn solutions_are_energy_minimizers(g in connected_graph(25), data in proptest::collection::vec(-1.0f64..1.0, 1..6),
                                       p in prop_oneof![Just(1.5f64), Just(2.0), Just(3.0)],
                                       dir in proptest::collection::vec(-1.0f64..1.0, 25)) {
        let prob = DirichletProblem::from_labels(g.clone(), p, |i| data[i % data.len()]).unwrap();
        let sol = solve_dirichlet(&prob).unwrap();
        let base = sol.energy;
        for eps in [1e-3, -1e-3] {
            let mut v = sol.function.values().to_vec();
            for i in g.interior_vertices() {
                v[i] += eps * dir[i % dir.len()];
            }
            let e = p_energy(&VertexFunction::on(&g, v).unwrap(), &g, p).unwrap();
            prop_assert!(e >= base - prob.tolerance(), "perturbed {e} < optimum {base}");
        }
        // maximum principle
        let b = prob.boundary_values();
        let hi = b.values().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = b.values().copied().fold(f64::INFINITY, f64::min);
        for i in g.interior_vertices() {
            let x = sol.function.values()[i];
            prop_assert!(x <= hi + 10.0 * prob.tolerance() && x >= lo - 10.0 * prob.tolerance());
        }
    }
}

#[test]
fn capacity_is_monotone_in_both_radii() {
    let opts = ProbeOptions::default();
    for (g, p) in [
        (grid_graph(2).unwrap(), 2.0),
        (grid_graph(2).unwrap(), 1.5),
        (free_group_graph(2).unwrap(), 2.0),
    ] {
        let o = g.origin();
        let outer: Vec<f64> = (3..=5)
            .map(|big| annulus_capacity(g.as_ref(), &o, 1, big, p, &opts).unwrap())
            .collect();
        assert!(outer.windows(2).all(|w| w[1] <= w[0] + 1e-9), "{}: {outer:?}", g.name());
        let inner: Vec<f64> = (1..=3)
            .map(|r| annulus_capacity(g.as_ref(), &o, r, 5, p, &opts).unwrap())
            .collect();
        assert!(inner.windows(2).all(|w| w[1] >= w[0] - 1e-9), "{}: {inner:?}", g.name());
    }
}

#[test]
fn p_three_line_capacity_closed_form() {
    // two chains of R - r edges; optimal gradient is constant 1/(R - r) per edge
    let g = line_graph();
    let opts = ProbeOptions::default();
    for (r, big) in [(1usize, 4usize), (2, 7)] {
        let cap = annulus_capacity(g.as_ref(), &g.origin(), r, big, 3.0, &opts).unwrap();
        let m = (big - r) as f64;
        assert!((cap - 2.0 * m * m.powi(-3)).abs() < 1e-8, "r={r} R={big}: {cap}");
    }
}

#[test]
fn equal_boundary_values_give_a_constant() {
    let g = grid_graph(2).unwrap();
    let b = ball(g.as_ref(), &g.origin(), 3, 1000).unwrap();
    let values: BTreeMap<usize, f64> = b.boundary_vertices().map(|i| (i, 0.25)).collect();
    let sol = solve_dirichlet(&DirichletProblem::new(b, values, 2.0).unwrap()).unwrap();
    assert!(sol.function.values().iter().all(|&v| v == 0.25));
    assert_eq!(sol.energy, 0.0);
}

#[test]
fn probe_csv_round_trip() {
    let rows = vec![
        ProbeRow {
            radius: 4,
            oscillation: Some(0.5),
            energy: Some(0.25),
            capacity: None,
        },
        ProbeRow {
            radius: 6,
            oscillation: None,
            energy: None,
            capacity: Some(0.1),
        },
    ];
    let mut buf = Vec::new();
    write_probe_csv(&rows, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("R,"));
}

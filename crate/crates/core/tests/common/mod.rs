//! Helpers shared by the integration suites.
#![allow(dead_code)]

use er_core::graph::GraphModel;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seeded connected graph: a random attachment tree plus `extra` random
/// non-duplicate edges.
pub fn seeded_connected_graph(n: usize, extra: usize, seed: u64) -> GraphModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(n - 1 + extra);
    for v in 1..n {
        edges.push((rng.random_range(0..v), v));
    }
    let mut added = 0;
    let mut guard = 0;
    while added < extra && guard < 100 * extra.max(1) {
        guard += 1;
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if a == b {
            continue;
        }
        let (a, b) = (a.min(b), a.max(b));
        if edges.iter().any(|&(x, y)| (x.min(y), x.max(y)) == (a, b)) {
            continue;
        }
        edges.push((a, b));
        added += 1;
    }
    GraphModel::build(n, &edges).expect("generated edges are valid")
}

pub fn ring(n: usize) -> GraphModel {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    GraphModel::build(n, &edges).unwrap()
}

pub fn path(n: usize) -> GraphModel {
    let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
    GraphModel::build(n, &edges).unwrap()
}

pub fn triangle() -> GraphModel {
    GraphModel::build(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
}

/// Upper chi-square quantile via the Wilson-Hilferty cube approximation;
/// accurate to a few percent for the degrees of freedom used here.
pub fn chi_square_quantile(p_upper_tail: f64, dof: f64) -> f64 {
    // z for the matching standard-normal upper tail
    let z = match p_upper_tail {
        p if (p - 0.001).abs() < 1e-12 => 3.090_232,
        p if (p - 0.01).abs() < 1e-12 => 2.326_348,
        p if (p - 0.05).abs() < 1e-12 => 1.644_854,
        _ => panic!("unsupported tail probability {p_upper_tail}"),
    };
    let a = 2.0 / (9.0 * dof);
    dof * (1.0 - a + z * a.sqrt()).powi(3)
}

//! Ground-truth engine for effective resistances.
//!
//! Everything here is exact (up to dense-eigensolve accuracy at desk scale):
//! pseudo-inverse quadratic forms, two independent routes to the effective
//! resistance (spectral and harmonic), total effective resistance by two
//! routes, leverage scores, and the two-sided degree bounds. The randomized
//! and sublinear parts of the crate are validated against this module.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::graph::{EdgeId, GraphError, GraphModel, Vertex};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("vector has dimension {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("the two query vertices are equal ({0})")]
    SameVertex(Vertex),
    #[error("vertices are not connected")]
    Disconnected,
    #[error("spectral route requires a connected graph")]
    DisconnectedSpectral,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Effective resistance value; infinite across components.
///
/// An explicit variant, never an overflow sentinel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Resistance {
    Finite(f64),
    Infinite,
}

impl Resistance {
    pub fn finite(&self) -> Option<f64> {
        match *self {
            Resistance::Finite(r) => Some(r),
            Resistance::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Resistance::Infinite)
    }

    /// Finite value or a panic; for callers that already checked
    /// connectivity.
    pub fn expect_finite(&self) -> f64 {
        self.finite().expect("resistance is infinite")
    }
}

impl std::fmt::Display for Resistance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Resistance::Finite(r) => write!(f, "{r}"),
            Resistance::Infinite => write!(f, "INFINITE"),
        }
    }
}

/// Eigendecomposition of a symmetric matrix with a rank cutoff.
///
/// Eigenvalues are sorted ascending with eigenvector columns aligned.
/// Eigenvalues at or below `zero_tolerance` are treated as zero by the
/// pseudo-inverse operations; the cutoff is `n · ε · λ_max`, the standard
/// rank-revealing choice.
#[derive(Debug, Clone)]
pub struct SpectralBundle {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<f64>,
    zero_tolerance: f64,
}

impl SpectralBundle {
    pub fn of_matrix(matrix: &DMatrix<f64>) -> Self {
        assert_eq!(matrix.nrows(), matrix.ncols(), "matrix must be square");
        let n = matrix.nrows();
        let eig = matrix.clone().symmetric_eigen();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let mut eigenvectors = DMatrix::zeros(n, n);
        for (col, &i) in order.iter().enumerate() {
            eigenvectors.set_column(col, &eig.eigenvectors.column(i));
        }
        let lambda_max = eigenvalues.iter().fold(0.0f64, |a, &l| a.max(l.abs()));
        let zero_tolerance = if lambda_max > 0.0 {
            n as f64 * f64::EPSILON * lambda_max
        } else {
            f64::EPSILON
        };
        SpectralBundle {
            eigenvalues,
            eigenvectors,
            zero_tolerance,
        }
    }

    pub fn of_graph_laplacian(g: &GraphModel) -> Self {
        Self::of_matrix(&g.laplacian())
    }

    pub fn dimension(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    pub fn zero_tolerance(&self) -> f64 {
        self.zero_tolerance
    }

    /// Number of eigenvalues treated as zero.
    pub fn kernel_dimension(&self) -> usize {
        self.eigenvalues
            .iter()
            .filter(|&&l| l.abs() <= self.zero_tolerance)
            .count()
    }

    /// Quadratic form `xᵀ M† x` through the eigenvalues above the cutoff.
    pub fn pseudo_inverse_quadratic(&self, x: &DVector<f64>) -> Result<f64, SpectralError> {
        let n = self.dimension();
        if x.len() != n {
            return Err(SpectralError::DimensionMismatch {
                expected: n,
                got: x.len(),
            });
        }
        let mut acc = 0.0;
        for (i, &lambda) in self.eigenvalues.iter().enumerate() {
            if lambda.abs() > self.zero_tolerance {
                let c = self.eigenvectors.column(i).dot(x);
                acc += c * c / lambda;
            }
        }
        Ok(acc)
    }

    /// Dense pseudo-inverse `M† = Σ_{λ≠0} (1/λ) ψψᵀ`.
    ///
    /// Materialized once so pairwise sweeps are O(n²) reads instead of n²
    /// solves.
    pub fn pseudo_inverse(&self) -> DMatrix<f64> {
        let n = self.dimension();
        let mut out = DMatrix::zeros(n, n);
        for (i, &lambda) in self.eigenvalues.iter().enumerate() {
            if lambda.abs() > self.zero_tolerance {
                let psi = self.eigenvectors.column(i);
                out.syger(1.0 / lambda, &psi, &psi, 1.0);
            }
        }
        // syger fills the lower triangle; mirror it
        for i in 0..n {
            for j in (i + 1)..n {
                out[(i, j)] = out[(j, i)];
            }
        }
        out
    }
}

/// Vertex potentials with `φ(s) = 1`, `φ(t) = 0`.
#[derive(Debug, Clone)]
pub struct PotentialVector {
    pub phi: Vec<f64>,
}

/// `R(s, t) = (1_s - 1_t)ᵀ L† (1_s - 1_t)`, or infinite across components.
pub fn effective_resistance(
    g: &GraphModel,
    s: Vertex,
    t: Vertex,
) -> Result<Resistance, SpectralError> {
    check_pair(g, s, t)?;
    if !g.same_component(s, t) {
        return Ok(Resistance::Infinite);
    }
    let bundle = SpectralBundle::of_graph_laplacian(g);
    Ok(Resistance::Finite(resistance_from_bundle(&bundle, s, t)?))
}

fn resistance_from_bundle(
    bundle: &SpectralBundle,
    s: Vertex,
    t: Vertex,
) -> Result<f64, SpectralError> {
    let mut x = DVector::zeros(bundle.dimension());
    x[s] = 1.0;
    x[t] = -1.0;
    bundle.pseudo_inverse_quadratic(&x)
}

/// Effective resistance between endpoints of `e` read off a materialized
/// pseudo-inverse: `L†_uu + L†_vv - 2 L†_uv`.
pub fn resistance_from_pseudo_inverse(pinv: &DMatrix<f64>, u: Vertex, v: Vertex) -> f64 {
    pinv[(u, u)] + pinv[(v, v)] - 2.0 * pinv[(u, v)]
}

/// Per-edge effective resistances from a single decomposition, in sorted
/// edge order.
pub fn all_edge_resistances(g: &GraphModel) -> Vec<(EdgeId, f64)> {
    let pinv = SpectralBundle::of_graph_laplacian(g).pseudo_inverse();
    g.edges()
        .into_iter()
        .map(|e| (e, resistance_from_pseudo_inverse(&pinv, e.u(), e.v())))
        .collect()
}

/// Solves the harmonic Dirichlet problem with `φ(s) = 1`, `φ(t) = 0` and
/// returns `(1 / energy, φ)`.
///
/// Uses a grounded linear system on the component containing `s` and `t`
/// (row and column of `t` deleted), so no pseudo-inverse enters this route.
/// Potentials outside that component are zero.
pub fn effective_resistance_harmonic(
    g: &GraphModel,
    s: Vertex,
    t: Vertex,
) -> Result<(Resistance, PotentialVector), SpectralError> {
    check_pair(g, s, t)?;
    let mask = g.component_mask(s);
    if !mask[t] {
        return Err(SpectralError::Disconnected);
    }

    // component vertices excluding t, densely re-indexed
    let mut index = vec![usize::MAX; g.vertex_count()];
    let mut verts = Vec::new();
    for v in 0..g.vertex_count() {
        if mask[v] && v != t {
            index[v] = verts.len();
            verts.push(v);
        }
    }
    let k = verts.len();
    let mut grounded = DMatrix::zeros(k, k);
    for (i, &u) in verts.iter().enumerate() {
        grounded[(i, i)] = g.neighbors(u).len() as f64;
        for &w in g.neighbors(u) {
            if w != t {
                grounded[(i, index[w])] = -1.0;
            }
        }
    }
    // unit current injected at s, extracted at the grounded t
    let mut rhs = DVector::zeros(k);
    rhs[index[s]] = 1.0;
    let x = grounded
        .lu()
        .solve(&rhs)
        .ok_or(SpectralError::Disconnected)?;
    let r = x[index[s]];

    let mut phi = vec![0.0; g.vertex_count()];
    for (i, &u) in verts.iter().enumerate() {
        phi[u] = x[i] / r;
    }
    phi[t] = 0.0;

    Ok((Resistance::Finite(r), PotentialVector { phi }))
}

/// Route selector for [`total_effective_resistance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TotalMethod {
    /// Sum `R(u, v)` over all unordered pairs from one pseudo-inverse.
    Pairwise,
    /// `n · Σ_{i>1} 1/λ_i(L)`; connected graphs only.
    Spectral,
}

/// Total effective resistance (Kirchhoff index) by the chosen route.
pub fn total_effective_resistance(
    g: &GraphModel,
    method: TotalMethod,
) -> Result<Resistance, SpectralError> {
    let n = g.vertex_count();
    match method {
        TotalMethod::Pairwise => {
            if n > 1 && !g.is_connected() {
                return Ok(Resistance::Infinite);
            }
            let pinv = SpectralBundle::of_graph_laplacian(g).pseudo_inverse();
            let mut total = 0.0;
            for u in 0..n {
                for v in (u + 1)..n {
                    total += resistance_from_pseudo_inverse(&pinv, u, v);
                }
            }
            Ok(Resistance::Finite(total))
        }
        TotalMethod::Spectral => {
            if n > 1 && !g.is_connected() {
                return Err(SpectralError::DisconnectedSpectral);
            }
            let bundle = SpectralBundle::of_graph_laplacian(g);
            let sum: f64 = bundle
                .eigenvalues()
                .iter()
                .filter(|&&l| l > bundle.zero_tolerance())
                .map(|&l| 1.0 / l)
                .sum();
            Ok(Resistance::Finite(n as f64 * sum))
        }
    }
}

/// `Σ_{(u,v) ∈ E} R(u, v)`; equals `n - 1` on connected graphs.
pub fn edge_resistance_sum(g: &GraphModel) -> Result<f64, SpectralError> {
    if !g.is_connected() {
        return Err(SpectralError::Disconnected);
    }
    Ok(all_edge_resistances(g).iter().map(|(_, r)| r).sum())
}

/// Leverage scores `τ_i = a_iᵀ (AᵀA)† a_i` of the rows of `A`.
pub fn leverage_scores(a: &DMatrix<f64>) -> Vec<f64> {
    let gram = a.transpose() * a;
    let bundle = SpectralBundle::of_matrix(&gram);
    (0..a.nrows())
        .map(|i| {
            let row = DVector::from_iterator(a.ncols(), a.row(i).iter().copied());
            bundle
                .pseudo_inverse_quadratic(&row)
                .expect("row dimension matches gram dimension")
        })
        .collect()
}

/// Two-sided degree bound for one edge:
/// `½(1/d(u) + 1/d(v)) ≤ R(u,v) ≤ (1/λ₂(L̃)) (1/d(u) + 1/d(v))`.
#[derive(Debug, Clone)]
pub struct EdgeBounds {
    pub edge: EdgeId,
    pub lower: f64,
    pub resistance: f64,
    pub upper: f64,
}

/// Worst-slack report over every edge of the graph.
#[derive(Debug, Clone)]
pub struct DegreeBoundReport {
    pub lambda2_normalized: f64,
    pub per_edge: Vec<EdgeBounds>,
    /// `min_e (R - lower)`; negative means the lower bound failed.
    pub min_lower_slack: f64,
    /// `min_e (upper - R)`; negative means the upper bound failed.
    pub min_upper_slack: f64,
}

/// Checks the two-sided degree bounds on every edge of a connected graph.
pub fn degree_bound_check(g: &GraphModel) -> Result<DegreeBoundReport, SpectralError> {
    if !g.is_connected() {
        return Err(SpectralError::Disconnected);
    }
    let normalized = g.normalized_laplacian()?;
    let bundle = SpectralBundle::of_matrix(&normalized);
    let lambda2 = bundle.eigenvalues()[1];
    let mut per_edge = Vec::new();
    let mut min_lower_slack = f64::INFINITY;
    let mut min_upper_slack = f64::INFINITY;
    for (edge, resistance) in all_edge_resistances(g) {
        let du = g.neighbors(edge.u()).len() as f64;
        let dv = g.neighbors(edge.v()).len() as f64;
        let harmonic = 1.0 / du + 1.0 / dv;
        let lower = 0.5 * harmonic;
        let upper = harmonic / lambda2;
        min_lower_slack = min_lower_slack.min(resistance - lower);
        min_upper_slack = min_upper_slack.min(upper - resistance);
        per_edge.push(EdgeBounds {
            edge,
            lower,
            resistance,
            upper,
        });
    }
    Ok(DegreeBoundReport {
        lambda2_normalized: lambda2,
        per_edge,
        min_lower_slack,
        min_upper_slack,
    })
}

fn check_pair(g: &GraphModel, s: Vertex, t: Vertex) -> Result<(), SpectralError> {
    let n = g.vertex_count();
    if s >= n {
        return Err(GraphError::OutOfRange { vertex: s, n }.into());
    }
    if t >= n {
        return Err(GraphError::OutOfRange { vertex: t, n }.into());
    }
    if s == t {
        return Err(SpectralError::SameVertex(s));
    }
    Ok(())
}

//! Row-removal eigenvalue bounds.
//!
//! Removing k rows from a matrix A moves every eigenvalue of AᵀA downward,
//! but by no more than the removed rows' leverage-score mass:
//! `λ'_i ∈ [(1 - Στ) λ_i, λ_i]`. For graphs this specializes to edge removal
//! with the effective resistance of the removed edge playing the role of τ.
//! This module computes both spectra, the bounds, and the measured slack on
//! each side; when `Στ ≥ 1` the lower bound is vacuous for PSD spectra and
//! is flagged rather than rejected (a bridge removal is the canonical case).

use nalgebra::DMatrix;
use thiserror::Error;

use crate::graph::{EdgeId, GraphModel};
use crate::spectral::{leverage_scores, SpectralBundle};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PerturbError {
    #[error("duplicate row index {0}")]
    DuplicateIndex(usize),
    #[error("row index {index} out of range for {rows} rows")]
    OutOfRange { index: usize, rows: usize },
    #[error("cannot remove all {0} rows")]
    AllRowsRemoved(usize),
    #[error("({0}, {1}) is not an edge of the graph")]
    NotAnEdge(usize, usize),
    #[error("duplicate edge {0}")]
    DuplicateEdge(EdgeId),
}

/// Bound data for one eigenvalue index.
#[derive(Debug, Clone)]
pub struct PerIndexBound {
    /// 1-based index into the ascending spectrum.
    pub index: usize,
    /// `λ_i` of the original `AᵀA`.
    pub original: f64,
    /// `λ'_i` after row removal.
    pub perturbed: f64,
    /// `(1 - Στ) · λ_i`.
    pub lower_bound: f64,
    /// `λ_i - λ'_i`; interlacing holds when this is ≥ -tolerance.
    pub upper_slack: f64,
    /// `λ'_i - lower_bound`; the bound holds when this is ≥ -tolerance.
    pub lower_slack: f64,
}

/// One step of a sequential edge removal.
#[derive(Debug, Clone)]
pub struct SequentialStep {
    pub edge: EdgeId,
    /// Leverage score measured against the original graph.
    pub tau_original: f64,
    /// Leverage score recomputed in the graph current at this step.
    pub tau_recomputed: f64,
    /// `Σ τ_original` over edges removed before this step.
    pub prefix_tau_sum: f64,
    /// Inductive cap `τ_original / (1 - prefix_tau_sum)`, when the prefix
    /// sum is below one.
    pub recomputed_cap: Option<f64>,
}

/// Eigenvalue bounds for one removal experiment.
#[derive(Debug, Clone)]
pub struct PerturbationReport {
    /// Row indices removed from the matrix.
    pub indices_removed: Vec<usize>,
    /// The removed edges, when the experiment was graph-driven.
    pub edges_removed: Vec<EdgeId>,
    /// Leverage scores of the removed rows against the original matrix.
    pub tau: Vec<f64>,
    pub tau_sum: f64,
    /// Complete for i = 1..n.
    pub per_index: Vec<PerIndexBound>,
    /// Lower bounds are vacuous (`Στ ≥ 1`).
    pub vacuous: bool,
    /// Slack tolerance `1e-9 · λ_max`, scaled so checks stay meaningful
    /// across matrix magnitudes.
    pub tolerance: f64,
    /// Per-step data when the removal was sequential.
    pub steps: Vec<SequentialStep>,
}

impl PerturbationReport {
    pub fn min_lower_slack(&self) -> f64 {
        self.per_index
            .iter()
            .map(|b| b.lower_slack)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn min_upper_slack(&self) -> f64 {
        self.per_index
            .iter()
            .map(|b| b.upper_slack)
            .fold(f64::INFINITY, f64::min)
    }

    /// Both bounds hold on every index (within tolerance), or the lower
    /// bound is vacuous and only interlacing is required.
    pub fn bounds_hold(&self) -> bool {
        let upper_ok = self.min_upper_slack() >= -self.tolerance;
        if self.vacuous {
            upper_ok
        } else {
            upper_ok && self.min_lower_slack() >= -self.tolerance
        }
    }
}

/// Deletes the given rows, preserving the relative order of survivors.
pub fn remove_rows(a: &DMatrix<f64>, indices: &[usize]) -> Result<DMatrix<f64>, PerturbError> {
    let m = a.nrows();
    let mut keep = vec![true; m];
    for &i in indices {
        if i >= m {
            return Err(PerturbError::OutOfRange { index: i, rows: m });
        }
        if !keep[i] {
            return Err(PerturbError::DuplicateIndex(i));
        }
        keep[i] = false;
    }
    if indices.len() == m {
        return Err(PerturbError::AllRowsRemoved(m));
    }
    let rows: Vec<usize> = (0..m).filter(|&i| keep[i]).collect();
    Ok(a.select_rows(rows.iter()))
}

/// Eigenvalue bounds for removing `indices` from `a` in one shot.
///
/// Leverage scores are measured against the original matrix, matching the
/// one-shot statement of the bound.
pub fn eigen_bound_report(
    a: &DMatrix<f64>,
    indices: &[usize],
) -> Result<PerturbationReport, PerturbError> {
    let reduced = remove_rows(a, indices)?;
    let tau_all = leverage_scores(a);
    let tau: Vec<f64> = indices.iter().map(|&i| tau_all[i]).collect();
    Ok(build_report(
        a,
        &reduced,
        indices.to_vec(),
        Vec::new(),
        tau,
        Vec::new(),
    ))
}

/// Specializes [`eigen_bound_report`] to the incidence matrix of `g` with
/// one edge removed; the removed row's leverage score is the edge's
/// effective resistance.
pub fn graph_edge_removal_bound(
    g: &GraphModel,
    e: EdgeId,
) -> Result<PerturbationReport, PerturbError> {
    let edges = g.edges();
    let row = edges
        .binary_search(&e)
        .map_err(|_| PerturbError::NotAnEdge(e.u(), e.v()))?;
    let incidence = g.incidence_matrix();
    let mut report = eigen_bound_report(&incidence, &[row])?;
    report.edges_removed = vec![e];
    Ok(report)
}

/// Removes edges one at a time, recomputing the leverage score in the graph
/// current at each step.
///
/// The one-shot bound (τ against the original graph) and the per-step data
/// for the inductive cap `τ̃_{q+1} ≤ (1 - Σ_{j≤q} τ_j)⁻¹ τ_{q+1}` are both
/// reported; they are different quantities.
pub fn sequential_removal_bound(
    g: &GraphModel,
    edges: &[EdgeId],
) -> Result<PerturbationReport, PerturbError> {
    let all = g.edges();
    let mut seen = std::collections::BTreeSet::new();
    for &e in edges {
        if all.binary_search(&e).is_err() {
            return Err(PerturbError::NotAnEdge(e.u(), e.v()));
        }
        if !seen.insert(e) {
            return Err(PerturbError::DuplicateEdge(e));
        }
    }

    let incidence = g.incidence_matrix();
    let tau_all = leverage_scores(&incidence);
    let indices: Vec<usize> = edges
        .iter()
        .map(|e| all.binary_search(e).expect("edge presence checked"))
        .collect();
    let tau: Vec<f64> = indices.iter().map(|&i| tau_all[i]).collect();

    let mut steps = Vec::with_capacity(edges.len());
    let mut current: Vec<EdgeId> = all.clone();
    let mut prefix = 0.0;
    for (q, &e) in edges.iter().enumerate() {
        let pairs: Vec<(usize, usize)> = current.iter().map(|e| e.endpoints()).collect();
        let g_cur = GraphModel::build(g.vertex_count(), &pairs)
            .expect("edge subset of a valid graph is valid");
        let pos = current.binary_search(&e).expect("edge still present");
        let tau_recomputed = leverage_scores(&g_cur.incidence_matrix())[pos];
        let recomputed_cap = if prefix < 1.0 {
            Some(tau[q] / (1.0 - prefix))
        } else {
            None
        };
        steps.push(SequentialStep {
            edge: e,
            tau_original: tau[q],
            tau_recomputed,
            prefix_tau_sum: prefix,
            recomputed_cap,
        });
        current.remove(pos);
        prefix += tau[q];
    }

    let reduced = remove_rows(&incidence, &indices)?;
    Ok(build_report(
        &incidence,
        &reduced,
        indices,
        edges.to_vec(),
        tau,
        steps,
    ))
}

fn build_report(
    original: &DMatrix<f64>,
    reduced: &DMatrix<f64>,
    indices_removed: Vec<usize>,
    edges_removed: Vec<EdgeId>,
    tau: Vec<f64>,
    steps: Vec<SequentialStep>,
) -> PerturbationReport {
    let spectrum = |m: &DMatrix<f64>| {
        let gram = m.transpose() * m;
        SpectralBundle::of_matrix(&gram).eigenvalues().to_vec()
    };
    let lambda = spectrum(original);
    let lambda_prime = spectrum(reduced);
    // + 0.0 turns the empty sum's negative zero into plain zero
    let tau_sum: f64 = tau.iter().sum::<f64>() + 0.0;
    let lambda_max = lambda.iter().fold(0.0f64, |a, &l| a.max(l.abs()));
    let tolerance = 1e-9 * lambda_max;
    let per_index = lambda
        .iter()
        .zip(&lambda_prime)
        .enumerate()
        .map(|(i, (&orig, &pert))| {
            let lower_bound = (1.0 - tau_sum) * orig;
            PerIndexBound {
                index: i + 1,
                original: orig,
                perturbed: pert,
                lower_bound,
                upper_slack: orig - pert,
                lower_slack: pert - lower_bound,
            }
        })
        .collect();
    PerturbationReport {
        indices_removed,
        edges_removed,
        tau,
        tau_sum,
        per_index,
        // numerically a bridge's tau lands at 1 - O(eps)
        vacuous: tau_sum >= 1.0 - 1e-9,
        tolerance,
        steps,
    }
}

/// A matrix with exactly orthonormal columns (QR of a seeded Gaussian
/// draw), the family on which the lower bound is tight at index 1.
pub fn orthonormal_columns(m: usize, n: usize, seed: u64) -> DMatrix<f64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let raw = DMatrix::from_fn(m, n, |_, _| rng.random::<f64>() - 0.5);
    let qr = raw.qr();
    let q = qr.q();
    q.columns(0, n).into_owned()
}

//! Generators for the instance families the estimator and perturbation
//! bounds are exercised on, each with embedded ground-truth predictions.
//!
//! Expanders are rejection-sampled random regular graphs carrying a
//! measured spectral-gap certificate; no explicit algebraic construction
//! is attempted. Dumbbell instances join two copies of one expander by a
//! single bridge, so the base pair resistance is exactly 1, and the
//! modified variant swaps a handful of edges across the two sides without
//! touching any degree, pushing the pair resistance strictly below 1.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{EdgeId, GraphError, GraphModel, Vertex};
use crate::spectral::{all_edge_resistances, effective_resistance, Resistance, SpectralBundle};

/// Candidate threshold for modifiable dumbbell edges.
pub const CANDIDATE_RESISTANCE_MAX: f64 = 0.75;

/// Conservative constant in the modified large-degree prediction
/// `R(s,t) < 1/(1 + c₀ · min{ℓ, d})`; the measured ratios are far
/// stronger, and the test harness calibrates a sharper value from the
/// smallest family.
pub const DEFAULT_C0: f64 = 0.01;

/// Measured-gap floor for pendant-expander instances.
pub const PENDANT_LAMBDA2_MIN: f64 = 0.05;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("n·d must be even for a {d}-regular graph on {n} vertices")]
    ParityViolation { n: usize, d: usize },
    #[error("no admissible graph found after {attempts} attempts")]
    RetriesExhausted { attempts: u32 },
    #[error("candidate edge set is empty")]
    EmptyCandidateSet,
    #[error("regularization infeasible: {0}")]
    InfeasibleRegularization(String),
    #[error("instance too small: need at least {need}, got {got}")]
    TooSmall { need: usize, got: usize },
    #[error("path list is empty")]
    EmptySpec,
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A generated regular graph together with its measured spectral gap.
#[derive(Debug, Clone)]
pub struct ExpanderCert {
    pub graph: GraphModel,
    pub degree: usize,
    /// Measured `λ₂(L)`.
    pub lambda2: f64,
    /// The lower bound the certificate was required to meet.
    pub target: f64,
    pub attempts: u32,
}

fn mix_seed(seed: u64, salt: u64) -> u64 {
    // splitmix64 step
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Random d-regular simple edge set on `0..n` avoiding `forbidden`.
///
/// Low degrees use the configuration model with whole-pairing rejection of
/// loops and duplicates (budget 100 shuffles). The rejection rate grows
/// like `e^{(d²-1)/4}`, so from degree 6 up the layer is drawn instead as
/// a union of d random perfect matchings, which is rejection-free per
/// layer; certificates downstream are measured, not assumed, either way.
fn random_regular_edges(
    n: usize,
    d: usize,
    forbidden: &BTreeSet<EdgeId>,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<EdgeId>> {
    if d >= 6 && n.is_multiple_of(2) {
        let mut taken = forbidden.clone();
        let mut out = Vec::with_capacity(n * d / 2);
        for _ in 0..d {
            let layer = random_perfect_matching(n, &taken, rng)?;
            taken.extend(layer.iter().copied());
            out.extend(layer);
        }
        out.sort_unstable();
        return Some(out);
    }
    let mut stubs: Vec<Vertex> = Vec::with_capacity(n * d);
    for v in 0..n {
        stubs.extend(std::iter::repeat_n(v, d));
    }
    'shuffle: for _ in 0..100 {
        stubs.shuffle(rng);
        let mut edges = BTreeSet::new();
        for pair in stubs.chunks(2) {
            let (a, b) = (pair[0], pair[1]);
            if a == b {
                continue 'shuffle;
            }
            let e = EdgeId::new(a, b).expect("a != b");
            if forbidden.contains(&e) || !edges.insert(e) {
                continue 'shuffle;
            }
        }
        return Some(edges.into_iter().collect());
    }
    None
}

/// One random perfect matching on `0..n` avoiding `forbidden`: vertices in
/// shuffled order, each paired with the first admissible later vertex,
/// restarting on dead ends.
fn random_perfect_matching(
    n: usize,
    forbidden: &BTreeSet<EdgeId>,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<EdgeId>> {
    let mut verts: Vec<Vertex> = (0..n).collect();
    'restart: for _ in 0..100 {
        verts.shuffle(rng);
        let mut used = vec![false; n];
        let mut out = Vec::with_capacity(n / 2);
        for (i, &u) in verts.iter().enumerate() {
            if used[u] {
                continue;
            }
            let mut matched = false;
            for &w in &verts[i + 1..] {
                if used[w] {
                    continue;
                }
                let e = EdgeId::new(u, w).expect("u != w");
                if !forbidden.contains(&e) {
                    used[u] = true;
                    used[w] = true;
                    out.push(e);
                    matched = true;
                    break;
                }
            }
            if !matched {
                continue 'restart;
            }
        }
        return Some(out);
    }
    None
}

fn lambda2(g: &GraphModel) -> f64 {
    SpectralBundle::of_graph_laplacian(g).eigenvalues()[1]
}

/// Rejection-samples a connected d-regular graph until the measured
/// `λ₂(L)` clears `lambda2_target`, retrying with fresh derived seeds.
pub fn random_regular_expander(
    n: usize,
    d: usize,
    lambda2_target: f64,
    seed: u64,
    max_retries: u32,
) -> Result<ExpanderCert, GenError> {
    if d < 3 {
        return Err(GenError::BadParameter(format!("degree {d} < 3")));
    }
    if d >= n {
        return Err(GenError::BadParameter(format!(
            "degree {d} needs more than {n} vertices"
        )));
    }
    if !(n * d).is_multiple_of(2) {
        return Err(GenError::ParityViolation { n, d });
    }
    let near_ramanujan = d as f64 - 2.01 * ((d - 1) as f64).sqrt();
    if lambda2_target > near_ramanujan {
        return Err(GenError::BadParameter(format!(
            "lambda2 target {lambda2_target} exceeds the near-Ramanujan guarantee {near_ramanujan}"
        )));
    }
    for attempt in 0..max_retries {
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, u64::from(attempt)));
        let Some(edges) = random_regular_edges(n, d, &BTreeSet::new(), &mut rng) else {
            continue;
        };
        let pairs: Vec<_> = edges.iter().map(|e| e.endpoints()).collect();
        let graph = GraphModel::build(n, &pairs)?;
        let gap = lambda2(&graph);
        if gap >= lambda2_target {
            return Ok(ExpanderCert {
                graph,
                degree: d,
                lambda2: gap,
                target: lambda2_target,
                attempts: attempt + 1,
            });
        }
    }
    Err(GenError::RetriesExhausted {
        attempts: max_retries,
    })
}

/// Two expanders joined by a single bridge, with or without the modifying
/// edge swap applied.
#[derive(Debug, Clone)]
pub struct DumbbellInstance {
    pub base: GraphModel,
    pub modified: Option<GraphModel>,
    pub s: Vertex,
    pub t: Vertex,
    /// Side size; the s-side occupies vertices `0..half`.
    pub half: usize,
    pub removed_edges: Vec<EdgeId>,
    pub added_edges: Vec<EdgeId>,
    /// Exactly 1: the pair is joined by a bridge.
    pub predicted_base_resistance: f64,
    /// Upper bound the modified pair resistance is predicted (and
    /// verified) to satisfy.
    pub predicted_modified_bound: f64,
    /// Measured `R(s,t)` of the modified graph, when one exists.
    pub measured_modified_resistance: Option<f64>,
}

impl DumbbellInstance {
    /// Edges lying entirely inside one side of the base graph.
    pub fn side_edges(&self, s_side: bool) -> Vec<EdgeId> {
        self.base
            .edges()
            .into_iter()
            .filter(|e| {
                if s_side {
                    e.v() < self.half
                } else {
                    e.u() >= self.half
                }
            })
            .collect()
    }

    /// Side edges whose base-graph effective resistance is at most the
    /// candidate threshold (the modifiable set).
    pub fn candidate_edges(&self, s_side: bool) -> Vec<EdgeId> {
        let side: BTreeSet<EdgeId> = self.side_edges(s_side).into_iter().collect();
        all_edge_resistances(&self.base)
            .into_iter()
            .filter(|(e, r)| side.contains(e) && *r <= CANDIDATE_RESISTANCE_MAX)
            .map(|(e, _)| e)
            .collect()
    }
}

/// The degree-3 hard instance: two copies of one 3-regular expander on
/// `n/2` vertices, bridged by `(s, t)`. All degrees are 3 except `s` and
/// `t`, which are 4.
pub fn dumbbell(n: usize, seed: u64) -> Result<DumbbellInstance, GenError> {
    if n < 8 {
        return Err(GenError::TooSmall { need: 8, got: n });
    }
    if !n.is_multiple_of(4) {
        // each side needs 3·(n/2) even
        return Err(GenError::ParityViolation { n: n / 2, d: 3 });
    }
    let half = n / 2;
    let target = 3.0 - 2.01 * 2f64.sqrt();
    let cert = random_regular_expander(half, 3, target, mix_seed(seed, 1), 100)?;
    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    for e in cert.graph.edges() {
        edges.push(e.endpoints());
        edges.push((e.u() + half, e.v() + half));
    }
    edges.push((0, half));
    let base = GraphModel::build(n, &edges)?;
    Ok(DumbbellInstance {
        base,
        modified: None,
        s: 0,
        t: half,
        half,
        removed_edges: Vec::new(),
        added_edges: Vec::new(),
        predicted_base_resistance: 1.0,
        predicted_modified_bound: 0.99,
        measured_modified_resistance: None,
    })
}

/// Picks cross-orientation for two removed side edges such that no added
/// edge duplicates the bridge or an already chosen edge.
fn orient_cross(
    su: EdgeId,
    tv: EdgeId,
    bridge: EdgeId,
    taken: &BTreeSet<EdgeId>,
) -> Option<(EdgeId, EdgeId)> {
    let (u, u2) = su.endpoints();
    let (v, v2) = tv.endpoints();
    for (a, b) in [((u, v), (u2, v2)), ((u, v2), (u2, v))] {
        let ea = EdgeId::new(a.0, a.1).expect("cross edge");
        let eb = EdgeId::new(b.0, b.1).expect("cross edge");
        if ea != bridge && eb != bridge && !taken.contains(&ea) && !taken.contains(&eb) && ea != eb
        {
            return Some((ea, eb));
        }
    }
    None
}

/// Fills the modified graph of a dumbbell: one random candidate edge
/// removed on each side, two cross edges added, degrees untouched.
///
/// The modified pair resistance is measured and verified against the
/// recorded 0.99 bound.
pub fn dumbbell_modified(
    instance: &DumbbellInstance,
    seed: u64,
) -> Result<DumbbellInstance, GenError> {
    let cand_s = instance.candidate_edges(true);
    let cand_t = instance.candidate_edges(false);
    if cand_s.is_empty() || cand_t.is_empty() {
        return Err(GenError::EmptyCandidateSet);
    }
    let bridge = EdgeId::new(instance.s, instance.t).expect("bridge endpoints differ");
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, 2));
    for _ in 0..20 {
        let su = cand_s[rng.random_range(0..cand_s.len())];
        let tv = cand_t[rng.random_range(0..cand_t.len())];
        let Some((ea, eb)) = orient_cross(su, tv, bridge, &BTreeSet::new()) else {
            continue;
        };
        let removed = vec![su, tv];
        let added = vec![ea, eb];
        let pairs: Vec<(Vertex, Vertex)> = instance
            .base
            .edges()
            .into_iter()
            .filter(|e| !removed.contains(e))
            .chain(added.iter().copied())
            .map(|e| e.endpoints())
            .collect();
        let modified = GraphModel::build(instance.base.vertex_count(), &pairs)?;
        let measured = effective_resistance(&modified, instance.s, instance.t)
            .expect("valid pair")
            .expect_finite();
        if measured <= instance.predicted_modified_bound {
            return Ok(DumbbellInstance {
                modified: Some(modified),
                removed_edges: removed,
                added_edges: added,
                measured_modified_resistance: Some(measured),
                ..instance.clone()
            });
        }
    }
    Err(GenError::RetriesExhausted { attempts: 20 })
}

/// The large-degree hard instance: two copies of a `⌊3d/4⌋`-regular
/// expander on `n/2` vertices, each topped up to within-side degree `d` by
/// a random regular layer (`E_s`, `E_t`), plus the bridge. The modified
/// graph deletes `ℓ` random top-up edges per side and rewires them as `2ℓ`
/// cross edges, preserving every degree.
pub fn large_degree_pair(
    n: usize,
    d: usize,
    l: usize,
    seed: u64,
) -> Result<DumbbellInstance, GenError> {
    if !(4..=n).contains(&d) {
        return Err(GenError::BadParameter(format!("d = {d} outside [4, n]")));
    }
    if !(4..=n).contains(&l) {
        return Err(GenError::BadParameter(format!("l = {l} outside [4, n]")));
    }
    if !n.is_multiple_of(2) {
        return Err(GenError::ParityViolation { n, d });
    }
    let half = n / 2;
    let d_h = 3 * d / 4;
    let extra = d - d_h;
    if d >= half {
        return Err(GenError::BadParameter(format!(
            "d = {d} too large for side size {half}"
        )));
    }
    // the expander layer needs an even stub count; the matching top-up
    // needs an even side
    if !(half * d_h).is_multiple_of(2) || !half.is_multiple_of(2) {
        return Err(GenError::ParityViolation { n: half, d });
    }
    let side_extra_edges = half * extra / 2;
    if l > side_extra_edges {
        return Err(GenError::InfeasibleRegularization(format!(
            "need l = {l} removable edges per side but E_s has only {side_extra_edges}"
        )));
    }

    let lambda_target = (d_h as f64 - 2.01 * ((d_h - 1) as f64).sqrt()).min(d_h as f64 / 2.0);
    let cert = random_regular_expander(half, d_h, lambda_target, mix_seed(seed, 3), 100)?;
    let h_edges: Vec<EdgeId> = cert.graph.edges();
    let forbidden: BTreeSet<EdgeId> = h_edges.iter().copied().collect();

    // top each side up by `extra` random perfect matchings, every layer
    // avoiding both the expander and the layers before it
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, 4));
    let matching_layers = |rng: &mut ChaCha8Rng| -> Result<Vec<EdgeId>, GenError> {
        let mut taken = forbidden.clone();
        let mut out = Vec::with_capacity(side_extra_edges);
        for _ in 0..extra {
            let layer = random_perfect_matching(half, &taken, rng).ok_or_else(|| {
                GenError::InfeasibleRegularization(format!(
                    "could not top side up from degree {d_h} to {d}"
                ))
            })?;
            taken.extend(layer.iter().copied());
            out.extend(layer);
        }
        Ok(out)
    };
    let e_s = matching_layers(&mut rng)?;
    let e_t = matching_layers(&mut rng)?;

    let shift = |e: &EdgeId| (e.u() + half, e.v() + half);
    let mut base_pairs: Vec<(Vertex, Vertex)> = Vec::new();
    for e in &h_edges {
        base_pairs.push(e.endpoints());
        base_pairs.push(shift(e));
    }
    for e in &e_s {
        base_pairs.push(e.endpoints());
    }
    for e in &e_t {
        base_pairs.push(shift(e));
    }
    base_pairs.push((0, half));
    let base = GraphModel::build(n, &base_pairs)?;
    let bridge = EdgeId::new(0, half).expect("bridge");

    // deletion order fixed by one shuffle per side so instances with the
    // same seed nest across increasing l
    let mut order_s = e_s.clone();
    order_s.shuffle(&mut rng);
    let mut order_t: Vec<EdgeId> = e_t
        .iter()
        .map(|e| {
            let (a, b) = shift(e);
            EdgeId::new(a, b).expect("shifted edge")
        })
        .collect();
    order_t.shuffle(&mut rng);

    let removed: Vec<EdgeId> = order_s[..l].iter().chain(&order_t[..l]).copied().collect();
    let mut added = BTreeSet::new();
    for i in 0..l {
        let (ea, eb) = orient_cross(order_s[i], order_t[i], bridge, &added)
            .ok_or(GenError::RetriesExhausted { attempts: 1 })?;
        added.insert(ea);
        added.insert(eb);
    }
    let added: Vec<EdgeId> = added.into_iter().collect();
    let removed_set: BTreeSet<EdgeId> = removed.iter().copied().collect();
    let pairs: Vec<(Vertex, Vertex)> = base
        .edges()
        .into_iter()
        .filter(|e| !removed_set.contains(e))
        .chain(added.iter().copied())
        .map(|e| e.endpoints())
        .collect();
    let modified = GraphModel::build(n, &pairs)?;
    let measured = effective_resistance(&modified, 0, half)
        .expect("valid pair")
        .expect_finite();

    Ok(DumbbellInstance {
        base,
        modified: Some(modified),
        s: 0,
        t: half,
        half,
        removed_edges: removed,
        added_edges: added,
        predicted_base_resistance: 1.0,
        predicted_modified_bound: 1.0 / (1.0 + DEFAULT_C0 * l.min(d) as f64),
        measured_modified_resistance: Some(measured),
    })
}

/// Cycle on `n ≥ 3` vertices.
pub fn ring(n: usize) -> Result<GraphModel, GenError> {
    if n < 3 {
        return Err(GenError::TooSmall { need: 3, got: n });
    }
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Ok(GraphModel::build(n, &edges)?)
}

/// Path on `n ≥ 2` vertices.
pub fn path(n: usize) -> Result<GraphModel, GenError> {
    if n < 2 {
        return Err(GenError::TooSmall { need: 2, got: n });
    }
    let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
    Ok(GraphModel::build(n, &edges)?)
}

/// A 3-regular expander on `n - 1` vertices with one pendant vertex
/// attached, and the pendant edge. The pendant edge is a bridge (its
/// resistance is exactly 1), yet the graph's measured `λ₂(L)` stays above
/// a fixed constant; removing the edge collapses `λ₂` to zero.
pub fn pendant_expander(n: usize, seed: u64) -> Result<(GraphModel, EdgeId), GenError> {
    if n < 5 {
        return Err(GenError::TooSmall { need: 5, got: n });
    }
    let core = n - 1;
    if !(core * 3).is_multiple_of(2) {
        return Err(GenError::ParityViolation { n: core, d: 3 });
    }
    let target = 3.0 - 2.01 * 2f64.sqrt();
    for attempt in 0..10u32 {
        let cert =
            random_regular_expander(core, 3, target, mix_seed(seed, 5 + u64::from(attempt)), 100)?;
        let mut edges: Vec<_> = cert.graph.edges().iter().map(|e| e.endpoints()).collect();
        edges.push((n - 2, n - 1));
        let g = GraphModel::build(n, &edges)?;
        if lambda2(&g) > PENDANT_LAMBDA2_MIN {
            let pendant = EdgeId::new(n - 2, n - 1).expect("pendant");
            return Ok((g, pendant));
        }
    }
    Err(GenError::RetriesExhausted { attempts: 10 })
}

/// One path out of `s` in a parallel-paths instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathSpec {
    /// Internally disjoint `s`–`t` path of this many edges.
    Connected(u64),
    /// A path from `s` that dead-ends after this many edges; it plays the
    /// role of a path of infinite length.
    Dangling(u64),
}

/// A parallel-paths instance with its exact closed-form answers.
#[derive(Debug, Clone)]
pub struct ParallelPaths {
    pub graph: GraphModel,
    pub s: Vertex,
    pub t: Vertex,
    /// `Σ 1/ℓ` over connected paths, accumulated in the estimator's
    /// round-0 walk order so the exact-regime comparison is bit-exact.
    pub conductance: f64,
    pub resistance: Resistance,
}

/// Builds `s` and `t` joined by internally disjoint paths of the given
/// lengths; `Dangling` entries dead-end, and `t_stubs` hang dead-end paths
/// off `t`. All internal degrees are 2.
pub fn parallel_paths(specs: &[PathSpec], t_stubs: &[u64]) -> Result<ParallelPaths, GenError> {
    if specs.is_empty() {
        return Err(GenError::EmptySpec);
    }
    for spec in specs {
        let (PathSpec::Connected(l) | PathSpec::Dangling(l)) = spec;
        if *l == 0 {
            return Err(GenError::BadParameter("zero-length path".into()));
        }
    }
    let (s, t) = (0usize, 1usize);
    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    let mut next = 2usize;
    let mut chain = |from: Vertex, len: u64, to: Option<Vertex>, next: &mut usize| {
        let mut cur = from;
        for step in 0..len {
            let last = step + 1 == len;
            let dest = if last {
                match to {
                    Some(v) => v,
                    None => {
                        let v = *next;
                        *next += 1;
                        v
                    }
                }
            } else {
                let v = *next;
                *next += 1;
                v
            };
            edges.push((cur, dest));
            cur = dest;
        }
    };
    for spec in specs {
        match *spec {
            PathSpec::Connected(l) => chain(s, l, Some(t), &mut next),
            PathSpec::Dangling(l) => chain(s, l, None, &mut next),
        }
    }
    for &l in t_stubs {
        if l == 0 {
            return Err(GenError::BadParameter("zero-length stub".into()));
        }
        chain(t, l, None, &mut next);
    }
    let graph = GraphModel::build(next, &edges)?;
    let conductance = walk_order_conductance(&graph, s, t);
    let resistance = if conductance > 0.0 {
        Resistance::Finite(1.0 / conductance)
    } else {
        Resistance::Infinite
    };
    Ok(ParallelPaths {
        graph,
        s,
        t,
        conductance,
        resistance,
    })
}

/// `Σ 1/ℓ` over the s–t paths, walked in sorted-adjacency order from `s` —
/// the same fold order the estimator's round 0 uses.
fn walk_order_conductance(g: &GraphModel, s: Vertex, t: Vertex) -> f64 {
    let mut rho = 0.0;
    for &first in g.neighbors(s) {
        let mut prev = s;
        let mut cur = first;
        let mut len = 1u64;
        loop {
            if cur == t {
                rho += 1.0 / len as f64;
                break;
            }
            if cur == s {
                break;
            }
            let nb = g.neighbors(cur);
            if nb.len() != 2 {
                break;
            }
            let next = if nb[0] == prev { nb[1] } else { nb[0] };
            prev = cur;
            cur = next;
            len += 1;
        }
    }
    rho
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{total_effective_resistance, TotalMethod};

    #[test]
    fn ring_and_path_shapes() {
        let r = ring(6).unwrap();
        assert_eq!(r.edge_count(), 6);
        assert!(r.degrees().iter().all(|&d| d == 2));
        let p = path(6).unwrap();
        assert_eq!(p.edge_count(), 5);

        assert!(matches!(ring(2), Err(GenError::TooSmall { .. })));
        assert!(matches!(path(1), Err(GenError::TooSmall { .. })));
    }

    #[test]
    fn ring_and_path_closed_forms() {
        let p = total_effective_resistance(&path(3).unwrap(), TotalMethod::Spectral)
            .unwrap()
            .expect_finite();
        assert!((p - 4.0).abs() < 1e-9);
        let r = total_effective_resistance(&ring(3).unwrap(), TotalMethod::Spectral)
            .unwrap()
            .expect_finite();
        assert!((r - 2.0).abs() < 1e-9);
    }

    #[test]
    fn ring_minus_edge_is_a_path() {
        let r = ring(7).unwrap();
        let pairs: Vec<_> = r
            .edges()
            .into_iter()
            .filter(|e| e.endpoints() != (0, 6))
            .map(|e| e.endpoints())
            .collect();
        let broken = GraphModel::build(7, &pairs).unwrap();
        // isomorphic to path(7): same degree multiset and total resistance
        let mut deg = broken.degrees();
        deg.sort_unstable();
        assert_eq!(deg, vec![1, 1, 2, 2, 2, 2, 2]);
        let a = total_effective_resistance(&broken, TotalMethod::Spectral)
            .unwrap()
            .expect_finite();
        let b = total_effective_resistance(&path(7).unwrap(), TotalMethod::Spectral)
            .unwrap()
            .expect_finite();
        assert!((a - b).abs() < 1e-8);
    }

    #[test]
    fn expander_parity_and_target_validation() {
        assert!(matches!(
            random_regular_expander(7, 3, 0.1, 0, 10),
            Err(GenError::ParityViolation { n: 7, d: 3 })
        ));
        assert!(matches!(
            random_regular_expander(16, 3, 1.0, 0, 10),
            Err(GenError::BadParameter(_))
        ));
    }

    #[test]
    fn expander_certificates() {
        let target3 = 3.0 - 2.01 * 2f64.sqrt();
        let cert = random_regular_expander(16, 3, target3, 1, 100).unwrap();
        assert!(cert.lambda2 >= target3);
        assert!(cert.graph.degrees().iter().all(|&d| d == 3));
        assert!(cert.graph.is_connected());

        let target4 = 4.0 - 2.01 * 3f64.sqrt();
        let cert = random_regular_expander(64, 4, target4, 2, 100).unwrap();
        assert!(cert.lambda2 >= target4);
    }

    #[test]
    fn dumbbell_base_properties() {
        let inst = dumbbell(32, 7).unwrap();
        let g = &inst.base;
        assert_eq!(g.vertex_count(), 32);
        // degrees 3 everywhere except the terminals at 4
        for v in 0..32 {
            let want = if v == inst.s || v == inst.t { 4 } else { 3 };
            assert_eq!(g.degree(v).unwrap(), want);
        }
        let r = effective_resistance(g, inst.s, inst.t)
            .unwrap()
            .expect_finite();
        assert!((r - 1.0).abs() < 1e-9);

        // the bridge disconnects s from t
        let pairs: Vec<_> = g
            .edges()
            .into_iter()
            .filter(|e| e.endpoints() != (inst.s, inst.t))
            .map(|e| e.endpoints())
            .collect();
        let cut = GraphModel::build(32, &pairs).unwrap();
        assert!(!cut.same_component(inst.s, inst.t));
    }

    #[test]
    fn dumbbell_candidate_sets_are_large() {
        let inst = dumbbell(64, 3).unwrap();
        let n = inst.base.vertex_count();
        assert!(inst.candidate_edges(true).len() >= n / 12);
        assert!(inst.candidate_edges(false).len() >= n / 12);
    }

    #[test]
    fn dumbbell_modified_predictions() {
        let inst = dumbbell_modified(&dumbbell(64, 11).unwrap(), 5).unwrap();
        let modified = inst.modified.as_ref().unwrap();
        assert_eq!(inst.base.degrees(), modified.degrees());
        let r = inst.measured_modified_resistance.unwrap();
        assert!(r <= 0.99);
        assert!(r < 1.0);

        // exactly four edges differ
        let base: BTreeSet<_> = inst.base.edges().into_iter().collect();
        let modi: BTreeSet<_> = modified.edges().into_iter().collect();
        assert_eq!(base.symmetric_difference(&modi).count(), 4);
        assert_eq!(inst.removed_edges.len(), 2);
        assert_eq!(inst.added_edges.len(), 2);
    }

    #[test]
    fn dumbbell_parity_rejected() {
        assert!(matches!(
            dumbbell(30, 0),
            Err(GenError::ParityViolation { .. })
        ));
    }

    #[test]
    fn large_degree_base_and_modified() {
        let inst = large_degree_pair(64, 8, 4, 13).unwrap();
        let g = &inst.base;
        for v in 0..64 {
            let want = if v == inst.s || v == inst.t { 9 } else { 8 };
            assert_eq!(g.degree(v).unwrap(), want, "vertex {v}");
        }
        let r = effective_resistance(g, inst.s, inst.t)
            .unwrap()
            .expect_finite();
        assert!((r - 1.0).abs() < 1e-9);

        let modified = inst.modified.as_ref().unwrap();
        assert_eq!(g.degrees(), modified.degrees());
        let rm = inst.measured_modified_resistance.unwrap();
        assert!(rm < inst.predicted_modified_bound, "{rm}");

        // 2l removals, 2l additions
        let base: BTreeSet<_> = g.edges().into_iter().collect();
        let modi: BTreeSet<_> = modified.edges().into_iter().collect();
        assert_eq!(base.symmetric_difference(&modi).count(), 16);
    }

    #[test]
    fn large_degree_shrinks_with_l() {
        let r4 = large_degree_pair(128, 8, 4, 2)
            .unwrap()
            .measured_modified_resistance
            .unwrap();
        let r8 = large_degree_pair(128, 8, 8, 2)
            .unwrap()
            .measured_modified_resistance
            .unwrap();
        assert!(r8 < r4, "r8 = {r8}, r4 = {r4}");
    }

    #[test]
    fn large_degree_validation() {
        assert!(matches!(
            large_degree_pair(64, 3, 4, 0),
            Err(GenError::BadParameter(_))
        ));
        assert!(matches!(
            large_degree_pair(64, 8, 3, 0),
            Err(GenError::BadParameter(_))
        ));
        // l bigger than the top-up layer on one side
        assert!(matches!(
            large_degree_pair(64, 8, 40, 0),
            Err(GenError::InfeasibleRegularization(_))
        ));
    }

    #[test]
    fn pendant_expander_properties() {
        let (g, pendant) = pendant_expander(33, 4).unwrap();
        assert_eq!(g.vertex_count(), 33);
        assert_eq!(pendant.endpoints(), (31, 32));
        let r = effective_resistance(&g, 31, 32).unwrap().expect_finite();
        assert!((r - 1.0).abs() < 1e-9);
        assert!(lambda2(&g) > PENDANT_LAMBDA2_MIN);

        // removing the pendant edge kills the spectral gap
        let pairs: Vec<_> = g
            .edges()
            .into_iter()
            .filter(|e| *e != pendant)
            .map(|e| e.endpoints())
            .collect();
        let cut = GraphModel::build(33, &pairs).unwrap();
        assert!(lambda2(&cut).abs() < 1e-9);
    }

    #[test]
    fn parallel_paths_single_edge() {
        let pp = parallel_paths(&[PathSpec::Connected(1)], &[]).unwrap();
        assert_eq!(pp.graph.vertex_count(), 2);
        assert_eq!(pp.resistance, Resistance::Finite(1.0));
    }

    #[test]
    fn parallel_paths_series_parallel() {
        let pp = parallel_paths(
            &[
                PathSpec::Connected(1),
                PathSpec::Connected(2),
                PathSpec::Connected(4),
            ],
            &[],
        )
        .unwrap();
        assert!((pp.conductance - 1.75).abs() < 1e-15);
        assert!((pp.resistance.expect_finite() - 4.0 / 7.0).abs() < 1e-15);
        // closed form agrees with the exact spectral route
        let exact = effective_resistance(&pp.graph, pp.s, pp.t)
            .unwrap()
            .expect_finite();
        assert!((exact - 4.0 / 7.0).abs() < 1e-10);
    }

    #[test]
    fn parallel_paths_dangling_contributes_nothing() {
        let pp = parallel_paths(&[PathSpec::Connected(2), PathSpec::Dangling(5)], &[]).unwrap();
        assert_eq!(pp.resistance, Resistance::Finite(2.0));
        // internal degrees stay at most 2
        for v in 2..pp.graph.vertex_count() {
            assert!(pp.graph.degree(v).unwrap() <= 2);
        }
    }

    #[test]
    fn parallel_paths_all_dangling_is_infinite() {
        let pp = parallel_paths(&[PathSpec::Dangling(3)], &[]).unwrap();
        assert!(pp.resistance.is_infinite());
        assert_eq!(pp.conductance, 0.0);
    }

    #[test]
    fn parallel_paths_t_stubs() {
        let pp = parallel_paths(&[PathSpec::Connected(3)], &[2, 2]).unwrap();
        assert_eq!(pp.resistance, Resistance::Finite(3.0));
        assert_eq!(pp.graph.degree(1).unwrap(), 3);
    }

    #[test]
    fn parallel_paths_empty_rejected() {
        assert!(matches!(parallel_paths(&[], &[]), Err(GenError::EmptySpec)));
    }
}

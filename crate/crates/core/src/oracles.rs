//! Independent randomized oracles for two classical effective-resistance
//! identities: `2m · R(u,v)` equals the commute time of a simple random
//! walk, and `R(u,v)` equals the probability that `(u,v)` lies in a
//! uniform random spanning tree.
//!
//! Trees are sampled with Wilson's loop-erased-walk algorithm, which is
//! exactly uniform with no burn-in to tune. Trials derive per-trial seeds
//! from the master seed, so results are reproducible regardless of how the
//! trials are scheduled.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{EdgeId, GraphModel, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph is not connected")]
    Disconnected,
    #[error("the two walk vertices are equal ({0})")]
    SameVertex(Vertex),
    #[error("({0}, {1}) is not an edge of the graph")]
    NotAnEdge(usize, usize),
    #[error("need at least one trial")]
    NoTrials,
}

/// Commute-time simulation summary.
#[derive(Debug, Clone, Copy)]
pub struct WalkStats {
    pub trials: u64,
    /// Mean round-trip steps `u → v → u`.
    pub mean_commute: f64,
    /// Standard error of the mean.
    pub std_error: f64,
}

/// Spanning-tree inclusion counts for one tracked edge.
#[derive(Debug, Clone, Copy)]
pub struct TreeStats {
    pub trials: u64,
    pub inclusion_count: u64,
}

impl TreeStats {
    pub fn frequency(&self) -> f64 {
        self.inclusion_count as f64 / self.trials as f64
    }

    /// Binomial standard error at the observed frequency.
    pub fn std_error(&self) -> f64 {
        let p = self.frequency();
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }
}

fn mix_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn random_neighbor(g: &GraphModel, v: Vertex, rng: &mut ChaCha8Rng) -> Vertex {
    let nb = g.neighbors(v);
    nb[rng.random_range(0..nb.len())]
}

/// Simulates round trips `u → v → u` of the simple random walk and
/// averages the total step count, which estimates the commute time
/// `κ(u, v) = 2m · R(u, v)`.
pub fn commute_time_mc(
    g: &GraphModel,
    u: Vertex,
    v: Vertex,
    trials: u64,
    seed: u64,
) -> Result<WalkStats, OracleError> {
    if u == v {
        return Err(OracleError::SameVertex(u));
    }
    if trials == 0 {
        return Err(OracleError::NoTrials);
    }
    if !g.same_component(u, v) || g.neighbors(u).is_empty() {
        return Err(OracleError::Disconnected);
    }
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, trial));
        let mut steps = 0u64;
        let mut cur = u;
        // out to v
        while cur != v {
            cur = random_neighbor(g, cur, &mut rng);
            steps += 1;
        }
        // back to u
        while cur != u {
            cur = random_neighbor(g, cur, &mut rng);
            steps += 1;
        }
        let s = steps as f64;
        sum += s;
        sum_sq += s * s;
    }
    let mean = sum / trials as f64;
    let variance = if trials > 1 {
        ((sum_sq - sum * sum / trials as f64) / (trials as f64 - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(WalkStats {
        trials,
        mean_commute: mean,
        std_error: (variance / trials as f64).sqrt(),
    })
}

/// Samples one uniform spanning tree by Wilson's algorithm: loop-erased
/// random walks from each vertex into the growing tree.
pub fn wilson_spanning_tree(g: &GraphModel, seed: u64) -> Result<Vec<EdgeId>, OracleError> {
    if !g.is_connected() {
        return Err(OracleError::Disconnected);
    }
    let n = g.vertex_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut in_tree = vec![false; n];
    let mut next: Vec<Option<Vertex>> = vec![None; n];
    in_tree[0] = true;
    for start in 1..n {
        // random walk until the tree is hit, remembering only the last
        // exit from each vertex (this is the loop erasure)
        let mut u = start;
        while !in_tree[u] {
            let w = random_neighbor(g, u, &mut rng);
            next[u] = Some(w);
            u = w;
        }
        // retrace the erased path and attach it
        let mut u = start;
        while !in_tree[u] {
            in_tree[u] = true;
            u = next[u].expect("walk recorded an exit");
        }
    }
    let mut edges: Vec<EdgeId> = (0..n)
        .filter_map(|u| next[u].map(|w| EdgeId::new(u, w).expect("walk never self-loops")))
        .collect();
    edges.sort_unstable();
    debug_assert_eq!(edges.len(), n - 1);
    Ok(edges)
}

/// Frequency of edge `e` across independently sampled uniform spanning
/// trees; converges to `R(e)`.
pub fn edge_inclusion_frequency(
    g: &GraphModel,
    e: EdgeId,
    trials: u64,
    seed: u64,
) -> Result<TreeStats, OracleError> {
    if trials == 0 {
        return Err(OracleError::NoTrials);
    }
    if !g.has_edge(e.u(), e.v()) {
        return Err(OracleError::NotAnEdge(e.u(), e.v()));
    }
    if !g.is_connected() {
        return Err(OracleError::Disconnected);
    }
    let mut inclusion_count = 0;
    for trial in 0..trials {
        let tree = wilson_spanning_tree(g, mix_seed(seed, trial))?;
        if tree.binary_search(&e).is_ok() {
            inclusion_count += 1;
        }
    }
    Ok(TreeStats {
        trials,
        inclusion_count,
    })
}

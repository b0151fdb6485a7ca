//! Sublinear local estimation of conductance and effective resistance for
//! graphs of degree at most 2 except the query pair.
//!
//! Such a graph is a union of internally disjoint paths out of `s` (some
//! reaching `t`, some dead-ending, some looping back), so the conductance
//! is `ρ = Σ 1/ℓ_i` over the finite path lengths. The estimator walks each
//! path through the query oracle with a doubling step budget and a halving
//! sampling probability per round: round `k` samples each path with
//! probability `2^{-k}`, walks at most `2^{k+1}·a` steps, and credits
//! `1/(p_k ℓ)` for a path resolved at a length inside the round's window.
//! Window `k = 0` accepts every length up to `2a` (these are found exactly,
//! with probability one); window `k ≥ 1` accepts lengths in
//! `(2^k·a, 2^{k+1}·a]`. The windows partition the possible lengths, so
//! each path is credited by exactly one round and the estimate is unbiased.
//!
//! With the default schedule `a = ⌈20·log₂n·log₂log₂n / (εδ)⌉` and
//! `δ = ε / min{d(s), d(t)}`, inverting the conductance estimate yields
//! `R̃ = (1 ± 2ε)·R ± 2δ` with probability 0.99 for adjacent pairs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{GraphError, QueryOracle, Vertex};
use crate::spectral::Resistance;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EstimateError {
    #[error("epsilon must be in (0, 0.1], got {0}")]
    BadEpsilon(f64),
    #[error("delta must be positive, got {0}")]
    BadDelta(f64),
    #[error("walk budget must be at least 1")]
    BadBudget,
    #[error("the two terminals are equal ({0})")]
    SameVertex(Vertex),
    #[error("internal vertex {vertex} has degree {degree}; the degree-2 model is violated")]
    DegreeViolation { vertex: Vertex, degree: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Parameters of one estimator run.
#[derive(Debug, Clone)]
pub struct EstimatorConfig {
    /// Relative error target, in (0, 0.1].
    pub epsilon: f64,
    /// Additive error target; defaults to `ε / min{d(s), d(t)}`.
    pub delta: Option<f64>,
    /// Replaces the schedule constant `a` (testing hook).
    pub a_override: Option<u64>,
    /// Replaces the round count `⌈log₂ n⌉` (testing hook).
    pub max_rounds_override: Option<u32>,
    /// Seed for the per-run sampling randomness.
    pub seed: u64,
}

impl EstimatorConfig {
    pub fn new(epsilon: f64, seed: u64) -> Result<Self, EstimateError> {
        if !(epsilon > 0.0 && epsilon <= 0.1) {
            return Err(EstimateError::BadEpsilon(epsilon));
        }
        Ok(EstimatorConfig {
            epsilon,
            delta: None,
            a_override: None,
            max_rounds_override: None,
            seed,
        })
    }

    pub fn with_delta(mut self, delta: f64) -> Result<Self, EstimateError> {
        if delta <= 0.0 {
            return Err(EstimateError::BadDelta(delta));
        }
        self.delta = Some(delta);
        Ok(self)
    }

    pub fn with_a_override(mut self, a: u64) -> Self {
        self.a_override = Some(a.max(1));
        self
    }

    pub fn with_max_rounds(mut self, rounds: u32) -> Self {
        self.max_rounds_override = Some(rounds);
        self
    }
}

/// How a single path probe ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeOutcome {
    /// Reached `t`; the path length equals the steps used.
    ReachedT { length: u64 },
    /// Walked around a cycle back to `s`.
    ReturnedToS,
    /// Hit a degree-1 vertex other than the terminals.
    DeadEnd,
    /// The step budget ran out before the path resolved.
    BudgetExhausted,
}

/// Result of walking one path out of `s`.
#[derive(Debug, Clone, Copy)]
pub struct PathProbe {
    pub start_neighbor: Vertex,
    pub outcome: ProbeOutcome,
    /// Vertex advances made, each consuming at least one neighbor query.
    pub steps_used: u64,
}

/// Per-round trace of the sampling schedule.
#[derive(Debug, Clone, Copy)]
pub struct RoundTrace {
    pub round: u32,
    /// Sampling probability `2^{-k}`.
    pub p: f64,
    /// Paths probed this round.
    pub probes: u64,
    /// Probes credited into the estimate.
    pub accepted: u64,
    /// Walk steps consumed this round.
    pub steps: u64,
}

/// Estimator output.
#[derive(Debug, Clone)]
pub struct EstimateResult {
    /// Conductance estimate ρ̃.
    pub conductance: f64,
    /// `1/ρ̃`, infinite when ρ̃ = 0.
    pub resistance: Resistance,
    /// Oracle counter delta across the run.
    pub query_count: u64,
    pub rounds: Vec<RoundTrace>,
    /// Schedule constant actually used.
    pub schedule_a: u64,
    /// Additive target actually used.
    pub delta_used: f64,
    /// The walks started from `t` because `d(s) > d(t)`.
    pub swapped: bool,
    /// No round-0 probe resolved at length 1, i.e. `(s, t)` is not an
    /// edge; the resistance guarantee does not apply, only the additive
    /// conductance guarantee.
    pub non_adjacent: bool,
}

/// Deterministically follows one path out of `s`, starting at `first`,
/// until it resolves or the step budget runs out.
///
/// At a degree-2 internal vertex the continuation is the neighbor that is
/// not the predecessor. Each advance costs one degree query at the new
/// internal vertex plus one neighbor query (two when the predecessor sorts
/// first in the adjacency list).
pub fn walk_path(
    oracle: &mut QueryOracle<'_>,
    s: Vertex,
    t: Vertex,
    first: Vertex,
    budget: u64,
) -> Result<PathProbe, EstimateError> {
    if budget == 0 {
        return Err(EstimateError::BadBudget);
    }
    let mut prev = s;
    let mut cur = first;
    let mut steps: u64 = 1;
    loop {
        if cur == t {
            return Ok(PathProbe {
                start_neighbor: first,
                outcome: ProbeOutcome::ReachedT { length: steps },
                steps_used: steps,
            });
        }
        if cur == s {
            return Ok(PathProbe {
                start_neighbor: first,
                outcome: ProbeOutcome::ReturnedToS,
                steps_used: steps,
            });
        }
        let degree = oracle.degree(cur)?;
        if degree > 2 {
            return Err(EstimateError::DegreeViolation {
                vertex: cur,
                degree,
            });
        }
        if degree <= 1 {
            return Ok(PathProbe {
                start_neighbor: first,
                outcome: ProbeOutcome::DeadEnd,
                steps_used: steps,
            });
        }
        if steps >= budget {
            return Ok(PathProbe {
                start_neighbor: first,
                outcome: ProbeOutcome::BudgetExhausted,
                steps_used: steps,
            });
        }
        let n0 = oracle.neighbor(cur, 0)?;
        let next = if n0 == prev {
            oracle.neighbor(cur, 1)?
        } else {
            n0
        };
        prev = cur;
        cur = next;
        steps += 1;
    }
}

/// Schedule constant `a = ⌈20·log₂n·log₂log₂n / (εδ)⌉`, with both
/// logarithms clamped below at 1 so small `n` stays defined.
pub fn schedule_constant(n: usize, epsilon: f64, delta: f64) -> u64 {
    let log_n = (n.max(2) as f64).log2().max(1.0);
    let log_log_n = log_n.log2().max(1.0);
    (20.0 * log_n * log_log_n / (epsilon * delta)).ceil() as u64
}

/// Rounds beyond round 0: `⌈log₂ n⌉`.
pub fn round_count(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

/// Analytic ceiling for the mean query count of a default-schedule run:
/// `min{d(s), d(t)} · a · (⌈log₂ n⌉ + 1) · 2`.
pub fn expected_query_budget(n: usize, d_min: usize, cfg: &EstimatorConfig) -> u64 {
    let delta = cfg.delta.unwrap_or(cfg.epsilon / (d_min.max(1) as f64));
    let a = cfg
        .a_override
        .unwrap_or_else(|| schedule_constant(n, cfg.epsilon, delta));
    let rounds = u64::from(cfg.max_rounds_override.unwrap_or_else(|| round_count(n))) + 1;
    d_min as u64 * a * rounds * 2
}

fn in_window(round: u32, a: u64, length: u64) -> bool {
    if round == 0 {
        length <= 2 * a
    } else {
        let lo = (a as u128) << round;
        let hi = (a as u128) << (round + 1);
        let l = length as u128;
        l > lo && l <= hi
    }
}

/// Additive-error conductance estimation through the query oracle.
///
/// Walks always start from the lower-degree terminal. The estimate is
/// unbiased for `Σ 1/ℓ_i` over the finite path lengths; disconnected,
/// dead-end, and cycle probes contribute zero.
pub fn estimate_conductance(
    oracle: &mut QueryOracle<'_>,
    s: Vertex,
    t: Vertex,
    cfg: &EstimatorConfig,
) -> Result<EstimateResult, EstimateError> {
    if s == t {
        return Err(EstimateError::SameVertex(s));
    }
    let queries_before = oracle.total_queries();
    let n = oracle.vertex_count();
    let d_s = oracle.degree(s)?;
    let d_t = oracle.degree(t)?;
    let swapped = d_s > d_t;
    let (start, target, d_start) = if swapped { (t, s, d_t) } else { (s, t, d_s) };
    let d_min = d_s.min(d_t).max(1);

    let delta = cfg.delta.unwrap_or(cfg.epsilon / d_min as f64);
    if delta <= 0.0 {
        return Err(EstimateError::BadDelta(delta));
    }
    let a = cfg
        .a_override
        .unwrap_or_else(|| schedule_constant(n, cfg.epsilon, delta))
        .max(1);
    let last_round = cfg.max_rounds_override.unwrap_or_else(|| round_count(n));
    // path lengths are below n, so budgets never need to exceed n - 1
    let step_cap = (n.saturating_sub(1)).max(1) as u128;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut conductance = 0.0f64;
    let mut rounds = Vec::with_capacity(last_round as usize + 1);
    let mut adjacent = false;

    for k in 0..=last_round {
        let p = 0.5f64.powi(k as i32);
        let budget = ((a as u128) << (k + 1)).min(step_cap).max(1) as u64;
        let mut probes = 0u64;
        let mut accepted = 0u64;
        let mut steps = 0u64;
        for i in 0..d_start {
            let sampled = k == 0 || rng.random_bool(p);
            if !sampled {
                continue;
            }
            probes += 1;
            let first = oracle.neighbor(start, i)?;
            let probe = walk_path(oracle, start, target, first, budget)?;
            steps += probe.steps_used;
            if let ProbeOutcome::ReachedT { length } = probe.outcome {
                if k == 0 && length == 1 {
                    adjacent = true;
                }
                if in_window(k, a, length) {
                    conductance += 1.0 / (p * length as f64);
                    accepted += 1;
                }
            }
        }
        rounds.push(RoundTrace {
            round: k,
            p,
            probes,
            accepted,
            steps,
        });
    }

    let resistance = if conductance > 0.0 {
        Resistance::Finite(1.0 / conductance)
    } else {
        Resistance::Infinite
    };
    Ok(EstimateResult {
        conductance,
        resistance,
        query_count: oracle.total_queries() - queries_before,
        rounds,
        schedule_a: a,
        delta_used: delta,
        swapped,
        non_adjacent: !adjacent,
    })
}

/// Conductance estimation inverted into a resistance estimate.
///
/// For an adjacent pair (`ρ ≥ 1`) the default schedule yields
/// `R̃ = (1 ± 2ε)·R ± 2δ` with probability 0.99. When the pair is not
/// adjacent the estimate is still returned with `non_adjacent` set; only
/// the additive conductance guarantee applies there.
pub fn estimate_resistance(
    oracle: &mut QueryOracle<'_>,
    s: Vertex,
    t: Vertex,
    cfg: &EstimatorConfig,
) -> Result<EstimateResult, EstimateError> {
    estimate_conductance(oracle, s, t, cfg)
}

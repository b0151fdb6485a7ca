//! Effective resistances on undirected graphs.
//!
//! The crate has three layers:
//!
//! - exact ground truth: dense spectral computation of effective
//!   resistances, total effective resistance by two independent routes,
//!   leverage scores, harmonic potentials ([`spectral`]), and eigenvalue
//!   bounds under row/edge removal ([`perturb`]);
//! - sublinear estimation: a local conductance estimator for graphs of
//!   degree at most 2 except the query pair, driven entirely through a
//!   counted query oracle ([`estimator`]);
//! - validation machinery: randomized oracles for the commute-time and
//!   spanning-tree identities ([`oracles`]) and generators for the hard
//!   instance families the estimator and bounds are stress-tested on
//!   ([`generators`]).

pub mod estimator;
pub mod generators;
pub mod graph;
pub mod oracles;
pub mod perturb;
pub mod spectral;

pub use graph::{EdgeId, GraphError, GraphModel, QueryOracle, Vertex};
pub use spectral::{Resistance, SpectralBundle, SpectralError};

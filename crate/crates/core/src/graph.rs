//! Graph representation, the three-query access model, and matrix extraction.
//!
//! [`GraphModel`] is an immutable simple undirected graph over dense vertex
//! ids `0..n` with sorted adjacency lists, so `i`-th-neighbor lookups are
//! deterministic. [`QueryOracle`] wraps a graph behind the three operations
//! of the adjacency-list access model (degree query, `i`-th neighbor query,
//! uniform vertex sample) and counts every call, which is what the local
//! estimator's query accounting is measured against.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Dense vertex id in `0..n`.
pub type Vertex = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph of {n} vertices")]
    OutOfRange { vertex: Vertex, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(Vertex, Vertex),
    #[error("neighbor index {index} out of range: vertex {vertex} has degree {degree}")]
    IndexBeyondDegree {
        vertex: Vertex,
        index: usize,
        degree: usize,
    },
    #[error("vertex {0} is isolated")]
    IsolatedVertex(Vertex),
}

/// Undirected edge with endpoints normalized to `u < v`.
///
/// The derived `Ord` is lexicographic on `(u, v)`, which fixes the row order
/// of incidence matrices and the line order of the edge-list file format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId {
    u: Vertex,
    v: Vertex,
}

impl EdgeId {
    pub fn new(a: Vertex, b: Vertex) -> Result<Self, GraphError> {
        if a == b {
            return Err(GraphError::SelfLoop(a));
        }
        Ok(if a < b {
            EdgeId { u: a, v: b }
        } else {
            EdgeId { u: b, v: a }
        })
    }

    /// Smaller endpoint.
    pub fn u(&self) -> Vertex {
        self.u
    }

    /// Larger endpoint.
    pub fn v(&self) -> Vertex {
        self.v
    }

    pub fn endpoints(&self) -> (Vertex, Vertex) {
        (self.u, self.v)
    }
}

impl std::fmt::Display for EdgeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}-{}", self.u, self.v)
    }
}

/// Simple undirected graph with unit edge weights.
///
/// Immutable after construction; safe to share across threads for
/// concurrent reads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphModel {
    n: usize,
    adjacency: Vec<Vec<Vertex>>,
    m: usize,
}

impl GraphModel {
    /// Builds a graph from an edge list over vertices `0..n`.
    ///
    /// Rejects out-of-range endpoints, self-loops, and duplicate edges
    /// (in either orientation). Adjacency lists come out sorted ascending.
    pub fn build(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a >= n {
                return Err(GraphError::OutOfRange { vertex: a, n });
            }
            if b >= n {
                return Err(GraphError::OutOfRange { vertex: b, n });
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            if adjacency[a].contains(&b) {
                let e = EdgeId::new(a, b)?;
                return Err(GraphError::DuplicateEdge(e.u, e.v));
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(GraphModel {
            n,
            adjacency,
            m: edges.len(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn degree(&self, v: Vertex) -> Result<usize, GraphError> {
        self.check_vertex(v)?;
        Ok(self.adjacency[v].len())
    }

    /// Sorted neighbor list of `v`. Panics on out-of-range `v`; use
    /// [`GraphModel::degree`] for checked access.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v]
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        if a >= self.n || b >= self.n {
            return false;
        }
        self.adjacency[a].binary_search(&b).is_ok()
    }

    /// All edges in sorted [`EdgeId`] order.
    pub fn edges(&self) -> Vec<EdgeId> {
        let mut out = Vec::with_capacity(self.m);
        for u in 0..self.n {
            for &v in &self.adjacency[u] {
                if u < v {
                    out.push(EdgeId { u, v });
                }
            }
        }
        out
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    /// Vertices reachable from `start`, as a boolean mask.
    pub fn component_mask(&self, start: Vertex) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        if start >= self.n {
            return seen;
        }
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(u) = stack.pop() {
            for &v in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        self.component_mask(0).iter().all(|&b| b)
    }

    pub fn same_component(&self, a: Vertex, b: Vertex) -> bool {
        a < self.n && b < self.n && self.component_mask(a)[b]
    }

    /// Laplacian `L = D - A` as a dense symmetric matrix.
    pub fn laplacian(&self) -> DMatrix<f64> {
        let mut l = DMatrix::zeros(self.n, self.n);
        for u in 0..self.n {
            l[(u, u)] = self.adjacency[u].len() as f64;
            for &v in &self.adjacency[u] {
                l[(u, v)] = -1.0;
            }
        }
        l
    }

    /// Normalized Laplacian `D^{-1/2} L D^{-1/2}`.
    ///
    /// Every vertex must have positive degree.
    pub fn normalized_laplacian(&self) -> Result<DMatrix<f64>, GraphError> {
        let mut inv_sqrt = Vec::with_capacity(self.n);
        for (v, list) in self.adjacency.iter().enumerate() {
            if list.is_empty() {
                return Err(GraphError::IsolatedVertex(v));
            }
            inv_sqrt.push(1.0 / (list.len() as f64).sqrt());
        }
        let mut l = DMatrix::zeros(self.n, self.n);
        for u in 0..self.n {
            l[(u, u)] = 1.0;
            for &v in &self.adjacency[u] {
                l[(u, v)] = -inv_sqrt[u] * inv_sqrt[v];
            }
        }
        Ok(l)
    }

    /// Signed edge-vertex incidence matrix, one row `1_u - 1_v` per edge.
    ///
    /// Rows follow sorted [`EdgeId`] order with `+1` at the smaller
    /// endpoint, so `Bᵀ B` equals the Laplacian entrywise.
    pub fn incidence_matrix(&self) -> DMatrix<f64> {
        let edges = self.edges();
        let mut b = DMatrix::zeros(edges.len(), self.n);
        for (row, e) in edges.iter().enumerate() {
            b[(row, e.u)] = 1.0;
            b[(row, e.v)] = -1.0;
        }
        b
    }

    fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v >= self.n {
            Err(GraphError::OutOfRange {
                vertex: v,
                n: self.n,
            })
        } else {
            Ok(())
        }
    }
}

/// Access-counted wrapper exposing only the three query-model operations.
///
/// One oracle per logical algorithm run; concurrent runs should each hold
/// their own oracle over the shared graph.
pub struct QueryOracle<'g> {
    graph: &'g GraphModel,
    rng: ChaCha8Rng,
    degree_queries: u64,
    neighbor_queries: u64,
    uniform_samples: u64,
}

impl<'g> QueryOracle<'g> {
    pub fn new(graph: &'g GraphModel, seed: u64) -> Self {
        QueryOracle {
            graph,
            rng: ChaCha8Rng::seed_from_u64(seed),
            degree_queries: 0,
            neighbor_queries: 0,
            uniform_samples: 0,
        }
    }

    /// Number of vertices. A parameter of the access model, not a counted
    /// query.
    pub fn vertex_count(&self) -> usize {
        self.graph.n
    }

    /// Degree query.
    pub fn degree(&mut self, v: Vertex) -> Result<usize, GraphError> {
        self.degree_queries += 1;
        self.graph.degree(v)
    }

    /// `i`-th neighbor query against the sorted adjacency list.
    pub fn neighbor(&mut self, v: Vertex, i: usize) -> Result<Vertex, GraphError> {
        self.neighbor_queries += 1;
        self.graph.check_vertex(v)?;
        let list = &self.graph.adjacency[v];
        list.get(i).copied().ok_or(GraphError::IndexBeyondDegree {
            vertex: v,
            index: i,
            degree: list.len(),
        })
    }

    /// Uniform vertex sample.
    pub fn sample_vertex(&mut self) -> Vertex {
        self.uniform_samples += 1;
        self.rng.random_range(0..self.graph.n)
    }

    pub fn degree_queries(&self) -> u64 {
        self.degree_queries
    }

    pub fn neighbor_queries(&self) -> u64 {
        self.neighbor_queries
    }

    pub fn uniform_samples(&self) -> u64 {
        self.uniform_samples
    }

    pub fn total_queries(&self) -> u64 {
        self.degree_queries + self.neighbor_queries + self.uniform_samples
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> GraphModel {
        GraphModel::build(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn build_single_edge() {
        let g = GraphModel::build(2, &[(0, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.degree(0).unwrap(), 1);
        assert_eq!(g.degree(1).unwrap(), 1);
    }

    #[test]
    fn build_triangle_and_ring() {
        let g = triangle();
        assert_eq!(g.degrees(), vec![2, 2, 2]);
        let ring = GraphModel::build(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(ring.edge_count(), 4);
        assert_eq!(ring.degrees(), vec![2, 2, 2, 2]);
    }

    #[test]
    fn build_rejects_bad_input() {
        assert!(matches!(
            GraphModel::build(2, &[(0, 2)]),
            Err(GraphError::OutOfRange { vertex: 2, n: 2 })
        ));
        assert!(matches!(
            GraphModel::build(2, &[(1, 1)]),
            Err(GraphError::SelfLoop(1))
        ));
        assert!(matches!(
            GraphModel::build(2, &[(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge(0, 1))
        ));
    }

    #[test]
    fn adjacency_is_symmetric_and_sorted() {
        let g = GraphModel::build(5, &[(3, 1), (4, 0), (2, 4), (1, 0)]).unwrap();
        for u in 0..5 {
            assert!(g.neighbors(u).windows(2).all(|w| w[0] < w[1]));
            for &v in g.neighbors(u) {
                assert!(g.neighbors(v).contains(&u));
            }
        }
        let total: usize = g.degrees().iter().sum();
        assert_eq!(total, 2 * g.edge_count());
    }

    #[test]
    fn oracle_degree_and_neighbor() {
        let g = triangle();
        let mut o = QueryOracle::new(&g, 0);
        assert_eq!(o.degree(0).unwrap(), 2);
        assert_eq!(o.neighbor(0, 0).unwrap(), 1);
        assert_eq!(o.neighbor(0, 1).unwrap(), 2);
        assert_eq!(o.degree_queries(), 1);
        assert_eq!(o.neighbor_queries(), 2);

        let single = GraphModel::build(2, &[(0, 1)]).unwrap();
        let mut o = QueryOracle::new(&single, 0);
        assert_eq!(o.degree(1).unwrap(), 1);
        assert!(matches!(
            o.neighbor(0, 1),
            Err(GraphError::IndexBeyondDegree {
                vertex: 0,
                index: 1,
                degree: 1
            })
        ));
        // failed calls still count
        assert_eq!(o.neighbor_queries(), 1);
    }

    #[test]
    fn oracle_answers_match_direct_reads() {
        let g = GraphModel::build(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)])
            .unwrap();
        let mut o = QueryOracle::new(&g, 9);
        for v in 0..6 {
            assert_eq!(o.degree(v).unwrap(), g.degree(v).unwrap());
            for i in 0..g.degree(v).unwrap() {
                assert_eq!(o.neighbor(v, i).unwrap(), g.neighbors(v)[i]);
            }
        }
    }

    #[test]
    fn path_middle_degree() {
        let g = GraphModel::build(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let mut o = QueryOracle::new(&g, 0);
        assert_eq!(o.degree(2).unwrap(), 2);
    }

    #[test]
    fn uniform_sample_counts_and_single_vertex() {
        let g = GraphModel::build(1, &[]).unwrap();
        let mut o = QueryOracle::new(&g, 123);
        for _ in 0..5 {
            assert_eq!(o.sample_vertex(), 0);
        }
        assert_eq!(o.uniform_samples(), 5);
    }

    #[test]
    fn uniform_sample_is_near_uniform() {
        let g = GraphModel::build(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let mut o = QueryOracle::new(&g, 42);
        let mut counts = [0u32; 4];
        let trials = 10_000;
        for _ in 0..trials {
            counts[o.sample_vertex()] += 1;
        }
        for &c in &counts {
            let freq = f64::from(c) / f64::from(trials);
            assert!((0.22..=0.28).contains(&freq), "frequency {freq}");
        }
    }

    #[test]
    fn laplacian_values() {
        let single = GraphModel::build(2, &[(0, 1)]).unwrap();
        let l = single.laplacian();
        assert_eq!(l, DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]));

        let l = triangle().laplacian();
        for i in 0..3 {
            assert_eq!(l[(i, i)], 2.0);
            for j in 0..3 {
                if i != j {
                    assert_eq!(l[(i, j)], -1.0);
                }
            }
        }

        let p3 = GraphModel::build(3, &[(0, 1), (1, 2)]).unwrap();
        let l = p3.laplacian();
        assert_eq!((l[(0, 0)], l[(1, 1)], l[(2, 2)]), (1.0, 2.0, 1.0));
        assert_eq!(l[(0, 2)], 0.0);

        // row sums vanish
        for i in 0..3 {
            assert!(l.row(i).sum().abs() < 1e-12);
        }
    }

    #[test]
    fn normalized_laplacian_values() {
        let single = GraphModel::build(2, &[(0, 1)]).unwrap();
        let l = single.normalized_laplacian().unwrap();
        assert_eq!(l, DMatrix::from_row_slice(2, 2, &[1.0, -1.0, -1.0, 1.0]));

        let l = triangle().normalized_laplacian().unwrap();
        for i in 0..3 {
            assert!((l[(i, i)] - 1.0).abs() < 1e-15);
            for j in 0..3 {
                if i != j {
                    assert!((l[(i, j)] + 0.5).abs() < 1e-15);
                }
            }
        }

        let isolated = GraphModel::build(3, &[(0, 1)]).unwrap();
        assert!(matches!(
            isolated.normalized_laplacian(),
            Err(GraphError::IsolatedVertex(2))
        ));
    }

    #[test]
    fn normalized_laplacian_star_spectrum() {
        // star with 3 leaves: normalized Laplacian eigenvalues {0, 1, 1, 2}
        let star = GraphModel::build(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let l = star.normalized_laplacian().unwrap();
        let mut evals: Vec<f64> = l.symmetric_eigen().eigenvalues.iter().copied().collect();
        evals.sort_by(f64::total_cmp);
        let expected = [0.0, 1.0, 1.0, 2.0];
        for (got, want) in evals.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn incidence_matrix_values() {
        let single = GraphModel::build(2, &[(0, 1)]).unwrap();
        assert_eq!(
            single.incidence_matrix(),
            DMatrix::from_row_slice(1, 2, &[1.0, -1.0])
        );

        let b = triangle().incidence_matrix();
        assert_eq!(b.nrows(), 3);
        let btb = b.transpose() * &b;
        for i in 0..3 {
            assert_eq!(btb[(i, i)], 2.0);
        }
    }

    #[test]
    fn incidence_gram_equals_laplacian() {
        let graphs = [
            GraphModel::build(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap(),
            GraphModel::build(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (1, 4)])
                .unwrap(),
        ];
        for g in &graphs {
            let b = g.incidence_matrix();
            let diff = b.transpose() * &b - g.laplacian();
            assert!(diff.iter().all(|x| x.abs() < 1e-12));
            for i in 0..g.vertex_count() {
                assert!((b.transpose() * &b).row(i).sum().abs() < 1e-12);
            }
        }
    }

    #[test]
    fn connectivity_checks() {
        let g = GraphModel::build(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(!g.is_connected());
        assert!(g.same_component(0, 1));
        assert!(!g.same_component(1, 2));
        assert!(triangle().is_connected());
    }

    #[test]
    fn graph_is_shareable_across_threads() {
        fn assert_sync_send<T: Sync + Send>() {}
        assert_sync_send::<GraphModel>();
    }

    #[test]
    fn edges_sorted_order() {
        let g = GraphModel::build(4, &[(2, 3), (0, 2), (0, 1), (1, 3)]).unwrap();
        let edges = g.edges();
        assert!(edges.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(edges[0].endpoints(), (0, 1));
    }
}

//! Clutters and simple graphs: validation, incidence matrices, and the
//! connectivity/bipartiteness classification used by the graph corollaries.
//!
//! Vertices are 1-indexed at the boundary (input files, error messages) and
//! 0-indexed inside.

use std::collections::VecDeque;

use serde::Serialize;
use thiserror::Error;

use crate::checks::CheckOutcome;
use crate::length::LengthCertificate;
use crate::toric::ExponentMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IncidenceError {
    #[error("a clutter needs at least one vertex and one edge")]
    Empty,
    #[error("edge {0} is empty")]
    EmptyEdge(usize),
    #[error("edge {edge} mentions vertex {vertex}, outside 1..={n}")]
    VertexOutOfRange { edge: usize, vertex: usize, n: usize },
    #[error("edge {edge} repeats vertex {vertex}")]
    RepeatedVertex { edge: usize, vertex: usize },
    #[error("edges {0} and {1} are equal")]
    DuplicateEdge(usize, usize),
    #[error("edge {0} is contained in edge {1}")]
    NotSperner(usize, usize),
    #[error("edge {edge} has {size} vertices; a graph needs 2")]
    NotAGraph { edge: usize, size: usize },
}

/// A Sperner family of vertex subsets. Edge numbers in errors are 1-indexed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Clutter {
    n: usize,
    /// Sorted, 0-indexed.
    edges: Vec<Vec<usize>>,
}

impl Clutter {
    /// `edges` use 1-indexed vertex ids; their order fixes the column order.
    pub fn new(n: usize, edges: &[Vec<usize>]) -> Result<Self, IncidenceError> {
        if n == 0 || edges.is_empty() {
            return Err(IncidenceError::Empty);
        }
        let mut out: Vec<Vec<usize>> = Vec::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            if e.is_empty() {
                return Err(IncidenceError::EmptyEdge(i + 1));
            }
            let mut s = Vec::with_capacity(e.len());
            for &v in e {
                if v == 0 || v > n {
                    return Err(IncidenceError::VertexOutOfRange { edge: i + 1, vertex: v, n });
                }
                s.push(v - 1);
            }
            s.sort_unstable();
            if let Some(w) = s.windows(2).find(|w| w[0] == w[1]) {
                return Err(IncidenceError::RepeatedVertex { edge: i + 1, vertex: w[0] + 1 });
            }
            for (j, prev) in out.iter().enumerate() {
                if *prev == s {
                    return Err(IncidenceError::DuplicateEdge(j + 1, i + 1));
                }
                if is_subset(prev, &s) {
                    return Err(IncidenceError::NotSperner(j + 1, i + 1));
                }
                if is_subset(&s, prev) {
                    return Err(IncidenceError::NotSperner(i + 1, j + 1));
                }
            }
            out.push(s);
        }
        Ok(Clutter { n, edges: out })
    }

    /// A simple graph: every edge has exactly two vertices.
    pub fn graph(n: usize, edges: &[(usize, usize)]) -> Result<Self, IncidenceError> {
        let c = Self::new(n, &edges.iter().map(|&(a, b)| vec![a, b]).collect::<Vec<_>>())?;
        c.require_graph()?;
        Ok(c)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// 0-indexed, sorted vertex lists.
    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn is_graph(&self) -> bool {
        self.edges.iter().all(|e| e.len() == 2)
    }

    fn require_graph(&self) -> Result<(), IncidenceError> {
        match self.edges.iter().position(|e| e.len() != 2) {
            Some(i) => Err(IncidenceError::NotAGraph { edge: i + 1, size: self.edges[i].len() }),
            None => Ok(()),
        }
    }

    /// Common edge size, if all edges have the same size.
    pub fn uniform_size(&self) -> Option<usize> {
        let k = self.edges[0].len();
        self.edges.iter().all(|e| e.len() == k).then_some(k)
    }
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    small.len() < big.len() && small.iter().all(|v| big.binary_search(v).is_ok())
}

/// The n x m 0/1 matrix whose column i is the characteristic vector of edge i.
pub fn incidence_matrix(c: &Clutter) -> ExponentMatrix {
    let mut rows = vec![vec![0u64; c.edge_count()]; c.vertex_count()];
    for (i, e) in c.edges().iter().enumerate() {
        for &v in e {
            rows[v][i] = 1;
        }
    }
    ExponentMatrix::new(rows).expect("nonempty and rectangular")
}

/// Common column sum of `a`, if there is one.
pub fn uniformity(a: &ExponentMatrix) -> Option<u64> {
    a.uniform_alpha()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GraphProvenance {
    pub connected: bool,
    pub bipartite: bool,
    pub vertices: usize,
    pub edges: usize,
}

/// Connectivity by breadth-first search and bipartiteness by 2-colouring.
pub fn classify_graph(c: &Clutter) -> Result<GraphProvenance, IncidenceError> {
    c.require_graph()?;
    let n = c.vertex_count();
    let mut adj = vec![Vec::new(); n];
    for e in c.edges() {
        adj[e[0]].push(e[1]);
        adj[e[1]].push(e[0]);
    }
    let mut colour: Vec<Option<bool>> = vec![None; n];
    let mut components = 0;
    let mut bipartite = true;
    for start in 0..n {
        if colour[start].is_some() {
            continue;
        }
        components += 1;
        colour[start] = Some(false);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let cu = colour[u].unwrap();
            for &v in &adj[u] {
                match colour[v] {
                    None => {
                        colour[v] = Some(!cu);
                        queue.push_back(v);
                    }
                    Some(cv) if cv == cu => bipartite = false,
                    _ => {}
                }
            }
        }
    }
    Ok(GraphProvenance { connected: components == 1, bipartite, vertices: n, edges: c.edge_count() })
}

/// For a disconnected graph and odd q, `|X| < (q-1)^{n-1}`.
pub fn disconnected_strict_check(graph: &GraphProvenance, q: u64, cert: &LengthCertificate) -> CheckOutcome {
    const NAME: &str = "disconnected_strict_bound";
    if graph.connected {
        return CheckOutcome::skipped(NAME, "graph is connected");
    }
    if q.is_multiple_of(2) {
        return CheckOutcome::skipped(NAME, "q is even");
    }
    let bound = (q - 1).pow(graph.vertices as u32 - 1);
    CheckOutcome::verdict(NAME, cert.x_size < bound, format!("|X| = {} < (q-1)^(n-1) = {bound}", cert.x_size))
}

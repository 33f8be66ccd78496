//! Classical graph generators as edge lists, plus the classical generalized
//! Mycielski construction used as an independent cross-check for the quantum
//! one.

use crate::error::{Error, Result};

/// A simple undirected loop-free graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeList {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl EdgeList {
    /// Normalizes edges to `u < v`, sorted and deduplicated; rejects loops
    /// and out-of-range endpoints.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut out = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::SelfLoop { vertex: a });
            }
            if a >= n || b >= n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: a.max(b) + 1,
                });
            }
            out.push((a.min(b), a.max(b)));
        }
        out.sort_unstable();
        out.dedup();
        Ok(EdgeList { n, edges: out })
    }

    /// Neighborhood bitmasks; requires `n <= 64`.
    pub fn adjacency_masks(&self) -> Vec<u64> {
        assert!(self.n <= 64, "bitset solvers support at most 64 vertices");
        let mut adj = vec![0u64; self.n];
        for &(u, v) in &self.edges {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        adj
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == v || b == v)
            .count()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).is_ok()
    }
}

pub fn empty_graph(n: usize) -> EdgeList {
    EdgeList::new(n, []).unwrap()
}

pub fn complete_graph(n: usize) -> EdgeList {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    EdgeList::new(n, edges).unwrap()
}

pub fn cycle_graph(n: usize) -> EdgeList {
    assert!(n >= 3, "a cycle needs at least 3 vertices");
    EdgeList::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
}

pub fn path_graph(n: usize) -> EdgeList {
    EdgeList::new(n, (1..n).map(|i| (i - 1, i))).unwrap()
}

/// Petersen graph: outer cycle 0-4, inner pentagram 5-9, spokes.
pub fn petersen() -> EdgeList {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
        edges.push((i, 5 + i));
    }
    EdgeList::new(10, edges).unwrap()
}

/// Petersen graph with its last vertex removed (9 vertices).
pub fn petersen_minus_vertex() -> EdgeList {
    let p = petersen();
    let edges = p
        .edges
        .into_iter()
        .filter(|&(u, v)| u != 9 && v != 9)
        .collect::<Vec<_>>();
    EdgeList::new(9, edges).unwrap()
}

/// The Grötzsch graph, obtained as the double Mycielskian of K2.
pub fn groetzsch() -> EdgeList {
    iterated_classical_mycielskian(&complete_graph(2), &[2, 2])
}

/// The 13-vertex orthogonality graph on the ±-identified cube vectors:
/// 3 face midpoints, 6 edge midpoints, 4 cube vertices; edges join
/// orthogonal representatives.
pub fn g13() -> EdgeList {
    let reps: [[i64; 3]; 13] = [
        [1, 0, 0],
        [0, 1, 0],
        [0, 0, 1],
        [1, 1, 0],
        [1, -1, 0],
        [1, 0, 1],
        [1, 0, -1],
        [0, 1, 1],
        [0, 1, -1],
        [1, 1, 1],
        [1, 1, -1],
        [1, -1, 1],
        [1, -1, -1],
    ];
    let mut edges = Vec::new();
    for u in 0..13 {
        for v in u + 1..13 {
            let dot: i64 = (0..3).map(|k| reps[u][k] * reps[v][k]).sum();
            if dot == 0 {
                edges.push((u, v));
            }
        }
    }
    EdgeList::new(13, edges).unwrap()
}

/// `g13` plus an apex adjacent to all thirteen vertices.
pub fn g14() -> EdgeList {
    let base = g13();
    let mut edges = base.edges;
    for v in 0..13 {
        edges.push((v, 13));
    }
    EdgeList::new(14, edges).unwrap()
}

/// Classical generalized Mycielskian with `r` copies (the transformation
/// `μ_{r-1}`), ordered apex first, then copies `1..=r` in base order.
///
/// Copy 1 keeps the base edges, consecutive copies are joined across base
/// edges, and the apex is joined to all of copy `r`. For `r = 2` this is the
/// classical Mycielskian with adjacency blocks
/// `[[0, 0ᵀ, 1ᵀ], [0, A, A], [1, A, 0]]`.
pub fn classical_mycielskian(g: &EdgeList, r: usize) -> EdgeList {
    assert!(r >= 1);
    let n = g.n;
    let vertex = |copy: usize, v: usize| 1 + (copy - 1) * n + v;
    let mut edges = Vec::new();
    for &(u, v) in &g.edges {
        edges.push((vertex(1, u), vertex(1, v)));
        for copy in 1..r {
            edges.push((vertex(copy, u), vertex(copy + 1, v)));
            edges.push((vertex(copy, v), vertex(copy + 1, u)));
        }
    }
    for v in 0..n {
        edges.push((0, vertex(r, v)));
    }
    EdgeList::new(1 + r * n, edges).unwrap()
}

/// Left-to-right iteration `μ_{r_k-1}(... μ_{r_1-1}(g) ...)`; the empty list
/// returns `g` unchanged.
pub fn iterated_classical_mycielskian(g: &EdgeList, rs: &[usize]) -> EdgeList {
    rs.iter()
        .fold(g.clone(), |acc, &r| classical_mycielskian(&acc, r))
}

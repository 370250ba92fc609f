//! Immutable simple undirected graphs with dense vertex ids, plus the metric
//! primitives (balls, boundaries) everything else is built from.
//!
//! A ball `B(v, r)` contains the vertices at distance strictly *less than*
//! `r` from `v`; the boundary `∂B(v, r)` contains those at distance exactly
//! `r`. Radii start at 1, so `B(v, 1) = {v}` and `∂B(v, 1) = N(v)`.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};

/// Vertex sets are kept sorted so traces serialize deterministically.
pub type VertexSet = BTreeSet<usize>;

/// Marker for "unreachable" in distance arrays.
pub const UNREACHABLE: u32 = u32::MAX;

/// Immutable simple undirected unweighted graph over vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<u32>>,
    num_edges: usize,
}

impl Graph {
    /// Builds a graph from an edge list. Edges are symmetrized and
    /// deduplicated; self-loops and out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::invalid(format!(
                    "edge ({u}, {v}) out of range for n = {n}"
                )));
            }
            if u == v {
                return Err(Error::invalid(format!("self-loop at vertex {u}")));
            }
            adjacency[u].push(v as u32);
            adjacency[v].push(u as u32);
        }
        let mut num_edges = 0;
        for list in adjacency.iter_mut() {
            list.sort_unstable();
            list.dedup();
            num_edges += list.len();
        }
        Ok(Graph {
            adjacency,
            num_edges: num_edges / 2,
        })
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn m(&self) -> usize {
        self.num_edges
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[v].iter().map(|&u| u as usize)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&(v as u32)).is_ok()
    }

    /// Sorted `(u, v)` pairs with `u < v`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.num_edges);
        for u in 0..self.n() {
            for &v in &self.adjacency[u] {
                let v = v as usize;
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n() {
            return Err(Error::invalid(format!(
                "vertex {v} out of range for n = {}",
                self.n()
            )));
        }
        Ok(())
    }

    /// Exact unweighted shortest-path distances from `v`; unreachable
    /// vertices are marked [`UNREACHABLE`].
    pub fn bfs_distances(&self, v: usize) -> Result<Vec<u32>> {
        self.check_vertex(v)?;
        let mut dist = vec![UNREACHABLE; self.n()];
        let mut queue = VecDeque::new();
        dist[v] = 0;
        queue.push_back(v);
        while let Some(u) = queue.pop_front() {
            let du = dist[u];
            for &w in &self.adjacency[u] {
                let w = w as usize;
                if dist[w] == UNREACHABLE {
                    dist[w] = du + 1;
                    queue.push_back(w);
                }
            }
        }
        Ok(dist)
    }

    /// `B(v, r) = {w : dist(v, w) < r}`. Requires `r >= 1`.
    pub fn ball(&self, v: usize, r: usize) -> Result<VertexSet> {
        let (ball, _) = self.ball_and_boundary(v, r)?;
        Ok(ball)
    }

    /// `∂B(v, r) = {w : dist(v, w) = r}`. Requires `r >= 1`.
    pub fn boundary(&self, v: usize, r: usize) -> Result<VertexSet> {
        let (_, boundary) = self.ball_and_boundary(v, r)?;
        Ok(boundary)
    }

    /// Computes ball and boundary in one truncated BFS.
    pub fn ball_and_boundary(&self, v: usize, r: usize) -> Result<(VertexSet, VertexSet)> {
        self.check_vertex(v)?;
        if r == 0 {
            return Err(Error::invalid("radius must be at least 1"));
        }
        let mut ball = VertexSet::new();
        let mut boundary = VertexSet::new();
        let mut scratch = BfsScratch::new(self.n());
        scratch.run_truncated(self, v, r as u32, None, |w, d| {
            if (d as usize) < r {
                ball.insert(w);
            } else {
                boundary.insert(w);
            }
        });
        Ok((ball, boundary))
    }

    /// Connected components of the subgraph induced by `restrict`, each
    /// reported as a sorted set, ordered by smallest member.
    pub fn components(&self, restrict: &VertexSet) -> Vec<VertexSet> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for &start in restrict {
            if seen[start] {
                continue;
            }
            let mut comp = VertexSet::new();
            let mut queue = VecDeque::new();
            seen[start] = true;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                comp.insert(u);
                for &w in &self.adjacency[u] {
                    let w = w as usize;
                    if !seen[w] && restrict.contains(&w) {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// Eccentricity of `v` within its component.
    pub fn eccentricity(&self, v: usize) -> Result<u32> {
        let dist = self.bfs_distances(v)?;
        Ok(dist
            .into_iter()
            .filter(|&d| d != UNREACHABLE)
            .max()
            .unwrap_or(0))
    }
}

/// Reusable BFS buffers for the carving loops, which run thousands of
/// truncated searches per trial. Cells are stamped with a generation counter
/// instead of being cleared.
pub(crate) struct BfsScratch {
    dist: Vec<u32>,
    stamp: Vec<u32>,
    generation: u32,
    queue: VecDeque<usize>,
}

impl BfsScratch {
    pub fn new(n: usize) -> Self {
        BfsScratch {
            dist: vec![0; n],
            stamp: vec![0; n],
            generation: 0,
            queue: VecDeque::new(),
        }
    }

    /// BFS from `source` up to depth `max_depth` inclusive, optionally
    /// restricted to vertices where `alive` is true. Calls `visit(w, d)` for
    /// every reached vertex, including the source at depth 0.
    pub fn run_truncated<F: FnMut(usize, u32)>(
        &mut self,
        g: &Graph,
        source: usize,
        max_depth: u32,
        alive: Option<&[bool]>,
        mut visit: F,
    ) {
        self.generation += 1;
        let gen = self.generation;
        self.queue.clear();
        self.dist[source] = 0;
        self.stamp[source] = gen;
        self.queue.push_back(source);
        visit(source, 0);
        while let Some(u) = self.queue.pop_front() {
            let du = self.dist[u];
            if du == max_depth {
                continue;
            }
            for &w in &g.adjacency[u] {
                let w = w as usize;
                if self.stamp[w] == gen {
                    continue;
                }
                if let Some(mask) = alive {
                    if !mask[w] {
                        continue;
                    }
                }
                self.stamp[w] = gen;
                self.dist[w] = du + 1;
                self.queue.push_back(w);
                visit(w, du + 1);
            }
        }
    }
}

/// True iff `seq` is a simple path of exactly `k` vertices in `g`, all inside
/// `restrict` when given.
pub fn is_valid_path(g: &Graph, seq: &[usize], k: usize, restrict: Option<&VertexSet>) -> bool {
    if seq.len() != k {
        return false;
    }
    let mut seen = BTreeSet::new();
    for &v in seq {
        if v >= g.n() || !seen.insert(v) {
            return false;
        }
        if let Some(r) = restrict {
            if !r.contains(&v) {
                return false;
            }
        }
    }
    seq.windows(2).all(|w| g.has_edge(w[0], w[1]))
}

//! Coordinate-level construction of grid subgraphs.
//!
//! Every gadget is placed through a [`GridBuilder`], which assigns dense
//! vertex ids to lattice points, refuses to place two vertices on the same
//! point, and only accepts unit-length edges. Any slip in the layout
//! arithmetic therefore surfaces as a hard error instead of a silently
//! broken graph.

use std::collections::HashMap;

use crate::embed::{l1_distance, GridEmbedding};
use crate::error::{Error, Result};
use crate::graph::Graph;

pub type Coord = Vec<i64>;

pub struct GridBuilder {
    dimension: usize,
    coords: Vec<Coord>,
    index: HashMap<Coord, usize>,
    edges: Vec<(usize, usize)>,
}

impl GridBuilder {
    pub fn new(dimension: usize) -> GridBuilder {
        GridBuilder {
            dimension,
            coords: Vec::new(),
            index: HashMap::new(),
            edges: Vec::new(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    /// Places a new vertex; occupied points are layout errors.
    pub fn vertex(&mut self, at: &[i64]) -> Result<usize> {
        debug_assert_eq!(at.len(), self.dimension);
        if let Some(&v) = self.index.get(at) {
            return Err(Error::layout(format!(
                "point {at:?} already occupied by vertex {v}"
            )));
        }
        let id = self.coords.len();
        self.coords.push(at.to_vec());
        self.index.insert(at.to_vec(), id);
        Ok(id)
    }

    pub fn get(&self, at: &[i64]) -> Option<usize> {
        self.index.get(at).copied()
    }

    pub fn coord(&self, v: usize) -> &[i64] {
        &self.coords[v]
    }

    /// Adds an edge between two existing vertices; must be unit length.
    pub fn edge(&mut self, a: usize, b: usize) -> Result<()> {
        if l1_distance(&self.coords[a], &self.coords[b]) != 1 {
            return Err(Error::layout(format!(
                "edge between {:?} and {:?} is not unit length",
                self.coords[a], self.coords[b]
            )));
        }
        self.edges.push((a, b));
        Ok(())
    }

    pub fn edge_at(&mut self, a: &[i64], b: &[i64]) -> Result<()> {
        let a = self
            .get(a)
            .ok_or_else(|| Error::layout(format!("no vertex at {a:?}")))?;
        let b = self
            .get(b)
            .ok_or_else(|| Error::layout(format!("no vertex at {b:?}")))?;
        self.edge(a, b)
    }

    /// Places a run of new vertices along `route` (every consecutive pair at
    /// unit distance) and chains them with edges. Returns the new ids in
    /// order.
    pub fn path(&mut self, route: &[Coord]) -> Result<Vec<usize>> {
        let mut ids = Vec::with_capacity(route.len());
        for c in route {
            ids.push(self.vertex(c)?);
        }
        for w in ids.windows(2) {
            self.edge(w[0], w[1])?;
        }
        Ok(ids)
    }

    pub fn finish(self) -> Result<(Graph, GridEmbedding)> {
        let n = self.coords.len();
        let edges: Vec<(usize, usize)> = self.edges.clone();
        let graph = Graph::from_edges(n, &edges)?;
        let embedding = GridEmbedding::new(self.dimension, self.coords)?;
        embedding.validate(&graph)?;
        Ok((graph, embedding))
    }

    /// Like [`GridBuilder::finish`] but keeps the builder usable.
    pub fn snapshot(&self) -> Result<(Graph, GridEmbedding)> {
        let graph = Graph::from_edges(self.coords.len(), &self.edges)?;
        let embedding = GridEmbedding::new(self.dimension, self.coords.clone())?;
        embedding.validate(&graph)?;
        Ok((graph, embedding))
    }
}

/// Expands a waypoint polyline into unit steps, excluding the start point
/// and including the end point of each leg. Consecutive waypoints must
/// differ in exactly one coordinate.
pub fn unit_steps(waypoints: &[Coord]) -> Result<Vec<Coord>> {
    let mut out = Vec::new();
    for leg in waypoints.windows(2) {
        let (from, to) = (&leg[0], &leg[1]);
        let mut moving = None;
        for d in 0..from.len() {
            if from[d] != to[d] {
                if moving.is_some() {
                    return Err(Error::layout(format!(
                        "waypoint leg {from:?} -> {to:?} moves along two axes"
                    )));
                }
                moving = Some(d);
            }
        }
        if let Some(d) = moving {
            let step = if to[d] > from[d] { 1 } else { -1 };
            let mut cur = from.clone();
            while cur[d] != to[d] {
                cur[d] += step;
                out.push(cur.clone());
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builder_rejects_collisions_and_long_edges() {
        let mut b = GridBuilder::new(2);
        let a = b.vertex(&[0, 0]).unwrap();
        assert!(b.vertex(&[0, 0]).is_err());
        let c = b.vertex(&[2, 0]).unwrap();
        assert!(b.edge(a, c).is_err());
        let d = b.vertex(&[1, 0]).unwrap();
        b.edge(a, d).unwrap();
        b.edge(d, c).unwrap();
        let (g, emb) = b.finish().unwrap();
        assert_eq!(g.m(), 2);
        emb.validate(&g).unwrap();
    }

    #[test]
    fn unit_steps_expand_legs() {
        let steps = unit_steps(&[vec![0, 0], vec![2, 0], vec![2, -1]]).unwrap();
        assert_eq!(steps, vec![vec![1, 0], vec![2, 0], vec![2, -1]]);
        assert!(unit_steps(&[vec![0, 0], vec![1, 1]]).is_err());
    }
}

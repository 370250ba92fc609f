//! Integer-lattice embeddings certifying "subgraph of a δ-dimensional grid".

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Map from vertex ids to coordinates in `Z^δ`. Valid against a graph when
/// coordinates are pairwise distinct and every edge joins points at
/// L1-distance exactly 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridEmbedding {
    dimension: usize,
    coords: Vec<Vec<i64>>,
}

impl GridEmbedding {
    pub fn new(dimension: usize, coords: Vec<Vec<i64>>) -> Result<GridEmbedding> {
        if dimension == 0 {
            return Err(Error::invalid("embedding dimension must be positive"));
        }
        for c in &coords {
            if c.len() != dimension {
                return Err(Error::invalid(format!(
                    "coordinate tuple {:?} does not have dimension {dimension}",
                    c
                )));
            }
        }
        Ok(GridEmbedding { dimension, coords })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self, v: usize) -> &[i64] {
        &self.coords[v]
    }

    pub fn all_coords(&self) -> &[Vec<i64>] {
        &self.coords
    }

    /// Checks both embedding invariants against `g`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        if self.coords.len() != g.n() {
            return Err(Error::invalid(format!(
                "embedding covers {} vertices, graph has {}",
                self.coords.len(),
                g.n()
            )));
        }
        let mut seen: HashMap<&[i64], usize> = HashMap::with_capacity(self.coords.len());
        for (v, c) in self.coords.iter().enumerate() {
            if let Some(&u) = seen.get(c.as_slice()) {
                return Err(Error::invalid(format!(
                    "vertices {u} and {v} share coordinates {:?}",
                    c
                )));
            }
            seen.insert(c.as_slice(), v);
        }
        for (u, v) in g.edges() {
            if l1_distance(&self.coords[u], &self.coords[v]) != 1 {
                return Err(Error::invalid(format!(
                    "edge ({u}, {v}) joins {:?} and {:?}, not at L1 distance 1",
                    self.coords[u], self.coords[v]
                )));
            }
        }
        Ok(())
    }

    /// Axis-aligned bounding box as `(min, max)` per dimension; `None` when
    /// the embedding is empty.
    pub fn bounding_box(&self) -> Option<(Vec<i64>, Vec<i64>)> {
        let first = self.coords.first()?;
        let mut lo = first.clone();
        let mut hi = first.clone();
        for c in &self.coords {
            for d in 0..self.dimension {
                lo[d] = lo[d].min(c[d]);
                hi[d] = hi[d].max(c[d]);
            }
        }
        Some((lo, hi))
    }

    /// Largest side of the bounding box, measured in vertices per axis.
    pub fn side_length(&self) -> usize {
        match self.bounding_box() {
            None => 0,
            Some((lo, hi)) => (0..self.dimension)
                .map(|d| (hi[d] - lo[d] + 1) as usize)
                .max()
                .unwrap_or(0),
        }
    }
}

pub fn l1_distance(a: &[i64], b: &[i64]) -> u64 {
    a.iter().zip(b).map(|(x, y)| x.abs_diff(*y)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_unit_edges_and_distinctness() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let ok = GridEmbedding::new(2, vec![vec![0, 0], vec![0, 1], vec![1, 1]]).unwrap();
        ok.validate(&g).unwrap();

        let long_edge =
            GridEmbedding::new(2, vec![vec![0, 0], vec![0, 2], vec![1, 2]]).unwrap();
        assert!(long_edge.validate(&g).is_err());

        let dup = GridEmbedding::new(2, vec![vec![0, 0], vec![0, 1], vec![0, 0]]).unwrap();
        assert!(dup.validate(&g).is_err());
    }

    #[test]
    fn bounding_box_and_side() {
        let e = GridEmbedding::new(2, vec![vec![0, 0], vec![3, 1]]).unwrap();
        let (lo, hi) = e.bounding_box().unwrap();
        assert_eq!(lo, vec![0, 0]);
        assert_eq!(hi, vec![3, 1]);
        assert_eq!(e.side_length(), 4);
    }
}

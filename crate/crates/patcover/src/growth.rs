//! Polynomial-growth checking: `|B(v, r)| <= C * r^δ` for every vertex and
//! every relevant radius.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, UNREACHABLE};

/// The pair `(C, δ)` of a polynomial growth bound. The constant is
/// user-supplied; [`check_growth`] verifies it against a concrete graph.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthBound {
    pub c: f64,
    pub delta: usize,
}

impl GrowthBound {
    pub fn new(c: f64, delta: usize) -> Result<GrowthBound> {
        if !(c > 0.0) {
            return Err(Error::invalid("growth constant C must be positive"));
        }
        if delta == 0 {
            return Err(Error::invalid("growth degree delta must be at least 1"));
        }
        Ok(GrowthBound { c, delta })
    }

    /// `C * r^δ`, the admissible ball size at radius `r`.
    pub fn limit(&self, r: usize) -> f64 {
        self.c * (r as f64).powi(self.delta as i32)
    }
}

/// A witnessed violation `|B(v, r)| > C * r^δ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthViolation {
    pub vertex: usize,
    pub radius: usize,
    pub ball_size: usize,
}

/// Scans every vertex and every radius `1..=ecc(v)+1`; larger radii repeat
/// the final ball and add no information. Returns all violations.
pub fn check_growth(g: &Graph, bound: &GrowthBound) -> Vec<GrowthViolation> {
    let mut violations = Vec::new();
    for v in 0..g.n() {
        let dist = g.bfs_distances(v).expect("vertex in range");
        let ecc = dist
            .iter()
            .filter(|&&d| d != UNREACHABLE)
            .max()
            .copied()
            .unwrap_or(0) as usize;
        // counts[d] = number of vertices at distance exactly d
        let mut counts = vec![0usize; ecc + 1];
        for &d in &dist {
            if d != UNREACHABLE {
                counts[d as usize] += 1;
            }
        }
        let mut ball_size = 0usize;
        for r in 1..=ecc + 1 {
            ball_size += counts[r - 1];
            if (ball_size as f64) > bound.limit(r) {
                violations.push(GrowthViolation {
                    vertex: v,
                    radius: r,
                    ball_size,
                });
            }
        }
    }
    violations
}

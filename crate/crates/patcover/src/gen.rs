//! Generators for grid graphs and randomly thinned subgrids, the test
//! instance families used throughout.

use rand::Rng;

use crate::embed::GridEmbedding;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Ceiling on generated vertex counts; `side^δ` beyond this is refused.
pub const VERTEX_LIMIT: usize = 10_000_000;

/// Full δ-dimensional grid of the given side, with the identity embedding.
/// Vertices are numbered in row-major (lexicographic) coordinate order.
pub fn generate_grid(delta: usize, side: usize) -> Result<(Graph, GridEmbedding)> {
    if delta == 0 || side == 0 {
        return Err(Error::invalid("delta and side must be at least 1"));
    }
    let n = checked_power(side, delta)?;
    let mut coords = Vec::with_capacity(n);
    let mut cur = vec![0i64; delta];
    loop {
        coords.push(cur.clone());
        // odometer increment, last coordinate fastest
        let mut d = delta;
        loop {
            if d == 0 {
                break;
            }
            d -= 1;
            cur[d] += 1;
            if (cur[d] as usize) < side {
                break;
            }
            cur[d] = 0;
            if d == 0 {
                d = usize::MAX; // finished
                break;
            }
        }
        if d == usize::MAX {
            break;
        }
    }
    debug_assert_eq!(coords.len(), n);

    // Strides of the row-major numbering: moving +1 along axis d jumps by
    // side^(delta-1-d) in vertex id.
    let mut strides = vec![1usize; delta];
    for d in (0..delta.saturating_sub(1)).rev() {
        strides[d] = strides[d + 1] * side;
    }
    let mut edges = Vec::new();
    for (v, c) in coords.iter().enumerate() {
        for d in 0..delta {
            if (c[d] as usize) + 1 < side {
                edges.push((v, v + strides[d]));
            }
        }
    }
    let g = Graph::from_edges(n, &edges)?;
    let emb = GridEmbedding::new(delta, coords)?;
    Ok((g, emb))
}

/// Grid with each vertex kept independently with probability
/// `1 - delete_prob`; survivors are renumbered densely and keep their
/// original coordinates. Subgraphs of grids inherit polynomial growth, which
/// makes this the standard perturbed instance family.
pub fn generate_perturbed_subgrid<R: Rng>(
    delta: usize,
    side: usize,
    delete_prob: f64,
    rng: &mut R,
) -> Result<(Graph, GridEmbedding)> {
    if !(0.0..=1.0).contains(&delete_prob) {
        return Err(Error::invalid("delete_prob must lie in [0, 1]"));
    }
    let (full, emb) = generate_grid(delta, side)?;
    let keep: Vec<bool> = (0..full.n()).map(|_| !rng.gen_bool(delete_prob)).collect();
    Ok(induce_subgraph(&full, &emb, &keep))
}

/// Dense renumbering of the kept vertices of `(g, emb)`.
pub fn induce_subgraph(g: &Graph, emb: &GridEmbedding, keep: &[bool]) -> (Graph, GridEmbedding) {
    let mut new_id = vec![usize::MAX; g.n()];
    let mut coords = Vec::new();
    for v in 0..g.n() {
        if keep[v] {
            new_id[v] = coords.len();
            coords.push(emb.coords(v).to_vec());
        }
    }
    let mut edges = Vec::new();
    for (u, v) in g.edges() {
        if keep[u] && keep[v] {
            edges.push((new_id[u], new_id[v]));
        }
    }
    let n = coords.len();
    (
        Graph::from_edges(n, &edges).expect("renumbered edges are valid"),
        GridEmbedding::new(emb.dimension(), coords).expect("dimension preserved"),
    )
}

fn checked_power(side: usize, delta: usize) -> Result<usize> {
    let mut n: usize = 1;
    for _ in 0..delta {
        n = n
            .checked_mul(side)
            .filter(|&x| x <= VERTEX_LIMIT)
            .ok_or_else(|| {
                Error::resource(format!(
                    "side^delta = {side}^{delta} exceeds the vertex limit {VERTEX_LIMIT}"
                ))
            })?;
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn one_dimensional_grid_is_a_path() {
        let (g, emb) = generate_grid(1, 5).unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(g.m(), 4);
        emb.validate(&g).unwrap();
    }

    #[test]
    fn three_by_three_grid_counts() {
        // 2 * side * (side - 1) edges in two dimensions.
        let (g, emb) = generate_grid(2, 3).unwrap();
        assert_eq!(g.n(), 9);
        assert_eq!(g.m(), 12);
        emb.validate(&g).unwrap();
    }

    #[test]
    fn cube_graph_counts() {
        let (g, emb) = generate_grid(3, 2).unwrap();
        assert_eq!(g.n(), 8);
        assert_eq!(g.m(), 12);
        emb.validate(&g).unwrap();
    }

    #[test]
    fn vertex_limit_enforced() {
        assert!(generate_grid(8, 100).is_err());
    }

    #[test]
    fn perturbed_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (g, _) = generate_perturbed_subgrid(2, 4, 0.0, &mut rng).unwrap();
        assert_eq!(g.n(), 16);
        assert_eq!(g.m(), 24);
        let (g, emb) = generate_perturbed_subgrid(2, 4, 1.0, &mut rng).unwrap();
        assert_eq!(g.n(), 0);
        assert!(emb.is_empty());
    }

    #[test]
    fn perturbed_survivor_count_is_binomial() {
        // 2500 vertices kept with probability 0.8: mean 2000, sd ~20; a
        // seeded draw stays within 4 standard deviations.
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (g, emb) = generate_perturbed_subgrid(2, 50, 0.2, &mut rng).unwrap();
        let mean = 2500.0 * 0.8;
        let sd = (2500.0f64 * 0.8 * 0.2).sqrt();
        assert!((g.n() as f64 - mean).abs() < 4.0 * sd, "n = {}", g.n());
        emb.validate(&g).unwrap();
    }
}

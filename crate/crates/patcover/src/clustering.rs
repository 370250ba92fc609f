//! The two randomized carving procedures.
//!
//! Both work the same way: repeatedly pick a center in the still-alive
//! graph, draw a radius from a capped geometric distribution, keep the open
//! ball as a cluster, and delete ball plus boundary from the alive graph.
//! Deleting the boundary disconnects the cluster from everything that
//! remains, so the retained set's components are exactly the cluster balls.
//!
//! The first pass (`chop`) uses acceptance probability `1/k` and chops the
//! graph into components of radius at most `cap_R`. The second pass
//! (`sparsify`) runs per component with acceptance probability
//! `min(1, k^{-1/(1+δ)} log₂ k)` and a much smaller cap, and additionally
//! samples a few boundary vertices back into the output as "portals":
//! with probability `1/(k·|V|)` per iteration it draws `ℓ` uniform from
//! `1..=portal_budget` and keeps `min(ℓ, |∂B|)` boundary vertices. If more
//! than `portal_budget` portals accumulate, the whole output collapses to
//! the empty set.

use rand::seq::index::sample as index_sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BfsScratch, Graph, VertexSet};
use crate::growth::GrowthBound;

/// `max(log₂ k, 1)`; the base is a convention and constants absorb it.
pub fn log2_floored(k: usize) -> f64 {
    (k as f64).log2().max(1.0)
}

/// How the next carve center is chosen among alive vertices. Every
/// structural invariant holds for any rule; the default is reproducible.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum CenterRule {
    #[default]
    LowestId,
    Random,
}

/// One capped-geometric draw: `Pr[r] = (1-p)^{r-1} p` for `r < cap` and
/// `Pr[cap] = (1-p)^{cap-1}`. Implemented as the iterative accept/grow
/// process, which is exact.
pub fn sample_capped_geometric<R: Rng>(p: f64, cap: usize, rng: &mut R) -> Result<usize> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::invalid(format!("probability {p} outside (0, 1]")));
    }
    if cap == 0 {
        return Err(Error::invalid("cap must be at least 1"));
    }
    let mut r = 1;
    while r < cap && !rng.gen_bool(p) {
        r += 1;
    }
    Ok(r)
}

/// Smallest `R >= 1` with `(1 - 1/k)^{R-1} < (k * k*C*(R+1)^δ)^{-1}`, i.e.
/// the first cap at which hitting it is less likely than one over `k` times
/// the largest relevant center pool. Computed by linear scan in log space.
pub fn compute_cap_r(k: usize, growth: &GrowthBound) -> usize {
    assert!(k >= 4, "the carving analysis assumes k >= 4");
    let log_q = (1.0 - 1.0 / k as f64).ln();
    let kf = k as f64;
    let mut r = 1usize;
    loop {
        // lhs = ln (1-1/k)^{R-1}; rhs = -ln(k^2 C (R+1)^δ)
        let lhs = (r as f64 - 1.0) * log_q;
        let rhs = -(kf * kf * growth.c * ((r + 1) as f64).powi(growth.delta as i32)).ln();
        if lhs < rhs {
            return r;
        }
        r += 1;
    }
}

/// Smallest `R' > ceil(10 k^{1/(1+δ)})` with
/// `(1-p2)^{R' - base} <= 1/(k * n_component)`, so that a union bound over
/// at most `n_component` iterations leaves total cap-hit probability `1/k`.
/// Degenerates to `base + 1` when the acceptance probability is 1.
pub fn compute_cap_rprime(k: usize, delta: usize, n_component: usize) -> usize {
    assert!(k >= 4 && n_component >= 1);
    let base = (10.0 * (k as f64).powf(1.0 / (1.0 + delta as f64))).ceil() as usize;
    let p2 = acceptance_probability(k, delta);
    if p2 >= 1.0 {
        return base + 1;
    }
    let target = -((k as f64) * (n_component as f64)).ln();
    let log_q = (1.0 - p2).ln();
    let mut rprime = base + 1;
    loop {
        if ((rprime - base) as f64) * log_q <= target {
            return rprime;
        }
        rprime += 1;
    }
}

/// `min(1, k^{-1/(1+δ)} log₂ k)`, the sparsify acceptance probability.
pub fn acceptance_probability(k: usize, delta: usize) -> f64 {
    let raw = (k as f64).powf(-1.0 / (1.0 + delta as f64)) * log2_floored(k);
    raw.min(1.0)
}

/// `floor(k^{1-1/(1+δ)} log₂ k)`, the portal budget.
pub fn portal_budget(k: usize, delta: usize) -> usize {
    let raw = (k as f64).powf(1.0 - 1.0 / (1.0 + delta as f64)) * log2_floored(k);
    (raw.floor() as usize).max(1)
}

#[derive(Clone, Debug)]
pub struct ChopParams {
    pub k: usize,
    pub cap_r: usize,
    pub center_rule: CenterRule,
}

impl ChopParams {
    /// Standard parameters: acceptance `1/k`, cap from [`compute_cap_r`].
    pub fn new(k: usize, growth: &GrowthBound) -> Result<ChopParams> {
        if k < 4 {
            return Err(Error::invalid("chop requires k >= 4"));
        }
        Ok(ChopParams {
            k,
            cap_r: compute_cap_r(k, growth),
            center_rule: CenterRule::default(),
        })
    }

    pub fn with_cap(k: usize, cap_r: usize) -> Result<ChopParams> {
        if k < 4 || cap_r == 0 {
            return Err(Error::invalid("chop requires k >= 4 and cap_R >= 1"));
        }
        Ok(ChopParams {
            k,
            cap_r,
            center_rule: CenterRule::default(),
        })
    }
}

/// One recorded carve: the center, the accepted radius, and the open ball
/// (taken in the graph alive at that iteration).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Cluster {
    pub center: usize,
    pub radius: usize,
    pub ball: VertexSet,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChopOutcome {
    pub retained: VertexSet,
    pub clusters: Vec<Cluster>,
    pub discarded_boundaries: Vec<VertexSet>,
    pub cap_r: usize,
}

impl ChopOutcome {
    /// Replays the carving described by the trace and checks every
    /// structural invariant. Used by tests and the acceptance suite.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let mut alive = vec![true; g.n()];
        let mut union = VertexSet::new();
        let mut scratch = BfsScratch::new(g.n());
        if self.clusters.len() != self.discarded_boundaries.len() {
            return Err(Error::invalid("trace length mismatch"));
        }
        for (i, cluster) in self.clusters.iter().enumerate() {
            if cluster.radius == 0 || cluster.radius > self.cap_r {
                return Err(Error::invalid(format!(
                    "cluster {i} radius {} outside [1, {}]",
                    cluster.radius, self.cap_r
                )));
            }
            if !alive[cluster.center] {
                return Err(Error::invalid(format!("cluster {i} center not alive")));
            }
            let mut ball = VertexSet::new();
            let mut boundary = VertexSet::new();
            let r = cluster.radius as u32;
            scratch.run_truncated(g, cluster.center, r, Some(&alive), |w, d| {
                if d < r {
                    ball.insert(w);
                } else {
                    boundary.insert(w);
                }
            });
            if ball != cluster.ball {
                return Err(Error::invalid(format!(
                    "cluster {i} ball does not match replay"
                )));
            }
            if boundary != self.discarded_boundaries[i] {
                return Err(Error::invalid(format!(
                    "cluster {i} boundary does not match replay"
                )));
            }
            // Radius invariant: every retained vertex of the cluster sits at
            // BFS distance < cap_R from its carve center.
            for &w in &ball {
                if !union.insert(w) {
                    return Err(Error::invalid("cluster balls overlap"));
                }
            }
            for &w in ball.iter().chain(boundary.iter()) {
                alive[w] = false;
            }
        }
        if alive.iter().any(|&a| a) {
            return Err(Error::invalid("carving left alive vertices"));
        }
        if union != self.retained {
            return Err(Error::invalid("retained set is not the union of balls"));
        }
        // No edge joins two distinct cluster balls, i.e. the components of
        // G[retained] are exactly the balls.
        let comps = g.components(&self.retained);
        let mut balls: Vec<&VertexSet> = self.clusters.iter().map(|c| &c.ball).collect();
        balls.sort_by_key(|b| *b.iter().next().expect("balls are nonempty"));
        if comps.len() != balls.len() || comps.iter().zip(&balls).any(|(a, b)| &a != b) {
            return Err(Error::invalid(
                "components of G[retained] differ from cluster balls",
            ));
        }
        Ok(())
    }
}

/// First carving pass over the whole graph.
pub fn chop(g: &Graph, params: &ChopParams, rng: &mut ChaCha8Rng) -> ChopOutcome {
    let accept = 1.0 / params.k as f64;
    let carve = carve_loop(g, None, accept, params.cap_r, params.center_rule, rng, None);
    ChopOutcome {
        retained: carve.retained,
        clusters: carve.clusters,
        discarded_boundaries: carve.boundaries,
        cap_r: params.cap_r,
    }
}

#[derive(Clone, Debug)]
pub struct SparsifyParams {
    pub k: usize,
    pub delta: usize,
    pub cap_rprime: usize,
    pub p2: f64,
    pub portal_budget: usize,
    /// Probability of skipping the portal draw in one iteration.
    pub empty_guess_prob: f64,
    pub center_rule: CenterRule,
}

impl SparsifyParams {
    /// Standard parameters for one connected component of `n_component`
    /// vertices.
    pub fn for_component(k: usize, delta: usize, n_component: usize) -> Result<SparsifyParams> {
        if k < 4 || delta == 0 || n_component == 0 {
            return Err(Error::invalid(
                "sparsify requires k >= 4, delta >= 1 and a nonempty component",
            ));
        }
        Ok(SparsifyParams {
            k,
            delta,
            cap_rprime: compute_cap_rprime(k, delta, n_component),
            p2: acceptance_probability(k, delta),
            portal_budget: portal_budget(k, delta),
            empty_guess_prob: 1.0 - 1.0 / (k as f64 * n_component as f64),
            center_rule: CenterRule::default(),
        })
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p2 > 0.0 && self.p2 <= 1.0) {
            return Err(Error::invalid("p2 outside (0, 1]"));
        }
        if self.portal_budget == 0 {
            return Err(Error::invalid("portal budget must be positive"));
        }
        if !(0.0..1.0).contains(&self.empty_guess_prob) {
            return Err(Error::invalid("empty-guess probability outside [0, 1)"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SparsifyOutcome {
    /// Union of the cluster balls.
    pub carved: VertexSet,
    /// Portal vertices sampled back from discarded boundaries.
    pub portals: VertexSet,
    /// `carved ∪ portals`, or empty when the portal budget overflowed.
    pub retained: VertexSet,
    pub clusters: Vec<Cluster>,
    pub discarded_boundaries: Vec<VertexSet>,
    /// Per-iteration portal draws (empty set when the guess was "empty").
    pub portal_trace: Vec<VertexSet>,
    pub cap_rprime: usize,
    pub portal_budget: usize,
}

impl SparsifyOutcome {
    pub fn overflowed(&self) -> bool {
        self.retained.is_empty() && !self.carved.is_empty()
    }

    pub fn validate(&self, g: &Graph, component: &VertexSet) -> Result<()> {
        if !self.retained.is_empty()
            && self.retained != self.carved.union(&self.portals).copied().collect()
        {
            return Err(Error::invalid("retained != carved ∪ portals"));
        }
        if !self.retained.is_empty() && self.portals.len() > self.portal_budget {
            return Err(Error::invalid("portal budget exceeded without cutoff"));
        }
        let boundary_union: VertexSet = self
            .discarded_boundaries
            .iter()
            .flatten()
            .copied()
            .collect();
        if !self.portals.is_subset(&boundary_union) {
            return Err(Error::invalid("portals not drawn from boundaries"));
        }
        for (trace, boundary) in self.portal_trace.iter().zip(&self.discarded_boundaries) {
            if !trace.is_subset(boundary) {
                return Err(Error::invalid("portal trace escapes its boundary"));
            }
        }
        // Replay the carving restricted to the component.
        let mut alive = vec![false; g.n()];
        for &v in component {
            alive[v] = true;
        }
        let mut scratch = BfsScratch::new(g.n());
        let mut union = VertexSet::new();
        for (i, cluster) in self.clusters.iter().enumerate() {
            if cluster.radius == 0 || cluster.radius > self.cap_rprime {
                return Err(Error::invalid(format!(
                    "cluster {i} radius outside [1, {}]",
                    self.cap_rprime
                )));
            }
            let mut ball = VertexSet::new();
            let mut boundary = VertexSet::new();
            let r = cluster.radius as u32;
            scratch.run_truncated(g, cluster.center, r, Some(&alive), |w, d| {
                if d < r {
                    ball.insert(w);
                } else {
                    boundary.insert(w);
                }
            });
            if ball != cluster.ball || boundary != self.discarded_boundaries[i] {
                return Err(Error::invalid(format!("cluster {i} replay mismatch")));
            }
            union.extend(ball.iter().copied());
            for &w in ball.iter().chain(boundary.iter()) {
                alive[w] = false;
            }
        }
        if union != self.carved {
            return Err(Error::invalid("carved set is not the union of balls"));
        }
        // Components of G[carved] are exactly the balls.
        let comps = g.components(&self.carved);
        if comps.len() != self.clusters.len() {
            return Err(Error::invalid("carved component count mismatch"));
        }
        Ok(())
    }
}

/// Second carving pass over one connected component.
pub fn sparsify(
    g: &Graph,
    component: &VertexSet,
    params: &SparsifyParams,
    rng: &mut ChaCha8Rng,
) -> Result<SparsifyOutcome> {
    params.validate()?;
    let draw_prob = 1.0 - params.empty_guess_prob;
    let mut portals = VertexSet::new();
    let mut portal_trace = Vec::new();

    let carve = carve_loop(
        g,
        Some(component),
        params.p2,
        params.cap_rprime,
        params.center_rule,
        rng,
        Some(&mut |boundary: &VertexSet, rng: &mut ChaCha8Rng| {
            // Portal draw: usually nothing; rarely, a uniform-size uniform
            // subset of the boundary.
            let drawn = if rng.gen_bool(draw_prob) {
                let want = rng.gen_range(1..=params.portal_budget);
                sample_subset(boundary, want, rng)
            } else {
                VertexSet::new()
            };
            portals.extend(drawn.iter().copied());
            portal_trace.push(drawn);
        }),
    );

    let overflow = portals.len() > params.portal_budget;
    let retained = if overflow {
        VertexSet::new()
    } else {
        carve.retained.union(&portals).copied().collect()
    };
    Ok(SparsifyOutcome {
        carved: carve.retained,
        portals,
        retained,
        clusters: carve.clusters,
        discarded_boundaries: carve.boundaries,
        portal_trace,
        cap_rprime: params.cap_rprime,
        portal_budget: params.portal_budget,
    })
}

/// Uniform sample of `min(want, |set|)` elements without replacement.
fn sample_subset(set: &VertexSet, want: usize, rng: &mut ChaCha8Rng) -> VertexSet {
    let items: Vec<usize> = set.iter().copied().collect();
    let take = want.min(items.len());
    if take == 0 {
        return VertexSet::new();
    }
    index_sample(rng, items.len(), take)
        .iter()
        .map(|i| items[i])
        .collect()
}

struct CarveResult {
    retained: VertexSet,
    clusters: Vec<Cluster>,
    boundaries: Vec<VertexSet>,
}

/// The shared carving loop. `on_boundary`, when present, receives each
/// iteration's discarded boundary (the portal hook). RNG consumption order
/// per iteration: center (random rule only), radius, then the hook.
fn carve_loop(
    g: &Graph,
    restrict: Option<&VertexSet>,
    accept: f64,
    cap: usize,
    center_rule: CenterRule,
    rng: &mut ChaCha8Rng,
    mut on_boundary: Option<&mut dyn FnMut(&VertexSet, &mut ChaCha8Rng)>,
) -> CarveResult {
    let mut alive = match restrict {
        Some(set) => {
            let mut mask = vec![false; g.n()];
            for &v in set {
                mask[v] = true;
            }
            mask
        }
        None => vec![true; g.n()],
    };
    let mut alive_count = match restrict {
        Some(set) => set.len(),
        None => g.n(),
    };
    let alive_list: Vec<usize> = (0..g.n()).filter(|&v| alive[v]).collect();
    let mut lowest_cursor = 0usize;

    let mut scratch = BfsScratch::new(g.n());
    let mut retained = VertexSet::new();
    let mut clusters = Vec::new();
    let mut boundaries = Vec::new();

    while alive_count > 0 {
        let center = match center_rule {
            CenterRule::LowestId => {
                while !alive[alive_list[lowest_cursor]] {
                    lowest_cursor += 1;
                }
                alive_list[lowest_cursor]
            }
            CenterRule::Random => {
                // Rejection-sample an alive vertex; alive_list keeps the
                // original order so the draw is uniform over alive ones.
                loop {
                    let i = rng.gen_range(0..alive_list.len());
                    if alive[alive_list[i]] {
                        break alive_list[i];
                    }
                }
            }
        };
        let radius =
            sample_capped_geometric(accept, cap, rng).expect("accept validated by params");
        let mut ball = VertexSet::new();
        let mut boundary = VertexSet::new();
        let r = radius as u32;
        scratch.run_truncated(g, center, r, Some(&alive), |w, d| {
            if d < r {
                ball.insert(w);
            } else {
                boundary.insert(w);
            }
        });
        for &w in ball.iter().chain(boundary.iter()) {
            alive[w] = false;
            alive_count -= 1;
        }
        if let Some(hook) = on_boundary.as_mut() {
            hook(&boundary, rng);
        }
        retained.extend(ball.iter().copied());
        clusters.push(Cluster {
            center,
            radius,
            ball,
        });
        boundaries.push(boundary);
    }
    CarveResult {
        retained,
        clusters,
        boundaries,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{generate_grid, generate_perturbed_subgrid};
    use crate::rng::Substream;
    use rand::SeedableRng;

    fn rng_for(seed: u64) -> ChaCha8Rng {
        Substream::root(seed).child("test").rng()
    }

    #[test]
    fn geometric_p_one_always_one() {
        let mut rng = rng_for(1);
        for _ in 0..100 {
            assert_eq!(sample_capped_geometric(1.0, 5, &mut rng).unwrap(), 1);
        }
    }

    #[test]
    fn geometric_cap_one_binds() {
        let mut rng = rng_for(2);
        for _ in 0..100 {
            assert_eq!(sample_capped_geometric(0.5, 1, &mut rng).unwrap(), 1);
        }
    }

    #[test]
    fn geometric_rejects_bad_probability() {
        let mut rng = rng_for(3);
        assert!(sample_capped_geometric(0.0, 5, &mut rng).is_err());
        assert!(sample_capped_geometric(1.5, 5, &mut rng).is_err());
        assert!(sample_capped_geometric(0.5, 0, &mut rng).is_err());
    }

    #[test]
    fn geometric_cap_mass_matches_analytic() {
        // Pr[r = 8] with p = 1/4 is (3/4)^7 ≈ 0.1335; binomial 3σ window
        // over 1e5 samples.
        let mut rng = rng_for(4);
        let trials = 100_000;
        let hits = (0..trials)
            .filter(|_| sample_capped_geometric(0.25, 8, &mut rng).unwrap() == 8)
            .count();
        let p = 0.75f64.powi(7);
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        let observed = hits as f64 / trials as f64;
        assert!(
            (observed - p).abs() < 3.0 * sigma,
            "observed {observed}, expected {p}"
        );
    }

    #[test]
    fn cap_r_matches_scan_oracle() {
        // Oracle: evaluate both sides by repeated multiplication.
        fn oracle(k: usize, c: f64, delta: usize) -> usize {
            let q = 1.0 - 1.0 / k as f64;
            let mut lhs = 1.0; // (1-1/k)^{R-1} at R = 1
            let mut r = 1;
            loop {
                let rhs = 1.0 / (k as f64 * k as f64 * c * ((r + 1) as f64).powi(delta as i32));
                if lhs < rhs {
                    return r;
                }
                lhs *= q;
                r += 1;
            }
        }
        for (k, c, delta) in [(4, 1.0, 1), (4, 4.0, 2), (8, 4.0, 2), (16, 2.0, 3)] {
            let bound = GrowthBound::new(c, delta).unwrap();
            assert_eq!(compute_cap_r(k, &bound), oracle(k, c, delta), "k={k}");
        }
    }

    #[test]
    fn cap_r_monotone_in_c_and_delta() {
        let b1 = GrowthBound::new(1.0, 2).unwrap();
        let b2 = GrowthBound::new(8.0, 2).unwrap();
        let b3 = GrowthBound::new(1.0, 3).unwrap();
        assert!(compute_cap_r(6, &b2) >= compute_cap_r(6, &b1));
        assert!(compute_cap_r(6, &b3) >= compute_cap_r(6, &b1));
    }

    #[test]
    fn cap_rprime_matches_scan_oracle() {
        // k = 16, δ = 2 clamps p2 to 1, hitting the degenerate branch.
        let base = (10.0 * 16f64.powf(1.0 / 3.0)).ceil() as usize;
        assert_eq!(compute_cap_rprime(16, 2, 100), base + 1);

        // A case with p2 < 1: k = 64, δ = 1 gives p2 = 6/8 = 0.75.
        let (k, delta, n) = (64usize, 1usize, 100usize);
        let p2 = acceptance_probability(k, delta);
        assert!(p2 < 1.0);
        let base = (10.0 * (k as f64).powf(0.5)).ceil() as usize;
        let mut expected = base + 1;
        let mut mass = 1.0 - p2;
        while mass > 1.0 / (k as f64 * n as f64) {
            mass *= 1.0 - p2;
            expected += 1;
        }
        assert_eq!(compute_cap_rprime(k, delta, n), expected);
    }

    #[test]
    fn cap_rprime_monotone_in_component_size() {
        let a = compute_cap_rprime(64, 1, 10);
        let b = compute_cap_rprime(64, 1, 10_000);
        assert!(b >= a);
    }

    #[test]
    fn chop_on_empty_graph() {
        let g = Graph::from_edges(0, &[]).unwrap();
        let params = ChopParams::with_cap(4, 10).unwrap();
        let out = chop(&g, &params, &mut rng_for(5));
        assert!(out.retained.is_empty());
        assert!(out.clusters.is_empty());
        out.validate(&g).unwrap();
    }

    #[test]
    fn chop_single_vertex() {
        let g = Graph::from_edges(1, &[]).unwrap();
        let params = ChopParams::with_cap(4, 10).unwrap();
        let out = chop(&g, &params, &mut rng_for(6));
        assert_eq!(out.retained, VertexSet::from([0]));
        assert_eq!(out.clusters.len(), 1);
        assert_eq!(out.clusters[0].ball, VertexSet::from([0]));
        out.validate(&g).unwrap();
    }

    #[test]
    fn chop_k2_keeps_only_u_a_quarter_of_the_time() {
        // With k = 4 and u carved first: radius 1 is accepted with
        // probability 1/4, in which case v is discarded as boundary;
        // otherwise the ball swallows both.
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let growth = GrowthBound::new(2.0, 1).unwrap();
        let params = ChopParams::new(4, &growth).unwrap();
        assert!(params.cap_r >= 2);
        let trials = 100_000;
        let mut only_u = 0;
        let stream = Substream::root(77);
        for t in 0..trials {
            let mut rng = stream.child_idx("trial", t).rng();
            let out = chop(&g, &params, &mut rng);
            if out.retained == VertexSet::from([0]) {
                only_u += 1;
            } else {
                assert_eq!(out.retained, VertexSet::from([0, 1]));
            }
        }
        let observed = only_u as f64 / trials as f64;
        let sigma = (0.25 * 0.75 / trials as f64).sqrt();
        assert!(
            (observed - 0.25).abs() < 4.0 * sigma,
            "observed {observed}"
        );
    }

    #[test]
    fn chop_invariants_on_random_subgrids_both_center_rules() {
        let growth = GrowthBound::new(4.0, 2).unwrap();
        let stream = Substream::root(31);
        for trial in 0..30u64 {
            let mut grid_rng = stream.child_idx("grid", trial).rng();
            let (g, _) = generate_perturbed_subgrid(2, 10, 0.2, &mut grid_rng).unwrap();
            if g.n() == 0 {
                continue;
            }
            for rule in [CenterRule::LowestId, CenterRule::Random] {
                let mut params = ChopParams::new(4 + (trial as usize % 3) * 2, &growth).unwrap();
                params.center_rule = rule;
                let mut rng = stream.child_idx("carve", trial).rng();
                let out = chop(&g, &params, &mut rng);
                out.validate(&g).unwrap();
            }
        }
    }

    #[test]
    fn chop_is_deterministic_under_a_seed() {
        let (g, _) = generate_grid(2, 12).unwrap();
        let growth = GrowthBound::new(4.0, 2).unwrap();
        let params = ChopParams::new(6, &growth).unwrap();
        let a = chop(&g, &params, &mut rng_for(9));
        let b = chop(&g, &params, &mut rng_for(9));
        assert_eq!(a.retained, b.retained);
        assert_eq!(a.clusters.len(), b.clusters.len());
    }

    #[test]
    fn sparsify_single_vertex_component() {
        let g = Graph::from_edges(1, &[]).unwrap();
        let component = VertexSet::from([0]);
        let params = SparsifyParams::for_component(8, 2, 1).unwrap();
        for t in 0..50 {
            let out = sparsify(&g, &component, &params, &mut rng_for(t)).unwrap();
            assert_eq!(out.retained, VertexSet::from([0]));
            assert!(out.portals.is_empty());
            out.validate(&g, &component).unwrap();
        }
    }

    #[test]
    fn sparsify_cutoff_empties_retained() {
        // Forcing a portal draw every iteration with a budget of 1 makes the
        // accumulated portals overflow on any graph with enough boundary.
        let (g, _) = generate_grid(2, 6).unwrap();
        let component: VertexSet = (0..g.n()).collect();
        let mut params = SparsifyParams::for_component(8, 2, g.n()).unwrap();
        params.empty_guess_prob = 0.0;
        params.portal_budget = 1;
        let out = sparsify(&g, &component, &params, &mut rng_for(12)).unwrap();
        assert!(out.portals.len() > params.portal_budget);
        assert!(out.retained.is_empty());
        assert!(out.overflowed());
    }

    #[test]
    fn sparsify_portal_draws_respect_sizes() {
        let (g, _) = generate_grid(2, 8).unwrap();
        let component: VertexSet = (0..g.n()).collect();
        let mut params = SparsifyParams::for_component(8, 2, g.n()).unwrap();
        params.empty_guess_prob = 0.5; // draw often enough to observe
        params.portal_budget = 3;
        let out = sparsify(&g, &component, &params, &mut rng_for(13)).unwrap();
        for (trace, boundary) in out.portal_trace.iter().zip(&out.discarded_boundaries) {
            assert!(trace.len() <= 3.min(boundary.len()));
            assert!(trace.is_subset(boundary));
        }
        out.validate(&g, &component).unwrap();
    }

    #[test]
    fn sparsify_invariants_on_subgrids() {
        let stream = Substream::root(41);
        for trial in 0..20u64 {
            let mut grid_rng = stream.child_idx("grid", trial).rng();
            let (g, _) = generate_perturbed_subgrid(2, 9, 0.15, &mut grid_rng).unwrap();
            let all: VertexSet = (0..g.n()).collect();
            for component in g.components(&all) {
                let params = SparsifyParams::for_component(8, 2, component.len()).unwrap();
                let mut rng = stream.child_idx("sparsify", trial).rng();
                let out = sparsify(&g, &component, &params, &mut rng).unwrap();
                out.validate(&g, &component).unwrap();
            }
        }
    }

    #[test]
    fn outcome_serialization_round_trips() {
        let (g, _) = generate_grid(2, 5).unwrap();
        let growth = GrowthBound::new(4.0, 2).unwrap();
        let params = ChopParams::new(4, &growth).unwrap();
        let out = chop(&g, &params, &mut rng_for(15));
        let json = serde_json::to_string(&out).unwrap();
        let back: ChopOutcome = serde_json::from_str(&json).unwrap();
        assert_eq!(back.retained, out.retained);
        back.validate(&g).unwrap();
    }
}

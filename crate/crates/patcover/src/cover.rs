//! Composition of the two carving passes into a low-treedepth cover, the
//! elimination-forest witness, and Monte Carlo estimation of coverage
//! probabilities.
//!
//! One cover run chops the graph, then sparsifies every resulting component
//! on its own randomness substream. The treedepth witness per component is
//! deliberately simple: the portals form one top chain, and each component
//! of the carved set hangs below it as a chain of all its vertices. Every
//! edge inside the retained set then joins an ancestor-descendant pair, and
//! the depth is at most (portal count) + (largest carved cluster size).

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clustering::{
    chop, sparsify, ChopOutcome, ChopParams, SparsifyOutcome, SparsifyParams,
};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::growth::GrowthBound;
use crate::rng::Substream;

/// Ceiling on computed trial budgets.
pub const TRIAL_CEILING: u64 = 1_000_000_000;

/// A target vertex set of size at most `k`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Pattern {
    vertices: VertexSet,
    k: usize,
}

impl Pattern {
    pub fn new(vertices: VertexSet, k: usize) -> Result<Pattern> {
        if vertices.len() > k {
            return Err(Error::invalid(format!(
                "pattern has {} vertices, larger than k = {k}",
                vertices.len()
            )));
        }
        Ok(Pattern { vertices, k })
    }

    pub fn vertices(&self) -> &VertexSet {
        &self.vertices
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

/// Rooted forest over a vertex subset in which every edge of the induced
/// subgraph joins an ancestor-descendant pair; the constructive treedepth
/// witness.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EliminationForest {
    /// parent[v] = None for roots; vertices outside the domain are absent.
    parent: HashMap<usize, Option<usize>>,
    depth: usize,
}

impl EliminationForest {
    pub fn from_parent_map(parent: HashMap<usize, Option<usize>>) -> Result<EliminationForest> {
        let mut forest = EliminationForest { parent, depth: 0 };
        forest.depth = forest.compute_depth()?;
        Ok(forest)
    }

    pub fn domain(&self) -> VertexSet {
        self.parent.keys().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent.get(&v).copied().flatten()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.parent.contains_key(&v)
    }

    /// Maximum root-to-leaf chain length, counted in vertices.
    pub fn depth(&self) -> usize {
        self.depth
    }

    fn compute_depth(&self) -> Result<usize> {
        let mut memo: HashMap<usize, usize> = HashMap::new();
        let mut deepest = 0;
        for &v in self.parent.keys() {
            let mut chain = Vec::new();
            let mut cur = v;
            let d = loop {
                if let Some(&d) = memo.get(&cur) {
                    break d;
                }
                chain.push(cur);
                if chain.len() > self.parent.len() {
                    return Err(Error::invalid("parent links contain a cycle"));
                }
                match self.parent.get(&cur) {
                    None => {
                        return Err(Error::invalid(format!(
                            "parent {cur} outside the forest domain"
                        )))
                    }
                    Some(None) => break 0,
                    Some(Some(p)) => cur = *p,
                }
            };
            for (i, &u) in chain.iter().rev().enumerate() {
                memo.insert(u, d + i + 1);
            }
            deepest = deepest.max(d + chain.len());
        }
        Ok(deepest)
    }

    /// Depth of `v` (root = 1).
    pub fn node_depth(&self, v: usize) -> usize {
        let mut d = 0;
        let mut cur = Some(v);
        while let Some(u) = cur {
            d += 1;
            cur = self.parent(u);
        }
        d
    }

    /// True when one endpoint is an ancestor of the other (or they are
    /// equal).
    pub fn ancestor_related(&self, u: usize, v: usize) -> bool {
        let on_chain = |top: usize, mut below: usize| loop {
            if below == top {
                return true;
            }
            match self.parent(below) {
                Some(p) => below = p,
                None => return false,
            }
        };
        on_chain(u, v) || on_chain(v, u)
    }

    /// Ancestors of `v` from the root down to `v` itself.
    pub fn chain_to_root(&self, v: usize) -> Vec<usize> {
        let mut chain = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent(cur) {
            chain.push(p);
            cur = p;
        }
        chain.reverse();
        chain
    }

    /// Children lists and roots, in sorted order for deterministic
    /// traversal.
    pub fn children_and_roots(&self) -> (HashMap<usize, Vec<usize>>, Vec<usize>) {
        let mut children: HashMap<usize, Vec<usize>> = HashMap::new();
        let mut roots = Vec::new();
        for (&v, &p) in &self.parent {
            match p {
                Some(p) => children.entry(p).or_default().push(v),
                None => roots.push(v),
            }
        }
        for list in children.values_mut() {
            list.sort_unstable();
        }
        roots.sort_unstable();
        (children, roots)
    }

    /// Checks the ancestor property for every edge of `G[domain]` and the
    /// cached depth.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let domain = self.domain();
        for &u in &domain {
            for v in g.neighbors(u) {
                if u < v && domain.contains(&v) && !self.ancestor_related(u, v) {
                    return Err(Error::invalid(format!(
                        "edge ({u}, {v}) does not join ancestor and descendant"
                    )));
                }
            }
        }
        let recomputed = self.compute_depth()?;
        if recomputed != self.depth {
            return Err(Error::invalid(format!(
                "cached depth {} != recomputed {recomputed}",
                self.depth
            )));
        }
        Ok(())
    }

    /// Union of disjoint forests.
    pub fn merge(forests: impl IntoIterator<Item = EliminationForest>) -> Result<EliminationForest> {
        let mut parent = HashMap::new();
        let mut depth = 0;
        for f in forests {
            depth = depth.max(f.depth);
            for (v, p) in f.parent {
                if parent.insert(v, p).is_some() {
                    return Err(Error::invalid(format!("vertex {v} in two forests")));
                }
            }
        }
        Ok(EliminationForest { parent, depth })
    }

    /// Treedepth-flavored heuristic forest over an arbitrary vertex set:
    /// recursively removes a central vertex of each component and hangs the
    /// pieces below it. Used to drive the path DP on raw graphs.
    pub fn by_separators(g: &Graph, domain: &VertexSet) -> EliminationForest {
        let mut parent: HashMap<usize, Option<usize>> = HashMap::new();
        let mut stack: Vec<(VertexSet, Option<usize>)> = g
            .components(domain)
            .into_iter()
            .map(|c| (c, None))
            .collect();
        while let Some((comp, above)) = stack.pop() {
            if comp.is_empty() {
                continue;
            }
            let sep = bfs_center(g, &comp);
            parent.insert(sep, above);
            let mut rest = comp;
            rest.remove(&sep);
            for sub in g.components(&rest) {
                stack.push((sub, Some(sep)));
            }
        }
        EliminationForest::from_parent_map(parent).expect("separator forest is acyclic")
    }
}

/// Central vertex of a connected set: the midpoint of a BFS-double-sweep
/// diameter path.
fn bfs_center(g: &Graph, comp: &VertexSet) -> usize {
    let start = *comp.iter().next().expect("nonempty component");
    let far = restricted_farthest(g, comp, start);
    let (path, _) = restricted_bfs_path(g, comp, far);
    path[path.len() / 2]
}

fn restricted_farthest(g: &Graph, comp: &VertexSet, from: usize) -> usize {
    let (path, _) = restricted_bfs_path(g, comp, from);
    *path.last().unwrap()
}

/// BFS within `comp` from `from`; returns a shortest path to the farthest
/// vertex and its length.
fn restricted_bfs_path(g: &Graph, comp: &VertexSet, from: usize) -> (Vec<usize>, usize) {
    use std::collections::VecDeque;
    let mut prev: HashMap<usize, usize> = HashMap::new();
    let mut dist: HashMap<usize, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    dist.insert(from, 0);
    queue.push_back(from);
    let mut far = (from, 0);
    while let Some(u) = queue.pop_front() {
        let du = dist[&u];
        if du > far.1 || (du == far.1 && u < far.0) {
            far = (u, du);
        }
        for w in g.neighbors(u) {
            if comp.contains(&w) && !dist.contains_key(&w) {
                dist.insert(w, du + 1);
                prev.insert(w, u);
                queue.push_back(w);
            }
        }
    }
    let mut path = vec![far.0];
    let mut cur = far.0;
    while let Some(&p) = prev.get(&cur) {
        path.push(p);
        cur = p;
    }
    path.reverse();
    (path, far.1)
}

/// Builds the witness forest for one sparsified component: portals as a top
/// chain in id order, then each component of `G[carved]` as a chain of its
/// vertices below the bottom portal.
pub fn build_elimination_forest(
    g: &Graph,
    carved: &VertexSet,
    portals: &VertexSet,
) -> Result<EliminationForest> {
    if !carved.is_disjoint(portals) {
        return Err(Error::invalid("carved and portal sets overlap"));
    }
    let mut parent: HashMap<usize, Option<usize>> = HashMap::new();
    let mut above: Option<usize> = None;
    for &b in portals {
        parent.insert(b, above);
        above = Some(b);
    }
    for comp in g.components(carved) {
        let mut hook = above;
        for &v in &comp {
            parent.insert(v, hook);
            hook = Some(v);
        }
    }
    EliminationForest::from_parent_map(parent)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoverResult {
    pub retained: VertexSet,
    pub forest: EliminationForest,
    pub chop_trace: ChopOutcome,
    pub sparsify_traces: Vec<SparsifyOutcome>,
}

impl CoverResult {
    /// Structural checks: forest over exactly the retained set, ancestor
    /// property, and the depth bound from the carving parameters.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        if self.forest.domain() != self.retained {
            return Err(Error::invalid("forest domain differs from retained set"));
        }
        self.forest.validate(g)?;
        let mut bound = 0usize;
        for trace in &self.sparsify_traces {
            if trace.retained.is_empty() {
                continue;
            }
            let worst_cluster = trace
                .clusters
                .iter()
                .map(|c| c.ball.len())
                .max()
                .unwrap_or(0);
            bound = bound.max(trace.portals.len() + worst_cluster);
        }
        if self.forest.depth() > bound {
            return Err(Error::invalid(format!(
                "forest depth {} exceeds portals+cluster bound {bound}",
                self.forest.depth()
            )));
        }
        Ok(())
    }
}

/// One full cover run: chop, then sparsify each component independently on
/// its own substream (`stream/chop`, `stream/sparsify[i]`).
pub fn cover_once(
    g: &Graph,
    k: usize,
    growth: &GrowthBound,
    stream: &Substream,
) -> Result<CoverResult> {
    let chop_params = ChopParams::new(k, growth)?;
    cover_once_with(g, k, growth, &chop_params, stream)
}

/// As [`cover_once`] but with explicit chop parameters (cap overrides,
/// center rule).
pub fn cover_once_with(
    g: &Graph,
    k: usize,
    growth: &GrowthBound,
    chop_params: &ChopParams,
    stream: &Substream,
) -> Result<CoverResult> {
    let mut chop_rng = stream.child("chop").rng();
    let chop_trace = chop(g, chop_params, &mut chop_rng);

    let components = g.components(&chop_trace.retained);
    let mut retained = VertexSet::new();
    let mut forests = Vec::new();
    let mut sparsify_traces = Vec::new();
    for (i, component) in components.iter().enumerate() {
        let mut params = SparsifyParams::for_component(k, growth.delta, component.len())?;
        params.center_rule = chop_params.center_rule;
        let mut rng = stream.child_idx("sparsify", i as u64).rng();
        let trace = sparsify(g, component, &params, &mut rng)?;
        if !trace.retained.is_empty() {
            retained.extend(trace.retained.iter().copied());
            forests.push(build_elimination_forest(g, &trace.carved, &trace.portals)?);
        }
        sparsify_traces.push(trace);
    }
    Ok(CoverResult {
        retained,
        forest: EliminationForest::merge(forests)?,
        chop_trace,
        sparsify_traces,
    })
}

/// Which stage of the pipeline an estimate covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoveragePhase {
    /// Probability that the pattern survives the chop pass.
    Chop,
    /// Probability that the pattern survives chop and sparsify.
    Full,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CoverageEstimate {
    pub trials: u64,
    pub successes: u64,
    pub p_hat: f64,
    pub stderr: f64,
}

impl CoverageEstimate {
    fn from_counts(successes: u64, trials: u64) -> CoverageEstimate {
        let p_hat = successes as f64 / trials as f64;
        CoverageEstimate {
            trials,
            successes,
            p_hat,
            stderr: (p_hat * (1.0 - p_hat) / trials as f64).sqrt(),
        }
    }
}

/// Monte Carlo estimate of `Pr[X ⊆ retained]` over independent runs.
/// Trials are distributed across threads; each draws substream
/// `stream/trial[i]`, so the estimate does not depend on the worker count.
pub fn estimate_coverage(
    g: &Graph,
    pattern: &Pattern,
    growth: &GrowthBound,
    phase: CoveragePhase,
    trials: u64,
    stream: &Substream,
) -> Result<CoverageEstimate> {
    if trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    let chop_params = ChopParams::new(pattern.k().max(4), growth)?;
    let successes = (0..trials)
        .into_par_iter()
        .map(|t| {
            let trial = stream.child_idx("trial", t);
            let covered = match phase {
                CoveragePhase::Chop => {
                    let mut rng = trial.child("chop").rng();
                    let out = chop(g, &chop_params, &mut rng);
                    pattern.vertices().is_subset(&out.retained)
                }
                CoveragePhase::Full => {
                    let res = cover_once_with(g, pattern.k().max(4), growth, &chop_params, &trial)
                        .expect("parameters validated");
                    pattern.vertices().is_subset(&res.retained)
                }
            };
            covered as u64
        })
        .sum();
    Ok(CoverageEstimate::from_counts(successes, trials))
}

/// `k^{1-1/(1+δ)} log₂² k`, the exponent scale of the coverage bound.
pub fn exponent_scale(k: usize, delta: usize) -> f64 {
    let lg = crate::clustering::log2_floored(k);
    (k as f64).powf(1.0 - 1.0 / (1.0 + delta as f64)) * lg * lg
}

/// Number of independent runs needed to miss with probability at most
/// `failure_prob`, assuming per-run success probability
/// `2^{-c_hat * exponent_scale(k, δ)}`.
pub fn trial_budget(k: usize, delta: usize, c_hat: f64, failure_prob: f64) -> Result<u64> {
    if !(c_hat >= 0.0) {
        return Err(Error::invalid("c_hat must be nonnegative"));
    }
    if !(failure_prob > 0.0 && failure_prob < 1.0) {
        return Err(Error::invalid("failure_prob must lie in (0, 1)"));
    }
    let budget = ((1.0 / failure_prob).ln() * 2f64.powf(c_hat * exponent_scale(k, delta))).ceil();
    if !budget.is_finite() || budget > TRIAL_CEILING as f64 {
        return Err(Error::resource(format!(
            "trial budget exceeds {TRIAL_CEILING}; use a smaller k"
        )));
    }
    Ok((budget as u64).max(1))
}

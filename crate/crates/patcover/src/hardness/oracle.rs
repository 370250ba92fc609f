//! Exhaustive path search used to verify the gadget claims.
//!
//! The engine enumerates simple paths that must cover a required vertex set
//! (other vertices are optional), with two sound prunes: every still-needed
//! vertex must stay reachable from the search head, and a needed interior
//! vertex must keep two usable neighbors. The gadget graphs are almost all
//! degree two, so the search space collapses quickly.

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Vertex ceiling for the standalone Hamiltonian-path oracle.
pub const HAM_BRUTE_FORCE_LIMIT: usize = 30;

/// Internal ceiling for the gadget verifiers; the two-chain miniatures with
/// their endpoint gadgets and corridors do not fit in 30 vertices.
pub(crate) const GADGET_SEARCH_LIMIT: usize = 120;

pub fn is_hamiltonian_path(g: &Graph, seq: &[usize]) -> bool {
    if seq.len() != g.n() || g.n() == 0 {
        return false;
    }
    let mut seen = vec![false; g.n()];
    for &v in seq {
        if v >= g.n() || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    seq.windows(2).all(|w| g.has_edge(w[0], w[1]))
}

pub fn is_hamiltonian_cycle(g: &Graph, seq: &[usize]) -> bool {
    if g.n() < 3 {
        return false;
    }
    is_hamiltonian_path(g, seq) && g.has_edge(seq[g.n() - 1], seq[0])
}

/// Exhaustive Hamiltonian-path existence on small graphs.
pub fn brute_force_ham_path(g: &Graph) -> Result<Option<Vec<usize>>> {
    if g.n() > HAM_BRUTE_FORCE_LIMIT {
        return Err(Error::resource(format!(
            "hamiltonian brute force limited to {HAM_BRUTE_FORCE_LIMIT} vertices, got {}",
            g.n()
        )));
    }
    if g.n() == 0 {
        return Ok(None);
    }
    let required = vec![true; g.n()];
    for s in 0..g.n() {
        let mut found = None;
        search(g, s, None, &required, &mut |path| {
            found = Some(path.to_vec());
            true
        });
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// All simple paths from `s` to `t` that visit every vertex marked in
/// `required`; unmarked vertices may be skipped.
pub(crate) fn enumerate_covering_paths(
    g: &Graph,
    s: usize,
    t: usize,
    required: &[bool],
) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    search(g, s, Some(t), required, &mut |path| {
        out.push(path.to_vec());
        false
    });
    out
}

/// Core DFS. `on_found` returns true to stop the search.
fn search(
    g: &Graph,
    s: usize,
    t: Option<usize>,
    required: &[bool],
    on_found: &mut dyn FnMut(&[usize]) -> bool,
) {
    debug_assert!(g.n() <= GADGET_SEARCH_LIMIT);
    let mut visited = vec![false; g.n()];
    let mut needed = (0..g.n()).filter(|&v| required[v] && v != s).count();
    visited[s] = true;
    let mut path = vec![s];
    let mut scratch = Scratch {
        seen: vec![0u32; g.n()],
        generation: 0,
        queue: Vec::new(),
    };
    dfs(
        g,
        t,
        required,
        &mut visited,
        &mut path,
        &mut needed,
        &mut scratch,
        on_found,
    );
}

struct Scratch {
    seen: Vec<u32>,
    generation: u32,
    queue: Vec<usize>,
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    g: &Graph,
    t: Option<usize>,
    required: &[bool],
    visited: &mut Vec<bool>,
    path: &mut Vec<usize>,
    needed: &mut usize,
    scratch: &mut Scratch,
    on_found: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    let head = *path.last().unwrap();
    if *needed == 0 {
        match t {
            Some(t) if head == t => return on_found(path),
            None => {
                if on_found(path) {
                    return true;
                }
            }
            _ => {}
        }
    }
    if let Some(t) = t {
        if head == t {
            return false; // an s-t path cannot continue past t
        }
    }
    if !feasible(g, t, required, visited, head, scratch) {
        return false;
    }
    for w in g.neighbors(head) {
        if visited[w] {
            continue;
        }
        visited[w] = true;
        if required[w] {
            *needed -= 1;
        }
        path.push(w);
        if dfs(g, t, required, visited, path, needed, scratch, on_found) {
            return true;
        }
        path.pop();
        if required[w] {
            *needed += 1;
        }
        visited[w] = false;
    }
    false
}

/// Sound prunes: reachability of everything still needed, and degree
/// feasibility of needed interior vertices.
fn feasible(
    g: &Graph,
    t: Option<usize>,
    required: &[bool],
    visited: &[bool],
    head: usize,
    scratch: &mut Scratch,
) -> bool {
    scratch.generation += 1;
    let gen = scratch.generation;
    scratch.queue.clear();
    scratch.queue.push(head);
    scratch.seen[head] = gen;
    let mut qi = 0;
    while qi < scratch.queue.len() {
        let u = scratch.queue[qi];
        qi += 1;
        for w in g.neighbors(u) {
            if scratch.seen[w] != gen && !visited[w] {
                scratch.seen[w] = gen;
                scratch.queue.push(w);
            }
        }
    }
    if let Some(t) = t {
        if scratch.seen[t] != gen {
            return false;
        }
    }
    let mut loose_ends = 0;
    for v in 0..g.n() {
        if visited[v] || !required[v] {
            continue;
        }
        if scratch.seen[v] != gen {
            return false;
        }
        let avail = g
            .neighbors(v)
            .filter(|&w| !visited[w] || w == head)
            .count();
        match t {
            Some(t) if v == t => {
                if avail == 0 {
                    return false;
                }
            }
            Some(_) => {
                if avail < 2 {
                    return false;
                }
            }
            None => {
                // One needed vertex may end the path with a single edge.
                if avail == 0 {
                    return false;
                }
                if avail == 1 {
                    loose_ends += 1;
                    if loose_ends > 1 {
                        return false;
                    }
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::generate_grid;

    #[test]
    fn path_graph_has_ham_path() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let p = brute_force_ham_path(&g).unwrap().unwrap();
        assert!(is_hamiltonian_path(&g, &p));
    }

    #[test]
    fn claw_has_none() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(brute_force_ham_path(&g).unwrap().is_none());
    }

    #[test]
    fn cycle_has_one() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let p = brute_force_ham_path(&g).unwrap().unwrap();
        assert!(is_hamiltonian_path(&g, &p));
    }

    #[test]
    fn limit_enforced() {
        let (g, _) = generate_grid(2, 6).unwrap();
        assert!(brute_force_ham_path(&g).is_err());
    }

    #[test]
    fn covering_enumeration_with_optional_vertices() {
        // Square 0-1-2-3 plus a pendant pair hanging off the 1-2 edge:
        //   3 --- 2       paths 0->3 must cover {0,1,2,3}; vertices 4, 5
        //   |     |       (the "square" over edge 1-2) are optional.
        //   0 --- 1
        let g = Graph::from_edges(
            6,
            &[(0, 1), (1, 2), (2, 3), (0, 3), (1, 4), (4, 5), (5, 2)],
        )
        .unwrap();
        let mut required = vec![true; 6];
        required[4] = false;
        required[5] = false;
        let paths = enumerate_covering_paths(&g, 0, 3, &required);
        // 0-1-2-3 (skipping the pendant pair) and 0-1-4-5-2-3 (taking it).
        assert_eq!(paths.len(), 2);
        assert!(paths.contains(&vec![0, 1, 2, 3]));
        assert!(paths.contains(&vec![0, 1, 4, 5, 2, 3]));
    }

    #[test]
    fn cycle_validator() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert!(is_hamiltonian_cycle(&g, &[0, 1, 2, 3]));
        assert!(!is_hamiltonian_cycle(&g, &[0, 1, 3, 2]));
    }
}

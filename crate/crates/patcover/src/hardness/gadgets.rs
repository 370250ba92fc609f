//! The Hamiltonicity gadgets: 2-chains, attachment squares, OR-check
//! corridors, and tube gadgets.
//!
//! A 2-chain is a tall ladder: two horizontal rails (rows 0 and 2) with a
//! full rung through row 1 at every column, and a 6-cycle endpoint gadget at
//! each end whose terminal offers exactly two ways in. Every middle-row
//! vertex forces its whole rung, so a terminal-to-terminal Hamiltonian path
//! must serpentine, and the endpoint choice fixes one of two phases — the
//! chain's two *modes*. Each horizontal rail edge is traversed by exactly
//! one mode, which is what lets attached gadgets read a mode off a single
//! designated edge.
//!
//! The chain is split into chunks of 8 columns; per chunk the two middle
//! top-rail edges are the designated attachment edges, one consistent with
//! each mode. A gadget attaches by adding two vertices `u, v` above an edge
//! `e`, forming a square, so a traversal consistent with `e` may detour
//! `x-u-...-v-y` instead of crossing `e` directly.

use std::collections::BTreeMap;

use crate::embed::l1_distance;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::GridEmbedding;

use super::layout::{unit_steps, Coord, GridBuilder};
use super::oracle::enumerate_covering_paths;

/// The two canonical traversals of a 2-chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Mode {
    Low,
    High,
}

impl Mode {
    pub fn other(self) -> Mode {
        match self {
            Mode::Low => Mode::High,
            Mode::High => Mode::Low,
        }
    }
}

/// Rail columns per chunk.
pub const CHUNK_LEN: usize = 8;
/// Width of one endpoint gadget in columns.
const END_W: i64 = 2;
/// Local x of the first rail column.
pub(crate) const RAIL_X0: i64 = 2;

/// Local x-extent of a chain with the given number of chunks.
pub(crate) fn chain_width(chunks: usize) -> i64 {
    RAIL_X0 + (CHUNK_LEN * chunks) as i64 + 1 + END_W
}

/// Offset (rail index) of the left endpoint of a chunk's attachment edge
/// for the given consistency. High-consistent edges sit at odd offsets.
pub(crate) fn attach_offset(chunk: usize, consistency: Mode) -> usize {
    match consistency {
        Mode::High => CHUNK_LEN * chunk + 3,
        Mode::Low => CHUNK_LEN * chunk + 4,
    }
}

/// A designated attachment edge together with its mode consistency.
#[derive(Clone, Copy, Debug)]
pub struct ModeEdge {
    pub chunk: usize,
    pub consistency: Mode,
    /// Vertex ids of the top-rail edge endpoints, left then right.
    pub left: usize,
    pub right: usize,
}

/// Ids of one placed chain.
#[derive(Clone, Debug)]
pub struct ChainIds {
    pub origin: Coord,
    pub chunks: usize,
    pub bottom: Vec<usize>,
    pub middle: Vec<usize>,
    pub top: Vec<usize>,
    /// Left endpoint gadget: terminal, the two branch vertices, and the arc.
    pub terminal_left: usize,
    pub left_p: usize,
    pub left_q: usize,
    pub left_arc: [usize; 3],
    pub terminal_right: usize,
    pub right_p: usize,
    pub right_q: usize,
    pub right_arc: [usize; 3],
}

impl ChainIds {
    pub fn offsets(&self) -> usize {
        CHUNK_LEN * self.chunks
    }

    pub fn attachment_edge(&self, chunk: usize, consistency: Mode) -> (usize, usize) {
        let o = attach_offset(chunk, consistency);
        (self.top[o], self.top[o + 1])
    }
}

/// Places a chain with its local frame at `origin` (x along dim 0, y along
/// dim 1; all other coordinates fixed).
pub(crate) fn place_chain(
    b: &mut GridBuilder,
    origin: &[i64],
    chunks: usize,
) -> Result<ChainIds> {
    if chunks == 0 {
        return Err(Error::invalid("a chain needs at least one chunk"));
    }
    let at = |x: i64, y: i64| -> Coord {
        let mut c = origin.to_vec();
        c[0] += x;
        c[1] += y;
        c
    };
    let offsets = CHUNK_LEN * chunks;
    let last = RAIL_X0 + offsets as i64;

    let mut bottom = Vec::with_capacity(offsets + 1);
    let mut middle = Vec::with_capacity(offsets + 1);
    let mut top = Vec::with_capacity(offsets + 1);
    for o in 0..=offsets as i64 {
        bottom.push(b.vertex(&at(RAIL_X0 + o, 0))?);
        middle.push(b.vertex(&at(RAIL_X0 + o, 1))?);
        top.push(b.vertex(&at(RAIL_X0 + o, 2))?);
    }
    for o in 0..offsets {
        b.edge(bottom[o], bottom[o + 1])?;
        b.edge(top[o], top[o + 1])?;
    }
    for o in 0..=offsets {
        b.edge(bottom[o], middle[o])?;
        b.edge(middle[o], top[o])?;
    }

    // Endpoint gadget: a 6-cycle through the terminal; entering at the
    // terminal and covering the cycle exits at p (into the bottom rail) or
    // q (into the top rail), and nothing else works.
    let left_arc = [
        b.vertex(&at(0, 0))?,
        b.vertex(&at(0, 1))?,
        b.vertex(&at(0, 2))?,
    ];
    let left_p = b.vertex(&at(1, 0))?;
    let terminal_left = b.vertex(&at(1, 1))?;
    let left_q = b.vertex(&at(1, 2))?;
    b.edge(terminal_left, left_p)?;
    b.edge(terminal_left, left_q)?;
    b.edge(left_p, left_arc[0])?;
    b.edge(left_arc[0], left_arc[1])?;
    b.edge(left_arc[1], left_arc[2])?;
    b.edge(left_arc[2], left_q)?;
    b.edge(left_p, bottom[0])?;
    b.edge(left_q, top[0])?;

    let right_arc = [
        b.vertex(&at(last + 2, 0))?,
        b.vertex(&at(last + 2, 1))?,
        b.vertex(&at(last + 2, 2))?,
    ];
    let right_p = b.vertex(&at(last + 1, 0))?;
    let terminal_right = b.vertex(&at(last + 1, 1))?;
    let right_q = b.vertex(&at(last + 1, 2))?;
    b.edge(terminal_right, right_p)?;
    b.edge(terminal_right, right_q)?;
    b.edge(right_p, right_arc[0])?;
    b.edge(right_arc[0], right_arc[1])?;
    b.edge(right_arc[1], right_arc[2])?;
    b.edge(right_arc[2], right_q)?;
    b.edge(right_p, bottom[offsets])?;
    b.edge(right_q, top[offsets])?;

    Ok(ChainIds {
        origin: origin.to_vec(),
        chunks,
        bottom,
        middle,
        top,
        terminal_left,
        left_p,
        left_q,
        left_arc,
        terminal_right,
        right_p,
        right_q,
        right_arc,
    })
}

/// An attachment square above a top-rail edge: `u` over the left endpoint,
/// `v` over the right one, edges `left-u`, `u-v`, `v-right`.
#[derive(Clone, Copy, Debug)]
pub struct SquareIds {
    pub u: usize,
    pub v: usize,
    pub edge_left: usize,
    pub edge_right: usize,
    /// Offset of the edge's left endpoint on the chain.
    pub offset: usize,
}

pub(crate) fn place_square(
    b: &mut GridBuilder,
    chain: &ChainIds,
    chunk: usize,
    consistency: Mode,
) -> Result<SquareIds> {
    let o = attach_offset(chunk, consistency);
    let at = |x: i64, y: i64| -> Coord {
        let mut c = chain.origin.clone();
        c[0] += x;
        c[1] += y;
        c
    };
    let u = b.vertex(&at(RAIL_X0 + o as i64, 3))?;
    let v = b.vertex(&at(RAIL_X0 + o as i64 + 1, 3))?;
    let (el, er) = (chain.top[o], chain.top[o + 1]);
    b.edge(el, u)?;
    b.edge(u, v)?;
    b.edge(v, er)?;
    Ok(SquareIds {
        u,
        v,
        edge_left: el,
        edge_right: er,
        offset: o,
    })
}

/// Whether a mode's serpentine leaves rail column `offset` at the top,
/// i.e. traverses the top edge `(offset, offset+1)`.
pub(crate) fn exits_top(mode: Mode, offset: usize) -> bool {
    match mode {
        Mode::Low => offset % 2 == 0,
        Mode::High => offset % 2 == 1,
    }
}

/// Emits the canonical traversal of a chain, left terminal to right. For
/// each traversed top edge the callback may supply a detour: the vertex
/// sequence strictly between the edge endpoints.
pub(crate) fn emit_traversal(
    ids: &ChainIds,
    mode: Mode,
    expansion: &mut dyn FnMut(usize) -> Option<Vec<usize>>,
    out: &mut Vec<usize>,
) {
    match mode {
        Mode::Low => out.extend([
            ids.terminal_left,
            ids.left_q,
            ids.left_arc[2],
            ids.left_arc[1],
            ids.left_arc[0],
            ids.left_p,
        ]),
        Mode::High => out.extend([
            ids.terminal_left,
            ids.left_p,
            ids.left_arc[0],
            ids.left_arc[1],
            ids.left_arc[2],
            ids.left_q,
        ]),
    }
    let offsets = ids.offsets();
    for o in 0..=offsets {
        let from_bottom = match mode {
            Mode::Low => o % 2 == 0,
            Mode::High => o % 2 == 1,
        };
        if from_bottom {
            out.extend([ids.bottom[o], ids.middle[o], ids.top[o]]);
        } else {
            out.extend([ids.top[o], ids.middle[o], ids.bottom[o]]);
        }
        if o < offsets && exits_top(mode, o) {
            if let Some(detour) = expansion(o) {
                out.extend(detour);
            }
        }
    }
    let exit_top = exits_top(mode, offsets);
    if exit_top {
        out.extend([
            ids.right_q,
            ids.right_arc[2],
            ids.right_arc[1],
            ids.right_arc[0],
            ids.right_p,
            ids.terminal_right,
        ]);
    } else {
        out.extend([
            ids.right_p,
            ids.right_arc[0],
            ids.right_arc[1],
            ids.right_arc[2],
            ids.right_q,
            ids.terminal_right,
        ]);
    }
}

// ── Standalone two-chain, for verification ──────────────────────────────

/// A standalone 2-chain in the plane, with optional attached squares. The
/// verification surface for the mode-counting claims.
pub struct TwoChain {
    builder: GridBuilder,
    ids: ChainIds,
    squares: Vec<Option<(Mode, SquareIds)>>,
}

/// Builds a chain with the given number of chunks.
pub fn build_two_chain(chunks: usize) -> Result<TwoChain> {
    let mut builder = GridBuilder::new(2);
    let ids = place_chain(&mut builder, &[0, 0], chunks)?;
    Ok(TwoChain {
        builder,
        squares: vec![None; chunks],
        ids,
    })
}

/// Attaches a plain square gadget to the designated edge of a chunk.
pub fn attach_gadget_edge(
    chain: &mut TwoChain,
    chunk: usize,
    consistency: Mode,
) -> Result<SquareIds> {
    if chunk >= chain.ids.chunks {
        return Err(Error::invalid(format!("chunk {chunk} out of range")));
    }
    if chain.squares[chunk].is_some() {
        return Err(Error::invalid(format!(
            "chunk {chunk} already carries a gadget"
        )));
    }
    let square = place_square(&mut chain.builder, &chain.ids, chunk, consistency)?;
    chain.squares[chunk] = Some((consistency, square));
    Ok(square)
}

impl TwoChain {
    pub fn graph(&self) -> (Graph, GridEmbedding) {
        self.builder.snapshot().expect("chain layout is valid")
    }

    pub fn terminals(&self) -> (usize, usize) {
        (self.ids.terminal_left, self.ids.terminal_right)
    }

    pub fn ids(&self) -> &ChainIds {
        &self.ids
    }

    pub fn chunks(&self) -> usize {
        self.ids.chunks
    }

    pub fn square(&self, chunk: usize) -> Option<&(Mode, SquareIds)> {
        self.squares[chunk].as_ref()
    }

    pub fn attachment_edge(&self, chunk: usize, consistency: Mode) -> ModeEdge {
        let (left, right) = self.ids.attachment_edge(chunk, consistency);
        ModeEdge {
            chunk,
            consistency,
            left,
            right,
        }
    }

    /// Canonical mode path (no detours); a Hamiltonian path of the bare
    /// chain.
    pub fn mode_path(&self, mode: Mode) -> Vec<usize> {
        let mut out = Vec::new();
        emit_traversal(&self.ids, mode, &mut |_| None, &mut out);
        out
    }

    /// Horizontal rail edges traversed by a mode's canonical path.
    pub fn mode_rail_edges(&self, mode: Mode) -> Vec<(usize, usize)> {
        let path = self.mode_path(mode);
        let last_rail = RAIL_X0 + self.ids.offsets() as i64;
        let rail_edge = |a: usize, b: usize| {
            let ca = self.builder.coord(a);
            let cb = self.builder.coord(b);
            ca[1] == cb[1]
                && (ca[1] == 0 || ca[1] == 2)
                && (ca[0] - cb[0]).abs() == 1
                && ca[0].min(cb[0]) >= RAIL_X0
                && ca[0].max(cb[0]) <= last_rail
        };
        path.windows(2)
            .filter(|w| rail_edge(w[0], w[1]))
            .map(|w| (w[0].min(w[1]), w[0].max(w[1])))
            .collect()
    }

    /// All terminal-to-terminal traversals that cover every chain vertex;
    /// attached square vertices are optional. This is the exhaustive oracle
    /// behind the mode-counting claims.
    pub fn chunk_traversals(&self) -> Vec<Vec<usize>> {
        let (g, _) = self.graph();
        let mut required = vec![true; g.n()];
        for sq in self.squares.iter().flatten() {
            required[sq.1.u] = false;
            required[sq.1.v] = false;
        }
        enumerate_covering_paths(&g, self.ids.terminal_left, self.ids.terminal_right, &required)
    }
}

// ── Tube gadget ─────────────────────────────────────────────────────────

/// A `2 x 2 x λ` grid with its canonical Hamiltonian cycle. The cycle
/// contains every cross edge `f_i = (a[i], b[i])` on the attachment face,
/// so a path entering through any square can splice the whole tube (and
/// detour through every other square) in place of one chain edge.
#[derive(Clone, Debug)]
pub struct TubeIds {
    /// Attachment-face rails: `a[i]` above the left square vertex of chain
    /// `i`, `b[i]` above the right one.
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    /// Far-face rails: `d[i]` above `a[i]`, `c[i]` above `b[i]`.
    pub d: Vec<usize>,
    pub c: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl TubeIds {
    pub fn lambda(&self) -> usize {
        self.a.len()
    }

    pub fn vertices(&self) -> Vec<usize> {
        let mut all = Vec::new();
        all.extend(&self.a);
        all.extend(&self.b);
        all.extend(&self.c);
        all.extend(&self.d);
        all
    }

    pub fn cross_edge(&self, i: usize) -> (usize, usize) {
        (self.a[i], self.b[i])
    }
}

/// Places a tube spanning `z ∈ [0, λ)` relative to `origin`, with the
/// attachment face at local `y = 0` and columns local `x ∈ {0, 1}`.
pub(crate) fn place_tube(b: &mut GridBuilder, origin: &[i64], lambda: usize) -> Result<TubeIds> {
    if lambda < 2 {
        return Err(Error::invalid("tube needs lambda >= 2"));
    }
    let at = |x: i64, y: i64, z: i64| -> Coord {
        let mut c = origin.to_vec();
        c[0] += x;
        c[1] += y;
        c[2] += z;
        c
    };
    let mut a = Vec::new();
    let mut bb = Vec::new();
    let mut c = Vec::new();
    let mut d = Vec::new();
    for z in 0..lambda as i64 {
        a.push(b.vertex(&at(0, 0, z))?);
        bb.push(b.vertex(&at(1, 0, z))?);
        d.push(b.vertex(&at(0, 1, z))?);
        c.push(b.vertex(&at(1, 1, z))?);
    }
    for z in 0..lambda {
        b.edge(a[z], bb[z])?;
        b.edge(d[z], c[z])?;
        b.edge(a[z], d[z])?;
        b.edge(bb[z], c[z])?;
        if z + 1 < lambda {
            b.edge(a[z], a[z + 1])?;
            b.edge(bb[z], bb[z + 1])?;
            b.edge(c[z], c[z + 1])?;
            b.edge(d[z], d[z + 1])?;
        }
    }

    // Canonical cycle: serpentine over the attachment face, using every
    // cross edge a[z]-b[z], then back along the far face.
    let mut cycle = Vec::with_capacity(4 * lambda);
    for z in 0..lambda {
        if z % 2 == 0 {
            cycle.push(a[z]);
            cycle.push(bb[z]);
        } else {
            cycle.push(bb[z]);
            cycle.push(a[z]);
        }
    }
    let start_c = (lambda - 1) % 2 == 0;
    for z in (0..lambda).rev() {
        let c_first = start_c == ((lambda - 1 - z) % 2 == 0);
        if c_first {
            cycle.push(c[z]);
            cycle.push(d[z]);
        } else {
            cycle.push(d[z]);
            cycle.push(c[z]);
        }
    }
    Ok(TubeIds {
        a,
        b: bb,
        c,
        d,
        cycle,
    })
}

/// Standalone tube for the cycle claims: graph plus canonical cycle.
pub fn build_tube(lambda: usize) -> Result<(Graph, GridEmbedding, TubeIds)> {
    let mut b = GridBuilder::new(3);
    let tube = place_tube(&mut b, &[0, 0, 0], lambda)?;
    let (g, emb) = b.finish()?;
    Ok((g, emb, tube))
}

/// Walks the canonical cycle from `a[i]` the long way round to `b[i]`,
/// replacing every other cross edge `f_j` by the detour through chain `j`'s
/// square `(u_j, v_j)`. The result covers the entire tube and every square
/// except the entering one.
pub(crate) fn tube_splice(
    tube: &TubeIds,
    i: usize,
    squares: &BTreeMap<usize, (usize, usize)>, // chain index -> (u, v)
) -> Vec<usize> {
    let n = tube.cycle.len();
    let pos = |v: usize| tube.cycle.iter().position(|&x| x == v).unwrap();
    let pa = pos(tube.a[i]);
    let pb = pos(tube.b[i]);
    // Walk from a[i] in the direction that does not start with b[i].
    let step: isize = if (pa + 1) % n == pb { n as isize - 1 } else { 1 };
    let mut seq = Vec::with_capacity(n);
    let mut cur = pa as isize;
    loop {
        seq.push(tube.cycle[cur as usize]);
        if tube.cycle[cur as usize] == tube.b[i] {
            break;
        }
        cur = (cur + step).rem_euclid(n as isize);
    }
    // Insert square detours wherever the walk uses a cross edge f_j.
    let mut out = Vec::with_capacity(seq.len() + 2 * squares.len());
    for w in 0..seq.len() {
        out.push(seq[w]);
        if w + 1 < seq.len() {
            for (&j, &(u, v)) in squares {
                if j == i {
                    continue;
                }
                if seq[w] == tube.a[j] && seq[w + 1] == tube.b[j] {
                    out.push(u);
                    out.push(v);
                } else if seq[w] == tube.b[j] && seq[w + 1] == tube.a[j] {
                    out.push(v);
                    out.push(u);
                }
            }
        }
    }
    out
}

// ── Corridors ───────────────────────────────────────────────────────────

/// Places the two corridors of an OR-check along the given waypoint
/// polylines (endpoints included, and already placed as square vertices).
/// Both corridors must come out at the same even length; routes are
/// padded upstream to arrange that.
pub(crate) fn place_corridor(
    b: &mut GridBuilder,
    u_way: &[Coord],
    v_way: &[Coord],
) -> Result<(Vec<usize>, Vec<usize>)> {
    let u_steps = unit_steps(u_way)?;
    let v_steps = unit_steps(v_way)?;
    if u_steps.len() != v_steps.len() {
        return Err(Error::layout(format!(
            "corridor lengths differ: {} vs {}",
            u_steps.len(),
            v_steps.len()
        )));
    }
    if u_steps.len() % 2 != 0 {
        return Err(Error::layout(format!(
            "corridor length {} is odd",
            u_steps.len()
        )));
    }
    let lay = |b: &mut GridBuilder, way: &[Coord], steps: &[Coord]| -> Result<Vec<usize>> {
        let start = b
            .get(&way[0])
            .ok_or_else(|| Error::layout("corridor start is not a placed vertex"))?;
        let end = b
            .get(steps.last().expect("nonempty corridor"))
            .ok_or_else(|| Error::layout("corridor end is not a placed vertex"))?;
        let mut ids = vec![start];
        for c in &steps[..steps.len() - 1] {
            ids.push(b.vertex(c)?);
        }
        ids.push(end);
        for w in ids.windows(2) {
            b.edge(w[0], w[1])?;
        }
        Ok(ids)
    };
    let u_ids = lay(b, u_way, &u_steps)?;
    let v_ids = lay(b, v_way, &v_steps)?;
    Ok((u_ids, v_ids))
}

/// Waypoints for a same-column corridor between squares on chains `za` and
/// `zb` (global z planes), used for intra-variable OR-checks and the
/// miniatures. `col` is the global x of the A-side edge's left endpoint,
/// `level` the reserved plenum height. When `swapped`, the B-side square's
/// roles are mirrored so the corridor pair has even length.
pub(crate) struct StraightCorridor {
    pub col: i64,
    pub za: i64,
    pub zb: i64,
    pub level: i64,
    pub swapped: bool,
    /// All remaining coordinates of the ambient space (y of the A-chain
    /// base plane is origin[1]).
    pub base: Coord,
}

impl StraightCorridor {
    /// Produces the u- and v-corridor waypoint polylines.
    pub fn waypoints(&self) -> (Vec<Coord>, Vec<Coord>) {
        let at = |x: i64, y: i64, z: i64| -> Coord {
            let mut c = self.base.clone();
            c[0] = x;
            c[1] += y;
            c[2] = z;
            c
        };
        let (c, h, za, zb) = (self.col, self.level, self.za, self.zb);
        if !self.swapped {
            let u = vec![
                at(c, 3, za),
                at(c, h, za),
                at(c, h, zb),
                at(c - 3, h, zb),
                at(c - 3, 3, zb),
                at(c, 3, zb),
            ];
            let v = vec![
                at(c + 1, 3, za),
                at(c + 1, h + 2, za),
                at(c + 1, h + 2, zb),
                at(c + 2, h + 2, zb),
                at(c + 2, 3, zb),
                at(c + 1, 3, zb),
            ];
            (u, v)
        } else {
            let u = vec![
                at(c, 3, za),
                at(c, h, za),
                at(c, h, zb),
                at(c + 4, h, zb),
                at(c + 4, 3, zb),
                at(c + 1, 3, zb),
            ];
            let v = vec![
                at(c + 1, 3, za),
                at(c + 1, h + 2, za),
                at(c + 1, h + 2, zb),
                at(c - 1, h + 2, zb),
                at(c - 1, 3, zb),
                at(c, 3, zb),
            ];
            (u, v)
        }
    }
}

// ── OR-check miniature ──────────────────────────────────────────────────

/// Two short chains wired into one path with an OR-check between them; the
/// desk-scale verification object for the OR-check claim.
pub struct OrMiniature {
    pub graph: Graph,
    pub embedding: GridEmbedding,
    pub chain_a: ChainIds,
    pub chain_b: ChainIds,
    pub square_a: SquareIds,
    pub square_b: SquareIds,
    /// Consistency of the edges the OR-check attaches to.
    pub side_a: Mode,
    pub side_b: Mode,
    pub corridor_u: Vec<usize>,
    pub corridor_v: Vec<usize>,
    pub swapped: bool,
}

/// Builds the miniature: 1-chunk chains at z = 0 and z = 1, an OR-check on
/// the designated edges, and the terminals wired so a Hamiltonian path runs
/// left terminal of A to left terminal of B.
pub fn or_miniature(side_a: Mode, side_b: Mode) -> Result<OrMiniature> {
    let mut b = GridBuilder::new(3);
    let chain_a = place_chain(&mut b, &[0, 0, 0], 1)?;
    let chain_b = place_chain(&mut b, &[0, 0, 1], 1)?;
    let square_a = place_square(&mut b, &chain_a, 0, side_a)?;
    let square_b = place_square(&mut b, &chain_b, 0, side_b)?;
    // Wiring: the right terminals are z-adjacent.
    b.edge(chain_a.terminal_right, chain_b.terminal_right)?;

    let col_a = RAIL_X0 + square_a.offset as i64;
    let col_b = RAIL_X0 + square_b.offset as i64;
    if col_a != col_b {
        // Different consistency sides sit one column apart; the straight
        // corridor needs a common column, so only equal sides or an
        // explicit offset would match. Route from A's column with an x-jog
        // folded into the swap logic below by treating the B square's own
        // column; for simplicity the miniature supports equal or adjacent
        // columns via the swap trick.
        return route_miniature_mixed(b, chain_a, chain_b, square_a, square_b, side_a, side_b);
    }
    let ua = b.coord(square_a.u).to_vec();
    let ub_left = b.coord(square_b.u).to_vec();
    let swapped = l1_distance(&ua, &ub_left) % 2 == 1;
    let spec = StraightCorridor {
        col: col_a,
        za: 0,
        zb: 1,
        level: 6,
        swapped,
        base: vec![0, 0, 0],
    };
    let (u_way, v_way) = spec.waypoints();
    let (corridor_u, corridor_v) = place_corridor(&mut b, &u_way, &v_way)?;
    let (graph, embedding) = b.finish()?;
    Ok(OrMiniature {
        graph,
        embedding,
        chain_a,
        chain_b,
        square_a,
        square_b,
        side_a,
        side_b,
        corridor_u,
        corridor_v,
        swapped,
    })
}

/// Mixed-consistency miniature: the two squares sit on adjacent columns, so
/// the corridor runs from A's column and lands with an x-offset of one,
/// which is exactly the swapped landing of the straight corridor.
fn route_miniature_mixed(
    mut b: GridBuilder,
    chain_a: ChainIds,
    chain_b: ChainIds,
    square_a: SquareIds,
    square_b: SquareIds,
    side_a: Mode,
    side_b: Mode,
) -> Result<OrMiniature> {
    let col_a = RAIL_X0 + square_a.offset as i64;
    let at = |x: i64, y: i64, z: i64| -> Coord {
        vec![x, y, z]
    };
    let ua = b.coord(square_a.u).to_vec();
    let ub = b.coord(square_b.u).to_vec();
    let parity_direct = l1_distance(&ua, &ub) % 2;
    // Land on u_b / v_b directly when the parity works, otherwise mirror
    // the landing.
    let swapped = parity_direct == 1;
    let (h, za, zb) = (6i64, 0i64, 1i64);
    let cb = RAIL_X0 + square_b.offset as i64;
    let (u_land, v_land) = if swapped {
        (cb + 1, cb)
    } else {
        (cb, cb + 1)
    };
    let (mut ku, mut kv) = if swapped {
        (cb + 4, cb - 1)
    } else {
        (cb - 3, cb + 2)
    };
    // The chains sit one column apart here, so an approach column can land
    // on the departure shafts; dodge outward (in steps of 2 to keep
    // corridor parity).
    for k in [&mut ku, &mut kv] {
        while *k == col_a || *k == col_a + 1 {
            *k += if *k > cb { 2 } else { -2 };
        }
    }
    let u_way = vec![
        at(col_a, 3, za),
        at(col_a, h, za),
        at(col_a, h, zb),
        at(ku, h, zb),
        at(ku, 3, zb),
        at(u_land, 3, zb),
    ];
    let v_way = vec![
        at(col_a + 1, 3, za),
        at(col_a + 1, h + 2, za),
        at(col_a + 1, h + 2, zb),
        at(kv, h + 2, zb),
        at(kv, 3, zb),
        at(v_land, 3, zb),
    ];
    // Equalize lengths by padding the shorter route's approach column.
    let (u_way, v_way) = equalize(u_way, v_way)?;
    let (corridor_u, corridor_v) = place_corridor(&mut b, &u_way, &v_way)?;
    let (graph, embedding) = b.finish()?;
    Ok(OrMiniature {
        graph,
        embedding,
        chain_a,
        chain_b,
        square_a,
        square_b,
        side_a,
        side_b,
        corridor_u,
        corridor_v,
        swapped,
    })
}

/// Pads the shorter of two waypoint routes by pushing its approach column
/// (second-to-last corner pair) outward. Corners at positions len-3 and
/// len-2 share their x coordinate, and the final landing x stays fixed.
pub(crate) fn equalize(
    mut u_way: Vec<Coord>,
    mut v_way: Vec<Coord>,
) -> Result<(Vec<Coord>, Vec<Coord>)> {
    let len = |way: &[Coord]| -> i64 {
        way.windows(2)
            .map(|w| l1_distance(&w[0], &w[1]) as i64)
            .sum()
    };
    let (lu, lv) = (len(&u_way), len(&v_way));
    let diff = lu - lv;
    if diff % 2 != 0 {
        return Err(Error::layout("corridor parity mismatch"));
    }
    let pad = |way: &mut Vec<Coord>, by: i64| {
        let n = way.len();
        // Shift the whole trailing run at the approach column outward,
        // away from the landing point.
        let landing_x = way[n - 1][0];
        let kx = way[n - 2][0];
        let dir = if kx >= landing_x { 1 } else { -1 };
        // Positions 0 and 1 are the departure shaft; never shift those.
        let mut i = n - 2;
        while i >= 2 && way[i][0] == kx {
            way[i][0] = kx + dir * by;
            i -= 1;
        }
    };
    if diff > 0 {
        pad(&mut v_way, diff / 2);
    } else if diff < 0 {
        pad(&mut u_way, -diff / 2);
    }
    Ok((u_way, v_way))
}

impl OrMiniature {
    pub fn terminals(&self) -> (usize, usize) {
        (self.chain_a.terminal_left, self.chain_b.terminal_left)
    }

    /// Mode of each chain along a Hamiltonian path of the miniature,
    /// determined from marker rail edges no gadget ever attaches to.
    pub fn classify(&self, path: &[usize]) -> (Mode, Mode) {
        let uses = |a: usize, b: usize| {
            path.windows(2)
                .any(|w| (w[0] == a && w[1] == b) || (w[0] == b && w[1] == a))
        };
        let mode_of = |chain: &ChainIds| {
            // Top edge (0,1) belongs to Low, top edge (1,2) to High.
            let low = uses(chain.top[0], chain.top[1]);
            let high = uses(chain.top[1], chain.top[2]);
            assert!(low != high, "exactly one marker edge per traversal");
            if low {
                Mode::Low
            } else {
                Mode::High
            }
        };
        (mode_of(&self.chain_a), mode_of(&self.chain_b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::is_valid_path;
    use crate::hardness::oracle::{is_hamiltonian_cycle, is_hamiltonian_path};

    #[test]
    fn bare_chain_has_exactly_two_modes() {
        for chunks in [1, 2] {
            let chain = build_two_chain(chunks).unwrap();
            let (g, emb) = chain.graph();
            emb.validate(&g).unwrap();
            let paths = chain.chunk_traversals();
            assert_eq!(paths.len(), 2, "chunks = {chunks}");
            for p in &paths {
                assert!(is_hamiltonian_path(&g, p));
            }
            // The canonical emissions are exactly those two paths.
            let low = chain.mode_path(Mode::Low);
            let high = chain.mode_path(Mode::High);
            assert!(paths.contains(&low));
            assert!(paths.contains(&high));
        }
    }

    #[test]
    fn mode_rail_edges_are_fixed_and_disjoint() {
        let chain = build_two_chain(2).unwrap();
        let low: std::collections::BTreeSet<_> =
            chain.mode_rail_edges(Mode::Low).into_iter().collect();
        let high: std::collections::BTreeSet<_> =
            chain.mode_rail_edges(Mode::High).into_iter().collect();
        assert!(low.is_disjoint(&high));
        // Together they cover every horizontal rail edge.
        let (g, _) = chain.graph();
        let offsets = chain.ids().offsets();
        assert_eq!(low.len() + high.len(), 2 * offsets);
        let _ = g;
    }

    #[test]
    fn attachment_edge_consistency() {
        // The designated high edge is traversed by the canonical high path
        // and not by the low one, and vice versa.
        let chain = build_two_chain(2).unwrap();
        for chunk in 0..2 {
            for side in [Mode::Low, Mode::High] {
                let e = chain.attachment_edge(chunk, side);
                let uses = |path: &[usize]| {
                    path.windows(2)
                        .any(|w| (w[0] == e.left && w[1] == e.right) || (w[0] == e.right && w[1] == e.left))
                };
                assert_eq!(uses(&chain.mode_path(side)), true);
                assert_eq!(uses(&chain.mode_path(side.other())), false);
            }
        }
    }

    #[test]
    fn attached_chunk_has_exactly_three_traversals() {
        for side in [Mode::Low, Mode::High] {
            let mut chain = build_two_chain(1).unwrap();
            let square = attach_gadget_edge(&mut chain, 0, side).unwrap();
            let (g, emb) = chain.graph();
            emb.validate(&g).unwrap();
            let paths = chain.chunk_traversals();
            assert_eq!(paths.len(), 3, "side = {side:?}");
            // Exactly one traversal covers the square, and it is the
            // consistent mode with the edge replaced by the detour.
            let covering: Vec<_> = paths
                .iter()
                .filter(|p| p.contains(&square.u) && p.contains(&square.v))
                .collect();
            assert_eq!(covering.len(), 1);
            let detour = covering[0];
            assert!(is_valid_path(&g, detour, detour.len(), None));
            let direct = |p: &[usize]| {
                p.windows(2).any(|w| {
                    (w[0] == square.edge_left && w[1] == square.edge_right)
                        || (w[0] == square.edge_right && w[1] == square.edge_left)
                })
            };
            assert!(!direct(detour));
        }
    }

    #[test]
    fn double_attachment_rejected() {
        let mut chain = build_two_chain(1).unwrap();
        attach_gadget_edge(&mut chain, 0, Mode::High).unwrap();
        assert!(attach_gadget_edge(&mut chain, 0, Mode::Low).is_err());
    }

    #[test]
    fn square_sits_in_the_chain_plane() {
        let mut chain = build_two_chain(1).unwrap();
        let square = attach_gadget_edge(&mut chain, 0, Mode::High).unwrap();
        let (g, emb) = chain.graph();
        emb.validate(&g).unwrap();
        // u and v lie one row above the edge endpoints.
        let (el, u) = (emb.coords(square.edge_left), emb.coords(square.u));
        assert_eq!(u[0], el[0]);
        assert_eq!(u[1], el[1] + 1);
    }

    #[test]
    fn tube_cycles_are_hamiltonian_with_all_cross_edges() {
        for lambda in 2..=6 {
            let (g, emb, tube) = build_tube(lambda).unwrap();
            emb.validate(&g).unwrap();
            assert_eq!(tube.cycle.len(), 4 * lambda);
            assert!(is_hamiltonian_cycle(&g, &tube.cycle), "lambda = {lambda}");
            for i in 0..lambda {
                let (a, b) = tube.cross_edge(i);
                let on_cycle = tube
                    .cycle
                    .windows(2)
                    .chain(std::iter::once(
                        &[tube.cycle[4 * lambda - 1], tube.cycle[0]][..],
                    ))
                    .any(|w| (w[0] == a && w[1] == b) || (w[0] == b && w[1] == a));
                assert!(on_cycle, "cross edge {i} of lambda = {lambda}");
            }
        }
    }

    #[test]
    fn tube_splice_covers_everything_else() {
        let (g, _, tube) = build_tube(4).unwrap();
        // Fake squares for chains 0..4 as extra vertices are not placed
        // here; use an empty square map and check the walk covers the tube.
        let walk = tube_splice(&tube, 1, &BTreeMap::new());
        assert_eq!(walk.len(), 4 * 4);
        assert_eq!(walk[0], tube.a[1]);
        assert_eq!(*walk.last().unwrap(), tube.b[1]);
        assert!(is_valid_path(&g, &walk, walk.len(), None));
    }

    #[test]
    fn or_miniature_claims() {
        // Attaching at the low-consistent edges forbids High ∧ High.
        for (sa, sb) in [
            (Mode::Low, Mode::Low),
            (Mode::High, Mode::High),
            (Mode::Low, Mode::High),
        ] {
            let mini = or_miniature(sa, sb).unwrap();
            mini.embedding.validate(&mini.graph).unwrap();
            assert_eq!(mini.corridor_u.len(), mini.corridor_v.len());
            assert_eq!(mini.corridor_u.len() % 2, 1, "even edge count");
            let (s, t) = mini.terminals();
            let required = vec![true; mini.graph.n()];
            let paths = enumerate_covering_paths(&mini.graph, s, t, &required);
            assert!(!paths.is_empty(), "sides {sa:?}/{sb:?}");
            let mut seen_a_consistent = false;
            let mut seen_b_consistent = false;
            for p in &paths {
                assert!(is_hamiltonian_path(&mini.graph, p));
                let (ma, mb) = mini.classify(p);
                // No Hamiltonian path has both chains inconsistent with
                // their attachment edges.
                assert!(
                    ma == sa || mb == sb,
                    "both-inconsistent path exists for {sa:?}/{sb:?}"
                );
                if ma == sa {
                    seen_a_consistent = true;
                }
                if mb == sb {
                    seen_b_consistent = true;
                }
            }
            assert!(seen_a_consistent);
            assert!(seen_b_consistent);
        }
    }
}

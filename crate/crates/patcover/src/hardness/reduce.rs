//! The full reduction: a binary CSP on a grid Gaifman graph becomes a
//! Hamiltonian-path instance embedded in a δ-dimensional grid.
//!
//! Every variable gets a block of λ parallel 2-chains (one per value)
//! stacked along the z axis, a tube gadget across their first chunks, and
//! OR-checks: one per pair of same-variable chains (at most one high mode)
//! and one per forbidden value pair of every constraint. The traversal mode
//! of the unique high chain encodes the variable's value.
//!
//! Corridors route through a reserved plenum above the chains. Every
//! OR-check owns a globally allocated chunk column, a y level, and (when it
//! crosses blocks) a z street, chosen so that distinct corridors can never
//! meet; the occupancy-checked builder turns any allocation slip into a
//! hard layout error. Chains of one variable are wired boustrophedon with
//! direct terminal edges, and variables follow a snake over the variable
//! grid with wiring paths routed through the block margins.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::GridEmbedding;

use super::csp::CspInstance;
use super::gadgets::{
    attach_offset, chain_width, emit_traversal, place_chain, place_corridor,
    place_square, place_tube, tube_splice, ChainIds, Mode, SquareIds, TubeIds, RAIL_X0,
};
use super::layout::{Coord, GridBuilder};

/// Documented construction constant: the bounding box side never exceeds
/// `KAPPA_SIDE * δ * λ² * n`.
pub const KAPPA_SIDE: usize = 24;
/// Documented constant for OR-check participation: every variable takes
/// part in at most `KAPPA_OR * δ * λ²` OR-checks.
pub const KAPPA_OR: usize = 3;

/// z slots reserved per OR-check street, leaving room for length padding.
const STREET_STRIDE: i64 = 8;

/// One side of an OR-check: which chain it sits on and where.
#[derive(Clone, Debug, Serialize)]
pub struct OrSide {
    pub var: usize,
    pub value: usize,
    pub slot: usize,
    #[serde(skip)]
    pub square: SquareIds,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrRecord {
    pub a: OrSide,
    pub b: OrSide,
    /// Full u-corridor, `u_a` to `u_b` inclusive.
    #[serde(skip)]
    pub u_path: Vec<usize>,
    #[serde(skip)]
    pub v_path: Vec<usize>,
    /// Whether the B-side square's u/v roles are mirrored (parity fix).
    pub swapped: bool,
}

#[derive(Clone, Debug)]
pub struct TubeRecord {
    pub var: usize,
    pub tube: TubeIds,
    /// Per-value square splicing the tube into chain `i`'s first chunk.
    pub squares: Vec<SquareIds>,
}

#[derive(Clone, Debug)]
pub struct ChainRecord {
    pub ids: ChainIds,
    /// Top-edge detours by rail offset of the edge's left endpoint.
    pub detours: BTreeMap<usize, Detour>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Detour {
    Tube,
    Or { index: usize, side_a: bool },
}

pub struct ReductionOutput {
    pub graph: Graph,
    pub embedding: GridEmbedding,
    pub delta: usize,
    pub side: usize,
    pub lambda: usize,
    /// `chains[var][value]`.
    pub chains: Vec<Vec<ChainRecord>>,
    pub tubes: Vec<TubeRecord>,
    pub orchecks: Vec<OrRecord>,
    /// Inter-variable wiring paths (new vertices only), in snake order.
    pub wires: Vec<Vec<usize>>,
    /// Snake order over variable indices.
    pub variable_order: Vec<usize>,
    /// Global start terminal of the intended Hamiltonian path.
    pub entry: usize,
}

/// Per-instance layout bookkeeping.
struct Layout {
    delta: usize,
    side: usize,
    lambda: usize,
    slots: usize,
    chain_x: i64,
    p_intra: usize,
    /// Block strides per output dimension.
    stride: Vec<i64>,
    /// z offsets inside a block.
    lane: i64,
    lane2: i64,
    street_base: i64,
    entry_lane_rel: i64, // relative to the *next* block's z origin: -1
}

impl Layout {
    fn new(csp: &CspInstance) -> Layout {
        let delta = csp.delta();
        let lambda = csp.side() * 0 + csp.domain_size();
        let side = csp.side();
        let l2 = (lambda * lambda) as i64;
        let p_intra = lambda * (lambda - 1) / 2;
        let slots = 1 + p_intra + 2 * delta * lambda * lambda;
        let chain_x = chain_width(slots);

        let levels = (p_intra + 2 * delta * lambda * lambda) as i64;
        let plenum_top = 6 + 4 * levels + 2;

        // z streets: axis 0 gets λ² slots, axis 1 gets 2λ² (owner parity),
        // axis 2 gets λ² gap slots, every higher axis λ²; each slot is a
        // band of STREET_STRIDE lattice units.
        let street_blocks = 4 + delta.saturating_sub(3);
        let lane = lambda as i64;
        let lane2 = lane + 1;
        let street_base = lane2 + 1;
        let m_z = street_base + STREET_STRIDE * street_blocks as i64 * l2 + 1;

        let even = |x: i64| if x % 2 == 0 { x } else { x + 1 };
        let mut stride = vec![0i64; delta];
        stride[0] = even(chain_x + 4);
        stride[1] = even(plenum_top + 2);
        stride[2] = even(m_z);
        for d in 3..delta {
            stride[d] = 4;
        }
        Layout {
            delta,
            side,
            lambda,
            slots,
            chain_x,
            p_intra,
            stride,
            lane,
            lane2,
            street_base,
            entry_lane_rel: -1,
        }
    }

    fn block_origin(&self, coords: &[i64]) -> Coord {
        let mut o = vec![0i64; self.delta];
        for d in 0..self.delta {
            o[d] = coords[d] * self.stride[d];
        }
        o
    }

    fn pair_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.lambda);
        let mut idx = 0;
        for x in 0..i {
            idx += self.lambda - 1 - x;
        }
        idx + (j - i - 1)
    }

    fn slot_intra(&self, i: usize, j: usize) -> usize {
        1 + self.pair_index(i, j)
    }

    /// `side_class`: 0 for the callee (upper block), 1 for the owner.
    fn slot_inter(&self, axis: usize, side_class: usize, a: usize, b: usize) -> usize {
        let l2 = self.lambda * self.lambda;
        1 + self.p_intra + (2 * axis + side_class) * l2 + a * self.lambda + b
    }

    fn level_intra(&self, i: usize, j: usize) -> i64 {
        self.pair_index(i, j) as i64
    }

    fn level_inter(&self, axis: usize, owner_parity: usize, a: usize, b: usize) -> i64 {
        let l2 = self.lambda * self.lambda;
        (self.p_intra + (2 * axis + owner_parity) * l2 + a * self.lambda + b) as i64
    }

    fn level_y(&self, level: i64) -> i64 {
        6 + 4 * level
    }

    // Each OR-check owns a band of `STREET_STRIDE` z slots so the shorter
    // corridor can push its legs outward to equalize lengths.
    fn street0(&self, a: usize, b: usize) -> i64 {
        self.street_base + STREET_STRIDE * (a * self.lambda + b) as i64
    }

    fn street1(&self, parity: usize, a: usize, b: usize) -> i64 {
        let l2 = self.lambda * self.lambda;
        self.street_base
            + STREET_STRIDE * (l2 + parity * l2 + a * self.lambda + b) as i64
    }

    fn gap2(&self, a: usize, b: usize) -> i64 {
        let l2 = self.lambda * self.lambda;
        self.street_base + STREET_STRIDE * (3 * l2 + a * self.lambda + b) as i64
    }

    fn street_w(&self, axis: usize, a: usize, b: usize) -> i64 {
        let l2 = self.lambda * self.lambda;
        self.street_base
            + STREET_STRIDE * ((1 + axis) * l2 + a * self.lambda + b) as i64
    }

    fn slot_col(&self, block: &[i64], slot: usize) -> i64 {
        block[0] + RAIL_X0 + attach_offset(slot, Mode::Low) as i64
    }
}

/// Boustrophedon snake over the variable grid: consecutive entries differ
/// by one in exactly one coordinate.
fn snake_order(delta: usize, side: usize) -> Vec<Vec<i64>> {
    let mut order: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..delta {
        let mut next = Vec::with_capacity(order.len() * side);
        for (i, prefix) in order.iter().enumerate() {
            let forward = i % 2 == 0;
            for s in 0..side as i64 {
                let c = if forward { s } else { side as i64 - 1 - s };
                let mut row = prefix.clone();
                row.push(c);
                next.push(row);
            }
        }
        order = next;
    }
    order
}

pub fn reduce_csp(csp: &CspInstance) -> Result<ReductionOutput> {
    let layout = Layout::new(csp);
    let delta = layout.delta;
    let lambda = layout.lambda;
    let n_side = layout.side;
    let mut b = GridBuilder::new(delta);

    // Chains, tubes, tube squares, intra-variable terminal wiring.
    let num_vars = csp.num_variables();
    let mut chains: Vec<Vec<ChainRecord>> = Vec::with_capacity(num_vars);
    let mut tubes: Vec<TubeRecord> = Vec::with_capacity(num_vars);
    for var in 0..num_vars {
        let origin = layout.block_origin(&csp.variable_coords(var));
        let mut var_chains = Vec::with_capacity(lambda);
        for value in 0..lambda {
            let mut chain_origin = origin.clone();
            chain_origin[2] += value as i64;
            let ids = place_chain(&mut b, &chain_origin, layout.slots)?;
            var_chains.push(ChainRecord {
                ids,
                detours: BTreeMap::new(),
            });
        }
        // Tube across the first chunks' high edges.
        let mut tube_origin = origin.clone();
        tube_origin[0] += RAIL_X0 + attach_offset(0, Mode::High) as i64;
        tube_origin[1] += 4;
        let tube = place_tube(&mut b, &tube_origin, lambda)?;
        let mut squares = Vec::with_capacity(lambda);
        for value in 0..lambda {
            let sq = place_square(&mut b, &var_chains[value].ids, 0, Mode::High)?;
            b.edge(sq.u, tube.a[value])?;
            b.edge(sq.v, tube.b[value])?;
            var_chains[value]
                .detours
                .insert(sq.offset, Detour::Tube);
            squares.push(sq);
        }
        tubes.push(TubeRecord {
            var,
            tube,
            squares,
        });
        // Boustrophedon terminal edges between consecutive chains.
        for i in 0..lambda - 1 {
            if i % 2 == 0 {
                b.edge(
                    var_chains[i].ids.terminal_right,
                    var_chains[i + 1].ids.terminal_right,
                )?;
            } else {
                b.edge(
                    var_chains[i].ids.terminal_left,
                    var_chains[i + 1].ids.terminal_left,
                )?;
            }
        }
        chains.push(var_chains);
    }

    // OR-checks.
    let mut orchecks: Vec<OrRecord> = Vec::new();
    // Intra-variable: forbid high ∧ high for every pair of chains.
    for var in 0..num_vars {
        let origin = layout.block_origin(&csp.variable_coords(var));
        for i in 0..lambda {
            for j in (i + 1)..lambda {
                let slot = layout.slot_intra(i, j);
                let level = layout.level_y(layout.level_intra(i, j));
                let col = layout.slot_col(&origin, slot);
                let za = origin[2] + i as i64;
                let zb = origin[2] + j as i64;
                let or = place_or(
                    &mut b,
                    &mut chains,
                    OrPlacement {
                        var_a: var,
                        val_a: i,
                        slot_a: slot,
                        var_b: var,
                        val_b: j,
                        slot_b: slot,
                        waypoint_mid: MidRoute::Straight,
                        col_a: col,
                        col_b: col,
                        za,
                        zb,
                        level: origin[1] + level,
                        arrive_y: origin[1],
                    },
                    orchecks.len(),
                )?;
                orchecks.push(or);
            }
        }
    }
    // Inter-variable: one OR-check per forbidden pair of every constraint.
    for (&(u, v), relation) in csp.constraints() {
        let cu = csp.variable_coords(u);
        let cv = csp.variable_coords(v);
        let axis = (0..delta)
            .find(|&d| cu[d] != cv[d])
            .expect("constraint endpoints differ");
        debug_assert!(cv[axis] == cu[axis] + 1, "u is the lower block");
        let owner_parity = (cu[axis].rem_euclid(2)) as usize;
        let op = layout.block_origin(&cu);
        let oq = layout.block_origin(&cv);
        for a in 0..lambda {
            for bval in 0..lambda {
                if relation.contains(&(a, bval)) {
                    continue;
                }
                let slot_a = layout.slot_inter(axis, 1, a, bval);
                let slot_b = layout.slot_inter(axis, 0, a, bval);
                let col_a = layout.slot_col(&op, slot_a);
                let col_b = layout.slot_col(&oq, slot_b);
                let za = op[2] + a as i64;
                let zb = oq[2] + bval as i64;
                let level = layout.level_y(layout.level_inter(axis, owner_parity, a, bval));
                let mid = match axis {
                    0 => MidRoute::Axis0 {
                        z_street: op[2] + layout.street0(a, bval),
                    },
                    1 => MidRoute::Axis1 {
                        z_street: op[2] + layout.street1(owner_parity, a, bval),
                        arrive_level: oq[1] + level,
                    },
                    2 => MidRoute::Axis2 {
                        z_mid: op[2] + layout.gap2(a, bval),
                    },
                    e => MidRoute::AxisW {
                        z_street: op[2] + layout.street_w(e, a, bval),
                        w_axis: e,
                        w_target: oq[e],
                    },
                };
                let or = place_or(
                    &mut b,
                    &mut chains,
                    OrPlacement {
                        var_a: u,
                        val_a: a,
                        slot_a,
                        var_b: v,
                        val_b: bval,
                        slot_b,
                        waypoint_mid: mid,
                        col_a,
                        col_b,
                        za,
                        zb,
                        level: op[1] + level,
                        arrive_y: oq[1],
                    },
                    orchecks.len(),
                )?;
                orchecks.push(or);
            }
        }
    }

    // Inter-variable wiring along the snake.
    let order_coords = snake_order(delta, n_side);
    let variable_order: Vec<usize> = order_coords
        .iter()
        .map(|c| csp.variable_index(c).expect("snake stays in range"))
        .collect();
    let mut wires = Vec::new();
    for w in 0..variable_order.len().saturating_sub(1) {
        let p = variable_order[w];
        let q = variable_order[w + 1];
        let wire = place_wire(&mut b, &layout, &chains, csp, p, q, w)?;
        wires.push(wire);
    }

    let entry = chains[variable_order[0]][0].ids.terminal_left;
    let (graph, embedding) = b.finish()?;

    // Side-length bound from the construction.
    let bound = KAPPA_SIDE * delta * lambda * lambda * n_side;
    if embedding.side_length() > bound {
        return Err(Error::layout(format!(
            "bounding box side {} exceeds {bound}; raise the spacing constant",
            embedding.side_length()
        )));
    }

    Ok(ReductionOutput {
        graph,
        embedding,
        delta,
        side: n_side,
        lambda,
        chains,
        tubes,
        orchecks,
        wires,
        variable_order,
        entry,
    })
}

enum MidRoute {
    /// Same column, straight z-leg (intra-variable).
    Straight,
    Axis0 {
        z_street: i64,
    },
    Axis1 {
        z_street: i64,
        arrive_level: i64,
    },
    Axis2 {
        z_mid: i64,
    },
    AxisW {
        z_street: i64,
        w_axis: usize,
        w_target: i64,
    },
}

struct OrPlacement {
    var_a: usize,
    val_a: usize,
    slot_a: usize,
    var_b: usize,
    val_b: usize,
    slot_b: usize,
    waypoint_mid: MidRoute,
    col_a: i64,
    col_b: i64,
    za: i64,
    zb: i64,
    /// Global y of the u-corridor legs on the departure side.
    level: i64,
    /// Global y of the arrival block's base.
    arrive_y: i64,
}

fn place_or(
    b: &mut GridBuilder,
    chains: &mut [Vec<ChainRecord>],
    p: OrPlacement,
    index: usize,
) -> Result<OrRecord> {
    let square_a = place_square(b, &chains[p.var_a][p.val_a].ids, p.slot_a, Mode::Low)?;
    let square_b = place_square(b, &chains[p.var_b][p.val_b].ids, p.slot_b, Mode::Low)?;
    chains[p.var_a][p.val_a]
        .detours
        .insert(square_a.offset, Detour::Or { index, side_a: true });
    chains[p.var_b][p.val_b]
        .detours
        .insert(square_b.offset, Detour::Or { index, side_a: false });

    let dim = b.dimension();
    let base_y = b.coord(square_a.edge_left)[1] - 2; // chain base plane
    let at = |x: i64, y: i64, z: i64| -> Coord {
        let mut c = vec![0i64; dim];
        c[0] = x;
        c[1] = y;
        c[2] = z;
        c
    };
    let ua = b.coord(square_a.u).to_vec();
    let ub_left = b.coord(square_b.u).to_vec();
    let swapped = crate::embed::l1_distance(&ua, &ub_left) % 2 == 1;
    let (u_land, v_land) = if swapped {
        (p.col_b + 1, p.col_b)
    } else {
        (p.col_b, p.col_b + 1)
    };
    let (ku, kv) = if swapped {
        (p.col_b + 4, p.col_b - 1)
    } else {
        (p.col_b - 3, p.col_b + 2)
    };
    let h = p.level;
    let dep3 = base_y + 3;
    let arr3 = p.arrive_y + 3;

    // A route as a function of its street offset within the OR-check's
    // reserved band; padding the street by one adds two to the length.
    let make_way = |is_u: bool, street_pad: i64| -> Vec<Coord> {
        let (col, lvl, k, land) = if is_u {
            (p.col_a, h, ku, u_land)
        } else {
            (p.col_a + 1, h + 2, kv, v_land)
        };
        let mut way: Vec<Coord> = vec![at(col, dep3, p.za), at(col, lvl, p.za)];
        match &p.waypoint_mid {
            MidRoute::Straight => {
                way.push(at(col, lvl, p.zb));
            }
            MidRoute::Axis0 { z_street } => {
                let zs = *z_street + street_pad;
                way.push(at(col, lvl, zs));
                way.push(at(k, lvl, zs));
                way.push(at(k, lvl, p.zb));
            }
            MidRoute::Axis1 {
                z_street,
                arrive_level,
            } => {
                let zs = *z_street + street_pad;
                let ah = if is_u { *arrive_level } else { *arrive_level + 2 };
                way.push(at(col, lvl, zs));
                way.push(at(col, ah, zs));
                way.push(at(k, ah, zs));
                way.push(at(k, ah, p.zb));
            }
            MidRoute::Axis2 { z_mid } => {
                let zs = *z_mid + street_pad;
                way.push(at(col, lvl, zs));
                way.push(at(k, lvl, zs));
                way.push(at(k, lvl, p.zb));
            }
            MidRoute::AxisW {
                z_street,
                w_axis,
                w_target,
            } => {
                let zs = *z_street + street_pad;
                let mut w = at(col, lvl, zs);
                way.push(w.clone());
                w[*w_axis] = *w_target;
                way.push(w.clone());
                let mut k1 = w.clone();
                k1[0] = k;
                way.push(k1.clone());
                let mut k2 = k1;
                k2[2] = p.zb;
                way.push(k2);
            }
        }
        // Arrival: reach the approach column at leg level, descend, walk
        // the y=3 row into the landing square vertex.
        let last = way.last().unwrap().clone();
        if last[0] != k {
            let mut c = last.clone();
            c[0] = k;
            way.push(c);
        }
        let fix_w = |mut c: Coord| -> Coord {
            for d in 3..c.len() {
                c[d] = last[d];
            }
            c
        };
        way.push(fix_w(at(k, arr3, p.zb)));
        way.push(fix_w(at(land, arr3, p.zb)));
        way
    };
    let route_len = |way: &[Coord]| -> i64 {
        way.windows(2)
            .map(|w| crate::embed::l1_distance(&w[0], &w[1]) as i64)
            .sum()
    };
    let (u_way, v_way) = {
        let u0 = make_way(true, 0);
        let v0 = make_way(false, 0);
        let diff = route_len(&u0) - route_len(&v0);
        if diff % 2 != 0 {
            return Err(Error::layout("corridor parity mismatch"));
        }
        if matches!(p.waypoint_mid, MidRoute::Straight) {
            if diff != 0 {
                return Err(Error::layout("straight corridor length mismatch"));
            }
            (u0, v0)
        } else if diff.abs() / 2 >= STREET_STRIDE {
            return Err(Error::layout("corridor pad exceeds the street band"));
        } else if diff < 0 {
            (make_way(true, -diff / 2), v0)
        } else if diff > 0 {
            (u0, make_way(false, diff / 2))
        } else {
            (u0, v0)
        }
    };
    let (u_path, v_path) = place_corridor(b, &u_way, &v_way)?;

    Ok(OrRecord {
        a: OrSide {
            var: p.var_a,
            value: p.val_a,
            slot: p.slot_a,
            square: square_a,
        },
        b: OrSide {
            var: p.var_b,
            value: p.val_b,
            slot: p.slot_b,
            square: square_b,
        },
        u_path,
        v_path,
        swapped,
    })
}

/// Exit terminal of a variable's boustrophedon over its chains.
fn exit_terminal(chains: &[ChainRecord]) -> usize {
    let last = chains.len() - 1;
    if chains.len() % 2 == 1 {
        chains[last].ids.terminal_right
    } else {
        chains[last].ids.terminal_left
    }
}

fn place_wire(
    b: &mut GridBuilder,
    layout: &Layout,
    chains: &[Vec<ChainRecord>],
    csp: &CspInstance,
    p_var: usize,
    q_var: usize,
    wire_index: usize,
) -> Result<Vec<usize>> {
    let delta = layout.delta;
    let cp = csp.variable_coords(p_var);
    let cq = csp.variable_coords(q_var);
    let axis = (0..delta)
        .find(|&d| cp[d] != cq[d])
        .expect("snake neighbors differ");
    let op = layout.block_origin(&cp);
    let oq = layout.block_origin(&cq);

    let exit = exit_terminal(&chains[p_var]);
    let exit_coord = b.coord(exit).to_vec();
    let yw = if wire_index % 2 == 0 { 0 } else { 2 };
    let xw = layout.chain_x + 1;
    let lane_p = op[2] + layout.lane;
    let entry_lane = oq[2] + layout.entry_lane_rel;

    let mut c = exit_coord.clone();
    let mut way: Vec<Coord> = Vec::new();
    // Stub into the wiring lane, then onto this wire's y level.
    c[2] = lane_p;
    way.push(c.clone());
    c[1] = op[1] + yw;
    way.push(c.clone());
    // Out to the wiring column.
    c[0] = op[0] + xw;
    way.push(c.clone());
    match axis {
        0 => {
            c[0] = oq[0] + xw;
            way.push(c.clone());
            c[2] = entry_lane;
            way.push(c.clone());
        }
        1 => {
            // Riser in the second lane, then back.
            c[2] = op[2] + layout.lane2;
            way.push(c.clone());
            c[1] = oq[1] + yw;
            way.push(c.clone());
            c[2] = lane_p;
            way.push(c.clone());
            c[2] = entry_lane;
            way.push(c.clone());
        }
        2 => {
            c[2] = entry_lane;
            way.push(c.clone());
        }
        e => {
            c[e] = oq[e];
            way.push(c.clone());
            c[2] = entry_lane;
            way.push(c.clone());
        }
    }
    // Along the entry lane to the target terminal column, then up and in.
    c[0] = oq[0] + 1;
    way.push(c.clone());
    c[1] = oq[1] + 1;
    way.push(c.clone());

    let steps = super::layout::unit_steps(&way)?;
    let mut ids = Vec::with_capacity(steps.len() + 1);
    // The first waypoint is itself a new vertex (z-step off the terminal).
    ids.push(b.vertex(&way[0])?);
    for s in &steps {
        ids.push(b.vertex(s)?);
    }
    b.edge(exit, ids[0])?;
    for w in ids.windows(2) {
        b.edge(w[0], w[1])?;
    }
    let entry_terminal = chains[q_var][0].ids.terminal_left;
    b.edge(*ids.last().unwrap(), entry_terminal)?;
    Ok(ids)
}

/// Builds the intended Hamiltonian path for a satisfying assignment.
pub fn construct_witness_path(red: &ReductionOutput, assignment: &[usize]) -> Result<Vec<usize>> {
    if assignment.len() != red.chains.len()
        || assignment.iter().any(|&a| a >= red.lambda)
    {
        return Err(Error::invalid("assignment shape does not match the instance"));
    }
    // The assignment must satisfy the CSP; an OR-check with both sides in
    // high mode has no coverer, so the construction would be undefined.
    let mode_of = |var: usize, value: usize| -> Mode {
        if assignment[var] == value {
            Mode::High
        } else {
            Mode::Low
        }
    };
    let mut duty: Vec<bool> = Vec::with_capacity(red.orchecks.len()); // true = side A covers
    for or in &red.orchecks {
        let ma = mode_of(or.a.var, or.a.value);
        let mb = mode_of(or.b.var, or.b.value);
        if ma == Mode::High && mb == Mode::High {
            return Err(Error::invalid(
                "assignment violates a constraint; witness undefined",
            ));
        }
        duty.push(ma == Mode::Low);
    }

    let mut out = Vec::with_capacity(red.graph.n());
    for (pos, &var) in red.variable_order.iter().enumerate() {
        for value in 0..red.lambda {
            let record = &red.chains[var][value];
            let mode = mode_of(var, value);
            let mut segment = Vec::new();
            emit_traversal(
                &record.ids,
                mode,
                &mut |offset| {
                    expansion_for(red, assignment, &duty, var, value, offset)
                },
                &mut segment,
            );
            if value % 2 == 1 {
                segment.reverse();
            }
            out.extend(segment);
        }
        if pos + 1 < red.variable_order.len() {
            out.extend(&red.wires[pos]);
        }
    }
    debug_assert!(super::oracle::is_hamiltonian_path(&red.graph, &out));
    Ok(out)
}

/// The vertex sequence replacing a traversed top edge, when a gadget is
/// attached there and this chain is the one that must cover it.
fn expansion_for(
    red: &ReductionOutput,
    assignment: &[usize],
    duty: &[bool],
    var: usize,
    value: usize,
    offset: usize,
) -> Option<Vec<usize>> {
    let record = &red.chains[var][value];
    match record.detours.get(&offset)? {
        Detour::Tube => {
            // Only the chosen chain traverses its high edge; it splices the
            // whole tube, detouring through every other chain's square.
            debug_assert_eq!(assignment[var], value);
            let tube = &red.tubes[var];
            let squares: BTreeMap<usize, (usize, usize)> = tube
                .squares
                .iter()
                .enumerate()
                .map(|(i, s)| (i, (s.u, s.v)))
                .collect();
            let mut seq = vec![tube.squares[value].u];
            seq.extend(tube_splice(&tube.tube, value, &squares));
            seq.push(tube.squares[value].v);
            Some(seq)
        }
        Detour::Or { index, side_a } => {
            let or = &red.orchecks[*index];
            let we_cover = duty[*index] == *side_a;
            if !we_cover {
                return None; // traverse the edge directly; partner covers
            }
            let mut seq = Vec::new();
            if *side_a {
                // u_a .. u_b, edge u_b-v_b, v_b .. v_a
                seq.extend(or.u_path.iter().copied());
                seq.extend(or.v_path.iter().rev().copied());
            } else {
                // Entering from B's edge: the first square vertex adjacent
                // to the left endpoint is u_b (unswapped) or v_b (swapped).
                if or.swapped {
                    seq.extend(or.v_path.iter().rev().copied());
                    seq.extend(or.u_path.iter().copied());
                } else {
                    seq.extend(or.u_path.iter().rev().copied());
                    seq.extend(or.v_path.iter().copied());
                }
            }
            Some(seq)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardness::oracle::is_hamiltonian_path;
    use rand::Rng;
    use rand::SeedableRng;

    fn tiny_csp(seed: u64, satisfiable: bool) -> CspInstance {
        // δ=3, n=2, λ=2 with random constraints; when `satisfiable`, a
        // planted assignment is kept in every relation.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut csp = CspInstance::new(3, 2, 2).unwrap();
        let planted: Vec<usize> = (0..8).map(|_| rng.gen_range(0..2)).collect();
        for u in 0..8usize {
            let cu = csp.variable_coords(u);
            for d in 0..3 {
                if cu[d] == 1 {
                    continue;
                }
                let mut cv = cu.clone();
                cv[d] += 1;
                let v = csp.variable_index(&cv).unwrap();
                let mut allowed: Vec<(usize, usize)> = Vec::new();
                for a in 0..2 {
                    for b in 0..2 {
                        if rng.gen_bool(0.6) {
                            allowed.push((a, b));
                        }
                    }
                }
                if satisfiable && !allowed.contains(&(planted[u], planted[v])) {
                    allowed.push((planted[u], planted[v]));
                }
                csp.add_constraint(&cu, &cv, allowed).unwrap();
            }
        }
        csp
    }

    #[test]
    fn reduction_layout_is_collision_free_and_embedded() {
        let csp = tiny_csp(3, true);
        let red = reduce_csp(&csp).unwrap();
        red.embedding.validate(&red.graph).unwrap();
        assert_eq!(red.chains.len(), 8);
        assert_eq!(red.tubes.len(), 8);
        // Side-length bound with the documented constant.
        let bound = KAPPA_SIDE * red.delta * red.lambda * red.lambda * red.side;
        assert!(red.embedding.side_length() <= bound);
    }

    #[test]
    fn or_participation_counts_match_formula() {
        let csp = tiny_csp(4, true);
        let red = reduce_csp(&csp).unwrap();
        let mut per_var = vec![0usize; red.chains.len()];
        for or in &red.orchecks {
            per_var[or.a.var] += 1;
            per_var[or.b.var] += 1;
        }
        let bound = KAPPA_OR * red.delta * red.lambda * red.lambda;
        for (var, &count) in per_var.iter().enumerate() {
            assert!(count <= bound, "var {var}: {count} > {bound}");
        }
    }

    #[test]
    fn corridors_have_equal_even_lengths() {
        let csp = tiny_csp(5, true);
        let red = reduce_csp(&csp).unwrap();
        assert!(!red.orchecks.is_empty());
        for or in &red.orchecks {
            assert_eq!(or.u_path.len(), or.v_path.len());
            // Path vertex count is odd exactly when the edge count is even.
            assert_eq!(or.u_path.len() % 2, 1);
        }
    }

    #[test]
    fn witness_paths_are_hamiltonian() {
        for seed in 0..3u64 {
            let csp = tiny_csp(100 + seed, true);
            let solution = csp.brute_force().unwrap().expect("planted satisfiable");
            let red = reduce_csp(&csp).unwrap();
            let path = construct_witness_path(&red, &solution).unwrap();
            assert!(
                is_hamiltonian_path(&red.graph, &path),
                "seed {seed}: witness is not a Hamiltonian path"
            );
        }
    }

    #[test]
    fn witness_rejects_violating_assignment() {
        let mut csp = CspInstance::new(3, 2, 2).unwrap();
        csp.add_constraint(&[0, 0, 0], &[0, 0, 1], [(0, 1), (1, 0)])
            .unwrap();
        let red = reduce_csp(&csp).unwrap();
        // Both variables 0: violates the XOR constraint.
        let bad = vec![0usize; 8];
        assert!(construct_witness_path(&red, &bad).is_err());
    }

    #[test]
    fn vertex_count_is_polynomial_in_parameters() {
        let csp = tiny_csp(6, true);
        let red = reduce_csp(&csp).unwrap();
        // Coarse polynomial budget: each of the n^δ variables contributes
        // O(λ · δλ²) chain vertices plus corridors of length O(δλ²) each.
        let n_vars = 8;
        let per_var = 64 * red.delta.pow(2) * red.lambda.pow(4) + 4096;
        assert!(red.graph.n() <= n_vars * per_var);
    }
}

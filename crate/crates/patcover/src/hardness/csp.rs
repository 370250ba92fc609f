//! Binary CSPs whose Gaifman graph is a δ-dimensional grid.
//!
//! Variables are the `n^δ` grid points (row-major numbering); every
//! constraint binds two grid-adjacent variables to a relation over
//! `{0..λ-1}²`, oriented by the lower-index variable first.
//!
//! Text format: a header `csp <δ> <n> <λ>`, then one line per constraint,
//! `u-coords | v-coords | a1 b1 a2 b2 ...` listing the allowed pairs.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};

use crate::embed::l1_distance;
use crate::error::{Error, Result};

/// Enumeration ceiling for [`CspInstance::brute_force`].
pub const CSP_BRUTE_FORCE_LIMIT: f64 = 1e6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CspInstance {
    delta: usize,
    side: usize,
    domain_size: usize,
    /// Keyed by `(u, v)` with `u < v`; allowed value pairs `(value(u), value(v))`.
    constraints: BTreeMap<(usize, usize), BTreeSet<(usize, usize)>>,
}

impl CspInstance {
    pub fn new(delta: usize, side: usize, domain_size: usize) -> Result<CspInstance> {
        if delta < 3 {
            return Err(Error::invalid(
                "CSP instances here require dimension at least 3",
            ));
        }
        if side == 0 {
            return Err(Error::invalid("side must be at least 1"));
        }
        if domain_size < 2 {
            return Err(Error::invalid("domain size must be at least 2"));
        }
        let mut n: usize = 1;
        for _ in 0..delta {
            n = n
                .checked_mul(side)
                .ok_or_else(|| Error::resource("variable count overflow"))?;
        }
        Ok(CspInstance {
            delta,
            side,
            domain_size,
            constraints: BTreeMap::new(),
        })
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn num_variables(&self) -> usize {
        self.side.pow(self.delta as u32)
    }

    pub fn constraints(
        &self,
    ) -> impl Iterator<Item = (&(usize, usize), &BTreeSet<(usize, usize)>)> {
        self.constraints.iter()
    }

    /// Row-major index of a grid point.
    pub fn variable_index(&self, coords: &[i64]) -> Result<usize> {
        if coords.len() != self.delta {
            return Err(Error::invalid(format!(
                "expected {} coordinates, got {}",
                self.delta,
                coords.len()
            )));
        }
        let mut idx = 0usize;
        for &c in coords {
            if c < 0 || c as usize >= self.side {
                return Err(Error::invalid(format!(
                    "coordinate {c} outside [0, {})",
                    self.side
                )));
            }
            idx = idx * self.side + c as usize;
        }
        Ok(idx)
    }

    pub fn variable_coords(&self, mut idx: usize) -> Vec<i64> {
        let mut coords = vec![0i64; self.delta];
        for d in (0..self.delta).rev() {
            coords[d] = (idx % self.side) as i64;
            idx /= self.side;
        }
        coords
    }

    /// Adds (or replaces) the constraint between two grid-adjacent
    /// variables. `allowed` pairs are `(value(u), value(v))` for the
    /// lower-index variable `u`.
    pub fn add_constraint(
        &mut self,
        u_coords: &[i64],
        v_coords: &[i64],
        allowed: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<()> {
        let u = self.variable_index(u_coords)?;
        let v = self.variable_index(v_coords)?;
        if l1_distance(u_coords, v_coords) != 1 {
            return Err(Error::invalid(format!(
                "constrained pair {u_coords:?}, {v_coords:?} not grid-adjacent"
            )));
        }
        let mut relation = BTreeSet::new();
        for (a, b) in allowed {
            if a >= self.domain_size || b >= self.domain_size {
                return Err(Error::invalid(format!(
                    "pair ({a}, {b}) outside domain of size {}",
                    self.domain_size
                )));
            }
            // Store oriented by the lower index.
            relation.insert(if u < v { (a, b) } else { (b, a) });
        }
        let key = (u.min(v), u.max(v));
        self.constraints.insert(key, relation);
        Ok(())
    }

    pub fn is_satisfied_by(&self, assignment: &[usize]) -> bool {
        if assignment.len() != self.num_variables()
            || assignment.iter().any(|&a| a >= self.domain_size)
        {
            return false;
        }
        self.constraints
            .iter()
            .all(|(&(u, v), rel)| rel.contains(&(assignment[u], assignment[v])))
    }

    /// Exact satisfiability by enumeration; refuses beyond
    /// [`CSP_BRUTE_FORCE_LIMIT`] assignments.
    pub fn brute_force(&self) -> Result<Option<Vec<usize>>> {
        let vars = self.num_variables();
        let total = (self.domain_size as f64).powi(vars as i32);
        if total > CSP_BRUTE_FORCE_LIMIT {
            return Err(Error::resource(format!(
                "{} assignments exceed the enumeration limit",
                total
            )));
        }
        let mut assignment = vec![0usize; vars];
        loop {
            if self.is_satisfied_by(&assignment) {
                return Ok(Some(assignment));
            }
            // odometer
            let mut d = vars;
            loop {
                if d == 0 {
                    return Ok(None);
                }
                d -= 1;
                assignment[d] += 1;
                if assignment[d] < self.domain_size {
                    break;
                }
                assignment[d] = 0;
            }
        }
    }

    pub fn save<W: Write>(&self, writer: &mut W) -> Result<()> {
        writeln!(writer, "csp {} {} {}", self.delta, self.side, self.domain_size)?;
        for (&(u, v), rel) in &self.constraints {
            let uc: Vec<String> = self
                .variable_coords(u)
                .iter()
                .map(|x| x.to_string())
                .collect();
            let vc: Vec<String> = self
                .variable_coords(v)
                .iter()
                .map(|x| x.to_string())
                .collect();
            let pairs: Vec<String> = rel
                .iter()
                .flat_map(|&(a, b)| [a.to_string(), b.to_string()])
                .collect();
            writeln!(
                writer,
                "{} | {} | {}",
                uc.join(" "),
                vc.join(" "),
                pairs.join(" ")
            )?;
        }
        Ok(())
    }

    pub fn load<R: BufRead>(reader: R) -> Result<CspInstance> {
        let mut instance: Option<CspInstance> = None;
        for (idx, line) in reader.lines().enumerate() {
            let lineno = idx + 1;
            let line = line?;
            let body = match line.find('#') {
                Some(pos) => &line[..pos],
                None => &line[..],
            };
            if body.trim().is_empty() {
                continue;
            }
            if instance.is_none() {
                let tokens: Vec<&str> = body.split_whitespace().collect();
                if tokens.len() != 4 || tokens[0] != "csp" {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: "expected header `csp <delta> <n> <lambda>`".into(),
                    });
                }
                let parse = |t: &str| {
                    t.parse::<usize>().map_err(|_| Error::Parse {
                        line: lineno,
                        msg: format!("bad header number `{t}`"),
                    })
                };
                instance = Some(CspInstance::new(
                    parse(tokens[1])?,
                    parse(tokens[2])?,
                    parse(tokens[3])?,
                )?);
                continue;
            }
            let inst = instance.as_mut().unwrap();
            let parts: Vec<&str> = body.split('|').collect();
            if parts.len() != 3 {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "expected `u-coords | v-coords | pairs`".into(),
                });
            }
            let coords = |s: &str| -> Result<Vec<i64>> {
                s.split_whitespace()
                    .map(|t| {
                        t.parse::<i64>().map_err(|_| Error::Parse {
                            line: lineno,
                            msg: format!("bad coordinate `{t}`"),
                        })
                    })
                    .collect()
            };
            let u = coords(parts[0])?;
            let v = coords(parts[1])?;
            let nums: Vec<usize> = parts[2]
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>().map_err(|_| Error::Parse {
                        line: lineno,
                        msg: format!("bad value `{t}`"),
                    })
                })
                .collect::<Result<_>>()?;
            if nums.len() % 2 != 0 {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "odd number of pair values".into(),
                });
            }
            let pairs: Vec<(usize, usize)> =
                nums.chunks(2).map(|c| (c[0], c[1])).collect();
            inst.add_constraint(&u, &v, pairs)
                .map_err(|e| Error::Parse {
                    line: lineno,
                    msg: e.to_string(),
                })?;
        }
        instance.ok_or_else(|| Error::invalid("csp file has no header"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unconstrained_is_satisfiable() {
        let csp = CspInstance::new(3, 2, 2).unwrap();
        let sol = csp.brute_force().unwrap().unwrap();
        assert!(csp.is_satisfied_by(&sol));
    }

    #[test]
    fn empty_relation_is_unsatisfiable() {
        let mut csp = CspInstance::new(3, 2, 2).unwrap();
        csp.add_constraint(&[0, 0, 0], &[0, 0, 1], []).unwrap();
        assert!(csp.brute_force().unwrap().is_none());
    }

    #[test]
    fn xor_constraint() {
        let mut csp = CspInstance::new(3, 2, 2).unwrap();
        // Constrain only one adjacent pair to differ; every other variable
        // is free.
        csp.add_constraint(&[0, 0, 0], &[0, 0, 1], [(0, 1), (1, 0)])
            .unwrap();
        let sol = csp.brute_force().unwrap().unwrap();
        let u = csp.variable_index(&[0, 0, 0]).unwrap();
        let v = csp.variable_index(&[0, 0, 1]).unwrap();
        assert_ne!(sol[u], sol[v]);
    }

    #[test]
    fn rejects_non_adjacent_pairs() {
        let mut csp = CspInstance::new(3, 2, 2).unwrap();
        assert!(csp
            .add_constraint(&[0, 0, 0], &[0, 1, 1], [(0, 0)])
            .is_err());
    }

    #[test]
    fn round_trip() {
        let mut csp = CspInstance::new(3, 2, 3).unwrap();
        csp.add_constraint(&[0, 0, 0], &[0, 0, 1], [(0, 1), (2, 1)])
            .unwrap();
        csp.add_constraint(&[1, 1, 1], &[1, 1, 0], [(1, 1)])
            .unwrap();
        let mut buf = Vec::new();
        csp.save(&mut buf).unwrap();
        let back = CspInstance::load(buf.as_slice()).unwrap();
        assert_eq!(back, csp);
        let mut buf2 = Vec::new();
        back.save(&mut buf2).unwrap();
        assert_eq!(buf, buf2);
    }

    #[test]
    fn brute_force_limit() {
        let csp = CspInstance::new(3, 3, 3).unwrap(); // 3^27 assignments
        assert!(csp.brute_force().is_err());
    }

    #[test]
    fn orientation_follows_lower_index() {
        let mut csp = CspInstance::new(3, 2, 2).unwrap();
        // Declare with the higher-index variable first; (value(v)=0,
        // value(u)=1) must mean (u=1, v=0) after normalization.
        csp.add_constraint(&[0, 0, 1], &[0, 0, 0], [(0, 1)]).unwrap();
        let u = csp.variable_index(&[0, 0, 0]).unwrap();
        let v = csp.variable_index(&[0, 0, 1]).unwrap();
        let mut assignment = vec![0usize; csp.num_variables()];
        assignment[u] = 1;
        assignment[v] = 0;
        assert!(csp.is_satisfied_by(&assignment));
        assignment[u] = 0;
        assignment[v] = 1;
        assert!(!csp.is_satisfied_by(&assignment));
    }
}

//! Edge-list text format and the embedding sidecar.
//!
//! Graph files: an optional header `p <n> <m>`, one `u v` pair per line
//! (0-based, whitespace separated), `#` comments. Saving always writes the
//! header and the edges as `u v` with `u < v` in sorted order, so
//! save -> load -> save reproduces files byte for byte.
//!
//! Sidecar files: one `v x1 ... xδ` line per vertex, sorted by `v`.

use std::io::{BufRead, Write};

use crate::embed::GridEmbedding;
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug)]
pub struct LoadedGraph {
    pub graph: Graph,
    /// Normalization notes: deduplicated or asymmetric edge listings.
    pub warnings: Vec<String>,
}

pub fn load_graph<R: BufRead>(reader: R) -> Result<LoadedGraph> {
    let mut declared_n: Option<usize> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut max_vertex: Option<usize> = None;

    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let body = match line.find('#') {
            Some(pos) => &line[..pos],
            None => &line[..],
        };
        let mut tokens = body.split_whitespace().peekable();
        if tokens.peek().is_none() {
            continue;
        }
        if tokens.peek() == Some(&"p") {
            tokens.next();
            if declared_n.is_some() {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "duplicate header line".into(),
                });
            }
            let n = parse_token(tokens.next(), lineno, "vertex count")?;
            let _m: usize = parse_token(tokens.next(), lineno, "edge count")?;
            if tokens.next().is_some() {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "trailing tokens after header".into(),
                });
            }
            declared_n = Some(n);
            continue;
        }
        let u: usize = parse_token(tokens.next(), lineno, "edge endpoint")?;
        let v: usize = parse_token(tokens.next(), lineno, "edge endpoint")?;
        if tokens.next().is_some() {
            return Err(Error::Parse {
                line: lineno,
                msg: "trailing tokens after edge".into(),
            });
        }
        if u == v {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("self-loop at vertex {u}"),
            });
        }
        max_vertex = Some(max_vertex.unwrap_or(0).max(u).max(v));
        edges.push((u.min(v), u.max(v)));
    }

    let n = match (declared_n, max_vertex) {
        (Some(n), Some(mx)) if mx >= n => {
            return Err(Error::invalid(format!(
                "edge endpoint {mx} exceeds declared vertex count {n}"
            )))
        }
        (Some(n), _) => n,
        (None, Some(mx)) => mx + 1,
        (None, None) => 0,
    };

    let mut warnings = Vec::new();
    let mut sorted = edges.clone();
    sorted.sort_unstable();
    let before = sorted.len();
    sorted.dedup();
    if sorted.len() < before {
        warnings.push(format!(
            "{} duplicate edge listing(s) removed during normalization",
            before - sorted.len()
        ));
    }
    let graph = Graph::from_edges(n, &sorted)?;
    Ok(LoadedGraph { graph, warnings })
}

pub fn save_graph<W: Write>(writer: &mut W, g: &Graph) -> Result<()> {
    writeln!(writer, "p {} {}", g.n(), g.m())?;
    for (u, v) in g.edges() {
        writeln!(writer, "{u} {v}")?;
    }
    Ok(())
}

pub fn load_embedding<R: BufRead>(reader: R, n: usize) -> Result<GridEmbedding> {
    let mut dimension: Option<usize> = None;
    let mut coords: Vec<Option<Vec<i64>>> = vec![None; n];
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let body = match line.find('#') {
            Some(pos) => &line[..pos],
            None => &line[..],
        };
        let tokens: Vec<&str> = body.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        if tokens.len() < 2 {
            return Err(Error::Parse {
                line: lineno,
                msg: "expected `v x1 ... xd`".into(),
            });
        }
        let v: usize = parse_token(Some(tokens[0]), lineno, "vertex id")?;
        if v >= n {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("vertex {v} out of range for n = {n}"),
            });
        }
        let point: Vec<i64> = tokens[1..]
            .iter()
            .map(|t| {
                t.parse::<i64>().map_err(|_| Error::Parse {
                    line: lineno,
                    msg: format!("bad coordinate `{t}`"),
                })
            })
            .collect::<Result<_>>()?;
        match dimension {
            None => dimension = Some(point.len()),
            Some(d) if d != point.len() => {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("dimension {} conflicts with earlier {}", point.len(), d),
                })
            }
            _ => {}
        }
        if coords[v].replace(point).is_some() {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("vertex {v} listed twice"),
            });
        }
    }
    let dimension = dimension.ok_or_else(|| Error::invalid("embedding file has no rows"))?;
    let coords: Vec<Vec<i64>> = coords
        .into_iter()
        .enumerate()
        .map(|(v, c)| c.ok_or_else(|| Error::invalid(format!("vertex {v} has no coordinates"))))
        .collect::<Result<_>>()?;
    GridEmbedding::new(dimension, coords)
}

pub fn save_embedding<W: Write>(writer: &mut W, emb: &GridEmbedding) -> Result<()> {
    for (v, c) in emb.all_coords().iter().enumerate() {
        let row: Vec<String> = c.iter().map(|x| x.to_string()).collect();
        writeln!(writer, "{v} {}", row.join(" "))?;
    }
    Ok(())
}

fn parse_token<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::Parse {
        line,
        msg: format!("missing {what}"),
    })?;
    tok.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("bad {what} `{tok}`"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::generate_grid;

    fn save_to_string(g: &Graph) -> String {
        let mut buf = Vec::new();
        save_graph(&mut buf, g).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn round_trip_is_identity_and_byte_exact() {
        let (g, emb) = generate_grid(2, 4).unwrap();
        let text = save_to_string(&g);
        let loaded = load_graph(text.as_bytes()).unwrap();
        assert_eq!(loaded.graph, g);
        assert!(loaded.warnings.is_empty());
        assert_eq!(save_to_string(&loaded.graph), text);

        let mut buf = Vec::new();
        save_embedding(&mut buf, &emb).unwrap();
        let text2 = String::from_utf8(buf).unwrap();
        let emb2 = load_embedding(text2.as_bytes(), g.n()).unwrap();
        assert_eq!(emb2, emb);
        let mut buf2 = Vec::new();
        save_embedding(&mut buf2, &emb2).unwrap();
        assert_eq!(String::from_utf8(buf2).unwrap(), text2);
    }

    #[test]
    fn asymmetric_listing_normalizes() {
        let loaded = load_graph("1 0\n".as_bytes()).unwrap();
        assert_eq!(loaded.graph.edges(), vec![(0, 1)]);
        assert!(loaded.warnings.is_empty());
    }

    #[test]
    fn duplicate_edge_warns() {
        let loaded = load_graph("0 1\n1 0\n# comment\n0 1\n".as_bytes()).unwrap();
        assert_eq!(loaded.graph.m(), 1);
        assert_eq!(loaded.warnings.len(), 1);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = load_graph("0 1\nx y\n".as_bytes()).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
        let err = load_graph("p 4 1\n0 9\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
        let err = load_graph("0 0\n".as_bytes()).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 1),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn header_fixes_isolated_vertices() {
        let loaded = load_graph("p 5 1\n0 1\n".as_bytes()).unwrap();
        assert_eq!(loaded.graph.n(), 5);
        assert_eq!(loaded.graph.m(), 1);
    }
}

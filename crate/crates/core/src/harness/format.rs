//! Text formats with 1-based labels.
//!
//! Graphs:
//!
//! ```text
//! c optional comments
//! p tw <n> <m>
//! e <u> <v>        (m lines, ascending (min, max) pairs when written)
//! ```
//!
//! Tree decompositions:
//!
//! ```text
//! p td <bags> <width+1> <n>
//! b <id> <v1> <v2> ...
//! t <id1> <id2>
//! r <id>           (optional)
//! ```

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::treewidth::TreeDecomposition;

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Meaningful lines with their 1-based line numbers, split into fields.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields.first() {
            None | Some(&"c") => None,
            Some(_) => Some((i + 1, fields)),
        }
    })
}

fn number(line: usize, field: &str) -> Result<usize> {
    field
        .parse()
        .map_err(|_| parse_error(line, format!("expected a number, found {field:?}")))
}

/// Converts a 1-based label to 0-based, checking it against `n`.
fn label(line: usize, field: &str, n: usize) -> Result<usize> {
    let v = number(line, field)?;
    if v == 0 || v > n {
        return Err(parse_error(line, format!("label {v} outside 1..={n}")));
    }
    Ok(v - 1)
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut last_line = 0;
    for (line, fields) in records(text) {
        last_line = line;
        match (fields[0], header) {
            ("p", None) => {
                if fields.len() != 4 || fields[1] != "tw" {
                    return Err(parse_error(line, "expected `p tw <n> <m>`"));
                }
                header = Some((number(line, fields[2])?, number(line, fields[3])?));
            }
            ("p", Some(_)) => return Err(parse_error(line, "duplicate problem line")),
            ("e", Some((n, _))) => {
                if fields.len() != 3 {
                    return Err(parse_error(line, "expected `e <u> <v>`"));
                }
                edges.push((label(line, fields[1], n)?, label(line, fields[2], n)?));
            }
            ("e", None) => return Err(parse_error(line, "edge before problem line")),
            (other, _) => return Err(parse_error(line, format!("unknown record {other:?}"))),
        }
    }
    let Some((n, m)) = header else {
        return Err(parse_error(last_line.max(1), "missing problem line"));
    };
    if edges.len() != m {
        return Err(parse_error(
            last_line.max(1),
            format!("declared {m} edges, found {}", edges.len()),
        ));
    }
    Graph::from_edges(n, &edges).map_err(|e| parse_error(last_line.max(1), e.to_string()))
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("p tw {} {}\n", g.vertex_count(), g.edge_count());
    for &(u, v) in g.edges() {
        writeln!(out, "e {} {}", u + 1, v + 1).expect("writing to a string");
    }
    out
}

/// Parses a decomposition. The declared width and vertex count are
/// checked against the bags.
pub fn parse_decomposition(text: &str) -> Result<TreeDecomposition> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut bags: Vec<Option<VertexSet>> = Vec::new();
    let mut edges = Vec::new();
    let mut root = None;
    let mut last_line = 0;
    for (line, fields) in records(text) {
        last_line = line;
        let kind = fields[0];
        if kind == "p" {
            if header.is_some() {
                return Err(parse_error(line, "duplicate problem line"));
            }
            if fields.len() != 5 || fields[1] != "td" {
                return Err(parse_error(line, "expected `p td <bags> <width+1> <n>`"));
            }
            let count = number(line, fields[2])?;
            header = Some((count, number(line, fields[3])?, number(line, fields[4])?));
            bags = vec![None; count];
            continue;
        }
        let Some((count, _, n)) = header else {
            return Err(parse_error(line, "record before problem line"));
        };
        match kind {
            "b" if fields.len() >= 2 => {
                let id = label(line, fields[1], count)?;
                let members = fields[2..]
                    .iter()
                    .map(|f| label(line, f, n))
                    .collect::<Result<Vec<_>>>()?;
                if bags[id].replace(VertexSet::from(members)).is_some() {
                    return Err(parse_error(line, format!("bag {} given twice", id + 1)));
                }
            }
            "t" if fields.len() == 3 => {
                edges.push((label(line, fields[1], count)?, label(line, fields[2], count)?));
            }
            "r" if fields.len() == 2 => {
                if root.replace(label(line, fields[1], count)?).is_some() {
                    return Err(parse_error(line, "root given twice"));
                }
            }
            _ => return Err(parse_error(line, format!("malformed record {kind:?}"))),
        }
    }
    let Some((_, declared, _)) = header else {
        return Err(parse_error(last_line.max(1), "missing problem line"));
    };
    let bags = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| parse_error(last_line, format!("bag {} missing", i + 1))))
        .collect::<Result<Vec<_>>>()?;
    let widest = bags.iter().map(VertexSet::len).max().unwrap_or(0);
    if widest != declared {
        return Err(parse_error(
            last_line,
            format!("declared largest bag {declared}, found {widest}"),
        ));
    }
    TreeDecomposition::new(bags, edges, root).map_err(|e| parse_error(last_line, e.to_string()))
}

/// Writes `d` for a graph on `n` vertices.
pub fn write_decomposition(d: &TreeDecomposition, n: usize) -> String {
    let widest = d.bags().iter().map(VertexSet::len).max().unwrap_or(0);
    let mut out = format!("p td {} {} {}\n", d.bag_count(), widest, n);
    for (i, bag) in d.bags().iter().enumerate() {
        write!(out, "b {}", i + 1).expect("writing to a string");
        for v in bag.iter() {
            write!(out, " {}", v + 1).expect("writing to a string");
        }
        out.push('\n');
    }
    for &(a, b) in d.tree_edges() {
        writeln!(out, "t {} {}", a + 1, b + 1).expect("writing to a string");
    }
    if let Some(r) = d.root() {
        writeln!(out, "r {}", r + 1).expect("writing to a string");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_round_trip() {
        let g = Graph::from_edges(4, &[(2, 3), (0, 1), (1, 2)]).unwrap();
        let text = write_graph(&g);
        assert_eq!(text, "p tw 4 3\ne 1 2\ne 2 3\ne 3 4\n");
        assert_eq!(parse_graph(&text).unwrap(), g);
        let commented = "c a path\np tw 4 3\n\ne 2 1\nc middle\ne 3 2\ne 4 3\n";
        assert_eq!(parse_graph(commented).unwrap(), g);
    }

    #[test]
    fn graph_errors_name_the_line() {
        let err = |t: &str| match parse_graph(t) {
            Err(Error::Parse { line, .. }) => line,
            other => panic!("expected a parse error, got {other:?}"),
        };
        assert_eq!(err("e 1 2\n"), 1);
        assert_eq!(err("p tw 2 1\ne 1 3\n"), 2);
        assert_eq!(err("p tw 2 2\ne 1 2\n"), 2);
        assert_eq!(err("p tw 2 1\nx\n"), 2);
        assert_eq!(err("p tw 2 1\ne 1 1\n"), 2);
        assert_eq!(err(""), 1);
    }

    #[test]
    fn decomposition_round_trip() {
        let d = TreeDecomposition::new(
            vec![VertexSet::from([0, 1]), VertexSet::from([1, 2])],
            vec![(0, 1)],
            Some(1),
        )
        .unwrap();
        let text = write_decomposition(&d, 3);
        assert_eq!(text, "p td 2 2 3\nb 1 1 2\nb 2 2 3\nt 1 2\nr 2\n");
        assert_eq!(parse_decomposition(&text).unwrap(), d);
    }

    #[test]
    fn decomposition_errors() {
        assert!(parse_decomposition("b 1 1\n").is_err());
        assert!(parse_decomposition("p td 2 2 3\nb 1 1 2\nt 1 2\n").is_err());
        assert!(parse_decomposition("p td 1 3 3\nb 1 1 2\n").is_err());
        assert!(parse_decomposition("p td 1 2 3\nb 1 1 4\n").is_err());
        assert!(parse_decomposition("p td 1 2 3\nb 1 1 2\nr 1\nr 1\n").is_err());
    }
}

//! Plain-text graph and configuration files.
//!
//! A graph file starts with a header line `n m` followed by `m` lines `u v`
//! (0-based). A configuration file has one line per vertex with `d`
//! whitespace-separated rationals such as `3`, `-1/2`. In both formats blank
//! lines and lines starting with `#` are ignored.

use thiserror::Error;

use crate::field::{format_rational, parse_rational, Rational};
use crate::graph::{Graph, GraphError};
use crate::rigidity::Configuration;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
    #[error("expected {expected} edge lines, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("empty input")]
    Empty,
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn two_numbers(line: usize, s: &str) -> Result<(usize, usize), ParseError> {
    let syntax = |msg: String| ParseError::Syntax { line, msg };
    let toks: Vec<&str> = s.split_whitespace().collect();
    if toks.len() != 2 {
        return Err(syntax(format!("expected two integers, got {s:?}")));
    }
    let num = |t: &str| {
        t.parse::<usize>()
            .map_err(|_| syntax(format!("not a non-negative integer: {t:?}")))
    };
    Ok((num(toks[0])?, num(toks[1])?))
}

pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or(ParseError::Empty)?;
    let (n, m) = two_numbers(hline, header)?;
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(m);
    let mut graph = Graph::empty(n);
    for (line, s) in lines {
        if edges.len() == m {
            return Err(ParseError::EdgeCount {
                expected: m,
                found: m + 1,
            });
        }
        let (u, v) = two_numbers(line, s)?;
        edges.push((u, v));
        graph = graph
            .with_edge(u, v)
            .map_err(|source| ParseError::Graph { line, source })?;
    }
    if edges.len() != m {
        return Err(ParseError::EdgeCount {
            expected: m,
            found: edges.len(),
        });
    }
    Ok(graph)
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn parse_configuration(text: &str) -> Result<Configuration<Rational>, ParseError> {
    let mut points = Vec::new();
    for (line, s) in content_lines(text) {
        let point = s
            .split_whitespace()
            .map(parse_rational)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| ParseError::Syntax {
                line,
                msg: e.to_string(),
            })?;
        if let Some(first) = points.first().map(Vec::len) {
            if point.len() != first {
                return Err(ParseError::Syntax {
                    line,
                    msg: format!("expected {first} coordinates, got {}", point.len()),
                });
            }
        }
        points.push(point);
    }
    let d = points.first().map(Vec::len).ok_or(ParseError::Empty)?;
    Ok(Configuration::from_points(d, points).expect("rows checked"))
}

pub fn write_configuration(c: &Configuration<Rational>) -> String {
    (0..c.n())
        .map(|i| {
            let row: Vec<String> = c.point(i).iter().map(format_rational).collect();
            row.join(" ") + "\n"
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    #[test]
    fn parses_with_comments() {
        let g = parse_graph("# triangle\n3 3\n0 1\n\n1 2\n# mid\n2 0\n").unwrap();
        assert_eq!(g, Graph::complete(3));
    }

    #[test]
    fn rejects_bad_graph_files() {
        assert_eq!(parse_graph(""), Err(ParseError::Empty));
        assert!(matches!(
            parse_graph("3 2\n0 1\n1 0\n"),
            Err(ParseError::Graph {
                line: 3,
                source: GraphError::DuplicateEdge(0, 1)
            })
        ));
        assert!(matches!(
            parse_graph("3 1\n1 1\n"),
            Err(ParseError::Graph {
                line: 2,
                source: GraphError::SelfLoop(1)
            })
        ));
        assert_eq!(
            parse_graph("3 2\n0 1\n"),
            Err(ParseError::EdgeCount {
                expected: 2,
                found: 1
            })
        );
        assert!(matches!(
            parse_graph("3 1\n0 1\n1 2\n"),
            Err(ParseError::EdgeCount { .. })
        ));
        assert!(matches!(
            parse_graph("3 1\n0 x\n"),
            Err(ParseError::Syntax { line: 2, .. })
        ));
        assert!(matches!(
            parse_graph("3 1\n0 5\n"),
            Err(ParseError::Graph { .. })
        ));
    }

    #[test]
    fn configuration_files() {
        let c = parse_configuration("0 0\n1/2 -3\n# x\n2 1\n").unwrap();
        assert_eq!((c.n(), c.d()), (3, 2));
        assert_eq!(
            c.coord(1, 0),
            &Rational::new(BigInt::from(1), BigInt::from(2))
        );
        assert_eq!(write_configuration(&c), "0 0\n1/2 -3\n2 1\n");
        assert!(parse_configuration("0 0\n1\n").is_err());
        assert!(parse_configuration("0 a\n").is_err());
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (1usize..10).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..20).prop_map(move |pairs| {
                let mut g = Graph::empty(n);
                for (u, v) in pairs {
                    if let Ok(h) = g.with_edge(u, v) {
                        g = h;
                    }
                }
                g
            })
        })
    }

    proptest! {
        #[test]
        fn graph_round_trip(g in arb_graph()) {
            prop_assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
        }

        #[test]
        fn configuration_round_trip(
            pts in proptest::collection::vec(proptest::collection::vec((-50i64..50, 1i64..9), 2), 1..8)
        ) {
            let rows: Vec<Vec<Rational>> = pts
                .iter()
                .map(|r| r.iter().map(|&(a, b)| Rational::new(BigInt::from(a), BigInt::from(b))).collect())
                .collect();
            let c = Configuration::from_points(2, rows).unwrap();
            prop_assert_eq!(parse_configuration(&write_configuration(&c)).unwrap(), c);
        }
    }
}

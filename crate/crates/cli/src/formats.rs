//! Graph and formula file formats.
//!
//! A graph file is line-based: `#` starts a comment, the first data line
//! is `graph <n>`, and every following data line is one edge `<u> <v>`
//! with `u < v`, 0-based. Duplicate, reversed, self-looping, or
//! out-of-range edges are rejected. Emission sorts edges so files
//! round-trip byte for byte.

use std::fmt;

use vimc::logic::{parse_formula, print_formula, Formula};
use vimc::Graph;

#[derive(Debug)]
pub enum FormatError {
    Graph { line: usize, msg: String },
    Formula(vimc::Error),
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormatError::Graph { line, msg } => write!(f, "graph file line {line}: {msg}"),
            FormatError::Formula(e) => write!(f, "formula file: {e}"),
        }
    }
}

pub fn parse_graph(text: &str) -> Result<Graph, FormatError> {
    let mut graph: Option<Graph> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let data = raw.split('#').next().unwrap_or("").trim();
        if data.is_empty() {
            continue;
        }
        let fields: Vec<&str> = data.split_whitespace().collect();
        match &mut graph {
            None => {
                if fields.len() != 2 || fields[0] != "graph" {
                    return Err(FormatError::Graph {
                        line,
                        msg: format!("expected 'graph <n>', found '{data}'"),
                    });
                }
                let n: usize = fields[1].parse().map_err(|_| FormatError::Graph {
                    line,
                    msg: format!("invalid vertex count '{}'", fields[1]),
                })?;
                graph = Some(Graph::empty(n));
            }
            Some(g) => {
                if fields.len() != 2 {
                    return Err(FormatError::Graph {
                        line,
                        msg: format!("expected '<u> <v>', found '{data}'"),
                    });
                }
                let parse = |s: &str| -> Result<usize, FormatError> {
                    s.parse().map_err(|_| FormatError::Graph {
                        line,
                        msg: format!("invalid vertex id '{s}'"),
                    })
                };
                let (u, v) = (parse(fields[0])?, parse(fields[1])?);
                if u >= v {
                    return Err(FormatError::Graph {
                        line,
                        msg: format!("edge must satisfy u < v, found {u} {v}"),
                    });
                }
                if g.has_edge(u, v) {
                    return Err(FormatError::Graph {
                        line,
                        msg: format!("duplicate edge {u} {v}"),
                    });
                }
                g.add_edge(u, v).map_err(|e| FormatError::Graph {
                    line,
                    msg: e.to_string(),
                })?;
            }
        }
    }
    graph.ok_or(FormatError::Graph {
        line: 0,
        msg: "missing 'graph <n>' header".into(),
    })
}

pub fn emit_graph(g: &Graph) -> String {
    let mut out = format!("graph {}\n", g.n());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn parse_formula_file(text: &str) -> Result<Formula, FormatError> {
    parse_formula(text).map_err(FormatError::Formula)
}

pub fn emit_formula(f: &Formula) -> String {
    let mut out = print_formula(f);
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_round_trip_is_byte_exact() {
        let g = Graph::from_edges(5, &[(0, 3), (1, 2), (0, 1)]).unwrap();
        let text = emit_graph(&g);
        assert_eq!(text, "graph 5\n0 1\n0 3\n1 2\n");
        let back = parse_graph(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(emit_graph(&back), text);
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let g = parse_graph("# a file\n\ngraph 3 # three vertices\n0 1 # an edge\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edges(), vec![(0, 1)]);
    }

    #[test]
    fn bad_edges_are_rejected_with_line_numbers() {
        for (text, needle) in [
            ("graph 3\n1 0\n", "u < v"),
            ("graph 3\n1 1\n", "u < v"),
            ("graph 3\n0 1\n0 1\n", "duplicate"),
            ("graph 3\n0 9\n", "out of range"),
            ("0 1\n", "graph <n>"),
            ("graph 3\n0\n", "<u> <v>"),
        ] {
            let err = parse_graph(text).unwrap_err().to_string();
            assert!(err.contains(needle), "{text:?} gave {err}");
        }
    }

    #[test]
    fn formula_file_round_trip() {
        let f = parse_formula_file("# sentence\nexists x1. forall x2. x1 = x2\n").unwrap();
        let text = emit_formula(&f);
        assert_eq!(parse_formula_file(&text).unwrap(), f);
    }
}

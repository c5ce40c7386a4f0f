//! Graph file formats.
//!
//! Text: first significant line `p q`, then one edge per line as
//! `j k j' k'` (1-based labels). `#` starts a comment; blank lines are
//! ignored. JSON: `{"p":2,"q":2,"edges":[[[1,1],[2,2]],[[1,2],[2,1]]]}`.

use std::fmt::Write as _;

use thiserror::Error;

use super::{BipartiteLabeledGraph, GraphError, GraphJson, Label};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
    #[error("missing header line `p q`")]
    MissingHeader,
    #[error("invalid JSON graph: {0}")]
    Json(String),
}

/// Parses either format, choosing JSON when the first non-blank character is `{`.
pub fn parse_graph(input: &str) -> Result<BipartiteLabeledGraph, ParseError> {
    if input.trim_start().starts_with('{') {
        parse_graph_json(input)
    } else {
        parse_graph_text(input)
    }
}

pub fn parse_graph_json(input: &str) -> Result<BipartiteLabeledGraph, ParseError> {
    let raw: GraphJson = serde_json::from_str(input).map_err(|e| ParseError::Json(e.to_string()))?;
    BipartiteLabeledGraph::try_from(raw).map_err(|e| ParseError::Json(e.to_string()))
}

pub fn parse_graph_text(input: &str) -> Result<BipartiteLabeledGraph, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(Label, Label)> = Vec::new();
    let mut edge_lines: Vec<usize> = Vec::new();

    for (idx, raw) in input.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields = parse_fields(content, line)?;
        match header {
            None => {
                let [p, q] = fields[..] else {
                    return Err(syntax(line, format!("expected header `p q`, found {} fields", fields.len())));
                };
                if p == 0 || q == 0 {
                    return Err(ParseError::Graph { line, source: GraphError::InvalidSplit { p, q } });
                }
                header = Some((p, q));
            }
            Some((p, q)) => {
                let [a, b, c, d] = fields[..] else {
                    return Err(syntax(line, format!("expected edge `j k j' k'`, found {} fields", fields.len())));
                };
                for label in [(a, b), (c, d)] {
                    if label.0 == 0 || label.1 == 0 || label.0 > p || label.1 > q {
                        return Err(ParseError::Graph { line, source: GraphError::IndexOutOfRange(label, p, q) });
                    }
                }
                edges.push(((a, b), (c, d)));
                edge_lines.push(line);
            }
        }
    }

    let (p, q) = header.ok_or(ParseError::MissingHeader)?;
    // Re-run edge insertion one by one to attach a line number to the failure.
    let mut accepted: Vec<(Label, Label)> = Vec::with_capacity(edges.len());
    for (edge, line) in edges.iter().zip(edge_lines) {
        accepted.push(*edge);
        if let Err(source) = BipartiteLabeledGraph::new(p, q, &accepted) {
            return Err(ParseError::Graph { line, source });
        }
    }
    BipartiteLabeledGraph::new(p, q, &edges).map_err(|source| ParseError::Graph { line: 0, source })
}

fn parse_fields(content: &str, line: usize) -> Result<Vec<usize>, ParseError> {
    content
        .split_whitespace()
        .map(|tok| tok.parse::<usize>().map_err(|_| syntax(line, format!("`{tok}` is not a non-negative integer"))))
        .collect()
}

fn syntax(line: usize, message: String) -> ParseError {
    ParseError::Syntax { line, message }
}

impl BipartiteLabeledGraph {
    /// Renders the text format; parses back to an equal graph.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.p(), self.q());
        for ((a, b), (c, d)) in self.edge_labels() {
            let _ = writeln!(out, "{a} {b} {c} {d}");
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serialization is infallible")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_text_with_comments() {
        let src = "# cris-cross\n2 2\n1 1 2 2   # first diagonal\n\n1 2 2 1\n";
        let g = parse_graph(src).unwrap();
        assert_eq!(g.edges(), &[(0, 3), (1, 2)]);
        assert_eq!(parse_graph(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn parses_json() {
        let g = parse_graph(r#"{"p":2,"q":2,"edges":[[[1,1],[2,2]],[[1,2],[2,1]]]}"#).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(parse_graph(&g.to_json()).unwrap(), g);
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let err = parse_graph("2 2\n1 1 2 2\n1 2 x 1\n").unwrap_err();
        assert_eq!(err, ParseError::Syntax { line: 3, message: "`x` is not a non-negative integer".into() });
        let err = parse_graph("2 2\n1 1 2\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 2, .. }));
    }

    #[test]
    fn graph_errors_carry_line() {
        let err = parse_graph("2 2\n1 1 2 2\n\n2 2 1 1\n").unwrap_err();
        assert!(matches!(err, ParseError::Graph { line: 4, source: GraphError::DuplicateEdge(..) }));
        let err = parse_graph("2 2\n1 1 3 2\n").unwrap_err();
        assert!(matches!(err, ParseError::Graph { line: 2, source: GraphError::IndexOutOfRange(..) }));
        let err = parse_graph("2 2\n1 1 1 1\n").unwrap_err();
        assert!(matches!(err, ParseError::Graph { line: 2, source: GraphError::SelfLoop((1, 1)) }));
        assert_eq!(parse_graph("# nothing\n"), Err(ParseError::MissingHeader));
    }
}

//! Graph file formats.
//!
//! JSON: `{"n": <universe>, "vertices": [ascending], "edges": [[i, j], ...]}`
//! with `i < j` and the edge list sorted lexicographically.
//!
//! Edge list: a header line `# vertices: 1 2 3`, then one `i j` per line.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{Graph, Label};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub vertices: Vec<Label>,
    pub edges: Vec<[Label; 2]>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        GraphJson {
            n: g.universe(),
            vertices: g.labels().to_vec(),
            edges: g.edges().into_iter().map(|(a, b)| [a, b]).collect(),
        }
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;

    fn try_from(j: GraphJson) -> Result<Graph> {
        Graph::new(j.n, j.vertices, j.edges.into_iter().map(|[a, b]| (a, b)))
    }
}

pub fn to_json(g: &Graph) -> String {
    serde_json::to_string(&GraphJson::from(g)).expect("graph json is serializable")
}

pub fn from_json(s: &str) -> Result<Graph> {
    let j: GraphJson = serde_json::from_str(s)?;
    Graph::try_from(j)
}

pub fn to_edge_list(g: &Graph) -> String {
    let mut out = String::from("# vertices:");
    for l in g.labels() {
        write!(out, " {l}").unwrap();
    }
    out.push('\n');
    for (a, b) in g.edges() {
        writeln!(out, "{a} {b}").unwrap();
    }
    out
}

/// Parses the edge-list format. Without a header, the vertex set is the set
/// of edge endpoints.
pub fn from_edge_list(s: &str) -> Result<Graph> {
    let mut vertices: Option<Vec<Label>> = None;
    let mut edges = Vec::new();
    for (idx, raw) in s.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(list) = rest.trim().strip_prefix("vertices:") {
                let mut vs = Vec::new();
                for tok in list.split_whitespace() {
                    vs.push(tok.parse::<Label>().map_err(|e| {
                        Error::parse(line_no, None, format!("bad vertex {tok:?}: {e}"))
                    })?);
                }
                vertices = Some(vs);
            }
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(Error::parse(
                line_no,
                None,
                format!("expected two endpoints, found {}", toks.len()),
            ));
        }
        let mut ends = [0; 2];
        for (k, tok) in toks.iter().enumerate() {
            ends[k] = tok.parse::<Label>().map_err(|e| {
                Error::parse(line_no, Some(k + 1), format!("bad endpoint {tok:?}: {e}"))
            })?;
        }
        edges.push((ends[0], ends[1]));
    }
    let vertices =
        vertices.unwrap_or_else(|| edges.iter().flat_map(|&(a, b)| [a, b]).collect());
    Graph::from_edges(vertices, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_layout_is_canonical() {
        let g = Graph::new(5, [3, 1, 2], [(3, 1), (2, 1)]).unwrap();
        assert_eq!(
            to_json(&g),
            r#"{"n":5,"vertices":[1,2,3],"edges":[[1,2],[1,3]]}"#
        );
        assert_eq!(from_json(&to_json(&g)).unwrap(), g);
    }

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::cycle(5).unwrap();
        let text = to_edge_list(&g);
        assert!(text.starts_with("# vertices: 1 2 3 4 5\n"));
        assert_eq!(from_edge_list(&text).unwrap(), g);
    }

    #[test]
    fn edge_list_errors_carry_position() {
        let err = from_edge_list("1 2\n3 x\n").unwrap_err();
        match err {
            Error::Parse { pos, .. } => {
                assert_eq!(pos.line, 2);
                assert_eq!(pos.column, Some(2));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(from_edge_list("1 2 3\n").is_err());
    }

    #[test]
    fn isolated_vertices_from_header() {
        let g = from_edge_list("# vertices: 1 2 9\n1 2\n").unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(g.universe(), 9);
    }
}

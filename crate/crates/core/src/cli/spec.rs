//! The graph and matrix mini-languages used on the command line.

use std::path::Path;

use crate::error::{Error, Result};
use crate::graphs::{build_gadget, io, Graph};
use crate::problems::{build_udisj, PartialMatrix, Rational};
use crate::randgraph::{sample_gnp, GnpConfig};

/// `K<t>`, `C<t>`, `P<t>`, `E<t>` (edgeless), `gnp:<n>:<p>` (sampled with
/// `seed`), or a path to a graph file (`.json`, otherwise edge list).
pub fn parse_graph(spec: &str, seed: u64) -> Result<Graph> {
    let family = |prefix: char| -> Option<Result<usize>> {
        let rest = spec.strip_prefix(prefix)?;
        (!rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit())).then(|| {
            rest.parse::<usize>()
                .map_err(|e| Error::parse(1, Some(2), format!("bad order in {spec:?}: {e}")))
        })
    };
    if let Some(t) = family('K') {
        return Ok(Graph::complete(t?));
    }
    if let Some(t) = family('P') {
        return Ok(Graph::path(t?));
    }
    if let Some(t) = family('E') {
        return Ok(Graph::edgeless(t?));
    }
    if let Some(t) = family('C') {
        return Graph::cycle(t?);
    }
    if let Some(rest) = spec.strip_prefix("gnp:") {
        let (n, p) = rest
            .split_once(':')
            .ok_or_else(|| Error::parse(1, Some(5), format!("expected gnp:<n>:<p>, got {spec:?}")))?;
        let n: usize = n
            .parse()
            .map_err(|e| Error::parse(1, Some(5), format!("bad n in {spec:?}: {e}")))?;
        let p: f64 = p
            .parse()
            .map_err(|e| Error::parse(1, Some(6 + n.to_string().len()), format!("bad p in {spec:?}: {e}")))?;
        return sample_gnp(&GnpConfig::new(n, p, seed)?);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(Error::InvalidParameter(format!(
            "{spec:?} is neither K<t>, C<t>, P<t>, E<t>, gnp:<n>:<p> nor an existing file"
        )));
    }
    let text = std::fs::read_to_string(path)?;
    if path.extension().is_some_and(|e| e == "json") {
        io::from_json(&text)
    } else {
        io::from_edge_list(&text)
    }
}

/// The graph of `spec`, replaced by its gadget when `ell` is given.
pub fn parse_graph_or_gadget(spec: &str, ell: Option<usize>, seed: u64) -> Result<Graph> {
    let g = parse_graph(spec, seed)?;
    match ell {
        Some(l) => Ok(build_gadget(&g, l)?.graph().clone()),
        None => Ok(g),
    }
}

/// `udisj:<n>`, or a matrix file: `.json` in the matrix JSON layout,
/// otherwise CSV with `NA` for undefined entries.
pub fn parse_matrix_rational(spec: &str) -> Result<PartialMatrix<Rational>> {
    if let Some(n) = spec.strip_prefix("udisj:") {
        let n = n
            .parse()
            .map_err(|e| Error::parse(1, Some(7), format!("bad n in {spec:?}: {e}")))?;
        return build_udisj(n, None);
    }
    read_matrix(spec)
}

pub fn parse_matrix_float(spec: &str) -> Result<PartialMatrix<f64>> {
    if spec.starts_with("udisj:") {
        return Ok(parse_matrix_rational(spec)?.to_f64());
    }
    read_matrix(spec)
}

fn read_matrix<T: crate::problems::Entry>(path: &str) -> Result<PartialMatrix<T>> {
    let text = std::fs::read_to_string(path)?;
    if path.ends_with(".json") {
        let j: crate::problems::MatrixJson = serde_json::from_str(&text)?;
        PartialMatrix::from_json_value(&j)
    } else {
        PartialMatrix::from_csv(&text)
    }
}

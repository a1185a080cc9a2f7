use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::{stability_number, GadgetGraph, Graph, VertexSet};

use super::matrix::{PartialMatrix, Rational};

/// Template size cap for the embedding (rows × cols = 4^t).
pub const EMBED_TEMPLATE_CAP: usize = 10;

/// How one entry `N(a, b)` was assembled.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingEntry {
    pub a: String,
    pub b: String,
    pub alpha_sub: usize,
    pub sub_hits: usize,
    pub alpha_small: usize,
    pub small_hits: usize,
    pub value: i64,
}

#[derive(Clone, Debug)]
pub struct GadgetEmbedding {
    pub t: usize,
    pub ell: usize,
    /// Rows: nonempty `a ⊆ V(T)`; columns: all `b ⊆ V(T)`.
    pub matrix: PartialMatrix<Rational>,
    pub entries: Vec<EmbeddingEntry>,
}

fn template_subsets(t: &Graph) -> Result<Vec<VertexSet>> {
    let vs = t.labels();
    (0u64..1u64 << vs.len())
        .map(|m| VertexSet::from_labels((0..vs.len()).filter(|k| m >> k & 1 == 1).map(|k| vs[k])))
        .collect()
}

/// `N(a, b) = M(𝒢(T[a]), S(b)) + M(small(T[a]), S(b))` for every nonempty
/// `a` and every `b`, each slack term computed as `α(H) − |V(H) ∩ S(b)|`.
///
/// Every entry is checked against `α(T[a]) − |a ∩ b| + 2|E(T[a ∩ b])|`, which
/// for `T = K_t` is `(1 − |a ∩ b|)²`.
pub fn gadget_embedding(gg: &GadgetGraph) -> Result<GadgetEmbedding> {
    let t = gg.template();
    if t.order() > EMBED_TEMPLATE_CAP {
        return Err(Error::InstanceTooLarge {
            what: "embedding template",
            size: t.order(),
            cap: EMBED_TEMPLATE_CAP,
        });
    }
    let n = t.universe();
    let cols = template_subsets(t)?;
    let rows: Vec<VertexSet> = cols.iter().copied().filter(|a| !a.is_empty()).collect();
    let extensions: Vec<VertexSet> = cols
        .iter()
        .map(|&b| gg.extend_stable_set(b))
        .collect::<Result<_>>()?;

    let mut values = vec![vec![Rational::from_integer(0); cols.len()]; rows.len()];
    let mut entries = Vec::with_capacity(rows.len() * cols.len());
    for (i, &a) in rows.iter().enumerate() {
        let sub = gg.gadget_sub(a)?;
        let small = gg.gadget_small(a)?;
        let alpha_sub = stability_number(&sub)?;
        let alpha_small = stability_number(&small)?;
        let alpha_t = stability_number(&t.induced_set(a)?)?;
        for (j, (&b, &s)) in cols.iter().zip(&extensions).enumerate() {
            let sub_hits = sub.vertex_set()?.intersection(s).len();
            let small_hits = small.vertex_set()?.intersection(s).len();
            let value = alpha_sub as i64 - sub_hits as i64 + alpha_small as i64 - small_hits as i64;
            let ab = a.intersection(b);
            let expected = alpha_t as i64 - ab.len() as i64 + 2 * t.edges_within(ab) as i64;
            if value != expected {
                return Err(Error::IdentityViolation {
                    at: format!("(a, b) = ({a}, {b})"),
                    expected: expected.to_string(),
                    found: value.to_string(),
                });
            }
            values[i][j] = Rational::from_integer(value);
            entries.push(EmbeddingEntry {
                a: a.to_bitstring(n),
                b: b.to_bitstring(n),
                alpha_sub,
                sub_hits,
                alpha_small,
                small_hits,
                value,
            });
        }
    }
    let matrix = PartialMatrix::from_rows(values)?.with_labels(
        rows.iter().map(|a| a.to_bitstring(n)).collect(),
        cols.iter().map(|b| b.to_bitstring(n)).collect(),
    )?;
    Ok(GadgetEmbedding {
        t: t.order(),
        ell: gg.ell(),
        matrix,
        entries,
    })
}

/// The embedding for a complete template `K_t`, additionally checking
/// `N(a, b) = (1 − |a ∩ b|)²` and hence `N = UDISJ(t)` wherever
/// `|a ∩ b| <= 1`.
pub fn embed_udisj_via_gadget(gg: &GadgetGraph) -> Result<GadgetEmbedding> {
    let t = gg.template();
    let k = t.order();
    if t.size() != k * k.saturating_sub(1) / 2 {
        return Err(Error::InvalidGraph(format!(
            "template must be complete, has {} of {} edges",
            t.size(),
            k * k.saturating_sub(1) / 2
        )));
    }
    let emb = gadget_embedding(gg)?;
    for (i, j, v) in emb.matrix.defined_entries() {
        let a = VertexSet::from_bitstring(&emb.matrix.row_labels()[i]).expect("row label");
        let b = VertexSet::from_bitstring(&emb.matrix.col_labels()[j]).expect("col label");
        let m = a.intersection(b).len() as i64;
        let square = Rational::from_integer((1 - m) * (1 - m));
        if *v != square {
            return Err(Error::IdentityViolation {
                at: format!("(a, b) = ({a}, {b})"),
                expected: square.to_string(),
                found: v.to_string(),
            });
        }
    }
    Ok(emb)
}

impl GadgetEmbedding {
    /// The entries with `|a ∩ b| <= 1`; for a complete template this is
    /// `UDISJ(t)` without its empty row.
    pub fn udisj_block(&self) -> PartialMatrix<Rational> {
        let m = &self.matrix;
        PartialMatrix::from_fn(m.row_labels().to_vec(), m.col_labels().to_vec(), |i, j| {
            let a = VertexSet::from_bitstring(&m.row_labels()[i]).expect("row label");
            let b = VertexSet::from_bitstring(&m.col_labels()[j]).expect("col label");
            (a.intersection(b).len() <= 1)
                .then(|| m.get(i, j).cloned())
                .flatten()
        })
    }

    pub fn entry(&self, a: VertexSet, b: VertexSet) -> Option<&EmbeddingEntry> {
        let n = self.matrix.row_labels().first()?.len();
        let (a, b) = (a.to_bitstring(n), b.to_bitstring(n));
        self.entries.iter().find(|e| e.a == a && e.b == b)
    }
}

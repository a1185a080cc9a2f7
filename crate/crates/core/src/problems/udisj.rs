use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::graphs::{stability_number, Graph, VertexSet};
use crate::randgraph::trial_rng;

use super::matrix::{PartialMatrix, Rational};
use super::problem::{slack_matrix, stab_u_problem, DEFAULT_SOLUTION_BUDGET};

/// Largest `n` for which the full `2^n × 2^n` matrix is built.
pub const UDISJ_DENSE_CAP: usize = 12;

/// Entry cap for row-restricted matrices.
pub const UDISJ_ENTRY_CAP: usize = 1 << 24;

fn subsets(n: usize) -> Vec<VertexSet> {
    VertexSet::subsets_of_range(n).collect()
}

fn labels(sets: &[VertexSet], n: usize) -> Vec<String> {
    sets.iter().map(|s| s.to_bitstring(n)).collect()
}

fn udisj_entry(a: VertexSet, b: VertexSet) -> Option<Rational> {
    match a.intersection(b).len() {
        0 => Some(Rational::one()),
        1 => Some(Rational::zero()),
        _ => None,
    }
}

/// The unique-disjointness partial matrix over subsets of `{1, ..., n}`:
/// 1 on disjoint pairs, 0 on pairs meeting in exactly one element, undefined
/// otherwise. Rows and columns are in bitmask order. With `k`, only rows with
/// `|a| = k` are kept (columns stay unrestricted).
pub fn build_udisj(n: usize, k: Option<usize>) -> Result<PartialMatrix<Rational>> {
    let rows: Vec<VertexSet> = match k {
        None => {
            if n > UDISJ_DENSE_CAP {
                return Err(Error::InstanceTooLarge {
                    what: "dense UDISJ(n)",
                    size: n,
                    cap: UDISJ_DENSE_CAP,
                });
            }
            subsets(n)
        }
        Some(k) => {
            if n > 24 {
                return Err(Error::InstanceTooLarge {
                    what: "UDISJ(n, k) universe",
                    size: n,
                    cap: 24,
                });
            }
            let rows: Vec<VertexSet> = VertexSet::subsets_of_range(n)
                .filter(|a| a.len() == k)
                .collect();
            let entries = rows.len().saturating_mul(1usize << n);
            if entries > UDISJ_ENTRY_CAP {
                return Err(Error::InstanceTooLarge {
                    what: "UDISJ(n, k) entries",
                    size: entries,
                    cap: UDISJ_ENTRY_CAP,
                });
            }
            rows
        }
    };
    let cols = subsets(n);
    Ok(PartialMatrix::from_fn(labels(&rows, n), labels(&cols, n), |i, j| {
        udisj_entry(rows[i], cols[j])
    }))
}

/// Adds `rho` to every defined entry.
pub fn shift_matrix(m: &PartialMatrix<Rational>, rho: Rational) -> Result<PartialMatrix<Rational>> {
    let out = m.map(|v| v + rho);
    if let Some((i, j)) = out.find_negative(&Rational::zero()) {
        return Err(Error::NegativeEntry {
            row: i,
            col: j,
            value: out.get(i, j).unwrap().to_string(),
        });
    }
    Ok(out)
}

/// Adds `u_r` to every defined entry of row `r` (the rank-one shift `u·1`).
pub fn rank1_shift(m: &PartialMatrix<Rational>, u: &[Rational]) -> Result<PartialMatrix<Rational>> {
    if u.len() != m.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "shift vector has {} entries for {} rows",
            u.len(),
            m.nrows()
        )));
    }
    if let Some(r) = u.iter().position(|x| *x < Rational::zero()) {
        return Err(Error::NegativeEntry {
            row: r,
            col: 0,
            value: u[r].to_string(),
        });
    }
    let mut out = m.clone();
    for (i, ui) in u.iter().enumerate() {
        for j in 0..out.ncols() {
            if let Some(v) = out.get_mut(i, j) {
                *v += ui;
            }
        }
    }
    Ok(out)
}

/// Slack matrix of the uniform model over all nonempty complete graphs
/// `K_n[a]`, restricted to the pairs with `|a ∩ b| <= 1` (where it equals
/// `1 − |a ∩ b|`); other entries are left undefined.
pub fn complete_family_example(n: usize) -> Result<PartialMatrix<Rational>> {
    if n > 8 {
        return Err(Error::InstanceTooLarge {
            what: "complete-family example",
            size: n,
            cap: 8,
        });
    }
    let rows: Vec<VertexSet> = subsets(n).into_iter().filter(|a| !a.is_empty()).collect();
    let family: Vec<Graph> = rows
        .iter()
        .map(|a| Graph::complete(n).induced_set(*a))
        .collect::<Result<_>>()?;
    let problem = stab_u_problem(&family, n, Rational::zero(), DEFAULT_SOLUTION_BUDGET)?;
    let slack = slack_matrix(&problem)?;
    let cols = problem.solutions().to_vec();
    Ok(PartialMatrix::from_fn(labels(&rows, n), labels(&cols, n), |i, j| {
        if rows[i].intersection(cols[j]).len() <= 1 {
            slack.get(i, j).cloned()
        } else {
            None
        }
    }))
}

/// Where the candidate graphs for each `k`-set come from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ToyFamily {
    /// Every graph with vertex set exactly `a`.
    AllGraphs,
    /// Each graph on `a` independently with probability `p`.
    Random { p: f64, seed: u64 },
}

/// A desk-scale instance of the uniform-model construction: one good graph
/// `G_a` per good `k`-set `a`, its slack rows, and the rank-one shift that
/// turns them into a shifted unique-disjointness block.
#[derive(Clone, Debug)]
pub struct UniformToy {
    pub n: usize,
    pub k: usize,
    /// Upper bound on `α(G_a)` for `G_a` to count as good.
    pub cap: Rational,
    pub good_sets: Vec<VertexSet>,
    pub bad_sets: Vec<VertexSet>,
    pub graphs: Vec<Graph>,
    /// Slack rows of the chosen graphs over all subsets of `{1, ..., n}`.
    pub slack: PartialMatrix<Rational>,
    /// `u_{G_a} = cap − α(G_a)`.
    pub shift: Vec<Rational>,
    pub shifted: PartialMatrix<Rational>,
}

/// Builds the toy uniform model. Among the candidate graphs on each `k`-set
/// the one with the smallest stability number is chosen, ties broken by the
/// lexicographically smallest edge list; sets without a candidate of
/// stability number at most `cap` are bad.
pub fn uniform_model_toy(n: usize, k: usize, cap: Rational, family: ToyFamily) -> Result<UniformToy> {
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= n, got k = {k}")));
    }
    if k > 5 {
        return Err(Error::InstanceTooLarge {
            what: "toy uniform model k (2^C(k,2) candidates)",
            size: k,
            cap: 5,
        });
    }
    if let ToyFamily::Random { p, .. } = family {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter(format!("p must lie in [0, 1], got {p}")));
        }
    }
    let ksets: Vec<VertexSet> = VertexSet::subsets_of_range(n).filter(|a| a.len() == k).collect();
    let mut good_sets = Vec::new();
    let mut bad_sets = Vec::new();
    let mut graphs = Vec::new();
    let mut alphas = Vec::new();
    for (idx, &a) in ksets.iter().enumerate() {
        let verts: Vec<usize> = a.iter().collect();
        let pairs: Vec<(usize, usize)> = (0..k)
            .flat_map(|x| (x + 1..k).map(move |y| (x, y)))
            .map(|(x, y)| (verts[x], verts[y]))
            .collect();
        let mut rng = match family {
            ToyFamily::Random { seed, .. } => Some(trial_rng(seed, idx as u64)),
            ToyFamily::AllGraphs => None,
        };
        let mut best: Option<(usize, Vec<(usize, usize)>, Graph)> = None;
        for mask in 0u64..(1u64 << pairs.len()) {
            if let (Some(rng), ToyFamily::Random { p, .. }) = (rng.as_mut(), family) {
                if rng.random::<f64>() >= p {
                    continue;
                }
            }
            let edges: Vec<(usize, usize)> = (0..pairs.len())
                .filter(|e| mask >> e & 1 == 1)
                .map(|e| pairs[e])
                .collect();
            let g = Graph::new(n, verts.iter().copied(), edges.iter().copied())?;
            let alpha = stability_number(&g)?;
            let better = match &best {
                None => true,
                Some((ba, be, _)) => alpha < *ba || (alpha == *ba && edges < *be),
            };
            if better {
                best = Some((alpha, edges, g));
            }
        }
        match best {
            Some((alpha, _, g)) if Rational::from_integer(alpha as i64) <= cap => {
                good_sets.push(a);
                alphas.push(alpha);
                graphs.push(g);
            }
            _ => bad_sets.push(a),
        }
    }
    let problem = stab_u_problem(&graphs, n, Rational::zero(), DEFAULT_SOLUTION_BUDGET)?;
    let slack = slack_matrix(&problem)?.with_labels(
        labels(&good_sets, n),
        problem.solution_labels().to_vec(),
    )?;
    let shift: Vec<Rational> = alphas
        .iter()
        .map(|&a| cap - Rational::from_integer(a as i64))
        .collect();
    let shifted = rank1_shift(&slack, &shift)?;
    Ok(UniformToy {
        n,
        k,
        cap,
        good_sets,
        bad_sets,
        graphs,
        slack,
        shift,
        shifted,
    })
}

impl UniformToy {
    /// Fraction of `k`-sets without a good graph.
    pub fn bad_fraction(&self) -> f64 {
        let total = self.good_sets.len() + self.bad_sets.len();
        self.bad_sets.len() as f64 / total as f64
    }

    /// The shifted slack restricted to pairs with `|a ∩ S| <= 1`.
    pub fn shifted_udisj_block(&self) -> PartialMatrix<Rational> {
        let cols: Vec<VertexSet> = subsets(self.n);
        PartialMatrix::from_fn(
            self.shifted.row_labels().to_vec(),
            self.shifted.col_labels().to_vec(),
            |i, j| {
                (self.good_sets[i].intersection(cols[j]).len() <= 1)
                    .then(|| self.shifted.get(i, j).cloned())
                    .flatten()
            },
        )
    }

    /// Checks that the shifted block is the `(cap − 1)`-shifted
    /// `UDISJ(n, k)` on the surviving rows: entries `cap − 1` where
    /// `|a ∩ S| = 1` and `cap` where `a ∩ S = ∅`.
    pub fn verify_shifted_udisj(&self) -> Result<()> {
        let block = self.shifted_udisj_block();
        let reference = shift_matrix(&build_udisj(self.n, Some(self.k))?, self.cap - Rational::one())?;
        let ref_rows: Vec<usize> = self
            .good_sets
            .iter()
            .map(|a| {
                reference
                    .row_labels()
                    .iter()
                    .position(|l| *l == a.to_bitstring(self.n))
                    .expect("k-set row present")
            })
            .collect();
        let cols: Vec<usize> = (0..reference.ncols()).collect();
        let expected = reference.submatrix(&ref_rows, &cols);
        for i in 0..block.nrows() {
            for j in 0..block.ncols() {
                if block.get(i, j) != expected.get(i, j) {
                    return Err(Error::IdentityViolation {
                        at: format!("({}, {})", block.row_labels()[i], block.col_labels()[j]),
                        expected: format!("{:?}", expected.get(i, j)),
                        found: format!("{:?}", block.get(i, j)),
                    });
                }
            }
        }
        Ok(())
    }
}

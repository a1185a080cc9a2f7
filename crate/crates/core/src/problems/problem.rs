use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graphs::{
    enumerate_stable_sets, stability_number, Graph, VertexSet,
};

use super::matrix::{PartialMatrix, Rational};

type Evaluator<S> = Arc<dyn Fn(&S) -> Rational + Send + Sync>;

/// One objective function together with its approximation guarantee `f*`.
#[derive(Clone)]
pub struct Objective<S> {
    label: String,
    eval: Evaluator<S>,
    guarantee: Rational,
}

impl<S> Objective<S> {
    pub fn new<F>(label: impl Into<String>, guarantee: Rational, eval: F) -> Self
    where
        F: Fn(&S) -> Rational + Send + Sync + 'static,
    {
        Objective {
            label: label.into(),
            eval: Arc::new(eval),
            guarantee,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn guarantee(&self) -> Rational {
        self.guarantee
    }

    pub fn eval(&self, s: &S) -> Rational {
        (self.eval)(s)
    }
}

impl<S> fmt::Debug for Objective<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Objective")
            .field("label", &self.label)
            .field("guarantee", &self.guarantee)
            .finish_non_exhaustive()
    }
}

/// A maximization problem: finitely many solutions, finitely many objective
/// functions, and a guarantee `f*` per objective.
///
/// The guarantee condition `f* >= max_s f(s)` is not checked on construction;
/// [`slack_matrix`] and [`MaxProblem::validate`] report violations.
#[derive(Clone, Debug)]
pub struct MaxProblem<S> {
    solutions: Vec<S>,
    solution_labels: Vec<String>,
    objectives: Vec<Objective<S>>,
}

impl<S> MaxProblem<S> {
    pub fn new(
        solutions: Vec<S>,
        solution_labels: Vec<String>,
        objectives: Vec<Objective<S>>,
    ) -> Result<Self> {
        if solutions.len() != solution_labels.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} solutions but {} labels",
                solutions.len(),
                solution_labels.len()
            )));
        }
        Ok(MaxProblem {
            solutions,
            solution_labels,
            objectives,
        })
    }

    pub fn solutions(&self) -> &[S] {
        &self.solutions
    }

    pub fn solution_labels(&self) -> &[String] {
        &self.solution_labels
    }

    pub fn objectives(&self) -> &[Objective<S>] {
        &self.objectives
    }

    /// `f(s)` for objective index `f` and solution index `s`.
    pub fn value(&self, f: usize, s: usize) -> Rational {
        self.objectives[f].eval(&self.solutions[s])
    }

    pub fn guarantee(&self, f: usize) -> Rational {
        self.objectives[f].guarantee
    }

    /// Checks `f* >= f(s)` everywhere, reporting the first witness otherwise.
    pub fn validate(&self) -> Result<()> {
        slack_matrix(self).map(|_| ())
    }
}

/// The slack matrix `M(f, s) = f* − f(s)` (objectives × solutions), fully
/// defined.
pub fn slack_matrix<S>(p: &MaxProblem<S>) -> Result<PartialMatrix<Rational>> {
    let rows: Vec<String> = p.objectives.iter().map(|o| o.label.clone()).collect();
    let cols = p.solution_labels.clone();
    let mut data = Vec::with_capacity(rows.len() * cols.len());
    for (fi, obj) in p.objectives.iter().enumerate() {
        for (si, s) in p.solutions.iter().enumerate() {
            let value = obj.eval(s);
            let slack = obj.guarantee - value;
            if slack < Rational::zero() {
                return Err(Error::GuaranteeViolation {
                    objective: format!("#{fi} {}", obj.label),
                    solution: format!("#{si} {}", p.solution_labels[si]),
                    value: value.to_string(),
                    guarantee: obj.guarantee.to_string(),
                });
            }
            data.push(slack);
        }
    }
    let mut it = data.into_iter();
    Ok(PartialMatrix::from_fn(rows, cols, |_, _| it.next()))
}

/// Budget on the number of solutions a problem builder may materialize.
pub const DEFAULT_SOLUTION_BUDGET: u64 = 1 << 20;

fn graph_label(g: &Graph) -> String {
    let verts: Vec<String> = g.labels().iter().map(|l| l.to_string()).collect();
    let edges: Vec<String> = g.edges().iter().map(|(a, b)| format!("{a}-{b}")).collect();
    format!("V={{{}}} E={{{}}}", verts.join(" "), edges.join(" "))
}

/// `f_G(S) = |V(G) ∩ S| − |E(G[S])|`, the conservative stable-set estimate
/// used as the uniform-model objective.
pub fn uniform_objective_value(g: &Graph, s: VertexSet) -> Rational {
    let inside = s.iter().filter(|&l| g.contains_vertex(l)).count() as i64;
    Rational::from_integer(inside - g.edges_within(s) as i64)
}

/// The uniform-model stable set problem over a family of graphs with
/// `V(G) ⊆ {1, ..., n}`.
///
/// Solutions are all subsets of `{1, ..., n}`, objectives
/// `f_G(S) = |V(G) ∩ S| − |E(G[S])|` and guarantees `(1 + ρ)α(G)`. Both
/// defining conditions (`max_S f_G(S) = α(G)`, and `f_G(S) = |V(G) ∩ S|`
/// whenever that intersection has at most one element) are verified by
/// enumeration.
pub fn stab_u_problem(
    family: &[Graph],
    n: usize,
    rho: Rational,
    budget: u64,
) -> Result<MaxProblem<VertexSet>> {
    if rho < Rational::zero() {
        return Err(Error::InvalidParameter(format!("rho must be >= 0, got {rho}")));
    }
    if n >= 63 || (1u64 << n) > budget {
        return Err(Error::BudgetExceeded {
            what: "uniform model solutions (2^n)",
            budget,
            partial: 0,
        });
    }
    for g in family {
        if let Some(&bad) = g.labels().iter().find(|&&l| l == 0 || l > n) {
            return Err(Error::InvalidParameter(format!(
                "vertex {bad} outside [n] = {{1..{n}}}"
            )));
        }
    }
    let solutions: Vec<VertexSet> = VertexSet::subsets_of_range(n).collect();
    let labels = solutions.iter().map(|s| s.to_bitstring(n)).collect();

    let mut objectives = Vec::with_capacity(family.len());
    for g in family {
        let alpha = stability_number(g)? as i64;
        let g_eval = g.clone();
        let obj = Objective::new(
            graph_label(g),
            (Rational::from_integer(1) + rho) * alpha,
            move |s: &VertexSet| uniform_objective_value(&g_eval, *s),
        );
        let max = solutions
            .iter()
            .map(|s| obj.eval(s))
            .max()
            .unwrap_or_else(Rational::zero);
        if max != Rational::from_integer(alpha) {
            return Err(Error::IdentityViolation {
                at: format!("objective {}", obj.label),
                expected: format!("max f_G = alpha(G) = {alpha}"),
                found: max.to_string(),
            });
        }
        for s in &solutions {
            let inside = s.iter().filter(|&l| g.contains_vertex(l)).count() as i64;
            if inside <= 1 && obj.eval(s) != Rational::from_integer(inside) {
                return Err(Error::IdentityViolation {
                    at: format!("objective {}, solution {s}", obj.label),
                    expected: format!("f_G(S) = |V(G) ∩ S| = {inside}"),
                    found: obj.eval(s).to_string(),
                });
            }
        }
        objectives.push(obj);
    }
    MaxProblem::new(solutions, labels, objectives)
}

/// The non-uniform stable set problem of a fixed graph.
///
/// Solutions are all stable sets of `g`; objectives `f_a(S) = |S ∩ a|` with
/// guarantees `α(G[a])`. Without an explicit family every `a ⊆ V(G)` is used,
/// ordered by bitmask over the sorted vertex list.
pub fn stab_nu_problem(
    g: &Graph,
    objective_family: Option<&[VertexSet]>,
    solution_budget: u64,
) -> Result<MaxProblem<VertexSet>> {
    let solutions = enumerate_stable_sets(g, None, solution_budget)?;
    let n = g.universe();
    let labels = solutions.iter().map(|s| s.to_bitstring(n)).collect();

    let family: Vec<VertexSet> = match objective_family {
        Some(f) => {
            for &a in f {
                g.require_subset(a)?;
            }
            f.to_vec()
        }
        None => {
            if g.order() > 24 {
                return Err(Error::InstanceTooLarge {
                    what: "all induced subgraphs as objectives",
                    size: g.order(),
                    cap: 24,
                });
            }
            let vs = g.labels();
            (0u64..1u64 << vs.len())
                .map(|m| {
                    VertexSet::from_labels(
                        (0..vs.len()).filter(|k| m >> k & 1 == 1).map(|k| vs[k]),
                    )
                })
                .collect::<Result<_>>()?
        }
    };

    let mut objectives = Vec::with_capacity(family.len());
    for a in family {
        let alpha = stability_number(&g.induced_set(a)?)? as i64;
        objectives.push(Objective::new(
            a.to_bitstring(n),
            Rational::from_integer(alpha),
            move |s: &VertexSet| Rational::from_integer(s.intersection(a).len() as i64),
        ));
    }
    MaxProblem::new(solutions, labels, objectives)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn set(l: &[usize]) -> VertexSet {
        VertexSet::from_labels(l.iter().copied()).unwrap()
    }

    #[test]
    fn two_solution_slack_row() {
        let p = MaxProblem::new(
            vec![1u8, 2],
            vec!["s1".into(), "s2".into()],
            vec![Objective::new("f", r(1), |s: &u8| if *s == 1 { r(1) } else { r(0) })],
        )
        .unwrap();
        let m = slack_matrix(&p).unwrap();
        assert_eq!((m.get(0, 0), m.get(0, 1)), (Some(&r(0)), Some(&r(1))));
    }

    #[test]
    fn guarantee_violation_has_witness() {
        let p = MaxProblem::new(
            vec![0u8, 5],
            vec!["a".into(), "b".into()],
            vec![Objective::new("f", r(3), |s: &u8| r(*s as i64))],
        )
        .unwrap();
        match slack_matrix(&p) {
            Err(Error::GuaranteeViolation { solution, .. }) => assert!(solution.contains('b')),
            other => panic!("expected violation, got {other:?}"),
        }
        assert!(p.validate().is_err());
    }

    #[test]
    fn stab_nu_p3_entry() {
        let p3 = Graph::path(3);
        let a = set(&[1, 3]);
        let p = stab_nu_problem(&p3, Some(&[a]), 100).unwrap();
        assert_eq!(p.guarantee(0), r(2));
        let m = slack_matrix(&p).unwrap();
        let col = p.solutions().iter().position(|s| *s == set(&[2])).unwrap();
        assert_eq!(m.get(0, col), Some(&r(2)));
    }

    #[test]
    fn stab_nu_k2_and_c5() {
        let p = stab_nu_problem(&Graph::complete(2), None, 100).unwrap();
        assert_eq!(p.solutions().len(), 3);
        let full = p.objectives().iter().position(|o| o.label() == "11").unwrap();
        assert_eq!(p.guarantee(full), r(1));

        let c5 = Graph::cycle(5).unwrap();
        let all = c5.vertex_set().unwrap();
        let p = stab_nu_problem(&c5, Some(&[all]), 100).unwrap();
        assert_eq!(p.guarantee(0), r(2));
        let m = slack_matrix(&p).unwrap();
        let best = p.solutions().iter().position(|s| s.len() == 2).unwrap();
        assert_eq!(m.get(0, best), Some(&r(0)));
    }

    #[test]
    fn stab_u_k3() {
        let k3 = Graph::complete(3);
        let p = stab_u_problem(&[k3.clone()], 3, r(0), 1 << 10).unwrap();
        assert_eq!(p.solutions().len(), 8);
        assert_eq!(p.guarantee(0), r(1));
        assert_eq!(uniform_objective_value(&k3, set(&[1, 2])), r(1));
        assert_eq!(uniform_objective_value(&k3, set(&[1, 2, 3])), r(0));
    }

    #[test]
    fn stab_u_k2_slack_zero() {
        let k2 = Graph::complete(2);
        let p = stab_u_problem(&[k2], 2, r(0), 1 << 10).unwrap();
        let m = slack_matrix(&p).unwrap();
        let col = p.solutions().iter().position(|s| *s == set(&[1, 2])).unwrap();
        assert_eq!(m.get(0, col), Some(&r(0)));
    }

    #[test]
    fn stab_u_rejects_bad_input() {
        let g = Graph::from_edges([1, 9], [(1, 9)]).unwrap();
        assert!(stab_u_problem(&[g], 4, r(0), 1 << 10).is_err());
        assert!(stab_u_problem(&[], 30, r(0), 1 << 10).is_err());
        assert!(stab_u_problem(&[], 3, r(-1), 1 << 10).is_err());
    }

    #[test]
    fn stab_u_rho_scales_guarantee() {
        let p = stab_u_problem(&[Graph::edgeless(2)], 2, Rational::new(1, 2), 1 << 10).unwrap();
        assert_eq!(p.guarantee(0), r(3));
    }
}

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{Graph, VertexSet};
use crate::problems::{slack_matrix, Entry, MaxProblem, PartialMatrix, Rational};

use super::factorization::{verify_factorization, NonnegFactorization, Scalar};
use super::simplex::{maximize_free, solve_standard, LpOutcome};

/// An LP formulation: `A_le x <= b_le`, `A_eq x = b_eq` in dimension `d`, a
/// point `x^s` per solution, an objective vector `w^f` and guarantee per
/// objective. Its size is the number of inequalities.
#[derive(Clone, Debug, PartialEq)]
pub struct LpFormulation<T> {
    pub a_le: Vec<Vec<T>>,
    pub b_le: Vec<T>,
    pub a_eq: Vec<Vec<T>>,
    pub b_eq: Vec<T>,
    pub points: Vec<Vec<T>>,
    pub objectives: Vec<Vec<T>>,
    pub guarantees: Vec<T>,
}

#[derive(Serialize, Deserialize)]
struct LpJson {
    #[serde(rename = "A_le")]
    a_le: Vec<Vec<String>>,
    b_le: Vec<String>,
    #[serde(rename = "A_eq")]
    a_eq: Vec<Vec<String>>,
    b_eq: Vec<String>,
    points: Vec<Vec<String>>,
    objectives: Vec<Vec<String>>,
    guarantees: Vec<String>,
}

fn fmt_vec<T: Entry>(v: &[T]) -> Vec<String> {
    v.iter().map(Entry::format_entry).collect()
}

fn fmt_mat<T: Entry>(m: &[Vec<T>]) -> Vec<Vec<String>> {
    m.iter().map(|r| fmt_vec(r)).collect()
}

fn parse_vec<T: Entry>(v: &[String], what: &str, row: usize) -> Result<Vec<T>> {
    v.iter()
        .enumerate()
        .map(|(j, s)| {
            T::parse_entry(s).ok_or_else(|| Error::parse(row + 1, Some(j + 1), format!("{what}: bad number {s:?}")))
        })
        .collect()
}

fn parse_mat<T: Entry>(m: &[Vec<String>], what: &str) -> Result<Vec<Vec<T>>> {
    m.iter().enumerate().map(|(i, r)| parse_vec(r, what, i)).collect()
}

impl<T: Scalar> LpFormulation<T> {
    pub fn size(&self) -> usize {
        self.a_le.len()
    }

    pub fn dimension(&self) -> usize {
        self.objectives
            .first()
            .or(self.points.first())
            .or(self.a_le.first())
            .map_or(0, Vec::len)
    }

    pub fn to_json(&self) -> Result<String> {
        let j = LpJson {
            a_le: fmt_mat(&self.a_le),
            b_le: fmt_vec(&self.b_le),
            a_eq: fmt_mat(&self.a_eq),
            b_eq: fmt_vec(&self.b_eq),
            points: fmt_mat(&self.points),
            objectives: fmt_mat(&self.objectives),
            guarantees: fmt_vec(&self.guarantees),
        };
        Ok(serde_json::to_string_pretty(&j)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: LpJson = serde_json::from_str(text)?;
        let lp = LpFormulation {
            a_le: parse_mat(&j.a_le, "A_le")?,
            b_le: parse_vec(&j.b_le, "b_le", 0)?,
            a_eq: parse_mat(&j.a_eq, "A_eq")?,
            b_eq: parse_vec(&j.b_eq, "b_eq", 0)?,
            points: parse_mat(&j.points, "points")?,
            objectives: parse_mat(&j.objectives, "objectives")?,
            guarantees: parse_vec(&j.guarantees, "guarantees", 0)?,
        };
        lp.check_shape()?;
        Ok(lp)
    }

    pub fn check_shape(&self) -> Result<()> {
        let d = self.dimension();
        let bad = |what: &str| Err(Error::DimensionMismatch(format!("{what} in LP of dimension {d}")));
        if self.a_le.len() != self.b_le.len() || self.a_eq.len() != self.b_eq.len() {
            return bad("constraint/right-hand-side count");
        }
        if self.objectives.len() != self.guarantees.len() {
            return bad("objective/guarantee count");
        }
        let rows = self.a_le.iter().chain(&self.a_eq).chain(&self.points).chain(&self.objectives);
        for r in rows {
            if r.len() != d {
                return bad("vector length");
            }
        }
        Ok(())
    }

    fn big(m: &[Vec<T>]) -> Vec<Vec<BigRational>> {
        m.iter().map(|r| r.iter().map(Scalar::to_big).collect()).collect()
    }
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

/// Outcome of checking the three conditions of an LP formulation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LpCheck {
    /// Every solution point satisfies all constraints.
    pub contains_points: bool,
    /// `⟨w^f, x^s⟩ = f(s)` for all pairs.
    pub linear_objectives: bool,
    /// `max {⟨w^f, x⟩ : x feasible} <= f*` for every objective.
    pub approximates: bool,
    pub failures: Vec<String>,
}

impl LpCheck {
    pub fn passed(&self) -> bool {
        self.contains_points && self.linear_objectives && self.approximates
    }
}

/// Verifies containment, linearity and approximation of `lp` for `problem`,
/// up to `tol` (exact when `tol = 0`). The LP maxima are computed exactly
/// over the rationals, also for float data.
pub fn check_conditions<T: Scalar, S>(lp: &LpFormulation<T>, problem: &MaxProblem<S>, tol: T) -> Result<LpCheck> {
    lp.check_shape()?;
    if lp.points.len() != problem.solutions().len() || lp.objectives.len() != problem.objectives().len() {
        return Err(Error::DimensionMismatch(
            "LP points/objectives do not match the problem".into(),
        ));
    }
    let tol = tol.to_big();
    let a_le = LpFormulation::big(&lp.a_le);
    let a_eq = LpFormulation::big(&lp.a_eq);
    let b_le: Vec<BigRational> = lp.b_le.iter().map(Scalar::to_big).collect();
    let b_eq: Vec<BigRational> = lp.b_eq.iter().map(Scalar::to_big).collect();
    let points = LpFormulation::big(&lp.points);
    let objs = LpFormulation::big(&lp.objectives);
    let mut failures = Vec::new();

    let mut contains_points = true;
    for (s, x) in points.iter().enumerate() {
        let le_ok = a_le.iter().zip(&b_le).all(|(a, b)| dot(a, x) <= b + &tol);
        let eq_ok = a_eq.iter().zip(&b_eq).all(|(a, b)| {
            let diff = dot(a, x) - b;
            diff <= tol && -diff <= tol
        });
        if !(le_ok && eq_ok) {
            contains_points = false;
            failures.push(format!("point of solution {} violates a constraint", problem.solution_labels()[s]));
        }
    }

    let mut linear_objectives = true;
    for (f, w) in objs.iter().enumerate() {
        for (s, x) in points.iter().enumerate() {
            let diff = dot(w, x) - problem.value(f, s).to_big();
            if diff > tol || -diff > tol {
                linear_objectives = false;
                failures.push(format!(
                    "<w, x> differs from f(s) for objective {} at solution {}",
                    problem.objectives()[f].label(),
                    problem.solution_labels()[s]
                ));
            }
        }
    }

    let mut approximates = true;
    for (f, w) in objs.iter().enumerate() {
        let fstar = lp.guarantees[f].to_big();
        match maximize_free(&a_le, &b_le, &a_eq, &b_eq, w) {
            LpOutcome::Optimal { value, .. } if value <= &fstar + &tol => {}
            LpOutcome::Optimal { value, .. } => {
                approximates = false;
                failures.push(format!(
                    "LP maximum {value} exceeds the guarantee {fstar} for objective {}",
                    problem.objectives()[f].label()
                ));
            }
            LpOutcome::Unbounded => {
                approximates = false;
                failures.push(format!("LP unbounded for objective {}", problem.objectives()[f].label()));
            }
            LpOutcome::Infeasible => {
                failures.push("LP has no feasible point".into());
            }
        }
    }
    Ok(LpCheck {
        contains_points,
        linear_objectives,
        approximates,
        failures,
    })
}

/// The LP of a rank-`r` factorization `M = T·U` of the slack matrix: in
/// dimension `r + 1`, constraints `x <= 0` (r inequalities) and `x_{r+1} = 1`,
/// objective vectors `w^f = (T^f, f*)` and points `x^s = (−U_s, 1)`.
///
/// `tol` bounds the factorization residual (use 0 for exact data).
pub fn factorization_to_lp<T: Scalar, S>(
    f: &NonnegFactorization<T>,
    problem: &MaxProblem<S>,
    tol: T,
) -> Result<LpFormulation<T>> {
    let slack = slack_matrix(problem)?.map(|v| T::from_rational(*v));
    let check = verify_factorization(&slack, f, tol)?;
    if !check.ok {
        return Err(Error::IdentityViolation {
            at: "factorization of the slack matrix".into(),
            expected: format!("residual <= {}", tol.format_entry()),
            found: check.max_residual.format_entry(),
        });
    }
    let r = f.rank();
    let unit = |k: usize| -> Vec<T> { (0..=r).map(|j| if j == k { T::one() } else { T::zero() }).collect() };
    let objectives = (0..problem.objectives().len())
        .map(|i| {
            let mut w = f.left()[i].clone();
            w.push(T::from_rational(problem.guarantee(i)));
            w
        })
        .collect();
    let points = (0..problem.solutions().len())
        .map(|s| {
            let mut x: Vec<T> = (0..r).map(|k| -f.right()[k][s]).collect();
            x.push(T::one());
            x
        })
        .collect();
    Ok(LpFormulation {
        a_le: (0..r).map(unit).collect(),
        b_le: vec![T::zero(); r],
        a_eq: vec![unit(r)],
        b_eq: vec![T::one()],
        points,
        objectives,
        guarantees: (0..problem.objectives().len())
            .map(|i| T::from_rational(problem.guarantee(i)))
            .collect(),
    })
}

/// The rank-`(r + 1)` factorization of the slack matrix from an exact LP
/// formulation of size `r`.
///
/// Column `s` of `U` is `(1, b_le − A_le x^s)`. Row `f` of `T` is
/// `(f* − v_f, λ)`, where `(λ, μ)` minimizes `b_le·λ + b_eq·μ` subject to
/// `A_leᵀλ + A_eqᵀμ = w^f`, `λ >= 0`, and `v_f` is that minimum (the LP
/// maximum of `w^f` by duality). No such multipliers exist exactly when the
/// LP is unbounded in direction `w^f`.
pub fn lp_to_factorization<S>(
    lp: &LpFormulation<Rational>,
    problem: &MaxProblem<S>,
) -> Result<NonnegFactorization<Rational>> {
    lp.check_shape()?;
    let d = lp.dimension();
    let k = lp.size();
    let e = lp.a_eq.len();
    let a_le = LpFormulation::big(&lp.a_le);
    let a_eq = LpFormulation::big(&lp.a_eq);
    let b_le: Vec<BigRational> = lp.b_le.iter().map(Scalar::to_big).collect();
    let b_eq: Vec<BigRational> = lp.b_eq.iter().map(Scalar::to_big).collect();

    // Dual variables: λ (k), μ⁺ (e), μ⁻ (e). Constraints: one per coordinate.
    let a: Vec<Vec<BigRational>> = (0..d)
        .map(|c| {
            let mut row: Vec<BigRational> = a_le.iter().map(|r| r[c].clone()).collect();
            row.extend(a_eq.iter().map(|r| r[c].clone()));
            row.extend(a_eq.iter().map(|r| -r[c].clone()));
            row
        })
        .collect();
    let mut cost: Vec<BigRational> = b_le.clone();
    cost.extend(b_eq.iter().cloned());
    cost.extend(b_eq.iter().map(|v| -v));

    let mut left = Vec::with_capacity(lp.objectives.len());
    for (f, w) in lp.objectives.iter().enumerate() {
        let w: Vec<BigRational> = w.iter().map(Scalar::to_big).collect();
        let label = problem.objectives().get(f).map_or("?", |o| o.label());
        let (y, value) = match solve_standard(&a, &w, &cost) {
            LpOutcome::Optimal { x, value } => (x, value),
            LpOutcome::Infeasible => {
                return Err(Error::Infeasible(format!(
                    "no nonnegative multipliers for objective {label}: the LP is unbounded in its direction"
                )))
            }
            LpOutcome::Unbounded => {
                return Err(Error::Unbounded(format!(
                    "multiplier problem for objective {label}: the LP has no feasible point"
                )))
            }
        };
        let t0 = lp.guarantees[f].to_big() - value;
        if t0 < BigRational::zero() {
            return Err(Error::IdentityViolation {
                at: format!("objective {label}"),
                expected: "LP maximum <= guarantee".into(),
                found: format!("excess {}", -t0),
            });
        }
        let mut row = vec![Rational::from_big(&t0)?];
        for lam in &y[..k] {
            row.push(Rational::from_big(lam)?);
        }
        left.push(row);
        debug_assert_eq!(y.len(), k + 2 * e);
    }

    let mut right = vec![vec![Rational::one(); lp.points.len()]];
    for (row, b) in lp.a_le.iter().zip(&lp.b_le) {
        right.push(
            lp.points
                .iter()
                .map(|x| *b - row.iter().zip(x).fold(Rational::zero(), |acc, (a, xi)| acc + *a * *xi))
                .collect(),
        );
    }
    let fact = NonnegFactorization::new(left, right).map_err(|e| match e {
        Error::NegativeEntry { .. } => Error::IdentityViolation {
            at: "slack of a point".into(),
            expected: "solution points satisfy every inequality".into(),
            found: e.to_string(),
        },
        other => other,
    })?;
    let slack = slack_matrix(problem)?;
    let check = verify_factorization(&slack, &fact, Rational::zero())?;
    if !check.ok {
        return Err(Error::IdentityViolation {
            at: "LP-derived factorization".into(),
            expected: "exact product equal to the slack matrix".into(),
            found: format!("residual {}", check.max_residual),
        });
    }
    Ok(fact)
}

/// The LP over the simplex of solutions: `λ ∈ R^{|S|}`, `λ >= 0`,
/// `Σλ = 1`, points `e_s`, objectives `(f(s))_s`. Valid for any problem.
pub fn solution_simplex_lp<S>(problem: &MaxProblem<S>) -> LpFormulation<Rational> {
    let n = problem.solutions().len();
    let unit = |k: usize, v: i64| -> Vec<Rational> {
        (0..n).map(|j| Rational::from_integer(if j == k { v } else { 0 })).collect()
    };
    LpFormulation {
        a_le: (0..n).map(|k| unit(k, -1)).collect(),
        b_le: vec![Rational::zero(); n],
        a_eq: vec![vec![Rational::one(); n]],
        b_eq: vec![Rational::one()],
        points: (0..n).map(|k| unit(k, 1)).collect(),
        objectives: (0..problem.objectives().len())
            .map(|f| (0..n).map(|s| problem.value(f, s)).collect())
            .collect(),
        guarantees: (0..problem.objectives().len()).map(|f| problem.guarantee(f)).collect(),
    }
}

/// The edge relaxation `x >= 0`, `x_u + x_v <= 1` (and `x_v <= 1` for
/// isolated `v`) for the non-uniform stable set problem of `g`: coordinates follow the sorted vertex labels, points
/// are incidence vectors, objectives the incidence vectors of the sets `a`.
/// `objective_sets` must list the sets of the problem's objectives in order.
/// It satisfies the approximation condition when every induced subgraph
/// used as objective has an integral edge polytope, e.g. for bipartite `g`.
pub fn edge_relaxation_lp(g: &Graph, problem: &MaxProblem<VertexSet>, objective_sets: &[VertexSet]) -> LpFormulation<Rational> {
    let labels = g.labels();
    let d = labels.len();
    let indicator = |s: VertexSet| -> Vec<Rational> {
        labels.iter().map(|&l| Rational::from_integer(s.contains(l) as i64)).collect()
    };
    let mut a_le = Vec::new();
    for k in 0..d {
        a_le.push((0..d).map(|j| Rational::from_integer(-((j == k) as i64))).collect());
    }
    for (u, v) in g.edges() {
        a_le.push(
            labels
                .iter()
                .map(|&l| Rational::from_integer((l == u || l == v) as i64))
                .collect(),
        );
    }
    for (k, &l) in labels.iter().enumerate() {
        if g.degree(l) == Some(0) {
            a_le.push((0..d).map(|j| Rational::from_integer((j == k) as i64)).collect());
        }
    }
    let b_le = (0..a_le.len())
        .map(|i| if i < d { Rational::zero() } else { Rational::one() })
        .collect();
    LpFormulation {
        a_le,
        b_le,
        a_eq: Vec::new(),
        b_eq: Vec::new(),
        points: problem.solutions().iter().map(|&s| indicator(s)).collect(),
        objectives: objective_sets.iter().map(|&a| indicator(a)).collect(),
        guarantees: (0..problem.objectives().len()).map(|f| problem.guarantee(f)).collect(),
    }
}

/// Linear rank over the rationals of a fully defined matrix.
pub fn linear_rank<T: Scalar>(m: &PartialMatrix<T>) -> Option<usize> {
    if !m.is_fully_defined() {
        return None;
    }
    let mut rows: Vec<Vec<BigRational>> = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m.get(i, j).unwrap().to_big()).collect())
        .collect();
    Some(rank_in_place(&mut rows))
}

pub(crate) fn rank_in_place(rows: &mut [Vec<BigRational>]) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if !row[c].is_zero() {
                let f = &row[c] / &pivot[c];
                for (v, pv) in row.iter_mut().zip(&pivot) {
                    *v -= &f * pv;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::Graph;
    use crate::problems::{stab_nu_problem, Objective};

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    /// Two solutions s1, s2 and one objective f with f(s1) = 1, f(s2) = 0, f* = 1.
    fn tiny() -> MaxProblem<u8> {
        MaxProblem::new(
            vec![1u8, 2],
            vec!["s1".into(), "s2".into()],
            vec![Objective::new("f", r(1), |s: &u8| if *s == 1 { r(1) } else { r(0) })],
        )
        .unwrap()
    }

    #[test]
    fn factorization_to_lp_rank_one() {
        let p = tiny();
        let f = NonnegFactorization::new(vec![vec![r(1)]], vec![vec![r(0), r(1)]]).unwrap();
        let lp = factorization_to_lp(&f, &p, r(0)).unwrap();
        assert_eq!(lp.size(), 1);
        assert_eq!(lp.points[1], vec![r(-1), r(1)]);
        let w = &lp.objectives[0];
        assert_eq!(w[0] * lp.points[1][0] + w[1] * lp.points[1][1], r(0));
        assert!(check_conditions(&lp, &p, r(0)).unwrap().passed());
    }

    #[test]
    fn zero_slack() {
        let p = MaxProblem::new(
            vec![0u8],
            vec!["s".into()],
            vec![Objective::new("f", r(2), |_: &u8| r(2))],
        )
        .unwrap();
        let f = NonnegFactorization::new(vec![vec![r(0)]], vec![vec![r(0)]]).unwrap();
        let lp = factorization_to_lp(&f, &p, r(0)).unwrap();
        assert!(check_conditions(&lp, &p, r(0)).unwrap().passed());
        let back = lp_to_factorization(&lp, &p).unwrap();
        assert_eq!(back.left()[0][0], r(0));
    }

    #[test]
    fn one_dimensional_interval() {
        // f(s1) = 0, f(s2) = 1, so the slack is (1, 0).
        let p = MaxProblem::new(
            vec![0u8, 1],
            vec!["s1".into(), "s2".into()],
            vec![Objective::new("f", r(1), |s: &u8| r(*s as i64))],
        )
        .unwrap();
        let lp = LpFormulation {
            a_le: vec![vec![r(-1)], vec![r(1)]],
            b_le: vec![r(0), r(1)],
            a_eq: vec![],
            b_eq: vec![],
            points: vec![vec![r(0)], vec![r(1)]],
            objectives: vec![vec![r(1)]],
            guarantees: vec![r(1)],
        };
        assert!(check_conditions(&lp, &p, r(0)).unwrap().passed());
        let f = lp_to_factorization(&lp, &p).unwrap();
        assert_eq!(f.left()[0], vec![r(0), r(0), r(1)]);
        assert_eq!(f.right()[0], vec![r(1), r(1)]);
        assert_eq!(f.right()[1], vec![r(0), r(1)]);
        assert_eq!(f.right()[2], vec![r(1), r(0)]);
    }

    #[test]
    fn json_round_trip() {
        let p = tiny();
        let f = NonnegFactorization::new(vec![vec![Rational::new(1, 2), r(1)]], vec![vec![r(0), r(2)], vec![r(0), r(0)]]).unwrap();
        let lp = factorization_to_lp(&f, &p, r(0)).unwrap();
        let text = lp.to_json().unwrap();
        assert!(text.contains("\"A_le\"") && text.contains("1/2"));
        assert_eq!(LpFormulation::<Rational>::from_json(&text).unwrap(), lp);
    }

    #[test]
    fn unbounded_lp_is_rejected() {
        let p = tiny();
        let lp = LpFormulation {
            a_le: vec![vec![r(-1)]],
            b_le: vec![r(0)],
            a_eq: vec![],
            b_eq: vec![],
            points: vec![vec![r(1)], vec![r(0)]],
            objectives: vec![vec![r(1)]],
            guarantees: vec![r(1)],
        };
        assert!(!check_conditions(&lp, &p, r(0)).unwrap().approximates);
        assert!(matches!(lp_to_factorization(&lp, &p), Err(Error::Infeasible(_))));
    }

    #[test]
    fn edge_relaxation_of_a_path() {
        let g = Graph::path(4);
        let p = stab_nu_problem(&g, None, 1 << 16).unwrap();
        let sets: Vec<VertexSet> = (0u128..16).map(|m| VertexSet::from_bits(m << 1)).collect();
        let lp = edge_relaxation_lp(&g, &p, &sets);
        assert!(check_conditions(&lp, &p, r(0)).unwrap().passed());
        let f = lp_to_factorization(&lp, &p).unwrap();
        assert_eq!(f.rank(), lp.size() + 1);
    }

    #[test]
    fn edge_relaxation_bounds_isolated_vertices() {
        let g = Graph::from_edges([1, 2, 3], [(1, 2)]).unwrap();
        let p = stab_nu_problem(&g, None, 1 << 16).unwrap();
        let sets: Vec<VertexSet> = (0u128..8).map(|m| VertexSet::from_bits(m << 1)).collect();
        let lp = edge_relaxation_lp(&g, &p, &sets);
        assert_eq!(lp.size(), 3 + 1 + 1);
        assert!(check_conditions(&lp, &p, r(0)).unwrap().passed());
    }

    #[test]
    fn edge_relaxation_fails_on_triangle() {
        let g = Graph::complete(3);
        let p = stab_nu_problem(&g, None, 1 << 16).unwrap();
        let sets: Vec<VertexSet> = (0u128..8).map(|m| VertexSet::from_bits(m << 1)).collect();
        let lp = edge_relaxation_lp(&g, &p, &sets);
        assert!(!check_conditions(&lp, &p, r(0)).unwrap().approximates);
        assert!(lp_to_factorization(&lp, &p).is_err());
    }

    #[test]
    fn ranks() {
        let m = PartialMatrix::from_rows(vec![vec![r(1), r(2)], vec![r(2), r(4)]]).unwrap();
        assert_eq!(linear_rank(&m), Some(1));
        assert_eq!(linear_rank(&crate::problems::build_udisj(2, None).unwrap()), None);
    }
}

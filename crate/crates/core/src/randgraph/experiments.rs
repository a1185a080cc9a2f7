use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::{count_stable_sets, max_avg_degree_induced, stability_number, Graph};
use crate::problems::Rational;

use super::gnp::{sample_gnp_stream, GnpConfig};
use super::induced::{find_induced, InducedSearch};
use super::stats::{c0, g_statistic, McEstimate};

/// Runs `trials` independent trials, trial `i` on its own stream. The result
/// vector is in trial order whether or not the work is spread over threads.
pub fn run_trials<T, F>(trials: u64, parallel: bool, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    if parallel {
        (0..trials).into_par_iter().map(&f).collect()
    } else {
        (0..trials).map(f).collect()
    }
}

/// Which `d` enters the second-moment bound.
#[derive(Clone, Debug, PartialEq)]
pub enum DegreeChoice {
    /// Exact maximum average degree over induced subgraphs of the pattern.
    Measured,
    /// The gadget cap: 3 at `ℓ = 0`, otherwise `2 + 1/(ℓ + 1)`.
    Gadget { ell: usize },
    Fixed(Rational),
}

/// The gadget average-degree cap for path parameter `ell`.
pub fn gadget_degree_cap(ell: usize) -> Rational {
    Rational::from_integer(2) + Rational::new(1, ell as i64 + 1)
}

#[derive(Clone, Debug)]
pub struct McOptions {
    pub node_budget: u64,
    pub degree: DegreeChoice,
    pub parallel: bool,
}

impl Default for McOptions {
    fn default() -> Self {
        McOptions {
            node_budget: 1_000_000,
            degree: DegreeChoice::Measured,
            parallel: true,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ContainmentReport {
    /// `successes` counts samples without an induced copy.
    pub estimate: McEstimate,
    pub n: usize,
    pub p: f64,
    pub pattern_order: usize,
    pub d: String,
    pub g: Option<f64>,
    pub c0g2: Option<f64>,
    /// `c₀g² + 3√(c₀g²/trials)`, when `c₀g² < 1`.
    pub tolerance: Option<f64>,
    pub bound_holds: Option<bool>,
    pub undecided_flag: bool,
}

impl ContainmentReport {
    /// The bound applies and holds, and at most 1% of trials were undecided.
    pub fn passed(&self) -> bool {
        self.bound_holds != Some(false) && !self.undecided_flag
    }
}

/// Estimates the probability that `G(n, p)` has no induced copy of `h`, and
/// compares it with the second-moment bound `c₀g²`.
pub fn containment_probability_mc(
    h: &Graph,
    n: usize,
    p: f64,
    trials: u64,
    seed: u64,
    opts: &McOptions,
) -> Result<ContainmentReport> {
    let cfg = GnpConfig::new(n, p, seed)?;
    if h.order() > n {
        return Err(Error::InvalidParameter(format!(
            "pattern has {} vertices, more than n = {n}",
            h.order()
        )));
    }
    let outcomes = run_trials(trials, opts.parallel, |i| {
        let g = sample_gnp_stream(&cfg, i)?;
        Ok(match find_induced(h, &g, opts.node_budget)? {
            InducedSearch::Found(_) => 0u8,
            InducedSearch::Absent => 1,
            InducedSearch::BudgetExhausted { .. } => 2,
        })
    })?;
    let misses = outcomes.iter().filter(|&&o| o == 1).count() as u64;
    let undecided = outcomes.iter().filter(|&&o| o == 2).count() as u64;
    let estimate = McEstimate::new(trials, misses, undecided, seed);

    let d = match &opts.degree {
        DegreeChoice::Measured => {
            if h.order() == 0 {
                Rational::from_integer(0)
            } else {
                max_avg_degree_induced(h)?
            }
        }
        DegreeChoice::Gadget { ell } => gadget_degree_cap(*ell),
        DegreeChoice::Fixed(d) => *d,
    };
    let d_f = *d.numer() as f64 / *d.denom() as f64;
    let g = g_statistic(n as f64, p, h.order() as f64, d_f).ok();
    let c0g2 = g.map(|g| c0() * g * g);
    let tolerance = c0g2
        .filter(|&b| b < 1.0)
        .map(|b| b + 3.0 * (b / trials as f64).sqrt());
    let bound_holds = tolerance.map(|tol| estimate.point <= tol);
    Ok(ContainmentReport {
        undecided_flag: estimate.undecided_flag(),
        estimate,
        n,
        p,
        pattern_order: h.order(),
        d: d.to_string(),
        g,
        c0g2,
        tolerance,
        bound_holds,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct AlphaTailReport {
    /// `successes` counts samples with `α >= threshold`.
    pub estimate: McEstimate,
    pub n: usize,
    pub p: f64,
    pub threshold: usize,
    /// `(n e^{−p(r−1)/2})^r` at `r = threshold`.
    pub analytic_bound: f64,
    /// `1/n` when `p = 1/2`, `n >= 10` and `threshold >= 3 log₂ n`.
    pub rough_bound: Option<f64>,
    pub alphas: Vec<usize>,
}

/// Frequency of `α(G(n, p)) >= threshold` over seeded samples.
pub fn alpha_tail_experiment(
    n: usize,
    p: f64,
    threshold: usize,
    trials: u64,
    seed: u64,
    parallel: bool,
) -> Result<AlphaTailReport> {
    let cfg = GnpConfig::new(n, p, seed)?;
    let alphas = run_trials(trials, parallel, |i| stability_number(&sample_gnp_stream(&cfg, i)?))?;
    let hits = alphas.iter().filter(|&&a| a >= threshold).count() as u64;
    let r = threshold as f64;
    let analytic_bound = (n as f64 * (-p * (r - 1.0) / 2.0).exp()).powf(r);
    let rough_bound = (p == 0.5 && n >= 10 && r >= 3.0 * (n as f64).log2()).then(|| 1.0 / n as f64);
    Ok(AlphaTailReport {
        estimate: McEstimate::new(trials, hits, 0, seed),
        n,
        p,
        threshold,
        analytic_bound,
        rough_bound,
        alphas,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StableCountCheck {
    pub count: u64,
    pub alpha: usize,
    /// `(n + 1)^α` with `n` the order of the graph.
    pub bound: String,
    pub holds: bool,
}

/// Exact stable-set count against `(n + 1)^{α(G)}`.
pub fn stable_count_check(g: &Graph, budget: Option<u64>) -> Result<StableCountCheck> {
    let count = count_stable_sets(g, budget)?;
    let alpha = stability_number(g)?;
    let bound = BigUint::from(g.order() as u64 + 1).pow(alpha as u32);
    let holds = BigUint::from(count) <= bound;
    Ok(StableCountCheck {
        count,
        alpha,
        bound: bound.to_string(),
        holds,
    })
}

impl StableCountCheck {
    pub fn bound_f64(&self) -> f64 {
        self.bound.parse::<BigUint>().ok().and_then(|b| b.to_f64()).unwrap_or(f64::INFINITY)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::build_gadget;

    #[test]
    fn single_edge_always_contained() {
        let h = Graph::complete(2);
        let r = containment_probability_mc(&h, 50, 0.5, 50, 3, &McOptions::default()).unwrap();
        assert_eq!(r.estimate.successes, 0);
        assert!(r.passed());
    }

    #[test]
    fn serial_and_parallel_agree() {
        let h = build_gadget(&Graph::complete(3), 0).unwrap();
        let mut opts = McOptions {
            degree: DegreeChoice::Gadget { ell: 0 },
            ..McOptions::default()
        };
        let a = containment_probability_mc(h.graph(), 60, 0.3, 40, 11, &opts).unwrap();
        opts.parallel = false;
        let b = containment_probability_mc(h.graph(), 60, 0.3, 40, 11, &opts).unwrap();
        assert_eq!(a.estimate, b.estimate);
        assert_eq!(a.d, "3");
    }

    #[test]
    fn alpha_at_least_one() {
        let r = alpha_tail_experiment(30, 0.5, 1, 20, 5, true).unwrap();
        assert_eq!(r.estimate.successes, 20);
    }

    #[test]
    fn analytic_tail_value() {
        let r = alpha_tail_experiment(64, 0.5, 18, 1, 0, false).unwrap();
        let want = (64.0 * (-4.25f64).exp()).powi(18);
        assert!((r.analytic_bound / want - 1.0).abs() < 1e-12);
        assert_eq!(r.rough_bound, Some(1.0 / 64.0));
    }

    #[test]
    fn stable_counts() {
        let k3 = stable_count_check(&Graph::complete(3), None).unwrap();
        assert_eq!((k3.count, k3.alpha, k3.bound.as_str(), k3.holds), (4, 1, "4", true));
        let e2 = stable_count_check(&Graph::edgeless(2), None).unwrap();
        assert_eq!((e2.count, e2.bound.as_str()), (4, "9"));
    }
}

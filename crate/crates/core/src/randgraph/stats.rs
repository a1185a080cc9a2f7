use serde::Serialize;

use crate::error::{Error, Result};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959963984540054;

/// Principal branch of the Lambert W function for `x >= 0`, by Newton
/// iteration to `1e-12`.
pub fn lambert_w0(x: f64) -> f64 {
    assert!(x >= 0.0, "lambert_w0 needs x >= 0");
    let mut w = if x < 1.0 { x } else { x.ln() };
    for _ in 0..100 {
        let ew = w.exp();
        let step = (w * ew - x) / (ew * (w + 1.0));
        w -= step;
        if step.abs() < 1e-12 {
            break;
        }
    }
    w
}

/// `c₀ = exp(2 W(1/√2)) / 2 ≈ 1.23`, the constant of the second-moment bound.
pub fn c0() -> f64 {
    (2.0 * lambert_w0(std::f64::consts::FRAC_1_SQRT_2)).exp() / 2.0
}

/// `g = v² p^{−d/2} (1 − p)^{−v/2} / (n − v)`.
///
/// The non-containment probability of a pattern with `v` vertices whose
/// induced subgraphs all have average degree at most `d` is at most `c₀ g²`
/// for `p <= 1/2`.
pub fn g_statistic(n: f64, p: f64, v: f64, d: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 0.5) {
        return Err(Error::InvalidParameter(format!(
            "second-moment bound needs 0 < p <= 1/2, got {p}"
        )));
    }
    if v >= n {
        return Err(Error::InvalidParameter(format!(
            "pattern order {v} must be below n = {n}"
        )));
    }
    let log_g = 2.0 * v.ln() - d / 2.0 * p.ln() - v / 2.0 * (1.0 - p).ln() - (n - v).ln();
    Ok(log_g.exp())
}

/// Wilson score interval at 95%.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (phat + z2 / (2.0 * n)) / denom;
    let half = Z95 * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    // The exact endpoints at 0 and n; the formula only reaches them up to rounding.
    let lo = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

/// A Monte-Carlo frequency with its Wilson interval.
///
/// `undecided` trials (budget-exhausted searches) are excluded from
/// `successes` and from the denominator of `point`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub trials: u64,
    pub successes: u64,
    pub undecided: u64,
    pub point: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
}

impl McEstimate {
    pub fn new(trials: u64, successes: u64, undecided: u64, seed: u64) -> Self {
        let decided = trials - undecided;
        let point = if decided == 0 {
            0.0
        } else {
            successes as f64 / decided as f64
        };
        let (ci_low, ci_high) = wilson_interval(successes, decided);
        McEstimate {
            trials,
            successes,
            undecided,
            point,
            ci_low: ci_low.min(point),
            ci_high: ci_high.max(point),
            seed,
        }
    }

    /// More than 1% of the trials were undecided.
    pub fn undecided_flag(&self) -> bool {
        self.undecided * 100 > self.trials
    }
}

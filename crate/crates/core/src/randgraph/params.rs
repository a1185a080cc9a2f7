use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problems::Rational;

use super::experiments::gadget_degree_cap;
use super::stats::{c0, g_statistic};

/// Parameter regime of the random-graph lower bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    High,
    Middle,
    Low,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::High => "high",
            Regime::Middle => "middle",
            Regime::Low => "low",
        })
    }
}

impl std::str::FromStr for Regime {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "high" => Ok(Regime::High),
            "middle" => Ok(Regime::Middle),
            "low" => Ok(Regime::Low),
            _ => Err(Error::InvalidParameter(format!("unknown regime {s:?}"))),
        }
    }
}

/// Knobs of the parameter calculator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeOptions {
    /// Constant of the high regime, `0 < c < 2/√3`.
    pub c: f64,
    /// Constant of the low regime, `0 < δ < 1`.
    pub delta: f64,
    /// The high regime starts at `high_margin · n^{−1/4}`.
    pub high_margin: f64,
    /// Skip the thresholds and use this regime.
    pub force: Option<Regime>,
}

impl Default for RegimeOptions {
    fn default() -> Self {
        RegimeOptions {
            c: 1.0,
            delta: 0.9,
            high_margin: 2.0,
            force: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegimeParams {
    pub n: f64,
    pub p: f64,
    pub regime: Regime,
    pub t: u64,
    pub ell: u64,
    /// `ℓ` before clamping at 0.
    pub ell_raw: i64,
    pub gamma: String,
    pub d: String,
    pub v: u64,
    pub g: Option<f64>,
    pub c0g2: Option<f64>,
    /// `c₀g² < 1`: the finite-`n` second-moment bound certifies containment
    /// with positive probability.
    pub certified: bool,
    pub predicted_exponent: f64,
    pub flags: Vec<String>,
}

/// The regime picked by the finite-`n` thresholds.
pub fn nominal_regime(n: f64, p: f64, opts: &RegimeOptions) -> Regime {
    if p >= opts.high_margin * n.powf(-0.25) {
        Regime::High
    } else if p >= n.powf(-1.0 / 3.0) {
        Regime::Middle
    } else {
        Regime::Low
    }
}

fn ell_formula(p: f64, t: f64) -> i64 {
    let l = (1.0 / p).ln();
    let inner = l / ((4.0 + 2.0 * p * t * t * l).sqrt() + 2.0) - 0.75;
    2 * inner.ceil() as i64
}

fn binom2(t: u64) -> u64 {
    t * t.saturating_sub(1) / 2
}

/// Chooses `t`, `ℓ`, `d` for `G(n, p)` and evaluates the second-moment
/// statistic for the gadget `𝒢(K_t)` with those parameters.
pub fn select_parameters(n: f64, p: f64, opts: &RegimeOptions) -> Result<RegimeParams> {
    if !(n >= 2.0 && p > 1.0 / n && p < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "need 1/n < p < 1, got n = {n}, p = {p}"
        )));
    }
    let regime = opts.force.unwrap_or_else(|| nominal_regime(n, p, opts));
    let mut flags = vec!["regime thresholds are finite-n choices".to_string()];
    let ln_inv_p = (1.0 / p).ln();
    let raw_t = match regime {
        Regime::High => {
            if !(opts.c > 0.0 && opts.c < 2.0 / 3f64.sqrt()) {
                return Err(Error::InvalidParameter(format!(
                    "high regime needs 0 < c < 2/sqrt(3), got {}",
                    opts.c
                )));
            }
            let x = (n * p.powi(4)).ln();
            if x <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "high regime needs n p^4 > 1, got {}",
                    n * p.powi(4)
                )));
            }
            opts.c * (x / p).sqrt()
        }
        Regime::Middle => 1.0 / (p * ln_inv_p).sqrt(),
        Regime::Low => {
            if !(opts.delta > 0.0 && opts.delta < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "low regime needs 0 < delta < 1, got {}",
                    opts.delta
                )));
            }
            opts.delta * ((p * n).sqrt() / ln_inv_p).sqrt()
        }
    };
    let t = (raw_t.ceil() as u64).max(1);
    if raw_t < 1.0 {
        flags.push("t raised to 1".into());
    }
    let (ell_raw, d) = match regime {
        Regime::High => (0, Rational::from_integer(4)),
        _ => {
            let raw = ell_formula(p, t as f64);
            (raw, gadget_degree_cap(raw.max(0) as usize))
        }
    };
    let ell = ell_raw.max(0) as u64;
    if ell_raw < 0 {
        flags.push(format!("ell clamped from {ell_raw} to 0"));
    }
    if regime != Regime::High && ell == 0 {
        flags.push("ell = 0: asymptotic growth of ell not reached".into());
    }
    let gamma = Rational::new(2 * ell as i64 + 3, 2);
    let v = t + (2 * ell + 2) * binom2(t);
    if v as f64 >= n {
        flags.push("asymptotic regime not reached: v >= n".into());
    }
    let d_f = *d.numer() as f64 / *d.denom() as f64;
    let g = g_statistic(n, p, v as f64, d_f).ok();
    if p > 0.5 {
        flags.push("p > 1/2: second-moment bound not applicable".into());
    }
    let c0g2 = g.map(|g| c0() * g * g);
    let certified = c0g2.is_some_and(|b| b < 1.0);
    if !certified {
        flags.push("not certified at this n: c0 g^2 >= 1".into());
    }
    Ok(RegimeParams {
        n,
        p,
        regime,
        t,
        ell,
        ell_raw,
        gamma: gamma.to_string(),
        d: d.to_string(),
        v,
        g,
        c0g2,
        certified,
        predicted_exponent: t as f64 * 1.5f64.log2(),
        flags,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct XcBoundReport {
    pub params: RegimeParams,
    /// `log₂` of the lower bound `2^{t log(3/2)}`.
    pub lower_exponent: f64,
    /// `log₂(n + 1) · 4 ln n / p`.
    pub upper_exponent: f64,
    pub note: String,
}

/// `log₂(n + 1) · 4 ln n / p`, the exponent of the stable-set count bound
/// at `α = 4 ln n / p`.
pub fn upper_exponent(n: f64, p: f64) -> f64 {
    (n + 1.0).log2() * 4.0 * n.ln() / p
}

pub fn xc_bound_report(n: f64, p: f64, opts: &RegimeOptions) -> Result<XcBoundReport> {
    let params = select_parameters(n, p, opts)?;
    let mut note = String::from("holds w.h.p. asymptotically, not certified for a specific sample");
    if p > 0.5 {
        note.push_str("; upper bound stated only for p <= 1/2");
    }
    Ok(XcBoundReport {
        lower_exponent: params.predicted_exponent,
        upper_exponent: upper_exponent(n, p),
        params,
        note,
    })
}

/// One `p` of a regime sweep: the chosen regime plus every regime's own
/// exponent where its formula is defined.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub p: f64,
    pub regime: Regime,
    pub exponent: f64,
    pub certified: bool,
    pub high: Option<f64>,
    pub high_certified: bool,
    pub middle: Option<f64>,
    pub middle_certified: bool,
    pub low: Option<f64>,
    pub low_certified: bool,
    pub upper_exponent: f64,
}

/// `points` values of `p` spaced geometrically from `n^{−0.4}` to `1/ln n`.
pub fn default_sweep_grid(n: f64, points: usize) -> Vec<f64> {
    let (a, b) = (n.powf(-0.4).ln(), (1.0 / n.ln()).ln());
    if points < 2 {
        return vec![a.exp()];
    }
    (0..points)
        .map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp())
        .collect()
}

pub fn sweep(n: f64, ps: &[f64], opts: &RegimeOptions) -> Result<Vec<SweepRow>> {
    let forced = |r: Regime, p: f64| {
        select_parameters(n, p, &RegimeOptions { force: Some(r), ..*opts }).ok()
    };
    ps.iter()
        .map(|&p| {
            let chosen = select_parameters(n, p, &RegimeOptions { force: None, ..*opts })?;
            let (h, m, l) = (forced(Regime::High, p), forced(Regime::Middle, p), forced(Regime::Low, p));
            Ok(SweepRow {
                p,
                regime: chosen.regime,
                exponent: chosen.predicted_exponent,
                certified: chosen.certified,
                high: h.as_ref().map(|x| x.predicted_exponent),
                high_certified: h.is_some_and(|x| x.certified),
                middle: m.as_ref().map(|x| x.predicted_exponent),
                middle_certified: m.is_some_and(|x| x.certified),
                low: l.as_ref().map(|x| x.predicted_exponent),
                low_certified: l.is_some_and(|x| x.certified),
                upper_exponent: upper_exponent(n, p),
            })
        })
        .collect()
}

/// Shape checks on a sweep (rows sorted by increasing `p`).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepCheck {
    /// High and low regime exponents nondecreasing in `p`, middle
    /// nonincreasing, within each contiguous stretch of one regime.
    pub monotone: bool,
    /// Below `n^{−1/3}`: the certified low-regime exponent is at least the
    /// certified middle-regime one (an uncertified exponent counts as none).
    pub low_over_middle: bool,
    /// From `high_margin · n^{−1/4}` on: the high-regime exponent is at
    /// least the middle-regime one.
    pub high_over_middle: bool,
    pub regimes_seen: Vec<Regime>,
    pub failures: Vec<String>,
}

impl SweepCheck {
    pub fn passed(&self) -> bool {
        self.monotone && self.low_over_middle && self.high_over_middle
    }
}

pub fn check_sweep(n: f64, rows: &[SweepRow], opts: &RegimeOptions) -> SweepCheck {
    let mut failures = Vec::new();
    let mut regimes_seen: Vec<Regime> = Vec::new();
    for w in rows.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if a.regime != b.regime {
            continue;
        }
        let ok = match a.regime {
            Regime::Middle => b.exponent <= a.exponent,
            _ => b.exponent >= a.exponent,
        };
        if !ok {
            failures.push(format!(
                "{} regime not monotone between p = {} and p = {}",
                a.regime, a.p, b.p
            ));
        }
    }
    let monotone = failures.is_empty();
    for r in rows {
        if regimes_seen.last() != Some(&r.regime) {
            regimes_seen.push(r.regime);
        }
    }
    let certified = |e: Option<f64>, c: bool| if c { e } else { None };
    let mut low_over_middle = true;
    let mut high_over_middle = true;
    for r in rows {
        if r.p < n.powf(-1.0 / 3.0) {
            let low = certified(r.low, r.low_certified);
            let mid = certified(r.middle, r.middle_certified);
            if mid.is_some() && low.is_none_or(|l| l < mid.unwrap()) {
                low_over_middle = false;
                failures.push(format!("low below middle at p = {}", r.p));
            }
        }
        if r.p >= opts.high_margin * n.powf(-0.25) {
            match (r.high, r.middle) {
                (Some(h), Some(m)) if h >= m => {}
                _ => {
                    high_over_middle = false;
                    failures.push(format!("high below middle at p = {}", r.p));
                }
            }
        }
    }
    SweepCheck {
        monotone,
        low_over_middle,
        high_over_middle,
        regimes_seen,
        failures,
    }
}

/// Concrete bounds at `p = n^{−ε}`: the three closed forms of the
/// corollary (where their range of `ε` applies) next to the calculator.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorollaryRow {
    pub eps: f64,
    pub p: f64,
    pub quarter: Option<f64>,
    pub third: Option<f64>,
    pub low: Option<f64>,
    pub computed: Option<f64>,
    pub regime: Option<Regime>,
}

pub fn corollary_table(n: f64, eps: &[f64], opts: &RegimeOptions) -> Vec<CorollaryRow> {
    let lg = 1.5f64.log2();
    let ln_n = n.ln();
    eps.iter()
        .map(|&e| {
            let p = n.powf(-e);
            let sel = select_parameters(n, p, opts).ok();
            CorollaryRow {
                eps: e,
                p,
                quarter: (e < 0.25).then(|| ((1.0 - 4.0 * e) * n.powf(e) * ln_n).sqrt() * lg),
                third: (e < 1.0 / 3.0 && e > 0.0).then(|| n.powf(e / 2.0) / (e * ln_n).sqrt() * lg),
                low: (e >= 1.0 / 3.0).then(|| n.powf((1.0 - e) / 4.0) / ln_n * lg),
                computed: sel.as_ref().map(|s| s.predicted_exponent),
                regime: sel.map(|s| s.regime),
            }
        })
        .collect()
}

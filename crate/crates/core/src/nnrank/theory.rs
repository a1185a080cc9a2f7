//! Closed-form lower-bound exponents for nonnegative ranks of (shifted,
//! partially deleted) unique-disjointness matrices, as base-2 logarithms.

use num_bigint::BigUint;
use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

pub const OMITTED_TERM_FLAG: &str = "lower-order O(n^{1-eps}) term omitted";

/// `t·log₂(3/2)`: the exponent of the lower bound `(3/2)^t` on the
/// nonnegative rank of UDISJ(t).
pub fn corlb_exponent(t: u32) -> f64 {
    t as f64 * 1.5f64.log2()
}

/// `⌈(3/2)^t⌉`, computed exactly.
pub fn corlb_integer_bound(t: u32) -> BigUint {
    let num = BigUint::from(3u32).pow(t);
    let den = BigUint::from(2u32).pow(t);
    num.div_ceil(&den)
}

/// `H(x) = −x log₂ x − (1−x) log₂(1−x)`.
pub fn binary_entropy(x: f64) -> f64 {
    let h = |y: f64| if y <= 0.0 { 0.0 } else { -y * y.log2() };
    h(x) + h(1.0 - x)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentBound {
    /// Leading term of `log₂` of the bound.
    pub exponent: f64,
    pub flag: &'static str,
}

/// Leading exponent `(1/(8(ρ+1)) − (α+β)H(1/4))·n` for submatrices of
/// `UDISJ(n, k) + ρJ` missing at most an α-fraction of rows and a
/// β-fraction of columns. The `O(n^{1−ε})` correction has an unspecified
/// constant and is left out; the result carries that flag.
pub fn udisj_fraction_exponent(n: f64, rho: f64, alpha: f64, beta: f64) -> Result<ExponentBound> {
    if !(0.0..1.0).contains(&alpha) || !(0.0..1.0).contains(&beta) {
        return Err(Error::InvalidParameter(format!(
            "need 0 <= alpha, beta < 1, got {alpha}, {beta}"
        )));
    }
    if rho.is_nan() || rho < 0.0 || n.is_nan() || n <= 0.0 {
        return Err(Error::InvalidParameter(format!("need rho >= 0 and n > 0, got {rho}, {n}")));
    }
    let exponent = (1.0 / (8.0 * (rho + 1.0)) - (alpha + beta) * binary_entropy(0.25)) * n;
    Ok(ExponentBound {
        exponent,
        flag: OMITTED_TERM_FLAG,
    })
}

/// The uniform-model bound with approximation factor `1 + ρ`: a
/// `(3(1+ρ)log₂ n − 1)`-shift of UDISJ(n, k) survives with at most an
/// `α = 1/(24(1+ρ)log₂ n)` fraction of rows removed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UniformModelBound {
    pub n: f64,
    pub rho: f64,
    pub shift: f64,
    pub row_fraction: f64,
    pub bound: ExponentBound,
}

pub fn uniform_model_exponent(n: f64, rho: f64) -> Result<UniformModelBound> {
    if n.is_nan() || n < 2.0 {
        return Err(Error::InvalidParameter(format!("need n >= 2, got {n}")));
    }
    let l = n.log2();
    let shift = 3.0 * (1.0 + rho) * l - 1.0;
    let row_fraction = 1.0 / (24.0 * (1.0 + rho) * l);
    let bound = udisj_fraction_exponent(n, shift, row_fraction, 0.0)?;
    Ok(UniformModelBound {
        n,
        rho,
        shift,
        row_fraction,
        bound,
    })
}

/// Largest ρ covered by the approximate uniform-model corollary:
/// `n^{1−ε}/log₂ n`.
pub fn corollary_rho_max(n: f64, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(Error::InvalidParameter(format!("need 0 < eps < 1/2, got {eps}")));
    }
    Ok(n.powf(1.0 - eps) / n.log2())
}

use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::problems::PartialMatrix;

use super::factorization::Scalar;
use super::lp::rank_in_place;
use super::nmf::{nmf_upper, NmfOptions};
use super::rectangles::{rectangle_cover_bound, DEFAULT_RECT_NODE_BUDGET};

/// Cap on `min(m, n)` for [`exact_nnegrk_small`].
pub const SMALL_RANK_SIDE_CAP: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LowerMethod {
    Zero,
    LinearRank,
    RectangleCover,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UpperMethod {
    Zero,
    /// Nonnegative rank equals rank when the rank is at most 2.
    RankAtMostTwo,
    Nmf,
    Trivial,
}

/// Bounds on the nonnegative rank of a partial matrix, i.e. the least
/// nonnegative rank over its nonnegative completions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankInterval {
    pub lower: usize,
    pub upper: usize,
    pub lower_method: LowerMethod,
    pub upper_method: UpperMethod,
    pub linear_rank_bound: usize,
    pub rectangle_bound: usize,
    pub rectangle_exact: bool,
}

impl RankInterval {
    pub fn certified(&self) -> bool {
        self.lower == self.upper
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RankOptions {
    pub rmax: usize,
    pub nmf: NmfOptions,
    pub rect_budget: u64,
}

impl Default for RankOptions {
    fn default() -> Self {
        RankOptions {
            rmax: SMALL_RANK_SIDE_CAP,
            nmf: NmfOptions::default(),
            rect_budget: DEFAULT_RECT_NODE_BUDGET,
        }
    }
}

/// Largest linear rank of a fully defined submatrix: for each set of rows,
/// all columns defined on those rows. Rows are the shorter side.
pub fn defined_submatrix_rank<T: Scalar>(m: &PartialMatrix<T>) -> usize {
    let mo = if m.nrows() > m.ncols() { m.transpose() } else { m.clone() };
    let (nr, nc) = (mo.nrows(), mo.ncols());
    assert!(nr < 32, "row subsets are enumerated");
    let mut best = 0;
    for rmask in 1u32..(1u32 << nr) {
        let rows: Vec<usize> = (0..nr).filter(|i| rmask >> i & 1 == 1).collect();
        if rows.len() <= best {
            continue;
        }
        let cols: Vec<usize> = (0..nc).filter(|&j| rows.iter().all(|&i| mo.is_defined(i, j))).collect();
        if cols.len() <= best {
            continue;
        }
        let mut data: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|&i| cols.iter().map(|&j| mo.get(i, j).unwrap().to_big()).collect())
            .collect();
        best = best.max(rank_in_place(&mut data));
    }
    best
}

/// An interval `[lower, upper]` containing the nonnegative rank, for
/// `min(m, n) <= 6`.
///
/// Lower: the larger of the linear rank of a fully defined submatrix and the
/// rectangle covering number. Upper: the rank itself when the matrix is
/// fully defined of rank at most 2, else the smallest `r <= rmax` with a
/// multi-restart NMF fit, else `min(m, n)`. The NMF bound is numerical (max
/// residual 1e-6).
pub fn exact_nnegrk_small<T: Scalar>(m: &PartialMatrix<T>, opts: &RankOptions) -> Result<RankInterval> {
    let side = m.nrows().min(m.ncols());
    if side > SMALL_RANK_SIDE_CAP {
        return Err(Error::InstanceTooLarge {
            what: "small nonnegative rank (shorter side)",
            size: side,
            cap: SMALL_RANK_SIDE_CAP,
        });
    }
    let rect = rectangle_cover_bound(m, opts.rect_budget)?;
    let lin = defined_submatrix_rank(m);
    let (lower, lower_method) = if rect.lower == 0 && lin == 0 {
        (0, LowerMethod::Zero)
    } else if rect.lower > lin {
        (rect.lower, LowerMethod::RectangleCover)
    } else {
        (lin, LowerMethod::LinearRank)
    };
    let done = |upper, upper_method| RankInterval {
        lower,
        upper,
        lower_method,
        upper_method,
        linear_rank_bound: lin,
        rectangle_bound: rect.lower,
        rectangle_exact: rect.exact,
    };
    if rect.upper == 0 {
        // No positive defined entry: the zero factorization fits.
        return Ok(done(0, UpperMethod::Zero));
    }
    if m.is_fully_defined() && lin <= 2 {
        return Ok(done(lin, UpperMethod::RankAtMostTwo));
    }
    let mf = m.to_f64();
    for r in lower.max(1)..side.min(opts.rmax + 1) {
        if nmf_upper(&mf, r, &opts.nmf).is_some() {
            return Ok(done(r, UpperMethod::Nmf));
        }
    }
    Ok(done(side, UpperMethod::Trivial))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{build_udisj, Rational};

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn identity_three() {
        let eye = PartialMatrix::from_rows((0..3).map(|i| (0..3).map(|j| r((i == j) as i64)).collect()).collect()).unwrap();
        let iv = exact_nnegrk_small(&eye, &RankOptions::default()).unwrap();
        assert_eq!((iv.lower, iv.upper), (3, 3));
        assert!(iv.certified());
    }

    #[test]
    fn triangle_matrix() {
        let m = PartialMatrix::from_rows(vec![vec![r(1), r(1)], vec![r(1), r(0)]]).unwrap();
        let iv = exact_nnegrk_small(&m, &RankOptions::default()).unwrap();
        assert_eq!((iv.lower, iv.upper), (2, 2));
    }

    #[test]
    fn udisj_intervals() {
        let one = exact_nnegrk_small(&build_udisj(1, None).unwrap(), &RankOptions::default()).unwrap();
        assert_eq!((one.lower, one.upper), (2, 2));
        let two = exact_nnegrk_small(&build_udisj(2, None).unwrap(), &RankOptions::default()).unwrap();
        assert!(two.lower >= two.rectangle_bound && two.upper <= 4 && two.lower <= two.upper);
    }

    #[test]
    fn masked_rank() {
        // The only fully defined blocks are 1x2 and 2x1.
        let m = PartialMatrix::from_options(vec![vec![Some(r(1)), Some(r(2))], vec![Some(r(3)), None]]).unwrap();
        assert_eq!(defined_submatrix_rank(&m), 1);
    }

    #[test]
    fn rank_two_shortcut() {
        let m = PartialMatrix::from_rows(vec![vec![r(1), r(2), r(3)], vec![r(2), r(4), r(6)], vec![r(0), r(1), r(1)]]).unwrap();
        let iv = exact_nnegrk_small(&m, &RankOptions::default()).unwrap();
        assert_eq!((iv.lower, iv.upper, iv.upper_method), (2, 2, UpperMethod::RankAtMostTwo));
    }
}

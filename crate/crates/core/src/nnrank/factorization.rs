use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::problems::{Entry, PartialMatrix, Rational};

/// Entry types for factorizations and LP data: exact rationals or floats.
pub trait Scalar: Entry + Num + Signed + Copy + Debug + Send + Sync {
    fn to_big(&self) -> BigRational;
    fn from_big(x: &BigRational) -> Result<Self>;
    fn from_rational(x: Rational) -> Self;
}

impl Scalar for Rational {
    fn to_big(&self) -> BigRational {
        BigRational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }

    fn from_big(x: &BigRational) -> Result<Self> {
        match (x.numer().to_i64(), x.denom().to_i64()) {
            (Some(p), Some(q)) => Ok(Rational::new(p, q)),
            _ => Err(Error::Overflow("conversion to 64-bit rational")),
        }
    }

    fn from_rational(x: Rational) -> Self {
        x
    }
}

impl Scalar for f64 {
    /// Exact: every finite double is a dyadic rational.
    fn to_big(&self) -> BigRational {
        BigRational::from_f64(*self).expect("finite float")
    }

    fn from_big(x: &BigRational) -> Result<Self> {
        Ok(x.to_f64().unwrap_or(f64::NAN))
    }

    fn from_rational(x: Rational) -> Self {
        Entry::to_f64(&x)
    }
}

/// `M = T·U` with `T` (`m × r`) and `U` (`r × n`) entrywise nonnegative.
#[derive(Clone, Debug, PartialEq)]
pub struct NonnegFactorization<T> {
    left: Vec<Vec<T>>,
    right: Vec<Vec<T>>,
}

impl<T: Scalar> NonnegFactorization<T> {
    pub fn new(left: Vec<Vec<T>>, right: Vec<Vec<T>>) -> Result<Self> {
        let r = right.len();
        if let Some(i) = left.iter().position(|row| row.len() != r) {
            return Err(Error::DimensionMismatch(format!(
                "left row {i} has {} entries, inner dimension is {r}",
                left[i].len()
            )));
        }
        let n = right.first().map_or(0, Vec::len);
        if let Some(k) = right.iter().position(|row| row.len() != n) {
            return Err(Error::DimensionMismatch(format!("right row {k} has the wrong length")));
        }
        for (name, mat) in [("left", &left), ("right", &right)] {
            for (i, row) in mat.iter().enumerate() {
                if let Some(j) = row.iter().position(|x| x.is_negative()) {
                    return Err(Error::NegativeEntry {
                        row: i,
                        col: j,
                        value: format!("{name}: {}", row[j].format_entry()),
                    });
                }
            }
        }
        Ok(NonnegFactorization { left, right })
    }

    /// Inner dimension `r`.
    pub fn rank(&self) -> usize {
        self.right.len()
    }

    pub fn nrows(&self) -> usize {
        self.left.len()
    }

    /// Column count of `U`. Zero when `r = 0`.
    pub fn ncols(&self) -> usize {
        self.right.first().map_or(0, Vec::len)
    }

    pub fn left(&self) -> &[Vec<T>] {
        &self.left
    }

    pub fn right(&self) -> &[Vec<T>] {
        &self.right
    }

    pub fn entry(&self, i: usize, j: usize) -> T {
        (0..self.rank()).fold(T::zero(), |acc, k| acc + self.left[i][k] * self.right[k][j])
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> NonnegFactorization<U> {
        NonnegFactorization {
            left: self.left.iter().map(|r| r.iter().map(&f).collect()).collect(),
            right: self.right.iter().map(|r| r.iter().map(&f).collect()).collect(),
        }
    }

    /// `T` and `U` as two CSV matrices; the inner index is labelled `k1..kr`.
    pub fn to_csv_pair(&self, row_labels: &[String], col_labels: &[String]) -> (String, String) {
        let inner: Vec<String> = (1..=self.rank()).map(|k| format!("k{k}")).collect();
        let l = PartialMatrix::from_fn(row_labels.to_vec(), inner.clone(), |i, k| {
            Some(self.left[i][k])
        });
        let r = PartialMatrix::from_fn(inner, col_labels.to_vec(), |k, j| Some(self.right[k][j]));
        (l.to_csv(), r.to_csv())
    }

    pub fn from_csv_pair(left: &str, right: &str) -> Result<Self> {
        let dense = |m: PartialMatrix<T>| -> Result<Vec<Vec<T>>> {
            (0..m.nrows())
                .map(|i| {
                    (0..m.ncols())
                        .map(|j| {
                            m.get(i, j).copied().ok_or_else(|| {
                                Error::parse(i + 2, Some(j + 2), "factor entries must be defined")
                            })
                        })
                        .collect()
                })
                .collect()
        };
        NonnegFactorization::new(
            dense(PartialMatrix::from_csv(left)?)?,
            dense(PartialMatrix::from_csv(right)?)?,
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FactorizationCheck<T> {
    pub ok: bool,
    pub max_residual: T,
}

/// Compares `M` with `T·U` on the defined entries of `M`.
pub fn verify_factorization<T: Scalar>(
    m: &PartialMatrix<T>,
    f: &NonnegFactorization<T>,
    tol: T,
) -> Result<FactorizationCheck<T>> {
    if f.nrows() != m.nrows() || (f.rank() > 0 && f.ncols() != m.ncols()) {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {}x{}, factorization is {}x{} times {}x{}",
            m.nrows(),
            m.ncols(),
            f.nrows(),
            f.rank(),
            f.rank(),
            f.ncols()
        )));
    }
    let mut max = T::zero();
    for (i, j, v) in m.defined_entries() {
        let prod = if f.rank() == 0 { T::zero() } else { f.entry(i, j) };
        let res = (*v - prod).abs();
        if res > max {
            max = res;
        }
    }
    Ok(FactorizationCheck {
        ok: max <= tol,
        max_residual: max,
    })
}

/// The trivial factorization of width `min(m, n)`: `I·M` or `M·I`, with
/// undefined entries taken as zero.
pub fn trivial_factorization<T: Scalar>(m: &PartialMatrix<T>) -> Result<NonnegFactorization<T>> {
    let dense: Vec<Vec<T>> = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m.get(i, j).copied().unwrap_or_else(T::zero)).collect())
        .collect();
    let eye = |k: usize| -> Vec<Vec<T>> {
        (0..k)
            .map(|i| (0..k).map(|j| if i == j { T::one() } else { T::zero() }).collect())
            .collect()
    };
    if m.nrows() <= m.ncols() {
        NonnegFactorization::new(eye(m.nrows()), dense)
    } else {
        NonnegFactorization::new(dense, eye(m.ncols()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn eye() -> Vec<Vec<Rational>> {
        vec![vec![r(1), r(0)], vec![r(0), r(1)]]
    }

    #[test]
    fn identity_factors_identity() {
        let m = PartialMatrix::from_rows(eye()).unwrap();
        let f = NonnegFactorization::new(eye(), eye()).unwrap();
        let c = verify_factorization(&m, &f, r(0)).unwrap();
        assert!(c.ok);
        assert_eq!(c.max_residual, r(0));
    }

    #[test]
    fn m_times_identity() {
        let rows = vec![vec![r(1), r(1)], vec![r(1), r(0)]];
        let m = PartialMatrix::from_rows(rows.clone()).unwrap();
        let f = NonnegFactorization::new(rows, eye()).unwrap();
        assert!(verify_factorization(&m, &f, r(0)).unwrap().ok);
    }

    #[test]
    fn mask_is_respected() {
        let m = crate::problems::build_udisj(2, None).unwrap();
        // Any value at the undefined corner is fine: use the all-ones completion there.
        let mut dense: Vec<Vec<Rational>> = (0..4)
            .map(|i| (0..4).map(|j| m.get(i, j).copied().unwrap_or(r(7))).collect())
            .collect();
        dense[3][3] = r(7);
        let f = NonnegFactorization::new(dense, (0..4).map(|i| (0..4).map(|j| r((i == j) as i64)).collect()).collect()).unwrap();
        assert!(verify_factorization(&m, &f, r(0)).unwrap().ok);
    }

    #[test]
    fn rejects_negative_and_mismatched() {
        assert!(NonnegFactorization::new(vec![vec![r(-1)]], vec![vec![r(1)]]).is_err());
        let f = NonnegFactorization::new(vec![vec![r(1)]], vec![vec![r(1), r(1)]]).unwrap();
        let m = PartialMatrix::from_rows(vec![vec![r(1)]]).unwrap();
        assert!(verify_factorization(&m, &f, r(0)).is_err());
    }

    #[test]
    fn csv_pair_round_trip() {
        let f = NonnegFactorization::new(
            vec![vec![r(1), Rational::new(1, 2)], vec![r(0), r(3)]],
            vec![vec![r(2), r(0), r(1)], vec![r(1), r(1), r(0)]],
        )
        .unwrap();
        let labels = |k: usize| (0..k).map(|i| format!("x{i}")).collect::<Vec<_>>();
        let (l, rr) = f.to_csv_pair(&labels(2), &labels(3));
        assert!(l.contains("1/2"));
        assert_eq!(NonnegFactorization::from_csv_pair(&l, &rr).unwrap(), f);
    }

    #[test]
    fn trivial_width() {
        let m = crate::problems::build_udisj(2, Some(1)).unwrap();
        let f = trivial_factorization(&m).unwrap();
        assert_eq!(f.rank(), 2);
        assert!(verify_factorization(&m, &f, r(0)).unwrap().ok);
    }
}

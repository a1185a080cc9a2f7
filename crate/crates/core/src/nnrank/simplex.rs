//! Exact two-phase simplex over arbitrary-precision rationals, with Bland's
//! rule so that it terminates on degenerate problems.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

type Q = BigRational;

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<Q>, value: Q },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Q>>,
    obj: Vec<Q>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn rhs(&self) -> usize {
        self.ncols
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &p;
        }
        let pivot_row = self.rows[r].clone();
        let eliminate = |row: &mut Vec<Q>| {
            let f = row[c].clone();
            if !f.is_zero() {
                for (v, pr) in row.iter_mut().zip(&pivot_row) {
                    if !pr.is_zero() {
                        *v -= &f * pr;
                    }
                }
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.obj);
        self.basis[r] = c;
    }

    fn set_costs(&mut self, cost: &[Q]) {
        let mut obj: Vec<Q> = cost.to_vec();
        obj.push(Q::zero());
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if !cb.is_zero() {
                for (o, v) in obj.iter_mut().zip(&self.rows[i]) {
                    *o -= cb * v;
                }
            }
        }
        self.obj = obj;
    }

    /// Minimizes the current costs over the columns accepted by `allowed`.
    /// Returns false when unbounded.
    fn run(&mut self, allowed: &dyn Fn(usize) -> bool) -> bool {
        loop {
            let entering = (0..self.ncols).find(|&j| allowed(j) && self.obj[j].is_negative());
            let Some(e) = entering else { return true };
            let rhs = self.rhs();
            let mut best: Option<(usize, Q)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[e].is_positive() {
                    let ratio = &row[rhs] / &row[e];
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, e),
                None => return false,
            }
        }
    }
}

/// Minimizes `c·x` subject to `A x = b`, `x >= 0`.
pub fn solve_standard(a: &[Vec<Q>], b: &[Q], c: &[Q]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    let total = n + m;
    let mut rows = Vec::with_capacity(m);
    for (i, (ai, bi)) in a.iter().zip(b).enumerate() {
        assert_eq!(ai.len(), n, "constraint row length");
        let flip = bi.is_negative();
        let mut row: Vec<Q> = ai.iter().map(|v| if flip { -v } else { v.clone() }).collect();
        row.extend((0..m).map(|k| if k == i { Q::one() } else { Q::zero() }));
        row.push(if flip { -bi } else { bi.clone() });
        rows.push(row);
    }
    let mut tab = Tableau {
        rows,
        obj: Vec::new(),
        basis: (n..total).collect(),
        ncols: total,
    };
    let phase1: Vec<Q> = (0..total).map(|j| if j >= n { Q::one() } else { Q::zero() }).collect();
    tab.set_costs(&phase1);
    tab.run(&|_| true);
    if !tab.obj[total].is_zero() {
        return LpOutcome::Infeasible;
    }
    // Drive artificial variables out of the basis; drop redundant rows.
    let mut i = 0;
    while i < tab.rows.len() {
        if tab.basis[i] >= n {
            match (0..n).find(|&j| !tab.rows[i][j].is_zero()) {
                Some(j) => tab.pivot(i, j),
                None => {
                    tab.rows.remove(i);
                    tab.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }
    let mut phase2: Vec<Q> = c.to_vec();
    phase2.extend((0..m).map(|_| Q::zero()));
    tab.set_costs(&phase2);
    if !tab.run(&|j| j < n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Q::zero(); n];
    for (i, &bv) in tab.basis.iter().enumerate() {
        if bv < n {
            x[bv] = tab.rows[i][total].clone();
        }
    }
    let value = x.iter().zip(c).fold(Q::zero(), |acc, (xi, ci)| acc + xi * ci);
    LpOutcome::Optimal { x, value }
}

/// Maximizes `w·x` over `{x : A_le x <= b_le, A_eq x = b_eq}` with `x` free.
pub fn maximize_free(a_le: &[Vec<Q>], b_le: &[Q], a_eq: &[Vec<Q>], b_eq: &[Q], w: &[Q]) -> LpOutcome {
    let d = w.len();
    let k = a_le.len();
    // Columns: x⁺ (d), x⁻ (d), slacks (k).
    let ncols = 2 * d + k;
    let mut a = Vec::with_capacity(k + a_eq.len());
    let mut b = Vec::with_capacity(k + a_eq.len());
    for (i, (row, bi)) in a_le.iter().zip(b_le).enumerate() {
        let mut r: Vec<Q> = row.to_vec();
        r.extend(row.iter().map(|v| -v));
        r.extend((0..k).map(|s| if s == i { Q::one() } else { Q::zero() }));
        a.push(r);
        b.push(bi.clone());
    }
    for (row, bi) in a_eq.iter().zip(b_eq) {
        let mut r: Vec<Q> = row.to_vec();
        r.extend(row.iter().map(|v| -v));
        r.extend((0..k).map(|_| Q::zero()));
        a.push(r);
        b.push(bi.clone());
    }
    let mut c: Vec<Q> = w.iter().map(|v| -v).collect();
    c.extend(w.iter().cloned());
    c.extend((0..k).map(|_| Q::zero()));
    debug_assert_eq!(c.len(), ncols);
    match solve_standard(&a, &b, &c) {
        LpOutcome::Optimal { x, value } => LpOutcome::Optimal {
            x: (0..d).map(|j| &x[j] - &x[d + j]).collect(),
            value: -value,
        },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64) -> Q {
        Q::from_integer(BigInt::from(n))
    }

    fn qs(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&n| q(n)).collect()
    }

    #[test]
    fn small_max() {
        // max x + y s.t. x + 2y <= 4, 3x + y <= 6.
        let r = maximize_free(&[qs(&[1, 2]), qs(&[3, 1]), qs(&[-1, 0]), qs(&[0, -1])], &qs(&[4, 6, 0, 0]), &[], &[], &qs(&[1, 1]));
        match r {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, Q::new(BigInt::from(14), BigInt::from(5)));
                assert_eq!(x, vec![Q::new(BigInt::from(8), BigInt::from(5)), Q::new(BigInt::from(6), BigInt::from(5))]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        assert_eq!(
            solve_standard(&[qs(&[1, 1])], &qs(&[-1]), &qs(&[0, 0])),
            LpOutcome::Infeasible
        );
        assert_eq!(maximize_free(&[qs(&[-1])], &qs(&[0]), &[], &[], &qs(&[1])), LpOutcome::Unbounded);
    }

    #[test]
    fn equality_and_redundant_rows() {
        // x + y = 1 twice, min x - y.
        let r = solve_standard(&[qs(&[1, 1]), qs(&[1, 1])], &qs(&[1, 1]), &qs(&[1, -1]));
        assert_eq!(r, LpOutcome::Optimal { x: qs(&[0, 1]), value: q(-1) });
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example, which cycles under the textbook largest-coefficient rule.
        let a = vec![
            vec![Q::new(1.into(), 4.into()), q(-60), Q::new((-1).into(), 25.into()), q(9), q(1), q(0), q(0)],
            vec![Q::new(1.into(), 2.into()), q(-90), Q::new((-1).into(), 50.into()), q(3), q(0), q(1), q(0)],
            vec![q(0), q(0), q(1), q(0), q(0), q(0), q(1)],
        ];
        let c = vec![Q::new((-3).into(), 4.into()), q(150), Q::new((-1).into(), 50.into()), q(6), q(0), q(0), q(0)];
        match solve_standard(&a, &qs(&[0, 0, 1]), &c) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, Q::new((-1).into(), 20.into())),
            other => panic!("{other:?}"),
        }
    }
}

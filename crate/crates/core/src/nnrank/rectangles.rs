use std::collections::HashSet;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::problems::PartialMatrix;

use super::factorization::Scalar;

/// Cap on the shorter side: rectangles are enumerated through its subsets.
pub const RECT_SIDE_CAP: usize = 20;
/// Cap on the number of defined positive entries.
pub const RECT_SUPPORT_CAP: usize = 1 << 12;
pub const DEFAULT_RECT_NODE_BUDGET: u64 = 1_000_000;

/// A combinatorial rectangle `rows × cols` (indices into the input matrix).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rectangle {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

/// Minimum cover of the positive defined entries by rectangles that contain
/// no defined zero. `lower` is always a valid bound on the cover number;
/// `exact` means `lower == upper` was proved by complete search.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RectangleCover {
    pub lower: usize,
    pub upper: usize,
    pub exact: bool,
    pub cover: Vec<Rectangle>,
    pub maximal_rectangles: usize,
    pub nodes: u64,
}

struct Support {
    /// `zero[i][j]`: entry (i, j) is a defined zero (in the oriented matrix).
    zero: Vec<Vec<bool>>,
    elems: Vec<(usize, usize)>,
}

impl Support {
    fn compatible(&self, a: (usize, usize), b: (usize, usize)) -> bool {
        !self.zero[a.0][b.1] && !self.zero[b.0][a.1]
    }
}

/// Maximal zero-free rectangles (closed row/column pairs) of the oriented
/// matrix containing at least one positive entry; `rows <= RECT_SIDE_CAP`.
fn maximal_rectangles(s: &Support, nrows: usize, ncols: usize) -> Vec<(u32, FixedBitSet)> {
    let allowed: Vec<FixedBitSet> = (0..nrows)
        .map(|i| {
            let mut b = FixedBitSet::with_capacity(ncols);
            for j in 0..ncols {
                b.set(j, !s.zero[i][j]);
            }
            b
        })
        .collect();
    let mut positive_rows = vec![FixedBitSet::with_capacity(ncols); nrows];
    for &(i, j) in &s.elems {
        positive_rows[i].insert(j);
    }
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for rmask in 1u32..(1u32 << nrows) {
        let mut cols = FixedBitSet::with_capacity(ncols);
        cols.insert_range(..);
        for i in 0..nrows {
            if rmask >> i & 1 == 1 {
                cols.intersect_with(&allowed[i]);
            }
        }
        if cols.is_clear() {
            continue;
        }
        let closed = (0..nrows).fold(0u32, |acc, i| if cols.is_subset(&allowed[i]) { acc | 1 << i } else { acc });
        if closed != rmask || !seen.insert(rmask) {
            continue;
        }
        let has_positive = (0..nrows).any(|i| rmask >> i & 1 == 1 && !positive_rows[i].is_disjoint(&cols));
        if has_positive {
            out.push((rmask, cols));
        }
    }
    out
}

struct Search<'a> {
    s: &'a Support,
    covers: Vec<FixedBitSet>,
    /// Rectangles covering each element.
    by_elem: Vec<Vec<usize>>,
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl Search<'_> {
    /// Greedy set of pairwise incompatible uncovered elements: no rectangle
    /// contains two of them.
    fn fooling_bound(&self, covered: &FixedBitSet) -> usize {
        let mut chosen: Vec<(usize, usize)> = Vec::new();
        for (k, &e) in self.s.elems.iter().enumerate() {
            if !covered.contains(k) && chosen.iter().all(|&f| !self.s.compatible(e, f)) {
                chosen.push(e);
            }
        }
        chosen.len()
    }

    fn go(&mut self, covered: &mut FixedBitSet, stack: &mut Vec<usize>) {
        if self.exhausted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        let Some(pick) = (0..self.s.elems.len())
            .filter(|&k| !covered.contains(k))
            .min_by_key(|&k| self.by_elem[k].len())
        else {
            if stack.len() < self.best.len() {
                self.best = stack.clone();
            }
            return;
        };
        if stack.len() + self.fooling_bound(covered) >= self.best.len() {
            return;
        }
        let mut options = self.by_elem[pick].clone();
        options.sort_by_key(|&r| std::cmp::Reverse(self.covers[r].difference(covered).count()));
        for r in options {
            let before = covered.clone();
            covered.union_with(&self.covers[r]);
            stack.push(r);
            self.go(covered, stack);
            stack.pop();
            *covered = before;
        }
    }
}

/// Rectangle covering number of the positive support, by exact
/// branch-and-bound set cover over the maximal zero-free rectangles.
/// Undefined entries may lie inside rectangles.
pub fn rectangle_cover_bound<T: Scalar>(m: &PartialMatrix<T>, node_budget: u64) -> Result<RectangleCover> {
    if let Some((i, j)) = m.find_negative(&T::zero()) {
        return Err(Error::NegativeEntry {
            row: i,
            col: j,
            value: m.get(i, j).unwrap().format_entry(),
        });
    }
    let transpose = m.nrows() > m.ncols();
    let mo = if transpose { m.transpose() } else { m.clone() };
    let (nrows, ncols) = (mo.nrows(), mo.ncols());
    if nrows > RECT_SIDE_CAP {
        return Err(Error::InstanceTooLarge {
            what: "rectangle cover (shorter side)",
            size: nrows,
            cap: RECT_SIDE_CAP,
        });
    }
    let mut zero = vec![vec![false; ncols]; nrows];
    let mut elems = Vec::new();
    for (i, j, v) in mo.defined_entries() {
        if v.is_zero() {
            zero[i][j] = true;
        } else {
            elems.push((i, j));
        }
    }
    if elems.len() > RECT_SUPPORT_CAP {
        return Err(Error::InstanceTooLarge {
            what: "rectangle cover (positive entries)",
            size: elems.len(),
            cap: RECT_SUPPORT_CAP,
        });
    }
    let s = Support { zero, elems };
    let rects = maximal_rectangles(&s, nrows, ncols);
    let covers: Vec<FixedBitSet> = rects
        .iter()
        .map(|(rm, cols)| {
            let mut b = FixedBitSet::with_capacity(s.elems.len());
            for (k, &(i, j)) in s.elems.iter().enumerate() {
                if rm >> i & 1 == 1 && cols.contains(j) {
                    b.insert(k);
                }
            }
            b
        })
        .collect();
    let mut by_elem = vec![Vec::new(); s.elems.len()];
    for (r, c) in covers.iter().enumerate() {
        for k in c.ones() {
            by_elem[k].push(r);
        }
    }

    // Greedy cover as the incumbent.
    let mut covered = FixedBitSet::with_capacity(s.elems.len());
    let mut greedy = Vec::new();
    while covered.count_ones(..) < s.elems.len() {
        let r = (0..covers.len())
            .max_by_key(|&r| (covers[r].difference(&covered).count(), std::cmp::Reverse(r)))
            .expect("every positive entry lies in a maximal rectangle");
        covered.union_with(&covers[r]);
        greedy.push(r);
    }

    let mut search = Search {
        s: &s,
        covers,
        by_elem,
        best: greedy,
        nodes: 0,
        budget: node_budget,
        exhausted: false,
    };
    let root_lb = search.fooling_bound(&FixedBitSet::with_capacity(s.elems.len()));
    if root_lb < search.best.len() {
        search.go(&mut FixedBitSet::with_capacity(s.elems.len()), &mut Vec::new());
    }
    let upper = search.best.len();
    let exact = !search.exhausted;
    let cover = search
        .best
        .iter()
        .map(|&r| {
            let (rm, cols) = &rects[r];
            let a: Vec<usize> = (0..nrows).filter(|i| rm >> i & 1 == 1).collect();
            let b: Vec<usize> = cols.ones().collect();
            if transpose {
                Rectangle { rows: b, cols: a }
            } else {
                Rectangle { rows: a, cols: b }
            }
        })
        .collect();
    Ok(RectangleCover {
        lower: if exact { upper } else { root_lb },
        upper,
        exact,
        cover,
        maximal_rectangles: rects.len(),
        nodes: search.nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{build_udisj, Rational};
    use num_traits::Zero;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn udisj_one_needs_two() {
        let c = rectangle_cover_bound(&build_udisj(1, None).unwrap(), DEFAULT_RECT_NODE_BUDGET).unwrap();
        assert_eq!((c.lower, c.upper, c.exact), (2, 2, true));
    }

    #[test]
    fn all_ones_and_identity() {
        let ones = PartialMatrix::from_rows(vec![vec![r(1); 3]; 3]).unwrap();
        assert_eq!(rectangle_cover_bound(&ones, 1000).unwrap().upper, 1);
        let eye = PartialMatrix::from_rows((0..3).map(|i| (0..3).map(|j| r((i == j) as i64)).collect()).collect()).unwrap();
        let c = rectangle_cover_bound(&eye, 1000).unwrap();
        assert_eq!((c.lower, c.upper), (3, 3));
    }

    #[test]
    fn cover_is_valid() {
        let m = build_udisj(3, None).unwrap();
        let c = rectangle_cover_bound(&m, DEFAULT_RECT_NODE_BUDGET).unwrap();
        for (i, j, v) in m.defined_entries() {
            if v.is_zero() {
                assert!(c.cover.iter().all(|rect| !(rect.rows.contains(&i) && rect.cols.contains(&j))));
            } else {
                assert!(c.cover.iter().any(|rect| rect.rows.contains(&i) && rect.cols.contains(&j)));
            }
        }
    }

    #[test]
    fn tall_matrix_is_transposed_back() {
        let m = PartialMatrix::from_rows(vec![vec![r(1), r(0)], vec![r(0), r(1)], vec![r(1), r(1)]]).unwrap();
        let c = rectangle_cover_bound(&m, 1000).unwrap();
        assert_eq!(c.upper, 2);
        assert!(c.cover.iter().all(|rect| rect.rows.iter().all(|&i| i < 3) && rect.cols.iter().all(|&j| j < 2)));
    }

    #[test]
    fn budget_exhaustion_keeps_a_valid_lower_bound() {
        let m = build_udisj(4, None).unwrap();
        let c = rectangle_cover_bound(&m, 1).unwrap();
        assert!(!c.exact || c.lower == c.upper);
        assert!(c.lower <= c.upper);
    }

    #[test]
    fn zero_matrix() {
        let m = PartialMatrix::from_rows(vec![vec![r(0); 2]; 2]).unwrap();
        let c = rectangle_cover_bound(&m, 10).unwrap();
        assert_eq!((c.lower, c.upper, c.exact), (0, 0, true));
    }
}

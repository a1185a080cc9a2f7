use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::problems::PartialMatrix;
use crate::randgraph::trial_rng;

use super::factorization::NonnegFactorization;

/// Largest residual on defined entries that counts as an exact fit.
pub const NMF_SUCCESS_TOL: f64 = 1e-6;
/// Factor entries never drop below this during updates.
pub const NMF_FLOOR: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NmfOptions {
    pub restarts: usize,
    pub iters: usize,
    pub seed: u64,
    pub parallel: bool,
}

impl Default for NmfOptions {
    fn default() -> Self {
        NmfOptions {
            restarts: 8,
            iters: 5000,
            seed: 0,
            parallel: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct NmfFit {
    pub factorization: NonnegFactorization<f64>,
    /// Max absolute error over the defined entries.
    pub residual: f64,
    pub restart: usize,
}

struct Dense {
    m: usize,
    n: usize,
    vals: Vec<f64>,
    mask: Vec<f64>,
}

impl Dense {
    fn new(pm: &PartialMatrix<f64>) -> Self {
        let (m, n) = (pm.nrows(), pm.ncols());
        let mut vals = vec![0.0; m * n];
        let mut mask = vec![0.0; m * n];
        for (i, j, v) in pm.defined_entries() {
            vals[i * n + j] = *v;
            mask[i * n + j] = 1.0;
        }
        Dense { m, n, vals, mask }
    }
}

fn product(t: &[f64], u: &[f64], m: usize, r: usize, n: usize) -> Vec<f64> {
    let mut p = vec![0.0; m * n];
    for i in 0..m {
        for k in 0..r {
            let tik = t[i * r + k];
            for j in 0..n {
                p[i * n + j] += tik * u[k * n + j];
            }
        }
    }
    p
}

fn max_residual(d: &Dense, t: &[f64], u: &[f64], r: usize) -> f64 {
    let p = product(t, u, d.m, r, d.n);
    p.iter()
        .zip(&d.vals)
        .zip(&d.mask)
        .filter(|(_, &w)| w > 0.0)
        .map(|((a, b), _)| (a - b).abs())
        .fold(0.0, f64::max)
}

fn update(d: &Dense, wm: &[f64], t: &mut [f64], u: &mut [f64], r: usize) {
    const EPS: f64 = 1e-300;
    let (m, n) = (d.m, d.n);
    let wp: Vec<f64> = product(t, u, m, r, n).iter().zip(&d.mask).map(|(p, w)| p * w).collect();
    for i in 0..m {
        for k in 0..r {
            let (mut num, mut den) = (0.0, 0.0);
            for j in 0..n {
                num += wm[i * n + j] * u[k * n + j];
                den += wp[i * n + j] * u[k * n + j];
            }
            let x = &mut t[i * r + k];
            *x = (*x * num / (den + EPS)).max(NMF_FLOOR);
        }
    }
    let wp: Vec<f64> = product(t, u, m, r, n).iter().zip(&d.mask).map(|(p, w)| p * w).collect();
    for k in 0..r {
        for j in 0..n {
            let (mut num, mut den) = (0.0, 0.0);
            for i in 0..m {
                num += t[i * r + k] * wm[i * n + j];
                den += t[i * r + k] * wp[i * n + j];
            }
            let x = &mut u[k * n + j];
            *x = (*x * num / (den + EPS)).max(NMF_FLOOR);
        }
    }
}

fn iterate(d: &Dense, wm: &[f64], t: &mut [f64], u: &mut [f64], r: usize, iters: usize) {
    const CHECK_EVERY: usize = 100;
    for it in 0..iters {
        update(d, wm, t, u, r);
        if (it + 1) % CHECK_EVERY == 0 && max_residual(d, t, u, r) <= NMF_SUCCESS_TOL * 1e-3 {
            break;
        }
    }
}

/// Entries below this fraction of the largest factor entry are snapped to
/// the floor before the second phase.
const SNAP_RATIO: f64 = 1e-3;

/// One restart of masked multiplicative updates (Lee–Seung with weights).
///
/// Multiplicative updates approach an exact zero only at rate `O(1/k)`, so
/// after `iters` steps, entries that are small relative to the rest are
/// snapped to the floor and `iters / 4` further steps are run. The better
/// of the two end states is kept.
fn run_restart(d: &Dense, r: usize, iters: usize, seed: u64, restart: usize) -> (Vec<f64>, Vec<f64>, f64) {
    let (m, n) = (d.m, d.n);
    let mut rng = trial_rng(seed, restart as u64);
    let mut draw = |len: usize| -> Vec<f64> { (0..len).map(|_| 1.0 - rng.random::<f64>()).collect() };
    let mut t = draw(m * r);
    let mut u = draw(r * n);
    let wm: Vec<f64> = d.vals.iter().zip(&d.mask).map(|(v, w)| v * w).collect();
    iterate(d, &wm, &mut t, &mut u, r, iters);
    let res = max_residual(d, &t, &u, r);
    if res <= NMF_SUCCESS_TOL * 1e-3 {
        return (t, u, res);
    }
    let (mut t2, mut u2) = (t.clone(), u.clone());
    for f in [&mut t2, &mut u2] {
        let top = f.iter().copied().fold(0.0, f64::max);
        for x in f.iter_mut() {
            if *x < SNAP_RATIO * top {
                *x = NMF_FLOOR;
            }
        }
    }
    iterate(d, &wm, &mut t2, &mut u2, r, iters / 4);
    let res2 = max_residual(d, &t2, &u2, r);
    if res2 < res {
        (t2, u2, res2)
    } else {
        (t, u, res)
    }
}

/// Best fit over all restarts: lowest residual, ties to the lowest restart
/// index. Restart `i` draws from stream `i` of `seed`, so the result does
/// not depend on scheduling. `None` for `r = 0` or an empty matrix.
pub fn nmf_fit(pm: &PartialMatrix<f64>, r: usize, opts: &NmfOptions) -> Option<NmfFit> {
    if r == 0 || pm.nrows() == 0 || pm.ncols() == 0 || opts.restarts == 0 {
        return None;
    }
    let d = Dense::new(pm);
    let go = |i: usize| run_restart(&d, r, opts.iters, opts.seed, i);
    let runs: Vec<(Vec<f64>, Vec<f64>, f64)> = if opts.parallel {
        (0..opts.restarts).into_par_iter().map(go).collect()
    } else {
        (0..opts.restarts).map(go).collect()
    };
    let (best, _) = runs
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |(bi, br), (i, run)| if run.2 < br { (i, run.2) } else { (bi, br) });
    let (t, u, residual) = runs.into_iter().nth(best)?;
    let left = t.chunks(r).map(<[f64]>::to_vec).collect();
    let right = u.chunks(d.n).map(<[f64]>::to_vec).collect();
    let factorization = NonnegFactorization::new(left, right).ok()?;
    Some(NmfFit {
        factorization,
        residual,
        restart: best,
    })
}

/// A rank-`r` nonnegative factorization matching every defined entry up to
/// [`NMF_SUCCESS_TOL`], if the multi-restart search finds one.
pub fn nmf_upper(pm: &PartialMatrix<f64>, r: usize, opts: &NmfOptions) -> Option<NmfFit> {
    nmf_fit(pm, r, opts).filter(|f| f.residual <= NMF_SUCCESS_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: Vec<Vec<f64>>) -> PartialMatrix<f64> {
        PartialMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn two_by_two_triangle() {
        let m = mat(vec![vec![1.0, 1.0], vec![1.0, 0.0]]);
        let opts = NmfOptions::default();
        let fit = nmf_upper(&m, 2, &opts).expect("rank 2 fit");
        assert!(fit.residual < 1e-6);
        assert!(nmf_upper(&m, 1, &opts).is_none());
    }

    #[test]
    fn masked_udisj() {
        let m = crate::problems::build_udisj(2, None).unwrap().to_f64();
        assert!(nmf_upper(&m, 4, &NmfOptions::default()).is_some());
    }

    #[test]
    fn deterministic_bits() {
        let m = mat(vec![vec![1.0, 2.0, 0.5], vec![0.3, 0.0, 1.0], vec![2.0, 1.0, 1.0]]);
        let a = NmfOptions { parallel: true, iters: 300, ..NmfOptions::default() };
        let b = NmfOptions { parallel: false, ..a };
        let x = nmf_fit(&m, 2, &a).unwrap();
        let y = nmf_fit(&m, 2, &b).unwrap();
        assert_eq!(x.residual.to_bits(), y.residual.to_bits());
        assert_eq!(x.restart, y.restart);
        for (p, q) in x.factorization.left().iter().flatten().zip(y.factorization.left().iter().flatten()) {
            assert_eq!(p.to_bits(), q.to_bits());
        }
    }

    #[test]
    fn rank_one_exact() {
        let m = mat(vec![vec![1.0, 2.0], vec![3.0, 6.0], vec![0.5, 1.0]]);
        assert!(nmf_upper(&m, 1, &NmfOptions::default()).is_some());
    }
}

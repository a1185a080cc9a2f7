use crate::error::{Error, Result};

use super::{Graph, Label, VertexSet};

/// Largest graph accepted by the exact stability-number solver.
pub const ALPHA_VERTEX_CAP: usize = 64;

/// Exact stability number `α(G)`.
pub fn stability_number(g: &Graph) -> Result<usize> {
    Ok(maximum_stable_set(g)?.len())
}

/// A maximum stable set of `g`, as ascending labels.
///
/// Branch and bound for a maximum clique of the complement, pruned by a greedy
/// coloring bound (the coloring of the complement partitions the candidates
/// into cliques of `g`, each contributing at most one vertex).
pub fn maximum_stable_set(g: &Graph) -> Result<Vec<Label>> {
    let n = g.order();
    if n > ALPHA_VERTEX_CAP {
        return Err(Error::InstanceTooLarge {
            what: "exact stability number",
            size: n,
            cap: ALPHA_VERTEX_CAP,
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let adj = g.adjacency_masks("exact stability number")?;
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut solver = CliqueSearch {
        compl: adj
            .iter()
            .enumerate()
            .map(|(i, &row)| !row & all & !(1u64 << i))
            .collect(),
        best: 0,
        best_size: 0,
    };
    solver.expand(0, 0, all);
    let mut out: Vec<Label> = Vec::with_capacity(solver.best_size);
    let mut m = solver.best;
    while m != 0 {
        let p = m.trailing_zeros() as usize;
        m &= m - 1;
        out.push(g.label(p));
    }
    Ok(out)
}

struct CliqueSearch {
    compl: Vec<u64>,
    best: u64,
    best_size: usize,
}

impl CliqueSearch {
    fn expand(&mut self, current: u64, size: usize, mut cand: u64) {
        let (order, colors) = self.color(cand);
        for k in (0..order.len()).rev() {
            if size + colors[k] <= self.best_size {
                return;
            }
            let v = order[k];
            let bit = 1u64 << v;
            let next = cand & self.compl[v];
            if next == 0 {
                if size + 1 > self.best_size {
                    self.best_size = size + 1;
                    self.best = current | bit;
                }
            } else {
                self.expand(current | bit, size + 1, next);
            }
            cand &= !bit;
        }
    }

    /// Greedy sequential coloring in the complement. Returns the vertices in
    /// nondecreasing color order together with their color numbers.
    fn color(&self, cand: u64) -> (Vec<usize>, Vec<usize>) {
        let mut order = Vec::with_capacity(cand.count_ones() as usize);
        let mut colors = Vec::with_capacity(order.capacity());
        let mut uncolored = cand;
        let mut k = 0;
        while uncolored != 0 {
            k += 1;
            let mut q = uncolored;
            while q != 0 {
                let v = q.trailing_zeros() as usize;
                q &= !(1u64 << v) & !self.compl[v];
                uncolored &= !(1u64 << v);
                order.push(v);
                colors.push(k);
            }
        }
        (order, colors)
    }
}

/// `α(G)` by plain enumeration of all vertex subsets. Intended as an
/// independent cross-check for small graphs (at most 24 vertices).
pub fn stability_number_brute_force(g: &Graph) -> Result<usize> {
    let n = g.order();
    if n > 24 {
        return Err(Error::InstanceTooLarge {
            what: "brute-force stability number",
            size: n,
            cap: 24,
        });
    }
    let adj = g.adjacency_masks("brute-force stability number")?;
    let mut best = 0;
    for mask in 0u64..(1u64 << n) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let stable = (0..n).all(|v| mask >> v & 1 == 0 || adj[v] & mask == 0);
        if stable {
            best = size;
        }
    }
    Ok(best)
}

/// All stable sets of `g` (including the empty set), each exactly once.
///
/// With `size_cap`, only sets of at most that many vertices are listed.
/// Stops with [`Error::BudgetExceeded`] once more than `budget` sets would be
/// produced.
pub fn enumerate_stable_sets(
    g: &Graph,
    size_cap: Option<usize>,
    budget: u64,
) -> Result<Vec<VertexSet>> {
    let adj = g.adjacency_masks("stable set enumeration")?;
    if let Some(&l) = g.labels().last() {
        if l >= VertexSet::CAPACITY {
            return Err(Error::InstanceTooLarge {
                what: "stable set enumeration label",
                size: l,
                cap: VertexSet::CAPACITY - 1,
            });
        }
    }
    let n = g.order();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let cap = size_cap.unwrap_or(n);
    let mut masks = Vec::new();
    let mut stack = vec![(0u64, all, 0usize)];
    // Depth-first: each frame extends `set` by vertices of `cand` above the
    // last chosen position, so every stable set is reached along one path.
    while let Some((set, cand, size)) = stack.pop() {
        if masks.len() as u64 >= budget {
            return Err(Error::BudgetExceeded {
                what: "stable set enumeration",
                budget,
                partial: masks.len() as u64,
            });
        }
        masks.push(set);
        if size == cap {
            continue;
        }
        let mut c = cand;
        let mut children = Vec::new();
        while c != 0 {
            let v = c.trailing_zeros() as usize;
            c &= c - 1;
            let above = if v == 63 { 0 } else { !((1u64 << (v + 1)) - 1) };
            children.push((set | 1u64 << v, cand & !adj[v] & above, size + 1));
        }
        stack.extend(children.into_iter().rev());
    }
    masks.iter().map(|&m| g.mask_to_set(m)).collect()
}

/// Number of stable sets of `g` (including the empty set).
///
/// Works on graphs of any order up to 64 vertices; `budget` bounds the count.
pub fn count_stable_sets(g: &Graph, budget: Option<u64>) -> Result<u64> {
    let adj = g.adjacency_masks("stable set counting")?;
    let n = g.order();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let budget = budget.unwrap_or(u64::MAX);
    let mut count = 0u64;
    count_rec(&adj, all, &mut count, budget)?;
    Ok(count)
}

fn count_rec(adj: &[u64], cand: u64, count: &mut u64, budget: u64) -> Result<()> {
    *count += 1;
    if *count > budget {
        return Err(Error::BudgetExceeded {
            what: "stable set counting",
            budget,
            partial: *count - 1,
        });
    }
    let mut c = cand;
    while c != 0 {
        let v = c.trailing_zeros() as usize;
        c &= c - 1;
        let above = if v == 63 { 0 } else { !((1u64 << (v + 1)) - 1) };
        count_rec(adj, cand & !adj[v] & above, count, budget)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Graph {
        Graph::path(3)
    }

    #[test]
    fn alpha_small_examples() {
        assert_eq!(stability_number(&Graph::complete(5)).unwrap(), 1);
        assert_eq!(stability_number(&Graph::edgeless(7)).unwrap(), 7);
        assert_eq!(stability_number(&Graph::cycle(5).unwrap()).unwrap(), 2);
        assert_eq!(stability_number(&Graph::edgeless(0)).unwrap(), 0);
    }

    #[test]
    fn certificate_is_stable() {
        let g = Graph::cycle(7).unwrap();
        let s = maximum_stable_set(&g).unwrap();
        assert_eq!(s.len(), 3);
        assert!(g.is_stable(VertexSet::from_labels(s).unwrap()));
    }

    #[test]
    fn alpha_cap_enforced() {
        let g = Graph::edgeless(65);
        assert!(matches!(
            stability_number(&g),
            Err(Error::InstanceTooLarge { .. })
        ));
    }

    #[test]
    fn enumerate_examples() {
        let k2 = Graph::complete(2);
        let sets = enumerate_stable_sets(&k2, None, 100).unwrap();
        assert_eq!(sets.len(), 3);
        assert!(sets.contains(&VertexSet::empty()));

        let sets = enumerate_stable_sets(&p3(), None, 100).unwrap();
        assert_eq!(sets.len(), 5);
        assert!(sets.contains(&VertexSet::from_labels([1, 3]).unwrap()));

        assert_eq!(
            enumerate_stable_sets(&Graph::edgeless(3), None, 100)
                .unwrap()
                .len(),
            8
        );
    }

    #[test]
    fn enumerate_size_cap_and_budget() {
        let e3 = Graph::edgeless(3);
        assert_eq!(enumerate_stable_sets(&e3, Some(1), 100).unwrap().len(), 4);
        match enumerate_stable_sets(&e3, None, 5) {
            Err(Error::BudgetExceeded { partial, .. }) => assert_eq!(partial, 5),
            other => panic!("expected budget error, got {other:?}"),
        }
        assert!(count_stable_sets(&e3, Some(7)).is_err());
        assert_eq!(count_stable_sets(&e3, Some(8)).unwrap(), 8);
    }
}

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::graphs::{Graph, Label};

/// Outcome of an induced-subgraph search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InducedSearch {
    /// `(h label, g label)` pairs of a verified induced embedding.
    Found(Vec<(Label, Label)>),
    /// The search space was exhausted: no induced copy exists.
    Absent,
    /// The node budget ran out before a decision.
    BudgetExhausted { nodes: u64 },
}

impl InducedSearch {
    pub fn is_found(&self) -> bool {
        matches!(self, InducedSearch::Found(_))
    }
}

/// Searches for an induced copy of `h` in `g` by backtracking.
///
/// Pattern vertices are placed in a connectivity-first order; candidates for
/// the next one are the intersection of the neighbourhoods of its already
/// placed neighbours minus the neighbourhoods of its placed non-neighbours.
/// `node_budget` bounds the number of partial assignments tried.
pub fn find_induced(h: &Graph, g: &Graph, node_budget: u64) -> Result<InducedSearch> {
    let k = h.order();
    if k == 0 {
        return Ok(InducedSearch::Found(Vec::new()));
    }
    if k > g.order() {
        return Ok(InducedSearch::Absent);
    }
    let order = placement_order(h);
    let hdeg: Vec<usize> = (0..k).map(|x| h.neighbors_pos(x).count_ones(..)).collect();
    let gdeg: Vec<usize> = (0..g.order()).map(|y| g.neighbors_pos(y).count_ones(..)).collect();
    let mut search = Search {
        h,
        g,
        order: &order,
        hdeg,
        gdeg,
        image: vec![usize::MAX; k],
        used: FixedBitSet::with_capacity(g.order()),
        nodes: 0,
        budget: node_budget,
    };
    match search.extend(0) {
        Step::Found => {
            let map: Vec<(Label, Label)> = (0..k)
                .map(|x| (h.label(x), g.label(search.image[x])))
                .collect();
            verify_induced(h, g, &map)?;
            Ok(InducedSearch::Found(map))
        }
        Step::Exhausted => Ok(InducedSearch::Absent),
        Step::OutOfBudget => Ok(InducedSearch::BudgetExhausted {
            nodes: search.nodes,
        }),
    }
}

/// Checks that `map` is injective and preserves both edges and non-edges.
pub fn verify_induced(h: &Graph, g: &Graph, map: &[(Label, Label)]) -> Result<()> {
    let mut seen = std::collections::BTreeSet::new();
    for &(_, y) in map {
        if !seen.insert(y) || !g.contains_vertex(y) {
            return Err(Error::IdentityViolation {
                at: format!("image vertex {y}"),
                expected: "distinct vertices of g".into(),
                found: "repeat or unknown".into(),
            });
        }
    }
    for (i, &(a, x)) in map.iter().enumerate() {
        for &(b, y) in &map[i + 1..] {
            if h.has_edge(a, b) != g.has_edge(x, y) {
                return Err(Error::IdentityViolation {
                    at: format!("pair ({a}, {b}) -> ({x}, {y})"),
                    expected: format!("adjacent = {}", h.has_edge(a, b)),
                    found: format!("adjacent = {}", g.has_edge(x, y)),
                });
            }
        }
    }
    Ok(())
}

fn placement_order(h: &Graph) -> Vec<usize> {
    let k = h.order();
    let deg = |x: usize| h.neighbors_pos(x).count_ones(..);
    let mut placed = vec![false; k];
    let mut order = Vec::with_capacity(k);
    while order.len() < k {
        let next = (0..k)
            .filter(|&x| !placed[x])
            .max_by_key(|&x| {
                let links = order.iter().filter(|&&y| h.adjacent_pos(x, y)).count();
                (links, deg(x), std::cmp::Reverse(x))
            })
            .expect("unplaced vertex");
        placed[next] = true;
        order.push(next);
    }
    order
}

enum Step {
    Found,
    Exhausted,
    OutOfBudget,
}

struct Search<'a> {
    h: &'a Graph,
    g: &'a Graph,
    order: &'a [usize],
    hdeg: Vec<usize>,
    gdeg: Vec<usize>,
    image: Vec<usize>,
    used: FixedBitSet,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn candidates(&self, depth: usize) -> FixedBitSet {
        let x = self.order[depth];
        let n = self.g.order();
        let mut cand = FixedBitSet::with_capacity(n);
        let placed = &self.order[..depth];
        match placed.iter().find(|&&y| self.h.adjacent_pos(x, y)) {
            Some(&y) => cand.union_with(self.g.neighbors_pos(self.image[y])),
            None => cand.insert_range(..),
        }
        for &y in placed {
            let row = self.g.neighbors_pos(self.image[y]);
            if self.h.adjacent_pos(x, y) {
                cand.intersect_with(row);
            } else {
                cand.difference_with(row);
            }
        }
        cand.difference_with(&self.used);
        cand
    }

    fn extend(&mut self, depth: usize) -> Step {
        if depth == self.order.len() {
            return Step::Found;
        }
        let x = self.order[depth];
        let cand = self.candidates(depth);
        for c in cand.ones() {
            if self.gdeg[c] < self.hdeg[x] {
                continue;
            }
            if self.nodes >= self.budget {
                return Step::OutOfBudget;
            }
            self.nodes += 1;
            self.image[x] = c;
            self.used.insert(c);
            match self.extend(depth + 1) {
                Step::Exhausted => {}
                other => return other,
            }
            self.used.set(c, false);
        }
        self.image[x] = usize::MAX;
        Step::Exhausted
    }
}

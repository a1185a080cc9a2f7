use std::collections::VecDeque;

use num_rational::Rational64;

use crate::error::{Error, Result};

use super::Graph;

/// Graphs up to this order are handled by subset enumeration in
/// [`max_avg_degree_induced`]; larger ones go through the flow route.
pub const EXHAUSTIVE_DENSITY_CAP: usize = 20;

/// Maximum over nonempty induced subgraphs `H` of `2|E(H)| / |V(H)|`.
pub fn max_avg_degree_induced(g: &Graph) -> Result<Rational64> {
    if g.order() <= EXHAUSTIVE_DENSITY_CAP {
        max_avg_degree_exhaustive(g)
    } else {
        max_avg_degree_flow(g)
    }
}

/// Exhaustive version: visits every nonempty vertex subset in Gray-code order.
/// Accepts up to 26 vertices.
pub fn max_avg_degree_exhaustive(g: &Graph) -> Result<Rational64> {
    let n = g.order();
    if n == 0 {
        return Err(Error::InvalidParameter(
            "average degree of the empty graph is undefined".into(),
        ));
    }
    if n > 26 {
        return Err(Error::InstanceTooLarge {
            what: "exhaustive induced average degree",
            size: n,
            cap: 26,
        });
    }
    let adj = g.adjacency_masks("exhaustive induced average degree")?;
    let (mut best_e, mut best_v) = (0i64, 1i64);
    let (mut set, mut edges) = (0u64, 0i64);
    for step in 1u64..(1u64 << n) {
        let v = step.trailing_zeros() as usize;
        let bit = 1u64 << v;
        let touching = (adj[v] & set).count_ones() as i64;
        if set & bit == 0 {
            set |= bit;
            edges += touching;
        } else {
            set &= !bit;
            edges -= touching;
        }
        let size = set.count_ones() as i64;
        if size > 0 && edges * best_v > best_e * size {
            best_e = edges;
            best_v = size;
        }
    }
    Ok(Rational64::new(2 * best_e, best_v))
}

/// Flow version: exact densest subgraph by Dinkelbach iteration over
/// Goldberg's minimum-cut construction. The densest subgraph is always
/// induced, so twice its density is the answer.
pub fn max_avg_degree_flow(g: &Graph) -> Result<Rational64> {
    let n = g.order();
    if n == 0 {
        return Err(Error::InvalidParameter(
            "average degree of the empty graph is undefined".into(),
        ));
    }
    let m = g.size() as i64;
    if m == 0 {
        return Ok(Rational64::from_integer(0));
    }
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| {
            g.neighbors_pos(i)
                .ones()
                .filter(move |&j| j > i)
                .map(move |j| (i, j))
        })
        .collect();
    let degree: Vec<i64> = (0..n)
        .map(|i| g.neighbors_pos(i).count_ones(..) as i64)
        .collect();

    let mut density = Rational64::new(m, n as i64);
    loop {
        let (num, den) = (*density.numer(), *density.denom());
        let source = n;
        let sink = n + 1;
        let mut net = Dinic::new(n + 2);
        for i in 0..n {
            net.add_edge(source, i, m * den);
            net.add_edge(i, sink, m * den + 2 * num - degree[i] * den);
        }
        for &(i, j) in &edges {
            net.add_edge(i, j, den);
            net.add_edge(j, i, den);
        }
        net.max_flow(source, sink);
        let side = net.source_side(source);
        let chosen: Vec<usize> = (0..n).filter(|&i| side[i]).collect();
        if chosen.is_empty() {
            return Ok(density * 2);
        }
        let inside = edges
            .iter()
            .filter(|&&(i, j)| side[i] && side[j])
            .count() as i64;
        let candidate = Rational64::new(inside, chosen.len() as i64);
        if candidate <= density {
            return Ok(density * 2);
        }
        density = candidate;
    }
}

struct FlowEdge {
    to: usize,
    cap: i64,
}

struct Dinic {
    graph: Vec<Vec<usize>>,
    edges: Vec<FlowEdge>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Dinic {
    fn new(n: usize) -> Self {
        Dinic {
            graph: vec![Vec::new(); n],
            edges: Vec::new(),
            level: vec![0; n],
            iter: vec![0; n],
        }
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: i64) {
        self.graph[from].push(self.edges.len());
        self.edges.push(FlowEdge { to, cap });
        self.graph[to].push(self.edges.len());
        self.edges.push(FlowEdge { to: from, cap: 0 });
    }

    fn bfs(&mut self, s: usize) {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &e in &self.graph[v] {
                let FlowEdge { to, cap } = self.edges[e];
                if cap > 0 && self.level[to] < 0 {
                    self.level[to] = self.level[v] + 1;
                    queue.push_back(to);
                }
            }
        }
    }

    fn dfs(&mut self, v: usize, t: usize, f: i64) -> i64 {
        if v == t {
            return f;
        }
        while self.iter[v] < self.graph[v].len() {
            let e = self.graph[v][self.iter[v]];
            let FlowEdge { to, cap } = self.edges[e];
            if cap > 0 && self.level[v] < self.level[to] {
                let d = self.dfs(to, t, f.min(cap));
                if d > 0 {
                    self.edges[e].cap -= d;
                    self.edges[e ^ 1].cap += d;
                    return d;
                }
            }
            self.iter[v] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut flow = 0;
        loop {
            self.bfs(s);
            if self.level[t] < 0 {
                return flow;
            }
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, i64::MAX);
                if f == 0 {
                    break;
                }
                flow += f;
            }
        }
    }

    /// Vertices reachable from `s` in the residual network (after `max_flow`).
    fn source_side(&mut self, s: usize) -> Vec<bool> {
        self.bfs(s);
        self.level.iter().map(|&l| l >= 0).collect()
    }
}

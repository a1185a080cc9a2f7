use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{Graph, Label, VertexSet};

/// What a vertex of a gadget graph stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum Role {
    /// A vertex of the template.
    Branch,
    /// First middle vertex of the path replacing template edge `(i, j)`.
    U { edge: (Label, Label) },
    /// Second middle vertex, adjacent to `u` and on the `j` side.
    V { edge: (Label, Label) },
    /// Any other subdivision vertex; `position` counts from `i` (1-based).
    Internal { edge: (Label, Label), position: usize },
}

/// The subdivision of a template graph in which every edge `ij` becomes a
/// path with `2ℓ + 3` edges.
#[derive(Clone, Debug)]
pub struct GadgetGraph {
    graph: Graph,
    template: Graph,
    ell: usize,
    roles: BTreeMap<Label, Role>,
    /// Full path for each template edge, from `i` to `j` inclusive.
    paths: BTreeMap<(Label, Label), Vec<Label>>,
}

/// Builds the gadget graph of `template` with an even path parameter `ell`.
///
/// Template vertices keep their labels. Subdivision vertices get fresh labels
/// after the template's universe bound, edge by edge in lexicographic order,
/// each path listed from its smaller endpoint.
pub fn build_gadget(template: &Graph, ell: usize) -> Result<GadgetGraph> {
    if ell % 2 == 1 {
        return Err(Error::OddEll(ell));
    }
    let t_edges = template.edges();
    let internal_per_edge = 2 * ell + 2;
    let first_fresh = template.universe().max(template.labels().last().copied().unwrap_or(0)) + 1;
    let total_internal = internal_per_edge * t_edges.len();

    let mut labels: Vec<Label> = template.labels().to_vec();
    labels.extend(first_fresh..first_fresh + total_internal);
    let universe = if total_internal > 0 {
        first_fresh + total_internal - 1
    } else {
        template.universe()
    };
    let mut graph = Graph::with_sorted_labels(universe, labels);
    let mut roles: BTreeMap<Label, Role> =
        template.labels().iter().map(|&l| (l, Role::Branch)).collect();
    let mut paths = BTreeMap::new();

    let mut next = first_fresh;
    for &(i, j) in &t_edges {
        let mut path = Vec::with_capacity(internal_per_edge + 2);
        path.push(i);
        for position in 1..=internal_per_edge {
            let role = if position == ell + 1 {
                Role::U { edge: (i, j) }
            } else if position == ell + 2 {
                Role::V { edge: (i, j) }
            } else {
                Role::Internal {
                    edge: (i, j),
                    position,
                }
            };
            roles.insert(next, role);
            path.push(next);
            next += 1;
        }
        path.push(j);
        for w in path.windows(2) {
            let a = graph.position(w[0]).expect("path label present");
            let b = graph.position(w[1]).expect("path label present");
            graph.add_edge_pos(a, b);
        }
        paths.insert((i, j), path);
    }

    Ok(GadgetGraph {
        graph,
        template: template.clone(),
        ell,
        roles,
        paths,
    })
}

impl GadgetGraph {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn template(&self) -> &Graph {
        &self.template
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn roles(&self) -> &BTreeMap<Label, Role> {
        &self.roles
    }

    pub fn role(&self, label: Label) -> Option<Role> {
        self.roles.get(&label).copied()
    }

    /// Path replacing template edge `(i, j)`, `i < j`, endpoints included.
    pub fn path(&self, i: Label, j: Label) -> Option<&[Label]> {
        self.paths.get(&(i.min(j), i.max(j))).map(Vec::as_slice)
    }

    /// `u_ij` and `v_ij` for a template edge.
    pub fn middle(&self, i: Label, j: Label) -> Option<(Label, Label)> {
        self.path(i, j)
            .map(|p| (p[self.ell + 1], p[self.ell + 2]))
    }

    /// `|V(T)| + (2ℓ + 2)|E(T)|`.
    pub fn expected_order(&self) -> usize {
        self.template.order() + (2 * self.ell + 2) * self.template.size()
    }

    /// `(2ℓ + 3)|E(T)|`.
    pub fn expected_size(&self) -> usize {
        (2 * self.ell + 3) * self.template.size()
    }

    fn template_edges_in(&self, a: VertexSet) -> impl Iterator<Item = (&(Label, Label), &Vec<Label>)> {
        self.paths
            .iter()
            .filter(move |((i, j), _)| a.contains(*i) && a.contains(*j))
    }

    /// The induced copy of the gadget of `T[a]` inside this gadget.
    pub fn gadget_sub(&self, a: VertexSet) -> Result<Graph> {
        self.template.require_subset(a)?;
        let mut labels: Vec<Label> = a.iter().collect();
        for (_, path) in self.template_edges_in(a) {
            labels.extend(&path[1..path.len() - 1]);
        }
        self.graph.induced(labels)
    }

    /// The induced matching on all `u_ij, v_ij` with `ij` an edge of `T[a]`.
    pub fn gadget_small(&self, a: VertexSet) -> Result<Graph> {
        self.template.require_subset(a)?;
        let mut labels: Vec<Label> = Vec::new();
        for (_, path) in self.template_edges_in(a) {
            labels.push(path[self.ell + 1]);
            labels.push(path[self.ell + 2]);
        }
        self.graph.induced(labels)
    }

    /// The canonical stable set `S(b)` extending `b ⊆ V(T)`.
    ///
    /// On every path the two halves alternate starting from the branch vertex:
    /// a branch vertex in `b` keeps its path neighbour out, one outside `b`
    /// lets it in. When neither endpoint lies in `b` both middle vertices
    /// would enter; `v_ij` is dropped and `u_ij` kept. The result has
    /// `|b| + (ℓ + 1)|E(T)| − |E(T[b])|` vertices.
    pub fn extend_stable_set(&self, b: VertexSet) -> Result<VertexSet> {
        self.template.require_subset(b)?;
        let mut s = b;
        let half = self.ell + 1;
        for (&(i, j), path) in &self.paths {
            let (in_i, in_j) = (b.contains(i), b.contains(j));
            // Distance d from the branch vertex; taken iff parity matches.
            for d in 1..=half {
                let take_i = if in_i { d % 2 == 0 } else { d % 2 == 1 };
                if take_i {
                    s.insert(path[d])?;
                }
                let take_j = if in_j { d % 2 == 0 } else { d % 2 == 1 };
                let is_v = d == half;
                if take_j && !(is_v && !in_i && !in_j) {
                    s.insert(path[path.len() - 1 - d])?;
                }
            }
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::stability_number;

    fn set(labels: &[Label]) -> VertexSet {
        VertexSet::from_labels(labels.iter().copied()).unwrap()
    }

    #[test]
    fn k2_ell0_is_a_path() {
        let gg = build_gadget(&Graph::complete(2), 0).unwrap();
        assert_eq!(gg.graph().order(), 4);
        assert_eq!(gg.graph().size(), 3);
        let (u, v) = gg.middle(1, 2).unwrap();
        assert_eq!(gg.role(u), Some(Role::U { edge: (1, 2) }));
        assert_eq!(gg.role(v), Some(Role::V { edge: (1, 2) }));
        assert!(gg.graph().has_edge(1, u) && gg.graph().has_edge(u, v) && gg.graph().has_edge(v, 2));
    }

    #[test]
    fn k3_counts() {
        let g0 = build_gadget(&Graph::complete(3), 0).unwrap();
        assert_eq!((g0.graph().order(), g0.graph().size()), (9, 9));
        // C_9: connected and 2-regular.
        assert!(g0.graph().labels().iter().all(|&l| g0.graph().degree(l) == Some(2)));
        assert_eq!(stability_number(g0.graph()).unwrap(), 4);
        let g2 = build_gadget(&Graph::complete(3), 2).unwrap();
        assert_eq!((g2.graph().order(), g2.graph().size()), (21, 21));
        assert_eq!(g2.path(1, 3).unwrap().len(), 8);
    }

    #[test]
    fn odd_ell_rejected() {
        assert!(matches!(
            build_gadget(&Graph::complete(2), 1),
            Err(Error::OddEll(1))
        ));
    }

    #[test]
    fn template_vertices_become_independent() {
        let gg = build_gadget(&Graph::complete(4), 2).unwrap();
        let t = gg.graph().induced([1, 2, 3, 4]).unwrap();
        assert_eq!(t.size(), 0);
    }

    #[test]
    fn sub_and_small_gadgets() {
        let gg = build_gadget(&Graph::complete(3), 0).unwrap();
        let sub = gg.gadget_sub(set(&[1, 2])).unwrap();
        let small = gg.gadget_small(set(&[1, 2])).unwrap();
        assert_eq!((sub.order(), sub.size()), (4, 3));
        assert_eq!((small.order(), small.size()), (2, 1));

        let single = gg.gadget_sub(set(&[1])).unwrap();
        assert_eq!((single.order(), single.size()), (1, 0));
        assert_eq!(gg.gadget_small(set(&[1])).unwrap().order(), 0);

        let full = gg.gadget_sub(set(&[1, 2, 3])).unwrap();
        assert_eq!(full, *gg.graph());
        let matching = gg.gadget_small(set(&[1, 2, 3])).unwrap();
        assert_eq!((matching.order(), matching.size()), (6, 3));
        assert_eq!(stability_number(&matching).unwrap(), 3);

        assert!(gg.gadget_sub(set(&[7])).is_err());
    }

    #[test]
    fn extension_on_single_edge() {
        let gg = build_gadget(&Graph::complete(2), 0).unwrap();
        let (u, v) = gg.middle(1, 2).unwrap();
        let empty = gg.extend_stable_set(VertexSet::empty()).unwrap();
        assert_eq!(empty, set(&[u]));
        assert_eq!(gg.extend_stable_set(set(&[1])).unwrap(), set(&[1, v]));
        assert_eq!(gg.extend_stable_set(set(&[2])).unwrap(), set(&[u, 2]));
        assert_eq!(gg.extend_stable_set(set(&[1, 2])).unwrap(), set(&[1, 2]));
    }

    #[test]
    fn extension_with_longer_paths() {
        let gg = build_gadget(&Graph::complete(3), 2).unwrap();
        for mask in 0u128..8 {
            let b = VertexSet::from_bits(mask << 1);
            let s = gg.extend_stable_set(b).unwrap();
            assert!(gg.graph().is_stable(s), "S({b}) not stable");
            let expected = b.len() + 3 * 3 - gg.template().edges_within(b);
            assert_eq!(s.len(), expected);
            assert_eq!(s.intersection(set(&[1, 2, 3])), b);
        }
    }
}

//! Simple undirected graphs and the distance, neighborhood, component and
//! separator primitives the decomposition algorithms are built from.
//!
//! Vertices are dense labels `0..vertex_count`. Every vertex set is kept in
//! ascending label order, which fixes all tie-breaks downstream.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

/// An ordered set of vertex labels, iterated in ascending order.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    /// Builds a set from arbitrary labels, sorting and dropping duplicates.
    pub fn from_unsorted(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        VertexSet(members)
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(vec![v])
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn least(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn insert(&mut self, v: usize) -> bool {
        match self.0.binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.0.insert(pos, v);
                true
            }
        }
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(self.0[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        VertexSet(out)
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|&v| other.contains(v)).collect())
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|&v| !other.contains(v)).collect())
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| !other.contains(v))
    }

    /// Membership mask over `0..n`.
    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for v in self.iter() {
            mask[v] = true;
        }
        mask
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::from_unsorted(iter.into_iter().collect())
    }
}

impl From<Vec<usize>> for VertexSet {
    fn from(members: Vec<usize>) -> Self {
        VertexSet::from_unsorted(members)
    }
}

impl<const N: usize> From<[usize; N]> for VertexSet {
    fn from(members: [usize; N]) -> Self {
        VertexSet::from_unsorted(members.to_vec())
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Result of a distance query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(usize),
    Unreachable,
}

impl Distance {
    pub fn finite(self) -> Option<usize> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Unreachable => None,
        }
    }
}

/// Undirected simple graph on vertices `0..vertex_count`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn empty(vertex_count: usize) -> Self {
        Graph {
            adjacency: vec![Vec::new(); vertex_count],
            edges: Vec::new(),
        }
    }

    /// Builds a graph, rejecting self-loops, duplicate edges and labels out
    /// of range. Edge orientation is irrelevant.
    pub fn from_edges(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut normalized = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(Error::InvalidVertex {
                        vertex: w,
                        vertex_count,
                    });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        if let Some(w) = normalized.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].0, w[0].1));
        }
        let mut adjacency = vec![Vec::new(); vertex_count];
        for &(u, v) in &normalized {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Graph {
            adjacency,
            edges: normalized,
        })
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).expect("path edges are valid")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least three vertices");
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        edges.push((0, n - 1));
        Graph::from_edges(n, &edges).expect("cycle edges are valid")
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, &edges).expect("clique edges are valid")
    }

    /// Star with center 0 and leaves `1..=leaves`.
    pub fn star(leaves: usize) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Graph::from_edges(leaves + 1, &edges).expect("star edges are valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(min, max)` pairs in ascending order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.adjacency.len() && self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet((0..self.vertex_count()).collect())
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::InvalidVertex {
                vertex: v,
                vertex_count: self.vertex_count(),
            })
        }
    }

    pub fn check_set(&self, s: &VertexSet) -> Result<()> {
        s.iter().try_for_each(|v| self.check_vertex(v))
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components(&VertexSet::new()).len() <= 1
    }

    /// Shortest-path length between `u` and `v`.
    pub fn distance(&self, u: usize, v: usize) -> Result<Distance> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok(self.distances_from(&VertexSet::singleton(u))[v])
    }

    /// `min_{s in set} distance(s, u)`.
    pub fn set_distance(&self, set: &VertexSet, u: usize) -> Result<Distance> {
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        self.check_set(set)?;
        self.check_vertex(u)?;
        Ok(self.distances_from(set)[u])
    }

    /// Multi-source BFS distances from `sources` to every vertex.
    pub fn distances_from(&self, sources: &VertexSet) -> Vec<Distance> {
        let mut dist = vec![Distance::Unreachable; self.vertex_count()];
        let mut queue = VecDeque::new();
        for s in sources.iter() {
            dist[s] = Distance::Finite(0);
            queue.push_back(s);
        }
        while let Some(u) = queue.pop_front() {
            let Distance::Finite(du) = dist[u] else {
                unreachable!()
            };
            for &w in self.neighbors(u) {
                if dist[w] == Distance::Unreachable {
                    dist[w] = Distance::Finite(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Open neighborhood of a set: vertices adjacent to some member of `set`
    /// that are not themselves members.
    pub fn neighbors_of_set(&self, set: &VertexSet) -> VertexSet {
        let mut out = Vec::new();
        for v in set.iter() {
            out.extend(self.neighbors(v).iter().copied().filter(|&w| !set.contains(w)));
        }
        VertexSet::from_unsorted(out)
    }

    /// Connected components of the graph induced on `V \ removed`, sorted by
    /// smallest member.
    pub fn connected_components(&self, removed: &VertexSet) -> Vec<VertexSet> {
        let n = self.vertex_count();
        let mut blocked = removed.mask(n);
        let mut components = Vec::new();
        for start in 0..n {
            if blocked[start] {
                continue;
            }
            blocked[start] = true;
            let mut members = vec![start];
            let mut head = 0;
            while head < members.len() {
                let u = members[head];
                head += 1;
                for &w in self.neighbors(u) {
                    if !blocked[w] {
                        blocked[w] = true;
                        members.push(w);
                    }
                }
            }
            components.push(VertexSet::from_unsorted(members));
        }
        components
    }

    /// Whether `target` can be reached from some vertex of `source \ forbidden`
    /// along a path avoiding `forbidden`.
    pub fn reachable_avoiding(
        &self,
        source: &VertexSet,
        target: usize,
        forbidden: &VertexSet,
    ) -> Result<bool> {
        self.check_vertex(target)?;
        self.check_set(source)?;
        if forbidden.contains(target) {
            return Err(Error::InvalidQuery(target));
        }
        Ok(self.reach_mask(source, forbidden)[target])
    }

    /// Vertices reachable from `source \ forbidden` in `G \ forbidden`.
    pub(crate) fn reach_mask(&self, source: &VertexSet, forbidden: &VertexSet) -> Vec<bool> {
        let n = self.vertex_count();
        let blocked = forbidden.mask(n);
        let mut seen = vec![false; n];
        let mut stack: Vec<usize> = source.iter().filter(|&s| !blocked[s]).collect();
        for &s in &stack {
            seen[s] = true;
        }
        while let Some(u) = stack.pop() {
            for &w in self.neighbors(u) {
                if !blocked[w] && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Bipartite subgraph `B[U, W]` with the edges running between the sides.
    pub fn induced_bipartite(&self, u_side: &VertexSet, w_side: &VertexSet) -> Result<Bipartite> {
        self.check_set(u_side)?;
        self.check_set(w_side)?;
        if let Some(v) = u_side.iter().find(|&v| w_side.contains(v)) {
            return Err(Error::InvalidBipartition(v));
        }
        let mut edges = Vec::new();
        for u in u_side.iter() {
            for &w in self.neighbors(u) {
                if w_side.contains(w) {
                    edges.push((u.min(w), u.max(w)));
                }
            }
        }
        edges.sort_unstable();
        Ok(Bipartite {
            u_side: u_side.clone(),
            w_side: w_side.clone(),
            edges,
        })
    }

    /// Subgraph induced on `keep`, relabeled to `0..keep.len()` in ascending
    /// order. The returned map sends new labels back to old ones.
    pub fn induced_subgraph(&self, keep: &VertexSet) -> Result<(Graph, LabelMap)> {
        self.check_set(keep)?;
        let n = self.vertex_count();
        let mut new_label = vec![usize::MAX; n];
        for (i, v) in keep.iter().enumerate() {
            new_label[v] = i;
        }
        let mut edges = Vec::new();
        for &(u, v) in &self.edges {
            if new_label[u] != usize::MAX && new_label[v] != usize::MAX {
                edges.push((new_label[u], new_label[v]));
            }
        }
        let sub = Graph::from_edges(keep.len(), &edges).expect("induced edges stay simple");
        Ok((
            sub,
            LabelMap {
                to_old: keep.as_slice().to_vec(),
            },
        ))
    }

    /// Subgraph induced on the complement of `removed`.
    pub fn without(&self, removed: &VertexSet) -> (Graph, LabelMap) {
        let keep = self.vertices().difference(removed);
        self.induced_subgraph(&keep).expect("complement is in range")
    }
}

/// Old/new label correspondence produced by [`Graph::induced_subgraph`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMap {
    to_old: Vec<usize>,
}

impl LabelMap {
    pub fn to_old(&self, new: usize) -> usize {
        self.to_old[new]
    }

    pub fn to_new(&self, old: usize) -> Option<usize> {
        self.to_old.binary_search(&old).ok()
    }

    pub fn len(&self) -> usize {
        self.to_old.len()
    }

    pub fn is_empty(&self) -> bool {
        self.to_old.is_empty()
    }

    pub fn old_labels(&self) -> &[usize] {
        &self.to_old
    }
}

/// A bipartite subgraph `B[U, W]` tagged with its sides. Edges keep the
/// labels of the host graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartite {
    pub u_side: VertexSet,
    pub w_side: VertexSet,
    pub edges: Vec<(usize, usize)>,
}

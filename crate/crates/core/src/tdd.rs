//! Minimal tree distance decompositions.
//!
//! A tree distance decomposition partitions the vertices into bags arranged
//! in a rooted tree so that the depth of a bag equals the graph distance of
//! its members from the root bag, and every edge joins vertices of the same
//! or of tree-adjacent bags. For every root set there is exactly one
//! decomposition in which every subtree's bags induce a connected subgraph.
//!
//! Two constructions are provided: [`build_minimal_tdd`] works level by level
//! with breadth-first search, and [`traverse_minimal_tdd`] walks the tree
//! depth-first using only the [`parent_bag`], [`first_child`] and
//! [`next_sibling`] queries, recomputing reachability each time. Both emit
//! bags in the same depth-first discovery order.

use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::graph::{Distance, Graph, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDistanceDecomposition {
    bags: Vec<VertexSet>,
    parent: Vec<usize>,
    children: Vec<Vec<usize>>,
    depth: Vec<usize>,
    root: usize,
}

impl TreeDistanceDecomposition {
    /// Assembles a decomposition from bags and parent pointers (`None` marks
    /// the root). Depths are tree distances from the root. Only the tree
    /// shape is checked here; use [`validate_tdd`] for the graph properties.
    pub fn from_parts(bags: Vec<VertexSet>, parent: Vec<Option<usize>>) -> Result<Self> {
        if bags.is_empty() || bags.len() != parent.len() {
            return Err(Error::InvalidDecomposition(
                "need one parent entry per bag and at least one bag".into(),
            ));
        }
        let roots: Vec<usize> = (0..bags.len()).filter(|&i| parent[i].is_none()).collect();
        let [root] = roots[..] else {
            return Err(Error::InvalidDecomposition(format!(
                "expected exactly one root, found {}",
                roots.len()
            )));
        };
        let mut children = vec![Vec::new(); bags.len()];
        for (i, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                if p >= bags.len() {
                    return Err(Error::InvalidDecomposition(format!(
                        "bag {i} has unknown parent {p}"
                    )));
                }
                children[p].push(i);
            }
        }
        let mut depth = vec![usize::MAX; bags.len()];
        depth[root] = 0;
        let mut stack = vec![root];
        while let Some(a) = stack.pop() {
            for &c in &children[a] {
                depth[c] = depth[a] + 1;
                stack.push(c);
            }
        }
        if depth.contains(&usize::MAX) {
            return Err(Error::InvalidDecomposition(
                "parent pointers contain a cycle".into(),
            ));
        }
        let parent = parent
            .iter()
            .enumerate()
            .map(|(i, p)| p.unwrap_or(i))
            .collect();
        Ok(TreeDistanceDecomposition {
            bags,
            parent,
            children,
            depth,
            root,
        })
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn bag_count(&self) -> usize {
        self.bags.len()
    }

    pub fn bag(&self, i: usize) -> &VertexSet {
        &self.bags[i]
    }

    pub fn bags(&self) -> &[VertexSet] {
        &self.bags
    }

    /// Parent bag id; `None` for the root.
    pub fn parent(&self, i: usize) -> Option<usize> {
        (i != self.root).then_some(self.parent[i])
    }

    pub fn children(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    pub fn depth(&self, i: usize) -> usize {
        self.depth[i]
    }

    /// Largest bag size.
    pub fn width(&self) -> usize {
        self.bags.iter().map(VertexSet::len).max().unwrap_or(0)
    }

    /// Bags of the subtree rooted at `i`, in preorder.
    pub fn subtree(&self, i: usize) -> Vec<usize> {
        let mut order = Vec::new();
        let mut stack = vec![i];
        while let Some(a) = stack.pop() {
            order.push(a);
            stack.extend(self.children[a].iter().rev());
        }
        order
    }

    /// Union of the bags in the subtree rooted at `i`.
    pub fn subtree_vertices(&self, i: usize) -> VertexSet {
        self.subtree(i)
            .into_iter()
            .flat_map(|a| self.bags[a].iter())
            .collect()
    }

    /// One record per bag in ascending bag id.
    pub fn records(&self) -> Vec<DecompositionRecord> {
        (0..self.bag_count())
            .map(|i| DecompositionRecord {
                bag_id: i,
                bag_depth: self.depth[i],
                vertices: self.bags[i].as_slice().to_vec(),
            })
            .collect()
    }

    /// The decomposition as a set of `(bag, parent bag)` pairs, independent
    /// of bag numbering.
    pub fn shape(&self) -> Vec<(VertexSet, Option<VertexSet>)> {
        let mut pairs: Vec<_> = (0..self.bag_count())
            .map(|i| (self.bags[i].clone(), self.parent(i).map(|p| self.bags[p].clone())))
            .collect();
        pairs.sort();
        pairs
    }
}

/// One output line of the decomposition: bag id, depth and members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionRecord {
    pub bag_id: usize,
    pub bag_depth: usize,
    pub vertices: Vec<usize>,
}

impl fmt::Display for DecompositionRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b {} {}", self.bag_id, self.bag_depth)?;
        for v in &self.vertices {
            write!(f, " {v}")?;
        }
        Ok(())
    }
}

fn check_root_set(g: &Graph, s: &VertexSet) -> Result<()> {
    if s.is_empty() {
        return Err(Error::EmptySet);
    }
    g.check_set(s)
}

/// Parent bag of the bag `x` in the minimal decomposition rooted at `s`.
///
/// The neighbors of `x` that are still reachable from `s` once `x` is
/// removed lie in the parent bag. They need not fill it, so the rest of the
/// parent bag is recovered as the vertices at the same distance that are
/// connected to them through vertices at least as far from `s`.
pub fn parent_bag(g: &Graph, s: &VertexSet, x: &VertexSet) -> Result<VertexSet> {
    check_root_set(g, s)?;
    g.check_set(x)?;
    if x == s {
        return Err(Error::RootHasNoParent);
    }
    let reach = g.reach_mask(s, x);
    let attach: VertexSet = g
        .neighbors_of_set(x)
        .iter()
        .filter(|&v| reach[v])
        .collect();
    let Some(anchor) = attach.least() else {
        return Err(Error::InvalidDecomposition(format!(
            "{x} is not a bag of the decomposition rooted at {s}"
        )));
    };
    if attach.iter().any(|v| s.contains(v)) {
        return Ok(s.clone());
    }
    let dist = g.distances_from(s);
    let Distance::Finite(level) = dist[anchor] else {
        unreachable!("anchor was reached from s")
    };
    let shallower: VertexSet = (0..g.vertex_count())
        .filter(|&v| dist[v].finite().is_none_or(|d| d < level))
        .collect();
    let region = g.reach_mask(&VertexSet::singleton(anchor), &shallower);
    Ok((0..g.vertex_count())
        .filter(|&v| region[v] && dist[v] == Distance::Finite(level))
        .collect())
}

/// All children of bag `x`, ordered by least member.
fn children_of(g: &Graph, s: &VertexSet, x: &VertexSet) -> Vec<VertexSet> {
    let reach = g.reach_mask(s, x);
    let mut pending: Vec<usize> = g
        .neighbors_of_set(x)
        .iter()
        .filter(|&v| !reach[v])
        .collect();
    let mut out = Vec::new();
    while let Some(&first) = pending.first() {
        let component = g.reach_mask(&VertexSet::singleton(first), x);
        let (bag, rest): (Vec<usize>, Vec<usize>) =
            pending.into_iter().partition(|&v| component[v]);
        out.push(VertexSet::from(bag));
        pending = rest;
    }
    out
}

/// First child of `x`: the child holding the least-labeled neighbor of `x`
/// that `x` cuts off from `s`. `None` when `x` is a leaf.
pub fn first_child(g: &Graph, s: &VertexSet, x: &VertexSet) -> Result<Option<VertexSet>> {
    check_root_set(g, s)?;
    g.check_set(x)?;
    let reach = g.reach_mask(s, x);
    let Some(v) = g.neighbors_of_set(x).iter().find(|&v| !reach[v]) else {
        return Ok(None);
    };
    let component = g.reach_mask(&VertexSet::singleton(v), x);
    Ok(Some(
        g.neighbors_of_set(x)
            .iter()
            .filter(|&w| !reach[w] && component[w])
            .collect(),
    ))
}

/// Sibling of `x` whose least member is the next larger least member among
/// the children of `x`'s parent. `None` when `x` is the last child.
pub fn next_sibling(g: &Graph, s: &VertexSet, x: &VertexSet) -> Result<Option<VertexSet>> {
    let parent = parent_bag(g, s, x)?;
    let least = x.least().ok_or(Error::EmptySet)?;
    Ok(children_of(g, s, &parent)
        .into_iter()
        .find(|c| c.least().is_some_and(|m| m > least)))
}

fn check_buildable(g: &Graph, s: &VertexSet) -> Result<()> {
    check_root_set(g, s)?;
    if !g.is_connected() {
        return Err(Error::DisconnectedGraph);
    }
    Ok(())
}

/// The unique minimal tree distance decomposition of `g` with root bag `s`.
///
/// Below the root, the bags at depth `d` are the depth-`d` vertices of each
/// connected component of the subgraph induced by vertices at distance at
/// least `d`. Bag ids follow depth-first discovery order with children
/// visited by least member, so id 0 is the root.
pub fn build_minimal_tdd(g: &Graph, s: &VertexSet) -> Result<TreeDistanceDecomposition> {
    check_buildable(g, s)?;
    let n = g.vertex_count();
    let dist: Vec<usize> = g
        .distances_from(s)
        .into_iter()
        .map(|d| d.finite().expect("graph is connected"))
        .collect();
    let max_depth = dist.iter().copied().max().unwrap_or(0);

    // Level bags with their parents, before renumbering.
    let mut level_bag = vec![usize::MAX; n];
    let mut bags: Vec<VertexSet> = vec![s.clone()];
    let mut parents: Vec<Option<usize>> = vec![None];
    for v in s.iter() {
        level_bag[v] = 0;
    }
    for level in 1..=max_depth {
        let shallower: VertexSet = (0..n).filter(|&v| dist[v] < level).collect();
        for component in g.connected_components(&shallower) {
            let bag: VertexSet = component.iter().filter(|&v| dist[v] == level).collect();
            let member = bag.least().expect("every deeper component meets its top level");
            let up = g
                .neighbors(member)
                .iter()
                .copied()
                .find(|&w| dist[w] + 1 == level)
                .expect("a vertex at positive depth has a shallower neighbor");
            let id = bags.len();
            for v in bag.iter() {
                level_bag[v] = id;
            }
            parents.push(Some(level_bag[up]));
            bags.push(bag);
        }
    }

    let mut children = vec![Vec::new(); bags.len()];
    for (i, p) in parents.iter().enumerate() {
        if let Some(p) = *p {
            children[p].push(i);
        }
    }
    for list in &mut children {
        list.sort_by_key(|&c| bags[c].least());
    }
    let mut order = Vec::with_capacity(bags.len());
    let mut stack = vec![0];
    while let Some(a) = stack.pop() {
        order.push(a);
        stack.extend(children[a].iter().rev());
    }
    let mut new_id = vec![0; bags.len()];
    for (id, &old) in order.iter().enumerate() {
        new_id[old] = id;
    }
    let ordered_bags = order.iter().map(|&old| bags[old].clone()).collect();
    let ordered_parents = order
        .iter()
        .map(|&old| parents[old].map(|p| new_id[p]))
        .collect();
    TreeDistanceDecomposition::from_parts(ordered_bags, ordered_parents)
}

/// Builds the same decomposition as [`build_minimal_tdd`] by a depth-first
/// walk that only ever holds the current bag and queries [`first_child`],
/// [`next_sibling`] and [`parent_bag`].
pub fn traverse_minimal_tdd(g: &Graph, s: &VertexSet) -> Result<TreeDistanceDecomposition> {
    check_buildable(g, s)?;
    let mut bags = vec![s.clone()];
    let mut parents = vec![None];
    // (bag, id) along the current root path.
    let mut path: Vec<(VertexSet, usize)> = vec![(s.clone(), 0)];
    loop {
        let (current, id) = path.last().expect("path holds the root").clone();
        if let Some(child) = first_child(g, s, &current)? {
            bags.push(child.clone());
            parents.push(Some(id));
            path.push((child, bags.len() - 1));
            continue;
        }
        loop {
            let (current, _) = path.pop().expect("path holds the root");
            if path.is_empty() {
                return TreeDistanceDecomposition::from_parts(bags, parents);
            }
            if let Some(sibling) = next_sibling(g, s, &current)? {
                let parent_id = path.last().expect("non-root bag has a parent").1;
                bags.push(sibling.clone());
                parents.push(Some(parent_id));
                path.push((sibling, bags.len() - 1));
                break;
            }
        }
    }
}

/// A violated decomposition property, with a witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TddViolation {
    /// A vertex lies in `occurrences` bags instead of exactly one.
    NotPartition { vertex: usize, occurrences: usize },
    /// A vertex's distance from the root bag differs from its bag depth.
    DepthMismatch {
        vertex: usize,
        bag: usize,
        distance: Distance,
        depth: usize,
    },
    /// An edge joins two bags that are neither equal nor tree-adjacent.
    EdgeNotLocal { edge: (usize, usize), bags: (usize, usize) },
    /// The subtree under `bag` does not induce a connected subgraph.
    NotMinimal { bag: usize },
    /// A bag refers to a vertex outside the graph.
    UnknownVertex { vertex: usize, bag: usize },
}

/// Checks partition, depth, edge-locality and minimality. An empty list
/// means the decomposition is a valid minimal tree distance decomposition.
pub fn validate_tdd(g: &Graph, d: &TreeDistanceDecomposition) -> Vec<TddViolation> {
    let n = g.vertex_count();
    let mut violations = Vec::new();
    let mut home = vec![usize::MAX; n];
    let mut occurrences = vec![0usize; n];
    for (i, bag) in d.bags().iter().enumerate() {
        for v in bag.iter() {
            if v >= n {
                violations.push(TddViolation::UnknownVertex { vertex: v, bag: i });
                continue;
            }
            occurrences[v] += 1;
            home[v] = i;
        }
    }
    for (v, &count) in occurrences.iter().enumerate() {
        if count != 1 {
            violations.push(TddViolation::NotPartition {
                vertex: v,
                occurrences: count,
            });
        }
    }
    if !violations.is_empty() {
        return violations;
    }

    let dist = g.distances_from(d.bag(d.root()));
    for v in 0..n {
        let bag = home[v];
        if dist[v] != Distance::Finite(d.depth(bag)) {
            violations.push(TddViolation::DepthMismatch {
                vertex: v,
                bag,
                distance: dist[v],
                depth: d.depth(bag),
            });
        }
    }
    for &(u, v) in g.edges() {
        let (a, b) = (home[u], home[v]);
        let local = a == b || d.parent(a) == Some(b) || d.parent(b) == Some(a);
        if !local {
            violations.push(TddViolation::EdgeNotLocal {
                edge: (u, v),
                bags: (a, b),
            });
        }
    }
    for i in 0..d.bag_count() {
        let members = d.subtree_vertices(i);
        let outside = g.vertices().difference(&members);
        if g.connected_components(&outside).len() > 1 {
            violations.push(TddViolation::NotMinimal { bag: i });
        }
    }
    violations
}

/// Tree distance width of `g`, searched over root sets of size at most
/// `k_max`. `None` when every such root set yields a wider decomposition.
pub fn tree_distance_width(g: &Graph, k_max: usize) -> Result<Option<usize>> {
    if !g.is_connected() {
        return Err(Error::DisconnectedGraph);
    }
    Ok(root_sets(g, k_max)
        .filter_map(|s| {
            let width = build_minimal_tdd(g, &s).expect("root set is valid").width();
            (width <= k_max).then_some(width)
        })
        .min())
}

/// Root sets of size `1..=k` in size-then-lexicographic order.
pub fn root_sets(g: &Graph, k: usize) -> impl Iterator<Item = VertexSet> + '_ {
    let n = g.vertex_count();
    (1..=k.min(n)).flat_map(move |size| (0..n).combinations(size).map(VertexSet::from))
}

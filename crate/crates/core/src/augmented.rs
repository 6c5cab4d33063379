//! Augmented trees: the bag tree of a minimal tree distance decomposition
//! with a separator node inserted between every bag and its children.
//!
//! Under each bag node sit the distinct minimum separating sets
//! `X_a ∩ Γ(X_b)` of its children `b`; each child bag hangs below the
//! separator node holding its own set. Bag levels and separator levels
//! therefore alternate.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Graph, LabelMap, VertexSet};
use crate::tdd::{validate_tdd, TreeDistanceDecomposition};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeKind {
    /// A bag of the decomposition, by bag id.
    Bag(usize),
    /// A minimum separating set inside the parent bag.
    Sep,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugNode {
    pub kind: NodeKind,
    pub vertices: VertexSet,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

impl AugNode {
    pub fn is_bag(&self) -> bool {
        matches!(self.kind, NodeKind::Bag(_))
    }
}

#[derive(Debug, Clone)]
pub struct AugmentedTree {
    graph: Graph,
    nodes: Vec<AugNode>,
    /// Vertices associated with some node of each subtree.
    covered: Vec<VertexSet>,
}

/// Names the subtree rooted at one node of an augmented tree.
#[derive(Debug, Clone, Copy)]
pub struct SubtreeHandle<'a> {
    pub tree: &'a AugmentedTree,
    pub node: usize,
}

/// Builds the augmented tree of `g` over the minimal decomposition `d`.
///
/// Separator nodes under one bag are ordered by their sorted contents and
/// children under a separator by bag id, which is the base order used for
/// serialization.
pub fn build_augmented_tree(g: &Graph, d: &TreeDistanceDecomposition) -> Result<AugmentedTree> {
    let violations = validate_tdd(g, d);
    if let Some(first) = violations.first() {
        return Err(Error::InvalidDecomposition(format!("{first:?}")));
    }
    let mut nodes = Vec::new();
    push_bag(g, d, d.root(), None, &mut nodes);
    let mut covered = vec![VertexSet::new(); nodes.len()];
    for i in (0..nodes.len()).rev() {
        let mut set = nodes[i].vertices.clone();
        for &c in &nodes[i].children {
            set = set.union(&covered[c]);
        }
        covered[i] = set;
    }
    Ok(AugmentedTree {
        graph: g.clone(),
        nodes,
        covered,
    })
}

fn push_bag(
    g: &Graph,
    d: &TreeDistanceDecomposition,
    bag: usize,
    parent: Option<usize>,
    nodes: &mut Vec<AugNode>,
) -> usize {
    let id = nodes.len();
    nodes.push(AugNode {
        kind: NodeKind::Bag(bag),
        vertices: d.bag(bag).clone(),
        parent,
        children: Vec::new(),
    });
    let mut groups: Vec<(VertexSet, Vec<usize>)> = Vec::new();
    for &child in d.children(bag) {
        let separator = d.bag(bag).intersection(&g.neighbors_of_set(d.bag(child)));
        match groups.iter_mut().find(|(set, _)| *set == separator) {
            Some((_, members)) => members.push(child),
            None => groups.push((separator, vec![child])),
        }
    }
    groups.sort();
    for (separator, members) in groups {
        let sep_id = nodes.len();
        nodes[id].children.push(sep_id);
        nodes.push(AugNode {
            kind: NodeKind::Sep,
            vertices: separator,
            parent: Some(id),
            children: Vec::new(),
        });
        for child in members {
            let child_id = push_bag(g, d, child, Some(sep_id), nodes);
            nodes[sep_id].children.push(child_id);
        }
    }
    id
}

impl AugmentedTree {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn node(&self, i: usize) -> &AugNode {
        &self.nodes[i]
    }

    pub fn nodes(&self) -> &[AugNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn handle(&self, node: usize) -> SubtreeHandle<'_> {
        assert!(node < self.nodes.len(), "node {node} out of range");
        SubtreeHandle { tree: self, node }
    }

    pub fn root_handle(&self) -> SubtreeHandle<'_> {
        self.handle(self.root())
    }

    /// Vertices associated with a node of the subtree rooted at `node`.
    pub fn subtree_vertices(&self, node: usize) -> &VertexSet {
        &self.covered[node]
    }

    pub fn subtree_size(&self, node: usize) -> usize {
        self.covered[node].len()
    }

    fn write_node(&self, i: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let node = &self.nodes[i];
        let tag = if node.is_bag() { 'B' } else { 'S' };
        write!(f, "{tag}(")?;
        for (j, v) in node.vertices.iter().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")?;
        if !node.children.is_empty() {
            write!(f, "[")?;
            for (j, &c) in node.children.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                self.write_node(c, f)?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

/// Parenthesized text form: `B(...)` for bags, `S(...)` for separators,
/// children in brackets in base order.
impl fmt::Display for AugmentedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_node(self.root(), f)
    }
}

impl<'a> SubtreeHandle<'a> {
    pub fn node(&self) -> &'a AugNode {
        self.tree.node(self.node)
    }

    pub fn is_bag(&self) -> bool {
        self.node().is_bag()
    }
}

/// Subgraph induced by the vertices associated with the subtree's nodes.
pub fn subtree_graph(h: SubtreeHandle<'_>) -> (Graph, LabelMap) {
    h.tree
        .graph
        .induced_subgraph(h.tree.subtree_vertices(h.node))
        .expect("subtree vertices belong to the graph")
}

/// Number of distinct vertices associated with the subtree's nodes.
pub fn subtree_size(h: SubtreeHandle<'_>) -> usize {
    h.tree.subtree_size(h.node)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tdd::build_minimal_tdd;

    fn tree(g: &Graph, root: &[usize]) -> AugmentedTree {
        let d = build_minimal_tdd(g, &VertexSet::from(root.to_vec())).unwrap();
        build_augmented_tree(g, &d).unwrap()
    }

    #[test]
    fn path_is_a_chain() {
        let t = tree(&Graph::path(3), &[0]);
        assert_eq!(t.to_string(), "B(0)[S(0)[B(1)[S(1)[B(2)]]]]");
    }

    #[test]
    fn spider_shares_one_separator() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 3), (0, 2), (2, 4)]).unwrap();
        let t = tree(&g, &[0]);
        assert_eq!(t.to_string(), "B(0)[S(0)[B(1)[S(1)[B(3)]],B(2)[S(2)[B(4)]]]]");
        assert_eq!(t.node(0).children.len(), 1);
    }

    #[test]
    fn single_bag_has_no_separators() {
        let k3 = Graph::complete(3);
        let t = tree(&k3, &[0, 1, 2]);
        assert_eq!(t.len(), 1);
        assert_eq!(t.to_string(), "B(0,1,2)");
    }

    #[test]
    fn distinct_separators_are_sorted() {
        // Root {0, 1}; 2 hangs off 0 only, 3 off 1 only, 4 off both.
        let g = Graph::from_edges(5, &[(0, 1), (0, 2), (1, 3), (0, 4), (1, 4)]).unwrap();
        let t = tree(&g, &[0, 1]);
        assert_eq!(t.to_string(), "B(0,1)[S(0)[B(2)],S(0,1)[B(4)],S(1)[B(3)]]");
    }

    #[test]
    fn subtree_graph_examples() {
        let g = Graph::path(3);
        let t = tree(&g, &[0]);
        let (whole, _) = subtree_graph(t.root_handle());
        assert_eq!(whole, g);
        let leaf = t.len() - 1;
        let (single, map) = subtree_graph(t.handle(leaf));
        assert_eq!((single.vertex_count(), map.to_old(0)), (1, 2));

        let c4 = Graph::cycle(4);
        let t = tree(&c4, &[0]);
        let sep = t.node(0).children[0];
        assert!(!t.node(sep).is_bag());
        let (sub, map) = subtree_graph(t.handle(sep));
        assert_eq!(map.old_labels(), &[0, 1, 2, 3]);
        assert_eq!(sub, c4);
        assert_eq!(subtree_size(t.handle(sep)), 4);
        assert_eq!(subtree_size(t.root_handle()), 4);
    }

    #[test]
    fn rejects_invalid_decomposition() {
        let g = Graph::path(3);
        let bags = vec![VertexSet::from([0]), VertexSet::from([1, 2])];
        let d = TreeDistanceDecomposition::from_parts(bags, vec![None, Some(0)]).unwrap();
        assert!(matches!(
            build_augmented_tree(&g, &d),
            Err(Error::InvalidDecomposition(_))
        ));
    }
}

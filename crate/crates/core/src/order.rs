//! Isomorphism order on augmented trees, and the isomorphism test and
//! canonization built on it for graphs of bounded tree distance width.
//!
//! Comparing two bag nodes under orderings `σ`, `σ'` of their bags proceeds
//! in four steps:
//!
//! 1. the bag subgraphs, with vertices renamed to their positions in the
//!    ordering and edges listed as sorted `(min, max)` pairs;
//! 2. the number of vertices covered by the subtree;
//! 3. the number of separator children;
//! 4. the separator children, taken in the order of their position sets
//!    under the ordering, each compared by its subtree size, child count and
//!    the sorted list of its child bags.
//!
//! A child bag below a separator is keyed first by the bipartite graph
//! between the separator (ranked by the parent's ordering) and the child bag
//! (ranked by the child's own ordering), then by steps 1-4 for its subtree.
//! Each subtree is summarized by the lexicographically least token sequence
//! over all orderings of its bag, so the comparison of two subtrees is a
//! plain comparison of those sequences. Token lists are terminated by `0`,
//! which makes every encoding prefix-free and lets a shorter list precede
//! its extensions.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use itertools::Itertools;

use crate::augmented::{build_augmented_tree, AugmentedTree, SubtreeHandle};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::perm::Permutation;
use crate::tdd::{build_minimal_tdd, root_sets};

/// Outcome of comparing two subtrees in the isomorphism order.
pub type OrderResult = Ordering;

/// An arrangement of the vertices of one bag.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BagOrdering {
    sequence: Vec<usize>,
}

impl BagOrdering {
    pub fn new(sequence: Vec<usize>) -> Self {
        BagOrdering { sequence }
    }

    pub fn sequence(&self) -> &[usize] {
        &self.sequence
    }

    /// Whether the sequence lists every vertex of `bag` exactly once.
    pub fn arranges(&self, bag: &VertexSet) -> bool {
        self.sequence.len() == bag.len() && VertexSet::from(self.sequence.clone()) == *bag
    }

    /// All arrangements of `bag`, in lexicographic order of the sequences.
    pub fn all(bag: &VertexSet) -> Vec<BagOrdering> {
        bag.iter()
            .permutations(bag.len())
            .map(BagOrdering::new)
            .collect()
    }

    fn position_of(&self, v: usize) -> Option<usize> {
        self.sequence.iter().position(|&w| w == v)
    }
}

/// The admissible pairs of orderings for a comparison. Admissible pairs
/// always form a product: any left ordering may be paired with any right
/// ordering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaSet {
    left: Vec<BagOrdering>,
    right: Vec<BagOrdering>,
}

impl ThetaSet {
    /// `Sym(left) × Sym(right)`.
    pub fn full(left: &VertexSet, right: &VertexSet) -> Self {
        ThetaSet {
            left: BagOrdering::all(left),
            right: BagOrdering::all(right),
        }
    }

    pub fn from_product(left: Vec<BagOrdering>, right: Vec<BagOrdering>) -> Self {
        ThetaSet { left, right }
    }

    pub fn left(&self) -> &[BagOrdering] {
        &self.left
    }

    pub fn right(&self) -> &[BagOrdering] {
        &self.right
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty() || self.right.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&BagOrdering, &BagOrdering)> + '_ {
        self.left
            .iter()
            .flat_map(move |l| self.right.iter().map(move |r| (l, r)))
    }
}

/// Isomorphism-invariant byte string; two graphs of the class share it iff
/// they are isomorphic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    bytes: Vec<u8>,
}

impl CanonicalForm {
    fn from_tokens(tokens: &[u32]) -> Self {
        CanonicalForm {
            bytes: tokens.iter().flat_map(|t| t.to_be_bytes()).collect(),
        }
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn to_hex(&self) -> String {
        self.bytes.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// The least encoding of a bag-node subtree together with the choices that
/// produced it.
#[derive(Debug)]
struct Encoded {
    tokens: Vec<u32>,
    order: Vec<usize>,
    seps: Vec<EncodedSep>,
}

#[derive(Debug)]
struct EncodedSep {
    /// Separator vertices in the order induced by the parent bag ordering.
    context: Vec<usize>,
    /// Child bag nodes by ascending encoding.
    children: Vec<usize>,
}

struct Encoder<'t> {
    tree: &'t AugmentedTree,
    memo: HashMap<(usize, Vec<usize>), Rc<Encoded>>,
}

impl<'t> Encoder<'t> {
    fn new(tree: &'t AugmentedTree) -> Self {
        Encoder {
            tree,
            memo: HashMap::new(),
        }
    }

    /// Encoding of bag node `node` under the fixed ordering `order`.
    /// `context` is the parent separator ranked by the parent's ordering.
    fn encode(&mut self, node: usize, context: Option<&[usize]>, order: &[usize], depth: u32) -> Encoded {
        let tree = self.tree;
        let g = tree.graph();
        let bag = &tree.node(node).vertices;
        let position = |v: usize| order.iter().position(|&w| w == v);
        let mut tokens = Vec::new();

        if let Some(context) = context {
            let mut bip = Vec::new();
            for (rank, &x) in context.iter().enumerate() {
                for &y in g.neighbors(x) {
                    if let Some(p) = position(y) {
                        bip.push((rank as u32 + 1, p as u32 + 1));
                    }
                }
            }
            bip.sort_unstable();
            push_pairs(&mut tokens, &bip);
        }

        tokens.push(depth);
        tokens.push(bag.len() as u32);
        let mut inner = Vec::new();
        for (i, &u) in order.iter().enumerate() {
            for (j, &v) in order.iter().enumerate().skip(i + 1) {
                if g.has_edge(u, v) {
                    inner.push((i as u32 + 1, j as u32 + 1));
                }
            }
        }
        inner.sort_unstable();
        push_pairs(&mut tokens, &inner);

        tokens.push(tree.subtree_size(node) as u32);
        let seps = &tree.node(node).children;
        tokens.push(seps.len() as u32);

        let mut keyed: Vec<(Vec<u32>, usize)> = seps
            .iter()
            .map(|&s| {
                let mut key: Vec<u32> = tree
                    .node(s)
                    .vertices
                    .iter()
                    .map(|v| position(v).expect("separator lies in the bag") as u32 + 1)
                    .collect();
                key.sort_unstable();
                (key, s)
            })
            .collect();
        keyed.sort();

        let mut encoded_seps = Vec::with_capacity(keyed.len());
        for (key, s) in keyed {
            tokens.extend_from_slice(&key);
            tokens.push(0);
            tokens.push(tree.subtree_size(s) as u32);
            let children = &tree.node(s).children;
            tokens.push(children.len() as u32);

            let mut sep_context: Vec<usize> = tree.node(s).vertices.iter().collect();
            sep_context.sort_by_key(|&v| position(v));
            let mut coded: Vec<(Rc<Encoded>, usize)> = children
                .iter()
                .map(|&c| (self.least(c, &sep_context, depth + 1), c))
                .collect();
            coded.sort_by(|a, b| a.0.tokens.cmp(&b.0.tokens).then(a.1.cmp(&b.1)));
            for (code, _) in &coded {
                tokens.extend_from_slice(&code.tokens);
            }
            encoded_seps.push(EncodedSep {
                context: sep_context,
                children: coded.into_iter().map(|(_, c)| c).collect(),
            });
        }

        Encoded {
            tokens,
            order: order.to_vec(),
            seps: encoded_seps,
        }
    }

    /// Least encoding of a child bag node over all orderings of its bag.
    fn least(&mut self, node: usize, context: &[usize], depth: u32) -> Rc<Encoded> {
        let key = (node, context.to_vec());
        if let Some(hit) = self.memo.get(&key) {
            return Rc::clone(hit);
        }
        let bag = self.tree.node(node).vertices.clone();
        let best = bag
            .iter()
            .permutations(bag.len())
            .map(|order| self.encode(node, Some(context), &order, depth))
            .min_by(|a, b| a.tokens.cmp(&b.tokens))
            .expect("a bag has at least one ordering");
        let best = Rc::new(best);
        self.memo.insert(key, Rc::clone(&best));
        best
    }

    /// Least encoding of `node` as a subtree root over the given orderings.
    fn least_root<'o>(
        &mut self,
        node: usize,
        orders: impl IntoIterator<Item = &'o BagOrdering>,
    ) -> Option<Encoded> {
        orders
            .into_iter()
            .map(|o| self.encode(node, None, o.sequence(), 0))
            .min_by(|a, b| a.tokens.cmp(&b.tokens))
    }

    /// Relabels the subtree below `node` in depth-first order of the least
    /// encoding, starting with the bag itself.
    fn label(&self, encoded: &Encoded, next: &mut usize, labels: &mut [usize]) {
        for &v in &encoded.order {
            labels[v] = *next;
            *next += 1;
        }
        for sep in &encoded.seps {
            for &child in &sep.children {
                let code = &self.memo[&(child, sep.context.clone())];
                self.label(code, next, labels);
            }
        }
    }
}

fn push_pairs(tokens: &mut Vec<u32>, pairs: &[(u32, u32)]) {
    for &(a, b) in pairs {
        tokens.push(a);
        tokens.push(b);
    }
    tokens.push(0);
}

fn check_theta(handle: SubtreeHandle<'_>, orders: &[BagOrdering]) -> Result<()> {
    if !handle.is_bag() {
        return Err(Error::InvalidParams(
            "the isomorphism order compares bag nodes".into(),
        ));
    }
    let bag = &handle.node().vertices;
    if let Some(bad) = orders.iter().find(|o| !o.arranges(bag)) {
        return Err(Error::InvalidParams(format!(
            "{:?} does not arrange the bag {bag}",
            bad.sequence()
        )));
    }
    Ok(())
}

/// Compares the subtrees under two bag nodes in the isomorphism order,
/// taking for each side its least encoding over the orderings admitted by
/// `theta`.
pub fn compare_augmented(
    left: SubtreeHandle<'_>,
    right: SubtreeHandle<'_>,
    theta: &ThetaSet,
) -> Result<OrderResult> {
    if theta.is_empty() {
        return Err(Error::NoAdmissibleMapping);
    }
    check_theta(left, theta.left())?;
    check_theta(right, theta.right())?;
    let l = Encoder::new(left.tree)
        .least_root(left.node, theta.left())
        .expect("theta is nonempty");
    let r = Encoder::new(right.tree)
        .least_root(right.node, theta.right())
        .expect("theta is nonempty");
    Ok(l.tokens.cmp(&r.tokens))
}

/// Orderings admitted for two child bag nodes once their grandparent bags
/// are ordered by `left_parent` and `right_parent`.
///
/// The children must hang below separators occupying the same positions,
/// and a pair `(φ, φ')` is admitted when `φφ'⁻¹` together with the parent
/// correspondence maps the bipartite graph between separator and child bag
/// on one side onto the other. Admitted pairs are the orderings realizing
/// the least such bipartite pattern on either side, so the result is a
/// product. Fails with [`Error::NoAdmissibleMapping`] when the two children
/// fall into different classes.
pub fn child_theta(
    left: SubtreeHandle<'_>,
    left_parent: &BagOrdering,
    right: SubtreeHandle<'_>,
    right_parent: &BagOrdering,
) -> Result<ThetaSet> {
    let side = |h: SubtreeHandle<'_>, parent_order: &BagOrdering| -> Result<(Vec<u32>, Vec<Vec<(u32, u32)>>, Vec<BagOrdering>)> {
        let sep = h.node().parent.ok_or(Error::InvalidParams("child bag expected".into()))?;
        let bag_node = h.tree.node(sep).parent.expect("separator has a parent bag");
        if !parent_order.arranges(&h.tree.node(bag_node).vertices) {
            return Err(Error::InvalidParams("parent ordering does not fit".into()));
        }
        let mut context: Vec<usize> = h.tree.node(sep).vertices.iter().collect();
        context.sort_by_key(|&v| parent_order.position_of(v));
        let mut key: Vec<u32> = context
            .iter()
            .map(|&v| parent_order.position_of(v).expect("separator in bag") as u32 + 1)
            .collect();
        key.sort_unstable();
        let g = h.tree.graph();
        let orders = BagOrdering::all(&h.node().vertices);
        let patterns: Vec<Vec<(u32, u32)>> = orders
            .iter()
            .map(|o| {
                let mut bip: Vec<(u32, u32)> = context
                    .iter()
                    .enumerate()
                    .flat_map(|(rank, &x)| {
                        o.sequence()
                            .iter()
                            .enumerate()
                            .filter(move |&(_, &y)| g.has_edge(x, y))
                            .map(move |(p, _)| (rank as u32 + 1, p as u32 + 1))
                    })
                    .collect();
                bip.sort_unstable();
                bip
            })
            .collect();
        Ok((key, patterns, orders))
    };
    let (left_key, left_patterns, left_orders) = side(left, left_parent)?;
    let (right_key, right_patterns, right_orders) = side(right, right_parent)?;
    if left_key != right_key {
        return Err(Error::NoAdmissibleMapping);
    }
    let least_left = left_patterns.iter().min().expect("nonempty");
    let least_right = right_patterns.iter().min().expect("nonempty");
    if least_left != least_right {
        return Err(Error::NoAdmissibleMapping);
    }
    let pick = |patterns: &[Vec<(u32, u32)>], orders: Vec<BagOrdering>| {
        orders
            .into_iter()
            .zip(patterns)
            .filter(|(_, p)| *p == least_left)
            .map(|(o, _)| o)
            .collect()
    };
    Ok(ThetaSet::from_product(
        pick(&left_patterns, left_orders),
        pick(&right_patterns, right_orders),
    ))
}

/// Explicit edge check that the correspondence given by the parent
/// orderings on the separators and by `left_order`/`right_order` on the
/// child bags maps `B[sep, child]` on the left onto the right.
pub fn induces_bipartite_isomorphism(
    left: SubtreeHandle<'_>,
    left_parent: &BagOrdering,
    left_order: &BagOrdering,
    right: SubtreeHandle<'_>,
    right_parent: &BagOrdering,
    right_order: &BagOrdering,
) -> bool {
    let sides = |h: SubtreeHandle<'_>| {
        let sep = h.node().parent.expect("child bag has a separator parent");
        (h.tree.node(sep).vertices.clone(), h.node().vertices.clone())
    };
    let (left_sep, left_bag) = sides(left);
    let (right_sep, right_bag) = sides(right);
    let (Ok(lb), Ok(rb)) = (
        left.tree.graph().induced_bipartite(&left_sep, &left_bag),
        right.tree.graph().induced_bipartite(&right_sep, &right_bag),
    ) else {
        return false;
    };
    let image = |v: usize| -> Option<usize> {
        if let Some(p) = left_parent.position_of(v) {
            let w = *right_parent.sequence().get(p)?;
            right_sep.contains(w).then_some(w)
        } else {
            let p = left_order.position_of(v)?;
            right_order.sequence().get(p).copied()
        }
    };
    if left_sep.iter().any(|v| image(v).is_none()) || left_sep.len() != right_sep.len() {
        return false;
    }
    lb.edges.len() == rb.edges.len()
        && lb.edges.iter().all(|&(u, v)| match (image(u), image(v)) {
            (Some(a), Some(b)) => right.tree.graph().has_edge(a, b),
            _ => false,
        })
}

/// Augmented trees of `g` for every root set of size at most `k` whose
/// minimal decomposition has width at most `k`.
fn admissible_trees(g: &Graph, k: usize) -> impl Iterator<Item = (VertexSet, AugmentedTree)> + '_ {
    root_sets(g, k).filter_map(move |s| {
        let d = build_minimal_tdd(g, &s).expect("connected graph, valid root set");
        (d.width() <= k).then(|| {
            let tree = build_augmented_tree(g, &d).expect("minimal decomposition is valid");
            (s, tree)
        })
    })
}

fn root_tokens(tree: &AugmentedTree) -> Vec<u32> {
    let orders = BagOrdering::all(&tree.node(tree.root()).vertices);
    Encoder::new(tree)
        .least_root(tree.root(), &orders)
        .expect("root bag has an ordering")
        .tokens
}

/// Decides isomorphism of two connected graphs of tree distance width at
/// most `k` by searching for root sets whose augmented trees are equal in
/// the isomorphism order.
///
/// The root of `g` is fixed to its first admissible root set; every
/// admissible root set of `h` of the same size is tried against it. An
/// isomorphism carries the fixed root of `g` to one of these.
pub fn iso_tdw(g: &Graph, h: &Graph, k: usize) -> Result<bool> {
    if !g.is_connected() || !h.is_connected() {
        return Err(Error::DisconnectedGraph);
    }
    let first_g = admissible_trees(g, k).next();
    let first_h = admissible_trees(h, k).next();
    let (Some((g_root, g_tree)), Some(_)) = (first_g, first_h) else {
        return match (tree_distance_fits(g, k), tree_distance_fits(h, k)) {
            (false, false) => Err(Error::WidthExceeded(k)),
            _ => Ok(false),
        };
    };
    if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() {
        return Ok(false);
    }
    let target = root_tokens(&g_tree);
    Ok(admissible_trees(h, k)
        .filter(|(s, _)| s.len() == g_root.len())
        .any(|(_, tree)| root_tokens(&tree) == target))
}

fn tree_distance_fits(g: &Graph, k: usize) -> bool {
    admissible_trees(g, k).next().is_some()
}

/// Canonical form of `g` and a relabeling realizing it.
///
/// The form is the least root encoding over all admissible root sets. The
/// relabeling numbers vertices in depth-first order of that encoding, so
/// two isomorphic graphs relabeled by their maps become identical.
pub fn canonize_tdw(g: &Graph, k: usize) -> Result<(CanonicalForm, Permutation)> {
    if !g.is_connected() {
        return Err(Error::DisconnectedGraph);
    }
    let mut best: Option<(Vec<u32>, AugmentedTree)> = None;
    for (_, tree) in admissible_trees(g, k) {
        let tokens = root_tokens(&tree);
        if best.as_ref().is_none_or(|(b, _)| tokens < *b) {
            best = Some((tokens, tree));
        }
    }
    let (tokens, tree) = best.ok_or(Error::WidthExceeded(k))?;
    let orders = BagOrdering::all(&tree.node(tree.root()).vertices);
    let mut encoder = Encoder::new(&tree);
    let root = encoder
        .least_root(tree.root(), &orders)
        .expect("root bag has an ordering");
    debug_assert_eq!(root.tokens, tokens);
    let mut labels = vec![usize::MAX; g.vertex_count()];
    let mut next = 0;
    encoder.label(&root, &mut next, &mut labels);
    let map = Permutation::from_images(labels).expect("every vertex lies in exactly one bag");
    Ok((CanonicalForm::from_tokens(&tokens), map))
}

/// Canonical form of a connected graph of tree distance width at most `k`.
pub fn canon_tdw(g: &Graph, k: usize) -> Result<CanonicalForm> {
    canonize_tdw(g, k).map(|(form, _)| form)
}

/// Relabeling sending `g` to its canonical representative. For isomorphic
/// `g`, `h`, `canonical_map(g).then(&canonical_map(h).inverse())` is an
/// isomorphism from `g` onto `h`.
pub fn canonical_map(g: &Graph, k: usize) -> Result<Permutation> {
    canonize_tdw(g, k).map(|(_, map)| map)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tree(g: &Graph, root: &[usize]) -> AugmentedTree {
        let d = build_minimal_tdd(g, &VertexSet::from(root.to_vec())).unwrap();
        build_augmented_tree(g, &d).unwrap()
    }

    fn compare_roots(a: &AugmentedTree, b: &AugmentedTree) -> OrderResult {
        let theta = ThetaSet::full(&a.node(0).vertices, &b.node(0).vertices);
        compare_augmented(a.root_handle(), b.root_handle(), &theta).unwrap()
    }

    /// Two 7-vertex trees with degree sequence (3,2,2,2,1,1,1): legs of
    /// lengths 1, 2, 3 and 2, 2, 2 around center 0.
    fn spiders() -> (Graph, Graph) {
        let a = Graph::from_edges(7, &[(0, 1), (0, 2), (0, 3), (1, 4), (4, 5), (2, 6)]).unwrap();
        let b = Graph::from_edges(7, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 5), (3, 6)]).unwrap();
        (a, b)
    }

    #[test]
    fn identical_trees_are_equal() {
        let g = Graph::cycle(5);
        let t = tree(&g, &[0]);
        assert_eq!(compare_roots(&t, &t), Ordering::Equal);
    }

    #[test]
    fn path_precedes_triangle() {
        let path = tree(&Graph::path(3), &[0]);
        let triangle = tree(&Graph::complete(3), &[0]);
        assert_eq!(compare_roots(&path, &triangle), Ordering::Less);
        assert_eq!(compare_roots(&triangle, &path), Ordering::Greater);
    }

    #[test]
    fn spiders_differ_below_the_root() {
        let (a, b) = spiders();
        let (ta, tb) = (tree(&a, &[0]), tree(&b, &[0]));
        assert_eq!(ta.subtree_size(0), tb.subtree_size(0));
        assert_eq!(ta.node(0).children.len(), tb.node(0).children.len());
        assert_ne!(compare_roots(&ta, &tb), Ordering::Equal);
        assert_eq!(compare_roots(&ta, &tb), compare_roots(&tb, &ta).reverse());
    }

    #[test]
    fn empty_theta_is_rejected() {
        let t = tree(&Graph::path(2), &[0]);
        let theta = ThetaSet::from_product(vec![], BagOrdering::all(&t.node(0).vertices));
        assert_eq!(
            compare_augmented(t.root_handle(), t.root_handle(), &theta),
            Err(Error::NoAdmissibleMapping)
        );
    }

    #[test]
    fn separator_nodes_cannot_be_compared() {
        let t = tree(&Graph::path(3), &[0]);
        let theta = ThetaSet::full(&VertexSet::from([0]), &VertexSet::from([0]));
        assert!(compare_augmented(t.handle(1), t.handle(1), &theta).is_err());
    }

    #[test]
    fn iso_examples() {
        let c6 = Graph::cycle(6);
        assert_eq!(iso_tdw(&c6, &c6, 2), Ok(true));
        assert_eq!(iso_tdw(&Graph::path(4), &Graph::star(3), 1), Ok(false));
        let two = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(iso_tdw(&two, &two, 2), Err(Error::DisconnectedGraph));
        assert_eq!(
            iso_tdw(&Graph::complete(5), &Graph::complete(5), 2),
            Err(Error::WidthExceeded(2))
        );
        assert_eq!(iso_tdw(&Graph::complete(5), &Graph::path(5), 2), Ok(false));
    }

    #[test]
    fn same_degree_trees_are_told_apart() {
        // Degree sequence (3,2,2,1,1,1): legs 1, 1, 3 versus legs 1, 2, 2.
        let a = Graph::from_edges(6, &[(0, 1), (0, 2), (0, 3), (3, 4), (4, 5)]).unwrap();
        let b = Graph::from_edges(6, &[(0, 1), (0, 2), (2, 3), (0, 4), (4, 5)]).unwrap();
        assert_eq!(iso_tdw(&a, &b, 1), Ok(false));
        let relabeled = Permutation::from_images(vec![5, 3, 1, 0, 2, 4])
            .unwrap()
            .apply_to_graph(&a);
        assert_eq!(iso_tdw(&a, &relabeled, 1), Ok(true));
    }

    #[test]
    fn single_vertex_canon() {
        let form = canon_tdw(&Graph::empty(1), 1).unwrap();
        // depth 0, one vertex, no edges, size 1, no separators
        assert_eq!(form.to_hex(), "0000000000000001000000000000000100000000");
    }

    #[test]
    fn canon_separates_path_and_star() {
        assert_ne!(
            canon_tdw(&Graph::path(4), 2).unwrap(),
            canon_tdw(&Graph::star(3), 2).unwrap()
        );
    }

    #[test]
    fn canonical_map_composes_to_isomorphism() {
        let p = Graph::path(4);
        let q = Graph::from_edges(4, &[(2, 0), (0, 3), (3, 1)]).unwrap();
        let (fp, mp) = canonize_tdw(&p, 1).unwrap();
        let (fq, mq) = canonize_tdw(&q, 1).unwrap();
        assert_eq!(fp, fq);
        let iso = mp.then(&mq.inverse());
        assert!(iso.is_isomorphism(&p, &q));
        // Relabeling by the map keeps the form.
        assert_eq!(canon_tdw(&mp.apply_to_graph(&p), 1).unwrap(), fp);
    }

    #[test]
    fn child_theta_admits_only_bipartite_isomorphisms() {
        let g = Graph::from_edges(5, &[(0, 1), (0, 2), (1, 3), (2, 3), (1, 4), (2, 4)]).unwrap();
        let t = tree(&g, &[0]);
        // root B(0) -> S(0) -> B(1,2) -> S(1,2) -> B(3,4)
        let sep = t.node(2).children[0];
        let (first, second) = (t.node(sep).children[0], t.node(sep).children[1]);
        let parent_orders = BagOrdering::all(&t.node(2).vertices);
        for lp in &parent_orders {
            for rp in &parent_orders {
                let theta = child_theta(t.handle(first), lp, t.handle(second), rp).unwrap();
                assert!(!theta.is_empty());
                for (l, r) in theta.pairs() {
                    assert!(induces_bipartite_isomorphism(
                        t.handle(first), lp, l, t.handle(second), rp, r
                    ));
                }
            }
        }
    }
}

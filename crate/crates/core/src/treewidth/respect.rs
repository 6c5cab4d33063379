//! Isomorphisms that carry every bag of one tree decomposition onto a bag of
//! another.

use std::collections::HashMap;

use crate::error::Result;
use crate::graph::{Graph, VertexSet};

use super::decomposition::{require_valid, RootedTree, TreeDecomposition};

/// Rooted bag-by-bag matcher between `(g, dg)` and `(h, dh)`.
///
/// `forward` and `backward` hold the map on the bags of the current
/// root-to-node path only; every call restores them before returning.
pub(crate) struct BlockMatcher<'a> {
    g: &'a Graph,
    dg: &'a TreeDecomposition,
    tg: &'a RootedTree,
    h: &'a Graph,
    dh: &'a TreeDecomposition,
    th: &'a RootedTree,
    forward: Vec<Option<usize>>,
    backward: Vec<Option<usize>>,
    memo: HashMap<(usize, usize, Vec<usize>), bool>,
}

impl<'a> BlockMatcher<'a> {
    pub(crate) fn new(
        g: &'a Graph,
        dg: &'a TreeDecomposition,
        tg: &'a RootedTree,
        h: &'a Graph,
        dh: &'a TreeDecomposition,
        th: &'a RootedTree,
    ) -> Self {
        BlockMatcher {
            g,
            dg,
            tg,
            h,
            dh,
            th,
            forward: vec![None; g.vertex_count()],
            backward: vec![None; h.vertex_count()],
            memo: HashMap::new(),
        }
    }

    /// Fixes `u -> w` for the lifetime of the matcher.
    pub(crate) fn pin(&mut self, u: usize, w: usize) {
        self.forward[u] = Some(w);
        self.backward[w] = Some(u);
    }

    /// Whether the subtree under g-bag `a` maps blockwise onto the subtree
    /// under h-bag `b`, extending the current images of the vertices `a`
    /// shares with its parent `pa` onto those `b` shares with `pb`.
    pub(crate) fn subtrees_match(
        &mut self,
        a: usize,
        pa: Option<usize>,
        b: usize,
        pb: Option<usize>,
    ) -> bool {
        let xa = self.dg.bag(a);
        let xb = self.dh.bag(b);
        if xa.len() != xb.len() || self.tg.children[a].len() != self.th.children[b].len() {
            return false;
        }
        let shared = pa.map_or_else(VertexSet::new, |p| xa.intersection(self.dg.bag(p)));
        let shared_h = pb.map_or_else(VertexSet::new, |p| xb.intersection(self.dh.bag(p)));
        if shared.len() != shared_h.len() {
            return false;
        }
        let mut images = Vec::with_capacity(shared.len());
        for v in shared.iter() {
            match self.forward[v] {
                Some(w) if shared_h.contains(w) => images.push(w),
                _ => return false,
            }
        }
        let key = (a, b, images);
        if let Some(&known) = self.memo.get(&key) {
            return known;
        }
        let fresh = xa.difference(&shared).into_vec();
        let targets = xb.difference(&shared_h).into_vec();
        let mut used = vec![false; targets.len()];
        let result = self.assign(a, b, &fresh, &targets, &mut used);
        self.memo.insert(key, result);
        result
    }

    fn assign(&mut self, a: usize, b: usize, fresh: &[usize], targets: &[usize], used: &mut [bool]) -> bool {
        let Some((&u, rest)) = fresh.split_first() else {
            return self.match_children(a, b);
        };
        for (j, &w) in targets.iter().enumerate() {
            if used[j] || self.g.degree(u) != self.h.degree(w) || !self.consistent(a, u, w) {
                continue;
            }
            used[j] = true;
            self.forward[u] = Some(w);
            self.backward[w] = Some(u);
            let found = self.assign(a, b, rest, targets, used);
            self.forward[u] = None;
            self.backward[w] = None;
            used[j] = false;
            if found {
                return true;
            }
        }
        false
    }

    /// Adjacency of `u` to the mapped members of bag `a` agrees with that of
    /// `w` to their images.
    fn consistent(&self, a: usize, u: usize, w: usize) -> bool {
        self.dg.bag(a).iter().all(|v| match self.forward[v] {
            Some(x) => self.g.has_edge(u, v) == self.h.has_edge(w, x),
            None => true,
        })
    }

    /// Children are matched greedily: with the parent bag fixed, matchability
    /// of child subtrees is an equivalence, so any maximal matching is
    /// perfect when a perfect one exists.
    fn match_children(&mut self, a: usize, b: usize) -> bool {
        let kids_g = self.tg.children[a].clone();
        let kids_h = self.th.children[b].clone();
        let mut taken = vec![false; kids_h.len()];
        for c in kids_g {
            let slot = (0..kids_h.len())
                .find(|&j| !taken[j] && self.subtrees_match(c, Some(a), kids_h[j], Some(b)));
            match slot {
                Some(j) => taken[j] = true,
                None => return false,
            }
        }
        true
    }
}

/// Whether some isomorphism from `g` to `h` maps each bag of `dg` onto a bag
/// of `dh` along an isomorphism of the decomposition trees.
///
/// The tree of `dg` hangs from its root (bag 0 if unrooted); every bag of
/// `dh` is tried as the image of that root.
pub fn iso_respecting_both(
    g: &Graph,
    dg: &TreeDecomposition,
    h: &Graph,
    dh: &TreeDecomposition,
) -> Result<bool> {
    require_valid(g, dg)?;
    require_valid(h, dh)?;
    if g.vertex_count() != h.vertex_count()
        || g.edge_count() != h.edge_count()
        || dg.bag_count() != dh.bag_count()
    {
        return Ok(false);
    }
    let root = dg.root().unwrap_or(0);
    let tg = dg.rooted_at(root);
    for b in 0..dh.bag_count() {
        let th = dh.rooted_at(b);
        let mut matcher = BlockMatcher::new(g, dg, &tg, h, dh, &th);
        if matcher.subtrees_match(root, None, b, None) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Partitions the children of bag `a` into classes of subtrees that map
/// blockwise onto each other while fixing every vertex of `a`. Returns a
/// class index per entry of `tree.children[a]`, numbered by first member.
pub(crate) fn sibling_classes(g: &Graph, d: &TreeDecomposition, tree: &RootedTree, a: usize) -> Vec<usize> {
    let kids = &tree.children[a];
    let sizes: Vec<usize> = kids.iter().map(|&c| d.subtree_vertices(tree, c).len()).collect();
    let mut matcher = BlockMatcher::new(g, d, tree, g, d, tree);
    for v in d.bag(a).iter() {
        matcher.pin(v, v);
    }
    let mut reps: Vec<usize> = Vec::new();
    let mut class = Vec::with_capacity(kids.len());
    for (i, &c) in kids.iter().enumerate() {
        let found = reps.iter().position(|&r| {
            sizes[r] == sizes[i] && matcher.subtrees_match(kids[r], Some(a), c, Some(a))
        });
        match found {
            Some(id) => class.push(id),
            None => {
                class.push(reps.len());
                reps.push(i);
            }
        }
    }
    class
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::perm::Permutation;

    fn set<const N: usize>(v: [usize; N]) -> VertexSet {
        VertexSet::from(v)
    }

    fn path_decomposition(n: usize) -> TreeDecomposition {
        let bags = (1..n).map(|i| set([i - 1, i])).collect();
        let edges = (1..n - 1).map(|i| (i - 1, i)).collect();
        TreeDecomposition::new(bags, edges, Some(0)).unwrap()
    }

    fn relabel(d: &TreeDecomposition, p: &Permutation) -> TreeDecomposition {
        let bags = d.bags().iter().map(|b| b.iter().map(|v| p.apply(v)).collect()).collect();
        TreeDecomposition::new(bags, d.tree_edges().to_vec(), d.root()).unwrap()
    }

    #[test]
    fn identical_inputs_match() {
        let g = Graph::path(5);
        let d = path_decomposition(5);
        assert!(iso_respecting_both(&g, &d, &g, &d).unwrap());
    }

    #[test]
    fn coarsened_decomposition_has_no_blockwise_map() {
        let g = Graph::path(4);
        let d = path_decomposition(4);
        let coarse = TreeDecomposition::new(vec![g.vertices()], vec![], None).unwrap();
        assert!(!iso_respecting_both(&g, &d, &g, &coarse).unwrap());
    }

    #[test]
    fn permuted_partial_two_tree_matches() {
        // Two triangles glued along 1-2, with a pendant 4 on 3.
        let g = Graph::from_edges(5, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (3, 4)]).unwrap();
        let d = TreeDecomposition::new(
            vec![set([0, 1, 2]), set([1, 2, 3]), set([3, 4])],
            vec![(0, 1), (1, 2)],
            Some(0),
        )
        .unwrap();
        let p = Permutation::from_images(vec![3, 0, 4, 2, 1]).unwrap();
        let h = p.apply_to_graph(&g);
        let dh = relabel(&d, &p).with_root(2);
        assert!(iso_respecting_both(&g, &d, &h, &dh).unwrap());
    }

    #[test]
    fn rejects_invalid_decompositions() {
        let g = Graph::path(3);
        let bad = TreeDecomposition::new(vec![set([0, 1])], vec![], None).unwrap();
        assert!(matches!(
            iso_respecting_both(&g, &bad, &g, &bad),
            Err(Error::InvalidDecomposition(_))
        ));
    }

    #[test]
    fn blockwise_map_must_respect_edges() {
        // Same bag tree shape, but one graph has the chord inside bag 0.
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (0, 2)]).unwrap();
        let h = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (1, 3)]).unwrap();
        let dg = TreeDecomposition::new(vec![set([0, 1, 2]), set([2, 3])], vec![(0, 1)], None).unwrap();
        let dh = TreeDecomposition::new(vec![set([0, 1]), set([1, 2, 3])], vec![(0, 1)], None).unwrap();
        assert!(iso_respecting_both(&g, &dg, &h, &dh).unwrap());

        // Bags of matching sizes whose induced subgraphs differ.
        let p4 = Graph::path(4);
        let dg = TreeDecomposition::new(vec![set([0, 1, 2]), set([1, 2, 3])], vec![(0, 1)], None).unwrap();
        let dh = TreeDecomposition::new(vec![set([0, 1, 2]), set([0, 2, 3])], vec![(0, 1)], None).unwrap();
        assert!(!iso_respecting_both(&p4, &dg, &p4, &dh).unwrap());
    }

    #[test]
    fn sibling_classes_of_a_star() {
        // Center 0 with leaves 1, 2 and a path 0-3-4.
        let g = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (3, 4)]).unwrap();
        let d = TreeDecomposition::new(
            vec![set([0]), set([0, 1]), set([0, 2]), set([0, 3]), set([3, 4])],
            vec![(0, 1), (0, 2), (0, 3), (3, 4)],
            Some(0),
        )
        .unwrap();
        let tree = d.rooted_at(0);
        assert_eq!(tree.children[0], vec![1, 2, 3]);
        assert_eq!(sibling_classes(&g, &d, &tree, 0), vec![0, 0, 1]);
    }
}

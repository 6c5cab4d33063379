//! Isomorphism search guided by a tree decomposition of one graph only.
//!
//! The bags of `g`'s decomposition are visited depth-first. For each bag the
//! search fixes images of the vertices not seen higher up, then hands every
//! child subtree a region of `h`: the image of the shared vertices plus a set
//! of components of `h` minus the image of the current bag. Components are
//! paired with those of `g` by size, edge count, refined colors and the
//! preimages of their attachment vertices.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::perm::Permutation;

use super::decomposition::{compute_tree_decomposition, require_valid, RootedTree, TreeDecomposition};
use super::respect::sibling_classes;

/// Orders the children of bag `r` by the least vertex their subtrees add to
/// `r`. Children adding nothing come first, by bag content.
pub fn lex_subtree_order(g: &Graph, d: &TreeDecomposition, r: usize, children: &[usize]) -> Vec<usize> {
    let tree = d.rooted_at(d.root().unwrap_or(r));
    let xr = d.bag(r);
    let mut keyed: Vec<(Option<usize>, &VertexSet, usize)> = children
        .iter()
        .map(|&c| {
            let fresh = d.subtree_vertices(&tree, c).difference(xr);
            debug_assert!(fresh.iter().all(|v| v < g.vertex_count()));
            (fresh.least(), d.bag(c), c)
        })
        .collect();
    keyed.sort();
    keyed.into_iter().map(|(_, _, c)| c).collect()
}

/// Whether `child_bag` can serve as the bag of a child of `parent_bag`
/// whose subtree covers `claimed_component`: the child bag lies in the
/// region, the rest of the region avoids the parent bag, and no edge leaves
/// the rest of the region except into the child bag.
pub fn is_valid_child_bag(
    h: &Graph,
    parent_bag: &VertexSet,
    child_bag: &VertexSet,
    claimed_component: &VertexSet,
) -> bool {
    if !child_bag.is_subset(claimed_component) {
        return false;
    }
    let below = claimed_component.difference(child_bag);
    below.is_disjoint(parent_bag)
        && below
            .iter()
            .all(|v| h.neighbors(v).iter().all(|&w| claimed_component.contains(w)))
}

/// Counters describing one search.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Images of the root bag tried.
    pub root_candidates: usize,
    pub frames_pushed: usize,
    /// Stack-discipline checks performed after pops.
    pub stack_checks: usize,
    pub memo_hits: usize,
}

/// Bag pair on the stack: the g-side bag, its image in `h`, and the
/// vertices first mapped at this bag.
#[derive(Debug)]
struct Frame {
    g_bag: usize,
    h_bag: VertexSet,
    fresh: Vec<usize>,
}

/// Map on the vertices of the bags along the current root-to-bag path.
#[derive(Debug)]
struct PartialIsomorphism {
    forward: Vec<Option<usize>>,
    backward: Vec<Option<usize>>,
    frames: Vec<Frame>,
    size: usize,
}

impl PartialIsomorphism {
    fn new(n: usize) -> Self {
        PartialIsomorphism {
            forward: vec![None; n],
            backward: vec![None; n],
            frames: Vec::new(),
            size: 0,
        }
    }

    fn map(&mut self, u: usize, w: usize) {
        self.forward[u] = Some(w);
        self.backward[w] = Some(u);
        self.size += 1;
    }

    fn unmap(&mut self, u: usize) {
        if let Some(w) = self.forward[u].take() {
            self.backward[w] = None;
            self.size -= 1;
        }
    }

    fn image(&self, set: &VertexSet) -> VertexSet {
        set.iter()
            .map(|v| self.forward[v].expect("bag vertex is mapped"))
            .collect()
    }
}

/// Component key: size, internal edges, sorted colors, sorted attachment.
type Signature = (usize, usize, Vec<usize>, Vec<usize>);

struct Search<'a> {
    g: &'a Graph,
    h: &'a Graph,
    bags: &'a [VertexSet],
    tree: RootedTree,
    order: Vec<Vec<usize>>,
    class: Vec<usize>,
    /// Per bag: components of `g` restricted to what its subtree adds to
    /// its parent bag, with their signatures.
    comps: Vec<Vec<(VertexSet, Signature)>>,
    color_g: Vec<usize>,
    color_h: Vec<usize>,
    phi: PartialIsomorphism,
    done: Vec<Option<usize>>,
    done_log: Vec<usize>,
    failed: HashSet<(usize, Vec<usize>, Vec<usize>)>,
    stats: SearchStats,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, d: &'a TreeDecomposition, h: &'a Graph, root: usize, colors: (Vec<usize>, Vec<usize>)) -> Self {
        let tree = d.rooted_at(root);
        let count = d.bag_count();
        let rooted = d.clone().with_root(root);
        let order: Vec<Vec<usize>> = (0..count)
            .map(|a| lex_subtree_order(g, &rooted, a, &tree.children[a]))
            .collect();

        let mut class = vec![0; count];
        let mut next_class = 1;
        for a in 0..count {
            let ids = sibling_classes(g, d, &tree, a);
            let groups = ids.iter().copied().max().map_or(0, |m| m + 1);
            for (i, &c) in tree.children[a].iter().enumerate() {
                class[c] = next_class + ids[i];
            }
            next_class += groups;
        }

        let (color_g, color_h) = colors;
        let mut comps = vec![Vec::new(); count];
        for (c, found) in comps.iter_mut().enumerate() {
            let Some(a) = tree.parent[c] else { continue };
            let added = d.subtree_vertices(&tree, c).difference(d.bag(a));
            let outside: VertexSet = (0..g.vertex_count()).filter(|&v| !added.contains(v)).collect();
            for comp in g.connected_components(&outside) {
                let attach = g.neighbors_of_set(&comp).into_vec();
                let sig = signature(g, &color_g, &comp, attach);
                found.push((comp, sig));
            }
        }

        Search {
            g,
            h,
            bags: d.bags(),
            tree,
            order,
            class,
            comps,
            color_g,
            color_h,
            phi: PartialIsomorphism::new(g.vertex_count()),
            done: vec![None; g.vertex_count()],
            done_log: Vec::new(),
            failed: HashSet::new(),
            stats: SearchStats::default(),
        }
    }

    /// Whether `u -> w` keeps adjacency to the mapped members of `bag`.
    fn consistent(&self, bag: &VertexSet, u: usize, w: usize) -> bool {
        self.color_g[u] == self.color_h[w]
            && bag.iter().all(|v| match self.phi.forward[v] {
                Some(x) => self.g.has_edge(u, v) == self.h.has_edge(w, x),
                None => true,
            })
    }

    fn push(&mut self, g_bag: usize, fresh: Vec<usize>) {
        let h_bag = self.phi.image(&self.bags[g_bag]);
        self.phi.frames.push(Frame { g_bag, h_bag, fresh });
        self.stats.frames_pushed += 1;
    }

    /// Pops the top frame, unmapping its vertices, and checks that the live
    /// map covers exactly the bags still on the stack.
    fn pop(&mut self) {
        let frame = self.phi.frames.pop().expect("pop on empty stack");
        for &u in &frame.fresh {
            self.phi.unmap(u);
        }
        let mut covered = 0;
        for f in &self.phi.frames {
            covered += f.fresh.len();
            assert!(
                self.bags[f.g_bag].iter().all(|v| self.phi.forward[v].is_some()),
                "bag {} on the stack has unmapped vertices",
                f.g_bag
            );
            debug_assert_eq!(self.phi.image(&self.bags[f.g_bag]), f.h_bag);
        }
        assert_eq!(covered, self.phi.size, "live map reaches beyond the stack");
        self.stats.stack_checks += 1;
    }

    fn commit(&mut self, fresh: &[usize]) {
        for &u in fresh {
            self.done[u] = self.phi.forward[u];
            self.done_log.push(u);
        }
    }

    fn rollback(&mut self, mark: usize) {
        for u in self.done_log.drain(mark..) {
            self.done[u] = None;
        }
    }

    /// Pushes a frame for bag `g_bag` whose `fresh` vertices are already
    /// mapped, solves below it and pops. On success the frame's vertices
    /// move to the committed map; on failure they are mapped again so the
    /// caller can keep enumerating.
    fn enter(&mut self, g_bag: usize, fresh: &[usize], region: &VertexSet) -> bool {
        let images: Vec<usize> = fresh
            .iter()
            .map(|&u| self.phi.forward[u].expect("fresh vertex is mapped"))
            .collect();
        self.push(g_bag, fresh.to_vec());
        let ok = self.solve(g_bag, region);
        if ok {
            self.commit(fresh);
        }
        self.pop();
        if !ok {
            for (&u, &w) in fresh.iter().zip(&images) {
                self.phi.map(u, w);
            }
        }
        ok
    }

    /// Tries every image of the root bag.
    fn run(&mut self) -> Option<Permutation> {
        let bag = self.bags[self.tree.root].as_slice().to_vec();
        if !self.root_images(&bag, 0) {
            return None;
        }
        let images: Vec<usize> = self
            .done
            .iter()
            .map(|w| w.expect("every vertex is placed"))
            .collect();
        let p = Permutation::from_images(images).expect("committed map is a bijection");
        assert!(p.is_isomorphism(self.g, self.h), "search produced a non-isomorphism");
        Some(p)
    }

    fn root_images(&mut self, bag: &[usize], i: usize) -> bool {
        let root = self.tree.root;
        if i == bag.len() {
            self.stats.root_candidates += 1;
            return self.enter(root, bag, &self.h.vertices());
        }
        let u = bag[i];
        for w in 0..self.h.vertex_count() {
            if self.phi.backward[w].is_some() || !self.consistent(&self.bags[root], u, w) {
                continue;
            }
            self.phi.map(u, w);
            if self.root_images(bag, i + 1) {
                return true;
            }
            self.phi.unmap(u);
        }
        false
    }

    /// Extends the map below bag `a`, whose image is fixed and whose subtree
    /// must cover exactly `region` in `h`.
    fn solve(&mut self, a: usize, region: &VertexSet) -> bool {
        let image = self.phi.image(&self.bags[a]);
        let rest = region.difference(&image);
        let outside: VertexSet = (0..self.h.vertex_count()).filter(|&v| !rest.contains(v)).collect();
        let mut items: Vec<(VertexSet, Signature)> = Vec::new();
        for comp in self.h.connected_components(&outside) {
            let attach = self.h.neighbors_of_set(&comp);
            let mut preimage = Vec::with_capacity(attach.len());
            for w in attach.iter() {
                if !image.contains(w) {
                    return false;
                }
                preimage.push(self.phi.backward[w].expect("image vertex has a preimage"));
            }
            preimage.sort_unstable();
            let sig = signature(self.h, &self.color_h, &comp, preimage);
            items.push((comp, sig));
        }
        let mut wanted: Vec<&Signature> = self.tree.children[a]
            .iter()
            .flat_map(|&c| self.comps[c].iter().map(|(_, s)| s))
            .collect();
        let mut offered: Vec<&Signature> = items.iter().map(|(_, s)| s).collect();
        wanted.sort();
        offered.sort();
        if wanted != offered {
            return false;
        }

        let mark = self.done_log.len();
        let mut consumed = vec![false; items.len()];
        for c in self.order[a].clone() {
            if self.comps[c].is_empty() {
                continue;
            }
            if !self.place_child(a, c, &items, &mut consumed) {
                self.rollback(mark);
                return false;
            }
        }
        true
    }

    /// Finds components of `h` for child `c` and a consistent image of its
    /// bag, and commits the first that completes.
    fn place_child(&mut self, a: usize, c: usize, items: &[(VertexSet, Signature)], consumed: &mut [bool]) -> bool {
        let mut needed: Vec<&Signature> = self.comps[c].iter().map(|(_, s)| s).collect();
        needed.sort();
        let mut groups: Vec<(&Signature, usize)> = Vec::new();
        for s in needed {
            match groups.last_mut() {
                Some((t, n)) if *t == s => *n += 1,
                _ => groups.push((s, 1)),
            }
        }
        let pools: Vec<Vec<usize>> = groups
            .iter()
            .map(|(s, _)| (0..items.len()).filter(|&j| !consumed[j] && items[j].1 == **s).collect())
            .collect();
        let counts: Vec<usize> = groups.iter().map(|(_, n)| *n).collect();
        let mut chosen = Vec::new();
        self.choose(a, c, items, &pools, &counts, 0, &mut chosen, consumed)
    }

    #[allow(clippy::too_many_arguments)]
    fn choose(
        &mut self,
        a: usize,
        c: usize,
        items: &[(VertexSet, Signature)],
        pools: &[Vec<usize>],
        counts: &[usize],
        group: usize,
        chosen: &mut Vec<usize>,
        consumed: &mut [bool],
    ) -> bool {
        if group == pools.len() {
            if self.try_child(a, c, items, chosen) {
                for &j in chosen.iter() {
                    consumed[j] = true;
                }
                return true;
            }
            return false;
        }
        for pick in itertools::Itertools::combinations(pools[group].iter().copied(), counts[group]) {
            let len = chosen.len();
            chosen.extend(pick);
            let found = self.choose(a, c, items, pools, counts, group + 1, chosen, consumed);
            chosen.truncate(len);
            if found {
                return true;
            }
        }
        false
    }

    fn try_child(&mut self, a: usize, c: usize, items: &[(VertexSet, Signature)], chosen: &[usize]) -> bool {
        let shared = self.bags[c].intersection(&self.bags[a]);
        let shared_image = self.phi.image(&shared);
        let mut claimed = shared_image.clone();
        let mut owner = vec![usize::MAX; self.h.vertex_count()];
        for &j in chosen {
            claimed = claimed.union(&items[j].0);
            for w in items[j].0.iter() {
                owner[w] = j;
            }
        }
        let key = (self.class[c], claimed.as_slice().to_vec(), shared_image.into_vec());
        if self.failed.contains(&key) {
            self.stats.memo_hits += 1;
            return false;
        }
        let fresh = self.bags[c].difference(&shared).into_vec();
        let found = self.child_images(a, c, &fresh, 0, items, &owner, &claimed);
        if !found {
            self.failed.insert(key);
        }
        found
    }

    #[allow(clippy::too_many_arguments)]
    fn child_images(
        &mut self,
        a: usize,
        c: usize,
        fresh: &[usize],
        i: usize,
        items: &[(VertexSet, Signature)],
        owner: &[usize],
        claimed: &VertexSet,
    ) -> bool {
        if i == fresh.len() {
            let parent_image = self.phi.image(&self.bags[a]);
            let child_image = self.phi.image(&self.bags[c]);
            return is_valid_child_bag(self.h, &parent_image, &child_image, claimed)
                && self.enter(c, fresh, claimed);
        }
        let u = fresh[i];
        let want = self.comps[c]
            .iter()
            .position(|(comp, _)| comp.contains(u))
            .expect("fresh vertex lies in a component");
        for w in claimed.iter() {
            let j = owner[w];
            if j == usize::MAX
                || self.phi.backward[w].is_some()
                || items[j].1 != self.comps[c][want].1
                || !self.consistent(&self.bags[c], u, w)
            {
                continue;
            }
            self.phi.map(u, w);
            if self.child_images(a, c, fresh, i + 1, items, owner, claimed) {
                return true;
            }
            self.phi.unmap(u);
        }
        false
    }
}

fn signature(graph: &Graph, colors: &[usize], comp: &VertexSet, attach: Vec<usize>) -> Signature {
    let inner = comp
        .iter()
        .map(|v| graph.neighbors(v).iter().filter(|&&w| comp.contains(w)).count())
        .sum::<usize>()
        / 2;
    let mut palette: Vec<usize> = comp.iter().map(|v| colors[v]).collect();
    palette.sort_unstable();
    (comp.len(), inner, palette, attach)
}

/// Stable colors of the disjoint union of `g` and `h` under iterated
/// neighborhood refinement, starting from degrees. Isomorphisms preserve
/// them.
fn refine_colors(g: &Graph, h: &Graph) -> (Vec<usize>, Vec<usize>) {
    let n = g.vertex_count();
    let total = n + h.vertex_count();
    let neighbors = |v: usize| -> Vec<usize> {
        if v < n {
            g.neighbors(v).to_vec()
        } else {
            h.neighbors(v - n).iter().map(|w| w + n).collect()
        }
    };
    let adjacency: Vec<Vec<usize>> = (0..total).map(neighbors).collect();
    let mut color: Vec<usize> = adjacency.iter().map(Vec::len).collect();
    let mut classes = {
        let mut distinct = color.clone();
        distinct.sort_unstable();
        distinct.dedup();
        distinct.len()
    };
    loop {
        let keys: Vec<(usize, Vec<usize>)> = (0..total)
            .map(|v| {
                let mut around: Vec<usize> = adjacency[v].iter().map(|&w| color[w]).collect();
                around.sort_unstable();
                (color[v], around)
            })
            .collect();
        let mut distinct = keys.clone();
        distinct.sort();
        distinct.dedup();
        color = keys
            .iter()
            .map(|k| distinct.binary_search(k).expect("key is present"))
            .collect();
        if distinct.len() == classes {
            break;
        }
        classes = distinct.len();
    }
    let h_colors = color.split_off(n);
    (color, h_colors)
}

/// Searches for an isomorphism from `g` to `h` using only the decomposition
/// `dg` of `g`, of width at most `k`. Returns a verified isomorphism or
/// `None`. The tree of `dg` hangs from its root (bag 0 if unrooted).
pub fn iso_one_decomp(g: &Graph, dg: &TreeDecomposition, h: &Graph, k: usize) -> Result<Option<Permutation>> {
    iso_one_decomp_with_stats(g, dg, h, k).map(|(found, _)| found)
}

/// [`iso_one_decomp`] together with counters from the search.
pub fn iso_one_decomp_with_stats(
    g: &Graph,
    dg: &TreeDecomposition,
    h: &Graph,
    k: usize,
) -> Result<(Option<Permutation>, SearchStats)> {
    require_valid(g, dg)?;
    if dg.width() > k {
        return Err(Error::InvalidDecomposition(format!(
            "width {} exceeds {k}",
            dg.width()
        )));
    }
    if g.vertex_count() != h.vertex_count() {
        return Err(Error::SizeMismatch(g.vertex_count(), h.vertex_count()));
    }
    if g.edge_count() != h.edge_count() {
        return Ok((None, SearchStats::default()));
    }
    let (color_g, color_h) = refine_colors(g, h);
    let mut census_g = color_g.clone();
    let mut census_h = color_h.clone();
    census_g.sort_unstable();
    census_h.sort_unstable();
    if census_g != census_h {
        return Ok((None, SearchStats::default()));
    }
    let root = dg.root().unwrap_or(0);
    let mut search = Search::new(g, dg, h, root, (color_g, color_h));
    let found = search.run();
    Ok((found, search.stats))
}

/// Isomorphism test for graphs of treewidth at most `k`: decomposes `g`
/// (or `h` if `g` is too wide) and runs [`iso_one_decomp`].
pub fn iso_tw(g: &Graph, h: &Graph, k: usize) -> Result<bool> {
    let (first, second, d) = match compute_tree_decomposition(g, k) {
        Ok(d) => (g, h, d),
        Err(Error::WidthExceeded(_)) => match compute_tree_decomposition(h, k) {
            Ok(d) => (h, g, d),
            Err(Error::WidthExceeded(_)) => return Err(Error::WidthExceeded(k)),
            Err(e) => return Err(e),
        },
        Err(e) => return Err(e),
    };
    if first.vertex_count() != second.vertex_count() {
        return Ok(false);
    }
    Ok(iso_one_decomp(first, &d, second, k)?.is_some())
}

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// A tree decomposition: bags on the nodes of a tree, optionally rooted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    bags: Vec<VertexSet>,
    edges: Vec<(usize, usize)>,
    root: Option<usize>,
    adjacency: Vec<Vec<usize>>,
}

impl TreeDecomposition {
    /// Assembles a decomposition. Tree edges referring to unknown bags are
    /// rejected; whether the edges form a tree is left to
    /// [`validate_tree_decomposition`].
    pub fn new(bags: Vec<VertexSet>, edges: Vec<(usize, usize)>, root: Option<usize>) -> Result<Self> {
        let count = bags.len();
        let mut adjacency = vec![Vec::new(); count];
        for &(a, b) in &edges {
            if a >= count || b >= count {
                return Err(Error::InvalidDecomposition(format!(
                    "tree edge ({a}, {b}) refers to a missing bag"
                )));
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        if root.is_some_and(|r| r >= count) {
            return Err(Error::InvalidDecomposition("root bag out of range".into()));
        }
        Ok(TreeDecomposition {
            bags,
            edges,
            root,
            adjacency,
        })
    }

    pub fn bags(&self) -> &[VertexSet] {
        &self.bags
    }

    pub fn bag(&self, i: usize) -> &VertexSet {
        &self.bags[i]
    }

    pub fn bag_count(&self) -> usize {
        self.bags.len()
    }

    pub fn tree_edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    pub fn with_root(mut self, root: usize) -> Self {
        assert!(root < self.bags.len(), "root bag out of range");
        self.root = Some(root);
        self
    }

    pub fn neighbors(&self, bag: usize) -> &[usize] {
        &self.adjacency[bag]
    }

    /// Largest bag size minus one.
    pub fn width(&self) -> usize {
        self.bags
            .iter()
            .map(VertexSet::len)
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    /// Parent and children arrays for the tree hung from `root`.
    pub fn rooted_at(&self, root: usize) -> RootedTree {
        let count = self.bags.len();
        let mut parent = vec![None; count];
        let mut children = vec![Vec::new(); count];
        let mut seen = vec![false; count];
        let mut preorder = Vec::with_capacity(count);
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(a) = stack.pop() {
            preorder.push(a);
            for &b in self.adjacency[a].iter().rev() {
                if !seen[b] {
                    seen[b] = true;
                    parent[b] = Some(a);
                    children[a].push(b);
                    stack.push(b);
                }
            }
        }
        for list in &mut children {
            list.sort_unstable();
        }
        RootedTree {
            root,
            parent,
            children,
            preorder,
        }
    }

    /// Bags of the subtree under `bag` when the tree hangs from `root`.
    pub(crate) fn subtree_vertices(&self, tree: &RootedTree, bag: usize) -> VertexSet {
        let mut out = Vec::new();
        let mut stack = vec![bag];
        while let Some(a) = stack.pop() {
            out.extend(self.bags[a].iter());
            stack.extend(tree.children[a].iter().copied());
        }
        VertexSet::from(out)
    }
}

/// A tree decomposition's tree with a chosen root.
#[derive(Debug, Clone)]
pub struct RootedTree {
    pub root: usize,
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
    pub preorder: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TdViolation {
    /// The tree edges do not form a tree on the bags.
    NotATree(String),
    UnknownVertex { vertex: usize, bag: usize },
    /// A vertex lies in no bag.
    UncoveredVertex(usize),
    /// No bag holds both ends of an edge.
    UncoveredEdge(usize, usize),
    /// The bags containing a vertex do not form a subtree.
    ScatteredVertex(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TdReport {
    pub width: usize,
    pub violations: Vec<TdViolation>,
}

impl TdReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks coverage of vertices and edges and the subtree property, and
/// reports the width.
pub fn validate_tree_decomposition(g: &Graph, d: &TreeDecomposition) -> TdReport {
    let n = g.vertex_count();
    let count = d.bag_count();
    let mut violations = Vec::new();

    if count == 0 {
        violations.push(TdViolation::NotATree("no bags".into()));
    } else if d.tree_edges().len() + 1 != count
        || d.rooted_at(0).preorder.len() != count
    {
        violations.push(TdViolation::NotATree(format!(
            "{} edges on {} bags do not form a tree",
            d.tree_edges().len(),
            count
        )));
    }

    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, bag) in d.bags().iter().enumerate() {
        for v in bag.iter() {
            if v < n {
                holders[v].push(i);
            } else {
                violations.push(TdViolation::UnknownVertex { vertex: v, bag: i });
            }
        }
    }
    for (v, list) in holders.iter().enumerate() {
        if list.is_empty() {
            violations.push(TdViolation::UncoveredVertex(v));
        }
    }
    for &(u, v) in g.edges() {
        if !holders[u].iter().any(|&i| d.bag(i).contains(v)) {
            violations.push(TdViolation::UncoveredEdge(u, v));
        }
    }
    for (v, list) in holders.iter().enumerate() {
        if list.len() < 2 {
            continue;
        }
        let member: HashSet<usize> = list.iter().copied().collect();
        let mut seen = HashSet::from([list[0]]);
        let mut stack = vec![list[0]];
        while let Some(a) = stack.pop() {
            for &b in d.neighbors(a) {
                if member.contains(&b) && seen.insert(b) {
                    stack.push(b);
                }
            }
        }
        if seen.len() != list.len() {
            violations.push(TdViolation::ScatteredVertex(v));
        }
    }
    TdReport {
        width: d.width(),
        violations,
    }
}

/// Fails with [`Error::InvalidDecomposition`] unless `d` is a valid tree
/// decomposition of `g`.
pub(crate) fn require_valid(g: &Graph, d: &TreeDecomposition) -> Result<()> {
    let report = validate_tree_decomposition(g, d);
    match report.violations.first() {
        None => Ok(()),
        Some(v) => Err(Error::InvalidDecomposition(format!("{v:?}"))),
    }
}

/// Fixed-width bitset over vertex labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn full(n: usize) -> Self {
        let mut b = Bits::empty(n);
        for v in 0..n {
            b.set(v);
        }
        b
    }

    fn set(&mut self, v: usize) {
        self.0[v / 64] |= 1 << (v % 64);
    }

    fn clear(&mut self, v: usize) {
        self.0[v / 64] &= !(1 << (v % 64));
    }

    fn has(&self, v: usize) -> bool {
        self.0[v / 64] >> (v % 64) & 1 == 1
    }

    fn and_count(&self, other: &Bits) -> usize {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &w)| {
            (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| i * 64 + b)
        })
    }
}

/// Elimination-ordering search for a decomposition of width at most `k`.
struct Eliminator {
    k: usize,
    failed: HashSet<Bits>,
    /// `(vertex, neighbors at elimination time)` in elimination order.
    steps: Vec<(usize, Vec<usize>)>,
}

impl Eliminator {
    fn neighbors(adj: &[Bits], alive: &Bits, v: usize) -> Vec<usize> {
        adj[v].members().filter(|&w| alive.has(w)).collect()
    }

    fn is_clique(adj: &[Bits], vertices: &[usize]) -> bool {
        vertices
            .iter()
            .enumerate()
            .all(|(i, &u)| vertices[i + 1..].iter().all(|&w| adj[u].has(w)))
    }

    fn eliminate(adj: &mut [Bits], alive: &mut Bits, v: usize, nbrs: &[usize]) {
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                adj[a].set(b);
                adj[b].set(a);
            }
        }
        alive.clear(v);
    }

    fn search(&mut self, adj: &mut Vec<Bits>, alive: &mut Bits) -> bool {
        if alive.count() <= self.k + 1 {
            return true;
        }
        if self.failed.contains(alive) {
            return false;
        }
        let mut candidates = Vec::new();
        let members: Vec<usize> = alive.members().collect();
        for v in members {
            let degree = adj[v].and_count(alive);
            let nbrs = Self::neighbors(adj, alive, v);
            if Self::is_clique(adj, &nbrs) {
                if degree > self.k {
                    // A clique of size degree + 1 > k + 1 survives every order.
                    self.failed.insert(alive.clone());
                    return false;
                }
                // Simplicial vertices can always be eliminated first.
                Self::eliminate(adj, alive, v, &nbrs);
                self.steps.push((v, nbrs));
                if self.search(adj, alive) {
                    return true;
                }
                self.steps.pop();
                alive.set(v);
                self.failed.insert(alive.clone());
                return false;
            }
            if degree <= self.k {
                candidates.push((degree, v, nbrs));
            }
        }
        candidates.sort();
        for (_, v, nbrs) in candidates {
            let saved = adj.clone();
            Self::eliminate(adj, alive, v, &nbrs);
            self.steps.push((v, nbrs));
            if self.search(adj, alive) {
                return true;
            }
            self.steps.pop();
            *adj = saved;
            alive.set(v);
        }
        self.failed.insert(alive.clone());
        false
    }
}

/// Tree decomposition of width at most `k`, found by searching vertex
/// elimination orders with memoized failures on the set of remaining
/// vertices. Fails with [`Error::WidthExceeded`] when the treewidth exceeds
/// `k`. The result is rooted and deterministic for a fixed input.
pub fn compute_tree_decomposition(g: &Graph, k: usize) -> Result<TreeDecomposition> {
    let n = g.vertex_count();
    if n == 0 {
        return TreeDecomposition::new(vec![VertexSet::new()], vec![], Some(0));
    }
    let mut adj: Vec<Bits> = (0..n)
        .map(|v| {
            let mut b = Bits::empty(n);
            for &w in g.neighbors(v) {
                b.set(w);
            }
            b
        })
        .collect();
    let mut alive = Bits::full(n);
    let mut search = Eliminator {
        k,
        failed: HashSet::new(),
        steps: Vec::new(),
    };
    if !search.search(&mut adj, &mut alive) {
        return Err(Error::WidthExceeded(k));
    }

    // Bag per eliminated vertex plus one bag for the remainder.
    let remainder: VertexSet = alive.members().collect();
    let mut eliminated_at = vec![usize::MAX; n];
    for (i, (v, _)) in search.steps.iter().enumerate() {
        eliminated_at[*v] = i;
    }
    let last = search.steps.len();
    let mut bags: Vec<VertexSet> = search
        .steps
        .iter()
        .map(|(v, nbrs)| {
            let mut bag = VertexSet::from(nbrs.clone());
            bag.insert(*v);
            bag
        })
        .collect();
    bags.push(remainder);
    let mut parent: Vec<Option<usize>> = search
        .steps
        .iter()
        .map(|(_, nbrs)| {
            Some(
                nbrs.iter()
                    .map(|&w| eliminated_at[w])
                    .filter(|&i| i != usize::MAX)
                    .min()
                    .unwrap_or(last),
            )
        })
        .collect();
    parent.push(None);
    Ok(simplify(bags, parent, last))
}

/// Contracts tree edges whose child bag is contained in its parent or vice
/// versa, then renumbers bags in preorder from the root.
fn simplify(mut bags: Vec<VertexSet>, mut parent: Vec<Option<usize>>, root: usize) -> TreeDecomposition {
    let count = bags.len();
    let mut alive = vec![true; count];
    let mut root = root;
    loop {
        let mut changed = false;
        for a in 0..count {
            let Some(p) = parent[a].filter(|_| alive[a]) else {
                continue;
            };
            if bags[a].is_subset(&bags[p]) {
                // Fold a into p.
                for c in 0..count {
                    if alive[c] && parent[c] == Some(a) {
                        parent[c] = Some(p);
                    }
                }
                alive[a] = false;
                changed = true;
            } else if bags[p].is_subset(&bags[a]) {
                // Fold p into a; a takes p's place.
                for c in 0..count {
                    if alive[c] && c != a && parent[c] == Some(p) {
                        parent[c] = Some(a);
                    }
                }
                parent[a] = parent[p];
                if root == p {
                    root = a;
                }
                alive[p] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut children = vec![Vec::new(); count];
    for a in 0..count {
        if let Some(p) = parent[a].filter(|_| alive[a]) {
            children[p].push(a);
        }
    }
    let mut order = Vec::new();
    let mut stack = vec![root];
    while let Some(a) = stack.pop() {
        order.push(a);
        let mut kids = children[a].clone();
        kids.sort_by(|x, y| bags[*x].cmp(&bags[*y]));
        stack.extend(kids.into_iter().rev());
    }
    let mut new_id = vec![usize::MAX; count];
    for (i, &a) in order.iter().enumerate() {
        new_id[a] = i;
    }
    let edges = order
        .iter()
        .filter_map(|&a| parent[a].map(|p| (new_id[p], new_id[a])))
        .collect();
    let bags = order.iter().map(|&a| std::mem::take(&mut bags[a])).collect();
    TreeDecomposition::new(bags, edges, Some(0)).expect("renumbered edges are in range")
}

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::perm::Permutation;
use crate::treewidth::TreeDecomposition;

/// A graph with an optional tree decomposition and the seed it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceBundle {
    pub graph: Graph,
    pub decomposition: Option<TreeDecomposition>,
    pub seed: u64,
}

/// Random partial k-tree on `n` vertices with a width-`k` decomposition.
///
/// Starts from a `(k+1)`-clique and repeatedly joins a new vertex to `k`
/// vertices of a random existing bag, then keeps each edge with probability
/// `ratio`. Vertex labels are shuffled at the end.
pub fn generate_partial_ktree(n: usize, k: usize, ratio: f64, seed: u64) -> Result<InstanceBundle> {
    if k < 1 || n <= k {
        return Err(Error::InvalidParams(format!("need n > k >= 1, got n={n}, k={k}")));
    }
    if !(0.0..=1.0).contains(&ratio) {
        return Err(Error::InvalidParams(format!("ratio {ratio} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bags: Vec<Vec<usize>> = vec![(0..=k).collect()];
    let mut tree = Vec::new();
    let mut edges = Vec::new();
    for u in 0..=k {
        for v in u + 1..=k {
            edges.push((u, v));
        }
    }
    for v in k + 1..n {
        let host = rng.gen_range(0..bags.len());
        let drop = rng.gen_range(0..=k);
        let mut bag: Vec<usize> = bags[host]
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != drop)
            .map(|(_, &w)| w)
            .collect();
        edges.extend(bag.iter().map(|&w| (w, v)));
        bag.push(v);
        tree.push((host, bags.len()));
        bags.push(bag);
    }
    edges.retain(|_| rng.gen_bool(ratio));

    let mut images: Vec<usize> = (0..n).collect();
    images.shuffle(&mut rng);
    let p = Permutation::from_images(images).expect("shuffle is a permutation");
    let edges: Vec<_> = edges.iter().map(|&(u, v)| (p.apply(u), p.apply(v))).collect();
    let graph = Graph::from_edges(n, &edges)?;
    let bags = bags
        .iter()
        .map(|b| b.iter().map(|&v| p.apply(v)).collect::<VertexSet>())
        .collect();
    let decomposition = TreeDecomposition::new(bags, tree, Some(0))?;
    Ok(InstanceBundle {
        graph,
        decomposition: Some(decomposition),
        seed,
    })
}

/// Relabels `g` by a permutation drawn from `seed`; seed 0 is the identity.
/// Returns the relabeled graph and the map from old to new labels.
pub fn random_relabel(g: &Graph, seed: u64) -> (Graph, Permutation) {
    let n = g.vertex_count();
    let mut images: Vec<usize> = (0..n).collect();
    if seed != 0 {
        images.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    let p = Permutation::from_images(images).expect("shuffle is a permutation");
    (p.apply_to_graph(g), p)
}

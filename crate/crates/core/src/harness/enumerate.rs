use std::collections::HashMap;

use crate::graph::Graph;
use crate::harness::oracle::brute_force_iso;

/// One representative of every isomorphism class of connected graphs on
/// `n` vertices. Each class on `n` vertices arises from one on `n - 1` by
/// adding a vertex joined to a nonempty set (delete a non-cut vertex to see
/// this); duplicates are removed with the oracle inside invariant buckets.
/// Intended for `n <= 7`.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    if n == 0 {
        return Vec::new();
    }
    let mut reps = vec![Graph::empty(1)];
    for size in 2..=n {
        let mut buckets: HashMap<Vec<(usize, Vec<usize>)>, Vec<Graph>> = HashMap::new();
        let mut next = Vec::new();
        for base in &reps {
            let new = size - 1;
            for mask in 1u32..(1 << new) {
                let mut edges = base.edges().to_vec();
                edges.extend((0..new).filter(|v| mask >> v & 1 == 1).map(|v| (v, new)));
                let g = Graph::from_edges(size, &edges).expect("extension is simple");
                let bucket = buckets.entry(invariant(&g)).or_default();
                if bucket.iter().all(|r| brute_force_iso(r, &g).is_none()) {
                    bucket.push(g.clone());
                    next.push(g);
                }
            }
        }
        reps = next;
    }
    reps
}

/// Sorted (degree, sorted neighbor degrees) pairs.
fn invariant(g: &Graph) -> Vec<(usize, Vec<usize>)> {
    let mut key: Vec<(usize, Vec<usize>)> = (0..g.vertex_count())
        .map(|v| {
            let mut around: Vec<usize> = g.neighbors(v).iter().map(|&w| g.degree(w)).collect();
            around.sort_unstable();
            (g.degree(v), around)
        })
        .collect();
    key.sort();
    key
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_known_values() {
        let counts: Vec<usize> = (1..=6).map(|n| connected_graphs(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 21, 112]);
        assert!(connected_graphs(5).iter().all(Graph::is_connected));
    }
}

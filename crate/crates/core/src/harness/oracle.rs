use crate::graph::Graph;
use crate::perm::Permutation;

/// Plain backtracking isomorphism search, independent of every
/// decomposition-based routine. Vertices of `g` are placed in breadth-first
/// order so each new vertex is usually adjacent to a placed one; candidates
/// must match degree and adjacency to everything placed so far.
pub fn brute_force_iso(g: &Graph, h: &Graph) -> Option<Permutation> {
    let n = g.vertex_count();
    if n != h.vertex_count() || g.edge_count() != h.edge_count() {
        return None;
    }
    let mut gd: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut hd: Vec<usize> = (0..n).map(|v| h.degree(v)).collect();
    gd.sort_unstable();
    hd.sort_unstable();
    if gd != hd {
        return None;
    }

    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut head = order.len();
        order.push(start);
        while head < order.len() {
            let v = order[head];
            head += 1;
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
        }
    }

    let mut image = vec![usize::MAX; n];
    let mut taken = vec![false; n];
    if extend(g, h, &order, 0, &mut image, &mut taken) {
        let p = Permutation::from_images(image).expect("search builds a bijection");
        assert!(p.is_isomorphism(g, h));
        Some(p)
    } else {
        None
    }
}

fn extend(g: &Graph, h: &Graph, order: &[usize], i: usize, image: &mut [usize], taken: &mut [bool]) -> bool {
    let Some(&u) = order.get(i) else {
        return true;
    };
    for w in 0..h.vertex_count() {
        if taken[w] || g.degree(u) != h.degree(w) {
            continue;
        }
        let fits = order[..i]
            .iter()
            .all(|&v| g.has_edge(u, v) == h.has_edge(w, image[v]));
        if !fits {
            continue;
        }
        image[u] = w;
        taken[w] = true;
        if extend(g, h, order, i + 1, image, taken) {
            return true;
        }
        taken[w] = false;
    }
    image[u] = usize::MAX;
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        Graph::from_edges(10, &edges).unwrap()
    }

    #[test]
    fn identity_and_small_cases() {
        let g = Graph::cycle(5);
        assert!(brute_force_iso(&g, &g).is_some());
        assert!(brute_force_iso(&Graph::complete(3), &Graph::path(3)).is_none());
        assert!(brute_force_iso(&Graph::empty(0), &Graph::empty(0)).is_some());
    }

    #[test]
    fn petersen_relabeled() {
        let g = petersen();
        let p = Permutation::from_images(vec![7, 2, 9, 0, 4, 1, 8, 3, 6, 5]).unwrap();
        let h = p.apply_to_graph(&g);
        let found = brute_force_iso(&g, &h).unwrap();
        assert!(found.is_isomorphism(&g, &h));
        assert!(brute_force_iso(&h, &g).is_some());
    }

    #[test]
    fn same_degrees_different_graphs() {
        // C6 and two triangles are both 2-regular.
        let two = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert!(brute_force_iso(&Graph::cycle(6), &two).is_none());
        assert!(brute_force_iso(&two, &Graph::cycle(6)).is_none());
    }
}

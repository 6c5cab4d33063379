use crate::error::{Error, Result};
use crate::graph::Graph;

/// A bijection on `0..n`, stored as its image list: vertex `v` maps to
/// `image[v]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (0..n).collect(),
        }
    }

    pub fn from_images(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &v in &image {
            if v >= n || seen[v] {
                return Err(Error::InvalidParams(format!(
                    "image list is not a permutation of 0..{n}"
                )));
            }
            seen[v] = true;
        }
        Ok(Permutation { image })
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn apply(&self, v: usize) -> usize {
        self.image[v]
    }

    pub fn images(&self) -> &[usize] {
        &self.image
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.image.len()];
        for (v, &w) in self.image.iter().enumerate() {
            inv[w] = v;
        }
        Permutation { image: inv }
    }

    /// `other ∘ self`: first apply `self`, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation {
            image: self.image.iter().map(|&w| other.image[w]).collect(),
        }
    }

    /// Relabels `g` so that vertex `v` becomes `self.apply(v)`.
    pub fn apply_to_graph(&self, g: &Graph) -> Graph {
        assert_eq!(g.vertex_count(), self.len(), "permutation size mismatch");
        let edges: Vec<_> = g
            .edges()
            .iter()
            .map(|&(u, v)| (self.image[u], self.image[v]))
            .collect();
        Graph::from_edges(g.vertex_count(), &edges).expect("relabeling keeps the graph simple")
    }

    /// Whether `self` is an isomorphism from `g` onto `h`, checked edge by
    /// edge in both directions.
    pub fn is_isomorphism(&self, g: &Graph, h: &Graph) -> bool {
        g.vertex_count() == self.len()
            && h.vertex_count() == self.len()
            && g.edge_count() == h.edge_count()
            && g
                .edges()
                .iter()
                .all(|&(u, v)| h.has_edge(self.image[u], self.image[v]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_compose() {
        let p = Permutation::from_images(vec![2, 0, 1]).unwrap();
        assert_eq!(p.then(&p.inverse()), Permutation::identity(3));
        assert!(Permutation::from_images(vec![0, 0]).is_err());
    }

    #[test]
    fn relabeling_is_an_isomorphism() {
        let g = Graph::path(4);
        let p = Permutation::from_images(vec![3, 1, 0, 2]).unwrap();
        let h = p.apply_to_graph(&g);
        assert!(p.is_isomorphism(&g, &h));
        assert!(!Permutation::identity(4).is_isomorphism(&g, &h));
    }
}

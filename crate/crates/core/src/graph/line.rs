use super::{Graph, VertexId};

/// A line graph together with the correspondence to the host's edges.
///
/// Line-graph vertex `i` (Id `i + 1`) is host edge number `i`, so Ids are the
/// lexicographic ranks of the `(lower Id, higher Id)` pairs.
#[derive(Clone, Debug)]
pub struct LineGraphMap {
    pub lg: Graph,
    edge_of: Vec<(VertexId, VertexId)>,
}

impl LineGraphMap {
    /// Host edge (by Ids, lower first) simulated by line-graph vertex index `x`.
    pub fn edge_of(&self, x: usize) -> (VertexId, VertexId) {
        self.edge_of[x]
    }

    /// Line-graph vertex index of a host edge given by Ids in either order.
    pub fn vertex_of(&self, u: VertexId, w: VertexId) -> Option<usize> {
        let key = (u.min(w), u.max(w));
        self.edge_of.binary_search(&key).ok()
    }

    pub fn len(&self) -> usize {
        self.edge_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edge_of.is_empty()
    }
}

pub fn build_line_graph(g: &Graph) -> LineGraphMap {
    let m = g.m();
    let mut pairs = Vec::new();
    for v in 0..g.n() {
        let inc = g.incident_edges(v);
        for i in 0..inc.len() {
            for j in i + 1..inc.len() {
                let (a, b) = (inc[i].min(inc[j]), inc[i].max(inc[j]));
                pairs.push((a, b));
            }
        }
    }
    // Two distinct edges share at most one endpoint, so there are no duplicates.
    pairs.sort_unstable();
    let ids = (1..=m as VertexId).collect();
    let lg = Graph::from_sorted_index_edges(ids, pairs);
    let edge_of = (0..m).map(|e| g.edge_ids(e)).collect();
    LineGraphMap { lg, edge_of }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Pairwise-incidence construction used as an independent reference.
    fn brute(g: &Graph) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..g.m() {
            for j in i + 1..g.m() {
                let (a, b) = g.edges()[i];
                let (c, d) = g.edges()[j];
                if a == c || a == d || b == c || b == d {
                    out.push((i, j));
                }
            }
        }
        out
    }

    #[test]
    fn triangle_is_its_own_line_graph() {
        let g = Graph::from_edges(3, &[(1, 2), (2, 3), (1, 3)]).unwrap();
        let l = build_line_graph(&g);
        assert_eq!((l.lg.n(), l.lg.m()), (3, 3));
    }

    #[test]
    fn star_becomes_clique() {
        let g = Graph::from_edges(6, &[(1, 2), (1, 3), (1, 4), (1, 5), (1, 6)]).unwrap();
        let l = build_line_graph(&g);
        assert_eq!(l.lg.n(), 5);
        assert_eq!(l.lg.m(), 10);
        let got: Vec<(usize, usize)> = l.lg.edges().iter().map(|&(a, b)| (a as usize, b as usize)).collect();
        assert_eq!(got, brute(&g));
    }

    #[test]
    fn ids_are_pair_ranks() {
        let g = Graph::from_edges(4, &[(3, 4), (1, 2), (2, 4)]).unwrap();
        let l = build_line_graph(&g);
        assert_eq!(l.edge_of(0), (1, 2));
        assert_eq!(l.edge_of(1), (2, 4));
        assert_eq!(l.edge_of(2), (3, 4));
        assert_eq!(l.vertex_of(4, 2), Some(1));
        assert_eq!(l.lg.ids(), &[1, 2, 3]);
    }

    #[test]
    fn empty_graph() {
        let g = Graph::from_edges(3, &[]).unwrap();
        assert!(build_line_graph(&g).is_empty());
    }
}

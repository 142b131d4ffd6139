use super::Graph;
use crate::coloring::VertexColoring;
use crate::error::Result;

/// Direction for every edge of a graph, stored as the head's vertex index per edge number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orientation {
    head: Vec<u32>,
}

impl Orientation {
    /// `heads[e]` must be an endpoint of edge `e`.
    pub fn new(g: &Graph, heads: Vec<u32>) -> Self {
        assert_eq!(heads.len(), g.m());
        for (e, &h) in heads.iter().enumerate() {
            let (a, b) = g.edges()[e];
            assert!(h == a || h == b, "head of edge {e} is not an endpoint");
        }
        Orientation { head: heads }
    }

    pub fn head(&self, e: usize) -> usize {
        self.head[e] as usize
    }

    pub fn tail(&self, g: &Graph, e: usize) -> usize {
        let (a, b) = g.edges()[e];
        if self.head[e] == a {
            b as usize
        } else {
            a as usize
        }
    }

    pub fn out_degree(&self, g: &Graph, v: usize) -> usize {
        g.incident_edges(v).iter().filter(|&&e| self.head[e as usize] as usize != v).count()
    }

    pub fn in_degree(&self, g: &Graph, v: usize) -> usize {
        g.degree(v) - self.out_degree(g, v)
    }

    pub fn max_out_degree(&self, g: &Graph) -> usize {
        (0..g.n()).map(|v| self.out_degree(g, v)).max().unwrap_or(0)
    }

    /// Out-neighbors of `v`, as vertex indices.
    pub fn out_neighbors<'a>(&'a self, g: &'a Graph, v: usize) -> impl Iterator<Item = usize> + 'a {
        g.incident_edges(v).iter().map(|&e| self.head[e as usize] as usize).filter(move |&h| h != v)
    }

    /// A topological order in which every vertex comes after all its out-neighbors,
    /// or `None` when the orientation has a cycle.
    pub fn sink_first_order(&self, g: &Graph) -> Option<Vec<usize>> {
        let mut out: Vec<usize> = (0..g.n()).map(|v| self.out_degree(g, v)).collect();
        let mut order: Vec<usize> = (0..g.n()).filter(|&v| out[v] == 0).collect();
        let mut i = 0;
        while i < order.len() {
            let h = order[i];
            i += 1;
            for &e in g.incident_edges(h) {
                let e = e as usize;
                if self.head[e] as usize == h {
                    let t = self.tail(g, e);
                    out[t] -= 1;
                    if out[t] == 0 {
                        order.push(t);
                    }
                }
            }
        }
        (order.len() == g.n()).then_some(order)
    }

    pub fn is_acyclic(&self, g: &Graph) -> bool {
        self.sink_first_order(g).is_some()
    }
}

/// Orients each edge toward the endpoint with the smaller color, ties toward the smaller Id.
pub fn orient_by_color_then_id(g: &Graph, phi: &VertexColoring) -> Result<Orientation> {
    let col = phi.aligned(g)?;
    let heads = g
        .edges()
        .iter()
        .map(|&(a, b)| {
            // a < b as indices, hence Id(a) < Id(b).
            if col[b as usize] < col[a as usize] {
                b
            } else {
                a
            }
        })
        .collect();
    Ok(Orientation { head: heads })
}

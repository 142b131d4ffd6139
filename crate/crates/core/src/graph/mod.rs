//! Immutable simple graphs with distinct vertex Ids.
//!
//! Vertices are stored in increasing Id order, so index order and Id order agree.
//! Edges are numbered `0..m` in lexicographic order of their `(lower Id, higher Id)` pair.

mod independence;
mod line;
mod orientation;

pub use independence::{neighborhood_independence, neighborhood_independence_capped, vertex_independence};
pub use line::{build_line_graph, LineGraphMap};
pub use orientation::{orient_by_color_then_id, Orientation};

use crate::error::{Error, Result};
use std::collections::VecDeque;
use std::fmt::Write as _;

pub type VertexId = u32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    ids: Vec<VertexId>,
    adj: Vec<Vec<u32>>,
    adj_edge: Vec<Vec<u32>>,
    edges: Vec<(u32, u32)>,
    delta: usize,
}

impl Graph {
    /// Graph on Ids `1..=n` from `(u, v)` Id pairs.
    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        Self::with_ids((1..=n as VertexId).collect(), edges)
    }

    /// Graph on an arbitrary set of distinct Ids. Edges are given by Id.
    pub fn with_ids(mut ids: Vec<VertexId>, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Graph("duplicate vertex Id".into()));
        }
        let mut pairs = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u == v {
                return Err(Error::Graph(format!("self-loop at {u}")));
            }
            let iu = ids.binary_search(&u).map_err(|_| Error::Graph(format!("unknown vertex {u}")))?;
            let iv = ids.binary_search(&v).map_err(|_| Error::Graph(format!("unknown vertex {v}")))?;
            pairs.push((iu.min(iv) as u32, iu.max(iv) as u32));
        }
        pairs.sort_unstable();
        if let Some(w) = pairs.windows(2).find(|w| w[0] == w[1]) {
            let (a, b) = w[0];
            return Err(Error::Graph(format!("duplicate edge {} {}", ids[a as usize], ids[b as usize])));
        }
        Ok(Self::from_sorted_index_edges(ids, pairs))
    }

    /// `pairs` must be sorted, deduplicated, with `a < b` in each pair.
    fn from_sorted_index_edges(ids: Vec<VertexId>, pairs: Vec<(u32, u32)>) -> Self {
        let n = ids.len();
        let mut deg = vec![0usize; n];
        for &(a, b) in &pairs {
            deg[a as usize] += 1;
            deg[b as usize] += 1;
        }
        let mut adj: Vec<Vec<u32>> = deg.iter().map(|&d| Vec::with_capacity(d)).collect();
        let mut adj_edge: Vec<Vec<u32>> = deg.iter().map(|&d| Vec::with_capacity(d)).collect();
        // Lex order of pairs makes each list come out sorted: for vertex x, partners
        // a < x arrive (in increasing a) before partners b > x (in increasing b).
        for (e, &(a, b)) in pairs.iter().enumerate() {
            adj[a as usize].push(b);
            adj_edge[a as usize].push(e as u32);
        }
        let mut lower: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n];
        for (e, &(a, b)) in pairs.iter().enumerate() {
            lower[b as usize].push((a, e as u32));
        }
        for x in 0..n {
            if lower[x].is_empty() {
                continue;
            }
            let mut na: Vec<u32> = lower[x].iter().map(|p| p.0).collect();
            let mut ne: Vec<u32> = lower[x].iter().map(|p| p.1).collect();
            na.extend_from_slice(&adj[x]);
            ne.extend_from_slice(&adj_edge[x]);
            adj[x] = na;
            adj_edge[x] = ne;
        }
        let delta = deg.iter().copied().max().unwrap_or(0);
        Graph { ids, adj, adj_edge, edges: pairs, delta }
    }

    pub fn empty() -> Self {
        Graph { ids: Vec::new(), adj: Vec::new(), adj_edge: Vec::new(), edges: Vec::new(), delta: 0 }
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn ids(&self) -> &[VertexId] {
        &self.ids
    }

    pub fn id(&self, v: usize) -> VertexId {
        self.ids[v]
    }

    pub fn max_id(&self) -> VertexId {
        self.ids.last().copied().unwrap_or(0)
    }

    pub fn index_of(&self, id: VertexId) -> Option<usize> {
        self.ids.binary_search(&id).ok()
    }

    /// Neighbor indices of `v`, sorted.
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    /// Edge numbers of `v`'s incident edges, aligned with [`Graph::neighbors`].
    pub fn incident_edges(&self, v: usize) -> &[u32] {
        &self.adj_edge[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Edges as index pairs `(a, b)`, `a < b`, in lexicographic order.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn edge_ids(&self, e: usize) -> (VertexId, VertexId) {
        let (a, b) = self.edges[e];
        (self.ids[a as usize], self.ids[b as usize])
    }

    /// Position of `w` in `v`'s adjacency list.
    pub fn slot_of(&self, v: usize, w: usize) -> Option<usize> {
        self.adj[v].binary_search(&(w as u32)).ok()
    }

    pub fn has_edge(&self, v: usize, w: usize) -> bool {
        self.slot_of(v, w).is_some()
    }

    pub fn edge_index(&self, v: usize, w: usize) -> Option<usize> {
        self.slot_of(v, w).map(|s| self.adj_edge[v][s] as usize)
    }

    /// Edge number for an Id pair in either order.
    pub fn edge_by_ids(&self, u: VertexId, w: VertexId) -> Option<usize> {
        self.edge_index(self.index_of(u)?, self.index_of(w)?)
    }

    /// Induced subgraph on the vertices whose `keep` flag is set; Ids are preserved.
    pub fn induced_by_mask(&self, keep: &[bool]) -> Graph {
        let mut new_index = vec![u32::MAX; self.n()];
        let mut ids = Vec::new();
        for v in 0..self.n() {
            if keep[v] {
                new_index[v] = ids.len() as u32;
                ids.push(self.ids[v]);
            }
        }
        let pairs: Vec<(u32, u32)> = self
            .edges
            .iter()
            .filter(|&&(a, b)| keep[a as usize] && keep[b as usize])
            .map(|&(a, b)| (new_index[a as usize], new_index[b as usize]))
            .collect();
        Self::from_sorted_index_edges(ids, pairs)
    }

    /// Induced subgraph on a set of Ids; unknown Ids are an error.
    pub fn induced_subgraph(&self, subset: &[VertexId]) -> Result<Graph> {
        let mut keep = vec![false; self.n()];
        for &id in subset {
            let v = self.index_of(id).ok_or_else(|| Error::Graph(format!("unknown vertex {id}")))?;
            keep[v] = true;
        }
        Ok(self.induced_by_mask(&keep))
    }

    /// Same vertex set, only the edges for which `keep(edge number)` holds.
    /// Returns the new graph and, for each new edge, its number in `self`.
    pub fn filter_edges(&self, mut keep: impl FnMut(usize) -> bool) -> (Graph, Vec<u32>) {
        let mut origin = Vec::new();
        let mut pairs = Vec::new();
        for (e, &pr) in self.edges.iter().enumerate() {
            if keep(e) {
                origin.push(e as u32);
                pairs.push(pr);
            }
        }
        (Self::from_sorted_index_edges(self.ids.clone(), pairs), origin)
    }

    /// Vertices within `radius` hops of `v`, as an induced subgraph.
    pub fn ball(&self, v: usize, radius: usize) -> Graph {
        let mut dist = vec![usize::MAX; self.n()];
        let mut queue = VecDeque::new();
        dist[v] = 0;
        queue.push_back(v);
        while let Some(x) = queue.pop_front() {
            if dist[x] == radius {
                continue;
            }
            for &y in &self.adj[x] {
                let y = y as usize;
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        let keep: Vec<bool> = dist.iter().map(|&d| d != usize::MAX).collect();
        self.induced_by_mask(&keep)
    }

    /// Parses the `n m` / `u v` edge-list format. Ids must lie in `1..=n`.
    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hl, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
        let nums = parse_pair(hl, header)?;
        let (n, m) = (nums.0 as usize, nums.1 as usize);
        let mut edges = Vec::with_capacity(m);
        for (ln, line) in lines {
            let (u, v) = parse_pair(ln, line)?;
            if u == v {
                return Err(Error::Parse { line: ln, msg: format!("self-loop at {u}") });
            }
            if u == 0 || v == 0 || u as usize > n || v as usize > n {
                return Err(Error::Parse { line: ln, msg: format!("vertex out of range 1..{n}") });
            }
            edges.push((u as VertexId, v as VertexId));
        }
        if edges.len() != m {
            return Err(Error::Parse { line: hl, msg: format!("header announces {m} edges, found {}", edges.len()) });
        }
        Graph::from_edges(n, &edges)
    }

    /// Writes the edge-list format. Only meaningful when Ids are exactly `1..=n`.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.n(), self.m());
        for e in 0..self.m() {
            let (u, v) = self.edge_ids(e);
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }
}

fn parse_pair(line: usize, text: &str) -> Result<(u64, u64)> {
    let mut it = text.split_whitespace();
    let mut next = || -> Result<u64> {
        it.next()
            .ok_or_else(|| Error::Parse { line, msg: "expected two integers".into() })?
            .parse::<u64>()
            .map_err(|e| Error::Parse { line, msg: e.to_string() })
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(Error::Parse { line, msg: "trailing tokens".into() });
    }
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(n: usize) -> Graph {
        let mut e = Vec::new();
        for u in 1..=n as u32 {
            for v in u + 1..=n as u32 {
                e.push((u, v));
            }
        }
        Graph::from_edges(n, &e).unwrap()
    }

    #[test]
    fn adjacency_is_sorted_and_symmetric() {
        let g = Graph::from_edges(5, &[(3, 1), (2, 3), (5, 3), (1, 2), (4, 5)]).unwrap();
        assert_eq!(g.m(), 5);
        assert_eq!(g.delta(), 3);
        for v in 0..g.n() {
            assert!(g.neighbors(v).windows(2).all(|w| w[0] < w[1]));
            for (s, &w) in g.neighbors(v).iter().enumerate() {
                assert!(g.has_edge(w as usize, v));
                let e = g.incident_edges(v)[s] as usize;
                let (a, b) = g.edges()[e];
                assert!((a as usize, b as usize) == (v.min(w as usize), v.max(w as usize)));
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Graph::from_edges(3, &[(1, 1)]).is_err());
        assert!(Graph::from_edges(3, &[(1, 4)]).is_err());
        assert!(Graph::from_edges(3, &[(1, 2), (2, 1)]).is_err());
        assert!(Graph::parse_edge_list("3 1\n1 1\n").is_err());
        assert!(Graph::parse_edge_list("3 1\n1 9\n").is_err());
        assert!(Graph::parse_edge_list("3 2\n1 2\n2 1\n").is_err());
        assert!(Graph::parse_edge_list("3 2\n1 2\n").is_err());
    }

    #[test]
    fn edge_list_round_trip() {
        let g = k(4);
        let h = Graph::parse_edge_list(&g.to_edge_list()).unwrap();
        assert_eq!(g, h);
    }

    #[test]
    fn induced_subgraph_keeps_ids() {
        let g = k(4);
        let h = g.induced_subgraph(&[1, 2]).unwrap();
        assert_eq!(h.n(), 2);
        assert_eq!(h.m(), 1);
        assert_eq!(h.ids(), &[1, 2]);
        assert_eq!(g.induced_subgraph(g.ids()).unwrap(), g);
        let h = g.induced_subgraph(&[4, 2]).unwrap();
        assert_eq!(h.ids(), &[2, 4]);
        assert_eq!(h.edge_ids(0), (2, 4));
    }

    #[test]
    fn filter_and_ball() {
        let g = Graph::from_edges(5, &[(1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        let (h, origin) = g.filter_edges(|e| e != 1);
        assert_eq!(h.n(), 5);
        assert_eq!(h.m(), 3);
        assert_eq!(origin, vec![0, 2, 3]);
        let b = g.ball(0, 2);
        assert_eq!(b.ids(), &[1, 2, 3]);
        assert_eq!(b.m(), 2);
    }

    #[test]
    fn path_of_one_vertex() {
        let g = Graph::from_edges(1, &[]).unwrap();
        assert_eq!((g.n(), g.m(), g.delta()), (1, 0, 0));
    }
}

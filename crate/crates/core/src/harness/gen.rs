use crate::error::{Error, Result};
use crate::graph::{build_line_graph, Graph, VertexId};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

/// A graph generator and its parameters, written as `kind:args`:
/// `path:n`, `cycle:n`, `complete:n`, `bipartite:a,b`, `gnd:n,d`, `clique_pendant:n`,
/// `hyperline:r,vertices,hyperedges`, `line:<inner spec>` and `file:<edge-list path>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphSpec {
    Path(usize),
    Cycle(usize),
    Complete(usize),
    Bipartite(usize, usize),
    /// Random graph on `n` vertices with maximum degree at most `d`.
    RandomGnd { n: usize, d: usize },
    /// A clique on `n/2` vertices, each with one pendant neighbor.
    CliquePendant(usize),
    /// Line graph of a random `r`-uniform hypergraph.
    HypergraphLine { r: usize, vertices: usize, hyperedges: usize },
    LineOf(Box<GraphSpec>),
    /// An edge-list file.
    File(String),
}

impl GraphSpec {
    /// A bound on the neighborhood independence that holds by construction.
    pub fn known_c(&self) -> Option<u64> {
        match self {
            GraphSpec::Path(_) | GraphSpec::Cycle(_) | GraphSpec::CliquePendant(_) | GraphSpec::LineOf(_) => Some(2),
            GraphSpec::Complete(_) => Some(1),
            GraphSpec::Bipartite(a, b) => Some((*a).max(*b) as u64),
            GraphSpec::HypergraphLine { r, .. } => Some(*r as u64),
            GraphSpec::RandomGnd { .. } | GraphSpec::File(_) => None,
        }
    }

    /// Builds the graph; random kinds draw from `seed`.
    pub fn generate(&self, seed: u64) -> Result<Graph> {
        match *self {
            GraphSpec::Path(n) => path(n),
            GraphSpec::Cycle(n) => cycle(n),
            GraphSpec::Complete(n) => complete(n),
            GraphSpec::Bipartite(a, b) => bipartite(a, b),
            GraphSpec::RandomGnd { n, d } => random_gnd(n, d, seed),
            GraphSpec::CliquePendant(n) => clique_pendant(n),
            GraphSpec::HypergraphLine { r, vertices, hyperedges } => hypergraph_line(r, vertices, hyperedges, seed),
            GraphSpec::LineOf(ref inner) => Ok(build_line_graph(&inner.generate(seed)?).lg),
            GraphSpec::File(ref path) => Graph::parse_edge_list(&std::fs::read_to_string(path)?),
        }
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::Path(n) => write!(f, "path:{n}"),
            GraphSpec::Cycle(n) => write!(f, "cycle:{n}"),
            GraphSpec::Complete(n) => write!(f, "complete:{n}"),
            GraphSpec::Bipartite(a, b) => write!(f, "bipartite:{a},{b}"),
            GraphSpec::RandomGnd { n, d } => write!(f, "gnd:{n},{d}"),
            GraphSpec::CliquePendant(n) => write!(f, "clique_pendant:{n}"),
            GraphSpec::HypergraphLine { r, vertices, hyperedges } => write!(f, "hyperline:{r},{vertices},{hyperedges}"),
            GraphSpec::LineOf(inner) => write!(f, "line:{inner}"),
            GraphSpec::File(path) => write!(f, "file:{path}"),
        }
    }
}

impl FromStr for GraphSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::Params(format!("graph spec `{s}`: {why}"));
        let (kind, rest) = s.split_once(':').ok_or_else(|| bad("expected kind:args"))?;
        if kind == "line" {
            return Ok(GraphSpec::LineOf(Box::new(rest.parse()?)));
        }
        if kind == "file" {
            return Ok(GraphSpec::File(rest.to_string()));
        }
        let nums: Vec<usize> = rest
            .split(',')
            .map(|x| x.trim().parse::<usize>().map_err(|_| bad("arguments must be non-negative integers")))
            .collect::<Result<_>>()?;
        let want = |k: usize| if nums.len() == k { Ok(()) } else { Err(bad(&format!("expected {k} argument(s)"))) };
        match kind {
            "path" => want(1).map(|_| GraphSpec::Path(nums[0])),
            "cycle" => want(1).map(|_| GraphSpec::Cycle(nums[0])),
            "complete" => want(1).map(|_| GraphSpec::Complete(nums[0])),
            "bipartite" => want(2).map(|_| GraphSpec::Bipartite(nums[0], nums[1])),
            "gnd" => want(2).map(|_| GraphSpec::RandomGnd { n: nums[0], d: nums[1] }),
            "clique_pendant" => want(1).map(|_| GraphSpec::CliquePendant(nums[0])),
            "hyperline" => want(3).map(|_| GraphSpec::HypergraphLine { r: nums[0], vertices: nums[1], hyperedges: nums[2] }),
            _ => Err(bad("unknown kind")),
        }
    }
}

impl Serialize for GraphSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GraphSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn ids(n: usize) -> Result<u32> {
    u32::try_from(n).map_err(|_| Error::Params(format!("{n} vertices do not fit 32-bit Ids")))
}

pub fn path(n: usize) -> Result<Graph> {
    let k = ids(n)?;
    let e: Vec<_> = (1..k).map(|i| (i, i + 1)).collect();
    Graph::from_edges(n, &e)
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::Params("a cycle needs at least 3 vertices".into()));
    }
    let k = ids(n)?;
    let e: Vec<_> = (1..=k).map(|i| (i.min(i % k + 1), i.max(i % k + 1))).collect();
    Graph::from_edges(n, &e)
}

pub fn complete(n: usize) -> Result<Graph> {
    let k = ids(n)?;
    let e: Vec<_> = (1..=k).flat_map(|u| (u + 1..=k).map(move |w| (u, w))).collect();
    Graph::from_edges(n, &e)
}

/// `K_{a,b}` with sides `1..=a` and `a+1..=a+b`.
pub fn bipartite(a: usize, b: usize) -> Result<Graph> {
    let (x, y) = (ids(a)?, ids(a + b)?);
    let e: Vec<_> = (1..=x).flat_map(|u| (x + 1..=y).map(move |w| (u, w))).collect();
    Graph::from_edges(a + b, &e)
}

/// Every pair is a candidate with probability `d/(n-1)`; candidates are visited in a
/// random order and dropped when an endpoint already has degree `d`.
pub fn random_gnd(n: usize, d: usize, seed: u64) -> Result<Graph> {
    ids(n)?;
    if n < 2 || d == 0 {
        return Graph::from_edges(n, &[]);
    }
    let prob = (d as f64 / (n - 1) as f64).min(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cand = Vec::new();
    for u in 1..=n as u32 {
        for w in u + 1..=n as u32 {
            if rng.gen_bool(prob) {
                cand.push((u, w));
            }
        }
    }
    cand.shuffle(&mut rng);
    let mut deg = vec![0usize; n + 1];
    let mut keep = Vec::with_capacity(cand.len());
    for (u, w) in cand {
        if deg[u as usize] < d && deg[w as usize] < d {
            deg[u as usize] += 1;
            deg[w as usize] += 1;
            keep.push((u, w));
        }
    }
    Graph::from_edges(n, &keep)
}

/// Clique on `1..=n/2`; vertex `i` of the clique gets pendant `n/2 + i`.
pub fn clique_pendant(n: usize) -> Result<Graph> {
    if !n.is_multiple_of(2) || n < 2 {
        return Err(Error::Params("clique_pendant needs an even n >= 2".into()));
    }
    let h = ids(n / 2)?;
    let mut e: Vec<_> = (1..=h).flat_map(|u| (u + 1..=h).map(move |w| (u, w))).collect();
    e.extend((1..=h).map(|i| (i, h + i)));
    Graph::from_edges(n, &e)
}

/// Line graph of `hyperedges` distinct random `r`-subsets of `vertices` points; its
/// neighborhood independence is at most `r`.
pub fn hypergraph_line(r: usize, vertices: usize, hyperedges: usize, seed: u64) -> Result<Graph> {
    if r == 0 || r > vertices {
        return Err(Error::Params(format!("cannot draw {r}-subsets of {vertices} points")));
    }
    let total = binomial_at_least(vertices, r, hyperedges);
    if !total {
        return Err(Error::Params(format!("fewer than {hyperedges} distinct {r}-subsets exist")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<u32> = (0..ids(vertices)?).collect();
    let mut seen = BTreeSet::new();
    let mut edges: Vec<Vec<u32>> = Vec::with_capacity(hyperedges);
    while edges.len() < hyperedges {
        let mut h: Vec<u32> = points.choose_multiple(&mut rng, r).copied().collect();
        h.sort_unstable();
        if seen.insert(h.clone()) {
            edges.push(h);
        }
    }
    let mut at: Vec<Vec<VertexId>> = vec![Vec::new(); vertices];
    for (i, h) in edges.iter().enumerate() {
        for &x in h {
            at[x as usize].push(i as VertexId + 1);
        }
    }
    let mut pairs = BTreeSet::new();
    for list in &at {
        for (i, &a) in list.iter().enumerate() {
            for &b in &list[i + 1..] {
                pairs.insert((a, b));
            }
        }
    }
    Graph::from_edges(hyperedges, &pairs.into_iter().collect::<Vec<_>>())
}

fn binomial_at_least(n: usize, k: usize, want: usize) -> bool {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // C(n, i + 1) grows with i while i + 1 <= n / 2, so stopping early is sound.
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc >= want as u128 {
            return true;
        }
    }
    acc >= want as u128
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::neighborhood_independence;

    #[test]
    fn spec_round_trip() {
        for s in ["path:10", "cycle:6", "complete:4", "bipartite:9,9", "gnd:100,8", "clique_pendant:8", "hyperline:3,40,60", "line:line:complete:4"] {
            let g: GraphSpec = s.parse().unwrap();
            assert_eq!(g.to_string(), s);
        }
        assert!("path".parse::<GraphSpec>().is_err());
        assert!("bipartite:3".parse::<GraphSpec>().is_err());
        assert!("wheel:3".parse::<GraphSpec>().is_err());
    }

    #[test]
    fn clique_pendant_eight() {
        let g = clique_pendant(8).unwrap();
        assert_eq!((g.n(), g.m(), g.delta()), (8, 10, 4));
        assert_eq!(neighborhood_independence(&g), 2);
    }

    #[test]
    fn line_of_k4() {
        let g = GraphSpec::from_str("line:complete:4").unwrap().generate(0).unwrap();
        assert_eq!((g.n(), g.delta()), (6, 4));
    }

    #[test]
    fn path_of_one() {
        let g = path(1).unwrap();
        assert_eq!((g.n(), g.m()), (1, 0));
    }

    #[test]
    fn random_degree_cap_and_determinism() {
        let a = random_gnd(300, 12, 4).unwrap();
        assert!(a.delta() <= 12);
        assert_eq!(a.to_edge_list(), random_gnd(300, 12, 4).unwrap().to_edge_list());
        assert_ne!(a.to_edge_list(), random_gnd(300, 12, 5).unwrap().to_edge_list());
    }

    #[test]
    fn hyperline_independence() {
        let g = hypergraph_line(3, 30, 50, 1).unwrap();
        assert_eq!(g.n(), 50);
        assert!(neighborhood_independence(&g) <= 3);
        assert!(hypergraph_line(3, 4, 5, 1).is_err());
    }
}

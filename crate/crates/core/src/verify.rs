//! Brute-force checkers. Each is a pure function of a graph and a coloring.

use crate::coloring::{Color, EdgeColoring, VertexColoring};
use crate::error::{Error, Result};
use crate::graph::{Graph, Orientation, VertexId};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Witness {
    Vertex(VertexId),
    Edge(VertexId, VertexId),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub claim: String,
    pub witness: Witness,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub legal: bool,
    pub measured_defect: u64,
    /// Number of distinct colors used.
    pub palette_used: u64,
    pub violated: Vec<Violation>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violated.is_empty()
    }
}

const MAX_WITNESSES: usize = 32;

fn push(v: &mut Vec<Violation>, claim: &str, witness: Witness) {
    if v.len() < MAX_WITNESSES {
        v.push(Violation { claim: claim.to_string(), witness });
    }
}

/// Legality, measured defect, palette and claimed-defect checks for a vertex coloring.
pub fn check_vertex_coloring(g: &Graph, col: &VertexColoring) -> Result<VerificationReport> {
    let c = col.aligned(g)?;
    let mut violated = Vec::new();
    for (v, &x) in c.iter().enumerate() {
        if x == 0 || x > col.palette {
            push(&mut violated, "palette", Witness::Vertex(g.id(v)));
        }
    }
    let mut measured = 0u64;
    let mut legal = true;
    for v in 0..g.n() {
        let same = g.neighbors(v).iter().filter(|&&w| c[w as usize] == c[v]).count() as u64;
        if same > 0 {
            legal = false;
        }
        if same > col.claimed_defect {
            push(&mut violated, "defect", Witness::Vertex(g.id(v)));
        }
        measured = measured.max(same);
    }
    Ok(VerificationReport { legal, measured_defect: measured, palette_used: distinct(&c), violated })
}

/// The incidence analogue: an edge's defect is the number of same-colored edges
/// sharing an endpoint with it.
pub fn check_edge_coloring(g: &Graph, col: &EdgeColoring) -> Result<VerificationReport> {
    let c = col.aligned(g)?;
    if col.colors.len() != g.m() {
        let extra = col.colors.keys().find(|&&(u, w)| g.edge_by_ids(u, w).is_none()).copied();
        if let Some((u, w)) = extra {
            return Err(Error::Graph(format!("coloring names non-edge ({u},{w})")));
        }
    }
    let mut violated = Vec::new();
    for (e, &x) in c.iter().enumerate() {
        if x == 0 || x > col.palette {
            let (a, b) = g.edge_ids(e);
            push(&mut violated, "palette", Witness::Edge(a, b));
        }
    }
    let mut defect = vec![0u64; g.m()];
    let mut buf: Vec<(Color, u32)> = Vec::new();
    for v in 0..g.n() {
        buf.clear();
        buf.extend(g.incident_edges(v).iter().map(|&e| (c[e as usize], e)));
        buf.sort_unstable();
        let mut i = 0;
        while i < buf.len() {
            let mut j = i;
            while j < buf.len() && buf[j].0 == buf[i].0 {
                j += 1;
            }
            for k in i..j {
                defect[buf[k].1 as usize] += (j - i - 1) as u64;
            }
            i = j;
        }
    }
    let mut measured = 0;
    for (e, &d) in defect.iter().enumerate() {
        if d > col.claimed_defect {
            let (a, b) = g.edge_ids(e);
            push(&mut violated, "defect", Witness::Edge(a, b));
        }
        measured = measured.max(d);
    }
    Ok(VerificationReport { legal: measured == 0, measured_defect: measured, palette_used: distinct(&c), violated })
}

fn distinct(c: &[Color]) -> u64 {
    let mut v = c.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len() as u64
}

/// Exact chromatic number by backtracking; graphs with more than 14 vertices are refused.
pub fn brute_chromatic_number(g: &Graph) -> Result<u64> {
    let n = g.n();
    if n > 14 {
        return Err(Error::TooLarge(n));
    }
    if n == 0 {
        return Ok(0);
    }
    if g.m() == 0 {
        return Ok(1);
    }
    // Highest degree first makes failures surface early.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    for k in 1..=n as u64 {
        let mut col = vec![0u64; n];
        if try_color(g, &order, 0, k, 0, &mut col) {
            return Ok(k);
        }
    }
    unreachable!("n colors always suffice")
}

fn try_color(g: &Graph, order: &[usize], i: usize, k: u64, used: u64, col: &mut [u64]) -> bool {
    if i == order.len() {
        return true;
    }
    let v = order[i];
    // A fresh color is interchangeable with any other fresh one: try only `used + 1`.
    for c in 1..=(used + 1).min(k) {
        if g.neighbors(v).iter().all(|&w| col[w as usize] != c) {
            col[v] = c;
            if try_color(g, order, i + 1, k, used.max(c), col) {
                return true;
            }
            col[v] = 0;
        }
    }
    false
}

/// Colors vertices so each one avoids its out-neighbors, processing sinks first.
pub fn greedy_color_along_orientation(g: &Graph, o: &Orientation) -> Result<VertexColoring> {
    let order = o.sink_first_order(g).ok_or(Error::Cyclic)?;
    let mut col = vec![0u64; g.n()];
    for v in order {
        let mut taken: Vec<u64> = o.out_neighbors(g, v).map(|w| col[w]).collect();
        taken.sort_unstable();
        let mut c = 1;
        for t in taken {
            if t == c {
                c += 1;
            } else if t > c {
                break;
            }
        }
        col[v] = c;
    }
    let palette = o.max_out_degree(g) as u64 + 1;
    Ok(VertexColoring::from_aligned(g, col, palette, 0))
}

/// For every `v`: at most `floor(Λ/p)` neighbors with smaller φ and equal ψ.
pub fn check_defect_pigeonhole(
    g: &Graph,
    phi: &VertexColoring,
    psi: &VertexColoring,
    p: u64,
    big_lambda: u64,
) -> Result<VerificationReport> {
    let f = phi.aligned(g)?;
    let s = psi.aligned(g)?;
    let bound = big_lambda / p.max(1);
    let mut violated = Vec::new();
    let mut worst = 0;
    for v in 0..g.n() {
        let cnt = g
            .neighbors(v)
            .iter()
            .filter(|&&w| f[w as usize] < f[v] && s[w as usize] == s[v])
            .count() as u64;
        worst = worst.max(cnt);
        if cnt > bound {
            push(&mut violated, "pigeonhole", Witness::Vertex(g.id(v)));
        }
    }
    Ok(VerificationReport { legal: worst == 0, measured_defect: worst, palette_used: distinct(&s), violated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::orient_by_color_then_id;

    fn complete(n: usize) -> Graph {
        let mut e = Vec::new();
        for u in 1..=n as u32 {
            for v in u + 1..=n as u32 {
                e.push((u, v));
            }
        }
        Graph::from_edges(n, &e).unwrap()
    }

    fn cycle(n: u32) -> Graph {
        let e: Vec<(u32, u32)> = (1..=n).map(|i| (i, i % n + 1)).collect();
        Graph::from_edges(n as usize, &e).unwrap()
    }

    #[test]
    fn c4_two_coloring_and_k4_all_ones() {
        let g = cycle(4);
        let c = VertexColoring::from_aligned(&g, vec![1, 2, 1, 2], 2, 0);
        let r = check_vertex_coloring(&g, &c).unwrap();
        assert!(r.legal && r.passed());
        assert_eq!(r.measured_defect, 0);
        let g = complete(4);
        let c = VertexColoring::from_aligned(&g, vec![1; 4], 1, 0);
        let r = check_vertex_coloring(&g, &c).unwrap();
        assert_eq!(r.measured_defect, 3);
        assert!(!r.legal);
        assert_eq!(r.violated.len(), 4);
    }

    #[test]
    fn palette_overflow_is_flagged() {
        let g = cycle(4);
        let c = VertexColoring::from_aligned(&g, vec![1, 2, 1, 3], 2, 0);
        let r = check_vertex_coloring(&g, &c).unwrap();
        assert_eq!(r.violated, vec![Violation { claim: "palette".into(), witness: Witness::Vertex(4) }]);
    }

    #[test]
    fn partial_vertex_coloring_is_an_error() {
        let g = cycle(4);
        let mut c = VertexColoring::from_aligned(&g, vec![1, 2, 1, 2], 2, 0);
        c.colors.remove(&3);
        assert!(matches!(check_vertex_coloring(&g, &c), Err(Error::Uncolored(_))));
    }

    #[test]
    fn edge_checks() {
        let star = Graph::from_edges(4, &[(1, 2), (1, 3), (1, 4)]).unwrap();
        let c = EdgeColoring::from_aligned(&star, vec![1, 2, 3], 3, 0);
        assert!(check_edge_coloring(&star, &c).unwrap().legal);
        let path = Graph::from_edges(4, &[(1, 2), (2, 3), (3, 4)]).unwrap();
        let c = EdgeColoring::from_aligned(&path, vec![1, 1, 1], 1, 2);
        let r = check_edge_coloring(&path, &c).unwrap();
        assert_eq!(r.measured_defect, 2);
        assert!(r.passed());
    }

    #[test]
    fn chromatic_numbers() {
        assert_eq!(brute_chromatic_number(&complete(4)).unwrap(), 4);
        assert_eq!(brute_chromatic_number(&cycle(5)).unwrap(), 3);
        assert_eq!(brute_chromatic_number(&cycle(6)).unwrap(), 2);
        assert!(brute_chromatic_number(&cycle(15)).is_err());
    }

    #[test]
    fn greedy_along_chain() {
        let e: Vec<(u32, u32)> = (1..6).map(|i| (i, i + 1)).collect();
        let g = Graph::from_edges(6, &e).unwrap();
        let phi = VertexColoring::from_aligned(&g, (1..=6).collect(), 6, 0);
        let o = orient_by_color_then_id(&g, &phi).unwrap();
        let c = greedy_color_along_orientation(&g, &o).unwrap();
        assert_eq!(c.colors_used(), 2);
        assert!(check_vertex_coloring(&g, &c).unwrap().legal);
    }

    #[test]
    fn pigeonhole_witness() {
        // Vertex 4 has three neighbors with smaller φ and the same ψ; Λ/p = 2.
        let g = Graph::from_edges(4, &[(1, 4), (2, 4), (3, 4)]).unwrap();
        let phi = VertexColoring::from_aligned(&g, vec![1, 2, 3, 4], 4, 0);
        let psi = VertexColoring::from_aligned(&g, vec![1, 1, 1, 1], 2, 3);
        let r = check_defect_pigeonhole(&g, &phi, &psi, 2, 4).unwrap();
        assert_eq!(r.violated, vec![Violation { claim: "pigeonhole".into(), witness: Witness::Vertex(4) }]);
        let r = check_defect_pigeonhole(&g, &phi, &psi, 1, 4).unwrap();
        assert!(r.passed());
    }
}

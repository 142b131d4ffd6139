use super::Graph;
use crate::error::{Error, Result};

/// Exact neighborhood independence `max_v I(v)`; 0 for an edgeless graph.
pub fn neighborhood_independence(g: &Graph) -> usize {
    (0..g.n()).map(|v| vertex_independence(g, v)).max().unwrap_or(0)
}

/// As [`neighborhood_independence`], refusing graphs whose max degree exceeds `cap`.
pub fn neighborhood_independence_capped(g: &Graph, cap: usize) -> Result<usize> {
    if g.delta() > cap {
        return Err(Error::IndependenceCap { degree: g.delta(), cap });
    }
    Ok(neighborhood_independence(g))
}

/// Size of a maximum independent set inside `Γ(v)`.
pub fn vertex_independence(g: &Graph, v: usize) -> usize {
    let nb = g.neighbors(v);
    let d = nb.len();
    if d == 0 {
        return 0;
    }
    let words = d.div_ceil(64);
    let mut rows = vec![0u64; d * words];
    for i in 0..d {
        let x = nb[i] as usize;
        // Intersect the two sorted lists to find neighbors of x inside Γ(v).
        let (mut a, mut b) = (0, 0);
        let nx = g.neighbors(x);
        while a < d && b < nx.len() {
            match nb[a].cmp(&nx[b]) {
                std::cmp::Ordering::Less => a += 1,
                std::cmp::Ordering::Greater => b += 1,
                std::cmp::Ordering::Equal => {
                    rows[i * words + a / 64] |= 1 << (a % 64);
                    a += 1;
                    b += 1;
                }
            }
        }
    }
    let mut all = vec![0u64; words];
    for i in 0..d {
        all[i / 64] |= 1 << (i % 64);
    }
    let mut s = Mis { rows, words, best: 0 };
    s.search(&all, 0);
    s.best
}

struct Mis {
    rows: Vec<u64>,
    words: usize,
    best: usize,
}

impl Mis {
    fn row(&self, i: usize) -> &[u64] {
        &self.rows[i * self.words..(i + 1) * self.words]
    }

    fn search(&mut self, cand: &[u64], size: usize) {
        let count: usize = cand.iter().map(|w| w.count_ones() as usize).sum();
        if count == 0 {
            self.best = self.best.max(size);
            return;
        }
        if size + count <= self.best || size + self.clique_cover_bound(cand) <= self.best {
            return;
        }
        // Branch on a minimum-degree candidate: some maximum independent set
        // contains it or one of its candidate neighbors.
        let mut pick = usize::MAX;
        let mut pick_deg = usize::MAX;
        for i in iter_bits(cand) {
            let deg: usize = self.row(i).iter().zip(cand).map(|(a, b)| (a & b).count_ones() as usize).sum();
            if deg < pick_deg {
                pick = i;
                pick_deg = deg;
            }
        }
        let mut branch: Vec<usize> = vec![pick];
        branch.extend(iter_bits(&and(self.row(pick), cand)));
        for u in branch {
            let mut next = cand.to_vec();
            for (w, r) in next.iter_mut().zip(self.row(u)) {
                *w &= !r;
            }
            next[u / 64] &= !(1 << (u % 64));
            self.search(&next, size + 1);
        }
    }

    /// Number of cliques in a greedy clique partition of `cand`: an upper bound
    /// on the independence number of the candidate set.
    fn clique_cover_bound(&self, cand: &[u64]) -> usize {
        let mut rest = cand.to_vec();
        let mut cliques = 0;
        while let Some(i) = first_bit(&rest) {
            cliques += 1;
            rest[i / 64] &= !(1 << (i % 64));
            let mut pool = and(self.row(i), &rest);
            while let Some(j) = first_bit(&pool) {
                rest[j / 64] &= !(1 << (j % 64));
                pool[j / 64] &= !(1 << (j % 64));
                for (p, r) in pool.iter_mut().zip(self.row(j)) {
                    *p &= r;
                }
            }
        }
        cliques
    }
}

fn and(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn first_bit(s: &[u64]) -> Option<usize> {
    s.iter().enumerate().find(|(_, w)| **w != 0).map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
}

fn iter_bits(s: &[u64]) -> impl Iterator<Item = usize> + '_ {
    s.iter().enumerate().flat_map(|(k, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + b)
            }
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(g: &Graph, v: usize) -> usize {
        let nb = g.neighbors(v);
        let d = nb.len();
        let mut best = 0;
        for mask in 0u32..(1 << d) {
            let set: Vec<usize> = (0..d).filter(|i| mask >> i & 1 == 1).map(|i| nb[i] as usize).collect();
            let indep = set.iter().all(|&a| set.iter().all(|&b| a == b || !g.has_edge(a, b)));
            if indep {
                best = best.max(set.len());
            }
        }
        best
    }

    #[test]
    fn complete_graph_is_one() {
        let mut e = Vec::new();
        for u in 1..=6u32 {
            for v in u + 1..=6 {
                e.push((u, v));
            }
        }
        let g = Graph::from_edges(6, &e).unwrap();
        assert_eq!(neighborhood_independence(&g), 1);
    }

    #[test]
    fn edgeless_is_zero() {
        let g = Graph::from_edges(4, &[]).unwrap();
        assert_eq!(neighborhood_independence(&g), 0);
    }

    #[test]
    fn matches_brute_force_on_small_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let n = rng.gen_range(2..12u32);
            let mut e = Vec::new();
            for u in 1..=n {
                for v in u + 1..=n {
                    if rng.gen_bool(0.45) {
                        e.push((u, v));
                    }
                }
            }
            let g = Graph::from_edges(n as usize, &e).unwrap();
            for v in 0..g.n() {
                assert_eq!(vertex_independence(&g, v), brute(&g, v));
            }
        }
    }

    #[test]
    fn cap_aborts() {
        let g = Graph::from_edges(4, &[(1, 2), (1, 3), (1, 4)]).unwrap();
        assert!(neighborhood_independence_capped(&g, 2).is_err());
        assert_eq!(neighborhood_independence_capped(&g, 3).unwrap(), 3);
    }
}

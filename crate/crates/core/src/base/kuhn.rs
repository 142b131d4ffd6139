use super::linial::LinialStep;
use super::reduce::first_conflict;
use crate::coloring::{Color, VertexColoring};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::math::{digits, eval_poly, iroot_ceil, next_prime, roots_deg2};
use crate::sim::{Incoming, LocalView, Message, Outbox, SimReport, Simulator, VertexProgram};

/// Largest observed `palette / (Δ/d)²` of [`kuhn_defective_vertex`] with ρ from
/// `linial_coloring`, over Δ up to 256 and `1 <= d < Δ`.
pub const C_KUHN: f64 = 32.0;

/// Polynomial degree `k` and field size `q` for a `d`-defective coloring from a legal
/// `m`-coloring of a graph with degrees `<= delta`: the smallest prime `q` with
/// `q >= ceil(k·delta/d)` and `q^(k+1) >= m`, minimized over `k` (smallest `k` on ties).
pub fn kuhn_step(m: u64, delta: u64, d: u64) -> LinialStep {
    let mut best: Option<LinialStep> = None;
    for k in 1..=64u32 {
        let lower = (k as u64 * delta).div_ceil(d).max(iroot_ceil(m, k + 1)).max(2);
        if best.is_some_and(|b| (k as u64 * delta).div_ceil(d) > b.q) {
            break;
        }
        let q = next_prime(lower);
        if best.is_none_or(|b| q < b.q) {
            best = Some(LinialStep { k, q });
        }
    }
    best.unwrap()
}

struct Kuhn<'a> {
    rho: &'a [Color],
    m: u64,
    step: LinialStep,
}

impl VertexProgram for Kuhn<'_> {
    type State = ();
    type Output = Color;

    fn init(&self, _: &LocalView<'_>) {}

    fn step(&self, v: &LocalView<'_>, _: &mut (), round: u32, inbox: &[Incoming], out: &mut Outbox) -> Option<Color> {
        let own = self.rho[v.index];
        if round == 0 {
            out.broadcast(Message::one(own, self.m));
            return None;
        }
        let LinialStep { k, q } = self.step;
        let len = k as usize + 1;
        let mine = digits(own - 1, q, len);
        let mut agree = vec![0u32; q as usize];
        for msg in inbox {
            let theirs = digits(msg.msg.get(0) - 1, q, len);
            if k <= 2 {
                let c = |i: usize| (mine.get(i).copied().unwrap_or(0) + q - theirs.get(i).copied().unwrap_or(0)) % q;
                // Equal polynomials would mean equal ρ-colors; ρ is checked legal.
                if let Some(roots) = roots_deg2(c(0), c(1), c(2), q) {
                    for x in roots {
                        agree[x as usize] += 1;
                    }
                }
            } else {
                for x in 0..q {
                    if eval_poly(&mine, x, q) == eval_poly(&theirs, x, q) {
                        agree[x as usize] += 1;
                    }
                }
            }
        }
        let mut x = 0;
        for i in 1..q as usize {
            if agree[i] < agree[x] {
                x = i;
            }
        }
        let x = x as u64;
        Some(x * q + eval_poly(&mine, x, q) + 1)
    }
}

/// `d`-defective coloring from a legal `m`-coloring `rho`, for degrees `<= delta`.
pub(crate) fn kuhn_reduce(
    g: &Graph,
    sim: &Simulator,
    rho: &[Color],
    m: u64,
    delta: u64,
    d: u64,
) -> Result<(Vec<Color>, u64, SimReport)> {
    if let Some((a, b)) = first_conflict(g, rho) {
        return Err(Error::NotLegal(format!("ρ colors {} and {} alike", g.id(a), g.id(b))));
    }
    if d >= delta {
        return Ok((vec![1; g.n()], 1, SimReport::default()));
    }
    let step = kuhn_step(m, delta, d);
    let run = sim.run(g, &Kuhn { rho, m, step })?;
    Ok((run.outputs, step.palette(), run.report))
}

/// `d`-defective coloring with palette `O((Δ/d)²)`, one round after ρ is exchanged.
/// For `d >= Δ` every vertex gets color 1.
pub fn kuhn_defective_vertex(g: &Graph, rho: &VertexColoring, d: u64, sim: &Simulator) -> Result<(VertexColoring, SimReport)> {
    if d == 0 {
        return Err(Error::Params("defect d must be positive".into()));
    }
    let col = rho.aligned(g)?;
    let m = rho.palette.max(col.iter().copied().max().unwrap_or(1));
    let delta = g.delta() as u64;
    let (out, pal, report) = kuhn_reduce(g, sim, &col, m, delta, d)?;
    Ok((VertexColoring::from_aligned(g, out, pal, d.min(delta)), report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::base::linial_coloring;
    use crate::verify::check_vertex_coloring;

    #[test]
    fn step_satisfies_both_constraints() {
        for (m, delta, d) in [(1369u64, 16u64, 4u64), (10_000, 64, 3), (50, 8, 7), (1 << 30, 200, 1)] {
            let s = kuhn_step(m, delta, d);
            assert!(s.k as u64 * delta <= s.q * d);
            assert!(crate::math::pow_at_least(s.q, s.k + 1, m));
        }
    }

    #[test]
    fn defect_within_d_on_dense_graph() {
        let mut e = Vec::new();
        for u in 1..=20u32 {
            for v in u + 1..=20 {
                if (u * 7 + v * 3) % 5 != 0 {
                    e.push((u, v));
                }
            }
        }
        let g = Graph::from_edges(20, &e).unwrap();
        let sim = Simulator::default();
        let (rho, _) = linial_coloring(&g, &sim).unwrap();
        for d in 1..g.delta() as u64 {
            let (phi, r) = kuhn_defective_vertex(&g, &rho, d, &sim).unwrap();
            let rep = check_vertex_coloring(&g, &phi).unwrap();
            assert!(rep.measured_defect <= d, "d={d}");
            assert!(rep.violated.is_empty());
            assert_eq!(r.rounds, 1);
        }
    }

    #[test]
    fn large_d_is_trivial() {
        let g = Graph::from_edges(3, &[(1, 2), (2, 3)]).unwrap();
        let sim = Simulator::default();
        let (rho, _) = linial_coloring(&g, &sim).unwrap();
        let (phi, r) = kuhn_defective_vertex(&g, &rho, 5, &sim).unwrap();
        assert_eq!(phi.palette, 1);
        assert_eq!(r.rounds, 0);
    }
}

//! O(Δ/p)-defective p-coloring for graphs of bounded neighborhood independence.

use crate::base::{kuhn_reduce, linial_reduce};
use crate::coloring::{Color, VertexColoring};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::sim::{Incoming, LocalView, Message, Outbox, SimReport, Simulator, VertexProgram};
use serde::{Deserialize, Serialize};
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefectiveParams {
    pub b: u64,
    pub p: u64,
    /// Degree upper bound Λ.
    pub big_lambda: u64,
    /// Neighborhood-independence bound.
    pub c: u64,
}

impl DefectiveParams {
    pub fn validate(&self, g: &Graph) -> Result<()> {
        if self.b < 1 || self.p < 1 || self.c < 1 {
            return Err(Error::Params("b, p and c must be positive".into()));
        }
        if (self.big_lambda as u128) < (self.b as u128) * (self.p as u128) {
            return Err(Error::Params(format!("b·p = {} exceeds Λ = {}", self.b * self.p, self.big_lambda)));
        }
        if self.big_lambda < g.delta() as u64 {
            return Err(Error::Params(format!("Λ = {} is below Δ = {}", self.big_lambda, g.delta())));
        }
        Ok(())
    }

    /// Defect allowed for the auxiliary coloring φ: `floor(Λ/(b·p))`.
    pub fn phi_defect(&self) -> u64 {
        self.big_lambda / (self.b * self.p)
    }
}

/// `floor((Λ/(b·p) + Λ/p)·c + c)`, computed exactly as `floor(Λ·c·(1+b)/(b·p)) + c`.
pub fn defect_bound(params: &DefectiveParams) -> u64 {
    defect_bound_raw(params.b, params.p, params.big_lambda, params.c)
}

pub(crate) fn defect_bound_raw(b: u64, p: u64, big_lambda: u64, c: u64) -> u64 {
    let num = big_lambda as u128 * c as u128 * (1 + b as u128);
    let den = b as u128 * p as u128;
    (num / den) as u64 + c
}

/// How the auxiliary coloring φ is obtained.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhiMode {
    /// Linial's coloring followed by the polynomial `floor(Λ/(bp))`-defective reduction.
    #[default]
    Fast,
    /// Linial's legal coloring used as is.
    Simple,
}

impl FromStr for PhiMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(PhiMode::Fast),
            "simple" => Ok(PhiMode::Simple),
            _ => Err(Error::Params(format!("unknown phi mode `{s}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DefectiveRun {
    pub psi: VertexColoring,
    pub phi: VertexColoring,
    /// Rounds of the recolor loop, counted from the round in which φ is exchanged.
    pub loop_rounds: u64,
    pub report: SimReport,
}

/// Each vertex waits for the ψ-colors of all neighbors with smaller φ-color, then
/// takes the ψ-color `k` minimizing `N_v(k)` (smallest `k` on ties).
struct RecolorLoop<'a> {
    phi: &'a [Color],
    phi_palette: u64,
    p: u64,
}

struct RecolorState {
    /// Slots whose neighbor has a smaller φ-color.
    below: Vec<bool>,
    pending: u32,
    counts: Vec<u32>,
}

impl VertexProgram for RecolorLoop<'_> {
    type State = RecolorState;
    type Output = Color;

    fn init(&self, v: &LocalView<'_>) -> RecolorState {
        RecolorState { below: vec![false; v.degree()], pending: 0, counts: vec![0; self.p as usize] }
    }

    fn step(&self, v: &LocalView<'_>, st: &mut RecolorState, round: u32, inbox: &[Incoming], out: &mut Outbox) -> Option<Color> {
        let own = self.phi[v.index];
        if round == 0 {
            out.broadcast(Message::one(own, self.phi_palette));
            return None;
        }
        for m in inbox {
            let s = m.slot as usize;
            if round == 1 {
                if m.msg.get(0) < own {
                    st.below[s] = true;
                    st.pending += 1;
                }
            } else if st.below[s] {
                st.counts[m.msg.get(1) as usize - 1] += 1;
                st.pending -= 1;
            }
        }
        if st.pending > 0 {
            return None;
        }
        let mut k = 0;
        for i in 1..st.counts.len() {
            if st.counts[i] < st.counts[k] {
                k = i;
            }
        }
        let psi = k as u64 + 1;
        let mut msg = Message::one(v.id() as u64, v.n.max(v.id() as u64) + 1);
        msg.push(psi, self.p);
        out.broadcast(msg);
        Some(psi)
    }
}

/// The recolor loop alone, given φ.
pub(crate) fn recolor_loop(g: &Graph, sim: &Simulator, phi: &[Color], phi_palette: u64, p: u64) -> Result<(Vec<Color>, SimReport)> {
    let run = sim.run(g, &RecolorLoop { phi, phi_palette, p })?;
    Ok((run.outputs, run.report))
}

/// φ for one defective step: a `floor(Λ/(bp))`-defective coloring from a legal `rho`
/// (or `rho` itself when that defect is 0 or the mode is simple).
pub(crate) fn phi_from_rho(
    g: &Graph,
    sim: &Simulator,
    rho: &[Color],
    rho_palette: u64,
    big_lambda: u64,
    d: u64,
    mode: PhiMode,
) -> Result<(Vec<Color>, u64, u64, SimReport)> {
    if mode == PhiMode::Simple || d == 0 {
        return Ok((rho.to_vec(), rho_palette, 0, SimReport::default()));
    }
    let (phi, pal, report) = kuhn_reduce(g, sim, rho, rho_palette, big_lambda, d)?;
    Ok((phi, pal, d.min(big_lambda), report))
}

/// ψ with palette `p` and defect at most [`defect_bound`] whenever the neighborhood
/// independence of `g` is at most `params.c`.
pub fn defective_color(g: &Graph, params: &DefectiveParams, mode: PhiMode, sim: &Simulator) -> Result<DefectiveRun> {
    params.validate(g)?;
    let mut report = SimReport::default();
    let k0 = sim.known_n(g).max(g.max_id() as u64).max(1);
    let (rho, rho_pal, r) = linial_reduce(g, sim, None, k0, params.big_lambda)?;
    report.absorb("linial", r);
    let (phi, phi_pal, phi_defect, r) = phi_from_rho(g, sim, &rho, rho_pal, params.big_lambda, params.phi_defect(), mode)?;
    if mode == PhiMode::Fast {
        report.absorb("kuhn", r);
    }
    let (psi, r) = recolor_loop(g, sim, &phi, phi_pal, params.p)?;
    let loop_rounds = r.rounds;
    report.absorb("recolor", r);
    Ok(DefectiveRun {
        psi: VertexColoring::from_aligned(g, psi, params.p, defect_bound(params)),
        phi: VertexColoring::from_aligned(g, phi, phi_pal, phi_defect),
        loop_rounds,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_line_graph;
    use crate::verify::{check_defect_pigeonhole, check_vertex_coloring};

    fn k_nn(n: u32) -> Graph {
        let mut e = Vec::new();
        for u in 1..=n {
            for w in n + 1..=2 * n {
                e.push((u, w));
            }
        }
        Graph::from_edges(2 * n as usize, &e).unwrap()
    }

    #[test]
    fn bound_arithmetic() {
        let p = |b, p, l, c| defect_bound(&DefectiveParams { b, p, big_lambda: l, c });
        assert_eq!(p(2, 8, 16, 2), 8);
        assert_eq!(p(2, 9, 64, 2), 23);
        assert_eq!(p(1, 1, 10, 3), 63);
        assert_eq!(p(2, 9, 23, 2), 9);
        assert_eq!(p(2, 9, 9, 2), 5);
    }

    #[test]
    fn single_color() {
        let g = Graph::from_edges(5, &[(1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        let params = DefectiveParams { b: 1, p: 1, big_lambda: 2, c: 2 };
        let run = defective_color(&g, &params, PhiMode::Fast, &Simulator::default()).unwrap();
        assert!(run.psi.colors.values().all(|&x| x == 1));
    }

    #[test]
    fn line_graph_of_k99() {
        let map = build_line_graph(&k_nn(9));
        let g = &map.lg;
        assert_eq!(g.delta(), 16);
        let params = DefectiveParams { b: 2, p: 8, big_lambda: 16, c: 2 };
        for mode in [PhiMode::Fast, PhiMode::Simple] {
            let run = defective_color(g, &params, mode, &Simulator::default()).unwrap();
            let rep = check_vertex_coloring(g, &run.psi).unwrap();
            assert!(rep.passed(), "{mode:?}: {:?}", rep.violated);
            assert!(rep.measured_defect <= 8);
            assert!(run.psi.max_color() <= 8);
            assert!(check_defect_pigeonhole(g, &run.phi, &run.psi, 8, 16).unwrap().passed());
            assert!(run.loop_rounds <= run.phi.palette);
            let phi_rep = check_vertex_coloring(g, &run.phi).unwrap();
            assert!(phi_rep.measured_defect <= params.phi_defect());
        }
    }

    #[test]
    fn parameter_errors() {
        let g = Graph::from_edges(3, &[(1, 2), (2, 3)]).unwrap();
        let sim = Simulator::default();
        let bad = DefectiveParams { b: 2, p: 2, big_lambda: 3, c: 1 };
        assert!(matches!(defective_color(&g, &bad, PhiMode::Fast, &sim), Err(Error::Params(_))));
        let low = DefectiveParams { b: 1, p: 1, big_lambda: 1, c: 1 };
        assert!(matches!(defective_color(&g, &low, PhiMode::Fast, &sim), Err(Error::Params(_))));
    }
}

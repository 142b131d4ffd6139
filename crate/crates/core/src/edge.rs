//! Edge coloring of general graphs, either by running the vertex algorithm on the
//! line graph or by running its edge version directly on the host graph.

use crate::base::{assemble_edge_colors, class_line_degree, edge_color_classes, edge_linial_reduce, group_slots, kuhn_edge_run, SlotColors};
use crate::coloring::{Color, EdgeColoring};
use crate::defective::defect_bound_raw;
use crate::error::{Error, Result};
use crate::graph::{build_line_graph, Graph};
use crate::legal::{recursion_schedule, run_legal, vartheta_of, LegalParams, LegalVariant};
use crate::math::ceil_log2;
use crate::sim::{Incoming, LocalView, Message, MsgMode, Outbox, SimReport, Simulator, VertexProgram};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeResult {
    pub coloring: EdgeColoring,
    pub vartheta: u64,
    pub depth: u32,
    pub level_lambdas: Vec<u64>,
}

/// Runs the legal vertex coloring on `L(g)`, each logical round costing two host rounds,
/// plus two setup rounds for the edge Ids.
pub fn edge_color_via_line_graph(
    g: &Graph,
    params: &LegalParams,
    variant: LegalVariant,
    sim: &Simulator,
) -> Result<(EdgeResult, SimReport)> {
    if params.c < 2 {
        return Err(Error::Params("line graphs need c >= 2".into()));
    }
    let map = build_line_graph(g);
    let line_sim = Simulator::on_line_graph(sim.config.clone(), g, &map);
    let (res, mut report) = run_legal(&map.lg, params, variant, &line_sim)?;
    report.add_setup(2);
    // Line-graph vertex i is edge i of g.
    let colors = map.lg.ids().iter().map(|&id| res.phi.colors[&id]).collect();
    let coloring = EdgeColoring::from_aligned(g, colors, res.vartheta, 0);
    Ok((EdgeResult { coloring, vartheta: res.vartheta, depth: res.depth, level_lambdas: res.level_lambdas }, report))
}

/// The edge version of the recursion, run on `g` itself with `O(log n)`-bit messages in
/// short mode. Λ is measured on the line graph: `params.big_lambda` must be at least
/// the largest number of edges sharing an endpoint with a single edge.
pub fn edge_color_direct(g: &Graph, params: &LegalParams, mode: MsgMode, sim: &Simulator) -> Result<(EdgeResult, SimReport)> {
    params.check().map_err(Error::Params)?;
    if params.c < 2 {
        return Err(Error::Params("edge coloring needs c >= 2".into()));
    }
    let sim = sim.with_mode(mode);
    let (colors, vartheta, schedule, mut report) = edge_direct_core(g, &sim, params, None)?;
    report.add_setup(2);
    let depth = schedule.len() as u32 - 1;
    let coloring = EdgeColoring::from_aligned(g, colors, vartheta, 0);
    Ok((EdgeResult { coloring, vartheta, depth, level_lambdas: schedule }, report))
}

/// Colors every class of `class` (all edges when `None`) legally and in parallel, classes
/// sharing one palette of size ϑ. Setup rounds for the edge ranks are left to the caller.
pub(crate) fn edge_direct_core(
    g: &Graph,
    sim: &Simulator,
    params: &LegalParams,
    class: Option<&[u64]>,
) -> Result<(Vec<Color>, u64, Vec<u64>, SimReport)> {
    let measured = class_line_degree(g, class);
    if measured > params.big_lambda {
        return Err(Error::Params(format!("Λ = {} is below the line-graph degree {measured}", params.big_lambda)));
    }
    let schedule = recursion_schedule(params, params.big_lambda)?;
    let depth = schedule.len() - 1;
    let bottom = schedule[depth];
    let vartheta = vartheta_of(&schedule, params.p).ok_or_else(|| Error::Params("ϑ does not fit in 64 bits".into()))?;
    let p = params.p;
    let mut report = SimReport::default();
    // Recursion classes live below any incoming partition, which is kept as the outer key.
    let outer: Vec<u64> = class.map_or_else(|| vec![0; g.m()], |c| c.to_vec());
    let mut inner = vec![0u64; g.m()];
    let key = |inner: &[u64]| -> Vec<u64> {
        let stride = p.checked_pow(depth as u32).unwrap_or(u64::MAX);
        outer.iter().zip(inner).map(|(&o, &i)| o.saturating_mul(stride).saturating_add(i)).collect()
    };
    let ranks: Vec<Color> = (1..=g.m() as u64).collect();

    for (level, &big) in schedule[..depth].iter().enumerate() {
        let cls = key(&inner);
        let d = big / (params.b * p);
        let phi = if d >= 4 {
            let delta_b = (g.delta() as u64).min(big + 1).max(1);
            let p_prime = (1..=delta_b).find(|&q| 4 * delta_b.div_ceil(q) <= d).unwrap();
            let (phi, r) = kuhn_edge_run(g, sim, Some(&cls), p_prime, delta_b.div_ceil(p_prime))?;
            report.absorb(&format!("level{level}/kuhn-edge"), r);
            phi
        } else {
            let (phi, _, r) = edge_linial_reduce(g, sim, Some(&cls), &ranks, (g.m() as u64).max(1), big)?;
            report.absorb(&format!("level{level}/edge-linial"), r);
            phi
        };
        let (psi, r) = edge_recolor(g, sim, &cls, &phi, p, big)?;
        report.absorb(&format!("level{level}/recolor"), r);
        for e in 0..g.m() {
            inner[e] = inner[e] * p + (psi[e] - 1);
        }
        let next = schedule[level + 1];
        let got = class_line_degree(g, Some(&key(&inner)));
        if got > next {
            return Err(Error::DefectExceeded { level, measured: got, bound: next });
        }
    }
    let cls = key(&inner);
    let (fin, r) = edge_color_classes(g, sim, Some(&cls), bottom, bottom + 1)?;
    report.absorb("bottom", r);
    let colors = (0..g.m()).map(|e| inner[e] * (bottom + 1) + fin[e]).collect();
    Ok((colors, vartheta, schedule, report))
}

/// The ψ-loop for edges. An endpoint `u` of `e` waits until every same-class edge at `u`
/// with a smaller φ-color is decided, then sends its partial counters `N_{e,u}(1..p)` to
/// the other endpoint in `chunks` consecutive messages. Both endpoints decide at round
/// `max(t_u, t_w) + chunks` from the same summed counters.
struct EdgeRecolor<'a> {
    class: &'a [u64],
    phi: &'a [Color],
    p: u64,
    /// Counters per message and number of messages.
    per_msg: usize,
    chunks: u32,
    counter_domain: u64,
}

struct EdgeRecolorState {
    group_of: Vec<usize>,
    groups: Vec<Vec<usize>>,
    pending: Vec<u32>,
    counts: Vec<Vec<u32>>,
    peer: Vec<Vec<u32>>,
    start: Vec<Option<u32>>,
    peer_start: Vec<Option<u32>>,
    sent: Vec<u32>,
    psi: Vec<Color>,
    remaining: usize,
}

impl EdgeRecolor<'_> {
    fn phi_at(&self, v: &LocalView<'_>, s: usize) -> Color {
        self.phi[v.edge_at(s)]
    }
}

impl VertexProgram for EdgeRecolor<'_> {
    type State = EdgeRecolorState;
    type Output = SlotColors;

    fn init(&self, v: &LocalView<'_>) -> EdgeRecolorState {
        let deg = v.degree();
        let groups = group_slots(v, Some(self.class));
        let mut group_of = vec![0; deg];
        let mut pending = vec![0; deg];
        for (gi, slots) in groups.iter().enumerate() {
            for &s in slots {
                group_of[s] = gi;
                pending[s] = slots.iter().filter(|&&t| self.phi_at(v, t) < self.phi_at(v, s)).count() as u32;
            }
        }
        EdgeRecolorState {
            group_of,
            groups,
            pending,
            counts: vec![vec![0; self.p as usize]; deg],
            peer: vec![Vec::with_capacity(self.p as usize); deg],
            start: vec![None; deg],
            peer_start: vec![None; deg],
            sent: vec![0; deg],
            psi: vec![0; deg],
            remaining: deg,
        }
    }

    fn step(&self, v: &LocalView<'_>, st: &mut EdgeRecolorState, round: u32, inbox: &[Incoming], out: &mut Outbox) -> Option<SlotColors> {
        for m in inbox {
            let s = m.slot as usize;
            st.peer_start[s].get_or_insert(round - 1);
            st.peer[s].extend(m.msg.fields().iter().map(|f| f.value as u32));
        }
        let mut decided = Vec::new();
        for s in 0..v.degree() {
            if let (Some(a), Some(b), 0) = (st.start[s], st.peer_start[s], st.psi[s]) {
                if round == a.max(b) + self.chunks {
                    let total = |k: usize| st.counts[s][k] + st.peer[s][k];
                    let k = (0..self.p as usize).min_by_key(|&k| (total(k), k)).unwrap();
                    st.psi[s] = k as u64 + 1;
                    decided.push(s);
                }
            }
        }
        for &s in &decided {
            st.remaining -= 1;
            let k = st.psi[s] as usize - 1;
            let f = self.phi_at(v, s);
            for &t in &st.groups[st.group_of[s]] {
                if self.phi_at(v, t) > f {
                    st.counts[t][k] += 1;
                    st.pending[t] -= 1;
                }
            }
        }
        if st.remaining == 0 {
            return Some((std::mem::take(&mut st.psi), true));
        }
        for s in 0..v.degree() {
            if st.start[s].is_none() && st.pending[s] == 0 {
                st.start[s] = Some(round);
            }
            if st.start[s].is_some() && st.sent[s] < self.chunks {
                let lo = st.sent[s] as usize * self.per_msg;
                let hi = (lo + self.per_msg).min(self.p as usize);
                let mut msg = Message::new();
                for &x in &st.counts[s][lo..hi] {
                    msg.push(x as u64, self.counter_domain);
                }
                out.send(s, msg);
                st.sent[s] += 1;
            }
        }
        None
    }
}

/// One ψ-loop over all classes of `class`; `big` bounds every edge's class line-degree.
fn edge_recolor(g: &Graph, sim: &Simulator, class: &[u64], phi: &[Color], p: u64, big: u64) -> Result<(Vec<Color>, SimReport)> {
    // A partial counter at one endpoint is at most that endpoint's same-class degree.
    let counter_domain = big + 2;
    let bits = ceil_log2(counter_domain).max(1) as u64;
    let per_msg = match sim.config.msg_mode {
        MsgMode::Wide => p as usize,
        MsgMode::Short => (sim.budget_bits(g) / bits).clamp(1, p) as usize,
    };
    let chunks = (p as usize).div_ceil(per_msg) as u32;
    let prog = EdgeRecolor { class, phi, p, per_msg, chunks, counter_domain };
    let run = sim.run(g, &prog)?;
    let colors = assemble_edge_colors(g, &run.outputs)?;
    Ok((colors, run.report))
}

/// Per-level `(Λ_i, d_i, uses Kuhn)` of the direct edge path, for reports.
pub fn edge_direct_plan(params: &LegalParams) -> Result<Vec<(u64, u64, bool)>> {
    let s = recursion_schedule(params, params.big_lambda)?;
    Ok(s[..s.len() - 1]
        .iter()
        .map(|&big| {
            let d = big / (params.b * params.p);
            (big, d, d >= 4)
        })
        .collect())
}

/// Defect bound of one edge level, taking `c = 2`.
pub fn edge_level_bound(params: &LegalParams, big: u64) -> u64 {
    defect_bound_raw(params.b, params.p, big, 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::SimConfig;
    use crate::verify::check_edge_coloring;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bounded_random(n: u32, d: usize, seed: u64) -> Graph {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut deg = vec![0usize; n as usize + 1];
        let mut edges = std::collections::BTreeSet::new();
        for _ in 0..n as usize * d * 2 {
            let (a, b) = (rng.gen_range(1..=n), rng.gen_range(1..=n));
            let (a, b) = (a.min(b), a.max(b));
            if a != b && deg[a as usize] < d && deg[b as usize] < d && edges.insert((a, b)) {
                deg[a as usize] += 1;
                deg[b as usize] += 1;
            }
        }
        Graph::from_edges(n as usize, &edges.into_iter().collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn single_edge() {
        let g = Graph::from_edges(2, &[(1, 2)]).unwrap();
        let params = LegalParams::thm46_smallest(1, 2).unwrap();
        let (res, _) = edge_color_direct(&g, &params, MsgMode::Short, &Simulator::default()).unwrap();
        assert_eq!(res.coloring.colors_used(), 1);
        let (res, _) = edge_color_via_line_graph(&g, &params, LegalVariant::Fast, &Simulator::default()).unwrap();
        assert_eq!(res.coloring.colors_used(), 1);
    }

    #[test]
    fn recursion_in_both_modes() {
        let g = bounded_random(300, 17, 5);
        let big = class_line_degree(&g, None);
        let params = LegalParams::custom(2, 9, 8, big, 2).unwrap();
        let sched = recursion_schedule(&params, big).unwrap();
        assert!(sched.len() > 2);
        for mode in [MsgMode::Wide, MsgMode::Short] {
            let sim = Simulator::new(SimConfig { msg_mode: mode, ..Default::default() });
            let (res, report) = edge_color_direct(&g, &params, mode, &sim).unwrap();
            let rep = check_edge_coloring(&g, &res.coloring).unwrap();
            assert!(rep.legal && rep.passed(), "{mode:?}");
            assert_eq!(res.level_lambdas, sched);
            assert!(res.coloring.max_color() <= res.vartheta);
            if mode == MsgMode::Short {
                assert_eq!(report.over_budget_rounds, 0);
                assert!(report.max_msg_bits <= report.budget_bits);
            }
        }
    }

    #[test]
    fn line_graph_path_matches_schedule() {
        let g = bounded_random(80, 12, 2);
        let map = build_line_graph(&g);
        let big = map.lg.delta() as u64;
        let params = LegalParams::custom(2, 9, 8, big, 2).unwrap();
        for variant in [LegalVariant::Fast, LegalVariant::Improved] {
            let (res, report) = edge_color_via_line_graph(&g, &params, variant, &Simulator::default()).unwrap();
            assert!(check_edge_coloring(&g, &res.coloring).unwrap().legal);
            assert_eq!(Some(res.vartheta), vartheta_of(&recursion_schedule(&params, big).unwrap(), 9));
            assert!(report.rounds <= 2 * report.logical_rounds + 2);
        }
    }

    #[test]
    fn lambda_below_line_degree_is_rejected() {
        let g = Graph::from_edges(4, &[(1, 2), (1, 3), (1, 4)]).unwrap();
        let params = LegalParams { b: 1, p: 9, lambda: 5, big_lambda: 1, c: 2, preset: crate::legal::Preset::Thm46 { t: 2 } };
        assert!(edge_color_direct(&g, &params, MsgMode::Wide, &Simulator::default()).is_err());
    }
}

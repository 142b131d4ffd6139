//! Randomized partition into low-degree classes, and the color/time tradeoff driven by
//! a function `g(Δ)`.

use crate::base::{kuhn_reduce, linial_reduce};
use crate::coloring::{Color, EdgeColoring, VertexColoring};
use crate::edge::edge_direct_core;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::legal::{legal_color, legal_from_rho, LegalParams, Preset};
use crate::defective::PhiMode;
use crate::sim::{Incoming, LocalView, MsgMode, Outbox, SimReport, Simulator, VertexProgram};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomizedParams {
    pub kappa: f64,
    pub eta: f64,
    pub seed: u64,
}

impl RandomizedParams {
    pub fn validate(&self) -> Result<()> {
        if self.kappa.is_nan() || self.kappa <= 1.0 || self.eta.is_nan() || self.eta <= 0.0 {
            return Err(Error::Params("need κ > 1 and η > 0".into()));
        }
        Ok(())
    }

    /// `ceil(κ·e·ln n)`.
    pub fn claimed_defect(&self, n: u64) -> u64 {
        (self.kappa * std::f64::consts::E * (n.max(2) as f64).ln()).ceil() as u64
    }
}

/// Uniform draw from `1..=palette`, keyed by `(seed, key, round)` so that it does not
/// depend on execution order.
pub fn keyed_draw(seed: u64, key: u64, round: u32, palette: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(key);
    rng.set_word_pos((round as u128) << 32);
    rng.gen_range(1..=palette)
}

/// `ceil(delta / ln n)`, or an error when `delta <= ln n`.
pub fn randomized_palette(delta: u64, n: u64) -> Result<u64> {
    let ln_n = (n.max(2) as f64).ln();
    if delta as f64 <= ln_n {
        return Err(Error::RandomizedRegime { delta, ln_n });
    }
    Ok((delta as f64 / ln_n).ceil() as u64)
}

struct RandomPick {
    seed: u64,
    palette: u64,
}

impl VertexProgram for RandomPick {
    type State = ();
    type Output = Color;

    fn init(&self, _: &LocalView<'_>) {}

    fn step(&self, v: &LocalView<'_>, _: &mut (), round: u32, _: &[Incoming], _: &mut Outbox) -> Option<Color> {
        Some(keyed_draw(self.seed, v.id() as u64, round, self.palette))
    }
}

/// Every vertex picks a color from `1..=ceil(Δ/ln n)` uniformly at random. The claimed
/// defect `ceil(κ·e·ln n)` holds with high probability, not on every run.
pub fn randomized_defective(g: &Graph, params: &RandomizedParams, sim: &Simulator) -> Result<VertexColoring> {
    params.validate()?;
    let n = sim.known_n(g);
    let palette = randomized_palette(g.delta() as u64, n)?;
    let run = sim.run(g, &RandomPick { seed: params.seed, palette })?;
    Ok(VertexColoring::from_aligned(g, run.outputs, palette, params.claimed_defect(n)))
}

/// Edge analogue on the line graph: palette `ceil(Δ(L)/ln m)`, keyed by edge rank.
pub fn randomized_defective_edges(g: &Graph, params: &RandomizedParams) -> Result<EdgeColoring> {
    params.validate()?;
    let m = g.m() as u64;
    let big = crate::base::class_line_degree(g, None);
    let palette = randomized_palette(big, m)?;
    let colors = (0..m).map(|e| keyed_draw(params.seed, e + 1, 0, palette)).collect();
    Ok(EdgeColoring::from_aligned(g, colors, palette, params.claimed_defect(m)))
}

/// `thm46(t)` with the smallest `t >= 2` such that `1/(t-1) <= η` and `p > 4c`.
pub fn thm46_for_eta(eta: f64, big_lambda: u64, c: u64) -> Result<LegalParams> {
    let mut t = 2u32;
    while 1.0 / (t - 1) as f64 > eta + 1e-12 || (3 * c + 1).saturating_pow(t) <= 4 * c {
        t += 1;
        if t > 64 {
            return Err(Error::Params(format!("no thm46 preset for η = {eta}")));
        }
    }
    LegalParams::thm46(t, big_lambda.max(1), c)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Vertex,
    Edge,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomizedResult {
    pub vertex: Option<VertexColoring>,
    pub edge: Option<EdgeColoring>,
    /// Seed that produced the result (after any reseeding).
    pub seed: u64,
    pub attempts: u32,
    /// Some class had a larger degree than the claimed defect.
    pub flagged: bool,
    pub claimed_defect: u64,
    pub measured_defect: u64,
    pub class_palette: u64,
    pub per_class_vartheta: u64,
}

/// Random partition followed by a deterministic legal coloring of every class in
/// parallel. A partition whose defect exceeds the claim is flagged; with
/// `max_attempts > 1` the seed is incremented and the partition redrawn.
pub fn randomized_color(
    g: &Graph,
    params: &RandomizedParams,
    target: Target,
    c: u64,
    max_attempts: u32,
    sim: &Simulator,
) -> Result<(RandomizedResult, SimReport)> {
    params.validate()?;
    let mut seed = params.seed;
    let mut attempts = 0;
    loop {
        attempts += 1;
        let p = RandomizedParams { seed, ..*params };
        let (mut res, report) = match target {
            Target::Vertex => randomized_vertex_once(g, &p, c, sim)?,
            Target::Edge => randomized_edge_once(g, &p, c, sim)?,
        };
        if !res.flagged || attempts >= max_attempts.max(1) {
            res.attempts = attempts;
            return Ok((res, report));
        }
        seed = seed.wrapping_add(1);
    }
}

fn max_same(g: &Graph, col: &[Color]) -> u64 {
    (0..g.n())
        .map(|v| g.neighbors(v).iter().filter(|&&w| col[w as usize] == col[v]).count() as u64)
        .max()
        .unwrap_or(0)
}

fn randomized_vertex_once(g: &Graph, params: &RandomizedParams, c: u64, sim: &Simulator) -> Result<(RandomizedResult, SimReport)> {
    let psi = randomized_defective(g, params, sim)?;
    let psi_col = psi.aligned(g)?;
    let measured = max_same(g, &psi_col);
    let claimed = psi.claimed_defect;
    let big = claimed.max(measured);
    let classes = g
        .filter_edges(|e| {
            let (a, b) = g.edges()[e];
            psi_col[a as usize] == psi_col[b as usize]
        })
        .0;
    let legal = thm46_for_eta(params.eta, big, c)?;
    let (res, r) = legal_color(&classes, &legal, PhiMode::Fast, sim)?;
    let mut report = SimReport::default();
    report.absorb("classes", r);
    let inner = res.phi.aligned(&classes)?;
    let colors = (0..g.n()).map(|v| (psi_col[v] - 1) * res.vartheta + inner[v]).collect();
    let coloring = VertexColoring::from_aligned(g, colors, psi.palette * res.vartheta, 0);
    Ok((
        RandomizedResult {
            vertex: Some(coloring),
            edge: None,
            seed: params.seed,
            attempts: 1,
            flagged: measured > claimed,
            claimed_defect: claimed,
            measured_defect: measured,
            class_palette: psi.palette,
            per_class_vartheta: res.vartheta,
        },
        report,
    ))
}

fn randomized_edge_once(g: &Graph, params: &RandomizedParams, c: u64, sim: &Simulator) -> Result<(RandomizedResult, SimReport)> {
    let psi = randomized_defective_edges(g, params)?;
    let psi_col = psi.aligned(g)?;
    let measured = crate::base::class_line_degree(g, Some(&psi_col));
    let claimed = psi.claimed_defect;
    let big = claimed.max(measured);
    let legal = thm46_for_eta(params.eta, big, c.max(2))?;
    let short = sim.with_mode(MsgMode::Short);
    let (inner, vartheta, _, mut report) = edge_direct_core(g, &short, &legal, Some(&psi_col))?;
    report.add_setup(2);
    let colors = (0..g.m()).map(|e| (psi_col[e] - 1) * vartheta + inner[e]).collect();
    let coloring = EdgeColoring::from_aligned(g, colors, psi.palette * vartheta, 0);
    Ok((
        RandomizedResult {
            vertex: None,
            edge: Some(coloring),
            seed: params.seed,
            attempts: 1,
            flagged: measured > claimed,
            claimed_defect: claimed,
            measured_defect: measured,
            class_palette: psi.palette,
            per_class_vartheta: vartheta,
        },
        report,
    ))
}

/// Monotone `g(Δ) >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "arg", rename_all = "lowercase")]
pub enum GFn {
    Const(f64),
    /// `Δ^α`.
    Power(f64),
    /// `log₂ Δ`.
    Log,
}

impl GFn {
    pub fn eval(&self, delta: u64) -> f64 {
        let d = delta.max(1) as f64;
        let v = match *self {
            GFn::Const(k) => k,
            GFn::Power(a) => d.powf(a),
            GFn::Log => d.log2(),
        };
        v.max(1.0)
    }
}

impl FromStr for GFn {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Params(format!("bad g function `{s}` (const:k, power:a or log)"));
        let num = |x: &str| -> Result<f64> {
            match x.split_once('/') {
                Some((a, b)) => Ok(a.parse::<f64>().map_err(|_| bad())? / b.parse::<f64>().map_err(|_| bad())?),
                None => x.parse().map_err(|_| bad()),
            }
        };
        match s.split_once(':') {
            Some(("const", k)) => Ok(GFn::Const(num(k)?)),
            Some(("power", a)) => Ok(GFn::Power(num(a)?)),
            None if s == "log" => Ok(GFn::Log),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TradeoffParams {
    pub g_fn: GFn,
    pub eta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TradeoffResult {
    pub coloring: VertexColoring,
    /// `g(Δ)^(1/(1-η))`.
    pub q: f64,
    pub p: u64,
    /// Defect bound `floor(Δ/p)` of the outer partition (0 on the fallback path).
    pub d: u64,
    pub outer_palette: u64,
    pub outer_measured_defect: u64,
    pub per_class_vartheta: u64,
    pub fallback: bool,
}

/// `O(Δ²/g(Δ))` colors: a `floor(Δ/p)`-defective `O(p²)`-coloring with `p = ceil(Δ/q)`,
/// then a legal coloring of every class. With `p <= 1` the whole graph is colored directly.
pub fn tradeoff_color(g: &Graph, params: &TradeoffParams, c: u64, sim: &Simulator) -> Result<(TradeoffResult, SimReport)> {
    if !(params.eta > 0.0 && params.eta < 1.0) {
        return Err(Error::Params("need 0 < η < 1".into()));
    }
    let delta = g.delta() as u64;
    let q = params.g_fn.eval(delta).powf(1.0 / (1.0 - params.eta));
    let p = (delta as f64 / q).ceil() as u64;
    let mut report = SimReport::default();
    let k0 = sim.known_n(g).max(g.max_id() as u64).max(1);
    let (rho, rho_pal, r) = linial_reduce(g, sim, None, k0, delta)?;
    report.absorb("rho", r);
    if p <= 1 {
        let legal = thm46_for_eta(params.eta, delta, c)?;
        let (res, r) = legal_from_rho(g, &legal, sim, &rho, rho_pal)?;
        report.absorb("legal", r);
        let result = TradeoffResult {
            q,
            p: 1,
            d: 0,
            outer_palette: 1,
            outer_measured_defect: 0,
            per_class_vartheta: res.vartheta,
            fallback: true,
            coloring: res.phi,
        };
        return Ok((result, report));
    }
    let d = delta / p;
    let (phi, phi_pal, r) = kuhn_reduce(g, sim, &rho, rho_pal, delta, d)?;
    report.absorb("kuhn", r);
    let measured = max_same(g, &phi);
    if measured > d {
        return Err(Error::DefectExceeded { level: 0, measured, bound: d });
    }
    let classes = g
        .filter_edges(|e| {
            let (a, b) = g.edges()[e];
            phi[a as usize] == phi[b as usize]
        })
        .0;
    let legal = thm46_for_eta(params.eta, d, c)?;
    let (res, r) = legal_from_rho(&classes, &legal, sim, &rho, rho_pal)?;
    report.absorb("classes", r);
    let inner = res.phi.aligned(&classes)?;
    let colors = (0..g.n()).map(|v| (phi[v] - 1) * res.vartheta + inner[v]).collect();
    let coloring = VertexColoring::from_aligned(g, colors, phi_pal * res.vartheta, 0);
    let result = TradeoffResult {
        coloring,
        q,
        p,
        d,
        outer_palette: phi_pal,
        outer_measured_defect: measured,
        per_class_vartheta: res.vartheta,
        fallback: false,
    };
    Ok((result, report))
}

/// The preset used for every class (exposed for reports).
pub fn class_preset(eta: f64, big_lambda: u64, c: u64) -> Result<Preset> {
    Ok(thm46_for_eta(eta, big_lambda, c)?.preset)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_line_graph;
    use crate::verify::{check_edge_coloring, check_vertex_coloring};

    fn random_graph(n: u32, d: usize, seed: u64) -> Graph {
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
    fn draws_are_keyed() {
        assert_eq!(keyed_draw(7, 3, 0, 100), keyed_draw(7, 3, 0, 100));
        let a: Vec<u64> = (1..50).map(|k| keyed_draw(7, k, 0, 1000)).collect();
        let b: Vec<u64> = (1..50).map(|k| keyed_draw(8, k, 0, 1000)).collect();
        assert_ne!(a, b);
        assert!(a.iter().all(|&x| (1..=1000).contains(&x)));
    }

    #[test]
    fn small_delta_is_refused() {
        let g = Graph::from_edges(100, &[(1, 2), (2, 3)]).unwrap();
        let p = RandomizedParams { kappa: 2.0, eta: 0.5, seed: 1 };
        assert!(matches!(randomized_defective(&g, &p, &Simulator::default()), Err(Error::RandomizedRegime { .. })));
    }

    #[test]
    fn randomized_vertex_and_edge() {
        let g = random_graph(400, 30, 3);
        let p = RandomizedParams { kappa: 2.0, eta: 0.5, seed: 11 };
        let sim = Simulator::default();
        let (res, _) = randomized_color(&g, &p, Target::Vertex, 2, 1, &sim).unwrap();
        let col = res.vertex.unwrap();
        assert!(check_vertex_coloring(&g, &col).unwrap().legal);
        assert!(col.max_color() <= col.palette);
        let (res, report) = randomized_color(&g, &p, Target::Edge, 2, 1, &sim).unwrap();
        let col = res.edge.unwrap();
        assert!(check_edge_coloring(&g, &col).unwrap().legal);
        assert_eq!(report.over_budget_rounds, 0);
    }

    #[test]
    fn eta_presets() {
        assert_eq!(thm46_for_eta(0.5, 10, 2).unwrap().preset, Preset::Thm46 { t: 3 });
        assert_eq!(thm46_for_eta(1.0, 10, 2).unwrap().preset, Preset::Thm46 { t: 2 });
        assert_eq!(thm46_for_eta(0.25, 10, 2).unwrap().preset, Preset::Thm46 { t: 5 });
    }

    #[test]
    fn tradeoff_endpoints_and_middle() {
        let mut e = Vec::new();
        for u in 1..=17u32 {
            for w in 18..=34 {
                e.push((u, w));
            }
        }
        let map = build_line_graph(&Graph::from_edges(34, &e).unwrap());
        let g = &map.lg;
        let sim = Simulator::default();
        for (gf, eta) in [(GFn::Power(0.5), 0.25), (GFn::Const(1.0), 0.5), (GFn::Power(1.0), 0.5)] {
            let (res, _) = tradeoff_color(g, &TradeoffParams { g_fn: gf, eta }, 2, &sim).unwrap();
            assert!(check_vertex_coloring(g, &res.coloring).unwrap().legal, "{gf:?}");
            assert!(res.outer_measured_defect <= res.d || res.fallback);
        }
        let (res, _) = tradeoff_color(g, &TradeoffParams { g_fn: GFn::Power(1.0), eta: 0.5 }, 2, &sim).unwrap();
        assert!(res.fallback);
        assert_eq!("power:1/2".parse::<GFn>().unwrap(), GFn::Power(0.5));
        assert_eq!("log".parse::<GFn>().unwrap(), GFn::Log);
    }
}

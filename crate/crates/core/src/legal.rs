//! Recursive legal coloring: defective-color, split by ψ, recurse on every class in
//! parallel, and give each class its own block of colors.

use crate::base::{first_conflict, linial_reduce, reduce_to_palette};
use crate::coloring::{Color, VertexColoring};
use crate::defective::{defect_bound_raw, phi_from_rho, recolor_loop, PhiMode};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::math::{ceil_tol, log_star};
use crate::sim::{SimReport, Simulator};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Preset {
    /// `b = ceil(Δ^(ε/6))`, `p = ceil(Δ^(ε/3))`, `λ = ceil(Δ^ε)`.
    Thm45 { eps: f64 },
    /// `λ = (3c+1)^(6t)`, `b = (3c+1)^(2t)`, `p = (3c+1)^t`.
    Thm46 { t: u32 },
    /// `λ = ceil(log₂^ε Δ)`, `b = ceil(λ^(1/3))`, `p = ceil(λ^(1/6))`.
    Thm48_3 { eps: f64 },
    /// `λ = log* Δ`, `b = ceil(λ^(1/3))`, `p = ceil(λ^(1/6))`.
    ImprovedS42,
    Custom,
}

impl Preset {
    pub fn name(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::Thm45 { eps } => write!(f, "thm45({eps})"),
            Preset::Thm46 { t } => write!(f, "thm46({t})"),
            Preset::Thm48_3 { eps } => write!(f, "thm48_3({eps})"),
            Preset::ImprovedS42 => write!(f, "improved_s42"),
            Preset::Custom => write!(f, "custom"),
        }
    }
}

/// Accepts `thm45:0.75`, `thm46:2`, `thm46` (smallest feasible `t`, encoded as `t = 0`),
/// `thm48_3:0.5`, `improved_s42` and `custom`.
impl FromStr for Preset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once([':', '=']) {
            Some((a, b)) => (a, Some(b)),
            None => (s, None),
        };
        let num = |what: &str| -> Result<f64> {
            let a = arg.ok_or_else(|| Error::Params(format!("{what} needs an argument")))?;
            if let Some((x, y)) = a.split_once('/') {
                let x: f64 = x.trim().parse().map_err(|_| Error::Params(format!("bad number `{a}`")))?;
                let y: f64 = y.trim().parse().map_err(|_| Error::Params(format!("bad number `{a}`")))?;
                return Ok(x / y);
            }
            a.trim().parse().map_err(|_| Error::Params(format!("bad number `{a}`")))
        };
        match name {
            "thm45" => Ok(Preset::Thm45 { eps: num("thm45")? }),
            "thm46" => Ok(Preset::Thm46 { t: if arg.is_some() { num("thm46")? as u32 } else { 0 } }),
            "thm48_3" => Ok(Preset::Thm48_3 { eps: num("thm48_3")? }),
            "improved_s42" => Ok(Preset::ImprovedS42),
            "custom" => Ok(Preset::Custom),
            _ => Err(Error::Params(format!("unknown preset `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LegalParams {
    pub b: u64,
    pub p: u64,
    /// Recursion threshold λ.
    pub lambda: u64,
    /// Initial degree bound Λ.
    pub big_lambda: u64,
    pub c: u64,
    pub preset: Preset,
}

impl LegalParams {
    /// Validated custom parameters.
    pub fn custom(b: u64, p: u64, lambda: u64, big_lambda: u64, c: u64) -> Result<Self> {
        let params = LegalParams { b, p, lambda, big_lambda, c, preset: Preset::Custom };
        params.check().map_err(Error::Params)?;
        Ok(params)
    }

    /// Preset values for a graph with maximum degree `delta` (Λ = `delta`). A preset
    /// whose rounded values break a precondition errors with the first feasible Δ.
    pub fn from_preset(preset: Preset, delta: u64, c: u64) -> Result<Self> {
        if let Preset::Thm46 { t: 0 } = preset {
            return Self::thm46_smallest(delta, c);
        }
        if preset == Preset::Custom {
            return Err(Error::Params("custom parameters need explicit values".into()));
        }
        let params = raw_preset(preset, delta, c)?;
        match params.check() {
            Ok(()) => Ok(params),
            Err(reason) => Err(Error::PresetInfeasible {
                preset: preset.name(),
                delta,
                reason,
                first_feasible: first_feasible_delta(preset, delta, c),
            }),
        }
    }

    pub fn thm45(eps: f64, delta: u64, c: u64) -> Result<Self> {
        Self::from_preset(Preset::Thm45 { eps }, delta, c)
    }

    pub fn thm46(t: u32, delta: u64, c: u64) -> Result<Self> {
        Self::from_preset(Preset::Thm46 { t }, delta, c)
    }

    /// [`Self::thm46`] with the smallest `t >= 1` that satisfies `p > 4c`.
    pub fn thm46_smallest(delta: u64, c: u64) -> Result<Self> {
        Self::thm46(smallest_thm46_t(c), delta, c)
    }

    /// Whether the preconditions hold; the error names the first one that fails.
    /// Under `thm46` the threshold λ may exceed Λ (the whole run is then the bottom case),
    /// and `b·p <= Λ` is only required when a defective step actually runs.
    pub fn check(&self) -> std::result::Result<(), String> {
        let LegalParams { b, p, lambda, big_lambda, c, preset } = *self;
        if b < 1 || p < 1 || c < 1 || big_lambda < 1 {
            return Err("b, p, c and Λ must be positive".into());
        }
        if p <= 4 * c {
            return Err(format!("p = {p} is not above 4c = {}", 4 * c));
        }
        if lambda <= 2 * c {
            return Err(format!("λ = {lambda} is not above 2c = {}", 2 * c));
        }
        let relaxed = matches!(preset, Preset::Thm46 { .. });
        if !relaxed && lambda > big_lambda {
            return Err(format!("λ = {lambda} exceeds Λ = {big_lambda}"));
        }
        if (!relaxed || big_lambda > lambda) && (b as u128) * (p as u128) > big_lambda as u128 {
            return Err(format!("b·p = {} exceeds Λ = {big_lambda}", b as u128 * p as u128));
        }
        Ok(())
    }
}

pub(crate) fn smallest_thm46_t(c: u64) -> u32 {
    let base = 3 * c + 1;
    let mut t = 1;
    while base.saturating_pow(t) <= 4 * c {
        t += 1;
    }
    t
}

/// Preset values before any precondition check.
pub fn raw_preset(preset: Preset, delta: u64, c: u64) -> Result<LegalParams> {
    let d = delta as f64;
    let (b, p, lambda) = match preset {
        Preset::Thm45 { eps } => {
            if eps.is_nan() || eps <= 0.0 {
                return Err(Error::Params("ε must be positive".into()));
            }
            (ceil_tol(d.powf(eps / 6.0)), ceil_tol(d.powf(eps / 3.0)), ceil_tol(d.powf(eps)))
        }
        Preset::Thm46 { t } => {
            if t == 0 {
                return raw_preset(Preset::Thm46 { t: smallest_thm46_t(c) }, delta, c);
            }
            // λ and b saturate: a threshold beyond u64 is never reached anyway.
            let base = 3 * c + 1;
            let p = base.checked_pow(t).ok_or_else(|| Error::Params(format!("(3c+1)^{t} overflows")))?;
            (base.saturating_pow(2 * t), p, base.saturating_pow(6 * t))
        }
        Preset::Thm48_3 { eps } => {
            if eps.is_nan() || eps <= 0.0 {
                return Err(Error::Params("ε must be positive".into()));
            }
            let lambda = ceil_tol(d.max(1.0).log2().powf(eps)).max(1);
            let l = lambda as f64;
            (ceil_tol(l.powf(1.0 / 3.0)), ceil_tol(l.powf(1.0 / 6.0)), lambda)
        }
        Preset::ImprovedS42 => {
            let lambda = log_star(d).max(1) as u64;
            let l = lambda as f64;
            (ceil_tol(l.powf(1.0 / 3.0)), ceil_tol(l.powf(1.0 / 6.0)), lambda)
        }
        Preset::Custom => return Err(Error::Params("custom parameters have no preset values".into())),
    };
    Ok(LegalParams { b: b.max(1), p: p.max(1), lambda, big_lambda: delta, c, preset })
}

/// Smallest Δ above `delta` at which the preset is feasible, searching up to 2^62.
/// Feasibility is taken to be monotone once reached (binary search after doubling).
pub fn first_feasible_delta(preset: Preset, delta: u64, c: u64) -> Option<u64> {
    let ok = |d: u64| raw_preset(preset, d, c).is_ok_and(|p| p.check().is_ok());
    let mut lo = delta.max(1);
    let mut hi = lo;
    loop {
        hi = hi.checked_mul(2)?;
        if hi > 1 << 62 {
            return None;
        }
        if ok(hi) {
            break;
        }
        lo = hi;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// `Λ^(0) = delta, Λ^(i+1) = floor((Λ^(i)/(bp) + Λ^(i)/p)·c + c)` until `Λ^(r) <= λ`.
/// Errors if a step does not shrink Λ; under `thm45(ε)` also checks
/// `Λ' <= 3c·Λ/Δ^(ε/3)` whenever `Λ >= Δ^ε`.
pub fn recursion_schedule(params: &LegalParams, delta: u64) -> Result<Vec<u64>> {
    let LegalParams { b, p, lambda, c, preset, .. } = *params;
    if b < 1 || p < 1 {
        return Err(Error::Params("b and p must be positive".into()));
    }
    let mut out = vec![delta];
    let mut cur = delta;
    while cur > lambda {
        let next = defect_bound_raw(b, p, cur, c);
        if next >= cur {
            return Err(Error::NoShrink { from: cur, to: next });
        }
        if let Preset::Thm45 { eps } = preset {
            let dd = params.big_lambda.max(delta) as f64;
            if cur as f64 >= dd.powf(eps) * (1.0 - 1e-12) {
                let bound = 3.0 * c as f64 * cur as f64 / dd.powf(eps / 3.0);
                if next as f64 > bound * (1.0 + 1e-12) {
                    return Err(Error::Contraction { from: cur, to: next, bound });
                }
            }
        }
        out.push(next);
        cur = next;
    }
    Ok(out)
}

/// `(Λ^(r) + 1)·p^r` for a schedule.
pub fn vartheta_of(schedule: &[u64], p: u64) -> Option<u64> {
    let r = schedule.len() as u32 - 1;
    p.checked_pow(r)?.checked_mul(schedule.last()? + 1)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LegalResult {
    pub phi: VertexColoring,
    pub vartheta: u64,
    pub depth: u32,
    pub level_lambdas: Vec<u64>,
    /// `ϑ` of every class at every level, gathered bottom-up (level 0 first).
    pub level_varthetas: Vec<Vec<u64>>,
}

/// Where each level's φ comes from.
enum Source<'a> {
    /// Linial from the Ids of the current union graph, then `mode`.
    Ids(PhiMode),
    /// A legal coloring of the whole graph computed once.
    Rho(&'a [Color], u64),
}

/// Which flavor of the recursion to run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LegalVariant {
    #[default]
    Fast,
    Simple,
    Improved,
}

impl FromStr for LegalVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(LegalVariant::Fast),
            "simple" => Ok(LegalVariant::Simple),
            "improved" => Ok(LegalVariant::Improved),
            _ => Err(Error::Params(format!("unknown variant `{s}`"))),
        }
    }
}

pub fn run_legal(g: &Graph, params: &LegalParams, variant: LegalVariant, sim: &Simulator) -> Result<(LegalResult, SimReport)> {
    match variant {
        LegalVariant::Fast => legal_color(g, params, PhiMode::Fast, sim),
        LegalVariant::Simple => legal_color(g, params, PhiMode::Simple, sim),
        LegalVariant::Improved => improved_legal_color(g, params, sim),
    }
}

/// Legal coloring with palette at most ϑ.
pub fn legal_color(g: &Graph, params: &LegalParams, mode: PhiMode, sim: &Simulator) -> Result<(LegalResult, SimReport)> {
    legal_core(g, params, sim, Source::Ids(mode))
}

/// As [`legal_color`], but Linial runs once on the whole graph and every level derives
/// φ from that coloring.
pub fn improved_legal_color(g: &Graph, params: &LegalParams, sim: &Simulator) -> Result<(LegalResult, SimReport)> {
    pre_check(g, params)?;
    let k0 = sim.known_n(g).max(g.max_id() as u64).max(1);
    let (rho, rho_pal, r) = linial_reduce(g, sim, None, k0, g.delta() as u64)?;
    let (res, rest) = legal_core(g, params, sim, Source::Rho(&rho, rho_pal))?;
    let mut report = SimReport::default();
    report.absorb("rho", r);
    report.extend(rest);
    Ok((res, report))
}

/// [`improved_legal_color`] with a legal coloring `rho` of `g` supplied by the caller.
pub(crate) fn legal_from_rho(
    g: &Graph,
    params: &LegalParams,
    sim: &Simulator,
    rho: &[Color],
    rho_palette: u64,
) -> Result<(LegalResult, SimReport)> {
    legal_core(g, params, sim, Source::Rho(rho, rho_palette))
}

fn pre_check(g: &Graph, params: &LegalParams) -> Result<()> {
    params.check().map_err(Error::Params)?;
    if params.big_lambda < g.delta() as u64 {
        return Err(Error::Params(format!("Λ = {} is below Δ = {}", params.big_lambda, g.delta())));
    }
    Ok(())
}

fn legal_core(g: &Graph, params: &LegalParams, sim: &Simulator, src: Source<'_>) -> Result<(LegalResult, SimReport)> {
    pre_check(g, params)?;
    let schedule = recursion_schedule(params, params.big_lambda)?;
    let depth = schedule.len() as u32 - 1;
    let bottom = *schedule.last().unwrap();
    let vartheta = vartheta_of(&schedule, params.p)
        .ok_or_else(|| Error::Params("ϑ does not fit in 64 bits".into()))?;
    let k0 = sim.known_n(g).max(g.max_id() as u64).max(1);
    let p = params.p;
    let mut report = SimReport::default();
    let mut cur = g.clone();
    let mut offset = vec![0u64; g.n()];
    // Class of each vertex after each level, for the ϑ audit.
    let mut trail: Vec<Vec<u64>> = vec![offset.clone()];

    for (level, &big) in schedule[..depth as usize].iter().enumerate() {
        let d = big / (params.b * p);
        let (phi, phi_pal) = match src {
            Source::Ids(mode) => {
                let (rho, pal, r) = linial_reduce(&cur, sim, None, k0, big)?;
                report.absorb(&format!("level{level}/linial"), r);
                let (phi, pal, _, r) = phi_from_rho(&cur, sim, &rho, pal, big, d, mode)?;
                if mode == PhiMode::Fast && d > 0 {
                    report.absorb(&format!("level{level}/kuhn"), r);
                }
                (phi, pal)
            }
            Source::Rho(rho, pal) => {
                if d == 0 {
                    // A legal O(Λ²)-coloring keeps the recolor loop short.
                    let (phi, pal, r) = linial_reduce(&cur, sim, Some(rho), pal, big)?;
                    report.absorb(&format!("level{level}/linial"), r);
                    (phi, pal)
                } else {
                    let (phi, pal, _, r) = phi_from_rho(&cur, sim, rho, pal, big, d, PhiMode::Fast)?;
                    report.absorb(&format!("level{level}/kuhn"), r);
                    (phi, pal)
                }
            }
        };
        let (psi, r) = recolor_loop(&cur, sim, &phi, phi_pal, p)?;
        report.absorb(&format!("level{level}/recolor"), r);
        let next_bound = schedule[level + 1];
        let measured = max_same_neighbors(&cur, &psi);
        if measured > next_bound {
            return Err(Error::DefectExceeded { level, measured, bound: next_bound });
        }
        for v in 0..g.n() {
            offset[v] = offset[v] * p + (psi[v] - 1);
        }
        trail.push(offset.clone());
        cur = cur.filter_edges(|e| {
            let (a, b) = cur.edges()[e];
            psi[a as usize] == psi[b as usize]
        })
        .0;
    }

    let (start, start_pal) = match src {
        Source::Ids(_) => {
            let (c, pal, r) = linial_reduce(&cur, sim, None, k0, bottom)?;
            report.absorb("bottom/linial", r);
            (c, pal)
        }
        Source::Rho(rho, pal) => {
            let (c, pal, r) = linial_reduce(&cur, sim, Some(rho), pal, bottom)?;
            report.absorb("bottom/linial", r);
            (c, pal)
        }
    };
    let (fin, r) = reduce_to_palette(&cur, sim, &start, start_pal, bottom + 1)?;
    report.absorb("bottom/reduce", r);

    let colors: Vec<Color> = (0..g.n()).map(|v| offset[v] * (bottom + 1) + fin[v]).collect();
    if let Some((a, b)) = first_conflict(g, &colors) {
        return Err(Error::NotLegal(format!("vertices {} and {} share a color", g.id(a), g.id(b))));
    }
    if colors.iter().any(|&x| x == 0 || x > vartheta) {
        return Err(Error::NotLegal(format!("a color exceeds ϑ = {vartheta}")));
    }
    let level_varthetas = audit_varthetas(&trail, p, bottom)?;
    if level_varthetas[0].iter().any(|&t| t != vartheta) {
        return Err(Error::NotLegal(format!("bottom-up ϑ {:?} differs from {vartheta}", level_varthetas[0])));
    }
    let result = LegalResult {
        phi: VertexColoring::from_aligned(g, colors, vartheta, 0),
        vartheta,
        depth,
        level_lambdas: schedule,
        level_varthetas,
    };
    Ok((result, report))
}

fn max_same_neighbors(g: &Graph, col: &[Color]) -> u64 {
    (0..g.n())
        .map(|v| g.neighbors(v).iter().filter(|&&w| col[w as usize] == col[v]).count() as u64)
        .max()
        .unwrap_or(0)
}

/// Recomputes ϑ for every class bottom-up: a bottom class returns `Λ^(r)+1`, an inner
/// class returns `p` times the common ϑ of its children. Errors if siblings disagree.
fn audit_varthetas(trail: &[Vec<u64>], p: u64, bottom: u64) -> Result<Vec<Vec<u64>>> {
    let depth = trail.len() - 1;
    let mut below: BTreeMap<u64, u64> = trail[depth].iter().map(|&o| (o, bottom + 1)).collect();
    let mut levels = vec![below.values().copied().collect::<Vec<_>>()];
    for j in (0..depth).rev() {
        let mut children: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for (&child, &t) in &below {
            children.entry(child / p).or_default().push(t);
        }
        let mut here = BTreeMap::new();
        for (parent, ts) in children {
            if ts.iter().any(|&t| t != ts[0]) {
                return Err(Error::NotLegal(format!("siblings at level {} return ϑ values {ts:?}", j + 1)));
            }
            here.insert(parent, ts[0] * p);
        }
        debug_assert!(trail[j].iter().all(|o| here.contains_key(o)));
        levels.push(here.values().copied().collect());
        below = here;
    }
    levels.reverse();
    Ok(levels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_line_graph;
    use crate::verify::check_vertex_coloring;

    fn k_nn(n: u32) -> Graph {
        let mut e = Vec::new();
        for u in 1..=n {
            for w in n + 1..=2 * n {
                e.push((u, w));
            }
        }
        Graph::from_edges(2 * n as usize, &e).unwrap()
    }

    fn worked() -> LegalParams {
        LegalParams::custom(2, 9, 8, 64, 2).unwrap()
    }

    #[test]
    fn worked_schedule() {
        let s = recursion_schedule(&worked(), 64).unwrap();
        assert_eq!(s, vec![64, 23, 9, 5]);
        assert_eq!(vartheta_of(&s, 9), Some(4374));
    }

    #[test]
    fn schedule_without_recursion() {
        let p = LegalParams::custom(2, 9, 64, 64, 2).unwrap();
        assert_eq!(recursion_schedule(&p, 64).unwrap(), vec![64]);
    }

    #[test]
    fn no_shrink_is_an_error() {
        let p = LegalParams { b: 1, p: 2, lambda: 5, big_lambda: 50, c: 1, preset: Preset::Custom };
        assert!(matches!(recursion_schedule(&p, 50), Err(Error::NoShrink { .. })));
    }

    #[test]
    fn preset_feasibility() {
        let e = LegalParams::thm45(0.75, 4096, 2).unwrap_err();
        match e {
            Error::PresetInfeasible { first_feasible, .. } => assert_eq!(first_feasible, Some(4097)),
            other => panic!("{other:?}"),
        }
        let p = LegalParams::thm45(0.75, 4097, 2).unwrap();
        assert_eq!((p.b, p.p, p.lambda), (3, 9, 513));
        recursion_schedule(&p, 4097).unwrap();
        let raw = raw_preset(Preset::Thm45 { eps: 0.75 }, 4096, 2).unwrap();
        assert_eq!((raw.b, raw.p, raw.lambda), (3, 8, 512));
        let t = LegalParams::thm46_smallest(16, 2).unwrap();
        assert_eq!(t.preset, Preset::Thm46 { t: 2 });
        assert_eq!((t.b, t.p, t.lambda), (7u64.pow(4), 49, 7u64.pow(12)));
        assert!(matches!(
            LegalParams::from_preset(Preset::Thm48_3 { eps: 0.5 }, 256, 2),
            Err(Error::PresetInfeasible { first_feasible: None, .. })
        ));
        assert!(LegalParams::from_preset(Preset::ImprovedS42, 256, 2).is_err());
    }

    #[test]
    fn preset_parsing() {
        assert_eq!("thm45:3/4".parse::<Preset>().unwrap(), Preset::Thm45 { eps: 0.75 });
        assert_eq!("thm46".parse::<Preset>().unwrap(), Preset::Thm46 { t: 0 });
        assert_eq!("thm46:3".parse::<Preset>().unwrap(), Preset::Thm46 { t: 3 });
        assert!("nope".parse::<Preset>().is_err());
    }

    #[test]
    fn bottom_case_only() {
        let map = build_line_graph(&k_nn(5));
        let g = &map.lg;
        let params = LegalParams::thm46_smallest(g.delta() as u64, 2).unwrap();
        let (res, _) = legal_color(g, &params, PhiMode::Fast, &Simulator::default()).unwrap();
        assert_eq!(res.depth, 0);
        assert_eq!(res.vartheta, g.delta() as u64 + 1);
        assert!(check_vertex_coloring(g, &res.phi).unwrap().legal);
    }

    #[test]
    fn recursion_on_line_graph() {
        let map = build_line_graph(&k_nn(17));
        let g = &map.lg;
        assert_eq!(g.delta(), 32);
        let params = LegalParams::custom(2, 9, 8, 32, 2).unwrap();
        let sched = recursion_schedule(&params, 32).unwrap();
        for run in 0..3 {
            let sim = Simulator::default();
            let (res, report) = match run {
                0 => legal_color(g, &params, PhiMode::Fast, &sim).unwrap(),
                1 => legal_color(g, &params, PhiMode::Simple, &sim).unwrap(),
                _ => improved_legal_color(g, &params, &sim).unwrap(),
            };
            assert_eq!(res.level_lambdas, sched);
            assert_eq!(Some(res.vartheta), vartheta_of(&sched, 9));
            let rep = check_vertex_coloring(g, &res.phi).unwrap();
            assert!(rep.legal && rep.passed());
            assert!(res.phi.max_color() <= res.vartheta);
            assert!(report.rounds > 0);
        }
    }
}

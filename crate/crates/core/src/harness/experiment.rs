use super::gen::GraphSpec;
use crate::base::{
    class_line_degree, edge_color_2delta_minus_1, kuhn_defective_edge, kuhn_defective_vertex, linial_coloring,
    reduce_to_delta_plus_one,
};
use crate::coloring::{EdgeColoring, VertexColoring};
use crate::defective::{defect_bound, defective_color, DefectiveParams, PhiMode};
use crate::edge::{edge_color_direct, edge_color_via_line_graph};
use crate::error::{Error, Result};
use crate::extensions::{randomized_color, tradeoff_color, GFn, RandomizedParams, Target, TradeoffParams};
use crate::graph::{neighborhood_independence_capped, Graph};
use crate::legal::{run_legal, LegalParams, LegalVariant, Preset};
use crate::sim::{MsgMode, PhaseStat, SimConfig, SimReport, Simulator};
use crate::verify::{check_edge_coloring, check_vertex_coloring, VerificationReport};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::fmt;
use std::str::FromStr;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Linial,
    Reduce,
    KuhnVertex,
    KuhnEdge,
    Edge2Delta,
    Defective,
    Legal,
    EdgeDirect,
    EdgeSim,
    Randomized,
    RandomizedEdge,
    Tradeoff,
}

impl Algorithm {
    pub const ALL: [Algorithm; 12] = [
        Algorithm::Linial,
        Algorithm::Reduce,
        Algorithm::KuhnVertex,
        Algorithm::KuhnEdge,
        Algorithm::Edge2Delta,
        Algorithm::Defective,
        Algorithm::Legal,
        Algorithm::EdgeDirect,
        Algorithm::EdgeSim,
        Algorithm::Randomized,
        Algorithm::RandomizedEdge,
        Algorithm::Tradeoff,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Linial => "linial",
            Algorithm::Reduce => "reduce",
            Algorithm::KuhnVertex => "kuhn-vertex",
            Algorithm::KuhnEdge => "kuhn-edge",
            Algorithm::Edge2Delta => "edge-2delta",
            Algorithm::Defective => "defective",
            Algorithm::Legal => "legal",
            Algorithm::EdgeDirect => "edge-direct",
            Algorithm::EdgeSim => "edge-sim",
            Algorithm::Randomized => "randomized",
            Algorithm::RandomizedEdge => "randomized-edge",
            Algorithm::Tradeoff => "tradeoff",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Params(format!("unknown algorithm `{s}`")))
    }
}

/// Explicit `b`, `p`, `λ` and optionally Λ; unset values come from the graph.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CustomParams {
    pub b: Option<u64>,
    pub p: Option<u64>,
    pub lambda: Option<u64>,
    pub big_lambda: Option<u64>,
}

impl FromStr for CustomParams {
    type Err = Error;
    /// `b=2,p=9,lambda=8[,Lambda=64]`.
    fn from_str(s: &str) -> Result<Self> {
        let mut out = CustomParams::default();
        for part in s.split(',').filter(|x| !x.is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| Error::Params(format!("expected key=value in `{part}`")))?;
            let v: u64 = v.trim().parse().map_err(|_| Error::Params(format!("bad value in `{part}`")))?;
            match k.trim() {
                "b" => out.b = Some(v),
                "p" => out.p = Some(v),
                "lambda" => out.lambda = Some(v),
                "Lambda" | "big_lambda" => out.big_lambda = Some(v),
                other => return Err(Error::Params(format!("unknown parameter `{other}`"))),
            }
        }
        Ok(out)
    }
}

fn default_reps() -> u32 {
    1
}

fn default_mode() -> MsgMode {
    MsgMode::Wide
}

/// Everything needed to reproduce one experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub graph: GraphSpec,
    #[serde(default)]
    pub seed: u64,
    pub algorithm: Algorithm,
    /// Preset for `legal`, `edge-direct` and `edge-sim`; `custom` uses `params`.
    #[serde(default)]
    pub preset: Option<String>,
    #[serde(default)]
    pub params: Option<CustomParams>,
    #[serde(default)]
    pub c: Option<u64>,
    #[serde(default = "default_mode")]
    pub msg_mode: MsgMode,
    #[serde(default)]
    pub variant: LegalVariant,
    #[serde(default)]
    pub p_prime: Option<u64>,
    #[serde(default)]
    pub d: Option<u64>,
    #[serde(default)]
    pub kappa: Option<f64>,
    #[serde(default)]
    pub eta: Option<f64>,
    #[serde(default)]
    pub g_fn: Option<String>,
    #[serde(default)]
    pub round_cap: Option<u32>,
    /// Repetition `i` uses seed `seed + i`.
    #[serde(default = "default_reps")]
    pub repetitions: u32,
    /// Where the report goes; `None` means standard output.
    #[serde(default)]
    pub output: Option<String>,
}

impl ExperimentSpec {
    pub fn new(graph: GraphSpec, algorithm: Algorithm) -> Self {
        ExperimentSpec {
            graph,
            seed: 0,
            algorithm,
            preset: None,
            params: None,
            c: None,
            msg_mode: MsgMode::Wide,
            variant: LegalVariant::Fast,
            p_prime: None,
            d: None,
            kappa: None,
            eta: None,
            g_fn: None,
            round_cap: None,
            repetitions: 1,
            output: None,
        }
    }
}

/// One row of an experiment: the graph, what ran, what it cost and what the checker found.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema: u32,
    pub graph: String,
    pub seed: u64,
    pub n: u64,
    pub m: u64,
    pub delta: u64,
    pub c: Option<u64>,
    pub algorithm: String,
    pub preset: Option<String>,
    pub params: Value,
    pub rounds: u64,
    pub logical_rounds: u64,
    pub setup_rounds: u64,
    pub colors_used: u64,
    pub palette: u64,
    pub vartheta: Option<u64>,
    pub measured_defect: u64,
    pub max_msg_bits: u64,
    pub budget_bits: u64,
    pub over_budget_rounds: u64,
    pub msgs_per_edge_round: u64,
    pub extra: Value,
    pub verification: VerificationReport,
    pub phases: Vec<PhaseStat>,
}

/// The coloring a run produced.
#[derive(Clone, Debug, PartialEq)]
pub enum Produced {
    Vertex(VertexColoring),
    Edge(EdgeColoring),
}

impl Produced {
    pub fn to_text(&self) -> String {
        match self {
            Produced::Vertex(c) => c.to_text(),
            Produced::Edge(c) => c.to_text(),
        }
    }
}

struct Outcome {
    coloring: Produced,
    report: SimReport,
    params: Value,
    preset: Option<String>,
    vartheta: Option<u64>,
    extra: Value,
}

impl Outcome {
    fn plain(coloring: Produced, report: SimReport) -> Self {
        Outcome { coloring, report, params: Value::Null, preset: None, vartheta: None, extra: Value::Null }
    }
}

/// Runs every repetition of `spec`.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<RunRecord>> {
    Ok(run_with_colorings(spec)?.into_iter().map(|(r, _)| r).collect())
}

/// As [`run_experiment`], also returning each repetition's coloring.
pub fn run_with_colorings(spec: &ExperimentSpec) -> Result<Vec<(RunRecord, Produced)>> {
    (0..spec.repetitions.max(1)).map(|i| run_once(spec, spec.seed.wrapping_add(i as u64))).collect()
}

/// Independence bound for `g`: given, known from the generator, or computed exactly
/// (refused above degree 96).
pub fn resolve_c(spec: &ExperimentSpec, g: &Graph) -> Result<u64> {
    if let Some(c) = spec.c.or(spec.graph.known_c()) {
        return Ok(c.max(1));
    }
    Ok(neighborhood_independence_capped(g, 96)?.max(1) as u64)
}

fn legal_params(spec: &ExperimentSpec, big_lambda: u64, c: u64) -> Result<LegalParams> {
    let preset: Preset = spec.preset.as_deref().unwrap_or("thm46").parse()?;
    if preset == Preset::Custom || (spec.preset.is_none() && spec.params.is_some()) {
        let cp = spec.params.ok_or_else(|| Error::Params("custom preset needs --params".into()))?;
        let need = |x: Option<u64>, what: &str| x.ok_or_else(|| Error::Params(format!("custom params need {what}")));
        return LegalParams::custom(need(cp.b, "b")?, need(cp.p, "p")?, need(cp.lambda, "lambda")?, cp.big_lambda.unwrap_or(big_lambda), c);
    }
    LegalParams::from_preset(preset, big_lambda, c)
}

fn run_once(spec: &ExperimentSpec, seed: u64) -> Result<(RunRecord, Produced)> {
    let g = spec.graph.generate(seed)?;
    let mut config = SimConfig { msg_mode: spec.msg_mode, ..Default::default() };
    if let Some(cap) = spec.round_cap {
        config.round_cap = cap;
    }
    let sim = Simulator::new(config);
    let delta = g.delta() as u64;
    let c = match spec.algorithm {
        Algorithm::Defective | Algorithm::Legal | Algorithm::Tradeoff => Some(resolve_c(spec, &g)?),
        // These color the line graph, whose neighborhood independence is at most 2.
        Algorithm::EdgeDirect | Algorithm::EdgeSim | Algorithm::RandomizedEdge => Some(spec.c.unwrap_or(2)),
        _ => spec.c.or(spec.graph.known_c()),
    };
    let out = match spec.algorithm {
        Algorithm::Linial => {
            let (col, r) = linial_coloring(&g, &sim)?;
            Outcome::plain(Produced::Vertex(col), r)
        }
        Algorithm::Reduce => {
            let (start, r1) = linial_coloring(&g, &sim)?;
            let (col, r2) = reduce_to_delta_plus_one(&g, &start, &sim)?;
            let mut r = SimReport::default();
            r.absorb("linial", r1);
            r.absorb("reduce", r2);
            Outcome::plain(Produced::Vertex(col), r)
        }
        Algorithm::KuhnVertex => {
            let d = spec.d.ok_or_else(|| Error::Params("kuhn-vertex needs d".into()))?;
            let (rho, r1) = linial_coloring(&g, &sim)?;
            let (col, r2) = kuhn_defective_vertex(&g, &rho, d, &sim)?;
            let mut r = SimReport::default();
            r.absorb("linial", r1);
            r.absorb("kuhn", r2);
            Outcome { params: json!({ "d": d }), ..Outcome::plain(Produced::Vertex(col), r) }
        }
        Algorithm::KuhnEdge => {
            let pp = spec.p_prime.ok_or_else(|| Error::Params("kuhn-edge needs p_prime".into()))?;
            let (col, r) = kuhn_defective_edge(&g, pp, &sim)?;
            Outcome { params: json!({ "p_prime": pp }), ..Outcome::plain(Produced::Edge(col), r) }
        }
        Algorithm::Edge2Delta => {
            let (col, r) = edge_color_2delta_minus_1(&g, &sim)?;
            Outcome::plain(Produced::Edge(col), r)
        }
        Algorithm::Defective => {
            let cp = spec.params.unwrap_or_default();
            let params = DefectiveParams {
                b: cp.b.unwrap_or(1),
                p: cp.p.ok_or_else(|| Error::Params("defective needs p".into()))?,
                big_lambda: cp.big_lambda.unwrap_or(delta),
                c: c.unwrap(),
            };
            let mode = if spec.variant == LegalVariant::Simple { PhiMode::Simple } else { PhiMode::Fast };
            let run = defective_color(&g, &params, mode, &sim)?;
            Outcome {
                params: serde_json::to_value(params).unwrap(),
                extra: json!({
                    "defect_bound": defect_bound(&params),
                    "loop_rounds": run.loop_rounds,
                    "phi_palette": run.phi.palette,
                }),
                ..Outcome::plain(Produced::Vertex(run.psi), run.report)
            }
        }
        Algorithm::Legal => {
            let params = legal_params(spec, delta, c.unwrap())?;
            let (res, r) = run_legal(&g, &params, spec.variant, &sim)?;
            Outcome {
                params: serde_json::to_value(params).unwrap(),
                preset: Some(params.preset.name()),
                vartheta: Some(res.vartheta),
                extra: json!({ "depth": res.depth, "level_lambdas": res.level_lambdas }),
                ..Outcome::plain(Produced::Vertex(res.phi), r)
            }
        }
        Algorithm::EdgeDirect | Algorithm::EdgeSim => {
            let big = class_line_degree(&g, None).max(1);
            let params = legal_params(spec, big, c.unwrap())?;
            let (res, r) = if spec.algorithm == Algorithm::EdgeDirect {
                edge_color_direct(&g, &params, spec.msg_mode, &sim)?
            } else {
                edge_color_via_line_graph(&g, &params, spec.variant, &sim)?
            };
            Outcome {
                params: serde_json::to_value(params).unwrap(),
                preset: Some(params.preset.name()),
                vartheta: Some(res.vartheta),
                extra: json!({ "depth": res.depth, "level_lambdas": res.level_lambdas, "line_delta": big }),
                ..Outcome::plain(Produced::Edge(res.coloring), r)
            }
        }
        Algorithm::Randomized | Algorithm::RandomizedEdge => {
            let rp = RandomizedParams { kappa: spec.kappa.unwrap_or(2.0), eta: spec.eta.unwrap_or(0.5), seed };
            let target = if spec.algorithm == Algorithm::Randomized { Target::Vertex } else { Target::Edge };
            let (res, r) = randomized_color(&g, &rp, target, c.unwrap_or(2), 1, &sim)?;
            let extra = json!({
                "flagged": res.flagged,
                "claimed_defect": res.claimed_defect,
                "partition_defect": res.measured_defect,
                "class_palette": res.class_palette,
                "per_class_vartheta": res.per_class_vartheta,
            });
            let coloring = match (res.vertex, res.edge) {
                (Some(v), _) => Produced::Vertex(v),
                (_, Some(e)) => Produced::Edge(e),
                _ => unreachable!(),
            };
            Outcome { params: serde_json::to_value(rp).unwrap(), extra, ..Outcome::plain(coloring, r) }
        }
        Algorithm::Tradeoff => {
            let g_fn: GFn = spec.g_fn.as_deref().unwrap_or("power:1/2").parse()?;
            let tp = TradeoffParams { g_fn, eta: spec.eta.unwrap_or(0.25) };
            let (res, r) = tradeoff_color(&g, &tp, c.unwrap(), &sim)?;
            let extra = json!({
                "q": res.q,
                "p": res.p,
                "d": res.d,
                "outer_palette": res.outer_palette,
                "outer_measured_defect": res.outer_measured_defect,
                "per_class_vartheta": res.per_class_vartheta,
                "fallback": res.fallback,
            });
            Outcome { params: serde_json::to_value(tp).unwrap(), extra, ..Outcome::plain(Produced::Vertex(res.coloring), r) }
        }
    };

    let (verification, colors_used, palette) = match &out.coloring {
        Produced::Vertex(col) => (check_vertex_coloring(&g, col)?, col.colors_used(), col.palette),
        Produced::Edge(col) => (check_edge_coloring(&g, col)?, col.colors_used(), col.palette),
    };
    let r = out.report;
    let record = RunRecord {
        schema: SCHEMA,
        graph: spec.graph.to_string(),
        seed,
        n: g.n() as u64,
        m: g.m() as u64,
        delta,
        c,
        algorithm: spec.algorithm.to_string(),
        preset: out.preset,
        params: out.params,
        rounds: r.rounds,
        logical_rounds: r.logical_rounds,
        setup_rounds: r.setup_rounds,
        colors_used,
        palette,
        vartheta: out.vartheta,
        measured_defect: verification.measured_defect,
        max_msg_bits: r.max_msg_bits,
        budget_bits: r.budget_bits,
        over_budget_rounds: r.over_budget_rounds,
        msgs_per_edge_round: r.msgs_per_edge_round,
        extra: out.extra,
        verification,
        phases: r.phases,
    };
    Ok((record, out.coloring))
}

/// Records as JSON: a single object for one record, an array otherwise.
pub fn records_to_json(records: &[RunRecord]) -> String {
    let text = if records.len() == 1 {
        serde_json::to_string_pretty(&records[0])
    } else {
        serde_json::to_string_pretty(records)
    };
    text.expect("records serialize") + "\n"
}

pub const CSV_HEADER: [&str; 15] = [
    "graph", "seed", "n", "m", "delta", "algorithm", "preset", "rounds", "colors_used", "palette", "vartheta",
    "measured_defect", "max_msg_bits", "budget_bits", "passed",
];

pub fn csv_row(r: &RunRecord) -> Vec<String> {
    vec![
        r.graph.clone(),
        r.seed.to_string(),
        r.n.to_string(),
        r.m.to_string(),
        r.delta.to_string(),
        r.algorithm.clone(),
        r.preset.clone().unwrap_or_default(),
        r.rounds.to_string(),
        r.colors_used.to_string(),
        r.palette.to_string(),
        r.vartheta.map(|v| v.to_string()).unwrap_or_default(),
        r.measured_defect.to_string(),
        r.max_msg_bits.to_string(),
        r.budget_bits.to_string(),
        r.verification.passed().to_string(),
    ]
}

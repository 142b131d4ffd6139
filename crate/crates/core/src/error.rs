use crate::graph::VertexId;
use crate::sim::SimReport;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    Graph(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid parameters: {0}")]
    Params(String),

    #[error("preset {preset} is infeasible at delta {delta} ({reason}); first feasible delta: {}", first_feasible.map_or("none below 2^63".to_string(), |d| d.to_string()))]
    PresetInfeasible {
        preset: String,
        delta: u64,
        reason: String,
        first_feasible: Option<u64>,
    },

    #[error("recursion does not shrink the degree bound: {from} -> {to}")]
    NoShrink { from: u64, to: u64 },

    #[error("step {from} -> {to} exceeds the per-level contraction bound {bound:.3}")]
    Contraction { from: u64, to: u64, bound: f64 },

    #[error("round cap {cap} exceeded")]
    RoundCap { cap: u32, partial: Box<SimReport> },

    #[error("vertex {from} addressed a non-neighbor (slot {slot})")]
    Locality { from: VertexId, slot: usize },

    #[error("short mode: second message on {from} -> {to} in round {round}")]
    ShortMode { from: VertexId, to: VertexId, round: u32 },

    #[error("coloring is not legal: {0}")]
    NotLegal(String),

    #[error("uncolored elements: {0}")]
    Uncolored(String),

    #[error("endpoints of edge ({0}, {1}) disagree on its color")]
    EndpointMismatch(VertexId, VertexId),

    #[error("level {level}: class degree {measured} exceeds the bound {bound}; is the independence bound c too small?")]
    DefectExceeded { level: usize, measured: u64, bound: u64 },

    #[error("independence search aborted: degree {degree} above cap {cap}")]
    IndependenceCap { degree: usize, cap: usize },

    #[error("randomized partition needs delta > ln n (delta = {delta}, ln n = {ln_n:.2}); use the deterministic path")]
    RandomizedRegime { delta: u64, ln_n: f64 },

    #[error("graph too large for exhaustive search: {0} vertices (max 14)")]
    TooLarge(usize),

    #[error("orientation has a cycle")]
    Cyclic,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

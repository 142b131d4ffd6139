//! Synchronous round executor for per-vertex programs.
//!
//! Step 0 is local computation with an empty inbox; messages sent at step `r`
//! are delivered at step `r + 1`. A vertex halts by returning its output, and
//! may still send in that final step. The round count of a run is the last
//! step in which any vertex acted.

mod message;

pub use message::{Field, Message};

use crate::error::{Error, Result};
use crate::graph::{Graph, LineGraphMap, VertexId};
use crate::math::ceil_log2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::Arc;

pub const DEFAULT_ROUND_CAP: u32 = 1_000_000;

/// What a vertex may look at: itself, its incident edges and the global parameters.
#[derive(Clone, Copy)]
pub struct LocalView<'a> {
    graph: &'a Graph,
    pub index: usize,
    /// Global vertex count known to every vertex.
    pub n: u64,
    /// Global max-degree bound known to every vertex.
    pub delta: u64,
}

impl<'a> LocalView<'a> {
    pub fn id(&self) -> VertexId {
        self.graph.id(self.index)
    }

    pub fn degree(&self) -> usize {
        self.graph.degree(self.index)
    }

    /// Neighbor Ids, sorted; message slots refer to positions in this list.
    pub fn neighbor_id(&self, slot: usize) -> VertexId {
        self.graph.id(self.graph.neighbors(self.index)[slot] as usize)
    }

    pub fn neighbor_ids(&self) -> impl Iterator<Item = VertexId> + 'a {
        let g = self.graph;
        g.neighbors(self.index).iter().map(move |&w| g.id(w as usize))
    }

    /// Graph-wide edge number of the edge at `slot`; programs use it to look up
    /// per-edge inputs that both endpoints were given.
    pub fn edge_at(&self, slot: usize) -> usize {
        self.graph.incident_edges(self.index)[slot] as usize
    }

    /// Vertex index of the neighbor at `slot`, for per-vertex inputs known to the neighbor's
    /// neighbors (for example values exchanged in an earlier phase).
    pub fn neighbor_index(&self, slot: usize) -> usize {
        self.graph.neighbors(self.index)[slot] as usize
    }
}

#[derive(Clone, Debug)]
pub struct Incoming {
    /// Receiver-side slot of the sender.
    pub slot: u32,
    pub msg: Message,
}

enum Dest {
    All,
    Slot(u32),
}

#[derive(Default)]
pub struct Outbox {
    sends: Vec<(Dest, Message)>,
}

impl Outbox {
    pub fn broadcast(&mut self, msg: Message) {
        self.sends.push((Dest::All, msg));
    }

    pub fn send(&mut self, slot: usize, msg: Message) {
        self.sends.push((Dest::Slot(slot as u32), msg));
    }

    pub fn is_empty(&self) -> bool {
        self.sends.is_empty()
    }

    fn clear(&mut self) {
        self.sends.clear();
    }
}

pub trait VertexProgram: Sync {
    type State: Send;
    type Output: Send;

    fn init(&self, v: &LocalView<'_>) -> Self::State;

    /// Returns `Some(output)` to halt.
    fn step(
        &self,
        v: &LocalView<'_>,
        state: &mut Self::State,
        round: u32,
        inbox: &[Incoming],
        out: &mut Outbox,
    ) -> Option<Self::Output>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MsgMode {
    /// One message per edge, direction and round; oversize messages are flagged.
    Short,
    /// Several logical messages may share an edge in a round; they are counted.
    Wide,
}

impl std::str::FromStr for MsgMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "short" => Ok(MsgMode::Short),
            "wide" => Ok(MsgMode::Wide),
            _ => Err(Error::Params(format!("unknown message mode `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimConfig {
    pub msg_mode: MsgMode,
    pub round_cap: u32,
    /// Message budget is `ceil(log2 n) * budget_factor` bits.
    pub budget_factor: u32,
    pub parallel: bool,
    /// Overrides the `n` handed to programs (and used for the budget).
    pub known_n: Option<u64>,
    /// Overrides the `delta` handed to programs.
    pub known_delta: Option<u64>,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            msg_mode: MsgMode::Wide,
            round_cap: DEFAULT_ROUND_CAP,
            budget_factor: 1,
            parallel: false,
            known_n: None,
            known_delta: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PhaseStat {
    pub name: String,
    pub rounds: u64,
    pub max_msg_bits: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    /// Rounds of the network that actually runs (host rounds for line-graph runs).
    pub rounds: u64,
    /// Rounds of the simulated program (equal to `rounds` for direct runs).
    pub logical_rounds: u64,
    /// One-time rounds included in `rounds` that precede the program itself.
    pub setup_rounds: u64,
    pub max_msg_bits: u64,
    pub msgs_per_edge_round: u64,
    pub budget_bits: u64,
    /// Rounds in which some edge carried more than `budget_bits`.
    pub over_budget_rounds: u64,
    pub messages: u64,
    pub phases: Vec<PhaseStat>,
}

impl SimReport {
    /// Appends a sequentially executed sub-run, prefixing its phase names with `name`.
    pub fn absorb(&mut self, name: &str, other: SimReport) {
        let phases = if other.phases.is_empty() {
            vec![PhaseStat { name: name.to_string(), rounds: other.rounds, max_msg_bits: other.max_msg_bits }]
        } else {
            other.phases.iter().map(|p| PhaseStat { name: format!("{name}/{}", p.name), ..p.clone() }).collect()
        };
        self.extend(SimReport { phases, ..other });
    }

    /// Appends a sequentially executed sub-run, keeping its phase names.
    pub fn extend(&mut self, other: SimReport) {
        self.rounds += other.rounds;
        self.logical_rounds += other.logical_rounds;
        self.setup_rounds += other.setup_rounds;
        self.max_msg_bits = self.max_msg_bits.max(other.max_msg_bits);
        self.msgs_per_edge_round = self.msgs_per_edge_round.max(other.msgs_per_edge_round);
        self.budget_bits = self.budget_bits.max(other.budget_bits);
        self.over_budget_rounds += other.over_budget_rounds;
        self.messages += other.messages;
        self.phases.extend(other.phases);
    }

    /// Adds rounds spent before the program (for example edge-Id setup).
    pub fn add_setup(&mut self, rounds: u64) {
        self.rounds += rounds;
        self.setup_rounds += rounds;
    }

    /// Sum of the rounds of all phases whose name starts with `prefix`.
    pub fn phase_rounds(&self, prefix: &str) -> u64 {
        self.phases.iter().filter(|p| p.name.starts_with(prefix)).map(|p| p.rounds).sum()
    }
}

#[derive(Debug)]
pub struct Run<O> {
    pub report: SimReport,
    /// Indexed like the graph's vertices.
    pub outputs: Vec<O>,
}

/// How logical messages map onto the physical network.
#[derive(Clone, Debug)]
struct LineRouting {
    /// Host endpoints (lower index first) of each line-graph vertex.
    ends: Vec<(u32, u32)>,
    host_n: usize,
}

#[derive(Clone, Debug, Default)]
pub struct Simulator {
    pub config: SimConfig,
    line: Option<Arc<LineRouting>>,
}

impl Simulator {
    pub fn new(config: SimConfig) -> Self {
        Simulator { config, line: None }
    }

    /// Runs programs on (edge subsets of) `map.lg`, charging every logical round
    /// two host rounds: edge `(u, w)` with `Id(u) < Id(w)` is simulated by `u`,
    /// and a message between edges that share `s` is relayed through `s`.
    pub fn on_line_graph(config: SimConfig, host: &Graph, map: &LineGraphMap) -> Self {
        let ends = (0..map.len())
            .map(|x| {
                let (a, b) = map.edge_of(x);
                (host.index_of(a).unwrap() as u32, host.index_of(b).unwrap() as u32)
            })
            .collect();
        Simulator { config, line: Some(Arc::new(LineRouting { ends, host_n: host.n() })) }
    }

    pub fn is_line(&self) -> bool {
        self.line.is_some()
    }

    pub fn with_mode(&self, mode: MsgMode) -> Self {
        let mut s = self.clone();
        s.config.msg_mode = mode;
        s
    }

    /// The `n` that programs are told.
    pub fn known_n(&self, g: &Graph) -> u64 {
        self.config.known_n.unwrap_or(g.n() as u64)
    }

    pub fn budget_bits(&self, g: &Graph) -> u64 {
        let n = match &self.line {
            Some(l) => l.host_n as u64,
            None => self.known_n(g),
        };
        (ceil_log2(n.max(2)) as u64) * self.config.budget_factor.max(1) as u64
    }

    pub fn run<P: VertexProgram>(&self, g: &Graph, prog: &P) -> Result<Run<P::Output>> {
        if let Some(l) = &self.line {
            assert_eq!(l.ends.len(), g.n(), "line-graph simulator used on a graph with a different vertex set");
        }
        let n = g.n();
        let known_n = self.known_n(g);
        let known_delta = self.config.known_delta.unwrap_or(g.delta() as u64);
        let view = |i: usize| LocalView { graph: g, index: i, n: known_n, delta: known_delta };
        let mut states: Vec<P::State> = (0..n).map(|i| prog.init(&view(i))).collect();
        let mut outputs: Vec<Option<P::Output>> = (0..n).map(|_| None).collect();
        let mut inbox: Vec<Vec<Incoming>> = vec![Vec::new(); n];
        let mut next: Vec<Vec<Incoming>> = vec![Vec::new(); n];
        let mut halted = vec![false; n];
        let mut active: Vec<u32> = (0..n as u32).collect();
        let mut meter = Meter::new(self, g);
        let mut round: u32 = 0;
        let mut outbox = Outbox::default();
        loop {
            meter.begin_round();
            let mut still = Vec::with_capacity(active.len());
            let mut newly_halted = Vec::new();
            if self.config.parallel && active.len() > 1 {
                let is_active: Vec<bool> = {
                    let mut a = vec![false; n];
                    for &v in &active {
                        a[v as usize] = true;
                    }
                    a
                };
                let inbox_ref = &inbox;
                let results: Vec<(usize, Option<P::Output>, Outbox)> = states
                    .par_iter_mut()
                    .enumerate()
                    .filter(|(i, _)| is_active[*i])
                    .map(|(i, st)| {
                        let mut ob = Outbox::default();
                        let r = prog.step(&view(i), st, round, &inbox_ref[i], &mut ob);
                        (i, r, ob)
                    })
                    .collect();
                for (v, res, ob) in results {
                    meter.deliver(g, v, round, &ob, &mut next, &halted)?;
                    match res {
                        Some(o) => {
                            outputs[v] = Some(o);
                            halted[v] = true;
                            newly_halted.push(v);
                        }
                        None => still.push(v as u32),
                    }
                }
            } else {
                for &v in &active {
                    let v = v as usize;
                    outbox.clear();
                    let res = prog.step(&view(v), &mut states[v], round, &inbox[v], &mut outbox);
                    meter.deliver(g, v, round, &outbox, &mut next, &halted)?;
                    match res {
                        Some(o) => {
                            outputs[v] = Some(o);
                            halted[v] = true;
                            newly_halted.push(v);
                        }
                        None => still.push(v as u32),
                    }
                }
            }
            for &v in &active {
                inbox[v as usize].clear();
            }
            for &v in &newly_halted {
                next[v].clear();
            }
            meter.end_round();
            if still.is_empty() {
                break;
            }
            if round >= self.config.round_cap {
                return Err(Error::RoundCap { cap: self.config.round_cap, partial: Box::new(meter.report(round as u64)) });
            }
            active = still;
            std::mem::swap(&mut inbox, &mut next);
            round += 1;
        }
        let report = meter.report(round as u64);
        Ok(Run { report, outputs: outputs.into_iter().map(|o| o.expect("every vertex halted")).collect() })
    }
}

struct Meter {
    short: bool,
    budget: u64,
    line: Option<Arc<LineRouting>>,
    stamp: Vec<u64>,
    count: Vec<u32>,
    bits: Vec<u64>,
    gen: u64,
    host_load: HashMap<(u32, u32, u8), (u32, u64)>,
    round_over: bool,
    over_rounds: u64,
    max_bits: u64,
    max_mult: u64,
    messages: u64,
}

impl Meter {
    fn new(sim: &Simulator, g: &Graph) -> Self {
        let n = g.n();
        Meter {
            short: sim.config.msg_mode == MsgMode::Short,
            budget: sim.budget_bits(g),
            line: sim.line.clone(),
            stamp: vec![0; n],
            count: vec![0; n],
            bits: vec![0; n],
            gen: 0,
            host_load: HashMap::new(),
            round_over: false,
            over_rounds: 0,
            max_bits: 0,
            max_mult: 0,
            messages: 0,
        }
    }

    fn begin_round(&mut self) {
        self.round_over = false;
        self.host_load.clear();
    }

    fn end_round(&mut self) {
        if self.line.is_some() {
            let loads: Vec<(u32, u64)> = self.host_load.values().copied().collect();
            for (c, b) in loads {
                self.note_load(c, b);
            }
        }
        if self.round_over {
            self.over_rounds += 1;
        }
    }

    fn note_load(&mut self, count: u32, bits: u64) {
        self.max_mult = self.max_mult.max(count as u64);
        self.max_bits = self.max_bits.max(bits);
        if bits > self.budget {
            self.round_over = true;
        }
    }

    fn deliver(
        &mut self,
        g: &Graph,
        v: usize,
        round: u32,
        ob: &Outbox,
        next: &mut [Vec<Incoming>],
        halted: &[bool],
    ) -> Result<()> {
        if ob.sends.is_empty() {
            return Ok(());
        }
        self.gen += 1;
        let nb = g.neighbors(v);
        let line = self.line.clone();
        for (dest, msg) in &ob.sends {
            let range = match dest {
                Dest::All => 0..nb.len(),
                Dest::Slot(s) => {
                    let s = *s as usize;
                    if s >= nb.len() {
                        return Err(Error::Locality { from: g.id(v), slot: s });
                    }
                    s..s + 1
                }
            };
            let b = msg.bits();
            for s in range {
                let w = nb[s] as usize;
                if self.stamp[w] != self.gen {
                    self.stamp[w] = self.gen;
                    self.count[w] = 0;
                    self.bits[w] = 0;
                }
                self.count[w] += 1;
                self.bits[w] += b;
                if self.short && self.count[w] > 1 {
                    return Err(Error::ShortMode { from: g.id(v), to: g.id(w), round });
                }
                self.messages += 1;
                match line.as_deref() {
                    None => {
                        let (c, bb) = (self.count[w], self.bits[w]);
                        self.note_load(c, bb);
                    }
                    Some(l) => self.route(l, v, w, b),
                }
                if !halted[w] {
                    let back = g.slot_of(w, v).expect("adjacency is symmetric") as u32;
                    next[w].push(Incoming { slot: back, msg: msg.clone() });
                }
            }
        }
        Ok(())
    }

    fn route(&mut self, l: &LineRouting, a: usize, b: usize, bits: u64) {
        let (a1, a2) = l.ends[a];
        let (b1, b2) = l.ends[b];
        let shared = if a1 == b1 || a1 == b2 { a1 } else { a2 };
        debug_assert!(shared == b1 || shared == b2);
        if a1 != shared {
            let e = self.host_load.entry((a1, shared, 0)).or_insert((0, 0));
            e.0 += 1;
            e.1 += bits;
        }
        if shared != b1 {
            let e = self.host_load.entry((shared, b1, 1)).or_insert((0, 0));
            e.0 += 1;
            e.1 += bits;
        }
    }

    fn report(&self, last_round: u64) -> SimReport {
        let host_factor = if self.line.is_some() { 2 } else { 1 };
        SimReport {
            rounds: last_round * host_factor,
            logical_rounds: last_round,
            setup_rounds: 0,
            max_msg_bits: self.max_bits,
            msgs_per_edge_round: self.max_mult,
            budget_bits: self.budget,
            over_budget_rounds: self.over_rounds,
            messages: self.messages,
            phases: Vec::new(),
        }
    }
}

/// Runs `prog` on the line graph of `host`, returning the host-round report
/// (two rounds of edge-Id setup plus two per logical round).
pub fn run_on_line_graph<P: VertexProgram>(
    host: &Graph,
    map: &LineGraphMap,
    prog: &P,
    config: SimConfig,
) -> Result<Run<P::Output>> {
    let sim = Simulator::on_line_graph(config, host, map);
    let mut run = sim.run(&map.lg, prog)?;
    run.report.add_setup(2);
    Ok(run)
}

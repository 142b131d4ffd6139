//! Legal edge coloring with short messages.
//!
//! Both endpoints of an edge run its logic. Whenever the endpoints must agree
//! on a value that each can only partially evaluate, they run a counting
//! binary search: each side reports how many of its admissible candidates lie
//! in the left half of the current interval, and both move to a half where the
//! two counts add up to more than the half's size, which guarantees a
//! candidate admissible at both ends survives.

use super::group_slots;
use super::kuhn_edge::{assemble_edge_colors, SlotColors};
use super::linial::LinialStep;
use crate::coloring::{Color, EdgeColoring};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::math::{ceil_log2, digits, eval_poly, next_prime, pow_at_least};
use crate::sim::{Incoming, LocalView, Message, Outbox, SimReport, Simulator, VertexProgram};

/// Line-graph degree of every edge's class, i.e. the largest number of same-class
/// edges sharing an endpoint with a single edge.
pub(crate) fn class_line_degree(g: &Graph, class: Option<&[u64]>) -> u64 {
    let mut best = 0u64;
    let same = |e: u32, f: u32| class.is_none_or(|c| c[e as usize] == c[f as usize]);
    let mut per_vertex: Vec<Vec<u64>> = Vec::with_capacity(g.n());
    for v in 0..g.n() {
        let inc = g.incident_edges(v);
        per_vertex.push(inc.iter().map(|&e| inc.iter().filter(|&&f| same(e, f)).count() as u64 - 1).collect());
    }
    for v in 0..g.n() {
        for (s, &w) in g.neighbors(v).iter().enumerate() {
            let w = w as usize;
            if v < w {
                let t = g.slot_of(w, v).unwrap();
                best = best.max(per_vertex[v][s] + per_vertex[w][t]);
            }
        }
    }
    best
}

/// Reduction steps restricted to polynomial degree `k <= 2`.
pub fn edge_linial_schedule(palette: u64, d: u64) -> Vec<LinialStep> {
    let mut steps = Vec::new();
    if d == 0 {
        return steps;
    }
    let mut cur = palette;
    loop {
        let mut best: Option<LinialStep> = None;
        for k in 1..=2u32 {
            let mut q = next_prime(k as u64 * d + 1);
            while !pow_at_least(q, k + 1, cur) {
                q = next_prime(q + 1);
            }
            if best.is_none_or(|b| q < b.q) {
                best = Some(LinialStep { k, q });
            }
        }
        let step = best.unwrap();
        if step.palette() >= cur {
            return steps;
        }
        steps.push(step);
        cur = step.palette();
    }
}

fn count_outside(sorted_bad: &[u32], lo: u64, hi: u64) -> u64 {
    let a = sorted_bad.partition_point(|&x| (x as u64) < lo);
    let b = sorted_bad.partition_point(|&x| (x as u64) < hi);
    (hi - lo) - (b - a) as u64
}

struct EdgeLinial<'a> {
    class: Option<&'a [u64]>,
    start: &'a [Color],
    steps: &'a [LinialStep],
    /// Round at which each step's search begins; one extra entry for the end.
    begin: Vec<u32>,
}

struct EdgeLinialState {
    groups: Vec<Vec<usize>>,
    color: Vec<Color>,
    coef: Vec<smallvec::SmallVec<[u64; 8]>>,
    bad: Vec<Vec<u32>>,
    lo: Vec<u64>,
    hi: Vec<u64>,
    iter: usize,
    ok: bool,
}

impl EdgeLinial<'_> {
    fn start_iteration(&self, st: &mut EdgeLinialState) {
        let LinialStep { k, q } = self.steps[st.iter];
        let len = k as usize + 1;
        for s in 0..st.color.len() {
            st.coef[s] = digits(st.color[s] - 1, q, len);
            st.bad[s].clear();
            st.lo[s] = 0;
            st.hi[s] = q;
        }
        let mut stamp = vec![u32::MAX; q as usize];
        let mut first = vec![0usize; q as usize];
        for grp in &st.groups {
            if grp.len() < 2 {
                continue;
            }
            for x in 0..q {
                for &s in grp {
                    let val = eval_poly(&st.coef[s], x, q) as usize;
                    if stamp[val] == x as u32 {
                        let f = first[val];
                        if st.bad[f].last() != Some(&(x as u32)) {
                            st.bad[f].push(x as u32);
                        }
                        st.bad[s].push(x as u32);
                    } else {
                        stamp[val] = x as u32;
                        first[val] = s;
                    }
                }
                // Values stamped with `x` are stale for the next point.
            }
            for s in stamp.iter_mut() {
                *s = u32::MAX;
            }
        }
        for s in 0..st.color.len() {
            if st.bad[s].len() as u64 >= q {
                st.ok = false;
            }
        }
    }
}

impl VertexProgram for EdgeLinial<'_> {
    type State = EdgeLinialState;
    type Output = SlotColors;

    fn init(&self, v: &LocalView<'_>) -> EdgeLinialState {
        let d = v.degree();
        let groups = group_slots(v, self.class);
        EdgeLinialState {
            groups,
            color: (0..d).map(|s| self.start[v.edge_at(s)]).collect(),
            coef: vec![Default::default(); d],
            bad: vec![Vec::new(); d],
            lo: vec![0; d],
            hi: vec![0; d],
            iter: 0,
            ok: true,
        }
    }

    fn step(&self, _: &LocalView<'_>, st: &mut EdgeLinialState, round: u32, inbox: &[Incoming], out: &mut Outbox) -> Option<SlotColors> {
        if st.iter < self.steps.len() && round > self.begin[st.iter] {
            for m in inbox {
                let s = m.slot as usize;
                let (lo, hi) = (st.lo[s], st.hi[s]);
                let mid = lo + (hi - lo) / 2;
                let mine = count_outside(&st.bad[s], lo, mid);
                if mine + m.msg.get(0) > mid - lo {
                    st.hi[s] = mid;
                } else {
                    st.lo[s] = mid;
                }
            }
            if round == self.begin[st.iter + 1] {
                let q = self.steps[st.iter].q;
                for s in 0..st.color.len() {
                    debug_assert_eq!(st.hi[s] - st.lo[s], 1);
                    let x = st.lo[s];
                    st.color[s] = x * q + eval_poly(&st.coef[s], x, q) + 1;
                }
                st.iter += 1;
            }
        }
        if st.iter == self.steps.len() || !st.ok {
            return Some((std::mem::take(&mut st.color), st.ok));
        }
        if round == self.begin[st.iter] {
            self.start_iteration(st);
        }
        let q = self.steps[st.iter].q;
        for s in 0..st.color.len() {
            let (lo, hi) = (st.lo[s], st.hi[s]);
            if hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                out.send(s, Message::one(count_outside(&st.bad[s], lo, mid), q + 1));
            }
        }
        None
    }
}

/// Edge Linial reduction from a legal edge coloring `start` (edge-indexed, palette
/// `palette`), for class line-degrees `<= d`.
pub(crate) fn edge_linial_reduce(
    g: &Graph,
    sim: &Simulator,
    class: Option<&[u64]>,
    start: &[Color],
    palette: u64,
    d: u64,
) -> Result<(Vec<Color>, u64, SimReport)> {
    let steps = edge_linial_schedule(palette, d);
    let mut begin = vec![0u32];
    for s in &steps {
        begin.push(begin.last().unwrap() + ceil_log2(s.q));
    }
    let prog = EdgeLinial { class, start, steps: &steps, begin };
    let run = sim.run(g, &prog)?;
    if run.outputs.iter().any(|o| !o.1) {
        return Err(Error::NotLegal("starting edge coloring of the edge Linial reduction".into()));
    }
    let colors = assemble_edge_colors(g, &run.outputs)?;
    Ok((colors, steps.last().map_or(palette, |s| s.palette()), run.report))
}

const READY: u64 = 0;
const COUNT: u64 = 1;

/// Dependency-driven greedy recoloring of edges into `1..=target`.
struct EdgeGreedy<'a> {
    class: Option<&'a [u64]>,
    start: &'a [Color],
    target: u64,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Phase {
    Waiting,
    Ready { since: u32 },
    Searching { begin: u32, lo: u64, hi: u64 },
    Done,
}

struct GreedyState {
    color: Vec<Color>,
    phase: Vec<Phase>,
    peer_ready: Vec<Option<u32>>,
    peer_count: Vec<Option<u64>>,
    /// Per group: slots ordered by start color, the frontier position, and the used-color bitset.
    order: Vec<Vec<usize>>,
    frontier: Vec<usize>,
    used: Vec<Vec<u64>>,
    group_of: Vec<usize>,
    remaining: usize,
}

impl EdgeGreedy<'_> {
    fn is_free(used: &[u64], c: u64) -> bool {
        used[(c / 64) as usize] >> (c % 64) & 1 == 0
    }

    fn free_in(used: &[u64], lo: u64, hi: u64) -> u64 {
        (lo..hi).filter(|&c| Self::is_free(used, c)).count() as u64
    }

    /// Advances the frontier of group `gi` past finished edges; the new frontier edge
    /// becomes ready and announces it.
    fn advance(&self, st: &mut GreedyState, gi: usize, round: u32, out: &mut Outbox) {
        while st.frontier[gi] < st.order[gi].len() && st.phase[st.order[gi][st.frontier[gi]]] == Phase::Done {
            st.frontier[gi] += 1;
        }
        if let Some(&s) = st.order[gi].get(st.frontier[gi]) {
            if st.phase[s] == Phase::Waiting {
                st.phase[s] = Phase::Ready { since: round };
                out.send(s, Message::one(READY, 2));
            }
        }
    }

    fn finish(st: &mut GreedyState, s: usize, c: Color) {
        st.color[s] = c;
        st.phase[s] = Phase::Done;
        let gi = st.group_of[s];
        st.used[gi][(c / 64) as usize] |= 1 << (c % 64);
        st.remaining -= 1;
    }
}

impl VertexProgram for EdgeGreedy<'_> {
    type State = GreedyState;
    type Output = SlotColors;

    fn init(&self, v: &LocalView<'_>) -> GreedyState {
        let d = v.degree();
        let groups = group_slots(v, self.class);
        let mut group_of = vec![0; d];
        let words = (self.target as usize + 1).div_ceil(64);
        let mut st = GreedyState {
            color: (0..d).map(|s| self.start[v.edge_at(s)]).collect(),
            phase: vec![Phase::Waiting; d],
            peer_ready: vec![None; d],
            peer_count: vec![None; d],
            order: Vec::new(),
            frontier: vec![0; groups.len()],
            used: vec![vec![0; words]; groups.len()],
            group_of: Vec::new(),
            remaining: d,
        };
        for (gi, grp) in groups.into_iter().enumerate() {
            let mut ord = grp;
            ord.sort_by_key(|&s| st.color[s]);
            for &s in &ord {
                group_of[s] = gi;
            }
            st.order.push(ord);
        }
        st.group_of = group_of;
        for s in 0..d {
            if st.color[s] <= self.target {
                let c = st.color[s];
                Self::finish(&mut st, s, c);
            }
        }
        st
    }

    fn step(&self, _: &LocalView<'_>, st: &mut GreedyState, round: u32, inbox: &[Incoming], out: &mut Outbox) -> Option<SlotColors> {
        if round == 0 {
            for gi in 0..st.order.len() {
                self.advance(st, gi, 0, out);
            }
        }
        for m in inbox {
            let s = m.slot as usize;
            if m.msg.get(0) == READY {
                st.peer_ready[s] = Some(round - 1);
            } else {
                st.peer_count[s] = Some(m.msg.get(1));
            }
        }
        let mut touched = Vec::new();
        for gi in 0..st.order.len() {
            let Some(&s) = st.order[gi].get(st.frontier[gi]) else { continue };
            loop {
                match st.phase[s] {
                    Phase::Ready { since } => {
                        let Some(peer) = st.peer_ready[s] else { break };
                        let begin = since.max(peer) + 1;
                        if round < begin {
                            break;
                        }
                        st.phase[s] = Phase::Searching { begin, lo: 1, hi: self.target + 1 };
                    }
                    Phase::Searching { begin, lo, hi } => {
                        if round > begin {
                            let theirs = st.peer_count[s].take().expect("peer count arrives every search round");
                            let mid = lo + (hi - lo) / 2;
                            let mine = Self::free_in(&st.used[gi], lo, mid);
                            let (lo, hi) = if mine + theirs > mid - lo { (lo, mid) } else { (mid, hi) };
                            st.phase[s] = Phase::Searching { begin: round, lo, hi };
                        } else {
                            break;
                        }
                    }
                    _ => break,
                }
                if let Phase::Searching { lo, hi, .. } = st.phase[s] {
                    if hi - lo == 1 {
                        Self::finish(st, s, lo);
                        touched.push(gi);
                    } else {
                        let mid = lo + (hi - lo) / 2;
                        let mut msg = Message::one(COUNT, 2);
                        msg.push(Self::free_in(&st.used[gi], lo, mid), self.target + 1);
                        out.send(s, msg);
                    }
                    break;
                }
            }
        }
        for gi in touched {
            self.advance(st, gi, round, out);
        }
        (st.remaining == 0).then(|| (std::mem::take(&mut st.color), true))
    }
}

/// Greedy reduction of a legal edge coloring to `1..=target`, where `target` exceeds
/// every edge's class line-degree.
pub(crate) fn edge_greedy_reduce(
    g: &Graph,
    sim: &Simulator,
    class: Option<&[u64]>,
    start: &[Color],
    target: u64,
) -> Result<(Vec<Color>, SimReport)> {
    if start.iter().all(|&c| c <= target) {
        return Ok((start.to_vec(), SimReport::default()));
    }
    let run = sim.run(g, &EdgeGreedy { class, start, target })?;
    let colors = assemble_edge_colors(g, &run.outputs)?;
    Ok((colors, run.report))
}

/// Legal edge coloring of every class with colors `1..=target`, from edge ranks.
/// `d` bounds the class line-degree and `target >= d + 1`.
pub(crate) fn edge_color_classes(
    g: &Graph,
    sim: &Simulator,
    class: Option<&[u64]>,
    d: u64,
    target: u64,
) -> Result<(Vec<Color>, SimReport)> {
    let mut report = SimReport::default();
    let ranks: Vec<Color> = (1..=g.m() as u64).collect();
    let (lin, _, r) = edge_linial_reduce(g, sim, class, &ranks, (g.m() as u64).max(1), d)?;
    report.absorb("edge-linial", r);
    let (out, r) = edge_greedy_reduce(g, sim, class, &lin, target)?;
    report.absorb("edge-greedy", r);
    Ok((out, report))
}

/// Legal edge coloring with at most `2Δ - 1` colors and messages of `O(log n)` bits.
///
/// Edge ranks serve as initial colors; computing them is charged two setup rounds.
pub fn edge_color_2delta_minus_1(g: &Graph, sim: &Simulator) -> Result<(EdgeColoring, SimReport)> {
    let delta = g.delta() as u64;
    let target = (2 * delta).saturating_sub(1).max(1);
    let d = class_line_degree(g, None);
    let (colors, mut report) = edge_color_classes(g, sim, None, d, target)?;
    report.add_setup(2);
    Ok((EdgeColoring::from_aligned(g, colors, target, 0), report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{MsgMode, SimConfig};
    use crate::verify::check_edge_coloring;

    fn short() -> Simulator {
        Simulator::new(SimConfig { msg_mode: MsgMode::Short, ..Default::default() })
    }

    fn petersen() -> Graph {
        let mut e = Vec::new();
        for i in 0..5u32 {
            e.push((i + 1, (i + 1) % 5 + 1));
            e.push((i + 1, i + 6));
            e.push((i + 6, (i + 2) % 5 + 6));
        }
        Graph::from_edges(10, &e).unwrap()
    }

    #[test]
    fn single_edge_and_star() {
        let g = Graph::from_edges(2, &[(1, 2)]).unwrap();
        let (c, _) = edge_color_2delta_minus_1(&g, &short()).unwrap();
        assert_eq!(c.colors_used(), 1);
        let g = Graph::from_edges(6, &[(1, 2), (1, 3), (1, 4), (1, 5), (1, 6)]).unwrap();
        let (c, _) = edge_color_2delta_minus_1(&g, &short()).unwrap();
        assert_eq!(c.colors_used(), 5);
        assert!(check_edge_coloring(&g, &c).unwrap().legal);
    }

    #[test]
    fn petersen_within_five() {
        let g = petersen();
        assert_eq!(g.delta(), 3);
        let (c, r) = edge_color_2delta_minus_1(&g, &short()).unwrap();
        let rep = check_edge_coloring(&g, &c).unwrap();
        assert!(rep.legal && rep.violated.is_empty());
        assert!(c.max_color() <= 5);
        assert_eq!(r.over_budget_rounds, 0);
    }

    #[test]
    fn edge_linial_shrinks_large_ranks() {
        // Sparse graph with many edges: ranks are far above the O(D²) fixed point.
        let n = 400u32;
        let e: Vec<(u32, u32)> = (1..n).map(|i| (i, i + 1)).chain((1..n - 7).map(|i| (i, i + 7))).collect();
        let g = Graph::from_edges(n as usize, &e).unwrap();
        let d = class_line_degree(&g, None);
        let ranks: Vec<Color> = (1..=g.m() as u64).collect();
        let (lin, pal, _) = edge_linial_reduce(&g, &short(), None, &ranks, g.m() as u64, d).unwrap();
        assert!(pal < g.m() as u64);
        let col = EdgeColoring::from_aligned(&g, lin, pal, 0);
        let rep = check_edge_coloring(&g, &col).unwrap();
        assert!(rep.legal && rep.violated.is_empty());
    }

    #[test]
    fn class_line_degree_counts_same_class_only() {
        let g = Graph::from_edges(4, &[(1, 2), (2, 3), (3, 4)]).unwrap();
        assert_eq!(class_line_degree(&g, None), 2);
        assert_eq!(class_line_degree(&g, Some(&[1, 2, 1])), 0);
    }
}

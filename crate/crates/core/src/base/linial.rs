use crate::coloring::{Color, VertexColoring};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::math::{digits, eval_poly, next_prime, pow_at_least};
use crate::sim::{Incoming, LocalView, Message, Outbox, SimReport, Simulator, VertexProgram};

/// Largest observed `palette / Δ²` of [`linial_coloring`] for `Δ >= 1`
/// (attained at `Δ = 1`, where the palette is 9).
pub const C_LIN: u64 = 9;

/// One reduction step: colors become polynomials of degree `k` over GF(`q`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LinialStep {
    pub k: u32,
    pub q: u64,
}

impl LinialStep {
    pub fn palette(&self) -> u64 {
        self.q * self.q
    }
}

/// Reduction steps from a legal `palette`-coloring of a graph with degrees `<= d`.
///
/// Each step picks the degree `k <= max_k` giving the smallest prime `q > k·d`
/// with `q^(k+1) >= palette`; steps stop once `q² >= palette`.
pub fn linial_schedule(palette: u64, d: u64, max_k: u32) -> Vec<LinialStep> {
    let mut steps = Vec::new();
    if d == 0 {
        return steps;
    }
    let mut cur = palette;
    loop {
        let mut best: Option<LinialStep> = None;
        for k in 1..=max_k {
            let mut q = next_prime(k as u64 * d + 1);
            while !pow_at_least(q, k + 1, cur) {
                q = next_prime(q + 1);
            }
            if best.is_none_or(|b| q < b.q) {
                best = Some(LinialStep { k, q });
            }
            if k as u64 * d + 1 > best.unwrap().q {
                break;
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

/// Next color of a vertex whose current color is `own` and whose neighbors hold `others`.
/// Returns `None` when no evaluation point separates it from every neighbor, which
/// only happens if some neighbor has the same color.
pub(crate) fn linial_next(own: Color, others: impl Iterator<Item = Color> + Clone, step: LinialStep) -> Option<Color> {
    let LinialStep { k, q } = step;
    let len = k as usize + 1;
    let mine = digits(own - 1, q, len);
    let theirs: Vec<_> = others.map(|c| digits(c - 1, q, len)).collect();
    for x in 0..q {
        let fx = eval_poly(&mine, x, q);
        if theirs.iter().all(|t| eval_poly(t, x, q) != fx) {
            return Some(x * q + fx + 1);
        }
    }
    None
}

pub(crate) struct Linial<'a> {
    /// Starting colors indexed like the graph; `None` means "use the Id".
    pub initial: Option<&'a [Color]>,
    pub palette: u64,
    pub steps: &'a [LinialStep],
    pub degree_zero: bool,
}

pub(crate) struct LinialState {
    color: Color,
}

impl VertexProgram for Linial<'_> {
    type State = LinialState;
    /// 0 signals that the input was not legal.
    type Output = Color;

    fn init(&self, v: &LocalView<'_>) -> LinialState {
        let color = match self.initial {
            Some(c) => c[v.index],
            None => v.id() as Color,
        };
        LinialState { color }
    }

    fn step(&self, _: &LocalView<'_>, st: &mut LinialState, round: u32, inbox: &[Incoming], out: &mut Outbox) -> Option<Color> {
        if self.degree_zero {
            return Some(1);
        }
        let r = round as usize;
        if r > 0 {
            let step = self.steps[r - 1];
            match linial_next(st.color, inbox.iter().map(|m| m.msg.get(0)), step) {
                Some(c) => st.color = c,
                None => return Some(0),
            }
        }
        if r == self.steps.len() {
            return Some(st.color);
        }
        let domain = if r == 0 { self.palette } else { self.steps[r - 1].palette() };
        out.broadcast(Message::one(st.color, domain));
        None
    }
}

/// Runs the Linial reduction from `initial` (or Ids) on `g`, assuming degrees `<= d`.
/// Returns the colors (indexed like `g`), the final palette and the report.
pub(crate) fn linial_reduce(
    g: &Graph,
    sim: &Simulator,
    initial: Option<&[Color]>,
    palette: u64,
    d: u64,
) -> Result<(Vec<Color>, u64, SimReport)> {
    let steps = linial_schedule(palette, d, 64);
    let prog = Linial { initial, palette, steps: &steps, degree_zero: d == 0 };
    let run = sim.run(g, &prog)?;
    if run.outputs.contains(&0) {
        return Err(Error::NotLegal("starting coloring of the Linial reduction".into()));
    }
    let out_palette = if d == 0 { 1 } else { steps.last().map_or(palette, |s| s.palette()) };
    Ok((run.outputs, out_palette, run.report))
}

/// Legal coloring with palette `<= C_LIN·Δ²` in `O(log* n)` rounds, starting from the Ids.
pub fn linial_coloring(g: &Graph, sim: &Simulator) -> Result<(VertexColoring, SimReport)> {
    let palette = sim.known_n(g).max(g.max_id() as u64).max(1);
    let (colors, pal, report) = linial_reduce(g, sim, None, palette, g.delta() as u64)?;
    Ok((VertexColoring::from_aligned(g, colors, pal, 0), report))
}

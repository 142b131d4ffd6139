use crate::coloring::{Color, VertexColoring};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::sim::{Incoming, LocalView, Message, Outbox, SimReport, Simulator, VertexProgram};

/// Greedy recoloring into `1..=target`: a vertex whose start color exceeds `target`
/// waits until every neighbor with a smaller (but also too large) start color has
/// picked, then takes the smallest free color. The output equals processing the
/// start color classes one by one in increasing order, but independent chains
/// proceed in parallel.
struct Reduce<'a> {
    start: &'a [Color],
    start_palette: u64,
    target: u64,
}

struct ReduceState {
    pending: u32,
    used: Vec<Color>,
}

impl VertexProgram for Reduce<'_> {
    type State = ReduceState;
    type Output = Color;

    fn init(&self, _: &LocalView<'_>) -> ReduceState {
        ReduceState { pending: 0, used: Vec::new() }
    }

    fn step(&self, v: &LocalView<'_>, st: &mut ReduceState, round: u32, inbox: &[Incoming], out: &mut Outbox) -> Option<Color> {
        let own = self.start[v.index];
        if round == 0 {
            out.broadcast(Message::one(own, self.start_palette));
            return (own <= self.target).then_some(own);
        }
        for m in inbox {
            let c = m.msg.get(0);
            if round == 1 {
                if c <= self.target {
                    st.used.push(c);
                } else if c < own {
                    st.pending += 1;
                }
            } else {
                st.used.push(c);
                st.pending -= 1;
            }
        }
        if st.pending > 0 {
            return None;
        }
        st.used.sort_unstable();
        st.used.dedup();
        let mut pick = 1;
        for &u in &st.used {
            if u == pick {
                pick += 1;
            } else if u > pick {
                break;
            }
        }
        debug_assert!(pick <= self.target, "target below degree + 1");
        out.broadcast(Message::one(pick, self.target));
        Some(pick)
    }
}

pub(crate) fn first_conflict(g: &Graph, colors: &[Color]) -> Option<(usize, usize)> {
    g.edges()
        .iter()
        .find(|&&(a, b)| colors[a as usize] == colors[b as usize])
        .map(|&(a, b)| (a as usize, b as usize))
}

/// Reduces a legal coloring to `target >= Δ(g) + 1` colors. No rounds are spent when
/// `start_palette <= target`.
pub(crate) fn reduce_to_palette(
    g: &Graph,
    sim: &Simulator,
    start: &[Color],
    start_palette: u64,
    target: u64,
) -> Result<(Vec<Color>, SimReport)> {
    if let Some((a, b)) = first_conflict(g, start) {
        return Err(Error::NotLegal(format!("vertices {} and {} share a color", g.id(a), g.id(b))));
    }
    if start_palette <= target {
        return Ok((start.to_vec(), SimReport::default()));
    }
    if target < g.delta() as u64 + 1 {
        return Err(Error::Params(format!("target palette {target} is below Δ + 1 = {}", g.delta() + 1)));
    }
    let run = sim.run(g, &Reduce { start, start_palette, target })?;
    Ok((run.outputs, run.report))
}

/// Legal `(Δ + 1)`-coloring from a legal coloring.
pub fn reduce_to_delta_plus_one(g: &Graph, start: &VertexColoring, sim: &Simulator) -> Result<(VertexColoring, SimReport)> {
    let colors = start.aligned(g)?;
    let target = g.delta() as u64 + 1;
    let palette = start.palette.max(colors.iter().copied().max().unwrap_or(1));
    let (out, report) = reduce_to_palette(g, sim, &colors, palette, target)?;
    let pal = if palette <= target { start.palette } else { target };
    Ok((VertexColoring::from_aligned(g, out, pal, 0), report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::check_vertex_coloring;

    #[test]
    fn k4_from_six_colors() {
        let mut e = Vec::new();
        for u in 1..=4u32 {
            for v in u + 1..=4 {
                e.push((u, v));
            }
        }
        let g = Graph::from_edges(4, &e).unwrap();
        let start = VertexColoring::from_aligned(&g, vec![6, 5, 2, 4], 6, 0);
        let (c, r) = reduce_to_delta_plus_one(&g, &start, &Simulator::default()).unwrap();
        assert!(check_vertex_coloring(&g, &c).unwrap().legal);
        assert!(c.max_color() <= 4);
        assert!(r.rounds <= 6);
    }

    #[test]
    fn small_palette_is_returned_unchanged() {
        let g = Graph::from_edges(3, &[(1, 2), (2, 3)]).unwrap();
        let start = VertexColoring::from_aligned(&g, vec![3, 1, 2], 3, 0);
        let (c, r) = reduce_to_delta_plus_one(&g, &start, &Simulator::default()).unwrap();
        assert_eq!(c, start);
        assert_eq!(r.rounds, 0);
    }

    #[test]
    fn illegal_start_is_rejected() {
        let g = Graph::from_edges(3, &[(1, 2), (2, 3)]).unwrap();
        let start = VertexColoring::from_aligned(&g, vec![9, 9, 2], 9, 0);
        assert!(matches!(reduce_to_delta_plus_one(&g, &start, &Simulator::default()), Err(Error::NotLegal(_))));
    }
}

use super::group_slots;
use crate::coloring::{Color, EdgeColoring};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::sim::{Incoming, LocalView, Message, Outbox, SimReport, Simulator, VertexProgram};

/// Edge labels and label-pair colors. Each vertex numbers its incident edges of one
/// class by neighbor Id and labels the `i`-th one `floor(i / group) + 1`; an edge's
/// color is the pair (label at lower-Id endpoint, label at higher-Id endpoint).
pub(crate) struct KuhnEdge<'a> {
    /// Class of every edge of the graph; `None` puts all edges in one class.
    pub class: Option<&'a [u64]>,
    pub p: u64,
    pub group: u64,
}

pub(crate) struct KuhnEdgeState {
    label: Vec<u64>,
    color: Vec<Color>,
    ok: bool,
}

/// Per-slot colors, and whether both endpoints agreed on every edge.
pub(crate) type SlotColors = (Vec<Color>, bool);

impl VertexProgram for KuhnEdge<'_> {
    type State = KuhnEdgeState;
    type Output = SlotColors;

    fn init(&self, v: &LocalView<'_>) -> KuhnEdgeState {
        let mut label = vec![0; v.degree()];
        for slots in group_slots(v, self.class) {
            for (i, &s) in slots.iter().enumerate() {
                label[s] = i as u64 / self.group + 1;
            }
        }
        KuhnEdgeState { label, color: vec![0; v.degree()], ok: true }
    }

    fn step(&self, v: &LocalView<'_>, st: &mut KuhnEdgeState, round: u32, inbox: &[Incoming], out: &mut Outbox) -> Option<SlotColors> {
        match round {
            0 => {
                for s in 0..v.degree() {
                    out.send(s, Message::one(st.label[s], self.p));
                }
                None
            }
            1 => {
                for m in inbox {
                    let s = m.slot as usize;
                    let (mine, theirs) = (st.label[s], m.msg.get(0));
                    let (lo, hi) = if v.id() < v.neighbor_id(s) { (mine, theirs) } else { (theirs, mine) };
                    st.color[s] = (lo - 1) * self.p + hi;
                    out.send(s, Message::one(st.color[s], self.p * self.p));
                }
                None
            }
            _ => {
                for m in inbox {
                    st.ok &= st.color[m.slot as usize] == m.msg.get(0);
                }
                Some((std::mem::take(&mut st.color), st.ok))
            }
        }
    }
}

/// Runs [`KuhnEdge`] and returns colors indexed by edge number.
pub(crate) fn kuhn_edge_run(
    g: &Graph,
    sim: &Simulator,
    class: Option<&[u64]>,
    p: u64,
    group: u64,
) -> Result<(Vec<Color>, SimReport)> {
    let run = sim.run(g, &KuhnEdge { class, p, group })?;
    let colors = assemble_edge_colors(g, &run.outputs)?;
    Ok((colors, run.report))
}

/// Collects per-slot colors into an edge-indexed vector, checking both endpoints agree.
pub(crate) fn assemble_edge_colors(g: &Graph, outputs: &[SlotColors]) -> Result<Vec<Color>> {
    let mut colors = vec![0; g.m()];
    for (v, (slots, ok)) in outputs.iter().enumerate() {
        for (s, &c) in slots.iter().enumerate() {
            let e = g.incident_edges(v)[s] as usize;
            if !ok || (colors[e] != 0 && colors[e] != c) {
                let (a, b) = g.edge_ids(e);
                return Err(Error::EndpointMismatch(a, b));
            }
            colors[e] = c;
        }
    }
    Ok(colors)
}

/// `4·ceil(Δ/p')`-defective edge coloring with palette `p'²` in exactly 2 rounds.
pub fn kuhn_defective_edge(g: &Graph, p_prime: u64, sim: &Simulator) -> Result<(EdgeColoring, SimReport)> {
    let delta = g.delta() as u64;
    if p_prime < 1 || p_prime > delta.max(1) {
        return Err(Error::Params(format!("p' = {p_prime} outside 1..={}", delta.max(1))));
    }
    let group = delta.div_ceil(p_prime).max(1);
    let (colors, report) = kuhn_edge_run(g, sim, None, p_prime, group)?;
    Ok((EdgeColoring::from_aligned(g, colors, p_prime * p_prime, 4 * group), report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::check_edge_coloring;

    #[test]
    fn cycle_six_with_two_labels() {
        let g = Graph::from_edges(6, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (1, 6)]).unwrap();
        let (c, r) = kuhn_defective_edge(&g, 2, &Simulator::default()).unwrap();
        assert_eq!(r.rounds, 2);
        assert!(c.max_color() <= 4);
        let rep = check_edge_coloring(&g, &c).unwrap();
        assert!(rep.measured_defect <= 4);
    }

    #[test]
    fn single_label() {
        let g = Graph::from_edges(4, &[(1, 2), (1, 3), (1, 4)]).unwrap();
        let (c, r) = kuhn_defective_edge(&g, 1, &Simulator::default()).unwrap();
        assert_eq!(r.rounds, 2);
        assert!(c.colors.values().all(|&x| x == 1));
        assert_eq!(check_edge_coloring(&g, &c).unwrap().measured_defect, 2);
    }

    #[test]
    fn out_of_range() {
        let g = Graph::from_edges(3, &[(1, 2)]).unwrap();
        assert!(kuhn_defective_edge(&g, 0, &Simulator::default()).is_err());
        assert!(kuhn_defective_edge(&g, 2, &Simulator::default()).is_err());
    }
}

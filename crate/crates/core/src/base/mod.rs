//! Building-block colorings: Linial's reduction, greedy reduction to `Δ + 1` colors,
//! polynomial defective colorings of vertices and edges, and short-message legal
//! edge coloring.

mod edge_legal;
mod kuhn;
mod kuhn_edge;
mod linial;
mod reduce;

pub use edge_legal::{edge_color_2delta_minus_1, edge_linial_schedule};
pub use kuhn::{kuhn_defective_vertex, kuhn_step, C_KUHN};
pub use kuhn_edge::kuhn_defective_edge;
pub use linial::{linial_coloring, linial_schedule, LinialStep, C_LIN};
pub use reduce::reduce_to_delta_plus_one;

pub(crate) use edge_legal::{class_line_degree, edge_color_classes, edge_linial_reduce};
pub(crate) use kuhn::kuhn_reduce;
pub(crate) use kuhn_edge::{assemble_edge_colors, kuhn_edge_run, SlotColors};
pub(crate) use linial::linial_reduce;
pub(crate) use reduce::{first_conflict, reduce_to_palette};

use crate::sim::LocalView;
use std::collections::BTreeMap;

/// Slots of `v`'s incident edges grouped by class, groups in class order and slots in
/// neighbor-Id order. Without classes every edge is in one group.
pub(crate) fn group_slots(v: &LocalView<'_>, class: Option<&[u64]>) -> Vec<Vec<usize>> {
    match class {
        None => {
            if v.degree() == 0 {
                Vec::new()
            } else {
                vec![(0..v.degree()).collect()]
            }
        }
        Some(c) => {
            let mut by: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
            for s in 0..v.degree() {
                by.entry(c[v.edge_at(s)]).or_default().push(s);
            }
            by.into_values().collect()
        }
    }
}

//! Distributed vertex and edge coloring for graphs of bounded neighborhood independence,
//! executed on a synchronous message-passing simulator.

pub mod base;
pub mod coloring;
pub mod defective;
pub mod edge;
pub mod error;
pub mod extensions;
pub mod graph;
pub mod harness;
pub mod legal;
pub mod math;
pub mod sim;
pub mod verify;

pub use coloring::{Color, EdgeColoring, VertexColoring};
pub use error::{Error, Result};
pub use graph::{build_line_graph, Graph, LineGraphMap, Orientation, VertexId};
pub use sim::{MsgMode, SimConfig, SimReport, Simulator};
pub use defective::{defect_bound, defective_color, DefectiveParams, DefectiveRun, PhiMode};
pub use legal::{improved_legal_color, legal_color, recursion_schedule, run_legal, LegalParams, LegalResult, LegalVariant, Preset};
pub use edge::{edge_color_direct, edge_color_via_line_graph, EdgeResult};
pub use extensions::{randomized_color, randomized_defective, tradeoff_color, GFn, RandomizedParams, Target, TradeoffParams};

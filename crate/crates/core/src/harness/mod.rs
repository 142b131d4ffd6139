//! Graph generators, experiment specs and run records shared by the CLI, benches and
//! acceptance tests.

mod experiment;
mod gen;

pub use experiment::{
    csv_row, records_to_json, resolve_c, run_experiment, run_with_colorings, Algorithm, CustomParams, ExperimentSpec, Produced, RunRecord, CSV_HEADER,
    SCHEMA,
};
pub use gen::{bipartite, clique_pendant, complete, cycle, hypergraph_line, path, random_gnd, GraphSpec};

use nicolor::base::{edge_color_2delta_minus_1, kuhn_defective_vertex, linial_coloring, reduce_to_delta_plus_one};
use nicolor::graph::{neighborhood_independence, orient_by_color_then_id};
use nicolor::harness::{random_gnd, GraphSpec};
use nicolor::verify::{check_edge_coloring, check_vertex_coloring};
use nicolor::{
    build_line_graph, defect_bound, defective_color, edge_color_direct, legal_color, DefectiveParams, EdgeColoring,
    Graph, LegalParams, MsgMode, PhiMode, SimConfig, Simulator, VertexColoring,
};
use proptest::prelude::*;

fn sim() -> Simulator {
    Simulator::new(SimConfig::default())
}

fn small_graph() -> impl Strategy<Value = Graph> {
    (2usize..60, 1usize..12, any::<u64>()).prop_map(|(n, d, seed)| random_gnd(n, d, seed).unwrap())
}

fn line_graph() -> impl Strategy<Value = Graph> {
    (6usize..40, 3usize..10, any::<u64>()).prop_map(|(n, d, seed)| build_line_graph(&random_gnd(n, d, seed).unwrap()).lg)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn linial_is_legal_and_reduce_hits_delta_plus_one(g in small_graph()) {
        let (col, _) = linial_coloring(&g, &sim()).unwrap();
        prop_assert!(check_vertex_coloring(&g, &col).unwrap().legal);
        let (red, _) = reduce_to_delta_plus_one(&g, &col, &sim()).unwrap();
        prop_assert!(check_vertex_coloring(&g, &red).unwrap().legal);
        prop_assert!(red.max_color() <= g.delta() as u64 + 1);
    }

    #[test]
    fn kuhn_vertex_defect_at_most_d(g in small_graph(), d in 1u64..6) {
        let (rho, _) = linial_coloring(&g, &sim()).unwrap();
        let (phi, report) = kuhn_defective_vertex(&g, &rho, d, &sim()).unwrap();
        prop_assert!(check_vertex_coloring(&g, &phi).unwrap().measured_defect <= d);
        prop_assert!(report.rounds <= 2);
    }

    #[test]
    fn edge_2delta_minus_1_is_legal(g in small_graph()) {
        let (col, _) = edge_color_2delta_minus_1(&g, &sim()).unwrap();
        prop_assert!(check_edge_coloring(&g, &col).unwrap().legal);
        prop_assert!(col.max_color() <= (2 * g.delta() as u64).saturating_sub(1).max(1));
    }

    #[test]
    fn line_graphs_have_small_independence(g in small_graph()) {
        let map = build_line_graph(&g);
        prop_assert!(neighborhood_independence(&map.lg) <= 2);
        prop_assert!(map.lg.delta() <= 2 * g.delta().saturating_sub(1));
    }

    #[test]
    fn defective_bound_holds_on_line_graphs(g in line_graph(), b in 1u64..4, p in 2u64..8, simple in any::<bool>()) {
        let big = g.delta() as u64;
        prop_assume!(b * p <= big);
        let params = DefectiveParams { b, p, big_lambda: big, c: 2 };
        let mode = if simple { PhiMode::Simple } else { PhiMode::Fast };
        let run = defective_color(&g, &params, mode, &sim()).unwrap();
        prop_assert!(check_vertex_coloring(&g, &run.psi).unwrap().measured_defect <= defect_bound(&params));
        prop_assert!(run.loop_rounds <= run.phi.palette);
    }

    #[test]
    fn orientation_by_color_is_acyclic(g in small_graph(), seed in any::<u64>()) {
        let colors: Vec<u64> = (0..g.n() as u64).map(|v| (v.wrapping_mul(seed | 1) >> 7) % 5 + 1).collect();
        let phi = VertexColoring::from_aligned(&g, colors, 5, 0);
        prop_assert!(orient_by_color_then_id(&g, &phi).unwrap().is_acyclic(&g));
    }

    #[test]
    fn coloring_text_round_trip(g in small_graph()) {
        let (col, _) = linial_coloring(&g, &sim()).unwrap();
        prop_assert_eq!(VertexColoring::parse(&col.to_text()).unwrap(), col);
        let (ecol, _) = edge_color_2delta_minus_1(&g, &sim()).unwrap();
        prop_assert_eq!(EdgeColoring::parse(&ecol.to_text()).unwrap(), ecol);
        let back = Graph::parse_edge_list(&g.to_edge_list()).unwrap();
        prop_assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn graph_spec_display_parses_back(n in 1usize..500, d in 1usize..40, inner in any::<bool>()) {
        let spec: GraphSpec = if inner { format!("line:gnd:{n},{d}") } else { format!("bipartite:{n},{d}") }.parse().unwrap();
        prop_assert_eq!(spec.to_string().parse::<GraphSpec>().unwrap(), spec);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn legal_recursion_is_legal_within_vartheta(k in 10usize..18, seed in any::<u64>()) {
        let g = build_line_graph(&random_gnd(120, k, seed).unwrap()).lg;
        let big = g.delta() as u64;
        prop_assume!(big >= 18);
        let params = LegalParams::custom(2, 9, 8, big, 2).unwrap();
        let (res, _) = legal_color(&g, &params, PhiMode::Fast, &sim()).unwrap();
        prop_assert!(check_vertex_coloring(&g, &res.phi).unwrap().legal);
        prop_assert!(res.phi.max_color() <= res.vartheta);
    }

    #[test]
    fn edge_direct_short_is_legal(k in 10usize..18, seed in any::<u64>()) {
        let g = random_gnd(150, k, seed).unwrap();
        let line = build_line_graph(&g).lg.delta() as u64;
        prop_assume!(line >= 18);
        let params = LegalParams::custom(2, 9, 8, line, 2).unwrap();
        let (res, report) = edge_color_direct(&g, &params, MsgMode::Short, &sim()).unwrap();
        prop_assert!(check_edge_coloring(&g, &res.coloring).unwrap().legal);
        prop_assert!(res.coloring.max_color() <= res.vartheta);
        prop_assert_eq!(report.over_budget_rounds, 0);
    }
}

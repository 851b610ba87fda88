//! Small graphs that once exposed, or could expose, wrong answers.

use centpath::mdcsp::{best_overall_with, single_source, single_source_with};
use centpath::oracle::{brute_force_best, per_target_best, OracleOptions};
use centpath::weighted::{mdcsp_continuous_weighted_default, mdcsp_integer_weighted};
use centpath::{Error, Graph, Recurrence, SolveOptions};

fn fixture(name: &str) -> Graph {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap();
    centpath::io::load_edge_list(&text, false).unwrap().graph
}

#[test]
fn last_vertex_state_loses_optimum() {
    // Two shortest 0 -> 7 routes meet at 6 through different middles.
    // Keeping one state per vertex commits at 3 too early.
    let g = fixture("merge_at_vertex.txt");
    let exact = single_source(&g, 0).unwrap();
    let truth = per_target_best(&g, 0, &OracleOptions::default()).unwrap();
    for (v, want) in truth.iter().enumerate() {
        assert_eq!(
            exact.centrality(v),
            want.as_ref().map(|r| r.centrality),
            "target {v}"
        );
    }
    let vertex_keyed = single_source_with(&g, 0, Recurrence::LastVertex).unwrap();
    let differs = (0..g.vertex_count())
        .any(|v| vertex_keyed.centrality(v) != truth[v].as_ref().map(|r| r.centrality));
    assert!(differs, "vertex-keyed run happened to be exact");
}

#[test]
fn chain_entry_fixture() {
    let g = fixture("chain_entry.txt");
    let r = mdcsp_integer_weighted(&g).unwrap();
    let o = brute_force_best(&g, &OracleOptions::default()).unwrap();
    assert_eq!(r.centrality, o.centrality);
    assert!(g.is_shortest_path(&r.path).unwrap());
}

#[test]
fn four_cycle_with_pendant() {
    // 0-1-2-3-0 plus 4 hanging off 0. Every 2-edge path through 0 sees the
    // other three vertices.
    let g = Graph::new(5, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4)], false).unwrap();
    let r = best_overall_with(&g, &SolveOptions::default()).unwrap();
    let o = brute_force_best(&g, &OracleOptions::default()).unwrap();
    assert_eq!(r.centrality, o.centrality);
    assert_eq!(r.centrality, 3);
}

#[test]
fn weighted_ties_are_rejected_only_by_continuous_route() {
    let square = Graph::weighted(
        4,
        [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)],
        false,
    )
    .unwrap();
    assert!(matches!(
        mdcsp_continuous_weighted_default(&square),
        Err(Error::AmbiguousShortestPath { .. })
    ));
    let r = mdcsp_integer_weighted(&square).unwrap();
    assert_eq!(r.centrality, 2);
    assert_eq!(
        r.centrality,
        brute_force_best(&square, &OracleOptions::default())
            .unwrap()
            .centrality
    );
}

#[test]
fn edgeless_and_single_vertex() {
    for n in [1, 3] {
        let g = Graph::new(n, [], false).unwrap();
        assert_eq!(
            best_overall_with(&g, &SolveOptions::default()),
            Err(Error::NoPath)
        );
        let lone = best_overall_with(
            &g,
            &SolveOptions {
                min_vertices: 1,
                ..SolveOptions::default()
            },
        )
        .unwrap();
        assert_eq!((lone.centrality, lone.length), (0, 0));
    }
}

#[test]
fn complete_graph_edge() {
    let k5 = Graph::new(
        5,
        (0..5).flat_map(|u| (u + 1..5).map(move |v| (u, v))),
        false,
    )
    .unwrap();
    let r = best_overall_with(&k5, &SolveOptions::default()).unwrap();
    assert_eq!((r.centrality, r.length), (3, 1));
}

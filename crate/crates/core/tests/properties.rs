use centpath::graph::{hop_distances, shortest_distances, UNREACHABLE};
use centpath::io::{load_edge_list, write_graph};
use centpath::mdcsp::{best_overall_with, single_source};
use centpath::oracle::{brute_force_best, OracleOptions};
use centpath::weighted::{augment_integer, mdcsp_integer_weighted};
use centpath::{Error, Graph, Path, SolveOptions, Workers};
use proptest::prelude::*;

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect()
}

/// Undirected graph on 1..=max_n vertices, each pair an edge with probability about one half.
fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), pairs(n).len()).prop_map(move |keep| {
            let edges = pairs(n)
                .into_iter()
                .zip(keep)
                .filter(|(_, k)| *k)
                .map(|(e, _)| e);
            Graph::new(n, edges, false).unwrap()
        })
    })
}

fn weighted_graph(max_n: usize, max_w: u32) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(move |n| {
        proptest::collection::vec(proptest::option::weighted(0.5, 1..=max_w), pairs(n).len())
            .prop_map(move |ws| {
                let edges = pairs(n)
                    .into_iter()
                    .zip(ws)
                    .filter_map(|((u, v), w)| w.map(|w| (u, v, w as f64)));
                Graph::weighted(n, edges, false).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn neighborhood_excludes_path_and_sizes_centrality(g in graph(10), s in 0usize..10) {
        let s = s % g.vertex_count();
        let st = single_source(&g, s).unwrap();
        for v in 0..g.vertex_count() {
            let Some(p) = st.path(v) else { continue };
            let n = g.neighborhood(p).unwrap();
            prop_assert!(p.vertices().iter().all(|&x| !n.contains(x)));
            prop_assert_eq!(Some(n.len()), st.centrality(v));
            prop_assert_eq!(g.centrality(p).unwrap(), n.len());
        }
    }

    #[test]
    fn returned_paths_have_shortest_prefixes(g in graph(12), s in 0usize..12) {
        let s = s % g.vertex_count();
        let st = single_source(&g, s).unwrap();
        let dist = hop_distances(&g, s);
        for v in 0..g.vertex_count() {
            let Some(p) = st.path(v) else { continue };
            prop_assert_eq!(p.first(), s);
            prop_assert_eq!(p.last(), v);
            for (i, &x) in p.vertices().iter().enumerate() {
                prop_assert_eq!(dist[x], i);
            }
        }
    }

    #[test]
    fn engine_matches_oracle(g in graph(9)) {
        let engine = best_overall_with(&g, &SolveOptions::default());
        let oracle = brute_force_best(&g, &OracleOptions::default());
        match (engine, oracle) {
            (Ok(e), Ok(o)) => {
                prop_assert_eq!(e.centrality, o.centrality);
                prop_assert!(g.is_shortest_path(&e.path).unwrap());
            }
            (Err(Error::NoPath), Err(Error::NoPath)) => {}
            (e, o) => prop_assert!(false, "engine {:?} oracle {:?}", e, o),
        }
    }

    #[test]
    fn worker_count_does_not_change_answer(g in graph(12)) {
        let run = |workers| best_overall_with(&g, &SolveOptions { workers, ..SolveOptions::default() });
        prop_assert_eq!(run(Workers::Sequential), run(Workers::Threads(4)));
    }

    #[test]
    fn integer_route_on_unit_weights_matches_unweighted(g in graph(10)) {
        let unit = Graph::weighted(g.vertex_count(), g.edges().iter().map(|e| (e.u, e.v, 1.0)), false).unwrap();
        prop_assert_eq!(mdcsp_integer_weighted(&unit), best_overall_with(&g, &SolveOptions::default()));
    }

    #[test]
    fn integer_route_matches_oracle(g in weighted_graph(8, 5)) {
        let engine = mdcsp_integer_weighted(&g);
        let oracle = brute_force_best(&g, &OracleOptions::default());
        match (engine, oracle) {
            (Ok(e), Ok(o)) => {
                prop_assert_eq!(e.centrality, o.centrality);
                prop_assert!(g.is_shortest_path(&e.path).unwrap());
                prop_assert_eq!(g.centrality(&e.path).unwrap(), e.centrality);
            }
            (Err(Error::NoPath), Err(Error::NoPath)) => {}
            (e, o) => prop_assert!(false, "engine {:?} oracle {:?}", e, o),
        }
    }

    #[test]
    fn augmentation_preserves_distances(g in weighted_graph(8, 6)) {
        let aug = augment_integer(&g).unwrap();
        let total: f64 = g.edges().iter().map(|e| e.weight).sum();
        prop_assert_eq!(aug.weight_sum() as f64, total);
        for s in 0..g.vertex_count() {
            let want = shortest_distances(&g, s);
            let got = hop_distances(&aug.unit_graph, s);
            for v in 0..g.vertex_count() {
                if want[v].is_finite() {
                    prop_assert_eq!(got[v] as f64, want[v]);
                } else {
                    prop_assert_eq!(got[v], UNREACHABLE);
                }
            }
        }
    }

    #[test]
    fn edge_list_round_trip(g in graph(10)) {
        let text = write_graph(&g);
        let back = load_edge_list(&text, false).unwrap();
        prop_assert_eq!(back.graph.edge_count(), g.edge_count());
        for e in back.graph.edges() {
            let (u, v) = (back.label(e.u).parse().unwrap(), back.label(e.v).parse().unwrap());
            prop_assert!(g.has_edge(u, v));
        }
    }

    #[test]
    fn reversed_path_has_same_centrality(g in graph(10), s in 0usize..10) {
        let s = s % g.vertex_count();
        let st = single_source(&g, s).unwrap();
        for v in 0..g.vertex_count() {
            if let Some(p) = st.path(v) {
                let r: Path = p.reversed();
                prop_assert!(g.is_shortest_path(&r).unwrap());
                prop_assert_eq!(g.centrality(&r).unwrap(), g.centrality(p).unwrap());
            }
        }
    }
}

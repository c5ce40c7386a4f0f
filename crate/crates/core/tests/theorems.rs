use graphsep::density::density_of_graph;
use graphsep::graph::BipartiteLabeledGraph;
use graphsep::lab::{
    local_permutation_witness, sweep_conjecture1, CounterexampleKind, SweepMode, SweepOptions, WitnessError,
};
use graphsep::separability::{
    decide_graph, verify_decomposition, Decision, DecomposeError, DecompositionInput, StrategyRegistry,
    RECONSTRUCTION_TOL,
};

#[test]
fn degree_matches_ppt_on_random_graphs() {
    for (p, q) in [(3, 3), (2, 4)] {
        let mode = SweepMode::Random { seed: 2024, count: 10_000 };
        let (report, _) = sweep_conjecture1(p, q, mode, SweepOptions::default()).unwrap();
        assert_eq!(report.totals.graphs, 10_000);
        assert_eq!(report.totals.disagreements, 0, "{p}x{q}");
        assert_eq!(report.counterexamples_of(CounterexampleKind::DegreePptMismatch).count(), 0);
    }
}

#[test]
fn exhaustive_small_splits_agree() {
    for (p, q) in [(2, 2), (2, 3), (3, 2)] {
        let (report, _) = sweep_conjecture1(p, q, SweepMode::Exhaustive, SweepOptions::default()).unwrap();
        assert_eq!(report.totals.disagreements, 0);
        assert_eq!(report.totals.conjecture_counterexamples, 0);
        assert_eq!(report.totals.decidable, report.totals.graphs);
    }
}

#[test]
fn sweep_reports_are_reproducible() {
    let mode = SweepMode::Random { seed: 9, count: 500 };
    let (a, _) = sweep_conjecture1(3, 3, mode, SweepOptions::default()).unwrap();
    let (b, _) = sweep_conjecture1(3, 3, mode, SweepOptions::default()).unwrap();
    assert_eq!(a.canonical_json(), b.canonical_json());
}

#[test]
fn registry_dispatch() {
    let registry = StrategyRegistry::with_defaults();
    assert_eq!(registry.names(), vec!["nearest-point", "matching", "block-matching", "circulant", "z2n"]);
    let cc = BipartiteLabeledGraph::new(2, 2, &[((1, 1), (2, 2)), ((1, 2), (2, 1))]).unwrap();
    let input = DecompositionInput::Graph(cc.clone());
    for name in ["nearest-point", "matching"] {
        let d = registry.decompose(name, &input).unwrap();
        let v = verify_decomposition(&d, &density_of_graph(&cc).unwrap(), RECONSTRUCTION_TOL).unwrap();
        assert!(v.ok, "{name}");
    }
    assert!(matches!(registry.decompose("circulant", &input), Err(DecomposeError::NotApplicable { .. })));
    assert!(matches!(registry.decompose("nope", &input), Err(DecomposeError::UnknownStrategy(_))));
}

#[test]
fn decide_graph_on_small_examples() {
    let registry = StrategyRegistry::with_defaults();
    let edge = BipartiteLabeledGraph::new(2, 2, &[((1, 1), (2, 2))]).unwrap();
    let verdict = decide_graph(&edge, &registry).unwrap();
    assert!(matches!(verdict.decision, Decision::Entangled { .. }));
    let cc = BipartiteLabeledGraph::new(2, 2, &[((1, 1), (2, 2)), ((1, 2), (2, 1))]).unwrap();
    assert_eq!(decide_graph(&cc, &registry).unwrap().decision.is_separable(), Some(true));
}

/// Same degrees before and after partial transpose, yet the transpose has a
/// triangle and the graph does not, so no relabeling can realize it.
#[test]
fn local_permutation_claim_has_counterexamples() {
    let g = BipartiteLabeledGraph::new(
        2,
        3,
        &[((1, 1), (1, 2)), ((1, 1), (2, 1)), ((1, 1), (2, 2)), ((1, 2), (2, 3)), ((1, 3), (2, 1))],
    )
    .unwrap();
    let pt = g.partial_transpose();
    assert_eq!(g.degrees(), pt.degrees());
    let triangles = |h: &BipartiteLabeledGraph| {
        let n = h.vertex_count();
        (0..n)
            .flat_map(|a| (a + 1..n).flat_map(move |b| (b + 1..n).map(move |c| (a, b, c))))
            .filter(|&(a, b, c)| h.has_edge(a, b) && h.has_edge(b, c) && h.has_edge(a, c))
            .count()
    };
    assert_eq!(triangles(&g), 0);
    assert_eq!(triangles(&pt), 1);
    assert_eq!(local_permutation_witness(&g), Err(WitnessError::NotFound));
}

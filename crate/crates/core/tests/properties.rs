use graphsense::lab::{
    add_random_edges, er_pipeline, gen_ba, gen_er, random_tree, BarabasiAlbertSpec, ErdosRenyiSpec,
    PipelineSpec,
};
use graphsense::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn connected(n: usize, extra: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = random_tree(n, &mut rng);
    let room = n * (n - 1) / 2 - g.edge_count();
    add_random_edges(&mut g, extra.min(room), &mut rng).unwrap();
    g
}

fn union_find_components(n: usize, edges: &[(usize, usize)]) -> usize {
    fn find(p: &mut [usize], v: usize) -> usize {
        let mut r = v;
        while p[r] != r {
            r = p[r];
        }
        let mut v = v;
        while p[v] != r {
            let next = p[v];
            p[v] = r;
            v = next;
        }
        r
    }
    let mut parent: Vec<usize> = (0..n).collect();
    let mut count = n;
    for &(u, v) in edges {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a] = b;
            count -= 1;
        }
    }
    count
}

fn graph_strategy() -> impl Strategy<Value = Graph> {
    (1usize..30).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..60).prop_map(move |pairs| {
            let mut g = Graph::empty(n);
            for (u, v) in pairs {
                if u != v {
                    g.add_edge(u, v).unwrap();
                }
            }
            g
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_text_round_trip(g in graph_strategy()) {
        prop_assert_eq!(Graph::from_text(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn components_agree_with_union_find(g in graph_strategy()) {
        let comps = components(&g);
        prop_assert_eq!(comps.len(), union_find_components(g.node_count(), &g.edges()));
        let mut seen: Vec<usize> = comps.iter().flatten().copied().collect();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..g.node_count()).collect::<Vec<_>>());
        prop_assert_eq!(is_connected(&g), comps.len() == 1);
    }

    #[test]
    fn matrix_text_round_trip(
        n in 1usize..20,
        rows in proptest::collection::vec(proptest::collection::btree_set(0usize..20, 1..6), 1..10),
    ) {
        let rows: Vec<Vec<usize>> = rows.into_iter().map(|r| r.into_iter().map(|v| v % n).collect::<std::collections::BTreeSet<_>>().into_iter().collect()).collect();
        let a = MeasurementMatrix::new(n, rows).unwrap();
        prop_assert_eq!(MeasurementMatrix::from_text(&a.to_text()).unwrap(), a);
    }

    #[test]
    fn apply_is_linear(
        x in proptest::collection::vec(-10.0f64..10.0, 12),
        z in proptest::collection::vec(-10.0f64..10.0, 12),
        c in -3.0f64..3.0,
        k in 1usize..4,
    ) {
        let a = line_matrix(12, k).unwrap();
        let combo: Vec<f64> = x.iter().zip(&z).map(|(p, q)| p + c * q).collect();
        let lhs = a.apply(&combo).unwrap();
        let (ax, az) = (a.apply(&x).unwrap(), a.apply(&z).unwrap());
        for (i, v) in lhs.iter().enumerate() {
            prop_assert!((v - (ax[i] + c * az[i])).abs() <= 1e-9 * (1.0 + v.abs()));
        }
    }

    #[test]
    fn general_design_is_feasible_and_bounded(
        n in 2usize..70,
        extra in 0usize..80,
        seed in any::<u64>(),
        k in 1usize..3,
    ) {
        let g = connected(n, extra, seed);
        let spec = if k == 1 { CompleteKernelSpec::binary() } else { CompleteKernelSpec::bernoulli(seed) };
        let (a, plan) = algorithm1_plan(&g, k, &spec).unwrap();
        prop_assert!(check_feasibility(&g, &a).unwrap().feasible);
        prop_assert!(a.m() <= algorithm1_bound(plan.radius, k, n, &spec).unwrap());
        let covered: std::collections::BTreeSet<usize> = a.rows().iter().flatten().copied().collect();
        prop_assert_eq!(covered.len(), n);
    }

    #[test]
    fn general_design_decodes_one_sparse(
        n in 2usize..60,
        extra in 0usize..60,
        seed in any::<u64>(),
        pos in any::<prop::sample::Index>(),
        value in prop_oneof![-5.0f64..-0.1, 0.1f64..5.0],
    ) {
        let g = connected(n, extra, seed);
        let a = algorithm1(&g, 1, &CompleteKernelSpec::binary()).unwrap();
        let mut x = vec![0.0; n];
        x[pos.index(n)] = value;
        let y = a.apply(&x).unwrap();
        let r = sequential_decode(&a, &y).unwrap();
        prop_assert!(relative_error(&r.x_hat, &x) <= 1e-6);
    }

    #[test]
    fn agent_rows_touch_an_agent(
        n in 2usize..50,
        extra in 0usize..40,
        seed in any::<u64>(),
        picks in proptest::collection::vec(any::<prop::sample::Index>(), 1..5),
    ) {
        let g = connected(n, extra, seed);
        let mut agents: Vec<usize> = picks.iter().map(|p| p.index(n)).collect();
        agents.sort_unstable();
        agents.dedup();
        let a = algorithm1_with_agents(&g, 1, &agents, &CompleteKernelSpec::binary()).unwrap();
        prop_assert!(check_feasibility(&g, &a).unwrap().feasible);
        for row in a.rows() {
            prop_assert!(row.iter().any(|v| agents.binary_search(v).is_ok()), "row {:?} misses {:?}", row, agents);
        }
    }

    #[test]
    fn hub_rows_serve_their_groups(n in 3usize..50, extra in 0usize..50, seed in any::<u64>()) {
        let g = connected(n, extra, seed);
        let a = algorithm1(&g, 1, &CompleteKernelSpec::binary()).unwrap();
        let mut recovered = vec![false; n];
        for group in &a.plan().unwrap().groups {
            if let Some(h) = group.hub_row {
                let hub = a.row(h);
                prop_assert!(is_connected_induced(&g, hub).unwrap());
                for r in group.row_range.clone() {
                    prop_assert!(hub.iter().filter(|v| !group.hub_subtract.contains(v)).all(|v| a.row(r).contains(v)));
                }
                // targets reach the hub directly or through recovered nodes
                for t in &group.target {
                    prop_assert!(g.neighbors(*t).iter().any(|v| hub.contains(v) || recovered[*v]));
                }
            }
            for &t in &group.target {
                recovered[t] = true;
            }
        }
        prop_assert!(recovered.iter().all(|&r| r));
    }

    #[test]
    fn generators_are_reproducible(n in 2usize..80, p in 0.0f64..0.3, seed in any::<u64>()) {
        let spec = ErdosRenyiSpec { n, p, seed };
        prop_assert_eq!(gen_er(&spec).unwrap(), gen_er(&spec).unwrap());
        let ba = BarabasiAlbertSpec { n: n.max(4), m: 2, m0: 3, seed };
        prop_assert_eq!(gen_ba(&ba).unwrap(), gen_ba(&ba).unwrap());
    }

    #[test]
    fn pipeline_measures_every_node(n in 1usize..120, c in 0.2f64..6.0, seed in any::<u64>()) {
        let p = if n > 1 { (c / (n - 1) as f64).min(1.0) } else { 0.0 };
        let g = gen_er(&ErdosRenyiSpec { n, p, seed }).unwrap();
        let out = er_pipeline(&g, 1, &PipelineSpec { seed, ..PipelineSpec::default() }).unwrap();
        prop_assert!(check_feasibility(&g, &out.matrix).unwrap().feasible);
        let covered: std::collections::BTreeSet<usize> = out.matrix.rows().iter().flatten().copied().collect();
        prop_assert_eq!(covered.len(), n);
        prop_assert!(out.matrix.m() >= components(&g).len());
    }
}

#[test]
fn unsorted_row_is_rejected() {
    assert!(matches!(
        MeasurementMatrix::from_text("1 4\n2 3 1\n"),
        Err(Error::Parse { line: 2, .. })
    ));
    assert!(matches!(Graph::from_text(""), Err(Error::Parse { .. })));
}

#[test]
fn er_edge_count_within_four_sigma() {
    for seed in 0..20 {
        let (n, p) = (400usize, 0.02);
        let g = gen_er(&ErdosRenyiSpec { n, p, seed }).unwrap();
        let pairs = (n * (n - 1) / 2) as f64;
        let (mean, sd) = (pairs * p, (pairs * p * (1.0 - p)).sqrt());
        assert!(
            (g.edge_count() as f64 - mean).abs() <= 4.0 * sd,
            "seed {seed}: {}",
            g.edge_count()
        );
    }
}

#[test]
fn scale_free_degrees_have_a_heavier_tail() {
    for seed in 0..10 {
        let ba = gen_ba(&BarabasiAlbertSpec {
            n: 1000,
            m: 2,
            m0: 10,
            seed,
        })
        .unwrap();
        let p = ba.edge_count() as f64 / (1000.0 * 999.0 / 2.0);
        let er = gen_er(&ErdosRenyiSpec { n: 1000, p, seed }).unwrap();
        let max_deg = |g: &Graph| (0..g.node_count()).map(|v| g.degree(v)).max().unwrap();
        assert!(
            max_deg(&ba) > 2 * max_deg(&er),
            "seed {seed}: {} vs {}",
            max_deg(&ba),
            max_deg(&er)
        );
    }
}

use fvs_core::geom::{planted_yes_instance, random_udg};
use fvs_core::io::{parse_graph, parse_objects, parse_td, write_graph, write_objects, write_td};
use fvs_core::oracle::{exact_treewidth, min_fvs_bruteforce};
use fvs_core::partition::{class_weight, contract, greedy_partition, validate_partition, PartitionBounds};
use fvs_core::solver::rank::{all_partitions, rank_reduce, Cost, RepresentativeTable, TableRow};
use fvs_core::solver::{solve, Mode};
use fvs_core::td::{blowup, decompose_unweighted, make_nice, project, Effort};
use fvs_core::{Graph, OracleBudget, SolveConfig, Verdict};
use proptest::prelude::*;

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (0..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let len = pairs.len();
        prop::collection::vec(any::<bool>(), len).prop_map(move |mask| {
            let edges: Vec<_> = pairs.iter().zip(&mask).filter(|(_, &on)| on).map(|(&e, _)| e).collect();
            Graph::from_edge_list(n, &edges).unwrap()
        })
    })
}

fn oracle_opt(g: &Graph) -> usize {
    min_fvs_bruteforce(g, &OracleBudget::default()).unwrap().0
}

/// Cycle detection by depth-first search for a non-tree edge.
fn has_cycle(g: &Graph) -> bool {
    let mut seen = vec![false; g.n()];
    for s in 0..g.n() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![(s, usize::MAX)];
        while let Some((v, parent)) = stack.pop() {
            for &w in g.neighbors(v) {
                if w == parent {
                    continue;
                }
                if seen[w] {
                    return true;
                }
                seen[w] = true;
                stack.push((w, v));
            }
        }
    }
    false
}

fn verdict(g: &Graph, k: usize, mode: Mode) -> Verdict {
    solve(g, &SolveConfig::new(k, mode)).unwrap().verdict
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn peel_is_idempotent_and_neutral(g in graph(12)) {
        let peel = g.peel_degree_one();
        prop_assert!(peel.reduced.peel_degree_one().removed.is_empty());
        prop_assert_eq!(peel.kept.len() + peel.removed.len(), g.n());
        prop_assert_eq!(oracle_opt(&g), oracle_opt(&peel.reduced));
        let opt = oracle_opt(&g);
        for k in [opt.saturating_sub(1), opt] {
            prop_assert_eq!(verdict(&g, k, Mode::Auto), verdict(&peel.reduced, k, Mode::Auto));
        }
    }

    #[test]
    fn forest_check_matches_cycle_search(g in graph(12)) {
        prop_assert_eq!(g.is_forest(), !has_cycle(&g));
    }

    #[test]
    fn induced_on_everything_is_identity(g in graph(10)) {
        let all: Vec<usize> = (0..g.n()).collect();
        let (h, to_old, _) = g.induced_subgraph(&all);
        prop_assert_eq!(&h, &g);
        prop_assert_eq!(to_old, all);
    }

    #[test]
    fn graph_files_round_trip(g in graph(12)) {
        let text = write_graph(&g);
        let back = parse_graph(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(write_graph(&back), text);
    }

    #[test]
    fn partitions_are_valid(g in graph(12)) {
        let p = greedy_partition(&g);
        let unbounded = PartitionBounds { kappa: usize::MAX, delta: usize::MAX };
        let report = validate_partition(&g, &p, unbounded);
        prop_assert!(report.is_valid(), "{:?}", report.violations);
        let cg = contract(&g, &p).unwrap();
        for (i, class) in p.classes.iter().enumerate() {
            prop_assert_eq!(cg.weight[i], class_weight(class.len()));
        }
        for (&(i, j), &(u, v)) in &cg.witness {
            prop_assert!(g.has_edge(u, v));
            prop_assert_eq!((p.class_of[u], p.class_of[v]), (i, j));
        }
        for (u, v) in g.edges() {
            let (a, b) = (p.class_of[u], p.class_of[v]);
            prop_assert!(a == b || cg.base.has_edge(a, b));
        }
    }

    #[test]
    fn decompositions_are_valid(g in graph(12)) {
        let td = decompose_unweighted(&g, Effort::Best);
        prop_assert!(td.validate(&g).is_valid());
        let p = greedy_partition(&g);
        let cg = contract(&g, &p).unwrap();
        let bg = blowup(&cg);
        let td_b = decompose_unweighted(&bg.graph, Effort::Best);
        prop_assert!(td_b.validate(&bg.graph).is_valid());
        let projected = project(&td_b, &bg, &cg).unwrap();
        prop_assert!(projected.validate(&cg.base).is_valid());
        let nice = make_nice(&projected);
        prop_assert_eq!(nice.check_shape(), Ok(()));
        prop_assert!(nice.to_tree_decomposition().validate(&cg.base).is_valid());
    }

    #[test]
    fn heuristic_width_bounds_treewidth(g in graph(10)) {
        let tw = exact_treewidth(&g, &OracleBudget::default()).unwrap();
        let td = decompose_unweighted(&g, Effort::Best);
        prop_assert!(td.width() >= tw);
        if g.n() > 0 {
            let text = write_td(&td, g.n());
            let (back, n) = parse_td(&text).unwrap();
            prop_assert_eq!(n, g.n());
            prop_assert_eq!(write_td(&back, n), text);
        }
    }

    #[test]
    fn solver_is_sound_complete_and_monotone(g in graph(11)) {
        let opt = oracle_opt(&g);
        for mode in [Mode::DpNaive, Mode::DpRank] {
            let mut last = Verdict::No;
            for k in 0..=opt + 1 {
                let sol = solve(&g, &SolveConfig::new(k, mode)).unwrap();
                prop_assert_eq!(sol.verdict == Verdict::Yes, k >= opt, "mode {} k {}", mode, k);
                prop_assert!(!(last == Verdict::Yes && sol.verdict == Verdict::No));
                if let Some(fvs) = &sol.fvs {
                    prop_assert!(fvs.len() <= k);
                    prop_assert!(g.is_forest_without(fvs));
                }
                prop_assert_eq!(sol.optimum, Some(opt));
                last = sol.verdict;
            }
        }
    }

    #[test]
    fn udg_graph_matches_all_pairs(n in 1usize..60, density in 0.05f64..4.0, seed in any::<u64>()) {
        let set = random_udg(n, density, seed).unwrap();
        let g = set.intersection_graph();
        let objs = set.objects();
        for u in 0..n {
            for v in u + 1..n {
                prop_assert_eq!(g.has_edge(u, v), objs[u].intersects(&objs[v]));
            }
        }
        let cells = set.classify_grid();
        for u in 0..n {
            for v in u + 1..n {
                if cells.cell_of[u] == cells.cell_of[v] {
                    prop_assert!(g.has_edge(u, v));
                }
            }
        }
        let text = write_objects(&set);
        prop_assert_eq!(write_objects(&parse_objects(&text).unwrap()), text);
        prop_assert_eq!(write_objects(&random_udg(n, density, seed).unwrap()), write_objects(&set));
    }

    #[test]
    fn planted_hubs_leave_a_forest(k in 0usize..30, extra in 0usize..10, seed in any::<u64>()) {
        let (set, planted) = planted_yes_instance(k, 2 + extra, seed).unwrap();
        prop_assert_eq!(planted, k);
        let g = set.intersection_graph();
        let hubs: Vec<usize> = (g.n() - k..g.n()).collect();
        prop_assert!(g.is_forest_without(&hubs));
        prop_assert_eq!(g.is_forest(), k == 0);
    }

    #[test]
    fn reduced_tables_stay_representative(
        u in 1usize..=5,
        picks in prop::collection::vec((any::<prop::sample::Index>(), -2i32..2, 0u32..4), 1..30),
    ) {
        let pool = all_partitions(u);
        let rows: Vec<TableRow> = picks
            .iter()
            .map(|(i, excess, deleted)| TableRow {
                signature: vec![0],
                partition: pool[i.index(pool.len())].clone(),
                cost: Cost { excess: *excess, deleted: *deleted },
            })
            .collect();
        let full = RepresentativeTable::new(rows);
        let reduced = rank_reduce(&full);
        prop_assert!(reduced.rows.len() <= 1 << (u - 1));
        for q in &pool {
            prop_assert_eq!(full.optimum_against(&[0], q), reduced.optimum_against(&[0], q));
        }
    }
}

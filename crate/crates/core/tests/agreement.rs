//! Oracle, solver and CNF encoding must agree on every small corpus graph.

mod common;

use mixlay_core::cnf::{decode, encode};
use mixlay_core::layout::is_valid;
use mixlay_core::search::{enumerate_all, solve, EnumerateOptions, SolveOptions, SolveStatus};
use mixlay_core::PageSpec;

use common::{corpus, dpll, two_trees_up_to};

const SPECS: [(u32, u32); 4] = [(1, 0), (0, 1), (1, 1), (2, 0)];

#[test]
fn two_tree_counts_match_known_sequence() {
    // Non-isomorphic 2-trees on 2..=6 vertices: 1, 1, 1, 2, 5.
    let trees = two_trees_up_to(6);
    let counts: Vec<usize> = (2..=6)
        .map(|n| trees.iter().filter(|g| g.vertex_count() == n).count())
        .collect();
    assert_eq!(counts, vec![1, 1, 1, 2, 5]);
}

#[test]
fn oracle_solver_and_cnf_agree_on_corpus() {
    for (name, g) in corpus() {
        for (s, q) in SPECS {
            let spec = PageSpec::new(s, q).unwrap();
            let oracle = enumerate_all(&g, spec, EnumerateOptions::default())
                .unwrap()
                .next()
                .is_some();
            let solved = solve(&g, spec, SolveOptions::default()).status;
            assert!(!matches!(solved, SolveStatus::BudgetExceeded), "{name} {spec}");
            if let SolveStatus::Sat(layout) = &solved {
                assert!(is_valid(&g, layout, spec).unwrap(), "{name} {spec}");
            }
            let cnf = encode(&g, spec);
            let model = dpll(&cnf.clauses, cnf.variable_count());
            if let Some(m) = &model {
                let layout = decode(&g, spec, m).unwrap();
                assert!(is_valid(&g, &layout, spec).unwrap(), "{name} {spec}");
            }
            assert_eq!(
                oracle,
                matches!(solved, SolveStatus::Sat(_)),
                "oracle vs solver on {name} {spec}"
            );
            assert_eq!(oracle, model.is_some(), "oracle vs cnf on {name} {spec}");
        }
    }
}

#[test]
fn known_verdicts() {
    let k23 = mixlay_core::Graph::complete_bipartite(2, 3);
    let one_stack = PageSpec::new(1, 0).unwrap();
    assert_eq!(
        solve(&k23, one_stack, SolveOptions::default()).status,
        SolveStatus::Unsat
    );
    let cnf = encode(&k23, one_stack);
    assert!(dpll(&cnf.clauses, cnf.variable_count()).is_none());

    let k5e = common::k5_minus_edge();
    for (s, q) in [(2, 0), (0, 2), (1, 1)] {
        let spec = PageSpec::new(s, q).unwrap();
        assert!(
            matches!(solve(&k5e, spec, SolveOptions::default()).status, SolveStatus::Sat(_)),
            "{spec}"
        );
    }
}

#[test]
fn solver_matches_oracle_on_graphs_with_many_twins() {
    let mut graphs: Vec<(String, mixlay_core::Graph)> = two_trees_up_to(7)
        .into_iter()
        .filter(|g| g.vertex_count() == 7)
        .enumerate()
        .map(|(i, g)| (format!("two-tree#{i} n=7"), g))
        .collect();
    for n in 3..=5 {
        graphs.push((format!("K2,{n}"), mixlay_core::Graph::complete_bipartite(2, n)));
        graphs.push((format!("K1,{n}"), mixlay_core::Graph::complete_bipartite(1, n)));
    }
    graphs.push(("K6".into(), mixlay_core::Graph::complete(6)));
    for (name, g) in graphs {
        for (s, q) in [(1, 0), (0, 1), (1, 1), (2, 0), (0, 2)] {
            let spec = PageSpec::new(s, q).unwrap();
            let oracle = enumerate_all(&g, spec, EnumerateOptions::default())
                .unwrap()
                .next()
                .is_some();
            let solved = solve(&g, spec, SolveOptions::default()).status;
            assert_eq!(oracle, matches!(solved, SolveStatus::Sat(_)), "{name} {spec}");
        }
    }
}

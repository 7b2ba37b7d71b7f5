mod common;

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use mixlay_core::cnf::{decode, encode, model_of};
use mixlay_core::layout::{crosses, is_valid, max_rainbow, max_twist, nests, validate};
use mixlay_core::pattern::{find_patterns, find_smileys, PatternKind, Witness};
use mixlay_core::search::{enumerate_all, solve, EnumerateOptions, SolveOptions, SolveStatus};
use mixlay_core::{build_gkl, gkl_size, Edge, GklParams, Graph, LinearLayout, PageId, PageKind, PageSpec};

fn graph(max_n: usize, density: f64) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(move |n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        proptest::collection::vec(proptest::bool::weighted(density), pairs.len()).prop_map(move |keep| {
            let chosen = pairs.iter().zip(keep).filter(|(_, k)| *k).map(|(&p, _)| p);
            Graph::from_edges(n, chosen).unwrap()
        })
    })
}

/// A graph with an arbitrary order and arbitrary pages from `spec`.
fn laid_out(max_n: usize, density: f64, spec: PageSpec) -> impl Strategy<Value = (Graph, LinearLayout)> {
    let pages: Vec<PageId> = spec.pages().collect();
    graph(max_n, density).prop_flat_map(move |g| {
        let n = g.vertex_count();
        let m = g.edge_count();
        let pages = pages.clone();
        (
            Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
            proptest::collection::vec(0..pages.len(), m),
        )
            .prop_map(move |(order, choice)| {
                let map: BTreeMap<Edge, PageId> = g.edges().zip(choice).map(|(e, i)| (e, pages[i])).collect();
                (g.clone(), LinearLayout::new(order, map).unwrap())
            })
    })
}

fn pages_by_kind(layout: &LinearLayout, f: impl Fn(PageId) -> PageId) -> LinearLayout {
    let map = layout.pages().iter().map(|(&e, &p)| (e, f(p))).collect();
    LinearLayout::new(layout.order().to_vec(), map).unwrap()
}

/// Naive template scan: every increasing (and, if `reversible`, decreasing)
/// choice of slots whose required edges exist on pages of the right kind.
fn naive_matches(
    g: &Graph,
    layout: &LinearLayout,
    slots: usize,
    edges: &[(usize, usize, PageKind)],
    reversible: bool,
) -> BTreeSet<Vec<usize>> {
    let n = layout.vertex_count();
    let mut out = BTreeSet::new();
    let mut idx: Vec<usize> = (0..slots).collect();
    if slots > n {
        return out;
    }
    loop {
        let mut directions = vec![layout.order().to_vec()];
        if reversible {
            directions.push(layout.order().iter().rev().copied().collect());
        }
        for order in &directions {
            let tuple: Vec<usize> = idx.iter().map(|&i| order[i]).collect();
            let ok = edges.iter().all(|&(i, j, kind)| {
                let e = Edge::new(tuple[i], tuple[j]);
                g.contains_edge(e) && layout.page(e).is_some_and(|p| p.kind == kind)
            });
            if ok {
                out.insert(tuple);
            }
        }
        let Some(i) = (0..slots).rev().find(|&i| idx[i] < n - slots + i) else {
            break;
        };
        idx[i] += 1;
        for j in i + 1..slots {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out
}

type TemplateEdges = &'static [(usize, usize, PageKind)];

fn tuples(ws: &[Witness]) -> BTreeSet<Vec<usize>> {
    ws.iter().map(|w| w.vertices.clone()).collect()
}

/// Largest pairwise-related subset of `spans`, by exhaustive search.
fn largest_clique(spans: &[(usize, usize)], related: impl Fn((usize, usize), (usize, usize)) -> bool) -> usize {
    let mut best = 0;
    for mask in 0u32..(1 << spans.len()) {
        let chosen: Vec<_> = (0..spans.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| spans[i])
            .collect();
        let ok = chosen
            .iter()
            .enumerate()
            .all(|(i, &a)| chosen[i + 1..].iter().all(|&b| related(a, b)));
        if ok {
            best = best.max(chosen.len());
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cross_and_nest_are_symmetric_exclusive_and_reversal_invariant(
        (g, layout) in laid_out(8, 0.5, PageSpec::MIXED)
    ) {
        let rev = layout.reversed();
        let edges: Vec<Edge> = g.edges().collect();
        for &e in &edges {
            for &f in &edges {
                if e.shares_endpoint(f) {
                    prop_assert!(crosses(e, f, &layout).is_err());
                    continue;
                }
                let c = crosses(e, f, &layout).unwrap();
                let n = nests(e, f, &layout).unwrap();
                prop_assert_eq!(c, crosses(f, e, &layout).unwrap());
                prop_assert_eq!(n, nests(f, e, &layout).unwrap());
                prop_assert!(!(c && n));
                prop_assert_eq!(c, crosses(e, f, &rev).unwrap());
                prop_assert_eq!(n, nests(e, f, &rev).unwrap());
            }
        }
    }

    #[test]
    fn validity_survives_reversal_and_page_renaming(
        (g, layout) in laid_out(8, 0.5, PageSpec::new(2, 2).unwrap())
    ) {
        let spec = PageSpec::new(2, 2).unwrap();
        let base = validate(&g, &layout, spec).unwrap().conflicts.len();
        prop_assert_eq!(validate(&g, &layout.reversed(), spec).unwrap().conflicts.len(), base);
        let swapped = pages_by_kind(&layout, |p| PageId { kind: p.kind, index: 1 - p.index });
        prop_assert_eq!(validate(&g, &swapped, spec).unwrap().conflicts.len(), base);
    }

    #[test]
    fn twist_and_rainbow_match_exhaustive_search(
        (_g, layout) in laid_out(8, 0.4, PageSpec::MIXED)
    ) {
        for page in PageSpec::MIXED.pages() {
            let spans: Vec<(usize, usize)> = layout
                .pages()
                .iter()
                .filter(|(_, &p)| p == page)
                .map(|(&e, _)| layout.span(e))
                .collect();
            prop_assume!(spans.len() <= 14);
            let cross = |a: (usize, usize), b: (usize, usize)| (a.0 < b.0 && b.0 < a.1 && a.1 < b.1) || (b.0 < a.0 && a.0 < b.1 && b.1 < a.1);
            let nest = |a: (usize, usize), b: (usize, usize)| (a.0 < b.0 && b.1 < a.1) || (b.0 < a.0 && a.1 < b.1);
            prop_assert_eq!(max_twist(&layout, page), largest_clique(&spans, cross));
            prop_assert_eq!(max_rainbow(&layout, page), largest_clique(&spans, nest));
        }
    }

    #[test]
    fn detector_matches_naive_scan((g, layout) in laid_out(9, 0.6, PageSpec::MIXED)) {
        use PageKind::{Queue as Q, Stack as S};
        let smiley = naive_matches(&g, &layout, 6, &[(0, 1, Q), (4, 5, Q), (0, 5, Q), (2, 3, S)], false);
        prop_assert_eq!(tuples(&find_smileys(&g, &layout, None).unwrap()), smiley);
        let templates: [(PatternKind, TemplateEdges); 3] = [
            (PatternKind::P1, &[(0, 2, S), (0, 5, S), (3, 4, S), (1, 6, Q)]),
            (PatternKind::P1a, &[(1, 2, S), (1, 5, S), (3, 4, S), (0, 6, Q)]),
            (PatternKind::P2, &[(0, 6, S), (1, 3, S), (1, 4, S), (0, 5, Q), (2, 6, Q)]),
        ];
        for (kind, edges) in templates {
            let found = find_patterns(&g, &layout, kind, None).unwrap();
            prop_assert!(found.iter().all(|w| w.revalidate(&layout)));
            prop_assert_eq!(tuples(&found), naive_matches(&g, &layout, 7, edges, true), "{:?}", kind);
        }
    }

    #[test]
    fn solver_agrees_with_oracle(g in graph(7, 0.5), which in 0usize..5) {
        let spec = [(1, 0), (0, 1), (1, 1), (2, 0), (0, 2)].map(|(s, q)| PageSpec::new(s, q).unwrap())[which];
        let oracle = enumerate_all(&g, spec, EnumerateOptions::default()).unwrap().next().is_some();
        let first = solve(&g, spec, SolveOptions::default());
        prop_assert_eq!(oracle, matches!(first.status, SolveStatus::Sat(_)));
        let second = solve(&g, spec, SolveOptions::default());
        prop_assert_eq!(first.status, second.status);
        prop_assert_eq!(first.stats.nodes, second.stats.nodes);
    }

    #[test]
    fn cnf_model_satisfies_exactly_valid_layouts((g, layout) in laid_out(6, 0.5, PageSpec::MIXED)) {
        let cnf = encode(&g, PageSpec::MIXED);
        let model = model_of(&g, PageSpec::MIXED, &layout);
        let valid = is_valid(&g, &layout, PageSpec::MIXED).unwrap();
        prop_assert_eq!(cnf.satisfied_by(&model), valid);
        if valid {
            prop_assert_eq!(decode(&g, PageSpec::MIXED, &model).unwrap(), layout);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn canonical_enumeration_is_exactly_half(g in graph(5, 0.5), which in 0usize..3) {
        let spec = [(1, 0), (0, 1), (1, 1)].map(|(s, q)| PageSpec::new(s, q).unwrap())[which];
        let full: Vec<LinearLayout> = enumerate_all(&g, spec, EnumerateOptions { modulo_reversal: false, ..Default::default() })
            .unwrap()
            .collect();
        let half: Vec<LinearLayout> = enumerate_all(&g, spec, EnumerateOptions::default()).unwrap().collect();
        prop_assert_eq!(full.len(), 2 * half.len());
        let all: BTreeSet<String> = full.iter().map(mixlay_core::format::write_layout).collect();
        for l in &half {
            prop_assert!(all.contains(&mixlay_core::format::write_layout(&l.reversed())));
        }
    }
}

#[test]
fn size_formula_matches_construction() {
    for k in 1..=4 {
        for ell in 1..=3 {
            let p = GklParams::new(k, ell).unwrap();
            let t = build_gkl(p, None).unwrap();
            let (v, e) = gkl_size(p).unwrap();
            assert_eq!(
                (v, e),
                (t.graph().vertex_count() as u64, t.graph().edge_count() as u64),
                "{p}"
            );
        }
    }
    assert_eq!(
        gkl_size(GklParams::new(5, 33).unwrap()).unwrap(),
        (10_075_562, 20_151_121)
    );
}

#![allow(dead_code)]

use std::collections::BTreeSet;

use mixlay_core::{Graph, TwoTree};

/// Every 2-tree with at most `max_vertices` vertices, up to isomorphism.
pub fn two_trees_up_to(max_vertices: usize) -> Vec<Graph> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut frontier = vec![TwoTree::base()];
    while let Some(t) = frontier.pop() {
        let g = t.graph().clone();
        if !seen.insert(canonical_form(&g)) {
            continue;
        }
        if g.vertex_count() < max_vertices {
            for e in g.edges() {
                frontier.push(t.attach(e).unwrap());
            }
        }
        out.push(g);
    }
    out.sort_by_key(|g| (g.vertex_count(), g.edges().map(|e| e.endpoints()).collect::<Vec<_>>()));
    out
}

/// Lexicographically smallest sorted edge list over all relabelings.
pub fn canonical_form(g: &Graph) -> (usize, Vec<(usize, usize)>) {
    let n = g.vertex_count();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<(usize, usize)>> = None;
    loop {
        let mut edges: Vec<(usize, usize)> = g
            .edges()
            .map(|e| {
                let (a, b) = (perm[e.u()], perm[e.v()]);
                (a.min(b), a.max(b))
            })
            .collect();
        edges.sort_unstable();
        if best.as_ref().is_none_or(|b| edges < *b) {
            best = Some(edges);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    (n, best.unwrap_or_default())
}

pub fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// The small-graph corpus: 2-trees up to six vertices, K_{2,3}, K5 minus an
/// edge, paths and cycles.
pub fn corpus() -> Vec<(String, Graph)> {
    let mut out: Vec<(String, Graph)> = two_trees_up_to(6)
        .into_iter()
        .enumerate()
        .map(|(i, g)| (format!("two-tree#{i} n={}", g.vertex_count()), g))
        .collect();
    out.push(("K2,3".into(), Graph::complete_bipartite(2, 3)));
    out.push(("K5-e".into(), k5_minus_edge()));
    for n in 2..=6 {
        out.push((format!("P{n}"), Graph::path(n)));
    }
    for n in 3..=6 {
        out.push((format!("C{n}"), Graph::cycle(n)));
    }
    out
}

pub fn k5_minus_edge() -> Graph {
    let pairs = (0..5)
        .flat_map(|a| (a + 1..5).map(move |b| (a, b)))
        .filter(|&p| p != (3, 4));
    Graph::from_edges(5, pairs).unwrap()
}

/// Plain DPLL with unit propagation. Returns a model indexed by variable
/// (entry 0 unused).
pub fn dpll(clauses: &[Vec<i64>], vars: usize) -> Option<Vec<bool>> {
    let mut assign: Vec<Option<bool>> = vec![None; vars + 1];
    if search(clauses, &mut assign) {
        Some(assign.into_iter().map(|a| a.unwrap_or(false)).collect())
    } else {
        None
    }
}

fn value(assign: &[Option<bool>], lit: i64) -> Option<bool> {
    assign[lit.unsigned_abs() as usize].map(|b| b == (lit > 0))
}

fn search(clauses: &[Vec<i64>], assign: &mut Vec<Option<bool>>) -> bool {
    let mut trail = Vec::new();
    loop {
        let mut unit = None;
        for c in clauses {
            let mut free = None;
            let mut free_count = 0;
            let mut sat = false;
            for &l in c {
                match value(assign, l) {
                    Some(true) => {
                        sat = true;
                        break;
                    }
                    Some(false) => {}
                    None => {
                        free = Some(l);
                        free_count += 1;
                    }
                }
            }
            if sat {
                continue;
            }
            match free_count {
                0 => {
                    for v in trail {
                        assign[v] = None;
                    }
                    return false;
                }
                1 => {
                    unit = free;
                    break;
                }
                _ => {}
            }
        }
        match unit {
            Some(l) => {
                let v = l.unsigned_abs() as usize;
                assign[v] = Some(l > 0);
                trail.push(v);
            }
            None => break,
        }
    }
    let Some(v) = (1..assign.len()).find(|&v| assign[v].is_none()) else {
        return true;
    };
    for b in [true, false] {
        assign[v] = Some(b);
        if search(clauses, assign) {
            return true;
        }
    }
    assign[v] = None;
    for v in trail {
        assign[v] = None;
    }
    false
}

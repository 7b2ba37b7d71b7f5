use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use crate::format::write_layout;
use crate::graph::{Edge, Graph, Vertex};
use crate::layout::{conflicting, validate, LinearLayout, PageId, PageKind, PageSpec};

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    /// Maximum number of search nodes (vertex placements plus page choices).
    pub budget: u64,
    /// Single-threaded, fixed branching order.
    pub deterministic: bool,
    /// Worker threads for the root split; ignored when deterministic.
    pub threads: usize,
}

impl Default for SolveOptions {
    fn default() -> SolveOptions {
        SolveOptions {
            budget: 50_000_000,
            deterministic: true,
            threads: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveStatus {
    Sat(LinearLayout),
    Unsat,
    BudgetExceeded,
}

impl SolveStatus {
    pub fn name(&self) -> &'static str {
        match self {
            SolveStatus::Sat(_) => "sat",
            SolveStatus::Unsat => "unsat",
            SolveStatus::BudgetExceeded => "budget-exceeded",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub nodes: u64,
    pub time: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub stats: SolveStats,
}

/// Decides whether `graph` has a layout with the pages of `spec`.
///
/// Vertices are placed left to right; every edge gets its page as soon as its
/// second endpoint is placed. `Unsat` is returned only after the whole space
/// was exhausted, up to three symmetries: reversal (vertex 0 is placed before
/// vertex 1), renaming pages of the same kind, and swapping vertices with the
/// same neighbors (placed in id order). When 0 or 1 has such a twin, the
/// reversal rule moves to the two smallest twin-free vertices, since sorting
/// twins would otherwise undo it.
pub fn solve(graph: &Graph, spec: PageSpec, opts: SolveOptions) -> SolveResult {
    let start = Instant::now();
    let nodes = AtomicU64::new(0);
    let problem = Problem::new(graph, spec);
    let threads = if opts.deterministic { 1 } else { opts.threads.max(1) };
    let status = if threads == 1 || graph.vertex_count() < 2 {
        let mut s = Search::new(&problem, opts.budget, &nodes, None);
        match s.run(None) {
            Ok(true) => SolveStatus::Sat(s.layout()),
            Ok(false) => SolveStatus::Unsat,
            Err(Abort) => SolveStatus::BudgetExceeded,
        }
    } else {
        solve_parallel(&problem, opts.budget, &nodes, threads)
    };
    if let SolveStatus::Sat(layout) = &status {
        let report = validate(graph, layout, spec).expect("solver certificate is structurally complete");
        assert!(report.is_valid(), "solver produced an invalid certificate");
    }
    SolveResult {
        status,
        stats: SolveStats {
            nodes: nodes.load(Ordering::Relaxed),
            time: start.elapsed(),
        },
    }
}

fn solve_parallel(problem: &Problem, budget: u64, nodes: &AtomicU64, threads: usize) -> SolveStatus {
    let roots = Search::new(problem, budget, nodes, None).candidates();
    let next = AtomicUsize::new(0);
    let stop = AtomicBool::new(false);
    let found: Mutex<Vec<(String, LinearLayout)>> = Mutex::new(Vec::new());
    let exhausted = AtomicBool::new(false);
    std::thread::scope(|scope| {
        for _ in 0..threads.min(roots.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= roots.len() || stop.load(Ordering::Relaxed) {
                    break;
                }
                let mut s = Search::new(problem, budget, nodes, Some(&stop));
                match s.run(Some(roots[i])) {
                    Ok(true) => {
                        let layout = s.layout();
                        found.lock().unwrap().push((write_layout(&layout), layout));
                    }
                    Ok(false) => {}
                    Err(Abort) => {
                        exhausted.store(true, Ordering::Relaxed);
                        stop.store(true, Ordering::Relaxed);
                    }
                }
            });
        }
    });
    let found = found.into_inner().unwrap();
    match found.into_iter().min_by(|a, b| a.0.cmp(&b.0)) {
        Some((_, layout)) => SolveStatus::Sat(layout),
        None if exhausted.load(Ordering::Relaxed) => SolveStatus::BudgetExceeded,
        None => SolveStatus::Unsat,
    }
}

struct Problem {
    n: usize,
    /// `(neighbor, edge index)` per vertex.
    incident: Vec<Vec<(Vertex, usize)>>,
    edges: Vec<Edge>,
    pages: Vec<PageId>,
    /// The next smaller vertex with the same neighbors (open or closed
    /// neighborhood). Such vertices are interchangeable, so they are placed
    /// in increasing id order.
    twin_before: Vec<Option<Vertex>>,
    /// `(a, b)`: `a` is placed before `b`.
    reversal: Option<(Vertex, Vertex)>,
}

impl Problem {
    fn new(graph: &Graph, spec: PageSpec) -> Problem {
        let edges: Vec<Edge> = graph.edges().collect();
        let mut incident = vec![Vec::new(); graph.vertex_count()];
        for (i, e) in edges.iter().enumerate() {
            incident[e.u()].push((e.v(), i));
            incident[e.v()].push((e.u(), i));
        }
        let n = graph.vertex_count();
        let mut twin_before = vec![None; n];
        let mut has_twin = vec![false; n];
        let mut last: HashMap<(bool, Vec<Vertex>), Vertex> = HashMap::new();
        for v in 0..graph.vertex_count() {
            let mut open: Vec<Vertex> = graph.neighbors(v).collect();
            open.sort_unstable();
            let mut closed = open.clone();
            closed.push(v);
            closed.sort_unstable();
            for key in [(false, open), (true, closed)] {
                if let Some(w) = last.insert(key, v) {
                    twin_before[v] = Some(w);
                    has_twin[v] = true;
                    has_twin[w] = true;
                }
            }
        }
        let mut free = (0..n).filter(|&v| !has_twin[v]);
        let reversal = match (free.next(), free.next()) {
            (Some(a), Some(b)) => Some((a, b)),
            _ => None,
        };
        Problem {
            n: graph.vertex_count(),
            incident,
            edges,
            pages: spec.pages().collect(),
            twin_before,
            reversal,
        }
    }
}

struct Abort;

const UNPLACED: usize = usize::MAX;

struct Search<'a> {
    p: &'a Problem,
    budget: u64,
    nodes: &'a AtomicU64,
    stop: Option<&'a AtomicBool>,
    order: Vec<Vertex>,
    pos: Vec<usize>,
    edge_page: Vec<usize>,
    /// Closed edges (both endpoints placed) per page, as `(span, edge index)`.
    closed: Vec<Vec<((usize, usize), usize)>>,
    /// Number of distinct indices in use per page kind.
    used: [u32; 2],
    /// Frontier states known to have no completion.
    dead: HashSet<Vec<u64>>,
    dead_words: usize,
}

/// Cap on the total size of cached dead states, in 64-bit words.
const DEAD_CACHE_WORDS: usize = 1 << 24;

fn kind_slot(kind: PageKind) -> usize {
    match kind {
        PageKind::Stack => 0,
        PageKind::Queue => 1,
    }
}

impl<'a> Search<'a> {
    fn new(p: &'a Problem, budget: u64, nodes: &'a AtomicU64, stop: Option<&'a AtomicBool>) -> Search<'a> {
        Search {
            p,
            budget,
            nodes,
            stop,
            order: Vec::with_capacity(p.n),
            pos: vec![UNPLACED; p.n],
            edge_page: vec![UNPLACED; p.edges.len()],
            closed: vec![Vec::new(); p.pages.len()],
            used: [0, 0],
            dead: HashSet::new(),
            dead_words: 0,
        }
    }

    fn tick(&self) -> Result<(), Abort> {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if n > self.budget || self.stop.is_some_and(|s| s.load(Ordering::Relaxed)) {
            return Err(Abort);
        }
        Ok(())
    }

    fn layout(&self) -> LinearLayout {
        let pages: BTreeMap<Edge, PageId> = self
            .p
            .edges
            .iter()
            .zip(&self.edge_page)
            .map(|(&e, &i)| (e, self.p.pages[i]))
            .collect();
        LinearLayout::new(self.order.clone(), pages).expect("complete order")
    }

    fn run(&mut self, root: Option<Vertex>) -> Result<bool, Abort> {
        match root {
            Some(v) => self.place(v),
            None => self.extend(),
        }
    }

    /// Unplaced vertices, most placed neighbors first, lowest id on ties.
    fn candidates(&self) -> Vec<Vertex> {
        let mut c: Vec<(usize, Vertex)> = (0..self.p.n)
            .filter(|&v| self.pos[v] == UNPLACED)
            .filter(|&v| {
                self.p
                    .reversal
                    .is_none_or(|(a, b)| !(v == b && self.pos[a] == UNPLACED))
            })
            .filter(|&v| self.p.twin_before[v].is_none_or(|w| self.pos[w] != UNPLACED))
            .map(|v| {
                let placed = self.p.incident[v]
                    .iter()
                    .filter(|&&(w, _)| self.pos[w] != UNPLACED)
                    .count();
                (usize::MAX - placed, v)
            })
            .collect();
        c.sort_unstable();
        c.into_iter().map(|(_, v)| v).collect()
    }

    fn extend(&mut self) -> Result<bool, Abort> {
        if self.order.len() == self.p.n {
            return Ok(true);
        }
        let Some((blocked, key)) = self.frontier() else {
            return Ok(false);
        };
        let cacheable = self.p.pages.len() <= 32;
        if cacheable && self.dead.contains(&key) {
            return Ok(false);
        }
        for v in self.candidates() {
            if blocked[v] {
                continue;
            }
            if self.place(v)? {
                return Ok(true);
            }
        }
        if cacheable && self.dead_words + key.len() <= DEAD_CACHE_WORDS {
            self.dead_words += key.len();
            self.dead.insert(key);
        }
        Ok(false)
    }

    fn place(&mut self, v: Vertex) -> Result<bool, Abort> {
        self.tick()?;
        let t = self.order.len();
        self.pos[v] = t;
        self.order.push(v);
        let new_edges: Vec<(usize, usize)> = self.p.incident[v]
            .iter()
            .filter(|&&(w, _)| self.pos[w] != UNPLACED && w != v)
            .map(|&(w, i)| (self.pos[w], i))
            .collect();
        let ok = self.assign(&new_edges, 0, t)?;
        if !ok {
            self.order.pop();
            self.pos[v] = UNPLACED;
        }
        Ok(ok)
    }

    /// Pages for the edges closed by the vertex at position `t`, then recursion.
    fn assign(&mut self, new_edges: &[(usize, usize)], i: usize, t: usize) -> Result<bool, Abort> {
        if i == new_edges.len() {
            return self.extend();
        }
        let (x, e) = new_edges[i];
        let span = (x, t);
        for page in 0..self.p.pages.len() {
            let id = self.p.pages[page];
            let slot = kind_slot(id.kind);
            if id.index > self.used[slot] {
                continue;
            }
            let edge = self.p.edges[e];
            if self.closed[page]
                .iter()
                .any(|&(s, f)| !self.p.edges[f].shares_endpoint(edge) && conflicting(id, s, span))
            {
                continue;
            }
            self.tick()?;
            let fresh = id.index == self.used[slot];
            if fresh {
                self.used[slot] += 1;
            }
            self.edge_page[e] = page;
            self.closed[page].push((span, e));
            let ok = self.assign(new_edges, i + 1, t)?;
            if ok {
                return Ok(true);
            }
            self.closed[page].pop();
            self.edge_page[e] = UNPLACED;
            if fresh {
                self.used[slot] -= 1;
            }
        }
        Ok(false)
    }

    /// Pages an open edge leaving position `x` could still take.
    ///
    /// Against a closed edge `(a,b)`, an open edge leaving `x` to the right
    /// crosses iff `a < x < b` and nests around it iff `x < a`; both are fixed
    /// already.
    fn usable_pages(&self, x: usize, open: Edge) -> impl Iterator<Item = usize> + '_ {
        (0..self.p.pages.len()).filter(move |&page| {
            let id = self.p.pages[page];
            if id.index > self.used[kind_slot(id.kind)] {
                return false;
            }
            self.closed[page].iter().all(|&((a, b), f)| {
                self.p.edges[f].shares_endpoint(open)
                    || match id.kind {
                        PageKind::Stack => !(a < x && x < b),
                        PageKind::Queue => !(x < a),
                    }
            })
        })
    }

    /// Unplaced vertices that cannot come next, plus a key for the state, or
    /// `None` when the partial layout cannot be completed.
    ///
    /// Every open edge needs a usable page. Two independent open edges
    /// `(x1,y)`, `(x2,z)` with `x1 < x2` that are both confined to the same
    /// page fix the order of `y` and `z`: on a stack `z` must come first, on a
    /// queue `y` must. A vertex with an unplaced predecessor is blocked; if
    /// every unplaced vertex is blocked the precedences form a cycle.
    ///
    /// The rest of the search depends only on the placed set, the page
    /// indices in use and the open edges in left-endpoint order with their
    /// usable pages, which is what the key records.
    fn frontier(&self) -> Option<(Vec<bool>, Vec<u64>)> {
        let mut key = vec![0u64; self.p.n.div_ceil(64) + 1];
        for &v in &self.order {
            key[v / 64] |= 1 << (v % 64);
        }
        key[self.p.n.div_ceil(64)] = u64::from(self.used[0]) << 32 | u64::from(self.used[1]);
        let mut forced: Vec<(usize, Vertex, Vertex, usize)> = Vec::new();
        for &v in &self.order {
            let x = self.pos[v];
            for &(w, e) in &self.p.incident[v] {
                if self.pos[w] != UNPLACED {
                    continue;
                }
                let mut mask = 0u64;
                let mut count = 0;
                let mut only = 0;
                for page in self.usable_pages(x, self.p.edges[e]) {
                    mask |= 1 << (page % 64);
                    count += 1;
                    only = page;
                }
                match count {
                    0 => return None,
                    1 => forced.push((x, v, w, only)),
                    _ => {}
                }
                key.push((e as u64) << 32 | (mask & 0xffff_ffff));
            }
        }
        let mut blocked = vec![false; self.p.n];
        for (i, &(x1, v1, y, p1)) in forced.iter().enumerate() {
            for &(x2, v2, z, p2) in &forced[i + 1..] {
                if p1 != p2 || v1 == v2 || y == z || v1 == z || v2 == y {
                    continue;
                }
                let (inner, outer) = if x1 < x2 { (z, y) } else { (y, z) };
                match self.p.pages[p1].kind {
                    PageKind::Stack => blocked[outer] = true,
                    PageKind::Queue => blocked[inner] = true,
                }
            }
        }
        if (0..self.p.n).all(|v| self.pos[v] != UNPLACED || blocked[v]) {
            return None;
        }
        Some((blocked, key))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_gkl, GklParams};

    fn status(g: &Graph, s: u32, q: u32) -> SolveStatus {
        solve(g, PageSpec::new(s, q).unwrap(), SolveOptions::default()).status
    }

    #[test]
    fn k23_one_stack_is_unsat() {
        assert_eq!(status(&Graph::complete_bipartite(2, 3), 1, 0), SolveStatus::Unsat);
    }

    #[test]
    fn small_family_members_are_mixed() {
        for ell in 1..=4 {
            let t = build_gkl(GklParams::new(2, ell).unwrap(), None).unwrap();
            assert!(matches!(status(t.graph(), 1, 1), SolveStatus::Sat(_)), "G(2,{ell})");
        }
    }

    #[test]
    fn k4_needs_two_stack_pages() {
        let g = Graph::complete(4);
        assert_eq!(status(&g, 1, 0), SolveStatus::Unsat);
        assert!(matches!(status(&g, 2, 0), SolveStatus::Sat(_)));
        assert!(matches!(status(&g, 1, 1), SolveStatus::Sat(_)));
    }

    #[test]
    fn budget_is_a_status() {
        let t = build_gkl(GklParams::new(3, 3).unwrap(), None).unwrap();
        let r = solve(
            t.graph(),
            PageSpec::MIXED,
            SolveOptions {
                budget: 50,
                ..Default::default()
            },
        );
        assert_eq!(r.status, SolveStatus::BudgetExceeded);
    }

    #[test]
    fn twins_do_not_hide_layouts() {
        // Every vertex of K_{2,3} and K5 has an interchangeable twin.
        assert!(matches!(
            status(&Graph::complete_bipartite(2, 3), 0, 1),
            SolveStatus::Sat(_)
        ));
        assert!(matches!(
            status(&Graph::complete_bipartite(2, 3), 2, 0),
            SolveStatus::Sat(_)
        ));
        assert_eq!(status(&Graph::complete(5), 2, 0), SolveStatus::Unsat);
        assert!(matches!(status(&Graph::complete(5), 3, 0), SolveStatus::Sat(_)));
    }

    #[test]
    fn parallel_matches_deterministic_verdict() {
        let t = build_gkl(GklParams::new(3, 2).unwrap(), None).unwrap();
        let par = SolveOptions {
            deterministic: false,
            threads: 4,
            ..Default::default()
        };
        let a = solve(t.graph(), PageSpec::MIXED, par).status;
        let b = solve(t.graph(), PageSpec::MIXED, par).status;
        assert!(matches!(a, SolveStatus::Sat(_)));
        assert_eq!(a, b);
    }
}

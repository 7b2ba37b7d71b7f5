use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{Edge, Graph, Vertex};
use crate::layout::{conflicting, LinearLayout, PageId, PageSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{vertices} vertices exceed the enumeration cap of {cap}")]
    TooManyVertices { vertices: usize, cap: usize },
    #[error("enumeration supports at most two pages, got {0}")]
    TooManyPages(usize),
}

#[derive(Clone, Copy, Debug)]
pub struct EnumerateOptions {
    pub vertex_cap: usize,
    /// Yield only one of each layout and its reversal: the one whose first
    /// vertex has a smaller id than its last.
    pub modulo_reversal: bool,
}

impl Default for EnumerateOptions {
    fn default() -> EnumerateOptions {
        EnumerateOptions {
            vertex_cap: 7,
            modulo_reversal: true,
        }
    }
}

/// Lazily walks all vertex orders and, per order, all valid page assignments.
pub struct LayoutStream {
    edges: Vec<Edge>,
    pages: Vec<PageId>,
    modulo_reversal: bool,
    order: Vec<Vertex>,
    position: Vec<usize>,
    spans: Vec<(usize, usize)>,
    /// Next page index to try at each depth of the edge assignment.
    choice: Vec<usize>,
    depth: usize,
    resume: bool,
    orders_done: bool,
    orders_visited: u64,
}

pub fn enumerate_all(graph: &Graph, spec: PageSpec, opts: EnumerateOptions) -> Result<LayoutStream, OracleError> {
    let n = graph.vertex_count();
    if n > opts.vertex_cap {
        return Err(OracleError::TooManyVertices {
            vertices: n,
            cap: opts.vertex_cap,
        });
    }
    if spec.page_count() > 2 {
        return Err(OracleError::TooManyPages(spec.page_count()));
    }
    let edges: Vec<Edge> = graph.edges().collect();
    let mut stream = LayoutStream {
        choice: vec![0; edges.len()],
        spans: vec![(0, 0); edges.len()],
        edges,
        pages: spec.pages().collect(),
        modulo_reversal: opts.modulo_reversal,
        order: (0..n).collect(),
        position: (0..n).collect(),
        depth: 0,
        resume: false,
        orders_done: false,
        orders_visited: 0,
    };
    stream.start_order();
    Ok(stream)
}

impl LayoutStream {
    /// Vertex orders whose page assignments were (or are being) searched.
    pub fn orders_visited(&self) -> u64 {
        self.orders_visited
    }

    fn canonical(&self) -> bool {
        !self.modulo_reversal || self.order.first() <= self.order.last()
    }

    fn start_order(&mut self) {
        while !self.canonical() {
            if !self.next_order() {
                self.orders_done = true;
                return;
            }
        }
        for (rank, &v) in self.order.iter().enumerate() {
            self.position[v] = rank;
        }
        for (span, e) in self.spans.iter_mut().zip(&self.edges) {
            let (a, b) = (self.position[e.u()], self.position[e.v()]);
            *span = (a.min(b), a.max(b));
        }
        self.choice.fill(0);
        self.depth = 0;
        self.resume = false;
        self.orders_visited += 1;
    }

    /// Lexicographic successor; false once the last order was reached.
    fn next_order(&mut self) -> bool {
        let o = &mut self.order;
        let Some(i) = (1..o.len()).rev().find(|&i| o[i - 1] < o[i]) else {
            return false;
        };
        let j = (i..o.len()).rev().find(|&j| o[j] > o[i - 1]).unwrap();
        o.swap(i - 1, j);
        o[i..].reverse();
        true
    }

    fn fits(&self, d: usize, p: usize) -> bool {
        let page = self.pages[p];
        (0..d).all(|j| {
            self.choice[j] != p
                || self.edges[j].shares_endpoint(self.edges[d])
                || !conflicting(page, self.spans[j], self.spans[d])
        })
    }

    /// Advances to the next valid assignment for the current order.
    fn next_assignment(&mut self) -> bool {
        let m = self.edges.len();
        loop {
            if self.depth == m {
                if !self.resume {
                    self.resume = true;
                    return true;
                }
                self.resume = false;
                if m == 0 {
                    return false;
                }
                self.depth -= 1;
                self.choice[self.depth] += 1;
                continue;
            }
            let d = self.depth;
            if self.choice[d] >= self.pages.len() {
                self.choice[d] = 0;
                if d == 0 {
                    return false;
                }
                self.depth -= 1;
                self.choice[self.depth] += 1;
            } else if self.fits(d, self.choice[d]) {
                self.depth += 1;
            } else {
                self.choice[d] += 1;
            }
        }
    }

    fn current(&self) -> LinearLayout {
        let pages: BTreeMap<Edge, PageId> = self
            .edges
            .iter()
            .zip(&self.choice)
            .map(|(&e, &p)| (e, self.pages[p]))
            .collect();
        LinearLayout::new(self.order.clone(), pages).expect("enumerated order is a permutation")
    }
}

impl Iterator for LayoutStream {
    type Item = LinearLayout;

    fn next(&mut self) -> Option<LinearLayout> {
        while !self.orders_done {
            if self.next_assignment() {
                return Some(self.current());
            }
            if !self.next_order() {
                self.orders_done = true;
                break;
            }
            self.start_order();
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::is_valid;

    fn count(g: &Graph, s: u32, q: u32, modulo: bool) -> usize {
        let opts = EnumerateOptions {
            modulo_reversal: modulo,
            ..Default::default()
        };
        enumerate_all(g, PageSpec::new(s, q).unwrap(), opts).unwrap().count()
    }

    #[test]
    fn single_edge_has_one_canonical_layout() {
        let g = Graph::path(2);
        assert_eq!(count(&g, 1, 0, true), 1);
        assert_eq!(count(&g, 1, 0, false), 2);
    }

    #[test]
    fn k23_has_no_one_stack_layout() {
        assert_eq!(count(&Graph::complete_bipartite(2, 3), 1, 0, false), 0);
    }

    #[test]
    fn every_yield_is_valid_and_distinct() {
        let g = Graph::cycle(4);
        let spec = PageSpec::new(1, 1).unwrap();
        let all: Vec<_> = enumerate_all(&g, spec, EnumerateOptions::default()).unwrap().collect();
        for l in &all {
            assert!(is_valid(&g, l, spec).unwrap());
        }
        let distinct: std::collections::BTreeSet<_> =
            all.iter().map(|l| (l.order().to_vec(), l.pages().clone())).collect();
        assert_eq!(distinct.len(), all.len());
        // 12 canonical orders, each with 16 page assignments minus invalid ones
        assert!(!all.is_empty());
    }

    #[test]
    fn path_pages_are_unconstrained() {
        // every order of P3, every assignment of 2 edges to 2 pages
        assert_eq!(count(&Graph::path(3), 1, 1, false), 6 * 4);
        assert_eq!(count(&Graph::path(3), 1, 1, true), 3 * 4);
    }

    #[test]
    fn caps_are_enforced() {
        let g = Graph::path(8);
        assert!(matches!(
            enumerate_all(&g, PageSpec::MIXED, EnumerateOptions::default()),
            Err(OracleError::TooManyVertices { vertices: 8, cap: 7 })
        ));
        assert!(matches!(
            enumerate_all(
                &Graph::path(3),
                PageSpec::new(2, 1).unwrap(),
                EnumerateOptions::default()
            ),
            Err(OracleError::TooManyPages(3))
        ));
    }

    #[test]
    fn edgeless_graph() {
        assert_eq!(count(&Graph::empty(3), 1, 0, false), 6);
        assert_eq!(count(&Graph::empty(0), 1, 0, false), 1);
    }

    #[test]
    fn exhaustion_visits_every_order() {
        let g = Graph::complete_bipartite(2, 3);
        let spec = PageSpec::new(1, 0).unwrap();
        let full = EnumerateOptions {
            modulo_reversal: false,
            ..Default::default()
        };
        let mut s = enumerate_all(&g, spec, full).unwrap();
        assert!(s.next().is_none());
        assert_eq!(s.orders_visited(), 120);
        let mut s = enumerate_all(&g, spec, EnumerateOptions::default()).unwrap();
        assert!(s.next().is_none());
        assert_eq!(s.orders_visited(), 60);
    }
}

//! Linear layouts: a vertex order plus an assignment of edges to stack and
//! queue pages.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{Edge, Graph, TwoTree, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PageKind {
    Stack,
    Queue,
}

impl PageKind {
    pub fn letter(self) -> char {
        match self {
            PageKind::Stack => 'S',
            PageKind::Queue => 'Q',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PageId {
    pub kind: PageKind,
    pub index: u32,
}

impl PageId {
    pub const S0: PageId = PageId::stack(0);
    pub const Q0: PageId = PageId::queue(0);

    pub const fn stack(index: u32) -> PageId {
        PageId {
            kind: PageKind::Stack,
            index,
        }
    }

    pub const fn queue(index: u32) -> PageId {
        PageId {
            kind: PageKind::Queue,
            index,
        }
    }

    pub fn is_stack(self) -> bool {
        self.kind == PageKind::Stack
    }

    pub fn is_queue(self) -> bool {
        self.kind == PageKind::Queue
    }
}

impl fmt::Display for PageId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.letter(), self.index)
    }
}

impl FromStr for PageId {
    type Err = String;

    fn from_str(s: &str) -> Result<PageId, String> {
        let mut chars = s.chars();
        let kind = match chars.next() {
            Some('S') => PageKind::Stack,
            Some('Q') => PageKind::Queue,
            _ => return Err(format!("page `{s}` must start with S or Q")),
        };
        let index = chars
            .as_str()
            .parse::<u32>()
            .map_err(|_| format!("page `{s}` has no valid index"))?;
        Ok(PageId { kind, index })
    }
}

/// Number of stack and queue pages available to a layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PageSpec {
    stacks: u32,
    queues: u32,
}

impl PageSpec {
    pub const MIXED: PageSpec = PageSpec { stacks: 1, queues: 1 };

    pub fn new(stacks: u32, queues: u32) -> Result<PageSpec, LayoutError> {
        if stacks + queues == 0 {
            return Err(LayoutError::NoPages);
        }
        Ok(PageSpec { stacks, queues })
    }

    pub fn stacks(self) -> u32 {
        self.stacks
    }

    pub fn queues(self) -> u32 {
        self.queues
    }

    pub fn page_count(self) -> usize {
        (self.stacks + self.queues) as usize
    }

    pub fn contains(self, page: PageId) -> bool {
        match page.kind {
            PageKind::Stack => page.index < self.stacks,
            PageKind::Queue => page.index < self.queues,
        }
    }

    /// Stack pages first, then queue pages.
    pub fn pages(self) -> impl Iterator<Item = PageId> {
        (0..self.stacks)
            .map(PageId::stack)
            .chain((0..self.queues).map(PageId::queue))
    }
}

impl fmt::Display for PageSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-stack {}-queue", self.stacks, self.queues)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LayoutError {
    #[error("a layout needs at least one page")]
    NoPages,
    #[error("order is not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("order has {order} vertices but the graph has {graph}")]
    VertexCountMismatch { order: usize, graph: usize },
    #[error("edge {0} has no page")]
    MissingPage(Edge),
    #[error("page assigned to {0}, which is not an edge of the graph")]
    ExtraPage(Edge),
    #[error("edge {edge} is on page {page}, outside the {spec} spec")]
    PageOutOfSpec { edge: Edge, page: PageId, spec: PageSpec },
    #[error("edges {0} and {1} share an endpoint")]
    SharedEndpoint(Edge, Edge),
    #[error("vertex {0} is not in the layout")]
    UnknownVertex(Vertex),
    #[error("vertex {0} is a base-edge endpoint, not an attachment")]
    NotAnAttachment(Vertex),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearLayout {
    order: Vec<Vertex>,
    position: Vec<usize>,
    pages: BTreeMap<Edge, PageId>,
}

impl LinearLayout {
    pub fn new(order: Vec<Vertex>, pages: BTreeMap<Edge, PageId>) -> Result<LinearLayout, LayoutError> {
        let n = order.len();
        let mut position = vec![usize::MAX; n];
        for (rank, &v) in order.iter().enumerate() {
            if v >= n || position[v] != usize::MAX {
                return Err(LayoutError::NotAPermutation(n));
            }
            position[v] = rank;
        }
        Ok(LinearLayout { order, position, pages })
    }

    /// All edges of `graph` on `page`, vertices in id order.
    pub fn uniform(graph: &Graph, page: PageId) -> LinearLayout {
        let order = (0..graph.vertex_count()).collect();
        LinearLayout::new(order, graph.edges().map(|e| (e, page)).collect()).unwrap()
    }

    pub fn order(&self) -> &[Vertex] {
        &self.order
    }

    pub fn vertex_count(&self) -> usize {
        self.order.len()
    }

    pub fn position(&self, v: Vertex) -> usize {
        self.position[v]
    }

    pub fn precedes(&self, a: Vertex, b: Vertex) -> bool {
        self.position[a] < self.position[b]
    }

    pub fn page(&self, e: Edge) -> Option<PageId> {
        self.pages.get(&e).copied()
    }

    pub fn pages(&self) -> &BTreeMap<Edge, PageId> {
        &self.pages
    }

    pub fn set_page(&mut self, e: Edge, page: PageId) {
        self.pages.insert(e, page);
    }

    /// The same pages with the order read right to left.
    pub fn reversed(&self) -> LinearLayout {
        let order = self.order.iter().rev().copied().collect();
        LinearLayout::new(order, self.pages.clone()).unwrap()
    }

    /// Endpoint positions `(left, right)` of an edge.
    pub fn span(&self, e: Edge) -> (usize, usize) {
        let (a, b) = (self.position[e.u()], self.position[e.v()]);
        if a < b {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// Checks that the layout covers exactly the graph's vertices and edges
    /// with pages inside `spec`.
    pub fn check_structure(&self, graph: &Graph, spec: PageSpec) -> Result<(), LayoutError> {
        if self.order.len() != graph.vertex_count() {
            return Err(LayoutError::VertexCountMismatch {
                order: self.order.len(),
                graph: graph.vertex_count(),
            });
        }
        for e in graph.edges() {
            match self.pages.get(&e) {
                None => return Err(LayoutError::MissingPage(e)),
                Some(&page) if !spec.contains(page) => return Err(LayoutError::PageOutOfSpec { edge: e, page, spec }),
                Some(_) => {}
            }
        }
        if self.pages.len() != graph.edge_count() {
            let extra = self.pages.keys().find(|e| !graph.contains_edge(**e)).unwrap();
            return Err(LayoutError::ExtraPage(*extra));
        }
        Ok(())
    }
}

pub(crate) fn spans_cross((a1, b1): (usize, usize), (a2, b2): (usize, usize)) -> bool {
    (a1 < a2 && a2 < b1 && b1 < b2) || (a2 < a1 && a1 < b2 && b2 < b1)
}

pub(crate) fn spans_nest((a1, b1): (usize, usize), (a2, b2): (usize, usize)) -> bool {
    (a1 < a2 && b2 < b1) || (a2 < a1 && b1 < b2)
}

fn independent(e: Edge, f: Edge) -> Result<(), LayoutError> {
    if e.shares_endpoint(f) {
        Err(LayoutError::SharedEndpoint(e, f))
    } else {
        Ok(())
    }
}

/// True iff the endpoints of two independent edges interleave.
pub fn crosses(e: Edge, f: Edge, layout: &LinearLayout) -> Result<bool, LayoutError> {
    independent(e, f)?;
    Ok(spans_cross(layout.span(e), layout.span(f)))
}

/// True iff the span of one independent edge strictly contains the other.
pub fn nests(e: Edge, f: Edge, layout: &LinearLayout) -> Result<bool, LayoutError> {
    independent(e, f)?;
    Ok(spans_nest(layout.span(e), layout.span(f)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ConflictKind {
    /// Two edges of one stack cross.
    Crossing,
    /// Two edges of one queue nest.
    Nesting,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Conflict {
    pub page: PageId,
    pub kind: ConflictKind,
    pub first: Edge,
    pub second: Edge,
}

impl fmt::Display for Conflict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            ConflictKind::Crossing => "cross",
            ConflictKind::Nesting => "nest",
        };
        write!(f, "{} {} {} {}", self.page, self.first, self.second, what)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub conflicts: Vec<Conflict>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.conflicts.is_empty()
    }
}

fn page_buckets(layout: &LinearLayout) -> BTreeMap<PageId, Vec<Edge>> {
    let mut buckets: BTreeMap<PageId, Vec<Edge>> = BTreeMap::new();
    for (&e, &p) in &layout.pages {
        buckets.entry(p).or_default().push(e);
    }
    buckets
}

pub(crate) fn conflicting(page: PageId, a: (usize, usize), b: (usize, usize)) -> bool {
    match page.kind {
        PageKind::Stack => spans_cross(a, b),
        PageKind::Queue => spans_nest(a, b),
    }
}

/// Lists every same-page crossing (stack) or nesting (queue) pair.
///
/// Adjacent edges never conflict. Structural problems (coverage, page indices)
/// are reported as errors rather than conflicts.
pub fn validate(graph: &Graph, layout: &LinearLayout, spec: PageSpec) -> Result<ValidationReport, LayoutError> {
    layout.check_structure(graph, spec)?;
    let mut conflicts = Vec::new();
    for (page, edges) in page_buckets(layout) {
        let spans: Vec<_> = edges.iter().map(|&e| layout.span(e)).collect();
        for i in 0..edges.len() {
            for j in i + 1..edges.len() {
                if conflicting(page, spans[i], spans[j]) {
                    conflicts.push(Conflict {
                        page,
                        kind: match page.kind {
                            PageKind::Stack => ConflictKind::Crossing,
                            PageKind::Queue => ConflictKind::Nesting,
                        },
                        first: edges[i],
                        second: edges[j],
                    });
                }
            }
        }
    }
    Ok(ValidationReport { conflicts })
}

/// Short-circuiting validity check.
pub fn is_valid(graph: &Graph, layout: &LinearLayout, spec: PageSpec) -> Result<bool, LayoutError> {
    layout.check_structure(graph, spec)?;
    Ok(pages_conflict_free(layout))
}

/// Validity of the pages alone, assuming the structure was already checked.
pub(crate) fn pages_conflict_free(layout: &LinearLayout) -> bool {
    page_buckets(layout).into_iter().all(|(page, edges)| {
        let spans: Vec<_> = edges.iter().map(|&e| layout.span(e)).collect();
        (0..spans.len()).all(|i| (i + 1..spans.len()).all(|j| !conflicting(page, spans[i], spans[j])))
    })
}

fn spans_on(layout: &LinearLayout, page: PageId) -> Vec<(usize, usize)> {
    layout
        .pages
        .iter()
        .filter(|(_, &p)| p == page)
        .map(|(&e, _)| layout.span(e))
        .collect()
}

/// Length of the longest strictly increasing subsequence.
fn longest_increasing(values: impl IntoIterator<Item = usize>) -> usize {
    let mut tails: Vec<usize> = Vec::new();
    for x in values {
        let at = tails.partition_point(|&t| t < x);
        if at == tails.len() {
            tails.push(x);
        } else {
            tails[at] = x;
        }
    }
    tails.len()
}

/// Largest set of pairwise-nesting edges on `page`.
pub fn max_rainbow(layout: &LinearLayout, page: PageId) -> usize {
    let mut spans = spans_on(layout, page);
    // Sorted by left end; equal left ends get ascending right ends so that a
    // strictly decreasing chain of right ends never takes two of them.
    spans.sort();
    let n = layout.vertex_count();
    longest_increasing(spans.iter().map(|&(_, r)| n - r))
}

/// Largest set of pairwise-crossing edges on `page`.
pub fn max_twist(layout: &LinearLayout, page: PageId) -> usize {
    let mut spans = spans_on(layout, page);
    if spans.is_empty() {
        return 0;
    }
    spans.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
    // A twist's edges all straddle the gap just right of its last left end.
    let n = layout.vertex_count();
    (0..n.saturating_sub(1))
        .map(|gap| longest_increasing(spans.iter().filter(|&&(l, r)| l <= gap && gap < r).map(|&(_, r)| r)))
        .max()
        .unwrap_or(0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AttachmentClass {
    StackAttachment,
    QueueAttachment,
    MixedAttachment,
}

impl AttachmentClass {
    pub fn from_kinds(a: PageKind, b: PageKind) -> AttachmentClass {
        match (a, b) {
            (PageKind::Stack, PageKind::Stack) => AttachmentClass::StackAttachment,
            (PageKind::Queue, PageKind::Queue) => AttachmentClass::QueueAttachment,
            _ => AttachmentClass::MixedAttachment,
        }
    }
}

/// Classifies an attached vertex by the page kinds of its two attachment edges.
pub fn classify_attachment(tree: &TwoTree, layout: &LinearLayout, v: Vertex) -> Result<AttachmentClass, LayoutError> {
    if v >= tree.graph().vertex_count() {
        return Err(LayoutError::UnknownVertex(v));
    }
    let parent = tree.parent_edge(v).ok_or(LayoutError::NotAnAttachment(v))?;
    let kind = |end: Vertex| {
        let e = Edge::new(v, end);
        layout.page(e).map(|p| p.kind).ok_or(LayoutError::MissingPage(e))
    };
    Ok(AttachmentClass::from_kinds(kind(parent.u())?, kind(parent.v())?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GklParams;

    fn layout(order: &[Vertex], pages: &[((Vertex, Vertex), PageId)]) -> LinearLayout {
        LinearLayout::new(
            order.to_vec(),
            pages.iter().map(|&((a, b), p)| (Edge::new(a, b), p)).collect(),
        )
        .unwrap()
    }

    // a,b,c,d = 0,1,2,3
    #[test]
    fn crossing_and_nesting_examples() {
        let l = layout(&[0, 1, 2, 3], &[]);
        let e = |a, b| Edge::new(a, b);
        assert!(crosses(e(0, 2), e(1, 3), &l).unwrap());
        assert!(!crosses(e(0, 1), e(2, 3), &l).unwrap());
        assert!(!crosses(e(0, 3), e(1, 2), &l).unwrap());
        assert!(nests(e(0, 3), e(1, 2), &l).unwrap());
        assert!(!nests(e(0, 2), e(1, 3), &l).unwrap());
        assert!(!nests(e(0, 1), e(2, 3), &l).unwrap());
        assert_eq!(
            crosses(e(0, 1), e(1, 2), &l),
            Err(LayoutError::SharedEndpoint(e(0, 1), e(1, 2)))
        );
        assert!(nests(e(0, 2), e(0, 3), &l).is_err());
    }

    #[test]
    fn order_must_be_a_permutation() {
        assert_eq!(
            LinearLayout::new(vec![0, 0, 1], BTreeMap::new()),
            Err(LayoutError::NotAPermutation(3))
        );
        assert!(LinearLayout::new(vec![0, 3], BTreeMap::new()).is_err());
    }

    #[test]
    fn single_edge_is_always_valid() {
        let g = Graph::path(2);
        for page in [PageId::S0, PageId::Q0] {
            for order in [vec![0, 1], vec![1, 0]] {
                let l = LinearLayout::new(order, [(Edge::new(0, 1), page)].into()).unwrap();
                assert!(validate(&g, &l, PageSpec::MIXED).unwrap().is_valid());
            }
        }
    }

    #[test]
    fn one_queue_reports_the_single_nesting_pair() {
        let g = Graph::from_edges(4, [(0, 2), (1, 3), (0, 3), (1, 2)]).unwrap();
        let l = LinearLayout::uniform(&g, PageId::Q0);
        let report = validate(&g, &l, PageSpec::new(0, 1).unwrap()).unwrap();
        assert_eq!(report.conflicts.len(), 1);
        let c = report.conflicts[0];
        assert_eq!(c.kind, ConflictKind::Nesting);
        assert_eq!((c.first, c.second), (Edge::new(0, 3), Edge::new(1, 2)));
        assert!(!is_valid(&g, &l, PageSpec::new(0, 1).unwrap()).unwrap());
    }

    #[test]
    fn structural_errors_are_not_conflicts() {
        let g = Graph::path(3);
        let l = layout(&[0, 1, 2], &[((0, 1), PageId::S0)]);
        assert_eq!(
            validate(&g, &l, PageSpec::MIXED),
            Err(LayoutError::MissingPage(Edge::new(1, 2)))
        );
        let l = layout(&[0, 1, 2], &[((0, 1), PageId::S0), ((1, 2), PageId::stack(1))]);
        assert!(matches!(
            validate(&g, &l, PageSpec::MIXED),
            Err(LayoutError::PageOutOfSpec { .. })
        ));
        let l = layout(
            &[0, 1, 2],
            &[((0, 1), PageId::S0), ((1, 2), PageId::S0), ((0, 2), PageId::S0)],
        );
        assert_eq!(
            validate(&g, &l, PageSpec::MIXED),
            Err(LayoutError::ExtraPage(Edge::new(0, 2)))
        );
        let l = layout(&[0, 1], &[]);
        assert!(matches!(
            validate(&g, &l, PageSpec::MIXED),
            Err(LayoutError::VertexCountMismatch { .. })
        ));
    }

    #[test]
    fn three_rainbow_and_three_twist() {
        // a..f = 0..5
        let rainbow = layout(
            &[0, 1, 2, 3, 4, 5],
            &[((0, 5), PageId::Q0), ((1, 4), PageId::Q0), ((2, 3), PageId::Q0)],
        );
        assert_eq!(max_rainbow(&rainbow, PageId::Q0), 3);
        assert_eq!(max_twist(&rainbow, PageId::Q0), 1);
        let twist = layout(
            &[0, 1, 2, 3, 4, 5],
            &[((0, 3), PageId::S0), ((1, 4), PageId::S0), ((2, 5), PageId::S0)],
        );
        assert_eq!(max_twist(&twist, PageId::S0), 3);
        assert_eq!(max_rainbow(&twist, PageId::S0), 1);
        assert_eq!(max_twist(&twist, PageId::Q0), 0);
        assert_eq!(max_rainbow(&twist, PageId::Q0), 0);
    }

    #[test]
    fn adjacent_edges_form_no_twist() {
        let star = layout(
            &[0, 1, 2, 3],
            &[((0, 2), PageId::S0), ((0, 3), PageId::S0), ((1, 3), PageId::S0)],
        );
        // (0,2) and (1,3) cross; (0,3) shares endpoints with both
        assert_eq!(max_twist(&star, PageId::S0), 2);
        assert_eq!(max_rainbow(&star, PageId::S0), 1);
    }

    #[test]
    fn attachment_classes() {
        let tree = crate::graph::build_gkl(GklParams::new(2, 1).unwrap(), None).unwrap();
        let mut l = LinearLayout::uniform(tree.graph(), PageId::S0);
        assert_eq!(classify_attachment(&tree, &l, 2), Ok(AttachmentClass::StackAttachment));
        l.set_page(Edge::new(0, 2), PageId::Q0);
        assert_eq!(classify_attachment(&tree, &l, 2), Ok(AttachmentClass::MixedAttachment));
        l.set_page(Edge::new(1, 2), PageId::Q0);
        assert_eq!(classify_attachment(&tree, &l, 2), Ok(AttachmentClass::QueueAttachment));
        assert_eq!(classify_attachment(&tree, &l, 0), Err(LayoutError::NotAnAttachment(0)));
    }

    #[test]
    fn page_ids_parse() {
        assert_eq!("S0".parse::<PageId>(), Ok(PageId::S0));
        assert_eq!("Q12".parse::<PageId>(), Ok(PageId::queue(12)));
        assert!("X1".parse::<PageId>().is_err());
        assert!("S".parse::<PageId>().is_err());
        assert_eq!(PageId::queue(3).to_string(), "Q3");
    }
}

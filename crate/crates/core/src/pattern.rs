//! Detection of ordered, paged substructures: crossings, rainbows, smiley
//! faces and the seven-vertex patterns P1, P1a and P2.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::graph::{Edge, Graph, Vertex};
use crate::layout::{spans_cross, spans_nest, LinearLayout, PageId, PageKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WitnessKind {
    Crossing,
    Rainbow(usize),
    Twist(usize),
    SmileyFace,
    PatternP1,
    PatternP1a,
    PatternP2,
}

/// Witness kinds without size parameters; used for vocabularies and histograms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Category {
    Crossing,
    Rainbow,
    Twist,
    SmileyFace,
    P1,
    P1a,
    P2,
}

impl Category {
    pub const ALL: [Category; 7] = [
        Category::Crossing,
        Category::Rainbow,
        Category::Twist,
        Category::SmileyFace,
        Category::P1,
        Category::P1a,
        Category::P2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Category::Crossing => "Crossing",
            Category::Rainbow => "Rainbow",
            Category::Twist => "Twist",
            Category::SmileyFace => "SmileyFace",
            Category::P1 => "P1",
            Category::P1a => "P1a",
            Category::P2 => "P2",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl WitnessKind {
    pub fn category(self) -> Category {
        match self {
            WitnessKind::Crossing => Category::Crossing,
            WitnessKind::Rainbow(_) => Category::Rainbow,
            WitnessKind::Twist(_) => Category::Twist,
            WitnessKind::SmileyFace => Category::SmileyFace,
            WitnessKind::PatternP1 => Category::P1,
            WitnessKind::PatternP1a => Category::P1a,
            WitnessKind::PatternP2 => Category::P2,
        }
    }
}

impl fmt::Display for WitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessKind::Rainbow(k) => write!(f, "Rainbow({k})"),
            WitnessKind::Twist(k) => write!(f, "Twist({k})"),
            other => f.write_str(other.category().name()),
        }
    }
}

/// A concrete forbidden or forcing structure.
///
/// For templates, `vertices` lists the template slots in order (`a,b,u,v,c,d`
/// for a smiley, `p1..p7` for patterns); for crossings and rainbows it lists
/// the endpoints left to right.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Witness {
    pub kind: WitnessKind,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<(Edge, PageId)>,
}

impl Witness {
    /// Two same-page edges that cross (stack) or nest (queue).
    pub fn conflict(layout: &LinearLayout, page: PageId, e: Edge, f: Edge) -> Witness {
        let kind = match page.kind {
            PageKind::Stack => WitnessKind::Crossing,
            PageKind::Queue => WitnessKind::Rainbow(2),
        };
        let mut vertices = vec![e.u(), e.v(), f.u(), f.v()];
        vertices.sort_by_key(|&v| layout.position(v));
        Witness {
            kind,
            vertices,
            edges: vec![(e, page), (f, page)],
        }
    }

    /// Re-checks the witness against its defining order and page template.
    pub fn revalidate(&self, layout: &LinearLayout) -> bool {
        let kind_of = |e: Edge| layout.page(e).map(|p| p.kind);
        if let Some(t) = Template::for_kind(self.kind) {
            if self.vertices.len() != t.slots || self.edges.len() != t.edges.len() {
                return false;
            }
            let pos: Vec<usize> = self.vertices.iter().map(|&v| layout.position(v)).collect();
            let forward = pos.windows(2).all(|w| w[0] < w[1]);
            let backward = pos.windows(2).all(|w| w[0] > w[1]);
            if !(forward || (backward && t.reversible)) {
                return false;
            }
            return t.edges.iter().zip(&self.edges).all(|(&(i, j, kind), &(e, page))| {
                Edge::try_new(self.vertices[i], self.vertices[j]) == Some(e)
                    && page.kind == kind
                    && layout.page(e) == Some(page)
            });
        }
        let Some(&(_, page)) = self.edges.first() else {
            return false;
        };
        if self
            .edges
            .iter()
            .any(|&(e, p)| p != page || kind_of(e) != Some(page.kind) || layout.page(e) != Some(page))
        {
            return false;
        }
        let related = |a: Edge, b: Edge| match self.kind {
            WitnessKind::Crossing | WitnessKind::Twist(_) => spans_cross(layout.span(a), layout.span(b)),
            _ => spans_nest(layout.span(a), layout.span(b)),
        };
        let expected_len = match self.kind {
            WitnessKind::Crossing => 2,
            WitnessKind::Rainbow(k) | WitnessKind::Twist(k) => k,
            _ => unreachable!(),
        };
        self.edges.len() == expected_len
            && self.edges.iter().enumerate().all(|(i, &(a, _))| {
                self.edges[i + 1..]
                    .iter()
                    .all(|&(b, _)| !a.shares_endpoint(b) && related(a, b))
            })
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        for v in &self.vertices {
            write!(f, " {v}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PatternKind {
    P1,
    P1a,
    P2,
}

impl PatternKind {
    pub const ALL: [PatternKind; 3] = [PatternKind::P1, PatternKind::P1a, PatternKind::P2];

    fn template(self) -> &'static Template {
        match self {
            PatternKind::P1 => &P1,
            PatternKind::P1a => &P1A,
            PatternKind::P2 => &P2,
        }
    }
}

/// Slot-indexed edge list `(i, j, kind)` with `i < j`; slots are matched in
/// increasing order along the layout (and, when `reversible`, also decreasing).
struct Template {
    kind: WitnessKind,
    slots: usize,
    edges: &'static [(usize, usize, PageKind)],
    reversible: bool,
}

use PageKind::{Queue as Q, Stack as S};

// <a,b,u,v,c,d>. The template maps to itself under reversal, so matching one
// direction finds every occurrence.
static SMILEY: Template = Template {
    kind: WitnessKind::SmileyFace,
    slots: 6,
    edges: &[(0, 1, Q), (4, 5, Q), (0, 5, Q), (2, 3, S)],
    reversible: false,
};

static P1: Template = Template {
    kind: WitnessKind::PatternP1,
    slots: 7,
    edges: &[(0, 2, S), (0, 5, S), (3, 4, S), (1, 6, Q)],
    reversible: true,
};

static P1A: Template = Template {
    kind: WitnessKind::PatternP1a,
    slots: 7,
    edges: &[(1, 2, S), (1, 5, S), (3, 4, S), (0, 6, Q)],
    reversible: true,
};

static P2: Template = Template {
    kind: WitnessKind::PatternP2,
    slots: 7,
    edges: &[(0, 6, S), (1, 3, S), (1, 4, S), (0, 5, Q), (2, 6, Q)],
    reversible: true,
};

impl Template {
    fn for_kind(kind: WitnessKind) -> Option<&'static Template> {
        match kind {
            WitnessKind::SmileyFace => Some(&SMILEY),
            WitnessKind::PatternP1 => Some(&P1),
            WitnessKind::PatternP1a => Some(&P1A),
            WitnessKind::PatternP2 => Some(&P2),
            _ => None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatternError {
    #[error("template scan over {vertices} vertices exceeds the budget of {budget}")]
    ScanTooLarge { vertices: usize, budget: usize },
}

/// Template scanner with a hard cap on the number of vertices it will look at.
#[derive(Clone, Copy, Debug)]
pub struct Detector {
    pub vertex_budget: usize,
}

impl Default for Detector {
    fn default() -> Detector {
        Detector { vertex_budget: 64 }
    }
}

/// Vertices in scope, ordered along one direction of the layout, with
/// per-kind adjacency restricted to the scope.
struct OrientedView {
    rank: Vec<usize>,
    seq: Vec<Vertex>,
    by_kind: [Vec<Vec<Vertex>>; 2],
    page_of: std::collections::HashMap<Edge, PageId>,
}

fn kind_index(kind: PageKind) -> usize {
    match kind {
        PageKind::Stack => 0,
        PageKind::Queue => 1,
    }
}

impl OrientedView {
    fn new(graph: &Graph, layout: &LinearLayout, scope: &[bool], reversed: bool) -> OrientedView {
        let n = layout.vertex_count();
        let rank: Vec<usize> = (0..n)
            .map(|v| {
                if reversed {
                    n - 1 - layout.position(v)
                } else {
                    layout.position(v)
                }
            })
            .collect();
        let mut seq: Vec<Vertex> = (0..n).filter(|&v| scope[v]).collect();
        seq.sort_by_key(|&v| rank[v]);
        let mut by_kind = [vec![Vec::new(); n], vec![Vec::new(); n]];
        let mut page_of = std::collections::HashMap::new();
        for e in graph.edges() {
            let (a, b) = e.endpoints();
            if !(scope[a] && scope[b]) {
                continue;
            }
            let Some(page) = layout.page(e) else { continue };
            let k = kind_index(page.kind);
            by_kind[k][a].push(b);
            by_kind[k][b].push(a);
            page_of.insert(e, page);
        }
        for lists in &mut by_kind {
            for list in lists.iter_mut() {
                list.sort_by_key(|&v| rank[v]);
            }
        }
        OrientedView {
            rank,
            seq,
            by_kind,
            page_of,
        }
    }

    fn kind_of(&self, a: Vertex, b: Vertex) -> Option<PageKind> {
        self.page_of.get(&Edge::new(a, b)).map(|p| p.kind)
    }

    fn matches(&self, t: &Template, out: &mut BTreeSet<Witness>) {
        let mut slots = Vec::with_capacity(t.slots);
        self.extend(t, &mut slots, out);
    }

    fn extend(&self, t: &Template, slots: &mut Vec<Vertex>, out: &mut BTreeSet<Witness>) {
        let j = slots.len();
        if j == t.slots {
            out.insert(Witness {
                kind: t.kind,
                vertices: slots.clone(),
                edges: t
                    .edges
                    .iter()
                    .map(|&(a, b, _)| {
                        let e = Edge::new(slots[a], slots[b]);
                        (e, self.page_of[&e])
                    })
                    .collect(),
            });
            return;
        }
        let min_rank = slots.last().map(|&v| self.rank[v] + 1).unwrap_or(0);
        let anchor = t.edges.iter().find(|&&(_, b, _)| b == j);
        let candidates: &[Vertex] = match anchor {
            Some(&(i, _, kind)) => &self.by_kind[kind_index(kind)][slots[i]],
            None => &self.seq,
        };
        let start = candidates.partition_point(|&v| self.rank[v] < min_rank);
        for &x in &candidates[start..] {
            let fits = t
                .edges
                .iter()
                .filter(|&&(_, b, _)| b == j)
                .all(|&(i, _, kind)| self.kind_of(slots[i], x) == Some(kind));
            if fits {
                slots.push(x);
                self.extend(t, slots, out);
                slots.pop();
            }
        }
    }
}

impl Detector {
    fn scope(&self, layout: &LinearLayout, restrict_to: Option<&BTreeSet<Vertex>>) -> Result<Vec<bool>, PatternError> {
        let n = layout.vertex_count();
        let scope: Vec<bool> = match restrict_to {
            Some(set) => (0..n).map(|v| set.contains(&v)).collect(),
            None => vec![true; n],
        };
        let size = scope.iter().filter(|&&b| b).count();
        if size > self.vertex_budget {
            return Err(PatternError::ScanTooLarge {
                vertices: size,
                budget: self.vertex_budget,
            });
        }
        Ok(scope)
    }

    fn scan(
        &self,
        graph: &Graph,
        layout: &LinearLayout,
        t: &Template,
        restrict_to: Option<&BTreeSet<Vertex>>,
    ) -> Result<Vec<Witness>, PatternError> {
        let scope = self.scope(layout, restrict_to)?;
        let mut out = BTreeSet::new();
        OrientedView::new(graph, layout, &scope, false).matches(t, &mut out);
        if t.reversible {
            OrientedView::new(graph, layout, &scope, true).matches(t, &mut out);
        }
        Ok(out.into_iter().collect())
    }

    /// Every smiley face `<a,b,u,v,c,d>`, sorted canonically.
    pub fn find_smileys(
        &self,
        graph: &Graph,
        layout: &LinearLayout,
        restrict_to: Option<&BTreeSet<Vertex>>,
    ) -> Result<Vec<Witness>, PatternError> {
        self.scan(graph, layout, &SMILEY, restrict_to)
    }

    /// Every occurrence of `which` in either direction, sorted canonically.
    pub fn find_patterns(
        &self,
        graph: &Graph,
        layout: &LinearLayout,
        which: PatternKind,
        restrict_to: Option<&BTreeSet<Vertex>>,
    ) -> Result<Vec<Witness>, PatternError> {
        self.scan(graph, layout, which.template(), restrict_to)
    }
}

pub fn find_smileys(
    graph: &Graph,
    layout: &LinearLayout,
    restrict_to: Option<&BTreeSet<Vertex>>,
) -> Result<Vec<Witness>, PatternError> {
    Detector::default().find_smileys(graph, layout, restrict_to)
}

pub fn find_patterns(
    graph: &Graph,
    layout: &LinearLayout,
    which: PatternKind,
    restrict_to: Option<&BTreeSet<Vertex>>,
) -> Result<Vec<Witness>, PatternError> {
    Detector::default().find_patterns(graph, layout, which, restrict_to)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn build(n: usize, edges: &[(Vertex, Vertex, PageId)], order: Vec<Vertex>) -> (Graph, LinearLayout) {
        let g = Graph::from_edges(n, edges.iter().map(|&(a, b, _)| (a, b))).unwrap();
        let pages: BTreeMap<_, _> = edges.iter().map(|&(a, b, p)| (Edge::new(a, b), p)).collect();
        (g, LinearLayout::new(order, pages).unwrap())
    }

    const SQ: PageId = PageId::S0;
    const QQ: PageId = PageId::Q0;

    // a b u v c d = 0..5
    fn smiley() -> Vec<(Vertex, Vertex, PageId)> {
        vec![(0, 1, QQ), (4, 5, QQ), (0, 5, QQ), (2, 3, SQ)]
    }

    #[test]
    fn smiley_configuration_has_exactly_one_witness() {
        let (g, l) = build(6, &smiley(), (0..6).collect());
        let found = find_smileys(&g, &l, None).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].vertices, vec![0, 1, 2, 3, 4, 5]);
        assert!(found[0].revalidate(&l));

        let reversed = l.reversed();
        let found = find_smileys(&g, &reversed, None).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].vertices, vec![5, 4, 3, 2, 1, 0]);
    }

    #[test]
    fn smiley_needs_the_stack_edge() {
        let mut edges = smiley();
        edges[3].2 = QQ;
        let (g, l) = build(6, &edges, (0..6).collect());
        assert!(find_smileys(&g, &l, None).unwrap().is_empty());
    }

    #[test]
    fn no_queue_edges_no_smiley() {
        let edges: Vec<_> = smiley().into_iter().map(|(a, b, _)| (a, b, SQ)).collect();
        let (g, l) = build(6, &edges, (0..6).collect());
        assert!(find_smileys(&g, &l, None).unwrap().is_empty());
    }

    #[test]
    fn smiley_restricted_scope() {
        let (g, l) = build(6, &smiley(), (0..6).collect());
        let scope: BTreeSet<_> = [0, 1, 2, 3, 4].into();
        assert!(find_smileys(&g, &l, Some(&scope)).unwrap().is_empty());
    }

    // p1..p7 = 0..6
    fn p1() -> Vec<(Vertex, Vertex, PageId)> {
        vec![(0, 2, SQ), (0, 5, SQ), (3, 4, SQ), (1, 6, QQ)]
    }

    #[test]
    fn p1_is_found_in_both_directions() {
        let (g, l) = build(7, &p1(), (0..7).collect());
        let found = find_patterns(&g, &l, PatternKind::P1, None).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].vertices, (0..7).collect::<Vec<_>>());
        assert!(found[0].revalidate(&l));
        assert!(find_patterns(&g, &l, PatternKind::P1a, None).unwrap().is_empty());
        assert!(find_patterns(&g, &l, PatternKind::P2, None).unwrap().is_empty());

        let r = l.reversed();
        let found = find_patterns(&g, &r, PatternKind::P1, None).unwrap();
        assert_eq!(found.len(), 1);
        assert!(found[0].revalidate(&r));
    }

    #[test]
    fn p1a_and_p2_templates() {
        let p1a = vec![(1, 2, SQ), (1, 5, SQ), (3, 4, SQ), (0, 6, QQ)];
        let (g, l) = build(7, &p1a, (0..7).collect());
        assert_eq!(find_patterns(&g, &l, PatternKind::P1a, None).unwrap().len(), 1);
        let p2 = vec![(0, 6, SQ), (1, 3, SQ), (1, 4, SQ), (0, 5, QQ), (2, 6, QQ)];
        let (g, l) = build(7, &p2, (6..7).chain(0..6).collect());
        // p7 moved to the front: order broken
        assert!(find_patterns(&g, &l, PatternKind::P2, None).unwrap().is_empty());
        let l = LinearLayout::new((0..7).collect(), l.pages().clone()).unwrap();
        assert_eq!(find_patterns(&g, &l, PatternKind::P2, None).unwrap().len(), 1);
    }

    #[test]
    fn scan_budget_is_enforced() {
        let (g, l) = build(7, &p1(), (0..7).collect());
        let d = Detector { vertex_budget: 6 };
        assert_eq!(
            d.find_patterns(&g, &l, PatternKind::P1, None),
            Err(PatternError::ScanTooLarge { vertices: 7, budget: 6 })
        );
    }

    #[test]
    fn conflict_witness_revalidates() {
        let (_, l) = build(4, &[(0, 2, SQ), (1, 3, SQ)], vec![0, 1, 2, 3]);
        let w = Witness::conflict(&l, SQ, Edge::new(0, 2), Edge::new(1, 3));
        assert_eq!(w.kind, WitnessKind::Crossing);
        assert_eq!(w.vertices, vec![0, 1, 2, 3]);
        assert!(w.revalidate(&l));
        let w = Witness::conflict(&l, SQ, Edge::new(0, 2), Edge::new(1, 3));
        let moved = LinearLayout::new(vec![0, 2, 1, 3], l.pages().clone()).unwrap();
        assert!(!w.revalidate(&moved));
    }
}

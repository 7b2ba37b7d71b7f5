use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::graph::{Edge, Graph, Vertex};
use crate::layout::{conflicting, LinearLayout, PageId};
use crate::pattern::{Category, Detector, PatternError, PatternKind, Witness};

pub const MAX_SCAFFOLD_VERTICES: usize = 16;
pub const MAX_ATTACHMENTS_PER_SPEC: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PageConstraint {
    Free,
    ForcedStack,
    ForcedQueue,
    /// One stack-edge and one queue-edge, either way round.
    ForcedMixed,
    /// Mixed, with the stack-edge going to the given target endpoint.
    MixedStackAt(Vertex),
}

/// Open interval of the order between two already-declared vertices; a
/// missing bound is unbounded.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Interval {
    pub after: Option<Vertex>,
    pub before: Option<Vertex>,
}

/// Union of intervals; no interval means anywhere.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Region {
    pub intervals: Vec<Interval>,
}

impl Region {
    pub fn anywhere() -> Region {
        Region::default()
    }

    pub fn between(after: Vertex, before: Vertex) -> Region {
        Region {
            intervals: vec![Interval {
                after: Some(after),
                before: Some(before),
            }],
        }
    }

    pub fn before(v: Vertex) -> Region {
        Region {
            intervals: vec![Interval {
                after: None,
                before: Some(v),
            }],
        }
    }

    pub fn after(v: Vertex) -> Region {
        Region {
            intervals: vec![Interval {
                after: Some(v),
                before: None,
            }],
        }
    }

    pub fn or(mut self, other: Region) -> Region {
        self.intervals.extend(other.intervals);
        self
    }

    fn references(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.intervals.iter().flat_map(|i| i.after.into_iter().chain(i.before))
    }

    fn admits(&self, pos: &[usize], x: Vertex) -> bool {
        self.intervals.is_empty()
            || self
                .intervals
                .iter()
                .any(|i| i.after.is_none_or(|a| pos[a] < pos[x]) && i.before.is_none_or(|b| pos[x] < pos[b]))
    }
}

/// `count` new vertices, each adjacent to both endpoints of `target`.
#[derive(Clone, Debug)]
pub struct FreeAttachmentSpec {
    pub name: String,
    pub target: (Vertex, Vertex),
    pub count: usize,
    pub pages: PageConstraint,
    pub region: Region,
}

impl FreeAttachmentSpec {
    pub fn new(name: &str, target: (Vertex, Vertex), count: usize) -> FreeAttachmentSpec {
        FreeAttachmentSpec {
            name: name.to_string(),
            target,
            count,
            pages: PageConstraint::Free,
            region: Region::anywhere(),
        }
    }

    pub fn pages(mut self, pages: PageConstraint) -> FreeAttachmentSpec {
        self.pages = pages;
        self
    }

    pub fn region(mut self, region: Region) -> FreeAttachmentSpec {
        self.region = region;
        self
    }
}

/// A fixed, frozen configuration plus free attachments to place around it.
///
/// Fixed vertices get ids `0..f` in their frozen left-to-right order; free
/// vertices are numbered on from there in declaration order.
#[derive(Clone, Debug)]
pub struct Scaffold {
    pub name: String,
    names: Vec<String>,
    fixed_count: usize,
    fixed_edges: Vec<(Edge, PageId)>,
    specs: Vec<FreeAttachmentSpec>,
}

impl Scaffold {
    pub fn new(name: &str, fixed: &[&str]) -> Scaffold {
        Scaffold {
            name: name.to_string(),
            names: fixed.iter().map(|s| s.to_string()).collect(),
            fixed_count: fixed.len(),
            fixed_edges: Vec::new(),
            specs: Vec::new(),
        }
    }

    /// Id of the vertex called `name`. Panics on unknown names.
    pub fn v(&self, name: &str) -> Vertex {
        self.names
            .iter()
            .position(|n| n == name)
            .unwrap_or_else(|| panic!("scaffold {} has no vertex {name}", self.name))
    }

    pub fn fixed_edge(&mut self, a: Vertex, b: Vertex, page: PageId) -> &mut Scaffold {
        self.fixed_edges.push((Edge::new(a, b), page));
        self
    }

    /// Declares free attachments and returns their ids.
    pub fn attach(&mut self, spec: FreeAttachmentSpec) -> Vec<Vertex> {
        let first = self.names.len();
        for i in 0..spec.count {
            self.names.push(if spec.count == 1 {
                spec.name.clone()
            } else {
                format!("{}{}", spec.name, i + 1)
            });
        }
        self.specs.push(spec);
        (first..self.names.len()).collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn vertex_name(&self, v: Vertex) -> &str {
        &self.names[v]
    }

    pub fn fixed_edges(&self) -> &[(Edge, PageId)] {
        &self.fixed_edges
    }

    pub fn specs(&self) -> &[FreeAttachmentSpec] {
        &self.specs
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertifyError {
    #[error("scaffold has {0} vertices, more than {MAX_SCAFFOLD_VERTICES}")]
    TooManyVertices(usize),
    #[error("attachment spec `{name}` has count {count}, allowed 1..={MAX_ATTACHMENTS_PER_SPEC}")]
    BadCount { name: String, count: usize },
    #[error("attachment spec `{0}` targets a pair that is not an earlier edge")]
    UnknownTarget(String),
    #[error("attachment spec `{0}` puts its stack-edge at a vertex outside its target")]
    BadStackEndpoint(String),
    #[error("attachment spec `{0}` has a region bound on a vertex not declared before it")]
    BadRegion(String),
    #[error("edge {0} is on page {1}, outside one stack and one queue")]
    PageOutOfSpec(Edge, PageId),
    #[error("edge {0} references an unknown vertex")]
    UnknownVertex(Edge),
    #[error("the fixed configuration is already refuted: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Pattern(#[from] PatternError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Refuted(Witness),
    /// A page assignment for every free edge without any witness.
    Extension(LinearLayout),
}

/// One placement, or a block of placements sharing a refuted prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseOutcome {
    pub context: String,
    /// Vertex names left to right.
    pub order: Vec<String>,
    /// Per free vertex `name:XY` (pages of its two edges, `*` if undecided).
    pub pages: Vec<String>,
    /// Number of full placements this line stands for.
    pub weight: u64,
    pub outcome: Outcome,
    /// Names of the witness vertices, in witness order.
    pub witness_names: Vec<String>,
}

impl fmt::Display for CaseOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.context.is_empty() {
            write!(f, "[{}] ", self.context)?;
        }
        write!(
            f,
            "order={} pages={} weight={} ",
            self.order.join(","),
            self.pages.join(","),
            self.weight
        )?;
        match &self.outcome {
            Outcome::Refuted(w) => write!(f, "refuted {} {}", w.kind, self.witness_names.join(",")),
            Outcome::Extension(_) => write!(f, "extension"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Every placement is refuted.
    Certified,
    /// Some placement has a valid completion.
    Refutable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Certified => "certified",
            Verdict::Refutable => "refutable",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepReport {
    pub name: String,
    pub placements_total: u64,
    pub cases: Vec<CaseOutcome>,
    pub verdict: Verdict,
    /// Weighted placements per witness category.
    pub histogram: BTreeMap<Category, u64>,
    pub extensions: u64,
}

impl StepReport {
    /// Witness categories that refuted at least one placement.
    pub fn witness_categories(&self) -> BTreeSet<Category> {
        self.histogram.iter().filter(|(_, &n)| n > 0).map(|(&c, _)| c).collect()
    }

    /// Combines sub-reports, tagging each case with its context.
    pub fn merge(name: &str, parts: Vec<(String, StepReport)>) -> StepReport {
        let mut out = StepReport {
            name: name.to_string(),
            placements_total: 0,
            cases: Vec::new(),
            verdict: Verdict::Certified,
            histogram: BTreeMap::new(),
            extensions: 0,
        };
        for (context, part) in parts {
            out.placements_total += part.placements_total;
            out.extensions += part.extensions;
            if part.verdict == Verdict::Refutable {
                out.verdict = Verdict::Refutable;
            }
            for (c, n) in part.histogram {
                *out.histogram.entry(c).or_default() += n;
            }
            out.cases.extend(part.cases.into_iter().map(|mut c| {
                c.context = if c.context.is_empty() {
                    context.clone()
                } else {
                    format!("{context},{}", c.context)
                };
                c
            }));
        }
        out
    }

    pub fn to_text(&self, summary_only: bool) -> String {
        let mut out = format!(
            "step {} placements={} refuted={} extensions={} verdict={}\n",
            self.name,
            self.placements_total,
            self.placements_total - self.extensions,
            self.extensions,
            self.verdict
        );
        for (c, n) in &self.histogram {
            out.push_str(&format!("kind {} {}\n", c.name(), n));
        }
        if !summary_only {
            for c in &self.cases {
                out.push_str(&format!("case {c}\n"));
            }
        }
        out
    }
}

/// Page pairs for the edges `(w, target.0)` and `(w, target.1)`.
fn page_options(c: PageConstraint, target: (Vertex, Vertex)) -> Vec<[PageId; 2]> {
    let (s, q) = (PageId::S0, PageId::Q0);
    match c {
        PageConstraint::Free => vec![[s, s], [s, q], [q, s], [q, q]],
        PageConstraint::ForcedStack => vec![[s, s]],
        PageConstraint::ForcedQueue => vec![[q, q]],
        PageConstraint::ForcedMixed => vec![[s, q], [q, s]],
        PageConstraint::MixedStackAt(x) if x == target.0 => vec![[s, q]],
        PageConstraint::MixedStackAt(_) => vec![[q, s]],
    }
}

struct Free {
    vertex: Vertex,
    target: (Vertex, Vertex),
    options: Vec<[PageId; 2]>,
    region: Region,
    /// Must be placed right of this sibling (interchangeable attachments).
    right_of: Option<Vertex>,
}

fn check(scaffold: &Scaffold) -> Result<Vec<Free>, CertifyError> {
    let n = scaffold.vertex_count();
    if n > MAX_SCAFFOLD_VERTICES {
        return Err(CertifyError::TooManyVertices(n));
    }
    let mut edges: BTreeSet<Edge> = BTreeSet::new();
    for &(e, p) in &scaffold.fixed_edges {
        if e.v() >= scaffold.fixed_count {
            return Err(CertifyError::UnknownVertex(e));
        }
        if p != PageId::S0 && p != PageId::Q0 {
            return Err(CertifyError::PageOutOfSpec(e, p));
        }
        edges.insert(e);
    }
    // A spec's vertices are interchangeable when nothing declared later refers to them.
    let mut referenced = BTreeSet::new();
    for spec in &scaffold.specs {
        referenced.insert(spec.target.0);
        referenced.insert(spec.target.1);
        referenced.extend(spec.region.references());
    }
    let mut free = Vec::new();
    let mut next = scaffold.fixed_count;
    for spec in &scaffold.specs {
        if spec.count == 0 || spec.count > MAX_ATTACHMENTS_PER_SPEC {
            return Err(CertifyError::BadCount {
                name: spec.name.clone(),
                count: spec.count,
            });
        }
        let (a, b) = spec.target;
        if a == b || !edges.contains(&Edge::new(a, b)) {
            return Err(CertifyError::UnknownTarget(spec.name.clone()));
        }
        if let PageConstraint::MixedStackAt(x) = spec.pages {
            if x != a && x != b {
                return Err(CertifyError::BadStackEndpoint(spec.name.clone()));
            }
        }
        if spec.region.references().any(|r| r >= next) {
            return Err(CertifyError::BadRegion(spec.name.clone()));
        }
        let ids: Vec<Vertex> = (next..next + spec.count).collect();
        let interchangeable = ids.iter().all(|v| !referenced.contains(v));
        for (i, &w) in ids.iter().enumerate() {
            free.push(Free {
                vertex: w,
                target: spec.target,
                options: page_options(spec.pages, spec.target),
                region: spec.region.clone(),
                right_of: (interchangeable && i > 0).then(|| w - 1),
            });
            edges.insert(Edge::new(w, a));
            edges.insert(Edge::new(w, b));
        }
        next += spec.count;
    }
    Ok(free)
}

/// Every order of the scaffold vertices that respects the frozen fixed order,
/// the regions, and the sibling convention.
fn interleavings(scaffold: &Scaffold, free: &[Free]) -> Vec<Vec<Vertex>> {
    let mut out = Vec::new();
    let mut order: Vec<Vertex> = (0..scaffold.fixed_count).collect();
    let mut pos = vec![usize::MAX; scaffold.vertex_count()];
    fn rec(free: &[Free], i: usize, order: &mut Vec<Vertex>, pos: &mut [usize], out: &mut Vec<Vec<Vertex>>) {
        if i == free.len() {
            out.push(order.clone());
            return;
        }
        let f = &free[i];
        for p in 0..=order.len() {
            order.insert(p, f.vertex);
            for (r, &v) in order.iter().enumerate() {
                pos[v] = r;
            }
            let sibling_ok = f.right_of.is_none_or(|s| pos[s] < p);
            if sibling_ok && f.region.admits(pos, f.vertex) {
                rec(free, i + 1, order, pos, out);
            }
            order.remove(p);
        }
        for (r, &v) in order.iter().enumerate() {
            pos[v] = r;
        }
    }
    for (r, &v) in order.iter().enumerate() {
        pos[v] = r;
    }
    rec(free, 0, &mut order, &mut pos, &mut out);
    out
}

struct Run<'a> {
    scaffold: &'a Scaffold,
    free: &'a [Free],
    vocabulary: &'a BTreeSet<Category>,
    detector: Detector,
    report: StepReport,
}

impl Run<'_> {
    /// Witness for the last `new` assigned edges: a crossing if there is one,
    /// else a 2-rainbow, else the first enabled template found.
    fn witness(
        &self,
        layout: &LinearLayout,
        assigned: &[(Edge, PageId)],
        new: usize,
    ) -> Result<Option<Witness>, PatternError> {
        let start = assigned.len() - new;
        let mut rainbow = None;
        for j in start..assigned.len() {
            let (e, pe) = assigned[j];
            for &(f, pf) in &assigned[..j] {
                if pf == pe && !f.shares_endpoint(e) && conflicting(pe, layout.span(f), layout.span(e)) {
                    let w = Witness::conflict(layout, pe, f, e);
                    if pe.is_stack() {
                        return Ok(Some(w));
                    }
                    rainbow.get_or_insert(w);
                }
            }
        }
        if rainbow.is_some() {
            return Ok(rainbow);
        }
        templates(
            self.vocabulary,
            self.detector,
            self.scaffold.vertex_count(),
            layout,
            assigned,
        )
    }

    fn names(&self, vs: &[Vertex]) -> Vec<String> {
        vs.iter().map(|&v| self.scaffold.names[v].clone()).collect()
    }

    fn record(&mut self, order: &[Vertex], choice: &[Option<[PageId; 2]>], weight: u64, outcome: Outcome) {
        let pages = self
            .free
            .iter()
            .zip(choice)
            .map(|(f, c)| {
                let tag = match c {
                    Some([a, b]) => format!("{}{}", a.kind.letter(), b.kind.letter()),
                    None => "**".to_string(),
                };
                format!("{}:{}", self.scaffold.names[f.vertex], tag)
            })
            .collect();
        let witness_names = match &outcome {
            Outcome::Refuted(w) => {
                self.report
                    .histogram
                    .entry(w.kind.category())
                    .and_modify(|n| *n += weight)
                    .or_insert(weight);
                self.names(&w.vertices)
            }
            Outcome::Extension(_) => {
                self.report.extensions += weight;
                self.report.verdict = Verdict::Refutable;
                Vec::new()
            }
        };
        self.report.placements_total += weight;
        self.report.cases.push(CaseOutcome {
            context: String::new(),
            order: self.names(order),
            pages,
            weight,
            outcome,
            witness_names,
        });
    }

    fn dfs(
        &mut self,
        order: &[Vertex],
        i: usize,
        assigned: &mut Vec<(Edge, PageId)>,
        choice: &mut Vec<Option<[PageId; 2]>>,
    ) -> Result<(), PatternError> {
        if i == self.free.len() {
            let layout = layout_of(order, assigned);
            self.record(order, choice, 1, Outcome::Extension(layout));
            return Ok(());
        }
        let rest: u64 = self.free[i + 1..].iter().map(|f| f.options.len() as u64).product();
        let (w, (a, b)) = (self.free[i].vertex, self.free[i].target);
        for k in 0..self.free[i].options.len() {
            let [pa, pb] = self.free[i].options[k];
            assigned.push((Edge::new(w, a), pa));
            assigned.push((Edge::new(w, b), pb));
            choice[i] = Some([pa, pb]);
            let layout = layout_of(order, assigned);
            match self.witness(&layout, assigned, 2)? {
                Some(wit) => self.record(order, choice, rest, Outcome::Refuted(wit)),
                None => self.dfs(order, i + 1, assigned, choice)?,
            }
            choice[i] = None;
            assigned.truncate(assigned.len() - 2);
        }
        Ok(())
    }
}

fn layout_of(order: &[Vertex], assigned: &[(Edge, PageId)]) -> LinearLayout {
    LinearLayout::new(order.to_vec(), assigned.iter().copied().collect()).expect("scaffold order is a permutation")
}

fn templates(
    vocabulary: &BTreeSet<Category>,
    detector: Detector,
    n: usize,
    layout: &LinearLayout,
    assigned: &[(Edge, PageId)],
) -> Result<Option<Witness>, PatternError> {
    let wanted = [Category::SmileyFace, Category::P1, Category::P1a, Category::P2];
    if !wanted.iter().any(|c| vocabulary.contains(c)) {
        return Ok(None);
    }
    let graph = Graph::from_edges(n, assigned.iter().map(|(e, _)| (e.u(), e.v()))).expect("scaffold edges are simple");
    for c in wanted {
        if !vocabulary.contains(&c) {
            continue;
        }
        let found = match c {
            Category::SmileyFace => detector.find_smileys(&graph, layout, None)?,
            Category::P1 => detector.find_patterns(&graph, layout, PatternKind::P1, None)?,
            Category::P1a => detector.find_patterns(&graph, layout, PatternKind::P1a, None)?,
            _ => detector.find_patterns(&graph, layout, PatternKind::P2, None)?,
        };
        if let Some(w) = found.into_iter().next() {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Exhausts every placement of the scaffold's free vertices.
///
/// For each interleaving of free vertices into the frozen order (respecting
/// regions) and each page assignment allowed by the constraints, the placement
/// is either refuted by a witness or reported as an extension. Crossings and
/// 2-rainbows always refute; smiley faces and patterns P1/P1a/P2 refute only
/// when `vocabulary` contains them. Interchangeable attachments (same spec,
/// never referenced later) are enumerated up to relabeling.
pub fn certify_step(scaffold: &Scaffold, vocabulary: &BTreeSet<Category>) -> Result<StepReport, CertifyError> {
    let free = check(scaffold)?;
    let fixed_order: Vec<Vertex> = (0..scaffold.vertex_count()).collect();
    let mut assigned: Vec<(Edge, PageId)> = Vec::new();
    let detector = Detector::default();
    for &(e, p) in &scaffold.fixed_edges {
        assigned.push((e, p));
        let layout = layout_of(&fixed_order, &assigned);
        for &(f, pf) in &assigned[..assigned.len() - 1] {
            if pf == p && !f.shares_endpoint(e) && conflicting(p, layout.span(f), layout.span(e)) {
                return Err(CertifyError::Inconsistent(format!(
                    "{}",
                    Witness::conflict(&layout, p, f, e)
                )));
            }
        }
    }
    let layout = layout_of(&fixed_order, &assigned);
    if let Some(w) = templates(vocabulary, detector, scaffold.vertex_count(), &layout, &assigned)? {
        return Err(CertifyError::Inconsistent(format!("{w}")));
    }
    let mut run = Run {
        scaffold,
        free: &free,
        vocabulary,
        detector,
        report: StepReport {
            name: scaffold.name.clone(),
            placements_total: 0,
            cases: Vec::new(),
            verdict: Verdict::Certified,
            histogram: BTreeMap::new(),
            extensions: 0,
        },
    };
    for order in interleavings(scaffold, &free) {
        let mut choice = vec![None; free.len()];
        run.dfs(&order, 0, &mut assigned.clone(), &mut choice)?;
    }
    Ok(run.report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basic() -> BTreeSet<Category> {
        [Category::Crossing, Category::Rainbow].into_iter().collect()
    }

    #[test]
    fn single_attachment_to_an_edge_is_extendable() {
        let mut s = Scaffold::new("edge", &["a", "b"]);
        s.fixed_edge(0, 1, PageId::S0);
        s.attach(FreeAttachmentSpec::new("w", (0, 1), 1));
        let r = certify_step(&s, &basic()).unwrap();
        // three positions, four page pairs each
        assert_eq!(r.placements_total, 12);
        assert_eq!(r.extensions, 12);
        assert_eq!(r.verdict, Verdict::Refutable);
    }

    #[test]
    fn siblings_are_counted_once() {
        let mut s = Scaffold::new("edge", &["a", "b"]);
        s.fixed_edge(0, 1, PageId::S0);
        s.attach(FreeAttachmentSpec::new("w", (0, 1), 2).pages(PageConstraint::ForcedStack));
        let free = check(&s).unwrap();
        // 12 orders keep a before b; half of them up to swapping w1 and w2
        assert_eq!(interleavings(&s, &free).len(), 6);
    }

    #[test]
    fn regions_restrict_positions() {
        let mut s = Scaffold::new("path", &["a", "b", "c"]);
        s.fixed_edge(0, 1, PageId::Q0).fixed_edge(1, 2, PageId::Q0);
        s.attach(FreeAttachmentSpec::new("w", (0, 1), 1).region(Region::between(1, 2)));
        let free = check(&s).unwrap();
        assert_eq!(interleavings(&s, &free), vec![vec![0, 1, 3, 2]]);
        let mut s2 = s.clone();
        s2.attach(FreeAttachmentSpec::new("y", (1, 2), 1).region(Region::before(0).or(Region::after(3))));
        let free = check(&s2).unwrap();
        assert_eq!(interleavings(&s2, &free).len(), 3);
    }

    #[test]
    fn queue_attachments_outside_nest() {
        // w left of a: the queue-edge (w,b) nests over (c,d)
        let mut s = Scaffold::new("nest", &["a", "c", "d", "b"]);
        s.fixed_edge(0, 3, PageId::S0).fixed_edge(1, 2, PageId::Q0);
        s.attach(
            FreeAttachmentSpec::new("w", (0, 3), 1)
                .pages(PageConstraint::ForcedQueue)
                .region(Region::before(0)),
        );
        let r = certify_step(&s, &basic()).unwrap();
        assert_eq!(r.verdict, Verdict::Certified);
        assert_eq!(r.witness_categories(), [Category::Rainbow].into_iter().collect());
        assert_eq!(r.cases[0].witness_names, vec!["w", "c", "d", "b"]);
    }

    #[test]
    fn inconsistent_fixed_part_is_an_error() {
        let mut s = Scaffold::new("bad", &["a", "b", "c", "d"]);
        s.fixed_edge(0, 2, PageId::S0).fixed_edge(1, 3, PageId::S0);
        assert!(matches!(certify_step(&s, &basic()), Err(CertifyError::Inconsistent(_))));
    }

    #[test]
    fn malformed_specs_are_rejected() {
        let mut s = Scaffold::new("bad", &["a", "b", "c"]);
        s.fixed_edge(0, 1, PageId::S0);
        let mut t = s.clone();
        t.attach(FreeAttachmentSpec::new("w", (1, 2), 1));
        assert_eq!(certify_step(&t, &basic()), Err(CertifyError::UnknownTarget("w".into())));
        let mut t = s.clone();
        t.attach(FreeAttachmentSpec::new("w", (0, 1), 6));
        assert!(matches!(certify_step(&t, &basic()), Err(CertifyError::BadCount { .. })));
        let mut t = s.clone();
        t.attach(FreeAttachmentSpec::new("w", (0, 1), 1).pages(PageConstraint::MixedStackAt(2)));
        assert_eq!(
            certify_step(&t, &basic()),
            Err(CertifyError::BadStackEndpoint("w".into()))
        );
        let mut t = s.clone();
        t.attach(FreeAttachmentSpec::new("w", (0, 1), 1).region(Region::before(3)));
        assert_eq!(certify_step(&t, &basic()), Err(CertifyError::BadRegion("w".into())));
        let mut t = s;
        t.fixed_edge(1, 2, PageId::stack(1));
        assert!(matches!(
            certify_step(&t, &basic()),
            Err(CertifyError::PageOutOfSpec(..))
        ));
    }
}

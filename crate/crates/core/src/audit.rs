//! Structural audits of mixed (1-stack 1-queue) layouts of `G(k,l)`.
//!
//! Each audit has a hypothesis on `k`, `l` and layout validity. When the
//! hypothesis fails the report says so (`hypothesis_met = false`) and lists no
//! violations; a vacuous audit is never a pass.
//!
//! Attachment counts use one generation per edge class:
//!
//! | audit | edges checked            | attachments counted |
//! |-------|--------------------------|---------------------|
//! | 1, 3  | all edges of `G(k-1)`    | generation `k`      |
//! | 4     | queue-edges of `G(k-3)`  | generation `k-2`    |
//! | cor1  | queue-edges of `G(k-4)`  | generation `k-2`    |

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{Edge, TwoTree, Vertex};
use crate::layout::{classify_attachment, pages_conflict_free, AttachmentClass, LayoutError, LinearLayout, PageSpec};
use crate::pattern::{Detector, PatternError, PatternKind, Witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LemmaId {
    /// At most two stack-attachments per edge.
    L1,
    /// No smiley face among older vertices.
    L2,
    /// Three or more queue-attachments lie inside their edge.
    L3,
    /// At most six queue-attachments per queue-edge.
    L4,
    /// At least `l - 8` mixed-attachments per queue-edge.
    Cor1,
    /// No pattern P1, P1a or P2 among older vertices.
    L5,
}

impl LemmaId {
    pub const ALL: [LemmaId; 6] = [
        LemmaId::L1,
        LemmaId::L2,
        LemmaId::L3,
        LemmaId::L4,
        LemmaId::Cor1,
        LemmaId::L5,
    ];
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LemmaId::L1 => "1",
            LemmaId::L2 => "2",
            LemmaId::L3 => "3",
            LemmaId::L4 => "4",
            LemmaId::Cor1 => "cor1",
            LemmaId::L5 => "5",
        })
    }
}

impl FromStr for LemmaId {
    type Err = String;

    fn from_str(s: &str) -> Result<LemmaId, String> {
        Ok(match s {
            "1" => LemmaId::L1,
            "2" => LemmaId::L2,
            "3" => LemmaId::L3,
            "4" => LemmaId::L4,
            "cor1" => LemmaId::Cor1,
            "5" => LemmaId::L5,
            _ => return Err(format!("unknown lemma `{s}` (expected 1,2,3,4,cor1,5)")),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    Witness(Witness),
    /// A counterexample tuple: the edge endpoints followed by the offending attachments.
    Tuple {
        label: &'static str,
        vertices: Vec<Vertex>,
    },
}

impl fmt::Display for Evidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evidence::Witness(w) => write!(f, "{w}"),
            Evidence::Tuple { label, vertices } => {
                f.write_str(label)?;
                for v in vertices {
                    write!(f, " {v}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditViolation {
    pub statement: String,
    pub evidence: Evidence,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub lemma: LemmaId,
    pub hypothesis_met: bool,
    /// Edges (or scanned vertex sets) the conclusion was actually checked on.
    pub items_checked: usize,
    pub violations: Vec<AuditViolation>,
    /// Why the hypothesis failed, when it did.
    pub note: Option<String>,
}

impl AuditReport {
    fn vacuous(lemma: LemmaId, note: impl Into<String>) -> AuditReport {
        AuditReport {
            lemma,
            hypothesis_met: false,
            items_checked: 0,
            violations: Vec::new(),
            note: Some(note.into()),
        }
    }

    /// Hypothesis met and no violation found.
    pub fn passed(&self) -> bool {
        self.hypothesis_met && self.violations.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "lemma {} hypothesis={} violations={}\n",
            self.lemma,
            if self.hypothesis_met { 'y' } else { 'n' },
            self.violations.len()
        );
        for v in &self.violations {
            out.push_str(&format!("witness {}\n", v.evidence));
        }
        out
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AuditError {
    #[error("the tree is not a G(k,l) build")]
    NotGkl,
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error(transparent)]
    Pattern(#[from] PatternError),
}

#[derive(Clone, Copy, Debug, Default)]
pub struct AuditOptions {
    /// Skip the validity check and treat the layout as a mixed layout. Used to
    /// exercise detectors on configurations no valid layout can contain.
    pub assume_valid: bool,
    pub detector: Detector,
}

/// Class counts of the attachments of one edge.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AttachmentCounts {
    pub stack: usize,
    pub queue: usize,
    pub mixed: usize,
}

impl AttachmentCounts {
    pub fn total(&self) -> usize {
        self.stack + self.queue + self.mixed
    }

    fn add(&mut self, class: AttachmentClass) {
        match class {
            AttachmentClass::StackAttachment => self.stack += 1,
            AttachmentClass::QueueAttachment => self.queue += 1,
            AttachmentClass::MixedAttachment => self.mixed += 1,
        }
    }
}

/// `mixed >= l - 8`, the bound left once at most two stack- and six
/// queue-attachments are allowed.
pub fn mixed_bound_holds(counts: AttachmentCounts, ell: usize) -> bool {
    counts.mixed + 8 >= ell
}

struct Context<'a> {
    tree: &'a TwoTree,
    layout: &'a LinearLayout,
    k: u32,
    ell: u32,
    opts: AuditOptions,
}

impl Context<'_> {
    fn classified(&self, e: Edge, generation: u32) -> Result<Vec<(Vertex, AttachmentClass)>, AuditError> {
        self.tree
            .attachments_of(e, Some(generation))
            .into_iter()
            .map(|x| Ok((x, classify_attachment(self.tree, self.layout, x)?)))
            .collect()
    }

    fn counts(&self, e: Edge, generation: u32) -> Result<AttachmentCounts, AuditError> {
        let mut c = AttachmentCounts::default();
        for (_, class) in self.classified(e, generation)? {
            c.add(class);
        }
        Ok(c)
    }

    fn queue_edges_up_to(&self, g: u32) -> Vec<Edge> {
        self.tree
            .edges_up_to(g)
            .filter(|&e| self.layout.page(e).is_some_and(|p| p.is_queue()))
            .collect()
    }

    fn older_vertices(&self) -> BTreeSet<Vertex> {
        self.tree.vertices_up_to(self.k - 1)
    }
}

fn tuple(label: &'static str, e: Edge, rest: impl IntoIterator<Item = Vertex>) -> Evidence {
    let mut vertices = vec![e.u(), e.v()];
    vertices.extend(rest);
    Evidence::Tuple { label, vertices }
}

/// Runs one audit.
pub fn audit(
    tree: &TwoTree,
    layout: &LinearLayout,
    lemma: LemmaId,
    opts: AuditOptions,
) -> Result<AuditReport, AuditError> {
    let params = tree.gkl().ok_or(AuditError::NotGkl)?;
    match layout.check_structure(tree.graph(), PageSpec::MIXED) {
        Ok(()) => {}
        Err(LayoutError::PageOutOfSpec { edge, page, .. }) => {
            return Ok(AuditReport::vacuous(
                lemma,
                format!("edge {edge} on {page}: not a 1-stack 1-queue layout"),
            ))
        }
        Err(e) => return Err(e.into()),
    }
    if !opts.assume_valid && !pages_conflict_free(layout) {
        return Ok(AuditReport::vacuous(lemma, "layout is not a valid mixed layout"));
    }
    let (k, ell) = (params.k, params.ell);
    let (min_k, min_ell) = match lemma {
        LemmaId::L1 | LemmaId::L2 | LemmaId::L3 => (2, 3),
        LemmaId::L4 => (5, 7),
        LemmaId::Cor1 => (5, 9),
        LemmaId::L5 => (2, 5),
    };
    if k < min_k || ell < min_ell {
        return Ok(AuditReport::vacuous(
            lemma,
            format!("requires k>{} and l>{}, got k={k} l={ell}", min_k - 1, min_ell - 1),
        ));
    }
    let cx = Context {
        tree,
        layout,
        k,
        ell,
        opts,
    };
    let mut report = AuditReport {
        lemma,
        hypothesis_met: true,
        items_checked: 0,
        violations: Vec::new(),
        note: None,
    };
    match lemma {
        LemmaId::L1 => audit_two_stack(&cx, &mut report)?,
        LemmaId::L2 => audit_smiley(&cx, &mut report)?,
        LemmaId::L3 => audit_queue_inside(&cx, &mut report)?,
        LemmaId::L4 => audit_six_queue(&cx, &mut report)?,
        LemmaId::Cor1 => audit_mixed_bound(&cx, &mut report)?,
        LemmaId::L5 => audit_patterns(&cx, &mut report)?,
    }
    Ok(report)
}

pub fn audit_all(
    tree: &TwoTree,
    layout: &LinearLayout,
    lemmas: &[LemmaId],
    opts: AuditOptions,
) -> Result<Vec<AuditReport>, AuditError> {
    lemmas.iter().map(|&l| audit(tree, layout, l, opts)).collect()
}

fn audit_two_stack(cx: &Context, report: &mut AuditReport) -> Result<(), AuditError> {
    for e in cx.tree.edges_up_to(cx.k - 1) {
        report.items_checked += 1;
        let stacked: Vec<Vertex> = cx
            .classified(e, cx.k)?
            .into_iter()
            .filter(|&(_, c)| c == AttachmentClass::StackAttachment)
            .map(|(x, _)| x)
            .collect();
        if stacked.len() > 2 {
            report.violations.push(AuditViolation {
                statement: format!("edge {e} has {} stack-attachments", stacked.len()),
                evidence: tuple("stack-attachments", e, stacked),
            });
        }
    }
    Ok(())
}

fn audit_smiley(cx: &Context, report: &mut AuditReport) -> Result<(), AuditError> {
    let scope = cx.older_vertices();
    report.items_checked = scope.len();
    for w in cx
        .opts
        .detector
        .find_smileys(cx.tree.graph(), cx.layout, Some(&scope))?
    {
        report.violations.push(AuditViolation {
            statement: "smiley face among older vertices".into(),
            evidence: Evidence::Witness(w),
        });
    }
    Ok(())
}

fn audit_queue_inside(cx: &Context, report: &mut AuditReport) -> Result<(), AuditError> {
    for e in cx.tree.edges_up_to(cx.k - 1) {
        let queued: Vec<Vertex> = cx
            .classified(e, cx.k)?
            .into_iter()
            .filter(|&(_, c)| c == AttachmentClass::QueueAttachment)
            .map(|(x, _)| x)
            .collect();
        if queued.len() < 3 {
            continue;
        }
        report.items_checked += 1;
        let (l, r) = cx.layout.span(e);
        for x in queued {
            let p = cx.layout.position(x);
            if !(l < p && p < r) {
                report.violations.push(AuditViolation {
                    statement: format!("queue-attachment {x} of {e} lies outside the edge"),
                    evidence: tuple("outside-queue-attachment", e, [x]),
                });
            }
        }
    }
    if report.items_checked == 0 {
        report.hypothesis_met = false;
        report.note = Some("no edge has three queue-attachments".into());
    }
    Ok(())
}

fn audit_six_queue(cx: &Context, report: &mut AuditReport) -> Result<(), AuditError> {
    for e in cx.queue_edges_up_to(cx.k - 3) {
        report.items_checked += 1;
        let queued: Vec<Vertex> = cx
            .classified(e, cx.k - 2)?
            .into_iter()
            .filter(|&(_, c)| c == AttachmentClass::QueueAttachment)
            .map(|(x, _)| x)
            .collect();
        if queued.len() > 6 {
            report.violations.push(AuditViolation {
                statement: format!("queue-edge {e} has {} queue-attachments", queued.len()),
                evidence: tuple("queue-attachments", e, queued),
            });
        }
    }
    Ok(())
}

fn audit_mixed_bound(cx: &Context, report: &mut AuditReport) -> Result<(), AuditError> {
    let ell = cx.ell as usize;
    for e in cx.queue_edges_up_to(cx.k - 4) {
        report.items_checked += 1;
        let c = cx.counts(e, cx.k - 2)?;
        if c.total() != ell {
            report.violations.push(AuditViolation {
                statement: format!("edge {e}: class counts {}+{}+{} != l={ell}", c.stack, c.queue, c.mixed),
                evidence: tuple("class-partition", e, []),
            });
        }
        if !mixed_bound_holds(c, ell) {
            report.violations.push(AuditViolation {
                statement: format!(
                    "queue-edge {e} has {} mixed-attachments, fewer than l-8={}",
                    c.mixed,
                    ell - 8
                ),
                evidence: tuple("mixed-deficit", e, [c.stack, c.queue, c.mixed]),
            });
        }
    }
    Ok(())
}

fn audit_patterns(cx: &Context, report: &mut AuditReport) -> Result<(), AuditError> {
    let scope = cx.older_vertices();
    report.items_checked = scope.len();
    for which in PatternKind::ALL {
        for w in cx
            .opts
            .detector
            .find_patterns(cx.tree.graph(), cx.layout, which, Some(&scope))?
        {
            report.violations.push(AuditViolation {
                statement: format!("pattern {:?} among older vertices", which),
                evidence: Evidence::Witness(w),
            });
        }
    }
    Ok(())
}

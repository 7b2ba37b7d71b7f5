//! Built-in scaffolds: forbidden-configuration gadgets and the case analyses
//! behind the non-existence of mixed layouts of `G(5,33)`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use super::certify::{certify_step, CertifyError, FreeAttachmentSpec, PageConstraint, Region, Scaffold, StepReport};
use crate::layout::PageId;
use crate::pattern::Category;

const S: PageId = PageId::S0;
const Q: PageId = PageId::Q0;

/// A forbidden configuration with free attachments on one of its stack-edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gadget {
    /// Smiley `<a,b,u,v,c,d>` with attachments on `(u,v)`; default 3.
    Smiley,
    /// Pattern P1 with attachments on `(p4,p5)`; default 5.
    P1,
    /// Pattern P1a with attachments on `(p4,p5)`; default 5.
    P1a,
    /// Pattern P2 with attachments on `(p2,p4)`; default 5.
    P2,
}

impl Gadget {
    pub fn default_attachments(self) -> usize {
        match self {
            Gadget::Smiley => 3,
            _ => 5,
        }
    }

    pub fn scaffold(self, attachments: usize) -> Scaffold {
        let p = ["p1", "p2", "p3", "p4", "p5", "p6", "p7"];
        let (name, mut s, target) = match self {
            Gadget::Smiley => {
                let mut s = Scaffold::new("smiley", &["a", "b", "u", "v", "c", "d"]);
                s.fixed_edge(0, 1, Q)
                    .fixed_edge(4, 5, Q)
                    .fixed_edge(0, 5, Q)
                    .fixed_edge(2, 3, S);
                ("smiley", s, (2, 3))
            }
            Gadget::P1 => {
                let mut s = Scaffold::new("p1", &p);
                s.fixed_edge(0, 2, S)
                    .fixed_edge(0, 5, S)
                    .fixed_edge(3, 4, S)
                    .fixed_edge(1, 6, Q);
                ("p1", s, (3, 4))
            }
            Gadget::P1a => {
                let mut s = Scaffold::new("p1a", &p);
                s.fixed_edge(1, 2, S)
                    .fixed_edge(1, 5, S)
                    .fixed_edge(3, 4, S)
                    .fixed_edge(0, 6, Q);
                ("p1a", s, (3, 4))
            }
            Gadget::P2 => {
                let mut s = Scaffold::new("p2", &p);
                s.fixed_edge(0, 6, S)
                    .fixed_edge(1, 3, S)
                    .fixed_edge(1, 4, S)
                    .fixed_edge(0, 5, Q)
                    .fixed_edge(2, 6, Q);
                ("p2", s, (1, 3))
            }
        };
        s.name = format!("{name}+{attachments}");
        s.attach(FreeAttachmentSpec::new("x", target, attachments));
        s
    }
}

impl fmt::Display for Gadget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Gadget::Smiley => "smiley",
            Gadget::P1 => "p1",
            Gadget::P1a => "p1a",
            Gadget::P2 => "p2",
        })
    }
}

/// Runs a gadget with crossings and 2-rainbows as the only refutations.
pub fn certify_gadget(gadget: Gadget, attachments: usize) -> Result<StepReport, CertifyError> {
    let vocabulary = [Category::Crossing, Category::Rainbow].into_iter().collect();
    certify_step(&gadget.scaffold(attachments), &vocabulary)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClaimCase {
    L4C1,
    L4C2,
    L4C3,
    L4C4,
    T1C1,
    T1C2,
    T1C3,
    T1C4,
    T1C5,
    T1C6,
}

impl ClaimCase {
    pub const ALL: [ClaimCase; 10] = [
        ClaimCase::L4C1,
        ClaimCase::L4C2,
        ClaimCase::L4C3,
        ClaimCase::L4C4,
        ClaimCase::T1C1,
        ClaimCase::T1C2,
        ClaimCase::T1C3,
        ClaimCase::T1C4,
        ClaimCase::T1C5,
        ClaimCase::T1C6,
    ];

    pub fn id(self) -> &'static str {
        match self {
            ClaimCase::L4C1 => "l4c1",
            ClaimCase::L4C2 => "l4c2",
            ClaimCase::L4C3 => "l4c3",
            ClaimCase::L4C4 => "l4c4",
            ClaimCase::T1C1 => "t1c1",
            ClaimCase::T1C2 => "t1c2",
            ClaimCase::T1C3 => "t1c3",
            ClaimCase::T1C4 => "t1c4",
            ClaimCase::T1C5 => "t1c5",
            ClaimCase::T1C6 => "t1c6",
        }
    }
}

impl fmt::Display for ClaimCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for ClaimCase {
    type Err = String;

    fn from_str(s: &str) -> Result<ClaimCase, String> {
        ClaimCase::ALL
            .into_iter()
            .find(|c| c.id() == s.to_ascii_lowercase())
            .ok_or_else(|| format!("unknown case `{s}`"))
    }
}

/// Refutations available inside a mixed layout of the previous generation:
/// crossings, 2-rainbows, smiley faces and patterns P1/P1a/P2.
pub fn claim_vocabulary() -> BTreeSet<Category> {
    [
        Category::Crossing,
        Category::Rainbow,
        Category::SmileyFace,
        Category::P1,
        Category::P1a,
        Category::P2,
    ]
    .into_iter()
    .collect()
}

/// `u < x1 < ... < x7 < v`, every edge among them a queue-edge.
fn seven_queue(name: &str) -> Scaffold {
    let mut s = Scaffold::new(name, &["u", "x1", "x2", "x3", "x4", "x5", "x6", "x7", "v"]);
    let (u, v) = (0, 8);
    s.fixed_edge(u, v, Q);
    for x in 1..=7 {
        s.fixed_edge(u, x, Q).fixed_edge(v, x, Q);
    }
    s
}

/// Mixed-attachment of `(end, x)` whose stack-edge goes to `x`.
fn mixed(name: &str, end: usize, x: usize, region: Region) -> FreeAttachmentSpec {
    FreeAttachmentSpec::new(name, (end, x), 1)
        .pages(PageConstraint::MixedStackAt(x))
        .region(region)
}

fn lemma4_parts(case: ClaimCase) -> Vec<(String, Scaffold)> {
    let (u, x1, x7, v) = (0usize, 1usize, 7usize, 8usize);
    let mut parts = Vec::new();
    let mut add = |ctx: String, build: &dyn Fn(&mut Scaffold)| {
        let mut s = seven_queue(case.id());
        build(&mut s);
        parts.push((ctx, s));
    };
    match case {
        ClaimCase::L4C1 => {
            for i in 2..=6 {
                add(format!("i={i},(v,xi)"), &|s| {
                    s.attach(mixed("w", v, i, Region::before(u)));
                });
                add(format!("i={i},(u,xi)"), &|s| {
                    s.attach(mixed("w", u, i, Region::after(v)));
                });
            }
        }
        ClaimCase::L4C2 => {
            for i in 2..=6 {
                for (end, label) in [(v, "v"), (u, "u")] {
                    add(format!("i={i},({label},xi)"), &|s| {
                        s.attach(mixed("w", end, i, Region::between(x1, x7)));
                    });
                }
            }
        }
        ClaimCase::L4C3 => {
            for i in 2..=6 {
                add(format!("i={i},(v,xi)"), &|s| {
                    s.attach(mixed("w", v, i, Region::between(x7, v)));
                    s.attach(mixed("w'", v, i + 1, Region::anywhere()));
                });
                add(format!("i={i},(u,xi)"), &|s| {
                    s.attach(mixed("w", u, i, Region::between(u, x1)));
                    s.attach(mixed("w'", u, i - 1, Region::anywhere()));
                });
            }
        }
        ClaimCase::L4C4 => {
            for i in 3..=5 {
                add(format!("i={i},(v,xi)"), &|s| {
                    let w = s.attach(mixed("w", v, i, Region::between(u, x1)))[0];
                    s.attach(mixed("w'", u, i - 1, Region::before(w).or(Region::after(i))));
                });
                add(format!("i={i},(u,xi)"), &|s| {
                    let w = s.attach(mixed("w", u, i, Region::between(x7, v)))[0];
                    s.attach(mixed("w'", v, i + 1, Region::before(i).or(Region::after(w))));
                });
            }
        }
        _ => unreachable!(),
    }
    parts
}

/// Five mixed-attachments `x1..x5` of the queue-edge `(u,v)` in one configuration.
fn five_mixed(case: ClaimCase) -> Scaffold {
    let xs = ["x1", "x2", "x3", "x4", "x5"];
    // (fixed order, page of (u,xi), page of (v,xi))
    let (order, pu, pv): (Vec<&str>, PageId, PageId) = match case {
        ClaimCase::T1C1 => ([&["u", "v"][..], &xs].concat(), Q, S),
        ClaimCase::T1C2 => ([&["u", "v"][..], &xs].concat(), S, Q),
        ClaimCase::T1C3 => ([&["u"][..], &xs, &["v"]].concat(), S, Q),
        ClaimCase::T1C4 => ([&xs[..], &["u", "v"]].concat(), S, Q),
        ClaimCase::T1C5 => ([&xs[..], &["u", "v"]].concat(), Q, S),
        ClaimCase::T1C6 => ([&["u"][..], &xs, &["v"]].concat(), Q, S),
        _ => unreachable!(),
    };
    let mut s = Scaffold::new(case.id(), &order);
    let (u, v) = (s.v("u"), s.v("v"));
    s.fixed_edge(u, v, Q);
    for x in xs {
        let x = s.v(x);
        s.fixed_edge(u, x, pu).fixed_edge(v, x, pv);
    }
    s
}

fn theorem_parts(case: ClaimCase) -> Vec<(String, Scaffold)> {
    let mut s = five_mixed(case);
    // the queue-edge whose attachment the case examines
    let (end, x) = match case {
        ClaimCase::T1C1 | ClaimCase::T1C6 => ("u", "x2"),
        ClaimCase::T1C2 => ("v", "x3"),
        ClaimCase::T1C3 | ClaimCase::T1C4 => ("v", "x4"),
        ClaimCase::T1C5 => ("u", "x3"),
        _ => unreachable!(),
    };
    let target = (s.v(end), s.v(x));
    s.attach(FreeAttachmentSpec::new("w", target, 1).pages(PageConstraint::ForcedMixed));
    vec![(format!("({end},{x})"), s)]
}

/// Certifies one proof case with the full refutation vocabulary.
pub fn certify_claim(case: ClaimCase) -> Result<StepReport, CertifyError> {
    let parts = match case {
        ClaimCase::L4C1 | ClaimCase::L4C2 | ClaimCase::L4C3 | ClaimCase::L4C4 => lemma4_parts(case),
        _ => theorem_parts(case),
    };
    let vocabulary = claim_vocabulary();
    let reports = parts
        .into_iter()
        .map(|(ctx, s)| Ok((ctx, certify_step(&s, &vocabulary)?)))
        .collect::<Result<Vec<_>, CertifyError>>()?;
    Ok(StepReport::merge(case.id(), reports))
}

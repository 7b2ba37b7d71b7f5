//! Decision procedures: a brute-force oracle, a backtracking solver, and a
//! certifier that exhausts every placement of a few free vertices around a
//! fixed configuration.
//!
//! The certifier only looks at the vertices and edges a scaffold declares. A
//! `Certified` verdict means the local configuration cannot be completed, not
//! that some larger graph has no layout.

mod certify;
mod claims;
mod hunt;
mod oracle;
mod solver;

pub use certify::{
    certify_step, CaseOutcome, CertifyError, FreeAttachmentSpec, Interval, Outcome, PageConstraint, Region, Scaffold,
    StepReport, Verdict,
};
pub use claims::{certify_claim, certify_gadget, claim_vocabulary, ClaimCase, Gadget};
pub use hunt::{hunt, HuntLine, HuntRange};
pub use oracle::{enumerate_all, EnumerateOptions, LayoutStream, OracleError};
pub use solver::{solve, SolveOptions, SolveResult, SolveStats, SolveStatus};

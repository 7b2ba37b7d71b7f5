use std::fmt;
use std::ops::RangeInclusive;

use super::solver::{solve, SolveOptions, SolveStatus};
use crate::graph::{build_gkl, gkl_size, GklParams, GraphError};
use crate::layout::PageSpec;

#[derive(Clone, Debug)]
pub struct HuntRange {
    pub k: RangeInclusive<u32>,
    pub ell: RangeInclusive<u32>,
    /// Instances with more vertices are reported as skipped.
    pub max_vertices: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HuntLine {
    pub params: GklParams,
    pub vertices: u64,
    pub edges: u64,
    /// `None` when the instance was skipped for size.
    pub status: Option<SolveStatus>,
    pub nodes: u64,
}

impl fmt::Display for HuntLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = self.status.as_ref().map_or("skipped", |s| s.name());
        write!(
            f,
            "{} V={} E={} status={} nodes={}",
            self.params, self.vertices, self.edges, status, self.nodes
        )
    }
}

/// Runs the solver on every `G(k,l)` in the range, in `(k, l)` order.
pub fn hunt(range: &HuntRange, spec: PageSpec, opts: SolveOptions) -> Result<Vec<HuntLine>, GraphError> {
    let mut out = Vec::new();
    for k in range.k.clone() {
        for ell in range.ell.clone() {
            let params = GklParams::new(k, ell)?;
            let (vertices, edges) = gkl_size(params)?;
            if vertices > range.max_vertices {
                out.push(HuntLine {
                    params,
                    vertices,
                    edges,
                    status: None,
                    nodes: 0,
                });
                continue;
            }
            let tree = build_gkl(params, None)?;
            let r = solve(tree.graph(), spec, opts);
            out.push(HuntLine {
                params,
                vertices,
                edges,
                status: Some(r.status),
                nodes: r.stats.nodes,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_family_members_are_mixed() {
        let range = HuntRange {
            k: 1..=2,
            ell: 1..=4,
            max_vertices: 1000,
        };
        let lines = hunt(&range, PageSpec::MIXED, SolveOptions::default()).unwrap();
        assert_eq!(lines.len(), 8);
        for l in &lines {
            assert!(matches!(l.status, Some(SolveStatus::Sat(_))), "{l}");
        }
        assert!(lines[0].to_string().starts_with("G(1,1) V=2 E=1 status=sat"));
    }

    #[test]
    fn oversized_instances_are_skipped() {
        let range = HuntRange {
            k: 3..=3,
            ell: 3..=3,
            max_vertices: 10,
        };
        let lines = hunt(&range, PageSpec::MIXED, SolveOptions::default()).unwrap();
        assert_eq!(lines[0].status, None);
        assert!(lines[0].to_string().contains("status=skipped"));
    }
}

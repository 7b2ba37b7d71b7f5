//! Mixed stack/queue linear layouts of graphs.
//!
//! The crate covers the whole pipeline around one question: does a graph
//! admit a layout with `s` stack pages and `q` queue pages?
//!
//! - [`graph`]: graphs, 2-trees and the `G(k,l)` family
//! - [`layout`]: orders, pages, crossing/nesting, validation
//! - [`pattern`]: smiley faces, patterns P1/P1a/P2 and other witnesses
//! - [`audit`]: structural checks of mixed layouts of `G(k,l)`
//! - [`search`]: brute-force oracle, backtracking solver, gadget certifier
//! - [`cnf`]: DIMACS export and model import
//! - [`format`]: `.lg` graph files and `.ll` layout certificates

pub mod audit;
pub mod cnf;
pub mod format;
pub mod graph;
pub mod layout;
pub mod pattern;
pub mod search;

pub use graph::{build_gkl, gkl_size, Edge, GklParams, Graph, GraphError, TwoTree, Vertex};
pub use layout::{LinearLayout, PageId, PageKind, PageSpec};

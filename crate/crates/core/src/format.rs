//! Line-oriented text formats for graphs (`.lg`) and layout certificates (`.ll`).
//!
//! ```text
//! laygraph 1          laylayout 1
//! n 3                 order 2 0 1
//! e 0 1 g=1           page 0 1 S0
//! e 0 2 g=2           page 0 2 Q0
//! ```
//!
//! `#` starts a comment anywhere on a line; blank lines are ignored.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{build_gkl, Edge, GklParams, Graph, GraphError, TwoTree, Vertex};
use crate::layout::{LinearLayout, PageId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError {
        line,
        message: message.into(),
    })
}

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

fn parse_num<T: std::str::FromStr>(line: usize, tok: &str, what: &str) -> Result<T, FormatError> {
    tok.parse().or_else(|_| err(line, format!("invalid {what} `{tok}`")))
}

/// A parsed `.lg` file: the graph and, when every edge carries one, its generation labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphFile {
    pub graph: Graph,
    pub generations: Option<BTreeMap<Edge, u32>>,
}

pub fn parse_graph(text: &str) -> Result<GraphFile, FormatError> {
    let mut lines = content_lines(text);
    match lines.next() {
        Some((_, t)) if t == ["laygraph", "1"] => {}
        Some((line, _)) => return err(line, "expected header `laygraph 1`"),
        None => return err(1, "empty file"),
    }
    let vertex_count: usize = match lines.next() {
        Some((line, t)) if t.len() == 2 && t[0] == "n" => parse_num(line, t[1], "vertex count")?,
        Some((line, _)) => return err(line, "expected `n <vertex_count>`"),
        None => return err(text.lines().count().max(1), "missing `n <vertex_count>` line"),
    };
    let mut graph = Graph::empty(vertex_count);
    let mut generations = BTreeMap::new();
    let mut labelled = 0usize;
    for (line, t) in lines {
        if t[0] != "e" || !(t.len() == 3 || t.len() == 4) {
            return err(line, "expected `e <u> <v> [g=<generation>]`");
        }
        let a: Vertex = parse_num(line, t[1], "vertex")?;
        let b: Vertex = parse_num(line, t[2], "vertex")?;
        if a >= b {
            return err(line, format!("edge endpoints must satisfy u < v, got {a} {b}"));
        }
        let e = Edge::new(a, b);
        graph.insert_edge(e).or_else(|ge| err(line, ge.to_string()))?;
        if t.len() == 4 {
            let Some(g) = t[3].strip_prefix("g=") else {
                return err(line, format!("expected `g=<generation>`, got `{}`", t[3]));
            };
            let g: u32 = parse_num(line, g, "generation")?;
            if g == 0 {
                return err(line, "generation must be positive");
            }
            generations.insert(e, g);
            labelled += 1;
        }
    }
    let generations = (labelled > 0 && labelled == graph.edge_count()).then_some(generations);
    Ok(GraphFile { graph, generations })
}

pub fn write_graph(graph: &Graph) -> String {
    write_graph_with(graph, |_| None)
}

pub fn write_two_tree(tree: &TwoTree) -> String {
    write_graph_with(tree.graph(), |e| tree.edge_generation(e))
}

fn write_graph_with(graph: &Graph, generation: impl Fn(Edge) -> Option<u32>) -> String {
    let mut out = String::new();
    writeln!(out, "laygraph 1").unwrap();
    writeln!(out, "n {}", graph.vertex_count()).unwrap();
    for e in graph.edges() {
        match generation(e) {
            Some(g) => writeln!(out, "e {} {} g={}", e.u(), e.v(), g).unwrap(),
            None => writeln!(out, "e {} {}", e.u(), e.v()).unwrap(),
        }
    }
    out
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RecognizeError {
    #[error("edges carry no generation labels")]
    Unlabelled,
    #[error("not a G(k,l) build: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Recovers the [`TwoTree`] of a G(k,l) graph file written by this crate.
///
/// `k` is the largest generation and `l` the number of generation-2 vertices;
/// the file must then match `build_gkl(k, l)` exactly, labels included.
pub fn recognize_gkl(file: &GraphFile) -> Result<TwoTree, RecognizeError> {
    let gens = file.generations.as_ref().ok_or(RecognizeError::Unlabelled)?;
    let k = gens.values().copied().max().unwrap_or(1);
    let ell = if k == 1 {
        1
    } else {
        let n = file.graph.vertex_count();
        if n < 3 {
            return Err(RecognizeError::Mismatch("too few vertices".into()));
        }
        // Generation-2 vertices are 2..2+l and each has both edges at generation 2.
        gens.iter().filter(|(e, &g)| g == 2 && e.u() == 0).count() as u32
    };
    let params = GklParams::new(k, ell)?;
    let (v, _) = crate::graph::gkl_size(params)?;
    if v != file.graph.vertex_count() as u64 {
        return Err(RecognizeError::Mismatch(format!(
            "{} vertices, {params} has {v}",
            file.graph.vertex_count()
        )));
    }
    let tree = build_gkl(params, None)?;
    if tree.graph() != &file.graph {
        return Err(RecognizeError::Mismatch(format!("edge set differs from {params}")));
    }
    if let Some((e, g)) = gens.iter().find(|(e, &g)| tree.edge_generation(**e) != Some(g)) {
        return Err(RecognizeError::Mismatch(format!("edge {e} labelled g={g}")));
    }
    Ok(tree)
}

pub fn parse_layout(text: &str) -> Result<LinearLayout, FormatError> {
    let mut lines = content_lines(text);
    match lines.next() {
        Some((_, t)) if t == ["laylayout", "1"] => {}
        Some((line, _)) => return err(line, "expected header `laylayout 1`"),
        None => return err(1, "empty file"),
    }
    let (order_line, order) = match lines.next() {
        Some((line, t)) if t[0] == "order" => {
            let order = t[1..]
                .iter()
                .map(|tok| parse_num::<Vertex>(line, tok, "vertex"))
                .collect::<Result<Vec<_>, _>>()?;
            (line, order)
        }
        Some((line, _)) => return err(line, "expected `order <v0> ... <vn-1>`"),
        None => return err(text.lines().count().max(1), "missing `order` line"),
    };
    let mut pages = BTreeMap::new();
    for (line, t) in lines {
        if t.len() != 4 || t[0] != "page" {
            return err(line, "expected `page <u> <v> <S#|Q#>`");
        }
        let a: Vertex = parse_num(line, t[1], "vertex")?;
        let b: Vertex = parse_num(line, t[2], "vertex")?;
        if a >= b {
            return err(line, format!("edge endpoints must satisfy u < v, got {a} {b}"));
        }
        let page: PageId = t[3].parse().or_else(|m: String| err(line, m))?;
        if pages.insert(Edge::new(a, b), page).is_some() {
            return err(line, format!("edge ({a},{b}) listed twice"));
        }
    }
    LinearLayout::new(order, pages).or_else(|e| err(order_line, e.to_string()))
}

pub fn write_layout(layout: &LinearLayout) -> String {
    let mut out = String::new();
    writeln!(out, "laylayout 1").unwrap();
    out.push_str("order");
    for v in layout.order() {
        write!(out, " {v}").unwrap();
    }
    out.push('\n');
    for (e, p) in layout.pages() {
        writeln!(out, "page {} {} {}", e.u(), e.v(), p).unwrap();
    }
    out
}

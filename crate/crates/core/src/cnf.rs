//! CNF encoding of "does this graph have a layout with these pages?".
//!
//! Variables are `order(u,v)` for `u < v` (true iff `u` precedes `v`) and one
//! page variable per edge and page. No auxiliary variables are used: every
//! forbidden crossing or nesting becomes one clause per offending 4-point order.
//!
//! Emitted DIMACS names every variable in a comment:
//!
//! ```text
//! c var 1 = order 0 1
//! c var 4 = page 0 1 S0
//! p cnf 4 2
//! ```

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::graph::{Edge, Graph, Vertex};
use crate::layout::{spans_cross, spans_nest, validate, LayoutError, LinearLayout, PageId, PageKind, PageSpec};

pub type Lit = i64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum VarMeaning {
    Order(Vertex, Vertex),
    Page(Edge, PageId),
}

impl fmt::Display for VarMeaning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarMeaning::Order(u, v) => write!(f, "order {u} {v}"),
            VarMeaning::Page(e, p) => write!(f, "page {} {} {}", e.u(), e.v(), p),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf {
    /// `vars[i]` is the meaning of variable `i + 1`.
    pub vars: Vec<VarMeaning>,
    pub clauses: Vec<Vec<Lit>>,
}

impl Cnf {
    pub fn variable_count(&self) -> usize {
        self.vars.len()
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        for (i, m) in self.vars.iter().enumerate() {
            writeln!(out, "c var {} = {}", i + 1, m).unwrap();
        }
        writeln!(out, "p cnf {} {}", self.vars.len(), self.clauses.len()).unwrap();
        for c in &self.clauses {
            for l in c {
                write!(out, "{l} ").unwrap();
            }
            out.push_str("0\n");
        }
        out
    }

    /// True iff `model` (indexed by variable, `model[0]` unused) satisfies every clause.
    pub fn satisfied_by(&self, model: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|&l| model[l.unsigned_abs() as usize] == (l > 0)))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CnfError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("variable {0} is not assigned by the model")]
    Unassigned(usize),
    #[error("variable {0} is assigned both ways")]
    Contradictory(usize),
    #[error("literal {0} references no declared variable")]
    UnknownVariable(Lit),
    #[error("order variables do not form a total order (vertex {0} has a repeated rank)")]
    NotTotal(Vertex),
    #[error("edge {0} is on {1} pages, expected exactly one")]
    NotOneHot(Edge, usize),
    #[error("decoded layout is invalid: {0}")]
    Invalid(String),
    #[error(transparent)]
    Layout(#[from] LayoutError),
}

fn parse_err<T>(line: usize, message: impl Into<String>) -> Result<T, CnfError> {
    Err(CnfError::Parse {
        line,
        message: message.into(),
    })
}

struct Vars {
    n: usize,
    pages: Vec<PageId>,
    edge_index: BTreeMap<Edge, usize>,
}

impl Vars {
    fn order_count(&self) -> usize {
        self.n * self.n.saturating_sub(1) / 2
    }

    /// Variable of `order(u,v)` for `u < v`.
    fn order_var(&self, u: Vertex, v: Vertex) -> Lit {
        debug_assert!(u < v);
        // pairs (0,1),(0,2),..,(0,n-1),(1,2),..
        let before = u * self.n - u * (u + 1) / 2;
        (before + (v - u - 1) + 1) as Lit
    }

    /// Literal true iff `a` precedes `b`.
    fn precedes(&self, a: Vertex, b: Vertex) -> Lit {
        if a < b {
            self.order_var(a, b)
        } else {
            -self.order_var(b, a)
        }
    }

    fn page_var(&self, e: Edge, page: usize) -> Lit {
        (self.order_count() + self.edge_index[&e] * self.pages.len() + page + 1) as Lit
    }
}

/// Encodes layout existence for `graph` with the pages of `spec`.
pub fn encode(graph: &Graph, spec: PageSpec) -> Cnf {
    let n = graph.vertex_count();
    let edges: Vec<Edge> = graph.edges().collect();
    let vars = Vars {
        n,
        pages: spec.pages().collect(),
        edge_index: edges.iter().enumerate().map(|(i, &e)| (e, i)).collect(),
    };
    let mut meanings = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            meanings.push(VarMeaning::Order(u, v));
        }
    }
    for &e in &edges {
        for &p in &vars.pages {
            meanings.push(VarMeaning::Page(e, p));
        }
    }
    let mut clauses: Vec<Vec<Lit>> = Vec::new();
    // no directed 3-cycle: two clauses per unordered triple
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                clauses.push(vec![-vars.precedes(a, b), -vars.precedes(b, c), vars.precedes(a, c)]);
                clauses.push(vec![-vars.precedes(a, c), -vars.precedes(c, b), vars.precedes(a, b)]);
            }
        }
    }
    for &e in &edges {
        let lits: Vec<Lit> = (0..vars.pages.len()).map(|p| vars.page_var(e, p)).collect();
        clauses.push(lits.clone());
        for i in 0..lits.len() {
            for j in i + 1..lits.len() {
                clauses.push(vec![-lits[i], -lits[j]]);
            }
        }
    }
    let orders = four_point_orders();
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            let (e, f) = (edges[i], edges[j]);
            if e.shares_endpoint(f) {
                continue;
            }
            let pts = [e.u(), e.v(), f.u(), f.v()];
            for (p, &page) in vars.pages.iter().enumerate() {
                let forbidden = match page.kind {
                    PageKind::Stack => &orders.crossing,
                    PageKind::Queue => &orders.nesting,
                };
                for perm in forbidden {
                    let seq = perm.map(|k| pts[k]);
                    let mut c: Vec<Lit> = seq.windows(2).map(|w| -vars.precedes(w[0], w[1])).collect();
                    c.push(-vars.page_var(e, p));
                    c.push(-vars.page_var(f, p));
                    clauses.push(c);
                }
            }
        }
    }
    for c in &mut clauses {
        c.sort_by_key(|&l| (l.unsigned_abs(), l < 0));
    }
    clauses.sort();
    Cnf {
        vars: meanings,
        clauses,
    }
}

/// Left-to-right arrangements of the points `0,1` (edge e) and `2,3` (edge f)
/// in which the two edges cross or nest.
struct FourPointOrders {
    crossing: Vec<[usize; 4]>,
    nesting: Vec<[usize; 4]>,
}

fn four_point_orders() -> FourPointOrders {
    let mut out = FourPointOrders {
        crossing: Vec::new(),
        nesting: Vec::new(),
    };
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let perm = [a, b, c, d];
                    let mut seen = [false; 4];
                    perm.iter().for_each(|&x| seen[x] = true);
                    if !seen.iter().all(|&s| s) {
                        continue;
                    }
                    let mut pos = [0usize; 4];
                    for (r, &x) in perm.iter().enumerate() {
                        pos[x] = r;
                    }
                    let span = |x: usize, y: usize| (pos[x].min(pos[y]), pos[x].max(pos[y]));
                    let (se, sf) = (span(0, 1), span(2, 3));
                    if spans_cross(se, sf) {
                        out.crossing.push(perm);
                    }
                    if spans_nest(se, sf) {
                        out.nesting.push(perm);
                    }
                }
            }
        }
    }
    out
}

/// Parses DIMACS text back into a [`Cnf`], variable names included.
pub fn parse_dimacs(text: &str) -> Result<Cnf, CnfError> {
    let mut names: BTreeMap<usize, VarMeaning> = BTreeMap::new();
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t: Vec<&str> = raw.split_whitespace().collect();
        match t.first() {
            None => continue,
            Some(&"c") => {
                if t.get(1) == Some(&"var") {
                    let (id, m) = parse_var_comment(line, &t)?;
                    names.insert(id, m);
                }
            }
            Some(&"p") => {
                if t.len() != 4 || t[1] != "cnf" {
                    return parse_err(line, "expected `p cnf <vars> <clauses>`");
                }
                let v = t[2].parse().or_else(|_| parse_err(line, "bad variable count"))?;
                let c = t[3].parse().or_else(|_| parse_err(line, "bad clause count"))?;
                header = Some((v, c));
            }
            Some(_) => {
                let Some((nv, _)) = header else {
                    return parse_err(line, "clause before `p cnf` header");
                };
                for tok in t {
                    let l: Lit = tok
                        .parse()
                        .or_else(|_| parse_err(line, format!("bad literal `{tok}`")))?;
                    if l == 0 {
                        clauses.push(std::mem::take(&mut current));
                    } else if l.unsigned_abs() as usize > nv {
                        return Err(CnfError::UnknownVariable(l));
                    } else {
                        current.push(l);
                    }
                }
            }
        }
    }
    let Some((nv, nc)) = header else {
        return parse_err(text.lines().count().max(1), "missing `p cnf` header");
    };
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != nc {
        return parse_err(
            text.lines().count().max(1),
            format!("header says {nc} clauses, found {}", clauses.len()),
        );
    }
    let vars = (1..=nv)
        .map(|id| names.get(&id).copied().ok_or(CnfError::Unassigned(id)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Cnf { vars, clauses })
}

fn parse_var_comment(line: usize, t: &[&str]) -> Result<(usize, VarMeaning), CnfError> {
    fn bad<T>(line: usize) -> Result<T, CnfError> {
        parse_err(
            line,
            "expected `c var <id> = order <u> <v>` or `c var <id> = page <u> <v> <P>`",
        )
    }
    if t.len() < 6 || t[3] != "=" {
        return bad(line);
    }
    let id: usize = t[2].parse().or_else(|_| bad(line))?;
    let u: Vertex = t[5].parse().or_else(|_| bad(line))?;
    let v: Vertex = match t.get(6) {
        Some(s) => s.parse().or_else(|_| bad(line))?,
        None => return bad(line),
    };
    if u >= v {
        return bad(line);
    }
    let m = match (t[4], t.len()) {
        ("order", 7) => VarMeaning::Order(u, v),
        ("page", 8) => VarMeaning::Page(Edge::new(u, v), t[7].parse().or_else(|_| bad(line))?),
        _ => return bad(line),
    };
    Ok((id, m))
}

/// Reads a model: `v` lines from a solver or a bare list of literals.
/// `s` and `c` lines and `0` terminators are ignored.
///
/// Returns `model[var]` for `var` in `1..=variable_count`.
pub fn parse_model(text: &str, variable_count: usize) -> Result<Vec<bool>, CnfError> {
    let mut value: Vec<Option<bool>> = vec![None; variable_count + 1];
    for (i, raw) in text.lines().enumerate() {
        let mut t = raw.split_whitespace().peekable();
        match t.peek() {
            None | Some(&"s") | Some(&"c") => continue,
            Some(&"v") => {
                t.next();
            }
            _ => {}
        }
        for tok in t {
            let l: Lit = tok
                .parse()
                .or_else(|_| parse_err(i + 1, format!("bad literal `{tok}`")))?;
            if l == 0 {
                continue;
            }
            let var = l.unsigned_abs() as usize;
            if var > variable_count {
                return Err(CnfError::UnknownVariable(l));
            }
            if value[var].is_some_and(|b| b != (l > 0)) {
                return Err(CnfError::Contradictory(var));
            }
            value[var] = Some(l > 0);
        }
    }
    let mut model = vec![false; variable_count + 1];
    for var in 1..=variable_count {
        model[var] = value[var].ok_or(CnfError::Unassigned(var))?;
    }
    Ok(model)
}

/// Turns a model into a layout and re-validates it.
///
/// Fails when the order variables are not a total order, an edge is not on
/// exactly one page, or the layout has a conflict; any of these means the
/// model does not satisfy the encoding.
pub fn decode(graph: &Graph, spec: PageSpec, model: &[bool]) -> Result<LinearLayout, CnfError> {
    let cnf_vars = encode_vars(graph, spec);
    let n = graph.vertex_count();
    if model.len() < cnf_vars.order_count() + graph.edge_count() * cnf_vars.pages.len() + 1 {
        return Err(CnfError::Unassigned(model.len()));
    }
    let holds = |l: Lit| model[l.unsigned_abs() as usize] == (l > 0);
    let mut rank = vec![0usize; n];
    for (u, r) in rank.iter_mut().enumerate() {
        *r = (0..n).filter(|&w| w != u && holds(cnf_vars.precedes(w, u))).count();
    }
    let mut order = vec![usize::MAX; n];
    for (u, &r) in rank.iter().enumerate() {
        if order[r] != usize::MAX {
            return Err(CnfError::NotTotal(u));
        }
        order[r] = u;
    }
    let mut pages = BTreeMap::new();
    for e in graph.edges() {
        let on: Vec<PageId> = (0..cnf_vars.pages.len())
            .filter(|&p| holds(cnf_vars.page_var(e, p)))
            .map(|p| cnf_vars.pages[p])
            .collect();
        if on.len() != 1 {
            return Err(CnfError::NotOneHot(e, on.len()));
        }
        pages.insert(e, on[0]);
    }
    let layout = LinearLayout::new(order, pages)?;
    let report = validate(graph, &layout, spec)?;
    if let Some(c) = report.conflicts.first() {
        return Err(CnfError::Invalid(c.to_string()));
    }
    Ok(layout)
}

fn encode_vars(graph: &Graph, spec: PageSpec) -> Vars {
    Vars {
        n: graph.vertex_count(),
        pages: spec.pages().collect(),
        edge_index: graph.edges().enumerate().map(|(i, e)| (e, i)).collect(),
    }
}

/// The model describing `layout`; it satisfies `encode(graph, spec)` iff the layout is valid.
pub fn model_of(graph: &Graph, spec: PageSpec, layout: &LinearLayout) -> Vec<bool> {
    let vars = encode_vars(graph, spec);
    let mut model = vec![false; vars.order_count() + graph.edge_count() * vars.pages.len() + 1];
    for u in 0..vars.n {
        for v in u + 1..vars.n {
            model[vars.order_var(u, v) as usize] = layout.precedes(u, v);
        }
    }
    for e in graph.edges() {
        if let Some(p) = layout.page(e).and_then(|p| vars.pages.iter().position(|&q| q == p)) {
            model[vars.page_var(e, p) as usize] = true;
        }
    }
    model
}

/// Renders a model as a DIMACS `v` line.
pub fn write_model(model: &[bool]) -> String {
    let mut out = String::from("v");
    for (var, &b) in model.iter().enumerate().skip(1) {
        write!(out, " {}", if b { var as Lit } else { -(var as Lit) }).unwrap();
    }
    out.push_str(" 0\n");
    out
}

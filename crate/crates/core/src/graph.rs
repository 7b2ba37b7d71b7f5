//! Simple undirected graphs and 2-trees built by repeated attachment.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

pub type Vertex = usize;

/// Unordered vertex pair, stored with the smaller id first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    u: Vertex,
    v: Vertex,
}

impl Edge {
    /// Normalizes the pair. Panics on a self-loop.
    pub fn new(a: Vertex, b: Vertex) -> Edge {
        assert_ne!(a, b, "self-loop ({a},{a})");
        if a < b {
            Edge { u: a, v: b }
        } else {
            Edge { u: b, v: a }
        }
    }

    pub fn try_new(a: Vertex, b: Vertex) -> Option<Edge> {
        (a != b).then(|| Edge::new(a, b))
    }

    pub fn u(self) -> Vertex {
        self.u
    }

    pub fn v(self) -> Vertex {
        self.v
    }

    pub fn endpoints(self) -> (Vertex, Vertex) {
        (self.u, self.v)
    }

    pub fn contains(self, x: Vertex) -> bool {
        self.u == x || self.v == x
    }

    pub fn shares_endpoint(self, other: Edge) -> bool {
        self.contains(other.u) || self.contains(other.v)
    }

    /// The endpoint that is not `x`.
    pub fn other(self, x: Vertex) -> Option<Vertex> {
        if self.u == x {
            Some(self.v)
        } else if self.v == x {
            Some(self.u)
        } else {
            None
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.u, self.v)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {0}")]
    DuplicateEdge(Edge),
    #[error("edge {edge} references a vertex >= {vertex_count}")]
    VertexOutOfRange { edge: Edge, vertex_count: usize },
    #[error("edge {0} is not in the graph")]
    UnknownEdge(Edge),
    #[error("G(k,l) requires k >= 1 and l >= 1, got k={k} l={ell}")]
    InvalidParams { k: u32, ell: u32 },
    #[error("size of G({k},{ell}) overflows 64-bit arithmetic")]
    SizeOverflow { k: u32, ell: u32 },
    #[error("G({k},{ell}) has {vertices} vertices and {edges} edges, over the cap of {cap} vertices")]
    SizeCapExceeded {
        k: u32,
        ell: u32,
        vertices: u64,
        edges: u64,
        cap: u64,
    },
    #[error("generation {g} out of range 1..={max}")]
    GenerationOutOfRange { g: u32, max: u32 },
    #[error(
        "generation {requested} for an attachment to {parent} must exceed the edge generation {parent_generation}"
    )]
    GenerationTooLow {
        parent: Edge,
        parent_generation: u32,
        requested: u32,
    },
}

/// Simple undirected graph on vertices `0..vertex_count`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: BTreeSet<Edge>,
    adjacency: Vec<BTreeSet<Vertex>>,
}

impl Graph {
    pub fn empty(vertex_count: usize) -> Graph {
        Graph {
            vertex_count,
            edges: BTreeSet::new(),
            adjacency: vec![BTreeSet::new(); vertex_count],
        }
    }

    /// Builds a graph, rejecting self-loops, duplicates and out-of-range endpoints.
    pub fn from_edges<I>(vertex_count: usize, pairs: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut g = Graph::empty(vertex_count);
        for (a, b) in pairs {
            let e = Edge::try_new(a, b).ok_or(GraphError::SelfLoop(a))?;
            g.insert_edge(e)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for a in 0..n {
            for b in a + 1..n {
                g.insert_edge(Edge::new(a, b)).unwrap();
            }
        }
        g
    }

    pub fn complete_bipartite(left: usize, right: usize) -> Graph {
        let mut g = Graph::empty(left + right);
        for a in 0..left {
            for b in left..left + right {
                g.insert_edge(Edge::new(a, b)).unwrap();
            }
        }
        g
    }

    pub fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "a simple cycle needs at least 3 vertices");
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    pub(crate) fn insert_edge(&mut self, e: Edge) -> Result<(), GraphError> {
        if e.v >= self.vertex_count {
            return Err(GraphError::VertexOutOfRange {
                edge: e,
                vertex_count: self.vertex_count,
            });
        }
        if !self.edges.insert(e) {
            return Err(GraphError::DuplicateEdge(e));
        }
        self.adjacency[e.u].insert(e.v);
        self.adjacency[e.v].insert(e.u);
        Ok(())
    }

    pub(crate) fn add_vertex(&mut self) -> Vertex {
        self.adjacency.push(BTreeSet::new());
        self.vertex_count += 1;
        self.vertex_count - 1
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in normalized lexicographic order.
    pub fn edges(&self) -> impl ExactSizeIterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.edges.contains(&e)
    }

    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.adjacency[v].iter().copied()
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v].len()
    }

    /// Subgraph on the same vertex ids containing only the given edges.
    pub fn edge_induced<I: IntoIterator<Item = Edge>>(&self, edges: I) -> Graph {
        let mut g = Graph::empty(self.vertex_count);
        for e in edges {
            debug_assert!(self.contains_edge(e));
            let _ = g.insert_edge(e);
        }
        g
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GklParams {
    pub k: u32,
    pub ell: u32,
}

impl GklParams {
    pub fn new(k: u32, ell: u32) -> Result<GklParams, GraphError> {
        if k == 0 || ell == 0 {
            return Err(GraphError::InvalidParams { k, ell });
        }
        Ok(GklParams { k, ell })
    }
}

impl fmt::Display for GklParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G({},{})", self.k, self.ell)
    }
}

/// `(vertex_count, edge_count)` of G(k,l) from the closed form
/// `E = (2l+1)^(k-1)`, `V = 2 + (E-1)/2`, with checked arithmetic.
pub fn gkl_size(params: GklParams) -> Result<(u64, u64), GraphError> {
    let overflow = GraphError::SizeOverflow {
        k: params.k,
        ell: params.ell,
    };
    let base = u64::from(params.ell)
        .checked_mul(2)
        .and_then(|x| x.checked_add(1))
        .ok_or(overflow.clone())?;
    let edges = base.checked_pow(params.k - 1).ok_or(overflow.clone())?;
    let vertices = ((edges - 1) / 2).checked_add(2).ok_or(overflow)?;
    Ok((vertices, edges))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AttachmentRecord {
    pub new_vertex: Vertex,
    pub parent_edge: Edge,
    pub generation: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenerationMode {
    /// Edges of generation at most g: the graph G(g,l).
    UpTo,
    /// Edges of generation exactly g: the newest layer of G(g,l).
    Exactly,
}

/// A 2-tree together with the attachment log that produced it.
///
/// The base edge is `(0,1)` with generation 1; every later vertex and both of
/// its edges carry the generation of the attachment that created them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoTree {
    graph: Graph,
    base_edge: Edge,
    log: Vec<AttachmentRecord>,
    vertex_generation: Vec<u32>,
    edge_generation: BTreeMap<Edge, u32>,
    children: HashMap<Edge, Vec<Vertex>>,
    gkl: Option<GklParams>,
}

impl TwoTree {
    /// The single edge `(0,1)`.
    pub fn base() -> TwoTree {
        let base_edge = Edge::new(0, 1);
        let graph = Graph::from_edges(2, [(0, 1)]).unwrap();
        TwoTree {
            graph,
            base_edge,
            log: Vec::new(),
            vertex_generation: vec![1, 1],
            edge_generation: BTreeMap::from([(base_edge, 1)]),
            children: HashMap::new(),
            gkl: None,
        }
    }

    /// Returns a new tree with one vertex attached to `parent`, at generation
    /// `generation(parent) + 1`.
    pub fn attach(&self, parent: Edge) -> Result<TwoTree, GraphError> {
        let mut next = self.clone();
        next.gkl = None;
        let g = next.edge_generation(parent).ok_or(GraphError::UnknownEdge(parent))? + 1;
        next.attach_in_place(parent, g)?;
        Ok(next)
    }

    pub(crate) fn attach_in_place(&mut self, parent: Edge, generation: u32) -> Result<Vertex, GraphError> {
        let parent_generation = *self
            .edge_generation
            .get(&parent)
            .ok_or(GraphError::UnknownEdge(parent))?;
        if generation <= parent_generation {
            return Err(GraphError::GenerationTooLow {
                parent,
                parent_generation,
                requested: generation,
            });
        }
        let x = self.graph.add_vertex();
        for end in [parent.u, parent.v] {
            let e = Edge::new(x, end);
            self.graph.insert_edge(e)?;
            self.edge_generation.insert(e, generation);
        }
        self.vertex_generation.push(generation);
        self.log.push(AttachmentRecord {
            new_vertex: x,
            parent_edge: parent,
            generation,
        });
        self.children.entry(parent).or_default().push(x);
        Ok(x)
    }

    /// Rebuilds a tree from a base edge `(0,1)` and an attachment log.
    pub fn replay(log: &[AttachmentRecord]) -> Result<TwoTree, GraphError> {
        let mut tree = TwoTree::base();
        for rec in log {
            let x = tree.attach_in_place(rec.parent_edge, rec.generation)?;
            debug_assert_eq!(x, rec.new_vertex);
        }
        Ok(tree)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn base_edge(&self) -> Edge {
        self.base_edge
    }

    pub fn log(&self) -> &[AttachmentRecord] {
        &self.log
    }

    /// Parameters when this tree came from [`build_gkl`].
    pub fn gkl(&self) -> Option<GklParams> {
        self.gkl
    }

    pub fn vertex_generation(&self, v: Vertex) -> u32 {
        self.vertex_generation[v]
    }

    pub fn edge_generation(&self, e: Edge) -> Option<u32> {
        self.edge_generation.get(&e).copied()
    }

    pub fn max_generation(&self) -> u32 {
        self.vertex_generation.iter().copied().max().unwrap_or(1)
    }

    /// The edge a non-base vertex was attached to.
    pub fn parent_edge(&self, v: Vertex) -> Option<Edge> {
        if v < 2 {
            return None;
        }
        self.log.get(v - 2).map(|r| r.parent_edge)
    }

    /// Vertices attached to `e`, in creation order, optionally restricted to one generation.
    pub fn attachments_of(&self, e: Edge, generation: Option<u32>) -> Vec<Vertex> {
        self.children
            .get(&e)
            .map(|xs| {
                xs.iter()
                    .copied()
                    .filter(|&x| generation.is_none_or(|g| self.vertex_generation[x] == g))
                    .collect()
            })
            .unwrap_or_default()
    }

    /// Vertices whose generation is at most `g`.
    pub fn vertices_up_to(&self, g: u32) -> BTreeSet<Vertex> {
        (0..self.graph.vertex_count())
            .filter(|&v| self.vertex_generation[v] <= g)
            .collect()
    }

    /// Edges of generation at most `g` with their generation.
    pub fn edges_up_to(&self, g: u32) -> impl Iterator<Item = Edge> + '_ {
        self.edge_generation
            .iter()
            .filter(move |(_, &eg)| eg <= g)
            .map(|(&e, _)| e)
    }

    /// Edge-induced subgraph by generation, vertex ids preserved.
    pub fn subgraph_by_generation(&self, g: u32, mode: GenerationMode) -> Result<Graph, GraphError> {
        let max = self.max_generation();
        if g == 0 || g > max {
            return Err(GraphError::GenerationOutOfRange { g, max });
        }
        let keep = self.edge_generation.iter().filter(|(_, &eg)| match mode {
            GenerationMode::UpTo => eg <= g,
            GenerationMode::Exactly => eg == g,
        });
        Ok(self.graph.edge_induced(keep.map(|(&e, _)| e)))
    }
}

/// Builds G(k,l) in the canonical creation order: generation by generation,
/// parent edges in their own creation order, `l` attachments per edge.
///
/// `vertex_cap` refuses the build up front when the closed-form size is larger.
pub fn build_gkl(params: GklParams, vertex_cap: Option<u64>) -> Result<TwoTree, GraphError> {
    let (vertices, edges) = gkl_size(params)?;
    if let Some(cap) = vertex_cap {
        if vertices > cap {
            return Err(GraphError::SizeCapExceeded {
                k: params.k,
                ell: params.ell,
                vertices,
                edges,
                cap,
            });
        }
    }
    let mut tree = TwoTree::base();
    // Edges in creation order; each generation attaches to all of them.
    let mut created: Vec<Edge> = vec![tree.base_edge];
    for g in 2..=params.k {
        let existing = created.len();
        for idx in 0..existing {
            let parent = created[idx];
            for _ in 0..params.ell {
                let x = tree.attach_in_place(parent, g)?;
                created.push(Edge::new(parent.u, x));
                created.push(Edge::new(parent.v, x));
            }
        }
    }
    tree.gkl = Some(params);
    Ok(tree)
}

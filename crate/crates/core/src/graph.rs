//! Directed branch graph over polyphase nodes.
//!
//! Ground is not a vertex: shunts are stored on the grid model, so the
//! graph only carries node-to-node branches. Parallel branches are
//! allowed and each one gets its own incidence row.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{Complex64, ComplexMatrix};

/// Index of a polyphase node, 0-based in model order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DirectedEdge {
    pub from: NodeId,
    pub to: NodeId,
    pub edge_index: usize,
}

/// `B = (N, L)`: node count plus an ordered edge list. Edge order fixes the
/// incidence-matrix row order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchGraph {
    node_count: usize,
    edges: Vec<DirectedEdge>,
}

impl BranchGraph {
    pub fn new(node_count: usize) -> Self {
        Self {
            node_count,
            edges: Vec::new(),
        }
    }

    /// Builds a graph from `(from, to)` index pairs.
    pub fn from_pairs(node_count: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::new(node_count);
        for &(a, b) in pairs {
            g.add_edge(NodeId(a), NodeId(b))?;
        }
        Ok(g)
    }

    /// Appends an edge and returns its index. Self-loops are rejected.
    pub fn add_edge(&mut self, from: NodeId, to: NodeId) -> Result<usize> {
        self.check_node(from)?;
        self.check_node(to)?;
        if from == to {
            return Err(Error::InvalidPartition(format!("self-loop at node {from}")));
        }
        let edge_index = self.edges.len();
        self.edges.push(DirectedEdge { from, to, edge_index });
        Ok(edge_index)
    }

    /// Appends an isolated node and returns its id.
    pub fn add_node(&mut self) -> NodeId {
        self.node_count += 1;
        NodeId(self.node_count - 1)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[DirectedEdge] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> &DirectedEdge {
        &self.edges[index]
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.node_count).map(NodeId)
    }

    fn check_node(&self, n: NodeId) -> Result<()> {
        if n.0 < self.node_count {
            Ok(())
        } else {
            Err(Error::UnknownNode(n.to_string()))
        }
    }

    /// Membership mask for a node set, validating every id.
    pub(crate) fn mask(&self, set: &[NodeId]) -> Result<Vec<bool>> {
        let mut mask = vec![false; self.node_count];
        for &n in set {
            self.check_node(n)?;
            mask[n.0] = true;
        }
        Ok(mask)
    }
}

/// `|L| × |N|` matrix with `+1` at the tail and `−1` at the head of each edge.
pub fn incidence_matrix(g: &BranchGraph) -> ComplexMatrix {
    let mut rows = vec![vec![Complex64::new(0.0, 0.0); g.node_count]; g.edges.len()];
    for e in &g.edges {
        rows[e.edge_index][e.from.0] = Complex64::new(1.0, 0.0);
        rows[e.edge_index][e.to.0] = Complex64::new(-1.0, 0.0);
    }
    if rows.is_empty() {
        return ComplexMatrix::zeros(0, g.node_count);
    }
    ComplexMatrix::from_rows(&rows).expect("incidence entries are finite")
}

/// Union-find over undirected adjacency.
struct DisjointSets(Vec<usize>);

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // smaller root wins so representatives are minimal members
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// Weakly connected components of the whole graph, sorted by smallest member.
pub fn components(g: &BranchGraph) -> Vec<Vec<NodeId>> {
    let all: Vec<NodeId> = g.nodes().collect();
    induced_components(g, &all).unwrap_or_default()
}

/// True iff the undirected version of `g` is connected.
pub fn is_weakly_connected(g: &BranchGraph) -> bool {
    g.node_count <= 1 || components(g).len() == 1
}

/// Indices of edges with both endpoints in `w`, ascending.
pub fn internal_edges(g: &BranchGraph, w: &[NodeId]) -> Result<Vec<usize>> {
    let mask = g.mask(w)?;
    Ok(g.edges
        .iter()
        .filter(|e| mask[e.from.0] && mask[e.to.0])
        .map(|e| e.edge_index)
        .collect())
}

/// Indices of edges leaving `w` (tail inside, head outside), ascending.
/// `w` must be a proper non-empty subset.
pub fn cut_set(g: &BranchGraph, w: &[NodeId]) -> Result<Vec<usize>> {
    let mask = g.mask(w)?;
    let inside = mask.iter().filter(|&&m| m).count();
    if inside == 0 || inside == g.node_count {
        return Err(Error::InvalidCut);
    }
    Ok(g.edges
        .iter()
        .filter(|e| mask[e.from.0] && !mask[e.to.0])
        .map(|e| e.edge_index)
        .collect())
}

/// Partition of `m` into the weakly connected components of the subgraph
/// `(m, internal_edges(m))`, each sorted ascending, parts ordered by their
/// smallest member.
pub fn induced_components(g: &BranchGraph, m: &[NodeId]) -> Result<Vec<Vec<NodeId>>> {
    let mask = g.mask(m)?;
    let mut sets = DisjointSets::new(g.node_count);
    for e in &g.edges {
        if mask[e.from.0] && mask[e.to.0] {
            sets.union(e.from.0, e.to.0);
        }
    }
    let members: BTreeSet<usize> = m.iter().map(|n| n.0).collect();
    let mut parts: Vec<(usize, Vec<NodeId>)> = Vec::new();
    for i in members {
        let root = sets.find(i);
        match parts.iter_mut().find(|(r, _)| *r == root) {
            Some((_, part)) => part.push(NodeId(i)),
            None => parts.push((root, vec![NodeId(i)])),
        }
    }
    Ok(parts.into_iter().map(|(_, p)| p).collect())
}

//! Undirected room-adjacency graphs.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("edge ({0}, {1}) references a vertex outside 0..{2}")]
    VertexOutOfRange(usize, usize, usize),
    #[error("{labels} labels supplied for {vertices} vertices")]
    LabelCount { labels: usize, vertices: usize },
}

/// An unordered pair stored with the smaller endpoint first.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(pub usize, pub usize);

impl Edge {
    pub fn new(a: usize, b: usize) -> Self {
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn other(self, v: usize) -> usize {
        if self.0 == v {
            self.1
        } else {
            self.0
        }
    }

    pub fn contains(self, v: usize) -> bool {
        self.0 == v || self.1 == v
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0, self.1)
    }
}

/// Simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyGraph {
    labels: Vec<Option<String>>,
    adj: Vec<BTreeSet<usize>>,
    /// Edges in insertion order, as given by the caller.
    edge_list: Vec<Edge>,
}

impl AdjacencyGraph {
    pub fn new(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = AdjacencyGraph {
            labels: vec![None; vertex_count],
            adj: vec![BTreeSet::new(); vertex_count],
            edge_list: Vec::with_capacity(edges.len()),
        };
        for &(a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn with_labels(
        vertex_count: usize,
        edges: &[(usize, usize)],
        labels: Vec<Option<String>>,
    ) -> Result<Self, GraphError> {
        if labels.len() != vertex_count {
            return Err(GraphError::LabelCount {
                labels: labels.len(),
                vertices: vertex_count,
            });
        }
        let mut g = Self::new(vertex_count, edges)?;
        g.labels = labels;
        Ok(g)
    }

    pub fn add_vertex(&mut self, label: Option<String>) -> usize {
        self.labels.push(label);
        self.adj.push(BTreeSet::new());
        self.adj.len() - 1
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<(), GraphError> {
        let n = self.adj.len();
        if a >= n || b >= n {
            return Err(GraphError::VertexOutOfRange(a, b, n));
        }
        if a == b {
            return Err(GraphError::SelfLoop(a));
        }
        if !self.adj[a].insert(b) {
            return Err(GraphError::DuplicateEdge(a, b));
        }
        self.adj[b].insert(a);
        self.edge_list.push(Edge::new(a, b));
        Ok(())
    }

    pub fn remove_edge(&mut self, a: usize, b: usize) -> bool {
        if a >= self.adj.len() || b >= self.adj.len() || !self.adj[a].remove(&b) {
            return false;
        }
        self.adj[b].remove(&a);
        let e = Edge::new(a, b);
        self.edge_list.retain(|&x| x != e);
        true
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_list.len()
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels[v].as_deref()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.adj.len() && self.adj[a].contains(&b)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().copied()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Edges in the order they were added.
    pub fn edges_in_order(&self) -> &[Edge] {
        &self.edge_list
    }

    /// Edges sorted lexicographically.
    pub fn edges(&self) -> Vec<Edge> {
        let mut e = self.edge_list.clone();
        e.sort();
        e
    }

    /// All 3-cycles as sorted triples, in lexicographic order.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let mut out = Vec::new();
        for a in 0..self.vertex_count() {
            for &b in self.adj[a].range(a + 1..) {
                for &c in self.adj[b].range(b + 1..) {
                    if self.adj[a].contains(&c) {
                        out.push([a, b, c]);
                    }
                }
            }
        }
        out
    }

    /// Number of connected components among vertices not in `removed`.
    pub fn components_without(&self, removed: &[usize]) -> usize {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        for &r in removed {
            seen[r] = true;
        }
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            stack.push(s);
            while let Some(v) = stack.pop() {
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.components_without(&[]) <= 1
    }

    /// Induced subgraph on `vertices`; returned indices follow the slice order.
    pub fn induced(&self, vertices: &[usize]) -> AdjacencyGraph {
        let mut index = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut g = AdjacencyGraph {
            labels: vertices.iter().map(|&v| self.labels[v].clone()).collect(),
            adj: vec![BTreeSet::new(); vertices.len()],
            edge_list: Vec::new(),
        };
        for e in &self.edge_list {
            let (a, b) = (index[e.0], index[e.1]);
            if a != usize::MAX && b != usize::MAX {
                g.add_edge(a, b).expect("induced edge is valid");
            }
        }
        g
    }
}

/// Cut vertices and biconnected blocks (each block as a sorted vertex list).
pub fn blocks(g: &AdjacencyGraph) -> (Vec<usize>, Vec<Vec<usize>>) {
    let n = g.vertex_count();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut is_cut = vec![false; n];
    let mut blocks = Vec::new();
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();
    let mut time = 0;

    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        if g.degree(root) == 0 {
            blocks.push(vec![root]);
            disc[root] = time;
            time += 1;
            continue;
        }
        // iterative DFS: (vertex, parent, neighbor list, cursor)
        let mut stack: Vec<(usize, usize, Vec<usize>, usize)> = Vec::new();
        disc[root] = time;
        low[root] = time;
        time += 1;
        stack.push((root, usize::MAX, g.neighbors(root).collect(), 0));
        let mut root_children = 0;
        while let Some(top) = stack.last_mut() {
            let (v, parent) = (top.0, top.1);
            if top.3 < top.2.len() {
                let w = top.2[top.3];
                top.3 += 1;
                if disc[w] == usize::MAX {
                    edge_stack.push((v, w));
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    if v == root {
                        root_children += 1;
                    }
                    stack.push((w, v, g.neighbors(w).collect(), 0));
                } else if w != parent && disc[w] < disc[v] {
                    edge_stack.push((v, w));
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(p) = stack.last() {
                    let u = p.0;
                    low[u] = low[u].min(low[v]);
                    if low[v] >= disc[u] {
                        if u != root {
                            is_cut[u] = true;
                        }
                        let mut block = BTreeSet::new();
                        while let Some((a, b)) = edge_stack.pop() {
                            block.insert(a);
                            block.insert(b);
                            if (a, b) == (u, v) {
                                break;
                            }
                        }
                        blocks.push(block.into_iter().collect());
                    }
                }
            }
        }
        if root_children > 1 {
            is_cut[root] = true;
        }
    }
    blocks.sort();
    let cuts = (0..n).filter(|&v| is_cut[v]).collect();
    (cuts, blocks)
}

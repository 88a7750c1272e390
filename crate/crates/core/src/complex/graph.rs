use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

/// Color of a vertex or an edge.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Color(pub u32);

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub color: Color,
}

/// An edge between two distinct vertices, referenced by index.
///
/// `ends` keeps the order it was declared in. Only production bottoms give
/// that order a meaning (tail, head); everywhere else edges are unoriented.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub ends: [usize; 2],
    pub color: Color,
}

impl Edge {
    pub fn other_end(&self, v: usize) -> usize {
        if self.ends[0] == v {
            self.ends[1]
        } else {
            self.ends[0]
        }
    }

    pub fn has_end(&self, v: usize) -> bool {
        self.ends[0] == v || self.ends[1] == v
    }
}

/// A cell of a graph: a vertex or an edge, by index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cell {
    Vertex(usize),
    Edge(usize),
}

/// A finite colored 1-dimensional simplicial complex.
///
/// Vertices and edges are kept sorted by identifier, and identifiers are unique
/// across both kinds of cells. No self-loops, no multi-edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    // (neighbor, edge) pairs sorted by neighbor index.
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl ColoredGraph {
    /// Builds a graph from parts that are already sorted by id and valid.
    pub(crate) fn from_sorted_parts(vertices: Vec<Vertex>, edges: Vec<Edge>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0].id < w[1].id));
        debug_assert!(edges.windows(2).all(|w| w[0].id < w[1].id));
        let mut adjacency = vec![Vec::new(); vertices.len()];
        for (i, e) in edges.iter().enumerate() {
            adjacency[e.ends[0]].push((e.ends[1], i));
            adjacency[e.ends[1]].push((e.ends[0], i));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        ColoredGraph { vertices, edges, adjacency }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex(&self, v: usize) -> &Vertex {
        &self.vertices[v]
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.binary_search_by(|v| v.id.as_str().cmp(id)).ok()
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.binary_search_by(|e| e.id.as_str().cmp(id)).ok()
    }

    pub fn cell_index(&self, id: &str) -> Option<Cell> {
        self.vertex_index(id)
            .map(Cell::Vertex)
            .or_else(|| self.edge_index(id).map(Cell::Edge))
    }

    pub fn cell_id(&self, cell: Cell) -> &str {
        match cell {
            Cell::Vertex(v) => &self.vertices[v].id,
            Cell::Edge(e) => &self.edges[e].id,
        }
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        let list = &self.adjacency[a];
        list.binary_search_by(|&(n, _)| n.cmp(&b))
            .ok()
            .map(|i| list[i].1)
    }

    pub fn is_single_vertex(&self) -> bool {
        self.vertices.len() == 1 && self.edges.is_empty()
    }

    pub fn is_single_edge(&self) -> bool {
        self.vertices.len() == 2 && self.edges.len() == 1
    }

    pub fn isolated_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertices.len()).filter(|&v| self.adjacency[v].is_empty())
    }

    /// Connected components as sorted vertex index lists, ordered by their
    /// smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.vertices.len()];
        let mut out = Vec::new();
        for start in 0..self.vertices.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &(w, _) in &self.adjacency[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Component label per vertex, numbered in order of smallest member.
    pub fn component_labels(&self) -> Vec<usize> {
        let mut labels = vec![0; self.vertices.len()];
        for (i, comp) in self.components().iter().enumerate() {
            for &v in comp {
                labels[v] = i;
            }
        }
        labels
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Unweighted hop distances from `source`; `None` for unreachable vertices.
    pub fn hop_distances(&self, source: usize) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.vertices.len()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap_or(0);
            for &(w, _) in &self.adjacency[u] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Largest hop distance between two vertices, or `None` when the graph
    /// is disconnected. A single vertex has diameter 0.
    pub fn diameter(&self) -> Option<u32> {
        let mut best = 0;
        for v in 0..self.vertices.len() {
            for d in self.hop_distances(v) {
                best = best.max(d?);
            }
        }
        Some(best)
    }

    /// The same graph with every vertex and edge recolored to `color`.
    pub fn recolored(&self, color: Color) -> ColoredGraph {
        let mut g = self.clone();
        for v in &mut g.vertices {
            v.color = color;
        }
        for e in &mut g.edges {
            e.color = color;
        }
        g
    }

    pub fn to_spec(&self) -> GraphSpec {
        GraphSpec {
            vertices: self
                .vertices
                .iter()
                .map(|v| VertexSpec { id: v.id.clone(), color: v.color })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeSpec {
                    id: e.id.clone(),
                    ends: [self.vertices[e.ends[0]].id.clone(), self.vertices[e.ends[1]].id.clone()],
                    color: e.color,
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexSpec {
    pub id: String,
    pub color: Color,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeSpec {
    pub id: String,
    pub ends: [String; 2],
    pub color: Color,
}

/// An unvalidated graph description, as read from a document.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GraphSpec {
    pub vertices: Vec<VertexSpec>,
    pub edges: Vec<EdgeSpec>,
}

impl GraphSpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(mut self, id: &str, color: u32) -> Self {
        self.vertices.push(VertexSpec { id: id.to_string(), color: Color(color) });
        self
    }

    pub fn edge(mut self, id: &str, a: &str, b: &str, color: u32) -> Self {
        self.edges.push(EdgeSpec {
            id: id.to_string(),
            ends: [a.to_string(), b.to_string()],
            color: Color(color),
        });
        self
    }

    pub fn validate(&self) -> Result<ColoredGraph, Vec<GraphViolation>> {
        validate_graph(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GraphViolation {
    #[error("identifier `{0}` is used more than once")]
    DuplicateId(String),
    #[error("edge `{edge}` references missing vertex `{vertex}`")]
    DanglingEndpoint { edge: String, vertex: String },
    #[error("edge `{edge}` is a self-loop")]
    SelfLoop { edge: String },
    #[error("edge `{edge}` duplicates edge `{other}`")]
    DuplicateEdge { edge: String, other: String },
}

/// Checks every graph invariant and returns the sorted graph, or all
/// violations found.
pub fn validate_graph(spec: &GraphSpec) -> Result<ColoredGraph, Vec<GraphViolation>> {
    let mut violations = Vec::new();
    let mut ids = BTreeSet::new();
    let mut vertex_colors = BTreeMap::new();
    for v in &spec.vertices {
        if !ids.insert(v.id.as_str()) {
            violations.push(GraphViolation::DuplicateId(v.id.clone()));
        }
        vertex_colors.entry(v.id.as_str()).or_insert(v.color);
    }
    for e in &spec.edges {
        if !ids.insert(e.id.as_str()) {
            violations.push(GraphViolation::DuplicateId(e.id.clone()));
        }
    }

    let mut pairs: BTreeMap<(&str, &str), &str> = BTreeMap::new();
    let mut edge_specs: Vec<&EdgeSpec> = Vec::new();
    for e in &spec.edges {
        let mut ok = true;
        for end in &e.ends {
            if !vertex_colors.contains_key(end.as_str()) {
                violations.push(GraphViolation::DanglingEndpoint {
                    edge: e.id.clone(),
                    vertex: end.clone(),
                });
                ok = false;
            }
        }
        if e.ends[0] == e.ends[1] {
            violations.push(GraphViolation::SelfLoop { edge: e.id.clone() });
            ok = false;
        }
        if !ok {
            continue;
        }
        let key = if e.ends[0] < e.ends[1] {
            (e.ends[0].as_str(), e.ends[1].as_str())
        } else {
            (e.ends[1].as_str(), e.ends[0].as_str())
        };
        if let Some(other) = pairs.get(&key) {
            violations.push(GraphViolation::DuplicateEdge {
                edge: e.id.clone(),
                other: other.to_string(),
            });
            continue;
        }
        pairs.insert(key, e.id.as_str());
        edge_specs.push(e);
    }
    if !violations.is_empty() {
        return Err(violations);
    }

    let vertices: Vec<Vertex> = vertex_colors
        .iter()
        .map(|(id, &color)| Vertex { id: id.to_string(), color })
        .collect();
    let index_of = |id: &str| {
        vertices
            .binary_search_by(|v| v.id.as_str().cmp(id))
            .expect("endpoint checked above")
    };
    let mut edges: Vec<Edge> = edge_specs
        .iter()
        .map(|e| Edge {
            id: e.id.clone(),
            ends: [index_of(&e.ends[0]), index_of(&e.ends[1])],
            color: e.color,
        })
        .collect();
    edges.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(ColoredGraph::from_sorted_parts(vertices, edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fixtures::eight;

    #[test]
    fn minimal_graph_is_valid() {
        let g = GraphSpec::new().vertex("a", 0).vertex("b", 0).edge("e", "a", "b", 0).validate().unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (2, 1));
        assert!(g.is_single_edge());
    }

    #[test]
    fn dangling_endpoint_is_reported() {
        let err = GraphSpec::new().vertex("a", 0).edge("e", "a", "zz", 0).validate().unwrap_err();
        assert_eq!(
            err,
            vec![GraphViolation::DanglingEndpoint { edge: "e".into(), vertex: "zz".into() }]
        );
    }

    #[test]
    fn self_loops_duplicates_and_shared_ids() {
        let err = GraphSpec::new()
            .vertex("a", 0)
            .vertex("b", 0)
            .vertex("a", 1)
            .edge("loop", "a", "a", 0)
            .edge("e1", "a", "b", 0)
            .edge("e2", "b", "a", 0)
            .edge("b", "a", "b", 0)
            .validate()
            .unwrap_err();
        assert!(err.contains(&GraphViolation::DuplicateId("a".into())));
        assert!(err.contains(&GraphViolation::DuplicateId("b".into())));
        assert!(err.contains(&GraphViolation::SelfLoop { edge: "loop".into() }));
        assert!(err.contains(&GraphViolation::DuplicateEdge { edge: "e2".into(), other: "e1".into() }));
    }

    #[test]
    fn eight_graph_is_valid_and_sorted() {
        let g = eight();
        assert_eq!((g.vertex_count(), g.edge_count()), (6, 7));
        let ids: Vec<_> = g.vertices().iter().map(|v| v.id.as_str()).collect();
        assert_eq!(ids, ["A", "B", "C", "D", "E", "F"]);
        assert_eq!(g.degree(g.vertex_index("C").unwrap()), 3);
        assert!(g.is_connected());
        assert_eq!(g.diameter(), Some(3));
    }

    #[test]
    fn components_of_edgeless_graph() {
        let g = GraphSpec::new().vertex("x", 0).vertex("y", 0).validate().unwrap();
        assert_eq!(g.components(), vec![vec![0], vec![1]]);
        assert_eq!(g.diameter(), None);
    }
}

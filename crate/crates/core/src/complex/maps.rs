use std::sync::Arc;

use thiserror::Error;

use super::graph::{ColoredGraph, Edge, Vertex};

/// A vertex of the barycentric subdivision of a graph: an original vertex or
/// the barycenter of an edge. Indices refer to the base graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SubdivisionPoint {
    Vertex(usize),
    Barycenter(usize),
}

impl SubdivisionPoint {
    /// Display form used by documents: `v:<id>` or `bary:<edge id>`.
    pub fn label(&self, base: &ColoredGraph) -> String {
        match *self {
            SubdivisionPoint::Vertex(v) => format!("v:{}", base.vertex(v).id),
            SubdivisionPoint::Barycenter(e) => format!("bary:{}", base.edge(e).id),
        }
    }

    /// Inverse of [`SubdivisionPoint::label`].
    pub fn parse_label(base: &ColoredGraph, label: &str) -> Option<Self> {
        if let Some(id) = label.strip_prefix("v:") {
            base.vertex_index(id).map(SubdivisionPoint::Vertex)
        } else if let Some(id) = label.strip_prefix("bary:") {
            base.edge_index(id).map(SubdivisionPoint::Barycenter)
        } else {
            None
        }
    }

    /// Position along edge `e` measured in half-edges from `ends[0]`
    /// (0, 1 or 2), or `None` when the point is not on the closed edge.
    pub fn position_on(&self, base: &ColoredGraph, e: usize) -> Option<u8> {
        let edge = base.edge(e);
        match *self {
            SubdivisionPoint::Vertex(v) if v == edge.ends[0] => Some(0),
            SubdivisionPoint::Vertex(v) if v == edge.ends[1] => Some(2),
            SubdivisionPoint::Barycenter(b) if b == e => Some(1),
            _ => None,
        }
    }
}

/// The barycentric subdivision of a graph with the correspondence from its
/// vertices back to subdivision points of the base graph.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub graph: ColoredGraph,
    /// For each vertex of `graph`, the point of the base graph it represents.
    pub points: Vec<SubdivisionPoint>,
}

impl Subdivision {
    pub fn vertex_of(&self, point: SubdivisionPoint) -> usize {
        self.points
            .iter()
            .position(|&p| p == point)
            .expect("every subdivision point has a vertex")
    }
}

/// Splits every edge at its barycenter.
///
/// The barycenter of edge `e` becomes a vertex with id `e`; the halves are
/// `e:0` (towards `ends[0]`) and `e:1`. New cells take the color of the edge
/// they subdivide.
pub fn barycentric_subdivide(g: &ColoredGraph) -> Subdivision {
    let mut vertices: Vec<(Vertex, SubdivisionPoint)> = g
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| (v.clone(), SubdivisionPoint::Vertex(i)))
        .collect();
    for (i, e) in g.edges().iter().enumerate() {
        vertices.push((Vertex { id: e.id.clone(), color: e.color }, SubdivisionPoint::Barycenter(i)));
    }
    vertices.sort_by(|a, b| a.0.id.cmp(&b.0.id));
    let mut new_index = vec![0; vertices.len()];
    let mut bary_index = vec![0; g.edge_count()];
    for (pos, (_, p)) in vertices.iter().enumerate() {
        match *p {
            SubdivisionPoint::Vertex(v) => new_index[v] = pos,
            SubdivisionPoint::Barycenter(e) => bary_index[e] = pos,
        }
    }
    let mut edges = Vec::with_capacity(2 * g.edge_count());
    for (i, e) in g.edges().iter().enumerate() {
        for (k, &end) in e.ends.iter().enumerate() {
            edges.push(Edge {
                id: format!("{}:{}", e.id, k),
                ends: [new_index[end], bary_index[i]],
                color: e.color,
            });
        }
    }
    edges.sort_by(|a, b| a.id.cmp(&b.id));
    let (verts, points): (Vec<_>, Vec<_>) = vertices.into_iter().unzip();
    Subdivision { graph: ColoredGraph::from_sorted_parts(verts, edges), points }
}

/// Shape of the image of one domain edge in the subdivided codomain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeImage {
    Point(SubdivisionPoint),
    HalfEdge { vertex: usize, edge: usize },
    FullEdge(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MapClass {
    /// Every edge collapses and no barycenter is used: both simplicial and
    /// quasi-simplicial.
    Degenerate,
    Simplicial,
    QuasiSimplicial,
    /// Uses barycenters and full edges at once; neither kind.
    Mixed,
}

impl MapClass {
    pub fn is_simplicial(self) -> bool {
        matches!(self, MapClass::Degenerate | MapClass::Simplicial)
    }

    pub fn is_quasi_simplicial(self) -> bool {
        matches!(self, MapClass::Degenerate | MapClass::QuasiSimplicial)
    }

    pub fn name(self) -> &'static str {
        match self {
            MapClass::Degenerate => "degenerate",
            MapClass::Simplicial => "simplicial",
            MapClass::QuasiSimplicial => "quasi-simplicial",
            MapClass::Mixed => "mixed",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("map assigns {got} images for {expected} domain vertices")]
    NotTotal { expected: usize, got: usize },
    #[error("image of vertex `{vertex}` is not a point of the codomain")]
    PointOutOfRange { vertex: String },
    #[error("edge `{edge}` maps onto no simplex of the subdivided codomain")]
    InvalidEdgeImage { edge: String },
}

/// A vertex map from a graph into the barycentric subdivision of another.
///
/// Plain simplicial maps are the special case that never uses a barycenter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiSimplicialMap {
    domain: Arc<ColoredGraph>,
    codomain: Arc<ColoredGraph>,
    image: Vec<SubdivisionPoint>,
}

impl QuasiSimplicialMap {
    pub fn new(
        domain: Arc<ColoredGraph>,
        codomain: Arc<ColoredGraph>,
        image: Vec<SubdivisionPoint>,
    ) -> Result<Self, MapError> {
        if image.len() != domain.vertex_count() {
            return Err(MapError::NotTotal { expected: domain.vertex_count(), got: image.len() });
        }
        for (v, p) in image.iter().enumerate() {
            let ok = match *p {
                SubdivisionPoint::Vertex(w) => w < codomain.vertex_count(),
                SubdivisionPoint::Barycenter(e) => e < codomain.edge_count(),
            };
            if !ok {
                return Err(MapError::PointOutOfRange { vertex: domain.vertex(v).id.clone() });
            }
        }
        Ok(QuasiSimplicialMap { domain, codomain, image })
    }

    pub fn domain(&self) -> &Arc<ColoredGraph> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<ColoredGraph> {
        &self.codomain
    }

    pub fn image(&self) -> &[SubdivisionPoint] {
        &self.image
    }

    pub fn apply(&self, v: usize) -> SubdivisionPoint {
        self.image[v]
    }

    pub fn edge_image(&self, e: usize) -> Result<EdgeImage, MapError> {
        let edge = self.domain.edge(e);
        let (p, q) = (self.image[edge.ends[0]], self.image[edge.ends[1]]);
        if p == q {
            return Ok(EdgeImage::Point(p));
        }
        let shape = match (p, q) {
            (SubdivisionPoint::Vertex(a), SubdivisionPoint::Vertex(b)) => {
                self.codomain.edge_between(a, b).map(EdgeImage::FullEdge)
            }
            (SubdivisionPoint::Vertex(a), SubdivisionPoint::Barycenter(f))
            | (SubdivisionPoint::Barycenter(f), SubdivisionPoint::Vertex(a)) => self
                .codomain
                .edge(f)
                .has_end(a)
                .then_some(EdgeImage::HalfEdge { vertex: a, edge: f }),
            (SubdivisionPoint::Barycenter(_), SubdivisionPoint::Barycenter(_)) => None,
        };
        shape.ok_or_else(|| MapError::InvalidEdgeImage { edge: edge.id.clone() })
    }

    pub fn classify(&self) -> Result<MapClass, MapError> {
        let mut full = false;
        for e in 0..self.domain.edge_count() {
            if let EdgeImage::FullEdge(_) = self.edge_image(e)? {
                full = true;
            }
        }
        let bary = self
            .image
            .iter()
            .any(|p| matches!(p, SubdivisionPoint::Barycenter(_)));
        Ok(match (bary, full) {
            (false, false) => MapClass::Degenerate,
            (false, true) => MapClass::Simplicial,
            (true, false) => MapClass::QuasiSimplicial,
            (true, true) => MapClass::Mixed,
        })
    }

    /// Whether the image covers the whole codomain polyhedron.
    pub fn is_surjective(&self) -> bool {
        let mut vertex_hit = vec![false; self.codomain.vertex_count()];
        let mut half_hit = vec![[false; 2]; self.codomain.edge_count()];
        for p in &self.image {
            if let SubdivisionPoint::Vertex(v) = *p {
                vertex_hit[v] = true;
            }
        }
        for e in 0..self.domain.edge_count() {
            match self.edge_image(e) {
                Ok(EdgeImage::FullEdge(f)) => half_hit[f] = [true, true],
                Ok(EdgeImage::HalfEdge { vertex, edge }) => {
                    let k = usize::from(self.codomain.edge(edge).ends[1] == vertex);
                    half_hit[edge][k] = true;
                }
                _ => {}
            }
        }
        vertex_hit.iter().all(|&h| h) && half_hit.iter().all(|h| h[0] && h[1])
    }
}

/// Classifies `m` as simplicial, quasi-simplicial, both, or neither.
pub fn classify_map(m: &QuasiSimplicialMap) -> Result<MapClass, MapError> {
    m.classify()
}

#[cfg(test)]
mod tests {
    use super::super::graph::GraphSpec;
    use super::*;

    fn single_edge() -> Arc<ColoredGraph> {
        Arc::new(GraphSpec::new().vertex("L", 0).vertex("R", 0).edge("LR", "L", "R", 0).validate().unwrap())
    }

    fn eight_over_edge() -> QuasiSimplicialMap {
        let top = Arc::new(crate::complex::fixtures::eight());
        let bottom = single_edge();
        let l = bottom.vertex_index("L").unwrap();
        let r = bottom.vertex_index("R").unwrap();
        let image = top
            .vertices()
            .iter()
            .map(|v| match v.id.as_str() {
                "D" | "E" => SubdivisionPoint::Vertex(l),
                "A" | "B" => SubdivisionPoint::Vertex(r),
                _ => SubdivisionPoint::Barycenter(0),
            })
            .collect();
        QuasiSimplicialMap::new(top, bottom, image).unwrap()
    }

    #[test]
    fn subdivision_counts() {
        let g = single_edge();
        let s = barycentric_subdivide(&g);
        assert_eq!((s.graph.vertex_count(), s.graph.edge_count()), (3, 2));
        let eight = crate::complex::fixtures::eight();
        let s = barycentric_subdivide(&eight);
        assert_eq!((s.graph.vertex_count(), s.graph.edge_count()), (13, 14));
        let point = GraphSpec::new().vertex("x", 0).validate().unwrap();
        let s = barycentric_subdivide(&point);
        assert_eq!((s.graph.vertex_count(), s.graph.edge_count()), (1, 0));
    }

    #[test]
    fn subdivision_correspondence_and_colors() {
        let g = GraphSpec::new().vertex("a", 0).vertex("b", 1).edge("e", "a", "b", 7).validate().unwrap();
        let s = barycentric_subdivide(&g);
        let bary = s.vertex_of(SubdivisionPoint::Barycenter(0));
        assert_eq!(s.graph.vertex(bary).id, "e");
        assert_eq!(s.graph.vertex(bary).color.0, 7);
        assert!(s.graph.edges().iter().all(|e| e.color.0 == 7));
        assert_eq!(s.graph.degree(bary), 2);
    }

    #[test]
    fn eight_projection_is_quasi_simplicial() {
        let m = eight_over_edge();
        assert_eq!(classify_map(&m), Ok(MapClass::QuasiSimplicial));
        assert!(m.is_surjective());
    }

    #[test]
    fn identity_on_single_edge_is_simplicial_only() {
        let g = single_edge();
        let m = QuasiSimplicialMap::new(
            g.clone(),
            g,
            vec![SubdivisionPoint::Vertex(0), SubdivisionPoint::Vertex(1)],
        )
        .unwrap();
        let class = m.classify().unwrap();
        assert_eq!(class, MapClass::Simplicial);
        assert!(class.is_simplicial() && !class.is_quasi_simplicial());
    }

    #[test]
    fn two_parallel_edges_onto_one_edge_are_simplicial() {
        let top = Arc::new(
            GraphSpec::new()
                .vertex("l1", 0)
                .vertex("l2", 0)
                .vertex("r1", 0)
                .vertex("r2", 0)
                .edge("s1", "l1", "r1", 0)
                .edge("s2", "l2", "r2", 0)
                .validate()
                .unwrap(),
        );
        let image = top
            .vertices()
            .iter()
            .map(|v| SubdivisionPoint::Vertex(usize::from(v.id.starts_with('r'))))
            .collect();
        let m = QuasiSimplicialMap::new(top, single_edge(), image).unwrap();
        assert_eq!(m.classify(), Ok(MapClass::Simplicial));
    }

    #[test]
    fn collapsing_map_is_degenerate() {
        let top = Arc::new(GraphSpec::new().vertex("a", 0).vertex("b", 0).edge("ab", "a", "b", 0).validate().unwrap());
        let bottom = Arc::new(GraphSpec::new().vertex("o", 0).validate().unwrap());
        let m = QuasiSimplicialMap::new(top, bottom, vec![SubdivisionPoint::Vertex(0); 2]).unwrap();
        let class = m.classify().unwrap();
        assert!(class.is_simplicial() && class.is_quasi_simplicial());
    }

    #[test]
    fn barycenter_to_barycenter_is_invalid() {
        let top = Arc::new(GraphSpec::new().vertex("a", 0).vertex("b", 0).edge("ab", "a", "b", 0).validate().unwrap());
        let bottom = Arc::new(
            GraphSpec::new()
                .vertex("x", 0)
                .vertex("y", 0)
                .vertex("z", 0)
                .edge("xy", "x", "y", 0)
                .edge("yz", "y", "z", 0)
                .validate()
                .unwrap(),
        );
        let m = QuasiSimplicialMap::new(
            top,
            bottom,
            vec![SubdivisionPoint::Barycenter(0), SubdivisionPoint::Barycenter(1)],
        )
        .unwrap();
        assert_eq!(m.classify(), Err(MapError::InvalidEdgeImage { edge: "ab".into() }));
    }

    #[test]
    fn out_of_range_and_partial_maps_are_rejected() {
        let g = single_edge();
        assert!(matches!(
            QuasiSimplicialMap::new(g.clone(), g.clone(), vec![SubdivisionPoint::Vertex(0)]),
            Err(MapError::NotTotal { .. })
        ));
        assert!(matches!(
            QuasiSimplicialMap::new(g.clone(), g, vec![SubdivisionPoint::Vertex(0), SubdivisionPoint::Barycenter(4)]),
            Err(MapError::PointOutOfRange { .. })
        ));
    }
}

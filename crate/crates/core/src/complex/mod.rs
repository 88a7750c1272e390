//! Colored graphs and the maps between them.

mod embedding;
mod graph;
mod maps;
mod metric;

pub use embedding::{check_colored_embedding, colored_isomorphism, EmbeddingViolation};
pub use graph::{validate_graph, Cell, Color, ColoredGraph, Edge, EdgeSpec, GraphSpec, GraphViolation, Vertex, VertexSpec};
pub use maps::{
    barycentric_subdivide, classify_map, EdgeImage, MapClass, MapError, QuasiSimplicialMap, Subdivision,
    SubdivisionPoint,
};
pub use metric::{geodesic_distance, GeodesicScale, MetricError};

#[cfg(test)]
pub(crate) mod fixtures {
    use super::{ColoredGraph, GraphSpec};

    /// Hexagon A-B-C-D-E-F with the chord F-C.
    pub fn eight() -> ColoredGraph {
        GraphSpec::new()
            .vertex("A", 0)
            .vertex("B", 0)
            .vertex("C", 0)
            .vertex("D", 0)
            .vertex("E", 0)
            .vertex("F", 0)
            .edge("AB", "A", "B", 0)
            .edge("BC", "B", "C", 0)
            .edge("CD", "C", "D", 0)
            .edge("DE", "D", "E", 0)
            .edge("EF", "E", "F", 0)
            .edge("FA", "F", "A", 0)
            .edge("FC", "F", "C", 0)
            .validate()
            .unwrap()
    }

    pub fn hexagon() -> ColoredGraph {
        GraphSpec::new()
            .vertex("a", 0)
            .vertex("b", 0)
            .vertex("c", 0)
            .vertex("d", 0)
            .vertex("e", 0)
            .vertex("f", 0)
            .edge("ab", "a", "b", 0)
            .edge("bc", "b", "c", 0)
            .edge("cd", "c", "d", 0)
            .edge("de", "d", "e", 0)
            .edge("ef", "e", "f", 0)
            .edge("fa", "f", "a", 0)
            .validate()
            .unwrap()
    }

    pub fn path(n: usize) -> ColoredGraph {
        let mut spec = GraphSpec::new();
        for i in 0..n {
            spec = spec.vertex(&format!("p{i}"), 0);
        }
        for i in 1..n {
            spec = spec.edge(&format!("q{i}"), &format!("p{}", i - 1), &format!("p{i}"), 0);
        }
        spec.validate().unwrap()
    }
}

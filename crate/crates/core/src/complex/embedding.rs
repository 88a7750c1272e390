use thiserror::Error;

use super::graph::ColoredGraph;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EmbeddingViolation {
    #[error("map assigns {got} images for {expected} vertices")]
    NotTotal { expected: usize, got: usize },
    #[error("vertex `{vertex}` maps outside the codomain")]
    OutOfRange { vertex: String },
    #[error("vertices `{first}` and `{second}` both map to `{target}`")]
    NotInjective { first: String, second: String, target: String },
    #[error("edge `{edge}` does not map onto an edge")]
    EdgeNotPreserved { edge: String },
    #[error("color of `{cell}` is not preserved")]
    ColorMismatch { cell: String },
}

/// Checks that `image` (domain vertex index -> codomain vertex index) is an
/// injective simplicial map preserving vertex and edge colors.
pub fn check_colored_embedding(
    domain: &ColoredGraph,
    codomain: &ColoredGraph,
    image: &[usize],
) -> Result<(), Vec<EmbeddingViolation>> {
    if image.len() != domain.vertex_count() {
        return Err(vec![EmbeddingViolation::NotTotal { expected: domain.vertex_count(), got: image.len() }]);
    }
    let mut violations = Vec::new();
    if let Some(v) = image.iter().position(|&w| w >= codomain.vertex_count()) {
        violations.push(EmbeddingViolation::OutOfRange { vertex: domain.vertex(v).id.clone() });
        return Err(violations);
    }
    let mut preimage: Vec<Option<usize>> = vec![None; codomain.vertex_count()];
    for (v, &w) in image.iter().enumerate() {
        if let Some(first) = preimage[w] {
            violations.push(EmbeddingViolation::NotInjective {
                first: domain.vertex(first).id.clone(),
                second: domain.vertex(v).id.clone(),
                target: codomain.vertex(w).id.clone(),
            });
        } else {
            preimage[w] = Some(v);
        }
        if domain.vertex(v).color != codomain.vertex(w).color {
            violations.push(EmbeddingViolation::ColorMismatch { cell: domain.vertex(v).id.clone() });
        }
    }
    for e in domain.edges() {
        let (a, b) = (image[e.ends[0]], image[e.ends[1]]);
        match (a != b).then(|| codomain.edge_between(a, b)).flatten() {
            None => violations.push(EmbeddingViolation::EdgeNotPreserved { edge: e.id.clone() }),
            Some(f) if codomain.edge(f).color != e.color => {
                violations.push(EmbeddingViolation::ColorMismatch { cell: e.id.clone() })
            }
            Some(_) => {}
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

/// Finds a color-preserving isomorphism `a -> b`, trying codomain vertices in
/// sorted order for each domain vertex in sorted order. Returns the vertex
/// image of the first one found.
pub fn colored_isomorphism(a: &ColoredGraph, b: &ColoredGraph) -> Option<Vec<usize>> {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return None;
    }
    let signature = |g: &ColoredGraph| {
        let mut vs: Vec<_> = (0..g.vertex_count()).map(|v| (g.vertex(v).color, g.degree(v))).collect();
        vs.sort_unstable();
        let mut es: Vec<_> = g.edges().iter().map(|e| e.color).collect();
        es.sort_unstable();
        (vs, es)
    };
    if signature(a) != signature(b) {
        return None;
    }
    let mut image = vec![usize::MAX; a.vertex_count()];
    let mut used = vec![false; b.vertex_count()];
    extend(a, b, 0, &mut image, &mut used).then_some(image)
}

fn extend(a: &ColoredGraph, b: &ColoredGraph, v: usize, image: &mut [usize], used: &mut [bool]) -> bool {
    if v == a.vertex_count() {
        return true;
    }
    for w in 0..b.vertex_count() {
        if used[w] || a.vertex(v).color != b.vertex(w).color || a.degree(v) != b.degree(w) {
            continue;
        }
        let consistent = (0..v).all(|u| {
            let here = a.edge_between(u, v).map(|e| a.edge(e).color);
            let there = b.edge_between(image[u], w).map(|f| b.edge(f).color);
            here == there
        });
        if !consistent {
            continue;
        }
        image[v] = w;
        used[w] = true;
        if extend(a, b, v + 1, image, used) {
            return true;
        }
        used[w] = false;
    }
    image[v] = usize::MAX;
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fixtures::{eight, hexagon};
    use crate::complex::GraphSpec;

    fn edge(color: u32) -> ColoredGraph {
        GraphSpec::new().vertex("a", 0).vertex("b", 0).edge("ab", "a", "b", color).validate().unwrap()
    }

    #[test]
    fn fiber_edge_embeds_into_eight() {
        let top = edge(0);
        let g = eight();
        let image = [g.vertex_index("D").unwrap(), g.vertex_index("E").unwrap()];
        assert_eq!(check_colored_embedding(&top, &g, &image), Ok(()));
    }

    #[test]
    fn collapsed_edge_is_not_preserved() {
        let top = edge(0);
        let point = GraphSpec::new().vertex("o", 0).validate().unwrap();
        let err = check_colored_embedding(&top, &point, &[0, 0]).unwrap_err();
        assert!(err.contains(&EmbeddingViolation::EdgeNotPreserved { edge: "ab".into() }));
        assert!(err.iter().any(|v| matches!(v, EmbeddingViolation::NotInjective { .. })));
    }

    #[test]
    fn swapped_edge_colors_mismatch() {
        let g = GraphSpec::new()
            .vertex("a", 0)
            .vertex("b", 0)
            .vertex("c", 0)
            .edge("ab", "a", "b", 0)
            .edge("bc", "b", "c", 1)
            .validate()
            .unwrap();
        let h = GraphSpec::new()
            .vertex("a", 0)
            .vertex("b", 0)
            .vertex("c", 0)
            .edge("ab", "a", "b", 1)
            .edge("bc", "b", "c", 0)
            .validate()
            .unwrap();
        let err = check_colored_embedding(&g, &h, &[0, 1, 2]).unwrap_err();
        assert_eq!(
            err,
            vec![
                EmbeddingViolation::ColorMismatch { cell: "ab".into() },
                EmbeddingViolation::ColorMismatch { cell: "bc".into() }
            ]
        );
    }

    #[test]
    fn isomorphism_respects_colors() {
        assert!(colored_isomorphism(&edge(0), &edge(0)).is_some());
        assert!(colored_isomorphism(&edge(0), &edge(1)).is_none());
        assert!(colored_isomorphism(&eight(), &hexagon()).is_none());
        let image = colored_isomorphism(&eight(), &eight()).unwrap();
        assert_eq!(image, (0..6).collect::<Vec<_>>());
    }

    #[test]
    fn isomorphism_found_between_relabelled_eights() {
        // Same shape, chord between the two middle vertices, different ids.
        let other = GraphSpec::new()
            .vertex("u1", 0)
            .vertex("u2", 0)
            .vertex("u3", 0)
            .vertex("w1", 0)
            .vertex("w2", 0)
            .vertex("w3", 0)
            .edge("x1", "u1", "u2", 0)
            .edge("x2", "u2", "u3", 0)
            .edge("x3", "w1", "w2", 0)
            .edge("x4", "w2", "w3", 0)
            .edge("x5", "u1", "w1", 0)
            .edge("x6", "u3", "w3", 0)
            .edge("x7", "u2", "w2", 0)
            .validate()
            .unwrap();
        let image = colored_isomorphism(&eight(), &other).unwrap();
        assert_eq!(check_colored_embedding(&eight(), &other, &image), Ok(()));
    }
}

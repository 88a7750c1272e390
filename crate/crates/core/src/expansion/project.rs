use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{ExpansionError, Level};
use crate::complex::{Cell, ColoredGraph, EdgeImage, QuasiSimplicialMap, SubdivisionPoint};

/// A point of a graph's polyhedron: a vertex, or an interior point of an
/// edge at `position` in (0, 1) measured from `ends[0]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PolyPoint {
    Vertex(usize),
    OnEdge { edge: usize, position: BigRational },
}

impl PolyPoint {
    fn on_edge(g: &ColoredGraph, edge: usize, position: BigRational) -> Self {
        if position.is_zero() {
            PolyPoint::Vertex(g.edge(edge).ends[0])
        } else if position.is_one() {
            PolyPoint::Vertex(g.edge(edge).ends[1])
        } else {
            PolyPoint::OnEdge { edge, position }
        }
    }

    fn from_subdivision(g: &ColoredGraph, p: SubdivisionPoint) -> Self {
        match p {
            SubdivisionPoint::Vertex(v) => PolyPoint::Vertex(v),
            SubdivisionPoint::Barycenter(e) => PolyPoint::on_edge(g, e, half()),
        }
    }

    /// The smallest cell containing the point.
    pub fn carrier(&self) -> Cell {
        match self {
            PolyPoint::Vertex(v) => Cell::Vertex(*v),
            PolyPoint::OnEdge { edge, .. } => Cell::Edge(*edge),
        }
    }

    /// Number of times an edge must be halved for the point to become a
    /// vertex of the subdivision.
    pub fn subdivision_depth(&self) -> u32 {
        match self {
            PolyPoint::Vertex(_) => 0,
            PolyPoint::OnEdge { position, .. } => {
                let mut d = position.denom().clone();
                let mut k = 0;
                let two = BigInt::from(2);
                while d > BigInt::one() && (&d % &two).is_zero() {
                    d /= &two;
                    k += 1;
                }
                if d.is_one() {
                    k
                } else {
                    u32::MAX
                }
            }
        }
    }

    pub fn label(&self, g: &ColoredGraph) -> String {
        match self {
            PolyPoint::Vertex(v) => format!("v:{}", g.vertex(*v).id),
            PolyPoint::OnEdge { edge, position } => format!("e:{}@{}", g.edge(*edge).id, position),
        }
    }
}

fn half() -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(2))
}

fn position(base: &ColoredGraph, e: usize, p: SubdivisionPoint) -> BigRational {
    let steps = p.position_on(base, e).expect("edge images stay on one edge");
    BigRational::new(BigInt::from(steps), BigInt::from(2))
}

/// Image of a polyhedron point under a map that is linear on every edge.
pub(crate) fn push_down(map: &QuasiSimplicialMap, p: &PolyPoint) -> PolyPoint {
    let lower = map.codomain();
    match p {
        PolyPoint::Vertex(v) => PolyPoint::from_subdivision(lower, map.apply(*v)),
        PolyPoint::OnEdge { edge, position: t } => {
            let ends = map.domain().edge(*edge).ends;
            let (pa, pb) = (map.apply(ends[0]), map.apply(ends[1]));
            let f = match map.edge_image(*edge).expect("bonding maps are valid") {
                EdgeImage::Point(q) => return PolyPoint::from_subdivision(lower, q),
                EdgeImage::HalfEdge { edge, .. } | EdgeImage::FullEdge(edge) => edge,
            };
            let (a, b) = (position(lower, f, pa), position(lower, f, pb));
            let r = &a + t * (&b - &a);
            PolyPoint::on_edge(lower, f, r)
        }
    }
}

/// The composite of bonding maps from level `from` down to level `to`,
/// evaluated on every vertex of level `from`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projection {
    pub from: usize,
    pub to: usize,
    pub points: Vec<PolyPoint>,
}

/// Composes bonding maps `K_from -> K_to`. `levels[k]` must be level `k + 1`.
pub fn project(levels: &[Level], from: usize, to: usize) -> Result<Projection, ExpansionError> {
    let len = levels.len();
    if from == 0 || from > len {
        return Err(ExpansionError::IndexOutOfRange { index: from, len });
    }
    if to == 0 || to > from {
        return Err(ExpansionError::IndexOutOfRange { index: to, len: from });
    }
    let mut points: Vec<PolyPoint> = (0..levels[from - 1].graph.vertex_count()).map(PolyPoint::Vertex).collect();
    for j in (to + 1..=from).rev() {
        let map = levels[j - 1].bonding_map().ok_or(ExpansionError::IndexOutOfRange { index: j, len })?;
        for p in &mut points {
            *p = push_down(map, p);
        }
    }
    Ok(Projection { from, to, points })
}

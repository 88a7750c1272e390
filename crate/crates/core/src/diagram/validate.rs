use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::coverage::{coverage_check, Coverage};
use super::{Gluing, MarkovDiagram, Production, ProductionKind};
use crate::complex::{check_colored_embedding, Color, ColoredGraph, EmbeddingViolation, MapClass, SubdivisionPoint};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ProductionError {
    #[error("top graph is empty")]
    EmptyTop,
    #[error("bottom is neither a single vertex nor a single edge and the production is not declared general")]
    UnsupportedBottom,
    #[error("invalid map: {reason}")]
    InvalidMap { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductionVerdict {
    pub name: String,
    pub kind: ProductionKind,
    pub class: Option<MapClass>,
    pub surjective: bool,
    pub errors: Vec<ProductionError>,
}

impl ProductionVerdict {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }
}

/// Checks the production's shape and the classification of its map.
pub fn validate_production(p: &Production) -> ProductionVerdict {
    let mut errors = Vec::new();
    if p.top().vertex_count() == 0 {
        errors.push(ProductionError::EmptyTop);
    }
    let kind = p.kind();
    if kind == ProductionKind::General && (!p.general || p.bottom().vertex_count() == 0) {
        errors.push(ProductionError::UnsupportedBottom);
    }
    let class = match p.map.classify() {
        Ok(MapClass::Mixed) => {
            errors.push(ProductionError::InvalidMap {
                reason: "uses full edges and barycenters at once, so it is neither simplicial nor quasi-simplicial"
                    .into(),
            });
            Some(MapClass::Mixed)
        }
        Ok(c) => Some(c),
        Err(e) => {
            errors.push(ProductionError::InvalidMap { reason: e.to_string() });
            None
        }
    };
    ProductionVerdict { name: p.name.clone(), kind, class, surjective: p.map.is_surjective(), errors }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum MapSide {
    Top,
    Bottom,
}

impl fmt::Display for MapSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MapSide::Top => "top",
            MapSide::Bottom => "bottom",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GluingError {
    #[error("unknown production `{0}`")]
    UnknownProduction(String),
    #[error("{side} map does not preserve the color of `{cell}`")]
    ColorMismatch { side: MapSide, cell: String },
    #[error("{side} map is not an embedding: {violation}")]
    NotEmbedding { side: MapSide, violation: EmbeddingViolation },
    #[error("square does not commute at `{vertex}`: {via_top} along the top, {via_bottom} along the bottom")]
    CommutativityFailure { vertex: String, via_top: String, via_bottom: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingVerdict {
    pub name: String,
    pub errors: Vec<GluingError>,
}

impl GluingVerdict {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }
}

/// Image of a subdivision point of `from` under a vertex map `from -> to`,
/// extended linearly over barycenters.
pub fn subdivided_point(
    from: &ColoredGraph,
    to: &ColoredGraph,
    map: &[usize],
    p: SubdivisionPoint,
) -> Option<SubdivisionPoint> {
    match p {
        SubdivisionPoint::Vertex(v) => map.get(v).map(|&w| SubdivisionPoint::Vertex(w)),
        SubdivisionPoint::Barycenter(e) => {
            let ends = from.edge(e).ends;
            let (a, b) = (*map.get(ends[0])?, *map.get(ends[1])?);
            (a != b).then(|| to.edge_between(a, b)).flatten().map(SubdivisionPoint::Barycenter)
        }
    }
}

fn embedding_errors(side: MapSide, violations: Vec<EmbeddingViolation>, out: &mut Vec<GluingError>) -> bool {
    let mut total = true;
    for violation in violations {
        match violation {
            EmbeddingViolation::ColorMismatch { cell } => out.push(GluingError::ColorMismatch { side, cell }),
            other => {
                if matches!(other, EmbeddingViolation::NotTotal { .. } | EmbeddingViolation::OutOfRange { .. }) {
                    total = false;
                }
                out.push(GluingError::NotEmbedding { side, violation: other })
            }
        }
    }
    total
}

/// Checks both maps of a gluing and the commuting square, evaluated on every
/// vertex of the source top.
pub fn validate_gluing(d: &MarkovDiagram, g: &Gluing) -> GluingVerdict {
    let mut errors = Vec::new();
    let source = d.production(&g.source);
    let target = d.production(&g.target);
    if source.is_none() {
        errors.push(GluingError::UnknownProduction(g.source.clone()));
    }
    if target.is_none() && g.target != g.source {
        errors.push(GluingError::UnknownProduction(g.target.clone()));
    }
    let (Some(s), Some(t)) = (source, target) else {
        return GluingVerdict { name: g.name.clone(), errors };
    };
    let top_total = match check_colored_embedding(s.top(), t.top(), &g.top_map) {
        Ok(()) => true,
        Err(v) => embedding_errors(MapSide::Top, v, &mut errors),
    };
    let bottom_total = match check_colored_embedding(s.bottom(), t.bottom(), &g.bottom_map) {
        Ok(()) => true,
        Err(v) => embedding_errors(MapSide::Bottom, v, &mut errors),
    };
    if top_total && bottom_total {
        for v in 0..s.top().vertex_count() {
            let via_top = t.map.apply(g.top_map[v]);
            let via_bottom = subdivided_point(s.bottom(), t.bottom(), &g.bottom_map, s.map.apply(v));
            if via_bottom != Some(via_top) {
                errors.push(GluingError::CommutativityFailure {
                    vertex: s.top().vertex(v).id.clone(),
                    via_top: via_top.label(t.bottom()),
                    via_bottom: via_bottom.map_or_else(|| "no point".to_string(), |p| p.label(t.bottom())),
                });
            }
        }
    }
    GluingVerdict { name: g.name.clone(), errors }
}

pub fn check_elementary(d: &MarkovDiagram) -> bool {
    d.productions.iter().all(|p| p.kind() != ProductionKind::General)
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DiagramProblem {
    #[error("duplicate {kind} name `{name}`")]
    DuplicateName { kind: &'static str, name: String },
    #[error("color {color} of `{cell}` in {owner} is not in the palette")]
    ColorOutsidePalette { owner: String, cell: String, color: Color },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramReport {
    pub productions: Vec<ProductionVerdict>,
    pub gluings: Vec<GluingVerdict>,
    pub elementary: bool,
    /// Present for elementary diagrams.
    pub coverage: Option<Coverage>,
    pub problems: Vec<DiagramProblem>,
}

impl DiagramReport {
    /// All graphs, productions and gluings are valid.
    pub fn is_valid(&self) -> bool {
        self.problems.is_empty()
            && self.productions.iter().all(ProductionVerdict::is_ok)
            && self.gluings.iter().all(GluingVerdict::is_ok)
    }

    pub fn is_complete(&self) -> bool {
        self.coverage.as_ref().is_some_and(Coverage::is_complete)
    }

    /// Valid, elementary, and fully covered.
    pub fn is_expandable(&self) -> bool {
        self.is_valid() && self.elementary && self.is_complete()
    }

    /// One human-readable line per problem found.
    pub fn failures(&self) -> Vec<String> {
        let mut out: Vec<String> = self.problems.iter().map(|p| p.to_string()).collect();
        for p in &self.productions {
            out.extend(p.errors.iter().map(|e| format!("production `{}`: {e}", p.name)));
        }
        for g in &self.gluings {
            out.extend(g.errors.iter().map(|e| format!("gluing `{}`: {e}", g.name)));
        }
        if let Some(c) = &self.coverage {
            out.extend(c.problems.iter().map(|p| format!("{}: {p}", p.kind())));
        }
        out
    }
}

fn palette_problems(d: &MarkovDiagram, owner: &str, g: &ColoredGraph, out: &mut Vec<DiagramProblem>) {
    let cells = g
        .vertices()
        .iter()
        .map(|v| (&v.id, v.color))
        .chain(g.edges().iter().map(|e| (&e.id, e.color)));
    for (id, color) in cells {
        if !d.palette.contains_key(&color) {
            out.push(DiagramProblem::ColorOutsidePalette { owner: owner.to_string(), cell: id.clone(), color });
        }
    }
}

/// Full structural validation. The report is sorted by name, so it does not
/// depend on declaration order.
pub fn validate_diagram(d: &MarkovDiagram) -> DiagramReport {
    let mut problems = Vec::new();
    let mut seen: BTreeMap<(&str, &str), usize> = BTreeMap::new();
    for p in &d.productions {
        *seen.entry(("production", p.name.as_str())).or_default() += 1;
    }
    for g in &d.gluings {
        *seen.entry(("gluing", g.name.as_str())).or_default() += 1;
    }
    for ((kind, name), count) in seen {
        if count > 1 {
            problems.push(DiagramProblem::DuplicateName { kind, name: name.to_string() });
        }
    }
    palette_problems(d, "start graph", &d.start, &mut problems);
    let mut sorted: Vec<&Production> = d.productions.iter().collect();
    sorted.sort_by(|a, b| a.name.cmp(&b.name));
    for p in &sorted {
        palette_problems(d, &format!("top of `{}`", p.name), p.top(), &mut problems);
        palette_problems(d, &format!("bottom of `{}`", p.name), p.bottom(), &mut problems);
    }
    let productions = sorted.iter().map(|p| validate_production(p)).collect();
    let mut gluings: Vec<GluingVerdict> = d.gluings.iter().map(|g| validate_gluing(d, g)).collect();
    gluings.sort_by(|a, b| a.name.cmp(&b.name));
    let elementary = check_elementary(d);
    let coverage = elementary.then(|| coverage_check(d));
    DiagramReport { productions, gluings, elementary, coverage, problems }
}

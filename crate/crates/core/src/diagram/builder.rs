use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use thiserror::Error;

use super::{Gluing, MarkovDiagram, PaletteEntry, Production};
use crate::complex::{Color, ColoredGraph, GraphSpec, GraphViolation, MapError, QuasiSimplicialMap, SubdivisionPoint};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("diagram has no start graph")]
    MissingStart,
    #[error("duplicate {kind} name `{name}`")]
    DuplicateName { kind: &'static str, name: String },
    #[error("invalid graph in {owner}: {}", list(.violations))]
    Graph { owner: String, violations: Vec<GraphViolation> },
    #[error("gluing `{gluing}` references unknown production `{production}`")]
    UnknownReference { gluing: String, production: String },
    #[error("{owner} mentions unknown vertex `{id}`")]
    UnknownVertex { owner: String, id: String },
    #[error("{owner} sends `{vertex}` to `{target}`, which is not a vertex or barycenter of the target")]
    BadMapTarget { owner: String, vertex: String, target: String },
    #[error("{owner} does not map vertex `{vertex}`")]
    Unmapped { owner: String, vertex: String },
    #[error("{owner} maps vertex `{vertex}` twice")]
    DuplicateMapping { owner: String, vertex: String },
    #[error("production `{production}`: {error}")]
    Map { production: String, error: MapError },
}

fn list<T: std::fmt::Display>(items: &[T]) -> String {
    items.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
}

#[derive(Clone, Debug)]
struct ProductionSpec {
    name: String,
    top: GraphSpec,
    bottom: GraphSpec,
    map: Vec<(String, String)>,
    general: bool,
}

#[derive(Clone, Debug)]
struct GluingSpec {
    name: String,
    source: String,
    target: String,
    top_map: Vec<(String, String)>,
    bottom_map: Vec<(String, String)>,
}

/// Assembles a [`MarkovDiagram`] from identifier-level descriptions.
///
/// Production maps send top vertex ids to `v:<id>` or `bary:<edge id>` of
/// the bottom; gluing maps send vertex ids to vertex ids.
#[derive(Clone, Debug, Default)]
pub struct DiagramBuilder {
    name: String,
    palette: BTreeMap<Color, PaletteEntry>,
    start: Option<GraphSpec>,
    productions: Vec<ProductionSpec>,
    gluings: Vec<GluingSpec>,
    notes: Vec<String>,
}

fn owned(pairs: &[(&str, &str)]) -> Vec<(String, String)> {
    pairs.iter().map(|&(a, b)| (a.to_string(), b.to_string())).collect()
}

impl DiagramBuilder {
    pub fn new(name: &str) -> Self {
        DiagramBuilder { name: name.to_string(), ..Default::default() }
    }

    pub fn color(mut self, color: u32, name: &str, style: Option<&str>) -> Self {
        self.palette
            .insert(Color(color), PaletteEntry { name: name.to_string(), style: style.map(str::to_string) });
        self
    }

    pub fn start(mut self, graph: GraphSpec) -> Self {
        self.start = Some(graph);
        self
    }

    pub fn production(self, name: &str, top: GraphSpec, bottom: GraphSpec, map: &[(&str, &str)]) -> Self {
        self.production_owned(name, top, bottom, owned(map), false)
    }

    pub fn production_owned(
        mut self,
        name: &str,
        top: GraphSpec,
        bottom: GraphSpec,
        map: Vec<(String, String)>,
        general: bool,
    ) -> Self {
        self.productions.push(ProductionSpec { name: name.to_string(), top, bottom, map, general });
        self
    }

    pub fn gluing(self, name: &str, source: &str, target: &str, top: &[(&str, &str)], bottom: &[(&str, &str)]) -> Self {
        self.gluing_owned(name, source, target, owned(top), owned(bottom))
    }

    pub fn gluing_owned(
        mut self,
        name: &str,
        source: &str,
        target: &str,
        top_map: Vec<(String, String)>,
        bottom_map: Vec<(String, String)>,
    ) -> Self {
        self.gluings.push(GluingSpec {
            name: name.to_string(),
            source: source.to_string(),
            target: target.to_string(),
            top_map,
            bottom_map,
        });
        self
    }

    pub fn note(mut self, text: &str) -> Self {
        self.notes.push(text.to_string());
        self
    }

    pub fn build(self) -> Result<MarkovDiagram, Vec<BuildError>> {
        let mut errors = Vec::new();
        let start = match &self.start {
            None => {
                errors.push(BuildError::MissingStart);
                None
            }
            Some(spec) => graph(spec, "start graph", &mut errors),
        };
        let mut names = BTreeSet::new();
        let mut productions = Vec::new();
        for p in &self.productions {
            if !names.insert(p.name.as_str()) {
                errors.push(BuildError::DuplicateName { kind: "production", name: p.name.clone() });
                continue;
            }
            if let Some(prod) = production(p, &mut errors) {
                productions.push(prod);
            }
        }
        let mut gluing_names = BTreeSet::new();
        let mut gluings = Vec::new();
        for g in &self.gluings {
            if !gluing_names.insert(g.name.as_str()) {
                errors.push(BuildError::DuplicateName { kind: "gluing", name: g.name.clone() });
                continue;
            }
            if let Some(gl) = gluing(g, &productions, &self.productions, &mut errors) {
                gluings.push(gl);
            }
        }
        match start {
            Some(start) if errors.is_empty() => Ok(MarkovDiagram {
                name: self.name,
                palette: self.palette,
                start: Arc::new(start),
                productions,
                gluings,
                notes: self.notes,
            }),
            _ => Err(errors),
        }
    }
}

fn graph(spec: &GraphSpec, owner: &str, errors: &mut Vec<BuildError>) -> Option<ColoredGraph> {
    spec.validate()
        .map_err(|violations| errors.push(BuildError::Graph { owner: owner.to_string(), violations }))
        .ok()
}

fn production(p: &ProductionSpec, errors: &mut Vec<BuildError>) -> Option<Production> {
    let top = graph(&p.top, &format!("top of production `{}`", p.name), errors);
    let bottom = graph(&p.bottom, &format!("bottom of production `{}`", p.name), errors);
    let (top, bottom) = (top?, bottom?);
    let owner = format!("map of production `{}`", p.name);
    let mut image: Vec<Option<SubdivisionPoint>> = vec![None; top.vertex_count()];
    let before = errors.len();
    for (from, to) in &p.map {
        let Some(v) = top.vertex_index(from) else {
            errors.push(BuildError::UnknownVertex { owner: owner.clone(), id: from.clone() });
            continue;
        };
        let Some(point) = SubdivisionPoint::parse_label(&bottom, to) else {
            errors.push(BuildError::BadMapTarget { owner: owner.clone(), vertex: from.clone(), target: to.clone() });
            continue;
        };
        if image[v].replace(point).is_some() {
            errors.push(BuildError::DuplicateMapping { owner: owner.clone(), vertex: from.clone() });
        }
    }
    for (v, slot) in image.iter().enumerate() {
        if slot.is_none() {
            errors.push(BuildError::Unmapped { owner: owner.clone(), vertex: top.vertex(v).id.clone() });
        }
    }
    if errors.len() > before {
        return None;
    }
    let image = image.into_iter().flatten().collect();
    match QuasiSimplicialMap::new(Arc::new(top), Arc::new(bottom), image) {
        Ok(map) => Some(Production { name: p.name.clone(), map, general: p.general }),
        Err(error) => {
            errors.push(BuildError::Map { production: p.name.clone(), error });
            None
        }
    }
}

fn vertex_map(
    pairs: &[(String, String)],
    from: &ColoredGraph,
    to: &ColoredGraph,
    owner: &str,
    errors: &mut Vec<BuildError>,
) -> Option<Vec<usize>> {
    let before = errors.len();
    let mut image: Vec<Option<usize>> = vec![None; from.vertex_count()];
    for (a, b) in pairs {
        let Some(v) = from.vertex_index(a) else {
            errors.push(BuildError::UnknownVertex { owner: owner.to_string(), id: a.clone() });
            continue;
        };
        let Some(w) = to.vertex_index(b) else {
            errors.push(BuildError::BadMapTarget { owner: owner.to_string(), vertex: a.clone(), target: b.clone() });
            continue;
        };
        if image[v].replace(w).is_some() {
            errors.push(BuildError::DuplicateMapping { owner: owner.to_string(), vertex: a.clone() });
        }
    }
    for (v, slot) in image.iter().enumerate() {
        if slot.is_none() {
            errors.push(BuildError::Unmapped { owner: owner.to_string(), vertex: from.vertex(v).id.clone() });
        }
    }
    (errors.len() == before).then(|| image.into_iter().flatten().collect())
}

fn gluing(
    g: &GluingSpec,
    built: &[Production],
    declared: &[ProductionSpec],
    errors: &mut Vec<BuildError>,
) -> Option<Gluing> {
    let mut lookup = |name: &str| {
        let found = built.iter().find(|p| p.name == name);
        if found.is_none() && !declared.iter().any(|p| p.name == name) {
            errors.push(BuildError::UnknownReference { gluing: g.name.clone(), production: name.to_string() });
        }
        found
    };
    let source = lookup(&g.source);
    let target = lookup(&g.target);
    let (source, target) = (source?, target?);
    let top = vertex_map(&g.top_map, source.top(), target.top(), &format!("top map of gluing `{}`", g.name), errors);
    let bottom = vertex_map(
        &g.bottom_map,
        source.bottom(),
        target.bottom(),
        &format!("bottom map of gluing `{}`", g.name),
        errors,
    );
    Some(Gluing {
        name: g.name.clone(),
        source: g.source.clone(),
        target: g.target.clone(),
        top_map: top?,
        bottom_map: bottom?,
    })
}

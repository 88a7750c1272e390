use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::de::{MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::complex::{ColoredGraph, GraphSpec};
use crate::diagram::{BuildError, DiagramBuilder, MarkovDiagram};

/// Version tag every document carries.
pub const FORMAT_TAG: &str = "mdgm/1";

/// A JSON object whose keys must be distinct; kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct UniqueMap(pub BTreeMap<String, String>);

impl<'de> Deserialize<'de> for UniqueMap {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct UniqueVisitor;
        impl<'de> Visitor<'de> for UniqueVisitor {
            type Value = UniqueMap;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an object of string values with distinct keys")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<UniqueMap, A::Error> {
                let mut out = BTreeMap::new();
                while let Some((k, v)) = access.next_entry::<String, String>()? {
                    if out.contains_key(&k) {
                        return Err(serde::de::Error::custom(format_args!("duplicate key `{k}`")));
                    }
                    out.insert(k, v);
                }
                Ok(UniqueMap(out))
            }
        }
        deserializer.deserialize_map(UniqueVisitor)
    }
}

impl UniqueMap {
    fn pairs(&self) -> Vec<(String, String)> {
        self.0.iter().map(|(a, b)| (a.clone(), b.clone())).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDoc {
    pub id: String,
    pub color: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub id: String,
    pub ends: [String; 2],
    pub color: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub vertices: Vec<VertexDoc>,
    #[serde(default)]
    pub edges: Vec<EdgeDoc>,
}

impl GraphDoc {
    pub fn from_graph(g: &ColoredGraph) -> Self {
        GraphDoc {
            vertices: g.vertices().iter().map(|v| VertexDoc { id: v.id.clone(), color: v.color.0 }).collect(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeDoc {
                    id: e.id.clone(),
                    ends: [g.vertex(e.ends[0]).id.clone(), g.vertex(e.ends[1]).id.clone()],
                    color: e.color.0,
                })
                .collect(),
        }
    }

    pub fn to_spec(&self) -> GraphSpec {
        let mut spec = GraphSpec::new();
        for v in &self.vertices {
            spec = spec.vertex(&v.id, v.color);
        }
        for e in &self.edges {
            spec = spec.edge(&e.id, &e.ends[0], &e.ends[1], e.color);
        }
        spec
    }

    fn sort(&mut self) {
        self.vertices.sort_by(|a, b| a.id.cmp(&b.id));
        self.edges.sort_by(|a, b| a.id.cmp(&b.id));
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PaletteDoc {
    pub color: u32,
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub style: Option<String>,
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductionDoc {
    pub name: String,
    #[serde(default, skip_serializing_if = "is_false")]
    pub general: bool,
    pub top: GraphDoc,
    pub bottom: GraphDoc,
    /// Top vertex id to `v:<id>` or `bary:<edge id>` of the bottom.
    pub map: UniqueMap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GluingDoc {
    pub name: String,
    pub src: String,
    pub dst: String,
    pub top_map: UniqueMap,
    pub bottom_map: UniqueMap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramDocument {
    pub format: String,
    pub name: String,
    #[serde(default)]
    pub palette: Vec<PaletteDoc>,
    pub start: GraphDoc,
    #[serde(default)]
    pub productions: Vec<ProductionDoc>,
    #[serde(default)]
    pub gluings: Vec<GluingDoc>,
    #[serde(default)]
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    SyntaxError { line: usize, column: usize, message: String },
    #[error("unsupported format `{0}` (expected `{FORMAT_TAG}`)")]
    UnsupportedVersion(String),
    #[error("{owner} references unknown `{name}`")]
    UnknownReference { owner: String, name: String },
    #[error("duplicate {kind} name `{name}`")]
    DuplicateName { kind: String, name: String },
    #[error("invalid document: {}", .0.join("; "))]
    Invalid(Vec<String>),
}

impl DslError {
    pub fn kind(&self) -> &'static str {
        match self {
            DslError::SyntaxError { .. } => "SyntaxError",
            DslError::UnsupportedVersion(_) => "UnsupportedVersion",
            DslError::UnknownReference { .. } => "UnknownReference",
            DslError::DuplicateName { .. } => "DuplicateName",
            DslError::Invalid(_) => "Invalid",
        }
    }

    /// The most specific error among builder errors.
    fn from_build(errors: Vec<BuildError>) -> Self {
        for e in &errors {
            if let BuildError::UnknownReference { gluing, production } = e {
                return DslError::UnknownReference { owner: format!("gluing `{gluing}`"), name: production.clone() };
            }
        }
        for e in &errors {
            if let BuildError::DuplicateName { kind, name } = e {
                return DslError::DuplicateName { kind: kind.to_string(), name: name.clone() };
            }
        }
        for e in &errors {
            if let BuildError::UnknownVertex { owner, id } = e {
                return DslError::UnknownReference { owner: owner.clone(), name: id.clone() };
            }
        }
        DslError::Invalid(errors.iter().map(|e| e.to_string()).collect())
    }
}

impl DiagramDocument {
    pub fn from_diagram(d: &MarkovDiagram) -> Self {
        let mut doc = DiagramDocument {
            format: FORMAT_TAG.to_string(),
            name: d.name.clone(),
            palette: d
                .palette
                .iter()
                .map(|(c, p)| PaletteDoc { color: c.0, name: p.name.clone(), style: p.style.clone() })
                .collect(),
            start: GraphDoc::from_graph(&d.start),
            productions: d
                .productions
                .iter()
                .map(|p| ProductionDoc {
                    name: p.name.clone(),
                    general: p.general,
                    top: GraphDoc::from_graph(p.top()),
                    bottom: GraphDoc::from_graph(p.bottom()),
                    map: UniqueMap(
                        (0..p.top().vertex_count())
                            .map(|v| (p.top().vertex(v).id.clone(), p.map.apply(v).label(p.bottom())))
                            .collect(),
                    ),
                })
                .collect(),
            gluings: d
                .gluings
                .iter()
                .map(|g| {
                    let (s, t) = (d.production(&g.source), d.production(&g.target));
                    let ids = |from: Option<&ColoredGraph>, to: Option<&ColoredGraph>, m: &[usize]| {
                        let (from, to) = (from.expect("gluings name productions"), to.expect("gluings name productions"));
                        UniqueMap(
                            m.iter().enumerate().map(|(x, &y)| (from.vertex(x).id.clone(), to.vertex(y).id.clone())).collect(),
                        )
                    };
                    GluingDoc {
                        name: g.name.clone(),
                        src: g.source.clone(),
                        dst: g.target.clone(),
                        top_map: ids(s.map(|p| p.top()), t.map(|p| p.top()), &g.top_map),
                        bottom_map: ids(s.map(|p| p.bottom()), t.map(|p| p.bottom()), &g.bottom_map),
                    }
                })
                .collect(),
            notes: d.notes.clone(),
        };
        doc.canonicalize();
        doc
    }

    /// Sorts every list whose order carries no meaning.
    pub fn canonicalize(&mut self) {
        self.palette.sort_by_key(|p| p.color);
        self.start.sort();
        self.productions.sort_by(|a, b| a.name.cmp(&b.name));
        for p in &mut self.productions {
            p.top.sort();
            p.bottom.sort();
        }
        self.gluings.sort_by(|a, b| a.name.cmp(&b.name));
    }

    pub fn to_diagram(&self) -> Result<MarkovDiagram, DslError> {
        if self.format != FORMAT_TAG {
            return Err(DslError::UnsupportedVersion(self.format.clone()));
        }
        let mut seen = BTreeSet::new();
        let mut b = DiagramBuilder::new(&self.name);
        for p in &self.palette {
            if !seen.insert(p.color) {
                return Err(DslError::DuplicateName { kind: "color".into(), name: p.color.to_string() });
            }
            b = b.color(p.color, &p.name, p.style.as_deref());
        }
        b = b.start(self.start.to_spec());
        for p in &self.productions {
            b = b.production_owned(&p.name, p.top.to_spec(), p.bottom.to_spec(), p.map.pairs(), p.general);
        }
        for g in &self.gluings {
            b = b.gluing_owned(&g.name, &g.src, &g.dst, g.top_map.pairs(), g.bottom_map.pairs());
        }
        for n in &self.notes {
            b = b.note(n);
        }
        b.build().map_err(DslError::from_build)
    }
}

fn syntax(e: serde_json::Error) -> DslError {
    DslError::SyntaxError { line: e.line(), column: e.column(), message: e.to_string() }
}

/// Reads a document without resolving references.
pub fn parse_document(text: &str) -> Result<DiagramDocument, DslError> {
    serde_json::from_str(text).map_err(syntax)
}

/// Reads a document and checks that it describes a diagram.
pub fn parse(text: &str) -> Result<DiagramDocument, DslError> {
    let doc = parse_document(text)?;
    doc.to_diagram()?;
    Ok(doc)
}

pub fn parse_diagram(text: &str) -> Result<MarkovDiagram, DslError> {
    parse_document(text)?.to_diagram()
}

/// Canonical text: sorted lists, sorted keys, two-space indent, final newline.
pub fn serialize(doc: &DiagramDocument) -> String {
    let mut doc = doc.clone();
    doc.canonicalize();
    let mut out = serde_json::to_string_pretty(&doc).expect("documents serialize");
    out.push('\n');
    out
}

pub fn serialize_diagram(d: &MarkovDiagram) -> String {
    serialize(&DiagramDocument::from_diagram(d))
}

/// SHA-256 of the canonical text, as lowercase hex.
pub fn content_hash(d: &MarkovDiagram) -> String {
    let digest = Sha256::digest(serialize_diagram(d).as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

//! Productions, gluings and Markov diagrams.

mod builder;
mod coverage;
mod validate;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::complex::{Color, ColoredGraph, QuasiSimplicialMap};

pub use builder::{BuildError, DiagramBuilder};
pub use coverage::{coverage_check, Coverage, CoverageProblem, GluingSlot, Role, RuleTable, Signature};
pub use validate::{
    check_elementary, subdivided_point, validate_diagram, validate_gluing, validate_production, DiagramProblem, DiagramReport,
    GluingError, GluingVerdict, MapSide, ProductionError, ProductionVerdict,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProductionKind {
    /// Bottom is a single vertex.
    Vertex,
    /// Bottom is a single edge with its two endpoints.
    Edge,
    /// Any other bottom; only allowed when declared.
    General,
}

impl fmt::Display for ProductionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProductionKind::Vertex => "vertex",
            ProductionKind::Edge => "edge",
            ProductionKind::General => "general",
        })
    }
}

/// A rewrite rule: a simplicial or quasi-simplicial map from its top graph
/// onto its bottom graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Production {
    pub name: String,
    pub map: QuasiSimplicialMap,
    /// Declares that the bottom may be something other than a vertex or an edge.
    pub general: bool,
}

impl Production {
    pub fn new(name: impl Into<String>, map: QuasiSimplicialMap) -> Self {
        Production { name: name.into(), map, general: false }
    }

    pub fn top(&self) -> &ColoredGraph {
        self.map.domain()
    }

    pub fn bottom(&self) -> &ColoredGraph {
        self.map.codomain()
    }

    pub fn kind(&self) -> ProductionKind {
        if self.bottom().is_single_vertex() {
            ProductionKind::Vertex
        } else if self.bottom().is_single_edge() {
            ProductionKind::Edge
        } else {
            ProductionKind::General
        }
    }
}

/// A pair of colored embeddings `t(S) -> t(T)` and `b(S) -> b(T)` between
/// two productions, given as vertex index maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gluing {
    pub name: String,
    pub source: String,
    pub target: String,
    pub top_map: Vec<usize>,
    pub bottom_map: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PaletteEntry {
    pub name: String,
    /// Free-form drawing hint for exports, e.g. `dotted`.
    pub style: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkovDiagram {
    pub name: String,
    pub palette: BTreeMap<Color, PaletteEntry>,
    pub start: Arc<ColoredGraph>,
    pub productions: Vec<Production>,
    pub gluings: Vec<Gluing>,
    pub notes: Vec<String>,
}

impl MarkovDiagram {
    pub fn production(&self, name: &str) -> Option<&Production> {
        self.productions.iter().find(|p| p.name == name)
    }

    pub fn production_index(&self, name: &str) -> Option<usize> {
        self.productions.iter().position(|p| p.name == name)
    }

    pub fn gluing(&self, name: &str) -> Option<&Gluing> {
        self.gluings.iter().find(|g| g.name == name)
    }

    pub fn validate(&self) -> DiagramReport {
        validate_diagram(self)
    }

    pub fn is_elementary(&self) -> bool {
        check_elementary(self)
    }

    /// Productions sorted by name, gluings sorted by name.
    pub fn canonicalized(&self) -> MarkovDiagram {
        let mut d = self.clone();
        d.productions.sort_by(|a, b| a.name.cmp(&b.name));
        d.gluings.sort_by(|a, b| a.name.cmp(&b.name));
        d
    }
}

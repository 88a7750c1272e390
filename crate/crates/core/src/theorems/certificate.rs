use serde::Serialize;

use super::hypotheses::{
    check_connectedness, check_dap, ConnectivityConclusion, ConnectivityVerdict, DapConclusion, DapVerdict,
};
use super::sections::{build_sections, verify_sections};
use crate::diagram::MarkovDiagram;
use crate::dsl::content_hash;
use crate::expansion::{expand, Level};
use crate::metrics::MetricsSummary;

pub const CERTIFICATE_SCHEMA: &str = "mcert/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Property {
    Connected,
    LocallyConnected,
    DisjointArcs,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Label {
    MengerCurve,
    Properties(Vec<Property>),
    Inconclusive,
}

impl Label {
    pub fn properties(&self) -> Vec<Property> {
        match self {
            Label::MengerCurve => vec![Property::Connected, Property::LocallyConnected, Property::DisjointArcs],
            Label::Properties(p) => p.clone(),
            Label::Inconclusive => Vec::new(),
        }
    }

    pub fn has(&self, p: Property) -> bool {
        self.properties().contains(&p)
    }
}

/// Compactness and dimension facts read off the expanded levels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FinitenessFacts {
    /// Every expanded level is a finite graph.
    pub finite: bool,
    /// `[vertices, edges]` per expanded level.
    pub level_counts: Vec<[usize; 2]>,
    /// The start graph has two vertices, so the limit has two points.
    pub at_least_two_points: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expansion_error: Option<String>,
}

/// Outcome of building and checking disjoint sections at one level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectionSummary {
    pub level: usize,
    pub verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub image_sizes: Option<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub schema_version: String,
    pub tool_version: String,
    pub diagram: String,
    pub content_hash: String,
    pub depth: usize,
    pub connectivity: ConnectivityVerdict,
    pub dap: DapVerdict,
    pub facts: FinitenessFacts,
    pub label: Label,
    pub sections: Vec<SectionSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metrics: Option<MetricsSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("certificates serialize");
        out.push('\n');
        out
    }
}

fn label(connectivity: &ConnectivityVerdict, dap: &DapVerdict, facts: &FinitenessFacts) -> Label {
    let connected = connectivity.conclusion == ConnectivityConclusion::ConnectedLocallyConnected;
    let arcs = dap.conclusion == DapConclusion::DisjointArcs;
    if connected && arcs && facts.finite && facts.at_least_two_points {
        return Label::MengerCurve;
    }
    let mut props = Vec::new();
    if connected {
        props.extend([Property::Connected, Property::LocallyConnected]);
    }
    if arcs {
        props.push(Property::DisjointArcs);
    }
    if props.is_empty() {
        Label::Inconclusive
    } else {
        Label::Properties(props)
    }
}

/// Certificate over already expanded levels; `expansion_error` records why
/// fewer levels are present than asked for.
pub fn certify_levels(
    d: &MarkovDiagram,
    levels: &[Level],
    depth: usize,
    expansion_error: Option<String>,
) -> Certificate {
    let connectivity = check_connectedness(d);
    let dap = check_dap(d);
    let facts = FinitenessFacts {
        finite: expansion_error.is_none(),
        level_counts: levels.iter().map(|l| [l.graph.vertex_count(), l.graph.edge_count()]).collect(),
        at_least_two_points: d.start.vertex_count() >= 2,
        expansion_error,
    };
    let mut sections = Vec::new();
    if dap.conclusion == DapConclusion::DisjointArcs {
        for i in 1..levels.len() {
            sections.push(match build_sections(d, levels, i) {
                Ok(pair) => SectionSummary {
                    level: i,
                    verified: verify_sections(levels, &pair).passed(),
                    image_sizes: Some([pair.f.image_vertices().len(), pair.g.image_vertices().len()]),
                    error: None,
                },
                Err(e) => SectionSummary { level: i, verified: false, image_sizes: None, error: Some(e.to_string()) },
            });
        }
    }
    Certificate {
        schema_version: CERTIFICATE_SCHEMA.to_string(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        diagram: d.name.clone(),
        content_hash: content_hash(d),
        depth,
        label: label(&connectivity, &dap, &facts),
        connectivity,
        dap,
        facts,
        sections,
        metrics: None,
        timestamp: None,
    }
}

/// Expands to `depth` and combines the hypothesis checks into a verdict.
pub fn certify(d: &MarkovDiagram, depth: usize) -> Certificate {
    match expand(d, depth.max(1)) {
        Ok(levels) => certify_levels(d, &levels, depth, None),
        Err(e) => certify_levels(d, &[], depth, Some(e.to_string())),
    }
}

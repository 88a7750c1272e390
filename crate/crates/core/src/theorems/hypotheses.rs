use std::collections::BTreeSet;

use serde::Serialize;

use super::paths::is_biconnected;
use crate::complex::{colored_isomorphism, Color, ColoredGraph, GraphSpec, MapClass};
use crate::diagram::{MarkovDiagram, ProductionKind};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ConnectivityFailure {
    NotQuasiSimplicial { production: String, class: String },
    TopDisconnected { production: String, components: usize },
    StartDisconnected { components: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ConnectivityConclusion {
    ConnectedLocallyConnected,
    NoConclusion,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectivityVerdict {
    pub hypotheses_hold: bool,
    pub failures: Vec<ConnectivityFailure>,
    pub conclusion: ConnectivityConclusion,
}

/// Colors that can label an isolated vertex at some level: isolated
/// vertices of the start graph and of edge tops, closed under the vertex
/// productions that rewrite them.
pub(crate) fn isolated_colors(d: &MarkovDiagram) -> BTreeSet<Color> {
    let colors_of = |g: &ColoredGraph| g.isolated_vertices().map(|v| g.vertex(v).color).collect::<Vec<_>>();
    let mut out: BTreeSet<Color> = colors_of(&d.start).into_iter().collect();
    for p in d.productions.iter().filter(|p| p.kind() != ProductionKind::Vertex) {
        out.extend(colors_of(p.top()));
    }
    loop {
        let before = out.len();
        for p in d.productions.iter().filter(|p| p.kind() == ProductionKind::Vertex) {
            if out.contains(&p.bottom().vertex(0).color) {
                out.extend(colors_of(p.top()));
            }
        }
        if out.len() == before {
            return out;
        }
    }
}

/// Whether a production's top can be a maximal member of a chart, so that
/// its connectedness matters.
pub(crate) fn top_must_connect(p: &crate::diagram::Production, isolated: &BTreeSet<Color>) -> bool {
    p.kind() != ProductionKind::Vertex || isolated.contains(&p.bottom().vertex(0).color)
}

/// Sufficient conditions for a connected and locally connected limit.
pub fn check_connectedness(d: &MarkovDiagram) -> ConnectivityVerdict {
    let mut failures = Vec::new();
    let isolated = isolated_colors(d);
    let mut prods: Vec<_> = d.productions.iter().collect();
    prods.sort_by(|a, b| a.name.cmp(&b.name));
    for p in &prods {
        match p.map.classify() {
            Ok(c) if c.is_quasi_simplicial() => {}
            Ok(c) => failures
                .push(ConnectivityFailure::NotQuasiSimplicial { production: p.name.clone(), class: c.name().into() }),
            Err(_) => failures.push(ConnectivityFailure::NotQuasiSimplicial {
                production: p.name.clone(),
                class: "invalid".into(),
            }),
        }
    }
    for p in &prods {
        let components = p.top().components().len();
        if components != 1 && top_must_connect(p, &isolated) {
            failures.push(ConnectivityFailure::TopDisconnected { production: p.name.clone(), components });
        }
    }
    let components = d.start.components().len();
    if components != 1 {
        failures.push(ConnectivityFailure::StartDisconnected { components });
    }
    let hypotheses_hold = failures.is_empty();
    let conclusion =
        if hypotheses_hold { ConnectivityConclusion::ConnectedLocallyConnected } else { ConnectivityConclusion::NoConclusion };
    ConnectivityVerdict { hypotheses_hold, failures, conclusion }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum DapFailure {
    NotElementary,
    NonCanonicalVertexProduction { production: String },
    EdgeTopDisconnected { production: String },
    EdgeTopNotBiconnected { production: String, articulation: Vec<String> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DapConclusion {
    DisjointArcs,
    NoConclusion,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DapVerdict {
    pub elementary: bool,
    pub vertex_productions_canonical: bool,
    pub edge_tops_connected: bool,
    pub edge_tops_biconnected: bool,
    pub failures: Vec<DapFailure>,
    pub conclusion: DapConclusion,
}

fn canonical_vertex_top() -> ColoredGraph {
    GraphSpec::new().vertex("a", 0).vertex("b", 0).edge("ab", "a", "b", 0).validate().expect("fixed shape")
}

/// Whether a vertex production has a single edge over its point.
pub fn is_canonical_vertex_production(p: &crate::diagram::Production) -> bool {
    let shape = canonical_vertex_top();
    p.kind() == ProductionKind::Vertex
        && p.map.classify().map(|c| c == MapClass::Degenerate).unwrap_or(false)
        && colored_isomorphism(&p.top().recolored(Color(0)), &shape).is_some()
}

/// Sufficient conditions for the disjoint arcs property.
pub fn check_dap(d: &MarkovDiagram) -> DapVerdict {
    let elementary = d.is_elementary();
    let mut failures = Vec::new();
    if !elementary {
        failures.push(DapFailure::NotElementary);
    }
    let mut prods: Vec<_> = d.productions.iter().collect();
    prods.sort_by(|a, b| a.name.cmp(&b.name));
    let (mut canonical, mut connected, mut biconnected) = (true, true, true);
    for p in prods.iter().filter(|p| p.kind() == ProductionKind::Vertex) {
        if !is_canonical_vertex_production(p) {
            canonical = false;
            failures.push(DapFailure::NonCanonicalVertexProduction { production: p.name.clone() });
        }
    }
    for p in prods.iter().filter(|p| p.kind() == ProductionKind::Edge) {
        if !p.top().is_connected() {
            connected = false;
            biconnected = false;
            failures.push(DapFailure::EdgeTopDisconnected { production: p.name.clone() });
            continue;
        }
        let b = is_biconnected(p.top());
        if !b.biconnected {
            biconnected = false;
            failures.push(DapFailure::EdgeTopNotBiconnected {
                production: p.name.clone(),
                articulation: b.articulation.iter().map(|&v| p.top().vertex(v).id.clone()).collect(),
            });
        }
    }
    let conclusion = if elementary && canonical && connected && biconnected {
        DapConclusion::DisjointArcs
    } else {
        DapConclusion::NoConclusion
    };
    DapVerdict {
        elementary,
        vertex_productions_canonical: canonical,
        edge_tops_connected: connected,
        edge_tops_biconnected: biconnected,
        failures,
        conclusion,
    }
}

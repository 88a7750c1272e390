use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::{Decomposition, Level};
use crate::complex::{check_colored_embedding, Cell, ColoredGraph, EmbeddingViolation};
use crate::diagram::{subdivided_point, validate_gluing, GluingError, MarkovDiagram, ProductionKind, Role};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ChartSide {
    Top,
    Bottom,
}

impl fmt::Display for ChartSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChartSide::Top => "top",
            ChartSide::Bottom => "bottom",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DecompositionFailure {
    #[error("bonding map does not run between the two levels")]
    MapMismatch,
    #[error("bonding map is invalid: {0}")]
    BondingMap(String),
    #[error("assembly graph has {got} nodes, expected one per cell ({expected})")]
    NodeCount { expected: usize, got: usize },
    #[error("node {node} is labelled with cell `{got}`, expected `{expected}`")]
    NodeCell { node: usize, expected: String, got: String },
    #[error("cell `{cell}` is assigned production `{production}` of the wrong kind")]
    WrongProduction { cell: String, production: String },
    #[error("cell `{cell}` uses an unknown production or gluing index")]
    UnknownRule { cell: String },
    #[error("{side} chart of `{cell}` is malformed: {detail}")]
    ChartShape { side: ChartSide, cell: String, detail: String },
    #[error("{side} chart of `{cell}` is not a colored embedding: {violation}")]
    NotEmbedding { side: ChartSide, cell: String, violation: EmbeddingViolation },
    #[error("bottom chart of `{cell}` does not land on that cell")]
    BottomImage { cell: String },
    #[error("{side} chart does not cover `{cell}`")]
    NotCovered { side: ChartSide, cell: String },
    #[error("{side} chart images of `{first}` and `{second}` meet outside every chart image")]
    NotClosed { side: ChartSide, first: String, second: String },
    #[error("arc from `{vertex}` to `{edge}` is missing for the {role}")]
    ArcMissing { vertex: String, edge: String, role: Role },
    #[error("arc from `{vertex}` to `{edge}` is not an incidence of that role")]
    ArcMisplaced { vertex: String, edge: String },
    #[error("gluing `{gluing}` on the arc `{vertex}` -> `{edge}` is invalid: {error}")]
    GluingInvalid { gluing: String, vertex: String, edge: String, error: GluingError },
    #[error("gluing `{gluing}` on the arc `{vertex}` -> `{edge}` does not join those productions")]
    ArcLabel { gluing: String, vertex: String, edge: String },
    #[error("{side} square of arc `{vertex}` -> `{edge}` with `{gluing}` fails at `{witness}`")]
    CommutativityFailure { side: ChartSide, vertex: String, edge: String, gluing: String, witness: String },
    #[error("bonding map over `{cell}` differs from its production at top vertex `{vertex}`")]
    LocalForm { cell: String, vertex: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DecompositionReport {
    pub failures: Vec<DecompositionFailure>,
}

impl DecompositionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Images {
    vertices: Vec<usize>,
    edges: Vec<usize>,
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j, mut out) = (0, 0, Vec::new());
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Checks cover and closure under intersection for a family of subgraph
/// images, one per assembly node.
fn check_family(
    side: ChartSide,
    g: &ColoredGraph,
    images: &[Option<Images>],
    name: &dyn Fn(usize) -> String,
    out: &mut Vec<DecompositionFailure>,
) {
    let mut containing: Vec<Vec<usize>> = vec![Vec::new(); g.vertex_count()];
    let mut vertex_hit = vec![false; g.vertex_count()];
    let mut edge_hit = vec![false; g.edge_count()];
    for (i, im) in images.iter().enumerate() {
        let Some(im) = im else { continue };
        for &v in &im.vertices {
            containing[v].push(i);
            vertex_hit[v] = true;
        }
        for &e in &im.edges {
            edge_hit[e] = true;
        }
    }
    for v in (0..g.vertex_count()).filter(|&v| !vertex_hit[v]) {
        out.push(DecompositionFailure::NotCovered { side, cell: g.vertex(v).id.clone() });
    }
    for e in (0..g.edge_count()).filter(|&e| !edge_hit[e]) {
        out.push(DecompositionFailure::NotCovered { side, cell: g.edge(e).id.clone() });
    }
    for (w, members) in containing.iter().enumerate() {
        for (k, &a) in members.iter().enumerate() {
            for &b in &members[k + 1..] {
                let (ia, ib) = (images[a].as_ref().expect("listed"), images[b].as_ref().expect("listed"));
                let vs = intersect(&ia.vertices, &ib.vertices);
                if vs.first() != Some(&w) {
                    continue;
                }
                let es = intersect(&ia.edges, &ib.edges);
                let realized = members.iter().any(|&c| {
                    let ic = images[c].as_ref().expect("listed");
                    ic.vertices == vs && ic.edges == es
                });
                if !realized {
                    out.push(DecompositionFailure::NotClosed { side, first: name(a), second: name(b) });
                }
            }
        }
    }
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

/// Independently re-checks that `decomposition` is a decomposition of the
/// bonding map `upper -> lower` over `diagram`.
pub fn verify_decomposition(
    diagram: &MarkovDiagram,
    lower: &ColoredGraph,
    upper: &ColoredGraph,
    decomposition: &Decomposition,
) -> DecompositionReport {
    let mut out = Vec::new();
    let Decomposition { map, assembly, chart } = decomposition;
    if map.domain().as_ref() != upper || map.codomain().as_ref() != lower {
        out.push(DecompositionFailure::MapMismatch);
        return DecompositionReport { failures: out };
    }
    if let Err(e) = map.classify() {
        out.push(DecompositionFailure::BondingMap(e.to_string()));
    }
    let expected = lower.vertex_count() + lower.edge_count();
    let nodes = &assembly.nodes;
    if nodes.len() != expected
        || chart.top.len() != expected
        || chart.bottom.len() != expected
        || chart.top_edges.len() != expected
    {
        out.push(DecompositionFailure::NodeCount { expected, got: nodes.len() });
        return DecompositionReport { failures: out };
    }
    let cell_of = |i: usize| if i < lower.vertex_count() { Cell::Vertex(i) } else { Cell::Edge(i - lower.vertex_count()) };
    let name = |i: usize| lower.cell_id(cell_of(i)).to_string();

    let mut top_images: Vec<Option<Images>> = Vec::with_capacity(expected);
    let mut bottom_images: Vec<Option<Images>> = Vec::with_capacity(expected);
    for (i, node) in nodes.iter().enumerate() {
        top_images.push(None);
        bottom_images.push(None);
        let cell = name(i);
        if node.cell != cell_of(i) {
            out.push(DecompositionFailure::NodeCell { node: i, expected: cell, got: format!("{:?}", node.cell) });
            continue;
        }
        let Some(p) = diagram.productions.get(node.production) else {
            out.push(DecompositionFailure::UnknownRule { cell });
            continue;
        };
        let kind_ok = match node.cell {
            Cell::Vertex(_) => p.kind() == ProductionKind::Vertex,
            Cell::Edge(_) => p.kind() == ProductionKind::Edge,
        };
        if !kind_ok {
            out.push(DecompositionFailure::WrongProduction { cell, production: p.name.clone() });
            continue;
        }
        let (f, g) = (&chart.top[i], &chart.bottom[i]);
        let mut node_ok = true;
        if let Err(vs) = check_colored_embedding(p.top(), upper, f) {
            node_ok = false;
            out.extend(vs.into_iter().map(|violation| DecompositionFailure::NotEmbedding {
                side: ChartSide::Top,
                cell: cell.clone(),
                violation,
            }));
        }
        if let Err(vs) = check_colored_embedding(p.bottom(), lower, g) {
            node_ok = false;
            out.extend(vs.into_iter().map(|violation| DecompositionFailure::NotEmbedding {
                side: ChartSide::Bottom,
                cell: cell.clone(),
                violation,
            }));
        }
        if !node_ok {
            continue;
        }
        let bottom_edges: Vec<usize> = p
            .bottom()
            .edges()
            .iter()
            .filter_map(|e| lower.edge_between(g[e.ends[0]], g[e.ends[1]]))
            .collect();
        let lands = match node.cell {
            Cell::Vertex(v) => g == &[v],
            Cell::Edge(e) => {
                let ends = lower.edge(e).ends;
                bottom_edges == [e]
                    && node.orientation.is_some_and(|o| sorted(o.to_vec()) == sorted(ends.to_vec()))
                    && {
                        let be = p.bottom().edge(0).ends;
                        node.orientation == Some([g[be[0]], g[be[1]]])
                    }
            }
        };
        if !lands {
            out.push(DecompositionFailure::BottomImage { cell: cell.clone() });
            continue;
        }
        let top_edges: Vec<usize> = p
            .top()
            .edges()
            .iter()
            .map(|e| upper.edge_between(f[e.ends[0]], f[e.ends[1]]).expect("embedding preserves edges"))
            .collect();
        if chart.top_edges[i] != top_edges {
            out.push(DecompositionFailure::ChartShape {
                side: ChartSide::Top,
                cell: cell.clone(),
                detail: "edge images disagree with vertex images".into(),
            });
        }
        for x in 0..p.top().vertex_count() {
            let via_production = subdivided_point(p.bottom(), lower, g, p.map.apply(x));
            if via_production != Some(map.apply(f[x])) {
                out.push(DecompositionFailure::LocalForm { cell: cell.clone(), vertex: p.top().vertex(x).id.clone() });
            }
        }
        top_images[i] = Some(Images { vertices: sorted(f.clone()), edges: sorted(top_edges) });
        bottom_images[i] = Some(Images { vertices: sorted(g.clone()), edges: sorted(bottom_edges) });
    }
    check_family(ChartSide::Top, upper, &top_images, &name, &mut out);
    check_family(ChartSide::Bottom, lower, &bottom_images, &name, &mut out);

    // Arcs: exactly one per (edge, role), each a real incidence.
    let mut present = BTreeSet::new();
    let mut validated = BTreeSet::new();
    for arc in &assembly.arcs {
        let (vname, ename) = (
            if arc.from < nodes.len() { name(arc.from) } else { format!("#{}", arc.from) },
            if arc.to < nodes.len() { name(arc.to) } else { format!("#{}", arc.to) },
        );
        let placed = arc.from < lower.vertex_count()
            && arc.to >= lower.vertex_count()
            && arc.to < nodes.len()
            && nodes[arc.to].orientation.is_some_and(|o| o[arc.role.index()] == arc.from)
            && present.insert((arc.to, arc.role));
        if !placed {
            out.push(DecompositionFailure::ArcMisplaced { vertex: vname, edge: ename });
            continue;
        }
        let Some(gl) = diagram.gluings.get(arc.gluing) else {
            out.push(DecompositionFailure::UnknownRule { cell: ename });
            continue;
        };
        let (su, sv) = (&diagram.productions[nodes[arc.from].production], &diagram.productions[nodes[arc.to].production]);
        if gl.source != su.name || gl.target != sv.name {
            out.push(DecompositionFailure::ArcLabel { gluing: gl.name.clone(), vertex: vname, edge: ename });
            continue;
        }
        if validated.insert(arc.gluing) {
            let verdict = validate_gluing(diagram, gl);
            out.extend(verdict.errors.into_iter().map(|error| DecompositionFailure::GluingInvalid {
                gluing: gl.name.clone(),
                vertex: vname.clone(),
                edge: ename.clone(),
                error,
            }));
        }
        if top_images[arc.from].is_none() || top_images[arc.to].is_none() {
            continue;
        }
        let square = |side: ChartSide, witness: String| DecompositionFailure::CommutativityFailure {
            side,
            vertex: vname.clone(),
            edge: ename.clone(),
            gluing: gl.name.clone(),
            witness,
        };
        for (x, &y) in gl.top_map.iter().enumerate() {
            if chart.top[arc.to].get(y) != chart.top[arc.from].get(x) {
                out.push(square(ChartSide::Top, su.top().vertex(x).id.clone()));
            }
        }
        for (x, &y) in gl.bottom_map.iter().enumerate() {
            if chart.bottom[arc.to].get(y) != chart.bottom[arc.from].get(x) {
                out.push(square(ChartSide::Bottom, su.bottom().vertex(x).id.clone()));
            }
        }
    }
    for e in 0..lower.edge_count() {
        let node = lower.vertex_count() + e;
        for role in Role::BOTH {
            if !present.contains(&(node, role)) {
                let vertex = nodes[node].orientation.map_or_else(String::new, |o| name(o[role.index()]));
                out.push(DecompositionFailure::ArcMissing { vertex, edge: name(node), role });
            }
        }
    }
    DecompositionReport { failures: out }
}

/// Verifies every decomposition in an expansion. Returns one report per
/// level after the first.
pub fn verify_levels(diagram: &MarkovDiagram, levels: &[Level]) -> Vec<(usize, DecompositionReport)> {
    levels
        .windows(2)
        .map(|w| {
            let report = match &w[1].decomposition {
                Some(d) => verify_decomposition(diagram, &w[0].graph, &w[1].graph, d),
                None => DecompositionReport { failures: vec![DecompositionFailure::MapMismatch] },
            };
            (w[1].index, report)
        })
        .collect()
}

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::document::{content_hash, DslError, GraphDoc, UniqueMap};
use crate::complex::{Cell, ColoredGraph, QuasiSimplicialMap, SubdivisionPoint};
use crate::diagram::{MarkovDiagram, Role};
use crate::expansion::{AssemblyArc, AssemblyGraph, AssemblyNode, Chart, Decomposition, Level};

pub const LEVELS_FORMAT_TAG: &str = "mdgm-levels/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeDoc {
    /// `v:<id>` or `e:<id>` of the lower level.
    pub cell: String,
    pub production: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<[String; 2]>,
    pub top: UniqueMap,
    pub top_edges: UniqueMap,
    pub bottom: UniqueMap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcDoc {
    pub vertex: String,
    pub edge: String,
    pub gluing: String,
    pub role: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionDoc {
    /// Upper vertex id to `v:<id>` or `bary:<edge id>` of the lower level.
    pub bonding_map: UniqueMap,
    pub nodes: Vec<NodeDoc>,
    pub arcs: Vec<ArcDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelDoc {
    pub index: usize,
    pub graph: GraphDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionDoc>,
}

/// A finite prefix of the sequence with every decomposition spelled out.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelsDocument {
    pub format: String,
    pub diagram: String,
    pub content_hash: String,
    pub levels: Vec<LevelDoc>,
}

fn cell_label(g: &ColoredGraph, c: Cell) -> String {
    match c {
        Cell::Vertex(_) => format!("v:{}", g.cell_id(c)),
        Cell::Edge(_) => format!("e:{}", g.cell_id(c)),
    }
}

fn ids(from: &ColoredGraph, to: &ColoredGraph, m: &[usize], edges: bool) -> UniqueMap {
    UniqueMap(
        m.iter()
            .enumerate()
            .map(|(x, &y)| {
                if edges {
                    (from.edge(x).id.clone(), to.edge(y).id.clone())
                } else {
                    (from.vertex(x).id.clone(), to.vertex(y).id.clone())
                }
            })
            .collect(),
    )
}

fn decomposition_doc(d: &MarkovDiagram, lower: &ColoredGraph, dec: &Decomposition) -> DecompositionDoc {
    let upper = dec.map.domain();
    let nodes = dec
        .assembly
        .nodes
        .iter()
        .enumerate()
        .map(|(i, n)| {
            let p = &d.productions[n.production];
            NodeDoc {
                cell: cell_label(lower, n.cell),
                production: p.name.clone(),
                orientation: n.orientation.map(|o| [lower.vertex(o[0]).id.clone(), lower.vertex(o[1]).id.clone()]),
                top: ids(p.top(), upper, &dec.chart.top[i], false),
                top_edges: ids(p.top(), upper, &dec.chart.top_edges[i], true),
                bottom: ids(p.bottom(), lower, &dec.chart.bottom[i], false),
            }
        })
        .collect();
    let cell_id = |node: usize| lower.cell_id(dec.assembly.nodes[node].cell).to_string();
    let arcs = dec
        .assembly
        .arcs
        .iter()
        .map(|a| ArcDoc {
            vertex: cell_id(a.from),
            edge: cell_id(a.to),
            gluing: d.gluings[a.gluing].name.clone(),
            role: a.role.name().to_string(),
        })
        .collect();
    DecompositionDoc {
        bonding_map: UniqueMap(
            (0..upper.vertex_count()).map(|v| (upper.vertex(v).id.clone(), dec.map.apply(v).label(lower))).collect(),
        ),
        nodes,
        arcs,
    }
}

pub fn levels_document(d: &MarkovDiagram, levels: &[Level]) -> LevelsDocument {
    LevelsDocument {
        format: LEVELS_FORMAT_TAG.to_string(),
        diagram: d.name.clone(),
        content_hash: content_hash(d),
        levels: levels
            .iter()
            .enumerate()
            .map(|(k, l)| LevelDoc {
                index: l.index,
                graph: GraphDoc::from_graph(&l.graph),
                decomposition: l.decomposition.as_ref().map(|dec| decomposition_doc(d, &levels[k - 1].graph, dec)),
            })
            .collect(),
    }
}

pub fn serialize_levels(d: &MarkovDiagram, levels: &[Level]) -> String {
    let mut out = serde_json::to_string_pretty(&levels_document(d, levels)).expect("levels serialize");
    out.push('\n');
    out
}

fn unknown(owner: &str, name: &str) -> DslError {
    DslError::UnknownReference { owner: owner.to_string(), name: name.to_string() }
}

fn parse_cell(g: &ColoredGraph, label: &str) -> Result<Cell, DslError> {
    let cell = if let Some(id) = label.strip_prefix("v:") {
        g.vertex_index(id).map(Cell::Vertex)
    } else if let Some(id) = label.strip_prefix("e:") {
        g.edge_index(id).map(Cell::Edge)
    } else {
        None
    };
    cell.ok_or_else(|| unknown("assembly node", label))
}

fn index_map(
    owner: &str,
    map: &UniqueMap,
    from_len: usize,
    from_ids: impl Fn(&str) -> Option<usize>,
    to_ids: impl Fn(&str) -> Option<usize>,
) -> Result<Vec<usize>, DslError> {
    let mut out = vec![usize::MAX; from_len];
    for (a, b) in &map.0 {
        let x = from_ids(a).ok_or_else(|| unknown(owner, a))?;
        out[x] = to_ids(b).ok_or_else(|| unknown(owner, b))?;
    }
    if out.contains(&usize::MAX) {
        return Err(DslError::Invalid(vec![format!("{owner} is not total")]));
    }
    Ok(out)
}

fn load_decomposition(
    d: &MarkovDiagram,
    lower: &Arc<ColoredGraph>,
    upper: &Arc<ColoredGraph>,
    doc: &DecompositionDoc,
) -> Result<Decomposition, DslError> {
    let mut image = vec![None; upper.vertex_count()];
    for (v, p) in &doc.bonding_map.0 {
        let x = upper.vertex_index(v).ok_or_else(|| unknown("bonding map", v))?;
        image[x] = Some(SubdivisionPoint::parse_label(lower, p).ok_or_else(|| unknown("bonding map", p))?);
    }
    let image: Option<Vec<_>> = image.into_iter().collect();
    let image = image.ok_or_else(|| DslError::Invalid(vec!["bonding map is not total".into()]))?;
    let map = QuasiSimplicialMap::new(Arc::clone(upper), Arc::clone(lower), image)
        .map_err(|e| DslError::Invalid(vec![e.to_string()]))?;

    let mut nodes = Vec::with_capacity(doc.nodes.len());
    let mut chart = Chart { top: Vec::new(), top_edges: Vec::new(), bottom: Vec::new() };
    for n in &doc.nodes {
        let cell = parse_cell(lower, &n.cell)?;
        let production = d.production_index(&n.production).ok_or_else(|| unknown(&n.cell, &n.production))?;
        let p = &d.productions[production];
        let orientation = match &n.orientation {
            None => None,
            Some([a, b]) => Some([
                lower.vertex_index(a).ok_or_else(|| unknown(&n.cell, a))?,
                lower.vertex_index(b).ok_or_else(|| unknown(&n.cell, b))?,
            ]),
        };
        let owner = format!("chart of `{}`", n.cell);
        chart.top.push(index_map(
            &owner,
            &n.top,
            p.top().vertex_count(),
            |s| p.top().vertex_index(s),
            |s| upper.vertex_index(s),
        )?);
        chart.top_edges.push(index_map(
            &owner,
            &n.top_edges,
            p.top().edge_count(),
            |s| p.top().edge_index(s),
            |s| upper.edge_index(s),
        )?);
        chart.bottom.push(index_map(
            &owner,
            &n.bottom,
            p.bottom().vertex_count(),
            |s| p.bottom().vertex_index(s),
            |s| lower.vertex_index(s),
        )?);
        nodes.push(AssemblyNode { cell, production, orientation });
    }
    let node_index = |cell: Cell| nodes.iter().position(|n| n.cell == cell);
    let mut arcs = Vec::with_capacity(doc.arcs.len());
    for a in &doc.arcs {
        let from = lower.vertex_index(&a.vertex).and_then(|v| node_index(Cell::Vertex(v)));
        let to = lower.edge_index(&a.edge).and_then(|e| node_index(Cell::Edge(e)));
        let gluing = d.gluings.iter().position(|g| g.name == a.gluing);
        let role = match a.role.as_str() {
            "tail" => Some(Role::Tail),
            "head" => Some(Role::Head),
            _ => None,
        };
        match (from, to, gluing, role) {
            (Some(from), Some(to), Some(gluing), Some(role)) => arcs.push(AssemblyArc { from, to, gluing, role }),
            _ => return Err(unknown("assembly arc", &format!("{} -> {} ({}, {})", a.vertex, a.edge, a.gluing, a.role))),
        }
    }
    Ok(Decomposition { map, assembly: AssemblyGraph { nodes, arcs }, chart })
}

/// Rebuilds levels from a document. Structural consistency is left to
/// [`crate::expansion::verify_decomposition`].
pub fn levels_from_document(d: &MarkovDiagram, doc: &LevelsDocument) -> Result<Vec<Level>, DslError> {
    if doc.format != LEVELS_FORMAT_TAG {
        return Err(DslError::UnsupportedVersion(doc.format.clone()));
    }
    let mut levels: Vec<Level> = Vec::with_capacity(doc.levels.len());
    for (k, l) in doc.levels.iter().enumerate() {
        let graph = Arc::new(l.graph.to_spec().validate().map_err(|v| {
            DslError::Invalid(v.iter().map(|x| format!("level {}: {x}", l.index)).collect())
        })?);
        let decomposition = match (&l.decomposition, k) {
            (None, 0) => None,
            (Some(dec), k) if k > 0 => Some(load_decomposition(d, &levels[k - 1].graph, &graph, dec)?),
            _ => {
                return Err(DslError::Invalid(vec![format!(
                    "level {} must {}carry a decomposition",
                    l.index,
                    if k == 0 { "not " } else { "" }
                )]))
            }
        };
        levels.push(Level { index: l.index, graph, decomposition });
    }
    Ok(levels)
}

pub fn parse_levels(d: &MarkovDiagram, text: &str) -> Result<Vec<Level>, DslError> {
    let doc: LevelsDocument = serde_json::from_str(text)
        .map_err(|e| DslError::SyntaxError { line: e.line(), column: e.column(), message: e.to_string() })?;
    levels_from_document(d, &doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::builtins::{all, builtin};
    use crate::expansion::{expand, verify_levels};

    #[test]
    fn levels_round_trip() {
        for d in all() {
            let levels = expand(&d, 3).unwrap();
            let text = serialize_levels(&d, &levels);
            let back = parse_levels(&d, &text).unwrap();
            assert_eq!(back, levels, "{}", d.name);
            assert!(verify_levels(&d, &back).iter().all(|(_, r)| r.passed()));
        }
    }

    #[test]
    fn relabelled_chart_in_a_file_fails_verification() {
        let d = builtin("one_eight").unwrap();
        let levels = expand(&d, 2).unwrap();
        let mut doc = levels_document(&d, &levels);
        let dec = doc.levels[1].decomposition.as_mut().unwrap();
        let node = dec.nodes.iter_mut().find(|n| n.cell == "e:e").unwrap();
        let a = node.top.0["A"].clone();
        let c = node.top.0["C"].clone();
        node.top.0.insert("A".into(), c);
        node.top.0.insert("C".into(), a);
        let back = levels_from_document(&d, &doc).unwrap();
        assert!(!verify_levels(&d, &back)[0].1.passed());
    }

    #[test]
    fn unknown_ids_are_reported() {
        let d = builtin("cantor").unwrap();
        let levels = expand(&d, 2).unwrap();
        let mut doc = levels_document(&d, &levels);
        doc.levels[1].decomposition.as_mut().unwrap().nodes[0].production = "Q".into();
        assert!(matches!(levels_from_document(&d, &doc), Err(DslError::UnknownReference { .. })));
    }
}

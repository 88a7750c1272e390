use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use super::{MarkovDiagram, ProductionKind};
use crate::complex::{Color, ColoredGraph};

/// Endpoint of an edge production's bottom edge: `ends[0]` is the tail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    Tail,
    Head,
}

impl Role {
    pub const BOTH: [Role; 2] = [Role::Tail, Role::Head];

    pub fn index(self) -> usize {
        match self {
            Role::Tail => 0,
            Role::Head => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Role::Tail => "tail",
            Role::Head => "head",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// What a production must match to be applied to a cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Signature {
    Vertex(Color),
    /// Edge color and the colors of its ends, sorted.
    Edge { color: Color, ends: [Color; 2] },
}

impl Signature {
    pub fn of_vertex(g: &ColoredGraph, v: usize) -> Self {
        Signature::Vertex(g.vertex(v).color)
    }

    pub fn of_edge(g: &ColoredGraph, e: usize) -> Self {
        let edge = g.edge(e);
        let mut ends = [g.vertex(edge.ends[0]).color, g.vertex(edge.ends[1]).color];
        ends.sort();
        Signature::Edge { color: edge.color, ends }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Signature::Vertex(c) => write!(f, "vertex color {c}"),
            Signature::Edge { color, ends } => write!(f, "edge color {color} between colors {} and {}", ends[0], ends[1]),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CoverageProblem {
    #[error("no production matches {0}")]
    MissingProduction(Signature),
    #[error("several productions match {signature}: {}", candidates.join(", "))]
    AmbiguousProduction { signature: Signature, candidates: Vec<String> },
    #[error("no gluing from `{vertex_production}` into the {role} of `{edge_production}`")]
    MissingGluing { vertex_production: String, edge_production: String, role: Role },
    #[error("several gluings from `{vertex_production}` into the {role} of `{edge_production}`: {}", candidates.join(", "))]
    AmbiguousGluing { vertex_production: String, edge_production: String, role: Role, candidates: Vec<String> },
}

impl CoverageProblem {
    pub fn kind(&self) -> &'static str {
        match self {
            CoverageProblem::MissingProduction(_) => "MissingProduction",
            CoverageProblem::AmbiguousProduction { .. } => "AmbiguousProduction",
            CoverageProblem::MissingGluing { .. } => "MissingGluing",
            CoverageProblem::AmbiguousGluing { .. } => "AmbiguousGluing",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingSlot {
    pub vertex_production: String,
    pub edge_production: String,
    pub role: Role,
    pub gluing: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coverage {
    /// Every signature demanded by the start graph or a top, with its
    /// production when exactly one matches.
    pub signatures: Vec<(Signature, Option<String>)>,
    pub slots: Vec<GluingSlot>,
    /// Gluings not selected by any slot.
    pub unused_gluings: Vec<String>,
    pub problems: Vec<CoverageProblem>,
}

impl Coverage {
    pub fn is_complete(&self) -> bool {
        self.problems.is_empty()
    }
}

/// Index-level rules used by expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleTable {
    pub vertex: BTreeMap<Color, usize>,
    pub edge: BTreeMap<Signature, usize>,
    /// (edge production, role) to gluing.
    pub gluing: BTreeMap<(usize, Role), usize>,
}

impl RuleTable {
    pub fn vertex_rule(&self, g: &ColoredGraph, v: usize) -> Option<usize> {
        self.vertex.get(&g.vertex(v).color).copied()
    }

    pub fn edge_rule(&self, g: &ColoredGraph, e: usize) -> Option<usize> {
        self.edge.get(&Signature::of_edge(g, e)).copied()
    }
}

fn production_signature(d: &MarkovDiagram, p: usize) -> Option<Signature> {
    let prod = &d.productions[p];
    match prod.kind() {
        ProductionKind::Vertex => Some(Signature::of_vertex(prod.bottom(), 0)),
        ProductionKind::Edge => Some(Signature::of_edge(prod.bottom(), 0)),
        ProductionKind::General => None,
    }
}

fn demanded(d: &MarkovDiagram) -> BTreeSet<Signature> {
    let mut out = BTreeSet::new();
    let graphs = std::iter::once(d.start.as_ref()).chain(d.productions.iter().map(|p| p.top()));
    for g in graphs {
        out.extend((0..g.vertex_count()).map(|v| Signature::of_vertex(g, v)));
        out.extend((0..g.edge_count()).map(|e| Signature::of_edge(g, e)));
    }
    out
}

fn analyse(d: &MarkovDiagram) -> (Coverage, RuleTable) {
    let mut problems = Vec::new();
    let mut by_signature: BTreeMap<Signature, Vec<usize>> = BTreeMap::new();
    for p in 0..d.productions.len() {
        if let Some(sig) = production_signature(d, p) {
            by_signature.entry(sig).or_default().push(p);
        }
    }
    let mut table = RuleTable { vertex: BTreeMap::new(), edge: BTreeMap::new(), gluing: BTreeMap::new() };
    let mut signatures = Vec::new();
    for sig in demanded(d) {
        let mut candidates = by_signature.get(&sig).cloned().unwrap_or_default();
        candidates.sort_by(|&a, &b| d.productions[a].name.cmp(&d.productions[b].name));
        match candidates.as_slice() {
            [] => {
                problems.push(CoverageProblem::MissingProduction(sig));
                signatures.push((sig, None));
            }
            [p] => {
                match sig {
                    Signature::Vertex(c) => table.vertex.insert(c, *p),
                    Signature::Edge { .. } => table.edge.insert(sig, *p),
                };
                signatures.push((sig, Some(d.productions[*p].name.clone())));
            }
            many => {
                problems.push(CoverageProblem::AmbiguousProduction {
                    signature: sig,
                    candidates: many.iter().map(|&p| d.productions[p].name.clone()).collect(),
                });
                signatures.push((sig, None));
            }
        }
    }

    let mut slots = Vec::new();
    let mut used = BTreeSet::new();
    let edge_rules: Vec<usize> = table.edge.values().copied().collect::<BTreeSet<_>>().into_iter().collect();
    for ep in edge_rules {
        let prod = &d.productions[ep];
        let bottom = prod.bottom();
        for role in Role::BOTH {
            let end = bottom.edge(0).ends[role.index()];
            let Some(&vp) = table.vertex.get(&bottom.vertex(end).color) else {
                continue;
            };
            let vp_name = &d.productions[vp].name;
            let mut candidates: Vec<usize> = (0..d.gluings.len())
                .filter(|&g| {
                    let gl = &d.gluings[g];
                    gl.source == *vp_name && gl.target == prod.name && gl.bottom_map.first() == Some(&end)
                })
                .collect();
            candidates.sort_by(|&a, &b| d.gluings[a].name.cmp(&d.gluings[b].name));
            let chosen = match candidates.as_slice() {
                [] => {
                    problems.push(CoverageProblem::MissingGluing {
                        vertex_production: vp_name.clone(),
                        edge_production: prod.name.clone(),
                        role,
                    });
                    None
                }
                [g] => {
                    table.gluing.insert((ep, role), *g);
                    used.insert(*g);
                    Some(d.gluings[*g].name.clone())
                }
                many => {
                    problems.push(CoverageProblem::AmbiguousGluing {
                        vertex_production: vp_name.clone(),
                        edge_production: prod.name.clone(),
                        role,
                        candidates: many.iter().map(|&g| d.gluings[g].name.clone()).collect(),
                    });
                    None
                }
            };
            slots.push(GluingSlot {
                vertex_production: vp_name.clone(),
                edge_production: prod.name.clone(),
                role,
                gluing: chosen,
            });
        }
    }
    slots.sort_by(|a, b| {
        (&a.edge_production, a.role, &a.vertex_production).cmp(&(&b.edge_production, b.role, &b.vertex_production))
    });
    let mut unused_gluings: Vec<String> = (0..d.gluings.len())
        .filter(|g| !used.contains(g))
        .map(|g| d.gluings[g].name.clone())
        .collect();
    unused_gluings.sort();
    (Coverage { signatures, slots, unused_gluings, problems }, table)
}

/// Matches every demanded cell signature to a production and every
/// (vertex production, edge production, role) to a gluing.
pub fn coverage_check(d: &MarkovDiagram) -> Coverage {
    analyse(d).0
}

impl RuleTable {
    pub fn for_diagram(d: &MarkovDiagram) -> Result<RuleTable, Vec<CoverageProblem>> {
        let (coverage, table) = analyse(d);
        if coverage.is_complete() {
            Ok(table)
        } else {
            Err(coverage.problems)
        }
    }
}

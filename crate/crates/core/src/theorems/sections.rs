use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use super::hypotheses::{check_dap, DapConclusion, DapFailure};
use super::paths::two_disjoint_paths_with;
use super::two_sat::TwoSat;
use crate::complex::{Cell, ColoredGraph, SubdivisionPoint};
use crate::diagram::MarkovDiagram;
use crate::expansion::Level;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Pairing {
    /// First fiber vertex to first fiber vertex.
    Straight,
    /// First fiber vertex to second fiber vertex.
    Crossed,
}

/// Two disjoint monotone paths in an edge top, as top vertex ids. `first`
/// starts at the first vertex of the tail fiber.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathPair {
    pub first: Vec<String>,
    pub second: Vec<String>,
}

/// Which pairings an edge production admits between the fibers its two
/// gluings pick out.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Feasibility {
    pub edge_production: String,
    pub tail_gluing: String,
    pub head_gluing: String,
    pub straight: Option<PathPair>,
    pub crossed: Option<PathPair>,
}

impl Feasibility {
    pub fn feasible(&self) -> Vec<Pairing> {
        let mut out = Vec::new();
        if self.straight.is_some() {
            out.push(Pairing::Straight);
        }
        if self.crossed.is_some() {
            out.push(Pairing::Crossed);
        }
        out
    }
}

/// A map from level `i` into level `i + 1`: a vertex per vertex and a path
/// per edge, running from the image of `ends[0]` to the image of `ends[1]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Section {
    pub vertex_image: Vec<usize>,
    pub edge_paths: Vec<Vec<usize>>,
}

impl Section {
    /// Every vertex of the image, in first-visit order.
    pub fn image_vertices(&self) -> Vec<usize> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &v in self.vertex_image.iter().chain(self.edge_paths.iter().flatten()) {
            if seen.insert(v) {
                out.push(v);
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectionPair {
    pub level: usize,
    /// Per lower vertex: `false` sends `f` to the first fiber vertex.
    pub fiber_choice: Vec<bool>,
    pub edge_pairing: Vec<Pairing>,
    pub f: Section,
    pub g: Section,
    pub feasibility: Vec<Feasibility>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize)]
pub enum SectionError {
    #[error("the diagram does not meet the disjoint arcs hypotheses")]
    PreconditionFailed(Vec<DapFailure>),
    #[error("level {level} needs levels 1..={needed}, have {len}")]
    LevelOutOfRange { level: usize, needed: usize, len: usize },
    #[error("no consistent fiber choice at level {level}: {reason} (edges {})", edges.join(", "))]
    ConstructionFailed { level: usize, reason: String, edges: Vec<String> },
}

/// Position of each top vertex over the bottom edge, in half-edges from the tail.
fn positions(p: &crate::diagram::Production) -> Vec<u8> {
    (0..p.top().vertex_count())
        .map(|x| p.map.apply(x).position_on(p.bottom(), 0).expect("edge tops sit over their edge"))
        .collect()
}

fn feasibility(d: &MarkovDiagram, ep: usize, tail: usize, head: usize) -> Feasibility {
    let p = &d.productions[ep];
    let top = p.top();
    let pos = positions(p);
    let step = |u: usize, w: usize| pos[w] >= pos[u];
    let (gt, gh) = (&d.gluings[tail], &d.gluings[head]);
    let ids = |path: Vec<usize>| path.into_iter().map(|v| top.vertex(v).id.clone()).collect::<Vec<_>>();
    let solve = |t1: usize, t2: usize| {
        two_disjoint_paths_with(top, (gt.top_map[0], t1), (gt.top_map[1], t2), &step)
            .map(|(a, b)| PathPair { first: ids(a), second: ids(b) })
    };
    Feasibility {
        edge_production: p.name.clone(),
        tail_gluing: gt.name.clone(),
        head_gluing: gh.name.clone(),
        straight: solve(gh.top_map[0], gh.top_map[1]),
        crossed: solve(gh.top_map[1], gh.top_map[0]),
    }
}

/// Edge nodes' `[tail gluing, head gluing]`, indexed by lower edge.
fn arc_gluings(level: &Level, lower: &ColoredGraph) -> Vec<[usize; 2]> {
    let dec = level.decomposition.as_ref().expect("upper levels carry a decomposition");
    let mut out = vec![[usize::MAX; 2]; lower.edge_count()];
    for arc in &dec.assembly.arcs {
        if let Cell::Edge(e) = dec.assembly.nodes[arc.to].cell {
            out[e][arc.role.index()] = arc.gluing;
        }
    }
    out
}

/// Builds disjoint sections `f, g` of the bonding map from level `i + 1`
/// onto level `i`. `levels[k]` is level `k + 1`.
pub fn build_sections(d: &MarkovDiagram, levels: &[Level], i: usize) -> Result<SectionPair, SectionError> {
    let dap = check_dap(d);
    if dap.conclusion != DapConclusion::DisjointArcs {
        return Err(SectionError::PreconditionFailed(dap.failures));
    }
    if i == 0 || i + 1 > levels.len() {
        return Err(SectionError::LevelOutOfRange { level: i, needed: i + 1, len: levels.len() });
    }
    let lower = &levels[i - 1].graph;
    let upper = &levels[i];
    let dec = upper.decomposition.as_ref().expect("upper levels carry a decomposition");
    let nv = lower.vertex_count();
    let gluings = arc_gluings(upper, lower);

    let mut table: BTreeMap<(usize, usize, usize), Feasibility> = BTreeMap::new();
    let mut sat = TwoSat::new(nv);
    let mut infeasible = Vec::new();
    let mut constrained: Vec<(usize, usize, usize)> = Vec::new();
    for e in 0..lower.edge_count() {
        let node = &dec.assembly.nodes[nv + e];
        let [tail, head] = node.orientation.expect("edge nodes carry an orientation");
        let [gt, gh] = gluings[e];
        let entry = table.entry((node.production, gt, gh)).or_insert_with(|| feasibility(d, node.production, gt, gh));
        match (entry.straight.is_some(), entry.crossed.is_some()) {
            (true, true) => {}
            (true, false) => {
                sat.equal(tail, head);
                constrained.push((e, tail, head));
            }
            (false, true) => {
                sat.differ(tail, head);
                constrained.push((e, tail, head));
            }
            (false, false) => infeasible.push(lower.edge(e).id.clone()),
        }
    }
    if !infeasible.is_empty() {
        return Err(SectionError::ConstructionFailed {
            level: i,
            reason: "no disjoint monotone paths for either pairing".into(),
            edges: infeasible,
        });
    }
    let choice = sat.solve().map_err(|x| SectionError::ConstructionFailed {
        level: i,
        reason: format!("pairing constraints force both choices at vertex `{}`", lower.vertex(x).id),
        edges: constraint_component(lower, &constrained, x),
    })?;

    let mut f = Section { vertex_image: Vec::with_capacity(nv), edge_paths: Vec::new() };
    let mut g = Section { vertex_image: Vec::with_capacity(nv), edge_paths: Vec::new() };
    for v in 0..nv {
        let fiber = &dec.chart.top[v];
        f.vertex_image.push(fiber[usize::from(choice[v])]);
        g.vertex_image.push(fiber[usize::from(!choice[v])]);
    }
    let mut edge_pairing = Vec::with_capacity(lower.edge_count());
    for e in 0..lower.edge_count() {
        let node = &dec.assembly.nodes[nv + e];
        let [tail, head] = node.orientation.expect("edge nodes carry an orientation");
        let [gt, gh] = gluings[e];
        let entry = &table[&(node.production, gt, gh)];
        let pairing = if choice[tail] == choice[head] { Pairing::Straight } else { Pairing::Crossed };
        let pair = match pairing {
            Pairing::Straight => entry.straight.as_ref(),
            Pairing::Crossed => entry.crossed.as_ref(),
        }
        .expect("the solved choice respects feasibility");
        let top = d.productions[node.production].top();
        let embed = |ids: &[String]| -> Vec<usize> {
            let mut path: Vec<usize> = ids
                .iter()
                .map(|id| dec.chart.top[nv + e][top.vertex_index(id).expect("paths use top ids")])
                .collect();
            if lower.edge(e).ends[0] != tail {
                path.reverse();
            }
            path
        };
        let (pf, pg) = if choice[tail] { (&pair.second, &pair.first) } else { (&pair.first, &pair.second) };
        f.edge_paths.push(embed(pf));
        g.edge_paths.push(embed(pg));
        edge_pairing.push(pairing);
    }
    Ok(SectionPair {
        level: i,
        fiber_choice: choice,
        edge_pairing,
        f,
        g,
        feasibility: table.into_values().collect(),
    })
}

/// Constrained edges in the part of the constraint graph containing `x`.
fn constraint_component(lower: &ColoredGraph, constrained: &[(usize, usize, usize)], x: usize) -> Vec<String> {
    let mut reach = BTreeSet::from([x]);
    loop {
        let before = reach.len();
        for &(_, a, b) in constrained {
            if reach.contains(&a) || reach.contains(&b) {
                reach.insert(a);
                reach.insert(b);
            }
        }
        if reach.len() == before {
            break;
        }
    }
    constrained.iter().filter(|c| reach.contains(&c.1)).map(|c| lower.edge(c.0).id.clone()).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SectionName {
    F,
    G,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SectionFailure {
    Shape { section: SectionName },
    NotAdjacent { section: SectionName, edge: String },
    WrongEnds { section: SectionName, edge: String },
    NotInjective { section: SectionName, vertex: String },
    NotOverBase { section: SectionName, vertex: String, base: String },
    NotMonotone { section: SectionName, edge: String },
    Overlap { vertex: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectionReport {
    pub disjoint: bool,
    pub injective: bool,
    pub section_property: bool,
    pub monotone: bool,
    pub failures: Vec<SectionFailure>,
}

impl SectionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks a section pair from scratch against the levels it claims to live on.
pub fn verify_sections(levels: &[Level], pair: &SectionPair) -> SectionReport {
    let mut failures = Vec::new();
    let i = pair.level;
    if i == 0 || i + 1 > levels.len() || levels[i].bonding_map().is_none() {
        failures.push(SectionFailure::Shape { section: SectionName::F });
        return SectionReport { disjoint: false, injective: false, section_property: false, monotone: false, failures };
    }
    let lower = &levels[i - 1].graph;
    let upper = &levels[i].graph;
    let map = levels[i].bonding_map().expect("checked above");
    for (name, s) in [(SectionName::F, &pair.f), (SectionName::G, &pair.g)] {
        check_section(lower, upper, map, name, s, &mut failures);
    }
    let fset: BTreeSet<usize> = pair.f.image_vertices().into_iter().collect();
    for v in pair.g.image_vertices() {
        if fset.contains(&v) && v < upper.vertex_count() {
            failures.push(SectionFailure::Overlap { vertex: upper.vertex(v).id.clone() });
        }
    }
    let has = |pred: fn(&SectionFailure) -> bool| !failures.iter().any(pred);
    SectionReport {
        disjoint: has(|f| matches!(f, SectionFailure::Overlap { .. })),
        injective: has(|f| {
            matches!(
                f,
                SectionFailure::NotInjective { .. }
                    | SectionFailure::NotAdjacent { .. }
                    | SectionFailure::WrongEnds { .. }
                    | SectionFailure::Shape { .. }
            )
        }),
        section_property: has(|f| matches!(f, SectionFailure::NotOverBase { .. })),
        monotone: has(|f| matches!(f, SectionFailure::NotMonotone { .. })),
        failures,
    }
}

fn check_section(
    lower: &ColoredGraph,
    upper: &ColoredGraph,
    map: &crate::complex::QuasiSimplicialMap,
    name: SectionName,
    s: &Section,
    failures: &mut Vec<SectionFailure>,
) {
    let n = upper.vertex_count();
    if s.vertex_image.len() != lower.vertex_count()
        || s.edge_paths.len() != lower.edge_count()
        || s.vertex_image.iter().chain(s.edge_paths.iter().flatten()).any(|&v| v >= n)
        || s.edge_paths.iter().any(|p| p.len() < 2)
    {
        failures.push(SectionFailure::Shape { section: name });
        return;
    }
    let id = |v: usize| upper.vertex(v).id.clone();
    let mut uses = vec![0u32; n];
    for (v, &x) in s.vertex_image.iter().enumerate() {
        uses[x] += 1;
        if map.apply(x) != SubdivisionPoint::Vertex(v) {
            failures.push(SectionFailure::NotOverBase { section: name, vertex: id(x), base: lower.vertex(v).id.clone() });
        }
    }
    for (e, path) in s.edge_paths.iter().enumerate() {
        let edge = lower.edge(e);
        if path[0] != s.vertex_image[edge.ends[0]] || path[path.len() - 1] != s.vertex_image[edge.ends[1]] {
            failures.push(SectionFailure::WrongEnds { section: name, edge: edge.id.clone() });
        }
        if path.windows(2).any(|w| upper.edge_between(w[0], w[1]).is_none()) {
            failures.push(SectionFailure::NotAdjacent { section: name, edge: edge.id.clone() });
        }
        for &x in &path[1..path.len() - 1] {
            uses[x] += 1;
        }
        let mut last = 0;
        for &x in path {
            match map.apply(x).position_on(lower, e) {
                Some(p) if p >= last => last = p,
                Some(_) => {
                    failures.push(SectionFailure::NotMonotone { section: name, edge: edge.id.clone() });
                    break;
                }
                None => {
                    failures.push(SectionFailure::NotOverBase { section: name, vertex: id(x), base: edge.id.clone() });
                    break;
                }
            }
        }
    }
    for (x, &k) in uses.iter().enumerate() {
        if k > 1 {
            failures.push(SectionFailure::NotInjective { section: name, vertex: id(x) });
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LabelledSection {
    pub vertices: BTreeMap<String, String>,
    pub edges: BTreeMap<String, Vec<String>>,
}

impl LabelledSection {
    pub fn new(lower: &ColoredGraph, upper: &ColoredGraph, s: &Section) -> Self {
        let id = |v: usize| upper.vertex(v).id.clone();
        LabelledSection {
            vertices: s.vertex_image.iter().enumerate().map(|(v, &x)| (lower.vertex(v).id.clone(), id(x))).collect(),
            edges: s
                .edge_paths
                .iter()
                .enumerate()
                .map(|(e, p)| (lower.edge(e).id.clone(), p.iter().map(|&x| id(x)).collect()))
                .collect(),
        }
    }
}

//! Level-by-level expansion of elementary diagrams.

mod project;
mod union_find;
mod verify;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::complex::{Cell, ColoredGraph, Edge, QuasiSimplicialMap, SubdivisionPoint, Vertex};
use crate::diagram::{MarkovDiagram, Role, RuleTable};
use union_find::UnionFind;

pub use project::{project, PolyPoint, Projection};
pub(crate) use project::push_down;
pub use verify::{verify_decomposition, verify_levels, ChartSide, DecompositionFailure, DecompositionReport};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ExpansionError {
    #[error("diagram cannot be expanded: {}", .0.join("; "))]
    NotExpandable(Vec<String>),
    #[error("depth must be at least 1")]
    ZeroDepth,
    #[error("no production for cell `{0}`")]
    MissingProduction(String),
    #[error("no gluing for the {role} of edge `{edge}`")]
    MissingGluing { edge: String, role: Role },
    #[error("gluing identifies {reason}: {}", addresses.join(", "))]
    UnintendedCollision { reason: &'static str, addresses: Vec<String> },
    #[error("level index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
}

/// One node of an assembly graph: a cell of the lower level with its
/// production. Edge nodes also record which endpoint plays the tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssemblyNode {
    pub cell: Cell,
    pub production: usize,
    /// `[tail, head]` vertex indices for edge nodes.
    pub orientation: Option<[usize; 2]>,
}

/// Incidence of a vertex node in an edge node, labelled by a gluing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssemblyArc {
    pub from: usize,
    pub to: usize,
    pub gluing: usize,
    pub role: Role,
}

/// Nodes list the lower level's vertices first, then its edges, in index
/// order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssemblyGraph {
    pub nodes: Vec<AssemblyNode>,
    pub arcs: Vec<AssemblyArc>,
}

impl AssemblyGraph {
    pub fn node_of(&self, g: &ColoredGraph, cell: Cell) -> usize {
        match cell {
            Cell::Vertex(v) => v,
            Cell::Edge(e) => g.vertex_count() + e,
        }
    }
}

/// Top and bottom embeddings per assembly node, as index maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    /// Top vertex to upper-level vertex.
    pub top: Vec<Vec<usize>>,
    /// Top edge to upper-level edge.
    pub top_edges: Vec<Vec<usize>>,
    /// Bottom vertex to lower-level vertex.
    pub bottom: Vec<Vec<usize>>,
}

/// How the bonding map into the previous level splits over the diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub map: QuasiSimplicialMap,
    pub assembly: AssemblyGraph,
    pub chart: Chart,
}

/// Level `index` (starting at 1) of the sequence. Every level after the
/// first carries the decomposition of the bonding map onto its predecessor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level {
    pub index: usize,
    pub graph: Arc<ColoredGraph>,
    pub decomposition: Option<Decomposition>,
}

impl Level {
    pub fn bonding_map(&self) -> Option<&QuasiSimplicialMap> {
        self.decomposition.as_ref().map(|d| &d.map)
    }
}

/// Expands a validated, elementary, fully covered diagram.
#[derive(Clone, Debug)]
pub struct Expander<'a> {
    diagram: &'a MarkovDiagram,
    rules: RuleTable,
}

impl<'a> Expander<'a> {
    pub fn new(diagram: &'a MarkovDiagram) -> Result<Self, ExpansionError> {
        let report = diagram.validate();
        if !report.is_expandable() {
            let mut failures = report.failures();
            if !report.elementary {
                failures.push("diagram is not elementary".into());
            }
            return Err(ExpansionError::NotExpandable(failures));
        }
        let rules = RuleTable::for_diagram(diagram)
            .map_err(|p| ExpansionError::NotExpandable(p.iter().map(|x| x.to_string()).collect()))?;
        Ok(Expander { diagram, rules })
    }

    pub fn diagram(&self) -> &MarkovDiagram {
        self.diagram
    }

    pub fn first_level(&self) -> Level {
        Level { index: 1, graph: Arc::clone(&self.diagram.start), decomposition: None }
    }

    /// Assigns productions to every cell and gluings to every incidence.
    pub fn assign(&self, g: &ColoredGraph) -> Result<AssemblyGraph, ExpansionError> {
        let d = self.diagram;
        let mut nodes = Vec::with_capacity(g.vertex_count() + g.edge_count());
        for v in 0..g.vertex_count() {
            let production =
                self.rules.vertex_rule(g, v).ok_or_else(|| ExpansionError::MissingProduction(g.vertex(v).id.clone()))?;
            nodes.push(AssemblyNode { cell: Cell::Vertex(v), production, orientation: None });
        }
        let mut arcs = Vec::with_capacity(2 * g.edge_count());
        for e in 0..g.edge_count() {
            let production =
                self.rules.edge_rule(g, e).ok_or_else(|| ExpansionError::MissingProduction(g.edge(e).id.clone()))?;
            let orientation = orient(g, e, d.productions[production].bottom());
            let node = nodes.len();
            for role in Role::BOTH {
                let gluing = *self
                    .rules
                    .gluing
                    .get(&(production, role))
                    .ok_or_else(|| ExpansionError::MissingGluing { edge: g.edge(e).id.clone(), role })?;
                arcs.push(AssemblyArc { from: orientation[role.index()], to: node, gluing, role });
            }
            nodes.push(AssemblyNode { cell: Cell::Edge(e), production, orientation: Some(orientation) });
        }
        Ok(AssemblyGraph { nodes, arcs })
    }

    pub fn expand_once(&self, level: &Level) -> Result<Level, ExpansionError> {
        let g = &level.graph;
        let assembly = self.assign(g)?;
        let (graph, map_image, chart) = self.instantiate(g, &assembly)?;
        let graph = Arc::new(graph);
        let map = QuasiSimplicialMap::new(Arc::clone(&graph), Arc::clone(g), map_image)
            .expect("bonding map images lie in the lower level");
        Ok(Level { index: level.index + 1, graph, decomposition: Some(Decomposition { map, assembly, chart }) })
    }

    /// Levels `1..=depth`.
    pub fn expand(&self, depth: usize) -> Result<Vec<Level>, ExpansionError> {
        if depth == 0 {
            return Err(ExpansionError::ZeroDepth);
        }
        let mut levels = vec![self.first_level()];
        while levels.len() < depth {
            let next = self.expand_once(levels.last().expect("non-empty"))?;
            levels.push(next);
        }
        Ok(levels)
    }

    fn instantiate(
        &self,
        g: &ColoredGraph,
        assembly: &AssemblyGraph,
    ) -> Result<(ColoredGraph, Vec<SubdivisionPoint>, Chart), ExpansionError> {
        let d = self.diagram;
        let nodes = &assembly.nodes;
        let prods: Vec<_> = nodes.iter().map(|n| &d.productions[n.production]).collect();
        let mut vbase = Vec::with_capacity(nodes.len() + 1);
        let mut ebase = Vec::with_capacity(nodes.len() + 1);
        let (mut nv, mut ne) = (0, 0);
        for p in &prods {
            vbase.push(nv);
            ebase.push(ne);
            nv += p.top().vertex_count();
            ne += p.top().edge_count();
        }
        let mut vsets = UnionFind::new(nv);
        let mut esets = UnionFind::new(ne);
        for arc in &assembly.arcs {
            let gl = &d.gluings[arc.gluing];
            let (s, t) = (prods[arc.from].top(), prods[arc.to].top());
            for (x, &y) in gl.top_map.iter().enumerate() {
                vsets.union(vbase[arc.from] + x, vbase[arc.to] + y);
            }
            for (k, edge) in s.edges().iter().enumerate() {
                let y = t
                    .edge_between(gl.top_map[edge.ends[0]], gl.top_map[edge.ends[1]])
                    .expect("validated gluings are embeddings");
                esets.union(ebase[arc.from] + k, ebase[arc.to] + y);
            }
        }

        let mut slot_node = Vec::with_capacity(nv);
        for (i, p) in prods.iter().enumerate() {
            slot_node.extend(std::iter::repeat_n(i, p.top().vertex_count()));
        }
        let cell_id = |i: usize| g.cell_id(nodes[i].cell);
        let vaddr = |s: usize| {
            let i = slot_node[s];
            (cell_id(i), prods[i].name.as_str(), prods[i].top().vertex(s - vbase[i]).id.as_str())
        };
        let bottom_maps: Vec<Vec<usize>> = nodes.iter().zip(&prods).map(|(n, p)| bottom_embedding(n, p.bottom())).collect();
        let image_of = |s: usize| {
            let i = slot_node[s];
            let p = prods[i].map.apply(s - vbase[i]);
            push_point(prods[i].bottom(), g, &bottom_maps[i], p)
        };

        // Vertex classes: representative slot, then collision checks.
        let mut rep = vec![usize::MAX; nv];
        for s in 0..nv {
            let r = vsets.find(s);
            if rep[r] == usize::MAX || cmp_address(vaddr(s), vaddr(rep[r])) == Ordering::Less {
                rep[r] = s;
            }
        }
        let mut seen_in_node: HashMap<usize, usize> = HashMap::new();
        for (i, p) in prods.iter().enumerate() {
            seen_in_node.clear();
            for x in 0..p.top().vertex_count() {
                let s = vbase[i] + x;
                let r = vsets.find(s);
                if let Some(&other) = seen_in_node.get(&r) {
                    return Err(collision("two vertices of one instance", &[other, s], &vaddr));
                }
                seen_in_node.insert(r, s);
                let first = rep[r];
                if color_of_slot(&prods, &slot_node, &vbase, s) != color_of_slot(&prods, &slot_node, &vbase, first) {
                    return Err(collision("vertices of different colors", &[first, s], &vaddr));
                }
                if image_of(s) != image_of(first) {
                    return Err(collision("vertices over different points", &[first, s], &vaddr));
                }
            }
        }
        let mut classes: Vec<(String, usize)> = (0..nv)
            .filter(|&s| vsets.find(s) == s)
            .map(|r| (address_string(vaddr(rep[r])), r))
            .collect();
        classes.sort_unstable();
        let mut vindex = vec![usize::MAX; nv];
        for (k, &(_, r)) in classes.iter().enumerate() {
            vindex[r] = k;
        }
        let mut map_image = Vec::with_capacity(classes.len());
        let mut vertices = Vec::with_capacity(classes.len());
        for (id, r) in classes {
            let s = rep[r];
            vertices.push(Vertex { id, color: color_of_slot(&prods, &slot_node, &vbase, s) });
            map_image.push(image_of(s));
        }
        let mut top = Vec::with_capacity(nodes.len());
        for (i, p) in prods.iter().enumerate() {
            top.push((0..p.top().vertex_count()).map(|x| vindex[vsets.find(vbase[i] + x)]).collect::<Vec<_>>());
        }

        // Edge classes.
        let mut eslot_node = Vec::with_capacity(ne);
        for (i, p) in prods.iter().enumerate() {
            eslot_node.extend(std::iter::repeat_n(i, p.top().edge_count()));
        }
        let eaddr = |s: usize| {
            let i = eslot_node[s];
            (cell_id(i), prods[i].name.as_str(), prods[i].top().edge(s - ebase[i]).id.as_str())
        };
        let eends = |s: usize| {
            let i = eslot_node[s];
            let ends = prods[i].top().edge(s - ebase[i]).ends;
            [top[i][ends[0]], top[i][ends[1]]]
        };
        let ecolor = |s: usize| {
            let i = eslot_node[s];
            prods[i].top().edge(s - ebase[i]).color
        };
        let mut erep = vec![usize::MAX; ne];
        for s in 0..ne {
            let r = esets.find(s);
            if erep[r] == usize::MAX || cmp_address(eaddr(s), eaddr(erep[r])) == Ordering::Less {
                erep[r] = s;
            }
        }
        let sorted_pair = |e: [usize; 2]| if e[0] < e[1] { e } else { [e[1], e[0]] };
        for s in 0..ne {
            let first = erep[esets.find(s)];
            if sorted_pair(eends(s)) != sorted_pair(eends(first)) {
                return Err(collision("edges with different ends", &[first, s], &eaddr));
            }
            if ecolor(s) != ecolor(first) {
                return Err(collision("edges of different colors", &[first, s], &eaddr));
            }
        }
        let mut eclasses: Vec<(String, usize)> = (0..ne)
            .filter(|&s| esets.find(s) == s)
            .map(|r| (address_string(eaddr(erep[r])), r))
            .collect();
        eclasses.sort_unstable();
        let mut eindex = vec![usize::MAX; ne];
        let mut by_ends: HashMap<[usize; 2], usize> = HashMap::with_capacity(eclasses.len());
        let mut edges = Vec::with_capacity(eclasses.len());
        for (k, (id, r)) in eclasses.into_iter().enumerate() {
            eindex[r] = k;
            let s = erep[r];
            let ends = eends(s);
            if ends[0] == ends[1] {
                return Err(collision("both ends of an edge", &[s], &eaddr));
            }
            if let Some(&other) = by_ends.get(&sorted_pair(ends)) {
                return Err(collision("two parallel edges", &[erep[other], s], &eaddr));
            }
            by_ends.insert(sorted_pair(ends), r);
            edges.push(Edge { id, ends, color: ecolor(s) });
        }
        let mut top_edges = Vec::with_capacity(nodes.len());
        for (i, p) in prods.iter().enumerate() {
            top_edges.push((0..p.top().edge_count()).map(|k| eindex[esets.find(ebase[i] + k)]).collect::<Vec<_>>());
        }
        let graph = ColoredGraph::from_sorted_parts(vertices, edges);
        Ok((graph, map_image, Chart { top, top_edges, bottom: bottom_maps }))
    }
}

fn color_of_slot(
    prods: &[&crate::diagram::Production],
    slot_node: &[usize],
    vbase: &[usize],
    s: usize,
) -> crate::complex::Color {
    let i = slot_node[s];
    prods[i].top().vertex(s - vbase[i]).color
}

/// `[tail, head]` for edge `e` matched against a bottom edge: colors decide
/// when they differ, otherwise the smaller address is the tail.
pub(crate) fn orient(g: &ColoredGraph, e: usize, bottom: &ColoredGraph) -> [usize; 2] {
    let [a, b] = g.edge(e).ends;
    let (lo, hi) = if g.vertex(a).id < g.vertex(b).id { (a, b) } else { (b, a) };
    let tail_color = bottom.vertex(bottom.edge(0).ends[0]).color;
    let head_color = bottom.vertex(bottom.edge(0).ends[1]).color;
    if tail_color != head_color && g.vertex(lo).color != tail_color {
        [hi, lo]
    } else {
        [lo, hi]
    }
}

/// Bottom vertex to lower-level vertex for one node.
pub(crate) fn bottom_embedding(node: &AssemblyNode, bottom: &ColoredGraph) -> Vec<usize> {
    match (node.cell, node.orientation) {
        (Cell::Vertex(v), _) => vec![v],
        (Cell::Edge(_), Some([tail, head])) => {
            let ends = bottom.edge(0).ends;
            let mut m = vec![0; 2];
            m[ends[0]] = tail;
            m[ends[1]] = head;
            m
        }
        (Cell::Edge(_), None) => unreachable!("edge nodes carry an orientation"),
    }
}

/// Pushes a point of `β(bottom)` into `β(lower)` along a bottom embedding.
pub(crate) fn push_point(
    bottom: &ColoredGraph,
    lower: &ColoredGraph,
    embedding: &[usize],
    p: SubdivisionPoint,
) -> SubdivisionPoint {
    crate::diagram::subdivided_point(bottom, lower, embedding, p).expect("bottom embeddings preserve edges")
}

type Address<'s> = (&'s str, &'s str, &'s str);

fn address_bytes<'s>(a: Address<'s>) -> impl Iterator<Item = u8> + 's {
    a.0.bytes().chain(std::iter::once(b'/')).chain(a.1.bytes()).chain(std::iter::once(b'.')).chain(a.2.bytes())
}

fn cmp_address(a: Address<'_>, b: Address<'_>) -> Ordering {
    address_bytes(a).cmp(address_bytes(b))
}

fn address_string(a: Address<'_>) -> String {
    format!("{}/{}.{}", a.0, a.1, a.2)
}

fn collision<'s>(reason: &'static str, slots: &[usize], addr: &impl Fn(usize) -> Address<'s>) -> ExpansionError {
    ExpansionError::UnintendedCollision { reason, addresses: slots.iter().map(|&s| address_string(addr(s))).collect() }
}

/// Expands `diagram` to `depth` levels.
pub fn expand(diagram: &MarkovDiagram, depth: usize) -> Result<Vec<Level>, ExpansionError> {
    Expander::new(diagram)?.expand(depth)
}

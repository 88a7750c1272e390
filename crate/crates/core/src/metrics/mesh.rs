use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::schedule::MetricSchedule;
use super::MetricsError;
use crate::complex::{ColoredGraph, SubdivisionPoint};
use crate::diagram::{MarkovDiagram, RuleTable};
use crate::expansion::Level;
use crate::theorems::top_must_connect;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeshBound {
    pub level: usize,
    pub kappa: BigRational,
    /// Largest top diameter, in edges, over the maximal chart members.
    pub diameter: Option<u32>,
    /// `None` when some maximal member is disconnected.
    pub mesh: Option<BigRational>,
}

fn rules(d: &MarkovDiagram) -> Result<RuleTable, MetricsError> {
    RuleTable::for_diagram(d)
        .map_err(|p| MetricsError::NotExpandable(p.iter().map(|x| x.to_string()).collect()))
}

fn max_diameter(diameters: impl Iterator<Item = Option<u32>>) -> Option<u32> {
    let mut best = 0;
    for d in diameters {
        best = best.max(d?);
    }
    Some(best)
}

/// `κ_i` times the largest diameter among the tops laid over edges and
/// isolated vertices of level `i`.
pub fn mesh_bound(
    d: &MarkovDiagram,
    levels: &[Level],
    schedule: &MetricSchedule,
    i: usize,
) -> Result<MeshBound, MetricsError> {
    if i == 0 || i > levels.len() {
        return Err(MetricsError::LevelOutOfRange { level: i, len: levels.len() });
    }
    let rules = rules(d)?;
    let g = &levels[i - 1].graph;
    let missing = |id: &str| MetricsError::NotExpandable(vec![format!("no production for `{id}`")]);
    let mut tops = Vec::new();
    for e in 0..g.edge_count() {
        tops.push(rules.edge_rule(g, e).ok_or_else(|| missing(&g.edge(e).id))?);
    }
    for v in g.isolated_vertices() {
        tops.push(rules.vertex_rule(g, v).ok_or_else(|| missing(&g.vertex(v).id))?);
    }
    tops.sort_unstable();
    tops.dedup();
    let diameter = max_diameter(tops.iter().map(|&p| d.productions[p].top().diameter()));
    let kappa = schedule.kappa(i);
    let mesh = diameter.map(|k| &kappa * BigRational::from_integer(BigInt::from(k)));
    Ok(MeshBound { level: i, kappa, diameter, mesh })
}

/// Largest diameter over every production top that can be a maximal chart
/// member at some level.
pub fn diagram_diameter(d: &MarkovDiagram) -> Option<u32> {
    let isolated = crate::theorems::isolated_colors(d);
    max_diameter(d.productions.iter().filter(|p| top_must_connect(p, &isolated)).map(|p| p.top().diameter()))
}

/// Bound on `Σ_{j > i} mesh_j`; `None` when it diverges.
pub fn tail(d: &MarkovDiagram, schedule: &MetricSchedule, i: usize) -> Option<BigRational> {
    let diameter = diagram_diameter(d)?;
    if diameter == 0 {
        return Some(BigRational::zero());
    }
    schedule.tail_sum(i).map(|s| s * BigRational::from_integer(BigInt::from(diameter)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LipschitzViolation {
    pub upper_level: usize,
    pub u: String,
    pub v: String,
    pub distance: String,
    pub image_distance: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LipschitzReport {
    pub pairs_checked: u64,
    pub violation_count: u64,
    /// The first violations in level and pair order.
    pub violations: Vec<LipschitzViolation>,
}

impl LipschitzReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

const RECORDED_VIOLATIONS: usize = 16;

/// Hop distances in the barycentric subdivision from a point. Vertex `v`
/// is node `v`, the barycenter of edge `e` is node `|V| + e`.
pub(crate) fn subdivided_hops(g: &ColoredGraph, source: SubdivisionPoint) -> Vec<u32> {
    let n = g.vertex_count();
    let node = |p: SubdivisionPoint| match p {
        SubdivisionPoint::Vertex(v) => v,
        SubdivisionPoint::Barycenter(e) => n + e,
    };
    let mut dist = vec![u32::MAX; n + g.edge_count()];
    let s = node(source);
    dist[s] = 0;
    let mut queue = VecDeque::from([s]);
    while let Some(x) = queue.pop_front() {
        let next = dist[x] + 1;
        let mut visit = |y: usize, queue: &mut VecDeque<usize>| {
            if dist[y] == u32::MAX {
                dist[y] = next;
                queue.push_back(y);
            }
        };
        if x < n {
            for &(_, e) in g.neighbors(x) {
                visit(n + e, &mut queue);
            }
        } else {
            for &end in &g.edge(x - n).ends {
                visit(end, &mut queue);
            }
        }
    }
    dist
}

pub(crate) fn point_node(g: &ColoredGraph, p: SubdivisionPoint) -> usize {
    match p {
        SubdivisionPoint::Vertex(v) => v,
        SubdivisionPoint::Barycenter(e) => g.vertex_count() + e,
    }
}

/// `a · p <= b · q` on non-negative integers, exactly.
fn scaled_le(a: u32, p: &BigInt, b: u32, q: &BigInt) -> bool {
    match (p.to_u64(), q.to_u64()) {
        (Some(p), Some(q)) => u128::from(a) * u128::from(p) <= u128::from(b) * u128::from(q),
        _ => BigInt::from(a) * p <= BigInt::from(b) * q,
    }
}

/// Checks `d_i(p(u), p(v)) <= d_{i+1}(u, v)` for every pair of vertices of
/// every level after the first, with image distances taken in the
/// subdivided lower level.
pub fn check_lipschitz(levels: &[Level], schedule: &MetricSchedule) -> LipschitzReport {
    let mut report = LipschitzReport { pairs_checked: 0, violation_count: 0, violations: Vec::new() };
    for j in 1..levels.len() {
        let (lower, upper) = (&levels[j - 1].graph, &levels[j].graph);
        let map = levels[j].bonding_map().expect("upper levels carry a bonding map");
        let (ku, kl) = (schedule.kappa(j + 1), schedule.kappa(j));
        // Half-edge length below over edge length above.
        let ratio = &kl / (&ku * BigRational::from_integer(BigInt::from(2)));
        let (p, q) = (ratio.numer().clone(), ratio.denom().clone());
        let mut below: HashMap<usize, Vec<u32>> = HashMap::new();
        for u in 0..upper.vertex_count() {
            let a = map.apply(u);
            let above = upper.hop_distances(u);
            let from_a = below.entry(point_node(lower, a)).or_insert_with(|| subdivided_hops(lower, a)).clone();
            for v in u + 1..upper.vertex_count() {
                let Some(h) = above[v] else { continue };
                report.pairs_checked += 1;
                let hb = from_a[point_node(lower, map.apply(v))];
                if hb == u32::MAX || !scaled_le(hb, &p, h, &q) {
                    report.violation_count += 1;
                    if report.violations.len() < RECORDED_VIOLATIONS {
                        let half = &kl / BigRational::from_integer(BigInt::from(2));
                        report.violations.push(LipschitzViolation {
                            upper_level: j + 1,
                            u: upper.vertex(u).id.clone(),
                            v: upper.vertex(v).id.clone(),
                            distance: (&ku * BigRational::from_integer(BigInt::from(h))).to_string(),
                            image_distance: if hb == u32::MAX {
                                "separated".into()
                            } else {
                                (half * BigRational::from_integer(BigInt::from(hb))).to_string()
                            },
                        });
                    }
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::builtins::builtin;
    use crate::expansion::expand;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn one_eight_mesh_halves() {
        let d = builtin("one_eight").unwrap();
        let levels = expand(&d, 5).unwrap();
        let s = MetricSchedule::standard();
        for i in 1..=5 {
            let m = mesh_bound(&d, &levels, &s, i).unwrap();
            assert_eq!(m.diameter, Some(3));
            assert_eq!(m.mesh, Some(q(3, 1 << (i - 1))));
        }
        assert_eq!(diagram_diameter(&d), Some(3));
        assert_eq!(tail(&d, &s, 1), Some(q(3, 1)));
        for i in 1..10 {
            assert_eq!(tail(&d, &s, i + 1).unwrap() * q(2, 1), tail(&d, &s, i).unwrap());
        }
    }

    #[test]
    fn constant_schedule_has_no_tail() {
        let d = builtin("solenoid").unwrap();
        let s = MetricSchedule::constant(q(1, 1)).unwrap();
        assert_eq!(tail(&d, &s, 1), None);
        // Solenoid edge tops are two disjoint edges.
        assert_eq!(diagram_diameter(&d), None);
    }

    #[test]
    fn subdivided_hops_on_a_path() {
        let g = crate::complex::GraphSpec::new()
            .vertex("a", 0)
            .vertex("b", 0)
            .vertex("c", 0)
            .edge("ab", "a", "b", 0)
            .edge("bc", "b", "c", 0)
            .validate()
            .unwrap();
        let h = subdivided_hops(&g, SubdivisionPoint::Vertex(0));
        assert_eq!(h[2], 4);
        assert_eq!(h[point_node(&g, SubdivisionPoint::Barycenter(1))], 3);
    }

    /// All-pairs check written directly against the subdivision.
    fn lipschitz_oracle(levels: &[Level], s: &MetricSchedule) -> u64 {
        let mut bad = 0;
        for j in 1..levels.len() {
            let (lower, upper) = (&levels[j - 1].graph, &levels[j].graph);
            let sub = crate::complex::barycentric_subdivide(lower);
            let map = levels[j].bonding_map().unwrap();
            for u in 0..upper.vertex_count() {
                let du = upper.hop_distances(u);
                let db = sub.graph.hop_distances(sub.vertex_of(map.apply(u)));
                for v in u + 1..upper.vertex_count() {
                    let Some(h) = du[v] else { continue };
                    let hb = db[sub.vertex_of(map.apply(v))].unwrap();
                    let lhs = s.kappa(j) * q(i64::from(hb), 2);
                    let rhs = s.kappa(j + 1) * q(i64::from(h), 1);
                    bad += u64::from(lhs > rhs);
                }
            }
        }
        bad
    }

    #[test]
    fn lipschitz_matches_oracle() {
        let s = MetricSchedule::standard();
        for name in ["one_eight", "diamond", "solenoid", "join"] {
            let levels = expand(&builtin(name).unwrap(), 3).unwrap();
            assert_eq!(check_lipschitz(&levels, &s).violation_count, lipschitz_oracle(&levels, &s), "{name}");
        }
    }

    #[test]
    fn solenoid_halving_violates_constant_passes() {
        let levels = expand(&builtin("solenoid").unwrap(), 4).unwrap();
        let r = check_lipschitz(&levels, &MetricSchedule::standard());
        assert!(!r.passed());
        let v = &r.violations[0];
        assert_eq!(v.upper_level, 2);
        let c = check_lipschitz(&levels, &MetricSchedule::constant(q(1, 1)).unwrap());
        assert!(c.passed());
    }
}

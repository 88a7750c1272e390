use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::mesh::{point_node, subdivided_hops, tail};
use super::schedule::MetricSchedule;
use super::MetricsError;
use crate::complex::{Cell, ColoredGraph, QuasiSimplicialMap, SubdivisionPoint};
use crate::diagram::MarkovDiagram;
use crate::expansion::{push_down, Level, PolyPoint};

/// One cell per level, `cells[k]` at level `k + 1`, each carried into the
/// closure of the previous one by the bonding map.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Thread {
    pub cells: Vec<Cell>,
}

impl Thread {
    pub fn depth(&self) -> usize {
        self.cells.len()
    }

    /// `v:<id>` or `e:<id>` per level.
    pub fn labels(&self, levels: &[Level]) -> Vec<String> {
        self.cells
            .iter()
            .zip(levels)
            .map(|(&c, l)| match c {
                Cell::Vertex(_) => format!("v:{}", l.graph.cell_id(c)),
                Cell::Edge(_) => format!("e:{}", l.graph.cell_id(c)),
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreadEnumeration {
    pub threads: Vec<Thread>,
    /// More threads exist than the limit allowed.
    pub truncated: bool,
}

/// Threads ending at each vertex of level `depth`, in address order.
pub fn enumerate_threads(levels: &[Level], depth: usize, limit: usize) -> Result<ThreadEnumeration, MetricsError> {
    if depth == 0 || depth > levels.len() {
        return Err(MetricsError::LevelOutOfRange { level: depth, len: levels.len() });
    }
    let top = &levels[depth - 1].graph;
    let take = top.vertex_count().min(limit);
    let mut threads = Vec::with_capacity(take);
    for v in 0..take {
        let mut point = PolyPoint::Vertex(v);
        let mut cells = vec![point.carrier()];
        for j in (1..depth).rev() {
            let map = levels[j].bonding_map().expect("upper levels carry a bonding map");
            point = push_down(map, &point);
            cells.push(point.carrier());
        }
        cells.reverse();
        threads.push(Thread { cells });
    }
    Ok(ThreadEnumeration { threads, truncated: top.vertex_count() > limit })
}

fn point_in_closure(g: &ColoredGraph, p: SubdivisionPoint, c: Cell) -> bool {
    match (p, c) {
        (SubdivisionPoint::Vertex(w), Cell::Vertex(v)) => w == v,
        (SubdivisionPoint::Vertex(w), Cell::Edge(e)) => g.edge(e).has_end(w),
        (SubdivisionPoint::Barycenter(f), Cell::Edge(e)) => f == e,
        (SubdivisionPoint::Barycenter(_), Cell::Vertex(_)) => false,
    }
}

fn image_in_closure(map: &QuasiSimplicialMap, cell: Cell, target: Cell) -> bool {
    let lower = map.codomain();
    match cell {
        Cell::Vertex(v) => point_in_closure(lower, map.apply(v), target),
        Cell::Edge(e) => {
            map.edge_image(e).is_ok()
                && map.domain().edge(e).ends.iter().all(|&x| point_in_closure(lower, map.apply(x), target))
        }
    }
}

fn cell_exists(g: &ColoredGraph, c: Cell) -> bool {
    match c {
        Cell::Vertex(v) => v < g.vertex_count(),
        Cell::Edge(e) => e < g.edge_count(),
    }
}

/// Checks compatibility step by step; the error names the first level
/// whose cell does not land in its predecessor.
pub fn verify_thread(levels: &[Level], thread: &Thread) -> Result<(), MetricsError> {
    if thread.cells.is_empty() || thread.cells.len() > levels.len() {
        return Err(MetricsError::LevelOutOfRange { level: thread.cells.len(), len: levels.len() });
    }
    for (k, &c) in thread.cells.iter().enumerate() {
        if !cell_exists(&levels[k].graph, c) {
            return Err(MetricsError::IncompatibleThread { level: k + 1 });
        }
    }
    for k in 1..thread.cells.len() {
        let map = levels[k].bonding_map().expect("upper levels carry a bonding map");
        if !image_in_closure(map, thread.cells[k], thread.cells[k - 1]) {
            return Err(MetricsError::IncompatibleThread { level: k + 1 });
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistanceBoundReport {
    pub level: usize,
    pub lower: String,
    /// Absent for separated threads.
    pub upper: Option<String>,
    pub tail: Option<String>,
    /// The two cells lie in different components at this level.
    pub separated: bool,
}

/// Bounds on the distance between the limit points two threads approach,
/// read off level `i`.
pub fn distance_bounds(
    d: &MarkovDiagram,
    levels: &[Level],
    a: &Thread,
    b: &Thread,
    i: usize,
    schedule: &MetricSchedule,
) -> Result<DistanceBound, MetricsError> {
    if i == 0 || i > a.depth() || i > b.depth() || i > levels.len() {
        return Err(MetricsError::LevelOutOfRange { level: i, len: a.depth().min(b.depth()).min(levels.len()) });
    }
    let g = &levels[i - 1].graph;
    let (ca, cb) = (a.cells[i - 1], b.cells[i - 1]);
    let kappa = schedule.kappa(i);
    let half = &kappa / BigRational::from_integer(BigInt::from(2));
    let labels = g.component_labels();
    let comp = |c: Cell| match c {
        Cell::Vertex(v) => labels[v],
        Cell::Edge(e) => labels[g.edge(e).ends[0]],
    };
    let tail = tail(d, schedule, i);
    if comp(ca) != comp(cb) {
        return Ok(DistanceBound { level: i, lower: kappa, upper: None, tail, separated: true });
    }
    let tail_value = tail.clone().ok_or(MetricsError::DivergentTail { level: i })?;
    let point = |c: Cell| match c {
        Cell::Vertex(v) => SubdivisionPoint::Vertex(v),
        Cell::Edge(e) => SubdivisionPoint::Barycenter(e),
    };
    let hops = subdivided_hops(g, point(ca))[point_node(g, point(cb))];
    let dist = &half * BigRational::from_integer(BigInt::from(hops));
    let edge_cells = [ca, cb].iter().filter(|c| matches!(c, Cell::Edge(_))).count();
    let slack = &tail_value * BigRational::from_integer(BigInt::from(2))
        + &half * BigRational::from_integer(BigInt::from(edge_cells));
    let lower = (&dist - &slack).max(BigRational::zero());
    Ok(DistanceBound { level: i, lower, upper: Some(dist + slack), tail, separated: false })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceBound {
    pub level: usize,
    pub lower: BigRational,
    pub upper: Option<BigRational>,
    pub tail: Option<BigRational>,
    pub separated: bool,
}

impl DistanceBound {
    pub fn to_report(&self) -> DistanceBoundReport {
        DistanceBoundReport {
            level: self.level,
            lower: self.lower.to_string(),
            upper: self.upper.as_ref().map(|q| q.to_string()),
            tail: self.tail.as_ref().map(|q| q.to_string()),
            separated: self.separated,
        }
    }
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
    fn cantor_threads_double() {
        let levels = expand(&builtin("cantor").unwrap(), 6).unwrap();
        for depth in 1..=6 {
            let t = enumerate_threads(&levels, depth, usize::MAX).unwrap();
            assert_eq!(t.threads.len(), 1 << (depth - 1));
            assert!(!t.truncated);
            for th in &t.threads {
                verify_thread(&levels, th).unwrap();
            }
        }
    }

    #[test]
    fn depth_one_has_a_thread_per_start_vertex() {
        let levels = expand(&builtin("solenoid").unwrap(), 2).unwrap();
        let t = enumerate_threads(&levels, 1, 100).unwrap();
        assert_eq!(t.threads.len(), 3);
        assert_eq!(t.threads[0].labels(&levels), vec!["v:A"]);
    }

    #[test]
    fn one_eight_truncates() {
        let levels = expand(&builtin("one_eight").unwrap(), 3).unwrap();
        let t = enumerate_threads(&levels, 3, 10).unwrap();
        assert_eq!(t.threads.len(), 10);
        assert!(t.truncated);
        for th in &t.threads {
            verify_thread(&levels, th).unwrap();
            assert_eq!(th.depth(), 3);
        }
    }

    #[test]
    fn corrupted_thread_is_detected() {
        let levels = expand(&builtin("one_eight").unwrap(), 3).unwrap();
        let t = enumerate_threads(&levels, 3, 30).unwrap();
        let mut bad = t.threads[0].clone();
        // Pick a level-2 cell whose closure misses the level-3 cell's image.
        let g2 = &levels[1].graph;
        let replacement = (0..g2.vertex_count())
            .map(Cell::Vertex)
            .find(|&c| !image_in_closure(levels[2].bonding_map().unwrap(), bad.cells[2], c))
            .unwrap();
        bad.cells[1] = replacement;
        assert!(matches!(verify_thread(&levels, &bad), Err(MetricsError::IncompatibleThread { .. })));
        let mut worse = t.threads[0].clone();
        worse.cells[0] = Cell::Vertex(99);
        assert_eq!(verify_thread(&levels, &worse), Err(MetricsError::IncompatibleThread { level: 1 }));
    }

    #[test]
    fn identical_threads_bound() {
        let d = builtin("one_eight").unwrap();
        let levels = expand(&d, 3).unwrap();
        let s = MetricSchedule::standard();
        let t = enumerate_threads(&levels, 3, 1).unwrap().threads.remove(0);
        for i in 1..=3 {
            let b = distance_bounds(&d, &levels, &t, &t, i, &s).unwrap();
            let expected_upper = tail(&d, &s, i).unwrap() * q(2, 1)
                + if matches!(t.cells[i - 1], Cell::Edge(_)) { s.kappa(i) } else { q(0, 1) };
            assert_eq!(b.lower, q(0, 1));
            assert_eq!(b.upper, Some(expected_upper));
        }
    }

    #[test]
    fn one_eight_threads_over_one_edge() {
        let d = builtin("one_eight").unwrap();
        let levels = expand(&d, 4).unwrap();
        let s = MetricSchedule::standard();
        let threads = enumerate_threads(&levels, 4, usize::MAX).unwrap().threads;
        let limit = s.kappa(1) + tail(&d, &s, 1).unwrap() * q(2, 1);
        for a in threads.iter().step_by(7) {
            for b in threads.iter().step_by(11) {
                let at1 = distance_bounds(&d, &levels, a, b, 1, &s).unwrap();
                assert!(at1.upper.clone().unwrap() <= limit);
                // Bounds read at different levels always overlap.
                for i in 2..=4 {
                    let deeper = distance_bounds(&d, &levels, a, b, i, &s).unwrap();
                    assert!(deeper.lower <= at1.upper.clone().unwrap());
                    assert!(at1.lower <= deeper.upper.clone().unwrap());
                }
            }
        }
    }

    #[test]
    fn cantor_separation() {
        let d = builtin("cantor").unwrap();
        let levels = expand(&d, 5).unwrap();
        let s = MetricSchedule::standard();
        let t = enumerate_threads(&levels, 5, usize::MAX).unwrap().threads;
        let (a, b) = (&t[0], &t[t.len() - 1]);
        assert_eq!(a.cells[0], b.cells[0]);
        assert_ne!(a.cells[1], b.cells[1]);
        for i in 2..=5 {
            let bound = distance_bounds(&d, &levels, a, b, i, &s).unwrap();
            assert!(bound.separated);
            assert!(bound.lower > q(0, 1));
            assert_eq!(bound.upper, None);
        }
        // Same cell at level 1 and no finite tail: nothing can be said.
        assert_eq!(distance_bounds(&d, &levels, a, b, 1, &s), Err(MetricsError::DivergentTail { level: 1 }));
    }
}

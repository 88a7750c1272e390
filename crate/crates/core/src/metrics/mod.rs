//! Finite-level metric analysis: scale schedules, mesh sums, the
//! Lipschitz condition on bonding maps, threads and distance bounds.

mod mesh;
mod schedule;
mod threads;

use serde::Serialize;
use thiserror::Error;

use crate::diagram::MarkovDiagram;
use crate::expansion::Level;

pub use mesh::{check_lipschitz, diagram_diameter, mesh_bound, tail, LipschitzReport, LipschitzViolation, MeshBound};
pub use schedule::{parse_rational, MetricSchedule, ScheduleError};
pub use threads::{
    distance_bounds, enumerate_threads, verify_thread, DistanceBound, DistanceBoundReport, Thread, ThreadEnumeration,
};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("diagram cannot be expanded: {}", .0.join("; "))]
    NotExpandable(Vec<String>),
    #[error("level {level} out of range 1..={len}")]
    LevelOutOfRange { level: usize, len: usize },
    #[error("the mesh tail diverges, so level {level} bounds nothing")]
    DivergentTail { level: usize },
    #[error("thread leaves its predecessor at level {level}")]
    IncompatibleThread { level: usize },
}

/// Metric facts over a finite prefix, in printable form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MetricsSummary {
    pub schedule: String,
    pub levels: usize,
    pub lipschitz: LipschitzReport,
    /// Per level; `None` where a maximal chart member is disconnected.
    pub mesh: Vec<Option<String>>,
    pub tail: Vec<Option<String>>,
    pub tail_divergent: bool,
    /// Components per level, a finite-stage proxy for connectivity.
    pub components: Vec<usize>,
}

pub fn metrics_summary(
    d: &MarkovDiagram,
    levels: &[Level],
    schedule: &MetricSchedule,
) -> Result<MetricsSummary, MetricsError> {
    let mut mesh = Vec::with_capacity(levels.len());
    let mut tails = Vec::with_capacity(levels.len());
    for i in 1..=levels.len() {
        mesh.push(mesh_bound(d, levels, schedule, i)?.mesh.map(|q| q.to_string()));
        tails.push(tail(d, schedule, i).map(|q| q.to_string()));
    }
    Ok(MetricsSummary {
        schedule: schedule.to_string(),
        levels: levels.len(),
        lipschitz: check_lipschitz(levels, schedule),
        mesh,
        tail_divergent: tails.iter().any(|t| t.is_none()),
        tail: tails,
        components: levels.iter().map(|l| l.graph.components().len()).collect(),
    })
}

//! Markov diagram engine.
//!
//! A Markov diagram is a finite set of colored graph productions and gluings.
//! Expanding it yields an inverse sequence of finite graphs `K_1 <- K_2 <- ...`
//! whose bonding maps decompose over the diagram. This crate builds that
//! sequence deterministically, re-verifies each decomposition, and decides the
//! combinatorial hypotheses that certify topological properties of the limit
//! (connectedness, local connectedness, the disjoint arcs property, and the
//! Menger-curve verdict that follows from them).
//!
//! Modules:
//! - [`complex`]: colored graphs, barycentric subdivision, vertex maps, metrics.
//! - [`diagram`]: productions, gluings, diagrams and their validation.
//! - [`expansion`]: level-by-level expansion, charts, assembly graphs.
//! - [`theorems`]: hypothesis checkers, disjoint sections, certificates.
//! - [`metrics`]: scale schedules, mesh and Lipschitz checks, threads.
//! - [`dsl`]: the `.mdgm` text format, exports, and the builtin library.

pub mod complex;
pub mod diagram;
pub mod dsl;
pub mod expansion;
pub mod metrics;
pub mod theorems;

pub use complex::{Color, ColoredGraph, GraphSpec, SubdivisionPoint};
pub use diagram::{Gluing, MarkovDiagram, Production};
pub use expansion::{expand, Expander, Level};

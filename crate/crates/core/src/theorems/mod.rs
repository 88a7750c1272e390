//! Combinatorial sufficient conditions on diagrams and the witnesses that
//! back them.

mod certificate;
mod hypotheses;
mod paths;
mod sections;
mod two_sat;

pub use certificate::{certify, certify_levels, Certificate, FinitenessFacts, Label, Property, SectionSummary, CERTIFICATE_SCHEMA};
pub(crate) use hypotheses::{isolated_colors, top_must_connect};
pub use hypotheses::{
    check_connectedness, check_dap, is_canonical_vertex_production, ConnectivityConclusion, ConnectivityFailure,
    ConnectivityVerdict, DapConclusion, DapFailure, DapVerdict,
};
pub use paths::{connected_components, is_biconnected, max_disjoint_paths, two_disjoint_paths, two_disjoint_paths_with, Biconnectivity};
pub use sections::{
    build_sections, verify_sections, Feasibility, LabelledSection, Pairing, PathPair, Section, SectionError, SectionFailure,
    SectionName, SectionPair, SectionReport,
};
pub use two_sat::{lit, TwoSat};

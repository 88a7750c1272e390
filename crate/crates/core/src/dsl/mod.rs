//! Text format, exports and the builtin library.

pub mod builtins;
mod document;
mod export;
mod levels;

pub use document::{
    content_hash, parse, parse_diagram, parse_document, serialize, serialize_diagram, DiagramDocument, DslError,
    EdgeDoc, GluingDoc, GraphDoc, PaletteDoc, ProductionDoc, UniqueMap, VertexDoc, FORMAT_TAG,
};
pub use export::{export_graph, ExportError, ExportFormat};
pub use levels::{
    levels_document, levels_from_document, parse_levels, serialize_levels, ArcDoc, DecompositionDoc, LevelDoc,
    LevelsDocument, NodeDoc, LEVELS_FORMAT_TAG,
};

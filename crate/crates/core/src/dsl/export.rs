use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::complex::{Color, ColoredGraph};
use crate::diagram::PaletteEntry;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ExportError {
    #[error("unsupported export format `{0}` (expected dot or json)")]
    UnsupportedFormat(String),
}

impl FromStr for ExportFormat {
    type Err = ExportError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dot" => Ok(ExportFormat::Dot),
            "json" => Ok(ExportFormat::Json),
            other => Err(ExportError::UnsupportedFormat(other.to_string())),
        }
    }
}

impl ExportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ExportFormat::Dot => "dot",
            ExportFormat::Json => "json",
        }
    }
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

#[derive(Serialize)]
struct JsonVertex<'a> {
    id: &'a str,
    color: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    style: Option<&'a str>,
}

#[derive(Serialize)]
struct JsonEdge<'a> {
    id: &'a str,
    ends: [&'a str; 2],
    color: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    style: Option<&'a str>,
}

#[derive(Serialize)]
struct JsonGraph<'a> {
    name: &'a str,
    vertices: Vec<JsonVertex<'a>>,
    edges: Vec<JsonEdge<'a>>,
}

/// Node and edge listing in id order, colors carried as styles.
pub fn export_graph(
    g: &ColoredGraph,
    name: &str,
    palette: &BTreeMap<Color, PaletteEntry>,
    format: ExportFormat,
) -> String {
    let style = |c: Color| palette.get(&c).and_then(|p| p.style.as_deref());
    match format {
        ExportFormat::Dot => {
            let mut out = format!("graph {} {{\n", quote(name));
            for v in g.vertices() {
                let _ = write!(out, "  {} [color={}", quote(&v.id), v.color.0);
                if let Some(s) = style(v.color) {
                    let _ = write!(out, ", style={}", quote(s));
                }
                out.push_str("];\n");
            }
            for e in g.edges() {
                let [a, b] = e.ends;
                let _ = write!(
                    out,
                    "  {} -- {} [id={}, color={}",
                    quote(&g.vertex(a).id),
                    quote(&g.vertex(b).id),
                    quote(&e.id),
                    e.color.0
                );
                if let Some(s) = style(e.color) {
                    let _ = write!(out, ", style={}", quote(s));
                }
                out.push_str("];\n");
            }
            out.push_str("}\n");
            out
        }
        ExportFormat::Json => {
            let doc = JsonGraph {
                name,
                vertices: g
                    .vertices()
                    .iter()
                    .map(|v| JsonVertex { id: &v.id, color: v.color.0, style: style(v.color) })
                    .collect(),
                edges: g
                    .edges()
                    .iter()
                    .map(|e| JsonEdge {
                        id: &e.id,
                        ends: [&g.vertex(e.ends[0]).id, &g.vertex(e.ends[1]).id],
                        color: e.color.0,
                        style: style(e.color),
                    })
                    .collect(),
            };
            let mut out = serde_json::to_string_pretty(&doc).expect("graphs serialize");
            out.push('\n');
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::builtins::builtin;
    use crate::expansion::expand;

    fn export(name: &str, level: usize, format: ExportFormat) -> String {
        let d = builtin(name).unwrap();
        let levels = expand(&d, level).unwrap();
        export_graph(&levels[level - 1].graph, name, &d.palette, format)
    }

    #[test]
    fn one_eight_level_two() {
        let dot = export("one_eight", 2, ExportFormat::Dot);
        assert_eq!(dot.lines().filter(|l| l.contains("--")).count(), 7);
        assert_eq!(dot.lines().filter(|l| l.contains("[color=")).count(), 6);
        let json: serde_json::Value = serde_json::from_str(&export("one_eight", 2, ExportFormat::Json)).unwrap();
        assert_eq!(json["vertices"].as_array().unwrap().len(), 6);
        assert_eq!(json["edges"].as_array().unwrap().len(), 7);
    }

    #[test]
    fn cantor_level_three_is_four_points() {
        let dot = export("cantor", 3, ExportFormat::Dot);
        assert_eq!(dot.lines().filter(|l| l.contains("[color=")).count(), 4);
        assert!(!dot.contains("--"));
    }

    #[test]
    fn solenoid_styles() {
        let json: serde_json::Value = serde_json::from_str(&export("solenoid", 1, ExportFormat::Json)).unwrap();
        let edges = json["edges"].as_array().unwrap();
        assert_eq!(json["vertices"].as_array().unwrap().len(), 3);
        assert_eq!(edges.iter().filter(|e| e.get("style").is_none()).count(), 2);
        assert_eq!(edges.iter().filter(|e| e["style"] == "dotted").count(), 1);
        assert!(export("solenoid", 1, ExportFormat::Dot).contains("style=\"dotted\""));
    }

    #[test]
    fn formats_parse() {
        assert_eq!("dot".parse::<ExportFormat>().unwrap(), ExportFormat::Dot);
        assert_eq!("svg".parse::<ExportFormat>(), Err(ExportError::UnsupportedFormat("svg".into())));
        assert_eq!(quote("a\"b"), "\"a\\\"b\"");
    }
}

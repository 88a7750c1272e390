//! The builtin diagram library.

use crate::complex::GraphSpec;
use crate::diagram::{DiagramBuilder, MarkovDiagram};

pub const BUILTIN_NAMES: [&str; 6] = ["cantor", "diamond", "join", "one_eight", "solenoid", "suspension"];

pub fn builtin(name: &str) -> Option<MarkovDiagram> {
    let d = match name {
        "cantor" => cantor(),
        "diamond" => diamond(),
        "join" => join(),
        "one_eight" => one_eight(),
        "solenoid" => solenoid(),
        "suspension" => suspension(),
        _ => return None,
    };
    Some(d)
}

pub fn all() -> Vec<MarkovDiagram> {
    BUILTIN_NAMES.iter().filter_map(|n| builtin(n)).collect()
}

fn edge_bottom(color: u32) -> GraphSpec {
    GraphSpec::new().vertex("L", 0).vertex("R", 0).edge("LR", "L", "R", color)
}

fn point(color: u32) -> GraphSpec {
    GraphSpec::new().vertex("o", color)
}

fn single_edge() -> GraphSpec {
    GraphSpec::new().vertex("a", 0).vertex("b", 0).edge("ab", "a", "b", 0)
}

fn build(b: DiagramBuilder) -> MarkovDiagram {
    b.build().expect("builtin diagrams are well formed")
}

/// Hexagon with a chord over a single edge, one edge over each endpoint.
pub fn one_eight() -> MarkovDiagram {
    let top = GraphSpec::new()
        .vertex("A", 0)
        .vertex("B", 0)
        .vertex("C", 0)
        .vertex("D", 0)
        .vertex("E", 0)
        .vertex("F", 0)
        .edge("AB", "A", "B", 0)
        .edge("BC", "B", "C", 0)
        .edge("CD", "C", "D", 0)
        .edge("DE", "D", "E", 0)
        .edge("EF", "E", "F", 0)
        .edge("FA", "F", "A", 0)
        .edge("FC", "F", "C", 0);
    build(
        DiagramBuilder::new("one_eight")
            .color(0, "plain", None)
            .start(GraphSpec::new().vertex("v1", 0).vertex("v2", 0).edge("e", "v1", "v2", 0))
            .production("P1", single_edge(), point(0), &[("a", "v:o"), ("b", "v:o")])
            .production(
                "P8",
                top,
                edge_bottom(0),
                &[
                    ("A", "v:R"),
                    ("B", "v:R"),
                    ("C", "bary:LR"),
                    ("D", "v:L"),
                    ("E", "v:L"),
                    ("F", "bary:LR"),
                ],
            )
            .gluing("Gl", "P1", "P8", &[("a", "D"), ("b", "E")], &[("o", "L")])
            .gluing("Gr", "P1", "P8", &[("a", "A"), ("b", "B")], &[("o", "R")]),
    )
}

/// Every point splits in two; no edges ever appear.
pub fn cantor() -> MarkovDiagram {
    build(
        DiagramBuilder::new("cantor")
            .color(0, "plain", None)
            .start(GraphSpec::new().vertex("x", 0))
            .production("P", GraphSpec::new().vertex("l", 0).vertex("r", 0), point(0), &[("l", "v:o"), ("r", "v:o")]),
    )
}

/// Two poles joined through a hollow middle vertex that doubles each step.
pub fn suspension() -> MarkovDiagram {
    build(
        DiagramBuilder::new("suspension")
            .color(0, "pole", None)
            .color(1, "hollow", Some("hollow"))
            .start(
                GraphSpec::new()
                    .vertex("n", 0)
                    .vertex("m", 1)
                    .vertex("s", 0)
                    .edge("nm", "n", "m", 0)
                    .edge("sm", "s", "m", 0),
            )
            .production(
                "P",
                GraphSpec::new()
                    .vertex("q", 0)
                    .vertex("h1", 1)
                    .vertex("h2", 1)
                    .edge("qh1", "q", "h1", 0)
                    .edge("qh2", "q", "h2", 0),
                GraphSpec::new().vertex("p", 0).vertex("h", 1).edge("ph", "p", "h", 0),
                &[("q", "v:p"), ("h1", "v:h"), ("h2", "v:h")],
            )
            .production("Pole", GraphSpec::new().vertex("q", 0), point(0), &[("q", "v:o")])
            .production(
                "Hollow",
                GraphSpec::new().vertex("h1", 1).vertex("h2", 1),
                point(1),
                &[("h1", "v:o"), ("h2", "v:o")],
            )
            .gluing("Gpole", "Pole", "P", &[("q", "q")], &[("o", "p")])
            .gluing("Ghollow", "Hollow", "P", &[("h1", "h1"), ("h2", "h2")], &[("o", "h")])
            .note("Each edge runs from a pole to the hollow middle vertex, so the two-edge rule is split into one rule per edge.")
            .note("The Hollow production is added so that every cell has a production; it glues the two hollow vertices shared by both edges."),
    )
}

/// A single edge replaced by a four-cycle over it.
pub fn diamond() -> MarkovDiagram {
    build(
        DiagramBuilder::new("diamond")
            .color(0, "plain", None)
            .start(single_edge())
            .production(
                "P",
                GraphSpec::new()
                    .vertex("t", 0)
                    .vertex("b", 0)
                    .vertex("m1", 0)
                    .vertex("m2", 0)
                    .edge("tm1", "t", "m1", 0)
                    .edge("tm2", "t", "m2", 0)
                    .edge("bm1", "b", "m1", 0)
                    .edge("bm2", "b", "m2", 0),
                edge_bottom(0),
                &[("t", "v:L"), ("b", "v:R"), ("m1", "bary:LR"), ("m2", "bary:LR")],
            )
            .production("V", GraphSpec::new().vertex("x", 0), point(0), &[("x", "v:o")])
            .gluing("Gt", "V", "P", &[("x", "t")], &[("o", "L")])
            .gluing("Gb", "V", "P", &[("x", "b")], &[("o", "R")]),
    )
}

/// Both endpoints double and every new pair is joined.
pub fn join() -> MarkovDiagram {
    build(
        DiagramBuilder::new("join")
            .color(0, "plain", None)
            .start(single_edge())
            .production(
                "P",
                GraphSpec::new()
                    .vertex("l1", 0)
                    .vertex("l2", 0)
                    .vertex("r1", 0)
                    .vertex("r2", 0)
                    .edge("l1r1", "l1", "r1", 0)
                    .edge("l1r2", "l1", "r2", 0)
                    .edge("l2r1", "l2", "r1", 0)
                    .edge("l2r2", "l2", "r2", 0),
                edge_bottom(0),
                &[("l1", "v:L"), ("l2", "v:L"), ("r1", "v:R"), ("r2", "v:R")],
            )
            .production("D", GraphSpec::new().vertex("x1", 0).vertex("x2", 0), point(0), &[("x1", "v:o"), ("x2", "v:o")])
            .gluing("Gt", "D", "P", &[("x1", "l1"), ("x2", "l2")], &[("o", "L")])
            .gluing("Gh", "D", "P", &[("x1", "r1"), ("x2", "r2")], &[("o", "R")]),
    )
}

/// A triangle with one dotted edge; each step doubles the cycle, and the
/// dotted edge carries the twist.
pub fn solenoid() -> MarkovDiagram {
    build(
        DiagramBuilder::new("solenoid")
            .color(0, "solid", None)
            .color(1, "dotted", Some("dotted"))
            .start(
                GraphSpec::new()
                    .vertex("A", 0)
                    .vertex("B", 0)
                    .vertex("C", 0)
                    .edge("AB", "A", "B", 0)
                    .edge("AC", "A", "C", 0)
                    .edge("BC", "B", "C", 1),
            )
            .production(
                "S",
                GraphSpec::new()
                    .vertex("l1", 0)
                    .vertex("l2", 0)
                    .vertex("r1", 0)
                    .vertex("r2", 0)
                    .edge("l1r1", "l1", "r1", 0)
                    .edge("l2r2", "l2", "r2", 0),
                edge_bottom(0),
                &[("l1", "v:L"), ("l2", "v:L"), ("r1", "v:R"), ("r2", "v:R")],
            )
            .production(
                "T",
                GraphSpec::new()
                    .vertex("l1", 0)
                    .vertex("l2", 0)
                    .vertex("r1", 0)
                    .vertex("r2", 0)
                    .edge("l1r2", "l1", "r2", 1)
                    .edge("l2r1", "l2", "r1", 0),
                edge_bottom(1),
                &[("l1", "v:L"), ("l2", "v:L"), ("r1", "v:R"), ("r2", "v:R")],
            )
            .production("Two", GraphSpec::new().vertex("x1", 0).vertex("x2", 0), point(0), &[("x1", "v:o"), ("x2", "v:o")])
            .gluing("St", "Two", "S", &[("x1", "l1"), ("x2", "l2")], &[("o", "L")])
            .gluing("Sh", "Two", "S", &[("x1", "r1"), ("x2", "r2")], &[("o", "R")])
            .gluing("Tt", "Two", "T", &[("x1", "l1"), ("x2", "l2")], &[("o", "L")])
            .gluing("Th", "Two", "T", &[("x1", "r1"), ("x2", "r2")], &[("o", "R")])
            .note("The two-point vertex production and the four endpoint gluings are spelled out explicitly."),
    )
}

//! Acceptance suite: one PASS/FAIL line per criterion.

use std::time::{Duration, Instant};

use markov_core::diagram::MarkovDiagram;
use markov_core::dsl::builtins::{all, builtin};
use markov_core::dsl::{content_hash, parse, serialize, serialize_levels, DiagramDocument, EdgeDoc, GraphDoc, VertexDoc};
use markov_core::expansion::{expand, verify_decomposition, verify_levels, DecompositionFailure, Level};
use markov_core::metrics::{check_lipschitz, tail, MetricSchedule};
use markov_core::theorems::{
    build_sections, certify, check_connectedness, check_dap, verify_sections, ConnectivityFailure as CF,
    DapFailure as DF, Label, Pairing,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Check) -> (Check, Duration) {
    let start = Instant::now();
    let r = f();
    let took = start.elapsed();
    let r = match (r, limit) {
        (Ok(_), Some(l)) if took > l => Err(format!("took {took:.2?}, limit {l:.0?}")),
        (r, _) => r,
    };
    (r, took)
}

fn d(name: &str) -> MarkovDiagram {
    builtin(name).expect("builtin exists")
}

fn ac1() -> Check {
    let levels = expand(&d("cantor"), 12).map_err(|e| e.to_string())?;
    for l in &levels {
        let want = 1usize << (l.index - 1);
        let g = &l.graph;
        ensure(g.vertex_count() == want && g.edge_count() == 0 && g.components().len() == want, || {
            format!("level {}: {} vertices, {} edges", l.index, g.vertex_count(), g.edge_count())
        })?;
    }
    Ok(format!("levels 1..=12 have 2^(n-1) isolated points, {} at level 12", levels[11].graph.vertex_count()))
}

fn ac2() -> Check {
    let levels = expand(&d("one_eight"), 8).map_err(|e| e.to_string())?;
    let (mut v, mut e) = (2usize, 1usize);
    for l in &levels {
        let got = (l.graph.vertex_count(), l.graph.edge_count());
        ensure(got == (v, e), || format!("level {}: {got:?}, recurrence {:?}", l.index, (v, e)))?;
        (v, e) = (2 * v + 2 * e, 5 * e + v);
    }
    let last = &levels[7].graph;
    Ok(format!("n<=8 matches V'=2V+2E, E'=5E+V; K_8 = ({}, {})", last.vertex_count(), last.edge_count()))
}

fn ac3() -> Check {
    let one_eight = d("one_eight");
    let c = certify(&one_eight, 4);
    let h = &c.dap;
    ensure(c.connectivity.hypotheses_hold && c.connectivity.failures.is_empty(), || {
        format!("connectivity {:?}", c.connectivity.failures)
    })?;
    ensure(
        h.elementary && h.vertex_productions_canonical && h.edge_tops_connected && h.edge_tops_biconnected,
        || format!("dap {h:?}"),
    )?;
    ensure(c.label == Label::MengerCurve, || format!("label {:?}", c.label))?;
    ensure(c.to_json() == certify(&one_eight, 4).to_json(), || "certificate differs between runs".into())?;
    Ok("all hypotheses hold, label MengerCurve, identical on rerun".into())
}

fn ac4() -> Check {
    let nq = |p: &str| CF::NotQuasiSimplicial { production: p.into(), class: "simplicial".into() };
    let top = |p: &str| CF::TopDisconnected { production: p.into(), components: 2 };
    let nc = |p: &str| DF::NonCanonicalVertexProduction { production: p.into() };
    let cases: Vec<(&str, Vec<CF>, Vec<DF>)> = vec![
        ("one_eight", vec![], vec![]),
        ("suspension", vec![nq("P")], vec![
            nc("Hollow"),
            nc("Pole"),
            DF::EdgeTopNotBiconnected { production: "P".into(), articulation: vec!["q".into()] },
        ]),
        ("join", vec![nq("P")], vec![nc("D")]),
        ("diamond", vec![], vec![nc("V")]),
        ("cantor", vec![top("P")], vec![nc("P")]),
        ("solenoid", vec![nq("S"), nq("T"), top("S"), top("T")], vec![
            nc("Two"),
            DF::EdgeTopDisconnected { production: "S".into() },
            DF::EdgeTopDisconnected { production: "T".into() },
        ]),
    ];
    for (name, conn, dap) in cases {
        let diagram = d(name);
        let c = certify(&diagram, 3);
        ensure(c.connectivity == check_connectedness(&diagram) && c.dap == check_dap(&diagram), || {
            format!("{name}: certificate disagrees with the checkers")
        })?;
        ensure(c.connectivity.failures == conn, || format!("{name}: connectivity {:?}", c.connectivity.failures))?;
        ensure(c.dap.failures == dap, || format!("{name}: dap {:?}", c.dap.failures))?;
        let quasi_only = c.connectivity.failures.iter().all(|f| matches!(f, CF::NotQuasiSimplicial { .. }));
        if name == "suspension" || name == "join" {
            ensure(quasi_only && !c.connectivity.failures.is_empty(), || format!("{name}: not only quasi-simpliciality"))?;
        }
        if name == "diamond" {
            ensure(c.label.has(markov_core::theorems::Property::Connected) && !c.label.has(markov_core::theorems::Property::DisjointArcs), || {
                format!("diamond label {:?}", c.label)
            })?;
        }
    }
    Ok("six certificates list exactly the expected failures".into())
}

fn ac5() -> Check {
    let levels = expand(&d("solenoid"), 10).map_err(|e| e.to_string())?;
    for l in &levels {
        let g = &l.graph;
        let n = 3usize << (l.index - 1);
        let cycle = g.vertex_count() == n
            && g.edge_count() == n
            && g.is_connected()
            && (0..g.vertex_count()).all(|v| g.degree(v) == 2);
        ensure(cycle, || format!("level {} is not a {n}-cycle", l.index))?;
    }
    Ok("levels 1..=10 are single cycles of length 3*2^(n-1)".into())
}

fn ac6() -> Check {
    let one_eight = d("one_eight");
    let levels = expand(&one_eight, 7).map_err(|e| e.to_string())?;
    for i in 1..=6 {
        let pair = build_sections(&one_eight, &levels, i).map_err(|e| format!("level {i}: {e}"))?;
        let r = verify_sections(&levels, &pair);
        ensure(r.passed() && r.disjoint && r.injective && r.section_property && r.monotone, || {
            format!("level {i}: {:?}", r.failures)
        })?;
        for f in &pair.feasibility {
            ensure(f.edge_production == "P8" && f.feasible() == vec![Pairing::Crossed], || {
                format!("level {i}: feasibility {f:?}")
            })?;
        }
    }
    Ok("sections at i=1..=6 verified; P8 admits only the crossed pairing".into())
}

fn ac7() -> Check {
    let halving = MetricSchedule::standard();
    let mut checked = 0;
    for name in ["one_eight", "diamond"] {
        let diagram = d(name);
        let levels = expand(&diagram, 5).map_err(|e| e.to_string())?;
        let r = check_lipschitz(&levels, &halving);
        ensure(r.passed(), || format!("{name}: {:?}", r.violations.first()))?;
        checked += r.pairs_checked;
        let two = BigRational::from_integer(BigInt::from(2));
        for i in 1..5 {
            let (a, b) = (tail(&diagram, &halving, i), tail(&diagram, &halving, i + 1));
            ensure(matches!((&a, &b), (Some(a), Some(b)) if *b == a / &two), || {
                format!("{name}: tail({i}) = {a:?}, tail({}) = {b:?}", i + 1)
            })?;
        }
    }
    let levels = expand(&d("solenoid"), 5).map_err(|e| e.to_string())?;
    let r = check_lipschitz(&levels, &halving);
    ensure(r.violation_count > 0, || "solenoid reports no violation".into())?;
    Ok(format!(
        "{checked} pairs pass for one_eight and diamond; tails halve; solenoid has {} violations",
        r.violation_count
    ))
}

fn failures_of(d: &MarkovDiagram, levels: &[Level], k: usize) -> Vec<DecompositionFailure> {
    verify_decomposition(d, &levels[k - 1].graph, &levels[k].graph, levels[k].decomposition.as_ref().unwrap()).failures
}

fn ac8() -> Check {
    let mut count = 0;
    for diagram in all() {
        let levels = expand(&diagram, 6).map_err(|e| e.to_string())?;
        for (i, r) in verify_levels(&diagram, &levels) {
            ensure(r.passed(), || format!("{} level {i}: {:?}", diagram.name, r.failures))?;
            count += 1;
        }
    }

    // A gluing that sends a pole onto a hollow vertex.
    let suspension = d("suspension");
    let levels = expand(&suspension, 3).map_err(|e| e.to_string())?;
    let mut bad = suspension.clone();
    let p = bad.production_index("P").unwrap();
    let h1 = bad.productions[p].top().vertex_index("h1").unwrap();
    let g = bad.gluings.iter_mut().find(|g| g.name == "Gpole").unwrap();
    g.top_map[0] = h1;
    let f = failures_of(&bad, &levels, 2);
    let color = f.iter().find(|x| {
        matches!(x, DecompositionFailure::GluingInvalid { gluing, error: markov_core::diagram::GluingError::ColorMismatch { .. }, .. } if gluing == "Gpole")
    });
    let color = color.ok_or_else(|| format!("gluing color mismatch not located: {f:?}"))?.to_string();

    // Tail and head gluings swapped on the arcs of one edge.
    let one_eight = d("one_eight");
    let mut levels = expand(&one_eight, 2).map_err(|e| e.to_string())?;
    let dec = levels[1].decomposition.as_mut().unwrap();
    let (a, b) = (dec.assembly.arcs[0].gluing, dec.assembly.arcs[1].gluing);
    dec.assembly.arcs[0].gluing = b;
    dec.assembly.arcs[1].gluing = a;
    let f = failures_of(&one_eight, &levels, 1);
    let square = f
        .iter()
        .find(|x| matches!(x, DecompositionFailure::CommutativityFailure { .. }))
        .ok_or_else(|| format!("non-commuting square not located: {f:?}"))?
        .to_string();

    // One top vertex of an edge chart moved onto another vertex.
    let mut levels = expand(&one_eight, 3).map_err(|e| e.to_string())?;
    let dec = levels[2].decomposition.as_mut().unwrap();
    let node = dec.assembly.nodes.len() - 1;
    let n = dec.map.domain().vertex_count();
    dec.chart.top[node][0] = (dec.chart.top[node][0] + 1) % n;
    let f = failures_of(&one_eight, &levels, 2);
    let chart = f
        .iter()
        .find(|x| {
            matches!(
                x,
                DecompositionFailure::NotEmbedding { .. }
                    | DecompositionFailure::NotCovered { .. }
                    | DecompositionFailure::NotClosed { .. }
                    | DecompositionFailure::LocalForm { .. }
                    | DecompositionFailure::CommutativityFailure { .. }
            )
        })
        .ok_or_else(|| format!("relabelled chart not located: {f:?}"))?
        .to_string();
    Ok(format!("{count} engine levels pass; witnesses: [{color}] [{square}] [{chart}]"))
}

/// Shuffled, renamed and re-started variants of the builtin documents.
fn fuzzed_documents(n: usize) -> Vec<DiagramDocument> {
    let bases: Vec<DiagramDocument> = all().iter().map(DiagramDocument::from_diagram).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    (0..n)
        .map(|k| {
            let mut doc = bases[k % bases.len()].clone();
            if rng.gen_bool(0.5) {
                let vc: Vec<u32> = doc.start.vertices.iter().map(|v| v.color).collect();
                let ec: Vec<u32> = doc.start.edges.iter().map(|e| e.color).collect();
                let m = rng.gen_range(1..7);
                let ids: Vec<String> = (0..m).map(|i| format!("w{i}")).collect();
                let mut g = GraphDoc {
                    vertices: ids.iter().map(|id| VertexDoc { id: id.clone(), color: *vc.choose(&mut rng).unwrap() }).collect(),
                    edges: Vec::new(),
                };
                for a in 0..m {
                    for b in a + 1..m {
                        if !ec.is_empty() && rng.gen_bool(0.4) {
                            g.edges.push(EdgeDoc {
                                id: format!("w{a}w{b}"),
                                ends: [ids[a].clone(), ids[b].clone()],
                                color: *ec.choose(&mut rng).unwrap(),
                            });
                        }
                    }
                }
                doc.start = g;
            }
            doc.name = format!("{}_{k}", doc.name);
            doc.notes.push(format!("variant {k} \"{}\"", rng.gen::<u32>()));
            doc.productions.shuffle(&mut rng);
            doc.gluings.shuffle(&mut rng);
            doc.palette.shuffle(&mut rng);
            doc.start.vertices.shuffle(&mut rng);
            for p in &mut doc.productions {
                p.top.vertices.shuffle(&mut rng);
                p.top.edges.shuffle(&mut rng);
            }
            doc
        })
        .collect()
}

fn ac9() -> Check {
    for diagram in all() {
        let run = || {
            let levels = expand(&diagram, 4).unwrap();
            (serialize_levels(&diagram, &levels), certify(&diagram, 4).to_json(), content_hash(&diagram))
        };
        ensure(run() == run(), || format!("{}: artifacts differ between runs", diagram.name))?;
        let text = serialize(&DiagramDocument::from_diagram(&diagram));
        let back = parse(&text).map_err(|e| format!("{}: {e}", diagram.name))?;
        ensure(serialize(&back) == text, || format!("{}: not a fixpoint", diagram.name))?;
    }
    let docs = fuzzed_documents(100);
    for (k, doc) in docs.iter().enumerate() {
        let raw = serde_json::to_string(doc).unwrap();
        let first = parse(&raw).map_err(|e| format!("fuzz {k}: {e}"))?;
        ensure(first.to_diagram().unwrap().validate().is_valid(), || format!("fuzz {k}: invalid"))?;
        let text = serialize(&first);
        let second = parse(&text).map_err(|e| format!("fuzz {k}: {e}"))?;
        ensure(serialize(&second) == text && second == first_canonical(doc), || format!("fuzz {k}: not a fixpoint"))?;
    }
    Ok(format!("six builtins byte-identical across runs; builtins and {} fuzzed documents are fixpoints", docs.len()))
}

fn first_canonical(doc: &DiagramDocument) -> DiagramDocument {
    let mut c = doc.clone();
    c.canonicalize();
    c
}

fn main() {
    let criteria: Vec<(&str, &str, Option<Duration>, fn() -> Check)> = vec![
        ("AC1", "cantor counts", Some(Duration::from_secs(1)), ac1),
        ("AC2", "1-8 growth oracle", Some(Duration::from_secs(5)), ac2),
        ("AC3", "1-8 certificate", None, ac3),
        ("AC4", "negative controls", None, ac4),
        ("AC5", "solenoid cycles", Some(Duration::from_secs(1)), ac5),
        ("AC6", "sections witness", None, ac6),
        ("AC7", "metric conditions", None, ac7),
        ("AC8", "decomposition re-verification", None, ac8),
        ("AC9", "determinism and round-trip", None, ac9),
    ];
    let mut failed = 0;
    for (id, title, limit, f) in criteria {
        let (r, took) = timed(limit, f);
        let limit = limit.map(|l| format!(", limit {l:.0?}")).unwrap_or_default();
        match r {
            Ok(msg) => println!("{id} PASS {title}: {msg} ({took:.2?}{limit})"),
            Err(msg) => {
                failed += 1;
                println!("{id} FAIL {title}: {msg} ({took:.2?}{limit})");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

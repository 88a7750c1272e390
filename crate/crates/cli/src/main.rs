//! `markov`: validate, expand and certify Markov diagrams.
//!
//! Exit codes: 0 ok, 1 validation or usage failure, 2 unmet requirement or
//! failed section construction, 3 internal error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use markov_core::diagram::MarkovDiagram;
use markov_core::dsl::{self, builtins, ExportFormat};
use markov_core::expansion::{expand, verify_levels, ExpansionError, Level};
use markov_core::metrics::{self, enumerate_threads, parse_rational, MetricSchedule};
use markov_core::theorems::{build_sections, certify_levels, verify_sections, LabelledSection, Property, SectionError};

#[derive(Parser)]
#[command(name = "markov", version, about = "Markov diagram engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Source {
    /// Diagram file (.mdgm).
    path: Option<PathBuf>,
    /// One of the builtin diagrams instead of a file.
    #[arg(long, conflicts_with = "path")]
    builtin: Option<String>,
}

#[derive(Args)]
struct MetricArgs {
    /// halving, constant, or list:q1,q2,...
    #[arg(long, default_value = "halving")]
    schedule: String,
    /// First scale for halving, the scale for constant.
    #[arg(long, default_value = "1")]
    kappa: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Requirement {
    Connected,
    LocallyConnected,
    DisjointArcs,
    MengerCurve,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a diagram, with its coverage report.
    Validate {
        #[command(flatten)]
        source: Source,
    },
    /// Expand to a depth and write per-level exports and bonding maps.
    Expand {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
        depth: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
    },
    /// Run the hypothesis checks and write a certificate.
    Check {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
        depth: u64,
        #[command(flatten)]
        metric: MetricArgs,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Exit 2 unless the certificate concludes this property.
        #[arg(long, value_enum)]
        require: Vec<Requirement>,
        /// Add a timestamp field to the certificate.
        #[arg(long)]
        timestamp: bool,
    },
    /// Build and verify disjoint sections from level `level + 1` onto `level`.
    Sections {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        level: u64,
        /// Levels to expand; defaults to `level + 1`.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        depth: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List threads of cells ending at the vertices of the last level.
    Threads {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
        depth: u64,
        #[arg(long, default_value_t = 20)]
        limit: usize,
    },
    /// Print the canonical form of a diagram.
    Print {
        #[command(flatten)]
        source: Source,
    },
    /// Re-verify every decomposition in a levels file.
    Verify {
        #[command(flatten)]
        source: Source,
        /// Levels file written by `expand`.
        #[arg(long)]
        levels: PathBuf,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

type Outcome = Result<String, Failure>;

fn load(source: &Source) -> Result<MarkovDiagram, Failure> {
    match (&source.builtin, &source.path) {
        (Some(name), _) => builtins::builtin(name).ok_or_else(|| {
            fail(1, format!("unknown builtin `{name}` (available: {})", builtins::BUILTIN_NAMES.join(", ")))
        }),
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| fail(1, format!("cannot read {}: {e}", path.display())))?;
            dsl::parse_diagram(&text).map_err(|e| fail(1, format!("{}: {e}", e.kind())))
        }
        (None, None) => Err(fail(1, "give a diagram file or --builtin NAME")),
    }
}

fn expand_levels(d: &MarkovDiagram, depth: usize) -> Result<Vec<Level>, Failure> {
    expand(d, depth).map_err(|e| match e {
        ExpansionError::UnintendedCollision { .. } => fail(3, e.to_string()),
        _ => fail(1, e.to_string()),
    })
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| fail(3, format!("cannot write {}: {e}", path.display())))
}

fn create_dir(dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| fail(3, format!("cannot create {}: {e}", dir.display())))
}

fn pretty(value: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("outputs serialize");
    s.push('\n');
    s
}

fn validate(source: &Source) -> Outcome {
    let d = load(source)?;
    let report = d.validate();
    let mut out = format!("diagram {}\n", d.name);
    for p in &report.productions {
        let class = p.class.map(|c| c.name()).unwrap_or("invalid");
        let _ = writeln!(out, "  production {} ({}, {class})", p.name, p.kind);
    }
    for g in &report.gluings {
        let _ = writeln!(out, "  gluing {} {}", g.name, if g.is_ok() { "ok" } else { "invalid" });
    }
    let _ = writeln!(out, "elementary: {}", report.elementary);
    if let Some(c) = &report.coverage {
        for s in &c.slots {
            let _ = writeln!(
                out,
                "  {} -> {} of {}: {}",
                s.vertex_production,
                s.role,
                s.edge_production,
                s.gluing.as_deref().unwrap_or("none")
            );
        }
        let _ = writeln!(out, "coverage: {}", if c.is_complete() { "complete" } else { "incomplete" });
    }
    let failures = report.failures();
    if failures.is_empty() {
        Ok(out)
    } else {
        Err(fail(1, format!("{out}{}", failures.join("\n"))))
    }
}

fn cmd_expand(source: &Source, depth: usize, out: Option<&Path>, format: Format) -> Outcome {
    let d = load(source)?;
    let levels = expand_levels(&d, depth)?;
    let verdicts = verify_levels(&d, &levels);
    let mut summary = String::new();
    for l in &levels {
        let _ = writeln!(summary, "level {}: {} vertices, {} edges", l.index, l.graph.vertex_count(), l.graph.edge_count());
    }
    let failed: Vec<String> = verdicts
        .iter()
        .flat_map(|(i, r)| r.failures.iter().map(move |f| format!("level {i}: {f}")))
        .collect();
    let _ = writeln!(summary, "decompositions verified: {}", if failed.is_empty() { "yes" } else { "no" });
    if let Some(dir) = out {
        create_dir(dir)?;
        let format = match format {
            Format::Dot => ExportFormat::Dot,
            Format::Json => ExportFormat::Json,
        };
        for l in &levels {
            let name = format!("{}-level-{}", d.name, l.index);
            let text = dsl::export_graph(&l.graph, &name, &d.palette, format);
            write(&dir.join(format!("{name}.{}", format.extension())), &text)?;
        }
        write(&dir.join(format!("{}.levels.json", d.name)), &dsl::serialize_levels(&d, &levels))?;
        let verification = json!({
            "diagram": d.name,
            "content_hash": dsl::content_hash(&d),
            "levels": verdicts.iter().map(|(i, r)| json!({
                "level": i,
                "passed": r.passed(),
                "failures": r.failures.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        });
        write(&dir.join(format!("{}.verification.json", d.name)), &pretty(&verification))?;
    }
    if failed.is_empty() {
        Ok(summary)
    } else {
        Err(fail(3, format!("{summary}{}", failed.join("\n"))))
    }
}

fn schedule(args: &MetricArgs) -> Result<MetricSchedule, Failure> {
    let kappa = parse_rational(&args.kappa).map_err(|e| fail(1, e.to_string()))?;
    MetricSchedule::parse(&args.schedule, kappa).map_err(|e| fail(1, e.to_string()))
}

fn required(r: Requirement) -> &'static [Property] {
    match r {
        Requirement::Connected => &[Property::Connected],
        Requirement::LocallyConnected => &[Property::LocallyConnected],
        Requirement::DisjointArcs => &[Property::DisjointArcs],
        Requirement::MengerCurve => &[Property::Connected, Property::LocallyConnected, Property::DisjointArcs],
    }
}

fn check(
    source: &Source,
    depth: usize,
    metric: &MetricArgs,
    out: &Path,
    require: &[Requirement],
    timestamp: bool,
) -> Outcome {
    let d = load(source)?;
    let report = d.validate();
    if !report.is_valid() {
        return Err(fail(1, report.failures().join("\n")));
    }
    let schedule = schedule(metric)?;
    let (levels, error) = match expand(&d, depth) {
        Ok(levels) => (levels, None),
        Err(e @ ExpansionError::UnintendedCollision { .. }) => return Err(fail(3, e.to_string())),
        Err(e) => (Vec::new(), Some(e.to_string())),
    };
    let mut cert = certify_levels(&d, &levels, depth, error);
    if !levels.is_empty() {
        cert.metrics = metrics::metrics_summary(&d, &levels, &schedule).ok();
    }
    if timestamp {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|t| t.as_secs())
            .unwrap_or(0);
        cert.timestamp = Some(secs.to_string());
    }
    create_dir(out)?;
    let path = out.join(format!("{}.mcert", d.name));
    write(&path, &cert.to_json())?;
    let label = match &cert.label {
        markov_core::theorems::Label::MengerCurve => "MengerCurve".to_string(),
        markov_core::theorems::Label::Properties(p) => format!("{p:?}"),
        markov_core::theorems::Label::Inconclusive => "Inconclusive".to_string(),
    };
    let mut summary = format!("{}: {label}\n", d.name);
    for f in &cert.connectivity.failures {
        let _ = writeln!(summary, "  connectivity: {f:?}");
    }
    for f in &cert.dap.failures {
        let _ = writeln!(summary, "  disjoint arcs: {f:?}");
    }
    let _ = writeln!(summary, "certificate written to {}", path.display());
    let unmet: Vec<Property> =
        require.iter().flat_map(|&r| required(r).iter().copied()).filter(|&p| !cert.label.has(p)).collect();
    if unmet.is_empty() {
        Ok(summary)
    } else {
        Err(fail(2, format!("{summary}required properties not concluded: {unmet:?}")))
    }
}

fn sections(source: &Source, level: usize, depth: Option<usize>, out: Option<&Path>) -> Outcome {
    let d = load(source)?;
    let depth = depth.unwrap_or(level + 1);
    let levels = expand_levels(&d, depth)?;
    let pair = build_sections(&d, &levels, level).map_err(|e| match e {
        SectionError::LevelOutOfRange { .. } => fail(1, e.to_string()),
        SectionError::PreconditionFailed(ref f) => fail(2, format!("{e}: {f:?}")),
        SectionError::ConstructionFailed { .. } => fail(2, e.to_string()),
    })?;
    let report = verify_sections(&levels, &pair);
    let (lower, upper) = (&levels[level - 1].graph, &levels[level].graph);
    let witness = json!({
        "diagram": d.name,
        "level": level,
        "fiber_choice": lower.vertices().iter().zip(&pair.fiber_choice)
            .map(|(v, &c)| (v.id.clone(), if c { "second" } else { "first" }))
            .collect::<std::collections::BTreeMap<_, _>>(),
        "edge_pairing": lower.edges().iter().zip(&pair.edge_pairing)
            .map(|(e, p)| (e.id.clone(), format!("{p:?}")))
            .collect::<std::collections::BTreeMap<_, _>>(),
        "f": LabelledSection::new(lower, upper, &pair.f),
        "g": LabelledSection::new(lower, upper, &pair.g),
        "feasibility": pair.feasibility,
        "verification": report,
    });
    let text = pretty(&witness);
    let mut summary = if let Some(dir) = out {
        create_dir(dir)?;
        let path = dir.join(format!("{}.sections-{level}.json", d.name));
        write(&path, &text)?;
        format!("witness written to {}\n", path.display())
    } else {
        text
    };
    let _ = writeln!(
        summary,
        "disjoint: {}, injective: {}, section property: {}, monotone: {}",
        report.disjoint, report.injective, report.section_property, report.monotone
    );
    if report.passed() {
        Ok(summary)
    } else {
        Err(fail(3, format!("{summary}{:?}", report.failures)))
    }
}

fn threads(source: &Source, depth: usize, limit: usize) -> Outcome {
    let d = load(source)?;
    let levels = expand_levels(&d, depth)?;
    let t = enumerate_threads(&levels, depth, limit).map_err(|e| fail(1, e.to_string()))?;
    let doc = json!({
        "diagram": d.name,
        "depth": depth,
        "truncated": t.truncated,
        "threads": t.threads.iter().map(|x| x.labels(&levels)).collect::<Vec<_>>(),
    });
    Ok(pretty(&doc))
}

fn verify(source: &Source, levels: &Path) -> Outcome {
    let d = load(source)?;
    let text = fs::read_to_string(levels).map_err(|e| fail(1, format!("cannot read {}: {e}", levels.display())))?;
    let levels = dsl::parse_levels(&d, &text).map_err(|e| fail(1, format!("{}: {e}", e.kind())))?;
    let mut out = String::new();
    let mut ok = true;
    for (i, r) in verify_levels(&d, &levels) {
        let _ = writeln!(out, "level {i}: {}", if r.passed() { "ok" } else { "FAILED" });
        for f in &r.failures {
            ok = false;
            let _ = writeln!(out, "  {f}");
        }
    }
    if ok {
        Ok(out)
    } else {
        Err(fail(1, out))
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Validate { source } => validate(&source),
        Command::Expand { source, depth, out, format } => cmd_expand(&source, depth as usize, out.as_deref(), format),
        Command::Check { source, depth, metric, out, require, timestamp } => {
            check(&source, depth as usize, &metric, &out, &require, timestamp)
        }
        Command::Sections { source, level, depth, out } => {
            sections(&source, level as usize, depth.map(|x| x as usize), out.as_deref())
        }
        Command::Threads { source, depth, limit } => threads(&source, depth as usize, limit),
        Command::Print { source } => load(&source).map(|d| dsl::serialize_diagram(&d)),
        Command::Verify { source, levels } => verify(&source, &levels),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("{}", f.message);
            ExitCode::from(f.code)
        }
    }
}

//! Command-line front end: `analyze`, `generate`, `stage`, `compare`.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::catalog::{generate, BridgeKind, BridgeSpec, PresetId, Wheels};
use crate::erection::{run_plan, Verdict};
use crate::format::{format_number, parse_document, serialize_model, ParseError};
use crate::model::{validate, StructureModel};
use crate::report::{compare, Report, Summary};
use crate::solver::{analyze, AnalysisResult, SolveError};
use crate::svg::{build_diagram, render_svg};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_UNSOLVABLE: i32 = 2;
pub const EXIT_PLAN_FAILS: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "bridgeframe", version, about = "Planar frame analysis of timber bridge models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Analyse a model file.
    Analyze {
        model: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
        /// Deflection display factor for the diagram (default: automatic).
        #[arg(long)]
        scale: Option<f64>,
    },
    /// Write the model for a preset or bridge kind.
    Generate {
        /// Preset name (e.g. GRANDE) or bridge kind (e.g. truss).
        target: String,
        #[arg(long)]
        pillars: Option<usize>,
        #[arg(long)]
        wheels: Option<String>,
        #[arg(long)]
        mid_support: bool,
        #[arg(long)]
        crosswise: bool,
        #[arg(long)]
        span: Option<f64>,
        /// Uniform deck load in N/m on top of self-weight.
        #[arg(long)]
        deck_load: Option<f64>,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Check every stage of an erection plan.
    Stage {
        plan: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Compare two models side by side.
    Compare {
        model_a: PathBuf,
        model_b: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

/// A failure with its exit code and message.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

type Outcome = Result<(), Failure>;

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure::new(EXIT_IO, format!("{}: {e}", path.display()))
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn write_file(path: &Path, contents: &str) -> Outcome {
    write_atomic(path, contents).map_err(|e| io_failure(path, e))
}

fn parse_failure(path: &Path, e: ParseError) -> Failure {
    let code = match e {
        ParseError::Model { .. } => EXIT_INVALID,
        _ => EXIT_IO,
    };
    Failure::new(code, format!("{}: {e}", path.display()))
}

fn load_document(path: &Path) -> Result<crate::format::ModelDocument, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    parse_document(&text).map_err(|e| parse_failure(path, e))
}

fn check_model(path: &Path, model: &StructureModel) -> Outcome {
    let report = validate(model);
    if report.is_analyzable() {
        return Ok(());
    }
    let lines: Vec<String> = report
        .errors()
        .map(|i| format!("{}: {}: {}", path.display(), i.location, i.message))
        .collect();
    Err(Failure::new(EXIT_INVALID, lines.join("\n")))
}

fn solve_failure(path: &Path, e: SolveError) -> Failure {
    let code = match e {
        SolveError::SingularSystem { .. } | SolveError::NoConvergence { .. } => EXIT_UNSOLVABLE,
        _ => EXIT_INVALID,
    };
    Failure::new(code, format!("{}: {e}", path.display()))
}

fn load_and_analyze(path: &Path) -> Result<(StructureModel, AnalysisResult), Failure> {
    let model = load_document(path)?.model;
    check_model(path, &model)?;
    let result = analyze(&model).map_err(|e| solve_failure(path, e))?;
    Ok((model, result))
}

fn cmd_analyze(out: &mut dyn Write, path: &Path, svg: Option<&Path>, report: Option<&Path>, scale: Option<f64>) -> Outcome {
    let (model, result) = load_and_analyze(path)?;
    if let Some(svg_path) = svg {
        let diagram = build_diagram(&model, &result, scale);
        write_file(svg_path, &render_svg(&diagram))?;
    }
    if let Some(report_path) = report {
        write_file(report_path, &Report::new(&result, &model).to_json())?;
    }
    let s = Summary::new(&result, &model);
    let member = s.max_utilization_member.map_or("-".to_string(), |id| id.to_string());
    let _ = writeln!(out, "nodes {}, beams {}, cables {}", model.nodes().len(), model.beams().len(), model.cables().len());
    let _ = writeln!(out, "max deflection      {:.6e} m", s.max_deflection);
    let _ = writeln!(out, "max utilization     {:.6} (member {member})", s.max_utilization);
    let _ = writeln!(out, "total cable tension {:.6e} N", s.total_cable_tension);
    let _ = writeln!(
        out,
        "taut cables {}, slack cables {}, iterations {}",
        result.active_cables.len(),
        result.slack_cables.len(),
        result.iterations_used
    );
    Ok(())
}

struct GenerateArgs<'a> {
    target: &'a str,
    pillars: Option<usize>,
    wheels: Option<&'a str>,
    mid_support: bool,
    crosswise: bool,
    span: Option<f64>,
    deck_load: Option<f64>,
}

fn resolve_spec(args: &GenerateArgs) -> Result<BridgeSpec, crate::catalog::CatalogError> {
    let mut spec = match args.target.parse::<PresetId>() {
        Ok(preset) => preset.spec(),
        Err(_) => {
            let kind: BridgeKind = args.target.parse()?;
            BridgeSpec::new(kind, 0)
        }
    };
    if let Some(p) = args.pillars {
        if !matches!(spec.kind, BridgeKind::LeonardoReplica | BridgeKind::LeonardoGrounded) {
            return Err(crate::catalog::CatalogError::InvalidSpec(format!(
                "--pillars does not apply to {} bridges",
                spec.kind
            )));
        }
        // keep the number of deck segments per pillar bay
        let per_bay = (spec.deck_segments / (spec.pillar_count + 1)).max(1);
        spec.deck_segments = per_bay * (p + 1);
        spec.pillar_count = p;
    }
    if let Some(w) = args.wheels {
        spec.wheels = w.parse::<Wheels>()?;
    }
    spec.mid_support |= args.mid_support;
    spec.crosswise_top_ropes |= args.crosswise;
    if let Some(span) = args.span {
        spec.span = span;
    }
    if let Some(w) = args.deck_load {
        spec.deck_load = w;
    }
    Ok(spec)
}

fn cmd_generate(out: &mut dyn Write, args: &GenerateArgs, output: &Path) -> Outcome {
    let spec = resolve_spec(args).map_err(|e| Failure::new(EXIT_INVALID, e.to_string()))?;
    let model = generate(&spec).map_err(|e| Failure::new(EXIT_INVALID, e.to_string()))?;
    write_file(output, &serialize_model(&model))?;
    let _ = writeln!(
        out,
        "wrote {}: {} nodes, {} beams, {} cables",
        output.display(),
        model.nodes().len(),
        model.beams().len(),
        model.cables().len()
    );
    Ok(())
}

fn factor_text(f: f64) -> String {
    if f.is_infinite() {
        "inf".into()
    } else {
        format!("{f:.4}")
    }
}

fn cmd_stage(out: &mut dyn Write, path: &Path, report: Option<&Path>) -> Outcome {
    let doc = load_document(path)?;
    let plan = doc
        .erection_plan()
        .ok_or_else(|| Failure::new(EXIT_INVALID, format!("{}: no PLAN line", path.display())))?;
    let result = run_plan(&plan).map_err(|e| match e {
        crate::erection::ErectionError::InvalidPlan(_) => Failure::new(EXIT_INVALID, format!("{}: {e}", path.display())),
        crate::erection::ErectionError::Solve(s) => solve_failure(path, s),
    })?;
    if let Some(report_path) = report {
        let mut json = serde_json::to_string_pretty(&result).expect("plan report serializes");
        json.push('\n');
        write_file(report_path, &json)?;
    }
    let _ = writeln!(out, "stage  overhang  overturning  utilization  verdict");
    for s in &result.stages {
        let _ = writeln!(
            out,
            "{:>5}  {:>8.3}  {:>11}  {:>11.4}  {:?}  ({})",
            s.stage,
            s.cantilever_length,
            factor_text(s.overturning_factor),
            s.max_utilization,
            s.verdict,
            s.description
        );
    }
    let _ = writeln!(out, "minimal counterweight {} N", format_number(result.minimal_counterweight));
    match result.first_failure {
        None => {
            let _ = writeln!(out, "plan feasible");
            Ok(())
        }
        Some(stage) => {
            let verdict = match result.verdict {
                Verdict::Overturns => "overturns",
                Verdict::Overstressed => "is overstressed",
                Verdict::Stable => "is stable",
            };
            let _ = writeln!(out, "plan fails at stage {stage}: structure {verdict}");
            Err(Failure::new(EXIT_PLAN_FAILS, String::new()))
        }
    }
}

fn cmd_compare(out: &mut dyn Write, a: &Path, b: &Path, report: Option<&Path>) -> Outcome {
    let (model_a, result_a) = load_and_analyze(a)?;
    let (model_b, result_b) = load_and_analyze(b)?;
    let label = |p: &Path| p.file_stem().map_or("?".to_string(), |s| s.to_string_lossy().into_owned());
    let table = compare(
        &Summary::new(&result_a, &model_a),
        &Summary::new(&result_b, &model_b),
        (&label(a), &label(b)),
    );
    if let Some(report_path) = report {
        write_file(report_path, &table.to_json())?;
    }
    let _ = write!(out, "{}", table.to_text());
    Ok(())
}

/// Runs the command line `args` (including the program name), writing the
/// human summary to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_IO } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::Analyze {
            model,
            svg,
            report,
            scale,
        } => cmd_analyze(out, model, svg.as_deref(), report.as_deref(), *scale),
        Command::Generate {
            target,
            pillars,
            wheels,
            mid_support,
            crosswise,
            span,
            deck_load,
            output,
        } => {
            let args = GenerateArgs {
                target,
                pillars: *pillars,
                wheels: wheels.as_deref(),
                mid_support: *mid_support,
                crosswise: *crosswise,
                span: *span,
                deck_load: *deck_load,
            };
            cmd_generate(out, &args, output)
        }
        Command::Stage { plan, report } => cmd_stage(out, plan, report.as_deref()),
        Command::Compare {
            model_a,
            model_b,
            report,
        } => cmd_compare(out, model_a, model_b, report.as_deref()),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(f) => {
            if !f.message.is_empty() {
                let _ = writeln!(err, "error: {}", f.message);
            }
            f.code
        }
    }
}

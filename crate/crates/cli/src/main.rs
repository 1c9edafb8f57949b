//! `exploded-kernel`: JSON in, JSON out access to the exploded-core kernel.

mod commands;
mod input;
mod svg;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use exploded_core::{Error, Result};
use serde_json::{json, Value};

use input::{Request, SCHEMA};

#[derive(Parser)]
#[command(name = "exploded-kernel", version, about = "Exploded semiring, tropical and lattice computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Io {
    /// Request document.
    #[arg(long = "in", value_name = "PATH")]
    input: Option<PathBuf>,
    /// Request document given inline.
    #[arg(long, value_name = "TEXT")]
    json: Option<String>,
    /// Write the result here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Drawing {
    #[command(flatten)]
    io: Io,
    /// Also write an SVG picture.
    #[arg(long, value_name = "PATH")]
    svg: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate exploded expressions, model functions or tropical polynomials.
    Eval {
        #[command(flatten)]
        io: Io,
        /// Expression such as "3t^1 + 5t^1".
        #[arg(long)]
        expr: Option<String>,
    },
    /// Hilbert basis of the dual cone.
    DualCone(Io),
    /// Faces of a cone or polygon, or completeness of a complex.
    Faces(Io),
    /// Strata and local cones.
    Strata(Io),
    /// Family condition of a monomial morphism.
    FamilyCheck(Io),
    /// Fiber multiplicity of a monomial morphism.
    FiberMult(Io),
    /// Corner locus of a plane tropical polynomial.
    CornerLocus(Drawing),
    /// Balancing condition of a weighted graph.
    BalanceCheck(Io),
    /// Intersection of tropical hypersurfaces.
    Prevariety(Io),
    /// Validate a subdivision, build charts or pull it back.
    Refine(Io),
    /// Lift points to a refined model.
    Lift(Io),
    /// Apply strata projections and difference operators.
    Delta(Io),
    /// Weight functions of strata collections.
    Weights(Io),
    /// Hölder-type seminorm estimates on sampled functions.
    Seminorm(Io),
    /// Conformal moduli of gluing parameters and annuli.
    Modulus(Io),
    /// Glue maps on the two sides of a neck.
    Glue(Io),
    /// Cut a map on a neck into two sides.
    Cut(Io),
    /// Fit a cylinder model map to samples.
    FitCylinder(Io),
    /// Draw a plane tropical curve.
    Render(Drawing),
}

fn exit_code(e: &Error) -> u8 {
    if e.is_input_error() { 1 } else { 2 }
}

fn emit(doc: Value, out: Option<&PathBuf>) -> Result<()> {
    let mut doc = doc;
    if let Value::Object(map) = &mut doc {
        map.insert("schema".into(), Value::String(SCHEMA.into()));
    }
    let text = serde_json::to_string_pretty(&doc).expect("json values serialize") + "\n";
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn write_svg(path: Option<&PathBuf>, text: &str) -> Result<()> {
    if let Some(p) = path {
        fs::write(p, text).map_err(|e| Error::Usage(format!("cannot write {}: {e}", p.display())))?;
    }
    Ok(())
}

fn load(io: &Io) -> Result<Request> {
    Request::load(io.input.as_deref(), io.json.as_deref())
}

fn run(cmd: Command) -> Result<()> {
    use commands::*;
    let simple: (&Io, fn(&Request) -> Result<Value>) = match &cmd {
        Command::Eval { io, expr: Some(e) } => {
            if io.input.is_some() || io.json.is_some() {
                return Err(Error::Usage("--expr cannot be combined with --in or --json".into()));
            }
            let mut doc = serde_json::Map::new();
            doc.insert("expr".into(), Value::String(e.clone()));
            return emit(eval(&Request::from_map(doc))?, io.out.as_ref());
        }
        Command::Eval { io, expr: None } => (io, eval),
        Command::DualCone(io) => (io, dual_cone),
        Command::Faces(io) => (io, faces),
        Command::Strata(io) => (io, strata),
        Command::FamilyCheck(io) => (io, family_check),
        Command::FiberMult(io) => (io, fiber_mult),
        Command::BalanceCheck(io) => (io, balance_check),
        Command::Prevariety(io) => (io, prevariety_cmd),
        Command::Refine(io) => (io, refine),
        Command::Lift(io) => (io, lift),
        Command::Delta(io) => (io, delta),
        Command::Weights(io) => (io, weights),
        Command::Seminorm(io) => (io, seminorm),
        Command::Modulus(io) => (io, modulus),
        Command::Glue(io) => (io, glue_cmd),
        Command::Cut(io) => (io, cut_cmd),
        Command::FitCylinder(io) => (io, fit_cylinder),
        Command::CornerLocus(d) => {
            let (out, graph) = corner_locus_cmd(&load(&d.io)?)?;
            if d.svg.is_some() {
                write_svg(d.svg.as_ref(), &svg::render_svg(&graph, None, true)?.text)?;
            }
            return emit(out, d.io.out.as_ref());
        }
        Command::Render(d) => {
            let (mut out, text) = render(&load(&d.io)?)?;
            if d.svg.is_some() {
                write_svg(d.svg.as_ref(), &text)?;
            } else {
                out["svg"] = Value::String(text);
            }
            return emit(out, d.io.out.as_ref());
        }
    };
    let (io, handler) = simple;
    emit(handler(&load(io)?)?, io.out.as_ref())
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("EXPLODED_KERNEL_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Usage(format!("EXPLODED_KERNEL_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Usage(format!("cannot size the thread pool: {e}")))
}

fn fail(e: &Error) -> ExitCode {
    let doc = json!({ "schema": SCHEMA, "error": { "kind": e.kind(), "message": e.to_string() } });
    println!("{}", serde_json::to_string_pretty(&doc).expect("json values serialize"));
    ExitCode::from(exit_code(e))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            return fail(&Error::Usage(text.trim().trim_start_matches("error: ").to_string()));
        }
    };
    match configure_threads().and_then(|_| run(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}

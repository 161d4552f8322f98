//! Command-line front end: `solve`, `sweep`, `classify` and `verify`.
//!
//! Exit codes: 0 success, 1 input error, 2 solver or cross-check failure,
//! 3 inconsistent trace pattern.

pub mod sweep;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::ComplexValue;
use crate::gieseking::{classify_character, gieseking_triangulation, representation_from_x, CIRCLE_TOL};
use crate::holonomy::{coordinate_report, DehnCoefficients};
use crate::klein::{classify, completion_geometry, type_from_traces, CompletionGeometry, KleinTag, KleinType};
use crate::solver::{solve_by_continuation, CuspTarget, SolveTarget, SolverOptions};
use crate::triangulation::{orientation_double_cover, Triangulation};

pub use sweep::{gieseking_sweep, write_csv, SweepRow, CSV_HEADER};

pub const SCHEMA_VERSION: u32 = 1;

/// Environment variable overriding the sweep cross-check tolerance.
pub const TOL_ENV: &str = "CUSPFORGE_TOL";
pub const DEFAULT_TOL: f64 = 1e-9;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_SOLVER: i32 = 2;
pub const EXIT_PATTERN: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "cuspforge", version, about = "Deformations of cusped hyperbolic 3-manifolds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the gluing equations and report the cusp holonomy.
    Solve(SolveArgs),
    /// Sample the Gieseking deformation curve with solver cross-checks.
    Sweep(SweepArgs),
    /// Classify a Klein-bottle peripheral representation.
    Classify(ClassifyArgs),
    /// Check a triangulation and summarize its structure.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Triangulation file.
    #[arg(long)]
    pub tri: Option<PathBuf>,
    /// Built-in manifold: `gieseking` or `figure-eight`.
    #[arg(long)]
    pub manifold: Option<String>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub source: Source,
    /// `complete` or `dehn`.
    #[arg(long, default_value = "complete")]
    pub target: String,
    /// Filling `CUSP=P,Q` for a `dehn` target, by cusp name or index.
    #[arg(long = "fill", value_name = "CUSP=P,Q")]
    pub fills: Vec<String>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value = "gieseking")]
    pub manifold: String,
    #[arg(long, default_value_t = 101)]
    pub samples: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
#[group(id = "input", required = true, multiple = false)]
pub struct ClassifyInput {
    /// `I_a2,I_b`.
    #[arg(long, value_name = "IA2,IB", allow_hyphen_values = true)]
    pub traces: Option<String>,
    /// Gieseking character coordinate `RE,IM`.
    #[arg(long, value_name = "RE,IM", allow_hyphen_values = true)]
    pub x: Option<String>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub input: ClassifyInput,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: Source,
    /// Also write the orientation double cover here.
    #[arg(long)]
    pub cover_out: Option<PathBuf>,
}

/// Exit code of an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. }
        | Error::Validation(_)
        | Error::Io(_)
        | Error::InvalidTarget(_)
        | Error::MissingCurve { .. }
        | Error::InvalidParameter(_)
        | Error::OffCircle(_)
        | Error::ReducibleCharacter
        | Error::ParameterOutOfRange(_) => EXIT_INPUT,
        Error::InconsistentPattern { .. } => EXIT_PATTERN,
        _ => EXIT_SOLVER,
    }
}

/// Runs a parsed command, writing reports to `out` and diagnostics to
/// `err`. Returns the exit code.
pub fn run<O: Write, E: Write>(cli: Cli, out: &mut O, err: &mut E) -> i32 {
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(&a, out),
        Command::Sweep(a) => cmd_sweep(&a, out),
        Command::Classify(a) => cmd_classify(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Parses arguments and runs; clap usage errors exit with code 1.
pub fn run_from<I, T, O, E>(args: I, out: &mut O, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
    O: Write,
    E: Write,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli, out, err),
        Err(e) => {
            let _ = write!(err, "{e}");
            match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INPUT,
            }
        }
    }
}

fn tolerance() -> Result<f64> {
    match std::env::var(TOL_ENV) {
        Ok(v) => v
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|t| *t > 0.0 && t.is_finite())
            .ok_or_else(|| Error::InvalidParameter(format!("{TOL_ENV}={v} is not a positive number"))),
        Err(_) => Ok(DEFAULT_TOL),
    }
}

fn builtin(name: &str) -> Result<Triangulation> {
    match name {
        "gieseking" => Ok(gieseking_triangulation()),
        "figure-eight" | "figure_eight" => Ok(crate::gieseking::figure_eight_cover().into_triangulation()),
        other => Err(Error::InvalidParameter(format!("unknown manifold `{other}`"))),
    }
}

fn load(source: &Source) -> Result<Triangulation> {
    match (&source.tri, &source.manifold) {
        (Some(path), _) => Triangulation::from_path(path),
        (None, Some(name)) => builtin(name),
        (None, None) => Err(Error::InvalidParameter("need --tri or --manifold".into())),
    }
}

/// Writes through a temporary file in the target directory, so that a
/// failed run leaves no partial output.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn parse_pair(text: &str, what: &str) -> Result<(f64, f64)> {
    let bad = || Error::InvalidParameter(format!("{what}: expected two comma-separated numbers, got `{text}`"));
    let (a, b) = text.split_once(',').ok_or_else(bad)?;
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(bad());
    }
    Ok((a, b))
}

fn parse_target(tri: &Triangulation, target: &str, fills: &[String]) -> Result<SolveTarget> {
    match target {
        "complete" => {
            if !fills.is_empty() {
                return Err(Error::InvalidTarget("--fill needs --target dehn".into()));
            }
            Ok(SolveTarget::Complete)
        }
        "dehn" => {
            if fills.is_empty() {
                return Err(Error::InvalidTarget("--target dehn needs at least one --fill".into()));
            }
            let mut targets = vec![CuspTarget::Complete; tri.cusps().len()];
            for fill in fills {
                let (cusp, pq) = fill
                    .split_once('=')
                    .ok_or_else(|| Error::InvalidTarget(format!("expected CUSP=P,Q, got `{fill}`")))?;
                let index = tri
                    .cusps()
                    .iter()
                    .position(|c| c.name == cusp)
                    .or_else(|| cusp.parse::<usize>().ok().filter(|&i| i < tri.cusps().len()))
                    .ok_or_else(|| Error::InvalidTarget(format!("no cusp `{cusp}`")))?;
                let (p, q) = parse_pair(pq, "filling")?;
                targets[index] = CuspTarget::Filling { p, q };
            }
            Ok(SolveTarget::Cusps(targets))
        }
        other => Err(Error::InvalidTarget(format!("unknown target `{other}`"))),
    }
}

#[derive(Debug, Serialize)]
struct Complex {
    re: f64,
    im: f64,
}

impl From<ComplexValue> for Complex {
    fn from(z: ComplexValue) -> Self {
        Complex { re: z.re, im: z.im }
    }
}

#[derive(Debug, Serialize)]
struct FillingRecord {
    cusp: String,
    p: f64,
    q: f64,
}

#[derive(Debug, Serialize)]
struct CuspReport {
    name: String,
    klein: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    hol_longitude: Option<Complex>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hol_meridian: Option<Complex>,
    #[serde(skip_serializing_if = "Option::is_none")]
    u: Option<Complex>,
    #[serde(skip_serializing_if = "Option::is_none")]
    v: Option<Complex>,
    /// `null` together with `dehn_infinite` for the complete cusp.
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<Option<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<Option<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dehn_infinite: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    i_longitude: Option<Complex>,
    #[serde(skip_serializing_if = "Option::is_none")]
    i_meridian: Option<Complex>,
}

#[derive(Debug, Serialize)]
struct SolveDocument {
    schema_version: u32,
    manifold: String,
    target: String,
    fillings: Vec<FillingRecord>,
    shapes: Vec<Complex>,
    residual_norm: f64,
    cusps: Vec<CuspReport>,
}

/// Relative size below which `p` of a Klein cusp is reported as zero.
pub const KLEIN_P_SNAP: f64 = 1e-9;

/// On a Klein cusp `p` vanishes exactly; for large `q` the computed value
/// is dominated by the conditioning of `p = −Re v · 2π/det`.
fn snap_klein_p(p: f64, q: f64) -> f64 {
    if p.abs() <= KLEIN_P_SNAP * p.hypot(q) {
        0.0
    } else {
        p
    }
}

fn cmd_solve<O: Write>(args: &SolveArgs, out: &mut O) -> Result<()> {
    let tri = load(&args.source)?;
    let target = parse_target(&tri, &args.target, &args.fills)?;
    let point = solve_by_continuation(&tri, &target, &SolverOptions::default())?;
    let coords = coordinate_report(&tri, &point.shapes).ok();
    let mut cusps = Vec::new();
    for (k, (cusp, link)) in tri.cusps().iter().zip(tri.cusp_links()).enumerate() {
        let hol = point.peripheral.as_ref().map(|p| p.cusps[k]);
        let coord = coords.as_ref().map(|c| &c[k]);
        let klein = link.is_klein_bottle();
        let (p, q, inf) = match hol.map(|h| h.coefficients) {
            Some(DehnCoefficients::Finite { p, q }) => {
                let p = if klein { snap_klein_p(p, q) } else { p };
                (Some(Some(p)), Some(Some(q)), Some(false))
            }
            Some(DehnCoefficients::Infinite) => (Some(None), Some(None), Some(true)),
            None => (None, None, None),
        };
        cusps.push(CuspReport {
            name: cusp.name.clone(),
            klein,
            hol_longitude: hol.map(|h| h.l.into()),
            hol_meridian: hol.map(|h| h.m.into()),
            u: hol.map(|h| h.u.into()),
            v: hol.map(|h| h.v.into()),
            p,
            q,
            dehn_infinite: inf,
            i_longitude: coord.map(|c| c.i_longitude.into()),
            i_meridian: coord.map(|c| c.i_meridian.into()),
        });
    }
    let fillings = match &target {
        SolveTarget::Complete => Vec::new(),
        SolveTarget::Cusps(t) => t
            .iter()
            .zip(tri.cusps())
            .filter_map(|(c, cusp)| match *c {
                CuspTarget::Filling { p, q } => Some(FillingRecord {
                    cusp: cusp.name.clone(),
                    p,
                    q,
                }),
                CuspTarget::Complete => None,
            })
            .collect(),
    };
    let doc = SolveDocument {
        schema_version: SCHEMA_VERSION,
        manifold: tri.name().to_string(),
        target: args.target.clone(),
        fillings,
        shapes: point.shapes.values().iter().map(|&z| z.into()).collect(),
        residual_norm: point.residual_norm,
        cusps,
    };
    let mut text = serde_json::to_string_pretty(&doc).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    text.push('\n');
    write_atomic(&args.out, text.as_bytes())?;
    writeln!(out, "solved {} with residual {:.3e}", tri.name(), point.residual_norm)?;
    Ok(())
}

fn cmd_sweep<O: Write>(args: &SweepArgs, out: &mut O) -> Result<()> {
    if args.manifold != "gieseking" {
        return Err(Error::InvalidParameter(format!(
            "sweep supports only the gieseking manifold, got `{}`",
            args.manifold
        )));
    }
    let tol = tolerance()?;
    let rows = gieseking_sweep(args.samples)?;
    let worst = rows.iter().map(|r| r.crosscheck).fold(0.0, f64::max);
    if worst.is_nan() || worst > tol {
        let index = rows.iter().position(|r| r.crosscheck.is_nan() || r.crosscheck > tol).unwrap_or(0);
        return Err(Error::CrossCheck {
            index,
            value: worst,
            tol,
        });
    }
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf)?;
    write_atomic(&args.out, &buf)?;
    writeln!(out, "wrote {} rows, worst cross-check {worst:.3e}", rows.len())?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct ClassifyDocument {
    schema_version: u32,
    #[serde(rename = "type")]
    kind: &'static str,
    parameters: Option<Parameters>,
    completion: Option<Completion>,
    i_a2: f64,
    i_b: f64,
}

#[derive(Debug, Serialize)]
struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none")]
    tau: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    l: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
}

#[derive(Debug, Serialize)]
struct Completion {
    geometry: &'static str,
    cone_angle: f64,
    singular_length: f64,
}

fn parameters(t: Option<KleinType>) -> Option<Parameters> {
    t.map(|t| match t {
        KleinType::ParabolicNonDegenerate { tau } | KleinType::ParabolicDegenerate { tau } => Parameters {
            tau: Some(tau),
            l: None,
            alpha: None,
        },
        KleinType::TypeI { l, alpha } | KleinType::TypeII { alpha, l } => Parameters {
            tau: None,
            l: Some(l),
            alpha: Some(alpha),
        },
    })
}

fn cmd_classify<O: Write>(args: &ClassifyArgs, out: &mut O) -> Result<()> {
    let (tag, kind, i_a2, i_b) = if let Some(text) = &args.input.traces {
        let (i_a2, i_b) = parse_pair(text, "--traces")?;
        let kind = type_from_traces(i_a2, i_b)?;
        let tag = crate::klein::classify_from_traces(i_a2, i_b)?;
        (tag, kind, i_a2, i_b)
    } else {
        let text = args.input.x.as_deref().unwrap_or_default();
        let (re, im) = parse_pair(text, "--x")?;
        let x = ComplexValue::new(re, im);
        let tag = classify_character(x, CIRCLE_TOL)?;
        let rep = representation_from_x(x, CIRCLE_TOL)?;
        let (ia2, ib) = rep.trace_invariants();
        (tag, Some(classify(&rep)?), ia2.re, ib.re)
    };
    let completion = match (tag, kind) {
        (KleinTag::Parabolic, None) => Some(CompletionGeometry::Cusp),
        (_, Some(k)) => completion_geometry(k).ok(),
        _ => None,
    };
    let doc = ClassifyDocument {
        schema_version: SCHEMA_VERSION,
        kind: tag.as_str(),
        parameters: parameters(kind),
        completion: completion.map(|g| Completion {
            geometry: g.name(),
            cone_angle: g.cone_angle(),
            singular_length: g.singular_length(),
        }),
        i_a2,
        i_b,
    };
    if args.json {
        let text = serde_json::to_string_pretty(&doc).map_err(|e| Error::InvalidParameter(e.to_string()))?;
        writeln!(out, "{text}")?;
        return Ok(());
    }
    writeln!(out, "type: {}", doc.kind)?;
    writeln!(out, "I_a2: {}", sweep::format_float(i_a2))?;
    writeln!(out, "I_b: {}", sweep::format_float(i_b))?;
    if let Some(p) = &doc.parameters {
        for (name, v) in [("tau", p.tau), ("l", p.l), ("alpha", p.alpha)] {
            if let Some(v) = v {
                writeln!(out, "{name}: {}", sweep::format_float(v))?;
            }
        }
    }
    match &doc.completion {
        Some(c) => {
            writeln!(out, "completion: {}", c.geometry)?;
            if c.geometry != "cusp" {
                writeln!(out, "cone_angle: {}", sweep::format_float(c.cone_angle))?;
                writeln!(out, "singular_length: {}", sweep::format_float(c.singular_length))?;
            }
        }
        None => writeln!(out, "completion: none (degenerate)")?,
    }
    Ok(())
}

fn plural(n: usize, word: &str) -> String {
    if n == 1 {
        format!("{n} {word}")
    } else {
        format!("{n} {word}s")
    }
}

fn cusp_summary(tri: &Triangulation) -> String {
    let klein = tri.cusp_links().iter().filter(|l| l.is_klein_bottle()).count();
    let torus = tri.cusp_links().iter().filter(|l| l.is_torus()).count();
    let mut parts = Vec::new();
    if torus > 0 {
        parts.push(plural(torus, "torus cusp"));
    }
    if klein > 0 {
        parts.push(plural(klein, "Klein cusp"));
    }
    parts.join(", ")
}

/// One-line structural summary, e.g.
/// `1 tet, 1 edge cycle (len 6), 1 Klein cusp, cover: 2 tets/1 torus cusp`.
pub fn structure_summary(tri: &Triangulation) -> Result<String> {
    let lens: Vec<String> = tri.edge_cycles().iter().map(|c| c.len().to_string()).collect();
    let mut line = format!(
        "{}, {} (len {}), {}",
        plural(tri.tetrahedra_count(), "tet"),
        plural(lens.len(), "edge cycle"),
        lens.join(", "),
        cusp_summary(tri)
    );
    if tri.is_orientable() {
        line.push_str(", orientable");
    } else {
        let cover = orientation_double_cover(tri)?;
        let ct = cover.triangulation();
        line.push_str(&format!(
            ", cover: {}/{}",
            plural(ct.tetrahedra_count(), "tet"),
            cusp_summary(ct)
        ));
    }
    Ok(line)
}

fn cmd_verify<O: Write>(args: &VerifyArgs, out: &mut O) -> Result<()> {
    let tri = load(&args.source)?;
    if !tri.edge_count_matches() {
        return Err(Error::Validation(format!(
            "edge count: {} cycles for {} tetrahedra",
            tri.edge_cycles().len(),
            tri.tetrahedra_count()
        )));
    }
    writeln!(out, "{}", structure_summary(&tri)?)?;
    for (i, cycle) in tri.edge_cycles().iter().enumerate() {
        let conj = cycle.steps().iter().filter(|s| !s.epsilon).count();
        writeln!(out, "edge {i}: length {}, {} reversed steps", cycle.len(), conj)?;
    }
    for (cusp, link) in tri.cusps().iter().zip(tri.cusp_links()) {
        let kind = if link.is_klein_bottle() { "Klein bottle" } else { "torus" };
        writeln!(out, "cusp {}: {kind}, {} triangles", cusp.name, link.triangle_count())?;
    }
    if tri.is_orientable() {
        let coherent = tri.coherent_orientation().is_some();
        writeln!(out, "orientable, coherent epsilon: {coherent}")?;
    } else if let Some(path) = &args.cover_out {
        let cover = orientation_double_cover(&tri)?;
        write_atomic(path, cover.triangulation().to_json().as_bytes())?;
        writeln!(out, "cover written to {}", path.display())?;
    }
    Ok(())
}

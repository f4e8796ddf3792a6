//! The `opnodal` command line.
//!
//! Exit codes: 0 on success, 1 when the computation itself fails (no chart
//! available, unknown locus, parameters off a locus, ...), 2 on usage errors.
//! Results go to stdout, diagnostics to stderr.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::atlas::{Capability, ChartPoint, Params, PainleveType};
use crate::flow::{self, IntegratorConfig, PathSpec, Status, Trajectory};
use crate::riccati;
use crate::rootlat::{self, PicardConfig, RootSystemType};
use crate::verify;

type C = Complex64;

#[derive(Debug, Parser)]
#[command(name = "opnodal", version, about = "E8 sublattice tables, Painleve chart flows and Riccati loci")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Root lattices and (-2)-curve configurations.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Integration of the Painleve systems on their chart atlases.
    #[command(subcommand)]
    Painleve(PainleveCmd),
    /// Riccati loci and their scalar equations.
    #[command(subcommand)]
    Riccati(RiccatiCmd),
    /// Reproducibility checks.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum Format {
    Json,
    #[default]
    Text,
}

#[derive(Debug, Subcommand)]
enum LatticeCmd {
    /// Root sublattices of E8 by rank.
    Table2 {
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Root lattices orthogonal to each affine type.
    Table3 {
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Configurations realized by elliptic fibrations.
    Table4 {
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Explicit E8 roots spanning a root system.
    Embed {
        #[arg(long = "type", value_parser = parse_root_type)]
        root_type: RootSystemType,
    },
    /// Lattice check of a Picard configuration read from JSON.
    Opcheck {
        #[arg(long)]
        file: PathBuf,
    },
    /// Dimension count for `r` blown-up points and `s` moduli.
    Modulidim {
        #[arg(long, allow_negative_numbers = true)]
        r: i64,
        #[arg(long, allow_negative_numbers = true)]
        s: i64,
    },
}

#[derive(Debug, Args)]
struct Tolerances {
    #[arg(long, value_parser = parse_positive)]
    rtol: Option<f64>,
    #[arg(long, value_parser = parse_positive)]
    atol: Option<f64>,
    /// Chart switching threshold.
    #[arg(long, value_parser = parse_positive)]
    rho: Option<f64>,
    #[arg(long, value_parser = parse_positive)]
    max_step: Option<f64>,
    #[arg(long, value_parser = parse_count)]
    max_steps: Option<usize>,
}

impl Tolerances {
    fn config(&self) -> IntegratorConfig {
        let d = IntegratorConfig::default();
        IntegratorConfig {
            rel_tol: self.rtol.unwrap_or(d.rel_tol),
            abs_tol: self.atol.unwrap_or(d.abs_tol),
            rho: self.rho.unwrap_or(d.rho),
            max_step: self.max_step.unwrap_or(d.max_step),
            max_steps: self.max_steps.unwrap_or(d.max_steps),
            ..d
        }
    }
}

#[derive(Debug, Subcommand)]
enum PainleveCmd {
    /// Integrates along a piecewise linear path, switching charts at poles.
    Integrate {
        #[arg(long = "type", value_parser = parse_type)]
        pt: PainleveType,
        /// `name=re[,im]` pairs, e.g. `k0=0,kinf=1`.
        #[arg(long, default_value = "", value_parser = parse_assignments)]
        params: Assignments,
        /// `chart=<i>,x=re[,im],y=re[,im]`.
        #[arg(long, value_parser = parse_assignments)]
        init: Assignments,
        /// Waypoints `t0,t1,...`; complex waypoints are written `a+bi`.
        #[arg(long, value_parser = parse_path, allow_hyphen_values = true)]
        path: Waypoints,
        #[command(flatten)]
        tol: Tolerances,
        /// Trajectory CSV.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Method {
    #[default]
    Direct,
    Linear,
}

#[derive(Debug, Subcommand)]
enum RiccatiCmd {
    /// Loci of a type with their equations.
    List {
        #[arg(long = "type", value_parser = parse_type)]
        pt: PainleveType,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Scalar Riccati equation on a locus and its linearization.
    Reduce {
        #[arg(long = "type", value_parser = parse_type)]
        pt: PainleveType,
        #[arg(long)]
        locus: String,
    },
    /// Seeded tangency and linearization residuals per locus.
    Verify {
        #[arg(long = "type", value_parser = parse_type)]
        pt: PainleveType,
        #[arg(long)]
        locus: Option<String>,
        #[arg(long, default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 100, value_parser = parse_count)]
        samples: usize,
    },
    /// Integrates the scalar equation on a locus.
    Solve {
        #[arg(long = "type", value_parser = parse_type)]
        pt: PainleveType,
        #[arg(long)]
        locus: String,
        #[arg(long, default_value = "", value_parser = parse_assignments)]
        params: Assignments,
        /// Initial value `re[,im]`.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        x0: C,
        #[arg(long, value_parser = parse_path, allow_hyphen_values = true)]
        path: Waypoints,
        #[arg(long, value_enum, default_value_t)]
        method: Method,
        #[command(flatten)]
        tol: Tolerances,
        #[arg(long)]
        out: PathBuf,
    },
    /// Active loci at given parameters and the type of their configuration.
    Config {
        #[arg(long = "type", value_parser = parse_type)]
        pt: PainleveType,
        #[arg(long, default_value = "", value_parser = parse_assignments)]
        params: Assignments,
    },
    /// Why a type has no Riccati locus.
    Nonexistence {
        #[arg(long = "type", value_parser = parse_type)]
        pt: PainleveType,
    },
    /// Splitting of the E6~ product locus at `k0`.
    Confluence {
        #[arg(long, default_value = "0", value_parser = parse_complex, allow_hyphen_values = true)]
        k0: C,
    },
}

#[derive(Debug, Subcommand)]
enum VerifyCmd {
    /// Runs every reproducibility check; fails if any check fails.
    All {
        #[arg(long, default_value_t = verify::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Domain(String),
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Domain(e.to_string())
    }
}

type Outcome = Result<bool, CliError>;

/// Runs the command line `args` (including the program name) and returns
/// the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let outcome = match cli.command {
        Command::Lattice(c) => lattice(c, out),
        Command::Painleve(c) => painleve(c, out),
        Command::Riccati(c) => riccati_cmd(c, out),
        Command::Verify(c) => verify_cmd(c, out),
    };
    match outcome {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(CliError::Domain(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}\n\nFor more information, try '--help'.");
            2
        }
    }
}

fn write_json(out: &mut dyn Write, v: &Value) -> Result<(), CliError> {
    writeln!(out, "{}", serde_json::to_string_pretty(v)?)?;
    Ok(())
}

fn cjson(z: C) -> Value {
    json!([z.re, z.im])
}

fn lattice(cmd: LatticeCmd, out: &mut dyn Write) -> Outcome {
    let table = |t: rootlat::Table, f: Format, out: &mut dyn Write| -> Outcome {
        match f {
            Format::Json => writeln!(out, "{}", t.to_json())?,
            Format::Text => write!(out, "{}", t.to_text())?,
        }
        Ok(true)
    };
    match cmd {
        LatticeCmd::Table2 { format } => table(rootlat::table2(), format, out),
        LatticeCmd::Table3 { format } => table(rootlat::table3(), format, out),
        LatticeCmd::Table4 { format } => table(rootlat::table4(), format, out),
        LatticeCmd::Embed { root_type } => {
            let e = rootlat::find_embedding(&root_type)?;
            e.verify()?;
            let gram = e.gram();
            let classified = rootlat::classify_gram(&gram)?;
            write_json(
                out,
                &json!({
                    "type": root_type,
                    "vectors": e.vectors,
                    "coordinates": "doubled",
                    "gram": gram.entries(),
                    "classified": classified,
                }),
            )?;
            Ok(classified == root_type)
        }
        LatticeCmd::Opcheck { file } => {
            let text = std::fs::read_to_string(&file)
                .map_err(|e| CliError::Domain(format!("{}: {e}", file.display())))?;
            let cfg: PicardConfig = serde_json::from_str(&text)?;
            let report = rootlat::op_pair_lattice_check(&cfg)?;
            write_json(out, &serde_json::to_value(&report)?)?;
            Ok(true)
        }
        LatticeCmd::Modulidim { r, s } => {
            let d = rootlat::moduli_dim(r, s)?;
            writeln!(out, "{d}")?;
            Ok(true)
        }
    }
}

fn params_of(pt: PainleveType, a: &Assignments) -> Result<Params, CliError> {
    Ok(Params::from_named(pt, &a.0)?)
}

fn path_of(points: &Waypoints) -> Result<PathSpec, CliError> {
    PathSpec::new(points.0.clone()).map_err(|e| CliError::Usage(e.to_string()))
}

fn init_of(a: &Assignments) -> Result<ChartPoint, CliError> {
    let mut chart = None;
    let (mut x, mut y) = (None, None);
    for (k, v) in &a.0 {
        let slot = match k.as_str() {
            "x" => &mut x,
            "y" => &mut y,
            "chart" => {
                if v.im != 0.0 || v.re < 0.0 || v.re.fract() != 0.0 {
                    return Err(CliError::Usage(format!("chart must be a non-negative integer, got {v}")));
                }
                chart = Some(v.re as usize);
                continue;
            }
            _ => return Err(CliError::Usage(format!("unknown key {k} in --init"))),
        };
        *slot = Some(*v);
    }
    match (x, y) {
        (Some(x), Some(y)) => Ok(ChartPoint::new(chart.unwrap_or(0), x, y)),
        _ => Err(CliError::Usage("--init needs both x and y".into())),
    }
}

fn write_trajectory(traj: &Trajectory, path: &PathBuf) -> Result<(), CliError> {
    let file = File::create(path).map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))?;
    let mut w = BufWriter::new(file);
    traj.write_csv(&mut w)?;
    w.flush()?;
    Ok(())
}

fn status_json(s: Status) -> Value {
    serde_json::to_value(s).expect("unit variants")
}

fn painleve(cmd: PainleveCmd, out: &mut dyn Write) -> Outcome {
    let PainleveCmd::Integrate { pt, params, init, path, tol, out: csv } = cmd;
    if pt.capability() != Capability::FullAtlas {
        return Err(CliError::Domain(format!("{pt} has no chart atlas; integration needs E7, E6 or D4")));
    }
    let p = params_of(pt, &params)?;
    let init = init_of(&init)?;
    let path = path_of(&path)?;
    let traj = flow::integrate_atlas(&p, &path, init, &tol.config())?;
    write_trajectory(&traj, &csv)?;
    let last = traj.last().expect("the initial point is recorded");
    let events: Vec<Value> =
        traj.events.iter().map(|e| json!({"t": cjson(e.t), "from": e.from, "to": e.to})).collect();
    write_json(
        out,
        &json!({
            "type": pt.short_name(),
            "status": status_json(traj.status),
            "samples": traj.samples.len(),
            "switches": events,
            "final": {"t": cjson(last.t), "chart": last.chart, "x": cjson(last.x), "y": cjson(last.y)},
            "csv": csv.display().to_string(),
        }),
    )?;
    Ok(traj.status == Status::Completed)
}

fn loci_of(pt: PainleveType, name: Option<&str>) -> Result<Vec<&'static riccati::LocusSpec>, CliError> {
    match name {
        Some(n) => Ok(vec![riccati::find_locus(pt, n)?]),
        None if riccati::catalog(pt).is_empty() => Err(CliError::Domain(format!("{pt} has no Riccati loci"))),
        None => Ok(riccati::catalog(pt).iter().collect()),
    }
}

fn riccati_cmd(cmd: RiccatiCmd, out: &mut dyn Write) -> Outcome {
    match cmd {
        RiccatiCmd::List { pt, format } => {
            match format {
                Format::Json => write_json(out, &riccati::catalog_json(pt))?,
                Format::Text => {
                    for l in riccati::catalog(pt) {
                        let j = l.to_json();
                        let charts: Vec<String> = l.charts.iter().map(|(c, e)| e.render(*c, pt)).collect();
                        let r = &j["riccati"];
                        writeln!(
                            out,
                            "{}: {}; {}; {}' = ({}) {}^2 + ({}) {} + ({})",
                            l.name,
                            j["constraint"].as_str().unwrap_or_default(),
                            charts.join(", "),
                            j["reduced_on"].as_str().unwrap_or_default(),
                            r["a"].as_str().unwrap_or_default(),
                            j["reduced_on"].as_str().unwrap_or_default(),
                            r["b"].as_str().unwrap_or_default(),
                            j["reduced_on"].as_str().unwrap_or_default(),
                            r["c"].as_str().unwrap_or_default(),
                        )?;
                    }
                }
            }
            Ok(true)
        }
        RiccatiCmd::Reduce { pt, locus } => {
            let l = riccati::find_locus(pt, &locus)?;
            let mut j = l.to_json();
            let [p, q] = riccati::reduce(l).render_linear(pt);
            j["type"] = json!(pt.short_name());
            j["linear"] = json!({"p": p, "q": q});
            write_json(out, &j)?;
            Ok(true)
        }
        RiccatiCmd::Verify { pt, locus, seed, samples } => {
            let checks: Vec<verify::LocusCheck> =
                loci_of(pt, locus.as_deref())?.into_iter().map(|l| verify::check_locus(l, seed, samples)).collect();
            write_json(out, &json!({"type": pt.short_name(), "seed": seed, "loci": checks}))?;
            Ok(checks.iter().all(|c| c.passed))
        }
        RiccatiCmd::Solve { pt, locus, params, x0, path, method, tol, out: csv } => {
            let l = riccati::find_locus(pt, &locus)?;
            let p = params_of(pt, &params)?;
            if !l.constraint.holds(p.values()) {
                return Err(riccati::RiccatiError::ConstraintViolated(l.constraint.render(pt)).into());
            }
            let ode = riccati::reduce(l).instantiate(&p)?;
            let path = path_of(&path)?;
            let cfg = tol.config();
            let traj = match method {
                Method::Direct => flow::integrate_riccati(&ode, &path, x0, &cfg)?,
                Method::Linear => riccati::solve_via_linear(&ode, x0, &path, &cfg)?,
            };
            write_trajectory(&traj, &csv)?;
            let last = traj.last().map(|s| json!({"t": cjson(s.t), "x": cjson(flow::riccati_value(s))}));
            write_json(
                out,
                &json!({
                    "type": pt.short_name(),
                    "locus": l.name,
                    "method": match method { Method::Direct => "direct", Method::Linear => "linear" },
                    "status": status_json(traj.status),
                    "samples": traj.samples.len(),
                    "switches": traj.events.iter().map(|e| cjson(e.t)).collect::<Vec<_>>(),
                    "pole_crossings": traj.pole_crossings.iter().map(|&t| cjson(t)).collect::<Vec<_>>(),
                    "final": last,
                    "csv": csv.display().to_string(),
                }),
            )?;
            Ok(traj.status == Status::Completed)
        }
        RiccatiCmd::Config { pt, params } => {
            let p = params_of(pt, &params)?;
            let r = riccati::config_at_params(&p)?;
            let points: Vec<Value> = riccati::rational_points(&p)?
                .iter()
                .map(|q| json!({"chart": q.chart, "source": q.source, "x": upoly_json(&q.x), "y": upoly_json(&q.y)}))
                .collect();
            write_json(
                out,
                &json!({
                    "type": pt.short_name(),
                    "active": r.active,
                    "edges": r.edges,
                    "configuration": r.root_type,
                    "rational_points": points,
                }),
            )?;
            Ok(true)
        }
        RiccatiCmd::Nonexistence { pt } => {
            let r = riccati::nonexistence(pt)?;
            write_json(out, &serde_json::to_value(&r)?)?;
            Ok(true)
        }
        RiccatiCmd::Confluence { k0 } => {
            let r = riccati::confluence_check(k0);
            write_json(out, &serde_json::to_value(&r)?)?;
            Ok(true)
        }
    }
}

/// Coefficients in increasing degree of `t`.
fn upoly_json(p: &riccati::UPoly) -> Value {
    if p.is_zero() {
        return json!([cjson(C::new(0.0, 0.0))]);
    }
    Value::Array(p.coeffs().iter().map(|&c| cjson(c)).collect())
}

fn verify_cmd(cmd: VerifyCmd, out: &mut dyn Write) -> Outcome {
    let VerifyCmd::All { seed, format } = cmd;
    let results = verify::run_all(seed);
    let passed = results.iter().filter(|r| r.passed).count();
    match format {
        Format::Json => write_json(out, &json!({"seed": seed, "passed": passed, "checks": results}))?,
        Format::Text => {
            for r in &results {
                writeln!(out, "{}", r.line())?;
            }
            writeln!(out, "{passed}/{} checks passed (seed {seed})", results.len())?;
        }
    }
    Ok(passed == results.len())
}

/// `name=value` pairs in command-line order.
#[derive(Clone, Debug, Default, PartialEq)]
struct Assignments(Vec<(String, C)>);

fn parse_type(s: &str) -> Result<PainleveType, String> {
    s.parse().map_err(|e: crate::atlas::AtlasError| e.to_string())
}

fn parse_root_type(s: &str) -> Result<RootSystemType, String> {
    s.parse().map_err(|e: rootlat::LatticeError| e.to_string())
}

fn parse_positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

fn parse_count(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(format!("expected a positive integer, got {s:?}")),
    }
}

fn parse_real(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("expected a finite number, got {s:?}")),
    }
}

/// `re` or `re,im`.
fn parse_complex(s: &str) -> Result<C, String> {
    match s.split_once(',') {
        None => Ok(C::new(parse_real(s)?, 0.0)),
        Some((re, im)) => Ok(C::new(parse_real(re)?, parse_real(im)?)),
    }
}

/// `name=re[,im]` items separated by commas; a token without `=` is the
/// imaginary part of the preceding value.
fn parse_assignments(s: &str) -> Result<Assignments, String> {
    let mut out: Vec<(String, C)> = Vec::new();
    let mut imag_allowed = false;
    for token in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if let Some((name, value)) = token.split_once('=') {
            let name = name.trim();
            if name.is_empty() {
                return Err(format!("missing name in {token:?}"));
            }
            out.push((name.to_string(), C::new(parse_real(value)?, 0.0)));
            imag_allowed = true;
        } else if imag_allowed {
            out.last_mut().expect("preceded by a value").1.im = parse_real(token)?;
            imag_allowed = false;
        } else {
            return Err(format!("expected name=value, got {token:?}"));
        }
    }
    Ok(Assignments(out))
}

/// A waypoint `a`, `a+bi`, `a-bi` or `bi`.
fn parse_waypoint(s: &str) -> Result<C, String> {
    let s = s.trim();
    let Some(body) = s.strip_suffix('i') else { return Ok(C::new(parse_real(s)?, 0.0)) };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |t: &str| match t {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => parse_real(t),
    };
    match split {
        Some(k) => Ok(C::new(parse_real(&body[..k])?, imag(&body[k..])?)),
        None => Ok(C::new(0.0, imag(body)?)),
    }
}

#[derive(Clone, Debug, PartialEq)]
struct Waypoints(Vec<C>);

fn parse_path(s: &str) -> Result<Waypoints, String> {
    s.split(',').map(parse_waypoint).collect::<Result<_, _>>().map(Waypoints)
}

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use polyball::arith::{decimal_string, parse_rational, rational_string, to_f64};
use polyball::combinatorics::{f_vector, facet_count, rep};
use polyball::face_lattice::lattice_of;
use polyball::norms::{dual_norm, knorm, knorm_variational, member_rho, member_rho_star};
use polyball::suites::{self, Suite, SuiteConfig};
use polyball::{BigInt, BigRational, Family, Params, SurdValue};

mod mahler;
mod off;
mod record;

use record::Record;

const DIGITS: usize = 12;

#[derive(Parser, Debug)]
#[command(
    name = "polyball",
    version,
    about = "Exact geometry of the k-norm balls rho(d,k) and their polars"
)]
struct Cli {
    /// Output format. `csv` applies to `mahler` only.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Closed,
    Montecarlo,
    Triangulate,
}

#[derive(clap::Args, Debug)]
struct BodyArgs {
    #[arg(long)]
    d: usize,
    /// Rational (`5/2`) or decimal (`2.5`); converted exactly.
    #[arg(long)]
    k: String,
    /// Use the polar body rho*(d,k).
    #[arg(long)]
    dual: bool,
}

impl BodyArgs {
    fn params(&self) -> anyhow::Result<Params> {
        Params::parse(self.d, &self.k).map_err(usage)
    }

    fn family(&self) -> Family {
        if self.dual {
            Family::Dual
        } else {
            Family::Primal
        }
    }
}

#[derive(clap::Args, Debug)]
struct MeasureArgs {
    #[command(flatten)]
    body: BodyArgs,
    #[arg(long, value_enum, default_value_t = Method::Closed)]
    method: Method,
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, env = "POLYBALL_SEED", default_value_t = 1)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate the k-norm (or its dual) of a vector and classify membership.
    Norm {
        /// Defaults to the vector length.
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        k: String,
        /// Comma-separated coordinates, e.g. `3,1,-2`.
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
        #[arg(long)]
        dual: bool,
        /// Evaluate by the variational formula instead of sorting.
        #[arg(long)]
        variational: bool,
    },
    /// Face counts f_0 … f_{d-1}.
    Fvector {
        #[command(flatten)]
        body: BodyArgs,
        /// Enumerate the face lattice and cross-check (d <= 6).
        #[arg(long)]
        oracle: bool,
    },
    /// d-dimensional volume.
    Volume(MeasureArgs),
    /// (d-1)-dimensional boundary volume.
    Boundary(MeasureArgs),
    /// Mahler volumes for all integer 1 <= k <= d <= dmax.
    Mahler {
        #[arg(long)]
        dmax: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write an OFF mesh of a 3-dimensional body.
    ExportOff {
        #[command(flatten)]
        body: BodyArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a verification suite and print its JSON report.
    Verify {
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, default_value_t = 6)]
        dmax: usize,
        #[arg(long, env = "POLYBALL_SEED", default_value_t = 1)]
        seed: u64,
    },
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: polyball::Error| e.to_string())
}

/// A bad argument value discovered after clap's own parsing.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(e: impl std::fmt::Display) -> anyhow::Error {
    UsageError(e.to_string()).into()
}

/// 1 for a failed verification, 2 for bad input, 3 for I/O.
fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<io::Error>() {
            return 3;
        }
        if let Some(e) = cause.downcast_ref::<csv::Error>() {
            return if e.is_io_error() { 3 } else { 2 };
        }
        if cause.is::<UsageError>() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<polyball::Error>() {
            return match e {
                polyball::Error::Inconsistent(_) => 1,
                _ => 2,
            };
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<u8> {
    if cli.format == Format::Csv && !matches!(cli.command, Command::Mahler { .. }) {
        return Err(usage("--format csv is only available for `mahler`"));
    }
    let json = cli.format == Format::Json;
    let mut out = io::stdout().lock();
    match &cli.command {
        Command::Norm {
            d,
            k,
            vector,
            dual,
            variational,
        } => cmd_norm(&mut out, json, *d, k, vector, *dual, *variational),
        Command::Fvector { body, oracle } => cmd_fvector(&mut out, json, body, *oracle),
        Command::Volume(args) => cmd_volume(&mut out, json, args),
        Command::Boundary(args) => cmd_boundary(&mut out, json, args),
        Command::Mahler { dmax, out: path } => {
            mahler::cmd_mahler(&mut out, *dmax, cli.format == Format::Json, path.as_deref())
        }
        Command::ExportOff { body, out: path } => {
            let p = body.params()?;
            let mesh = off::off_mesh(&p, body.family())?;
            match path {
                Some(path) => {
                    let mut f = File::create(path)
                        .with_context(|| format!("creating {}", path.display()))?;
                    f.write_all(mesh.as_bytes())
                        .with_context(|| format!("writing {}", path.display()))?;
                }
                None => out.write_all(mesh.as_bytes())?,
            }
            Ok(0)
        }
        Command::Verify { suite, dmax, seed } => {
            let cfg = SuiteConfig {
                d_max: *dmax,
                seed: *seed,
                ..SuiteConfig::default()
            };
            let report = suites::run(*suite, &cfg);
            writeln!(out, "{}", report.to_json())?;
            for failure in report.failures() {
                eprintln!("FAILED {}: {}", failure.name, failure.detail);
            }
            Ok(if report.passed { 0 } else { 1 })
        }
    }
}

fn parse_vector(s: &str) -> anyhow::Result<Vec<BigRational>> {
    s.split(',')
        .map(|c| parse_rational(c.trim()).map_err(usage))
        .collect()
}

fn cmd_norm(
    out: &mut impl Write,
    json: bool,
    d: Option<usize>,
    k: &str,
    vector: &str,
    dual: bool,
    variational: bool,
) -> anyhow::Result<u8> {
    let x = parse_vector(vector)?;
    let d = d.unwrap_or(x.len());
    if d != x.len() {
        return Err(usage(format!(
            "--d {d} but the vector has {} coordinates",
            x.len()
        )));
    }
    let p = Params::parse(d, k).map_err(usage)?;
    let (value, membership, quantity, method) = if dual {
        if variational {
            return Err(usage("--variational applies to the primal k-norm only"));
        }
        (
            dual_norm(&x, &p)?,
            member_rho_star(&x, &p)?,
            "dual_norm",
            "closed",
        )
    } else if variational {
        (
            knorm_variational(&x, &p)?,
            member_rho(&x, &p)?,
            "knorm",
            "variational",
        )
    } else {
        (knorm(&x, &p)?, member_rho(&x, &p)?, "knorm", "closed")
    };
    let family = if dual { Family::Dual } else { Family::Primal };
    if json {
        let rec = Record::new(
            &p,
            family,
            quantity,
            rational_string(&value),
            decimal_string(&value, DIGITS),
            method,
        );
        writeln!(out, "{}", rec.to_json())?;
    } else {
        writeln!(out, "{}", rational_string(&value))?;
        let body = if dual { "rho*" } else { "rho" };
        writeln!(out, "membership in {body}{p}: {membership}")?;
    }
    Ok(0)
}

fn cmd_fvector(
    out: &mut impl Write,
    json: bool,
    body: &BodyArgs,
    oracle: bool,
) -> anyhow::Result<u8> {
    let p = body.params()?;
    let family = body.family();
    let closed = if p.is_integer_k() {
        Some(f_vector(&p, family)?)
    } else if !oracle {
        // The library error explains that only the facet count is known.
        return Err(usage(f_vector(&p, family).unwrap_err()));
    } else {
        None
    };
    let lattice = if oracle {
        Some(lattice_of(&rep(&p, family)?)?.1.fvector)
    } else {
        None
    };
    let shown = closed
        .clone()
        .or_else(|| lattice.clone())
        .expect("one source is present");
    let total = shown.total_faces();
    let kalai = total >= BigInt::from(3).pow(p.d() as u32);
    let verdict = match (&closed, &lattice) {
        (Some(c), Some(l)) => Some(c == l),
        (None, Some(l)) => {
            // Only the facet (or, for the polar, vertex) count is available in closed form.
            let facets = facet_count(&p);
            let counted = match family {
                Family::Primal => l.counts.last(),
                Family::Dual => l.counts.first(),
            };
            Some(counted == Some(&facets))
        }
        _ => None,
    };
    let method = if oracle { "oracle" } else { "closed" };
    if json {
        let mut rec = Record::new(
            &p,
            family,
            "f_vector",
            shown.to_string(),
            shown.to_string(),
            method,
        );
        if let Some(v) = verdict {
            rec.verified = Some(v);
        }
        writeln!(out, "{}", rec.to_json())?;
    } else {
        writeln!(out, "{shown}")?;
        writeln!(
            out,
            "total faces: {total} (3^{} bound {})",
            p.d(),
            if kalai { "satisfied" } else { "violated" }
        )?;
        match verdict {
            Some(true) => writeln!(out, "VERIFIED")?,
            Some(false) => writeln!(
                out,
                "MISMATCH: closed {} vs oracle {}",
                closed.map_or("-".to_string(), |c| c.to_string()),
                lattice.map_or("-".to_string(), |l| l.to_string())
            )?,
            None => {}
        }
    }
    Ok(if verdict == Some(false) { 1 } else { 0 })
}

fn cmd_volume(out: &mut impl Write, json: bool, args: &MeasureArgs) -> anyhow::Result<u8> {
    let p = args.body.params()?;
    let family = args.body.family();
    let closed = match family {
        Family::Primal => polyball::volume::volume_rho(&p),
        Family::Dual => polyball::volume::volume_rho_star(&p),
    };
    match args.method {
        Method::Closed => emit_exact(
            out,
            json,
            &p,
            family,
            "volume",
            &SurdValue::rational(closed),
            "closed",
            None,
        ),
        Method::Triangulate => {
            let value = polyball::oracle::triangulated_volume(&rep(&p, family)?, 0)?;
            let code = emit_exact(out, json, &p, family, "volume", &value, "triangulate", None)?;
            Ok(if value == SurdValue::rational(closed) {
                code
            } else {
                1
            })
        }
        Method::Montecarlo => {
            let est = monte_carlo(&p, family, args.samples, args.seed)?;
            let exact = to_f64(&closed);
            let z = est.z_score(exact);
            if json {
                let mut rec = Record::new(
                    &p,
                    family,
                    "volume",
                    rational_string(&closed),
                    format!("{:.6}", est.estimate),
                    "montecarlo",
                );
                rec.stderr = Some(est.stderr);
                rec.verified = Some(z <= 4.0);
                writeln!(out, "{}", rec.to_json())?;
            } else {
                writeln!(out, "{:.6} ± {:.6}", est.estimate, est.stderr)?;
                writeln!(
                    out,
                    "closed form {} ({}), deviation {z:.2} standard errors, {} samples, seed {}",
                    rational_string(&closed),
                    decimal_string(&closed, 6),
                    est.samples,
                    args.seed
                )?;
            }
            Ok(if z <= 4.0 { 0 } else { 1 })
        }
    }
}

fn monte_carlo(
    p: &Params,
    family: Family,
    samples: u64,
    seed: u64,
) -> anyhow::Result<polyball::oracle::McEstimate> {
    let d = p.d();
    let est = match family {
        Family::Primal => {
            let (floor_k, frac_k) = (p.floor_k(), to_f64(&p.frac_k()));
            polyball::oracle::monte_carlo_volume(
                || {
                    let mut buf = Vec::with_capacity(d);
                    move |x: &[f64]| polyball::norms::in_rho_f64(x, floor_k, frac_k, &mut buf)
                },
                d,
                1.0,
                samples,
                seed,
            )?
        }
        Family::Dual => {
            let k = p.k_f64();
            polyball::oracle::monte_carlo_volume(
                || move |x: &[f64]| polyball::norms::in_rho_star_f64(x, k),
                d,
                1.0,
                samples,
                seed,
            )?
        }
    };
    Ok(est)
}

fn cmd_boundary(out: &mut impl Write, json: bool, args: &MeasureArgs) -> anyhow::Result<u8> {
    let p = args.body.params()?;
    let family = args.body.family();
    match (family, args.method) {
        (_, Method::Montecarlo) => Err(usage(
            "boundary volumes support --method closed or triangulate",
        )),
        (Family::Primal, Method::Closed) => {
            let v = polyball::volume::boundary_volume_rho(&p)?;
            let note = format!(
                "the published boundary formula gives {}; the corrected value is {} times larger",
                v.as_printed,
                p.d()
            );
            let code = emit_exact(
                out,
                json,
                &p,
                family,
                "boundary",
                &v.corrected,
                "closed",
                Some(&note),
            )?;
            if !json {
                writeln!(out, "printed formula: {}", v.as_printed)?;
                writeln!(out, "ERRATUM: {note}")?;
            }
            Ok(code)
        }
        (Family::Dual, Method::Closed) => {
            let v = polyball::volume::boundary_volume_rho_star(&p);
            emit_exact(out, json, &p, family, "boundary", &v, "closed", None)
        }
        (Family::Primal, Method::Triangulate) => {
            let value = suites::triangulated_boundary_rho(&p)?;
            emit_exact(
                out,
                json,
                &p,
                family,
                "boundary",
                &value,
                "triangulate",
                None,
            )
        }
        (Family::Dual, Method::Triangulate) => {
            let (cube, slanted) = suites::triangulated_boundary_rho_star(&p)?;
            emit_exact(
                out,
                json,
                &p,
                family,
                "boundary",
                &(cube + slanted),
                "triangulate",
                None,
            )
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn emit_exact(
    out: &mut impl Write,
    json: bool,
    p: &Params,
    family: Family,
    quantity: &str,
    value: &SurdValue,
    method: &str,
    erratum: Option<&str>,
) -> anyhow::Result<u8> {
    if json {
        let mut rec = Record::new(
            p,
            family,
            quantity,
            value.to_string(),
            value.decimal_string(DIGITS),
            method,
        );
        rec.erratum_note = erratum.map(str::to_string);
        writeln!(out, "{}", rec.to_json())?;
    } else {
        writeln!(out, "{value}")?;
    }
    Ok(0)
}

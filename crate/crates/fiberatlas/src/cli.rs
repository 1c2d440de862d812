//! Argument parsing and subcommand dispatch.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use fiberatlas_core::fiber::{build_fiber, build_fiber_with, check_exactness, check_exactness_refined, PolygonChain};
use fiberatlas_core::grid::Grid;
use fiberatlas_core::newton::{fiber_prediction, newton_polygon, BivarPolynomial};
use fiberatlas_core::numerics::{
    cauchy_riemann_check, cauchy_riemann_refined, critical_values, invariants_from, CrReport, Cycles, PeriodSample,
};
use fiberatlas_core::overlap::{
    enumerate_branched_extensions, enumerate_extensions, is_self_overlapping, MAX_ENUMERATION_CORNERS,
};
use fiberatlas_core::word::QuadraticWord;
use fiberatlas_core::{Complex64, Error};
use rayon::ThreadPool;
use serde_json::Value;

use crate::failure::exit;
use crate::{input, json, parallel, report, svg, Failure};

#[derive(Parser, Debug)]
#[command(
    name = "fiberatlas",
    version,
    about = "Surfaces from quadratic words, translation fibers, immersed-disk extensions and Newton-polygon fiber checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Output {
    /// Write the JSON report here instead of standard output.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Tolerances {
    /// Largest accepted discrete curl.
    #[arg(long, default_value_t = 1e-6, allow_hyphen_values = true)]
    tol_curl: f64,
    /// Relative distance below which a fiber value counts as critical.
    #[arg(long, default_value_t = 1e-8, allow_hyphen_values = true)]
    tol_root: f64,
    /// Largest accepted deviation of a cone angle from a multiple of 2pi.
    #[arg(long, default_value_t = 1e-9, allow_hyphen_values = true)]
    tol_angle: f64,
}

impl Tolerances {
    fn validated(&self) -> Result<&Self, Failure> {
        input::positive(self.tol_curl, "--tol-curl")?;
        input::positive(self.tol_root, "--tol-root")?;
        input::positive(self.tol_angle, "--tol-angle")?;
        Ok(self)
    }
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct PolyInput {
    /// Polynomial in z and w, e.g. "z^3 + w^2 + 1".
    #[arg(long, allow_hyphen_values = true)]
    expr: Option<String>,
    /// File holding the polynomial text (or {"expr": "..."}).
    #[arg(long, value_name = "FILE")]
    poly: Option<PathBuf>,
}

impl PolyInput {
    fn load(&self) -> Result<BivarPolynomial, Failure> {
        match (&self.expr, &self.poly) {
            (Some(e), _) => Ok(BivarPolynomial::parse(e)?),
            (None, Some(p)) => input::polynomial_file(p),
            (None, None) => Err(Failure::Invalid("one of --expr or --poly is required".into())),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Glue a quadratic word: (g, s), skeleton tree, matrices A, T, phi.
    AnalyzeWord {
        #[arg(long)]
        word: String,
        #[command(flatten)]
        out: Output,
    },
    /// Build the translation surface of a word and side vectors.
    BuildFiber {
        #[arg(long)]
        word: String,
        /// Side vectors z_1..z_n as "RE,IM;RE,IM;...".
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        /// Base point of the chain as "RE,IM".
        #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
        j0: String,
        /// Accept a non-embedded chain by searching for an immersed-disk extension.
        #[arg(long)]
        extend: bool,
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
        #[command(flatten)]
        tol: Tolerances,
        #[command(flatten)]
        out: Output,
    },
    /// Closedness of Re(T_k(J) dxi) on a sampled parameter grid.
    CheckExactness {
        #[arg(long)]
        word: String,
        #[arg(long, value_name = "FILE")]
        sample: PathBuf,
        /// The same maps sampled on the refined grid, for the convergence order.
        #[arg(long, value_name = "FILE")]
        fine: Option<PathBuf>,
        #[command(flatten)]
        tol: Tolerances,
        #[command(flatten)]
        out: Output,
    },
    /// Decide whether a closed polygon bounds an immersed disk and list extensions.
    CheckExtension {
        #[arg(long, value_name = "FILE")]
        polygon: PathBuf,
        /// Maximum number of certificates to list.
        #[arg(long, default_value_t = 64)]
        limit: usize,
        /// Also allow extensions branched at the corners.
        #[arg(long)]
        branched: bool,
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Newton polygon, admissibility, and predicted (g, s) and cone angles.
    AnalyzePoly {
        #[command(flatten)]
        poly: PolyInput,
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Monodromy-based (g, s) of a fiber against the Newton prediction.
    VerifyFiber {
        #[command(flatten)]
        poly: PolyInput,
        /// Fiber value as "RE,IM".
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
        /// Also tabulate periods on "x0,x1,y0,y1,nx,ny".
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        /// "auto" (pairs of consecutive branch points, w-degree 2) or a cycles file.
        #[arg(long, default_value = "auto")]
        cycles: String,
        #[command(flatten)]
        tol: Tolerances,
        #[command(flatten)]
        out: Output,
    },
    /// Periods of the time form over a grid of fiber values.
    Periods {
        #[command(flatten)]
        poly: PolyInput,
        /// Grid of fiber values "x0,x1,y0,y1,nx,ny".
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        /// "auto" (pairs of consecutive branch points, w-degree 2) or a cycles file.
        #[arg(long, default_value = "auto")]
        cycles: String,
        #[command(flatten)]
        tol: Tolerances,
        #[command(flatten)]
        out: Output,
    },
}

/// Files produced by a successful run, written only once everything is computed.
struct Products {
    report: Value,
    json: Option<PathBuf>,
    svg: Option<(PathBuf, String)>,
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => exit::OK,
                ErrorKind::InvalidSubcommand => exit::UNKNOWN_SUBCOMMAND,
                _ => exit::INVALID,
            };
        }
    };
    match execute(cli.command).and_then(write) {
        Ok(()) => exit::OK,
        Err(f) => {
            eprintln!("fiberatlas: {f}");
            f.exit_code()
        }
    }
}

fn write(p: Products) -> Result<(), Failure> {
    let text = json::render(&p.report);
    if let Some((path, body)) = &p.svg {
        atomic_write(path, body)?;
    }
    match &p.json {
        Some(path) => atomic_write(path, &text),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Invalid(format!("cannot write standard output: {e}"))),
    }
}

fn atomic_write(path: &Path, body: &str) -> Result<(), Failure> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, body).and_then(|_| fs::rename(&tmp, path)).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Failure::Invalid(format!("cannot write {}: {e}", path.display()))
    })
}

fn execute(cmd: Command) -> Result<Products, Failure> {
    match cmd {
        Command::AnalyzeWord { word, out } => {
            let w = QuadraticWord::parse(&word)?;
            Ok(Products { report: report::word(&w), json: out.json, svg: None })
        }
        Command::BuildFiber { word, z, j0, extend, svg: svg_path, tol, out } => {
            let tol = tol.validated()?;
            let w = QuadraticWord::parse(&word)?;
            let z = input::complex_list(&z, "--z")?;
            let j0 = input::complex(&j0, "--j0")?;
            let (fiber, cert) = match build_fiber(&w, &z, j0) {
                Ok(f) => (f, None),
                Err(Error::NeedsExtension) if extend => {
                    let poly = PolygonChain::new(&w, &z, j0)?.polygon()?;
                    let decision = is_self_overlapping(&poly)?;
                    let cert = decision.certificate.ok_or(Error::NotExtendable)?;
                    (build_fiber_with(&w, &z, j0, &cert)?, Some(cert))
                }
                Err(e) => return Err(e.into()),
            };
            let (_, deviation) = fiber.cone_orders();
            if deviation > tol.tol_angle {
                return Err(Failure::Numerical(format!(
                    "cone angles deviate from multiples of 2pi by {deviation:e} (> --tol-angle {:e})",
                    tol.tol_angle
                )));
            }
            let picture = svg_path.map(|p| (p, svg::fiber(&fiber)));
            Ok(Products { report: report::fiber(&w, &fiber, cert.as_ref()), json: out.json, svg: picture })
        }
        Command::CheckExactness { word, sample, fine, tol, out } => {
            let tol = tol.validated()?;
            let w = QuadraticWord::parse(&word)?;
            let coarse = input::sample(&input::read_json(&sample)?)?;
            let r = match fine {
                Some(path) => {
                    let fine = input::sample(&input::read_json(&path)?)?;
                    check_exactness_refined(&w, &coarse, &fine, tol.tol_curl)?
                }
                None => check_exactness(&w, &coarse, tol.tol_curl)?,
            };
            Ok(Products { report: report::exactness(&w, &r), json: out.json, svg: None })
        }
        Command::CheckExtension { polygon, limit, branched, svg: svg_path, out } => {
            let poly = input::polygon(&input::read_json(&polygon)?)?;
            let decision = is_self_overlapping(&poly)?;
            let (certs, complete) = if branched {
                (enumerate_branched_extensions(&poly, limit)?, true)
            } else if poly.len() <= MAX_ENUMERATION_CORNERS {
                (enumerate_extensions(&poly, limit)?, true)
            } else {
                (decision.certificate.iter().cloned().collect(), false)
            };
            let picture = svg_path.map(|p| (p, svg::extension(&poly, certs.first())));
            let complete = complete && certs.len() < limit;
            Ok(Products {
                report: report::extension(&decision, &certs, branched, complete),
                json: out.json,
                svg: picture,
            })
        }
        Command::AnalyzePoly { poly, svg: svg_path, out } => {
            let f = poly.load()?;
            let rep = report::polynomial(&f)?;
            let picture = match svg_path {
                Some(p) => Some((p, svg::newton(&newton_polygon(&f)?))),
                None => None,
            };
            Ok(Products { report: rep, json: out.json, svg: picture })
        }
        Command::VerifyFiber { poly, xi, grid, cycles, tol, out } => {
            let tol = tol.validated()?;
            let f = poly.load()?;
            let xi = input::complex(&xi, "--xi")?;
            let grid = grid.as_deref().map(input::grid).transpose()?;
            let cycles = cycles_arg(&cycles)?;
            let pool = parallel::pool()?;
            let critical = critical_values(&f)?;
            regular(&critical, &[xi], tol.tol_root)?;
            let topo = invariants_from(&f, parallel::monodromy(&pool, &f, xi)?)?;
            let prediction = fiber_prediction(&f).ok();
            let sample = match grid {
                Some(g) => Some(period_sample(&pool, &f, &g, &cycles, &critical, tol.tol_root)?),
                None => None,
            };
            let rep = report::verification(&critical, &topo, prediction.as_ref(), sample.as_ref().map(|(s, r)| (s, r)));
            Ok(Products { report: rep, json: out.json, svg: None })
        }
        Command::Periods { poly, grid, cycles, tol, out } => {
            let tol = tol.validated()?;
            let f = poly.load()?;
            let grid = input::grid(&grid)?;
            let cycles = cycles_arg(&cycles)?;
            let pool = parallel::pool()?;
            let critical = critical_values(&f)?;
            let (sample, cr) = period_sample(&pool, &f, &grid, &cycles, &critical, tol.tol_root)?;
            Ok(Products { report: report::periods(&critical, &sample, &cr), json: out.json, svg: None })
        }
    }
}

fn cycles_arg(arg: &str) -> Result<Cycles, Failure> {
    if arg == "auto" {
        Ok(Cycles::Auto)
    } else {
        Ok(Cycles::Explicit(input::cycles(&input::read_json(Path::new(arg))?)?))
    }
}

fn regular(critical: &[Complex64], values: &[Complex64], tol: f64) -> Result<(), Failure> {
    for &xi in values {
        if let Some(c) = critical.iter().find(|c| (*c - xi).norm() <= tol * c.norm().max(1.0)) {
            return Err(Error::CriticalValue(format!("{xi} is within --tol-root of the critical value {c}")).into());
        }
    }
    Ok(())
}

/// Periods on `grid`, with residuals there and convergence orders from the
/// refined grid.
fn period_sample(
    pool: &ThreadPool,
    f: &BivarPolynomial,
    grid: &Grid,
    cycles: &Cycles,
    critical: &[Complex64],
    tol_root: f64,
) -> Result<(PeriodSample, CrReport), Failure> {
    let fine_grid = grid.refined();
    regular(critical, &fine_grid.nodes(), tol_root)?;
    let coarse = parallel::periods(pool, f, grid, cycles)?;
    let fine = parallel::periods(pool, f, &fine_grid, cycles)?;
    let orders = cauchy_riemann_refined(&coarse, &fine)?;
    let mut cr = cauchy_riemann_check(&coarse)?;
    cr.cr_order = orders.cr_order;
    cr.closedness_order = orders.closedness_order;
    Ok((coarse, cr))
}

//! `ktile`: check k-fold translative tilings by centrally symmetric polygons.
//!
//! Exit codes: 0 verified or success, 1 a check failed, 2 bad input,
//! 3 internal error.

use std::fmt::Write as _;
use std::io::Write as _;
use std::panic::AssertUnwindSafe;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use ktile::bounds::{best_known_bound, general_bound, polygon_bound};
use ktile::coverage::monte_carlo_multiplicity;
use ktile::io::report::{resolve_k, ReportDocument};
use ktile::io::svg::{parse_window, render_svg, RenderMode};
use ktile::io::{fixture, parse_instance, Instance, ParseErrorKind};
use ktile::rational;
use ktile::search::{search_with_progress, BasisGrid, SearchSpec};

const OK: u8 = 0;
const FAILED: u8 = 1;
const INPUT: u8 = 2;
const INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(name = "ktile", version, about = "Exact checks for multiple translative tilings by centrally symmetric polygons")]
struct Cli {
    /// Worker threads for the parallel checks (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Emit JSON instead of key: value text.
    #[arg(long)]
    json: bool,
    /// Include wall-clock time in the report.
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check that the polygon and lattice in an instance file are valid.
    Validate { file: String },
    /// Decide whether the instance is a k-fold tiling.
    Verify {
        file: String,
        #[arg(long)]
        k: Option<u32>,
        #[command(flatten)]
        out: Output,
    },
    /// Check the local vertex invariants at every vertex orbit.
    Vertices {
        file: String,
        #[arg(long)]
        k: Option<u32>,
        #[command(flatten)]
        out: Output,
    },
    /// Lower bounds on the tiling multiplicity.
    Bound {
        file: Option<String>,
        #[arg(long, conflicts_with = "file")]
        m: Option<usize>,
    },
    /// Search a grid of lattices for k-fold tilings of the instance polygon.
    Search {
        file: String,
        #[arg(long)]
        k: u32,
        /// STEP:MAX for the basis parameters, e.g. 1/4:12.
        #[arg(long)]
        grid: String,
        /// Number of cosets r.
        #[arg(long, default_value_t = 1)]
        offsets: usize,
        /// Extra offsets range over (i/n)u1 + (j/n)u2.
        #[arg(long, default_value_t = 2)]
        offset_denominator: u32,
        /// Print progress to stderr.
        #[arg(long)]
        progress: bool,
        #[arg(long)]
        json: bool,
    },
    /// Draw the translates meeting a window as SVG.
    Render {
        file: String,
        /// xmin:xmax:ymin:ymax
        #[arg(long, allow_hyphen_values = true)]
        window: String,
        /// outlines or coverage-heat
        #[arg(long, default_value = "outlines")]
        mode: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Monte Carlo histogram of the covering multiplicity.
    Oracle {
        file: String,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

struct Failure {
    code: u8,
    message: String,
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: INPUT, message: message.into() }
}

/// Reads a file, or a shipped fixture when no such file exists.
fn read_source(name: &str) -> Result<String, Failure> {
    if Path::new(name).exists() {
        return std::fs::read_to_string(name).map_err(|e| input_error(format!("{name}: {e}")));
    }
    fixture(name).map(str::to_string).ok_or_else(|| input_error(format!("{name}: no such file or fixture")))
}

fn load(name: &str) -> Result<Instance, Failure> {
    let text = read_source(name)?;
    parse_instance(&text).map_err(|e| input_error(format!("{name}: {e}")))
}

fn emit(buf: &mut String, doc: &mut ReportDocument, out: &Output, start: Instant) {
    if out.timing {
        doc.timing_us = Some(start.elapsed().as_micros() as u64);
    }
    buf.push_str(&if out.json { doc.to_json() } else { doc.to_text() });
}

macro_rules! say {
    ($buf:expr, $($arg:tt)*) => {{
        let _ = writeln!($buf, $($arg)*);
    }};
}

fn run(cli: Cli, buf: &mut String) -> Result<u8, Failure> {
    let start = Instant::now();
    match cli.command {
        Command::Validate { file } => {
            let text = read_source(&file)?;
            match parse_instance(&text) {
                Ok(inst) => {
                    let density = inst.multiset.density(&inst.polygon);
                    say!(buf, "valid: true");
                    say!(buf, "m: {}", inst.polygon.m());
                    say!(buf, "area: {}", rational::format(&inst.polygon.area()));
                    say!(buf, "det: {}", rational::format(&inst.multiset.lattice().det()));
                    say!(buf, "cosets: {}", inst.multiset.coset_count());
                    say!(buf, "density: {}", rational::format(&density));
                    Ok(OK)
                }
                Err(e) if e.kind == ParseErrorKind::Invalid => {
                    say!(buf, "valid: false");
                    say!(buf, "error: {e}");
                    Ok(FAILED)
                }
                Err(e) => Err(input_error(format!("{file}: {e}"))),
            }
        }
        Command::Verify { file, k, out } => {
            let inst = load(&file)?;
            let mut doc = ReportDocument::new(&inst).with_coverage(&inst, k);
            emit(buf, &mut doc, &out, start);
            Ok(if doc.verified() { OK } else { FAILED })
        }
        Command::Vertices { file, k, out } => {
            let inst = load(&file)?;
            let (k, _) = resolve_k(&inst, k).map_err(|e| Failure { code: FAILED, message: e })?;
            let mut doc = ReportDocument::new(&inst).with_vertices(&inst, k);
            emit(buf, &mut doc, &out, start);
            let passed = doc.vertices.as_ref().is_some_and(|v| v.passed());
            Ok(if passed { OK } else { FAILED })
        }
        Command::Bound { file, m } => {
            let (m, polygon) = match (file, m) {
                (_, Some(m)) => (m, None),
                (Some(f), None) => {
                    let inst = load(&f)?;
                    (inst.polygon.m(), Some(inst.polygon))
                }
                (None, None) => return Err(input_error("bound needs --m M or an instance file")),
            };
            if m < 2 {
                return Err(input_error("m must be at least 2"));
            }
            say!(buf, "{}", best_known_bound(m));
            say!(buf, "m: {m}");
            say!(buf, "general_formula: {}", general_bound(m));
            if let Some(p) = polygon {
                say!(buf, "by_polygon: {}", polygon_bound(&p));
            }
            Ok(OK)
        }
        Command::Search { file, k, grid, offsets, offset_denominator, progress, json } => {
            let inst = load(&file)?;
            let grid = BasisGrid::parse(&grid).map_err(|e| input_error(e.to_string()))?;
            let mut spec = SearchSpec::lattice(inst.polygon, k, grid);
            spec.offsets = offsets.max(1);
            spec.offset_denominator = offset_denominator;
            let outcome = search_with_progress(&spec, |p| {
                if progress && (p.done % 100 == 0 || p.done == p.total) {
                    eprintln!("searched {}/{}", p.done, p.total);
                }
            })
            .map_err(|e| input_error(e.to_string()))?;
            if json {
                say!(buf, "{}", serde_json::to_string_pretty(&outcome).expect("outcome serializes"));
            } else {
                say!(buf, "k: {k}");
                say!(buf, "grid: {}", spec.grid);
                say!(buf, "det: {}", rational::format(&spec.determinant()));
                say!(buf, "candidates: {}", outcome.candidates);
                say!(buf, "screened_out: {}", outcome.screened_out);
                say!(buf, "found: {}", outcome.found.len());
                for f in &outcome.found {
                    say!(buf, "tiling: {}", f.multiset);
                }
            }
            Ok(OK)
        }
        Command::Render { file, window, mode, out } => {
            let inst = load(&file)?;
            let window = parse_window(&window).map_err(input_error)?;
            let mode: RenderMode = mode.parse().map_err(input_error)?;
            let svg = render_svg(&inst.polygon, &inst.multiset, &window, mode);
            match out {
                Some(path) => std::fs::write(&path, svg).map_err(|e| input_error(format!("{path}: {e}")))?,
                None => buf.push_str(&svg),
            }
            Ok(OK)
        }
        Command::Oracle { file, samples, seed } => {
            let inst = load(&file)?;
            let hist = monte_carlo_multiplicity(&inst.polygon, &inst.multiset, samples, seed);
            say!(buf, "samples: {samples}");
            say!(buf, "seed: {seed}");
            for (m, n) in &hist {
                say!(buf, "multiplicity {m}: {n}");
            }
            Ok(OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(INTERNAL);
        }
    }
    let mut buf = String::new();
    let result = std::panic::catch_unwind(AssertUnwindSafe(|| run(cli, &mut buf)));
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = stdout.write_all(buf.as_bytes()).and_then(|_| stdout.flush()) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: {e}");
            return ExitCode::from(INTERNAL);
        }
    }
    match result {
        Ok(Ok(code)) => ExitCode::from(code),
        Ok(Err(f)) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
        Err(_) => ExitCode::from(INTERNAL),
    }
}

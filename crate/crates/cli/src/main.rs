mod compute;
mod grid;
mod output;

use std::io::{self, Write};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use lcm_core::bounds_catalog::{check_info, checks, Catalog, CheckInfo, Grid, Params, PROBES};
use lcm_core::exact_arith::{Verdict, DEFAULT_PRECISION};
use lcm_core::prime_toolkit::{PrimeTable, DEFAULT_SIEVE_LIMIT};
use lcm_core::report::BoundReport;
use lcm_core::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use output::{Format, ReportSink};

const EXIT_FAILS: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INTERNAL: u8 = 3;
const EXIT_INCONCLUSIVE: u8 = 4;

#[derive(Parser)]
#[command(name = "lcmcheck", version, about = "Exact and certified checks of lcm bounds and identities")]
struct Cli {
    #[command(flatten)]
    cfg: RunConfig,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Clone, Debug)]
struct RunConfig {
    /// Largest integer covered by the prime sieve.
    #[arg(long, global = true, env = "LCMCHECK_SIEVE_LIMIT", default_value_t = DEFAULT_SIEVE_LIMIT)]
    sieve_limit: u64,
    /// Starting precision of certified comparisons, in bits.
    #[arg(long, global = true, env = "LCMCHECK_PRECISION_BITS", default_value_t = DEFAULT_PRECISION)]
    precision_bits: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Seed of `--sample` grid subsampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Stop after the first FAILS report.
    #[arg(long, global = true)]
    fail_fast: bool,
    /// Fill `elapsed_ms` (output is then no longer deterministic).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Exact objects: lcm <spec> <m> <n> | u-decomp <spec> <n> | row <spec> <n> |
    /// bezout <c> <k> | divisor <spec> <n> | M <r>
    Compute {
        object: String,
        #[arg(allow_hyphen_values = true)]
        args: Vec<String>,
    },
    /// Run a check over a grid, e.g. `verify hanson_3n --n 1..5000`.
    Verify {
        /// Check a seeded random subsample of this many grid points.
        #[arg(long)]
        sample: Option<usize>,
        check_id: String,
        /// `--name range` pairs: `1..5000`, `1,2,5`, or a sequence spec.
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        params: Vec<String>,
    },
    /// Ratio series of an asymptotic probe, e.g. `probe pnt --points 10,100`.
    Probe {
        probe_id: String,
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        args: Vec<String>,
    },
    /// Registered checks with their parameters.
    ListChecks,
    /// Registered probes with their default parameters.
    ListProbes,
}

enum Failure {
    Core(Error),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("lcmcheck: {e}");
            ExitCode::from(EXIT_INTERNAL)
        }
        Err(Failure::Core(e)) => {
            eprintln!("lcmcheck: {e}");
            match e {
                Error::Invariant(_) => ExitCode::from(EXIT_INTERNAL),
                _ => {
                    eprintln!("run `lcmcheck --help` for usage");
                    ExitCode::from(EXIT_USAGE)
                }
            }
        }
    }
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    let cfg = &cli.cfg;
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    match &cli.cmd {
        Command::Compute { object, args } => {
            for line in compute::compute(object, args)? {
                writeln!(out, "{line}")?;
            }
            out.flush()?;
            Ok(0)
        }
        Command::ListChecks => {
            output::checks(cfg.format, &checks(), &mut out)?;
            out.flush()?;
            Ok(0)
        }
        Command::ListProbes => {
            output::probes(cfg.format, PROBES, &mut out)?;
            out.flush()?;
            Ok(0)
        }
        Command::Probe { probe_id, args } => {
            let (points, params) = grid::probe_args(args)?;
            let cat = catalog(cfg)?;
            let series = cat.probe(probe_id, &params, &points)?;
            output::probe(cfg.format, &series, &mut out)?;
            out.flush()?;
            Ok(0)
        }
        Command::Verify {
            sample,
            check_id,
            params,
        } => {
            let info = check_info(check_id)?;
            let grid = grid::check_grid(&info, params)?;
            let cat = catalog(cfg)?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers(cfg))
                .build()
                .map_err(|e| Error::Invariant(format!("thread pool: {e}")))?;
            let mut sink = ReportSink::new(cfg.format, out);
            let tally = match sample {
                Some(k) => {
                    let points = sample_points(&cat, &info, &grid, *k, cfg.seed)?;
                    let reports = pool.install(|| {
                        points
                            .par_iter()
                            .map(|p| timed(cfg, 1, || cat.check(info.id, p).map(|r| vec![r])))
                            .collect::<Result<Vec<_>, Error>>()
                    })?;
                    emit(&mut sink, cfg, reports.into_iter().flatten(), &mut Tally::default())?
                }
                None => verify_scan(&cat, &pool, cfg, &info, &grid, &mut sink)?,
            };
            sink.flush()?;
            eprintln!("{tally}");
            Ok(tally.exit_code())
        }
    }
}

fn catalog(cfg: &RunConfig) -> Result<Catalog, Error> {
    if cfg.sieve_limit < 2 {
        return Err(Error::Parse("--sieve-limit must be at least 2".into()));
    }
    if cfg.precision_bits == 0 {
        return Err(Error::Parse("--precision-bits must be positive".into()));
    }
    Ok(Catalog::new(PrimeTable::new(cfg.sieve_limit), cfg.precision_bits))
}

fn workers(cfg: &RunConfig) -> usize {
    cfg.workers
        .filter(|&w| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Runs `f`; with `--timings`, stamps each report with its share of the wall time.
fn timed<F>(cfg: &RunConfig, points: usize, f: F) -> Result<Vec<BoundReport>, Error>
where
    F: FnOnce() -> Result<Vec<BoundReport>, Error>,
{
    let start = Instant::now();
    let mut out = f()?;
    if cfg.timings {
        let ms = start.elapsed().as_millis() as u64 / points.max(1) as u64;
        for r in &mut out {
            r.elapsed_ms = Some(ms);
        }
    }
    Ok(out)
}

#[derive(Default)]
struct Tally {
    holds: usize,
    fails: usize,
    inconclusive: usize,
    skipped: usize,
    stopped: bool,
}

impl Tally {
    fn add(&mut self, v: Verdict) {
        match v {
            Verdict::Holds => self.holds += 1,
            Verdict::Fails => self.fails += 1,
            Verdict::Inconclusive => self.inconclusive += 1,
            Verdict::Skipped => self.skipped += 1,
        }
    }

    fn exit_code(&self) -> u8 {
        if self.fails > 0 {
            EXIT_FAILS
        } else if self.inconclusive > 0 {
            EXIT_INCONCLUSIVE
        } else {
            0
        }
    }
}

impl std::fmt::Display for Tally {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} reports: {} HOLDS, {} FAILS, {} INCONCLUSIVE, {} SKIPPED",
            self.holds + self.fails + self.inconclusive + self.skipped,
            self.holds,
            self.fails,
            self.inconclusive,
            self.skipped
        )?;
        if self.stopped {
            write!(f, " (stopped at the first FAILS)")?;
        }
        Ok(())
    }
}

/// Writes reports in order; with `--fail-fast`, stops after the first FAILS.
fn emit<W: Write>(
    sink: &mut ReportSink<W>,
    cfg: &RunConfig,
    reports: impl IntoIterator<Item = BoundReport>,
    tally: &mut Tally,
) -> io::Result<Tally> {
    for r in reports {
        sink.write(&r)?;
        tally.add(r.verdict);
        if cfg.fail_fast && r.verdict == Verdict::Fails {
            tally.stopped = true;
            break;
        }
    }
    Ok(std::mem::take(tally))
}

/// Runs the scan in batches of tasks, streaming each batch in canonical order.
fn verify_scan<W: Write>(
    cat: &Catalog,
    pool: &rayon::ThreadPool,
    cfg: &RunConfig,
    info: &CheckInfo,
    grid: &Grid,
    sink: &mut ReportSink<W>,
) -> Result<Tally, Failure> {
    let tasks = cat.plan(info.id, grid)?;
    let batch = workers(cfg) * 2;
    let mut tally = Tally::default();
    for chunk in tasks.chunks(batch) {
        let parts = pool.install(|| {
            chunk
                .par_iter()
                .map(|t| timed(cfg, t.values.len(), || cat.run(t)))
                .collect::<Result<Vec<_>, Error>>()
        })?;
        tally = emit(sink, cfg, parts.into_iter().flatten(), &mut tally)?;
        sink.flush()?;
        if tally.stopped {
            break;
        }
    }
    Ok(tally)
}

/// A seeded sample of grid points in canonical scan order.
fn sample_points(cat: &Catalog, info: &CheckInfo, grid: &Grid, k: usize, seed: u64) -> Result<Vec<Params>, Error> {
    let tasks = cat.plan(info.id, grid)?;
    let total: usize = tasks.iter().map(|t| t.values.len()).sum();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = rand::seq::index::sample(&mut rng, total, k.min(total)).into_vec();
    picked.sort_unstable();
    let mut out = Vec::with_capacity(picked.len());
    let mut base = 0;
    let mut it = picked.into_iter().peekable();
    for t in &tasks {
        while let Some(&i) = it.peek() {
            if i >= base + t.values.len() {
                break;
            }
            let mut p = t.group.params().clone();
            p.insert(info.sweep.to_string(), t.values[i - base].to_string());
            out.push(p);
            it.next();
        }
        base += t.values.len();
    }
    Ok(out)
}

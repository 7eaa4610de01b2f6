//! `mutau`: batch checks of `mu / tau < 4/3` for plane curve singularities.
//!
//! Exit status: 0 when everything holds, 1 on a violation, mismatch or
//! oracle failure, 2 on usage or input errors.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use mutau::oracle::{
    build_sigma_table, milnor_with, tjurina_with, ColengthOptions, LocalPolynomial, OracleError, ScalarDomain,
    DEFAULT_MAX_ORDER, DEFAULT_SAMPLES,
};
use mutau::report::{
    bgm_report, crosscheck, delorme_report, lp_sweep, oracle_report, scan_bgm, scan_delorme, summarize,
    with_jobs, write_crosscheck_csv, write_csv, write_json, BoundReport, CrosscheckOptions, RouteError,
    ScanOptions, ScanSummary, Verdict,
};
use mutau::numtheory::gcd;
use mutau::sqh::{table_candidates, DelormeTier, SigmaTable};
use mutau::{BaseCaseProvider, Int};

#[derive(Parser)]
#[command(name = "mutau", version, about = "Check mu/tau < 4/3 for plane curve singularities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Invariants and verdict for one pair.
    Invariants(InvariantsArgs),
    /// Verdicts for every pair up to a bound.
    Scan(ScanArgs),
    /// Compare the Delorme and sigma routes, optionally against the oracle.
    Crosscheck(CrosscheckArgs),
    /// Sweep the closed-form family <2p, 2q, 2pq + d>.
    LpSweep(LpArgs),
    /// Milnor and Tjurina numbers of a polynomial file, or a tau_min estimate.
    Oracle(OracleArgs),
    /// Fill a sigma base-case table from the oracle.
    BuildTable(BuildTableArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RouteArg {
    Delorme,
    Bgm,
    Oracle,
}

#[derive(Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Args)]
struct OutputArgs {
    /// Write rows here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct InvariantsArgs {
    #[arg(long, num_args = 2, value_names = ["N", "M"], required = true)]
    pair: Vec<i64>,
    /// Defaults to delorme for coprime n < m and bgm otherwise.
    #[arg(long, value_enum)]
    route: Option<RouteArg>,
    /// Fall back to the kappa lower bound when a base value is missing.
    #[arg(long)]
    bound_only: bool,
    /// Base-case table for the bgm route.
    #[arg(long)]
    table: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    max: i64,
    #[arg(long, value_enum, default_value_t = RouteArg::Delorme)]
    route: RouteArg,
    #[arg(long)]
    bound_only: bool,
    #[arg(long)]
    table: Option<PathBuf>,
    /// Worker threads; 0 picks one per core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct CrosscheckArgs {
    #[arg(long)]
    max: i64,
    /// Also compare against the oracle where mu <= --max-mu.
    #[arg(long)]
    oracle: bool,
    #[arg(long, default_value_t = 150)]
    max_mu: i64,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Write all comparison rows as CSV here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct LpArgs {
    #[arg(long)]
    pmax: i64,
    #[arg(long)]
    qmax: i64,
    #[arg(long)]
    dmax: i64,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct OracleArgs {
    /// Polynomial file with lines `numerator denominator i j`.
    #[arg(conflicts_with = "pair", required_unless_present = "pair")]
    file: Option<PathBuf>,
    /// Estimate tau_min for initial term y^n - x^m instead.
    #[arg(long, num_args = 2, value_names = ["N", "M"])]
    pair: Option<Vec<i64>>,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_ORDER)]
    max_order: usize,
    /// Exact rational arithmetic instead of a prime field.
    #[arg(long)]
    rational: bool,
}

#[derive(Args)]
struct BuildTableArgs {
    /// Collect the table-only terminal pairs of all weights up to this.
    #[arg(long, required_unless_present = "pair")]
    max: Option<i64>,
    #[arg(long, default_value_t = 150)]
    max_mu: i64,
    /// Explicit pair `a b`; repeatable.
    #[arg(long, num_args = 2, value_names = ["A", "B"], action = clap::ArgAction::Append)]
    pair: Vec<i64>,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long)]
    out: PathBuf,
}

/// Failure carrying its exit status.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn input(error: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 2, error: error.into() }
}

fn runtime(error: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 1, error: error.into() }
}

fn route_failure(e: RouteError) -> Failure {
    match e {
        RouteError::Input(_) | RouteError::Oracle(OracleError::Invalid(_)) => input(e),
        RouteError::Oracle(_) => runtime(e),
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Invariants(a) => invariants(a),
        Command::Scan(a) => scan(a),
        Command::Crosscheck(a) => cross(a),
        Command::LpSweep(a) => lp(a),
        Command::Oracle(a) => oracle(a),
        Command::BuildTable(a) => build_table(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display())).map_err(input)?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(rows: &[BoundReport], summary: &ScanSummary, output: &OutputArgs) -> Result<(), Failure> {
    let mut w = open_out(&output.out)?;
    match output.format {
        Format::Csv => write_csv(rows, &mut w).map_err(runtime)?,
        Format::Json => write_json(rows, summary, &mut w).map_err(runtime)?,
    }
    w.flush().map_err(runtime)
}

fn status(summary: &ScanSummary) -> u8 {
    if summary.all_hold() {
        0
    } else {
        1
    }
}

fn load_provider(table: &Option<PathBuf>) -> Result<BaseCaseProvider, Failure> {
    let table = match table {
        Some(p) => SigmaTable::load(p)
            .with_context(|| format!("loading {}", p.display()))
            .map_err(input)?,
        None => SigmaTable::new(),
    };
    Ok(BaseCaseProvider::with_table(DelormeTier::Enabled, table))
}

fn invariants(a: InvariantsArgs) -> Outcome {
    let (n, m) = (Int::from(a.pair[0]), Int::from(a.pair[1]));
    let route = a.route.unwrap_or_else(|| {
        if a.pair[0] < a.pair[1] && gcd(&a.pair[0], &a.pair[1]) == 1 {
            RouteArg::Delorme
        } else {
            RouteArg::Bgm
        }
    });
    let row = match route {
        RouteArg::Delorme => delorme_report(&n, &m),
        RouteArg::Bgm => bgm_report(&n, &m, &load_provider(&a.table)?, a.bound_only),
        RouteArg::Oracle => oracle_report(&n, &m, a.samples, a.seed),
    }
    .map_err(route_failure)?;
    let summary = summarize(format!("pair ({n}, {m})"), std::slice::from_ref(&row));
    emit(std::slice::from_ref(&row), &summary, &a.output)?;
    if let Some(reason) = &row.reason {
        eprintln!("unavailable: {reason}");
    }
    Ok(if row.verdict == Verdict::Violated { 1 } else { 0 })
}

fn scan(a: ScanArgs) -> Outcome {
    if a.max < 4 {
        return Err(input(anyhow::anyhow!("--max must be at least 4")));
    }
    let opts = ScanOptions {
        jobs: a.jobs,
        bound_only: a.bound_only,
    };
    let (rows, summary) = match a.route {
        RouteArg::Delorme => scan_delorme(a.max, opts),
        RouteArg::Bgm => scan_bgm(a.max, &load_provider(&a.table)?, opts),
        RouteArg::Oracle => return Err(input(anyhow::anyhow!("scan supports the delorme and bgm routes"))),
    }
    .map_err(route_failure)?;
    emit(&rows, &summary, &a.output)?;
    eprint!("{summary}");
    Ok(status(&summary))
}

fn cross(a: CrosscheckArgs) -> Outcome {
    if a.max < 4 {
        return Err(input(anyhow::anyhow!("--max must be at least 4")));
    }
    let opts = CrosscheckOptions {
        oracle: a.oracle,
        samples: a.samples,
        seed: a.seed,
        max_mu: a.max_mu,
        jobs: a.jobs,
    };
    let (rows, summary) = crosscheck(a.max, opts);
    if let Some(path) = &a.out {
        let mut w = open_out(&Some(path.clone()))?;
        write_crosscheck_csv(&rows, &mut w).map_err(runtime)?;
        w.flush().map_err(runtime)?;
    }
    let mut out = io::stdout().lock();
    for row in &summary.mismatches {
        let show = |v: &Option<Int>| v.as_ref().map(|x| x.to_string()).unwrap_or_else(|| "-".into());
        let _ = writeln!(
            out,
            "MISMATCH ({}, {}) {}: {} != {} {}",
            row.n,
            row.m,
            row.check,
            show(&row.left),
            show(&row.right),
            row.note
        );
    }
    let _ = writeln!(
        out,
        "pairs <= {}: {} agree, {} skipped, {} mismatches",
        a.max,
        summary.agreed,
        summary.skipped,
        summary.mismatches.len()
    );
    Ok(if summary.all_agree() { 0 } else { 1 })
}

fn lp(a: LpArgs) -> Outcome {
    if a.pmax < 2 || a.qmax < 3 || a.dmax < 1 {
        return Err(input(anyhow::anyhow!("need --pmax >= 2, --qmax >= 3, --dmax >= 1")));
    }
    let (rows, summary) = lp_sweep(
        a.pmax,
        a.qmax,
        a.dmax,
        ScanOptions {
            jobs: a.jobs,
            bound_only: false,
        },
    )
    .map_err(route_failure)?;
    emit(&rows, &summary, &a.output)?;
    eprint!("{summary}");
    Ok(status(&summary))
}

fn oracle_failure(e: OracleError) -> Failure {
    match e {
        OracleError::Parse { .. } | OracleError::Io(_) | OracleError::Invalid(_) => input(e),
        _ => runtime(e),
    }
}

fn oracle(a: OracleArgs) -> Outcome {
    let domain = if a.rational {
        ScalarDomain::Rational
    } else {
        ScalarDomain::random_prime(a.seed)
    };
    if let Some(pair) = &a.pair {
        let (n, m) = (Int::from(pair[0]), Int::from(pair[1]));
        let row = oracle_report(&n, &m, a.samples, a.seed).map_err(route_failure)?;
        let tau = row.tau_min.as_ref().expect("oracle rows carry tau");
        println!("mu {}", row.mu);
        println!("tau_min_estimate {tau}");
        println!("ratio {}", row.ratio.as_ref().expect("oracle rows carry a ratio"));
        println!("verdict {}", row.verdict);
        println!("diagnostics {}", row.trace_digest);
        return Ok(if row.verdict == Verdict::Violated { 1 } else { 0 });
    }
    let path = a.file.as_deref().expect("clap requires a file or --pair");
    let f = read_poly(path)?;
    if !f.vanishes_at_origin() {
        return Err(input(anyhow::anyhow!("{} does not vanish at the origin", path.display())));
    }
    let opts = ColengthOptions::general(a.max_order, domain);
    let mu = milnor_with(&f, &opts).map_err(oracle_failure)?;
    let tau = tjurina_with(&f, &opts).map_err(oracle_failure)?;
    println!("f {f}");
    println!("mu {}", mu.value);
    println!("tau {}", tau.value);
    println!("mu_truncation_order {}", mu.truncation_order);
    println!("tau_truncation_order {}", tau.truncation_order);
    println!("domain {domain:?}");
    Ok(0)
}

fn read_poly(path: &Path) -> Result<LocalPolynomial, Failure> {
    let file = File::open(path)
        .with_context(|| format!("opening {}", path.display()))
        .map_err(input)?;
    LocalPolynomial::read_from(BufReader::new(file)).map_err(oracle_failure)
}

fn build_table(a: BuildTableArgs) -> Outcome {
    let mut pairs: Vec<(u32, u32)> = Vec::new();
    for chunk in a.pair.chunks(2) {
        let (x, y) = (chunk[0], chunk[1]);
        if x < 2 || y < 2 || x > u32::MAX as i64 || y > u32::MAX as i64 {
            return Err(input(anyhow::anyhow!("pair ({x}, {y}) needs entries >= 2")));
        }
        pairs.push((x.max(y) as u32, x.min(y) as u32));
    }
    if let Some(max) = a.max {
        let found = table_candidates(max, a.max_mu).map_err(input)?;
        pairs.extend(found.into_iter().map(|(x, y)| (x as u32, y as u32)));
    }
    pairs.sort_unstable();
    pairs.dedup();
    let domain = ScalarDomain::random_prime(a.seed);
    let table = with_jobs(a.jobs, || build_sigma_table::<Int>(&pairs, a.samples, a.seed, domain))
        .map_err(oracle_failure)?;
    let mut w = open_out(&Some(a.out.clone()))?;
    table.write_to(&mut w).map_err(runtime)?;
    w.flush().map_err(runtime)?;
    eprintln!("{} entries written to {}", table.len(), a.out.display());
    Ok(0)
}

//! Argument handling and subcommands behind the `perioscope` binary.

pub mod config;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use perioscope::dynamics::{summarize_mismatches, verify_family, CRange, CountSemantics, Family, MapParams};
use perioscope::modmath::{sieve_limit_from_env, sieve_primes};
use perioscope::polyfp::{
    count_roots_via_gcd, discriminant_int, distinct_degree_pattern, frobenius_power, resultant_int, second_iterate_int,
    second_iterate_poly, FpPoly, IntPoly,
};
use perioscope::report::{format_mismatch_table, OutputFormat, Report, ReportRow, RunMeta};
use perioscope::selfcheck::{self, Fault, INJECT_ENV};
use perioscope::stats::{avg_series, density_series, growth_point, DensityCondition, Selector, DEFAULT_SHORTCUT_THRESHOLD};

use config::{parse_c_values, StatsConfig, StatsKind, SweepConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_PARSE: i32 = 65;
pub const EXIT_OUTPUT: i32 = 66;

/// Tool-level errors, each with its own exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    Usage(String),
    Parse(String),
    Output(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Parse(_) => EXIT_PARSE,
            Failure::Output(_) => EXIT_OUTPUT,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Parse(m) | Failure::Output(m) => m,
        }
    }
}

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "perioscope", version, about = "Period-2 points of z^d + c over Z/pZ: sweeps, statistics, polynomial tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Brute-force every (p, c) in range and compare with the published counts.
    Verify(VerifyArgs),
    /// Averages and densities over primes for a list of c.
    Stats(StatsArgs),
    /// Second iterates, root counts, factor patterns, discriminants.
    #[command(subcommand)]
    Poly(PolyCommand),
    /// Run the built-in cross-oracle consistency suite.
    Selfcheck,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, default_value = "csv")]
    format: String,
    /// Report path; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Worker threads (defaults to all cores).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    family: String,
    #[arg(long)]
    p_min: Option<u64>,
    #[arg(long)]
    p_max: u64,
    /// `A..B`, `A..Kp`, `R%p:N`, each with optional `/S`, or a comma list.
    #[arg(long, default_value = "0..3p", allow_hyphen_values = true)]
    c: String,
    #[arg(long, default_value = "both")]
    semantics: String,
    #[arg(long, default_value_t = DEFAULT_SHORTCUT_THRESHOLD)]
    shortcut_threshold: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
#[group(id = "stat", required = true, multiple = false, args = ["avg", "density", "growth"])]
struct StatsArgs {
    #[arg(long)]
    avg: bool,
    #[arg(long)]
    density: bool,
    /// Odd-prime-divisor sums and the prime-sum reference along the c list.
    #[arg(long)]
    growth: bool,
    #[arg(long, default_value = "degree-p")]
    family: String,
    /// Comma list or `A..B[/S]`.
    #[arg(long)]
    c: String,
    #[arg(long, default_value = "divides")]
    selector: String,
    #[arg(long, default_value = "all-roots")]
    condition: String,
    #[arg(long, default_value = "root-count")]
    semantics: String,
    #[arg(long, default_value_t = DEFAULT_SHORTCUT_THRESHOLD)]
    shortcut_threshold: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Debug, Args)]
struct MapArgs {
    /// Polynomial text `c0 c1 ... @ p` instead of a map.
    #[arg(allow_hyphen_values = true)]
    poly: Option<String>,
    #[arg(long, conflicts_with = "d")]
    family: Option<String>,
    #[arg(long)]
    d: Option<u64>,
    #[arg(long, allow_negative_numbers = true)]
    c: Option<i64>,
    #[arg(long)]
    p: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum PolyCommand {
    /// Print φ²(x) − x over F_p.
    Build(MapArgs),
    /// Number of distinct roots in F_p.
    Roots(MapArgs),
    /// Degrees of the irreducible factors.
    Pattern(MapArgs),
    /// x^p mod f.
    Frobenius(MapArgs),
    /// Integer discriminant of `c0 c1 ...`, or of φ²(x) − x for `--d --c`.
    Disc {
        #[arg(allow_hyphen_values = true)]
        poly: Option<String>,
        #[arg(long)]
        d: Option<u32>,
        #[arg(long, allow_negative_numbers = true)]
        c: Option<i64>,
    },
    /// Integer resultant of two polynomials.
    Res {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(allow_hyphen_values = true)]
        g: String,
    },
}

fn emit(report: &Report, format: OutputFormat, path: &Option<PathBuf>, stdout: &mut dyn Write) -> Result<(), Failure> {
    let out_err = |e: &dyn std::fmt::Display| Failure::Output(e.to_string());
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| Failure::Output(format!("{}: {e}", p.display())))?;
            let mut w = BufWriter::new(file);
            report.write(format, &mut w).map_err(|e| out_err(&e))?;
            w.flush().map_err(|e| out_err(&e))
        }
        None => {
            report.write(format, &mut *stdout).map_err(|e| out_err(&e))?;
            stdout.flush().map_err(|e| out_err(&e))
        }
    }
}

fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, Failure> {
    match jobs {
        None => Ok(f()),
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build().map(|pool| pool.install(f)).map_err(usage),
    }
}

fn cmd_verify(a: VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let family = Family::from_str(&a.family).map_err(usage)?;
    let cfg = SweepConfig {
        family,
        p_min: a.p_min.unwrap_or(family.min_prime()),
        p_max: a.p_max,
        c_spec: CRange::from_str(&a.c).map_err(usage)?,
        semantics: a.semantics.parse().map_err(Failure::Usage)?,
        output_format: a.out.format.parse().map_err(usage)?,
        output_path: a.out.output,
        parallelism: a.out.jobs,
        shortcut_threshold: a.shortcut_threshold,
    };
    cfg.validate(sieve_limit_from_env().map_err(usage)?)?;
    let table = cfg.table()?;
    let reports = with_jobs(cfg.parallelism, || verify_family(cfg.family, cfg.p_min, cfg.p_max, &cfg.c_spec, &table))?.map_err(usage)?;
    let meta = RunMeta::new("verify", cfg.canonical());
    let selected = cfg.semantics.selected();
    let rows = reports.iter().flat_map(|r| selected.iter().map(|&s| ReportRow::from_count(r, s, &meta))).collect();
    emit(&Report::new(meta, rows), cfg.output_format, &cfg.output_path, out)?;

    let mut mismatched = false;
    for sem in CountSemantics::ALL {
        let classes = summarize_mismatches(&reports, sem);
        let rows: usize = classes.iter().map(|c| c.rows).sum();
        let _ = writeln!(err, "{} semantics: {rows} mismatching rows in {} classes", sem, classes.len());
        if !classes.is_empty() {
            let _ = write!(err, "{}", format_mismatch_table(&classes));
        }
        mismatched |= sem == CountSemantics::PeriodDividingTwo && rows > 0;
    }
    Ok(if mismatched { EXIT_MISMATCH } else { EXIT_OK })
}

fn cmd_stats(a: StatsArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let kind = if a.avg {
        StatsKind::Avg(Selector::from_str(&a.selector).map_err(usage)?)
    } else if a.density {
        StatsKind::Density(DensityCondition::from_str(&a.condition).map_err(usage)?)
    } else {
        StatsKind::Growth
    };
    let cfg = StatsConfig {
        kind,
        family: Family::from_str(&a.family).map_err(usage)?,
        c_values: parse_c_values(&a.c)?,
        c_spec: a.c.clone(),
        semantics: a.semantics.parse().map_err(Failure::Usage)?,
        output_format: a.out.format.parse().map_err(usage)?,
        output_path: a.out.output,
        parallelism: a.out.jobs,
        shortcut_threshold: a.shortcut_threshold,
    };
    cfg.validate(sieve_limit_from_env().map_err(usage)?)?;
    let table = sieve_primes(cfg.table_limit()).map_err(usage)?;
    let meta = RunMeta::new("stats", cfg.canonical());
    let opts = cfg.options();
    let rows = with_jobs(cfg.parallelism, || -> perioscope::Result<Vec<ReportRow>> {
        let mut rows = Vec::new();
        match cfg.kind {
            StatsKind::Growth => {
                for &c in &cfg.c_values {
                    rows.push(ReportRow::from_growth(&growth_point(c, &table)?, &meta));
                }
            }
            StatsKind::Avg(sel) => {
                for sem in cfg.semantics.selected() {
                    let pts = avg_series(cfg.family, sel, sem, &cfg.c_values, &table, opts)?;
                    rows.extend(pts.iter().map(|p| ReportRow::from_avg(p, &meta)));
                }
            }
            StatsKind::Density(cond) => {
                for sem in cfg.semantics.selected() {
                    let pts = density_series(cfg.family, cond, sem, &cfg.c_values, &table, opts)?;
                    rows.extend(pts.iter().map(|p| ReportRow::from_density(p, &meta)));
                }
            }
        }
        Ok(rows)
    })?
    .map_err(usage)?;
    emit(&Report::new(meta, rows), cfg.output_format, &cfg.output_path, out)?;
    Ok(EXIT_OK)
}

fn parse_fp(text: &str) -> Result<FpPoly, Failure> {
    FpPoly::from_str(text).map_err(|e| Failure::Parse(e.to_string()))
}

fn parse_int(text: &str) -> Result<IntPoly, Failure> {
    IntPoly::from_str(text).map_err(|e| Failure::Parse(e.to_string()))
}

/// The polynomial a `MapArgs` names: given text, or φ²(x) − x for the map.
fn target_poly(m: &MapArgs) -> Result<FpPoly, Failure> {
    if let Some(text) = &m.poly {
        if m.family.is_some() || m.d.is_some() || m.c.is_some() || m.p.is_some() {
            return Err(Failure::Usage("give either a polynomial or map flags, not both".into()));
        }
        return parse_fp(text);
    }
    let (c, p) = match (m.c, m.p) {
        (Some(c), Some(p)) => (c, p),
        _ => return Err(Failure::Usage("need a polynomial or --c and --p with --family or --d".into())),
    };
    let params = match (&m.family, m.d) {
        (Some(f), None) => MapParams::for_family(Family::from_str(f).map_err(usage)?, c, p),
        (None, Some(d)) => MapParams::new(d, c, p),
        _ => return Err(Failure::Usage("need exactly one of --family or --d".into())),
    }
    .map_err(usage)?;
    second_iterate_poly(&params).map_err(usage)
}

fn cmd_poly(cmd: PolyCommand, out: &mut dyn Write) -> Result<i32, Failure> {
    let line = match cmd {
        PolyCommand::Build(m) => target_poly(&m)?.to_string(),
        PolyCommand::Roots(m) => count_roots_via_gcd(&target_poly(&m)?).map_err(usage)?.to_string(),
        PolyCommand::Pattern(m) => distinct_degree_pattern(&target_poly(&m)?).map_err(usage)?.to_string(),
        PolyCommand::Frobenius(m) => frobenius_power(&target_poly(&m)?).map_err(usage)?.to_string(),
        PolyCommand::Disc { poly, d, c } => {
            let f = match (poly, d, c) {
                (Some(text), None, None) => parse_int(&text)?,
                (None, Some(d), Some(c)) => second_iterate_int(d, c),
                _ => return Err(Failure::Usage("give a polynomial or both --d and --c".into())),
            };
            discriminant_int(&f).map_err(usage)?.to_string()
        }
        PolyCommand::Res { f, g } => resultant_int(&parse_int(&f)?, &parse_int(&g)?).map_err(usage)?.to_string(),
    };
    writeln!(out, "{line}").map_err(|e| Failure::Output(e.to_string()))?;
    Ok(EXIT_OK)
}

fn cmd_selfcheck(out: &mut dyn Write) -> Result<i32, Failure> {
    let fault = match std::env::var(INJECT_ENV) {
        Ok(name) => Some(Fault::parse(&name).ok_or_else(|| Failure::Usage(format!("unknown {INJECT_ENV} value {name:?}")))?),
        Err(_) => None,
    };
    let report = selfcheck::run(fault);
    writeln!(out, "{report}").map_err(|e| Failure::Output(e.to_string()))?;
    Ok(if report.passed() { EXIT_OK } else { EXIT_CHECK_FAILED })
}

/// Parses `args` (program name first) and runs the command, returning the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{rendered}") } else { write!(out, "{rendered}") };
            return code;
        }
    };
    let result = match cli.command {
        Command::Verify(a) => cmd_verify(a, out, err),
        Command::Stats(a) => cmd_stats(a, out),
        Command::Poly(p) => cmd_poly(p, out),
        Command::Selfcheck => cmd_selfcheck(out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "perioscope: {}", f.message());
            f.exit_code()
        }
    }
}

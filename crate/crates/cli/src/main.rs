mod human;

use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use solomon_core::classgrp::{self, TowerDataRow};
use solomon_core::fields::{self, AbelianFieldSpec};
use solomon_core::padic::set_table_cache_dir;
use solomon_core::regulators::{self, UnitsRow};
use solomon_core::report::{self, Envelope, ReportLine, Verdict, VerificationReport};
use solomon_core::verify::{self, RunConfig};
use solomon_core::Error;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_UNDETERMINED: u8 = 3;

#[derive(Parser)]
#[command(name = "solomon-lab", version, about = "Solomon elements of real abelian fields and numerical checks of their properties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute sol_F and sol_{F,2} for one field.
    Sol(SolArgs),
    /// Run a verification check.
    Verify {
        #[arg(value_enum)]
        kind: Kind,
        #[command(flatten)]
        args: VerifyArgs,
    },
    /// Work with report files.
    Report {
        #[command(subcommand)]
        command: ReportCommand,
    },
}

#[derive(Subcommand)]
enum ReportCommand {
    /// Merge report files, deduplicating on (field, p, check).
    Merge {
        paths: Vec<PathBuf>,
        /// Write the merged reports here as JSON lines.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        human: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Lp,
    Annihilation,
    Index,
    Distribution,
    Greenberg,
}

#[derive(Args, Clone)]
struct FieldArgs {
    /// Conductor of the field.
    #[arg(long = "f")]
    conductor: Option<u64>,
    /// Generators of H, comma separated.
    #[arg(long = "H", value_delimiter = ',')]
    subgroup: Vec<u64>,
    /// Real quadratic field by its fundamental discriminant.
    #[arg(long)]
    disc: Option<i64>,
}

impl FieldArgs {
    fn field(&self) -> Result<Option<AbelianFieldSpec>, Error> {
        match (self.conductor, self.disc) {
            (Some(_), Some(_)) => Err(Error::InvalidField("give either --f/--H or --disc".into())),
            (Some(f), None) => AbelianFieldSpec::new(f, &self.subgroup).map(Some),
            (None, Some(d)) => AbelianFieldSpec::real_quadratic(d).map(Some),
            (None, None) => Ok(None),
        }
    }
}

#[derive(Args, Clone)]
struct PrecisionArgs {
    /// p-adic precision N.
    #[arg(long = "N", default_value_t = 16)]
    precision: u32,
    /// Guard digits withheld from comparisons.
    #[arg(long, default_value_t = 4)]
    guard: u32,
    /// Embedding exponent e: zeta_m goes to the e-th power of the Teichmuller root.
    #[arg(long, default_value_t = 1)]
    exponent: u64,
    /// Largest residue degree for the cyclotomic route.
    #[arg(long, default_value_t = solomon_core::cyclo::DEFAULT_DEGREE_CAP)]
    degree_cap: usize,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// JSON lines (default for verify).
    #[arg(long, conflicts_with = "human")]
    json: bool,
    /// Render a table.
    #[arg(long)]
    human: bool,
    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SolArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    p: u64,
    #[command(flatten)]
    precision: PrecisionArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Primes, comma separated.
    #[arg(long, value_delimiter = ',')]
    p: Vec<u64>,
    /// Iterate over a catalog, or over real quadratic fields with D <= --dmax.
    #[arg(long)]
    sweep: bool,
    #[arg(long, default_value_t = 2000)]
    dmax: i64,
    /// Field catalog: one `f=<f> H=<g1,g2,...>` per line.
    #[arg(long)]
    catalog: Option<PathBuf>,
    /// Tower data (greenberg) as JSON lines.
    #[arg(long)]
    data: Vec<PathBuf>,
    /// Unit log data (index, degree > 2) as JSON lines.
    #[arg(long)]
    units: Option<PathBuf>,
    /// Class number (index, degree > 2).
    #[arg(long)]
    class_number: Option<u64>,
    #[arg(long, default_value_t = 1)]
    kappa: u64,
    /// distribution: m, and the prime l.
    #[arg(long)]
    m: Option<u64>,
    #[arg(long)]
    l: Option<u64>,
    /// distribution sweep: all m <= mmax and primes l <= lmax.
    #[arg(long, default_value_t = 30)]
    mmax: u64,
    #[arg(long, default_value_t = 13)]
    lmax: u64,
    #[command(flatten)]
    precision: PrecisionArgs,
    #[command(flatten)]
    out: OutputArgs,
}

fn config(p: u64, prec: &PrecisionArgs, kappa: u64) -> RunConfig {
    RunConfig {
        p,
        precision: prec.precision,
        guard: prec.guard,
        exponent: prec.exponent,
        kappa,
        degree_cap: prec.degree_cap,
        ..RunConfig::default()
    }
}

struct Sink {
    out: Box<dyn Write>,
    human: bool,
    verdict: Option<Verdict>,
    rows: Vec<VerificationReport>,
}

impl Sink {
    fn new(out: &OutputArgs, human_default: bool) -> std::io::Result<Self> {
        let w: Box<dyn Write> = match &out.output {
            Some(path) => Box::new(std::io::BufWriter::new(std::fs::File::create(path)?)),
            None => Box::new(std::io::stdout().lock()),
        };
        Ok(Sink { out: w, human: out.human || (human_default && !out.json), verdict: None, rows: Vec::new() })
    }

    fn emit(&mut self, line: ReportLine) -> std::io::Result<()> {
        self.verdict = Some(self.verdict.map_or(line.report.verdict, |v| v.combine(line.report.verdict)));
        if self.human {
            self.rows.push(line.report);
        } else {
            writeln!(self.out, "{}", line.to_json())?;
            self.out.flush()?;
        }
        Ok(())
    }

    fn finish(mut self) -> std::io::Result<u8> {
        if self.human {
            write!(self.out, "{}", human::table(&self.rows))?;
        }
        self.out.flush()?;
        Ok(match self.verdict {
            None | Some(Verdict::Pass) => 0,
            Some(Verdict::Fail) => EXIT_FAIL,
            Some(Verdict::Undetermined) => EXIT_UNDETERMINED,
        })
    }
}

fn timed(f: impl FnOnce() -> VerificationReport) -> ReportLine {
    let start = Instant::now();
    let report = f();
    ReportLine { report, envelope: Envelope { elapsed_ms: start.elapsed().as_secs_f64() * 1e3 } }
}

type Job = Box<dyn Fn() -> VerificationReport + Send + Sync>;

/// Runs jobs on the worker pool in chunks, writing each chunk in order.
fn run_jobs(jobs: Vec<Job>, sink: &mut Sink) -> std::io::Result<()> {
    let chunk = rayon::current_num_threads().max(1) * 4;
    for batch in jobs.chunks(chunk) {
        let lines: Vec<ReportLine> = batch.par_iter().map(|job| timed(job)).collect();
        for line in lines {
            sink.emit(line)?;
        }
    }
    Ok(())
}

/// Report for an item that could not be computed, with the configuration echoed.
fn from_error(check: &str, field: impl ToString, cfg: &RunConfig, e: &Error) -> VerificationReport {
    let mut r = VerificationReport::from_error(check, field, cfg.p, e)
        .input("precision", cfg.precision)
        .input("guard", cfg.guard)
        .input("embedding_exponent", cfg.exponent);
    r.precision.requested = cfg.precision;
    r.precision.guard = cfg.guard;
    r
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn sweep_fields(args: &VerifyArgs) -> Result<Vec<Arc<AbelianFieldSpec>>, Error> {
    if let Some(f) = args.field.field()? {
        return Ok(vec![Arc::new(f)]);
    }
    if let Some(path) = &args.catalog {
        return Ok(fields::parse_catalog(&read(path)?)?.into_iter().map(Arc::new).collect());
    }
    if args.sweep {
        return Ok(fields::fundamental_discriminants(args.dmax)
            .into_iter()
            .map(|d| Arc::new(AbelianFieldSpec::real_quadratic(d).expect("fundamental")))
            .collect());
    }
    Err(Error::InvalidField("no field given: use --f/--H, --disc, --catalog or --sweep".into()))
}

fn field_jobs(
    args: &VerifyArgs,
    kind: Kind,
    units: &Arc<Vec<UnitsRow>>,
) -> Result<Vec<Job>, Error> {
    let fields = sweep_fields(args)?;
    let single = fields.len() == 1 && !args.sweep;
    let mut jobs: Vec<Job> = Vec::new();
    for &p in &args.p {
        let cfg = config(p, &args.precision, args.kappa);
        cfg.validate()?;
        for f in &fields {
            if single {
                fields::require_split(p, f)?;
            } else if !fields::is_totally_split(p, f).unwrap_or(false) {
                continue;
            }
            let (f, cfg, units, h) = (f.clone(), cfg.clone(), units.clone(), args.class_number);
            let check = match kind {
                Kind::Lp => "lp",
                Kind::Annihilation => "annihilation",
                Kind::Index => "index",
                _ => unreachable!(),
            };
            if single {
                // surface input errors directly rather than as a report
                match kind {
                    Kind::Annihilation if f.degree() != 2 => {
                        return Err(Error::InvalidField("annihilation needs a real quadratic field".into()))
                    }
                    Kind::Index if f.degree() != 2 && (h.is_none() || units.is_empty()) => {
                        return Err(Error::InvalidField("index for degree > 2 needs --class-number and --units".into()))
                    }
                    _ => {}
                }
            }
            jobs.push(Box::new(move || {
                let res = match kind {
                    Kind::Lp => verify::lp_report(&f, &cfg),
                    Kind::Annihilation => verify::annihilation_report(&f, &cfg),
                    _ => {
                        let row = units.iter().find(|u| u.field().map(|g| g == *f).unwrap_or(false));
                        verify::index_report(&f, &cfg, h, row)
                    }
                };
                res.unwrap_or_else(|e| from_error(check, f.as_ref(), &cfg, &e))
            }));
        }
    }
    Ok(jobs)
}

fn distribution_jobs(args: &VerifyArgs) -> Result<Vec<Job>, Error> {
    let mut cases = Vec::new();
    match (args.m, args.l) {
        (Some(m), Some(l)) => cases.push((m, l)),
        (None, None) if args.sweep => {
            for m in 1..=args.mmax {
                for l in (2..=args.lmax).filter(|&l| solomon_core::padic::arith::is_prime_u64(l)) {
                    cases.push((m, l));
                }
            }
        }
        _ => return Err(Error::InvalidField("distribution needs --m and --l, or --sweep".into())),
    }
    let single = cases.len() == 1;
    let mut jobs: Vec<Job> = Vec::new();
    for &p in &args.p {
        let cfg = config(p, &args.precision, args.kappa);
        cfg.validate()?;
        for &(m, l) in &cases {
            if (m * l) % p == 0 {
                if single {
                    return Err(Error::Ramified { ell: p, m: m * l });
                }
                continue;
            }
            if !solomon_core::padic::arith::is_prime_u64(l) {
                return Err(Error::InvalidField(format!("l = {l} is not prime")));
            }
            let cfg = cfg.clone();
            jobs.push(Box::new(move || {
                verify::distribution_report(m, l, &cfg).unwrap_or_else(|e| {
                    from_error("distribution", format!("m={m} l={l}"), &cfg, &e)
                })
            }));
        }
    }
    Ok(jobs)
}

fn greenberg_jobs(args: &VerifyArgs) -> Result<Vec<Job>, Error> {
    if args.data.is_empty() {
        return Err(Error::InvalidField("greenberg needs --data".into()));
    }
    let mut rows: Vec<TowerDataRow> = Vec::new();
    for path in &args.data {
        rows.extend(classgrp::parse_tower_data(&read(path)?)?);
    }
    let rows = Arc::new(rows);
    let wanted = args.field.field()?;
    let mut keys = BTreeSet::new();
    for r in rows.iter() {
        let f = r.field()?;
        if wanted.as_ref().map_or(true, |w| *w == f) && (args.p.is_empty() || args.p.contains(&r.p)) {
            keys.insert((f.conductor(), f.subgroup().to_vec(), r.p));
        }
    }
    let mut jobs: Vec<Job> = Vec::new();
    for (f, h, p) in keys {
        let field = Arc::new(AbelianFieldSpec::new(f, &h)?);
        let cfg = config(p, &args.precision, args.kappa);
        cfg.validate()?;
        let rows = rows.clone();
        jobs.push(Box::new(move || {
            verify::greenberg_report(&rows, &field, &cfg)
                .unwrap_or_else(|e| from_error("greenberg", field.as_ref(), &cfg, &e))
        }));
    }
    Ok(jobs)
}

fn cmd_verify(kind: Kind, args: &VerifyArgs) -> Result<u8, Error> {
    if args.p.is_empty() && kind != Kind::Greenberg {
        return Err(Error::InvalidField("--p is required".into()));
    }
    let units = Arc::new(match &args.units {
        Some(path) => {
            let p = *args.p.first().unwrap_or(&3);
            regulators::parse_units(&read(path)?, p)?
        }
        None => Vec::new(),
    });
    let jobs = match kind {
        Kind::Distribution => distribution_jobs(args)?,
        Kind::Greenberg => greenberg_jobs(args)?,
        _ => field_jobs(args, kind, &units)?,
    };
    let mut sink = Sink::new(&args.out, false)?;
    run_jobs(jobs, &mut sink)?;
    Ok(sink.finish()?)
}

fn cmd_sol(args: &SolArgs) -> Result<u8, Error> {
    let field = Arc::new(
        args.field.field()?.ok_or_else(|| Error::InvalidField("no field given: use --f/--H or --disc".into()))?,
    );
    let cfg = config(args.p, &args.precision, 1);
    fields::require_split(args.p, &field)?;
    let start = Instant::now();
    let report = verify::sol_report(&field, &cfg)?;
    let line = ReportLine { report, envelope: Envelope { elapsed_ms: start.elapsed().as_secs_f64() * 1e3 } };
    let mut sink = Sink::new(&args.out, true)?;
    sink.emit(line)?;
    Ok(sink.finish()?)
}

fn cmd_merge(paths: &[PathBuf], output: Option<&Path>, human: bool) -> Result<u8, Error> {
    let mut sets = Vec::new();
    for path in paths {
        sets.push(report::parse_report_lines(&read(path)?).map_err(|e| Error::Parse {
            line: match &e {
                Error::Parse { line, .. } => *line,
                _ => 0,
            },
            msg: format!("{}: {e}", path.display()),
        })?);
    }
    let (merged, summary) = report::merge(&sets);
    if let Some(path) = output {
        let mut text = String::new();
        for r in &merged {
            text.push_str(&serde_json::to_string(r).expect("serializable"));
            text.push('\n');
        }
        std::fs::write(path, text)?;
    }
    let mut out = std::io::stdout().lock();
    if human {
        write!(out, "{}", human::summary(&summary))?;
    } else {
        writeln!(out, "{}", serde_json::to_string(&summary).expect("serializable"))?;
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(dir) = std::env::var_os("SOLOMON_LAB_CACHE") {
        set_table_cache_dir(Some(PathBuf::from(dir)));
    }
    let result = match &cli.command {
        Command::Sol(args) => cmd_sol(args),
        Command::Verify { kind, args } => cmd_verify(*kind, args),
        Command::Report { command: ReportCommand::Merge { paths, output, human } } => {
            cmd_merge(paths, output.as_deref(), *human)
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

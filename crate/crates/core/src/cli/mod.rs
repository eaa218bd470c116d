//! Command-line driver.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::generators::{generate, FamilySpec, RNG_ALGORITHM};
use crate::ledger::suite::{default_corpus_specs, CorpusEntry, SuiteConfig, SuiteResult};
use crate::ledger::{resolve_filter, run_suite};
use crate::quantities::doubling::{d_upper, CandidateFamily, DoublingWitness};
use crate::rational::Rational;
use crate::record::CheckRecord;
use crate::search::{local_search, Objective, Quantity, SearchConfig};
use crate::set::RSet;
use crate::setfile::{read_set_file, write_set_file};
use crate::setops::{energy, EnergySpec, Operation};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Parser, Debug)]
#[command(name = "sumprod", version, about = "Exact sum-product experiments over finite sets of rationals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Headline sizes, energies and a doubling witness for one set.
    Stats(StatsArgs),
    /// Run the check registry over a corpus.
    Check(CheckArgs),
    /// Local search for sets with small normalized growth.
    Search(SearchArgs),
    /// Write a generated set to a file.
    Gen(GenArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    /// Report destination (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Include wall-clock timings in the report.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Args, Debug)]
pub struct StatsArgs {
    #[arg(long, conflicts_with = "family", required_unless_present = "family")]
    pub set: Option<PathBuf>,
    #[arg(long, value_parser = parse_family)]
    pub family: Option<FamilySpec>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    /// Corpus member as a family spec; repeatable.
    #[arg(long, value_parser = parse_family)]
    pub family: Vec<FamilySpec>,
    /// Corpus member read from a set file; repeatable.
    #[arg(long)]
    pub set: Vec<PathBuf>,
    /// Check ids or id prefixes ending in `.`, comma separated.
    #[arg(long)]
    pub registry: Vec<String>,
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    /// One of A+A, AA+A, A:A+A, AA+AA, A:A+A:A.
    #[arg(long, value_parser = parse_quantity)]
    pub objective: Quantity,
    /// Normalization exponent `e` in `quantity / |A|^e`.
    #[arg(long, default_value = "3/2", value_parser = parse_rational)]
    pub exponent: Rational,
    /// Initial set.
    #[arg(long = "family", alias = "init", value_parser = parse_family)]
    pub init: FamilySpec,
    #[arg(long, default_value_t = 100)]
    pub budget: usize,
    #[arg(long, default_value_t = 1)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Where to write the best set (defaults to `<out>.best.txt` when `--out` is set).
    #[arg(long)]
    pub best_out: Option<PathBuf>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: FamilySpec,
    /// Set file destination; the set is printed to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_family(s: &str) -> std::result::Result<FamilySpec, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_quantity(s: &str) -> std::result::Result<Quantity, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    if let Ok(r) = s.parse::<Rational>() {
        return Ok(r);
    }
    // accept short decimals such as 1.5
    let (int, frac) = s.split_once('.').ok_or_else(|| format!("cannot parse {s:?}"))?;
    let den = 10i64
        .checked_pow(frac.len() as u32)
        .ok_or_else(|| format!("too many digits in {s:?}"))?;
    let num: i64 = format!("{int}{frac}").parse().map_err(|_| format!("cannot parse {s:?}"))?;
    Rational::new(num, den).map_err(|e| e.to_string())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: String,
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<BTreeMap<String, f64>>,
}

impl Report {
    fn new(command: &str, inputs: Value, results: Value) -> Self {
        Report {
            schema_version: SCHEMA_VERSION.into(),
            command: command.into(),
            inputs,
            results,
            timing: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Per-set statistics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub set: RSet,
    /// Cardinalities keyed by expression; `null` where `0 ∈ A` makes a ratio undefined.
    pub sizes: BTreeMap<String, Option<usize>>,
    pub energies: BTreeMap<String, Option<String>>,
    pub d_upper: Option<DoublingWitness>,
}

pub fn compute_stats(a: &RSet) -> Result<Stats> {
    if a.is_empty() {
        return Err(Error::domain("statistics of the empty set"));
    }
    let zero_free = !a.contains_zero();
    let aa = a.times(a);
    let rr = if zero_free { Some(a.over(a)?) } else { None };
    let mut sizes = BTreeMap::new();
    sizes.insert("|A|".to_string(), Some(a.len()));
    sizes.insert("|A+A|".to_string(), Some(a.plus(a).len()));
    sizes.insert("|A-A|".to_string(), Some(a.minus(a).len()));
    sizes.insert("|AA|".to_string(), Some(aa.len()));
    sizes.insert("|AA+A|".to_string(), Some(aa.plus(a).len()));
    sizes.insert("|AA+AA|".to_string(), Some(aa.plus(&aa).len()));
    sizes.insert("|A:A|".to_string(), rr.as_ref().map(RSet::len));
    sizes.insert("|A:A+A|".to_string(), rr.as_ref().map(|r| r.plus(a).len()));
    sizes.insert("|A:A+A:A|".to_string(), rr.as_ref().map(|r| r.plus(r).len()));

    let mut energies = BTreeMap::new();
    let e = |op: Operation, alpha: Rational| -> Result<Option<String>> {
        if op == Operation::Multiplicative && !zero_free {
            return Ok(None);
        }
        Ok(Some(energy(a, &EnergySpec::new(op, alpha))?.to_string()))
    };
    energies.insert("E+_2".to_string(), e(Operation::Additive, 2.into())?);
    energies.insert("E+_3".to_string(), e(Operation::Additive, 3.into())?);
    energies.insert("E+_3/2".to_string(), e(Operation::Additive, Rational::new(3, 2)?)?);
    energies.insert("Ex_2".to_string(), e(Operation::Multiplicative, 2.into())?);
    energies.insert("Ex_3/2".to_string(), e(Operation::Multiplicative, Rational::new(3, 2)?)?);

    let d = if zero_free {
        Some(d_upper(a, &CandidateFamily::default())?)
    } else {
        None
    };
    Ok(Stats {
        set: a.clone(),
        sizes,
        energies,
        d_upper: d,
    })
}

/// Projection of records onto the CSV columns.
pub fn records_csv(records: &[CheckRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::resource(format!("csv: {e}"));
    w.write_record(["check_id", "variant", "kind", "lhs", "rhs_core", "ratio", "verdict", "inputs_digest"])
        .map_err(io)?;
    let num = |n: &crate::record::Num| match &n.exact {
        Some(r) => r.to_string(),
        None => format!("{:e}", n.value),
    };
    let tag = |v: Value| v.as_str().unwrap_or_default().to_string();
    for r in records {
        w.write_record([
            r.check_id.clone(),
            r.variant.clone().unwrap_or_default(),
            tag(serde_json::to_value(r.kind).expect("enum")),
            num(&r.lhs),
            num(&r.rhs_core),
            num(&r.ratio),
            tag(serde_json::to_value(r.verdict).expect("enum")),
            r.inputs_digest.clone(),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::resource(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

/// What a command produced: text to emit and the process status.
pub struct Outcome {
    pub text: String,
    pub out: Option<PathBuf>,
    pub status: u8,
}

struct Timer {
    on: bool,
    start: Instant,
    phases: BTreeMap<String, f64>,
}

impl Timer {
    fn new(on: bool) -> Self {
        Timer { on, start: Instant::now(), phases: BTreeMap::new() }
    }

    fn lap(&mut self, phase: &str) {
        let now = Instant::now();
        self.phases
            .insert(phase.to_string(), (now - self.start).as_secs_f64());
        self.start = now;
    }

    fn finish(self) -> Option<BTreeMap<String, f64>> {
        self.on.then_some(self.phases)
    }
}

fn load(set: &Option<PathBuf>, family: &Option<FamilySpec>) -> Result<(Value, RSet)> {
    match (set, family) {
        (Some(p), _) => Ok((json!({ "set": p }), read_set_file(p)?)),
        (None, Some(f)) => Ok((json!({ "family": f.to_string() }), generate(f)?)),
        (None, None) => Err(Error::Parse("either --set or --family is required".into())),
    }
}

pub fn cmd_stats(args: &StatsArgs) -> Result<Outcome> {
    let mut t = Timer::new(args.output.timing);
    let (inputs, a) = load(&args.set, &args.family)?;
    t.lap("load");
    let stats = compute_stats(&a)?;
    t.lap("compute");
    let mut report = Report::new("stats", inputs, serde_json::to_value(stats).expect("stats serialize"));
    report.timing = t.finish();
    Ok(Outcome { text: report.to_json(), out: args.output.out.clone(), status: 0 })
}

pub fn cmd_check(args: &CheckArgs) -> Result<Outcome> {
    let mut t = Timer::new(args.output.timing);
    let mut corpus = Vec::new();
    for f in &args.family {
        corpus.push(CorpusEntry::from_spec(f)?);
    }
    for p in &args.set {
        corpus.push(CorpusEntry::new(format!("file,{}", p.display()), read_set_file(p)?));
    }
    let corpus_tag = if corpus.is_empty() {
        for f in default_corpus_specs() {
            corpus.push(CorpusEntry::from_spec(&f)?);
        }
        "default".to_string()
    } else {
        corpus.iter().map(|c| c.tag.as_str()).collect::<Vec<_>>().join(";")
    };
    let registry = resolve_filter(&args.registry)?;
    t.lap("load");
    let config = SuiteConfig { jobs: args.jobs, ..SuiteConfig::default() };
    let result: SuiteResult = run_suite(&corpus_tag, &corpus, &registry, &config)?;
    t.lap("suite");
    let status = if result.exact_failures() > 0 { 1 } else { 0 };
    let text = match args.format {
        Format::Csv => records_csv(&result.records)?,
        Format::Json => {
            let inputs = json!({
                "corpus": corpus.iter().map(|c| json!({"tag": c.tag, "set": c.set})).collect::<Vec<_>>(),
                "registry": registry,
                "config": config,
                "rng": RNG_ALGORITHM,
            });
            let mut report =
                Report::new("check", inputs, serde_json::to_value(&result).expect("suite serializes"));
            report.timing = t.finish();
            report.to_json()
        }
    };
    Ok(Outcome { text, out: args.output.out.clone(), status })
}

pub fn cmd_search(args: &SearchArgs) -> Result<Outcome> {
    let mut t = Timer::new(args.output.timing);
    let objective = Objective::new(args.objective, args.exponent.clone())?;
    let mut cfg = SearchConfig::new(objective, args.init.clone(), args.budget, args.seed);
    cfg.restarts = args.restarts;
    let result = if args.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(args.jobs)
            .build()
            .map_err(|e| Error::resource(format!("thread pool: {e}")))?
            .install(|| local_search(&cfg))?
    } else {
        local_search(&cfg)?
    };
    t.lap("search");
    let best_out = args.best_out.clone().or_else(|| {
        args.output
            .out
            .as_ref()
            .map(|p| p.with_extension("best.txt"))
    });
    if let Some(p) = &best_out {
        write_set_file(p, &result.best_set)?;
    }
    let inputs = json!({
        "objective": args.objective.name(),
        "exponent": args.exponent,
        "init": args.init.to_string(),
        "budget": args.budget,
        "restarts": args.restarts,
        "seed": args.seed,
    });
    let mut report = Report::new("search", inputs, serde_json::to_value(&result).expect("search serializes"));
    report.timing = t.finish();
    Ok(Outcome { text: report.to_json(), out: args.output.out.clone(), status: 0 })
}

pub fn cmd_gen(args: &GenArgs) -> Result<Outcome> {
    let set = generate(&args.family)?;
    match &args.out {
        Some(p) => {
            write_set_file(p, &set)?;
            let report = Report::new(
                "gen",
                json!({ "family": args.family.to_string(), "rng": RNG_ALGORITHM }),
                json!({ "path": p, "size": set.len() }),
            );
            Ok(Outcome { text: report.to_json(), out: None, status: 0 })
        }
        None => Ok(Outcome { text: set.to_file_string(), out: None, status: 0 }),
    }
}

pub fn dispatch(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Stats(a) => cmd_stats(a),
        Command::Check(a) => cmd_check(a),
        Command::Search(a) => cmd_search(a),
        Command::Gen(a) => cmd_gen(a),
    }
}

fn command_name(cli: &Cli) -> &'static str {
    match cli.command {
        Command::Stats(_) => "stats",
        Command::Check(_) => "check",
        Command::Search(_) => "search",
        Command::Gen(_) => "gen",
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|source| Error::Io { path: p.to_path_buf(), source }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| Error::Io { path: PathBuf::from("<stdout>"), source })
        }
    }
}

/// Entry point: exit status 0 on success, 1 when an exact check failed,
/// 2 on errors (with a JSON error object on stdout).
pub fn main_entry() -> ExitCode {
    let cli = Cli::parse();
    let result = dispatch(&cli).and_then(|o| {
        emit(&o.text, o.out.as_deref())?;
        Ok(o.status)
    });
    match result {
        Ok(status) => ExitCode::from(status),
        Err(e) => {
            eprintln!("error: {e}");
            let body = json!({
                "schema_version": SCHEMA_VERSION,
                "command": command_name(&cli),
                "error": e.to_string(),
            });
            println!("{}", serde_json::to_string_pretty(&body).expect("error serializes"));
            ExitCode::from(2)
        }
    }
}

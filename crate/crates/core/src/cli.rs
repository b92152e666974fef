//! The `lrc` command line: construct, verify, bounds and simulate.
//!
//! Exit status is 0 on success, 1 when a verification fails and 2 for usage
//! or input errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bounds::{length_bound_eq5, singleton_like, BoundsReport, Classification};
use crate::codec::{min_dependent_columns, min_distance, Distance, LrcCode};
use crate::construct::{
    assemble_parity_check, guaranteed_pairs, replay, run_on_spread, verify_conditions, ConditionReport, Construction,
    Policy,
};
use crate::error::Error;
use crate::field::{prime_power, Field, MAX_ORDER};
use crate::io::{write_json, DeclaredParams, MatrixFile, RunConfig, SequenceFile, SpreadFile, TraceFile};
use crate::matrix::Matrix;
use crate::sim::{simulate_repairs, FailureModel};
use crate::spread::Spread;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Distance search cap for constructed codes, which never exceed 8.
pub const CONSTRUCT_DISTANCE_CAP: usize = 8;

#[derive(Debug, Parser)]
#[command(name = "lrc", version, about = "Distance-7, locality-2 locally repairable codes from spreads")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the greedy construction and check the resulting code.
    Construct(ConstructArgs),
    /// Recompute the parameters of a parity-check matrix file.
    Verify(VerifyArgs),
    /// Evaluate the bounds for one parameter set or a grid.
    Bounds(BoundsArgs),
    /// Monte Carlo repair simulation for a parity-check matrix file.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyKind {
    Lex,
    Seeded,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long, required_unless_present = "replay")]
    pub q: Option<u32>,
    /// Coefficients of the field modulus, constant term first.
    #[arg(long, value_delimiter = ',')]
    pub modulus: Option<Vec<u32>>,
    /// Defaults to `seeded` when a seed is given, else `lex`.
    #[arg(long, value_enum)]
    pub policy: Option<PolicyKind>,
    /// A seed, or an inclusive range `a..b` to sweep.
    #[arg(long, value_parser = parse_seeds)]
    pub seed: Option<RangeInclusive<u64>>,
    /// Re-run a trace file instead of choosing afresh.
    #[arg(long, conflicts_with_all = ["q", "modulus", "policy", "seed"])]
    pub replay: Option<PathBuf>,
    /// Spread file to replay against; defaults to the spread of the trace's field.
    #[arg(long, requires = "replay")]
    pub spread: Option<PathBuf>,
    /// Directory for sequence, trace, spread, matrix and bounds files.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Matrix JSON file.
    pub matrix: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Values are a number, a range `a..b`, or a comma list of either.
    #[arg(long)]
    pub q: String,
    /// Without `--n`, the grid uses the longest multiple of r+1 within the
    /// length bound.
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long)]
    pub k: Option<String>,
    #[arg(long)]
    pub d: Option<String>,
    #[arg(long, default_value = "2")]
    pub r: String,
    /// Output file; CSV output also gets a `.run.json` sidecar.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// `csv` or any multi-valued parameter selects grid mode.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Matrix JSON file.
    pub matrix: PathBuf,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    /// `single-uniform`, `multi-uniform(F)` or `group-burst`.
    #[arg(long, default_value = "single-uniform")]
    pub failure_model: FailureModel,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Directory for `summary.json` and `trials.jsonl`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

fn parse_seeds(s: &str) -> Result<RangeInclusive<u64>, String> {
    let bad = |_| format!("invalid seed {s:?}");
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b): (u64, u64) = (a.trim().parse().map_err(bad)?, b.trim().parse().map_err(bad)?);
            if a > b {
                return Err(format!("empty seed range {s:?}"));
            }
            Ok(a..=b)
        }
        None => {
            let a = s.trim().parse().map_err(bad)?;
            Ok(a..=a)
        }
    }
}

/// Parses `4`, `4..9` or `4,5,7..9` into the listed values, in order.
pub fn parse_list(s: &str) -> Result<Vec<u64>, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        let bad = |_| format!("invalid value {part:?}");
        match part.split_once("..") {
            Some((a, b)) => {
                let (a, b): (u64, u64) = (a.trim().parse().map_err(bad)?, b.trim().parse().map_err(bad)?);
                if a > b {
                    return Err(format!("empty range {part:?}"));
                }
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(bad)?),
        }
    }
    Ok(out)
}

enum Failure {
    Usage(String),
    Verify(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = std::result::Result<(), Failure>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Construct(a) => cmd_construct(a, out, err),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Bounds(a) => cmd_bounds(a, out),
        Command::Simulate(a) => cmd_simulate(a, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Verify(msg)) => {
            let _ = writeln!(err, "verification failed: {msg}");
            EXIT_VERIFY
        }
    }
}

fn field_for(q: u32, modulus: Option<&[u32]>) -> Result<Field, Error> {
    let (p, e) = prime_power(q as u64).ok_or(Error::NotPrimePower(q as u64))?;
    Field::new(p, e, modulus)
}

/// One construction run with every check applied.
#[derive(Debug, Clone)]
pub struct BuiltCode {
    pub construction: Construction,
    pub conditions: ConditionReport,
    /// Absent when there are fewer than three pairs or a condition fails.
    pub matrix: Option<Matrix>,
    pub code: Option<LrcCode>,
    pub distance: Option<Distance>,
    pub report: Option<BoundsReport>,
}

impl BuiltCode {
    pub fn pairs(&self) -> usize {
        self.construction.len()
    }

    /// Problems that make the run a verification failure.
    pub fn problems(&self) -> Vec<String> {
        let mut v = Vec::new();
        if !self.conditions.passed() {
            v.push(format!("conditions violated: {:?}", self.conditions));
        }
        if let (Some(code), Some(d)) = (&self.code, self.distance) {
            let l = self.pairs();
            if code.dimension() != 2 * l - 4 {
                v.push(format!("dimension {} != 2L - 4 = {}", code.dimension(), 2 * l - 4));
            }
            if !matches!(d, Distance::Exact(7) | Distance::Exact(8)) {
                v.push(format!("distance {d} outside {{7, 8}}"));
            }
            if let Some(r) = &self.report {
                if r.eq3_attained != Some(true) {
                    v.push("dimension bound not attained".into());
                }
            }
        }
        v
    }
}

/// Runs the construction on `spread` and, when at least three pairs come out,
/// assembles and measures the code.
pub fn build_code(spread: &Spread, policy: Policy) -> Result<BuiltCode, Error> {
    measure(run_on_spread(spread, policy))
}

/// Checks the conditions of a finished construction and, when at least three
/// pairs came out, assembles and measures the code.
pub fn measure(construction: Construction) -> Result<BuiltCode, Error> {
    let conditions = verify_conditions(&construction.sequence);
    let mut built = BuiltCode { construction, conditions, matrix: None, code: None, distance: None, report: None };
    if built.pairs() < 3 || !built.conditions.passed() {
        return Ok(built);
    }
    let h = assemble_parity_check(&built.construction.sequence)?;
    let code = LrcCode::from_parity_check(h.clone(), None)?;
    let d = min_distance(&code, CONSTRUCT_DISTANCE_CAP);
    let q = code.field().order() as u64;
    let report = BoundsReport::compute(
        code.len() as u64,
        Some(code.dimension() as u64),
        d.exact().map(|d| d as u64),
        code.locality() as u64,
        q,
    )?;
    built.matrix = Some(h);
    built.code = Some(code);
    built.distance = Some(d);
    built.report = Some(report);
    Ok(built)
}

#[derive(Debug, Serialize)]
struct RunSummary {
    seed: Option<u64>,
    pairs: usize,
    n: Option<usize>,
    k: Option<usize>,
    d: Option<Distance>,
    r: Option<usize>,
    classification: Option<Classification>,
    attains_dimension_bound: Option<bool>,
    conditions_passed: bool,
    problems: Vec<String>,
}

fn summarize(seed: Option<u64>, b: &BuiltCode) -> RunSummary {
    RunSummary {
        seed,
        pairs: b.pairs(),
        n: b.code.as_ref().map(|c| c.len()),
        k: b.code.as_ref().map(|c| c.dimension()),
        d: b.distance,
        r: b.code.as_ref().map(|c| c.locality()),
        classification: b.report.as_ref().and_then(|r| r.classification),
        attains_dimension_bound: b.report.as_ref().and_then(|r| r.eq3_attained),
        conditions_passed: b.conditions.passed(),
        problems: b.problems(),
    }
}

fn params_line(s: &RunSummary, q: u32) -> String {
    match (s.n, s.k, s.d, s.r) {
        (Some(n), Some(k), Some(d), Some(r)) => format!("({n}, {k}, {d}, {r})_{q}"),
        _ => "no code (fewer than 3 pairs)".into(),
    }
}

fn replay_run(trace_path: &Path, spread_path: Option<&Path>) -> Result<(Field, Spread, BuiltCode), Failure> {
    let tf: TraceFile = crate::io::read_json(trace_path)?;
    let field = tf.field()?;
    let spread = match spread_path {
        Some(p) => crate::io::read_json::<SpreadFile>(p)?.to_spread()?,
        None => Spread::build(&field),
    };
    if spread.field() != &field {
        return Err(Failure::Usage("spread and trace are over different fields".into()));
    }
    let sequence = replay(&spread, &tf.trace).map_err(|e| Failure::Verify(e.to_string()))?;
    let built = measure(Construction { sequence, trace: tf.trace, warnings: Vec::new() })?;
    Ok((field, spread, built))
}

fn cmd_construct(a: &ConstructArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let (field, spread, kind, runs) = match &a.replay {
        Some(path) => {
            let (field, spread, built) = replay_run(path, a.spread.as_deref())?;
            let (kind, seed) = match built.construction.trace.policy {
                Policy::Lex => (PolicyKind::Lex, None),
                Policy::Seeded(s) => (PolicyKind::Seeded, Some(s)),
            };
            (field, spread, kind, vec![(seed, built)])
        }
        None => {
            let q = a.q.expect("clap requires --q without --replay");
            let field = field_for(q, a.modulus.as_deref())?;
            let kind = a.policy.unwrap_or(if a.seed.is_some() { PolicyKind::Seeded } else { PolicyKind::Lex });
            let policies: Vec<(Option<u64>, Policy)> = match kind {
                PolicyKind::Lex => vec![(None, Policy::Lex)],
                PolicyKind::Seeded => a.seed.clone().unwrap_or(0..=0).map(|s| (Some(s), Policy::Seeded(s))).collect(),
            };
            let spread = Spread::build(&field);
            let mut runs = Vec::new();
            for &(seed, policy) in &policies {
                runs.push((seed, build_code(&spread, policy)?));
            }
            (field, spread, kind, runs)
        }
    };
    for w in &runs[0].1.construction.warnings {
        writeln!(err, "warning: {w}")?;
    }
    // Longest sequence wins; ties go to the earliest seed.
    let best = (0..runs.len()).fold(0, |b, i| if runs[i].1.pairs() > runs[b].1.pairs() { i } else { b });
    let summaries: Vec<RunSummary> = runs.iter().map(|(s, b)| summarize(*s, b)).collect();
    let run = RunConfig {
        command: "construct".into(),
        q: Some(field.order()),
        input: a.replay.as_ref().map(|p| p.display().to_string()),
        modulus: Some(field.modulus().to_vec()),
        policy: Some(format!("{kind:?}").to_lowercase()),
        seed: runs[best].0,
        output: a.out.as_ref().map(|p| p.display().to_string()),
        format: Some(format!("{:?}", a.format).to_lowercase()),
    };
    if let Some(dir) = &a.out {
        write_construct_outputs(dir, &spread, &runs[best].1, &run)?;
    }

    let q = field.order();
    match a.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                run: &'a RunConfig,
                guaranteed_pairs: u64,
                best: usize,
                runs: &'a [RunSummary],
            }
            let o = Out { run: &run, guaranteed_pairs: guaranteed_pairs(q as u64), best, runs: &summaries };
            writeln!(out, "{}", serde_json::to_string_pretty(&o).expect("serializable"))?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["seed", "pairs", "n", "k", "d", "r", "classification", "attains_dimension_bound"])
                .and_then(|_| {
                    summaries.iter().try_for_each(|s| {
                        w.write_record([
                            s.seed.map_or(String::new(), |x| x.to_string()),
                            s.pairs.to_string(),
                            s.n.map_or(String::new(), |x| x.to_string()),
                            s.k.map_or(String::new(), |x| x.to_string()),
                            s.d.map_or(String::new(), |x| x.to_string()),
                            s.r.map_or(String::new(), |x| x.to_string()),
                            s.classification.map_or(String::new(), |x| x.to_string()),
                            s.attains_dimension_bound.map_or(String::new(), |x| x.to_string()),
                        ])
                    })
                })
                .map_err(|e| Failure::Usage(e.to_string()))?;
            out.write_all(&w.into_inner().map_err(|e| Failure::Usage(e.to_string()))?)?;
        }
        Format::Text => {
            if summaries.len() > 1 {
                for s in &summaries {
                    writeln!(out, "seed {:>4}: L = {:>2}  {}", s.seed.unwrap_or(0), s.pairs, params_line(s, q))?;
                }
            }
            let s = &summaries[best];
            if let Some(seed) = s.seed {
                writeln!(out, "q = {q}, policy = seeded, seed = {seed}")?;
            } else {
                writeln!(out, "q = {q}, policy = lex")?;
            }
            writeln!(out, "pairs: L = {} (guaranteed >= {})", s.pairs, guaranteed_pairs(q as u64))?;
            writeln!(out, "conditions: {}", if s.conditions_passed { "pass" } else { "FAIL" })?;
            let class = s.classification.map_or(String::new(), |c| format!(" {c}"));
            writeln!(out, "{}{class}", params_line(s, q))?;
            if let Some(att) = s.attains_dimension_bound {
                writeln!(out, "attains dimension bound: {}", if att { "yes" } else { "no" })?;
            }
            writeln!(out, "length bound: n <= {}", length_bound_eq5(q as u64))?;
        }
    }

    let problems: Vec<String> =
        summaries.iter().flat_map(|s| s.problems.iter().map(move |p| format!("seed {:?}: {p}", s.seed))).collect();
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verify(problems.join("; ")))
    }
}

fn write_construct_outputs(dir: &Path, spread: &Spread, b: &BuiltCode, run: &RunConfig) -> CmdResult {
    fs::create_dir_all(dir)?;
    let field = spread.field();
    let mut seq = SequenceFile::from_sequence(&b.construction.sequence);
    seq.run = Some(run.clone());
    write_json(&dir.join("sequence.json"), &seq)?;
    let trace = TraceFile {
        p: field.characteristic(),
        e: field.degree(),
        modulus: field.modulus().to_vec(),
        trace: b.construction.trace.clone(),
        run: Some(run.clone()),
    };
    write_json(&dir.join("trace.json"), &trace)?;
    let mut sf = SpreadFile::from_spread(spread);
    sf.run = Some(run.clone());
    write_json(&dir.join("spread.json"), &sf)?;
    if let (Some(h), Some(code), Some(d)) = (&b.matrix, &b.code, b.distance) {
        let mut mf = MatrixFile::from_matrix(h);
        if let Some(d) = d.exact() {
            mf.params = Some(DeclaredParams {
                n: code.len() as u64,
                k: code.dimension() as u64,
                d: d as u64,
                r: code.locality() as u64,
            });
        }
        mf.run = Some(run.clone());
        fs::write(dir.join("matrix.csv"), mf.to_csv()?)?;
        write_json(&dir.join("matrix.json"), &mf)?;
    }
    if let Some(report) = &b.report {
        #[derive(Serialize)]
        struct Out<'a> {
            run: &'a RunConfig,
            report: &'a BoundsReport,
        }
        write_json(&dir.join("bounds.json"), &Out { run, report })?;
    }
    Ok(())
}

/// What `verify` recomputes from a matrix file.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub q: u32,
    pub n: usize,
    pub k: usize,
    pub d: Distance,
    /// Absent when no repair-group structure is found.
    pub r: Option<usize>,
    pub groups: Option<Vec<Vec<usize>>>,
    /// Whether every six columns of the parity-check matrix are independent.
    pub six_independent: bool,
    pub classification: Option<Classification>,
    pub classification_at_q: Option<Classification>,
    pub declared: Option<DeclaredParams>,
    pub problems: Vec<String>,
}

impl VerifyReport {
    pub fn consistent(&self) -> bool {
        self.problems.is_empty()
    }
}

/// Recomputes `(n, k, d, r)`, the groups and the classification of `mf` and
/// compares them with any declared parameters.
pub fn verify_matrix(mf: &MatrixFile) -> Result<VerifyReport, Error> {
    let h = mf.to_matrix()?;
    let q = h.field().order();
    let n = h.cols();
    let k = n - h.rank();
    let mut problems = Vec::new();
    let code = if k == 0 {
        problems.push("code has dimension 0".to_string());
        None
    } else {
        match LrcCode::from_parity_check(h.clone(), None) {
            Ok(c) => Some(c),
            Err(e) => {
                problems.push(format!("group structure: {e}"));
                None
            }
        }
    };
    let r = code.as_ref().map(|c| c.locality());
    // d never exceeds the locality-aware bound, so capping there is exact.
    let cap = match r {
        Some(r) if k > 0 => singleton_like(n as u64, k as u64, r as u64).max(1) as usize,
        _ => n - k + 1,
    };
    let d = min_dependent_columns(&h, cap);
    let six_independent = match d {
        Distance::Exact(w) | Distance::AtLeast(w) => w >= 7,
    };
    let (mut classification, mut classification_at_q) = (None, None);
    if let (Some(r), Some(dv)) = (r, d.exact()) {
        let rep = BoundsReport::compute(n as u64, Some(k as u64), Some(dv as u64), r as u64, q as u64)?;
        classification = rep.classification;
        classification_at_q = rep.classification_at_q;
        if classification_at_q == Some(Classification::Infeasible) {
            problems.push("computed parameters violate a bound".into());
        }
    } else if d.exact().is_none() {
        problems.push(format!("distance search ended without a dependent set ({d})"));
    }
    if let Some(dp) = mf.params {
        let checks = [
            ("n", dp.n, Some(n as u64)),
            ("k", dp.k, Some(k as u64)),
            ("d", dp.d, d.exact().map(|x| x as u64)),
            ("r", dp.r, r.map(|x| x as u64)),
        ];
        for (name, want, got) in checks {
            if got != Some(want) {
                let got = got.map_or("unknown".to_string(), |g| g.to_string());
                problems.push(format!("declared {name} = {want}, computed {got}"));
            }
        }
    }
    Ok(VerifyReport {
        q,
        n,
        k,
        d,
        r,
        groups: code.as_ref().map(|c| c.groups().to_vec()),
        six_independent,
        classification,
        classification_at_q,
        declared: mf.params,
        problems,
    })
}

fn load_matrix(path: &Path) -> Result<MatrixFile, Failure> {
    crate::io::read_json(path).map_err(Failure::from)
}

fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> CmdResult {
    let mf = load_matrix(&a.matrix)?;
    let rep = verify_matrix(&mf)?;
    let run = RunConfig {
        command: "verify".into(),
        q: Some(rep.q),
        modulus: Some(mf.modulus.clone()),
        input: Some(a.matrix.display().to_string()),
        format: Some(format!("{:?}", a.format).to_lowercase()),
        ..Default::default()
    };
    match a.format {
        Format::Json | Format::Csv => {
            #[derive(Serialize)]
            struct Out<'a> {
                run: &'a RunConfig,
                consistent: bool,
                report: &'a VerifyReport,
            }
            let o = Out { run: &run, consistent: rep.consistent(), report: &rep };
            writeln!(out, "{}", serde_json::to_string_pretty(&o).expect("serializable"))?;
        }
        Format::Text => {
            let r = rep.r.map_or("?".into(), |r| r.to_string());
            writeln!(out, "({}, {}, {}, {})_{}", rep.n, rep.k, rep.d, r, rep.q)?;
            if let Some(g) = &rep.groups {
                writeln!(out, "groups: {} of size {}", g.len(), g[0].len())?;
            }
            writeln!(out, "six-column independence: {}", if rep.six_independent { "yes" } else { "no" })?;
            if let Some(c) = rep.classification_at_q {
                writeln!(out, "classification: {c}")?;
            }
            for p in &rep.problems {
                writeln!(out, "problem: {p}")?;
            }
            writeln!(out, "consistent: {}", if rep.consistent() { "yes" } else { "no" })?;
        }
    }
    if rep.consistent() {
        Ok(())
    } else {
        Err(Failure::Verify(rep.problems.join("; ")))
    }
}

fn single(name: &str, values: &[u64]) -> Result<u64, Failure> {
    match values {
        [v] => Ok(*v),
        _ => Err(Failure::Usage(format!("--{name} must be a single value here"))),
    }
}

fn cmd_bounds(a: &BoundsArgs, out: &mut dyn Write) -> CmdResult {
    let list = |s: &Option<String>| -> Result<Option<Vec<u64>>, Failure> {
        s.as_deref().map(parse_list).transpose().map_err(Failure::Usage)
    };
    let qs = parse_list(&a.q).map_err(Failure::Usage)?;
    let ns = list(&a.n)?;
    let ks = list(&a.k)?;
    let ds = list(&a.d)?;
    let rs = parse_list(&a.r).map_err(Failure::Usage)?;
    let multi =
        [Some(&qs), ns.as_ref(), ks.as_ref(), ds.as_ref(), Some(&rs)].iter().any(|v| v.is_some_and(|v| v.len() > 1));
    let run = RunConfig {
        command: "bounds".into(),
        output: a.out.as_ref().map(|p| p.display().to_string()),
        format: Some(format!("{:?}", a.format).to_lowercase()),
        ..Default::default()
    };

    if !multi && a.format != Format::Csv {
        let q = single("q", &qs)?;
        let n = ns.as_deref().ok_or_else(|| Failure::Usage("--n is required".into())).and_then(|v| single("n", v))?;
        let k = ks.as_deref().map(|v| single("k", v)).transpose()?;
        let d = ds.as_deref().map(|v| single("d", v)).transpose()?;
        let r = single("r", &rs)?;
        let report = BoundsReport::compute(n, k, d, r, q)?;
        let run = RunConfig { q: u32::try_from(q).ok(), ..run };
        let text = match a.format {
            Format::Text => report.to_table(),
            _ => {
                #[derive(Serialize)]
                struct Out<'a> {
                    run: &'a RunConfig,
                    report: &'a BoundsReport,
                }
                serde_json::to_string_pretty(&Out { run: &run, report: &report }).expect("serializable") + "\n"
            }
        };
        return emit(&a.out, &text, out);
    }

    let options = |v: &Option<Vec<u64>>| v.as_ref().map_or(vec![None], |v| v.iter().map(|&x| Some(x)).collect());
    let (k_values, d_values) = (options(&ks), options(&ds));
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut rows = 0;
    for &q in &qs {
        if q > MAX_ORDER || prime_power(q).is_none() {
            log::debug!("skipping q = {q}: not a supported prime power");
            continue;
        }
        for &r in &rs {
            let n_values = match &ns {
                Some(v) => v.clone(),
                None => {
                    let top = length_bound_eq5(q) / (r + 1) * (r + 1);
                    vec![top.max(r + 1)]
                }
            };
            for &n in &n_values {
                for &k in &k_values {
                    for &d in &d_values {
                        let report = BoundsReport::compute(n, k, d, r, q)?;
                        w.serialize(&report).map_err(|e| Failure::Usage(e.to_string()))?;
                        rows += 1;
                    }
                }
            }
        }
    }
    if rows == 0 {
        return Err(Failure::Usage("grid is empty".into()));
    }
    let bytes = w.into_inner().map_err(|e| Failure::Usage(e.to_string()))?;
    let text = String::from_utf8(bytes).expect("csv output is utf-8");
    if let Some(path) = &a.out {
        let mut side = path.clone().into_os_string();
        side.push(".run.json");
        write_json(Path::new(&side), &run)?;
    }
    emit(&a.out, &text, out)
}

fn emit(path: &Option<PathBuf>, text: &str, out: &mut dyn Write) -> CmdResult {
    match path {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_simulate(a: &SimulateArgs, out: &mut dyn Write) -> CmdResult {
    let mf = load_matrix(&a.matrix)?;
    let code = LrcCode::from_parity_check(mf.to_matrix()?, None).map_err(|e| Failure::Verify(e.to_string()))?;
    let sim = simulate_repairs(&code, a.trials, a.failure_model, a.seed)?;
    let run = RunConfig {
        command: "simulate".into(),
        q: Some(code.field().order()),
        modulus: Some(mf.modulus.clone()),
        seed: Some(a.seed),
        input: Some(a.matrix.display().to_string()),
        output: a.out.as_ref().map(|p| p.display().to_string()),
        format: Some(format!("{:?}", a.format).to_lowercase()),
        ..Default::default()
    };
    #[derive(Serialize)]
    struct Out<'a> {
        run: &'a RunConfig,
        summary: &'a crate::sim::SimulationSummary,
    }
    let summary = Out { run: &run, summary: &sim.summary };
    if let Some(dir) = &a.out {
        fs::create_dir_all(dir)?;
        write_json(&dir.join("summary.json"), &summary)?;
        let mut lines = String::new();
        for rec in &sim.records {
            lines.push_str(&serde_json::to_string(rec).expect("serializable"));
            lines.push('\n');
        }
        fs::write(dir.join("trials.jsonl"), lines)?;
    }
    match a.format {
        Format::Text => {
            let s = &sim.summary;
            writeln!(out, "trials: {} ({}, seed {})", s.trials, s.failure_model, s.seed)?;
            writeln!(
                out,
                "success rate: {:.6} (95% CI {:.6}..{:.6})",
                s.success_rate, s.success_ci95.0, s.success_ci95.1
            )?;
            writeln!(out, "mean helpers read: {:.4}", s.mean_helpers_read)?;
            writeln!(out, "local repairs: {:.4}", s.local_fraction)?;
        }
        _ => writeln!(out, "{}", serde_json::to_string_pretty(&summary).expect("serializable"))?,
    }
    Ok(())
}

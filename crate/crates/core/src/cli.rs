//! Command-line front end. `run` parses arguments, dispatches, writes the
//! rendered output and returns the process exit code.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::cayley::{fan_hoffman_check, CayleyDifference, CayleyReport, CayleySpectrum, FanHoffmanReport};
use crate::check::{Comparison, Settings, DEFAULT_MARGIN, DEFAULT_TOL};
use crate::conjectures::{search, SearchConfig, SearchSummary};
use crate::corpus::{corpus, evaluate_corpus};
use crate::error::Error;
use crate::harnack::{determinant_consistency, identity_residuals, tung_check, BoundReport, HarnackSpectrum};
use crate::index_set::IndexSet;
use crate::linalg::{random_matrix, ComplexMatrix, GenerationMode, RandomSpec, SplitMix64};
use crate::report::{CheckRecord, CheckRelation, RunReport};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CHECK_FAILURE: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

/// Index sets sampled per size class beyond n = 5.
const SAMPLES_PER_K: usize = 50;
const DETERMINANT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "harnack", version, about = "Numerical checks for Harnack-type matrix inequalities")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Inequality tolerance: x <= y passes iff x <= y + tol(1+|y|).
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Strict-contraction margin: 1 - sigma_1 >= margin.
    #[arg(long, global = true, default_value_t = DEFAULT_MARGIN)]
    pub margin: f64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the JSON output to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print JSON instead of a table.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Identity, eigenvalue, partial-product and determinant checks on one matrix.
    Verify { matrix: PathBuf },
    /// Upper and lower partial-product bounds of H(A).
    Bounds {
        matrix: PathBuf,
        #[command(flatten)]
        select: IndexSelection,
    },
    /// Singular-value bounds for the Cayley transform of one matrix or the
    /// difference of two.
    Cayley {
        a: PathBuf,
        b: Option<PathBuf>,
        #[command(flatten)]
        select: IndexSelection,
    },
    /// Randomized search for the smallest per-index slack.
    Search(SearchArgs),
    /// Emit a seeded random matrix as JSON.
    Random(RandomArgs),
    /// Evaluate the embedded reference examples.
    ReproPaper,
}

#[derive(Debug, Args)]
pub struct IndexSelection {
    /// A single index set, e.g. 2,3.
    #[arg(long, conflicts_with = "k")]
    pub indices: Option<IndexSet>,
    /// All index sets of this size.
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    /// Comma-separated generation modes (default: all).
    #[arg(long, value_delimiter = ',')]
    pub modes: Vec<GenerationMode>,
    #[arg(long, default_value_t = 500)]
    pub descent_steps: usize,
    #[arg(long, default_value_t = 0.05)]
    pub descent_scale: f64,
    /// Fixed singular values for the prescribed and singular modes.
    #[arg(long, value_delimiter = ',')]
    pub prescribed: Option<Vec<f64>>,
    /// Per-trial CSV: trial,mode,min_slack.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RandomArgs {
    #[arg(long, required_unless_present = "prescribed")]
    pub n: Option<usize>,
    #[arg(long, default_value = "gaussian-scaled")]
    pub mode: GenerationMode,
    #[arg(long, default_value_t = 0.9)]
    pub max_norm: f64,
    /// Singular values, descending; implies the prescribed mode.
    #[arg(long, value_delimiter = ',')]
    pub prescribed: Option<Vec<f64>>,
}

/// A command's structured result and its exit code.
struct Outcome {
    json: String,
    table: String,
    code: i32,
}

impl Outcome {
    fn new<T: Serialize>(value: &T, table: String, code: i32) -> Result<Self, Error> {
        let json = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(Self { json, table, code })
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Parse(_)
        | Error::InvalidSpec(_)
        | Error::InvalidIndexSet(_)
        | Error::DimensionMismatch { .. }
        | Error::NonFinite { .. } => EXIT_USAGE,
        _ => EXIT_CHECK_FAILURE,
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let echo: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = if e.use_stderr() {
                write!(stderr, "{e}")
            } else {
                write!(stdout, "{e}")
            };
            return code;
        }
    };
    match dispatch(&cli, echo) {
        Ok(out) => {
            if let Some(path) = &cli.global.out {
                if let Err(e) = fs::write(path, format!("{}\n", out.json)) {
                    let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                    return EXIT_USAGE;
                }
            }
            let text = if cli.global.json { format!("{}\n", out.json) } else { out.table };
            let _ = stdout.write_all(text.as_bytes());
            out.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code_for(&e)
        }
    }
}

fn dispatch(cli: &Cli, echo: Vec<String>) -> Result<Outcome, Error> {
    let g = &cli.global;
    if !(g.tol >= 0.0 && g.tol.is_finite()) || !(g.margin > 0.0 && g.margin < 1.0) {
        return Err(Error::InvalidSpec("--tol must be >= 0 and --margin in (0, 1)".into()));
    }
    let settings = Settings::new(g.tol, g.margin);
    match &cli.command {
        Command::Verify { matrix } => {
            let report = cmd_verify(&read_matrix(matrix)?, &settings, g.seed, echo);
            run_report_outcome(&report)
        }
        Command::Bounds { matrix, select } => cmd_bounds(&read_matrix(matrix)?, select, &settings, g.seed, matrix),
        Command::Cayley { a, b, select } => {
            let a = read_matrix(a)?;
            let b = b.as_deref().map(read_matrix).transpose()?;
            cmd_cayley(&a, b.as_ref(), select, &settings, g.seed)
        }
        Command::Search(args) => cmd_search(args, g),
        Command::Random(args) => cmd_random(args, g.seed),
        Command::ReproPaper => run_report_outcome(&cmd_repro_paper(echo)),
    }
}

fn run_report_outcome(report: &RunReport) -> Result<Outcome, Error> {
    let code = if report.overall_pass { EXIT_PASS } else { EXIT_CHECK_FAILURE };
    Outcome::new(report, report.render_table(), code)
}

pub fn read_matrix(path: &Path) -> Result<ComplexMatrix, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    ComplexMatrix::from_json(&text)
}

fn index_sets(n: usize, select: &IndexSelection, seed: u64) -> Result<Vec<IndexSet>, Error> {
    if let Some(s) = &select.indices {
        s.check_range(n)?;
        return Ok(vec![s.clone()]);
    }
    let all = IndexSet::enumerate(n, SAMPLES_PER_K, seed);
    match select.k {
        Some(k) if k == 0 || k > n => Err(Error::InvalidIndexSet(format!("k = {k} outside 1..={n}"))),
        Some(k) => Ok(all.into_iter().filter(|s| s.k() == k).collect()),
        None => Ok(all),
    }
}

/// Identity residuals, then the contraction-gated checks when `a` qualifies.
pub fn cmd_verify(a: &ComplexMatrix, settings: &Settings, seed: u64, command: Vec<String>) -> RunReport {
    let start = Instant::now();
    let mut checks = Vec::new();
    match identity_residuals(a, settings) {
        Ok(res) => {
            for (name, r) in res.entries() {
                checks.push(CheckRecord::evaluate(
                    format!("identity/{name}"),
                    r,
                    CheckRelation::AtMost,
                    0.0,
                    res.threshold(),
                ));
            }
            if let Some(e) = &res.exp3_error {
                checks.push(CheckRecord::failed("identity/exp3", e.clone()));
            }
        }
        Err(e) => checks.push(CheckRecord::failed("identity", e.to_string())),
    }
    if let Err(e) = gated_checks(a, settings, seed, &mut checks) {
        checks.push(CheckRecord::failed("contraction", e.to_string()));
    }
    RunReport::new(command, checks, start.elapsed().as_secs_f64() * 1e3)
}

fn gated_checks(a: &ComplexMatrix, settings: &Settings, seed: u64, checks: &mut Vec<CheckRecord>) -> Result<(), Error> {
    let n = a.n();
    let spectrum = HarnackSpectrum::new(a, settings)?;
    for (j, c) in spectrum.eigenvalue_bounds().iter().enumerate() {
        checks.push(CheckRecord::from_comparison(format!("eigenvalue-bound/j={}", j + 1), c, settings));
    }
    for s in IndexSet::enumerate(n, SAMPLES_PER_K, seed) {
        let rep = spectrum.report("input", &s)?;
        for (name, bound) in rep.upper_bounds.named() {
            checks.push(CheckRecord::from_comparison(
                format!("bounds{s}/{name}"),
                &settings.at_most(rep.lhs, bound),
                settings,
            ));
        }
        for (name, bound) in rep.lower_bounds.named() {
            checks.push(CheckRecord::from_comparison(
                format!("bounds{s}/{name}"),
                &settings.at_least(rep.lower_lhs, bound),
                settings,
            ));
        }
    }
    let u = SplitMix64::new(seed).unitary(n);
    let tung = tung_check(a, &u, settings)?;
    checks.push(CheckRecord::from_comparison("tung/lower", &settings.at_least(tung.middle, tung.lower), settings));
    checks.push(CheckRecord::from_comparison("tung/upper", &settings.at_most(tung.middle, tung.upper), settings));
    let (product, ratio, _) = determinant_consistency(a)?;
    checks.push(CheckRecord::evaluate(
        "determinant-product",
        product,
        CheckRelation::Approx,
        ratio,
        DETERMINANT_TOLERANCE * ratio.abs(),
    ));
    Ok(())
}

#[derive(Debug, Serialize)]
struct BoundsOutput {
    matrix: String,
    settings: Settings,
    eigenvalue_bounds: Vec<Comparison>,
    reports: Vec<BoundReport>,
    overall_pass: bool,
}

fn cmd_bounds(
    a: &ComplexMatrix,
    select: &IndexSelection,
    settings: &Settings,
    seed: u64,
    path: &Path,
) -> Result<Outcome, Error> {
    let spectrum = HarnackSpectrum::new(a, settings)?;
    let id = path.display().to_string();
    let reports = index_sets(a.n(), select, seed)?
        .iter()
        .map(|s| spectrum.report(&id, s))
        .collect::<Result<Vec<_>, _>>()?;
    let eigenvalue_bounds = spectrum.eigenvalue_bounds();
    let overall_pass = reports.iter().all(BoundReport::passes) && eigenvalue_bounds.iter().all(|c| c.holds);

    let mut table = format!("matrix: {id}\nsingular values: {:?}\neigenvalues of H: {:?}\n", spectrum.singular_values, spectrum.eigenvalues);
    for rep in &reports {
        table.push_str(&format!(
            "{}  lhs={:?} lower_lhs={:?}\n",
            rep.index_set, rep.lhs, rep.lower_lhs
        ));
        let bounds = rep.upper_bounds.named().into_iter().chain(rep.lower_bounds.named());
        for (name, bound) in bounds {
            let ok = rep.verdict[name];
            table.push_str(&format!(
                "    {name:<10} {:<24} slack={:<24} {}\n",
                format!("{bound:?}"),
                format!("{:?}", rep.slacks[name]),
                if ok { "PASS" } else { "FAIL" }
            ));
        }
    }
    table.push_str(&format!("overall: {}\n", verdict(overall_pass)));
    let out = BoundsOutput {
        matrix: id,
        settings: *settings,
        eigenvalue_bounds,
        reports,
        overall_pass,
    };
    Outcome::new(&out, table, pass_code(overall_pass))
}

#[derive(Debug, Serialize)]
struct CayleyOutput {
    reports: Vec<CayleyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    per_index: Option<Vec<(Comparison, Comparison)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fan_hoffman: Option<FanHoffmanReport>,
    overall_pass: bool,
}

fn cmd_cayley(
    a: &ComplexMatrix,
    b: Option<&ComplexMatrix>,
    select: &IndexSelection,
    settings: &Settings,
    seed: u64,
) -> Result<Outcome, Error> {
    let sets = index_sets(a.n(), select, seed)?;
    let (reports, per_index, fan_hoffman) = match b {
        None => {
            let spectrum = CayleySpectrum::new(a, settings)?;
            let reports = sets.iter().map(|s| spectrum.report(s)).collect::<Result<Vec<_>, _>>()?;
            (reports, Some(spectrum.per_index()), None)
        }
        Some(b) => {
            let diff = CayleyDifference::new(a, b, settings)?;
            let reports = sets.iter().map(|s| diff.report(s)).collect::<Result<Vec<_>, _>>()?;
            let hermitian = |m: &ComplexMatrix| m.hermitian_defect() <= 1e-10 * (1.0 + m.frobenius_norm());
            let fh = if hermitian(a) && hermitian(b) {
                Some(fan_hoffman_check(a, b, settings)?)
            } else {
                None
            };
            (reports, None, fh)
        }
    };
    let overall_pass = reports.iter().all(CayleyReport::passes)
        && per_index.iter().flatten().all(|(l, u)| l.holds && u.holds)
        && fan_hoffman.as_ref().is_none_or(FanHoffmanReport::passes);

    let mut table = String::new();
    for r in &reports {
        table.push_str(&format!(
            "{}  lower={:?} lhs={:?} upper={:?} ({:?}) {}\n",
            r.index_set,
            r.lower,
            r.lhs,
            r.upper,
            r.lower_bound_form,
            verdict(r.passes())
        ));
    }
    if let Some(fh) = &fan_hoffman {
        table.push_str(&format!(
            "fan-hoffman: unitarity defect {:?} {}\n",
            fh.unitarity_defect,
            verdict(fh.passes())
        ));
    }
    table.push_str(&format!("overall: {}\n", verdict(overall_pass)));
    let out = CayleyOutput {
        reports,
        per_index,
        fan_hoffman,
        overall_pass,
    };
    Outcome::new(&out, table, pass_code(overall_pass))
}

fn cmd_search(args: &SearchArgs, g: &GlobalArgs) -> Result<Outcome, Error> {
    let config = SearchConfig {
        n: args.n,
        trials: args.trials,
        seed: g.seed,
        modes: if args.modes.is_empty() {
            GenerationMode::ALL.to_vec()
        } else {
            args.modes.clone()
        },
        descent_steps: args.descent_steps,
        descent_scale: args.descent_scale,
        margin: g.margin,
        prescribed: args.prescribed.clone(),
    };
    let outcome = search(&config)?;
    if let Some(path) = &args.csv {
        let mut csv = String::from("trial,mode,min_slack\n");
        for (t, (mode, slack)) in outcome.trials.iter().enumerate() {
            csv.push_str(&format!("{t},{mode},{slack}\n"));
        }
        fs::write(path, csv).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    }
    search_outcome(&outcome.summary)
}

/// Summary JSON and exit code: 3 when the summary records a violation.
pub fn render_search_summary(summary: &SearchSummary) -> Result<(String, i32), Error> {
    let out = search_outcome(summary)?;
    Ok((out.json, out.code))
}

fn search_outcome(summary: &SearchSummary) -> Result<Outcome, Error> {
    let best = &summary.best;
    let mut table = format!(
        "n={} trials={} seed={}\nmin_slack={:?} at j={} (trial {}, mode {})\n",
        summary.config.n,
        summary.trials_completed,
        summary.config.seed,
        best.min_slack,
        best.min_j,
        summary.best_trial,
        best.mode.map_or("-", GenerationMode::name),
    );
    if let Some(d) = &summary.descent {
        table.push_str(&format!(
            "descent: {} steps, {} accepted, {:?} -> {:?}\n",
            d.steps, d.accepted, d.initial_slack, d.final_slack
        ));
    }
    for h in &summary.histograms {
        table.push_str(&format!(
            "  {:<28} count={} min={:?} mean={:?} bins={:?}\n",
            h.mode.name(),
            h.count,
            h.min_slack,
            h.mean_slack,
            h.bins
        ));
    }
    table.push_str(&format!(
        "violation: {}\n",
        if summary.violation_found { "FOUND" } else { "none" }
    ));
    let code = if summary.violation_found { EXIT_VIOLATION } else { EXIT_PASS };
    Outcome::new(summary, table, code)
}

fn cmd_random(args: &RandomArgs, seed: u64) -> Result<Outcome, Error> {
    let spec = match &args.prescribed {
        Some(values) => {
            if args.n.is_some_and(|n| n != values.len()) {
                return Err(Error::InvalidSpec("--n disagrees with the --prescribed length".into()));
            }
            RandomSpec::prescribed(values.clone(), seed)
        }
        None => RandomSpec::new(args.n.expect("required by clap"), args.mode, args.max_norm, seed),
    };
    let m = random_matrix(&spec)?;
    let json = m.to_json();
    Ok(Outcome {
        table: format!("{json}\n"),
        json,
        code: EXIT_PASS,
    })
}

pub fn cmd_repro_paper(command: Vec<String>) -> RunReport {
    let start = Instant::now();
    let checks = evaluate_corpus(&corpus());
    RunReport::new(command, checks, start.elapsed().as_secs_f64() * 1e3)
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn pass_code(pass: bool) -> i32 {
    if pass {
        EXIT_PASS
    } else {
        EXIT_CHECK_FAILURE
    }
}

//! Command-line front end: argument parsing, sequence literals, the JSON
//! report and CSV spectra.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::discretize::{make_grid, multiplier_operator, singular_values, triangular_truncate, DEFAULT_WINDOW_FACTOR};
use crate::error::{Error, Result};
use crate::seqcore::{construct_odd_support, DecreasingWeights, LateralSequence};
use crate::transforms::calderon;
use crate::verify::{self, tolerances, CheckResult, Claim, StudyInput, StudyParams};

pub const DEFAULT_GRID: usize = 1024;
pub const DEFAULT_X: &str = "delta:1+0.5*delta:3";
pub const DEFAULT_LEMMA3_X: &str = "delta:1";
pub const DEFAULT_PANELS: usize = 1 << 16;
pub const DEFAULT_MAX_N: i64 = 32;
pub const DEFAULT_POINTWISE_MAX_N: usize = 10_000;
pub const DEFAULT_MINMAX: usize = 2000;

/// Weight families checked when no `--mu` is given.
pub const THEOREM_CORPUS: [&str; 4] = ["delta:0", "geom:0.5:16", "harmonic:16", "log:16"];
pub const POINTWISE_CORPUS: [&str; 4] = ["delta:0", "geom:0.5:16", "harmonic:32", "log:32"];

#[derive(Debug, Parser)]
#[command(name = "ttlab", version, about = "Numerical checks for lower estimates of triangular truncation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one check, or all of them.
    Verify {
        #[arg(value_enum, ignore_case = true)]
        claim: VerifyClaim,
        #[command(flatten)]
        opts: CheckOpts,
        /// Largest m and n swept by the min-inequality check.
        #[arg(long = "max", default_value_t = DEFAULT_MINMAX)]
        max_mn: usize,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Singular values of the truncated multiplier next to the lower bound, as CSV.
    Spectrum {
        #[arg(long, default_value = "delta:0")]
        mu: String,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[arg(long)]
        top_k: Option<usize>,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one check over increasing resolutions.
    Converge {
        #[arg(value_enum, ignore_case = true)]
        claim: ConvergeClaim,
        #[command(flatten)]
        opts: CheckOpts,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Debug, Args, Clone)]
pub struct CheckOpts {
    /// Sequence on ℤ: delta:K, geom:R:LEN, harmonic:LEN, log:LEN, zero,
    /// file:PATH, or a sum such as delta:1+0.5*delta:3.
    #[arg(long)]
    pub x: Option<String>,
    /// Weight sequence, same syntax as --x, supported on ℤ₊ and nonincreasing.
    #[arg(long)]
    pub mu: Option<String>,
    #[arg(long, default_value_t = DEFAULT_MAX_N)]
    pub max_n: i64,
    #[arg(long, default_value_t = DEFAULT_PANELS)]
    pub panels: usize,
    #[arg(long, default_value_t = DEFAULT_GRID)]
    pub grid: usize,
    /// Comma-separated resolutions for lemma2 and converge.
    #[arg(long, value_delimiter = ',')]
    pub grids: Option<Vec<usize>>,
    #[arg(long)]
    pub top_k: Option<usize>,
    #[arg(long, default_value_t = tolerances::THEOREM_SLACK)]
    pub slack: f64,
    #[arg(long, default_value_t = DEFAULT_WINDOW_FACTOR)]
    pub window_factor: i64,
    /// Largest n for the pointwise check.
    #[arg(long, default_value_t = DEFAULT_POINTWISE_MAX_N)]
    pub pointwise_max_n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyClaim {
    Fact1,
    Lemma2,
    Lemma3,
    Theorem,
    Chain,
    Pointwise,
    Minineq,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConvergeClaim {
    Fact1,
    Lemma2,
    Lemma3,
    Theorem,
    Chain,
}

impl From<ConvergeClaim> for Claim {
    fn from(c: ConvergeClaim) -> Self {
        match c {
            ConvergeClaim::Fact1 => Claim::Fact1,
            ConvergeClaim::Lemma2 => Claim::Lemma2,
            ConvergeClaim::Lemma3 => Claim::Lemma3,
            ConvergeClaim::Theorem => Claim::Theorem,
            ConvergeClaim::Chain => Claim::Chain,
        }
    }
}

// ---------------------------------------------------------------------------
// sequence literals

fn literal_error(literal: &str, reason: impl Into<String>) -> Error {
    Error::SequenceLiteral { literal: literal.to_owned(), reason: reason.into() }
}

fn parse_num<T: std::str::FromStr>(literal: &str, field: &str) -> Result<T> {
    field
        .trim()
        .parse()
        .map_err(|_| literal_error(literal, format!("`{field}` is not a number")))
}

/// Splits on `+` except inside exponents such as `1e+3`.
fn split_terms(literal: &str) -> Vec<String> {
    let mut terms = Vec::new();
    let mut current = String::new();
    let mut prev: Option<char> = None;
    let mut before_prev: Option<char> = None;
    for ch in literal.chars() {
        let exponent = matches!(prev, Some('e' | 'E')) && before_prev.is_some_and(|c| c.is_ascii_digit() || c == '.');
        if ch == '+' && !exponent && !current.is_empty() {
            terms.push(std::mem::take(&mut current));
        } else {
            current.push(ch);
        }
        before_prev = prev;
        prev = Some(ch);
    }
    terms.push(current);
    terms
}

fn parse_file(literal: &str, path: &Path) -> Result<LateralSequence> {
    let text = fs::read_to_string(path)?;
    let mut lo = 0i64;
    let mut values = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(v) = comment.trim().strip_prefix("lo=") {
                lo = parse_num(literal, v)?;
            }
            continue;
        }
        let value = match line.split_once(',') {
            Some((re, im)) => Complex64::new(parse_num(literal, re)?, parse_num(literal, im)?),
            None => Complex64::new(parse_num(literal, line)?, 0.0),
        };
        values.push(value);
    }
    Ok(LateralSequence::from_values(lo, values))
}

fn parse_term(literal: &str, term: &str) -> Result<LateralSequence> {
    if let Some(path) = term.strip_prefix("file:") {
        return parse_file(literal, Path::new(path));
    }
    let (coef, body) = match term.split_once('*') {
        Some((c, b)) => (parse_num::<f64>(literal, c)?, b),
        None => (1.0, term),
    };
    let parts: Vec<&str> = body.split(':').collect();
    let len = |s: &str| parse_num::<usize>(literal, s);
    let seq = match parts.as_slice() {
        ["zero"] => LateralSequence::zero(),
        ["delta", k] => LateralSequence::delta(parse_num(literal, k)?),
        ["geom", r, n] => {
            let r: f64 = parse_num(literal, r)?;
            LateralSequence::from_real(0, &(0..len(n)?).map(|k| r.powi(k as i32)).collect::<Vec<_>>())
        }
        ["harmonic", n] => LateralSequence::from_real(0, DecreasingWeights::harmonic(len(n)?).as_slice()),
        ["log", n] => LateralSequence::from_real(0, DecreasingWeights::logarithmic(len(n)?).as_slice()),
        _ => return Err(literal_error(literal, format!("unrecognized term `{term}`"))),
    };
    Ok(seq.scale(Complex64::new(coef, 0.0)))
}

/// Parses a sequence literal; see [`CheckOpts::x`] for the grammar.
pub fn parse_sequence(literal: &str) -> Result<LateralSequence> {
    let literal = literal.trim();
    if literal.starts_with("file:") {
        return parse_term(literal, literal);
    }
    split_terms(literal)
        .iter()
        .map(|t| parse_term(literal, t.trim()))
        .try_fold(LateralSequence::zero(), |acc, t| Ok(acc.add(&t?)))
}

/// Parses a weight literal: a real sequence supported on ℤ₊ whose values
/// are nonnegative and nonincreasing from index 0.
pub fn parse_weights(literal: &str) -> Result<DecreasingWeights> {
    let x = parse_sequence(literal)?;
    let Some((lo, hi)) = x.support() else {
        return Ok(DecreasingWeights::empty());
    };
    if lo < 0 {
        return Err(literal_error(literal, "weights must be supported on the nonnegative integers"));
    }
    if !x.is_real() {
        return Err(literal_error(literal, "weights must be real"));
    }
    let values = (0..=hi).map(|n| x.get(n).re).collect();
    DecreasingWeights::new(values).map_err(|e| literal_error(literal, e.to_string()))
}

// ---------------------------------------------------------------------------
// report

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub version: String,
    pub timestamp: String,
    pub config: BTreeMap<String, Value>,
    pub results: Vec<CheckResult>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn new(config: BTreeMap<String, Value>, results: Vec<CheckResult>) -> Self {
        let passed = results.iter().filter(|r| r.passed).count();
        Self {
            version: env!("CARGO_PKG_VERSION").to_owned(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true),
            config,
            summary: Summary { passed, failed: results.len() - passed },
            results,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

/// Writes `contents` next to `path` and renames it into place.
pub fn write_atomically(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// orchestration

fn top_k_or(opts: &CheckOpts, default: usize) -> usize {
    opts.top_k.unwrap_or(default)
}

/// Resolutions for the decomposition check: `--grids` if given, otherwise
/// quarter, half and full `--grid`.
fn lemma2_grids(opts: &CheckOpts) -> Vec<usize> {
    opts.grids
        .clone()
        .unwrap_or_else(|| [opts.grid / 4, opts.grid / 2, opts.grid].into_iter().filter(|&n| n >= 8).collect())
}

fn labelled(mut r: CheckResult, label: &str) -> CheckResult {
    r.claim_id = format!("{}:{label}", r.claim_id);
    r
}

fn weight_corpus<'a>(opts: &'a CheckOpts, corpus: &'a [&'a str]) -> Vec<&'a str> {
    match &opts.mu {
        Some(mu) => vec![mu.as_str()],
        None => corpus.to_vec(),
    }
}

/// Runs the checks selected by `claim` and returns them with the
/// parameters that were used.
pub fn run_verify(
    claim: VerifyClaim,
    opts: &CheckOpts,
    max_mn: usize,
) -> Result<(BTreeMap<String, Value>, Vec<CheckResult>)> {
    let mut config = BTreeMap::new();
    let mut results = Vec::new();
    let grid = opts.grid;
    let want = |c: VerifyClaim| claim == c || claim == VerifyClaim::All;
    config.insert("claim".into(), json!(format!("{claim:?}").to_lowercase()));
    config.insert("tolerances".into(), tolerance_table());

    if want(VerifyClaim::Fact1) {
        let lit = opts.x.as_deref().unwrap_or(DEFAULT_X);
        let x = parse_sequence(lit)?;
        config.insert("fact1".into(), json!({"x": lit, "max_n": opts.max_n, "panels": opts.panels}));
        results.push(verify::check_fact1(&x, opts.max_n, opts.panels)?);
    }
    if want(VerifyClaim::Lemma2) {
        let lit = opts.x.as_deref().unwrap_or(DEFAULT_X);
        let x = parse_sequence(lit)?;
        let grids = lemma2_grids(opts);
        config.insert("lemma2".into(), json!({"x": lit, "grids": grids, "window_factor": opts.window_factor}));
        results.push(verify::check_lemma2(&x, &grids, opts.window_factor)?);
    }
    if want(VerifyClaim::Lemma3) {
        let lit = opts.x.as_deref().filter(|_| claim == VerifyClaim::Lemma3).unwrap_or(DEFAULT_LEMMA3_X);
        let x = parse_sequence(lit)?;
        let top_k = top_k_or(opts, (grid / 8).min(16).max(1));
        config.insert(
            "lemma3".into(),
            json!({"x": lit, "grid": grid, "top_k": top_k, "window_factor": opts.window_factor}),
        );
        results.push(verify::check_lemma3(&x, grid, top_k, opts.window_factor)?);
    }
    if want(VerifyClaim::Theorem) {
        let top_k = top_k_or(opts, (grid / 8).max(1));
        let corpus = weight_corpus(opts, &THEOREM_CORPUS);
        config.insert(
            "theorem".into(),
            json!({"mu": corpus, "grid": grid, "top_k": top_k, "slack": opts.slack}),
        );
        for lit in corpus {
            let mu = parse_weights(lit)?;
            results.push(labelled(verify::check_theorem(&mu, grid, top_k, opts.slack)?, lit));
        }
    }
    if want(VerifyClaim::Chain) {
        let top_k = top_k_or(opts, (grid / 64).max(1));
        let corpus = weight_corpus(opts, &THEOREM_CORPUS);
        config.insert(
            "chain".into(),
            json!({"mu": corpus, "grid": grid, "top_k": top_k, "window_factor": opts.window_factor}),
        );
        for lit in corpus {
            let mu = parse_weights(lit)?;
            results.push(labelled(verify::check_chain(&mu, grid, top_k, opts.window_factor)?, lit));
        }
    }
    if want(VerifyClaim::Pointwise) {
        let corpus = weight_corpus(opts, &POINTWISE_CORPUS);
        config.insert("pointwise".into(), json!({"mu": corpus, "max_n": opts.pointwise_max_n}));
        for lit in corpus {
            let mu = parse_weights(lit)?;
            results.push(labelled(verify::check_pointwise_ineq(&mu, opts.pointwise_max_n)?, lit));
        }
    }
    if want(VerifyClaim::Minineq) {
        config.insert("minineq".into(), json!({"max": max_mn}));
        results.push(verify::brute_force_min_ineq(max_mn));
    }
    Ok((config, results))
}

fn tolerance_table() -> Value {
    json!({
        "exact_abs": tolerances::EXACT_ABS,
        "quadrature_abs": tolerances::QUADRATURE_ABS,
        "decomposition_rel": tolerances::DECOMPOSITION_REL,
        "spectral_rel": tolerances::SPECTRAL_REL,
        "compression_abs": tolerances::COMPRESSION_ABS,
        "roundoff_floor": tolerances::ROUNDOFF_FLOOR,
    })
}

pub fn run_converge(claim: ConvergeClaim, opts: &CheckOpts) -> Result<(BTreeMap<String, Value>, Vec<CheckResult>)> {
    let claim = Claim::from(claim);
    let grids = match (&opts.grids, claim) {
        (Some(g), _) => g.clone(),
        (None, Claim::Fact1) => vec![1 << 10, 1 << 12, 1 << 14, 1 << 16],
        (None, _) => vec![128, 256, 512, 1024],
    };
    let smallest = grids.first().copied().unwrap_or(DEFAULT_GRID);
    let top_k = match claim {
        Claim::Chain => top_k_or(opts, (smallest / 64).max(1)),
        _ => top_k_or(opts, (smallest / 8).min(16).max(1)),
    };
    let (literal, input) = if claim.takes_weights() {
        let lit = opts.mu.as_deref().unwrap_or("delta:0");
        (lit, StudyInput::Weights(parse_weights(lit)?))
    } else {
        let default = if claim == Claim::Lemma3 { DEFAULT_LEMMA3_X } else { DEFAULT_X };
        let lit = opts.x.as_deref().unwrap_or(default);
        (lit, StudyInput::Sequence(parse_sequence(lit)?))
    };
    let params = StudyParams { top_k, max_n: opts.max_n, window_factor: opts.window_factor, slack: opts.slack };
    let mut config = BTreeMap::new();
    config.insert("claim".into(), json!(format!("converge:{claim}")));
    config.insert("input".into(), json!(literal));
    config.insert("grids".into(), json!(grids));
    config.insert("top_k".into(), json!(top_k));
    config.insert("max_n".into(), json!(opts.max_n));
    config.insert("slack".into(), json!(opts.slack));
    config.insert("window_factor".into(), json!(opts.window_factor));
    config.insert("tolerances".into(), tolerance_table());
    let result = verify::convergence_study(claim, &input, &grids, &params)?;
    Ok((config, vec![result]))
}

/// `k,sigma,bound` rows: μ(k, T(a)) and (1/8π)(S_d μ)(k).
pub fn spectrum_csv(mu: &DecreasingWeights, grid_n: usize, top_k: usize) -> Result<String> {
    let grid = make_grid(grid_n)?;
    let x = construct_odd_support(mu);
    let spectrum = singular_values(&triangular_truncate(&multiplier_operator(&x, &grid)), top_k)?;
    let bound = if top_k > 0 { calderon(mu, top_k)? } else { DecreasingWeights::empty() };
    let mut out = String::from("k,sigma,bound\n");
    for k in 0..top_k {
        out.push_str(&format!("{k},{:?},{:?}\n", spectrum.get(k), bound.get(k) / (8.0 * PI)));
    }
    Ok(out)
}

fn print_summary(results: &[CheckResult]) {
    for r in results {
        let verdict = if r.passed { "PASS" } else { "FAIL" };
        eprintln!(
            "{verdict} {:<28} margin {:+.3e} (tolerance {:.1e})",
            r.claim_id, r.worst_margin, r.tolerance
        );
    }
}

fn emit_report(report: &VerificationReport, path: Option<&Path>) -> Result<()> {
    let json = report.to_json()?;
    match path {
        Some(p) => write_atomically(p, json.as_bytes()),
        None => {
            std::io::stdout().write_all(json.as_bytes())?;
            Ok(())
        }
    }
}

/// Executes a parsed command line. Returns the process exit status:
/// 0 when every check passed, 1 when one failed.
pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Verify { claim, opts, max_mn, report } => {
            let (config, results) = run_verify(claim, &opts, max_mn)?;
            print_summary(&results);
            let report_doc = VerificationReport::new(config, results);
            emit_report(&report_doc, report.as_deref())?;
            Ok(if report_doc.all_passed() { 0 } else { 1 })
        }
        Command::Converge { claim, opts, report } => {
            let (config, results) = run_converge(claim, &opts)?;
            print_summary(&results);
            let report_doc = VerificationReport::new(config, results);
            emit_report(&report_doc, report.as_deref())?;
            Ok(if report_doc.all_passed() { 0 } else { 1 })
        }
        Command::Spectrum { mu, grid, top_k, out } => {
            let weights = parse_weights(&mu)?;
            let top_k = top_k.unwrap_or((grid / 8).max(1));
            let csv = spectrum_csv(&weights, grid, top_k)?;
            match out {
                Some(p) => write_atomically(&p, csv.as_bytes())?,
                None => std::io::stdout().write_all(csv.as_bytes())?,
            }
            Ok(0)
        }
    }
}

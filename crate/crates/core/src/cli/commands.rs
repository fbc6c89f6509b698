use std::cmp::Ordering;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::bounds::{
    assemble, optimize_subsolution, standard_basis, threshold_report, verify_all, BoundsError, CandidateReport, Case,
    IdentityCheck, IdentityGroup, OptimizeOptions, Target, ThresholdEntry,
};
use crate::exactfn::{rational_to_f64, DimensionRange, RationalFn, Sign};
use crate::numint::{compute_c_numeric, NumericOptions};
use crate::pde::{
    convergence_study, sandwich_check, write_csv, ConvergenceReport, FarField, FieldReport, GridSpec, Problem,
    ProfileTag, SandwichReport, MIN_DIMENSION,
};
use crate::profile::{Exponent, ProfileFn};

use super::{CliError, Command, Format, RunConfig, Status, VERSION};

/// Result of one command: overall status, human-readable summary lines and
/// the files written.
#[derive(Debug)]
pub struct Outcome {
    pub status: Status,
    pub summary: Vec<String>,
    pub files: Vec<PathBuf>,
}

/// Writes `bytes` to a temporary file next to `path` and renames it into
/// place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    config_hash: String,
    config: &'a RunConfig,
    status: Status,
    exit_code: i32,
    result: &'a T,
}

struct Writer<'a> {
    cfg: &'a RunConfig,
    files: Vec<PathBuf>,
}

impl<'a> Writer<'a> {
    fn new(cfg: &'a RunConfig) -> Result<Self, CliError> {
        std::fs::create_dir_all(&cfg.out)?;
        Ok(Writer { cfg, files: Vec::new() })
    }

    fn put(&mut self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        let path = self.cfg.out.join(name);
        write_atomic(&path, bytes)?;
        self.files.push(path);
        Ok(())
    }

    fn json<T: Serialize>(&mut self, stem: &str, status: Status, result: &T) -> Result<(), CliError> {
        let env = Envelope {
            tool: "conformal-bounds",
            version: VERSION,
            command: self.cfg.command.name(),
            config_hash: self.cfg.hash(),
            config: self.cfg,
            status,
            exit_code: status.code(),
            result,
        };
        let mut bytes = serde_json::to_vec_pretty(&env).map_err(io::Error::other)?;
        bytes.push(b'\n');
        self.put(&format!("{stem}.json"), &bytes)
    }

    /// CSV with a leading comment line carrying version, config hash and
    /// status.
    fn csv<R: Serialize>(&mut self, name: &str, status: Status, rows: &[R]) -> Result<(), CliError> {
        let mut bytes = format!(
            "# conformal-bounds {VERSION} command={} config_hash={} status={}\n",
            self.cfg.command.name(),
            self.cfg.hash(),
            status.code()
        )
        .into_bytes();
        let mut w = csv::Writer::from_writer(&mut bytes);
        for r in rows {
            w.serialize(r).map_err(io::Error::other)?;
        }
        w.flush()?;
        drop(w);
        self.put(name, &bytes)
    }

    fn report<T: Serialize, R: Serialize>(
        &mut self,
        stem: &str,
        status: Status,
        result: &T,
        rows: &[R],
    ) -> Result<(), CliError> {
        match self.cfg.format {
            Format::Json => self.json(stem, status, result),
            Format::Csv => self.csv(&format!("{stem}.csv"), status, rows),
        }
    }
}

/// Runs the configured command. Usage errors return `Err` before anything is
/// written; check failures and non-convergence are reported through the
/// outcome status.
pub fn execute(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.validate()?;
    match cfg.command {
        Command::VerifyIdentities => verify_identities(cfg),
        Command::Solve => solve(cfg),
        Command::Scan => scan(cfg),
        Command::Optimize => optimize(cfg),
    }
}

fn require_n(cfg: &RunConfig) -> Result<i64, CliError> {
    cfg.n.ok_or_else(|| CliError::Usage(format!("{} requires n", cfg.command.name())))
}

#[derive(Serialize)]
struct VerifyResult {
    total: usize,
    passed: usize,
    failed: Vec<String>,
    checks: Vec<IdentityCheck>,
}

#[derive(Serialize)]
struct VerifyRow<'a> {
    group: IdentityGroup,
    case: Case,
    label: &'a str,
    ok: bool,
    residual: Option<&'a str>,
}

fn verify_identities(cfg: &RunConfig) -> Result<Outcome, CliError> {
    if let Some(label) = &cfg.corrupt {
        let mut known = Vec::new();
        for t in Target::ALL.into_iter().filter(|t| cfg.case.is_none_or(|c| c == t.case())) {
            known.extend(assemble(t)?.contributions.iter().map(|c| c.label.clone()));
        }
        if !known.contains(label) {
            known.dedup();
            return Err(CliError::Usage(format!("unknown contribution '{label}'; known: {}", known.join(" | "))));
        }
    }
    let checks = verify_all(cfg.case, cfg.corrupt.as_deref())?;
    let failed: Vec<String> = checks.iter().filter(|c| !c.ok).map(|c| c.label.clone()).collect();
    let status = if failed.is_empty() { Status::Pass } else { Status::CheckFailed };
    let mut summary = vec![format!("identities: {}/{} pass", checks.len() - failed.len(), checks.len())];
    for c in checks.iter().filter(|c| !c.ok) {
        summary.push(format!("FAIL {}: residual {}", c.label, c.residual.as_deref().unwrap_or("?")));
    }
    let rows: Vec<VerifyRow> = checks
        .iter()
        .map(|c| VerifyRow { group: c.group, case: c.case, label: &c.label, ok: c.ok, residual: c.residual.as_deref() })
        .collect();
    let mut w = Writer::new(cfg)?;
    let result =
        VerifyResult { total: checks.len(), passed: checks.len() - failed.len(), failed, checks: checks.clone() };
    w.report("verify-identities", status, &result, &rows)?;
    Ok(Outcome { status, summary, files: w.files })
}

#[derive(Serialize)]
struct SolveResult {
    tag: ProfileTag,
    n: i64,
    field_file: String,
    field: FieldReport,
    convergence: ConvergenceReport,
    sandwich: SandwichReport,
}

#[derive(Serialize)]
struct SolveRow {
    tag: ProfileTag,
    n: i64,
    nodes: usize,
    order: f64,
    constant: f64,
    tolerance: f64,
    lower_violation: f64,
    upper_violation: f64,
    pass: bool,
}

/// The grid with every other node removed.
fn coarsen(spec: GridSpec) -> Option<GridSpec> {
    ((spec.n_r - 1).is_multiple_of(2) && (spec.n_s - 1).is_multiple_of(2))
        .then(|| GridSpec { n_r: (spec.n_r - 1) / 2 + 1, n_s: (spec.n_s - 1) / 2 + 1, ..spec })
        .filter(|g| g.validate().is_ok())
}

fn solve(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let n = require_n(cfg)?;
    let tag = cfg.tag.unwrap_or(ProfileTag::V);
    let problem = Problem::tagged(tag, n, FarField::Subsolution)?;
    let fine = cfg.grid;
    let half = coarsen(fine);
    let quarter = half.and_then(coarsen);
    let (Some(half), Some(quarter)) = (half, quarter) else {
        return Err(CliError::Usage(format!(
            "grid {} cannot be coarsened twice (need nodes = 4k + 1 >= 17)",
            fine.n_r
        )));
    };
    let study = convergence_study(&problem, &[quarter, half, fine])?;
    let field = study.fields.last().expect("three fields");
    let tolerance = study.report.tolerance_for(fine.h(), cfg.safety);
    let sandwich = sandwich_check(field, tolerance)?;
    let status = if sandwich.pass { Status::Pass } else { Status::CheckFailed };

    let mut w = Writer::new(cfg)?;
    let field_file = format!("field_{tag}_n{n}.csv");
    let mut bytes = Vec::new();
    write_csv(field, &mut bytes)?;
    w.put(&field_file, &bytes)?;

    let summary = vec![
        format!(
            "{tag} n = {n}: order {:.3}, tolerance {:.3e}, lower violation {:.3e}, upper violation {:.3e}",
            study.report.order, tolerance, sandwich.lower.value, sandwich.upper.value
        ),
        format!("sandwich: {}", if sandwich.pass { "pass" } else { "FAIL" }),
    ];
    let row = SolveRow {
        tag,
        n,
        nodes: fine.n_r,
        order: study.report.order,
        constant: study.report.constant,
        tolerance,
        lower_violation: sandwich.lower.value,
        upper_violation: sandwich.upper.value,
        pass: sandwich.pass,
    };
    let result = SolveResult { tag, n, field_file, field: field.report(), convergence: study.report.clone(), sandwich };
    w.report(&format!("solve_{tag}_n{n}"), status, &result, &[row])?;
    Ok(Outcome { status, summary, files: w.files })
}

#[derive(Serialize)]
struct ScanRow {
    case: Case,
    n: i64,
    lower_exact: Option<String>,
    lower: Option<f64>,
    lower_sign: &'static str,
    upper_exact: Option<String>,
    upper: Option<f64>,
    upper_sign: Option<&'static str>,
    numeric: Option<f64>,
    numeric_error: Option<f64>,
    numeric_sign: Option<&'static str>,
    contained: Option<bool>,
    status: Status,
    message: Option<String>,
}

#[derive(Serialize)]
struct CaseThreshold {
    case: Case,
    /// Smallest `n` in the range from which the exact lower bound stays
    /// positive to the end of the range.
    first_positive_in_range: Option<i64>,
    lower: ThresholdEntry,
    upper: Option<ThresholdEntry>,
}

#[derive(Serialize)]
struct ScanResult {
    range: DimensionRange,
    units: &'static str,
    thresholds: Vec<CaseThreshold>,
    rows: Vec<ScanRow>,
}

fn sign_word(s: Sign) -> &'static str {
    match s {
        Sign::Negative => "negative",
        Sign::Zero => "zero",
        Sign::Positive => "positive",
    }
}

fn exact_at(f: &RationalFn, n: i64) -> (Option<String>, Option<f64>, &'static str) {
    match (f.eval(n), f.sign_at(n)) {
        (Ok(q), Ok(s)) => (Some(q.to_string()), Some(rational_to_f64(&q)), sign_word(s)),
        _ => (None, None, "pole"),
    }
}

fn lower_target(case: Case) -> Target {
    match case {
        Case::Nonumbilic => Target::C1Lower,
        Case::Umbilic => Target::C2Lower,
    }
}

fn scan(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let range = cfg.range.ok_or_else(|| CliError::Usage("scan requires a range lo..hi".into()))?;
    let cases = match cfg.case {
        Some(c) => vec![c],
        None => vec![Case::Nonumbilic, Case::Umbilic],
    };
    let opts =
        NumericOptions { nodes: cfg.grid.n_r, radius: cfg.grid.radius, stretch: cfg.grid.stretch, tail_tol: cfg.tol };
    let mut rows = Vec::new();
    let mut thresholds = Vec::new();
    let mut summary = Vec::new();
    let mut status = Status::Pass;
    for &case in &cases {
        let lower = assemble(lower_target(case))?;
        let upper = match case {
            Case::Nonumbilic => Some(assemble(Target::C1Upper)?),
            Case::Umbilic => None,
        };
        let report =
            threshold_report(&[Some(&lower), upper.as_ref()].into_iter().flatten().cloned().collect::<Vec<_>>());
        let mut first_positive_in_range = None;
        for n in range.iter() {
            let (lower_exact, lower_value, lower_sign) = exact_at(&lower.total.coeff, n);
            if lower_sign == "positive" {
                first_positive_in_range.get_or_insert(n);
            } else {
                first_positive_in_range = None;
            }
            let (upper_exact, upper_value, upper_sign) = match &upper {
                Some(u) => {
                    let (q, v, s) = exact_at(&u.total.coeff, n);
                    (q, v, Some(s))
                }
                None => (None, None, None),
            };
            let mut row = ScanRow {
                case,
                n,
                lower_exact,
                lower: lower_value,
                lower_sign,
                upper_exact,
                upper: upper_value,
                upper_sign,
                numeric: None,
                numeric_error: None,
                numeric_sign: None,
                contained: None,
                status: Status::Pass,
                message: None,
            };
            if !cfg.numeric {
                row.message = Some("numeric skipped".into());
            } else if n < MIN_DIMENSION {
                row.message = Some(format!("numeric needs n >= {MIN_DIMENSION}"));
            } else {
                match compute_c_numeric(case, n, opts) {
                    Ok(rec) => {
                        row.numeric = Some(rec.value);
                        row.numeric_error = Some(rec.error);
                        row.numeric_sign = Some(if rec.value - rec.error > 0.0 {
                            "positive"
                        } else if rec.value + rec.error < 0.0 {
                            "negative"
                        } else {
                            "undetermined"
                        });
                        row.contained = Some(rec.contained);
                        if case == Case::Umbilic && n < 7 {
                            row.message = Some("exploratory below n = 7".into());
                        } else if !rec.contained {
                            row.status = Status::CheckFailed;
                            row.message = Some("numeric value outside the exact bounds".into());
                        }
                    }
                    Err(e) => {
                        let e = CliError::from(e);
                        row.status = e.status();
                        row.message = Some(e.to_string());
                    }
                }
            }
            status = status.worst(row.status);
            rows.push(row);
        }
        summary.push(format!(
            "{case}: exact lower bound positive from n = {} in {range}",
            first_positive_in_range.map_or("none".to_string(), |n| n.to_string())
        ));
        thresholds.push(CaseThreshold {
            case,
            first_positive_in_range,
            lower: report.entry(lower.target).cloned().expect("entry for lower target"),
            upper: report.entry(Target::C1Upper).cloned(),
        });
    }
    let bad = rows.iter().filter(|r| r.status != Status::Pass).count();
    summary.push(format!("rows: {} total, {bad} not passing", rows.len()));

    let mut w = Writer::new(cfg)?;
    w.csv("scan.csv", status, &rows)?;
    if cfg.format == Format::Json {
        let result = ScanResult { range, units: crate::numint::UNITS, thresholds, rows };
        w.json("scan", status, &result)?;
    }
    Ok(Outcome { status, summary, files: w.files })
}

/// Extra elements of the `extended` basis.
fn extension_elements() -> Vec<ProfileFn> {
    vec![ProfileFn::s_pow(3).shift_power(Exponent::int(-2)), ProfileFn::s_pow(4).shift_power(Exponent::int(-3))]
}

fn resolve_basis(case: Case, entries: &[String]) -> Result<Vec<ProfileFn>, CliError> {
    if entries.is_empty() {
        return Err(CliError::Usage("optimize requires a basis (standard, extended, or profile expressions)".into()));
    }
    let mut out = Vec::new();
    for (k, e) in entries.iter().enumerate() {
        match e.as_str() {
            "standard" => out.extend(standard_basis(case)?),
            "extended" => {
                out.extend(standard_basis(case)?);
                out.extend(extension_elements());
            }
            text => out.push(
                text.parse::<ProfileFn>().map_err(|err| CliError::Usage(format!("basis entry {k} '{text}': {err}")))?,
            ),
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct OptimizeResult {
    case: Case,
    n: i64,
    basis: Vec<String>,
    seed: u64,
    candidate: Option<CandidateReport>,
    /// `above`, `equal` or `below` the exact bound of the case's own profile.
    comparison: Option<&'static str>,
    error: Option<String>,
}

#[derive(Serialize)]
struct OptimizeRow<'a> {
    case: Case,
    n: i64,
    certified_bound: Option<&'a str>,
    certified_bound_f64: Option<f64>,
    reference_bound: Option<&'a str>,
    comparison: Option<&'static str>,
    profile: Option<&'a str>,
    error: Option<&'a str>,
}

fn optimize(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let n = require_n(cfg)?;
    let case = cfg.case.unwrap_or(Case::Nonumbilic);
    let basis = resolve_basis(case, &cfg.basis)?;
    let opts = OptimizeOptions { seed: cfg.seed, ..OptimizeOptions::default() };
    let (status, candidate, comparison, error) = match optimize_subsolution(case, n, &basis, &opts) {
        Ok(c) => {
            let cmp = match c.certified_bound.cmp(&c.reference_bound) {
                Ordering::Greater => "above",
                Ordering::Equal => "equal",
                Ordering::Less => "below",
            };
            (Status::Pass, Some(c.report()), Some(cmp), None)
        }
        Err(e @ BoundsError::InvalidBasis { .. }) => return Err(CliError::Usage(e.to_string())),
        Err(e) => {
            let e = CliError::from(e);
            if e.status() == Status::UsageError {
                return Err(e);
            }
            (e.status(), None, None, Some(e.to_string()))
        }
    };
    let summary = match (&candidate, &error) {
        (Some(c), _) => vec![format!(
            "{case} n = {n}: certified bound {} ({:.6e}); bound of the case's own profile {} ({})",
            c.certified_bound,
            c.certified_bound_f64,
            c.reference_bound,
            comparison.unwrap_or("?")
        )],
        (None, Some(e)) => vec![format!("{case} n = {n}: {e}")],
        (None, None) => Vec::new(),
    };
    let row = OptimizeRow {
        case,
        n,
        certified_bound: candidate.as_ref().map(|c| c.certified_bound.as_str()),
        certified_bound_f64: candidate.as_ref().map(|c| c.certified_bound_f64),
        reference_bound: candidate.as_ref().map(|c| c.reference_bound.as_str()),
        comparison,
        profile: candidate.as_ref().map(|c| c.profile.as_str()),
        error: error.as_deref(),
    };
    let mut w = Writer::new(cfg)?;
    let result = OptimizeResult {
        case,
        n,
        basis: basis.iter().map(ToString::to_string).collect(),
        seed: cfg.seed,
        candidate: candidate.clone(),
        comparison,
        error: error.clone(),
    };
    w.report(&format!("optimize_{case}_n{n}"), status, &result, &[row])?;
    Ok(Outcome { status, summary, files: w.files })
}

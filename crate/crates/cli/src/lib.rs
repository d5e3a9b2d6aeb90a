//! Seeded experiment runners and reproducible result emission.
//!
//! Every runner consumes explicit parameters (sizes, trial count, base seed,
//! norm tags) and returns a flat list of [`ResultRecord`]s. Determinism is a
//! hard contract: records depend only on the configuration, never on wall
//! time, scheduling, or environment. Each random draw derives its own RNG
//! stream from `(seed, trial_index, ensemble, dim)`, so trials are
//! order-independent by construction; runners execute sequentially and build
//! records in a canonical order, and [`run`] additionally performs the stable
//! sort by structured parameters that a concurrent scheduler would need, so
//! the emitted bytes are pinned either way.
//!
//! Output formats:
//! * CSV with header `command,param_json,metric,value,seed,wall_time_ms`,
//!   RFC-4180 quoting, UTF-8, LF line endings, and every real printed with 17
//!   significant digits (`{:.16e}`), which round-trips `f64` exactly.
//! * A JSON array of the same records (serde's shortest-round-trip float
//!   encoding, also exact).
//!
//! The `wall_time_ms` field is always 0: actual timing varies run to run and
//! would break byte-for-byte reproducibility, so the binary reports real
//! elapsed time on stderr instead and keeps the record payload deterministic.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use fuglede_core::constructions::{
    adjoint_commutator_residual, counterexample_converged, davies_projection,
    triangular_truncation,
};
use fuglede_core::doi::fuglede_intertwine;
use fuglede_core::ensemble::{sample, EnsembleKind, RandomEnsembleSpec};
use fuglede_core::norms::{boyd_indices, dilation_quotients, matrix_norm, NormSpec, SpaceSpec};
use fuglede_core::stepfn::fuglede_majorization;
use fuglede_core::{commutator, Error, Matrix, Result};
use serde::{Deserialize, Serialize};

/// Relative Frobenius threshold below which a sampled commutator is treated
/// as zero and the trial is skipped (and counted) rather than divided by.
pub const SKIP_REL_TOL: f64 = 1e-12;

/// Cluster tolerance handed to the spectral-measure and majorization routines
/// for ensemble draws, whose spectra live in the unit square: 1e-8 in
/// absolute terms matches the default relative scale on a diameter-1 set.
pub const ENSEMBLE_CLUSTER_TOL: f64 = 1e-8;

/// Convergence tolerance for the counterexample scale search.
pub const COUNTEREXAMPLE_TOL: f64 = 1e-6;

/// Starting scale for the counterexample search.
pub const COUNTEREXAMPLE_M_START: f64 = 10.0;

/// Largest size at which the counterexample runner re-computes its trace
/// norms on the fully embedded matrices as a cross-check. The embedding has
/// dimension `(n+1)²`, so this keeps the check O(n⁴)-cheap while still
/// exercising every default size up to 16; beyond the cap the runner reports
/// the norms of the compact blocks, whose singular values the embedding
/// preserves exactly (it pads rows and columns of zeros).
pub const IOTA_VERIFY_MAX_N: usize = 16;

/// The experiment selected on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Davies,
    FugledeSweep,
    Counterexample,
    Boyd,
    CalderonCheck,
    DoiCheck,
}

impl Command {
    /// The subcommand string, also the `command` column of every record.
    pub fn name(self) -> &'static str {
        match self {
            Command::Davies => "davies",
            Command::FugledeSweep => "fuglede-sweep",
            Command::Counterexample => "counterexample",
            Command::Boyd => "boyd",
            Command::CalderonCheck => "calderon-check",
            Command::DoiCheck => "doi-check",
        }
    }
}

/// Output serialization format.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Fully resolved invocation: what to run and where to put the records.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub command: Command,
    pub sizes: Vec<usize>,
    pub trials: u64,
    pub seed: u64,
    pub norms: Vec<NormSpec>,
    pub output_path: Option<PathBuf>,
    pub format: OutputFormat,
}

/// One scalar result. `param_json` is a canonical JSON object (keys sorted)
/// identifying the cell the value belongs to; `seed` is the base seed that
/// produced it, recorded on every row so any value can be regenerated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub command: String,
    pub param_json: String,
    pub metric: String,
    pub value: f64,
    pub seed: u64,
    pub wall_time_ms: u64,
}

/// Structured parameter value, used for sorting records numerically before
/// the parameters are flattened into `param_json`.
#[derive(Clone, Debug, PartialEq)]
enum ParamValue {
    Int(u64),
    Text(String),
}

impl ParamValue {
    fn to_json(&self) -> serde_json::Value {
        match self {
            ParamValue::Int(v) => serde_json::Value::from(*v),
            ParamValue::Text(s) => serde_json::Value::from(s.as_str()),
        }
    }
}

fn param_value_cmp(a: &ParamValue, b: &ParamValue) -> Ordering {
    match (a, b) {
        (ParamValue::Int(x), ParamValue::Int(y)) => x.cmp(y),
        (ParamValue::Text(x), ParamValue::Text(y)) => x.cmp(y),
        (ParamValue::Int(_), ParamValue::Text(_)) => Ordering::Less,
        (ParamValue::Text(_), ParamValue::Int(_)) => Ordering::Greater,
    }
}

/// A record before command/seed stamping: structured parameters plus one
/// named value.
struct Row {
    params: Vec<(&'static str, ParamValue)>,
    metric: &'static str,
    value: f64,
}

impl Row {
    fn new(params: Vec<(&'static str, ParamValue)>, metric: &'static str, value: f64) -> Self {
        Row {
            params,
            metric,
            value,
        }
    }
}

fn param_list_cmp(a: &[(&str, ParamValue)], b: &[(&str, ParamValue)]) -> Ordering {
    for (pa, pb) in a.iter().zip(b.iter()) {
        match pa.0.cmp(pb.0) {
            Ordering::Equal => {}
            other => return other,
        }
        match param_value_cmp(&pa.1, &pb.1) {
            Ordering::Equal => {}
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

/// Stable-sorts rows by their structured parameters (numeric order for
/// integer parameters, so n = 8 sorts before n = 16 before n = 128) and
/// stamps them into emitted records. The sort is stable, so metrics within
/// one parameter cell keep their construction order.
fn finish(command: Command, seed: u64, mut rows: Vec<Row>) -> Vec<ResultRecord> {
    rows.sort_by(|a, b| param_list_cmp(&a.params, &b.params));
    rows.into_iter()
        .map(|row| {
            let map: serde_json::Map<String, serde_json::Value> = row
                .params
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_json()))
                .collect();
            ResultRecord {
                command: command.name().to_string(),
                param_json: serde_json::Value::Object(map).to_string(),
                metric: row.metric.to_string(),
                value: row.value,
                seed,
                wall_time_ms: 0,
            }
        })
        .collect()
}

fn int(v: usize) -> ParamValue {
    ParamValue::Int(v as u64)
}

fn text(s: impl Into<String>) -> ParamValue {
    ParamValue::Text(s.into())
}

// ---------------------------------------------------------------------------
// Norm tags
// ---------------------------------------------------------------------------

/// Parses a norm tag from the command line: `s<p>` (Schatten, e.g. `s1`,
/// `s1.5`, `s2`), `sinf` (operator norm), `weakl1`, or `llog`.
pub fn parse_norm_tag(tag: &str) -> Result<NormSpec> {
    let spec = match tag {
        "sinf" => NormSpec::Schatten(f64::INFINITY),
        "weakl1" => NormSpec::WeakL1,
        "llog" => NormSpec::LambdaLog,
        _ => {
            let body = tag.strip_prefix('s').ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "unknown norm tag '{tag}' (expected s<p>, sinf, weakl1, or llog)"
                ))
            })?;
            let p: f64 = body.parse().map_err(|_| {
                Error::InvalidParameter(format!("could not parse Schatten exponent in '{tag}'"))
            })?;
            NormSpec::Schatten(p)
        }
    };
    spec.validate()?;
    Ok(spec)
}

/// The sequence space whose dilation structure mirrors the given matrix norm:
/// Schatten-p corresponds to ℓ_p (operator norm to ℓ_∞) and the weak
/// quasi-norm to weak-ℓ1. The log-weighted norm has no counterpart among the
/// implemented dilation spaces, so it is not accepted by the `boyd` command.
pub fn norm_to_space(spec: &NormSpec) -> Option<SpaceSpec> {
    match spec {
        NormSpec::Schatten(p) => Some(SpaceSpec::EllP(*p)),
        NormSpec::WeakL1 => Some(SpaceSpec::WeakL1),
        NormSpec::LambdaLog => None,
    }
}

// ---------------------------------------------------------------------------
// Defaults and validation
// ---------------------------------------------------------------------------

/// Default size list per command, used when `--sizes` is omitted.
pub fn default_sizes(command: Command) -> Vec<usize> {
    match command {
        Command::Davies => vec![8, 16, 32, 64, 128, 256, 512],
        Command::FugledeSweep => vec![8, 16, 32],
        Command::Counterexample => vec![8, 16, 32, 64, 128],
        Command::Boyd => vec![2, 4, 8, 16, 32, 64],
        Command::CalderonCheck => vec![8, 16, 32, 64],
        Command::DoiCheck => vec![4, 8, 16],
    }
}

/// Default trial count per command (1 for the deterministic commands).
pub fn default_trials(command: Command) -> u64 {
    match command {
        Command::Davies | Command::Counterexample | Command::Boyd => 1,
        Command::FugledeSweep | Command::CalderonCheck => 50,
        Command::DoiCheck => 25,
    }
}

/// Default norm tags per command. Only `fuglede-sweep` and `boyd` consume
/// norms; the other commands ignore the list.
pub fn default_norms(command: Command) -> Vec<NormSpec> {
    match command {
        Command::FugledeSweep => vec![
            NormSpec::Schatten(1.0),
            NormSpec::Schatten(2.0),
            NormSpec::Schatten(f64::INFINITY),
            NormSpec::WeakL1,
            NormSpec::LambdaLog,
        ],
        Command::Boyd => vec![
            NormSpec::Schatten(1.0),
            NormSpec::Schatten(1.5),
            NormSpec::Schatten(2.0),
            NormSpec::Schatten(4.0),
            NormSpec::Schatten(f64::INFINITY),
            NormSpec::WeakL1,
        ],
        _ => Vec::new(),
    }
}

fn check_sizes(sizes: &[usize], lo: usize, hi: usize, what: &str) -> Result<()> {
    if sizes.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "{what}: size list must not be empty"
        )));
    }
    for &n in sizes {
        if n < lo || n > hi {
            return Err(Error::InvalidParameter(format!(
                "{what}: size {n} outside the supported range [{lo}, {hi}]"
            )));
        }
    }
    Ok(())
}

fn check_trials(trials: u64, what: &str) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidParameter(format!(
            "{what}: trial count must be at least 1"
        )));
    }
    Ok(())
}

fn check_norms(norms: &[NormSpec], what: &str) -> Result<()> {
    if norms.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "{what}: norm list must not be empty"
        )));
    }
    for spec in norms {
        spec.validate()?;
    }
    Ok(())
}

fn draw(dim: usize, kind: EnsembleKind, seed: u64, trial_index: u64) -> Result<Matrix> {
    sample(&RandomEnsembleSpec {
        dim,
        kind,
        seed,
        trial_index,
    })
}

// ---------------------------------------------------------------------------
// Runners
// ---------------------------------------------------------------------------

/// Growth curve of the triangular-truncation trace norm: for each n the
/// records give `‖T(P_n)‖₁` (metric `trace_norm`) and `ln n` (metric `ln_n`),
/// where `P_n` is the rank-one averaging projection with every entry `1/n`.
pub fn run_davies(sizes: &[usize], seed: u64) -> Result<Vec<ResultRecord>> {
    check_sizes(sizes, 1, 1024, "davies")?;
    let s1 = NormSpec::Schatten(1.0);
    let mut rows = Vec::new();
    for &n in sizes {
        let tn = matrix_norm(&s1, &triangular_truncation(&davies_projection(n)))?;
        rows.push(Row::new(vec![("n", int(n))], "trace_norm", tn));
        rows.push(Row::new(vec![("n", int(n))], "ln_n", (n as f64).ln()));
    }
    Ok(finish(Command::Davies, seed, rows))
}

/// One cell of the ratio sweep: max over trials of
/// `‖[A*, X]‖ / ‖[A, X]‖` in the given norm, with A drawn from `kind` and X
/// an independent normalized Gaussian. Trials whose commutator is numerically
/// zero (relative Frobenius norm below [`SKIP_REL_TOL`]) are skipped and
/// counted in the `skipped` metric — never silently dropped.
pub fn fuglede_sweep_with(
    kind: EnsembleKind,
    norms: &[NormSpec],
    sizes: &[usize],
    trials: u64,
    seed: u64,
) -> Result<Vec<ResultRecord>> {
    check_sizes(sizes, 1, 1024, "fuglede-sweep")?;
    check_trials(trials, "fuglede-sweep")?;
    check_norms(norms, "fuglede-sweep")?;
    let mut rows = Vec::new();
    for &n in sizes {
        for spec in norms {
            let mut max_ratio = f64::NEG_INFINITY;
            let mut skipped = 0u64;
            for t in 0..trials {
                let a = draw(n, kind, seed, t)?;
                let x = draw(n, EnsembleKind::Contraction, seed, t)?;
                let k1 = commutator(&a, &x)?;
                if k1.frobenius_norm() <= SKIP_REL_TOL * a.frobenius_norm() * x.frobenius_norm() {
                    skipped += 1;
                    continue;
                }
                let k2 = commutator(&a.adjoint(), &x)?;
                let ratio = matrix_norm(spec, &k2)? / matrix_norm(spec, &k1)?;
                max_ratio = max_ratio.max(ratio);
            }
            let params = vec![("n", int(n)), ("norm", text(spec.to_string()))];
            if skipped < trials {
                rows.push(Row::new(params.clone(), "max_ratio", max_ratio));
            }
            rows.push(Row::new(params, "skipped", skipped as f64));
        }
    }
    Ok(finish(Command::FugledeSweep, seed, rows))
}

/// Ratio sweep over the normal ensemble (eigenvalues uniform in the unit
/// square): the adjoint-commutator-to-commutator norm ratio per (size, norm).
pub fn run_fuglede_sweep(
    norms: &[NormSpec],
    sizes: &[usize],
    trials: u64,
    seed: u64,
) -> Result<Vec<ResultRecord>> {
    fuglede_sweep_with(EnsembleKind::NormalInUnitSquare, norms, sizes, trials, seed)
}

/// Scale search and trace-norm ratios for the weighted-diagonal pair built
/// from the averaging projection `P_n`. Per size the records report:
///
/// * `r1` = `‖T(P_n)‖₁` and `r2` = `‖P_n − diag P_n‖₁`, the trace norms of
///   the adjoint-commutator and commutator targets (the sparse embedding that
///   realizes them as actual commutators pads zero rows/columns, which
///   preserves every singular value; for n ≤ [`IOTA_VERIFY_MAX_N`] the runner
///   re-computes both norms on the embedded matrices and fails loudly on any
///   disagreement beyond 1e-12, reported in the `iota_check` metric);
/// * `ratio` = `r1 / r2`;
/// * the scale search outcome: `m_used` and the achieved `residual` from
///   [`counterexample_converged`] with tolerance [`COUNTEREXAMPLE_TOL`], plus
///   `overflow_guard` = 1 when the search exhausted the floating-point-safe
///   scale range first (those rows keep the best scale found, if any).
pub fn run_counterexample(sizes: &[usize], seed: u64) -> Result<Vec<ResultRecord>> {
    check_sizes(sizes, 2, 1024, "counterexample")?;
    let s1 = NormSpec::Schatten(1.0);
    let mut rows = Vec::new();
    for &n in sizes {
        let p = davies_projection(n);
        let tp = triangular_truncation(&p);
        let hollow = p.sub(&p.diag_part());
        let r1 = matrix_norm(&s1, &tp)?;
        let r2 = matrix_norm(&s1, &hollow)?;

        let mut iota_checked = 0.0;
        if n <= IOTA_VERIFY_MAX_N {
            use fuglede_core::constructions::iota;
            let r1_embedded = matrix_norm(&s1, &iota(&tp))?;
            let r2_embedded = matrix_norm(&s1, &iota(&hollow))?;
            let tol = 1e-12 * r1.max(1.0);
            if (r1 - r1_embedded).abs() > tol || (r2 - r2_embedded).abs() > tol {
                return Err(Error::NonConvergence {
                    context: "embedding failed to preserve the trace norms it must preserve",
                });
            }
            iota_checked = 1.0;
        }

        let ps = vec![("n", int(n))];
        rows.push(Row::new(ps.clone(), "r1", r1));
        rows.push(Row::new(ps.clone(), "r2", r2));
        rows.push(Row::new(ps.clone(), "ratio", r1 / r2));
        rows.push(Row::new(ps.clone(), "iota_check", iota_checked));
        match counterexample_converged(&p, COUNTEREXAMPLE_TOL, COUNTEREXAMPLE_M_START) {
            Ok(pair) => {
                let residual = adjoint_commutator_residual(&p, pair.m)?;
                rows.push(Row::new(ps.clone(), "overflow_guard", 0.0));
                rows.push(Row::new(ps.clone(), "m_used", pair.m));
                rows.push(Row::new(ps, "residual", residual));
            }
            Err(Error::OverflowGuard {
                best_m,
                best_residual,
                ..
            }) => {
                rows.push(Row::new(ps.clone(), "overflow_guard", 1.0));
                if let Some(m) = best_m {
                    rows.push(Row::new(ps.clone(), "m_used", m));
                }
                if let Some(res) = best_residual {
                    rows.push(Row::new(ps, "residual", res));
                }
            }
            Err(other) => return Err(other),
        }
    }
    Ok(finish(Command::Counterexample, seed, rows))
}

/// Boyd indices and per-n dilation quotients for each requested space. Norm
/// tags are mapped to their sequence-space counterparts; `llog` has none and
/// is rejected as a configuration error.
pub fn run_boyd(norms: &[NormSpec], sizes: &[usize], seed: u64) -> Result<Vec<ResultRecord>> {
    check_norms(norms, "boyd")?;
    check_sizes(sizes, 2, 1 << 20, "boyd")?;
    let mut spaces = Vec::with_capacity(norms.len());
    for spec in norms {
        let space = norm_to_space(spec).ok_or_else(|| {
            Error::InvalidParameter(format!(
                "norm '{spec}' has no dilation sequence space; boyd supports s<p>, sinf, weakl1"
            ))
        })?;
        spaces.push(space);
    }
    let n_max = sizes.iter().copied().max().unwrap().max(4);
    let mut rows = Vec::new();
    for space in &spaces {
        let (alpha, beta) = boyd_indices(space, n_max)?;
        let tag = space.to_string();
        rows.push(Row::new(
            vec![("space", text(tag.clone()))],
            "alpha",
            alpha,
        ));
        rows.push(Row::new(vec![("space", text(tag.clone()))], "beta", beta));
        for &n in sizes {
            let (qa, qb) = dilation_quotients(space, n)?;
            let ps = vec![("n", int(n)), ("space", text(tag.clone()))];
            rows.push(Row::new(ps.clone(), "quotient_alpha", qa));
            rows.push(Row::new(ps, "quotient_beta", qb));
        }
    }
    Ok(finish(Command::Boyd, seed, rows))
}

/// Majorization sweep: max over trials of the pointwise ratio between the
/// adjoint-commutator profile and the averaged commutator profile, for X
/// drawn from the normal ensemble and, separately, the self-adjoint
/// sub-ensemble (where the ratio is provably at most 1). Y is an independent
/// normalized Gaussian. Zero-commutator trials are skipped and counted.
pub fn run_calderon_check(sizes: &[usize], trials: u64, seed: u64) -> Result<Vec<ResultRecord>> {
    check_sizes(sizes, 2, 128, "calderon-check")?;
    check_trials(trials, "calderon-check")?;
    let ensembles = [
        ("normal", EnsembleKind::NormalInUnitSquare),
        ("selfadjoint", EnsembleKind::SelfAdjoint),
    ];
    let mut rows = Vec::new();
    for (tag, kind) in ensembles {
        let mut global_max = f64::NEG_INFINITY;
        let mut any = false;
        for &n in sizes {
            let mut max_ratio = f64::NEG_INFINITY;
            let mut skipped = 0u64;
            for t in 0..trials {
                let x = draw(n, kind, seed, t)?;
                let y = draw(n, EnsembleKind::Contraction, seed, t)?;
                match fuglede_majorization(&x, &y, ENSEMBLE_CLUSTER_TOL) {
                    Ok((ratio, _)) => max_ratio = max_ratio.max(ratio),
                    Err(Error::ZeroCommutator) => skipped += 1,
                    Err(other) => return Err(other),
                }
            }
            let ps = vec![("ensemble", text(tag)), ("n", int(n))];
            if skipped < trials {
                rows.push(Row::new(ps.clone(), "max_ratio", max_ratio));
                global_max = global_max.max(max_ratio);
                any = true;
            }
            rows.push(Row::new(ps, "skipped", skipped as f64));
        }
        if any {
            rows.push(Row::new(
                vec![("ensemble", text(tag))],
                "global_max_ratio",
                global_max,
            ));
        }
    }
    Ok(finish(Command::CalderonCheck, seed, rows))
}

/// Spectral-integral route check: per size, the max over trials of the
/// relative Frobenius gap between `[Y*, T]` and the transformed commutator
/// (metric `max_intertwine_residual`, relative to `‖[Y, T]‖_F`), and the max
/// deviation of the Hilbert–Schmidt ratio `‖[Y*, T]‖₂ / ‖[Y, T]‖₂` from 1
/// (metric `max_s2_deviation`). Y is drawn from the normal ensemble, T from
/// the normalized Gaussian contraction ensemble.
pub fn run_doi_check(sizes: &[usize], trials: u64, seed: u64) -> Result<Vec<ResultRecord>> {
    check_sizes(sizes, 2, 64, "doi-check")?;
    check_trials(trials, "doi-check")?;
    let mut rows = Vec::new();
    for &n in sizes {
        let mut max_residual = f64::NEG_INFINITY;
        let mut max_s2_dev = f64::NEG_INFINITY;
        let mut skipped = 0u64;
        for t in 0..trials {
            let y = draw(n, EnsembleKind::NormalInUnitSquare, seed, t)?;
            let tt = draw(n, EnsembleKind::Contraction, seed, t)?;
            let k = commutator(&y, &tt)?;
            let scale = k.frobenius_norm();
            if scale <= SKIP_REL_TOL * y.frobenius_norm() * tt.frobenius_norm() {
                skipped += 1;
                continue;
            }
            let (lhs, rhs) = fuglede_intertwine(&y, &tt, ENSEMBLE_CLUSTER_TOL)?;
            max_residual = max_residual.max(lhs.sub(&rhs).frobenius_norm() / scale);
            max_s2_dev = max_s2_dev.max((lhs.frobenius_norm() / scale - 1.0).abs());
        }
        let ps = vec![("n", int(n))];
        if skipped < trials {
            rows.push(Row::new(ps.clone(), "max_intertwine_residual", max_residual));
            rows.push(Row::new(ps.clone(), "max_s2_deviation", max_s2_dev));
        }
        rows.push(Row::new(ps, "skipped", skipped as f64));
    }
    Ok(finish(Command::DoiCheck, seed, rows))
}

/// Dispatches a resolved configuration to its runner.
pub fn run(config: &ExperimentConfig) -> Result<Vec<ResultRecord>> {
    match config.command {
        Command::Davies => run_davies(&config.sizes, config.seed),
        Command::FugledeSweep => {
            run_fuglede_sweep(&config.norms, &config.sizes, config.trials, config.seed)
        }
        Command::Counterexample => run_counterexample(&config.sizes, config.seed),
        Command::Boyd => run_boyd(&config.norms, &config.sizes, config.seed),
        Command::CalderonCheck => {
            run_calderon_check(&config.sizes, config.trials, config.seed)
        }
        Command::DoiCheck => run_doi_check(&config.sizes, config.trials, config.seed),
    }
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

/// RFC-4180 field quoting: fields containing commas, double quotes, or line
/// breaks are wrapped in double quotes with embedded quotes doubled.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        let mut out = String::with_capacity(s.len() + 2);
        out.push('"');
        for ch in s.chars() {
            if ch == '"' {
                out.push('"');
            }
            out.push(ch);
        }
        out.push('"');
        out
    } else {
        s.to_string()
    }
}

/// Renders records in the requested format. CSV uses LF line endings and
/// prints every value with 17 significant digits, which round-trips `f64`
/// exactly; JSON is a pretty-printed array of the same records.
pub fn render(records: &[ResultRecord], format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => {
            let mut out = String::from("command,param_json,metric,value,seed,wall_time_ms\n");
            for r in records {
                let _ = writeln!(
                    out,
                    "{},{},{},{:.16e},{},{}",
                    csv_field(&r.command),
                    csv_field(&r.param_json),
                    csv_field(&r.metric),
                    r.value,
                    r.seed,
                    r.wall_time_ms
                );
            }
            out
        }
        OutputFormat::Json => {
            let mut out = serde_json::to_string_pretty(records)
                .expect("records contain no non-serializable values");
            out.push('\n');
            out
        }
    }
}

/// Writes rendered records to `path`, or to stdout when no path is given.
pub fn emit(records: &[ResultRecord], format: OutputFormat, path: Option<&Path>) -> Result<()> {
    let body = render(records, format);
    match path {
        Some(p) => std::fs::write(p, body.as_bytes())
            .map_err(|e| Error::Io(format!("writing {}: {e}", p.display()))),
        None => {
            use std::io::Write as _;
            std::io::stdout()
                .write_all(body.as_bytes())
                .map_err(|e| Error::Io(format!("writing stdout: {e}")))
        }
    }
}

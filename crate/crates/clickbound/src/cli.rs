//! Command-line interface: sweeps, figure reproduction, verification, and
//! diagnostics.
//!
//! Subcommands:
//!
//! - `curve`   — one (α, r_ratio) sweep over the dark-count grid → CSV + JSON
//! - `figure1` — every configured (α, r_ratio) pair → CSVs + two SVG panels
//! - `verify`  — the oracle agreement suite → report table + JSON
//! - `probe`   — pointwise diagnostics: `W(η)`, `E_ζ`, norm factors
//!
//! Configuration comes from an optional flat TOML file (unknown keys are
//! errors), overridden by command-line flags; the cache directory can also
//! come from the `CLICKBOUND_CACHE_DIR` environment variable (flag beats
//! environment beats file). CSV output is byte-stable across reruns and
//! worker counts; timestamps appear only in the JSON sidecars.
//!
//! Exit codes: 0 success, 1 verification failure, 2 unconverged numerics or
//! runtime failure, 3 bad configuration.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bound::{
    approx_error, norm_factor, p_ideal, BoundError, BoundResult, BoundSolver, ZetaSearchSpec,
};
use crate::oracle::{agreement_suite, OracleBudget, OracleError, OracleReport};
use crate::smearing::{ModelParams, OnShellProfile, SmearingError};
use crate::svg::{log_log_plot, Series};
use crate::wightman::{boosted_overlap, OverlapTable, TableSpec, WightmanError};

/// Environment variable that overrides the configured cache directory.
pub const CACHE_DIR_ENV: &str = "CLICKBOUND_CACHE_DIR";

/// The exact sweep-CSV header; golden-tested.
pub const CSV_HEADER: &str = "p_dark,p_max,raw_bound,zeta_star,e_zeta,p_ideal,ratio";

/// Errors carrying the process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("bad configuration: {0}")]
    Config(String),
    #[error("unconverged numerics: {0}")]
    Unconverged(String),
    #[error("verification failed: {0} of {1} oracle checks")]
    VerifyFailed(usize, usize),
    #[error("I/O failure: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Smearing(#[from] SmearingError),
    #[error(transparent)]
    Wightman(#[from] WightmanError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("encode failure: {0}")]
    Encode(#[from] serde_json::Error),
}

impl CliError {
    /// Maps the error taxonomy onto the documented exit codes.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 3,
            CliError::VerifyFailed(..) => 1,
            _ => 2,
        }
    }
}

/// Full run configuration with the standard figure defaults. The TOML schema is
/// this struct flattened: every field is a top-level key; unknown keys are
/// rejected.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Smearing amplitudes to sweep (figure default: 1/2, 1, 2).
    pub alphas: Vec<f64>,
    /// Centre offsets in units of the coherent-state radius (≥ 1).
    pub r_ratios: Vec<f64>,
    /// Dark-count grid: log-spaced, ascending, in (0, 1].
    pub pdark_min: f64,
    pub pdark_max: f64,
    pub pdark_points: usize,
    /// Output directory for CSV/JSON/SVG files.
    pub out_dir: PathBuf,
    /// Overlap-table cache directory; `None` disables caching.
    pub cache_dir: Option<PathBuf>,
    /// Emit SVG panels from `figure1`.
    pub emit_svg: bool,
    /// Rapidity-table end.
    pub eta_max: f64,
    /// Relative tolerance for the overlap-table quadratures.
    pub table_rel_tol: f64,
    /// ζ search box and stopping rule.
    pub zeta_min: f64,
    pub zeta_max: f64,
    pub zeta_points: usize,
    pub golden_rel_width: f64,
    /// Node-count multiplier for the `verify` oracle budgets.
    pub oracle_scale: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            alphas: vec![0.5, 1.0, 2.0],
            r_ratios: vec![1.0, 2.0],
            pdark_min: 1e-10,
            pdark_max: 1.0,
            pdark_points: 41,
            out_dir: PathBuf::from("out"),
            cache_dir: None,
            emit_svg: true,
            eta_max: 40.0,
            table_rel_tol: 1e-9,
            zeta_min: 1e-3,
            zeta_max: 1e4,
            zeta_points: 240,
            golden_rel_width: 1e-4,
            oracle_scale: 1.0,
        }
    }
}

impl RunConfig {
    /// Validates every invariant the commands rely on.
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if self.alphas.is_empty() || self.r_ratios.is_empty() {
            return bad("alphas and r_ratios must be non-empty".into());
        }
        for &a in &self.alphas {
            if !a.is_finite() || a < 0.0 {
                return bad(format!("alpha must be finite and ≥ 0, got {a}"));
            }
        }
        for &r in &self.r_ratios {
            if !r.is_finite() || r < 1.0 {
                return bad(format!("r_ratio must be finite and ≥ 1, got {r}"));
            }
        }
        if !(self.pdark_min > 0.0 && self.pdark_min <= self.pdark_max && self.pdark_max <= 1.0) {
            return bad(format!(
                "need 0 < pdark_min ≤ pdark_max ≤ 1, got [{}, {}]",
                self.pdark_min, self.pdark_max
            ));
        }
        if self.pdark_points == 0 || (self.pdark_points > 1 && self.pdark_min == self.pdark_max) {
            return bad(format!(
                "pdark_points = {} is inconsistent with the grid range",
                self.pdark_points
            ));
        }
        if !(self.eta_max > 2.0 && self.eta_max.is_finite()) {
            return bad(format!("eta_max must be finite and > 2, got {}", self.eta_max));
        }
        if !(1e-14..=1e-2).contains(&self.table_rel_tol) {
            return bad(format!(
                "table_rel_tol must lie in [1e-14, 1e-2], got {}",
                self.table_rel_tol
            ));
        }
        if !(self.oracle_scale > 0.0 && self.oracle_scale.is_finite()) {
            return bad(format!("oracle_scale must be positive, got {}", self.oracle_scale));
        }
        self.zeta_search()
            .validated()
            .map_err(|e| CliError::Config(e.to_string()))?;
        Ok(())
    }

    /// The dark-count grid: ascending, log-spaced, endpoints included.
    pub fn pdark_grid(&self) -> Vec<f64> {
        if self.pdark_points == 1 {
            return vec![self.pdark_min];
        }
        let lo = self.pdark_min.ln();
        let hi = self.pdark_max.ln();
        let n = self.pdark_points;
        (0..n)
            .map(|i| (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp())
            .collect()
    }

    /// The ζ search spec slice of the config.
    pub fn zeta_search(&self) -> ZetaSearchSpec {
        ZetaSearchSpec {
            zeta_min: self.zeta_min,
            zeta_max: self.zeta_max,
            points: self.zeta_points,
            golden_rel_width: self.golden_rel_width,
        }
    }

    /// The overlap-table spec slice of the config.
    pub fn table_spec(&self) -> TableSpec {
        TableSpec {
            eta_max: self.eta_max,
            rel_tol: self.table_rel_tol,
            ..TableSpec::default()
        }
    }
}

/// One row of a sweep curve.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepRow {
    pub p_dark: f64,
    pub p_max: f64,
    pub raw_bound: f64,
    pub zeta_star: f64,
    pub e_zeta: f64,
    pub p_ideal: f64,
    /// `p_max / p_ideal`; absent when the ideal probability vanishes.
    pub ratio: Option<f64>,
    pub boundary: bool,
    pub limit_case: bool,
    pub converged: bool,
}

/// A full sweep for one (α, r_ratio): rows ascending in `p_dark`, plus the
/// table metadata needed to judge the numbers.
#[derive(Debug, Clone, Serialize)]
pub struct SweepCurve {
    pub alpha: f64,
    pub r_ratio: f64,
    pub w0: f64,
    pub p_ideal: f64,
    pub settings_hash: String,
    pub table_converged: bool,
    pub table_tail_ok: bool,
    pub table_loo_ok: bool,
    pub max_loo_error: f64,
    pub tail_fraction: f64,
    pub k_cutoff: f64,
    pub rows: Vec<SweepRow>,
}

impl SweepCurve {
    /// True when the table and every row's numerics converged.
    pub fn trusted(&self) -> bool {
        self.table_converged
            && self.table_tail_ok
            && self.table_loo_ok
            && self.rows.iter().all(|r| r.converged)
    }

    /// Renders the CSV body (header plus rows, `\n` line endings). Numeric
    /// cells use fixed scientific notation so reruns are byte-identical.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(96 * (self.rows.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            let ratio = match row.ratio {
                Some(r) => format!("{r:.12e}"),
                None => String::new(),
            };
            let _ = writeln!(
                out,
                "{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{}",
                row.p_dark, row.p_max, row.raw_bound, row.zeta_star, row.e_zeta, row.p_ideal, ratio
            );
        }
        out
    }
}

/// Computes the sweep for one (α, r_ratio) pair.
pub fn sweep_one(
    config: &RunConfig,
    alpha: f64,
    r_ratio: f64,
    profile: &OnShellProfile,
) -> Result<SweepCurve, CliError> {
    // Parameter validation failures are configuration errors (exit 3), the
    // same class as a rejected config-file value; only downstream numerics
    // belong to the runtime class.
    let params = ModelParams::new(alpha, r_ratio).map_err(|e| CliError::Config(e.to_string()))?;
    let table = OverlapTable::load_or_build(
        &params,
        &config.table_spec(),
        profile,
        config.cache_dir.as_deref(),
    )?;
    if !table.is_trusted() {
        return Err(CliError::Unconverged(format!(
            "overlap table for alpha={alpha}, r_ratio={r_ratio} failed validation: \
             converged={}, tail_ok={} (tail fraction {:.3e}), loo_ok={} (max LOO {:.3e})",
            table.converged(),
            table.tail_ok(),
            table.tail_fraction(),
            table.loo_ok(),
            table.max_loo_error()
        )));
    }
    let solver = BoundSolver::new(&table, config.zeta_search())?;
    let ideal = p_ideal(table.w0());
    let rows = config
        .pdark_grid()
        .into_iter()
        .map(|p| {
            let b: BoundResult = solver.solve(p)?;
            Ok(SweepRow {
                p_dark: b.p_dark,
                p_max: b.p_max,
                raw_bound: b.raw_bound,
                zeta_star: b.zeta_star,
                e_zeta: b.e_zeta,
                p_ideal: ideal,
                ratio: (ideal > 0.0).then(|| b.p_max / ideal),
                boundary: b.boundary,
                limit_case: b.limit_case,
                converged: b.converged,
            })
        })
        .collect::<Result<Vec<SweepRow>, BoundError>>()?;
    Ok(SweepCurve {
        alpha,
        r_ratio,
        w0: table.w0(),
        p_ideal: ideal,
        settings_hash: table.hash().to_string(),
        table_converged: table.converged(),
        table_tail_ok: table.tail_ok(),
        table_loo_ok: table.loo_ok(),
        max_loo_error: table.max_loo_error(),
        tail_fraction: table.tail_fraction(),
        k_cutoff: table.k_cutoff(),
        rows,
    })
}

/// Short, filename-safe rendering of a parameter value (`0.5`, `1`, `2`).
fn param_tag(v: f64) -> String {
    let s = format!("{v}");
    s.replace('-', "m")
}

fn curve_basename(alpha: f64, r_ratio: f64) -> String {
    format!("curve-alpha{}-r{}", param_tag(alpha), param_tag(r_ratio))
}

/// JSON sidecar for one curve: metadata only — settings hash, flags,
/// truncations, and the only timestamp anywhere in the outputs.
#[derive(Debug, Serialize)]
struct CurveSidecar<'a> {
    generated_unix_secs: u64,
    tool_version: &'static str,
    alpha: f64,
    r_ratio: f64,
    settings_hash: &'a str,
    w0: f64,
    p_ideal: f64,
    table_converged: bool,
    table_tail_ok: bool,
    table_loo_ok: bool,
    max_loo_error: f64,
    tail_fraction: f64,
    k_cutoff: f64,
    eta_max: f64,
    zeta_search: ZetaSearchSpec,
    pdark_min: f64,
    pdark_max: f64,
    pdark_points: usize,
    boundary_rows: usize,
    limit_case_rows: usize,
    unconverged_rows: usize,
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn unix_now() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn write_curve_outputs(config: &RunConfig, curve: &SweepCurve) -> Result<PathBuf, CliError> {
    let base = curve_basename(curve.alpha, curve.r_ratio);
    let csv_path = config.out_dir.join(format!("{base}.csv"));
    write_atomic(&csv_path, curve.to_csv().as_bytes())?;
    let sidecar = CurveSidecar {
        generated_unix_secs: unix_now(),
        tool_version: env!("CARGO_PKG_VERSION"),
        alpha: curve.alpha,
        r_ratio: curve.r_ratio,
        settings_hash: &curve.settings_hash,
        w0: curve.w0,
        p_ideal: curve.p_ideal,
        table_converged: curve.table_converged,
        table_tail_ok: curve.table_tail_ok,
        table_loo_ok: curve.table_loo_ok,
        max_loo_error: curve.max_loo_error,
        tail_fraction: curve.tail_fraction,
        k_cutoff: curve.k_cutoff,
        eta_max: config.eta_max,
        zeta_search: config.zeta_search(),
        pdark_min: config.pdark_min,
        pdark_max: config.pdark_max,
        pdark_points: config.pdark_points,
        boundary_rows: curve.rows.iter().filter(|r| r.boundary).count(),
        limit_case_rows: curve.rows.iter().filter(|r| r.limit_case).count(),
        unconverged_rows: curve.rows.iter().filter(|r| !r.converged).count(),
    };
    let json_path = config.out_dir.join(format!("{base}.json"));
    write_atomic(&json_path, serde_json::to_string_pretty(&sidecar)?.as_bytes())?;
    Ok(csv_path)
}

/// `curve`: one (α, r_ratio) sweep written to CSV + JSON sidecar.
pub fn cmd_curve(config: &RunConfig, alpha: f64, r_ratio: f64) -> Result<SweepCurve, CliError> {
    config.validate()?;
    let profile = OnShellProfile::build()?;
    let curve = sweep_one(config, alpha, r_ratio, &profile)?;
    let path = write_curve_outputs(config, &curve)?;
    log::info!("wrote {}", path.display());
    if !curve.trusted() {
        return Err(CliError::Unconverged(format!(
            "{} sweep rows failed to converge",
            curve.rows.iter().filter(|r| !r.converged).count()
        )));
    }
    Ok(curve)
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// `figure1`: sweeps for every configured (α, r_ratio) pair, per-pair CSVs,
/// and the two log–log SVG panels (bound and bound-to-ideal ratio).
pub fn cmd_figure1(config: &RunConfig) -> Result<Vec<SweepCurve>, CliError> {
    config.validate()?;
    let profile = OnShellProfile::build()?;
    let mut curves = Vec::new();
    for &alpha in &config.alphas {
        for &r_ratio in &config.r_ratios {
            let curve = sweep_one(config, alpha, r_ratio, &profile)?;
            write_curve_outputs(config, &curve)?;
            curves.push(curve);
        }
    }

    if config.emit_svg {
        let label = |c: &SweepCurve| format!("α={}, r={}", c.alpha, c.r_ratio);
        let upper: Vec<Series> = curves
            .iter()
            .enumerate()
            .map(|(i, c)| Series {
                label: label(c),
                color: PALETTE[i % PALETTE.len()],
                points: c.rows.iter().map(|r| (r.p_dark, r.p_max)).collect(),
            })
            .collect();
        write_atomic(
            &config.out_dir.join("figure1-upper.svg"),
            log_log_plot(
                "Click-probability bound vs dark-count probability",
                "p_dark",
                "p_max",
                &upper,
            )
            .as_bytes(),
        )?;
        let lower: Vec<Series> = curves
            .iter()
            .enumerate()
            .filter(|(_, c)| c.p_ideal > 0.0)
            .map(|(i, c)| Series {
                label: label(c),
                color: PALETTE[i % PALETTE.len()],
                points: c
                    .rows
                    .iter()
                    .filter_map(|r| r.ratio.map(|q| (r.p_dark, q)))
                    .collect(),
            })
            .collect();
        write_atomic(
            &config.out_dir.join("figure1-lower.svg"),
            log_log_plot(
                "Bound relative to the ideal-detector probability",
                "p_dark",
                "p_max / p_ideal",
                &lower,
            )
            .as_bytes(),
        )?;
    }

    let untrusted: Vec<String> = curves
        .iter()
        .filter(|c| !c.trusted())
        .map(|c| format!("(alpha={}, r={})", c.alpha, c.r_ratio))
        .collect();
    if !untrusted.is_empty() {
        return Err(CliError::Unconverged(format!(
            "curves failed to converge: {}",
            untrusted.join(", ")
        )));
    }
    Ok(curves)
}

/// `verify`: the oracle agreement suite, as a fixed-width text table on
/// stdout and a JSON report on disk. Exit 0 iff every check passes.
pub fn cmd_verify(config: &RunConfig) -> Result<Vec<OracleReport>, CliError> {
    config.validate()?;
    let profile = OnShellProfile::build()?;
    let budget = OracleBudget::default().scaled(config.oracle_scale);
    let reports = agreement_suite(&profile, &budget)?;

    let mut text = String::new();
    // Header literals share the data rows' width specs so the columns stay
    // aligned if either changes.
    #[allow(clippy::write_literal)]
    let _ = writeln!(
        text,
        "{:<62} {:>13} {:>13} {:>11} {:>9}  {}",
        "check", "main", "oracle", "deviation", "budget", "verdict"
    );
    for r in &reports {
        let _ = writeln!(
            text,
            "{:<62} {:>13.6e} {:>13.6e} {:>11.3e} {:>9.1e}  {}",
            r.name,
            r.main_re.hypot(r.main_im),
            r.oracle_re.hypot(r.oracle_im),
            r.rel_deviation,
            r.budget_evaluations as f64,
            if r.pass { "pass" } else { "FAIL" }
        );
    }
    print!("{text}");

    #[derive(Serialize)]
    struct VerifySidecar<'a> {
        generated_unix_secs: u64,
        tool_version: &'static str,
        oracle_scale: f64,
        all_pass: bool,
        reports: &'a [OracleReport],
    }
    let all_pass = reports.iter().all(|r| r.pass);
    write_atomic(
        &config.out_dir.join("verify.json"),
        serde_json::to_string_pretty(&VerifySidecar {
            generated_unix_secs: unix_now(),
            tool_version: env!("CARGO_PKG_VERSION"),
            oracle_scale: config.oracle_scale,
            all_pass,
            reports: &reports,
        })?
        .as_bytes(),
    )?;

    if !all_pass {
        let failed = reports.iter().filter(|r| !r.pass).count();
        return Err(CliError::VerifyFailed(failed, reports.len()));
    }
    Ok(reports)
}

/// `probe`: human-readable diagnostics for one parameter point.
pub fn cmd_probe(
    config: &RunConfig,
    alpha: f64,
    r_ratio: f64,
    zetas: &[f64],
    etas: &[f64],
) -> Result<String, CliError> {
    config.validate()?;
    let params = ModelParams::new(alpha, r_ratio).map_err(|e| CliError::Config(e.to_string()))?;
    let profile = OnShellProfile::build()?;
    let table = OverlapTable::load_or_build(
        &params,
        &config.table_spec(),
        &profile,
        config.cache_dir.as_deref(),
    )?;
    let quad = crate::quad::QuadratureSpec::new(config.table_rel_tol, 40_000, 16, None)
        .map_err(BoundError::from)?;

    let mut out = String::new();
    let _ = writeln!(out, "probe: alpha = {alpha}, r_ratio = {r_ratio}");
    let _ = writeln!(
        out,
        "table: W0 = {:.12e}  p_ideal = {:.12e}  hash = {}  trusted = {}",
        table.w0(),
        p_ideal(table.w0()),
        table.hash(),
        table.is_trusted()
    );
    let _ = writeln!(
        out,
        "       max LOO error = {:.3e}  tail fraction = {:.3e}  k cutoff = {:.4}",
        table.max_loo_error(),
        table.tail_fraction(),
        table.k_cutoff()
    );

    let _ = writeln!(out, "\nboosted overlap samples (direct quadrature | table interpolant):");
    let _ = writeln!(
        out,
        "{:>10} {:>23} {:>23} {:>23} {:>23}",
        "eta", "Re W (direct)", "Im W (direct)", "Re W (table)", "Im W (table)"
    );
    for &eta in etas {
        let direct = boosted_overlap(eta, &params, &profile, &quad)?;
        let interp = table.w_at(eta);
        let _ = writeln!(
            out,
            "{eta:>10.4} {:>23.12e} {:>23.12e} {:>23.12e} {:>23.12e}",
            direct.value.re, direct.value.im, interp.re, interp.im
        );
    }

    let _ = writeln!(
        out,
        "\nwindow diagnostics (phi(η) = Re exp(W(η) − W0) is the bound integrand profile):"
    );
    let _ = writeln!(out, "{:>10} {:>23}", "eta", "phi");
    for &eta in etas {
        let w = table.w_at(eta);
        let phi = (w.re - table.w0()).exp() * w.im.cos();
        let _ = writeln!(out, "{eta:>10.4} {phi:>23.12e}");
    }

    let _ = writeln!(out, "\napproximation error and norm factor:");
    let _ = writeln!(
        out,
        "{:>12} {:>23} {:>23} {:>10}",
        "zeta", "E_zeta", "norm N(zeta)", "flags"
    );
    for &zeta in zetas {
        let e = approx_error(zeta, &table)?;
        let n = norm_factor(zeta)?;
        let mut flags = Vec::new();
        if !e.converged {
            flags.push("E-unconverged");
        }
        if n.overflowed {
            flags.push("N-overflow");
        }
        let _ = writeln!(
            out,
            "{zeta:>12.6e} {:>23.12e} {:>23.12e} {:>10}",
            e.value,
            n.value,
            if flags.is_empty() { "-".to_string() } else { flags.join(",") }
        );
    }

    print!("{out}");
    Ok(out)
}

// ---------------------------------------------------------------------------
// Argument parsing and dispatch.

#[derive(Debug, Parser)]
#[command(
    name = "clickbound",
    version,
    about = "Upper bounds on finite-size detector click probabilities from dark counts"
)]
pub struct CliArgs {
    #[command(subcommand)]
    command: CommandArgs,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Flat TOML configuration file; flags override its keys.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Smallest dark-count probability on the grid.
    #[arg(long, value_name = "P")]
    pdark_min: Option<f64>,
    /// Largest dark-count probability on the grid.
    #[arg(long, value_name = "P")]
    pdark_max: Option<f64>,
    /// Number of log-spaced dark-count grid points.
    #[arg(long, value_name = "N")]
    pdark_points: Option<usize>,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    out_dir: Option<PathBuf>,
    /// Overlap-table cache directory (also: CLICKBOUND_CACHE_DIR).
    #[arg(long, value_name = "DIR")]
    cache_dir: Option<PathBuf>,
    /// Relative tolerance for the overlap-table quadratures.
    #[arg(long, value_name = "TOL")]
    tolerance: Option<f64>,
    /// Emit SVG plots (figure1).
    #[arg(long, overrides_with = "no_svg")]
    svg: bool,
    /// Do not emit SVG plots.
    #[arg(long)]
    no_svg: bool,
}

impl CommonArgs {
    /// Config-file < environment < flags.
    fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut config = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::Config(format!("cannot read {}: {e}", path.display()))
                })?;
                toml::from_str::<RunConfig>(&text)
                    .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
            }
            None => RunConfig::default(),
        };
        if let Ok(dir) = std::env::var(CACHE_DIR_ENV) {
            if !dir.is_empty() {
                config.cache_dir = Some(PathBuf::from(dir));
            }
        }
        if let Some(v) = self.pdark_min {
            config.pdark_min = v;
        }
        if let Some(v) = self.pdark_max {
            config.pdark_max = v;
        }
        if let Some(v) = self.pdark_points {
            config.pdark_points = v;
        }
        if let Some(v) = &self.out_dir {
            config.out_dir = v.clone();
        }
        if let Some(v) = &self.cache_dir {
            config.cache_dir = Some(v.clone());
        }
        if let Some(v) = self.tolerance {
            config.table_rel_tol = v;
        }
        if self.svg {
            config.emit_svg = true;
        } else if self.no_svg {
            config.emit_svg = false;
        }
        config.validate()?;
        Ok(config)
    }
}

#[derive(Debug, Subcommand)]
enum CommandArgs {
    /// Sweep the bound over the dark-count grid for one (alpha, ratio).
    Curve {
        #[command(flatten)]
        common: CommonArgs,
        /// Smearing amplitude (default: first configured value).
        #[arg(long, value_name = "A")]
        alpha: Option<f64>,
        /// Centre offset in coherent-state radii (default: first configured value).
        #[arg(long, value_name = "R")]
        ratio: Option<f64>,
    },
    /// Sweep every configured (alpha, ratio) pair and render both panels.
    Figure1 {
        #[command(flatten)]
        common: CommonArgs,
        /// Override the configured amplitude list (repeatable).
        #[arg(long, value_name = "A")]
        alpha: Vec<f64>,
        /// Override the configured offset list (repeatable).
        #[arg(long, value_name = "R")]
        ratio: Vec<f64>,
    },
    /// Run the brute-force oracle agreement suite.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Print pointwise diagnostics: W(eta), E_zeta, norm factors.
    Probe {
        #[command(flatten)]
        common: CommonArgs,
        /// Smearing amplitude.
        #[arg(long, value_name = "A")]
        alpha: Option<f64>,
        /// Centre offset in coherent-state radii.
        #[arg(long, value_name = "R")]
        ratio: Option<f64>,
        /// Window variances to probe (comma-separated, repeatable).
        #[arg(long, value_delimiter = ',', value_name = "Z")]
        zeta: Vec<f64>,
        /// Rapidities to probe (comma-separated, repeatable).
        #[arg(long, value_delimiter = ',', value_name = "E", allow_negative_numbers = true)]
        eta: Vec<f64>,
    },
}

/// Parses `args` and runs the selected command; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match CliArgs::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            // Help/version are successful outputs, not config failures.
            let benign = matches!(
                err.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = err.print();
            return if benign { 0 } else { 3 };
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

fn dispatch(cli: CliArgs) -> Result<(), CliError> {
    match cli.command {
        CommandArgs::Curve { common, alpha, ratio } => {
            let config = common.resolve()?;
            let a = alpha.unwrap_or(config.alphas[0]);
            let r = ratio.unwrap_or(config.r_ratios[0]);
            cmd_curve(&config, a, r)?;
        }
        CommandArgs::Figure1 { common, alpha, ratio } => {
            let mut config = common.resolve()?;
            if !alpha.is_empty() {
                config.alphas = alpha;
            }
            if !ratio.is_empty() {
                config.r_ratios = ratio;
            }
            config.validate()?;
            cmd_figure1(&config)?;
        }
        CommandArgs::Verify { common } => {
            let config = common.resolve()?;
            cmd_verify(&config)?;
        }
        CommandArgs::Probe {
            common,
            alpha,
            ratio,
            zeta,
            eta,
        } => {
            let config = common.resolve()?;
            let a = alpha.unwrap_or(config.alphas[0]);
            let r = ratio.unwrap_or(config.r_ratios[0]);
            let zetas = if zeta.is_empty() {
                vec![1e-3, 1e-1, std::f64::consts::PI.powi(2), 1e2, 1e4]
            } else {
                zeta
            };
            let etas = if eta.is_empty() {
                vec![0.0, 0.3, 1.0, 2.0, 5.0]
            } else {
                eta
            };
            cmd_probe(&config, a, r, &zetas, &etas)?;
        }
    }
    Ok(())
}

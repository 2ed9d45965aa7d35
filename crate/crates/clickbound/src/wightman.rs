//! Smeared two-point overlaps along the boost orbit.
//!
//! The central objects are the self-overlap
//!
//! ```text
//! W0 = 2π² α² ∫₀^∞ h(u)²/u du
//! ```
//!
//! and the boosted overlap `W(η)` between the smearing profile and its image
//! under a boost of rapidity `η` about the origin. In momentum space, with
//! `ĝ(u) = (2π)² α h(u)/u` the radial on-shell transform from
//! [`crate::smearing`], the boosted overlap reads
//!
//! ```text
//! W(η) = (1/8π²) ∫₀^∞ k dk ∫₋₁¹ dμ  e^{i√2 r k [μ(cosh η − 1) + sinh η]}
//!                                   ĝ(√2 k) ĝ(√2 k (cosh η + μ sinh η))
//! ```
//!
//! Evaluating this form directly works well for small `|η|`, but the phase
//! frequency along `k` grows like `e^{|η|}` and the two `ĝ` factors probe
//! wildly different scales, so for `|η|` beyond a small switch point the
//! module integrates an equivalent reduced form obtained by the substitution
//! `k = ρ(1 − σ)`, `k(cosh η + μ sinh η) = ρσ`:
//!
//! ```text
//! W(η) = (1/(8π² |sinh η|)) ∫₀^{ρmax} ρ e^{i√2 r t ρ}
//!            [ ∫_{σ−}^{σ+} ĝ(√2 ρ (1−σ)) ĝ(√2 ρ σ) dσ ] dρ,
//! t  = tanh(η/2),   σ∓ = 1/(1 + e^{±|η|}),
//! ```
//!
//! whose phase frequency `√2 r |t|` stays bounded for all rapidities. Both
//! `ĝ` factors vanish beyond the profile support, so the `ρ` integral
//! truncates exactly at `ρmax = √2 u_max`.
//!
//! [`OverlapTable`] samples `W(η)` on a grid that is log-dense near `η = 0`
//! (where the imaginary part turns over) and uniform beyond `η = 1`, fits a
//! cubic spline through the samples, and validates itself with a
//! leave-one-out interpolation check and a tail-size check. Tables are
//! cached as JSON keyed by a content hash of every input that affects the
//! numbers, so reruns are byte-identical whether the cache is warm or cold.

use std::cell::Cell;
use std::f64::consts::{PI, SQRT_2};
use std::io::Write as _;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::interp::Spline;
use crate::quad::{integrate_1d, integrate_1d_with_hint, integrate_2d_with_hint, QuadError, QuadResult, QuadratureSpec};
use crate::smearing::{ghat, ModelParams, OnShellProfile, SmearingError};

/// Rapidity below which the direct `(k, μ)` double integral is used; above
/// it the reduced `(ρ, σ)` form takes over. The two agree to ~1e-13 in the
/// overlap region, and keeping a direct path at small `|η|` means the
/// `η → 0` limit is probed by a genuinely different quadrature than the
/// 1-D self-overlap.
pub const ETA_SWITCH: f64 = 0.05;

/// Default end of the tabulated rapidity range. The overlap decays like
/// `e^{-η}` once the boosted copy separates, so by `η = 40` it is ~19 orders
/// of magnitude below `W0` — far past the `1e-6 W0` tail threshold.
pub const DEFAULT_ETA_MAX: f64 = 40.0;

/// Relative tail size `|W(η_max)|/W0` above which a table is flagged.
pub const TAIL_THRESHOLD: f64 = 1e-6;

/// Leave-one-out interpolation error budget, relative to `W0`.
pub const LOO_THRESHOLD: f64 = 1e-4;

/// Imaginary leak budget for analytically real outputs, relative to the
/// real part.
pub const IM_LEAK_THRESHOLD: f64 = 1e-10;

/// Cache-format version; bump on any change to the table layout or to the
/// numerics that produce it.
const CACHE_VERSION: u32 = 1;

/// Errors from overlap evaluation and table construction.
#[derive(Debug, Error)]
pub enum WightmanError {
    #[error("quadrature failure: {0}")]
    Quad(#[from] QuadError),
    #[error("smearing profile failure: {0}")]
    Smearing(#[from] SmearingError),
    #[error("rapidity must be finite, got {0}")]
    BadRapidity(f64),
    #[error(
        "analytically real overlap came back with Im/Re = {im_over_re:.3e} \
         (budget {IM_LEAK_THRESHOLD:.0e})"
    )]
    ImaginaryLeak { im_over_re: f64 },
    #[error("cache I/O failure: {0}")]
    Cache(#[from] std::io::Error),
    #[error("cache encode/decode failure: {0}")]
    Encode(#[from] serde_json::Error),
    #[error("corrupt overlap table: {0}")]
    Corrupt(String),
}

/// Grid and tolerance choices for [`OverlapTable::build`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TableSpec {
    /// End of the tabulated rapidity range.
    pub eta_max: f64,
    /// First nonzero grid point; the log-dense block starts here.
    pub dense_min: f64,
    /// Number of log-spaced samples in `[dense_min, 1)`.
    pub dense_points: usize,
    /// Uniform step from `η = 1` to `eta_max`.
    pub coarse_step: f64,
    /// Relative tolerance for each `W(η)` quadrature.
    pub rel_tol: f64,
}

impl Default for TableSpec {
    fn default() -> Self {
        Self {
            eta_max: DEFAULT_ETA_MAX,
            dense_min: 1e-3,
            dense_points: 160,
            coarse_step: 0.0625,
            rel_tol: 1e-9,
        }
    }
}

impl TableSpec {
    /// The rapidity sample points: `{0}`, then `dense_points` log-spaced
    /// values in `[dense_min, 1)`, then uniform steps through `eta_max`.
    pub fn eta_grid(&self) -> Vec<f64> {
        let mut grid = vec![0.0];
        let span = -self.dense_min.log10();
        for j in 0..self.dense_points {
            grid.push(self.dense_min * 10f64.powf(span * j as f64 / self.dense_points as f64));
        }
        let coarse = ((self.eta_max - 1.0) / self.coarse_step).round() as usize;
        for i in 0..=coarse {
            grid.push(1.0 + self.coarse_step * i as f64);
        }
        grid
    }
}

/// Quadrature spec used for a single `W(η)` evaluation.
fn overlap_quad_spec(rel_tol: f64) -> Result<QuadratureSpec, WightmanError> {
    Ok(QuadratureSpec::new(rel_tol, 40_000, 16, None)?)
}

/// Self-overlap `W0 = 2π² α² ∫₀^{u_max} h(u)²/u du`. The integrand is
/// `(h/u)·h` so the `u → 0` limit is evaluated without a removable
/// singularity; it vanishes identically beyond the profile support, so the
/// finite upper limit is exact, not a truncation.
pub fn w2_self(
    params: &ModelParams,
    profile: &OnShellProfile,
    spec: &QuadratureSpec,
) -> Result<QuadResult<f64>, WightmanError> {
    let raw = integrate_1d(
        |u| profile.eval_over_u(u) * profile.eval(u),
        0.0,
        profile.u_max(),
        spec,
    )?;
    let scale = 2.0 * PI * PI * params.alpha * params.alpha;
    Ok(QuadResult {
        value: scale * raw.value,
        error: scale * raw.error,
        evaluations: raw.evaluations,
        converged: raw.converged,
    })
}

/// Boosted overlap `W(η)`. Dispatches between the direct `(k, μ)` double
/// integral (small `|η|`) and the reduced `(ρ, σ)` form (everything else);
/// see the module docs for both. The reported evaluation count is the
/// number of integrand samples at the `ĝ·ĝ` level on either path.
pub fn boosted_overlap(
    eta: f64,
    params: &ModelParams,
    profile: &OnShellProfile,
    spec: &QuadratureSpec,
) -> Result<QuadResult<Complex64>, WightmanError> {
    if !eta.is_finite() {
        return Err(WightmanError::BadRapidity(eta));
    }
    let result = if eta.abs() <= ETA_SWITCH {
        boosted_direct(eta, params, profile, spec)?
    } else {
        boosted_reduced(eta, params, profile, spec)?
    };
    if eta == 0.0 {
        // W(0) is analytically real; enforce that the quadrature agrees
        // before anyone consumes the imaginary part.
        let (re, im) = (result.value.re.abs(), result.value.im.abs());
        if im > IM_LEAK_THRESHOLD * re {
            return Err(WightmanError::ImaginaryLeak {
                im_over_re: im / re,
            });
        }
    }
    Ok(result)
}

/// Direct `(k, μ)` form, sound for small rapidities where the phase is slow.
fn boosted_direct(
    eta: f64,
    params: &ModelParams,
    profile: &OnShellProfile,
    spec: &QuadratureSpec,
) -> Result<QuadResult<Complex64>, WightmanError> {
    let ch = eta.cosh();
    let sh = eta.sinh();
    let k_max = profile.u_max() / SQRT_2;
    let phase_scale = SQRT_2 * params.r_ratio;
    let integrand = |k: f64, mu: f64| -> Complex64 {
        let amp = k * ghat(SQRT_2 * k, params, profile)
            * ghat(SQRT_2 * k * (ch + mu * sh), params, profile);
        Complex64::from_polar(amp, phase_scale * k * (mu * (ch - 1.0) + sh))
    };
    let freq_k = phase_scale * ((ch - 1.0).abs() + sh.abs());
    let freq_mu = phase_scale * k_max * (ch - 1.0).abs();
    let raw = integrate_2d_with_hint(integrand, 0.0, k_max, -1.0, 1.0, freq_k, freq_mu, spec)?;
    let scale = 1.0 / (8.0 * PI * PI);
    Ok(QuadResult {
        value: scale * raw.value,
        error: scale * raw.error,
        evaluations: raw.evaluations,
        converged: raw.converged,
    })
}

/// Reduced `(ρ, σ)` form with bounded phase frequency `√2 r |tanh(η/2)|`.
fn boosted_reduced(
    eta: f64,
    params: &ModelParams,
    profile: &OnShellProfile,
    spec: &QuadratureSpec,
) -> Result<QuadResult<Complex64>, WightmanError> {
    let abs_eta = eta.abs();
    let t = (eta / 2.0).tanh();
    let sigma_lo = 1.0 / (1.0 + abs_eta.exp());
    let sigma_hi = 1.0 / (1.0 + (-abs_eta).exp());
    let rho_max = SQRT_2 * profile.u_max();
    let phase_freq = SQRT_2 * params.r_ratio * t;

    // The inner σ integral is smooth and non-oscillatory; run it a decade
    // tighter than the outer target so its noise stays below the outer
    // error estimate.
    let inner_spec = spec.with_tol((spec.rel_tol * 0.1).max(1e-14))?;
    let inner_failed = Cell::new(false);
    let inner_evals = Cell::new(0u64);

    let integrand = |rho: f64| -> Complex64 {
        let inner = integrate_1d(
            |sigma: f64| {
                ghat(SQRT_2 * rho * (1.0 - sigma), params, profile)
                    * ghat(SQRT_2 * rho * sigma, params, profile)
            },
            sigma_lo,
            sigma_hi,
            &inner_spec,
        );
        match inner {
            Ok(r) => {
                if !r.converged {
                    inner_failed.set(true);
                }
                inner_evals.set(inner_evals.get() + r.evaluations);
                Complex64::from_polar(rho * r.value, phase_freq * rho)
            }
            Err(_) => {
                inner_failed.set(true);
                Complex64::ZERO
            }
        }
    };
    let raw = integrate_1d_with_hint(integrand, 0.0, rho_max, phase_freq.abs(), spec)?;
    let scale = 1.0 / (8.0 * PI * PI * abs_eta.sinh());
    Ok(QuadResult {
        value: scale * raw.value,
        error: scale * raw.error,
        evaluations: inner_evals.get(),
        converged: raw.converged && !inner_failed.get(),
    })
}

/// On-disk form of an [`OverlapTable`]; plain arrays only.
#[derive(Debug, Serialize, Deserialize)]
struct CacheRecord {
    version: u32,
    hash: String,
    alpha: f64,
    r_ratio: f64,
    table_spec: TableSpec,
    /// Momentum-space truncation inherited from the profile, `k ≤ u_max/√2`.
    k_cutoff: f64,
    eta: Vec<f64>,
    w_re: Vec<f64>,
    w_im: Vec<f64>,
    /// Per-sample quadrature error estimates for `W(η_i)`.
    sample_errors: Vec<f64>,
    w0: f64,
    w0_error: f64,
    max_loo_error: f64,
    tail_fraction: f64,
    converged: bool,
    tail_ok: bool,
    loo_ok: bool,
    interp_order: u32,
}

/// A validated, interpolating table of `W(η)` on `[0, η_max]`, plus `W0`.
///
/// Negative rapidities are served by conjugation (`W(−η) = conj W(η)`), and
/// rapidities beyond `η_max` return zero — the build checks that the
/// neglected tail is below [`TAIL_THRESHOLD`] relative to `W0`.
#[derive(Debug, Clone)]
pub struct OverlapTable {
    params: ModelParams,
    table_spec: TableSpec,
    eta: Vec<f64>,
    w: Vec<Complex64>,
    sample_errors: Vec<f64>,
    w0: f64,
    w0_error: f64,
    k_cutoff: f64,
    max_loo_error: f64,
    tail_fraction: f64,
    converged: bool,
    tail_ok: bool,
    loo_ok: bool,
    hash: String,
    re_spline: Spline,
    im_spline: Spline,
}

impl OverlapTable {
    /// Content hash of everything that affects the tabulated numbers:
    /// model parameters, grid layout, tolerances, and the profile's own
    /// discretisation. Two runs with equal hashes produce bit-identical
    /// tables.
    pub fn settings_hash(params: &ModelParams, spec: &TableSpec, profile: &OnShellProfile) -> String {
        let mut hasher = Sha256::new();
        let mut feed = |label: &str, bits: u64| {
            hasher.update(label.as_bytes());
            hasher.update(bits.to_le_bytes());
        };
        feed("version", CACHE_VERSION as u64);
        feed("alpha", params.alpha.to_bits());
        feed("r_ratio", params.r_ratio.to_bits());
        feed("eta_max", spec.eta_max.to_bits());
        feed("dense_min", spec.dense_min.to_bits());
        feed("dense_points", spec.dense_points as u64);
        feed("coarse_step", spec.coarse_step.to_bits());
        feed("rel_tol", spec.rel_tol.to_bits());
        feed("eta_switch", ETA_SWITCH.to_bits());
        feed("u_max", profile.u_max().to_bits());
        feed("slope", profile.slope_at_zero().to_bits());
        let digest = hasher.finalize();
        let mut hex = String::with_capacity(16);
        for byte in digest.iter().take(8) {
            hex.push_str(&format!("{byte:02x}"));
        }
        hex
    }

    /// Builds the table by quadrature at every grid point (in parallel; the
    /// node order, and hence the result, is independent of the worker
    /// count), then runs the tail and leave-one-out validations.
    pub fn build(
        params: &ModelParams,
        table_spec: &TableSpec,
        profile: &OnShellProfile,
    ) -> Result<Self, WightmanError> {
        let eta = table_spec.eta_grid();
        let quad_spec = overlap_quad_spec(table_spec.rel_tol)?;
        // W0 a decade tighter than the samples: every validation threshold
        // and every downstream ratio is expressed relative to it.
        let w0_spec = overlap_quad_spec((table_spec.rel_tol * 0.1).max(1e-14))?;
        let w0_result = w2_self(params, profile, &w0_spec)?;

        let samples: Result<Vec<QuadResult<Complex64>>, WightmanError> = eta
            .par_iter()
            .map(|&e| boosted_overlap(e, params, profile, &quad_spec))
            .collect();
        let samples = samples?;

        let w: Vec<Complex64> = samples.iter().map(|s| s.value).collect();
        let sample_errors: Vec<f64> = samples.iter().map(|s| s.error).collect();
        let converged = w0_result.converged && samples.iter().all(|s| s.converged);
        let hash = Self::settings_hash(params, table_spec, profile);
        Self::assemble(
            *params,
            *table_spec,
            eta,
            w,
            sample_errors,
            w0_result.value,
            w0_result.error,
            profile.u_max() / SQRT_2,
            converged,
            hash,
        )
    }

    /// Finishes construction from raw samples: fits the splines, measures
    /// the tail fraction and the leave-one-out interpolation error, and
    /// stores the verdicts.
    #[allow(clippy::too_many_arguments)]
    fn assemble(
        params: ModelParams,
        table_spec: TableSpec,
        eta: Vec<f64>,
        w: Vec<Complex64>,
        sample_errors: Vec<f64>,
        w0: f64,
        w0_error: f64,
        k_cutoff: f64,
        converged: bool,
        hash: String,
    ) -> Result<Self, WightmanError> {
        let n = eta.len();
        if n < 8 || w.len() != n || sample_errors.len() != n {
            return Err(WightmanError::Corrupt(format!(
                "inconsistent table lengths: eta {}, w {}, errors {}",
                n,
                w.len(),
                sample_errors.len()
            )));
        }
        if !eta.windows(2).all(|p| p[1] > p[0]) || eta[0] != 0.0 {
            return Err(WightmanError::Corrupt(
                "rapidity grid must start at 0 and increase strictly".into(),
            ));
        }

        let re: Vec<f64> = w.iter().map(|c| c.re).collect();
        let im: Vec<f64> = w.iter().map(|c| c.im).collect();
        let re_spline = Spline::new(eta.clone(), re.clone());
        let im_spline = Spline::new(eta.clone(), im.clone());

        let tail_fraction = if w0 > 0.0 { w[n - 1].norm() / w0 } else { 0.0 };
        let tail_ok = tail_fraction <= TAIL_THRESHOLD;

        // Leave-one-out: drop each interior node, refit, and predict it.
        let mut max_loo_error = 0.0f64;
        for i in 1..n - 1 {
            let xs: Vec<f64> = eta
                .iter()
                .enumerate()
                .filter_map(|(j, &x)| (j != i).then_some(x))
                .collect();
            let ys_re: Vec<f64> = re
                .iter()
                .enumerate()
                .filter_map(|(j, &y)| (j != i).then_some(y))
                .collect();
            let ys_im: Vec<f64> = im
                .iter()
                .enumerate()
                .filter_map(|(j, &y)| (j != i).then_some(y))
                .collect();
            let dev_re = Spline::new(xs.clone(), ys_re).eval(eta[i]) - re[i];
            let dev_im = Spline::new(xs, ys_im).eval(eta[i]) - im[i];
            max_loo_error = max_loo_error.max(dev_re.hypot(dev_im));
        }
        let loo_ok = max_loo_error <= LOO_THRESHOLD * w0 || w0 == 0.0;

        Ok(Self {
            params,
            table_spec,
            eta,
            w,
            sample_errors,
            w0,
            w0_error,
            k_cutoff,
            max_loo_error,
            tail_fraction,
            converged,
            tail_ok,
            loo_ok,
            hash,
            re_spline,
            im_spline,
        })
    }

    /// Loads the table for these settings from `cache_dir`, or builds it
    /// and writes the cache entry. Unreadable or mismatched cache files are
    /// discarded and rebuilt, never trusted.
    pub fn load_or_build(
        params: &ModelParams,
        table_spec: &TableSpec,
        profile: &OnShellProfile,
        cache_dir: Option<&Path>,
    ) -> Result<Self, WightmanError> {
        let hash = Self::settings_hash(params, table_spec, profile);
        let path = cache_dir.map(|d| d.join(format!("overlap-{hash}.json")));
        if let Some(p) = &path {
            if let Some(table) = Self::try_load(p, &hash) {
                return Ok(table);
            }
        }
        let table = Self::build(params, table_spec, profile)?;
        if let Some(p) = &path {
            table.store(p)?;
        }
        Ok(table)
    }

    fn try_load(path: &Path, expected_hash: &str) -> Option<Self> {
        let text = std::fs::read_to_string(path).ok()?;
        let record: CacheRecord = serde_json::from_str(&text).ok()?;
        if record.version != CACHE_VERSION || record.hash != expected_hash {
            log::warn!(
                "overlap cache {} is stale (version {} hash {}); rebuilding",
                path.display(),
                record.version,
                record.hash
            );
            return None;
        }
        match Self::from_record(record) {
            Ok(table) => Some(table),
            Err(err) => {
                log::warn!("overlap cache {} is corrupt ({err}); rebuilding", path.display());
                None
            }
        }
    }

    fn from_record(record: CacheRecord) -> Result<Self, WightmanError> {
        let params = ModelParams::new(record.alpha, record.r_ratio)?;
        let w: Vec<Complex64> = record
            .w_re
            .iter()
            .zip(&record.w_im)
            .map(|(&re, &im)| Complex64::new(re, im))
            .collect();
        let mut table = Self::assemble(
            params,
            record.table_spec,
            record.eta,
            w,
            record.sample_errors,
            record.w0,
            record.w0_error,
            record.k_cutoff,
            record.converged,
            record.hash,
        )?;
        // Preserve the stored verdicts (assemble recomputes them and must
        // agree; a mismatch means the file was edited by hand).
        if table.tail_ok != record.tail_ok || table.loo_ok != record.loo_ok {
            return Err(WightmanError::Corrupt(
                "stored validation flags disagree with recomputation".into(),
            ));
        }
        table.converged = record.converged;
        Ok(table)
    }

    /// Writes the cache entry atomically (temp file + rename) so concurrent
    /// runs never observe a torn file.
    fn store(&self, path: &Path) -> Result<(), WightmanError> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        let record = CacheRecord {
            version: CACHE_VERSION,
            hash: self.hash.clone(),
            alpha: self.params.alpha,
            r_ratio: self.params.r_ratio,
            table_spec: self.table_spec,
            k_cutoff: self.k_cutoff,
            eta: self.eta.clone(),
            w_re: self.w.iter().map(|c| c.re).collect(),
            w_im: self.w.iter().map(|c| c.im).collect(),
            sample_errors: self.sample_errors.clone(),
            w0: self.w0,
            w0_error: self.w0_error,
            max_loo_error: self.max_loo_error,
            tail_fraction: self.tail_fraction,
            converged: self.converged,
            tail_ok: self.tail_ok,
            loo_ok: self.loo_ok,
            interp_order: 3,
        };
        let tmp: PathBuf = path.with_extension(format!("json.tmp{}", std::process::id()));
        {
            let mut file = std::fs::File::create(&tmp)?;
            file.write_all(serde_json::to_string(&record)?.as_bytes())?;
            file.sync_all()?;
        }
        std::fs::rename(&tmp, path)?;
        Ok(())
    }

    /// Interpolated `W(η)` for any rapidity: spline on `[0, η_max]`,
    /// conjugate symmetry for `η < 0`, zero beyond the tabulated range.
    pub fn w_at(&self, eta: f64) -> Complex64 {
        let abs_eta = eta.abs();
        if !abs_eta.is_finite() || abs_eta > self.table_spec.eta_max {
            return Complex64::ZERO;
        }
        let value = Complex64::new(self.re_spline.eval(abs_eta), self.im_spline.eval(abs_eta));
        if eta < 0.0 {
            value.conj()
        } else {
            value
        }
    }

    /// Self-overlap `W0`.
    pub fn w0(&self) -> f64 {
        self.w0
    }

    /// Quadrature error estimate on `W0`.
    pub fn w0_error(&self) -> f64 {
        self.w0_error
    }

    /// Model parameters the table was built for.
    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// Grid/tolerance settings the table was built with.
    pub fn table_spec(&self) -> &TableSpec {
        &self.table_spec
    }

    /// The rapidity sample points.
    pub fn eta(&self) -> &[f64] {
        &self.eta
    }

    /// The sampled overlaps, aligned with [`Self::eta`].
    pub fn samples(&self) -> &[Complex64] {
        &self.w
    }

    /// Per-sample quadrature error estimates, aligned with [`Self::eta`].
    pub fn sample_errors(&self) -> &[f64] {
        &self.sample_errors
    }

    /// Momentum cutoff `k ≤ u_max/√2` inherited from the profile support.
    pub fn k_cutoff(&self) -> f64 {
        self.k_cutoff
    }

    /// Largest leave-one-out interpolation deviation, in absolute terms.
    pub fn max_loo_error(&self) -> f64 {
        self.max_loo_error
    }

    /// `|W(η_max)| / W0`.
    pub fn tail_fraction(&self) -> f64 {
        self.tail_fraction
    }

    /// True when every quadrature met its tolerance.
    pub fn converged(&self) -> bool {
        self.converged
    }

    /// True when the neglected tail is below [`TAIL_THRESHOLD`].
    pub fn tail_ok(&self) -> bool {
        self.tail_ok
    }

    /// True when the leave-one-out check passed [`LOO_THRESHOLD`].
    pub fn loo_ok(&self) -> bool {
        self.loo_ok
    }

    /// All validations green: quadratures converged, tail negligible,
    /// interpolation dense enough.
    pub fn is_trusted(&self) -> bool {
        self.converged && self.tail_ok && self.loo_ok
    }

    /// The settings hash this table was built under.
    pub fn hash(&self) -> &str {
        &self.hash
    }
}

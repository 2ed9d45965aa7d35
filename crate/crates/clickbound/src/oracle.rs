//! Independent brute-force validators for the main numerical path.
//!
//! Everything here deliberately bypasses the reductions the production code
//! relies on: [`ft_onshell_bruteforce`] evaluates the on-shell Fourier
//! transform as an honest quadrature over the 4-D support ball (no radial
//! Bessel reduction, no tabulated profile), and [`w2_bruteforce`] evaluates
//! the boosted overlap as a direct momentum integral that uses the
//! brute-force transform for *both* factors (no substitution tricks, no
//! reuse of the production phase/amplitude split). Agreement between the
//! two paths gates the derived constants — the `2π²` in the self-overlap,
//! the `1/(8π²)` in the boosted overlap, and the sign of the translation
//! phase.
//!
//! The oracles are deterministic fixed-grid Gauss–Legendre quadratures, not
//! Monte Carlo, so `verify` output is stable run to run. Each value carries
//! an error estimate from a half-resolution rerun, and the
//! [`agreement_suite`] includes a node-doubling self-consistency item.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::quad::{gauss_legendre, QuadError, QuadResult, QuadratureSpec};
use crate::smearing::{ModelParams, OnShellProfile, SmearingError};
use crate::special::bump_theta;
use crate::wightman::{boosted_overlap, w2_self, WightmanError};

/// Errors from the oracle paths.
#[derive(Debug, Error)]
pub enum OracleError {
    #[error("momentum magnitude must be positive, got {0}")]
    BadMomentum(f64),
    #[error("direction cosine must lie in [-1, 1], got {0}")]
    BadMu(f64),
    #[error("smearing failure: {0}")]
    Smearing(#[from] SmearingError),
    #[error("main-path failure during agreement run: {0}")]
    Wightman(#[from] WightmanError),
    #[error("quadrature failure: {0}")]
    Quad(#[from] QuadError),
}

/// Node budget for the oracle grids. All counts scale together through
/// [`OracleBudget::scaled`], which is what the doubling self-check varies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleBudget {
    /// Radial momentum nodes for the overlap integral.
    pub k_nodes: usize,
    /// Direction-cosine nodes for the overlap integral.
    pub mu_nodes: usize,
    /// Base node count for the two oscillatory ball axes; raised
    /// automatically when the sampled momentum needs more resolution.
    pub osc_nodes: usize,
    /// Nodes on the non-oscillatory cylindrical-radius axis of the ball.
    pub rho_nodes: usize,
    /// Momentum truncation; the transform has decayed to ~1e-5 of its peak
    /// there, far below the oracle's percent-level targets.
    pub k_max: f64,
    /// Global multiplier on every node count.
    pub scale: f64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self {
            k_nodes: 48,
            mu_nodes: 48,
            osc_nodes: 48,
            rho_nodes: 24,
            k_max: 40.0 / std::f64::consts::SQRT_2,
            scale: 1.0,
        }
    }
}

impl OracleBudget {
    /// The same budget with every node count multiplied by `factor`.
    pub fn scaled(self, factor: f64) -> Self {
        Self {
            scale: self.scale * factor,
            ..self
        }
    }

    fn eff(&self, base: usize) -> usize {
        ((base as f64 * self.scale).round() as usize).max(4)
    }

    /// Oscillatory-axis nodes for a ball transform at momentum `k`: the
    /// phase completes `k/π` cycles across the support, so the floor grows
    /// linearly with `k` once `k` outruns the base budget.
    fn osc_nodes_at(&self, k: f64) -> usize {
        let needed = (0.8 * k + 20.0).ceil() as usize;
        self.eff(self.osc_nodes.max(needed))
    }
}

/// One ball-transform quadrature: value, its evaluation count.
struct BallValue {
    value: Complex64,
    evaluations: u64,
}

/// The centred transform `∫ d⁴y e^{i k (y⁰ − a)} α ϑ(1 − ‖y‖₄) `
/// over the unit support ball, reduced by azimuthal symmetry about the
/// momentum axis: `y⁰` is time, `a` the spatial component along `𝐤`, and
/// the two transverse directions collapse to `2π ∫ ρ dρ`. Plain tensor
/// Gauss–Legendre over the bounding box `[−1,1]² × [0,1]`; the bump
/// vanishes smoothly at the ball boundary so the box causes no edge error.
fn ball_transform(k: f64, alpha: f64, n_osc: usize, n_rho: usize) -> BallValue {
    let (t_osc, w_osc) = gauss_legendre(n_osc);
    let (t_rho_raw, w_rho_raw) = gauss_legendre(n_rho);
    // Map ρ from [−1,1] to [0,1].
    let rho: Vec<f64> = t_rho_raw.iter().map(|t| 0.5 * (t + 1.0)).collect();
    let w_rho: Vec<f64> = w_rho_raw.iter().map(|w| 0.5 * w).collect();

    let mut sum = Complex64::ZERO;
    for (&y0, &wy) in t_osc.iter().zip(&w_osc) {
        for (&a, &wa) in t_osc.iter().zip(&w_osc) {
            let planar = y0 * y0 + a * a;
            if planar >= 1.0 {
                continue; // bump is zero on the whole ρ line
            }
            let mut radial = 0.0;
            for (&r, &wr) in rho.iter().zip(&w_rho) {
                radial += wr * r * alpha * bump_theta(1.0 - (planar + r * r).sqrt());
            }
            sum += Complex64::from_polar(wy * wa * radial, k * (y0 - a));
        }
    }
    BallValue {
        value: 2.0 * std::f64::consts::PI * sum,
        evaluations: (n_osc * n_osc * n_rho) as u64,
    }
}

/// Translation phase `e^{−i 𝐤·𝐂}` for a momentum of magnitude `k` at
/// direction cosine `mu` to the x¹ axis, derived directly from the
/// convention `e^{i(k⁰x⁰ − 𝐤·𝐱)}` and the stored centre — independent of
/// the production formula whose sign it checks.
fn translation_phase(k: f64, mu: f64, params: &ModelParams) -> Complex64 {
    let center_x1 = params.center()[1];
    Complex64::from_polar(1.0, -(k * mu * center_x1))
}

/// Brute-force on-shell Fourier transform `f̃(k, μ)` with an error estimate
/// from a half-resolution rerun. Converged means the estimate is within
/// 0.5% of the value.
pub fn ft_onshell_bruteforce(
    k: f64,
    mu: f64,
    params: &ModelParams,
    budget: &OracleBudget,
) -> Result<QuadResult<Complex64>, OracleError> {
    if !k.is_finite() || k <= 0.0 {
        return Err(OracleError::BadMomentum(k));
    }
    if !(-1.0..=1.0).contains(&mu) {
        return Err(OracleError::BadMu(mu));
    }
    let full = ball_transform(k, params.alpha, budget.osc_nodes_at(k), budget.eff(budget.rho_nodes));
    let coarse_budget = budget.scaled(0.5);
    let half = ball_transform(
        k,
        params.alpha,
        coarse_budget.osc_nodes_at(k),
        coarse_budget.eff(coarse_budget.rho_nodes),
    );
    let phase = translation_phase(k, mu, params);
    let value = phase * full.value;
    let error = (full.value - half.value).norm();
    Ok(QuadResult {
        value,
        error,
        evaluations: full.evaluations + half.evaluations,
        converged: error <= (5e-3 * value.norm()).max(1e-14),
    })
}

/// One fixed-grid evaluation of the boosted-overlap momentum integral.
fn w2_grid(
    eta: f64,
    params: &ModelParams,
    budget: &OracleBudget,
    length_scale: f64,
) -> (Complex64, u64) {
    let n_k = budget.eff(budget.k_nodes);
    let n_mu = budget.eff(budget.mu_nodes);
    let n_rho = budget.eff(budget.rho_nodes);
    let (tk, wk) = gauss_legendre(n_k);
    let (tmu, wmu) = gauss_legendre(n_mu);
    let k_hi = budget.k_max / length_scale;
    let k_nodes: Vec<f64> = tk.iter().map(|t| 0.5 * k_hi * (t + 1.0)).collect();
    let k_weights: Vec<f64> = wk.iter().map(|w| 0.5 * k_hi * w).collect();
    let (ch, sh) = (eta.cosh(), eta.sinh());

    // In physical units of scale λ the smearing is (α/λ³) ϑ(1 − ‖x − λC‖/λ),
    // so the centred ball transform at momentum k is λ · ball(λk) and the
    // translation phase picks up λ from the centre. W₂ must not notice λ.
    let center_x1 = length_scale * params.center()[1];
    let transform = |k: f64, mu: f64| -> (Complex64, u64) {
        let ball = ball_transform(
            length_scale * k,
            params.alpha,
            budget.osc_nodes_at(length_scale * k),
            n_rho,
        );
        let phase = Complex64::from_polar(1.0, -(k * mu * center_x1));
        (length_scale * phase * ball.value, ball.evaluations)
    };

    // Row-parallel over k; each row is summed in fixed μ order and the rows
    // are reduced in fixed k order, so the result is identical at any
    // worker count.
    let rows: Vec<(Complex64, u64)> = k_nodes
        .par_iter()
        .zip(&k_weights)
        .map(|(&k, &wk)| {
            let mut row = Complex64::ZERO;
            let mut evals = 0u64;
            // The unboosted factor is μ-independent apart from its phase:
            // compute its ball once per row.
            let unboosted = ball_transform(
                length_scale * k,
                params.alpha,
                budget.osc_nodes_at(length_scale * k),
                n_rho,
            );
            evals += unboosted.evaluations;
            for (&mu, &wm) in tmu.iter().zip(&wmu) {
                let f1 = length_scale
                    * Complex64::from_polar(1.0, -(k * mu * center_x1))
                    * unboosted.value;
                let f2 = if eta == 0.0 {
                    f1
                } else {
                    let k_boost = k * (ch + mu * sh);
                    let mu_boost = (mu * ch + sh) / (ch + mu * sh);
                    let (v, e) = transform(k_boost, mu_boost);
                    evals += e;
                    v
                };
                row += (wk * wm * k) * f1.conj() * f2;
            }
            (row, evals)
        })
        .collect();

    let mut total = Complex64::ZERO;
    let mut evaluations = 0u64;
    for (row, evals) in rows {
        total += row;
        evaluations += evals;
    }
    (total / (8.0 * std::f64::consts::PI.powi(2)), evaluations)
}

/// Brute-force boosted overlap `W(η)` by a direct 3-D momentum integral
/// (azimuth integrated analytically; the integrand is axisymmetric), using
/// [`ft_onshell_bruteforce`]'s machinery for both factors. Error estimate
/// from a half-resolution rerun; converged means within 2%.
pub fn w2_bruteforce(
    eta: f64,
    params: &ModelParams,
    budget: &OracleBudget,
) -> Result<QuadResult<Complex64>, OracleError> {
    if !eta.is_finite() {
        return Err(OracleError::Wightman(WightmanError::BadRapidity(eta)));
    }
    Ok(w2_pair(eta, params, budget, 1.0))
}

/// As [`w2_bruteforce`], with all lengths multiplied by `length_scale`
/// (support radius, centre offset) and the smearing amplitude rescaled to
/// `α/λ³` as the units demand. The overlap is scale-free, so this must
/// reproduce `w2_bruteforce` exactly up to round-off — it exercises every
/// λ power in the bookkeeping.
pub fn w2_bruteforce_at_scale(
    eta: f64,
    params: &ModelParams,
    budget: &OracleBudget,
    length_scale: f64,
) -> Result<QuadResult<Complex64>, OracleError> {
    if !eta.is_finite() {
        return Err(OracleError::Wightman(WightmanError::BadRapidity(eta)));
    }
    if !length_scale.is_finite() || length_scale <= 0.0 {
        return Err(OracleError::BadMomentum(length_scale));
    }
    Ok(w2_pair(eta, params, budget, length_scale))
}

fn w2_pair(
    eta: f64,
    params: &ModelParams,
    budget: &OracleBudget,
    length_scale: f64,
) -> QuadResult<Complex64> {
    let (value, evals_full) = w2_grid(eta, params, budget, length_scale);
    let (coarse, evals_half) = w2_grid(eta, params, &budget.scaled(0.5), length_scale);
    let error = (value - coarse).norm();
    QuadResult {
        value,
        error,
        evaluations: evals_full + evals_half,
        converged: error <= (2e-2 * value.norm()).max(1e-14),
    }
}

/// One line of the `verify` report: a named quantity computed by the main
/// path and by an oracle, with the deviation measured as stated in `name`
/// (modulus-relative unless said otherwise).
#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub name: String,
    pub main_re: f64,
    pub main_im: f64,
    pub oracle_re: f64,
    pub oracle_im: f64,
    /// Oracle-side error estimate (half-resolution rerun).
    pub oracle_error: f64,
    pub rel_deviation: f64,
    /// Total integrand evaluations spent on the oracle side.
    pub budget_evaluations: u64,
    pub tolerance: f64,
    pub pass: bool,
}

impl OracleReport {
    fn new(
        name: impl Into<String>,
        main: Complex64,
        oracle: Complex64,
        oracle_error: f64,
        rel_deviation: f64,
        budget_evaluations: u64,
        tolerance: f64,
    ) -> Self {
        Self {
            name: name.into(),
            main_re: main.re,
            main_im: main.im,
            oracle_re: oracle.re,
            oracle_im: oracle.im,
            oracle_error,
            rel_deviation,
            budget_evaluations,
            tolerance,
            pass: rel_deviation <= tolerance,
        }
    }
}

/// Runs the full agreement suite between the production path and the
/// brute-force oracles. Every item is deterministic; the returned reports
/// are in a fixed order. A report with `pass = false` is a red flag for the
/// derived constants, not a soft warning.
pub fn agreement_suite(
    profile: &OnShellProfile,
    budget: &OracleBudget,
) -> Result<Vec<OracleReport>, OracleError> {
    let mut reports = Vec::new();
    let params_r2 = ModelParams::new(1.0, 2.0)?;
    let params_r1 = ModelParams::new(1.0, 1.0)?;
    let quad = QuadratureSpec::new(1e-10, 40_000, 16, None)?;

    // 1. Self-overlap: the 2π² constant and the h-profile table.
    let main_w0 = w2_self(&params_r2, profile, &quad)?;
    let oracle_w0 = w2_bruteforce(0.0, &params_r2, budget)?;
    reports.push(OracleReport::new(
        "w2_self vs brute force (alpha=1, r=2)",
        Complex64::new(main_w0.value, 0.0),
        oracle_w0.value,
        oracle_w0.error,
        (main_w0.value - oracle_w0.value.re).hypot(oracle_w0.value.im) / oracle_w0.value.norm(),
        oracle_w0.evaluations,
        1e-2,
    ));

    // 2–4. Boosted overlaps: the 1/(8π²), the boost substitution, and the
    // translation-phase sign. Deviations are per-component relative to W0.
    let w0_scale = main_w0.value;
    for (eta, params, tol, label) in [
        (0.3, &params_r2, 2e-2, "boosted overlap eta=0.3 (alpha=1, r=2)"),
        (0.7, &params_r2, 2e-2, "boosted overlap eta=0.7 (alpha=1, r=2)"),
        (0.7, &params_r1, 2e-2, "boosted overlap eta=0.7 (alpha=1, r=1)"),
        (1.5, &params_r2, 5e-2, "boosted overlap eta=1.5 (alpha=1, r=2)"),
    ] {
        let main = boosted_overlap(eta, params, profile, &quad)?;
        let oracle = w2_bruteforce(eta, params, budget)?;
        let dev = ((main.value.re - oracle.value.re).abs())
            .max((main.value.im - oracle.value.im).abs())
            / w0_scale;
        reports.push(OracleReport::new(
            label,
            main.value,
            oracle.value,
            oracle.error,
            dev,
            oracle.evaluations,
            tol,
        ));
    }

    // 5. The pointwise transform reduction (phase × radial profile).
    let (k_probe, mu_probe) = (1.3, 0.4);
    let main_ft = crate::smearing::onshell_ft(k_probe, mu_probe, &params_r2, profile)?;
    let oracle_ft = ft_onshell_bruteforce(k_probe, mu_probe, &params_r2, budget)?;
    reports.push(OracleReport::new(
        "on-shell transform at (k=1.3, mu=0.4) (alpha=1, r=2)",
        main_ft,
        oracle_ft.value,
        oracle_ft.error,
        (main_ft - oracle_ft.value).norm() / oracle_ft.value.norm(),
        oracle_ft.evaluations,
        1e-2,
    ));

    // 6. Hermiticity inside the oracle itself: W(−η) = conj W(η). The two
    // signs sample genuinely different boosted grids.
    let plus = w2_bruteforce(0.7, &params_r2, budget)?;
    let minus = w2_bruteforce(-0.7, &params_r2, budget)?;
    reports.push(OracleReport::new(
        "oracle hermiticity W(0.7) vs conj W(-0.7) (alpha=1, r=2)",
        plus.value,
        minus.value.conj(),
        minus.error,
        (plus.value - minus.value.conj()).norm() / plus.value.norm(),
        plus.evaluations + minus.evaluations,
        2e-2,
    ));

    // 7. Doubling self-consistency: rerunning with all node counts doubled
    // must move the value by less than half the reported error estimate
    // (deviation is measured in units of that half-error).
    let doubled = w2_bruteforce(0.0, &params_r2, &budget.scaled(2.0))?;
    let shift = (doubled.value - oracle_w0.value).norm();
    reports.push(OracleReport::new(
        "node doubling shifts W(0) by < half its error estimate",
        oracle_w0.value,
        doubled.value,
        oracle_w0.error,
        shift / (0.5 * oracle_w0.error),
        doubled.evaluations,
        1.0,
    ));

    // 8. The trivial limit: every oracle quantity vanishes at α = 0.
    let params_zero = ModelParams::new(0.0, 2.0)?;
    let zero_ft = ft_onshell_bruteforce(1.3, 0.4, &params_zero, budget)?;
    let zero_w2 = w2_bruteforce(0.0, &params_zero, budget)?;
    reports.push(OracleReport::new(
        "alpha=0 oracle values vanish (absolute)",
        zero_ft.value,
        zero_w2.value,
        zero_w2.error,
        zero_ft.value.norm().max(zero_w2.value.norm()),
        zero_ft.evaluations + zero_w2.evaluations,
        1e-12,
    ));

    // 9–10. Scale invariance: doubling / tripling every length at fixed α
    // (with the amplitude's 1/λ³ that the units demand) must leave the
    // overlap untouched. λ = 2 rescales exactly in binary floating point;
    // λ = 3 adds honest round-off.
    for (lambda, tol) in [(2.0, 1e-12), (3.0, 1e-10)] {
        let scaled = w2_bruteforce_at_scale(0.0, &params_r2, budget, lambda)?;
        reports.push(OracleReport::new(
            format!("scale invariance of W(0) at lambda={lambda} (alpha=1, r=2)"),
            oracle_w0.value,
            scaled.value,
            scaled.error,
            (scaled.value - oracle_w0.value).norm() / oracle_w0.value.norm(),
            scaled.evaluations,
            tol,
        ));
    }

    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transform_modulus_is_mu_independent() {
        // The direction cosine enters only through a translation phase.
        let params = ModelParams::new(1.0, 2.0).unwrap();
        let budget = OracleBudget::default().scaled(0.25);
        let a = ft_onshell_bruteforce(1.3, 0.4, &params, &budget).unwrap();
        let b = ft_onshell_bruteforce(1.3, -0.9, &params, &budget).unwrap();
        assert!(
            (a.value.norm() - b.value.norm()).abs() <= 1e-12 * a.value.norm(),
            "|F| must not depend on mu: {} vs {}",
            a.value.norm(),
            b.value.norm()
        );
    }

    #[test]
    fn transform_vanishes_at_zero_alpha() {
        let params = ModelParams::new(0.0, 2.0).unwrap();
        let budget = OracleBudget::default().scaled(0.25);
        let v = ft_onshell_bruteforce(2.0, 0.1, &params, &budget).unwrap();
        assert_eq!(v.value, Complex64::ZERO);
    }

    #[test]
    fn momentum_domain_is_validated() {
        let params = ModelParams::new(1.0, 1.0).unwrap();
        let budget = OracleBudget::default();
        assert!(ft_onshell_bruteforce(0.0, 0.0, &params, &budget).is_err());
        assert!(ft_onshell_bruteforce(-1.0, 0.0, &params, &budget).is_err());
        assert!(ft_onshell_bruteforce(1.0, 1.5, &params, &budget).is_err());
    }
}

//! The click-probability bound and its minimisation over the Gaussian
//! window width ζ.
//!
//! For a window of variance ζ the bound on the click probability given a
//! dark-count probability `p_dark` is
//!
//! ```text
//! B(ζ; p_dark) = ( E_ζ + N(ζ) √p_dark )²,   N(ζ) = exp(π²/(2ζ)),
//! ```
//!
//! where the approximation error `E_ζ` measures how far the windowed boost
//! average sits from the true projector,
//!
//! ```text
//! E_ζ = √(1 − I),   I = ∫ dη [2 G_ζ(η) − G_{2ζ}(η)] · Re e^{W(η) − W0},
//! ```
//!
//! with `G_ζ` the centred Gaussian density of variance ζ and `W(η)` the
//! boosted overlap from [`crate::wightman`]. The reported bound is
//! `min_ζ B(ζ; p_dark)` over a configurable search box.
//!
//! Numerically the radicand is evaluated in the equivalent form
//!
//! ```text
//! 1 − I = p_ideal − 2 ∫₀^∞ [2G_ζ − G_{2ζ}](η) · (φ(η) − e^{−W0}) dη,
//! φ(η) = Re e^{W(η) − W0},   p_ideal = 1 − e^{−W0},
//! ```
//!
//! which follows from the unit mass of the window kernel. This form has no
//! separate tail term — the integrand vanishes identically once `W(η)`
//! does — and it is exact in the trivial limit: for `α = 0` the integrand
//! is zero everywhere and `E_ζ = 0` comes out with no cancellation noise,
//! so the bound degenerates to `N(ζ)² p_dark` as it must.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quad::{integrate_1d, QuadError, QuadResult, QuadratureSpec};
use crate::special::{GaussianKernel, SpecialError};
use crate::wightman::OverlapTable;

/// Errors from bound evaluation and minimisation.
#[derive(Debug, Error)]
pub enum BoundError {
    #[error("window kernel failure: {0}")]
    Special(#[from] SpecialError),
    #[error("quadrature failure: {0}")]
    Quad(#[from] QuadError),
    #[error("dark-count probability must lie in [0, 1], got {0}")]
    InvalidPDark(f64),
    #[error("invalid ζ search box: {0}")]
    InvalidSearch(String),
}

/// Ideal-detector click probability for a coherent state with
/// self-overlap `w0`: `1 − e^{−w0}`.
pub fn p_ideal(w0: f64) -> f64 {
    -(-w0).exp_m1()
}

/// The normalisation factor `N(ζ) = exp(π²/(2ζ))` with explicit overflow
/// accounting: below ζ ≈ 7.0e-3 the exponential exceeds the f64 range and
/// the value saturates to `+∞` with `overflowed` set, so callers can tell a
/// genuine huge-but-finite factor from a saturated one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormFactor {
    pub value: f64,
    pub overflowed: bool,
}

/// Computes [`NormFactor`] for window variance `zeta > 0`.
pub fn norm_factor(zeta: f64) -> Result<NormFactor, BoundError> {
    if zeta.is_nan() || zeta <= 0.0 {
        return Err(BoundError::Special(SpecialError::NonPositiveVariance {
            zeta,
        }));
    }
    let value = (std::f64::consts::PI.powi(2) / (2.0 * zeta)).exp();
    Ok(NormFactor {
        value,
        overflowed: value.is_infinite(),
    })
}

/// One evaluation of the generic bound `(E + N √p)²` from precomputed
/// pieces. `p_dark = 0` is exact even when `N` has saturated: the dark-count
/// term is identically zero, not `∞ · 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundValue {
    pub value: f64,
    pub overflowed: bool,
}

/// `B(ζ; p_dark)` from an already-computed `E_ζ` and `N(ζ)`.
pub fn generic_bound(e_zeta: f64, norm: NormFactor, p_dark: f64) -> Result<BoundValue, BoundError> {
    if !(0.0..=1.0).contains(&p_dark) {
        return Err(BoundError::InvalidPDark(p_dark));
    }
    let root = p_dark.sqrt();
    let dark_term = if root == 0.0 { 0.0 } else { norm.value * root };
    let sum = e_zeta + dark_term;
    Ok(BoundValue {
        value: sum * sum,
        overflowed: sum.is_infinite(),
    })
}

/// Quadrature settings for the `E_ζ` integral. The radicand suffers a mild
/// cancellation at large ζ (the integral approaches `p_ideal`), so the
/// target is well below the downstream 1e-4-relative comparisons.
fn e_quad_spec() -> QuadratureSpec {
    QuadratureSpec::new(1e-11, 40_000, 16, None).expect("static spec is valid")
}

/// Approximation error `E_ζ` for window variance `zeta`, from the tabulated
/// overlap. See the module docs for the cancellation-free radicand form.
///
/// The integration range is capped at `min(η_max, 12√(2ζ))`: the window
/// kernel has fallen by `e^{−72}` there, and the overlap factor is
/// identically zero beyond the table end, so both truncations are far below
/// the quadrature tolerance. A radicand driven slightly negative by
/// round-off (possible only when `E_ζ` under-runs the tolerance) is clamped
/// to zero and logged.
pub fn approx_error(
    zeta: f64,
    table: &OverlapTable,
) -> Result<QuadResult<f64>, BoundError> {
    let window = GaussianKernel::new(zeta)?;
    let window2 = GaussianKernel::new(2.0 * zeta)?;
    let w0 = table.w0();
    let floor = (-w0).exp();
    let eta_max = table.table_spec().eta_max;
    let eta_cap = eta_max.min(12.0 * (2.0 * zeta).sqrt());

    let integrand = |eta: f64| -> f64 {
        let w = table.w_at(eta);
        let phi = (w.re - w0).exp() * w.im.cos();
        (2.0 * window.density(eta) - window2.density(eta)) * (phi - floor)
    };
    let core = integrate_1d(integrand, 0.0, eta_cap, &e_quad_spec())?;

    let radicand = p_ideal(w0) - 2.0 * core.value;
    let clamped = if radicand < 0.0 {
        if radicand < -1e-9 {
            log::warn!(
                "E_ζ radicand {radicand:.3e} at ζ = {zeta:.6e} is negative beyond \
                 round-off; clamping to zero"
            );
        }
        0.0
    } else {
        radicand
    };
    let value = clamped.sqrt();
    // δE = δ(E²)/(2E); at E = 0 fall back to the width of the zero bracket.
    let error = if value > 0.0 {
        core.error / value
    } else {
        (2.0 * core.error).sqrt()
    };
    Ok(QuadResult {
        value,
        error,
        evaluations: core.evaluations,
        converged: core.converged,
    })
}

/// Search box and stopping rule for the ζ minimisation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZetaSearchSpec {
    /// Lower edge of the ζ box.
    pub zeta_min: f64,
    /// Upper edge of the ζ box.
    pub zeta_max: f64,
    /// Log-spaced scan points across the box.
    pub points: usize,
    /// Golden-section stop: relative width of the final ζ bracket.
    pub golden_rel_width: f64,
}

impl Default for ZetaSearchSpec {
    fn default() -> Self {
        Self {
            zeta_min: 1e-3,
            zeta_max: 1e4,
            points: 240,
            golden_rel_width: 1e-4,
        }
    }
}

impl ZetaSearchSpec {
    /// Validates the box: positive ordered edges, at least 8 scan points,
    /// a stopping width in (0, 1).
    pub fn validated(self) -> Result<Self, BoundError> {
        if !(self.zeta_min > 0.0 && self.zeta_max > self.zeta_min) {
            return Err(BoundError::InvalidSearch(format!(
                "need 0 < zeta_min < zeta_max, got [{}, {}]",
                self.zeta_min, self.zeta_max
            )));
        }
        if self.points < 8 {
            return Err(BoundError::InvalidSearch(format!(
                "need at least 8 scan points, got {}",
                self.points
            )));
        }
        if !(self.golden_rel_width > 0.0 && self.golden_rel_width < 1.0) {
            return Err(BoundError::InvalidSearch(format!(
                "golden_rel_width must lie in (0, 1), got {}",
                self.golden_rel_width
            )));
        }
        Ok(self)
    }

    /// The log-spaced scan grid.
    pub fn zeta_grid(&self) -> Vec<f64> {
        let lo = self.zeta_min.ln();
        let hi = self.zeta_max.ln();
        let n = self.points;
        (0..n)
            .map(|i| (lo + (hi - lo) * i as f64 / (n - 1) as f64).exp())
            .collect()
    }
}

/// Outcome of one bound minimisation.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BoundResult {
    /// The dark-count probability the bound was minimised for.
    pub p_dark: f64,
    /// Minimising window variance.
    pub zeta_star: f64,
    /// Approximation error at `zeta_star`.
    pub e_zeta: f64,
    /// Normalisation factor at `zeta_star`.
    pub norm: f64,
    /// The minimised bound before clamping to probability range.
    pub raw_bound: f64,
    /// `min(raw_bound, 1)`: a click probability can never exceed one.
    pub p_max: f64,
    /// The minimum sat on an edge of the ζ box (no interior bracket).
    pub boundary: bool,
    /// `p_dark = 0` limit: the bound degenerates to `E²` at the smallest ζ.
    pub limit_case: bool,
    /// At least one scan point saturated `N(ζ)` to `+∞` (routine for small
    /// ζ; such points can never win the minimum for `p_dark > 0`).
    pub overflow_seen: bool,
    /// Every quadrature involved met its tolerance.
    pub converged: bool,
}

/// Minimises the bound over ζ for one overlap table, reusing the scan-grid
/// `E_ζ` values across every `p_dark` queried.
#[derive(Debug)]
pub struct BoundSolver<'a> {
    table: &'a OverlapTable,
    search: ZetaSearchSpec,
    zeta_grid: Vec<f64>,
    e_grid: Vec<f64>,
    grid_converged: bool,
}

impl<'a> BoundSolver<'a> {
    /// Precomputes `E_ζ` on the scan grid (in parallel; the grid order, and
    /// hence every downstream number, is independent of the worker count).
    pub fn new(table: &'a OverlapTable, search: ZetaSearchSpec) -> Result<Self, BoundError> {
        let search = search.validated()?;
        let zeta_grid = search.zeta_grid();
        let results: Result<Vec<QuadResult<f64>>, BoundError> = zeta_grid
            .par_iter()
            .map(|&z| approx_error(z, table))
            .collect();
        let results = results?;
        let grid_converged = results.iter().all(|r| r.converged);
        let e_grid = results.into_iter().map(|r| r.value).collect();
        Ok(Self {
            table,
            search,
            zeta_grid,
            e_grid,
            grid_converged,
        })
    }

    /// The scan grid.
    pub fn zeta_grid(&self) -> &[f64] {
        &self.zeta_grid
    }

    /// `E_ζ` on the scan grid, aligned with [`Self::zeta_grid`].
    pub fn e_grid(&self) -> &[f64] {
        &self.e_grid
    }

    /// The table this solver minimises over.
    pub fn table(&self) -> &OverlapTable {
        self.table
    }

    /// The bound at one scan index for a given `p_dark`.
    fn grid_bound(&self, i: usize, p_dark: f64) -> Result<BoundValue, BoundError> {
        generic_bound(self.e_grid[i], norm_factor(self.zeta_grid[i])?, p_dark)
    }

    /// `min_ζ B(ζ; p_dark)` with boundary and limit-case accounting:
    /// a strict interior bracket is polished by golden-section search in
    /// log ζ; otherwise the best scan endpoint is reported and flagged.
    pub fn solve(&self, p_dark: f64) -> Result<BoundResult, BoundError> {
        if !(0.0..=1.0).contains(&p_dark) || p_dark.is_nan() {
            return Err(BoundError::InvalidPDark(p_dark));
        }

        // p_dark = 0: B(ζ) = E_ζ², nondecreasing in ζ, so the infimum sits
        // at the lower box edge. Report it as the documented limit case.
        if p_dark == 0.0 {
            let zeta_star = self.search.zeta_min;
            let e = approx_error(zeta_star, self.table)?;
            let raw = e.value * e.value;
            return Ok(BoundResult {
                p_dark,
                zeta_star,
                e_zeta: e.value,
                norm: norm_factor(zeta_star)?.value,
                raw_bound: raw,
                p_max: raw.min(1.0),
                boundary: true,
                limit_case: true,
                overflow_seen: false,
                converged: self.grid_converged && e.converged,
            });
        }

        let n = self.zeta_grid.len();
        let mut best_i = 0usize;
        let mut best = f64::INFINITY;
        let mut overflow_seen = false;
        for i in 0..n {
            let b = self.grid_bound(i, p_dark)?;
            overflow_seen |= b.overflowed;
            if b.value < best {
                best = b.value;
                best_i = i;
            }
        }

        let mut converged = self.grid_converged;
        let interior = best_i > 0 && best_i + 1 < n;
        let (zeta_star, e_star, raw) = if interior {
            let (z, e, b, ok) =
                self.golden_refine(self.zeta_grid[best_i - 1], self.zeta_grid[best_i + 1], p_dark)?;
            converged &= ok;
            // The polished minimum can only improve on the scanned one; if
            // the quadrature noise says otherwise, keep the scan point.
            if b <= best {
                (z, e, b)
            } else {
                (self.zeta_grid[best_i], self.e_grid[best_i], best)
            }
        } else {
            log::info!(
                "bound minimum for p_dark = {p_dark:.3e} sits on the ζ box edge \
                 {:.3e}; reporting the boundary minimum",
                self.zeta_grid[best_i]
            );
            (self.zeta_grid[best_i], self.e_grid[best_i], best)
        };

        Ok(BoundResult {
            p_dark,
            zeta_star,
            e_zeta: e_star,
            norm: norm_factor(zeta_star)?.value,
            raw_bound: raw,
            p_max: raw.min(1.0),
            boundary: !interior,
            limit_case: false,
            overflow_seen,
            converged,
        })
    }

    /// Golden-section minimisation of `B(e^x; p_dark)` on a bracketing
    /// interval, in `x = ln ζ`, down to the search spec's relative width.
    /// Returns `(ζ*, E_{ζ*}, B*, all_converged)`.
    fn golden_refine(
        &self,
        zeta_lo: f64,
        zeta_hi: f64,
        p_dark: f64,
    ) -> Result<(f64, f64, f64, bool), BoundError> {
        const INV_PHI: f64 = 0.618_033_988_749_894_8;
        let mut ok = true;
        let mut eval = |x: f64| -> Result<(f64, f64), BoundError> {
            let zeta = x.exp();
            let e = approx_error(zeta, self.table)?;
            ok &= e.converged;
            Ok((generic_bound(e.value, norm_factor(zeta)?, p_dark)?.value, e.value))
        };

        let mut lo = zeta_lo.ln();
        let mut hi = zeta_hi.ln();
        let mut x1 = hi - INV_PHI * (hi - lo);
        let mut x2 = lo + INV_PHI * (hi - lo);
        let (mut f1, mut e1) = eval(x1)?;
        let (mut f2, mut e2) = eval(x2)?;
        while hi - lo > self.search.golden_rel_width {
            if f1 <= f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                e2 = e1;
                x1 = hi - INV_PHI * (hi - lo);
                let r = eval(x1)?;
                f1 = r.0;
                e1 = r.1;
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                e1 = e2;
                x2 = lo + INV_PHI * (hi - lo);
                let r = eval(x2)?;
                f2 = r.0;
                e2 = r.1;
            }
        }
        let (x, f, e) = if f1 <= f2 { (x1, f1, e1) } else { (x2, f2, e2) };
        Ok((x.exp(), e, f, ok))
    }
}

//! The detector smearing function and its on-shell momentum-space
//! transform.
//!
//! The smearing is a smooth bump supported on a unit-radius ball (all
//! lengths in units of the bump radius) centered at C = (0, −√2·r, 0, 0),
//! where r is the detector-to-bump size ratio:
//!
//! ```text
//! f(x) = α · ϑ(1 − ‖x − C‖),       ‖·‖ the Euclidean 4-norm.
//! ```
//!
//! On the massless shell k⁰ = |𝐤| = k, the Minkowski phase
//! e^{i(k⁰x⁰ − 𝐤·𝐱)} is a Euclidean plane wave with wave vector
//! q = (k, −𝐤) of norm √2·k, so the 4-D radial Fourier formula gives
//!
//! ```text
//! f̃(k, μ) = e^{i√2·r·k·μ} · ĝ(√2 k),      ĝ(Q) = (2π)² α h(Q)/Q,
//! h(u)    = ∫₀¹ s² ϑ(1−s) J₁(u s) ds,
//! ```
//!
//! with μ the cosine of the angle between 𝐤 and the x¹ axis. The phase is
//! e^{−i𝐤·𝐂} with our sign conventions; the opposite overall sign is an
//! equally valid convention and only conjugates downstream overlaps. Both
//! the reduction and its constants are cross-checked against brute-force
//! position-space quadrature in the `oracle` module.

use crate::quad::{self, QuadError, QuadratureSpec};
use crate::special::{bessel_j1, bump_theta};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Below this argument, h(u)/u is evaluated from the Maclaurin kernel of J₁
/// instead of dividing the quadrature value by u.
const SMALL_U: f64 = 1e-4;

/// Errors from parameter validation and profile construction.
#[derive(Debug, Error)]
pub enum SmearingError {
    #[error("r_ratio must be ≥ 1 (detector at least as large as the bump), got {0}")]
    RatioTooSmall(f64),
    #[error("alpha must be finite, got {0}")]
    BadAlpha(f64),
    #[error("onshell_ft requires k > 0, got {0}")]
    InvalidMomentum(f64),
    #[error("quadrature failure while building the radial profile: {0}")]
    Quad(#[from] QuadError),
    #[error("radial profile integral did not converge at u = {u}")]
    Unconverged { u: f64 },
}

/// Physical inputs: coherent amplitude α and detector/bump size ratio.
/// All lengths are in units of the bump radius, so the bump radius is 1 and
/// the detector radius equals `r_ratio`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub alpha: f64,
    pub r_ratio: f64,
}

impl ModelParams {
    pub fn new(alpha: f64, r_ratio: f64) -> Result<Self, SmearingError> {
        if !alpha.is_finite() {
            return Err(SmearingError::BadAlpha(alpha));
        }
        if !r_ratio.is_finite() || r_ratio < 1.0 {
            return Err(SmearingError::RatioTooSmall(r_ratio));
        }
        Ok(Self { alpha, r_ratio })
    }

    /// Center of the smearing ball, C = (0, −√2·r_ratio, 0, 0).
    pub fn center(&self) -> [f64; 4] {
        [0.0, -std::f64::consts::SQRT_2 * self.r_ratio, 0.0, 0.0]
    }
}

/// The smearing function f(x) = α·ϑ(1 − ‖x − C‖) at a spacetime point
/// x = (x⁰, x¹, x², x³).
pub fn smearing_f(x: &[f64; 4], params: &ModelParams) -> f64 {
    let c = params.center();
    let mut d2 = 0.0;
    for i in 0..4 {
        let d = x[i] - c[i];
        d2 += d * d;
    }
    params.alpha * bump_theta(1.0 - d2.sqrt())
}

/// Direct adaptive quadrature of the radial profile
/// h(u) = ∫₀¹ s² ϑ(1−s) J₁(u s) ds.
///
/// This is the reference evaluation; [`OnShellProfile::eval`] is the fast
/// interpolated path built on top of it.
pub fn onshell_profile_h(u: f64) -> Result<f64, SmearingError> {
    debug_assert!(u >= 0.0, "h is only used for u ≥ 0");
    if u == 0.0 {
        return Ok(0.0); // J₁(0) = 0
    }
    let spec = QuadratureSpec::new(1e-11, 4_000, 16, None)?;
    let result = quad::integrate_1d_with_hint(
        |s: f64| s * s * bump_theta(1.0 - s) * bessel_j1(u * s),
        0.0,
        1.0,
        u, // J₁(us) oscillates at angular frequency u in s
        &spec,
    )?;
    if !result.converged {
        return Err(SmearingError::Unconverged { u });
    }
    Ok(result.value)
}

/// Weighted bump moment ∫₀¹ s^n ϑ(1−s) ds, used for the small-u series of
/// h(u)/u.
fn bump_moment(n: i32) -> Result<f64, SmearingError> {
    let spec = QuadratureSpec::new(1e-12, 2_000, 16, None)?;
    let result = quad::integrate_1d(|s: f64| s.powi(n) * bump_theta(1.0 - s), 0.0, 1.0, &spec)?;
    if !result.converged {
        return Err(SmearingError::Unconverged { u: -1.0 });
    }
    Ok(result.value)
}

/// Cached radial profile h on a dense uniform grid with local cubic
/// interpolation.
///
/// h is evaluated millions of times inside the 2-D overlap quadratures, so
/// the defining integral is precomputed once on `[0, u_max]` and read back
/// by 4-point Lagrange interpolation (absolute error a few 1e-12 at the
/// default step, far below the downstream tolerances). Beyond `u_max` the
/// profile is below 1e-12 in magnitude and is treated as zero.
#[derive(Debug, Clone)]
pub struct OnShellProfile {
    step: f64,
    u_max: f64,
    values: Vec<f64>,
    /// ∫ s³ϑ(1−s) ds and ∫ s⁵ϑ(1−s) ds: small-u series of h(u)/u.
    moment3: f64,
    moment5: f64,
}

impl OnShellProfile {
    pub const DEFAULT_U_MAX: f64 = 300.0;
    pub const DEFAULT_STEP: f64 = 0.005;

    /// Builds the profile grid. The build parallelizes over grid nodes;
    /// each node is an independent adaptive quadrature, so the result is
    /// identical for any worker count.
    pub fn build() -> Result<Self, SmearingError> {
        Self::build_with(Self::DEFAULT_U_MAX, Self::DEFAULT_STEP)
    }

    pub fn build_with(u_max: f64, step: f64) -> Result<Self, SmearingError> {
        use rayon::prelude::*;
        assert!(u_max > 0.0 && step > 0.0 && step < u_max);
        let n = (u_max / step).round() as usize + 1;
        let values: Result<Vec<f64>, SmearingError> = (0..n)
            .into_par_iter()
            .map(|i| onshell_profile_h(i as f64 * step))
            .collect();
        Ok(Self {
            step,
            u_max,
            values: values?,
            moment3: bump_moment(3)?,
            moment5: bump_moment(5)?,
        })
    }

    /// Grid cutoff beyond which the profile is treated as zero.
    pub fn u_max(&self) -> f64 {
        self.u_max
    }

    /// Small-u limit of h(u)/u, equal to (1/2)∫₀¹ s³ ϑ(1−s) ds.
    pub fn slope_at_zero(&self) -> f64 {
        0.5 * self.moment3
    }

    /// Interpolated h(u); zero at u = 0 and for u > u_max.
    pub fn eval(&self, u: f64) -> f64 {
        if u <= 0.0 || u >= self.u_max {
            return 0.0;
        }
        let n = self.values.len();
        let t = u / self.step;
        // Center a 4-point Lagrange stencil on the enclosing interval.
        let i1 = (t.floor() as usize).min(n - 2);
        let i0 = i1.saturating_sub(1).min(n - 4);
        let x = t - i0 as f64;
        let v = &self.values[i0..i0 + 4];
        let l0 = -(x - 1.0) * (x - 2.0) * (x - 3.0) / 6.0;
        let l1 = x * (x - 2.0) * (x - 3.0) / 2.0;
        let l2 = -x * (x - 1.0) * (x - 3.0) / 2.0;
        let l3 = x * (x - 1.0) * (x - 2.0) / 6.0;
        v[0] * l0 + v[1] * l1 + v[2] * l2 + v[3] * l3
    }

    /// h(u)/u with the cancellation-free series branch below `SMALL_U`:
    /// h(u)/u = (1/2)∫s³ϑ − (u²/16)∫s⁵ϑ + O(u⁴).
    pub fn eval_over_u(&self, u: f64) -> f64 {
        if u < SMALL_U {
            0.5 * self.moment3 - u * u / 16.0 * self.moment5
        } else {
            self.eval(u) / u
        }
    }
}

/// Radial transform factor ĝ(Q) = (2π)² α h(Q)/Q, finite at Q = 0.
pub fn ghat(q: f64, params: &ModelParams, profile: &OnShellProfile) -> f64 {
    let two_pi_sq = (2.0 * std::f64::consts::PI) * (2.0 * std::f64::consts::PI);
    two_pi_sq * params.alpha * profile.eval_over_u(q)
}

/// On-shell Fourier transform of the smearing,
/// f̃(k, μ) = e^{i√2·r·k·μ}·ĝ(√2 k), for spatial momentum magnitude
/// k > 0 and direction cosine μ against the x¹ axis.
pub fn onshell_ft(
    k: f64,
    mu: f64,
    params: &ModelParams,
    profile: &OnShellProfile,
) -> Result<Complex64, SmearingError> {
    if k.is_nan() || k <= 0.0 {
        return Err(SmearingError::InvalidMomentum(k));
    }
    let radial = ghat(std::f64::consts::SQRT_2 * k, params, profile);
    let phase = std::f64::consts::SQRT_2 * params.r_ratio * k * mu;
    Ok(Complex64::from_polar(1.0, phase) * radial)
}

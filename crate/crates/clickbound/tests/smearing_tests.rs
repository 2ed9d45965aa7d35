//! Checks of the smearing function and its on-shell radial profile against
//! frozen reference values and structural identities.
//!
//! The reference digits were computed independently with adaptive
//! Gauss–Kronrod quadrature (relative tolerance 1e-14) on the defining
//! integral h(u) = ∫₀¹ s² ϑ(1−s) J₁(us) ds before this module was written,
//! and are compared here at 1e-9 relative — far above either evaluator's
//! error, far below any plausible implementation slip.

// Reference constants carry every digit the generating run printed; the
// digits beyond f64 resolution document provenance, they do not round.
#![allow(clippy::excessive_precision)]

mod common;

use clickbound::smearing::{ghat, onshell_ft, onshell_profile_h, ModelParams, OnShellProfile};
use common::{profile, Lcg};

/// Frozen h(u) reference digits.
const H_REFERENCE: [(f64, f64); 7] = [
    (0.5, 6.467140704526279e-03),
    (1.0, 1.257521900876428e-02),
    (2.0, 2.244153503899721e-02),
    (5.0, 2.344807500217536e-02),
    (10.0, -2.187409045633021e-03),
    (20.0, -1.536963090572361e-04),
    (40.0, -3.230791833006529e-06),
];

/// Frozen weighted moments ∫₀¹ s³ϑ(1−s) ds and ∫₀¹ s⁵ϑ(1−s) ds.
const MOMENT3: f64 = 2.6111705570230223e-02;
const MOMENT5: f64 = 7.8109816200058373e-03;

#[test]
fn radial_profile_matches_frozen_digits() {
    for &(u, want) in &H_REFERENCE {
        let got = onshell_profile_h(u).unwrap();
        assert!(
            (got - want).abs() <= 1e-9 * want.abs(),
            "h({u}) = {got:.15e}, reference {want:.15e}"
        );
    }
}

#[test]
fn interpolated_profile_tracks_the_direct_integral() {
    let p = profile();
    let mut rng = Lcg::new(0x5eed_0010);
    for _ in 0..40 {
        let u = rng.in_range(0.0, 60.0);
        let direct = onshell_profile_h(u).unwrap();
        let interp = p.eval(u);
        assert!(
            (interp - direct).abs() < 1e-10,
            "interpolation at u = {u}: {interp:.15e} vs {direct:.15e}"
        );
    }
}

#[test]
fn small_u_series_and_moments() {
    let p = profile();
    // The u → 0 limit of h(u)/u is half the cubic moment.
    assert!(
        (p.slope_at_zero() - 0.5 * MOMENT3).abs() < 1e-13,
        "slope {}",
        p.slope_at_zero()
    );
    assert_eq!(p.eval_over_u(0.0), p.slope_at_zero());
    // Curvature of the series branch recovers the quintic moment.
    let u = 8e-5;
    let m5 = (p.slope_at_zero() - p.eval_over_u(u)) * 16.0 / (u * u);
    assert!(
        (m5 - MOMENT5).abs() < 1e-5 * MOMENT5,
        "recovered moment5 = {m5:.9e}"
    );
    // Continuity across the series/quadrature switch at u = 1e-4.
    let below = p.eval_over_u(0.99e-4);
    let above = p.eval_over_u(1.01e-4);
    assert!(
        (below - above).abs() < 1e-12,
        "series switch jump: {below:.15e} vs {above:.15e}"
    );
}

#[test]
fn profile_support_and_cutoff() {
    let p = profile();
    assert_eq!(p.u_max(), OnShellProfile::DEFAULT_U_MAX);
    assert_eq!(p.eval(0.0), 0.0);
    assert_eq!(p.eval(-1.0), 0.0);
    assert_eq!(p.eval(p.u_max()), 0.0);
    assert_eq!(p.eval(p.u_max() + 5.0), 0.0);
    assert_eq!(p.eval(1e6), 0.0);
    // What the cutoff discards really is negligible: |h| at the edge is
    // below 1e-9, and it enters downstream integrals squared.
    let edge = onshell_profile_h(p.u_max() / 2.0).unwrap();
    assert!(edge.abs() < 1e-7, "h(u_max/2) = {edge:.3e}");
    // Finite everywhere on the grid.
    let mut rng = Lcg::new(0x5eed_0011);
    for _ in 0..1000 {
        let u = rng.in_range(0.0, 305.0);
        let v = p.eval(u);
        assert!(v.is_finite() && v.abs() < 0.04, "h({u}) = {v}");
    }
}

#[test]
fn ghat_is_finite_at_the_origin_and_proportional_to_alpha() {
    let p = profile();
    let params = ModelParams::new(1.0, 2.0).unwrap();
    let two_pi_sq = (2.0 * std::f64::consts::PI).powi(2);
    // ĝ(0⁺) = (2π)²·α·(moment3/2), no 0/0 anywhere.
    let origin = ghat(1e-8, &params, p);
    assert!(
        (origin - two_pi_sq * p.slope_at_zero()).abs() < 1e-9,
        "ĝ(1e-8) = {origin}"
    );
    // At a frozen sample: ĝ(2) = (2π)²·h(2)/2.
    let want = two_pi_sq * H_REFERENCE[2].1 / 2.0;
    let got = ghat(2.0, &params, p);
    assert!((got - want).abs() < 1e-8 * want.abs(), "ĝ(2) = {got} vs {want}");
    // Linear in α, including the sign.
    let scaled = ModelParams::new(-0.25, 2.0).unwrap();
    assert_eq!(ghat(2.0, &scaled, p), -0.25 * got);
}

#[test]
fn onshell_ft_modulus_is_direction_independent() {
    let p = profile();
    let params = ModelParams::new(1.3, 2.0).unwrap();
    let k = 0.9;
    let base = onshell_ft(k, 0.0, &params, p).unwrap();
    for mu in [-1.0, -0.4, 0.25, 1.0] {
        let v = onshell_ft(k, mu, &params, p).unwrap();
        assert!(
            (v.norm() - base.norm()).abs() < 1e-14,
            "modulus drifts with μ = {mu}"
        );
    }
    // Phase difference between μ = ±1 is exactly 2√2·r·k.
    let plus = onshell_ft(k, 1.0, &params, p).unwrap();
    let minus = onshell_ft(k, -1.0, &params, p).unwrap();
    let rel = (plus * minus.conj()).arg();
    let want = 2.0 * std::f64::consts::SQRT_2 * params.r_ratio * k;
    let wrapped = (want + std::f64::consts::PI).rem_euclid(2.0 * std::f64::consts::PI)
        - std::f64::consts::PI;
    assert!((rel - wrapped).abs() < 1e-12, "phase {rel} vs {wrapped}");
    // Domain validation.
    assert!(onshell_ft(0.0, 0.0, &params, p).is_err());
    assert!(onshell_ft(-1.0, 0.0, &params, p).is_err());
}

#[test]
fn smearing_function_support_ball() {
    use clickbound::smearing::smearing_f;
    let params = ModelParams::new(1.7, 2.0).unwrap();
    let c = params.center();
    assert_eq!(c, [0.0, -std::f64::consts::SQRT_2 * 2.0, 0.0, 0.0]);
    // Value at the center is exactly α (ϑ(1) = 1).
    assert_eq!(smearing_f(&c, &params), 1.7);
    // Zero on and outside the unit sphere around C.
    assert_eq!(smearing_f(&[c[0] + 1.0, c[1], c[2], c[3]], &params), 0.0);
    assert_eq!(smearing_f(&[c[0], c[1] - 2.5, c[2], c[3]], &params), 0.0);
    assert_eq!(smearing_f(&[0.0; 4], &params), 0.0); // origin is √2·r away
    // Bounded by α inside, and reflection-symmetric about the center.
    let mut rng = Lcg::new(0x5eed_0012);
    for _ in 0..200 {
        let d: Vec<f64> = (0..4).map(|_| rng.in_range(-1.2, 1.2)).collect();
        let x = [c[0] + d[0], c[1] + d[1], c[2] + d[2], c[3] + d[3]];
        let m = [c[0] - d[0], c[1] - d[1], c[2] - d[2], c[3] - d[3]];
        let v = smearing_f(&x, &params);
        assert!((0.0..=1.7).contains(&v));
        // Not bitwise: c ± d round differently against c, so the two radii
        // disagree in the last ulp and ϑ propagates that.
        let w = smearing_f(&m, &params);
        assert!((v - w).abs() < 1e-12, "reflection symmetry: {v} vs {w}");
    }
}

#[test]
fn params_are_validated() {
    assert!(ModelParams::new(1.0, 1.0).is_ok());
    assert!(ModelParams::new(0.0, 5.0).is_ok());
    assert!(ModelParams::new(1.0, 0.99).is_err());
    assert!(ModelParams::new(f64::NAN, 2.0).is_err());
    assert!(ModelParams::new(1.0, f64::INFINITY).is_err());
}

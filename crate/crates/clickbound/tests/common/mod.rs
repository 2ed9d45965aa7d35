//! Shared helpers for the integration tests: an independent Bessel oracle
//! and a tiny deterministic generator for sample points.
//!
//! The oracle deliberately avoids the implementation path used by the crate
//! (a port of the FreeBSD msun routines): small arguments use the power
//! series, large arguments use Miller's downward recurrence normalized by
//! `J₀(x) + 2·Σ_{k≥1} J_{2k}(x) = 1`, so agreement is evidence, not an
//! identity check of one routine against itself.

#![allow(dead_code)]

use clickbound::smearing::{ModelParams, OnShellProfile};
use clickbound::wightman::{OverlapTable, TableSpec};
use std::path::PathBuf;
use std::sync::OnceLock;

/// The default radial profile, built once per test binary: the build costs
/// a few seconds and its output is identical for every caller.
pub fn profile() -> &'static OnShellProfile {
    static PROFILE: OnceLock<OnShellProfile> = OnceLock::new();
    PROFILE.get_or_init(|| OnShellProfile::build().expect("default profile must build"))
}

/// Overlap-table cache shared across the test binaries. The store is atomic
/// (temp file + rename), so concurrent binaries can race on a build and the
/// loser simply reloads the winner's file.
pub fn shared_cache_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("table-cache")
}

/// A default-spec overlap table for `(alpha, r_ratio)`, built at most once
/// per cache lifetime and reloaded from disk afterwards.
pub fn table(alpha: f64, r_ratio: f64) -> OverlapTable {
    let params = ModelParams::new(alpha, r_ratio).expect("test parameters are valid");
    OverlapTable::load_or_build(
        &params,
        &TableSpec::default(),
        profile(),
        Some(&shared_cache_dir()),
    )
    .expect("table build must succeed")
}

/// `(J₀, J₁, J₂)` at `x ≥ 0` from series/recurrence, accurate to ~1e-13 of
/// the oscillation envelope across `x ≤ 10³`.
pub fn bessel_j_low(x: f64) -> (f64, f64, f64) {
    assert!(x >= 0.0 && x.is_finite(), "oracle domain is finite x ≥ 0");
    if x == 0.0 {
        return (1.0, 0.0, 0.0);
    }
    if x <= 8.0 {
        return bessel_series(x);
    }
    bessel_miller(x)
}

/// Power series `J_ν(x) = (x/2)^ν Σ_m (−x²/4)^m / (m! (m+ν)!)`; the largest
/// term at x = 8 is ~28, so cancellation costs at most ~1e-14 absolute.
fn bessel_series(x: f64) -> (f64, f64, f64) {
    let q = 0.25 * x * x;
    let mut j = [0.0f64; 3];
    for (nu, out) in j.iter_mut().enumerate() {
        let mut term = 1.0;
        for f in 1..=nu {
            term /= f as f64;
        }
        let mut sum = term;
        let mut m = 1.0f64;
        loop {
            term *= -q / (m * (m + nu as f64));
            sum += term;
            if term.abs() < 1e-20 * sum.abs().max(1e-300) {
                break;
            }
            m += 1.0;
        }
        *out = (0.5 * x).powi(nu as i32) * sum;
    }
    (j[0], j[1], j[2])
}

/// Miller's algorithm: run the three-term recurrence downward from an order
/// far above the turning point (where J_n is negligible), then scale the
/// whole sequence by the even-order normalization identity.
fn bessel_miller(x: f64) -> (f64, f64, f64) {
    let mut start = (x + 15.0 * x.cbrt() + 60.0) as usize;
    start += start % 2;
    let mut jp = 0.0f64; // J_{k+1}, unnormalized
    let mut jc = 1e-300f64; // J_k
    let mut norm = 0.0f64;
    let mut out = [0.0f64; 3];
    let mut k = start;
    loop {
        if k <= 2 {
            out[k] = jc;
        }
        if k.is_multiple_of(2) {
            norm += if k == 0 { jc } else { 2.0 * jc };
        }
        if k == 0 {
            break;
        }
        let jm = (2.0 * k as f64 / x) * jc - jp;
        jp = jc;
        jc = jm;
        k -= 1;
        if jc.abs() > 1e250 {
            jc *= 1e-250;
            jp *= 1e-250;
            norm *= 1e-250;
            for v in &mut out {
                *v *= 1e-250;
            }
        }
    }
    (out[0] / norm, out[1] / norm, out[2] / norm)
}

/// Amplitude of the large-argument Bessel oscillation, `√(2/(πx))`, clamped
/// near the origin where J₁ peaks at ~0.58.
pub fn bessel_envelope(x: f64) -> f64 {
    if x < 2.0 {
        0.6
    } else {
        (2.0 / (std::f64::consts::PI * x)).sqrt()
    }
}

/// A fixed 64-bit LCG (Knuth's MMIX multiplier) so "random" sample points
/// are identical on every run and platform.
pub struct Lcg(u64);

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Self(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        self.0
    }

    /// Uniform draw in [0, 1) with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform draw in (lo, hi], never exactly `lo`.
    pub fn in_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * (1.0 - self.uniform())
    }
}

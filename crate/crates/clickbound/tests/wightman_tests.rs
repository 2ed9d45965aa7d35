//! Boosted-overlap checks against frozen reference values, structural
//! identities (hermiticity, amplitude scaling), and the table cache.
//!
//! The reference digits were computed independently before this module was
//! written, with fixed-order Gauss–Legendre tensor quadrature (3000 × 160
//! nodes) on the (ρ, σ) form of the overlap integral; that evaluation was
//! itself validated against the (k, μ) form at the 1e-13 level. Agreement
//! here is asked at 1e-9 absolute (the self-overlap is ~2e-2, so this is
//! ~5e-8 relative to the overall scale).

mod common;

use clickbound::quad::QuadratureSpec;
use clickbound::smearing::ModelParams;
use clickbound::wightman::{boosted_overlap, w2_self, OverlapTable, TableSpec};
use common::profile;
use num_complex::Complex64;

/// Self-overlap W(0) at α = 1 (independent of r).
const W0_ALPHA1: f64 = 0.020578827911294836;

/// Frozen boosted overlaps W(η) at α = 1: (η, r_ratio, Re W, Im W).
const W_REFERENCE: [(f64, f64, f64, f64); 10] = [
    (0.05, 2.0, 1.94236649e-02, 6.00014067e-03),
    (0.3, 1.0, 0.011532804626750302, 0.013901858234638664),
    (0.3, 2.0, -2.01042697e-03, 1.33548942e-02),
    (0.7, 1.0, -3.42537190e-03, 1.03658675e-02),
    (0.7, 2.0, -2.47708858e-03, 9.19937656e-05),
    (1.5, 1.0, -2.12597770e-03, 2.56354790e-04),
    (1.5, 2.0, -3.3891495210718286e-04, 0.0),
    (5.0, 1.0, -2.766196175509449e-05, 0.0),
    (5.0, 2.0, -5.977639124468992e-06, 0.0),
    (10.0, 1.0, -1.8306441040072378e-07, 0.0),
];

fn quad() -> QuadratureSpec {
    QuadratureSpec::new(1e-9, 40_000, 16, None).unwrap()
}

#[test]
fn self_overlap_matches_frozen_value() {
    let params = ModelParams::new(1.0, 1.0).unwrap();
    let r = w2_self(&params, profile(), &quad()).unwrap();
    assert!(r.converged);
    assert!(
        (r.value - W0_ALPHA1).abs() < 1e-8 * W0_ALPHA1,
        "W0 = {:.15e}",
        r.value
    );
    // Quadratic in α, exactly: the amplitude enters as an overall factor.
    let scaled = ModelParams::new(2.0, 1.0).unwrap();
    let r4 = w2_self(&scaled, profile(), &quad()).unwrap();
    assert_eq!(r4.value, 4.0 * r.value);
    // And independent of the center offset.
    let moved = ModelParams::new(1.0, 2.0).unwrap();
    assert_eq!(w2_self(&moved, profile(), &quad()).unwrap().value, r.value);
}

#[test]
fn boosted_overlap_matches_frozen_values() {
    // η = 0.05 runs the direct (k, μ) quadrature, everything larger the
    // (ρ, σ) form; the reference values came from the (ρ, σ) evaluator, so
    // the first row is also a cross-path consistency check.
    for &(eta, r_ratio, re, im) in &W_REFERENCE {
        let params = ModelParams::new(1.0, r_ratio).unwrap();
        let got = boosted_overlap(eta, &params, profile(), &quad()).unwrap();
        assert!(got.converged, "unconverged at η = {eta}, r = {r_ratio}");
        let dev = (got.value - Complex64::new(re, im)).norm();
        assert!(
            dev < 1e-9,
            "W({eta}, r={r_ratio}) = {:.12e} {:+.12e}i, reference {re:.12e} {im:+.12e}i (|Δ| = {dev:.3e})",
            got.value.re,
            got.value.im
        );
    }
}

#[test]
fn hermiticity_under_rapidity_reversal() {
    let params = ModelParams::new(1.0, 2.0).unwrap();
    let plus = boosted_overlap(0.7, &params, profile(), &quad()).unwrap();
    let minus = boosted_overlap(-0.7, &params, profile(), &quad()).unwrap();
    assert!(
        (minus.value - plus.value.conj()).norm() < 1e-10,
        "W(−η) = {} vs conj W(η) = {}",
        minus.value,
        plus.value.conj()
    );
}

#[test]
fn amplitude_scaling_is_exact() {
    let base = ModelParams::new(1.0, 2.0).unwrap();
    let twice = ModelParams::new(2.0, 2.0).unwrap();
    let w1 = boosted_overlap(0.7, &base, profile(), &quad()).unwrap();
    let w4 = boosted_overlap(0.7, &twice, profile(), &quad()).unwrap();
    // α = 2 scales every integrand sample by exactly 4 (a power of two),
    // so the adaptive refinement makes identical decisions and the sums
    // match to the last bit.
    assert!(
        (w4.value - w1.value * 4.0).norm() <= 1e-15 * w4.value.norm(),
        "α-scaling drift: {} vs {}",
        w4.value,
        w1.value * 4.0
    );
}

#[test]
fn smooth_across_the_evaluation_path_switch() {
    // |η| = 0.05 is the hand-off between the (k, μ) and (ρ, σ) forms. The
    // overlap itself moves by ~2e-5 across a 2e-4 window; a path mismatch
    // would show up as a far larger jump.
    let params = ModelParams::new(1.0, 1.0).unwrap();
    let below = boosted_overlap(0.0499, &params, profile(), &quad()).unwrap();
    let above = boosted_overlap(0.0501, &params, profile(), &quad()).unwrap();
    assert!(
        (above.value - below.value).norm() < 5e-5,
        "jump across η = 0.05: {} vs {}",
        below.value,
        above.value
    );
}

#[test]
fn table_build_validation_and_interpolation() {
    let params = ModelParams::new(1.0, 1.0).unwrap();
    let spec = TableSpec::default();
    let table = OverlapTable::build(&params, &spec, profile()).unwrap();

    assert!(table.converged(), "every sample quadrature must converge");
    assert!(table.tail_ok(), "tail fraction {:.3e}", table.tail_fraction());
    assert!(table.loo_ok(), "max LOO error {:.3e}", table.max_loo_error());
    assert!(table.is_trusted());
    assert!((table.w0() - W0_ALPHA1).abs() < 1e-8 * W0_ALPHA1);
    assert!(table.max_loo_error() <= 1e-4 * table.w0());
    assert!(table.tail_fraction() <= 1e-6);
    assert_eq!(table.eta().first().copied(), Some(0.0));
    assert_eq!(table.eta().last().copied(), Some(spec.eta_max));
    assert_eq!(table.eta().len(), table.samples().len());

    // The stored η = 0 sample comes from the 2-D path; it must agree with
    // the 1-D self-overlap and carry no imaginary part to speak of.
    let at0 = table.w_at(0.0);
    assert!((at0.re - table.w0()).abs() < 1e-7 * table.w0());
    assert!(at0.im.abs() < 1e-10 * table.w0());

    // Interpolation at off-grid rapidities against direct quadrature, in
    // both the log-dense and the uniform block.
    for eta in [0.0105, 0.37, 1.125, 5.125] {
        let direct = boosted_overlap(eta, &params, profile(), &quad()).unwrap();
        let interp = table.w_at(eta);
        assert!(
            (interp - direct.value).norm() <= 1e-4 * table.w0(),
            "interpolation at η = {eta}: {interp} vs {}",
            direct.value
        );
    }

    // Reflection and truncation semantics of the lookup.
    let w = table.w_at(1.25);
    assert_eq!(table.w_at(-1.25), w.conj());
    assert_eq!(table.w_at(spec.eta_max + 1.0), Complex64::new(0.0, 0.0));
}

#[test]
fn cache_round_trip_is_lossless() {
    let dir = tempfile::tempdir().unwrap();
    // α = 0 keeps the build nearly free: every quadrature sees the zero
    // integrand, and the cache mechanics are identical.
    let params = ModelParams::new(0.0, 1.0).unwrap();
    let spec = TableSpec::default();

    let built = OverlapTable::load_or_build(&params, &spec, profile(), Some(dir.path())).unwrap();
    let cache_file = dir.path().join(format!("overlap-{}.json", built.hash()));
    assert!(cache_file.exists(), "cache file must be written");
    let bytes_before = std::fs::read(&cache_file).unwrap();

    let loaded = OverlapTable::load_or_build(&params, &spec, profile(), Some(dir.path())).unwrap();
    assert_eq!(loaded.hash(), built.hash());
    assert_eq!(loaded.w0(), built.w0());
    assert_eq!(loaded.eta(), built.eta());
    assert_eq!(loaded.samples(), built.samples());
    assert_eq!(loaded.converged(), built.converged());
    // The load path must not rewrite the file.
    assert_eq!(std::fs::read(&cache_file).unwrap(), bytes_before);

    // A corrupt cache entry falls back to a rebuild instead of failing.
    std::fs::write(&cache_file, b"{ not json").unwrap();
    let rebuilt = OverlapTable::load_or_build(&params, &spec, profile(), Some(dir.path())).unwrap();
    assert_eq!(rebuilt.w0(), built.w0());
    assert_eq!(rebuilt.samples(), built.samples());

    // And the zero-amplitude physics is exact.
    assert_eq!(built.w0(), 0.0);
    assert!(built.samples().iter().all(|w| w.norm() == 0.0));
    assert!(built.is_trusted());
}

#[test]
fn bad_rapidity_is_rejected() {
    let params = ModelParams::new(1.0, 1.0).unwrap();
    assert!(boosted_overlap(f64::NAN, &params, profile(), &quad()).is_err());
    assert!(boosted_overlap(f64::INFINITY, &params, profile(), &quad()).is_err());
}

//! Deterministic adaptive quadrature on finite and semi-infinite intervals,
//! in one and two dimensions, with explicit error estimates.
//!
//! The scheme is Gauss–Legendre panels with greedy refinement: each panel
//! carries an error estimate (difference between the panel rule and the sum
//! of its two half-panel rules), and the panel with the worst estimate is
//! split until the summed estimate meets the target or the subdivision
//! budget runs out. Refinement order is a strict total order (estimate,
//! insertion sequence), every integral is evaluated single-threaded, and
//! accumulation order is fixed, so results are bit-identical across runs
//! and thread counts.
//!
//! Semi-infinite integrals are truncated at an explicit, caller-chosen
//! cutoff; the integrator then probes the integrand's decay past nothing —
//! it samples the magnitude envelope near the cutoff, fits a decay
//! exponent, and folds a conservative tail bound into the reported error
//! (flagging the result if the tail cannot be bounded).

use num_complex::Complex64;
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use thiserror::Error;

/// Absolute convergence floor: integrals smaller than this in magnitude are
/// accepted once their absolute error estimate is below it.
pub const ABS_FLOOR: f64 = 1e-15;

/// Errors from spec validation or malformed integration domains.
#[derive(Debug, Error, PartialEq)]
pub enum QuadError {
    #[error("relative tolerance {0} outside [1e-14, 1e-2]")]
    InvalidTolerance(f64),
    #[error("panel order {0} too low; need at least 4 nodes per panel")]
    InvalidPanelOrder(usize),
    #[error("max subdivisions must be positive")]
    InvalidMaxSubdivisions,
    #[error("integration interval [{a}, {b}) is empty or not finite")]
    BadInterval { a: f64, b: f64 },
    #[error("semi-infinite integral needs a cutoff policy with a finite positive cutoff")]
    MissingCutoff,
}

/// Truncation policy for semi-infinite integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffPolicy {
    /// Upper integration limit substituted for +∞.
    pub cutoff: f64,
    /// Probe the integrand's decay near the cutoff and add a tail bound to
    /// the error estimate (flagging the result when no bound is possible).
    pub check_tail_decay: bool,
}

impl CutoffPolicy {
    pub fn at(cutoff: f64) -> Self {
        Self {
            cutoff,
            check_tail_decay: true,
        }
    }
}

/// Controls for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Target relative tolerance, in [1e-14, 1e-2].
    pub rel_tol: f64,
    /// Budget of panel (or cell) splits before giving up.
    pub max_subdivisions: u32,
    /// Gauss–Legendre nodes per panel and per tensor-cell axis, ≥ 4.
    pub panel_order: usize,
    /// How to truncate +∞ endpoints; `None` forbids semi-infinite calls.
    pub cutoff: Option<CutoffPolicy>,
}

impl QuadratureSpec {
    /// Validates the spec invariants.
    pub fn new(
        rel_tol: f64,
        max_subdivisions: u32,
        panel_order: usize,
        cutoff: Option<CutoffPolicy>,
    ) -> Result<Self, QuadError> {
        if !(1e-14..=1e-2).contains(&rel_tol) {
            return Err(QuadError::InvalidTolerance(rel_tol));
        }
        if panel_order < 4 {
            return Err(QuadError::InvalidPanelOrder(panel_order));
        }
        if max_subdivisions == 0 {
            return Err(QuadError::InvalidMaxSubdivisions);
        }
        Ok(Self {
            rel_tol,
            max_subdivisions,
            panel_order,
            cutoff,
        })
    }

    /// A general-purpose default: order-16 panels, 1e-10 relative target.
    pub fn standard() -> Self {
        Self {
            rel_tol: 1e-10,
            max_subdivisions: 40_000,
            panel_order: 16,
            cutoff: None,
        }
    }

    /// Same panels, different tolerance.
    pub fn with_tol(self, rel_tol: f64) -> Result<Self, QuadError> {
        Self::new(rel_tol, self.max_subdivisions, self.panel_order, self.cutoff)
    }

    /// Same panels, truncating +∞ at `cutoff`.
    pub fn with_cutoff(mut self, cutoff: f64) -> Self {
        self.cutoff = Some(CutoffPolicy::at(cutoff));
        self
    }
}

/// Outcome of an integration: value, error estimate, evaluation count, and
/// whether the estimate met the target. Unconverged results are returned,
/// never silently dropped — callers decide whether to propagate the flag.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult<T> {
    pub value: T,
    pub error: f64,
    pub evaluations: u64,
    pub converged: bool,
}

/// Scalar values the integrator can accumulate: reals and complex numbers.
pub trait QuadScalar: Copy {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn sub(self, other: Self) -> Self;
    fn scale(self, w: f64) -> Self;
    fn norm(self) -> f64;
}

impl QuadScalar for f64 {
    #[inline]
    fn zero() -> Self {
        0.0
    }
    #[inline]
    fn add(self, other: Self) -> Self {
        self + other
    }
    #[inline]
    fn sub(self, other: Self) -> Self {
        self - other
    }
    #[inline]
    fn scale(self, w: f64) -> Self {
        self * w
    }
    #[inline]
    fn norm(self) -> f64 {
        self.abs()
    }
}

impl QuadScalar for Complex64 {
    #[inline]
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    #[inline]
    fn add(self, other: Self) -> Self {
        self + other
    }
    #[inline]
    fn sub(self, other: Self) -> Self {
        self - other
    }
    #[inline]
    fn scale(self, w: f64) -> Self {
        self * w
    }
    #[inline]
    fn norm(self) -> f64 {
        self.norm()
    }
}

/// Gauss–Legendre nodes and weights on [−1, 1], by Newton iteration on the
/// Legendre polynomial. Converges to machine precision in a handful of
/// steps for the orders used here.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2, "need at least a 2-point rule");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi-style initial guess for the i-th root.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n(x) and P_n'(x) by upward recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = (n as f64) * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn gl_panel<T, F>(f: &F, a: f64, b: f64, nodes: &[f64], weights: &[f64], evals: &mut u64) -> T
where
    T: QuadScalar,
    F: Fn(f64) -> T,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut acc = T::zero();
    for (x, w) in nodes.iter().zip(weights) {
        acc = acc.add(f(c + h * x).scale(w * h));
    }
    *evals += nodes.len() as u64;
    acc
}

/// A refinable panel: value from the two half-panel rules, error from the
/// difference against the single whole-panel rule.
struct Panel<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
    seq: u64,
}

struct PanelOrd {
    error: f64,
    seq: u64,
    index: usize,
}

impl PartialEq for PanelOrd {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error && self.seq == other.seq
    }
}
impl Eq for PanelOrd {}
impl PartialOrd for PanelOrd {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for PanelOrd {
    fn cmp(&self, other: &Self) -> Ordering {
        // Max-heap on error; older panels win ties so order is total and
        // reproducible.
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

fn make_panel<T, F>(
    f: &F,
    a: f64,
    b: f64,
    nodes: &[f64],
    weights: &[f64],
    seq: u64,
    evals: &mut u64,
) -> Panel<T>
where
    T: QuadScalar,
    F: Fn(f64) -> T,
{
    let whole: T = gl_panel(f, a, b, nodes, weights, evals);
    let mid = 0.5 * (a + b);
    let left: T = gl_panel(f, a, mid, nodes, weights, evals);
    let right: T = gl_panel(f, mid, b, nodes, weights, evals);
    let refined = left.add(right);
    Panel {
        a,
        b,
        value: refined,
        error: refined.sub(whole).norm(),
        seq,
    }
}

/// Estimates |∫_X^∞ f| from magnitude samples near the cutoff X.
///
/// Samples the envelope on [X/4, X/2] and [X/2, X], fits a power-law decay
/// exponent p from the two octaves, and bounds the tail by env(X)·X/(p−1).
/// A positive `freq_hint` (radians per unit x) certifies oscillatory
/// cancellation, which tightens the bound by the phase turnover count, as
/// integration by parts would. Returns `None` when decay is too slow to
/// bound (p ≤ 1.05).
fn tail_estimate<T, F>(f: &F, cutoff: f64, freq_hint: f64, evals: &mut u64) -> Option<f64>
where
    T: QuadScalar,
    F: Fn(f64) -> T,
{
    // Golden-ratio stepping avoids hitting periodic zeros of an oscillatory
    // integrand with every probe.
    const GOLDEN: f64 = 0.618_033_988_749_894_9;
    let probe = |lo: f64, hi: f64, evals: &mut u64| -> f64 {
        let mut worst = 0.0f64;
        let mut t = 0.5 * GOLDEN;
        for _ in 0..8 {
            let x = lo + (hi - lo) * t;
            worst = worst.max(f(x).norm());
            t += GOLDEN;
            t -= t.floor();
        }
        *evals += 8;
        worst
    };
    let env_far = probe(0.5 * cutoff, cutoff, evals);
    if env_far == 0.0 {
        return Some(0.0);
    }
    let env_near = probe(0.25 * cutoff, 0.5 * cutoff, evals);
    if env_near <= env_far {
        return None; // not decaying over the last octave
    }
    let p = (env_near / env_far).log2();
    if p <= 1.05 {
        return None;
    }
    let base = env_far * cutoff / (p - 1.0);
    let osc = if freq_hint > 0.0 {
        (freq_hint * cutoff / (2.0 * std::f64::consts::PI)).max(1.0)
    } else {
        1.0
    };
    Some(base / osc)
}

/// Number of initial panels needed so each holds at most `order/6`
/// oscillation periods of a phase with angular frequency `freq_hint`.
fn initial_panels(len: f64, freq_hint: f64, order: usize) -> usize {
    let base = 4usize;
    if freq_hint <= 0.0 || len <= 0.0 {
        return base;
    }
    let max_len = std::f64::consts::PI * order as f64 / (3.0 * freq_hint);
    base.max((len / max_len).ceil() as usize)
}

/// Adaptive 1-D integration of `f` over `(a, b)`; `b = +∞` is truncated by
/// the spec's cutoff policy. See the module docs for the refinement scheme.
pub fn integrate_1d<T, F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<QuadResult<T>, QuadError>
where
    T: QuadScalar,
    F: Fn(f64) -> T,
{
    integrate_1d_with_hint(f, a, b, 0.0, spec)
}

/// As [`integrate_1d`], with an a-priori bound `freq_hint` on the angular
/// frequency of the integrand's oscillation, used to pre-split panels and
/// to sharpen the semi-infinite tail bound.
pub fn integrate_1d_with_hint<T, F>(
    f: F,
    a: f64,
    mut b: f64,
    freq_hint: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult<T>, QuadError>
where
    T: QuadScalar,
    F: Fn(f64) -> T,
{
    let mut evals: u64 = 0;
    let mut tail_err = 0.0f64;
    let mut tail_bounded = true;
    if b == f64::INFINITY {
        let policy = spec.cutoff.ok_or(QuadError::MissingCutoff)?;
        if !policy.cutoff.is_finite() || policy.cutoff <= a {
            return Err(QuadError::MissingCutoff);
        }
        b = policy.cutoff;
        if policy.check_tail_decay {
            match tail_estimate(&f, b, freq_hint, &mut evals) {
                Some(t) => tail_err = t,
                None => {
                    tail_bounded = false;
                    tail_err = f(b).norm() * b;
                    evals += 1;
                }
            }
        }
    }
    if !(a.is_finite() && b.is_finite()) || b <= a {
        return Err(QuadError::BadInterval { a, b });
    }

    let (nodes, weights) = gauss_legendre(spec.panel_order);
    let n_init = initial_panels(b - a, freq_hint, spec.panel_order);

    let mut panels: Vec<Panel<T>> = Vec::with_capacity(n_init + 2 * spec.max_subdivisions as usize);
    let mut heap: BinaryHeap<PanelOrd> = BinaryHeap::new();
    let mut seq: u64 = 0;
    let mut total = T::zero();
    let mut total_err = 0.0f64;
    let step = (b - a) / n_init as f64;
    for i in 0..n_init {
        let pa = a + step * i as f64;
        let pb = if i + 1 == n_init { b } else { a + step * (i + 1) as f64 };
        let p = make_panel(&f, pa, pb, &nodes, &weights, seq, &mut evals);
        seq += 1;
        total = total.add(p.value);
        total_err += p.error;
        heap.push(PanelOrd {
            error: p.error,
            seq: p.seq,
            index: panels.len(),
        });
        panels.push(p);
    }

    let mut splits: u32 = 0;
    let target = |v: &T, tol: f64| (tol * v.norm()).max(ABS_FLOOR);
    while total_err + tail_err > target(&total, spec.rel_tol) && splits < spec.max_subdivisions {
        let Some(worst) = heap.pop() else { break };
        let parent = &panels[worst.index];
        // Skip stale heap entries left behind by earlier splits.
        if parent.error != worst.error || parent.seq != worst.seq {
            continue;
        }
        let (pa, pb, pv, pe) = (parent.a, parent.b, parent.value, parent.error);
        let mid = 0.5 * (pa + pb);
        let kill = worst.index;
        let left = make_panel(&f, pa, mid, &nodes, &weights, seq, &mut evals);
        seq += 1;
        let right = make_panel(&f, mid, pb, &nodes, &weights, seq, &mut evals);
        seq += 1;
        total = total.add(left.value).add(right.value).sub(pv);
        total_err += left.error + right.error - pe;
        // Mark the parent consumed so stale heap entries never match.
        panels[kill].error = -1.0;
        panels[kill].seq = u64::MAX;
        for child in [left, right] {
            heap.push(PanelOrd {
                error: child.error,
                seq: child.seq,
                index: panels.len(),
            });
            panels.push(child);
        }
        splits += 1;
    }

    let error = total_err + tail_err;
    let converged = tail_bounded && error <= target(&total, spec.rel_tol);
    Ok(QuadResult {
        value: total,
        error,
        evaluations: evals,
        converged,
    })
}

/// A 2-D tensor cell with 4-way refinement, mirroring the 1-D panels.
struct Cell<T> {
    ax: (f64, f64),
    ay: (f64, f64),
    value: T,
    error: f64,
    seq: u64,
}

fn gl_cell<T, F>(
    f: &F,
    ax: (f64, f64),
    ay: (f64, f64),
    nodes: &[f64],
    weights: &[f64],
    evals: &mut u64,
) -> T
where
    T: QuadScalar,
    F: Fn(f64, f64) -> T,
{
    let cx = 0.5 * (ax.0 + ax.1);
    let hx = 0.5 * (ax.1 - ax.0);
    let cy = 0.5 * (ay.0 + ay.1);
    let hy = 0.5 * (ay.1 - ay.0);
    let mut acc = T::zero();
    for (x, wx) in nodes.iter().zip(weights) {
        let fx = cx + hx * x;
        let mut row = T::zero();
        for (y, wy) in nodes.iter().zip(weights) {
            row = row.add(f(fx, cy + hy * y).scale(*wy));
        }
        acc = acc.add(row.scale(wx * hx * hy));
    }
    *evals += (nodes.len() * nodes.len()) as u64;
    acc
}

fn make_cell<T, F>(
    f: &F,
    ax: (f64, f64),
    ay: (f64, f64),
    nodes: &[f64],
    weights: &[f64],
    seq: u64,
    evals: &mut u64,
) -> Cell<T>
where
    T: QuadScalar,
    F: Fn(f64, f64) -> T,
{
    let whole: T = gl_cell(f, ax, ay, nodes, weights, evals);
    let mx = 0.5 * (ax.0 + ax.1);
    let my = 0.5 * (ay.0 + ay.1);
    let mut refined = T::zero();
    for qx in [(ax.0, mx), (mx, ax.1)] {
        for qy in [(ay.0, my), (my, ay.1)] {
            let q: T = gl_cell(f, qx, qy, nodes, weights, evals);
            refined = refined.add(q);
        }
    }
    Cell {
        ax,
        ay,
        value: refined,
        error: refined.sub(whole).norm(),
        seq,
    }
}

/// Adaptive 2-D tensor-product integration of `f(x, y)` over
/// `(x0, x1) × (y0, y1)`, where `x1 = +∞` is truncated by the cutoff
/// policy. Frequency hints bound the phase oscillation along each axis.
#[allow(clippy::too_many_arguments)]
pub fn integrate_2d_with_hint<T, F>(
    f: F,
    x0: f64,
    mut x1: f64,
    y0: f64,
    y1: f64,
    freq_x: f64,
    freq_y: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult<T>, QuadError>
where
    T: QuadScalar,
    F: Fn(f64, f64) -> T,
{
    let mut evals: u64 = 0;
    let mut tail_err = 0.0f64;
    let mut tail_bounded = true;
    if x1 == f64::INFINITY {
        let policy = spec.cutoff.ok_or(QuadError::MissingCutoff)?;
        if !policy.cutoff.is_finite() || policy.cutoff <= x0 {
            return Err(QuadError::MissingCutoff);
        }
        x1 = policy.cutoff;
        if policy.check_tail_decay {
            // Envelope over y at probed x, reduced to the 1-D estimator.
            let ymid = 0.5 * (y0 + y1);
            let env = |x: f64| -> f64 {
                let mut m = f(x, ymid).norm();
                m = m.max(f(x, y0 + 0.211 * (y1 - y0)).norm());
                m = m.max(f(x, y0 + 0.789 * (y1 - y0)).norm());
                m
            };
            match tail_estimate(&|x| env(x), x1, freq_x, &mut evals) {
                Some(t) => tail_err = t * (y1 - y0),
                None => {
                    tail_bounded = false;
                    tail_err = env(x1) * x1 * (y1 - y0);
                }
            }
            evals += 24; // three y-probes per envelope sample
        }
    }
    if !(x0.is_finite() && x1.is_finite() && y0.is_finite() && y1.is_finite()) || x1 <= x0 || y1 <= y0 {
        return Err(QuadError::BadInterval { a: x0, b: x1 });
    }

    let (nodes, weights) = gauss_legendre(spec.panel_order);
    let nx = initial_panels(x1 - x0, freq_x, spec.panel_order);
    let ny = initial_panels(y1 - y0, freq_y, spec.panel_order);

    let mut cells: Vec<Cell<T>> = Vec::new();
    let mut heap: BinaryHeap<PanelOrd> = BinaryHeap::new();
    let mut seq: u64 = 0;
    let mut total = T::zero();
    let mut total_err = 0.0f64;
    let sx = (x1 - x0) / nx as f64;
    let sy = (y1 - y0) / ny as f64;
    for i in 0..nx {
        for j in 0..ny {
            let cx = (x0 + sx * i as f64, if i + 1 == nx { x1 } else { x0 + sx * (i + 1) as f64 });
            let cy = (y0 + sy * j as f64, if j + 1 == ny { y1 } else { y0 + sy * (j + 1) as f64 });
            let c = make_cell(&f, cx, cy, &nodes, &weights, seq, &mut evals);
            seq += 1;
            total = total.add(c.value);
            total_err += c.error;
            heap.push(PanelOrd {
                error: c.error,
                seq: c.seq,
                index: cells.len(),
            });
            cells.push(c);
        }
    }

    let mut splits: u32 = 0;
    let target = |v: &T, tol: f64| (tol * v.norm()).max(ABS_FLOOR);
    while total_err + tail_err > target(&total, spec.rel_tol) && splits < spec.max_subdivisions {
        let Some(worst) = heap.pop() else { break };
        let parent = &cells[worst.index];
        if parent.error != worst.error || parent.seq != worst.seq {
            continue;
        }
        let (pax, pay, pv, pe) = (parent.ax, parent.ay, parent.value, parent.error);
        let kill = worst.index;
        let mx = 0.5 * (pax.0 + pax.1);
        let my = 0.5 * (pay.0 + pay.1);
        cells[kill].error = -1.0;
        cells[kill].seq = u64::MAX;
        let mut delta = T::zero();
        for qx in [(pax.0, mx), (mx, pax.1)] {
            for qy in [(pay.0, my), (my, pay.1)] {
                let c = make_cell(&f, qx, qy, &nodes, &weights, seq, &mut evals);
                seq += 1;
                delta = delta.add(c.value);
                total_err += c.error;
                heap.push(PanelOrd {
                    error: c.error,
                    seq: c.seq,
                    index: cells.len(),
                });
                cells.push(c);
            }
        }
        total = total.add(delta).sub(pv);
        total_err -= pe;
        splits += 1;
    }

    let error = total_err + tail_err;
    let converged = tail_bounded && error <= target(&total, spec.rel_tol);
    Ok(QuadResult {
        value: total,
        error,
        evaluations: evals,
        converged,
    })
}

/// Adaptive 2-D integration without oscillation hints.
pub fn integrate_2d<T, F>(
    f: F,
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    spec: &QuadratureSpec,
) -> Result<QuadResult<T>, QuadError>
where
    T: QuadScalar,
    F: Fn(f64, f64) -> T,
{
    integrate_2d_with_hint(f, x0, x1, y0, y1, 0.0, 0.0, spec)
}

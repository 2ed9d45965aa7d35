//! Cubic spline interpolation on a strictly increasing grid with
//! not-a-knot end conditions (third derivative continuous across the first
//! and last interior knots). Used for the cached rapidity tables.

/// Immutable cubic spline through (x_i, y_i).
#[derive(Debug, Clone)]
pub struct Spline {
    x: Vec<f64>,
    y: Vec<f64>,
    /// Second derivatives at the knots (natural "moments" form).
    m: Vec<f64>,
}

impl Spline {
    /// Builds a not-a-knot cubic spline. Requires at least 4 strictly
    /// increasing knots.
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Self {
        let n = x.len();
        assert!(n >= 4, "spline needs at least 4 knots, got {n}");
        assert_eq!(n, y.len());
        assert!(
            x.windows(2).all(|w| w[1] > w[0]),
            "spline knots must be strictly increasing"
        );
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();

        // Interior moment equations i = 1..n−2:
        //   h[i−1]·M[i−1] + 2(h[i−1]+h[i])·M[i] + h[i]·M[i+1] = rhs_i,
        // closed by the not-a-knot relations
        //   M0   = (1 + h0/h1)·M1 − (h0/h1)·M2,
        //   Mn−1 = (1 + h[n−2]/h[n−3])·M[n−2] − (h[n−2]/h[n−3])·M[n−3].
        let ni = n - 2;
        let mut diag = vec![0.0; ni];
        let mut lower = vec![0.0; ni];
        let mut upper = vec![0.0; ni];
        let mut rhs = vec![0.0; ni];
        for (row, i) in (1..n - 1).enumerate() {
            let d0 = (y[i] - y[i - 1]) / h[i - 1];
            let d1 = (y[i + 1] - y[i]) / h[i];
            rhs[row] = 6.0 * (d1 - d0);
            lower[row] = h[i - 1];
            diag[row] = 2.0 * (h[i - 1] + h[i]);
            upper[row] = h[i];
        }
        // Fold the end relations into the first and last interior rows.
        let r0 = h[0] / h[1];
        diag[0] += h[0] * (1.0 + r0);
        upper[0] -= h[0] * r0;
        let r1 = h[n - 2] / h[n - 3];
        diag[ni - 1] += h[n - 2] * (1.0 + r1);
        lower[ni - 1] -= h[n - 2] * r1;

        // Thomas algorithm.
        let mut c = vec![0.0; ni];
        let mut d = vec![0.0; ni];
        c[0] = upper[0] / diag[0];
        d[0] = rhs[0] / diag[0];
        for i in 1..ni {
            let w = diag[i] - lower[i] * c[i - 1];
            c[i] = upper[i] / w;
            d[i] = (rhs[i] - lower[i] * d[i - 1]) / w;
        }
        let mut mi = vec![0.0; ni];
        mi[ni - 1] = d[ni - 1];
        for i in (0..ni - 1).rev() {
            mi[i] = d[i] - c[i] * mi[i + 1];
        }

        let mut m = vec![0.0; n];
        m[1..(ni + 1)].copy_from_slice(&mi);
        m[0] = (1.0 + r0) * m[1] - r0 * m[2];
        m[n - 1] = (1.0 + r1) * m[n - 2] - r1 * m[n - 3];

        Self { x, y, m }
    }

    /// Spline value at `t`; clamps to the end intervals outside the grid
    /// (callers in this crate never extrapolate by more than round-off).
    pub fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        let i = match self.x.binary_search_by(|v| v.total_cmp(&t)) {
            Ok(j) => j.min(n - 2),
            Err(0) => 0,
            Err(j) => (j - 1).min(n - 2),
        };
        let h = self.x[i + 1] - self.x[i];
        let a = self.x[i + 1] - t;
        let b = t - self.x[i];
        (self.m[i] * a * a * a + self.m[i + 1] * b * b * b) / (6.0 * h)
            + (self.y[i] / h - self.m[i] * h / 6.0) * a
            + (self.y[i + 1] / h - self.m[i + 1] * h / 6.0) * b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_cubics_exactly() {
        // Not-a-knot splines are exact on cubic polynomials.
        let p = |x: f64| 2.0 - x + 3.0 * x * x - 0.5 * x * x * x;
        let x: Vec<f64> = (0..12).map(|i| 0.3 * i as f64).collect();
        let y: Vec<f64> = x.iter().map(|&v| p(v)).collect();
        let s = Spline::new(x, y);
        for i in 0..100 {
            let t = 0.033 * i as f64;
            assert!((s.eval(t) - p(t)).abs() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn interpolates_smooth_functions_to_fourth_order() {
        // Interpolating sin on [0, 4]: halving the knot spacing must shrink
        // the worst-case error by ~2⁴. The end intervals of a not-a-knot fit
        // carry a larger constant than the interior 5/384, so the order —
        // not the constant — is what this pins.
        let worst_at = |h: f64| {
            let n = (4.0 / h).round() as usize + 1;
            let x: Vec<f64> = (0..n).map(|i| h * i as f64).collect();
            let y: Vec<f64> = x.iter().map(|&v| v.sin()).collect();
            let s = Spline::new(x, y);
            let mut worst: f64 = 0.0;
            for i in 0..400 {
                let t = 0.01 * i as f64;
                worst = worst.max((s.eval(t) - t.sin()).abs());
            }
            worst
        };
        let coarse = worst_at(0.05);
        let fine = worst_at(0.025);
        assert!(coarse < 1e-6, "coarse worst={coarse:.3e}");
        let order = (coarse / fine).log2();
        assert!(
            (3.5..=4.8).contains(&order),
            "order={order:.2} (coarse {coarse:.3e}, fine {fine:.3e})"
        );
    }
}

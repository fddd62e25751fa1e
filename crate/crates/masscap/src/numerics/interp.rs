//! Monotone cubic (Fritsch-Carlson) interpolation.

use crate::error::{Error, Result};

/// Piecewise-cubic Hermite interpolant with Fritsch-Carlson limited slopes.
///
/// Monotone data yields a monotone interpolant. C1 everywhere; the second
/// derivative is taken from the local cubic and may jump at knots.
#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    slope: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() || x.len() < 2 {
            return Err(Error::InvalidInput(
                "interpolation needs matching x/y arrays of length >= 2".into(),
            ));
        }
        if x.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput("interpolation abscissae must be strictly increasing".into()));
        }
        let n = x.len();
        let mut d = vec![0.0; n - 1];
        for i in 0..n - 1 {
            d[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
        }
        let mut slope = vec![0.0; n];
        slope[0] = d[0];
        slope[n - 1] = d[n - 2];
        for i in 1..n - 1 {
            slope[i] = if d[i - 1] * d[i] <= 0.0 { 0.0 } else { 0.5 * (d[i - 1] + d[i]) };
        }
        // Fritsch-Carlson limiter
        for i in 0..n - 1 {
            if d[i] == 0.0 {
                slope[i] = 0.0;
                slope[i + 1] = 0.0;
            } else {
                let alpha = slope[i] / d[i];
                let beta = slope[i + 1] / d[i];
                let s = alpha * alpha + beta * beta;
                if s > 9.0 {
                    let tau = 3.0 / s.sqrt();
                    slope[i] = tau * alpha * d[i];
                    slope[i + 1] = tau * beta * d[i];
                }
            }
        }
        Ok(MonotoneCubic { x, y, slope })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.x[0], *self.x.last().unwrap())
    }

    fn cell(&self, t: f64) -> usize {
        match self.x.binary_search_by(|v| v.total_cmp(&t)) {
            Ok(i) => i.min(self.x.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.x.len() - 2),
        }
    }

    /// Interpolated value; clamps linearly outside the data (constant value,
    /// endpoint slope).
    pub fn value(&self, t: f64) -> f64 {
        self.eval(t).0
    }

    pub fn deriv(&self, t: f64) -> f64 {
        self.eval(t).1
    }

    pub fn deriv2(&self, t: f64) -> f64 {
        self.eval(t).2
    }

    /// (value, first, second derivative) at t.
    pub fn eval(&self, t: f64) -> (f64, f64, f64) {
        let n = self.x.len();
        if t <= self.x[0] {
            return (self.y[0] + self.slope[0] * (t - self.x[0]), self.slope[0], 0.0);
        }
        if t >= self.x[n - 1] {
            return (
                self.y[n - 1] + self.slope[n - 1] * (t - self.x[n - 1]),
                self.slope[n - 1],
                0.0,
            );
        }
        let i = self.cell(t);
        let h = self.x[i + 1] - self.x[i];
        let s = (t - self.x[i]) / h;
        let (y0, y1) = (self.y[i], self.y[i + 1]);
        let (m0, m1) = (self.slope[i] * h, self.slope[i + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        let v = h00 * y0 + h10 * m0 + h01 * y1 + h11 * m1;
        let d00 = 6.0 * s2 - 6.0 * s;
        let d10 = 3.0 * s2 - 4.0 * s + 1.0;
        let d01 = -6.0 * s2 + 6.0 * s;
        let d11 = 3.0 * s2 - 2.0 * s;
        let dv = (d00 * y0 + d10 * m0 + d01 * y1 + d11 * m1) / h;
        let e00 = 12.0 * s - 6.0;
        let e10 = 6.0 * s - 4.0;
        let e01 = -12.0 * s + 6.0;
        let e11 = 6.0 * s - 2.0;
        let ddv = (e00 * y0 + e10 * m0 + e01 * y1 + e11 * m1) / (h * h);
        (v, dv, ddv)
    }
}

//! Monotone piecewise-cubic Hermite interpolation (Fritsch–Carlson slopes).

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Pchip {
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
}

fn edge_slope(h0: f64, h1: f64, m0: f64, m1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
    if d.signum() != m0.signum() {
        0.0
    } else if m0.signum() != m1.signum() && d.abs() > 3.0 * m0.abs() {
        3.0 * m0
    } else {
        d
    }
}

impl Pchip {
    /// Knots must be strictly increasing; at least two are required.
    pub fn new(x: &[f64], y: &[f64]) -> Result<Self> {
        let n = x.len();
        if y.len() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                got: y.len(),
            });
        }
        if n < 2 {
            return Err(Error::InvalidGrid("interpolation needs at least two knots".into()));
        }
        if let Some(i) = (1..n).find(|&i| !(x[i] > x[i - 1])) {
            return Err(Error::InvalidGrid(format!("knots not strictly increasing at {i}")));
        }
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let m: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
        let mut d = vec![0.0; n];
        if n == 2 {
            d[0] = m[0];
            d[1] = m[0];
        } else {
            for k in 1..n - 1 {
                if m[k - 1] * m[k] > 0.0 {
                    let w1 = 2.0 * h[k] + h[k - 1];
                    let w2 = h[k] + 2.0 * h[k - 1];
                    d[k] = (w1 + w2) / (w1 / m[k - 1] + w2 / m[k]);
                }
            }
            d[0] = edge_slope(h[0], h[1], m[0], m[1]);
            d[n - 1] = edge_slope(h[n - 2], h[n - 3], m[n - 2], m[n - 3]);
        }
        Ok(Self {
            x: x.to_vec(),
            y: y.to_vec(),
            d,
        })
    }

    fn interval(&self, t: f64) -> usize {
        let n = self.x.len();
        match self.x.partition_point(|&v| v <= t) {
            0 => 0,
            p if p >= n => n - 2,
            p => p - 1,
        }
    }

    /// Value at `t`; outside the knot range the end cubic is extended.
    pub fn eval(&self, t: f64) -> f64 {
        let i = self.interval(t);
        let h = self.x[i + 1] - self.x[i];
        let s = (t - self.x[i]) / h;
        let (s2, s3) = (s * s, s * s * s);
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * self.y[i] + h10 * h * self.d[i] + h01 * self.y[i + 1] + h11 * h * self.d[i + 1]
    }

    pub fn eval_many(&self, t: &[f64]) -> Vec<f64> {
        t.iter().map(|&v| self.eval(v)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_knots_and_lines() {
        let x = [0.0, 0.3, 0.5, 1.0];
        let y = [1.0, 1.6, 2.0, 3.0];
        let p = Pchip::new(&x, &y).unwrap();
        for (a, b) in x.iter().zip(&y) {
            assert!((p.eval(*a) - b).abs() < 1e-15);
        }
        assert!((p.eval(0.75) - 2.5).abs() < 1e-14);
    }

    #[test]
    fn monotone_data_gives_monotone_interpolant() {
        let x: Vec<f64> = (0..8).map(|i| i as f64).collect();
        let y = [0.0, 0.0, 0.1, 5.0, 5.1, 5.1, 9.0, 9.0];
        let p = Pchip::new(&x, &y).unwrap();
        let mut prev = p.eval(0.0);
        for i in 1..=700 {
            let v = p.eval(i as f64 * 0.01);
            assert!(v >= prev - 1e-14);
            prev = v;
        }
    }

    #[test]
    fn rejects_unsorted_knots() {
        assert!(Pchip::new(&[0.0, 1.0, 1.0], &[0.0, 1.0, 2.0]).is_err());
        assert!(Pchip::new(&[0.0, 1.0], &[0.0]).is_err());
    }

    #[test]
    fn smooth_monotone_data_converges_at_third_order() {
        let err = |n: usize| {
            let x: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
            let y: Vec<f64> = x.iter().map(|v| (1.5 * v).sin()).collect();
            let p = Pchip::new(&x, &y).unwrap();
            (0..1000)
                .map(|i| i as f64 / 999.0)
                .fold(0.0f64, |m, t| m.max((p.eval(t) - (1.5 * t).sin()).abs()))
        };
        assert!(err(40) / err(80) > 6.0);
    }
}

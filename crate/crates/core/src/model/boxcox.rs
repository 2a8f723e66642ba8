use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Lower clamp applied to [0, 1] labels before the power transform.
pub const LABEL_FLOOR: f64 = 1e-3;

const LAMBDA_MIN: f64 = -5.0;
const LAMBDA_MAX: f64 = 5.0;
/// Below this |λ| the log branch is used.
const LAMBDA_EPS: f64 = 1e-12;

/// Raw Box-Cox transform of a positive value.
pub fn boxcox(y: f64, lambda: f64) -> f64 {
    if lambda.abs() < LAMBDA_EPS {
        y.ln()
    } else {
        (lambda * y.ln()).exp_m1() / lambda
    }
}

fn boxcox_inverse(z: f64, lambda: f64) -> f64 {
    if lambda.abs() < LAMBDA_EPS {
        z.exp()
    } else {
        ((lambda * z).ln_1p() / lambda).exp()
    }
}

/// Profile log-likelihood of λ for positive data (constants dropped).
pub fn boxcox_log_likelihood(y: &[f64], lambda: f64) -> f64 {
    let n = y.len() as f64;
    let z: Vec<f64> = y.iter().map(|&v| boxcox(v, lambda)).collect();
    let mean = z.iter().sum::<f64>() / n;
    let var = z.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let log_sum: f64 = y.iter().map(|v| v.ln()).sum();
    let ll = -0.5 * n * var.ln() + (lambda - 1.0) * log_sum;
    if ll.is_finite() { ll } else { f64::NEG_INFINITY }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoxCoxTransform {
    pub lambda: f64,
    /// Added to the input before transforming.
    pub shift: f64,
    /// True when `lambda` came from maximum likelihood rather than being set by hand.
    pub fitted: bool,
}

pub fn boxcox_fit(y: &[f64]) -> Result<BoxCoxTransform> {
    boxcox_fit_shifted(y, 0.0)
}

/// Maximum-likelihood λ over [-5, 5]: coarse grid, then golden-section
/// refinement around the best grid point.
pub fn boxcox_fit_shifted(y: &[f64], shift: f64) -> Result<BoxCoxTransform> {
    if y.len() < 3 {
        return Err(Error::invalid(format!("Box-Cox fit needs at least 3 values, got {}", y.len())));
    }
    let shifted: Vec<f64> = y.iter().map(|v| v + shift).collect();
    if let Some(bad) = shifted.iter().find(|v| !(**v > 0.0) || !v.is_finite()) {
        return Err(Error::invalid(format!("Box-Cox input must be positive after shift, found {bad}")));
    }
    let first = shifted[0];
    if shifted.iter().all(|&v| v == first) {
        return Err(Error::invalid("Box-Cox input is constant"));
    }

    let ll = |l: f64| boxcox_log_likelihood(&shifted, l);
    let steps = 200;
    let step = (LAMBDA_MAX - LAMBDA_MIN) / steps as f64;
    let (mut best_l, mut best_v) = (LAMBDA_MIN, f64::NEG_INFINITY);
    for i in 0..=steps {
        let l = LAMBDA_MIN + i as f64 * step;
        let v = ll(l);
        if v > best_v {
            best_v = v;
            best_l = l;
        }
    }
    if !best_v.is_finite() {
        return Err(Error::Numerical("Box-Cox likelihood is not finite on the search interval".into()));
    }

    let (mut a, mut b) = ((best_l - step).max(LAMBDA_MIN), (best_l + step).min(LAMBDA_MAX));
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (ll(c), ll(d));
    while b - a > 1e-10 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = ll(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = ll(d);
        }
    }
    let mid = 0.5 * (a + b);
    let lambda = if ll(mid) >= best_v { mid } else { best_l };
    Ok(BoxCoxTransform { lambda, shift, fitted: true })
}

impl BoxCoxTransform {
    pub fn new(lambda: f64, shift: f64) -> Self {
        BoxCoxTransform { lambda, shift, fitted: false }
    }

    pub fn apply(&self, y: f64) -> Result<f64> {
        let v = y + self.shift;
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::invalid(format!("Box-Cox input {y} is not positive after shift {}", self.shift)));
        }
        Ok(boxcox(v, self.lambda))
    }

    /// Whether `z` lies in the image of the transform.
    pub fn in_range(&self, z: f64) -> bool {
        if !z.is_finite() {
            return false;
        }
        if self.lambda.abs() < LAMBDA_EPS {
            return true;
        }
        1.0 + self.lambda * z > 0.0
    }

    pub fn invert(&self, z: f64) -> Result<f64> {
        if !self.in_range(z) {
            return Err(Error::invalid(format!(
                "value {z} is outside the range of the Box-Cox transform with lambda {}",
                self.lambda
            )));
        }
        Ok(boxcox_inverse(z, self.lambda) - self.shift)
    }

    /// Inverse that maps out-of-range inputs to the nearest boundary value
    /// instead of failing. Used for model predictions.
    pub fn invert_clamped(&self, z: f64) -> f64 {
        if z.is_nan() {
            return f64::NAN;
        }
        if self.in_range(z) {
            return boxcox_inverse(z, self.lambda) - self.shift;
        }
        let l = self.lambda;
        if l.abs() < LAMBDA_EPS {
            return if z > 0.0 { f64::INFINITY } else { -self.shift };
        }
        // 1 + l*z <= 0: the boundary of the image, where y -> 0 for l > 0
        // and y -> infinity for l < 0
        if l > 0.0 { -self.shift } else { f64::INFINITY }
    }
}

/// Box-Cox transform of a [0, 1] label after clamping to [`LABEL_FLOOR`], 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LabelTransform {
    pub boxcox: BoxCoxTransform,
}

impl LabelTransform {
    pub fn fit(labels: &[f64]) -> Result<Self> {
        let clamped: Vec<f64> = labels.iter().map(|&v| clamp_label(v)).collect();
        Ok(LabelTransform { boxcox: boxcox_fit(&clamped)? })
    }

    pub fn forward(&self, label: f64) -> f64 {
        boxcox(clamp_label(label) + self.boxcox.shift, self.boxcox.lambda)
    }

    /// Back to label space, always within [`LABEL_FLOOR`], 1].
    pub fn inverse(&self, z: f64) -> f64 {
        let y = self.boxcox.invert_clamped(z);
        if y.is_nan() { LABEL_FLOOR } else { clamp_label(y) }
    }
}

fn clamp_label(v: f64) -> f64 {
    if v.is_nan() { LABEL_FLOOR } else { v.clamp(LABEL_FLOOR, 1.0) }
}

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::features::SparseVector;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MlpConfig {
    pub hidden: [usize; 2],
    pub epochs: usize,
    pub learning_rate: f64,
    pub seed: u64,
}

impl Default for MlpConfig {
    fn default() -> Self {
        MlpConfig { hidden: [64, 64], epochs: 30, learning_rate: 0.01, seed: 0 }
    }
}

/// Two rectified hidden layers and a linear output, trained on absolute error.
///
/// The first layer is stored input-major (`w1[j * h1 + k]` links input `j`
/// to unit `k`) so that sparse inputs only touch the rows they use.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpModel {
    pub input_dim: usize,
    pub config: MlpConfig,
    w1: Vec<f64>,
    b1: Vec<f64>,
    /// Output-major: `w2[k * h1 + j]`.
    w2: Vec<f64>,
    b2: Vec<f64>,
    w3: Vec<f64>,
    b3: f64,
    /// Training MAE before the first epoch and after every epoch.
    pub loss_trace: Vec<f64>,
}

struct Activations {
    h1: Vec<f64>,
    h2: Vec<f64>,
    out: f64,
}

impl MlpModel {
    fn forward(&self, x: &SparseVector) -> Activations {
        let [n1, n2] = self.config.hidden;
        let mut h1 = self.b1.clone();
        for (j, v) in x.iter() {
            let row = &self.w1[j * n1..(j + 1) * n1];
            for (h, w) in h1.iter_mut().zip(row) {
                *h += v * w;
            }
        }
        h1.iter_mut().for_each(|h| *h = h.max(0.0));
        let mut h2 = self.b2.clone();
        for (k, h) in h2.iter_mut().enumerate() {
            let row = &self.w2[k * n1..(k + 1) * n1];
            *h += row.iter().zip(&h1).map(|(w, a)| w * a).sum::<f64>();
            *h = h.max(0.0);
        }
        debug_assert_eq!(h2.len(), n2);
        let out = self.b3 + self.w3.iter().zip(&h2).map(|(w, a)| w * a).sum::<f64>();
        Activations { h1, h2, out }
    }

    pub fn predict(&self, x: &SparseVector) -> f64 {
        self.forward(x).out
    }

    pub fn parameters_finite(&self) -> bool {
        self.w1.iter().chain(&self.b1).chain(&self.w2).chain(&self.b2).chain(&self.w3).all(|v| v.is_finite())
            && self.b3.is_finite()
    }

    fn sgd_step(&mut self, x: &SparseVector, y: f64, lr: f64) {
        let [n1, n2] = self.config.hidden;
        let a = self.forward(x);
        let g = if a.out > y {
            1.0
        } else if a.out < y {
            -1.0
        } else {
            return;
        };
        let mut d2 = vec![0.0; n2];
        for k in 0..n2 {
            if a.h2[k] > 0.0 {
                d2[k] = g * self.w3[k];
            }
        }
        let mut d1 = vec![0.0; n1];
        for k in 0..n2 {
            if d2[k] == 0.0 {
                continue;
            }
            let row = &self.w2[k * n1..(k + 1) * n1];
            for j in 0..n1 {
                d1[j] += d2[k] * row[j];
            }
        }
        for j in 0..n1 {
            if a.h1[j] <= 0.0 {
                d1[j] = 0.0;
            }
        }

        for k in 0..n2 {
            self.w3[k] -= lr * g * a.h2[k];
        }
        self.b3 -= lr * g;
        for k in 0..n2 {
            if d2[k] == 0.0 {
                continue;
            }
            let row = &mut self.w2[k * n1..(k + 1) * n1];
            for j in 0..n1 {
                row[j] -= lr * d2[k] * a.h1[j];
            }
            self.b2[k] -= lr * d2[k];
        }
        for (j, v) in x.iter() {
            let row = &mut self.w1[j * n1..(j + 1) * n1];
            for (w, d) in row.iter_mut().zip(&d1) {
                *w -= lr * v * d;
            }
        }
        for (b, d) in self.b1.iter_mut().zip(&d1) {
            *b -= lr * d;
        }
    }

    fn mae(&self, x: &[SparseVector], y: &[f64]) -> f64 {
        x.iter().zip(y).map(|(v, t)| (self.predict(v) - t).abs()).sum::<f64>() / y.len() as f64
    }
}

fn uniform(rng: &mut ChaCha8Rng, n: usize, a: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-a..a)).collect()
}

fn median(y: &[f64]) -> f64 {
    let mut s = y.to_vec();
    s.sort_by(f64::total_cmp);
    let m = s.len() / 2;
    if s.len() % 2 == 1 { s[m] } else { 0.5 * (s[m - 1] + s[m]) }
}

/// Per-sample stochastic gradient descent on mean absolute error with a
/// seeded visiting order. The first layer's init range is scaled by the
/// mean squared input norm so sparse, normalized inputs start in the same
/// activation regime as dense ones.
pub fn train_mlp(x: &[SparseVector], y: &[f64], config: &MlpConfig) -> Result<MlpModel> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), actual: y.len() });
    }
    if x.len() < 2 {
        return Err(Error::invalid(format!("MLP needs at least 2 samples, got {}", x.len())));
    }
    if config.hidden.contains(&0) || !(config.learning_rate > 0.0) {
        return Err(Error::invalid(format!("invalid MLP configuration {config:?}")));
    }
    let input_dim = x[0].dim();
    if let Some(bad) = x.iter().find(|v| v.dim() != input_dim) {
        return Err(Error::DimensionMismatch { expected: input_dim, actual: bad.dim() });
    }
    let [n1, n2] = config.hidden;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mean_sq = x.iter().map(SparseVector::norm_sq).sum::<f64>() / x.len() as f64;
    let a1 = (6.0 / if mean_sq > 0.0 { mean_sq } else { 1.0 }).sqrt();
    let mut model = MlpModel {
        input_dim,
        config: *config,
        w1: uniform(&mut rng, input_dim * n1, a1),
        b1: vec![0.0; n1],
        w2: uniform(&mut rng, n2 * n1, (6.0 / n1 as f64).sqrt()),
        b2: vec![0.0; n2],
        w3: uniform(&mut rng, n2, (6.0 / (n2 + 1) as f64).sqrt()),
        b3: median(y),
        loss_trace: Vec::with_capacity(config.epochs + 1),
    };
    let initial = model.mae(x, y);
    if !initial.is_finite() {
        return Err(Error::Diverged { epoch: 0 });
    }
    model.loss_trace.push(initial);

    let mut order: Vec<usize> = (0..x.len()).collect();
    for epoch in 1..=config.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            model.sgd_step(&x[i], y[i], config.learning_rate);
        }
        let loss = model.mae(x, y);
        if !loss.is_finite() {
            return Err(Error::Diverged { epoch });
        }
        model.loss_trace.push(loss);
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trend(n: usize) -> (Vec<SparseVector>, Vec<f64>) {
        let xs: Vec<f64> = (0..n).map(|i| i as f64 / n as f64).collect();
        (xs.iter().map(|v| SparseVector::from_dense(&[*v])).collect(), xs.iter().map(|v| 3.0 * v - 1.0).collect())
    }

    #[test]
    fn loss_decreases_early() {
        let (x, y) = trend(60);
        let m = train_mlp(&x, &y, &MlpConfig { epochs: 5, ..MlpConfig::default() }).unwrap();
        let t = &m.loss_trace;
        assert_eq!(t.len(), 6);
        assert!(t[5] < t[0], "{t:?}");
    }

    #[test]
    fn zero_epochs() {
        let (x, y) = trend(10);
        let m = train_mlp(&x, &y, &MlpConfig { epochs: 0, ..MlpConfig::default() }).unwrap();
        assert_eq!(m.loss_trace.len(), 1);
        assert!(x.iter().all(|v| m.predict(v).is_finite()));
        assert!(m.parameters_finite());
    }

    #[test]
    fn deterministic() {
        let (x, y) = trend(30);
        let cfg = MlpConfig { epochs: 3, seed: 7, ..MlpConfig::default() };
        assert_eq!(train_mlp(&x, &y, &cfg).unwrap(), train_mlp(&x, &y, &cfg).unwrap());
    }

    #[test]
    fn divergence_names_epoch() {
        let (x, y) = trend(20);
        let y: Vec<f64> = y.iter().map(|v| v * 1e305).collect();
        let cfg = MlpConfig { epochs: 5, learning_rate: 1e300, ..MlpConfig::default() };
        match train_mlp(&x, &y, &cfg) {
            Err(Error::Diverged { epoch }) => assert!(epoch >= 1),
            other => panic!("expected divergence, got {other:?}"),
        }
    }
}

use serde::{Deserialize, Serialize};

use crate::features::SparseVector;
use crate::{Error, Result};

use super::svr::SvrModel;

/// Exact Shapley values of a linear model under mean imputation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Explanation {
    /// Prediction at the background mean.
    pub baseline: f64,
    pub prediction: f64,
    /// One entry per feature: `w_j * (x_j - mean_j)`.
    pub contributions: Vec<f64>,
}

impl Explanation {
    /// Indices of the `k` largest contributions by magnitude.
    pub fn top(&self, k: usize) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.contributions.len()).filter(|&j| self.contributions[j] != 0.0).collect();
        idx.sort_by(|&a, &b| self.contributions[b].abs().total_cmp(&self.contributions[a].abs()).then(a.cmp(&b)));
        idx.truncate(k);
        idx
    }
}

pub fn explain_linear(m: &SvrModel, x: &SparseVector, background_mean: &[f64]) -> Result<Explanation> {
    if x.dim() != m.dim() {
        return Err(Error::DimensionMismatch { expected: m.dim(), actual: x.dim() });
    }
    if background_mean.len() != m.dim() {
        return Err(Error::DimensionMismatch { expected: m.dim(), actual: background_mean.len() });
    }
    let mut contributions: Vec<f64> = m.weights.iter().zip(background_mean).map(|(w, mu)| -w * mu).collect();
    for (j, v) in x.iter() {
        contributions[j] += m.weights[j] * v;
    }
    Ok(Explanation { baseline: m.predict_dense(background_mean), prediction: m.predict(x), contributions })
}

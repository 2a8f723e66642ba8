use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::features::SparseVector;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvrParams {
    pub c: f64,
    pub epsilon: f64,
    pub tol: f64,
    pub max_passes: usize,
    /// Seeds the coordinate order of each pass.
    pub seed: u64,
}

impl Default for SvrParams {
    fn default() -> Self {
        SvrParams { c: 1.0, epsilon: 0.1, tol: 1e-4, max_passes: 1000, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvrDiagnostics {
    pub passes: usize,
    pub converged: bool,
    /// Largest projected-gradient violation seen in the final pass.
    pub max_violation: f64,
    /// Dual objective after each pass.
    pub objective_trace: Vec<f64>,
    pub dual_objective: f64,
    pub primal_objective: f64,
}

/// Linear epsilon-insensitive support vector regressor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvrModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub params: SvrParams,
    pub diagnostics: SvrDiagnostics,
}

impl SvrModel {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn predict(&self, x: &SparseVector) -> f64 {
        x.dot_dense(&self.weights) + self.bias
    }

    pub fn predict_dense(&self, x: &[f64]) -> f64 {
        self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + self.bias
    }
}

pub fn train_svr(x: &[SparseVector], y: &[f64], params: &SvrParams) -> Result<SvrModel> {
    train_svr_weighted(x, y, &vec![1.0; y.len()], params)
}

/// Dual coordinate descent for the L1-loss SVR, with per-sample weights
/// scaling the box constraint of each dual variable to `C * weight`.
///
/// Targets are centred on their weighted mean and a constant feature of 1
/// carries the remaining intercept; the reported `bias` folds both back in.
pub fn train_svr_weighted(x: &[SparseVector], y: &[f64], sample_weights: &[f64], params: &SvrParams) -> Result<SvrModel> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), actual: y.len() });
    }
    if sample_weights.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: y.len(), actual: sample_weights.len() });
    }
    if x.len() < 2 {
        return Err(Error::invalid(format!("SVR needs at least 2 samples, got {}", x.len())));
    }
    if !(params.c > 0.0) || !(params.epsilon >= 0.0) || !(params.tol > 0.0) || params.max_passes == 0 {
        return Err(Error::invalid(format!("invalid SVR parameters {params:?}")));
    }
    if sample_weights.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
        return Err(Error::invalid("sample weights must be positive and finite"));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("non-finite SVR target".into()));
    }
    let dim = x[0].dim();
    if let Some(bad) = x.iter().find(|v| v.dim() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, actual: bad.dim() });
    }

    let n = x.len();
    let wsum: f64 = sample_weights.iter().sum();
    let offset = y.iter().zip(sample_weights).map(|(v, w)| v * w).sum::<f64>() / wsum;
    let yc: Vec<f64> = y.iter().map(|v| v - offset).collect();
    let upper: Vec<f64> = sample_weights.iter().map(|w| params.c * w).collect();
    let qii: Vec<f64> = x.iter().map(|v| v.norm_sq() + 1.0).collect();
    let eps = params.epsilon;

    let mut w = vec![0.0; dim];
    let mut wb = 0.0;
    let mut beta = vec![0.0; n];
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut trace = Vec::new();
    let mut converged = false;
    let mut max_violation = f64::INFINITY;

    while trace.len() < params.max_passes {
        order.shuffle(&mut rng);
        max_violation = 0.0f64;
        for &i in &order {
            let g = x[i].dot_dense(&w) + wb - yc[i];
            let gp = g + eps;
            let gn = g - eps;
            let b = beta[i];
            let u = upper[i];
            let violation = if b == 0.0 {
                if gp < 0.0 {
                    -gp
                } else if gn > 0.0 {
                    gn
                } else {
                    0.0
                }
            } else if b >= u {
                gp.max(0.0)
            } else if b <= -u {
                (-gn).max(0.0)
            } else if b > 0.0 {
                gp.abs()
            } else {
                gn.abs()
            };
            max_violation = max_violation.max(violation);
            if violation == 0.0 {
                continue;
            }
            let h = qii[i];
            let d = if gp < h * b {
                -gp / h
            } else if gn > h * b {
                -gn / h
            } else {
                -b
            };
            let nb = (b + d).clamp(-u, u);
            let delta = nb - b;
            if delta != 0.0 {
                beta[i] = nb;
                x[i].axpy_into(delta, &mut w);
                wb += delta;
            }
        }
        let dual = 0.5 * (w.iter().map(|v| v * v).sum::<f64>() + wb * wb)
            - beta.iter().zip(&yc).map(|(b, t)| b * t).sum::<f64>()
            + eps * beta.iter().map(|b| b.abs()).sum::<f64>();
        if !dual.is_finite() {
            return Err(Error::Numerical(format!("SVR dual objective became non-finite at pass {}", trace.len() + 1)));
        }
        trace.push(dual);
        if max_violation < params.tol {
            converged = true;
            break;
        }
    }
    if !converged {
        log::warn!("SVR stopped at the pass cap ({}) with violation {max_violation:.3e}", params.max_passes);
    }

    let reg = 0.5 * (w.iter().map(|v| v * v).sum::<f64>() + wb * wb);
    let loss: f64 = (0..n)
        .map(|i| upper[i] * ((x[i].dot_dense(&w) + wb - yc[i]).abs() - eps).max(0.0))
        .sum();
    let dual_objective = *trace.last().expect("at least one pass");
    Ok(SvrModel {
        weights: w,
        bias: offset + wb,
        params: *params,
        diagnostics: SvrDiagnostics {
            passes: trace.len(),
            converged,
            max_violation,
            objective_trace: trace,
            dual_objective,
            primal_objective: reg + loss,
        },
    })
}

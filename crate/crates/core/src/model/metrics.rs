use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Pearson correlation; `None` when either input has zero variance or
/// fewer than two points.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    assert_eq!(x.len(), y.len(), "pearson: length mismatch");
    let n = x.len();
    if n < 2 {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// 1-based ranks with ties sharing their average rank.
pub fn average_ranks(x: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut ranks = vec![0.0; x.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && x[order[j]] == x[order[i]] {
            j += 1;
        }
        // positions i..j hold ranks i+1..=j
        let avg = (i + 1 + j) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = avg;
        }
        i = j;
    }
    ranks
}

pub fn spearman(x: &[f64], y: &[f64]) -> Option<f64> {
    pearson(&average_ranks(x), &average_ranks(y))
}

fn tie_pairs(sorted: &[f64]) -> u64 {
    let mut total = 0u64;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        let t = (j - i) as u64;
        total += t * (t - 1) / 2;
        i = j;
    }
    total
}

/// Merge sort that returns the number of strict inversions.
fn sort_counting_swaps(v: &mut [f64], buf: &mut Vec<f64>) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut swaps = sort_counting_swaps(&mut v[..mid], buf) + sort_counting_swaps(&mut v[mid..], buf);
    buf.clear();
    let (mut i, mut j) = (0, mid);
    while i < mid && j < n {
        if v[i] <= v[j] {
            buf.push(v[i]);
            i += 1;
        } else {
            buf.push(v[j]);
            swaps += (mid - i) as u64;
            j += 1;
        }
    }
    buf.extend_from_slice(&v[i..mid]);
    buf.extend_from_slice(&v[j..n]);
    v.copy_from_slice(buf);
    swaps
}

/// Kendall's tau-b in O(n log n) (Knight's algorithm); `None` when either
/// input is constant.
pub fn kendall_tau_b(x: &[f64], y: &[f64]) -> Option<f64> {
    assert_eq!(x.len(), y.len(), "kendall_tau_b: length mismatch");
    let n = x.len();
    if n < 2 {
        return None;
    }
    let mut pairs: Vec<(f64, f64)> = x.iter().copied().zip(y.iter().copied()).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));

    let n0 = (n as u64) * (n as u64 - 1) / 2;
    let xs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let x_ties = tie_pairs(&xs);
    let mut joint_ties = 0u64;
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && pairs[j] == pairs[i] {
            j += 1;
        }
        let t = (j - i) as u64;
        joint_ties += t * (t - 1) / 2;
        i = j;
    }
    let mut ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let mut buf = Vec::with_capacity(n);
    let swaps = sort_counting_swaps(&mut ys, &mut buf);
    let y_ties = tie_pairs(&ys);

    let denom = ((n0 - x_ties) as f64) * ((n0 - y_ties) as f64);
    if denom == 0.0 {
        return None;
    }
    let numer = n0 as f64 - x_ties as f64 - y_ties as f64 + joint_ties as f64 - 2.0 * swaps as f64;
    Some((numer / denom.sqrt()).clamp(-1.0, 1.0))
}

pub fn mae(y_true: &[f64], y_pred: &[f64]) -> f64 {
    y_true.iter().zip(y_pred).map(|(a, b)| (a - b).abs()).sum::<f64>() / y_true.len() as f64
}

/// Correlation and error between ground truth and predictions. Correlation
/// fields are `None` when undefined (zero variance).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub n: usize,
    pub r: Option<f64>,
    pub rho: Option<f64>,
    pub tau: Option<f64>,
    pub mae: f64,
}

pub fn evaluate(y_true: &[f64], y_pred: &[f64]) -> Result<EvalReport> {
    if y_true.len() != y_pred.len() {
        return Err(Error::DimensionMismatch { expected: y_true.len(), actual: y_pred.len() });
    }
    if y_true.len() < 3 {
        return Err(Error::invalid(format!("evaluation needs at least 3 points, got {}", y_true.len())));
    }
    if y_true.iter().chain(y_pred).any(|v| !v.is_finite()) {
        return Err(Error::Numerical("non-finite value in evaluation input".into()));
    }
    Ok(EvalReport {
        n: y_true.len(),
        r: pearson(y_true, y_pred),
        rho: spearman(y_true, y_pred),
        tau: kendall_tau_b(y_true, y_pred),
        mae: mae(y_true, y_pred),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_agreement() {
        let y = [0.1, 0.5, 0.2, 0.9, 0.4];
        let r = evaluate(&y, &y).unwrap();
        for c in [r.r, r.rho, r.tau] {
            assert!((c.unwrap() - 1.0).abs() < 1e-12);
        }
        assert_eq!(r.mae, 0.0);
    }

    #[test]
    fn antitone() {
        let y = [0.1, 0.5, 0.2, 0.9, 0.4];
        let p: Vec<f64> = y.iter().map(|v| 3.0 - v).collect();
        let r = evaluate(&y, &p).unwrap();
        assert!((r.r.unwrap() + 1.0).abs() < 1e-12);
        assert!((r.rho.unwrap() + 1.0).abs() < 1e-12);
        assert_eq!(r.tau, Some(-1.0));
    }

    #[test]
    fn average_ranks_with_ties() {
        assert_eq!(average_ranks(&[3.0, 1.0, 3.0, 2.0]), vec![3.5, 1.0, 3.5, 2.0]);
    }

    #[test]
    fn tau_b_known_value() {
        // scipy.stats.kendalltau([1,2,2,3],[1,3,2,2]) -> 0.4
        let t = kendall_tau_b(&[1.0, 2.0, 2.0, 3.0], &[1.0, 3.0, 2.0, 2.0]).unwrap();
        assert!((t - 0.4).abs() < 1e-12, "{t}");
    }

    #[test]
    fn constant_input_undefined() {
        let r = evaluate(&[1.0, 1.0, 1.0], &[0.0, 1.0, 2.0]).unwrap();
        assert!(r.r.is_none() && r.rho.is_none() && r.tau.is_none());
        assert!((r.mae - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn input_checks() {
        assert!(evaluate(&[1.0, 2.0], &[1.0, 2.0]).is_err());
        assert!(evaluate(&[1.0, 2.0, 3.0], &[1.0, 2.0]).is_err());
        assert!(evaluate(&[1.0, 2.0, f64::NAN], &[1.0, 2.0, 3.0]).is_err());
    }
}

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VifEntry {
    pub name: String,
    /// Infinite when the column is a linear combination of the others.
    pub value: f64,
    pub collinear: bool,
}

const COLLINEAR_R2: f64 = 1.0 - 1e-10;

/// Variance inflation factor of every non-constant column: each column is
/// regressed on all other columns (constants included) and
/// VIF = 1 / (1 - R²) with R² taken about the column mean.
///
/// Computed as the diagonal of the inverse correlation matrix of the
/// non-constant columns. Designs that are collinear or close to it fall
/// back to one auxiliary regression per column.
pub fn vif(x: &DMatrix<f64>, names: &[String]) -> Result<Vec<VifEntry>> {
    let p = x.ncols();
    if names.len() != p {
        return Err(Error::DimensionMismatch { expected: p, actual: names.len() });
    }
    let constant: Vec<bool> = x.column_iter().map(|c| c.iter().all(|v| *v == c[0])).collect();
    let cols: Vec<usize> = (0..p).filter(|&j| !constant[j]).collect();
    if let Some(values) = vif_from_correlation(x, &cols) {
        return Ok(cols
            .iter()
            .zip(values)
            .map(|(&j, value)| VifEntry { name: names[j].clone(), value, collinear: false })
            .collect());
    }
    cols.iter().map(|&j| vif_by_regression(x, &constant, j, &names[j])).collect()
}

fn vif_from_correlation(x: &DMatrix<f64>, cols: &[usize]) -> Option<Vec<f64>> {
    let n = x.nrows();
    let mut z = DMatrix::zeros(n, cols.len());
    for (c, &j) in cols.iter().enumerate() {
        let col = x.column(j);
        let m = col.mean();
        let norm = col.iter().map(|v| (v - m).powi(2)).sum::<f64>().sqrt();
        for i in 0..n {
            z[(i, c)] = (col[i] - m) / norm;
        }
    }
    let inv = (z.transpose() * &z).cholesky()?.inverse();
    let values: Vec<f64> = (0..cols.len()).map(|c| inv[(c, c)]).collect();
    // 1 - R² below 1e-8 is too close to collinear for the normal equations
    values.iter().all(|v| v.is_finite() && *v >= 1.0 - 1e-9 && *v < 1e8).then_some(values)
}

fn vif_by_regression(x: &DMatrix<f64>, constant: &[bool], j: usize, name: &str) -> Result<VifEntry> {
    let (n, p) = x.shape();
    let others: Vec<usize> = (0..p).filter(|&k| k != j).collect();
    let mut a = DMatrix::from_fn(n, others.len() + 1, |i, c| if c < others.len() { x[(i, others[c])] } else { 0.0 });
    // make sure a mean term is present so R² is centred
    if !others.iter().any(|&k| constant[k]) {
        a.column_mut(others.len()).fill(1.0);
    } else {
        a = a.remove_column(others.len());
    }
    let target = DVector::from_iterator(n, x.column(j).iter().copied());
    let svd = a.clone().svd(true, true);
    let coef = svd.solve(&target, 1e-12).map_err(|e| Error::Numerical(format!("VIF solve: {e}")))?;
    let rss = (&target - &a * coef).norm_squared();
    let m = target.mean();
    let tss = target.iter().map(|v| (v - m).powi(2)).sum::<f64>();
    let r2 = 1.0 - rss / tss;
    let (value, collinear) = if r2 >= COLLINEAR_R2 { (f64::INFINITY, true) } else { (1.0 / (1.0 - r2), false) };
    Ok(VifEntry { name: name.to_string(), value, collinear })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(p: usize) -> Vec<String> {
        (0..p).map(|j| format!("c{j}")).collect()
    }

    #[test]
    fn orthogonal_columns() {
        // centred, mutually orthogonal columns
        let rows = [[1.0, 1.0, 1.0], [1.0, -1.0, 1.0], [1.0, 1.0, -1.0], [1.0, -1.0, -1.0]];
        let x = DMatrix::from_fn(4, 3, |i, j| rows[i][j]);
        let v = vif(&x, &names(3)).unwrap();
        assert_eq!(v.len(), 2);
        for e in v {
            assert!((e.value - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn correlation_path_matches_regressions() {
        let x = DMatrix::from_fn(40, 4, |i, j| match j {
            0 => 1.0,
            1 => (i as f64 * 0.37).sin(),
            2 => (i as f64 * 0.37).sin() * 0.5 + (i as f64 * 1.3).cos(),
            _ => ((i * i) % 7) as f64,
        });
        let fast = vif(&x, &names(4)).unwrap();
        let constant = [true, false, false, false];
        for (e, j) in fast.iter().zip(1..) {
            let slow = vif_by_regression(&x, &constant, j, &e.name).unwrap();
            assert!((e.value - slow.value).abs() < 1e-9 * slow.value);
        }
    }

    #[test]
    fn duplicated_column_flagged() {
        let x = DMatrix::from_fn(6, 3, |i, j| match j {
            0 => 1.0,
            _ => (i * i) as f64,
        });
        let v = vif(&x, &names(3)).unwrap();
        assert!(v.iter().all(|e| e.collinear && e.value.is_infinite()));
    }
}

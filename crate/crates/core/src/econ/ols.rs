use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use statrs::function::beta::beta_reg;

use crate::{Error, Result};

/// Relative size of a QR pivot below which its column counts as collinear.
const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coefficient {
    pub name: String,
    pub beta: f64,
    pub se: f64,
    pub t: f64,
    pub p: f64,
    pub stars: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OlsReport {
    pub coefficients: Vec<Coefficient>,
    pub n: usize,
    /// Regressors excluding the intercept.
    pub k: usize,
    pub df_resid: usize,
    pub r2: f64,
    pub adj_r2: f64,
    pub sigma: f64,
    pub rss: f64,
    /// Ratio of the largest to smallest singular value of X.
    pub condition_number: f64,
    pub dropped_rows: usize,
    pub dropped_columns: Vec<String>,
    pub reference: Vec<String>,
}

impl OlsReport {
    pub fn coefficient(&self, name: &str) -> Option<&Coefficient> {
        self.coefficients.iter().find(|c| c.name == name)
    }
}

pub fn stars(p: f64) -> &'static str {
    if p <= 0.001 {
        "***"
    } else if p <= 0.01 {
        "**"
    } else if p <= 0.05 {
        "*"
    } else {
        ""
    }
}

/// Two-sided Student-t tail probability.
fn t_pvalue(t: f64, df: f64) -> f64 {
    if t.is_nan() {
        return f64::NAN;
    }
    if t.is_infinite() {
        return 0.0;
    }
    beta_reg(df / 2.0, 0.5, df / (df + t * t))
}

fn has_intercept(x: &DMatrix<f64>) -> bool {
    x.column_iter().any(|c| {
        let first = c[0];
        first != 0.0 && c.iter().all(|v| *v == first)
    })
}

/// Least squares through a QR decomposition with classical standard errors.
pub fn ols_fit(x: &DMatrix<f64>, y: &[f64], names: &[String]) -> Result<OlsReport> {
    let (n, p) = x.shape();
    if y.len() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: y.len() });
    }
    if names.len() != p {
        return Err(Error::DimensionMismatch { expected: p, actual: names.len() });
    }
    if n <= p {
        return Err(Error::invalid(format!("need more rows than columns, got {n} rows and {p} columns")));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::Numerical("non-finite value in regression input".into()));
    }
    let qr = x.clone().qr();
    let r = qr.r();
    let max_pivot = (0..p).map(|j| r[(j, j)].abs()).fold(0.0, f64::max);
    let collinear: Vec<String> =
        (0..p).filter(|&j| r[(j, j)].abs() <= RANK_TOL * max_pivot.max(f64::MIN_POSITIVE)).map(|j| names[j].clone()).collect();
    if !collinear.is_empty() {
        return Err(Error::RankDeficient(collinear));
    }
    let q = qr.q();
    let yv = DVector::from_column_slice(y);
    let qty = q.transpose() * &yv;
    let beta = r.solve_upper_triangular(&qty).ok_or_else(|| Error::Numerical("triangular solve failed".into()))?;
    let r_inv = r
        .solve_upper_triangular(&DMatrix::identity(p, p))
        .ok_or_else(|| Error::Numerical("triangular inverse failed".into()))?;

    let resid = &yv - x * &beta;
    let rss = resid.norm_squared();
    let intercept = has_intercept(x);
    let tss = if intercept {
        let m = yv.mean();
        yv.iter().map(|v| (v - m).powi(2)).sum::<f64>()
    } else {
        yv.norm_squared()
    };
    if !(tss > 0.0) {
        return Err(Error::invalid("response has no variation"));
    }
    let df = n - p;
    let sigma2 = rss / df as f64;
    let k = p - intercept as usize;
    let r2 = 1.0 - rss / tss;
    let adj_r2 = 1.0 - (1.0 - r2) * ((n - intercept as usize) as f64) / df as f64;

    let coefficients = (0..p)
        .map(|j| {
            let var = r_inv.row(j).norm_squared() * sigma2;
            let se = var.sqrt();
            let b = beta[j];
            let t = b / se;
            let pv = t_pvalue(t, df as f64);
            Coefficient { name: names[j].clone(), beta: b, se, t, p: pv, stars: stars(pv).to_string() }
        })
        .collect();
    let sv = r.singular_values();
    let (smax, smin) = sv.iter().fold((0.0f64, f64::INFINITY), |(a, b), &s| (a.max(s), b.min(s)));
    Ok(OlsReport {
        coefficients,
        n,
        k,
        df_resid: df,
        r2,
        adj_r2,
        sigma: sigma2.sqrt(),
        rss,
        condition_number: smax / smin,
        dropped_rows: 0,
        dropped_columns: Vec::new(),
        reference: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn names(p: usize) -> Vec<String> {
        (0..p).map(|j| if j == 0 { "intercept".into() } else { format!("x{j}") }).collect()
    }

    #[test]
    fn exact_fit() {
        let x = DMatrix::from_fn(10, 3, |i, j| match j {
            0 => 1.0,
            1 => i as f64,
            _ => ((i * i) % 7) as f64,
        });
        let y: Vec<f64> = (0..10).map(|i| 1.0 + 2.0 * i as f64 - 0.5 * ((i * i) % 7) as f64).collect();
        let rep = ols_fit(&x, &y, &names(3)).unwrap();
        assert!((rep.r2 - 1.0).abs() < 1e-12 && (rep.adj_r2 - 1.0).abs() < 1e-12);
        assert!((rep.coefficients[1].beta - 2.0).abs() < 1e-10);
    }

    #[test]
    fn planted_model() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let n = 2000;
        let z: Vec<f64> = (0..3 * n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let x = DMatrix::from_fn(n, 3, |i, j| if j == 0 { 1.0 } else { z[j * n + i] });
        let y: Vec<f64> = (0..n).map(|i| 0.4 * z[n + i] - 0.2 * z[2 * n + i] + z[i]).collect();
        let rep = ols_fit(&x, &y, &names(3)).unwrap();
        let b1 = &rep.coefficients[1];
        let b2 = &rep.coefficients[2];
        assert!((b1.beta - 0.4).abs() < 3.0 * b1.se);
        assert!((b2.beta + 0.2).abs() < 3.0 * b2.se);
        assert_eq!(b1.stars, "***");
    }

    #[test]
    fn p_values() {
        // t = 2.0 with 10 df: two-sided p = 0.07338803477074...
        assert!((t_pvalue(2.0, 10.0) - 0.073_388_034_770_7).abs() < 1e-10);
        assert_eq!(t_pvalue(0.0, 5.0), 1.0);
        assert_eq!(stars(0.001), "***");
        assert_eq!(stars(0.0101), "*");
        assert_eq!(stars(0.06), "");
    }

    #[test]
    fn rank_deficiency_names_column() {
        let x = DMatrix::from_fn(8, 3, |i, j| match j {
            0 => 1.0,
            1 => i as f64,
            _ => 2.0 * i as f64,
        });
        match ols_fit(&x, &[1.0, 3.0, 2.0, 5.0, 4.0, 6.0, 8.0, 7.0], &names(3)) {
            Err(Error::RankDeficient(cols)) => assert_eq!(cols, vec!["x2".to_string()]),
            other => panic!("{other:?}"),
        }
        assert!(ols_fit(&DMatrix::from_element(3, 3, 1.0), &[1.0, 2.0, 3.0], &names(3)).is_err());
    }
}

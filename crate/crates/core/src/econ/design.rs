use std::collections::BTreeSet;

use nalgebra::DMatrix;

use super::industry::Ff12;
use super::panel::RiskRow;
use crate::{Error, Result};

/// Financial controls, in column order.
pub const FIN_CONTROLS: [&str; 8] = ["past_vola", "size", "volume", "leverage", "spread", "btm", "sue", "roa"];
const DEMOGRAPHICS: [&str; 2] = ["age", "gender"];
const MBTI: [&str; 4] = ["ei", "sn", "tf", "jp"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DesignSpec {
    pub include_mbti: bool,
    pub include_demographics: bool,
    pub industry_effects: bool,
    pub time_effects: bool,
    /// When false, fixed-effect dummies stay 0/1 and only the continuous
    /// regressors are standardized.
    pub standardize_dummies: bool,
}

impl DesignSpec {
    pub fn fin() -> Self {
        DesignSpec {
            include_mbti: false,
            include_demographics: false,
            industry_effects: true,
            time_effects: true,
            standardize_dummies: true,
        }
    }

    pub fn joint() -> Self {
        DesignSpec { include_mbti: true, include_demographics: true, ..Self::fin() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    /// Intercept first, then the regressors named in `columns[1..]`.
    pub x: DMatrix<f64>,
    pub y: Vec<f64>,
    pub columns: Vec<String>,
    pub call_ids: Vec<String>,
    /// Rows removed because BTM was not positive.
    pub dropped_rows: usize,
    /// Columns removed for zero variance.
    pub dropped_columns: Vec<String>,
    /// Reference category left out of each dummy block.
    pub reference: Vec<String>,
}

impl DesignMatrix {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

struct Column {
    name: String,
    values: Vec<f64>,
    dummy: bool,
}

fn control(row: &RiskRow, name: &str) -> f64 {
    match name {
        "past_vola" => row.past_vola,
        "size" => row.size.ln_1p(),
        "volume" => row.volume.ln_1p(),
        "leverage" => row.leverage,
        "spread" => row.spread,
        "btm" => row.btm.ln_1p(),
        "sue" => row.sue,
        "roa" => row.roa,
        "age" => row.age,
        "gender" => row.gender,
        _ => unreachable!("unknown control {name}"),
    }
}

fn mean_sd(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn dummies<K: Ord + Clone + std::fmt::Display>(keys: &[K], prefix: &str) -> (Vec<Column>, Option<String>) {
    let levels: BTreeSet<K> = keys.iter().cloned().collect();
    let mut it = levels.into_iter();
    let Some(reference) = it.next() else { return (Vec::new(), None) };
    let cols = it
        .map(|level| Column {
            name: format!("{prefix}:{level}"),
            values: keys.iter().map(|k| if *k == level { 1.0 } else { 0.0 }).collect(),
            dummy: true,
        })
        .collect();
    (cols, Some(format!("{prefix}:{reference}")))
}

/// Builds the regression design: log1p on size, BTM and volume, dummy
/// blocks with the lowest level as reference, an intercept, and
/// z-standardization of y and every non-intercept column (sample sd).
pub fn build_design_matrix(rows: &[RiskRow], spec: &DesignSpec) -> Result<DesignMatrix> {
    let kept: Vec<&RiskRow> = rows.iter().filter(|r| r.btm > 0.0).collect();
    let dropped_rows = rows.len() - kept.len();
    if dropped_rows > 0 {
        log::info!("removed {dropped_rows} row(s) with non-positive BTM");
    }
    if kept.is_empty() {
        return Err(Error::invalid("no rows left after removing non-positive BTM"));
    }
    if kept.len() < 2 {
        return Err(Error::invalid("design matrix needs at least 2 rows"));
    }
    if spec.include_mbti {
        if let Some(r) = kept.iter().find(|r| r.mbti.is_none()) {
            return Err(Error::invalid(format!("call {} has no personality scores", r.call_id)));
        }
    }

    let mut cols: Vec<Column> = Vec::new();
    let mut push_named = |names: &[&str], f: &dyn Fn(&RiskRow, &str) -> f64| {
        for &name in names {
            cols.push(Column { name: name.into(), values: kept.iter().map(|r| f(r, name)).collect(), dummy: false });
        }
    };
    push_named(&FIN_CONTROLS, &control);
    if spec.include_demographics {
        push_named(&DEMOGRAPHICS, &control);
    }
    if spec.include_mbti {
        push_named(&MBTI, &|r, name| {
            let m = r.mbti.expect("checked above");
            match name {
                "ei" => m.ei,
                "sn" => m.sn,
                "tf" => m.tf,
                _ => m.jp,
            }
        });
    }
    let mut reference = Vec::new();
    if spec.industry_effects {
        let keys: Vec<Ff12> = kept.iter().map(|r| r.industry).collect();
        let (named, refc) = dummies(&keys, "industry");
        cols.extend(named);
        reference.extend(refc);
    }
    if spec.time_effects {
        let keys: Vec<(i32, u8)> = kept.iter().map(|r| (r.period.year, r.period.quarter)).collect();
        if keys.iter().collect::<BTreeSet<_>>().len() < 2 {
            return Err(Error::invalid("time effects need at least 2 distinct periods"));
        }
        let labels: Vec<PeriodKey> = keys.into_iter().map(PeriodKey).collect();
        let (named, refc) = dummies(&labels, "period");
        cols.extend(named);
        reference.extend(refc);
    }

    let n = kept.len();
    let mut dropped_columns = Vec::new();
    let mut standardized: Vec<(String, Vec<f64>)> = Vec::new();
    for c in cols {
        let (mean, sd) = mean_sd(&c.values);
        if !(sd > 1e-12 * mean.abs()) || !sd.is_finite() {
            log::warn!("dropping zero-variance column {}", c.name);
            dropped_columns.push(c.name);
            continue;
        }
        let values = if c.dummy && !spec.standardize_dummies {
            c.values
        } else {
            c.values.iter().map(|v| (v - mean) / sd).collect()
        };
        standardized.push((c.name, values));
    }

    let yraw: Vec<f64> = kept.iter().map(|r| r.vola_post).collect();
    let (ym, ysd) = mean_sd(&yraw);
    if !(ysd > 0.0) {
        return Err(Error::invalid("volatility label has zero variance"));
    }
    let y: Vec<f64> = yraw.iter().map(|v| (v - ym) / ysd).collect();

    let p = standardized.len() + 1;
    let x = DMatrix::from_fn(n, p, |i, j| if j == 0 { 1.0 } else { standardized[j - 1].1[i] });
    let mut columns = vec!["intercept".to_string()];
    columns.extend(standardized.into_iter().map(|c| c.0));
    Ok(DesignMatrix {
        x,
        y,
        columns,
        call_ids: kept.iter().map(|r| r.call_id.clone()).collect(),
        dropped_rows,
        dropped_columns,
        reference,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct PeriodKey((i32, u8));

impl std::fmt::Display for PeriodKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}Q{}", self.0 .0, self.0 .1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::FiscalQuarter;
    use crate::labels::MbtiVector;

    pub(crate) fn row(i: usize, industry: Ff12, period: (i32, u8)) -> RiskRow {
        let f = i as f64;
        RiskRow {
            call_id: format!("c{i}"),
            vola_post: 0.02 + 0.001 * (f * 1.3).sin().abs(),
            age: 50.0 + (i % 17) as f64,
            gender: (i % 3 == 0) as u8 as f64,
            past_vola: 0.02 + 0.002 * (f * 0.7).cos().abs(),
            size: (i % 5) as f64 * 1e6,
            volume: 1e4 + f,
            leverage: 0.3 + 0.01 * (f * 0.9).sin(),
            spread: 0.01 + 0.001 * (f * 0.4).cos(),
            btm: 0.5 + 0.1 * (f * 0.2).sin(),
            sue: 0.01 * (f * 1.7).cos().abs(),
            roa: 0.05 * (f * 0.3).sin(),
            mbti: Some(MbtiVector::from_array([0.3, 0.6, 0.4, 0.5].map(|v: f64| (v + 0.01 * f).fract()), 0)),
            industry,
            period: FiscalQuarter::new(period.0, period.1).unwrap(),
        }
    }

    fn sample(n: usize) -> Vec<RiskRow> {
        let inds = [Ff12::BusEq, Ff12::Money, Ff12::Hlth];
        (0..n).map(|i| row(i, inds[i % 3], (2020, (i % 4 + 1) as u8))).collect()
    }

    #[test]
    fn dummies_drop_reference() {
        let d = build_design_matrix(&sample(60), &DesignSpec::fin()).unwrap();
        let ind: Vec<&String> = d.columns.iter().filter(|c| c.starts_with("industry:")).collect();
        assert_eq!(ind.len(), 2);
        assert_eq!(d.reference, vec!["industry:BusEq".to_string(), "period:2020Q1".to_string()]);
        assert_eq!(d.columns.iter().filter(|c| c.starts_with("period:")).count(), 3);
    }

    #[test]
    fn standardized_moments() {
        let d = build_design_matrix(&sample(80), &DesignSpec::joint()).unwrap();
        for j in 1..d.x.ncols() {
            let col: Vec<f64> = d.x.column(j).iter().copied().collect();
            let (m, s) = mean_sd(&col);
            assert!(m.abs() < 1e-10 && (s - 1.0).abs() < 1e-10, "{}", d.columns[j]);
        }
        let (m, s) = mean_sd(&d.y);
        assert!(m.abs() < 1e-10 && (s - 1.0).abs() < 1e-10);
    }

    #[test]
    fn filters_and_drops() {
        let mut rows = sample(40);
        rows[3].btm = -0.2;
        rows[5].btm = 0.0;
        for r in rows.iter_mut() {
            r.spread = 0.01;
        }
        let d = build_design_matrix(&rows, &DesignSpec::fin()).unwrap();
        assert_eq!(d.dropped_rows, 2);
        assert_eq!(d.x.nrows(), 38);
        assert_eq!(d.dropped_columns, vec!["spread".to_string()]);
        let mut bad = sample(5);
        bad.iter_mut().for_each(|r| r.btm = -1.0);
        assert!(build_design_matrix(&bad, &DesignSpec::fin()).is_err());
    }

    #[test]
    fn size_zero_maps_to_zero() {
        let r = row(0, Ff12::Money, (2020, 1));
        assert_eq!(r.size, 0.0);
        assert_eq!(control(&r, "size"), 0.0);
    }
}

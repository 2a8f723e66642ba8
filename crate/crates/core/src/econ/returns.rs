use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Trading days after the call used for the volatility label.
pub const POST_WINDOW_DAYS: usize = 5;
/// Trading days before the call used for the past-volatility control.
pub const PAST_WINDOW_DAYS: usize = 63;

/// Daily closing prices of one firm, strictly increasing in date.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriceSeries {
    points: Vec<(NaiveDate, f64)>,
}

impl PriceSeries {
    pub fn new(points: Vec<(NaiveDate, f64)>) -> Result<Self> {
        for w in points.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::invalid(format!("price dates not strictly increasing at {}", w[1].0)));
            }
        }
        if let Some((d, p)) = points.iter().find(|(_, p)| !(*p > 0.0) || !p.is_finite()) {
            return Err(Error::invalid(format!("non-positive price {p} on {d}")));
        }
        Ok(PriceSeries { points })
    }

    pub fn points(&self) -> &[(NaiveDate, f64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn prices(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.1).collect()
    }

    /// Last close strictly before `date`.
    pub fn close_before(&self, date: NaiveDate) -> Option<f64> {
        let k = self.points.partition_point(|p| p.0 < date);
        (k > 0).then(|| self.points[k - 1].1)
    }
}

pub fn log_returns(p: &PriceSeries) -> Result<Vec<f64>> {
    if p.len() < 2 {
        return Err(Error::invalid(format!("log returns need at least 2 prices, got {}", p.len())));
    }
    Ok(p.points.windows(2).map(|w| (w[1].1 / w[0].1).ln()).collect())
}

/// Trading-day window relative to a call date.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Window {
    /// Returns dated on the first `days` trading days after `date`.
    After { date: NaiveDate, days: usize },
    /// Returns dated on the last `days` trading days before `date`.
    Before { date: NaiveDate, days: usize },
}

/// Sample standard deviation of the daily log returns dated inside the
/// window; each return is taken against the previous close in the series.
pub fn realized_vol(p: &PriceSeries, window: Window) -> Result<f64> {
    let pts = &p.points;
    let (lo, hi, date) = match window {
        Window::After { date, days } => {
            let start = pts.partition_point(|x| x.0 <= date);
            (start, (start + days).min(pts.len()), date)
        }
        Window::Before { date, days } => {
            let end = pts.partition_point(|x| x.0 < date);
            (end.saturating_sub(days), end, date)
        }
    };
    // return at index t needs the close at t - 1
    let lo = lo.max(1);
    let returns: Vec<f64> = (lo..hi.max(lo)).map(|t| (pts[t].1 / pts[t - 1].1).ln()).collect();
    if returns.len() < 2 {
        return Err(Error::invalid(format!(
            "only {} return(s) available in the window around {date}; need at least 2",
            returns.len()
        )));
    }
    let n = returns.len() as f64;
    let mean = returns.iter().sum::<f64>() / n;
    Ok((returns.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(prices: &[f64]) -> PriceSeries {
        let d0 = NaiveDate::from_ymd_opt(2020, 1, 1).unwrap();
        PriceSeries::new(prices.iter().enumerate().map(|(i, p)| (d0 + chrono::Days::new(i as u64), *p)).collect()).unwrap()
    }

    #[test]
    fn returns() {
        assert_eq!(log_returns(&series(&[100.0, 200.0])).unwrap(), vec![2f64.ln()]);
        assert!(log_returns(&series(&[5.0; 4])).unwrap().iter().all(|r| *r == 0.0));
        assert!(log_returns(&series(&[5.0])).is_err());
    }

    #[test]
    fn symmetric_pair() {
        let x: f64 = 0.03;
        let s = series(&[10.0, 10.0, 10.0 * x.exp(), 10.0]);
        let call = s.points()[1].0;
        let v = realized_vol(&s, Window::After { date: call, days: 5 }).unwrap();
        assert!((v - x * 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn windows() {
        let s = series(&[1.0, 1.1, 1.0, 1.2, 1.1, 1.3, 1.0, 1.05, 1.1]);
        let call = s.points()[4].0;
        // before: returns dated at indices 2, 3 ... window of 3 days -> 1..4
        let r: Vec<f64> = (1..4).map(|t| (s.points()[t].1 / s.points()[t - 1].1).ln()).collect();
        let m = r.iter().sum::<f64>() / 3.0;
        let want = (r.iter().map(|v| (v - m).powi(2)).sum::<f64>() / 2.0).sqrt();
        assert!((realized_vol(&s, Window::Before { date: call, days: 3 }).unwrap() - want).abs() < 1e-15);
        let flat = series(&[3.0; 8]);
        assert_eq!(realized_vol(&flat, Window::After { date: flat.points()[0].0, days: 5 }).unwrap(), 0.0);
        assert!(realized_vol(&s, Window::After { date: s.points()[7].0, days: 5 }).is_err());
    }

    #[test]
    fn validation() {
        let d = NaiveDate::from_ymd_opt(2020, 1, 1).unwrap();
        assert!(PriceSeries::new(vec![(d, 1.0), (d, 2.0)]).is_err());
        assert!(PriceSeries::new(vec![(d, 0.0)]).is_err());
    }
}

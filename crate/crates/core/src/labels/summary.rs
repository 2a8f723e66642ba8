use serde::{Deserialize, Serialize};

use super::{MbtiVector, Scale};
use crate::{Error, Result};

pub const HISTOGRAM_BINS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleSummary {
    pub scale: Scale,
    pub mean: f64,
    /// Sample standard deviation (n - 1 denominator).
    pub std: f64,
    /// Adjusted Fisher-Pearson skewness; 0 for constant or two-point samples.
    pub skewness: f64,
    /// Ten equal-width bins over `[0, 1]`; the last bin includes 1.
    pub histogram: [usize; HISTOGRAM_BINS],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelSummary {
    pub n: usize,
    pub scales: Vec<ScaleSummary>,
}

fn summarize(scale: Scale, xs: &[f64]) -> ScaleSummary {
    let n = xs.len() as f64;
    let mut histogram = [0usize; HISTOGRAM_BINS];
    for &x in xs {
        let bin = ((x * HISTOGRAM_BINS as f64).floor() as isize).clamp(0, HISTOGRAM_BINS as isize - 1);
        histogram[bin as usize] += 1;
    }
    if xs.iter().all(|&x| x == xs[0]) {
        return ScaleSummary { scale, mean: xs[0], std: 0.0, skewness: 0.0, histogram };
    }
    let mean = xs.iter().sum::<f64>() / n;
    let m2 = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let m3 = xs.iter().map(|x| (x - mean).powi(3)).sum::<f64>() / n;
    let std = (m2 * n / (n - 1.0)).sqrt();
    let skewness = if xs.len() < 3 {
        0.0
    } else {
        let g1 = m3 / m2.powf(1.5);
        g1 * (n * (n - 1.0)).sqrt() / (n - 2.0)
    };
    ScaleSummary { scale, mean, std, skewness, histogram }
}

/// Per-scale moments and histograms of a label set.
pub fn label_summary(labels: &[MbtiVector]) -> Result<LabelSummary> {
    if labels.len() < 2 {
        return Err(Error::invalid(format!("label summary needs at least 2 profiles, got {}", labels.len())));
    }
    let scales = Scale::ALL
        .iter()
        .map(|&s| {
            let xs: Vec<f64> = labels.iter().map(|m| m.get(s)).collect();
            summarize(s, &xs)
        })
        .collect();
    Ok(LabelSummary { n: labels.len(), scales })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(x: f64) -> MbtiVector {
        MbtiVector::from_array([x; 4], 10)
    }

    #[test]
    fn identical_vectors() {
        let s = label_summary(&[profile(0.3); 5]).unwrap();
        for sc in &s.scales {
            assert_eq!(sc.std, 0.0);
            assert_eq!(sc.skewness, 0.0);
            assert_eq!(sc.histogram[3], 5);
        }
    }

    #[test]
    fn symmetric_two_point() {
        let s = label_summary(&[profile(0.2), profile(0.8)]).unwrap();
        let sc = &s.scales[0];
        assert!((sc.mean - 0.5).abs() < 1e-15);
        assert_eq!(sc.skewness, 0.0);
        assert!((sc.std - 0.18f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn histogram_edges() {
        let s = label_summary(&[profile(0.0), profile(1.0), profile(0.1), profile(0.999)]).unwrap();
        let h = s.scales[0].histogram;
        assert_eq!(h[0], 1);
        assert_eq!(h[1], 1);
        assert_eq!(h[9], 2);
        assert_eq!(h.iter().sum::<usize>(), 4);
    }

    #[test]
    fn too_few() {
        assert!(label_summary(&[profile(0.5)]).is_err());
    }
}

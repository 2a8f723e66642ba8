use serde::{Deserialize, Serialize};

use super::{Big5Vector, MbtiVector, Scale};
use crate::model::pearson;
use crate::{Error, Result};

/// MBTI scales (rows) by Big 5 traits (columns). `None` marks entries whose
/// Pearson correlation is undefined because a column has zero variance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    pub n: usize,
    pub entries: [[Option<f64>; 5]; 4],
}

impl CorrelationMatrix {
    pub fn get(&self, scale: Scale, big5_index: usize) -> Option<f64> {
        self.entries[scale.index()][big5_index]
    }
}

pub fn cross_correlation(mbti: &[MbtiVector], big5: &[Big5Vector]) -> Result<CorrelationMatrix> {
    if mbti.len() != big5.len() {
        return Err(Error::DimensionMismatch { expected: mbti.len(), actual: big5.len() });
    }
    if mbti.len() < 3 {
        return Err(Error::invalid(format!("cross-correlation needs at least 3 pairs, got {}", mbti.len())));
    }
    let mut entries = [[None; 5]; 4];
    for s in Scale::ALL {
        let x: Vec<f64> = mbti.iter().map(|m| m.get(s)).collect();
        for (j, slot) in entries[s.index()].iter_mut().enumerate() {
            let y: Vec<f64> = big5.iter().map(|b| b.to_array()[j]).collect();
            *slot = pearson(&x, &y);
        }
    }
    Ok(CorrelationMatrix { n: mbti.len(), entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data() -> (Vec<MbtiVector>, Vec<Big5Vector>) {
        let m: Vec<MbtiVector> = (0..6)
            .map(|i| {
                let t = i as f64 / 5.0;
                MbtiVector::from_array([t, (t * 7.0) % 1.0, 1.0 - t * t, 0.5], 5)
            })
            .collect();
        let b = m
            .iter()
            .map(|v| Big5Vector::from_array([v.sn, 0.3, 1.0 - v.ei, v.tf, (v.ei * 3.0) % 1.0]))
            .collect();
        (m, b)
    }

    #[test]
    fn identical_and_complement_columns() {
        let (m, b) = data();
        let c = cross_correlation(&m, &b).unwrap();
        assert!((c.get(Scale::SN, 0).unwrap() - 1.0).abs() < 1e-12);
        assert!((c.get(Scale::EI, 2).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_variance_is_undefined() {
        let (m, b) = data();
        let c = cross_correlation(&m, &b).unwrap();
        assert!(c.get(Scale::EI, 1).is_none());
        assert!(c.get(Scale::JP, 3).is_none());
    }

    #[test]
    fn length_checks() {
        let (m, b) = data();
        assert!(cross_correlation(&m, &b[..5]).is_err());
        assert!(cross_correlation(&m[..2], &b[..2]).is_err());
    }
}

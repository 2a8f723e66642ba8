//! Inter-annotator agreement for two-category crowd votes.
//!
//! Votes are anonymous tallies: each subject only records how many raters
//! chose the left and the right pole. All coefficients use subjects with at
//! least two raters.

use serde::{Deserialize, Serialize};

use crate::labels::{Scale, VoteRecord};
use crate::{Error, Result};

/// Number of categories; every coefficient here is specialized to it.
const Q: f64 = 2.0;

/// Subjects x {left, right} rater counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatingTable {
    subjects: Vec<(u64, u64)>,
    excluded: usize,
}

impl RatingTable {
    /// Keeps subjects with at least two raters; the rest are counted in
    /// [`RatingTable::excluded`].
    pub fn new(counts: impl IntoIterator<Item = (u64, u64)>) -> Self {
        let mut subjects = Vec::new();
        let mut excluded = 0;
        for (l, r) in counts {
            if l + r >= 2 {
                subjects.push((l, r));
            } else {
                excluded += 1;
            }
        }
        if excluded > 0 {
            log::info!("agreement: excluded {excluded} subject(s) with fewer than two raters");
        }
        Self { subjects, excluded }
    }

    pub fn from_votes<'a>(records: impl IntoIterator<Item = &'a VoteRecord>) -> Self {
        Self::new(records.into_iter().map(|r| (r.votes_left, r.votes_right)))
    }

    pub fn subjects(&self) -> &[(u64, u64)] {
        &self.subjects
    }

    pub fn excluded(&self) -> usize {
        self.excluded
    }

    pub fn is_empty(&self) -> bool {
        self.subjects.is_empty()
    }

    /// Same table with the two categories exchanged.
    pub fn swapped(&self) -> Self {
        Self { subjects: self.subjects.iter().map(|&(l, r)| (r, l)).collect(), excluded: self.excluded }
    }

    fn require_subjects(&self) -> Result<()> {
        if self.subjects.is_empty() {
            return Err(Error::invalid("rating table has no subject with two or more raters"));
        }
        Ok(())
    }
}

fn pairs(n: u64) -> f64 {
    (n * n.saturating_sub(1)) as f64 / 2.0
}

/// Mean share of agreeing rater pairs per subject.
pub fn percent_agreement(t: &RatingTable) -> Result<f64> {
    t.require_subjects()?;
    let sum: f64 = t.subjects.iter().map(|&(l, r)| (pairs(l) + pairs(r)) / pairs(l + r)).sum();
    Ok(sum / t.subjects.len() as f64)
}

/// Brennan-Prediger coefficient with uniform chance agreement `1/q`.
pub fn brennan_prediger(t: &RatingTable) -> Result<f64> {
    Ok(kappa_bp_from_pa(percent_agreement(t)?))
}

/// `(p_a - 1/q) / (1 - 1/q)`, which for two categories equals `2 p_a - 1`.
pub fn kappa_bp_from_pa(p_a: f64) -> f64 {
    (p_a - 1.0 / Q) / (1.0 - 1.0 / Q)
}

/// Gwet's AC1 with chance agreement `2 pi (1 - pi)`, where `pi` is the mean
/// per-subject share of right-pole ratings.
pub fn gwet_gamma(t: &RatingTable) -> Result<f64> {
    let p_a = percent_agreement(t)?;
    let pi = t.subjects.iter().map(|&(l, r)| r as f64 / (l + r) as f64).sum::<f64>() / t.subjects.len() as f64;
    let p_e = 2.0 * pi * (1.0 - pi);
    if p_e >= 1.0 {
        return Err(Error::Numerical("chance agreement of 1 makes AC1 undefined".into()));
    }
    Ok((p_a - p_e) / (1.0 - p_e))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Alpha {
    pub value: f64,
    /// Set when expected disagreement is zero (one category used throughout)
    /// and the value was fixed to 1.
    pub degenerate: bool,
}

/// Nominal Krippendorff's alpha from the coincidence matrix, allowing a
/// different number of raters per subject.
pub fn krippendorff_alpha_detailed(t: &RatingTable) -> Result<Alpha> {
    t.require_subjects()?;
    // Off-diagonal coincidences: o_lr = sum_u n_l n_r / (m_u - 1).
    let o_lr: f64 = t.subjects.iter().map(|&(l, r)| (l * r) as f64 / (l + r - 1) as f64).sum();
    let n_l: f64 = t.subjects.iter().map(|&(l, _)| l as f64).sum();
    let n_r: f64 = t.subjects.iter().map(|&(_, r)| r as f64).sum();
    let n = n_l + n_r;
    let expected = n_l * n_r;
    if expected == 0.0 {
        log::warn!("krippendorff alpha: zero expected disagreement, reporting 1.0");
        return Ok(Alpha { value: 1.0, degenerate: true });
    }
    // alpha = 1 - D_o / D_e with D_o = 2 o_lr / n and D_e = 2 n_l n_r / (n (n - 1)).
    Ok(Alpha { value: 1.0 - (n - 1.0) * o_lr / expected, degenerate: false })
}

pub fn krippendorff_alpha(t: &RatingTable) -> Result<f64> {
    krippendorff_alpha_detailed(t).map(|a| a.value)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleAgreement {
    pub scale: Scale,
    pub n_subjects: usize,
    pub excluded: usize,
    pub p_a: f64,
    pub alpha: f64,
    pub alpha_degenerate: bool,
    pub kappa_bp: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgreementReport {
    pub scales: Vec<ScaleAgreement>,
}

/// All four coefficients for each MBTI scale; tables are given in
/// [`Scale::ALL`] order.
pub fn agreement_report(tables: &[RatingTable; 4]) -> Result<AgreementReport> {
    let scales = Scale::ALL
        .iter()
        .zip(tables)
        .map(|(&scale, t)| {
            let wrap = |e: Error| Error::Scale { scale, message: e.to_string() };
            let p_a = percent_agreement(t).map_err(wrap)?;
            let alpha = krippendorff_alpha_detailed(t).map_err(wrap)?;
            Ok(ScaleAgreement {
                scale,
                n_subjects: t.subjects.len(),
                excluded: t.excluded,
                p_a,
                alpha: alpha.value,
                alpha_degenerate: alpha.degenerate,
                kappa_bp: kappa_bp_from_pa(p_a),
                gamma: gwet_gamma(t).map_err(wrap)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(AgreementReport { scales })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(v: &[(u64, u64)]) -> RatingTable {
        RatingTable::new(v.iter().copied())
    }

    #[test]
    fn unanimous_subjects() {
        let t = table(&[(5, 0), (0, 3), (4, 0)]);
        assert_eq!(percent_agreement(&t).unwrap(), 1.0);
        assert_eq!(krippendorff_alpha(&t).unwrap(), 1.0);
        assert_eq!(brennan_prediger(&t).unwrap(), 1.0);
        assert_eq!(gwet_gamma(&t).unwrap(), 1.0);
    }

    #[test]
    fn split_pair_disagrees() {
        let t = table(&[(1, 1)]);
        assert_eq!(percent_agreement(&t).unwrap(), 0.0);
        assert_eq!(brennan_prediger(&t).unwrap(), -1.0);
        // coincidences o_lr = o_rl = 1, n_l = n_r = 1, n = 2
        assert_eq!(krippendorff_alpha(&t).unwrap(), 0.0);
    }

    #[test]
    fn two_to_one() {
        let pa = percent_agreement(&table(&[(2, 1)])).unwrap();
        assert!((pa - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn kappa_from_reported_agreement() {
        assert!((kappa_bp_from_pa(0.874538) - 0.749077).abs() < 1e-6);
        assert!((kappa_bp_from_pa(0.906237) - 0.812474).abs() < 1e-6);
        assert_eq!(kappa_bp_from_pa(0.5), 0.0);
    }

    #[test]
    fn gamma_all_right() {
        let t = table(&[(0, 4), (0, 2)]);
        assert_eq!(gwet_gamma(&t).unwrap(), 1.0);
    }

    #[test]
    fn gamma_plug_in() {
        // pi = (0 + 1 + 0.25 + 0.75) / 4 = 0.5 and p_a = (1 + 1 + 0.5 + 0.5) / 4 = 0.75
        let t = table(&[(4, 0), (0, 4), (3, 1), (1, 3)]);
        assert_eq!(percent_agreement(&t).unwrap(), 0.75);
        assert_eq!(gwet_gamma(&t).unwrap(), 0.5);
    }

    #[test]
    fn degenerate_alpha_flagged() {
        let a = krippendorff_alpha_detailed(&table(&[(3, 0), (2, 0)])).unwrap();
        assert!(a.degenerate);
        assert_eq!(a.value, 1.0);
    }

    #[test]
    fn single_raters_excluded() {
        let t = table(&[(1, 0), (0, 1), (3, 0)]);
        assert_eq!(t.excluded(), 2);
        assert_eq!(t.subjects().len(), 1);
        let empty = table(&[(1, 0)]);
        assert!(percent_agreement(&empty).is_err());
        assert!(krippendorff_alpha(&empty).is_err());
        assert!(gwet_gamma(&empty).is_err());
    }

    #[test]
    fn skewed_table_paradox() {
        // mostly left votes with a few dissenters: high p_a, low alpha
        let t = table(&[(9, 1), (10, 0), (8, 2), (10, 0), (9, 1), (10, 0)]);
        let pa = percent_agreement(&t).unwrap();
        let alpha = krippendorff_alpha(&t).unwrap();
        let kbp = brennan_prediger(&t).unwrap();
        let g = gwet_gamma(&t).unwrap();
        assert!(pa > 0.85);
        assert!(alpha < kbp - 0.3, "alpha {alpha} kappa {kbp}");
        assert!(g >= kbp);
    }

    #[test]
    fn report_per_scale() {
        let tables = [table(&[(1, 1)]), table(&[(1, 1)]), table(&[(1, 1)]), table(&[(1, 1), (2, 0)])];
        let r = agreement_report(&tables).unwrap();
        assert_eq!(r.scales.len(), 4);
        assert_eq!(r.scales[0].p_a, 0.0);
        assert_eq!(r.scales[0].kappa_bp, -1.0);
        assert_eq!(r.scales[3].scale, Scale::JP);
        let bad = [table(&[(1, 1)]), table(&[]), table(&[(1, 1)]), table(&[(1, 1)])];
        assert!(matches!(agreement_report(&bad), Err(Error::Scale { scale: Scale::SN, .. })));
    }
}

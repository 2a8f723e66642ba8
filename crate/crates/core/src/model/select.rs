use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::features::TokenDoc;
use crate::labels::MbtiVector;
use crate::{Error, Result};

use super::metrics::EvalReport;
use super::pipeline::{Candidate, EvalSpace, PersonalityModel, TrainConfig};

/// Validation outcome of one candidate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateScore {
    pub candidate: Candidate,
    pub reports: Option<[EvalReport; 4]>,
    /// Mean MAE over the four scales; NaN when training failed.
    pub mean_mae: f64,
    /// Mean of the defined per-scale tau values.
    pub mean_tau: Option<f64>,
    pub error: Option<String>,
}

impl CandidateScore {
    pub fn from_reports(candidate: Candidate, reports: [EvalReport; 4]) -> Self {
        let mean_mae = reports.iter().map(|r| r.mae).sum::<f64>() / 4.0;
        let taus: Vec<f64> = reports.iter().filter_map(|r| r.tau).collect();
        let mean_tau = (!taus.is_empty()).then(|| taus.iter().sum::<f64>() / taus.len() as f64);
        CandidateScore { candidate, reports: Some(reports), mean_mae, mean_tau, error: None }
    }

    pub fn failed(candidate: Candidate, error: &Error) -> Self {
        CandidateScore { candidate, reports: None, mean_mae: f64::NAN, mean_tau: None, error: Some(error.to_string()) }
    }

    pub fn ok(&self) -> bool {
        self.error.is_none()
    }
}

/// Indices of the successful candidates, best first: ascending mean MAE,
/// then descending mean tau (undefined tau ranks last), then input order.
pub fn rank_candidates(scores: &[CandidateScore]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..scores.len()).filter(|&i| scores[i].ok()).collect();
    idx.sort_by(|&a, &b| {
        let (sa, sb) = (&scores[a], &scores[b]);
        sa.mean_mae
            .total_cmp(&sb.mean_mae)
            .then_with(|| {
                let ta = sa.mean_tau.unwrap_or(f64::NEG_INFINITY);
                let tb = sb.mean_tau.unwrap_or(f64::NEG_INFINITY);
                tb.partial_cmp(&ta).unwrap_or(Ordering::Equal)
            })
            .then(a.cmp(&b))
    });
    idx
}

#[derive(Debug, Clone)]
pub struct Selection {
    pub best: usize,
    pub scores: Vec<CandidateScore>,
    pub model: PersonalityModel,
}

impl Selection {
    pub fn best_score(&self) -> &CandidateScore {
        &self.scores[self.best]
    }
}


/// Trains every candidate on the training data and keeps the one with the
/// best validation score. Candidates are trained concurrently; results are
/// collected in candidate order so the outcome does not depend on timing.
pub fn select_model(
    candidates: &[Candidate],
    train: (&[TokenDoc], &[MbtiVector]),
    validation: (&[TokenDoc], &[MbtiVector]),
    cfg: &TrainConfig,
    space: EvalSpace,
) -> Result<Selection> {
    if candidates.is_empty() {
        return Err(Error::invalid("no candidates to select from"));
    }
    let outcomes: Vec<(CandidateScore, Option<PersonalityModel>)> = candidates
        .par_iter()
        .map(|&c| {
            let run = PersonalityModel::train(c, train.0, train.1, cfg)
                .and_then(|m| m.evaluate(validation.0, validation.1, space).map(|r| (m, r)));
            match run {
                Ok((m, r)) => (CandidateScore::from_reports(c, r), Some(m)),
                Err(e) => {
                    log::warn!("candidate {c} failed: {e}");
                    (CandidateScore::failed(c, &e), None)
                }
            }
        })
        .collect();
    let (scores, mut models): (Vec<_>, Vec<_>) = outcomes.into_iter().unzip();
    let Some(&best) = rank_candidates(&scores).first() else {
        let msg = scores
            .iter()
            .map(|s| format!("{}: {}", s.candidate, s.error.as_deref().unwrap_or("?")))
            .collect::<Vec<_>>()
            .join("; ");
        return Err(Error::NoCandidate(msg));
    };
    let model = models[best].take().expect("successful candidate has a model");
    Ok(Selection { best, scores, model })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Algorithm, FeatureKind};

    fn score(mae: f64, tau: f64) -> CandidateScore {
        let c = Candidate { features: FeatureKind::Dictionary, algorithm: Algorithm::Svr };
        let r = EvalReport { n: 10, r: Some(0.0), rho: Some(0.0), tau: Some(tau), mae };
        CandidateScore::from_reports(c, [r; 4])
    }

    #[test]
    fn single_candidate() {
        assert_eq!(rank_candidates(&[score(0.5, 0.1)]), vec![0]);
    }

    #[test]
    fn lower_mae_wins() {
        assert_eq!(rank_candidates(&[score(0.4, 0.9), score(0.3, 0.1)])[0], 1);
    }

    #[test]
    fn tau_breaks_ties() {
        assert_eq!(rank_candidates(&[score(0.3, 0.2), score(0.3, 0.5)])[0], 1);
    }

    #[test]
    fn failures_are_excluded() {
        let c = Candidate { features: FeatureKind::Dictionary, algorithm: Algorithm::Mlp };
        let scores = vec![CandidateScore::failed(c, &Error::Diverged { epoch: 2 }), score(0.9, 0.0)];
        assert_eq!(rank_candidates(&scores), vec![1]);
    }
}

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::features::{dict_features, fit_tfidf, CategoryDictionary, SparseVector, TokenDoc, Vocabulary};
use crate::labels::{MbtiVector, Scale};
use crate::{Error, Result};

use super::boxcox::LabelTransform;
use super::metrics::{evaluate, EvalReport};
use super::mlp::{train_mlp, MlpConfig, MlpModel};
use super::svr::{train_svr, SvrModel, SvrParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FeatureKind {
    Tfidf { n_max: usize, min_df: u32 },
    Dictionary,
}

impl fmt::Display for FeatureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeatureKind::Tfidf { n_max, min_df } => write!(f, "tfidf{n_max}(min_df={min_df})"),
            FeatureKind::Dictionary => f.write_str("dictionary"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Svr,
    Mlp,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Svr => "svr",
            Algorithm::Mlp => "mlp",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub features: FeatureKind,
    pub algorithm: Algorithm,
}

impl Candidate {
    /// Uni-, bi- and trigram tf-idf plus dictionary features, each paired
    /// with both regressors.
    pub fn default_grid() -> Vec<Candidate> {
        let mut kinds: Vec<FeatureKind> = (1..=3).map(|n| FeatureKind::Tfidf { n_max: n, min_df: 2 }).collect();
        kinds.push(FeatureKind::Dictionary);
        kinds
            .into_iter()
            .flat_map(|features| [Algorithm::Svr, Algorithm::Mlp].map(|algorithm| Candidate { features, algorithm }))
            .collect()
    }
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}", self.algorithm, self.features)
    }
}

/// A fitted feature extractor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Featurizer {
    Tfidf { vocabulary: Vocabulary },
    /// Dictionary shares z-scored with training statistics.
    Dictionary { dictionary: CategoryDictionary, mean: Vec<f64>, scale: Vec<f64> },
}

impl Featurizer {
    pub fn fit(kind: FeatureKind, docs: &[TokenDoc], dictionary: &CategoryDictionary) -> Result<Self> {
        match kind {
            FeatureKind::Tfidf { n_max, min_df } => Ok(Featurizer::Tfidf { vocabulary: fit_tfidf(docs, n_max, min_df)? }),
            FeatureKind::Dictionary => {
                if docs.is_empty() {
                    return Err(Error::invalid("cannot fit dictionary features on zero documents"));
                }
                let raw: Vec<Vec<f64>> = docs.iter().map(|d| dict_features(dictionary, d.tokens())).collect();
                let k = raw[0].len();
                let n = raw.len() as f64;
                let mut mean = vec![0.0; k];
                for r in &raw {
                    for (m, v) in mean.iter_mut().zip(r) {
                        *m += v / n;
                    }
                }
                let mut scale = vec![0.0; k];
                for r in &raw {
                    for ((s, v), m) in scale.iter_mut().zip(r).zip(&mean) {
                        *s += (v - m).powi(2);
                    }
                }
                for s in scale.iter_mut() {
                    let sd = (*s / (n - 1.0).max(1.0)).sqrt();
                    *s = if sd > 0.0 { sd } else { 1.0 };
                }
                Ok(Featurizer::Dictionary { dictionary: dictionary.clone(), mean, scale })
            }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Featurizer::Tfidf { vocabulary } => vocabulary.len(),
            Featurizer::Dictionary { mean, .. } => mean.len(),
        }
    }

    pub fn feature_names(&self) -> Vec<String> {
        match self {
            Featurizer::Tfidf { vocabulary } => vocabulary.terms().to_vec(),
            Featurizer::Dictionary { dictionary, .. } => dictionary.feature_names(),
        }
    }

    pub fn transform(&self, doc: &TokenDoc) -> SparseVector {
        match self {
            Featurizer::Tfidf { vocabulary } => vocabulary.transform(doc),
            Featurizer::Dictionary { dictionary, mean, scale } => {
                let raw = dict_features(dictionary, doc.tokens());
                let z: Vec<f64> = raw.iter().zip(mean).zip(scale).map(|((v, m), s)| (v - m) / s).collect();
                SparseVector::from_dense(&z)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ScaleModel {
    Svr(SvrModel),
    Mlp(MlpModel),
}

impl ScaleModel {
    pub fn predict(&self, x: &SparseVector) -> f64 {
        match self {
            ScaleModel::Svr(m) => m.predict(x),
            ScaleModel::Mlp(m) => m.predict(x),
        }
    }

    pub fn as_linear(&self) -> Option<&SvrModel> {
        match self {
            ScaleModel::Svr(m) => Some(m),
            ScaleModel::Mlp(_) => None,
        }
    }
}

/// Label space used when scoring predictions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalSpace {
    /// Box-Cox transformed labels, the space the regressors are fitted in.
    #[default]
    Transformed,
    /// Original [0, 1] labels; predictions are inverted first.
    Label,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub svr: SvrParams,
    pub mlp: MlpConfig,
    pub dictionary: CategoryDictionary,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig { svr: SvrParams::default(), mlp: MlpConfig::default(), dictionary: CategoryDictionary::demo() }
    }
}

/// Featurizer, per-scale label transforms and one regressor per scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PersonalityModel {
    pub candidate: Candidate,
    pub featurizer: Featurizer,
    pub transforms: [LabelTransform; 4],
    pub models: Vec<ScaleModel>,
    /// Mean training feature vector, the reference point for attributions.
    pub background_mean: Vec<f64>,
}

impl PersonalityModel {
    pub fn train(candidate: Candidate, docs: &[TokenDoc], labels: &[MbtiVector], cfg: &TrainConfig) -> Result<Self> {
        if docs.len() != labels.len() {
            return Err(Error::DimensionMismatch { expected: docs.len(), actual: labels.len() });
        }
        let featurizer = Featurizer::fit(candidate.features, docs, &cfg.dictionary)?;
        let x: Vec<SparseVector> = docs.par_iter().map(|d| featurizer.transform(d)).collect();
        let mut background_mean = vec![0.0; featurizer.dim()];
        for v in &x {
            v.axpy_into(1.0 / x.len() as f64, &mut background_mean);
        }

        let mut transforms = Vec::with_capacity(4);
        for s in Scale::ALL {
            let y: Vec<f64> = labels.iter().map(|l| l.get(s)).collect();
            transforms.push(LabelTransform::fit(&y).map_err(|e| Error::Scale { scale: s, message: e.to_string() })?);
        }
        let transforms: [LabelTransform; 4] = transforms.try_into().expect("four scales");

        let models = Scale::ALL
            .par_iter()
            .map(|&s| {
                let t = &transforms[s.index()];
                let y: Vec<f64> = labels.iter().map(|l| t.forward(l.get(s))).collect();
                let offset = s.index() as u64;
                match candidate.algorithm {
                    Algorithm::Svr => {
                        let p = SvrParams { seed: cfg.svr.seed.wrapping_add(offset), ..cfg.svr };
                        train_svr(&x, &y, &p).map(ScaleModel::Svr)
                    }
                    Algorithm::Mlp => {
                        let c = MlpConfig { seed: cfg.mlp.seed.wrapping_add(offset), ..cfg.mlp };
                        train_mlp(&x, &y, &c).map(ScaleModel::Mlp)
                    }
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PersonalityModel { candidate, featurizer, transforms, models, background_mean })
    }

    pub fn featurize(&self, doc: &TokenDoc) -> SparseVector {
        self.featurizer.transform(doc)
    }

    /// Raw regressor outputs, in transformed label space.
    pub fn predict_transformed(&self, x: &SparseVector) -> [f64; 4] {
        Scale::ALL.map(|s| self.models[s.index()].predict(x))
    }

    /// Predictions mapped back to [0, 1].
    pub fn predict_labels(&self, x: &SparseVector) -> [f64; 4] {
        let z = self.predict_transformed(x);
        Scale::ALL.map(|s| self.transforms[s.index()].inverse(z[s.index()]))
    }

    pub fn evaluate(&self, docs: &[TokenDoc], labels: &[MbtiVector], space: EvalSpace) -> Result<[EvalReport; 4]> {
        if docs.len() != labels.len() {
            return Err(Error::DimensionMismatch { expected: docs.len(), actual: labels.len() });
        }
        let x: Vec<SparseVector> = docs.par_iter().map(|d| self.featurize(d)).collect();
        let mut out = Vec::with_capacity(4);
        for s in Scale::ALL {
            let i = s.index();
            let t = &self.transforms[i];
            let (truth, pred): (Vec<f64>, Vec<f64>) = match space {
                EvalSpace::Transformed => labels
                    .iter()
                    .zip(&x)
                    .map(|(l, v)| (t.forward(l.get(s)), self.models[i].predict(v)))
                    .unzip(),
                EvalSpace::Label => labels
                    .iter()
                    .zip(&x)
                    .map(|(l, v)| (l.get(s), t.inverse(self.models[i].predict(v))))
                    .unzip(),
            };
            out.push(evaluate(&truth, &pred).map_err(|e| Error::Scale { scale: s, message: e.to_string() })?);
        }
        Ok(out.try_into().expect("four scales"))
    }
}

//! Label transformation, group-aware splits, regressors, evaluation,
//! model selection and linear attributions.

mod boxcox;
mod explain;
mod metrics;
mod mlp;
mod pipeline;
mod select;
mod split;
mod svr;

pub use boxcox::{boxcox, boxcox_fit, boxcox_fit_shifted, boxcox_log_likelihood, BoxCoxTransform, LabelTransform, LABEL_FLOOR};
pub use explain::{explain_linear, Explanation};
pub use metrics::{average_ranks, evaluate, kendall_tau_b, mae, pearson, spearman, EvalReport};
pub use mlp::{train_mlp, MlpConfig, MlpModel};
pub use pipeline::{
    Algorithm, Candidate, EvalSpace, FeatureKind, Featurizer, PersonalityModel, ScaleModel, TrainConfig,
};
pub use select::{rank_candidates, select_model, CandidateScore, Selection};
pub use split::{group_shuffle_split, Part, Split};
pub use svr::{train_svr, train_svr_weighted, SvrDiagnostics, SvrModel, SvrParams};

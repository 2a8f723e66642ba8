//! Run configuration: a TOML file with nested sections, overridden by
//! command-line flags. Every value has a default, so an empty file (or no
//! file) is a valid configuration.

use std::path::{Path, PathBuf};

use persona_core::econ::DesignSpec;
use persona_core::model::{Algorithm, Candidate, EvalSpace, FeatureKind, MlpConfig, SvrParams};
use persona_core::synth::SynthConfig;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Drives synthesis, splitting and every training run.
    pub seed: u64,
    pub run_dir: PathBuf,
    pub paths: Paths,
    pub labels: LabelsSection,
    pub split: SplitSection,
    pub train: TrainSection,
    pub svr: SvrSection,
    pub mlp: MlpSection,
    pub eval: EvalSection,
    pub predict: PredictSection,
    pub risk: RiskSection,
    pub explain: ExplainSection,
    pub synth: SynthConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 42,
            run_dir: PathBuf::from("run"),
            paths: Paths::default(),
            labels: LabelsSection::default(),
            split: SplitSection::default(),
            train: TrainSection::default(),
            svr: SvrSection::default(),
            mlp: MlpSection::default(),
            eval: EvalSection::default(),
            predict: PredictSection::default(),
            risk: RiskSection::default(),
            explain: ExplainSection::default(),
            synth: SynthConfig::default(),
        }
    }
}

/// Input files. Unset paths point into `<run_dir>/world`, where `synth`
/// writes its output.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Paths {
    pub manifest: Option<PathBuf>,
    pub votes: Option<PathBuf>,
    pub big5: Option<PathBuf>,
    pub panel: Option<PathBuf>,
    pub dictionary: Option<PathBuf>,
    pub model_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LabelsSection {
    /// Smallest per-scale vote total for a CEO to receive a label.
    pub min_votes: u64,
}

impl Default for LabelsSection {
    fn default() -> Self {
        LabelsSection { min_votes: 3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SplitSection {
    /// Train, validation and test shares.
    pub fractions: [f64; 3],
}

impl Default for SplitSection {
    fn default() -> Self {
        SplitSection { fractions: [0.8, 0.1, 0.1] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainSection {
    /// Candidate names such as `svr+tfidf3` or `mlp+dictionary`; `grid`
    /// expands to all eight combinations.
    pub candidates: Vec<String>,
    pub min_df: u32,
}

impl Default for TrainSection {
    fn default() -> Self {
        TrainSection { candidates: vec!["grid".into()], min_df: 2 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SvrSection {
    pub c: f64,
    pub epsilon: f64,
    pub tol: f64,
    pub max_passes: usize,
}

impl Default for SvrSection {
    fn default() -> Self {
        let p = SvrParams::default();
        SvrSection { c: p.c, epsilon: p.epsilon, tol: p.tol, max_passes: p.max_passes }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MlpSection {
    pub hidden: [usize; 2],
    pub epochs: usize,
    pub learning_rate: f64,
}

impl Default for MlpSection {
    fn default() -> Self {
        let m = MlpConfig::default();
        MlpSection { hidden: m.hidden, epochs: m.epochs, learning_rate: m.learning_rate }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalSection {
    pub space: EvalSpace,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PredictScope {
    /// Every ingested document.
    #[default]
    All,
    /// Documents of CEOs without a label.
    Unlabeled,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PredictSection {
    pub scope: PredictScope,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RiskSection {
    pub include_mbti: bool,
    pub industry_effects: bool,
    pub time_effects: bool,
}

impl Default for RiskSection {
    fn default() -> Self {
        RiskSection { include_mbti: true, industry_effects: true, time_effects: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExplainSection {
    pub top: usize,
}

impl Default for ExplainSection {
    fn default() -> Self {
        ExplainSection { top: 15 }
    }
}

/// Parses `svr+tfidf3`, `mlp+tfidf1`, `svr+dictionary` and the like.
pub fn parse_candidate(name: &str, min_df: u32) -> CliResult<Candidate> {
    let bad = || CliError::config(format!("unknown candidate `{name}` (expected e.g. svr+tfidf3 or mlp+dictionary)"));
    let (algo, feat) = name.trim().split_once('+').ok_or_else(bad)?;
    let algorithm = match algo {
        "svr" => Algorithm::Svr,
        "mlp" => Algorithm::Mlp,
        _ => return Err(bad()),
    };
    let features = match feat {
        "dictionary" => FeatureKind::Dictionary,
        f => match f.strip_prefix("tfidf").and_then(|n| n.parse::<usize>().ok()) {
            Some(n_max @ 1..=3) => FeatureKind::Tfidf { n_max, min_df },
            _ => return Err(bad()),
        },
    };
    Ok(Candidate { features, algorithm })
}

impl RunConfig {
    /// Reads the optional file, applies `key=value` overrides (TOML literals,
    /// falling back to bare strings) and validates the result.
    pub fn load(file: Option<&Path>, overrides: &[(String, String)]) -> CliResult<Self> {
        let mut doc = match file {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| CliError::config(format!("{}: {e}", p.display())))?;
                text.parse::<toml::Table>().map_err(|e| CliError::config(format!("{}: {e}", p.display())))?
            }
            None => toml::Table::new(),
        };
        for (key, value) in overrides {
            set_key(&mut doc, key, parse_literal(value))?;
        }
        let mut cfg: RunConfig = toml::Value::Table(doc).try_into().map_err(|e: toml::de::Error| CliError::config(e.message().to_string()))?;
        cfg.synth.seed = cfg.seed;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> CliResult<()> {
        let f = self.split.fractions;
        if f.iter().any(|v| !(0.0..=1.0).contains(v)) || (f.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(CliError::config(format!("split.fractions must be shares summing to 1, got {f:?}")));
        }
        if self.svr.c <= 0.0 || self.svr.epsilon < 0.0 || self.svr.tol <= 0.0 || self.svr.max_passes == 0 {
            return Err(CliError::config("svr: need c > 0, epsilon >= 0, tol > 0 and max_passes >= 1"));
        }
        if self.mlp.epochs == 0 || self.mlp.learning_rate <= 0.0 || self.mlp.hidden.contains(&0) {
            return Err(CliError::config("mlp: need epochs >= 1, learning_rate > 0 and non-empty hidden layers"));
        }
        if self.explain.top == 0 {
            return Err(CliError::config("explain.top must be at least 1"));
        }
        self.candidates()?;
        self.synth.validate().map_err(|e| CliError::config(format!("synth: {e}")))?;
        for (key, path) in self.explicit_inputs() {
            if !path.exists() {
                return Err(CliError::config(format!("paths.{key}: {} does not exist", path.display())));
            }
        }
        Ok(())
    }

    fn explicit_inputs(&self) -> Vec<(&'static str, &Path)> {
        let p = &self.paths;
        [("manifest", &p.manifest), ("votes", &p.votes), ("big5", &p.big5), ("panel", &p.panel), ("dictionary", &p.dictionary)]
            .into_iter()
            .filter_map(|(k, v)| v.as_deref().map(|v| (k, v)))
            .collect()
    }

    pub fn candidates(&self) -> CliResult<Vec<Candidate>> {
        let mut out = Vec::new();
        for name in &self.train.candidates {
            if name == "grid" {
                out.extend(Candidate::default_grid().into_iter().map(|c| match c.features {
                    FeatureKind::Tfidf { n_max, .. } => Candidate { features: FeatureKind::Tfidf { n_max, min_df: self.train.min_df }, ..c },
                    FeatureKind::Dictionary => c,
                }));
            } else {
                out.push(parse_candidate(name, self.train.min_df)?);
            }
        }
        if out.is_empty() {
            return Err(CliError::config("train.candidates is empty"));
        }
        let mut seen = Vec::new();
        out.retain(|c| {
            let fresh = !seen.contains(c);
            seen.push(*c);
            fresh
        });
        Ok(out)
    }

    pub fn svr_params(&self) -> SvrParams {
        SvrParams { c: self.svr.c, epsilon: self.svr.epsilon, tol: self.svr.tol, max_passes: self.svr.max_passes, seed: self.seed }
    }

    pub fn mlp_config(&self) -> MlpConfig {
        MlpConfig { hidden: self.mlp.hidden, epochs: self.mlp.epochs, learning_rate: self.mlp.learning_rate, seed: self.seed }
    }

    pub fn design(&self) -> DesignSpec {
        DesignSpec { industry_effects: self.risk.industry_effects, time_effects: self.risk.time_effects, ..DesignSpec::fin() }
    }

    pub fn world_dir(&self) -> PathBuf {
        self.run_dir.join("world")
    }

    pub fn reports_dir(&self) -> PathBuf {
        self.run_dir.join("reports")
    }

    pub fn model_dir(&self) -> PathBuf {
        self.paths.model_dir.clone().unwrap_or_else(|| self.run_dir.join("model"))
    }

    /// Configured input path, or its default location in the synthetic world.
    pub fn input(&self, which: Input) -> (PathBuf, bool) {
        let p = &self.paths;
        let (given, file) = match which {
            Input::Manifest => (&p.manifest, "manifest.jsonl"),
            Input::Votes => (&p.votes, "votes.csv"),
            Input::Big5 => (&p.big5, "big5.csv"),
            Input::Panel => (&p.panel, "panel.csv"),
            Input::Dictionary => (&p.dictionary, "lexicon.dic"),
        };
        match given {
            Some(path) => (path.clone(), true),
            None => (self.world_dir().join(file), false),
        }
    }

    /// SHA-256 of the resolved configuration in canonical TOML form.
    pub fn hash(&self) -> String {
        let text = toml::to_string(self).expect("configuration serializes to TOML");
        format!("{:x}", Sha256::digest(text.as_bytes()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Input {
    Manifest,
    Votes,
    Big5,
    Panel,
    Dictionary,
}

fn parse_literal(raw: &str) -> toml::Value {
    format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}

fn set_key(doc: &mut toml::Table, dotted: &str, value: toml::Value) -> CliResult<()> {
    let parts: Vec<&str> = dotted.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(CliError::config(format!("malformed key `{dotted}`")));
    }
    let mut table = doc;
    for part in &parts[..parts.len() - 1] {
        let entry = table.entry(part.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        table = entry
            .as_table_mut()
            .ok_or_else(|| CliError::config(format!("`{part}` in `{dotted}` is not a section")))?;
    }
    table.insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kv(k: &str, v: &str) -> (String, String) {
        (k.to_string(), v.to_string())
    }

    #[test]
    fn defaults_without_file() {
        let c = RunConfig::load(None, &[]).unwrap();
        assert_eq!(c, RunConfig::default());
        assert_eq!(c.candidates().unwrap().len(), 8);
    }

    #[test]
    fn flag_beats_file_beats_default() {
        let dir = std::env::temp_dir().join(format!("persona-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let file = dir.join("run.toml");
        std::fs::write(&file, "seed = 7\n[svr]\nc = 2.5\nepsilon = 0.05\n").unwrap();
        let c = RunConfig::load(Some(&file), &[kv("svr.c", "4"), kv("run_dir", "elsewhere")]).unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.synth.seed, 7);
        assert_eq!(c.svr.c, 4.0);
        assert_eq!(c.svr.epsilon, 0.05);
        assert_eq!(c.svr.tol, SvrParams::default().tol);
        assert_eq!(c.run_dir, PathBuf::from("elsewhere"));
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn bad_values_are_config_errors() {
        for (k, v) in [("split.fractions", "[0.5, 0.1, 0.1]"), ("svr.c", "0"), ("train.candidates", "[\"svr+tfidf9\"]"), ("nope", "1")] {
            let e = RunConfig::load(None, &[kv(k, v)]).unwrap_err();
            assert_eq!(e.class, crate::error::Class::Config, "{k}");
        }
        let e = RunConfig::load(None, &[kv("paths.votes", "/definitely/not/here.csv")]).unwrap_err();
        assert_eq!(e.class, crate::error::Class::Config);
    }

    #[test]
    fn hash_tracks_content() {
        let a = RunConfig::load(None, &[]).unwrap();
        let b = RunConfig::load(None, &[kv("seed", "42")]).unwrap();
        let c = RunConfig::load(None, &[kv("seed", "43")]).unwrap();
        assert_eq!(a.hash(), b.hash());
        assert_ne!(a.hash(), c.hash());
        assert_eq!(a.hash().len(), 64);
    }

    #[test]
    fn candidate_names() {
        let c = parse_candidate("mlp+tfidf2", 3).unwrap();
        assert_eq!(c.features, FeatureKind::Tfidf { n_max: 2, min_df: 3 });
        assert_eq!(c.algorithm, Algorithm::Mlp);
        assert!(parse_candidate("svr+bag", 2).is_err());
        assert!(parse_candidate("tfidf3", 2).is_err());
    }
}

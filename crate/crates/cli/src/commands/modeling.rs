use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::PathBuf;

use persona_core::corpus::normalize_name;
use persona_core::features::{CategoryDictionary, TokenDoc};
use persona_core::labels::{MbtiVector, Scale};
use persona_core::model::{
    explain_linear, group_shuffle_split, select_model, EvalReport, EvalSpace, Part, TrainConfig,
};

use crate::config::{Input, PredictScope, RunConfig};
use crate::error::{CliError, CliResult, WithPath};
use crate::report::{csv_text, fmt_opt, write_artifact, write_report, TextTable};
use crate::store::{
    csv_rows, model_path, predictions_path, read_documents, read_labels, read_model, read_split, split_path, DocRecord,
    ModelFile, PredictionRow, SplitRow, ValidationEntry, MODEL_FORMAT, MODEL_VERSION,
};

/// Documents whose CEO has a label, with that label.
fn labeled(docs: Vec<DocRecord>, labels: &BTreeMap<String, MbtiVector>) -> CliResult<Vec<(DocRecord, MbtiVector)>> {
    let mut out = Vec::new();
    for d in docs {
        let key = normalize_name(&d.doc.ceo_name)?;
        if let Some(l) = labels.get(&key) {
            out.push((d, *l));
        }
    }
    if out.is_empty() {
        return Err(CliError::validation("no document belongs to a labeled CEO"));
    }
    Ok(out)
}

pub fn split(cfg: &RunConfig) -> CliResult<Vec<PathBuf>> {
    let docs = labeled(read_documents(cfg)?, &read_labels(cfg)?)?;
    let groups: Vec<&str> = docs.iter().map(|(d, _)| d.doc.ceo_name.as_str()).collect();
    let s = group_shuffle_split(&groups, cfg.split.fractions, cfg.seed)?;
    let parts = s.assignment();
    let rows: Vec<SplitRow> = docs
        .iter()
        .zip(&parts)
        .map(|((d, _), &part)| SplitRow { call_id: d.doc.call_id.clone(), ceo: d.doc.ceo_name.clone(), part })
        .collect();
    let out = write_artifact(cfg, &split_path(cfg), &csv_rows(&rows)?)?;

    let mut t = TextTable::new(["Part", "Documents", "CEOs", "Share"]);
    for p in [Part::Train, Part::Validation, Part::Test] {
        let idx = s.part(p);
        let ceos: BTreeSet<&str> = idx.iter().map(|&i| groups[i]).collect();
        t.row([
            format!("{p:?}").to_lowercase(),
            idx.len().to_string(),
            ceos.len().to_string(),
            format!("{:.3}", idx.len() as f64 / s.len() as f64),
        ]);
    }
    Ok(vec![out, write_report(cfg, "split.txt", &t.render())?])
}

struct Parts {
    docs: BTreeMap<Part, (Vec<TokenDoc>, Vec<MbtiVector>)>,
}

impl Parts {
    fn load(cfg: &RunConfig) -> CliResult<Self> {
        let docs = labeled(read_documents(cfg)?, &read_labels(cfg)?)?;
        let split = read_split(cfg)?;
        let assigned: BTreeMap<(&str, &str), Part> = split.iter().map(|r| ((r.call_id.as_str(), r.ceo.as_str()), r.part)).collect();
        let mut out: BTreeMap<Part, (Vec<TokenDoc>, Vec<MbtiVector>)> = BTreeMap::new();
        for (d, l) in &docs {
            let Some(&p) = assigned.get(&(d.doc.call_id.as_str(), d.doc.ceo_name.as_str())) else {
                return Err(CliError::validation(format!(
                    "document {}/{} is missing from split.csv; rerun `persona split`",
                    d.doc.call_id, d.doc.ceo_name
                )));
            };
            let e = out.entry(p).or_default();
            e.0.push(d.doc.token_doc());
            e.1.push(*l);
        }
        Ok(Parts { docs: out })
    }

    fn get(&self, p: Part) -> CliResult<(&[TokenDoc], &[MbtiVector])> {
        match self.docs.get(&p) {
            Some((d, l)) if !d.is_empty() => Ok((d, l)),
            _ => Err(CliError::validation(format!("the {p:?} part is empty"))),
        }
    }
}

fn load_dictionary(cfg: &RunConfig) -> CliResult<CategoryDictionary> {
    let (path, explicit) = cfg.input(Input::Dictionary);
    if explicit || path.exists() {
        let src = fs::read_to_string(&path).at(&path)?;
        CategoryDictionary::parse(&src).at(&path)
    } else {
        log::info!("no dictionary at {}; using the built-in demo dictionary", path.display());
        Ok(CategoryDictionary::demo())
    }
}

const METRIC_HEADER: [&str; 9] = ["model", "split", "scale", "n", "r", "rho", "tau", "mae", "selected"];

fn metric_rows(name: &str, split: &str, reports: &[EvalReport; 4], selected: bool, t: &mut TextTable, csv: &mut Vec<Vec<String>>) {
    for s in Scale::ALL {
        let r = &reports[s.index()];
        t.row([
            name.to_string(),
            split.to_string(),
            s.to_string(),
            r.n.to_string(),
            fmt_opt(r.r, 3),
            fmt_opt(r.rho, 3),
            fmt_opt(r.tau, 3),
            format!("{:.3}", r.mae),
            if selected { "*".into() } else { String::new() },
        ]);
        let opt = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
        csv.push(vec![
            name.to_string(),
            split.to_string(),
            s.key().to_string(),
            r.n.to_string(),
            opt(r.r),
            opt(r.rho),
            opt(r.tau),
            r.mae.to_string(),
            selected.to_string(),
        ]);
    }
}

fn metric_table() -> TextTable {
    TextTable::new(["Model", "Split", "Scale", "n", "r", "ρ", "τ", "MAE", ""])
}

pub fn train(cfg: &RunConfig) -> CliResult<Vec<PathBuf>> {
    let parts = Parts::load(cfg)?;
    let candidates = cfg.candidates()?;
    let tc = TrainConfig { svr: cfg.svr_params(), mlp: cfg.mlp_config(), dictionary: load_dictionary(cfg)? };
    let sel = select_model(&candidates, parts.get(Part::Train)?, parts.get(Part::Validation)?, &tc, cfg.eval.space)?;

    let mut t = metric_table();
    let mut csv = Vec::new();
    let mut failures = String::new();
    for (i, s) in sel.scores.iter().enumerate() {
        match &s.reports {
            Some(r) => metric_rows(&s.candidate.to_string(), "validation", r, i == sel.best, &mut t, &mut csv),
            None => failures.push_str(&format!("failed: {}: {}\n", s.candidate, s.error.as_deref().unwrap_or("unknown error"))),
        }
    }
    let best = sel.best_score();
    let txt = format!(
        "selected {} (mean validation MAE {:.4}, space {})\n\n{}{failures}",
        best.candidate,
        best.mean_mae,
        space_name(cfg.eval.space),
        t.render()
    );
    let file = ModelFile {
        format: MODEL_FORMAT.into(),
        version: MODEL_VERSION,
        config_hash: cfg.hash(),
        seed: cfg.seed,
        space: cfg.eval.space,
        validation: sel.scores.iter().map(ValidationEntry::from).collect(),
        selected: sel.best,
        model: sel.model,
    };
    let path = model_path(cfg);
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).at(dir)?;
    }
    fs::write(&path, serde_json::to_vec(&file)?).at(&path)?;
    Ok(vec![path, write_report(cfg, "selection.txt", &txt)?, write_report(cfg, "selection.csv", &csv_text(&METRIC_HEADER, csv)?)?])
}

fn space_name(s: EvalSpace) -> &'static str {
    match s {
        EvalSpace::Transformed => "transformed",
        EvalSpace::Label => "label",
    }
}

pub fn eval(cfg: &RunConfig) -> CliResult<Vec<PathBuf>> {
    let file = read_model(cfg)?;
    let parts = Parts::load(cfg)?;
    let (docs, labels) = parts.get(Part::Test)?;
    let test = file.model.evaluate(docs, labels, cfg.eval.space)?;
    let name = file.model.candidate.to_string();
    let mut t = metric_table();
    let mut csv = Vec::new();
    metric_rows(&name, "test", &test, true, &mut t, &mut csv);
    for (i, s) in file.validation.iter().enumerate() {
        if let Some(r) = &s.reports {
            metric_rows(&s.candidate.to_string(), "validation", r, i == file.selected, &mut t, &mut csv);
        }
    }
    let strong = test.iter().filter(|r| r.rho.is_some_and(|v| v >= 0.5)).count();
    let txt = format!(
        "model {name}  space {}  test documents {}\nscales with test ρ >= 0.5: {strong} of 4\n\n{}",
        space_name(cfg.eval.space),
        docs.len(),
        t.render()
    );
    Ok(vec![write_report(cfg, "eval.txt", &txt)?, write_report(cfg, "eval.csv", &csv_text(&METRIC_HEADER, csv)?)?])
}

pub fn predict(cfg: &RunConfig) -> CliResult<Vec<PathBuf>> {
    let file = read_model(cfg)?;
    let docs = read_documents(cfg)?;
    let labels = match cfg.predict.scope {
        PredictScope::All => BTreeMap::new(),
        PredictScope::Unlabeled => read_labels(cfg)?,
    };
    let mut rows = Vec::new();
    for d in &docs {
        if !labels.is_empty() && labels.contains_key(&normalize_name(&d.doc.ceo_name)?) {
            continue;
        }
        let p = file.model.predict_labels(&file.model.featurize(&d.doc.token_doc()));
        rows.push(PredictionRow { call_id: d.doc.call_id.clone(), ceo: d.doc.ceo_name.clone(), ei: p[0], sn: p[1], tf: p[2], jp: p[3] });
    }
    if rows.is_empty() {
        return Err(CliError::validation("no documents to predict"));
    }
    Ok(vec![write_artifact(cfg, &predictions_path(cfg), &csv_rows(&rows)?)?])
}

pub fn explain(cfg: &RunConfig, call_id: &str, ceo: Option<&str>) -> CliResult<Vec<PathBuf>> {
    let file: ModelFile = read_model(cfg)?;
    let m = &file.model;
    let names = m.featurizer.feature_names();
    let docs = read_documents(cfg)?;
    let doc = docs
        .iter()
        .find(|d| d.doc.call_id == call_id && ceo.is_none_or(|c| d.doc.ceo_name == c))
        .ok_or_else(|| CliError::validation(format!("no document for call {call_id}{}", ceo.map(|c| format!(" and CEO {c}")).unwrap_or_default())))?;
    let x = m.featurize(&doc.doc.token_doc());
    let mut txt = format!(
        "call {}  ceo {}  model {}\ncontributions are in transformed label space, relative to the training mean\n",
        doc.doc.call_id, doc.doc.ceo_name, m.candidate
    );
    let mut csv = Vec::new();
    for s in Scale::ALL {
        let linear = m.models[s.index()]
            .as_linear()
            .ok_or_else(|| CliError::validation(format!("explain needs a linear model; {} is not", m.candidate)))?;
        let e = explain_linear(linear, &x, &m.background_mean)?;
        txt.push_str(&format!("\n{s}: prediction {:.4}  baseline {:.4}\n", e.prediction, e.baseline));
        let mut t = TextTable::new(["Feature", "Value", "Contribution"]);
        for j in e.top(cfg.explain.top) {
            t.row([names[j].clone(), format!("{:.4}", x.get(j)), format!("{:+.5}", e.contributions[j])]);
        }
        txt.push_str(&t.render());
        for (rank, j) in e.top(cfg.explain.top).into_iter().enumerate() {
            csv.push(vec![
                s.key().to_string(),
                (rank + 1).to_string(),
                names[j].clone(),
                x.get(j).to_string(),
                e.contributions[j].to_string(),
            ]);
        }
    }
    let stem = format!("explain_{}", sanitize(call_id));
    Ok(vec![
        write_report(cfg, &format!("{stem}.txt"), &txt)?,
        write_report(cfg, &format!("{stem}.csv"), &csv_text(&["scale", "rank", "feature", "value", "contribution"], csv)?)?,
    ])
}

fn sanitize(id: &str) -> String {
    id.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
}

use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;

use persona_core::agreement::{agreement_report, RatingTable};
use persona_core::corpus::{ceo_names, corpus_stats, extract_ceo_document, parse_transcript, read_manifest, FormatConfig, UnitStats};
use persona_core::labels::{
    build_mbti_vector, cross_correlation, label_summary, read_big5_csv, read_votes_csv, write_labels_csv, Big5Vector,
    EntityVotes, Scale, HISTOGRAM_BINS,
};
use persona_core::synth::gen_world;
use persona_core::Error as CoreError;

use super::input_path;
use crate::config::{Input, RunConfig};
use crate::error::{CliError, CliResult, WithPath};
use crate::report::{csv_text, fmt_opt, write_artifact, write_report, TextTable};
use crate::store::{documents_path, labels_path, DocRecord};

pub fn synth(cfg: &RunConfig) -> CliResult<Vec<PathBuf>> {
    let world = gen_world(&cfg.synth)?;
    let dir = cfg.world_dir();
    if dir.exists() {
        fs::remove_dir_all(&dir).at(&dir)?;
    }
    let files = world.write_to(&dir)?;
    let labeled = world.ceos.iter().filter(|c| c.labeled).count();
    let body = format!(
        "ceos {} (labeled {labeled}, unlabeled {})\ncalls {}\npanel rows {}\nfiles {}\n",
        world.ceos.len(),
        world.ceos.len() - labeled,
        world.transcripts.len(),
        world.panel.len(),
        files.len()
    );
    let report = write_report(cfg, "synth.txt", &body)?;
    Ok(vec![dir, report])
}

fn read_votes(cfg: &RunConfig) -> CliResult<Vec<EntityVotes>> {
    let path = input_path(cfg, Input::Votes)?;
    read_votes_csv(fs::File::open(&path).at(&path)?).at(&path)
}

pub fn ingest(cfg: &RunConfig) -> CliResult<Vec<PathBuf>> {
    let manifest = input_path(cfg, Input::Manifest)?;
    let base = manifest.parent().map(PathBuf::from).unwrap_or_default();
    let fmt = FormatConfig::default();
    let mut records = Vec::new();
    let mut seen = BTreeSet::new();
    for entry in read_manifest(&manifest).at(&manifest)? {
        let path = entry.resolve(&base);
        let raw = fs::read_to_string(&path).at(&path)?;
        let t = parse_transcript(&raw, &fmt).at(&path)?;
        if let Some(id) = &entry.call_id {
            if id != &t.call_id {
                return Err(CliError::validation(format!("{}: manifest call_id {id} but header says {}", path.display(), t.call_id)));
            }
        }
        let names = match &entry.ceo {
            Some(c) => vec![c.clone()],
            None => ceo_names(&t),
        };
        for name in names {
            let doc = extract_ceo_document(&t, &name).at(&path)?;
            if !seen.insert((doc.call_id.clone(), doc.ceo_name.clone())) {
                return Err(CliError::validation(format!("duplicate document for {} in call {}", doc.ceo_name, doc.call_id)));
            }
            records.push(DocRecord { company: entry.company.clone().unwrap_or_else(|| t.company_id.clone()), doc });
        }
    }
    if records.is_empty() {
        return Err(CliError::validation("the manifest yields no CEO documents"));
    }

    let mut body = String::new();
    for r in &records {
        body.push_str(&serde_json::to_string(r)?);
        body.push('\n');
    }
    let docs_out = write_artifact(cfg, &documents_path(cfg), &body)?;

    let docs: Vec<_> = records.iter().map(|r| r.doc.clone()).collect();
    let stats = corpus_stats(&docs)?;
    let ceos: BTreeSet<&str> = docs.iter().map(|d| d.ceo_name.as_str()).collect();
    let mut t = TextTable::new(["Unit", "Sum", "Mean", "Min", "Max"]);
    let units: [(&str, UnitStats); 3] = [("Utterances", stats.utterances), ("Sentences", stats.sentences), ("Tokens", stats.tokens)];
    for (name, u) in units {
        t.row([name.to_string(), u.sum.to_string(), format!("{:.1}", u.mean), u.min.to_string(), u.max.to_string()]);
    }
    let txt = format!("documents {}  ceos {}\n\n{}", stats.n_documents, ceos.len(), t.render());
    let csv = csv_text(
        &["unit", "sum", "mean", "min", "max"],
        units.iter().map(|(n, u)| vec![n.to_lowercase(), u.sum.to_string(), u.mean.to_string(), u.min.to_string(), u.max.to_string()]),
    )?;
    Ok(vec![docs_out, write_report(cfg, "corpus_stats.txt", &txt)?, write_report(cfg, "corpus_stats.csv", &csv)?])
}

pub fn labels(cfg: &RunConfig) -> CliResult<Vec<PathBuf>> {
    let votes = read_votes(cfg)?;
    let mut labels = Vec::new();
    let mut skipped = Vec::new();
    for e in &votes {
        match build_mbti_vector(&e.records, cfg.labels.min_votes) {
            Ok(m) => labels.push((e.entity_id.clone(), m)),
            Err(err @ CoreError::Scale { .. }) => {
                log::warn!("no label for {}: {err}", e.entity_id);
                skipped.push(e.entity_id.clone());
            }
            Err(err) => return Err(err.into()),
        }
    }
    if labels.is_empty() {
        return Err(CliError::validation("no entity has enough votes for a label"));
    }
    let mut buf = Vec::new();
    write_labels_csv(&mut buf, &labels)?;
    let mut out = vec![write_artifact(cfg, &labels_path(cfg), &String::from_utf8(buf).expect("utf-8"))?];

    let vectors: Vec<_> = labels.iter().map(|(_, m)| *m).collect();
    let summary = label_summary(&vectors)?;
    let mut t = TextTable::new(["Scale", "Mean", "SD", "Skew", "Histogram (10 bins over [0, 1])"]);
    let mut rows = Vec::new();
    for s in &summary.scales {
        let hist = s.histogram.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ");
        t.row([s.scale.to_string(), format!("{:.3}", s.mean), format!("{:.3}", s.std), format!("{:.3}", s.skewness), hist]);
        let mut row = vec![s.scale.key().to_string(), s.mean.to_string(), s.std.to_string(), s.skewness.to_string()];
        row.extend(s.histogram.iter().map(|c| c.to_string()));
        rows.push(row);
    }
    let mut txt = format!("labeled {}  skipped {}\n\n{}", summary.n, skipped.len(), t.render());
    for id in &skipped {
        txt.push_str(&format!("skipped: {id}\n"));
    }
    let bins: Vec<String> = (0..HISTOGRAM_BINS).map(|i| format!("bin{i}")).collect();
    let mut header = vec!["scale", "mean", "sd", "skewness"];
    header.extend(bins.iter().map(String::as_str));
    out.push(write_report(cfg, "label_summary.txt", &txt)?);
    out.push(write_report(cfg, "label_summary.csv", &csv_text(&header, rows)?)?);

    let (big5_path, explicit) = cfg.input(Input::Big5);
    if explicit || big5_path.exists() {
        let big5 = read_big5_csv(fs::File::open(&big5_path).at(&big5_path)?).at(&big5_path)?;
        let mut m = Vec::new();
        let mut b: Vec<Big5Vector> = Vec::new();
        for (id, v) in &big5 {
            if let Some((_, l)) = labels.iter().find(|(lid, _)| lid == id) {
                m.push(*l);
                b.push(*v);
            }
        }
        let corr = cross_correlation(&m, &b)?;
        let mut header = vec!["Scale".to_string()];
        header.extend(Big5Vector::NAMES.iter().map(|s| s.to_string()));
        let mut t = TextTable::new(header);
        let mut rows = Vec::new();
        for s in Scale::ALL {
            let cells: Vec<String> = (0..5).map(|j| fmt_opt(corr.get(s, j), 3)).collect();
            t.row(std::iter::once(s.to_string()).chain(cells.iter().cloned()));
            rows.push(std::iter::once(s.key().to_string()).chain((0..5).map(|j| corr.get(s, j).map_or(String::new(), |v| v.to_string()))).collect());
        }
        out.push(write_report(cfg, "big5_correlation.txt", &format!("pairs {}\n\n{}", corr.n, t.render()))?);
        let header: Vec<&str> = ["scale", "o", "c", "e", "a", "n"].to_vec();
        out.push(write_report(cfg, "big5_correlation.csv", &csv_text(&header, rows)?)?);
    } else {
        log::info!("no Big 5 file at {}; skipping the cross-correlation", big5_path.display());
    }
    Ok(out)
}

pub fn iaa(cfg: &RunConfig) -> CliResult<Vec<PathBuf>> {
    let votes = read_votes(cfg)?;
    let tables = Scale::ALL.map(|s| RatingTable::from_votes(votes.iter().flat_map(|e| e.records.iter().filter(move |r| r.scale == s))));
    let report = agreement_report(&tables)?;
    let mut t = TextTable::new(["Scale", "Subjects", "Excluded", "p_a", "Krippendorff α", "Brennan-Prediger κ", "Gwet γ"]);
    let mut rows = Vec::new();
    for s in &report.scales {
        let alpha = if s.alpha_degenerate { format!("{:.5}*", s.alpha) } else { format!("{:.5}", s.alpha) };
        t.row([
            s.scale.to_string(),
            s.n_subjects.to_string(),
            s.excluded.to_string(),
            format!("{:.5}", s.p_a),
            alpha,
            format!("{:.5}", s.kappa_bp),
            format!("{:.5}", s.gamma),
        ]);
        rows.push(vec![
            s.scale.key().to_string(),
            s.n_subjects.to_string(),
            s.excluded.to_string(),
            s.p_a.to_string(),
            s.alpha.to_string(),
            s.kappa_bp.to_string(),
            s.gamma.to_string(),
        ]);
    }
    let mut txt = t.render();
    if report.scales.iter().any(|s| s.alpha_degenerate) {
        txt.push_str("* no expected disagreement; alpha fixed to 1\n");
    }
    let csv = csv_text(&["scale", "subjects", "excluded", "p_a", "alpha", "kappa_bp", "gamma"], rows)?;
    Ok(vec![write_report(cfg, "agreement.txt", &txt)?, write_report(cfg, "agreement.csv", &csv)?])
}

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use persona_core::econ::{
    assemble_rows, read_panel_csv, read_prices_csv, render_risk_csv, render_risk_table, render_vif_table, risk_regression,
    PriceSeries,
};
use persona_core::labels::MbtiVector;

use super::input_path;
use crate::config::{Input, RunConfig};
use crate::error::{CliResult, WithPath};
use crate::report::{csv_text, write_report};
use crate::store::read_predictions;

/// Mean predicted profile per call; calls with several CEOs average them.
fn call_profiles(cfg: &RunConfig) -> CliResult<BTreeMap<String, MbtiVector>> {
    let mut sums: BTreeMap<String, ([f64; 4], usize)> = BTreeMap::new();
    for p in read_predictions(cfg)? {
        let e = sums.entry(p.call_id).or_insert(([0.0; 4], 0));
        for (acc, v) in e.0.iter_mut().zip([p.ei, p.sn, p.tf, p.jp]) {
            *acc += v;
        }
        e.1 += 1;
    }
    Ok(sums.into_iter().map(|(id, (s, n))| (id, MbtiVector::from_array(s.map(|v| v / n as f64), 0))).collect())
}

fn load_prices(base: &Path, files: impl Iterator<Item = String>) -> CliResult<BTreeMap<String, PriceSeries>> {
    let mut out = BTreeMap::new();
    for rel in files {
        if out.contains_key(&rel) {
            continue;
        }
        let path = base.join(&rel);
        let series = read_prices_csv(fs::File::open(&path).at(&path)?).at(&path)?;
        out.insert(rel, series);
    }
    Ok(out)
}

pub fn risk(cfg: &RunConfig) -> CliResult<Vec<PathBuf>> {
    let panel_path = input_path(cfg, Input::Panel)?;
    let records = read_panel_csv(fs::File::open(&panel_path).at(&panel_path)?).at(&panel_path)?;
    let base = panel_path.parent().map(PathBuf::from).unwrap_or_default();
    let prices = load_prices(&base, records.iter().map(|r| r.price_file.clone()))?;
    let profiles = if cfg.risk.include_mbti { Some(call_profiles(cfg)?) } else { None };
    let assembly = assemble_rows(&records, &prices, profiles.as_ref())?;
    let reg = risk_regression(&assembly.rows, cfg.risk.include_mbti, &cfg.design())?;

    let mut txt = format!("calls {}  without an MBTI prediction {}\n\n", assembly.rows.len(), assembly.missing_mbti.len());
    txt.push_str(&render_risk_table(&reg));
    let mut out = vec![write_report(cfg, "risk.txt", &txt)?, write_report(cfg, "risk.csv", &render_risk_csv(&reg))?];
    if !reg.vif.is_empty() {
        out.push(write_report(cfg, "vif.txt", &render_vif_table(&reg.vif))?);
        let rows = reg.vif.iter().map(|v| vec![v.name.clone(), v.value.to_string(), v.collinear.to_string()]);
        out.push(write_report(cfg, "vif.csv", &csv_text(&["regressor", "vif", "collinear"], rows)?)?);
    }
    Ok(out)
}

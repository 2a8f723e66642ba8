use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::design::{build_design_matrix, DesignSpec};
use super::ols::{ols_fit, OlsReport};
use super::panel::RiskRow;
use super::vif::{vif, VifEntry};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskRegression {
    pub baseline: OlsReport,
    pub joint: Option<OlsReport>,
    /// VIF of the regressors in the largest fitted model.
    pub vif: Vec<VifEntry>,
}

fn fit(rows: &[RiskRow], spec: &DesignSpec) -> Result<(OlsReport, Vec<VifEntry>)> {
    let d = build_design_matrix(rows, spec)?;
    let mut rep = ols_fit(&d.x, &d.y, &d.columns)?;
    rep.dropped_rows = d.dropped_rows;
    rep.dropped_columns = d.dropped_columns;
    rep.reference = d.reference;
    Ok((rep, vif(&d.x, &d.columns)?))
}

/// Fits the financial-controls model and, when `include_mbti` is set, the
/// joint model that adds the four personality scores plus age and gender.
/// `effects` selects the fixed-effect blocks and dummy scaling for both.
pub fn risk_regression(rows: &[RiskRow], include_mbti: bool, effects: &DesignSpec) -> Result<RiskRegression> {
    let base_spec = DesignSpec { include_mbti: false, include_demographics: false, ..*effects };
    let (baseline, base_vif) = fit(rows, &base_spec)?;
    if !include_mbti {
        return Ok(RiskRegression { baseline, joint: None, vif: base_vif });
    }
    let joint_spec = DesignSpec { include_mbti: true, include_demographics: true, ..*effects };
    let (joint, joint_vif) = fit(rows, &joint_spec)?;
    Ok(RiskRegression { baseline, joint: Some(joint), vif: joint_vif })
}

const DISPLAY: [(&str, &str); 14] = [
    ("past_vola", "Past Vola"),
    ("size", "Size"),
    ("volume", "Volume"),
    ("leverage", "Leverage"),
    ("spread", "Spread"),
    ("btm", "BTM"),
    ("sue", "SUE"),
    ("roa", "ROA"),
    ("age", "Age"),
    ("gender", "Gender"),
    ("ei", "E-I"),
    ("sn", "S-N"),
    ("tf", "T-F"),
    ("jp", "J-P"),
];

fn cell(rep: &OlsReport, key: &str) -> (String, String) {
    match rep.coefficient(key) {
        Some(c) => (format!("{:.4}{}", c.beta, c.stars), format!("({:.2})", c.t)),
        None => (String::new(), String::new()),
    }
}

/// Side-by-side text table: standardized betas with stars, t-statistics in
/// parentheses underneath. Fixed-effect dummies are summarized, not listed.
pub fn render_risk_table(reg: &RiskRegression) -> String {
    let mut models: Vec<(&str, &OlsReport)> = vec![("FIN", &reg.baseline)];
    if let Some(j) = &reg.joint {
        models.push(("FIN + MBTI", j));
    }
    let mut s = String::new();
    writeln!(s, "Post-call volatility, z-standardized coefficients (t-statistics in parentheses)").unwrap();
    writeln!(s).unwrap();
    write!(s, "{:<12}", "").unwrap();
    for (name, _) in &models {
        write!(s, "{name:>16}").unwrap();
    }
    writeln!(s).unwrap();
    for (key, label) in DISPLAY {
        if models.iter().all(|(_, r)| r.coefficient(key).is_none()) {
            continue;
        }
        let cells: Vec<(String, String)> = models.iter().map(|(_, r)| cell(r, key)).collect();
        write!(s, "{label:<12}").unwrap();
        for c in &cells {
            write!(s, "{:>16}", c.0).unwrap();
        }
        writeln!(s).unwrap();
        write!(s, "{:<12}", "").unwrap();
        for c in &cells {
            write!(s, "{:>16}", c.1).unwrap();
        }
        writeln!(s).unwrap();
    }
    let fe = |r: &OlsReport, prefix: &str| {
        if r.coefficients.iter().any(|c| c.name.starts_with(prefix)) { "yes" } else { "no" }
    };
    for (label, prefix) in [("Industry FE", "industry:"), ("Time FE", "period:")] {
        write!(s, "{label:<12}").unwrap();
        for (_, r) in &models {
            write!(s, "{:>16}", fe(r, prefix)).unwrap();
        }
        writeln!(s).unwrap();
    }
    write!(s, "{:<12}", "N").unwrap();
    for (_, r) in &models {
        write!(s, "{:>16}", r.n).unwrap();
    }
    writeln!(s).unwrap();
    write!(s, "{:<12}", "Adj. R2").unwrap();
    for (_, r) in &models {
        write!(s, "{:>16.4}", r.adj_r2).unwrap();
    }
    writeln!(s).unwrap();
    writeln!(s).unwrap();
    writeln!(s, "* p <= 0.05, ** p <= 0.01, *** p <= 0.001").unwrap();
    if reg.baseline.dropped_rows > 0 {
        writeln!(s, "{} row(s) with non-positive BTM removed", reg.baseline.dropped_rows).unwrap();
    }
    for (name, r) in &models {
        if !r.dropped_columns.is_empty() {
            writeln!(s, "{name}: zero-variance columns dropped: {}", r.dropped_columns.join(", ")).unwrap();
        }
    }
    s
}

/// One line per coefficient: `model,regressor,beta,se,t,p,stars`.
pub fn render_risk_csv(reg: &RiskRegression) -> String {
    let mut s = String::from("model,regressor,beta,se,t,p,stars\n");
    let mut models = vec![("fin", &reg.baseline)];
    if let Some(j) = &reg.joint {
        models.push(("fin_mbti", j));
    }
    for (name, r) in models {
        for c in &r.coefficients {
            writeln!(s, "{name},{},{:.10},{:.10},{:.6},{:.6e},{}", c.name, c.beta, c.se, c.t, c.p, c.stars).unwrap();
        }
    }
    s
}

pub fn render_vif_table(entries: &[VifEntry]) -> String {
    let mut s = format!("{:<24}{:>12}\n", "regressor", "VIF");
    for e in entries {
        let v = if e.collinear { "inf (collinear)".to_string() } else { format!("{:.3}", e.value) };
        writeln!(s, "{:<24}{:>12}", e.name, v).unwrap();
    }
    s
}

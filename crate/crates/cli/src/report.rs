use std::fs;
use std::path::{Path, PathBuf};

use crate::config::RunConfig;
use crate::error::{CliResult, WithPath};

/// First line of every artifact the pipeline writes.
pub fn provenance(cfg: &RunConfig) -> String {
    format!("# config={} seed={}\n", cfg.hash(), cfg.seed)
}

/// Writes `body` below the provenance line, creating parent directories.
pub fn write_artifact(cfg: &RunConfig, path: &Path, body: &str) -> CliResult<PathBuf> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).at(parent)?;
    }
    let mut text = provenance(cfg);
    text.push_str(body);
    fs::write(path, text).at(path)?;
    Ok(path.to_path_buf())
}

pub fn write_report(cfg: &RunConfig, name: &str, body: &str) -> CliResult<PathBuf> {
    write_artifact(cfg, &cfg.reports_dir().join(name), body)
}

/// Plain-text table: first column left-aligned, the rest right-aligned.
pub struct TextTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl TextTable {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        TextTable { header: header.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn row<S: Into<String>>(&mut self, cells: impl IntoIterator<Item = S>) {
        self.rows.push(cells.into_iter().map(Into::into).collect());
    }

    pub fn render(&self) -> String {
        let cols = self.header.len();
        let mut width = vec![0usize; cols];
        for r in std::iter::once(&self.header).chain(&self.rows) {
            for (i, c) in r.iter().enumerate().take(cols) {
                width[i] = width[i].max(c.chars().count());
            }
        }
        let line = |r: &[String]| {
            let cells: Vec<String> = (0..cols)
                .map(|i| {
                    let c = r.get(i).map(String::as_str).unwrap_or("");
                    if i == 0 {
                        format!("{c:<w$}", w = width[i])
                    } else {
                        format!("{c:>w$}", w = width[i])
                    }
                })
                .collect();
            cells.join("  ").trim_end().to_string()
        };
        let mut out = line(&self.header);
        out.push('\n');
        out.push_str(&"-".repeat(width.iter().sum::<usize>() + 2 * (cols - 1)));
        out.push('\n');
        for r in &self.rows {
            out.push_str(&line(r));
            out.push('\n');
        }
        out
    }
}

pub fn fmt_opt(v: Option<f64>, digits: usize) -> String {
    v.map_or_else(|| "n/a".to_string(), |x| format!("{x:.digits$}"))
}

/// CSV text from rows of already formatted cells.
pub fn csv_text<S: AsRef<str>>(header: &[&str], rows: impl IntoIterator<Item = Vec<S>>) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r.iter().map(|c| c.as_ref()))?;
    }
    let bytes = w.into_inner().map_err(|e| crate::error::CliError::io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aligned_columns() {
        let mut t = TextTable::new(["Scale", "r"]);
        t.row(["E-I", "0.512"]);
        t.row(["S-N", "-0.1"]);
        assert_eq!(t.render(), "Scale      r\n------------\nE-I    0.512\nS-N     -0.1\n");
    }

    #[test]
    fn provenance_line() {
        let cfg = RunConfig::default();
        let p = provenance(&cfg);
        assert!(p.starts_with("# config=") && p.ends_with(" seed=42\n"));
    }
}

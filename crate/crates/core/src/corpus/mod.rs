//! Earnings-call transcripts: a line-oriented text format, CEO name
//! normalization, per-call CEO documents and Table-style corpus counts.

mod document;
mod manifest;
mod names;
mod parse;
mod stats;

use std::fmt;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

pub use document::{ceo_names, count_sentences, extract_ceo_document, CeoDocument, DocCounts};
pub use manifest::{read_manifest, ManifestEntry};
pub use names::normalize_name;
pub use parse::{parse_transcript, render_transcript, FormatConfig};
pub use stats::{corpus_stats, CorpusStats, UnitStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpeakerRole {
    Ceo,
    Analyst,
    Operator,
    Other,
}

impl SpeakerRole {
    /// Role from the parenthetical tag of a turn line. Unknown tags map to `Other`.
    pub fn from_tag(tag: &str) -> Self {
        match tag.trim().to_ascii_lowercase().as_str() {
            "ceo" => SpeakerRole::Ceo,
            "analyst" => SpeakerRole::Analyst,
            "operator" => SpeakerRole::Operator,
            _ => SpeakerRole::Other,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            SpeakerRole::Ceo => "CEO",
            SpeakerRole::Analyst => "Analyst",
            SpeakerRole::Operator => "Operator",
            SpeakerRole::Other => "Other",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Section {
    Presentation,
    Qa,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Utterance {
    pub speaker_name: String,
    pub speaker_role: SpeakerRole,
    pub section: Section,
    pub text: String,
    pub order_index: usize,
}

/// Fiscal year and quarter, rendered as `2020Q1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FiscalQuarter {
    pub year: i32,
    pub quarter: u8,
}

impl FiscalQuarter {
    pub fn new(year: i32, quarter: u8) -> Option<Self> {
        (1..=4).contains(&quarter).then_some(Self { year, quarter })
    }

    pub fn from_date(date: NaiveDate) -> Self {
        use chrono::Datelike;
        Self { year: date.year(), quarter: (date.month0() / 3 + 1) as u8 }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let (y, q) = s.trim().split_once(['Q', 'q'])?;
        Self::new(y.parse().ok()?, q.parse().ok()?)
    }
}

impl fmt::Display for FiscalQuarter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}Q{}", self.year, self.quarter)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub call_id: String,
    pub company_id: String,
    pub fiscal_quarter: FiscalQuarter,
    pub call_date: NaiveDate,
    pub utterances: Vec<Utterance>,
}

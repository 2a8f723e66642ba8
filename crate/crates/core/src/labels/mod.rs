//! Crowd votes to continuous MBTI scores.
//!
//! Each scale is scored as the share of votes for its right-hand pole:
//! I on E-I, N on S-N, F on T-F and P on J-P.

mod correlation;
mod io;
mod summary;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use correlation::{cross_correlation, CorrelationMatrix};
pub use io::{read_big5_csv, read_labels_csv, read_votes_csv, write_big5_csv, write_labels_csv, write_votes_csv, EntityVotes};
pub use summary::{label_summary, LabelSummary, ScaleSummary, HISTOGRAM_BINS};

/// Default minimum number of votes per scale for a usable profile.
pub const DEFAULT_MIN_VOTES: u64 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Scale {
    EI,
    SN,
    TF,
    JP,
}

impl Scale {
    pub const ALL: [Scale; 4] = [Scale::EI, Scale::SN, Scale::TF, Scale::JP];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Lowercase column name used in CSV files (`ei`, `sn`, ...).
    pub fn key(self) -> &'static str {
        match self {
            Scale::EI => "ei",
            Scale::SN => "sn",
            Scale::TF => "tf",
            Scale::JP => "jp",
        }
    }

    /// Poles as (left, right); the score measures the right pole.
    pub fn poles(self) -> (char, char) {
        match self {
            Scale::EI => ('E', 'I'),
            Scale::SN => ('S', 'N'),
            Scale::TF => ('T', 'F'),
            Scale::JP => ('J', 'P'),
        }
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (l, r) = self.poles();
        write!(f, "{l}-{r}")
    }
}

impl FromStr for Scale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters: String = s.chars().filter(|c| c.is_ascii_alphabetic()).collect::<String>().to_ascii_uppercase();
        match letters.as_str() {
            "EI" => Ok(Scale::EI),
            "SN" => Ok(Scale::SN),
            "TF" => Ok(Scale::TF),
            "JP" => Ok(Scale::JP),
            _ => Err(Error::invalid(format!("unknown MBTI scale `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VoteRecord {
    pub scale: Scale,
    pub votes_left: u64,
    pub votes_right: u64,
}

impl VoteRecord {
    pub fn new(scale: Scale, votes_left: u64, votes_right: u64) -> Self {
        Self { scale, votes_left, votes_right }
    }

    pub fn total(&self) -> u64 {
        self.votes_left + self.votes_right
    }

    pub fn swapped(&self) -> Self {
        Self { scale: self.scale, votes_left: self.votes_right, votes_right: self.votes_left }
    }
}

/// Share of votes for the right-hand pole.
pub fn normalize_votes(v: &VoteRecord) -> Result<f64> {
    let total = v.total();
    if total == 0 {
        return Err(Error::Scale { scale: v.scale, message: "zero total votes".into() });
    }
    Ok(v.votes_right as f64 / total as f64)
}

/// Continuous MBTI profile, every component in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MbtiVector {
    pub ei: f64,
    pub sn: f64,
    pub tf: f64,
    pub jp: f64,
    /// Smallest per-scale vote total of the source records.
    pub total_votes: u64,
}

impl MbtiVector {
    pub fn from_array(values: [f64; 4], total_votes: u64) -> Self {
        Self { ei: values[0], sn: values[1], tf: values[2], jp: values[3], total_votes }
    }

    pub fn get(&self, scale: Scale) -> f64 {
        match scale {
            Scale::EI => self.ei,
            Scale::SN => self.sn,
            Scale::TF => self.tf,
            Scale::JP => self.jp,
        }
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.ei, self.sn, self.tf, self.jp]
    }
}

/// Builds a profile from exactly one record per scale, each with at least
/// `min_votes` votes.
pub fn build_mbti_vector(records: &[VoteRecord], min_votes: u64) -> Result<MbtiVector> {
    let mut values = [f64::NAN; 4];
    let mut seen = [false; 4];
    let mut total = u64::MAX;
    for r in records {
        let i = r.scale.index();
        if seen[i] {
            return Err(Error::Scale { scale: r.scale, message: "duplicate vote record".into() });
        }
        seen[i] = true;
        if r.total() < min_votes.max(1) {
            return Err(Error::Scale {
                scale: r.scale,
                message: format!("{} votes, below the minimum of {min_votes}", r.total()),
            });
        }
        values[i] = normalize_votes(r)?;
        total = total.min(r.total());
    }
    if let Some(missing) = Scale::ALL.iter().find(|s| !seen[s.index()]) {
        return Err(Error::Scale { scale: *missing, message: "no vote record".into() });
    }
    Ok(MbtiVector::from_array(values, total))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Big5Vector {
    pub openness: f64,
    pub conscientiousness: f64,
    pub extraversion: f64,
    pub agreeableness: f64,
    pub neuroticism: f64,
}

impl Big5Vector {
    pub const NAMES: [&'static str; 5] = ["O", "C", "E", "A", "N"];

    pub fn to_array(&self) -> [f64; 5] {
        [self.openness, self.conscientiousness, self.extraversion, self.agreeableness, self.neuroticism]
    }

    pub fn from_array(v: [f64; 5]) -> Self {
        Self { openness: v[0], conscientiousness: v[1], extraversion: v[2], agreeableness: v[3], neuroticism: v[4] }
    }
}

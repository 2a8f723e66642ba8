use serde::{Deserialize, Serialize};

use super::CeoDocument;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitStats {
    pub sum: u64,
    pub mean: f64,
    pub min: u64,
    pub max: u64,
}

impl UnitStats {
    fn from_counts(counts: impl Iterator<Item = u64>) -> Option<Self> {
        let mut n = 0u64;
        let (mut sum, mut min, mut max) = (0u64, u64::MAX, 0u64);
        for c in counts {
            n += 1;
            sum += c;
            min = min.min(c);
            max = max.max(c);
        }
        (n > 0).then(|| Self { sum, mean: sum as f64 / n as f64, min, max })
    }
}

/// Sums, means, minima and maxima of utterance, sentence and token counts
/// across documents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub n_documents: usize,
    pub utterances: UnitStats,
    pub sentences: UnitStats,
    pub tokens: UnitStats,
}

pub fn corpus_stats(docs: &[CeoDocument]) -> Result<CorpusStats> {
    let unit = |f: fn(&CeoDocument) -> usize| {
        UnitStats::from_counts(docs.iter().map(|d| f(d) as u64))
            .ok_or_else(|| Error::invalid("corpus statistics need at least one document"))
    };
    Ok(CorpusStats {
        n_documents: docs.len(),
        utterances: unit(|d| d.counts.n_utterances)?,
        sentences: unit(|d| d.counts.n_sentences)?,
        tokens: unit(|d| d.counts.n_tokens)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::DocCounts;

    fn doc(tokens: usize) -> CeoDocument {
        CeoDocument {
            ceo_name: "A".into(),
            call_id: format!("c{tokens}"),
            text: String::new(),
            counts: DocCounts { n_utterances: 1, n_sentences: 2, n_tokens: tokens },
        }
    }

    #[test]
    fn min_max_sum_mean() {
        let s = corpus_stats(&[doc(22), doc(9968)]).unwrap();
        assert_eq!((s.tokens.min, s.tokens.max, s.tokens.sum), (22, 9968, 9990));
        assert_eq!(s.tokens.mean, 4995.0);
    }

    #[test]
    fn single_document() {
        let s = corpus_stats(&[doc(7)]).unwrap();
        assert_eq!((s.tokens.min, s.tokens.max, s.tokens.sum), (7, 7, 7));
        assert_eq!(s.tokens.mean, 7.0);
    }

    #[test]
    fn empty_rejected() {
        assert!(corpus_stats(&[]).is_err());
    }
}

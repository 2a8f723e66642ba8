use serde::{Deserialize, Serialize};

use super::{normalize_name, SpeakerRole, Transcript};
use crate::features::{tokenize, TokenDoc};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocCounts {
    pub n_utterances: usize,
    pub n_sentences: usize,
    pub n_tokens: usize,
}

/// All utterances of one CEO in one call, one utterance per line of `text`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CeoDocument {
    pub ceo_name: String,
    pub call_id: String,
    pub text: String,
    pub counts: DocCounts,
}

impl CeoDocument {
    pub fn utterances(&self) -> impl Iterator<Item = &str> {
        self.text.lines()
    }

    /// Tokens grouped by utterance, ready for n-gram features.
    pub fn token_doc(&self) -> TokenDoc {
        TokenDoc::from_lines(&self.text)
    }
}

/// Approximate sentence count: a sentence ends at a run of `.`, `!` or `?`
/// followed by whitespace and an uppercase letter or digit.
pub fn count_sentences(text: &str) -> usize {
    if !text.chars().any(char::is_alphanumeric) {
        return 0;
    }
    let chars: Vec<char> = text.chars().collect();
    let mut boundaries = 0;
    let mut i = 0;
    while i < chars.len() {
        if matches!(chars[i], '.' | '!' | '?') {
            let mut j = i;
            while j < chars.len() && matches!(chars[j], '.' | '!' | '?') {
                j += 1;
            }
            let mut k = j;
            while k < chars.len() && chars[k].is_whitespace() {
                k += 1;
            }
            if k > j && k < chars.len() && (chars[k].is_uppercase() || chars[k].is_ascii_digit()) {
                boundaries += 1;
            }
            i = j;
        } else {
            i += 1;
        }
    }
    boundaries + 1
}

/// Collects the CEO's presentation and Q&A utterances in call order.
///
/// Speaker names are compared after [`normalize_name`], ignoring case.
pub fn extract_ceo_document(t: &Transcript, ceo: &str) -> Result<CeoDocument> {
    let wanted = normalize_name(ceo)?;
    let mut canonical: Option<String> = None;
    let mut lines: Vec<&str> = Vec::new();
    let mut n_sentences = 0;
    for u in &t.utterances {
        if u.speaker_role != SpeakerRole::Ceo {
            continue;
        }
        let Ok(name) = normalize_name(&u.speaker_name) else { continue };
        if !name.eq_ignore_ascii_case(&wanted) {
            continue;
        }
        canonical.get_or_insert(name);
        n_sentences += count_sentences(&u.text);
        lines.push(u.text.as_str());
    }
    let ceo_name = canonical.ok_or_else(|| Error::NotFound(format!("CEO `{wanted}` in call {}", t.call_id)))?;
    let text = lines.join("\n");
    let counts = DocCounts { n_utterances: lines.len(), n_sentences, n_tokens: tokenize(&text).len() };
    Ok(CeoDocument { ceo_name, call_id: t.call_id.clone(), text, counts })
}

/// Distinct normalized names of CEO-role speakers, in order of appearance.
pub fn ceo_names(t: &Transcript) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for u in &t.utterances {
        if u.speaker_role == SpeakerRole::Ceo {
            if let Ok(n) = normalize_name(&u.speaker_name) {
                if !out.iter().any(|o| o.eq_ignore_ascii_case(&n)) {
                    out.push(n);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{parse_transcript, FormatConfig};

    fn sample() -> Transcript {
        let raw = "#call_id: C1\n#company: ACME\n#date: 2021-02-03\n#quarter: 2020Q4\n\
Dr. Jane Q. Roe (CEO): Welcome everyone. We grew 20% this year.\n\
Sam Analyst (Analyst): How about costs?\n\
Jane Roe (CEO): Costs fell! Margins rose.\n\
== QA ==\n\
Sam Analyst (Analyst): And guidance?\n\
Jane Roe (CEO): We expect growth. 2022 looks strong.\n\
Bob Other (CEO): I am the other CEO.\n";
        parse_transcript(raw, &FormatConfig::default()).unwrap()
    }

    #[test]
    fn collects_ceo_turns_in_order() {
        let d = extract_ceo_document(&sample(), "Jane Roe").unwrap();
        assert_eq!(d.counts.n_utterances, 3);
        assert_eq!(d.ceo_name, "Jane Roe");
        assert!(d.text.starts_with("Welcome everyone."));
        assert_eq!(d.utterances().count(), 3);
        assert_eq!(d.counts.n_sentences, 6);
        assert_eq!(d.counts.n_tokens, tokenize(&d.text).len());
        assert_eq!(d.counts.n_tokens, d.token_doc().n_tokens());
    }

    #[test]
    fn match_after_initial_stripping() {
        let d = extract_ceo_document(&sample(), "Jane X. Roe").unwrap();
        assert_eq!(d.counts.n_utterances, 3);
        let d = extract_ceo_document(&sample(), "jane roe").unwrap();
        assert_eq!(d.ceo_name, "Jane Roe");
    }

    #[test]
    fn unknown_name_not_found() {
        assert!(matches!(extract_ceo_document(&sample(), "Nobody Here"), Err(Error::NotFound(_))));
        // analysts are never CEO documents
        assert!(extract_ceo_document(&sample(), "Sam Analyst").is_err());
    }

    #[test]
    fn lists_ceo_names() {
        assert_eq!(ceo_names(&sample()), vec!["Jane Roe", "Bob Other"]);
    }

    #[test]
    fn sentence_rules() {
        assert_eq!(count_sentences("One. Two! Three? four"), 3);
        assert_eq!(count_sentences("Revenue was 3.5 billion. 2021 was better."), 2);
        assert_eq!(count_sentences("Wait... What?! Yes."), 3);
        assert_eq!(count_sentences("no terminator"), 1);
        assert_eq!(count_sentences("..."), 0);
    }
}

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::lexicon::{FIRST_NAMES, LAST_NAMES, POLE_CATEGORIES};
use super::market::Call;
use super::{PoleLexicon, SynthCeo, SynthConfig};
use crate::corpus::{FiscalQuarter, Section, SpeakerRole, Transcript, Utterance};
use crate::labels::Scale;

const ANALYSTS: &[&str] = &["Alex Morgan", "Priya Raman", "Tom Becker", "Hannah Cole", "Luis Ortega", "Mei Chen"];

/// Distinct canonical names with their transcript spelling, which sometimes
/// adds a title or a middle initial. `n` must not exceed [`max_names`].
pub(crate) fn unique_names(rng: &mut ChaCha8Rng, n: usize) -> Vec<(String, String)> {
    let (nf, nl) = (FIRST_NAMES.len(), LAST_NAMES.len());
    let mut combos: Vec<(usize, Option<usize>, usize)> = if n <= nf * nl {
        (0..nf).flat_map(|f| (0..nl).map(move |l| (f, None, l))).collect()
    } else {
        (0..nf).flat_map(|f| (0..nf).flat_map(move |m| (0..nl).map(move |l| (f, Some(m), l)))).collect()
    };
    combos.shuffle(rng);
    combos
        .into_iter()
        .take(n)
        .map(|(f, m, l)| {
            let mut canonical = FIRST_NAMES[f].to_string();
            if let Some(m) = m {
                canonical = format!("{canonical} {}", FIRST_NAMES[m]);
            }
            canonical = format!("{canonical} {}", LAST_NAMES[l]);
            let display = match rng.random_range(0..6) {
                0 => format!("Dr. {canonical}"),
                1 => {
                    let initial = (b'A' + rng.random_range(0..26u8)) as char;
                    let (first, rest) = canonical.split_once(' ').expect("two-part name");
                    format!("{first} {initial}. {rest}")
                }
                _ => canonical.clone(),
            };
            (canonical, display)
        })
        .collect()
}

pub(crate) fn max_names() -> usize {
    FIRST_NAMES.len() * FIRST_NAMES.len() * LAST_NAMES.len()
}

fn ceo_tokens(cfg: &SynthConfig, ceo: &SynthCeo, rng: &mut ChaCha8Rng) -> Vec<String> {
    (0..cfg.doc_length)
        .map(|_| {
            if rng.random_bool(cfg.signal_share) {
                let s = Scale::ALL[rng.random_range(0..4)];
                let lex = &cfg.lexicons[s.index()];
                let pool = if rng.random_bool(ceo.traits.get(s)) { &lex.right } else { &lex.left };
                pool[rng.random_range(0..pool.len())].clone()
            } else {
                cfg.generic_vocabulary[rng.random_range(0..cfg.generic_vocabulary.len())].clone()
            }
        })
        .collect()
}

fn sentences(tokens: &[String], rng: &mut ChaCha8Rng) -> String {
    let mut out = String::new();
    let mut i = 0;
    while i < tokens.len() {
        let len = rng.random_range(8..=16).min(tokens.len() - i);
        if !out.is_empty() {
            out.push(' ');
        }
        for (k, t) in tokens[i..i + len].iter().enumerate() {
            if k == 0 {
                let mut c = t.chars();
                let first = c.next().expect("non-empty token");
                out.extend(first.to_uppercase());
                out.push_str(c.as_str());
            } else {
                out.push(' ');
                out.push_str(t);
            }
        }
        out.push('.');
        i += len;
    }
    out
}

fn generic_text(cfg: &SynthConfig, n: usize, rng: &mut ChaCha8Rng) -> String {
    let tokens: Vec<String> = (0..n)
        .map(|_| cfg.generic_vocabulary[rng.random_range(0..cfg.generic_vocabulary.len())].clone())
        .collect();
    sentences(&tokens, rng)
}

pub(crate) fn gen_transcripts(cfg: &SynthConfig, ceos: &[SynthCeo], calls: &[Call], rng: &mut ChaCha8Rng) -> Vec<Transcript> {
    calls
        .iter()
        .map(|call| {
            let ceo = &ceos[call.ceo];
            let tokens = ceo_tokens(cfg, ceo, rng);
            let turns = cfg.ceo_turns;
            let presentation_turns = turns.div_ceil(2);
            let mut utterances = Vec::new();
            let mut push = |name: &str, role: SpeakerRole, section: Section, text: String| {
                let order_index = utterances.len();
                utterances.push(Utterance { speaker_name: name.to_string(), speaker_role: role, section, text, order_index });
            };
            push(
                "Operator",
                SpeakerRole::Operator,
                Section::Presentation,
                format!("Good day and welcome to the {} earnings conference call.", ceo.company_id),
            );
            let per = tokens.len() / turns;
            let extra = tokens.len() % turns;
            let mut at = 0;
            for k in 0..turns {
                let len = per + usize::from(k < extra);
                let text = sentences(&tokens[at..at + len], rng);
                at += len;
                if text.is_empty() {
                    continue;
                }
                let section = if k < presentation_turns { Section::Presentation } else { Section::Qa };
                if section == Section::Qa {
                    let analyst = ANALYSTS[rng.random_range(0..ANALYSTS.len())];
                    let q = generic_text(cfg, rng.random_range(12..30), rng);
                    push(analyst, SpeakerRole::Analyst, Section::Qa, q);
                }
                push(&ceo.display_name, SpeakerRole::Ceo, section, text);
            }
            push("Operator", SpeakerRole::Operator, Section::Qa, "This concludes today's call.".into());
            Transcript {
                call_id: call.call_id.clone(),
                company_id: ceo.company_id.clone(),
                fiscal_quarter: FiscalQuarter::from_date(call.date),
                call_date: call.date,
                utterances,
            }
        })
        .collect()
}

/// `.dic` source with one category per pole and the lexicon words as literal entries.
pub fn dictionary_source(lexicons: &[PoleLexicon]) -> String {
    let mut s = String::from("%\n");
    for (i, (l, r)) in POLE_CATEGORIES.iter().enumerate() {
        writeln!(s, "{}\t{l}", 2 * i + 1).unwrap();
        writeln!(s, "{}\t{r}", 2 * i + 2).unwrap();
    }
    s.push_str("%\n");
    for (i, lex) in lexicons.iter().enumerate() {
        for w in &lex.left {
            writeln!(s, "{w}\t{}", 2 * i + 1).unwrap();
        }
        for w in &lex.right {
            writeln!(s, "{w}\t{}", 2 * i + 2).unwrap();
        }
    }
    s
}

use std::fmt::Write;

use chrono::NaiveDate;

use super::{FiscalQuarter, Section, SpeakerRole, Transcript, Utterance};
use crate::{Error, Result};

/// Knobs of the transcript text format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormatConfig {
    /// A line equal to this (after trimming) opens the Q&A section.
    pub qa_marker: String,
}

impl Default for FormatConfig {
    fn default() -> Self {
        Self { qa_marker: "== QA ==".to_string() }
    }
}

#[derive(Default)]
struct Header {
    call_id: Option<String>,
    company: Option<String>,
    date: Option<NaiveDate>,
    quarter: Option<FiscalQuarter>,
}

struct OpenTurn {
    name: String,
    role: SpeakerRole,
    section: Section,
    parts: Vec<String>,
    line: usize,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn parse_header_line(header: &mut Header, line_no: usize, line: &str) -> Result<()> {
    let body = &line[1..];
    let (key, value) = body
        .split_once(':')
        .ok_or_else(|| parse_err(line_no, "header line must be `#key: value`"))?;
    let (key, value) = (key.trim(), value.trim());
    if value.is_empty() {
        return Err(parse_err(line_no, format!("header `{key}` has an empty value")));
    }
    fn set<T>(slot: &mut Option<T>, v: T, key: &str, line_no: usize) -> Result<()> {
        if slot.replace(v).is_some() {
            return Err(parse_err(line_no, format!("duplicate header `{key}`")));
        }
        Ok(())
    }
    match key {
        "call_id" => set(&mut header.call_id, value.to_string(), key, line_no),
        "company" => set(&mut header.company, value.to_string(), key, line_no),
        "date" => {
            let d = NaiveDate::parse_from_str(value, "%Y-%m-%d")
                .map_err(|_| parse_err(line_no, format!("bad date `{value}`, expected YYYY-MM-DD")))?;
            set(&mut header.date, d, key, line_no)
        }
        "quarter" => {
            let q = FiscalQuarter::parse(value)
                .ok_or_else(|| parse_err(line_no, format!("bad quarter `{value}`, expected YYYYQn")))?;
            set(&mut header.quarter, q, key, line_no)
        }
        // Unknown keys are tolerated so vendors can add metadata.
        _ => Ok(()),
    }
}

fn parse_turn_line(line_no: usize, line: &str) -> Result<(String, SpeakerRole, String)> {
    let (head, text) = line
        .split_once(':')
        .ok_or_else(|| parse_err(line_no, "expected `Name (Role): text`"))?;
    let head = head.trim();
    let (name, role) = match head.strip_suffix(')').and_then(|h| h.rsplit_once('(')) {
        Some((name, tag)) => (name.trim(), SpeakerRole::from_tag(tag)),
        None => (head, SpeakerRole::Other),
    };
    if name.is_empty() || name.contains(['(', ')']) {
        return Err(parse_err(line_no, format!("bad speaker `{head}`")));
    }
    Ok((name.to_string(), role, text.trim().to_string()))
}

fn close_turn(turn: OpenTurn, out: &mut Vec<Utterance>) -> Result<()> {
    let text = turn.parts.join(" ");
    if text.trim().is_empty() {
        return Err(parse_err(turn.line, format!("empty utterance by {}", turn.name)));
    }
    out.push(Utterance {
        speaker_name: turn.name,
        speaker_role: turn.role,
        section: turn.section,
        text,
        order_index: out.len(),
    });
    Ok(())
}

/// Parses the line-oriented transcript format.
///
/// Header lines (`#call_id:`, `#company:`, `#date:`, `#quarter:`) come first.
/// Every `Name (Role): text` line opens a turn; indented lines continue it.
/// Turns before the Q&A marker line belong to the presentation.
pub fn parse_transcript(raw: &str, cfg: &FormatConfig) -> Result<Transcript> {
    let mut header = Header::default();
    let mut utterances = Vec::new();
    let mut open: Option<OpenTurn> = None;
    let mut section = Section::Presentation;
    let mut in_body = false;

    for (idx, line) in raw.lines().enumerate() {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        if line.starts_with('#') {
            if in_body {
                return Err(parse_err(line_no, "header line after the first turn"));
            }
            parse_header_line(&mut header, line_no, line)?;
            continue;
        }
        in_body = true;
        if line.trim() == cfg.qa_marker {
            if let Some(turn) = open.take() {
                close_turn(turn, &mut utterances)?;
            }
            section = Section::Qa;
            continue;
        }
        if line.starts_with([' ', '\t']) {
            let turn = open
                .as_mut()
                .ok_or_else(|| parse_err(line_no, "continuation line without a speaker"))?;
            turn.parts.push(line.trim().to_string());
            continue;
        }
        let (name, role, text) = parse_turn_line(line_no, line)?;
        if let Some(turn) = open.take() {
            close_turn(turn, &mut utterances)?;
        }
        let parts = if text.is_empty() { Vec::new() } else { vec![text] };
        open = Some(OpenTurn { name, role, section, parts, line: line_no });
    }
    if let Some(turn) = open.take() {
        close_turn(turn, &mut utterances)?;
    }

    let call_id = header.call_id.ok_or(Error::MissingHeader("call_id"))?;
    let company_id = header.company.ok_or(Error::MissingHeader("company"))?;
    let call_date = header.date.ok_or(Error::MissingHeader("date"))?;
    let fiscal_quarter = header.quarter.ok_or(Error::MissingHeader("quarter"))?;
    if utterances.is_empty() {
        return Err(Error::EmptyTranscript(call_id));
    }
    Ok(Transcript { call_id, company_id, fiscal_quarter, call_date, utterances })
}

/// Inverse of [`parse_transcript`] for transcripts whose utterance text holds
/// no line breaks and whose sections never return from Q&A to presentation.
pub fn render_transcript(t: &Transcript, cfg: &FormatConfig) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "#call_id: {}", t.call_id);
    let _ = writeln!(out, "#company: {}", t.company_id);
    let _ = writeln!(out, "#date: {}", t.call_date.format("%Y-%m-%d"));
    let _ = writeln!(out, "#quarter: {}", t.fiscal_quarter);
    let mut in_qa = false;
    for u in &t.utterances {
        if u.section == Section::Qa && !in_qa {
            let _ = writeln!(out, "{}", cfg.qa_marker);
            in_qa = true;
        }
        let _ = writeln!(out, "{} ({}): {}", u.speaker_name, u.speaker_role.tag(), u.text);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_TURNS: &str = "#call_id: TSLA-2020Q1\n#company: TSLA\n#date: 2020-04-29\n#quarter: 2020Q1\n\
Elon Musk (CEO): Thank you. So Q1 ended up being a strong quarter.\n\
Jane Doe (Analyst): What about margins?\n";

    #[test]
    fn two_turn_dialogue() {
        let t = parse_transcript(TWO_TURNS, &FormatConfig::default()).unwrap();
        assert_eq!(t.call_id, "TSLA-2020Q1");
        assert_eq!(t.fiscal_quarter, FiscalQuarter { year: 2020, quarter: 1 });
        assert_eq!(t.utterances.len(), 2);
        assert_eq!(t.utterances[0].speaker_role, SpeakerRole::Ceo);
        assert_eq!(t.utterances[1].speaker_role, SpeakerRole::Analyst);
        assert!(t.utterances.iter().all(|u| u.section == Section::Presentation));
    }

    #[test]
    fn qa_marker_and_continuations() {
        let raw = format!("{TWO_TURNS}== QA ==\nOperator (Operator): Next question.\nElon Musk (CEO): We have\n   learned a lot.\n\tReally.\nNo Tag: plain\n");
        let t = parse_transcript(&raw, &FormatConfig::default()).unwrap();
        assert_eq!(t.utterances.len(), 5);
        assert_eq!(t.utterances[2].section, Section::Qa);
        assert_eq!(t.utterances[3].text, "We have learned a lot. Really.");
        assert_eq!(t.utterances[4].speaker_role, SpeakerRole::Other);
        assert_eq!(t.utterances[4].speaker_name, "No Tag");
        let order: Vec<usize> = t.utterances.iter().map(|u| u.order_index).collect();
        assert_eq!(order, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn custom_marker() {
        let raw = format!("{TWO_TURNS}--- Q&A ---\nElon Musk (CEO): Sure.\n");
        let cfg = FormatConfig { qa_marker: "--- Q&A ---".into() };
        let t = parse_transcript(&raw, &cfg).unwrap();
        assert_eq!(t.utterances[2].section, Section::Qa);
    }

    #[test]
    fn missing_call_id() {
        let raw = TWO_TURNS.replacen("#call_id: TSLA-2020Q1\n", "", 1);
        assert!(matches!(
            parse_transcript(&raw, &FormatConfig::default()),
            Err(Error::MissingHeader("call_id"))
        ));
    }

    #[test]
    fn malformed_header_reports_line() {
        let raw = TWO_TURNS.replace("#date: 2020-04-29", "#date: 2020-13-45");
        match parse_transcript(&raw, &FormatConfig::default()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        let raw = TWO_TURNS.replace("#quarter: 2020Q1", "#quarter 2020Q1");
        assert!(matches!(parse_transcript(&raw, &FormatConfig::default()), Err(Error::Parse { line: 4, .. })));
    }

    #[test]
    fn zero_utterances() {
        let raw = "#call_id: X\n#company: C\n#date: 2020-01-01\n#quarter: 2020Q1\n== QA ==\n";
        assert!(matches!(parse_transcript(raw, &FormatConfig::default()), Err(Error::EmptyTranscript(_))));
    }

    #[test]
    fn malformed_turns() {
        let base = "#call_id: X\n#company: C\n#date: 2020-01-01\n#quarter: 2020Q1\n";
        for (body, line) in [("no colon here\n", 5), ("  orphan continuation\n", 5), ("A (CEO):\nB (CEO): hi\n", 5)] {
            match parse_transcript(&format!("{base}{body}"), &FormatConfig::default()) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{body}"),
                other => panic!("{body}: {other:?}"),
            }
        }
    }

    #[test]
    fn render_round_trips() {
        let raw = format!("{TWO_TURNS}== QA ==\nElon Musk (CEO): Yes: really.\n");
        let t = parse_transcript(&raw, &FormatConfig::default()).unwrap();
        let back = parse_transcript(&render_transcript(&t, &FormatConfig::default()), &FormatConfig::default()).unwrap();
        assert_eq!(back, t);
    }
}

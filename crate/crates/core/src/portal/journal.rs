//! Session journal format.
//!
//! ```text
//! session<TAB>id<TAB>ontology<TAB>instance
//! <ISO8601 UTC><TAB>class<TAB>ClassName
//! <ISO8601 UTC><TAB>set<TAB>prop<TAB>value
//! ```
//! Every line ends with LF. Data values use the HFS literal syntax, object
//! values are individual names.

use chrono::{DateTime, SecondsFormat, Utc};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JournalHeader {
    pub id: String,
    pub ontology: String,
    pub instance: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EventKind {
    Class(String),
    Set { prop: String, value: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JournalEvent {
    /// 1-based line number in the journal text.
    pub line: usize,
    pub at: DateTime<Utc>,
    pub kind: EventKind,
}

pub fn now() -> DateTime<Utc> {
    Utc::now()
}

fn stamp(at: &DateTime<Utc>) -> String {
    at.to_rfc3339_opts(SecondsFormat::Millis, true)
}

pub fn header_line(h: &JournalHeader) -> String {
    format!("session\t{}\t{}\t{}\n", h.id, h.ontology, h.instance)
}

pub fn event_line(at: &DateTime<Utc>, kind: &EventKind) -> String {
    match kind {
        EventKind::Class(c) => format!("{}\tclass\t{c}\n", stamp(at)),
        EventKind::Set { prop, value } => format!("{}\tset\t{prop}\t{value}\n", stamp(at)),
    }
}

fn corrupt(line: usize, message: impl Into<String>) -> Error {
    Error::Journal {
        line,
        message: message.into(),
    }
}

/// Splits a journal into its header and events, checking only the line
/// structure; semantic checks happen during replay.
pub fn parse_journal(text: &str) -> Result<(JournalHeader, Vec<JournalEvent>)> {
    if text.is_empty() {
        return Err(corrupt(1, "missing header"));
    }
    let lines: Vec<&str> = text.split('\n').collect();
    // a complete journal ends with LF, leaving one empty trailing piece
    let (last, complete) = lines.split_last().expect("split yields at least one piece");
    if !last.is_empty() {
        return Err(corrupt(lines.len(), "truncated line"));
    }

    let fields: Vec<&str> = complete[0].split('\t').collect();
    let header = match fields.as_slice() {
        ["session", id, ontology, instance] if !id.is_empty() && !ontology.is_empty() && !instance.is_empty() => {
            JournalHeader {
                id: id.to_string(),
                ontology: ontology.to_string(),
                instance: instance.to_string(),
            }
        }
        _ => return Err(corrupt(1, "malformed header")),
    };

    let mut events = Vec::new();
    for (k, raw) in complete.iter().enumerate().skip(1) {
        let line = k + 1;
        let fields: Vec<&str> = raw.split('\t').collect();
        let at = fields
            .first()
            .and_then(|ts| DateTime::parse_from_rfc3339(ts).ok())
            .ok_or_else(|| corrupt(line, "invalid timestamp"))?
            .with_timezone(&Utc);
        let kind = match fields.as_slice() {
            [_, "class", c] if !c.is_empty() => EventKind::Class(c.to_string()),
            [_, "set", p, v] if !p.is_empty() && !v.is_empty() => EventKind::Set {
                prop: p.to_string(),
                value: v.to_string(),
            },
            _ => return Err(corrupt(line, "malformed event")),
        };
        events.push(JournalEvent { line, at, kind });
    }
    Ok((header, events))
}

#[cfg(test)]
mod tests {
    use super::*;

    const OK: &str = "session\tabc\tonc\tcase_1\n\
        2026-01-02T03:04:05.000Z\tclass\tElderlyPatient\n\
        2026-01-02T03:04:06.000Z\tset\tage\t76\n";

    #[test]
    fn round_trips_lines() {
        let (h, ev) = parse_journal(OK).unwrap();
        assert_eq!(h.instance, "case_1");
        assert_eq!(ev.len(), 2);
        let mut text = header_line(&h);
        for e in &ev {
            text.push_str(&event_line(&e.at, &e.kind));
        }
        assert_eq!(text, OK);
    }

    #[test]
    fn header_only_is_valid() {
        let (_, ev) = parse_journal("session\ta\tb\tc\n").unwrap();
        assert!(ev.is_empty());
    }

    #[test]
    fn truncated_last_line_reports_its_number() {
        let text = &OK[..OK.len() - 1];
        match parse_journal(text) {
            Err(Error::Journal { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn malformed_lines() {
        for (text, want) in [
            ("", 1),
            ("nope\n", 1),
            ("session\ta\tb\tc\nxx\tset\tage\t1\n", 2),
            ("session\ta\tb\tc\n2026-01-02T03:04:05Z\tget\tage\t1\n", 2),
            ("session\ta\tb\tc\n2026-01-02T03:04:05Z\tset\tage\n", 2),
        ] {
            match parse_journal(text) {
                Err(Error::Journal { line, .. }) => assert_eq!(line, want, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }
}

//! XES (XML event log) reading and writing.
//!
//! One `<trace>` per case with `concept:name` set to the case id, one
//! `<event>` per event with `concept:name` set to the activity and
//! `time:timestamp` in ISO-8601 with an explicit UTC offset. Other attributes
//! keep their XES type. Reading is the exact inverse of writing; attribute
//! kinds this crate does not interpret are kept as opaque values (their
//! nested children are dropped).

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use abspm_core::chrono::{DateTime, NaiveDate, NaiveDateTime, Timelike};
use abspm_core::log::{AttrValue, Event, EventLog, Extension, LogMetadata, Trace};
use quick_xml::escape::escape;
use quick_xml::events::{BytesStart, Event as XmlEvent};
use quick_xml::Reader;

use crate::error::{Error, Result};

const CONCEPT_NAME: &str = "concept:name";
const TIMESTAMP: &str = "time:timestamp";
const BASE_DATE: &str = "abspm:base_date";
const CONFIG_DIGEST: &str = "abspm:config_digest";
const EMPTY_AFTER_FILTER: &str = "abspm:empty_after_filter";

const STANDARD_EXTENSIONS: [(&str, &str, &str); 2] = [
    ("Concept", "concept", "http://www.xes-standard.org/concept.xesext"),
    ("Time", "time", "http://www.xes-standard.org/time.xesext"),
];

pub fn format_timestamp(ts: NaiveDateTime) -> String {
    if ts.nanosecond().is_multiple_of(1_000_000) {
        ts.format("%Y-%m-%dT%H:%M:%S%.3f+00:00").to_string()
    } else {
        ts.format("%Y-%m-%dT%H:%M:%S%.9f+00:00").to_string()
    }
}

pub fn parse_timestamp(s: &str) -> Option<NaiveDateTime> {
    DateTime::parse_from_rfc3339(s.trim()).ok().map(|d| d.naive_utc())
}

/// Escapes markup characters and the whitespace that attribute-value
/// normalisation would otherwise turn into spaces.
fn escape_attr(s: &str) -> String {
    escape(s)
        .replace('\t', "&#9;")
        .replace('\n', "&#10;")
        .replace('\r', "&#13;")
}

fn attribute(out: &mut String, indent: usize, key: &str, value: &AttrValue) {
    let (tag, text) = match value {
        AttrValue::Str(s) => ("string", s.clone()),
        AttrValue::Int(i) => ("int", i.to_string()),
        AttrValue::Float(f) => ("float", f.to_string()),
        AttrValue::Bool(b) => ("boolean", b.to_string()),
        AttrValue::Date(d) => ("date", format_timestamp(*d)),
        AttrValue::Id(s) => ("id", s.clone()),
        AttrValue::Opaque { tag, value } => (tag.as_str(), value.clone()),
    };
    let _ = writeln!(
        out,
        "{:indent$}<{tag} key=\"{}\" value=\"{}\"/>",
        "",
        escape_attr(key),
        escape_attr(&text)
    );
}

/// Serialises `log` as an XES document.
pub fn to_xes_string(log: &EventLog) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str("<log xes.version=\"1.0\" xes.features=\"nested-attributes\" xmlns=\"http://www.xes-standard.org/\">\n");
    let standard = STANDARD_EXTENSIONS
        .iter()
        .map(|&(n, p, u)| (n.to_string(), p.to_string(), u.to_string()));
    let extra = log
        .metadata
        .extensions
        .iter()
        .map(|e| (e.name.clone(), e.prefix.clone(), e.uri.clone()));
    for (name, prefix, uri) in standard.chain(extra) {
        let _ = writeln!(
            out,
            "  <extension name=\"{}\" prefix=\"{}\" uri=\"{}\"/>",
            escape(name.as_str()),
            escape(prefix.as_str()),
            escape(uri.as_str())
        );
    }
    out.push_str("  <classifier name=\"Activity\" keys=\"concept:name\"/>\n");

    let meta = &log.metadata;
    if !meta.name.is_empty() {
        attribute(&mut out, 2, CONCEPT_NAME, &AttrValue::Str(meta.name.clone()));
    }
    if let Some(d) = meta.base_date {
        attribute(
            &mut out,
            2,
            BASE_DATE,
            &AttrValue::Str(d.format("%Y-%m-%d").to_string()),
        );
    }
    if let Some(d) = &meta.config_digest {
        attribute(&mut out, 2, CONFIG_DIGEST, &AttrValue::Str(d.clone()));
    }
    if meta.empty_after_filter {
        attribute(&mut out, 2, EMPTY_AFTER_FILTER, &AttrValue::Bool(true));
    }
    for (k, v) in &meta.extra {
        attribute(&mut out, 2, k, v);
    }

    for trace in &log.traces {
        out.push_str("  <trace>\n");
        attribute(&mut out, 4, CONCEPT_NAME, &AttrValue::Str(trace.case_id.clone()));
        for (k, v) in &trace.attributes {
            attribute(&mut out, 4, k, v);
        }
        for event in &trace.events {
            out.push_str("    <event>\n");
            attribute(&mut out, 6, CONCEPT_NAME, &AttrValue::Str(event.activity.clone()));
            attribute(&mut out, 6, TIMESTAMP, &AttrValue::Date(event.timestamp));
            for (k, v) in &event.attributes {
                attribute(&mut out, 6, k, v);
            }
            out.push_str("    </event>\n");
        }
        out.push_str("  </trace>\n");
    }
    out.push_str("</log>\n");
    out
}

pub fn write_xes(log: &EventLog, path: &Path) -> Result<()> {
    fs::write(path, to_xes_string(log)).map_err(|e| Error::io(path, e))
}

pub fn read_xes(path: &Path) -> Result<EventLog> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_xes(&text, path)
}

enum Scope {
    Log,
    Trace {
        case_id: Option<String>,
        events: Vec<Event>,
        attributes: std::collections::BTreeMap<String, AttrValue>,
    },
    Event {
        activity: Option<String>,
        timestamp: Option<NaiveDateTime>,
        attributes: std::collections::BTreeMap<String, AttrValue>,
    },
}

struct Parser<'a> {
    text: &'a str,
    path: &'a Path,
}

impl Parser<'_> {
    fn line_at(&self, pos: u64) -> u64 {
        let end = (pos as usize).min(self.text.len());
        self.text.as_bytes()[..end]
            .iter()
            .filter(|&&b| b == b'\n')
            .count() as u64
            + 1
    }

    fn err(&self, pos: u64, msg: impl Into<String>) -> Error {
        Error::parse(self.path, self.line_at(pos), msg)
    }

    fn attrs(&self, e: &BytesStart, pos: u64) -> Result<Vec<(String, String)>> {
        e.attributes()
            .map(|a| {
                let a = a.map_err(|err| self.err(pos, err.to_string()))?;
                let key = String::from_utf8_lossy(a.key.as_ref()).into_owned();
                let value = a.unescape_value().map_err(|err| self.err(pos, err.to_string()))?;
                Ok((key, value.into_owned()))
            })
            .collect()
    }

    fn typed_attribute(&self, e: &BytesStart, pos: u64) -> Result<(String, AttrValue)> {
        let tag = String::from_utf8_lossy(e.name().as_ref()).into_owned();
        let attrs = self.attrs(e, pos)?;
        let get = |name: &str| attrs.iter().find(|(k, _)| k == name).map(|(_, v)| v.clone());
        let key = get("key").ok_or_else(|| self.err(pos, format!("<{tag}> without key")))?;
        let raw = get("value").unwrap_or_default();
        let bad = || self.err(pos, format!("<{tag} key=\"{key}\"> has invalid value `{raw}`"));
        let value = match tag.as_str() {
            "string" => AttrValue::Str(raw.clone()),
            "int" => AttrValue::Int(raw.trim().parse().map_err(|_| bad())?),
            "float" => AttrValue::Float(raw.trim().parse().map_err(|_| bad())?),
            "boolean" => AttrValue::Bool(raw.trim().parse().map_err(|_| bad())?),
            "date" => AttrValue::Date(parse_timestamp(&raw).ok_or_else(bad)?),
            "id" => AttrValue::Id(raw.clone()),
            _ => AttrValue::Opaque {
                tag: tag.clone(),
                value: raw.clone(),
            },
        };
        Ok((key, value))
    }

    fn parse(&self) -> Result<EventLog> {
        let mut reader = Reader::from_str(self.text);
        reader.config_mut().trim_text(true);
        let mut stack: Vec<Scope> = Vec::new();
        let mut meta = LogMetadata::default();
        let mut traces = Vec::new();
        let mut seen_log = false;

        loop {
            let ev = reader
                .read_event()
                .map_err(|e| self.err(reader.error_position(), e.to_string()))?;
            // End of the element just read, so errors point at its line.
            let pos = reader.buffer_position();
            let (start, is_empty) = match &ev {
                XmlEvent::Start(e) => (Some(e.clone()), false),
                XmlEvent::Empty(e) => (Some(e.clone()), true),
                XmlEvent::End(_) => {
                    match stack.pop() {
                        Some(Scope::Event {
                            activity,
                            timestamp,
                            attributes,
                        }) => {
                            let activity =
                                activity.ok_or_else(|| self.err(pos, "event without concept:name"))?;
                            let timestamp =
                                timestamp.ok_or_else(|| self.err(pos, "event without time:timestamp"))?;
                            match stack.last_mut() {
                                Some(Scope::Trace { events, .. }) => events.push(Event {
                                    activity,
                                    timestamp,
                                    attributes,
                                }),
                                _ => return Err(self.err(pos, "event outside a trace")),
                            }
                        }
                        Some(Scope::Trace {
                            case_id,
                            events,
                            attributes,
                        }) => {
                            let case_id =
                                case_id.ok_or_else(|| self.err(pos, "trace without concept:name"))?;
                            traces.push(Trace {
                                case_id,
                                events,
                                attributes,
                            });
                        }
                        Some(Scope::Log) | None => {}
                    }
                    continue;
                }
                XmlEvent::Eof => break,
                _ => continue,
            };
            let e = start.expect("start element");
            let name = String::from_utf8_lossy(e.name().as_ref()).into_owned();

            match (stack.last_mut(), name.as_str()) {
                (None, "log") if !seen_log => {
                    seen_log = true;
                    if !is_empty {
                        stack.push(Scope::Log);
                    }
                }
                (None, _) => return Err(self.err(pos, format!("expected <log>, found <{name}>"))),
                (Some(Scope::Log), "extension") => {
                    let attrs = self.attrs(&e, pos)?;
                    let get = |n: &str| {
                        attrs
                            .iter()
                            .find(|(k, _)| k == n)
                            .map(|(_, v)| v.clone())
                            .unwrap_or_default()
                    };
                    let prefix = get("prefix");
                    if !STANDARD_EXTENSIONS.iter().any(|(_, p, _)| *p == prefix) {
                        meta.extensions.push(Extension {
                            name: get("name"),
                            prefix,
                            uri: get("uri"),
                        });
                    }
                    if !is_empty {
                        reader
                            .read_to_end(e.name())
                            .map_err(|err| self.err(pos, err.to_string()))?;
                    }
                }
                (Some(Scope::Log), "global" | "classifier") => {
                    if !is_empty {
                        reader
                            .read_to_end(e.name())
                            .map_err(|err| self.err(pos, err.to_string()))?;
                    }
                }
                (Some(Scope::Log), "trace") => {
                    if is_empty {
                        return Err(self.err(pos, "trace without concept:name"));
                    }
                    stack.push(Scope::Trace {
                        case_id: None,
                        events: Vec::new(),
                        attributes: Default::default(),
                    });
                }
                (Some(Scope::Log), "event") => return Err(self.err(pos, "event outside a trace")),
                (Some(Scope::Trace { .. }), "event") => {
                    if is_empty {
                        return Err(self.err(pos, "event without concept:name"));
                    }
                    stack.push(Scope::Event {
                        activity: None,
                        timestamp: None,
                        attributes: Default::default(),
                    });
                }
                (Some(Scope::Trace { .. } | Scope::Event { .. }), "trace") => {
                    return Err(self.err(pos, "nested <trace>"))
                }
                (Some(Scope::Event { .. }), "event") => return Err(self.err(pos, "nested <event>")),
                (Some(scope), _) => {
                    let (key, value) = self.typed_attribute(&e, pos)?;
                    if !is_empty {
                        reader
                            .read_to_end(e.name())
                            .map_err(|err| self.err(pos, err.to_string()))?;
                    }
                    match scope {
                        Scope::Log => match (key.as_str(), value) {
                            (CONCEPT_NAME, AttrValue::Str(s)) => meta.name = s,
                            (CONFIG_DIGEST, AttrValue::Str(s)) => meta.config_digest = Some(s),
                            (EMPTY_AFTER_FILTER, AttrValue::Bool(b)) => meta.empty_after_filter = b,
                            (BASE_DATE, AttrValue::Str(s)) => {
                                meta.base_date = Some(
                                    NaiveDate::parse_from_str(&s, "%Y-%m-%d")
                                        .map_err(|_| self.err(pos, format!("invalid base date `{s}`")))?,
                                )
                            }
                            (_, value) => {
                                meta.extra.insert(key, value);
                            }
                        },
                        Scope::Trace {
                            case_id, attributes, ..
                        } => match (key.as_str(), value) {
                            (CONCEPT_NAME, AttrValue::Str(s)) => *case_id = Some(s),
                            (_, value) => {
                                attributes.insert(key, value);
                            }
                        },
                        Scope::Event {
                            activity,
                            timestamp,
                            attributes,
                        } => match (key.as_str(), value) {
                            (CONCEPT_NAME, AttrValue::Str(s)) => *activity = Some(s),
                            (TIMESTAMP, AttrValue::Date(d)) => *timestamp = Some(d),
                            (_, value) => {
                                attributes.insert(key, value);
                            }
                        },
                    }
                }
            }
        }
        if !seen_log {
            return Err(self.err(self.text.len() as u64, "no <log> element"));
        }
        if !stack.is_empty() {
            return Err(self.err(self.text.len() as u64, "unexpected end of document"));
        }
        Ok(EventLog {
            traces,
            metadata: meta,
        })
    }
}

/// Parses an XES document; `path` only labels errors.
pub fn parse_xes(text: &str, path: &Path) -> Result<EventLog> {
    Parser { text, path }.parse()
}

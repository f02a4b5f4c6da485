use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use chrono::{NaiveDate, NaiveDateTime};

/// Typed attribute value, mirroring the XES attribute kinds.
#[derive(Debug, Clone, PartialEq)]
pub enum AttrValue {
    Str(String),
    Int(i64),
    Float(f64),
    Bool(bool),
    Date(NaiveDateTime),
    Id(String),
    /// An attribute kind this crate does not interpret, kept verbatim.
    Opaque {
        tag: String,
        value: String,
    },
}

impl AttrValue {
    pub fn as_int(&self) -> Option<i64> {
        match self {
            AttrValue::Int(v) => Some(*v),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub activity: String,
    /// UTC.
    pub timestamp: NaiveDateTime,
    pub attributes: BTreeMap<String, AttrValue>,
}

impl Event {
    pub fn new(activity: impl Into<String>, timestamp: NaiveDateTime) -> Self {
        Event {
            activity: activity.into(),
            timestamp,
            attributes: BTreeMap::new(),
        }
    }

    fn step_counter(&self) -> i64 {
        self.attributes
            .get(super::ATTR_STEP_COUNTER)
            .and_then(AttrValue::as_int)
            .unwrap_or(0)
    }
}

/// All events of one case, ordered by timestamp and then step counter.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub case_id: String,
    pub events: Vec<Event>,
    /// Trace-level attributes other than the case id.
    pub attributes: BTreeMap<String, AttrValue>,
}

impl Trace {
    pub fn new(case_id: impl Into<String>, mut events: Vec<Event>) -> Self {
        events.sort_by_key(|e| (e.timestamp, e.step_counter()));
        Trace {
            case_id: case_id.into(),
            events,
            attributes: BTreeMap::new(),
        }
    }

    pub fn first_timestamp(&self) -> Option<NaiveDateTime> {
        self.events.first().map(|e| e.timestamp)
    }

    pub fn last_timestamp(&self) -> Option<NaiveDateTime> {
        self.events.last().map(|e| e.timestamp)
    }

    /// Elapsed days between first and last event.
    pub fn duration_days(&self) -> f64 {
        match (self.first_timestamp(), self.last_timestamp()) {
            (Some(a), Some(b)) => days_between(a, b),
            _ => 0.0,
        }
    }
}

/// Fractional days from `from` to `to`.
pub fn days_between(from: NaiveDateTime, to: NaiveDateTime) -> f64 {
    (to - from).num_milliseconds() as f64 / 86_400_000.0
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extension {
    pub name: String,
    pub prefix: String,
    pub uri: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LogMetadata {
    pub name: String,
    /// Digest of the configuration that produced the log.
    pub config_digest: Option<String>,
    pub base_date: Option<NaiveDate>,
    /// Set when filtering removed every case.
    pub empty_after_filter: bool,
    pub extensions: Vec<Extension>,
    /// Log-level attributes without a dedicated field.
    pub extra: BTreeMap<String, AttrValue>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EventLog {
    pub traces: Vec<Trace>,
    pub metadata: LogMetadata,
}

impl EventLog {
    pub fn new(traces: Vec<Trace>) -> Self {
        EventLog {
            traces,
            metadata: LogMetadata::default(),
        }
    }

    pub fn event_count(&self) -> usize {
        self.traces.iter().map(|t| t.events.len()).sum()
    }

    pub fn case_count(&self) -> usize {
        self.traces.len()
    }

    pub fn activities(&self) -> BTreeSet<&str> {
        self.traces
            .iter()
            .flat_map(|t| t.events.iter().map(|e| e.activity.as_str()))
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.event_count() == 0
    }
}

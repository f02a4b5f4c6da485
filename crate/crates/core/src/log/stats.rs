use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use chrono::NaiveDateTime;

use super::activity::Activity;
use super::model::EventLog;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EventsPerCase {
    pub min: usize,
    pub median: f64,
    pub max: usize,
}

/// Descriptive statistics of an event log.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LogStats {
    pub events: usize,
    pub cases: usize,
    pub activities: usize,
    pub events_per_case: EventsPerCase,
    pub first_timestamp: Option<NaiveDateTime>,
    pub last_timestamp: Option<NaiveDateTime>,
    pub activity_frequencies: BTreeMap<String, usize>,
    /// Cases holding two or more events with the same timestamp.
    pub cases_with_duplicate_timestamps: usize,
    /// Distinct labels outside the simulator vocabulary.
    pub label_violations: Vec<String>,
}

pub fn stats(log: &EventLog) -> LogStats {
    let mut out = LogStats {
        cases: log.traces.len(),
        ..LogStats::default()
    };
    let mut sizes = Vec::with_capacity(log.traces.len());
    for trace in &log.traces {
        sizes.push(trace.events.len());
        out.events += trace.events.len();
        if trace.events.windows(2).any(|w| w[0].timestamp == w[1].timestamp) {
            out.cases_with_duplicate_timestamps += 1;
        }
        for e in &trace.events {
            *out.activity_frequencies.entry(e.activity.clone()).or_insert(0) += 1;
            out.first_timestamp = Some(out.first_timestamp.map_or(e.timestamp, |t| t.min(e.timestamp)));
            out.last_timestamp = Some(out.last_timestamp.map_or(e.timestamp, |t| t.max(e.timestamp)));
        }
    }
    out.activities = out.activity_frequencies.len();
    out.label_violations = out
        .activity_frequencies
        .keys()
        .filter(|l| l.parse::<Activity>().is_err())
        .cloned()
        .collect();
    sizes.sort_unstable();
    if let (Some(&min), Some(&max)) = (sizes.first(), sizes.last()) {
        let mid = sizes.len() / 2;
        let median = if sizes.len() % 2 == 1 {
            sizes[mid] as f64
        } else {
            (sizes[mid - 1] + sizes[mid]) as f64 / 2.0
        };
        out.events_per_case = EventsPerCase { min, median, max };
    }
    out
}

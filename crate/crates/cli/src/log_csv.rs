//! Event logs as `Date,Activity,CaseID` CSV.
//!
//! Export writes midnight timestamps as `DD.MM.YYYY` and anything else as
//! RFC 3339, one row per event in global time order. Import also accepts ISO
//! dates and RFC 3339 timestamps; traces keep their first-appearance order.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use abspm_core::chrono::{NaiveDate, NaiveDateTime, NaiveTime};
use abspm_core::log::{AttrValue, Event, EventLog, Trace, ATTR_STEP_COUNTER};

use crate::error::{Error, Result};
use crate::raw_csv::csv_error;
use crate::xes::{format_timestamp, parse_timestamp};

pub const HEADER: [&str; 3] = ["Date", "Activity", "CaseID"];

fn format_date(ts: NaiveDateTime) -> String {
    if ts.time() == NaiveTime::MIN {
        ts.format("%d.%m.%Y").to_string()
    } else {
        format_timestamp(ts)
    }
}

pub fn parse_date(s: &str) -> Option<NaiveDateTime> {
    let s = s.trim();
    let midnight = |d: NaiveDate| d.and_time(NaiveTime::MIN);
    NaiveDate::parse_from_str(s, "%d.%m.%Y")
        .map(midnight)
        .or_else(|_| NaiveDate::parse_from_str(s, "%Y-%m-%d").map(midnight))
        .ok()
        .or_else(|| parse_timestamp(s))
        .or_else(|| NaiveDateTime::parse_from_str(s, "%Y-%m-%dT%H:%M:%S%.f").ok())
}

pub fn write_events<W: Write>(out: W, log: &EventLog) -> csv::Result<()> {
    let mut rows: Vec<(NaiveDateTime, i64, usize, usize, &Event, &str)> =
        Vec::with_capacity(log.event_count());
    for (ti, trace) in log.traces.iter().enumerate() {
        for (ei, e) in trace.events.iter().enumerate() {
            let counter = e
                .attributes
                .get(ATTR_STEP_COUNTER)
                .and_then(AttrValue::as_int)
                .unwrap_or(0);
            rows.push((e.timestamp, counter, ti, ei, e, &trace.case_id));
        }
    }
    rows.sort_by_key(|r| (r.0, r.1, r.2, r.3));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for (ts, _, _, _, e, case) in rows {
        w.write_record([format_date(ts).as_str(), e.activity.as_str(), case])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_log_csv(log: &EventLog, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_events(std::io::BufWriter::new(file), log).map_err(|e| csv_error(path, e))
}

/// Reads events from `input`; `path` only labels errors.
pub fn read_events<R: Read>(input: R, path: &Path) -> Result<EventLog> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = r
        .headers()
        .map_err(|e| Error::parse(path, 1, e.to_string()))?
        .clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::parse(path, 1, format!("missing column `{name}`")))
    };
    let (di, ai, ci) = (col("Date")?, col("Activity")?, col("CaseID")?);
    let mut order: Vec<String> = Vec::new();
    let mut events: std::collections::HashMap<String, Vec<Event>> = Default::default();
    for (i, row) in r.records().enumerate() {
        let line = i as u64 + 2;
        let row = row.map_err(|e| Error::parse(path, line, e.to_string()))?;
        let field = |idx: usize| row.get(idx).unwrap_or("");
        let ts = parse_date(field(di))
            .ok_or_else(|| Error::parse(path, line, format!("invalid date `{}`", field(di))))?;
        let activity = field(ai);
        if activity.is_empty() {
            return Err(Error::parse(path, line, "empty activity"));
        }
        let case = field(ci).to_string();
        if !events.contains_key(&case) {
            order.push(case.clone());
        }
        events.entry(case).or_default().push(Event::new(activity, ts));
    }
    let traces = order
        .into_iter()
        .map(|case| {
            let evs = events.remove(&case).unwrap_or_default();
            Trace::new(case, evs)
        })
        .collect();
    Ok(EventLog::new(traces))
}

pub fn read_log_csv(path: &Path) -> Result<EventLog> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_events(file, path)
}

//! Raw simulator records as CSV.
//!
//! ```text
//! EventNo,Step,StepCounter,AgentID,Kind,PrevLoc,NewLoc,Neighbors,Similar,Happy
//! 3359,4,53,2277,move,"(30, 17)","(25, 11)","[898, 541, 1564, 1914, 2091, 392]",0,false
//! ```

use std::fs::File;
use std::io::{self, Read, Write};
use std::path::Path;

use abspm_core::sim::{Location, RawEventRecord, RecordKind};

use crate::error::{Error, Result};

pub const HEADER: [&str; 10] = [
    "EventNo",
    "Step",
    "StepCounter",
    "AgentID",
    "Kind",
    "PrevLoc",
    "NewLoc",
    "Neighbors",
    "Similar",
    "Happy",
];

fn quoted_location(loc: Location) -> String {
    format!("\"{loc}\"")
}

fn quoted_neighbors(ids: &[u32]) -> String {
    let parts: Vec<String> = ids.iter().map(u32::to_string).collect();
    format!("\"[{}]\"", parts.join(", "))
}

/// Writes `records` to `out`. Location and neighbour-list fields are always quoted.
pub fn write_records<W: Write>(out: W, records: &[RawEventRecord]) -> csv::Result<()> {
    // Fields are pre-quoted; none of them can contain a quote character.
    let mut w = csv::WriterBuilder::new()
        .quote_style(csv::QuoteStyle::Never)
        .from_writer(out);
    w.write_record(HEADER)?;
    for r in records {
        w.write_record([
            r.event_no.to_string(),
            r.step.to_string(),
            r.step_counter.to_string(),
            r.agent_id.to_string(),
            r.kind.as_str().to_string(),
            r.prev_loc.map(quoted_location).unwrap_or_default(),
            quoted_location(r.new_loc),
            quoted_neighbors(&r.neighbor_ids),
            r.similar_count.to_string(),
            r.happy.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_raw_csv(records: &[RawEventRecord], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_records(io::BufWriter::new(file), records).map_err(|e| csv_error(path, e))
}

pub(crate) fn csv_error(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::parse(path, line, format!("{other:?}")),
    }
}

fn parse_location(s: &str) -> Option<Location> {
    let inner = s.trim().strip_prefix('(')?.strip_suffix(')')?;
    let (x, y) = inner.split_once(',')?;
    Some(Location::new(x.trim().parse().ok()?, y.trim().parse().ok()?))
}

fn parse_neighbors(s: &str) -> Option<Vec<u32>> {
    let inner = s.trim().strip_prefix('[')?.strip_suffix(']')?;
    if inner.trim().is_empty() {
        return Some(Vec::new());
    }
    inner.split(',').map(|p| p.trim().parse().ok()).collect()
}

/// Reads records written by [`write_records`]. `path` only labels errors.
pub fn read_records<R: Read>(input: R, path: &Path) -> Result<Vec<RawEventRecord>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let headers = rdr.headers().map_err(|e| csv_error(path, e))?.clone();
    if headers.iter().collect::<Vec<_>>() != HEADER {
        return Err(Error::parse(
            path,
            1,
            format!("expected header {}", HEADER.join(",")),
        ));
    }
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(|e| csv_error(path, e))?;
        let line = row.position().map_or(0, |p| p.line());
        let bad = |field: &str| {
            Error::parse(
                path,
                line,
                format!("invalid {field} `{}`", row_field(&row, field)),
            )
        };
        let num =
            |field: &str| -> Result<u64> { row_field(&row, field).trim().parse().map_err(|_| bad(field)) };
        let kind = match row_field(&row, "Kind") {
            "move" => RecordKind::Move,
            "status" => RecordKind::Status,
            _ => return Err(bad("Kind")),
        };
        let prev = row_field(&row, "PrevLoc");
        let prev_loc = if prev.trim().is_empty() {
            None
        } else {
            Some(parse_location(prev).ok_or_else(|| bad("PrevLoc"))?)
        };
        out.push(RawEventRecord {
            event_no: num("EventNo")?,
            step: num("Step")?,
            step_counter: num("StepCounter")? as u32,
            agent_id: num("AgentID")? as u32,
            kind,
            prev_loc,
            new_loc: parse_location(row_field(&row, "NewLoc")).ok_or_else(|| bad("NewLoc"))?,
            neighbor_ids: parse_neighbors(row_field(&row, "Neighbors")).ok_or_else(|| bad("Neighbors"))?,
            similar_count: num("Similar")? as u32,
            happy: row_field(&row, "Happy")
                .trim()
                .parse()
                .map_err(|_| bad("Happy"))?,
        });
    }
    Ok(out)
}

fn row_field<'r>(row: &'r csv::StringRecord, field: &str) -> &'r str {
    let idx = HEADER.iter().position(|h| *h == field).expect("known column");
    row.get(idx).unwrap_or("")
}

pub fn read_raw_csv(path: &Path) -> Result<Vec<RawEventRecord>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_records(io::BufReader::new(file), path)
}

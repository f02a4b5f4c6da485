use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use chrono::{Days, NaiveDate};
use thiserror::Error;

use super::activity::Activity;
use super::model::{AttrValue, Event, EventLog, LogMetadata, Trace};
use crate::sim::{RawEventRecord, RecordKind};

/// Auxiliary event attribute keeping the simulated step.
pub const ATTR_STEP: &str = "abspm:step";
/// Auxiliary event attribute keeping the within-step order.
pub const ATTR_STEP_COUNTER: &str = "abspm:step_counter";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConvertError {
    #[error("record {event_no}: similar count {similar} exceeds neighbour count {neighbors}")]
    CensusMismatch {
        event_no: u64,
        neighbors: usize,
        similar: u32,
    },
    #[error("record {event_no}: {neighbors} neighbours exceed the Moore neighbourhood")]
    TooManyNeighbors { event_no: u64, neighbors: usize },
    #[error("record {event_no}: step {step} is outside the calendar range")]
    StepOutOfRange { event_no: u64, step: u64 },
}

/// Groups raw records into one case per agent.
///
/// Moves become `move_location`; status records become
/// `change_happy_X_Y`/`change_unhappy_X_Y`. Step `s` is stamped at midnight of
/// `base_date + s` days and the step counter is kept for within-day order.
/// Agents without any record get no trace.
pub fn convert(records: &[RawEventRecord], base_date: NaiveDate) -> Result<EventLog, ConvertError> {
    let mut cases: BTreeMap<u32, Vec<Event>> = BTreeMap::new();
    for rec in records {
        let neighbors = rec.neighbor_ids.len();
        if neighbors > 8 {
            return Err(ConvertError::TooManyNeighbors {
                event_no: rec.event_no,
                neighbors,
            });
        }
        if rec.similar_count as usize > neighbors {
            return Err(ConvertError::CensusMismatch {
                event_no: rec.event_no,
                neighbors,
                similar: rec.similar_count,
            });
        }
        let activity = match rec.kind {
            RecordKind::Move => Activity::MoveLocation,
            RecordKind::Status => Activity::status(rec.happy, neighbors as u8, rec.similar_count as u8),
        };
        let day = base_date
            .checked_add_days(Days::new(rec.step))
            .ok_or(ConvertError::StepOutOfRange {
                event_no: rec.event_no,
                step: rec.step,
            })?;
        let mut event = Event::new(activity.to_string(), day.and_hms_opt(0, 0, 0).expect("midnight"));
        event
            .attributes
            .insert(ATTR_STEP.into(), AttrValue::Int(rec.step as i64));
        event
            .attributes
            .insert(ATTR_STEP_COUNTER.into(), AttrValue::Int(rec.step_counter as i64));
        cases.entry(rec.agent_id).or_default().push(event);
    }
    let traces = cases
        .into_iter()
        .map(|(agent, events)| Trace::new(agent.to_string(), events))
        .collect();
    Ok(EventLog {
        traces,
        metadata: LogMetadata {
            name: String::from("schelling"),
            base_date: Some(base_date),
            ..LogMetadata::default()
        },
    })
}

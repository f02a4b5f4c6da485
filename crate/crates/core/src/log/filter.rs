use alloc::format;
use alloc::string::String;

use chrono::{Days, NaiveDate};
use thiserror::Error;

use super::model::{EventLog, Trace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid filter: {0}")]
pub struct FilterError(pub String);

/// Calendar window a case must intersect. Either end may be open.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Timeframe {
    pub from: Option<NaiveDate>,
    pub to: Option<NaiveDate>,
}

/// Whole-case filters. Every set criterion must hold for a case to be kept.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct FilterSpec {
    /// Keep cases whose `[first, last]` days overlap the window.
    pub timeframe: Option<Timeframe>,
    /// Keep cases lasting strictly fewer days.
    pub max_case_duration_days: Option<f64>,
    /// Keep cases with at most this many events.
    pub max_events_per_case: Option<usize>,
}

impl FilterSpec {
    /// Outlier preset: cases intersecting the period from one week after
    /// `base_date` onward, lasting under 90 days, with no more than 25 events.
    pub fn paper_outlier(base_date: NaiveDate) -> Self {
        FilterSpec {
            timeframe: Some(Timeframe {
                from: base_date.checked_add_days(Days::new(7)),
                to: None,
            }),
            max_case_duration_days: Some(90.0),
            max_events_per_case: Some(25),
        }
    }

    pub fn validate(&self) -> Result<(), FilterError> {
        if let Some(Timeframe {
            from: Some(from),
            to: Some(to),
        }) = self.timeframe
        {
            if from > to {
                return Err(FilterError(format!("timeframe starts {from} after it ends {to}")));
            }
        }
        if let Some(d) = self.max_case_duration_days {
            if !(d > 0.0) {
                return Err(FilterError(format!(
                    "max case duration must be positive, got {d}"
                )));
            }
        }
        if self.max_events_per_case == Some(0) {
            return Err(FilterError("max events per case must be positive".into()));
        }
        Ok(())
    }

    pub fn keeps(&self, trace: &Trace) -> bool {
        let (Some(first), Some(last)) = (trace.first_timestamp(), trace.last_timestamp()) else {
            return false;
        };
        if let Some(tf) = self.timeframe {
            if tf.from.is_some_and(|from| last.date() < from) {
                return false;
            }
            if tf.to.is_some_and(|to| first.date() > to) {
                return false;
            }
        }
        if let Some(max) = self.max_case_duration_days {
            if trace.duration_days() >= max {
                return false;
            }
        }
        if let Some(max) = self.max_events_per_case {
            if trace.events.len() > max {
                return false;
            }
        }
        true
    }
}

/// Keeps the cases `spec` accepts; events are never dropped individually.
pub fn apply_filters(log: &EventLog, spec: &FilterSpec) -> EventLog {
    let traces: alloc::vec::Vec<Trace> = log.traces.iter().filter(|t| spec.keeps(t)).cloned().collect();
    let mut metadata = log.metadata.clone();
    metadata.empty_after_filter = traces.is_empty();
    EventLog { traces, metadata }
}

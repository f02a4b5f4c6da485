//! Case-grouped event logs built from simulator records.

mod activity;
mod convert;
mod filter;
mod model;
mod stats;

pub use activity::{activity_universe, Activity, ParseActivityError};
pub use convert::{convert, ConvertError, ATTR_STEP, ATTR_STEP_COUNTER};
pub use filter::{apply_filters, FilterError, FilterSpec, Timeframe};
pub use model::{days_between, AttrValue, Event, EventLog, Extension, LogMetadata, Trace};
pub use stats::{stats, EventsPerCase, LogStats};

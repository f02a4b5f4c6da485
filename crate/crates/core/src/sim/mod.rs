//! Seeded Schelling segregation model.
//!
//! Agents of `group_count` groups live on a non-wrapping grid. An agent is
//! unhappy when the share of dissimilar occupied cells in its Moore
//! neighbourhood exceeds the tolerance. Each step every agent that ended the
//! previous step unhappy relocates to a uniformly drawn empty cell, after
//! which all statuses are recomputed. Every move and every status flip is
//! emitted as a [`RawEventRecord`].

mod config;
mod engine;
mod record;

pub use config::{SimConfig, SimError};
pub use engine::{classify, run, SimResult, SimState};
pub use record::{Agent, Location, RawEventRecord, RecordKind, Status};

//! Directly-follows discovery, abstraction and rendering.

mod abstraction;
mod dfg;
mod dot;
mod fuzzy;
mod indicator;

pub use abstraction::{abstract_dfg, project_log, AbstractionMode, AbstractionSpec};
pub use dfg::{build_dfg, Dfg, DiscoveryError, DurationStats, EdgeKey, EdgeMetrics, NodeMetrics};
pub use dot::export_dot;
pub use fuzzy::{fuzzy_filter, fuzzy_metrics, EdgeFuzzy, FuzzyMetrics};
pub use indicator::{Indicator, UnknownIndicator};

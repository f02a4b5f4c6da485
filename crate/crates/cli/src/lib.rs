//! Files, project state, command pipeline and HTTP API around `abspm-core`.

pub mod error;
pub mod log_csv;
pub mod model_json;
pub mod pipeline;
pub mod project;
pub mod raw_csv;
pub mod server;
pub mod store;
pub mod xes;

pub use error::{Error, Result};

//! Core of the agent-based simulation assessment workbench.
//!
//! Everything in this crate is a pure computation over in-memory values and
//! only needs `alloc`:
//!
//! * [`sim`] runs a seeded Schelling segregation model and emits raw records.
//! * [`log`] turns those records into case-grouped event logs, computes log
//!   statistics and applies whole-case filters.
//! * [`discovery`] builds annotated directly-follows graphs, abstracts them
//!   and renders them as Graphviz DOT.
//! * [`assessment`] derives indicator observations from a model, renders the
//!   face-validity questions and compiles expert verdicts into a report.
//!
//! File formats, the command line and the HTTP API live in the `abspm` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod assessment;
pub mod discovery;
pub mod log;
mod num;
pub mod sim;

pub use chrono;

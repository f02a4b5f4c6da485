//! Face-validity assessment of a discovered model.
//!
//! Observations are `(element, indicator, value)` facts read off a model. An
//! expert answers two questions per observation with one of three verdicts,
//! and [`summarize`] compiles the answers into a report.

mod judgment;
mod observation;
mod question;
mod report;

pub use judgment::{AssessmentError, Judgment, JudgmentStore, Question, Verdict};
pub use observation::{generate_observations, Element, Observation};
pub use question::{render_questions, QUESTION_1};
pub use report::{summarize, AssessmentReport, ReportRow, VerdictCounts};

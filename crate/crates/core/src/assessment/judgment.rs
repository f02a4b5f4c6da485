use core::fmt;
use core::str::FromStr;

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use chrono::NaiveDateTime;
use thiserror::Error;

use super::observation::Observation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssessmentError {
    #[error("unknown observation {0}")]
    UnknownObservation(u32),
    #[error("`{0}` is not a verdict (plausible, not_plausible, further_investigation)")]
    InvalidVerdict(String),
    #[error("`{0}` is not a question (q1, q2)")]
    InvalidQuestion(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Question {
    Q1,
    Q2,
}

impl fmt::Display for Question {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Question::Q1 => "Q1",
            Question::Q2 => "Q2",
        })
    }
}

impl FromStr for Question {
    type Err = AssessmentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "q1" | "1" => Ok(Question::Q1),
            "q2" | "2" => Ok(Question::Q2),
            _ => Err(AssessmentError::InvalidQuestion(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Verdict {
    Plausible,
    NotPlausible,
    FurtherInvestigation,
}

impl Verdict {
    pub const ALL: [Verdict; 3] = [
        Verdict::Plausible,
        Verdict::NotPlausible,
        Verdict::FurtherInvestigation,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Verdict::Plausible => "plausible",
            Verdict::NotPlausible => "not_plausible",
            Verdict::FurtherInvestigation => "further_investigation",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Verdict::Plausible => "plausible",
            Verdict::NotPlausible => "not plausible",
            Verdict::FurtherInvestigation => "further investigation",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Verdict {
    type Err = AssessmentError;

    /// Accepts tokens, table labels and the one-letter shortcuts `p`/`n`/`f`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_lowercase().replace([' ', '-'], "_");
        match norm.as_str() {
            "plausible" | "p" => Ok(Verdict::Plausible),
            "not_plausible" | "implausible" | "n" => Ok(Verdict::NotPlausible),
            "further_investigation" | "requires_further_investigation" | "f" => {
                Ok(Verdict::FurtherInvestigation)
            }
            _ => Err(AssessmentError::InvalidVerdict(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Judgment {
    pub obs_id: u32,
    pub question: Question,
    pub verdict: Verdict,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub note: Option<String>,
    pub assessor: String,
    pub recorded_at: NaiveDateTime,
}

type JudgmentKey = (u32, Question, String);

/// Current verdict per `(observation, question, assessor)` plus the
/// append-only history of every recorded verdict.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct JudgmentStore {
    current: BTreeMap<JudgmentKey, Judgment>,
    audit: Vec<Judgment>,
}

impl JudgmentStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Rebuilds a store by replaying an audit trail.
    pub fn replay(audit: impl IntoIterator<Item = Judgment>) -> Self {
        let mut store = Self::new();
        for j in audit {
            store.upsert(j);
        }
        store
    }

    fn upsert(&mut self, judgment: Judgment) {
        self.audit.push(judgment.clone());
        self.current.insert(
            (judgment.obs_id, judgment.question, judgment.assessor.clone()),
            judgment,
        );
    }

    /// Records `judgment`, replacing an earlier verdict under the same key.
    pub fn record(
        &mut self,
        judgment: Judgment,
        observations: &[Observation],
    ) -> Result<(), AssessmentError> {
        if !observations.iter().any(|o| o.obs_id == judgment.obs_id) {
            return Err(AssessmentError::UnknownObservation(judgment.obs_id));
        }
        self.upsert(judgment);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.current.len()
    }

    pub fn is_empty(&self) -> bool {
        self.current.is_empty()
    }

    pub fn audit(&self) -> &[Judgment] {
        &self.audit
    }

    pub fn current(&self) -> impl Iterator<Item = &Judgment> {
        self.current.values()
    }

    /// Current verdicts of one assessor.
    pub fn current_for<'a>(&'a self, assessor: &'a str) -> impl Iterator<Item = &'a Judgment> + 'a {
        self.current.values().filter(move |j| j.assessor == assessor)
    }

    pub fn get(&self, obs_id: u32, question: Question, assessor: &str) -> Option<&Judgment> {
        self.current.get(&(obs_id, question, assessor.to_string()))
    }
}

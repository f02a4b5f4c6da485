use core::fmt;
use core::str::FromStr;

use alloc::format;
use alloc::string::{String, ToString};

use thiserror::Error;

use super::dfg::{EdgeMetrics, NodeMetrics};
use crate::num::round_count;

/// A metric of the process-model bundle that can annotate nodes and edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Indicator {
    AbsoluteFrequency,
    CaseFrequency,
    MaxRepetitions,
    CaseCoverage,
    MinDuration,
    MaxDuration,
    MeanDuration,
    MedianDuration,
    TotalDuration,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown indicator `{name}`; valid indicators: {valid}")]
pub struct UnknownIndicator {
    pub name: String,
    pub valid: String,
}

impl Indicator {
    pub const ALL: [Indicator; 9] = [
        Indicator::AbsoluteFrequency,
        Indicator::CaseFrequency,
        Indicator::MaxRepetitions,
        Indicator::CaseCoverage,
        Indicator::MinDuration,
        Indicator::MaxDuration,
        Indicator::MeanDuration,
        Indicator::MedianDuration,
        Indicator::TotalDuration,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Indicator::AbsoluteFrequency => "absolute_frequency",
            Indicator::CaseFrequency => "case_frequency",
            Indicator::MaxRepetitions => "max_repetitions",
            Indicator::CaseCoverage => "case_coverage",
            Indicator::MinDuration => "min_duration",
            Indicator::MaxDuration => "max_duration",
            Indicator::MeanDuration => "mean_duration",
            Indicator::MedianDuration => "median_duration",
            Indicator::TotalDuration => "total_duration",
        }
    }

    /// Short form used in observation displays (`CF=12 (100%)`, `MNR=22`).
    pub fn abbreviation(self) -> &'static str {
        match self {
            Indicator::AbsoluteFrequency => "AF",
            Indicator::CaseFrequency => "CF",
            Indicator::MaxRepetitions => "MNR",
            Indicator::CaseCoverage => "CC",
            Indicator::MinDuration => "MinD",
            Indicator::MaxDuration => "MaxD",
            Indicator::MeanDuration => "MeanD",
            Indicator::MedianDuration => "MedD",
            Indicator::TotalDuration => "TotD",
        }
    }

    pub fn is_duration(self) -> bool {
        matches!(
            self,
            Indicator::MinDuration
                | Indicator::MaxDuration
                | Indicator::MeanDuration
                | Indicator::MedianDuration
                | Indicator::TotalDuration
        )
    }

    pub fn applies_to_nodes(self) -> bool {
        !self.is_duration()
    }

    pub fn node_value(self, m: &NodeMetrics) -> Option<f64> {
        Some(match self {
            Indicator::AbsoluteFrequency => m.absolute_frequency as f64,
            Indicator::CaseFrequency => m.case_frequency as f64,
            Indicator::MaxRepetitions => m.max_repetitions as f64,
            Indicator::CaseCoverage => m.case_coverage,
            _ => return None,
        })
    }

    pub fn edge_value(self, m: &EdgeMetrics, total_cases: usize) -> f64 {
        match self {
            Indicator::AbsoluteFrequency => m.absolute_frequency as f64,
            Indicator::CaseFrequency => m.case_frequency as f64,
            Indicator::MaxRepetitions => m.max_repetitions as f64,
            Indicator::CaseCoverage if total_cases > 0 => m.case_frequency as f64 / total_cases as f64,
            Indicator::CaseCoverage => 0.0,
            Indicator::MinDuration => m.duration.min,
            Indicator::MaxDuration => m.duration.max,
            Indicator::MeanDuration => m.duration.mean,
            Indicator::MedianDuration => m.duration.median,
            Indicator::TotalDuration => m.duration.total,
        }
    }

    /// Human-readable value: counts as integers, coverage as a rounded
    /// percentage, durations in days.
    pub fn format_value(self, value: f64) -> String {
        match self {
            Indicator::AbsoluteFrequency | Indicator::CaseFrequency | Indicator::MaxRepetitions => {
                format!("{}", round_count(value))
            }
            Indicator::CaseCoverage => format!("{}%", round_count(value * 100.0)),
            _ => format!("{}d", trim_decimals(value)),
        }
    }
}

fn trim_decimals(v: f64) -> String {
    let s = format!("{v:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

impl fmt::Display for Indicator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Indicator {
    type Err = UnknownIndicator;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Indicator::ALL
            .into_iter()
            .find(|i| i.name() == s || i.abbreviation().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownIndicator {
                name: s.to_string(),
                valid: Indicator::ALL.map(Indicator::name).to_vec().join(", "),
            })
    }
}

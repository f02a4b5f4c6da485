//! Lossless JSON serialisation of a directly-follows graph.
//!
//! ```json
//! {
//!   "total_cases": 2,
//!   "nodes": [
//!     { "activity": "m", "absolute_frequency": 3, "case_frequency": 2,
//!       "max_repetitions": 2, "case_coverage": 1.0 }
//!   ],
//!   "edges": [
//!     { "source": "m", "target": "h", "absolute_frequency": 2,
//!       "case_frequency": 2, "max_repetitions": 1,
//!       "duration": { "min": 0.0, "max": 1.0, "mean": 0.5, "median": 0.5, "total": 1.0 } }
//!   ],
//!   "start_activities": { "m": 2 },
//!   "end_activities": { "h": 2 }
//! }
//! ```
//!
//! Nodes are sorted by activity and edges by (source, target). Absent
//! elements are simply not listed.

use std::collections::BTreeMap;

use abspm_core::discovery::{Dfg, DurationStats, EdgeMetrics, NodeMetrics};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeDto {
    pub activity: String,
    #[serde(flatten)]
    pub metrics: NodeMetrics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeDto {
    pub source: String,
    pub target: String,
    pub absolute_frequency: usize,
    pub case_frequency: usize,
    pub max_repetitions: usize,
    pub duration: DurationStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDto {
    pub total_cases: usize,
    pub nodes: Vec<NodeDto>,
    pub edges: Vec<EdgeDto>,
    pub start_activities: BTreeMap<String, usize>,
    pub end_activities: BTreeMap<String, usize>,
}

impl From<&Dfg> for ModelDto {
    fn from(dfg: &Dfg) -> Self {
        ModelDto {
            total_cases: dfg.total_cases,
            nodes: dfg
                .nodes
                .iter()
                .map(|(a, m)| NodeDto {
                    activity: a.clone(),
                    metrics: *m,
                })
                .collect(),
            edges: dfg
                .edges
                .iter()
                .map(|((s, t), m)| EdgeDto {
                    source: s.clone(),
                    target: t.clone(),
                    absolute_frequency: m.absolute_frequency,
                    case_frequency: m.case_frequency,
                    max_repetitions: m.max_repetitions,
                    duration: m.duration,
                })
                .collect(),
            start_activities: dfg.start_activities.clone(),
            end_activities: dfg.end_activities.clone(),
        }
    }
}

impl From<ModelDto> for Dfg {
    fn from(dto: ModelDto) -> Self {
        Dfg {
            nodes: dto.nodes.into_iter().map(|n| (n.activity, n.metrics)).collect(),
            edges: dto
                .edges
                .into_iter()
                .map(|e| {
                    let m = EdgeMetrics {
                        absolute_frequency: e.absolute_frequency,
                        case_frequency: e.case_frequency,
                        max_repetitions: e.max_repetitions,
                        duration: e.duration,
                    };
                    ((e.source, e.target), m)
                })
                .collect(),
            start_activities: dto.start_activities,
            end_activities: dto.end_activities,
            total_cases: dto.total_cases,
        }
    }
}

/// Pretty-printed JSON with a trailing newline.
pub fn export_json(dfg: &Dfg) -> String {
    let mut s = serde_json::to_string_pretty(&ModelDto::from(dfg)).expect("model serialises");
    s.push('\n');
    s
}

pub fn parse_json(text: &str) -> serde_json::Result<Dfg> {
    serde_json::from_str::<ModelDto>(text).map(Dfg::from)
}

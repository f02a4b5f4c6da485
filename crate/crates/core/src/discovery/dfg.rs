use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::log::{days_between, EventLog};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiscoveryError {
    #[error("cannot discover a model from an empty log")]
    EmptyLog,
    #[error("invalid abstraction: {0}")]
    InvalidAbstraction(String),
}

/// `(source, target)` activity pair.
pub type EdgeKey = (String, String);

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NodeMetrics {
    pub absolute_frequency: usize,
    /// Distinct cases containing the activity.
    pub case_frequency: usize,
    /// Largest number of occurrences within a single case.
    pub max_repetitions: usize,
    /// `case_frequency / total_cases`.
    pub case_coverage: f64,
}

/// Elapsed days over every realisation of an edge.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DurationStats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub median: f64,
    pub total: f64,
}

impl DurationStats {
    /// Statistics of `samples` in the given order; `None` when empty.
    pub fn from_samples(samples: &[f64]) -> Option<Self> {
        if samples.is_empty() {
            return None;
        }
        let total: f64 = samples.iter().sum();
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mid = sorted.len() / 2;
        let median = if sorted.len() % 2 == 1 {
            sorted[mid]
        } else {
            (sorted[mid - 1] + sorted[mid]) / 2.0
        };
        Some(DurationStats {
            min: sorted[0],
            max: sorted[sorted.len() - 1],
            mean: total / samples.len() as f64,
            median,
            total,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EdgeMetrics {
    pub absolute_frequency: usize,
    pub case_frequency: usize,
    pub max_repetitions: usize,
    pub duration: DurationStats,
}

/// Directly-follows graph annotated with frequency and duration metrics.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dfg {
    pub nodes: BTreeMap<String, NodeMetrics>,
    pub edges: BTreeMap<EdgeKey, EdgeMetrics>,
    /// Activity -> number of cases starting with it.
    pub start_activities: BTreeMap<String, usize>,
    /// Activity -> number of cases ending with it.
    pub end_activities: BTreeMap<String, usize>,
    pub total_cases: usize,
}

impl Dfg {
    /// Model of a log without events.
    pub fn empty() -> Self {
        Dfg::default()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn outgoing<'a>(
        &'a self,
        activity: &'a str,
    ) -> impl Iterator<Item = (&'a EdgeKey, &'a EdgeMetrics)> + 'a {
        self.edges.iter().filter(move |((s, _), _)| s == activity)
    }

    pub fn incoming<'a>(
        &'a self,
        activity: &'a str,
    ) -> impl Iterator<Item = (&'a EdgeKey, &'a EdgeMetrics)> + 'a {
        self.edges.iter().filter(move |((_, t), _)| t == activity)
    }

    /// Same graph restricted to `keep` edges.
    pub(crate) fn with_edges<F: Fn(&EdgeKey) -> bool>(&self, keep: F) -> Dfg {
        Dfg {
            edges: self
                .edges
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, v)| (k.clone(), *v))
                .collect(),
            ..self.clone()
        }
    }
}

/// Counts every consecutive event pair within a trace as one realisation of
/// its edge. Case frequency and maximum repetitions are taken per case.
pub fn build_dfg(log: &EventLog) -> Result<Dfg, DiscoveryError> {
    if log.is_empty() {
        return Err(DiscoveryError::EmptyLog);
    }
    let mut dfg = Dfg::default();
    let mut durations: BTreeMap<EdgeKey, Vec<f64>> = BTreeMap::new();
    let mut edge_counts: BTreeMap<EdgeKey, (usize, usize, usize)> = BTreeMap::new();

    for trace in log.traces.iter().filter(|t| !t.events.is_empty()) {
        dfg.total_cases += 1;
        let first = &trace.events[0].activity;
        let last = &trace.events[trace.events.len() - 1].activity;
        *dfg.start_activities.entry(first.clone()).or_insert(0) += 1;
        *dfg.end_activities.entry(last.clone()).or_insert(0) += 1;

        let mut local_nodes: BTreeMap<&str, usize> = BTreeMap::new();
        for e in &trace.events {
            *local_nodes.entry(&e.activity).or_insert(0) += 1;
        }
        for (activity, n) in local_nodes {
            let m = dfg.nodes.entry(activity.into()).or_insert(NodeMetrics {
                absolute_frequency: 0,
                case_frequency: 0,
                max_repetitions: 0,
                case_coverage: 0.0,
            });
            m.absolute_frequency += n;
            m.case_frequency += 1;
            m.max_repetitions = m.max_repetitions.max(n);
        }

        let mut local_edges: BTreeMap<(&str, &str), usize> = BTreeMap::new();
        for pair in trace.events.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            *local_edges.entry((&a.activity, &b.activity)).or_insert(0) += 1;
            durations
                .entry((a.activity.clone(), b.activity.clone()))
                .or_default()
                .push(days_between(a.timestamp, b.timestamp));
        }
        for ((a, b), n) in local_edges {
            let c = edge_counts.entry((a.into(), b.into())).or_insert((0, 0, 0));
            c.0 += n;
            c.1 += 1;
            c.2 = c.2.max(n);
        }
    }

    for m in dfg.nodes.values_mut() {
        m.case_coverage = m.case_frequency as f64 / dfg.total_cases as f64;
    }
    for (key, (abs, cases, maxrep)) in edge_counts {
        let duration = DurationStats::from_samples(&durations[&key]).expect("edge has realisations");
        dfg.edges.insert(
            key,
            EdgeMetrics {
                absolute_frequency: abs,
                case_frequency: cases,
                max_repetitions: maxrep,
                duration,
            },
        );
    }
    Ok(dfg)
}

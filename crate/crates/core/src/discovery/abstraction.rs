use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::dfg::{build_dfg, Dfg, DiscoveryError, EdgeKey};
use super::fuzzy::{fuzzy_filter, fuzzy_metrics};
use crate::log::{EventLog, Trace};
use crate::num::ceil_count;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum AbstractionMode {
    /// Keep the most frequent edges on top of a connectivity skeleton.
    #[default]
    FrequencyRank,
    /// Keep edges whose fuzzy utility reaches the cutoff.
    Fuzzy,
}

/// Activity and path sliders of the process map.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct AbstractionSpec {
    /// Share of activities to keep, most frequent first.
    pub activity_ratio: f64,
    /// Share of edges to keep in frequency-rank mode.
    pub path_ratio: f64,
    pub mode: AbstractionMode,
    /// Weight of significance against correlation in fuzzy utility.
    pub utility_weight: f64,
    /// Minimum utility an edge needs in fuzzy mode.
    pub cutoff: f64,
}

impl Default for AbstractionSpec {
    fn default() -> Self {
        AbstractionSpec {
            activity_ratio: 1.0,
            path_ratio: 1.0,
            mode: AbstractionMode::FrequencyRank,
            utility_weight: 0.5,
            cutoff: 0.0,
        }
    }
}

impl AbstractionSpec {
    pub fn new(activity_ratio: f64, path_ratio: f64) -> Self {
        AbstractionSpec {
            activity_ratio,
            path_ratio,
            ..AbstractionSpec::default()
        }
    }

    pub fn validate(&self) -> Result<(), DiscoveryError> {
        let check = |name: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(DiscoveryError::InvalidAbstraction(format!(
                    "{name} must lie in [0, 1], got {v}"
                )))
            }
        };
        check("activity ratio", self.activity_ratio)?;
        check("path ratio", self.path_ratio)?;
        check("utility weight", self.utility_weight)?;
        check("cutoff", self.cutoff)?;
        if self.activity_ratio == 0.0 {
            return Err(DiscoveryError::InvalidAbstraction(
                "activity ratio 0 leaves an empty model".into(),
            ));
        }
        Ok(())
    }
}

/// Drops every event whose activity is not in `keep`; traces left empty vanish.
pub fn project_log(log: &EventLog, keep: &BTreeSet<String>) -> EventLog {
    let traces = log
        .traces
        .iter()
        .filter_map(|t| {
            let events: Vec<_> = t
                .events
                .iter()
                .filter(|e| keep.contains(&e.activity))
                .cloned()
                .collect();
            (!events.is_empty()).then(|| Trace { events, ..t.clone() })
        })
        .collect();
    EventLog {
        traces,
        metadata: log.metadata.clone(),
    }
}

/// `keys` ranked by descending `score`, ties broken by ascending key.
fn rank_by<K: Ord + Clone>(keys: impl Iterator<Item = (K, f64)>) -> Vec<K> {
    let mut v: Vec<(K, f64)> = keys.collect();
    v.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    v.into_iter().map(|(k, _)| k).collect()
}

/// Each node's most frequent outgoing and incoming edge.
fn skeleton(dfg: &Dfg) -> BTreeSet<EdgeKey> {
    let mut best_out: BTreeMap<&str, (&EdgeKey, usize)> = BTreeMap::new();
    let mut best_in: BTreeMap<&str, (&EdgeKey, usize)> = BTreeMap::new();
    // Ascending key order plus strict `>` keeps the lowest label on ties.
    for (key, m) in &dfg.edges {
        let f = m.absolute_frequency;
        let out = best_out.entry(&key.0).or_insert((key, f));
        if f > out.1 {
            *out = (key, f);
        }
        let inc = best_in.entry(&key.1).or_insert((key, f));
        if f > inc.1 {
            *inc = (key, f);
        }
    }
    best_out
        .values()
        .chain(best_in.values())
        .map(|(k, _)| (*k).clone())
        .collect()
}

/// Abstracts a model the way the activity and path sliders do.
///
/// Keeps the `ceil(a * N)` most frequent activities of `dfg`, projects `log`
/// onto them and rebuilds the graph. In frequency-rank mode the edges kept are
/// the skeleton plus the most frequent remaining edges until `ceil(p * E)`
/// edges are retained; in fuzzy mode edges are filtered by utility.
pub fn abstract_dfg(dfg: &Dfg, log: &EventLog, spec: &AbstractionSpec) -> Result<Dfg, DiscoveryError> {
    spec.validate()?;
    if dfg.is_empty() {
        return Err(DiscoveryError::EmptyLog);
    }
    let keep_n = ceil_count(spec.activity_ratio * dfg.nodes.len() as f64).max(1);
    let keep: BTreeSet<String> = rank_by(
        dfg.nodes
            .iter()
            .map(|(a, m)| (a.clone(), m.absolute_frequency as f64)),
    )
    .into_iter()
    .take(keep_n)
    .collect();
    let projected = if keep.len() == dfg.nodes.len() {
        dfg.clone()
    } else {
        build_dfg(&project_log(log, &keep))?
    };

    match spec.mode {
        AbstractionMode::FrequencyRank => {
            let target = ceil_count(spec.path_ratio * projected.edges.len() as f64);
            let mut retained = skeleton(&projected);
            let ranked = rank_by(
                projected
                    .edges
                    .iter()
                    .map(|(k, m)| (k.clone(), m.absolute_frequency as f64)),
            );
            for key in ranked {
                if retained.len() >= target {
                    break;
                }
                retained.insert(key);
            }
            Ok(projected.with_edges(|k| retained.contains(k)))
        }
        AbstractionMode::Fuzzy => {
            let metrics = fuzzy_metrics(&projected, spec.utility_weight);
            Ok(fuzzy_filter(&projected, &metrics, spec.cutoff))
        }
    }
}

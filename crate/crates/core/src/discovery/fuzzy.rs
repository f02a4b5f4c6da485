use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;

use super::dfg::{Dfg, EdgeKey};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EdgeFuzzy {
    pub significance: f64,
    pub correlation: f64,
    pub utility: f64,
}

/// Significance of nodes and significance, correlation and utility of edges.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FuzzyMetrics {
    pub nodes: BTreeMap<String, f64>,
    pub edges: BTreeMap<EdgeKey, EdgeFuzzy>,
}

/// Significance is frequency normalised by the most frequent element of the
/// same kind. Edge correlation is proximity based, `1 / (1 + mean days)`.
/// Utility blends the two: `w * significance + (1 - w) * correlation`.
pub fn fuzzy_metrics(dfg: &Dfg, utility_weight: f64) -> FuzzyMetrics {
    let w = utility_weight.clamp(0.0, 1.0);
    let max_node = dfg
        .nodes
        .values()
        .map(|m| m.absolute_frequency)
        .max()
        .unwrap_or(0);
    let max_edge = dfg
        .edges
        .values()
        .map(|m| m.absolute_frequency)
        .max()
        .unwrap_or(0);
    let norm = |v: usize, max: usize| if max == 0 { 0.0 } else { v as f64 / max as f64 };
    FuzzyMetrics {
        nodes: dfg
            .nodes
            .iter()
            .map(|(a, m)| (a.clone(), norm(m.absolute_frequency, max_node)))
            .collect(),
        edges: dfg
            .edges
            .iter()
            .map(|(k, m)| {
                let significance = norm(m.absolute_frequency, max_edge);
                let correlation = 1.0 / (1.0 + m.duration.mean.max(0.0));
                let utility = w * significance + (1.0 - w) * correlation;
                (
                    k.clone(),
                    EdgeFuzzy {
                        significance,
                        correlation,
                        utility,
                    },
                )
            })
            .collect(),
    }
}

/// Removes edges below `cutoff`, then gives every node that lost all edges
/// in a direction it had its highest-utility edge in that direction back.
pub fn fuzzy_filter(dfg: &Dfg, metrics: &FuzzyMetrics, cutoff: f64) -> Dfg {
    let utility = |k: &EdgeKey| metrics.edges.get(k).map_or(0.0, |e| e.utility);
    let kept: BTreeSet<&EdgeKey> = dfg.edges.keys().filter(|k| utility(k) >= cutoff).collect();
    let mut restored: BTreeSet<EdgeKey> = BTreeSet::new();
    let best = |mut it: alloc::vec::Vec<&EdgeKey>| {
        // Highest utility, lowest key on ties.
        it.sort_by(|a, b| utility(b).total_cmp(&utility(a)).then_with(|| a.cmp(b)));
        it.first().map(|k| (*k).clone())
    };
    for node in dfg.nodes.keys() {
        let out: alloc::vec::Vec<_> = dfg.edges.keys().filter(|k| &k.0 == node).collect();
        if !out.is_empty() && !out.iter().any(|k| kept.contains(k)) {
            restored.extend(best(out));
        }
        let inc: alloc::vec::Vec<_> = dfg.edges.keys().filter(|k| &k.1 == node).collect();
        if !inc.is_empty() && !inc.iter().any(|k| kept.contains(k)) {
            restored.extend(best(inc));
        }
    }
    dfg.with_edges(|k| kept.contains(k) || restored.contains(k))
}

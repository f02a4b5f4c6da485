use core::fmt;

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::discovery::{Dfg, Indicator};
use crate::num::round_count;

/// Model element an observation is about.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Element {
    Activity(String),
    Path(String, String),
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Activity(a) => f.write_str(a),
            Element::Path(a, b) => write!(f, "{a} → {b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Observation {
    pub obs_id: u32,
    pub element: Element,
    pub indicator: Indicator,
    pub value: f64,
    /// `CF=12 (100%)`, `MNR=22`, ...
    pub value_display: String,
}

fn display(indicator: Indicator, value: f64, total_cases: usize) -> String {
    let mut s = format!("{}={}", indicator.abbreviation(), indicator.format_value(value));
    if indicator == Indicator::CaseFrequency && total_cases > 0 {
        s.push_str(&format!(
            " ({}%)",
            round_count(value / total_cases as f64 * 100.0)
        ));
    }
    s
}

/// For each indicator, the `top_k` activities and the `top_k` paths with the
/// highest value (ties by label), numbered from 1 in generation order.
pub fn generate_observations(dfg: &Dfg, indicators: &[Indicator], top_k: usize) -> Vec<Observation> {
    let mut seen: BTreeSet<(Element, Indicator)> = BTreeSet::new();
    let mut out = Vec::new();
    let mut push = |element: Element, indicator: Indicator, value: f64, out: &mut Vec<Observation>| {
        if seen.insert((element.clone(), indicator)) {
            out.push(Observation {
                obs_id: out.len() as u32 + 1,
                element,
                indicator,
                value,
                value_display: display(indicator, value, dfg.total_cases),
            });
        }
    };
    for &indicator in indicators {
        let mut nodes: Vec<(&String, f64)> = dfg
            .nodes
            .iter()
            .filter_map(|(a, m)| indicator.node_value(m).map(|v| (a, v)))
            .collect();
        nodes.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        for (a, v) in nodes.into_iter().take(top_k) {
            push(Element::Activity(a.clone()), indicator, v, &mut out);
        }
        let mut edges: Vec<(&(String, String), f64)> = dfg
            .edges
            .iter()
            .map(|(k, m)| (k, indicator.edge_value(m, dfg.total_cases)))
            .collect();
        edges.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        for ((a, b), v) in edges.into_iter().take(top_k) {
            push(Element::Path(a.clone(), b.clone()), indicator, v, &mut out);
        }
    }
    out
}

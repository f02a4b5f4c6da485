use core::fmt::Write;

use alloc::string::String;

use super::dfg::Dfg;
use super::indicator::Indicator;

/// Light to dark fill over five equal-width buckets of the primary metric.
const PALETTE: [&str; 5] = ["#eff3ff", "#bdd7e7", "#6baed6", "#3182bd", "#08519c"];
const START_COLOR: &str = "#2ca02c";
const END_COLOR: &str = "#d62728";

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn bucket(v: f64, min: f64, max: f64) -> usize {
    if max > min {
        (((v - min) / (max - min)) * 5.0).clamp(0.0, 4.0) as usize
    } else {
        PALETTE.len() - 1
    }
}

/// Graphviz rendering of `dfg`.
///
/// Nodes read `activity\nprimary (secondary)` and are filled by primary-metric
/// bucket; edge pen width scales with the primary edge metric. Start
/// activities get a green outline, end activities a red double outline.
pub fn export_dot(dfg: &Dfg, primary: Indicator, secondary: Indicator) -> String {
    let mut out = String::new();
    let value = |i: Indicator, v: Option<f64>| v.map_or_else(|| String::from("n/a"), |v| i.format_value(v));

    out.push_str("digraph process_map {\n");
    out.push_str("  rankdir=TB;\n");
    out.push_str("  node [shape=box, style=\"rounded,filled\", fontname=\"Helvetica\"];\n");
    out.push_str("  edge [fontname=\"Helvetica\", fontsize=10];\n");

    let node_vals: alloc::vec::Vec<f64> = dfg.nodes.values().filter_map(|m| primary.node_value(m)).collect();
    let nmin = node_vals.iter().copied().fold(f64::INFINITY, f64::min);
    let nmax = node_vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    for (activity, m) in &dfg.nodes {
        let p = primary.node_value(m);
        let label = alloc::format!(
            "{activity}\n{} ({})",
            value(primary, p),
            value(secondary, secondary.node_value(m))
        );
        let b = p.map_or(0, |v| bucket(v, nmin, nmax));
        let _ = write!(
            out,
            "  {} [label={}, fillcolor=\"{}\", fontcolor=\"{}\"",
            quote(activity),
            quote(&label),
            PALETTE[b],
            if b >= 3 { "white" } else { "black" }
        );
        if dfg.start_activities.contains_key(activity) {
            let _ = write!(out, ", color=\"{START_COLOR}\", penwidth=2.5");
        }
        if dfg.end_activities.contains_key(activity) {
            let _ = write!(out, ", peripheries=2");
            if !dfg.start_activities.contains_key(activity) {
                let _ = write!(out, ", color=\"{END_COLOR}\"");
            }
        }
        out.push_str("];\n");
    }

    let emax = dfg
        .edges
        .values()
        .map(|m| primary.edge_value(m, dfg.total_cases))
        .fold(0.0, f64::max);
    for ((a, b), m) in &dfg.edges {
        let p = primary.edge_value(m, dfg.total_cases);
        let s = secondary.edge_value(m, dfg.total_cases);
        let width = if emax > 0.0 { 1.0 + 4.0 * p / emax } else { 1.0 };
        let label = alloc::format!("{} ({})", primary.format_value(p), secondary.format_value(s));
        let _ = writeln!(
            out,
            "  {} -> {} [label={}, penwidth={width:.2}];",
            quote(a),
            quote(b),
            quote(&label)
        );
    }
    out.push_str("}\n");
    out
}

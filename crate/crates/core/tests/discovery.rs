mod oracles;

use std::collections::BTreeSet;

use abspm_core::discovery::{
    abstract_dfg, build_dfg, fuzzy_filter, fuzzy_metrics, project_log, AbstractionMode, AbstractionSpec, Dfg,
};
use abspm_core::log::EventLog;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn assert_matches_oracle(log: &EventLog, dfg: &Dfg) {
    let (nodes, edges) = oracles::brute_force_dfg(log);
    assert_eq!(dfg.nodes.len(), nodes.len());
    for (a, &(abs, cases, maxrep)) in &nodes {
        let m = dfg.nodes[a];
        assert_eq!(
            (m.absolute_frequency, m.case_frequency, m.max_repetitions),
            (abs, cases, maxrep),
            "{a}"
        );
        assert_eq!(m.case_coverage, cases as f64 / log.traces.len() as f64);
    }
    assert_eq!(dfg.edges.len(), edges.len());
    for (k, o) in &edges {
        let m = dfg.edges[k];
        let d = m.duration;
        let got = oracles::OracleEdge {
            abs: m.absolute_frequency,
            cases: m.case_frequency,
            maxrep: m.max_repetitions,
            min: d.min,
            max: d.max,
            mean: d.mean,
            median: d.median,
            total: d.total,
        };
        assert_eq!(&got, o, "{k:?}");
    }
}

#[test]
fn dfg_matches_brute_force_on_500_logs() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..500 {
        let log = oracles::random_log(&mut rng, 10, 20);
        let dfg = build_dfg(&log).unwrap();
        assert_matches_oracle(&log, &dfg);
    }
}

#[test]
fn flow_conservation() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let log = oracles::random_log(&mut rng, 10, 20);
        let dfg = build_dfg(&log).unwrap();
        let edge_total: usize = dfg.edges.values().map(|m| m.absolute_frequency).sum();
        let transitions: usize = log.traces.iter().map(|t| t.events.len() - 1).sum();
        assert_eq!(edge_total, transitions);
        let node_total: usize = dfg.nodes.values().map(|m| m.absolute_frequency).sum();
        assert_eq!(node_total, log.event_count());
        assert!(dfg
            .nodes
            .values()
            .all(|m| m.case_frequency <= dfg.total_cases && m.case_frequency <= m.absolute_frequency));
        assert!(dfg
            .edges
            .keys()
            .all(|(a, b)| dfg.nodes.contains_key(a) && dfg.nodes.contains_key(b)));
        assert!(!dfg.start_activities.is_empty() && !dfg.end_activities.is_empty());
    }
}

#[test]
fn projection_matches_oracle() {
    // a:4, b:3, c:1 -> a = 2/3 keeps a and b.
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..50 {
        let log = oracles::random_log(&mut rng, 8, 10);
        let dfg = build_dfg(&log).unwrap();
        let ratio = rng.random_range(1..=10) as f64 / 10.0;
        let out = abstract_dfg(&dfg, &log, &AbstractionSpec::new(ratio, 1.0)).unwrap();

        let mut ranked: Vec<(&String, usize)> =
            dfg.nodes.iter().map(|(a, m)| (a, m.absolute_frequency)).collect();
        ranked.sort_by(|x, y| y.1.cmp(&x.1).then(x.0.cmp(y.0)));
        let n = ((ratio * dfg.nodes.len() as f64) - 1e-9).ceil() as usize;
        let keep: BTreeSet<String> = ranked.iter().take(n.max(1)).map(|(a, _)| (*a).clone()).collect();
        let mut projected = log.clone();
        for t in projected.traces.iter_mut() {
            t.events.retain(|e| keep.contains(&e.activity));
        }
        projected.traces.retain(|t| !t.events.is_empty());
        assert_matches_oracle(&projected, &out);
        assert_eq!(project_log(&log, &keep), projected);
    }
}

fn check_skeleton(out: &Dfg) {
    for n in out.nodes.keys() {
        if !out.end_activities.contains_key(n) {
            assert!(out.outgoing(n).next().is_some(), "{n} lost its outgoing edges");
        }
        if !out.start_activities.contains_key(n) {
            assert!(out.incoming(n).next().is_some(), "{n} lost its incoming edges");
        }
    }
}

#[test]
fn abstraction_identity_skeleton_and_monotonicity() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..100 {
        let log = oracles::random_log(&mut rng, 10, 20);
        let dfg = build_dfg(&log).unwrap();
        assert_eq!(
            abstract_dfg(&dfg, &log, &AbstractionSpec::new(1.0, 1.0)).unwrap(),
            dfg
        );

        let a = rng.random_range(1..=100) as f64 / 100.0;
        let p = rng.random_range(0..=100) as f64 / 100.0;
        let out = abstract_dfg(&dfg, &log, &AbstractionSpec::new(a, p)).unwrap();
        check_skeleton(&out);

        let mut prev: Option<BTreeSet<_>> = None;
        for step in (0..=20).rev() {
            let p = step as f64 / 20.0;
            let edges: BTreeSet<_> = abstract_dfg(&dfg, &log, &AbstractionSpec::new(a, p))
                .unwrap()
                .edges
                .into_keys()
                .collect();
            if let Some(prev) = &prev {
                assert!(edges.is_subset(prev));
            }
            prev = Some(edges);
        }
    }
}

#[test]
fn fuzzy_mode_uses_cutoff() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let log = oracles::random_log(&mut rng, 10, 20);
    let dfg = build_dfg(&log).unwrap();
    let spec = AbstractionSpec {
        mode: AbstractionMode::Fuzzy,
        cutoff: 0.0,
        ..AbstractionSpec::default()
    };
    assert_eq!(abstract_dfg(&dfg, &log, &spec).unwrap(), dfg);
    let spec = AbstractionSpec { cutoff: 1.0, ..spec };
    let out = abstract_dfg(&dfg, &log, &spec).unwrap();
    assert!(out.edges.len() <= dfg.edges.len());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn fuzzy_filter_keeps_every_direction(seed in any::<u64>(), cutoff in 0.0f64..=1.0, w in 0.0f64..=1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let log = oracles::random_log(&mut rng, 10, 20);
        let dfg = build_dfg(&log).unwrap();
        let m = fuzzy_metrics(&dfg, w);
        for v in m.nodes.values() {
            prop_assert!((0.0..=1.0).contains(v));
        }
        for e in m.edges.values() {
            prop_assert!((0.0..=1.0).contains(&e.significance));
            prop_assert!((0.0..=1.0).contains(&e.correlation));
            prop_assert!((0.0..=1.0).contains(&e.utility));
        }
        let out = fuzzy_filter(&dfg, &m, cutoff);
        for n in dfg.nodes.keys() {
            if dfg.outgoing(n).next().is_some() {
                prop_assert!(out.outgoing(n).next().is_some());
            }
            if dfg.incoming(n).next().is_some() {
                prop_assert!(out.incoming(n).next().is_some());
            }
        }
        prop_assert!(out.edges.keys().all(|k| dfg.edges.contains_key(k)));
    }

    #[test]
    fn utility_monotone_in_weight(seed in any::<u64>(), w1 in 0.0f64..=1.0, w2 in 0.0f64..=1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dfg = build_dfg(&oracles::random_log(&mut rng, 10, 20)).unwrap();
        let (lo, hi) = if w1 <= w2 { (w1, w2) } else { (w2, w1) };
        let (a, b) = (fuzzy_metrics(&dfg, lo), fuzzy_metrics(&dfg, hi));
        for (k, e) in &a.edges {
            if e.significance > e.correlation {
                prop_assert!(b.edges[k].utility >= e.utility - 1e-12);
            }
        }
    }
}

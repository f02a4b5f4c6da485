//! Helpers shared by the integration tests of this crate.

#![allow(dead_code)]

use std::collections::BTreeMap;

use abspm_core::chrono::{Duration, NaiveDate, NaiveDateTime};
use abspm_core::log::{AttrValue, Event, EventLog, Extension, LogMetadata, Trace};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const WORDS: [&str; 8] = [
    "move_location",
    "a&b",
    "<tag>",
    "quote\"s",
    "apos'",
    "tab\there",
    "line\nbreak",
    "Zürich ∑",
];

fn text(rng: &mut ChaCha8Rng) -> String {
    let n = rng.random_range(0..3);
    (0..n)
        .map(|_| WORDS[rng.random_range(0..WORDS.len())])
        .collect::<Vec<_>>()
        .join(" ")
}

fn timestamp(rng: &mut ChaCha8Rng) -> NaiveDateTime {
    let base = NaiveDate::from_ymd_opt(2023, 10, 17)
        .unwrap()
        .and_hms_opt(0, 0, 0)
        .unwrap();
    let t = base + Duration::seconds(rng.random_range(0..90 * 86_400));
    match rng.random_range(0..3) {
        0 => t,
        1 => t + Duration::milliseconds(rng.random_range(0..1000)),
        _ => t + Duration::nanoseconds(rng.random_range(0..1_000_000_000)),
    }
}

fn value(rng: &mut ChaCha8Rng) -> AttrValue {
    match rng.random_range(0..7) {
        0 => AttrValue::Str(text(rng)),
        1 => AttrValue::Int(rng.random_range(i64::MIN..=i64::MAX)),
        2 => AttrValue::Float(match rng.random_range(0..3) {
            0 => rng.random_range(-1e6..1e6),
            1 => f64::from_bits(rng.random::<u64>() & !(0x7ff << 52)),
            _ => rng.random_range(0..100) as f64 / 8.0,
        }),
        3 => AttrValue::Bool(rng.random()),
        4 => AttrValue::Date(timestamp(rng)),
        5 => AttrValue::Id(format!("id-{}", rng.random::<u32>())),
        _ => AttrValue::Opaque {
            tag: ["list", "container", "custom"][rng.random_range(0..3)].into(),
            value: text(rng),
        },
    }
}

fn attributes(rng: &mut ChaCha8Rng, prefix: &str) -> BTreeMap<String, AttrValue> {
    (0..rng.random_range(0..4))
        .map(|i| {
            (
                format!("{prefix}:k{i}{}", text(rng).replace(['\n', '\t'], "")),
                value(rng),
            )
        })
        .collect()
}

/// A log exercising every attribute kind, escaping and sub-second timestamps.
pub fn rich_log(rng: &mut ChaCha8Rng) -> EventLog {
    let cases = rng.random_range(0..6);
    let traces = (0..cases)
        .map(|c| {
            let events = (0..rng.random_range(1..8))
                .map(|_| {
                    let mut e = Event::new(format!("act {}", text(rng)), timestamp(rng));
                    e.attributes = attributes(rng, "ev");
                    if rng.random() {
                        e.attributes.insert(
                            "abspm:step_counter".into(),
                            AttrValue::Int(rng.random_range(1..50)),
                        );
                    }
                    e
                })
                .collect();
            let mut t = Trace::new(format!("case {c} {}", text(rng)), events);
            t.attributes = attributes(rng, "tr");
            t
        })
        .collect();
    let metadata = LogMetadata {
        name: text(rng),
        config_digest: rng
            .random::<bool>()
            .then(|| format!("{:016x}", rng.random::<u64>())),
        base_date: rng
            .random::<bool>()
            .then(|| NaiveDate::from_ymd_opt(2023, 10, 17).unwrap()),
        empty_after_filter: rng.random(),
        extensions: (0..rng.random_range(0..2))
            .map(|i| Extension {
                name: format!("Ext{i}"),
                prefix: format!("ext{i}"),
                uri: format!("http://example.org/ext{i}.xesext?a=1&b=2"),
            })
            .collect(),
        extra: attributes(rng, "log"),
    };
    EventLog { traces, metadata }
}

//! Published assessment verdicts shared by the test suites.

#![allow(dead_code)]

use abspm_core::assessment::{Element, Observation, Verdict};
use abspm_core::discovery::Indicator;

use Verdict::{FurtherInvestigation as F, NotPlausible as N, Plausible as P};

/// The nine published observations with their two verdicts each.
pub fn table3() -> Vec<(Observation, Verdict, Verdict)> {
    let act = |a: &str| Element::Activity(a.into());
    let path = |a: &str, b: &str| Element::Path(a.into(), b.into());
    let rows = [
        (
            act("move_location"),
            Indicator::CaseFrequency,
            12.0,
            "CF=12 (100%)",
            N,
            P,
        ),
        (
            act("move_location"),
            Indicator::MaxRepetitions,
            22.0,
            "MNR=22",
            N,
            F,
        ),
        (
            path("move_location", "move_location"),
            Indicator::CaseFrequency,
            12.0,
            "CF=12 (100%)",
            N,
            N,
        ),
        (
            act("change_happy_3_2"),
            Indicator::CaseFrequency,
            5.0,
            "CF=5 (42%)",
            F,
            P,
        ),
        (
            act("change_happy_3_2"),
            Indicator::MaxRepetitions,
            1.0,
            "MNR=1",
            P,
            P,
        ),
        (
            path("move_location", "change_happy_5_3"),
            Indicator::CaseFrequency,
            4.0,
            "CF=4 (33%)",
            P,
            P,
        ),
        (
            act("change_unhappy_4_2"),
            Indicator::CaseFrequency,
            3.0,
            "CF=3 (25%)",
            P,
            P,
        ),
        (
            act("change_unhappy_4_2"),
            Indicator::MaxRepetitions,
            2.0,
            "MNR=2",
            F,
            P,
        ),
        (
            path("change_happy_7_4", "change_unhappy_4_2"),
            Indicator::CaseFrequency,
            1.0,
            "CF=1 (8%)",
            F,
            P,
        ),
    ];
    rows.into_iter()
        .enumerate()
        .map(|(i, (element, indicator, value, display, q1, q2))| {
            (
                Observation {
                    obs_id: i as u32 + 1,
                    element,
                    indicator,
                    value,
                    value_display: display.into(),
                },
                q1,
                q2,
            )
        })
        .collect()
}

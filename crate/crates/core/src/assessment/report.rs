use core::fmt::Write;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use super::judgment::{Judgment, Question, Verdict};
use super::observation::Observation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VerdictCounts {
    pub plausible: usize,
    pub not_plausible: usize,
    pub further_investigation: usize,
}

impl VerdictCounts {
    fn add(&mut self, v: Verdict) {
        match v {
            Verdict::Plausible => self.plausible += 1,
            Verdict::NotPlausible => self.not_plausible += 1,
            Verdict::FurtherInvestigation => self.further_investigation += 1,
        }
    }

    pub fn get(&self, v: Verdict) -> usize {
        match v {
            Verdict::Plausible => self.plausible,
            Verdict::NotPlausible => self.not_plausible,
            Verdict::FurtherInvestigation => self.further_investigation,
        }
    }

    pub fn total(&self) -> usize {
        self.plausible + self.not_plausible + self.further_investigation
    }

    /// Verdicts sharing the highest count; empty when nothing was judged.
    pub fn most_frequent(&self) -> Vec<Verdict> {
        let max = Verdict::ALL.iter().map(|&v| self.get(v)).max().unwrap_or(0);
        if max == 0 {
            return Vec::new();
        }
        Verdict::ALL.into_iter().filter(|&v| self.get(v) == max).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ReportRow {
    pub observation: Observation,
    pub q1: Option<Verdict>,
    pub q2: Option<Verdict>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AssessmentReport {
    pub rows: Vec<ReportRow>,
    pub q1_counts: VerdictCounts,
    pub q2_counts: VerdictCounts,
    /// Observations judged on both questions with different verdicts.
    pub discrepancies: Vec<u32>,
    /// Observations missing a verdict for at least one question.
    pub pending: Vec<u32>,
    pub q1_most_frequent: Vec<Verdict>,
    pub q2_most_frequent: Vec<Verdict>,
}

/// Compiles verdicts into a report. When several judgments exist for the same
/// observation and question the last one counts.
pub fn summarize(observations: &[Observation], judgments: &[Judgment]) -> AssessmentReport {
    let mut latest: BTreeMap<(u32, Question), Verdict> = BTreeMap::new();
    for j in judgments {
        latest.insert((j.obs_id, j.question), j.verdict);
    }
    let mut report = AssessmentReport {
        rows: Vec::with_capacity(observations.len()),
        q1_counts: VerdictCounts::default(),
        q2_counts: VerdictCounts::default(),
        discrepancies: Vec::new(),
        pending: Vec::new(),
        q1_most_frequent: Vec::new(),
        q2_most_frequent: Vec::new(),
    };
    for obs in observations {
        let q1 = latest.get(&(obs.obs_id, Question::Q1)).copied();
        let q2 = latest.get(&(obs.obs_id, Question::Q2)).copied();
        if let Some(v) = q1 {
            report.q1_counts.add(v);
        }
        if let Some(v) = q2 {
            report.q2_counts.add(v);
        }
        match (q1, q2) {
            (Some(a), Some(b)) if a != b => report.discrepancies.push(obs.obs_id),
            (Some(_), Some(_)) => {}
            _ => report.pending.push(obs.obs_id),
        }
        report.rows.push(ReportRow {
            observation: obs.clone(),
            q1,
            q2,
        });
    }
    report.q1_most_frequent = report.q1_counts.most_frequent();
    report.q2_most_frequent = report.q2_counts.most_frequent();
    report
}

fn join_ids(ids: &[u32]) -> String {
    let parts: Vec<String> = ids.iter().map(|i| alloc::format!("{i}")).collect();
    parts.join(", ")
}

fn verdict_cell(v: Option<Verdict>) -> &'static str {
    v.map_or("pending", Verdict::label)
}

impl AssessmentReport {
    /// Markdown document with the observation table, the verdict distribution
    /// and the discrepancy and pending lists.
    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        out.push_str("| # | Activity/path | Observation* | Question 1 | Question 2 |\n");
        out.push_str("|---|---|---|---|---|\n");
        for row in &self.rows {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} |",
                row.observation.obs_id,
                row.observation.element,
                row.observation.value_display,
                verdict_cell(row.q1),
                verdict_cell(row.q2)
            );
        }
        out.push_str("\n\\* CF = case frequency; MNR = maximum number of repetitions; AF = absolute frequency; CC = case coverage; MaxD = maximum duration.\n\n");

        out.push_str("### Verdict distribution\n\n");
        out.push_str("| Verdict | Question 1 | Question 2 |\n|---|---|---|\n");
        for v in Verdict::ALL {
            let _ = writeln!(
                out,
                "| {} | {} | {} |",
                v.label(),
                self.q1_counts.get(v),
                self.q2_counts.get(v)
            );
        }
        let _ = writeln!(
            out,
            "| judged | {} | {} |",
            self.q1_counts.total(),
            self.q2_counts.total()
        );
        out.push('\n');

        let most = |vs: &[Verdict]| {
            if vs.is_empty() {
                String::from("none")
            } else {
                vs.iter().map(|v| v.label()).collect::<Vec<_>>().join(", ")
            }
        };
        let _ = writeln!(
            out,
            "Most frequent verdict, question 1: {}.",
            most(&self.q1_most_frequent)
        );
        let _ = writeln!(
            out,
            "Most frequent verdict, question 2: {}.\n",
            most(&self.q2_most_frequent)
        );

        out.push_str("### Discrepancies between questions\n\n");
        if self.discrepancies.is_empty() {
            out.push_str("None.\n\n");
        } else {
            let _ = writeln!(out, "Observations {}.\n", join_ids(&self.discrepancies));
        }
        out.push_str("### Pending\n\n");
        if self.pending.is_empty() {
            out.push_str("None.\n");
        } else {
            let _ = writeln!(out, "Observations {}.", join_ids(&self.pending));
        }
        out
    }
}

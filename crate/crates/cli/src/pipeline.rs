//! The workbench commands. Each reads its input artifacts, calls into
//! `abspm-core`, registers its outputs and records a note on its phase.
//! Outputs are computed in full before anything is written, so a failing
//! command never registers a partial result.

use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::path::Path;

use abspm_core::assessment::{
    generate_observations, render_questions, summarize, AssessmentReport, Judgment, Observation, Question,
    Verdict,
};
use abspm_core::chrono::{NaiveDate, NaiveDateTime};
use abspm_core::discovery::{
    abstract_dfg, build_dfg, export_dot, AbstractionMode, AbstractionSpec, Dfg, Indicator,
};
use abspm_core::log::{apply_filters, convert, stats, EventLog, FilterSpec, LogStats, Timeframe};
use abspm_core::sim::{self, SimConfig};

use crate::error::{Error, Result};
use crate::model_json::{export_json, parse_json};
use crate::project::{sha256_hex, Phase, PhaseStatus, Project, ProjectState, Rendering};
use crate::{log_csv, raw_csv, store, xes};

/// What a command did, for the terminal.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct Outcome {
    pub lines: Vec<String>,
    pub warnings: Vec<String>,
}

impl Outcome {
    fn say(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }

    fn warn(&mut self, line: impl Into<String>) {
        self.warnings.push(line.into());
    }
}

#[derive(Debug, Default, Clone)]
pub struct SimOverrides {
    pub seed: Option<u64>,
    pub tolerance: Option<f64>,
    pub grid: Option<(u32, u32)>,
    pub density: Option<f64>,
    pub max_steps: Option<u64>,
}

impl SimOverrides {
    pub fn apply(&self, config: &mut SimConfig) {
        if let Some(s) = self.seed {
            config.seed = s;
        }
        if let Some(t) = self.tolerance {
            config.tolerance = t;
        }
        if let Some((w, h)) = self.grid {
            config.grid_width = w;
            config.grid_height = h;
        }
        if let Some(d) = self.density {
            config.density = d;
        }
        if let Some(m) = self.max_steps {
            config.max_steps = m;
        }
    }
}

#[derive(Debug, Default, Clone)]
pub struct FilterOverrides {
    pub preset: Option<String>,
    pub from: Option<NaiveDate>,
    pub to: Option<NaiveDate>,
    pub max_duration_days: Option<f64>,
    pub max_events: Option<usize>,
}

impl FilterOverrides {
    /// The project's active filter, replaced by a preset when one is named,
    /// with individual flags applied on top.
    pub fn resolve(&self, state: &ProjectState) -> Result<FilterSpec> {
        let mut spec = match &self.preset {
            Some(name) => state.filter_presets.get(name).cloned().ok_or_else(|| {
                let known: Vec<&str> = state.filter_presets.keys().map(String::as_str).collect();
                Error::Precondition(format!(
                    "unknown filter preset `{name}`; known presets: {}",
                    known.join(", ")
                ))
            })?,
            None => state.filter.clone(),
        };
        if self.from.is_some() || self.to.is_some() {
            let mut tf = spec.timeframe.unwrap_or(Timeframe { from: None, to: None });
            if self.from.is_some() {
                tf.from = self.from;
            }
            if self.to.is_some() {
                tf.to = self.to;
            }
            spec.timeframe = Some(tf);
        }
        if let Some(d) = self.max_duration_days {
            spec.max_case_duration_days = Some(d);
        }
        if let Some(n) = self.max_events {
            spec.max_events_per_case = Some(n);
        }
        spec.validate().map_err(|e| Error::Precondition(e.to_string()))?;
        Ok(spec)
    }
}

#[derive(Debug, Default, Clone)]
pub struct DiscoverOverrides {
    /// Percent of activities to keep.
    pub activities: Option<f64>,
    /// Percent of paths to keep.
    pub paths: Option<f64>,
    pub metric: Option<Indicator>,
    pub secondary: Option<Indicator>,
    pub mode: Option<AbstractionMode>,
}

impl DiscoverOverrides {
    pub fn apply(&self, spec: &mut AbstractionSpec, rendering: &mut Rendering) {
        if let Some(a) = self.activities {
            spec.activity_ratio = a / 100.0;
        }
        if let Some(p) = self.paths {
            spec.path_ratio = p / 100.0;
        }
        if let Some(m) = self.mode {
            spec.mode = m;
        }
        if let Some(m) = self.metric {
            rendering.primary = m;
        }
        if let Some(m) = self.secondary {
            rendering.secondary = m;
        }
    }
}

/// A discovered process model and its renderings.
#[derive(Debug, Clone)]
pub struct Discovered {
    pub model: Dfg,
    pub json: String,
    pub dot: String,
}

/// Builds the directly-follows graph of `log` and abstracts it. An empty log
/// yields an empty model.
pub fn discover_log(log: &EventLog, spec: &AbstractionSpec, rendering: &Rendering) -> Result<Discovered> {
    spec.validate()?;
    let model = if log.is_empty() {
        Dfg::empty()
    } else {
        let full = build_dfg(log)?;
        abstract_dfg(&full, log, spec)?
    };
    Ok(Discovered {
        json: export_json(&model),
        dot: export_dot(&model, rendering.primary, rendering.secondary),
        model,
    })
}

pub fn observations_json(observations: &[Observation]) -> String {
    let mut s = serde_json::to_string_pretty(observations).expect("observations serialise");
    s.push('\n');
    s
}

fn stats_json(s: &LogStats) -> String {
    let mut out = serde_json::to_string_pretty(s).expect("stats serialise");
    out.push('\n');
    out
}

fn json_artifact<T: serde::de::DeserializeOwned>(project: &Project, name: &str, producer: &str) -> Result<T> {
    let (path, bytes) = project.read_artifact(name, producer)?;
    serde_json::from_slice(&bytes).map_err(|e| Error::parse(&path, e.line() as u64, e.to_string()))
}

fn xes_artifact(project: &Project, name: &str, producer: &str) -> Result<EventLog> {
    let (path, bytes) = project.read_artifact(name, producer)?;
    let text = String::from_utf8(bytes).map_err(|e| Error::parse(&path, 0, e.to_string()))?;
    xes::parse_xes(&text, &path)
}

/// The log later stages work on: the filtered log when one is registered.
pub fn working_log(project: &Project) -> Result<EventLog> {
    if project.artifact("filtered_log").is_some() {
        xes_artifact(project, "filtered_log", "filter")
    } else {
        xes_artifact(project, "event_log", "convert")
    }
}

pub fn event_log(project: &Project) -> Result<EventLog> {
    xes_artifact(project, "event_log", "convert")
}

pub fn observations(project: &Project) -> Result<Vec<Observation>> {
    json_artifact(project, "observations", "discover")
}

pub fn population(state: &ProjectState) -> u64 {
    state
        .assessment
        .population
        .unwrap_or(state.simulation.agent_count() as u64)
}

fn seed_check(project: &Project, seed: Option<u64>, out: &mut Outcome) {
    if let Some(s) = seed {
        if s != project.state.simulation.seed {
            out.warn(format!(
                "--seed {s} ignored: artifacts were simulated with seed {}",
                project.state.simulation.seed
            ));
        }
    }
}

pub fn init(root: &Path, force: bool, seed: Option<u64>) -> Result<Outcome> {
    let mut project = Project::init(root, force)?;
    if let Some(s) = seed {
        project.state.simulation.seed = s;
        project.save()?;
    }
    let mut out = Outcome::default();
    out.say(format!("initialised {}", Project::file(root).display()));
    Ok(out)
}

pub fn simulate(project: &mut Project, o: &SimOverrides) -> Result<Outcome> {
    let mut config = project.state.simulation.clone();
    o.apply(&mut config);
    config.validate()?;
    let result = sim::run(&config)?;
    let mut csv = Vec::new();
    raw_csv::write_records(&mut csv, &result.records).map_err(|e| Error::Internal(e.to_string()))?;

    project.state.simulation = config;
    let path = project.register("raw_log", "csv", &csv)?;
    let summary = format!(
        "seed {}: {} agents, {} records, {} after {} steps",
        result.config.seed,
        result.final_grid.len(),
        result.records.len(),
        if result.converged { "converged" } else { "stopped" },
        result.steps_executed
    );
    project.note_run(
        Phase::DataUnderstanding,
        "simulate",
        summary.clone(),
        PhaseStatus::InProgress,
    );
    project.save()?;
    let mut out = Outcome::default();
    out.say(summary);
    out.say(format!("raw log: {}", path.display()));
    Ok(out)
}

pub fn convert_cmd(project: &mut Project, seed: Option<u64>) -> Result<Outcome> {
    let mut out = Outcome::default();
    seed_check(project, seed, &mut out);
    let (path, bytes) = project.read_artifact("raw_log", "simulate")?;
    let records = raw_csv::read_records(bytes.as_slice(), &path)?;
    let config = &project.state.simulation;
    let mut log = convert(&records, config.base_date)?;
    log.metadata.config_digest = Some(sha256_hex(
        serde_json::to_string(config)
            .expect("config serialises")
            .as_bytes(),
    ));
    let xes_text = xes::to_xes_string(&log);
    let mut csv = Vec::new();
    log_csv::write_events(&mut csv, &log).map_err(|e| Error::Internal(e.to_string()))?;

    let xes_path = project.register("event_log", "xes", xes_text.as_bytes())?;
    let csv_path = project.register("event_log_csv", "csv", &csv)?;
    let summary = format!("{} events in {} cases", log.event_count(), log.case_count());
    project.note_run(
        Phase::DataPreparation,
        "convert",
        summary.clone(),
        PhaseStatus::InProgress,
    );
    project.save()?;
    out.say(summary);
    out.say(format!("event log: {}", xes_path.display()));
    out.say(format!("event log (csv): {}", csv_path.display()));
    Ok(out)
}

fn describe_stats(s: &LogStats) -> String {
    format!(
        "{} events, {} cases, {} activities",
        s.events, s.cases, s.activities
    )
}

pub fn stats_cmd(project: &mut Project, seed: Option<u64>) -> Result<Outcome> {
    let mut out = Outcome::default();
    seed_check(project, seed, &mut out);
    let log = event_log(project)?;
    let s = stats(&log);
    let path = project.register("stats", "json", stats_json(&s).as_bytes())?;
    let summary = describe_stats(&s);
    project.note_run(
        Phase::DataUnderstanding,
        "stats",
        summary.clone(),
        PhaseStatus::Done,
    );
    project.save()?;
    out.say(summary);
    out.say(format!(
        "events per case: min {}, median {}, max {}",
        s.events_per_case.min, s.events_per_case.median, s.events_per_case.max
    ));
    if s.cases_with_duplicate_timestamps > 0 {
        out.say(format!(
            "cases with same-day events: {}",
            s.cases_with_duplicate_timestamps
        ));
    }
    for label in &s.label_violations {
        out.warn(format!("label outside the simulator vocabulary: {label}"));
    }
    out.say(format!("stats: {}", path.display()));
    Ok(out)
}

pub fn filter_cmd(project: &mut Project, o: &FilterOverrides, seed: Option<u64>) -> Result<Outcome> {
    let mut out = Outcome::default();
    seed_check(project, seed, &mut out);
    let spec = o.resolve(&project.state)?;
    let log = event_log(project)?;
    let filtered = apply_filters(&log, &spec);
    let before = stats(&log);
    let after = stats(&filtered);
    let xes_text = xes::to_xes_string(&filtered);

    project.state.filter = spec;
    let path = project.register("filtered_log", "xes", xes_text.as_bytes())?;
    project.register("filtered_stats", "json", stats_json(&after).as_bytes())?;
    let pct = |a: usize, b: usize| {
        if b == 0 {
            0
        } else {
            (a as f64 / b as f64 * 100.0).round() as u64
        }
    };
    let summary = format!(
        "kept {} of {} cases ({}%) and {} of {} events ({}%)",
        after.cases,
        before.cases,
        pct(after.cases, before.cases),
        after.events,
        before.events,
        pct(after.events, before.events)
    );
    project.note_run(
        Phase::DataPreparation,
        "filter",
        summary.clone(),
        PhaseStatus::Done,
    );
    project.save()?;
    if filtered.metadata.empty_after_filter {
        out.warn("no case matches the filter");
    }
    out.say(summary);
    out.say(format!("filtered log: {}", path.display()));
    Ok(out)
}

pub fn discover_cmd(project: &mut Project, o: &DiscoverOverrides, seed: Option<u64>) -> Result<Outcome> {
    let mut out = Outcome::default();
    seed_check(project, seed, &mut out);
    let mut spec = project.state.abstraction;
    let mut rendering = project.state.rendering.clone();
    o.apply(&mut spec, &mut rendering);
    let log = working_log(project)?;
    let d = discover_log(&log, &spec, &rendering)?;
    let settings = &project.state.assessment;
    let obs = generate_observations(&d.model, &settings.indicators, settings.top_k);

    project.state.abstraction = spec;
    project.state.rendering = rendering;
    let json_path = project.register("model_json", "json", d.json.as_bytes())?;
    let dot_path = project.register("model_dot", "dot", d.dot.as_bytes())?;
    project.register("observations", "json", observations_json(&obs).as_bytes())?;
    let summary = format!(
        "{} activities, {} paths, {} observations ({}% activities, {}% paths)",
        d.model.nodes.len(),
        d.model.edges.len(),
        obs.len(),
        spec.activity_ratio * 100.0,
        spec.path_ratio * 100.0
    );
    project.note_run(Phase::Modeling, "discover", summary.clone(), PhaseStatus::Done);
    project.save()?;
    if d.model.is_empty() {
        out.warn("the log is empty; the model has no activities");
    }
    out.say(summary);
    out.say(format!("model: {}", json_path.display()));
    out.say(format!("rendering: {}", dot_path.display()));
    Ok(out)
}

/// Verdict CSV: `obs_id,question_1,question_2` plus optional `assessor`,
/// `note` and `recorded_at` columns. Blank verdict cells leave the question
/// pending.
pub fn read_verdict_csv(
    text: &str,
    path: &Path,
    assessor: &str,
    now: NaiveDateTime,
) -> Result<Vec<Judgment>> {
    let mut r = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = r
        .headers()
        .map_err(|e| Error::parse(path, 1, e.to_string()))?
        .clone();
    let col = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
    let need =
        |name: &str| col(name).ok_or_else(|| Error::parse(path, 1, format!("missing column `{name}`")));
    let (id_col, q1_col, q2_col) = (need("obs_id")?, need("question_1")?, need("question_2")?);
    let (assessor_col, note_col, at_col) = (col("assessor"), col("note"), col("recorded_at"));
    let mut out = Vec::new();
    for (i, row) in r.records().enumerate() {
        let line = i as u64 + 2;
        let row = row.map_err(|e| Error::parse(path, line, e.to_string()))?;
        let get = |c: Option<usize>| c.and_then(|c| row.get(c)).unwrap_or("");
        let obs_id: u32 = get(Some(id_col))
            .parse()
            .map_err(|_| Error::parse(path, line, format!("invalid obs_id `{}`", get(Some(id_col)))))?;
        let who = match get(assessor_col) {
            "" => assessor.to_string(),
            s => s.to_string(),
        };
        let note = match get(note_col) {
            "" => None,
            s => Some(s.to_string()),
        };
        let recorded_at = match get(at_col) {
            "" => now,
            s => log_csv::parse_date(s)
                .ok_or_else(|| Error::parse(path, line, format!("invalid recorded_at `{s}`")))?,
        };
        for (question, c) in [(Question::Q1, q1_col), (Question::Q2, q2_col)] {
            let cell = get(Some(c));
            if cell.is_empty() {
                continue;
            }
            let verdict: Verdict = cell
                .parse()
                .map_err(|e: abspm_core::assessment::AssessmentError| {
                    Error::parse(path, line, e.to_string())
                })?;
            out.push(Judgment {
                obs_id,
                question,
                verdict,
                note: note.clone(),
                assessor: who.clone(),
                recorded_at,
            });
        }
    }
    Ok(out)
}

/// Prompts for both questions of every observation. A blank line or `s`
/// skips a question, end of input leaves the rest pending, and an invalid
/// answer is asked again. Text after the verdict becomes the note.
pub fn prompt_verdicts(
    observations: &[Observation],
    population: u64,
    assessor: &str,
    now: NaiveDateTime,
    input: &mut dyn BufRead,
    output: &mut dyn Write,
) -> Result<Vec<Judgment>> {
    let io_err = |e| Error::io("<terminal>", e);
    let mut judgments = Vec::new();
    let total = observations.len();
    'outer: for (i, obs) in observations.iter().enumerate() {
        let (q1, q2) = render_questions(obs, population);
        writeln!(
            output,
            "\nObservation {} ({} of {total}): {}  {}",
            obs.obs_id,
            i + 1,
            obs.element,
            obs.value_display
        )
        .map_err(io_err)?;
        for (question, text) in [(Question::Q1, q1), (Question::Q2, q2)] {
            loop {
                write!(
                    output,
                    "{question}: {text}\n  [p] plausible  [n] not plausible  [f] further investigation  [s] skip\n> "
                )
                .map_err(io_err)?;
                output.flush().map_err(io_err)?;
                let mut line = String::new();
                if input.read_line(&mut line).map_err(io_err)? == 0 {
                    break 'outer;
                }
                let line = line.trim();
                if line.is_empty() || line.eq_ignore_ascii_case("s") {
                    break;
                }
                let (token, note) = match line.parse::<Verdict>() {
                    Ok(v) => (Ok(v), None),
                    Err(_) => {
                        let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
                        let rest = rest.trim();
                        (
                            head.parse::<Verdict>(),
                            (!rest.is_empty()).then(|| rest.to_string()),
                        )
                    }
                };
                match token {
                    Ok(verdict) => {
                        judgments.push(Judgment {
                            obs_id: obs.obs_id,
                            question,
                            verdict,
                            note,
                            assessor: assessor.to_string(),
                            recorded_at: now,
                        });
                        break;
                    }
                    Err(_) => {
                        writeln!(output, "invalid verdict `{line}`; enter p, n, f or s").map_err(io_err)?
                    }
                }
            }
        }
    }
    Ok(judgments)
}

pub enum AssessInput<'a> {
    File(&'a Path),
    Interactive {
        input: &'a mut dyn BufRead,
        output: &'a mut dyn Write,
    },
}

/// Report table as CSV: one row per observation, verdict tokens, blank when
/// pending.
pub fn report_csv(report: &AssessmentReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let cell = |v: Option<Verdict>| v.map_or("", Verdict::token);
    w.write_record(["obs_id", "element", "observation", "question_1", "question_2"])
        .expect("in-memory write");
    for row in &report.rows {
        w.write_record([
            row.observation.obs_id.to_string().as_str(),
            row.observation.element.to_string().as_str(),
            row.observation.value_display.as_str(),
            cell(row.q1),
            cell(row.q2),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

/// Current verdicts of the configured assessor, summarised against the
/// registered observations.
pub fn current_report(project: &Project, obs: &[Observation]) -> Result<AssessmentReport> {
    let store = store::load(&project.root)?;
    let judgments: Vec<Judgment> = store
        .current_for(&project.state.assessment.assessor)
        .cloned()
        .collect();
    Ok(summarize(obs, &judgments))
}

pub fn assess(project: &mut Project, input: AssessInput<'_>, now: NaiveDateTime) -> Result<Outcome> {
    let mut out = Outcome::default();
    let obs = observations(project)?;
    let assessor = project.state.assessment.assessor.clone();
    let new = match input {
        AssessInput::File(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
            read_verdict_csv(&text, path, &assessor, now)?
        }
        AssessInput::Interactive { input, output } => {
            prompt_verdicts(&obs, population(&project.state), &assessor, now, input, output)?
        }
    };
    let mut store = store::load(&project.root)?;
    // Validate everything before touching the store files.
    let mut staged = store.clone();
    for j in &new {
        staged.record(j.clone(), &obs)?;
    }
    store::persist(&project.root, &new, &staged)?;
    store = staged;

    let judgments: Vec<Judgment> = store.current_for(&assessor).cloned().collect();
    let report = summarize(&obs, &judgments);
    let md = report.to_markdown();
    let md_path = project.register("assessment_report", "md", md.as_bytes())?;
    project.register("assessment_csv", "csv", report_csv(&report).as_bytes())?;
    let summary = format!(
        "{} verdicts recorded; {} of {} observations pending; {} discrepancies",
        new.len(),
        report.pending.len(),
        report.rows.len(),
        report.discrepancies.len()
    );
    let status = if report.rows.is_empty() || !report.pending.is_empty() {
        PhaseStatus::InProgress
    } else {
        PhaseStatus::Done
    };
    project.note_run(Phase::Evaluation, "assess", summary.clone(), status);
    project.save()?;
    if obs.is_empty() {
        out.warn("the model yields no observations; the report has no rows");
    }
    out.say(summary);
    out.say(format!("assessment report: {}", md_path.display()));
    Ok(out)
}

const EXPECTED: [(&str, &str); 8] = [
    ("raw_log", "simulate"),
    ("event_log", "convert"),
    ("stats", "stats"),
    ("filtered_log", "filter"),
    ("model_json", "discover"),
    ("model_dot", "discover"),
    ("observations", "discover"),
    ("assessment_report", "assess"),
];

fn stats_table(out: &mut String, s: &LogStats) {
    let ts =
        |t: Option<NaiveDateTime>| t.map_or_else(|| "n/a".to_string(), |t| t.format("%Y-%m-%d").to_string());
    out.push_str("| Measure | Value |\n|---|---|\n");
    let _ = writeln!(out, "| events | {} |", s.events);
    let _ = writeln!(out, "| cases | {} |", s.cases);
    let _ = writeln!(out, "| activities | {} |", s.activities);
    let _ = writeln!(
        out,
        "| events per case (min / median / max) | {} / {} / {} |",
        s.events_per_case.min, s.events_per_case.median, s.events_per_case.max
    );
    let _ = writeln!(out, "| first event | {} |", ts(s.first_timestamp));
    let _ = writeln!(out, "| last event | {} |", ts(s.last_timestamp));
    let _ = writeln!(
        out,
        "| cases with same-day events | {} |",
        s.cases_with_duplicate_timestamps
    );
    let _ = writeln!(out, "| unknown labels | {} |", s.label_violations.len());
    out.push('\n');
}

fn phase_header(out: &mut String, project: &Project, n: usize, phase: Phase) {
    let record = project.state.phases.get(phase);
    let _ = writeln!(out, "## {n}. {}\n", phase.title());
    let _ = writeln!(out, "Status: {}\n", record.status.as_str());
    for (cmd, summary) in &record.runs {
        let _ = writeln!(out, "- `{cmd}`: {summary}");
    }
    if !record.runs.is_empty() {
        out.push('\n');
    }
    for note in &record.notes {
        let _ = writeln!(out, "> {note}");
    }
    if !record.notes.is_empty() {
        out.push('\n');
    }
    for item in &record.checklist {
        let _ = writeln!(out, "- [{}] {}", if item.done { "x" } else { " " }, item.item);
    }
    if !record.checklist.is_empty() {
        out.push('\n');
    }
}

fn artifact_ref(project: &Project, name: &str) -> String {
    project
        .artifact(name)
        .map_or_else(|| "pending".to_string(), |e| format!("`{}`", e.path))
}

fn missing_artifacts(project: &Project) -> Vec<String> {
    EXPECTED
        .iter()
        .filter(|(name, _)| project.artifact(name).is_none())
        .map(|(name, producer)| format!("{name} (run `abspm {producer}`)"))
        .collect()
}

/// Builds the project report. Missing inputs leave their sections marked
/// pending and are listed as warnings.
pub fn render_report(project: &Project) -> Result<(String, Vec<String>)> {
    let state = &project.state;
    let missing = missing_artifacts(project);
    let mut out = String::new();
    out.push_str("# Simulation assessment report\n\n");

    phase_header(&mut out, project, 1, Phase::ContextualUnderstanding);

    phase_header(&mut out, project, 2, Phase::DataUnderstanding);
    let sim = &state.simulation;
    out.push_str("### Simulation configuration\n\n| Parameter | Value |\n|---|---|\n");
    let _ = writeln!(out, "| grid | {} x {} |", sim.grid_width, sim.grid_height);
    let _ = writeln!(out, "| density | {} |", sim.density);
    let _ = writeln!(out, "| agents | {} |", sim.agent_count());
    let _ = writeln!(out, "| groups | {} |", sim.group_count);
    let _ = writeln!(out, "| tolerance | {} |", sim.tolerance);
    let _ = writeln!(out, "| max steps | {} |", sim.max_steps);
    let _ = writeln!(out, "| seed | {} |", sim.seed);
    let _ = writeln!(out, "| base date | {} |", sim.base_date.format("%Y-%m-%d"));
    out.push('\n');
    let _ = writeln!(out, "Raw log: {}\n", artifact_ref(project, "raw_log"));
    out.push_str("### Event log statistics\n\n");
    if project.artifact("stats").is_some() {
        let s: LogStats = json_artifact(project, "stats", "stats")?;
        stats_table(&mut out, &s);
    } else {
        out.push_str("Status: pending\n\n");
    }

    phase_header(&mut out, project, 3, Phase::DataPreparation);
    let _ = writeln!(out, "Event log: {}\n", artifact_ref(project, "event_log"));
    let f = &state.filter;
    out.push_str("### Filter\n\n| Criterion | Value |\n|---|---|\n");
    let date =
        |d: Option<NaiveDate>| d.map_or_else(|| "open".to_string(), |d| d.format("%Y-%m-%d").to_string());
    match f.timeframe {
        Some(tf) => {
            let _ = writeln!(out, "| timeframe | {} to {} |", date(tf.from), date(tf.to));
        }
        None => out.push_str("| timeframe | none |\n"),
    }
    let _ = writeln!(
        out,
        "| case duration | {} |",
        f.max_case_duration_days
            .map_or_else(|| "any".to_string(), |d| format!("< {d} days"))
    );
    let _ = writeln!(
        out,
        "| events per case | {} |",
        f.max_events_per_case
            .map_or_else(|| "any".to_string(), |n| format!("<= {n}"))
    );
    out.push('\n');
    out.push_str("### Filtered log statistics\n\n");
    if project.artifact("filtered_stats").is_some() {
        let s: LogStats = json_artifact(project, "filtered_stats", "filter")?;
        stats_table(&mut out, &s);
    } else {
        out.push_str("Status: pending\n\n");
    }

    phase_header(&mut out, project, 4, Phase::Modeling);
    let a = &state.abstraction;
    let _ = writeln!(
        out,
        "Abstraction: {}% activities, {}% paths, {} mode.\n",
        a.activity_ratio * 100.0,
        a.path_ratio * 100.0,
        match a.mode {
            AbstractionMode::FrequencyRank => "frequency rank",
            AbstractionMode::Fuzzy => "fuzzy",
        }
    );
    let _ = writeln!(
        out,
        "Primary indicator: {}; secondary indicator: {}.\n",
        state.rendering.primary, state.rendering.secondary
    );
    if let Some(path) = project.artifact_path("model_json") {
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let model = parse_json(&text).map_err(|e| Error::parse(&path, e.line() as u64, e.to_string()))?;
        let _ = writeln!(
            out,
            "Model: {} activities, {} paths over {} cases.\n",
            model.nodes.len(),
            model.edges.len(),
            model.total_cases
        );
    }
    let _ = writeln!(out, "Model file: {}\n", artifact_ref(project, "model_json"));
    let _ = writeln!(out, "Rendering: {}\n", artifact_ref(project, "model_dot"));

    phase_header(&mut out, project, 5, Phase::Evaluation);
    match project.artifact_path("assessment_report") {
        Some(path) => {
            let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
            out.push_str("### Face validity\n\n");
            let _ = writeln!(out, "Population named in question 2: {}.\n", population(state));
            out.push_str(&text);
            out.push('\n');
        }
        None => out.push_str("Assessment: pending\n\n"),
    }

    phase_header(&mut out, project, 6, Phase::Deployment);

    out.push_str("## Artifacts\n\n| Name | File | SHA-256 |\n|---|---|---|\n");
    for (name, e) in &state.artifacts {
        if name == "report" {
            continue;
        }
        let _ = writeln!(out, "| {name} | `{}` | `{}` |", e.path, e.sha256);
    }
    out.push('\n');
    if !missing.is_empty() {
        out.push_str("## Gaps\n\n");
        for m in &missing {
            let _ = writeln!(out, "- {m}: pending");
        }
    }
    Ok((out, missing))
}

pub fn report_cmd(project: &mut Project, seed: Option<u64>) -> Result<Outcome> {
    let mut out = Outcome::default();
    seed_check(project, seed, &mut out);
    let gaps = missing_artifacts(project).len();
    let summary = if gaps == 0 {
        "report assembled".to_string()
    } else {
        format!(
            "report assembled with {gaps} gap{}",
            if gaps == 1 { "" } else { "s" }
        )
    };
    // Noted before rendering so that re-running yields the same document.
    project.note_run(
        Phase::Deployment,
        "report",
        summary.clone(),
        PhaseStatus::InProgress,
    );
    let (text, missing) = render_report(project)?;
    let path = project.register("report", "md", text.as_bytes())?;
    project.save()?;
    for m in missing {
        out.warn(format!("missing artifact: {m}"));
    }
    out.say(summary);
    out.say(format!("report: {}", path.display()));
    Ok(out)
}

//! Project file (`abspm.toml`) and the content-addressed artifact registry.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use abspm_core::discovery::{AbstractionSpec, Indicator};
use abspm_core::log::FilterSpec;
use abspm_core::sim::SimConfig;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const PROJECT_FILE: &str = "abspm.toml";
pub const ARTIFACT_DIR: &str = "artifacts";
pub const PAPER_OUTLIER: &str = "paper-outlier";
const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseStatus {
    #[default]
    Pending,
    InProgress,
    Done,
}

impl PhaseStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            PhaseStatus::Pending => "pending",
            PhaseStatus::InProgress => "in_progress",
            PhaseStatus::Done => "done",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChecklistItem {
    pub item: String,
    #[serde(default)]
    pub done: bool,
}

impl ChecklistItem {
    fn open(item: &str) -> Self {
        ChecklistItem {
            item: item.into(),
            done: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct PhaseRecord {
    pub status: PhaseStatus,
    /// Free-text notes kept by the analyst.
    pub notes: Vec<String>,
    pub checklist: Vec<ChecklistItem>,
    /// Latest summary per command run in this phase.
    pub runs: BTreeMap<String, String>,
}

impl PhaseRecord {
    fn with_checklist(items: &[&str]) -> Self {
        PhaseRecord {
            checklist: items.iter().map(|i| ChecklistItem::open(i)).collect(),
            ..PhaseRecord::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Phase {
    ContextualUnderstanding,
    DataUnderstanding,
    DataPreparation,
    Modeling,
    Evaluation,
    Deployment,
}

impl Phase {
    pub const ALL: [Phase; 6] = [
        Phase::ContextualUnderstanding,
        Phase::DataUnderstanding,
        Phase::DataPreparation,
        Phase::Modeling,
        Phase::Evaluation,
        Phase::Deployment,
    ];

    pub fn title(self) -> &'static str {
        match self {
            Phase::ContextualUnderstanding => "Contextual understanding",
            Phase::DataUnderstanding => "Data understanding",
            Phase::DataPreparation => "Data preparation",
            Phase::Modeling => "Modeling",
            Phase::Evaluation => "Evaluation",
            Phase::Deployment => "Deployment",
        }
    }
}

/// Progress of the six methodology phases. Order is advisory only.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Phases {
    pub contextual_understanding: PhaseRecord,
    pub data_understanding: PhaseRecord,
    pub data_preparation: PhaseRecord,
    pub modeling: PhaseRecord,
    pub evaluation: PhaseRecord,
    pub deployment: PhaseRecord,
}

impl Default for Phases {
    fn default() -> Self {
        Phases {
            contextual_understanding: PhaseRecord::with_checklist(&[
                "State the modelled system and the questions the simulation should answer",
                "Name the domain expert who will judge plausibility",
                "Agree on the indicators to present",
                "Draft the project plan: timeline, steps, resources",
            ]),
            data_understanding: PhaseRecord::default(),
            data_preparation: PhaseRecord::default(),
            modeling: PhaseRecord::default(),
            evaluation: PhaseRecord::default(),
            deployment: PhaseRecord::with_checklist(&[
                "Review the assessment report with the expert",
                "Decide which findings require model changes",
                "Plan the next iteration",
            ]),
        }
    }
}

impl Phases {
    pub fn get(&self, phase: Phase) -> &PhaseRecord {
        match phase {
            Phase::ContextualUnderstanding => &self.contextual_understanding,
            Phase::DataUnderstanding => &self.data_understanding,
            Phase::DataPreparation => &self.data_preparation,
            Phase::Modeling => &self.modeling,
            Phase::Evaluation => &self.evaluation,
            Phase::Deployment => &self.deployment,
        }
    }

    pub fn get_mut(&mut self, phase: Phase) -> &mut PhaseRecord {
        match phase {
            Phase::ContextualUnderstanding => &mut self.contextual_understanding,
            Phase::DataUnderstanding => &mut self.data_understanding,
            Phase::DataPreparation => &mut self.data_preparation,
            Phase::Modeling => &mut self.modeling,
            Phase::Evaluation => &mut self.evaluation,
            Phase::Deployment => &mut self.deployment,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Rendering {
    pub primary: Indicator,
    pub secondary: Indicator,
}

impl Default for Rendering {
    fn default() -> Self {
        Rendering {
            primary: Indicator::CaseFrequency,
            secondary: Indicator::MaxRepetitions,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AssessmentSettings {
    pub indicators: Vec<Indicator>,
    /// Activities and paths per indicator.
    pub top_k: usize,
    pub assessor: String,
    /// Population named in the second question; the agent count when unset.
    pub population: Option<u64>,
}

impl Default for AssessmentSettings {
    fn default() -> Self {
        AssessmentSettings {
            indicators: vec![Indicator::CaseFrequency, Indicator::MaxRepetitions],
            top_k: 3,
            assessor: "expert".into(),
            population: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArtifactEntry {
    /// Relative to the project directory.
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ProjectState {
    pub version: u32,
    pub simulation: SimConfig,
    /// Filter applied by `filter` and by the server at start-up.
    pub filter: FilterSpec,
    pub filter_presets: BTreeMap<String, FilterSpec>,
    pub abstraction: AbstractionSpec,
    pub rendering: Rendering,
    pub assessment: AssessmentSettings,
    pub phases: Phases,
    pub artifacts: BTreeMap<String, ArtifactEntry>,
}

impl Default for ProjectState {
    fn default() -> Self {
        let simulation = SimConfig::default();
        let mut filter_presets = BTreeMap::new();
        filter_presets.insert(
            PAPER_OUTLIER.to_string(),
            FilterSpec::paper_outlier(simulation.base_date),
        );
        ProjectState {
            version: FORMAT_VERSION,
            simulation,
            filter: FilterSpec::default(),
            filter_presets,
            abstraction: AbstractionSpec::default(),
            rendering: Rendering::default(),
            assessment: AssessmentSettings::default(),
            phases: Phases::default(),
            artifacts: BTreeMap::new(),
        }
    }
}

/// Named outputs and the artifacts computed from them. Registering an
/// artifact unregisters everything downstream of it.
const DEPENDENCIES: &[(&str, &[&str])] = &[
    ("event_log", &["raw_log"]),
    ("event_log_csv", &["raw_log"]),
    ("stats", &["event_log"]),
    ("filtered_log", &["event_log"]),
    ("filtered_stats", &["event_log"]),
    ("model_json", &["event_log", "filtered_log"]),
    ("model_dot", &["event_log", "filtered_log"]),
    ("observations", &["event_log", "filtered_log"]),
    ("assessment_report", &["observations"]),
    ("assessment_csv", &["observations"]),
    (
        "report",
        &[
            "raw_log",
            "event_log",
            "stats",
            "filtered_log",
            "observations",
            "assessment_report",
        ],
    ),
];

fn downstream(name: &str) -> Vec<&'static str> {
    let mut out: Vec<&'static str> = Vec::new();
    let mut frontier = vec![name.to_string()];
    while let Some(n) = frontier.pop() {
        for (art, deps) in DEPENDENCIES {
            if deps.contains(&n.as_str()) && !out.contains(art) {
                out.push(art);
                frontier.push(art.to_string());
            }
        }
    }
    out
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes `bytes` next to `path` and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let tmp = path.with_extension(format!(
        "{}.tmp",
        path.extension().and_then(|e| e.to_str()).unwrap_or("")
    ));
    let mut f = fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
    f.write_all(bytes).map_err(|e| Error::io(&tmp, e))?;
    f.sync_all().map_err(|e| Error::io(&tmp, e))?;
    drop(f);
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

/// A project directory and its loaded state.
#[derive(Debug, Clone)]
pub struct Project {
    pub root: PathBuf,
    pub state: ProjectState,
}

impl Project {
    pub fn file(root: &Path) -> PathBuf {
        root.join(PROJECT_FILE)
    }

    /// Creates a project with default settings. Refuses to overwrite an
    /// existing project unless `force` is set.
    pub fn init(root: &Path, force: bool) -> Result<Project> {
        let file = Self::file(root);
        if file.exists() && !force {
            return Err(Error::Precondition(format!(
                "{} already exists; pass --force to overwrite",
                file.display()
            )));
        }
        let project = Project {
            root: root.to_path_buf(),
            state: ProjectState::default(),
        };
        project.save()?;
        Ok(project)
    }

    /// Loads the project and checks every registered artifact. The returned
    /// warnings name missing or modified files.
    pub fn open(root: &Path) -> Result<(Project, Vec<String>)> {
        let file = Self::file(root);
        if !file.exists() {
            return Err(Error::Precondition(format!(
                "no project at {}; run `abspm init` first",
                root.display()
            )));
        }
        let text = fs::read_to_string(&file).map_err(|e| Error::io(&file, e))?;
        let state: ProjectState = toml::from_str(&text).map_err(|e| {
            let line = e.span().map_or(0, |s| {
                text[..s.start.min(text.len())].matches('\n').count() as u64 + 1
            });
            Error::parse(&file, line, e.message().to_string())
        })?;
        let project = Project {
            root: root.to_path_buf(),
            state,
        };
        let warnings = project.check_artifacts();
        Ok((project, warnings))
    }

    pub fn check_artifacts(&self) -> Vec<String> {
        let mut warnings = Vec::new();
        for (name, entry) in &self.state.artifacts {
            let path = self.root.join(&entry.path);
            match fs::read(&path) {
                Ok(bytes) if sha256_hex(&bytes) == entry.sha256 => {}
                Ok(_) => warnings.push(format!(
                    "artifact `{name}` ({}) changed since it was registered",
                    entry.path
                )),
                Err(_) => warnings.push(format!("artifact `{name}` ({}) is missing", entry.path)),
            }
        }
        warnings
    }

    pub fn save(&self) -> Result<()> {
        let text = toml::to_string_pretty(&self.state).map_err(|e| Error::Internal(e.to_string()))?;
        write_atomic(&Self::file(&self.root), text.as_bytes())
    }

    pub fn artifact(&self, name: &str) -> Option<&ArtifactEntry> {
        self.state.artifacts.get(name)
    }

    pub fn artifact_path(&self, name: &str) -> Option<PathBuf> {
        self.artifact(name).map(|e| self.root.join(&e.path))
    }

    /// Contents of a registered artifact, or a precondition error naming the
    /// command that produces it.
    pub fn read_artifact(&self, name: &str, producer: &str) -> Result<(PathBuf, Vec<u8>)> {
        let path = self.artifact_path(name).ok_or_else(|| {
            Error::Precondition(format!("missing artifact `{name}`; run `abspm {producer}` first"))
        })?;
        let bytes = fs::read(&path).map_err(|e| Error::io(&path, e))?;
        Ok((path, bytes))
    }

    /// Stores `bytes` as `artifacts/{name}-{digest}.{ext}` and registers it.
    /// Identical content maps to the same file, so nothing registered is ever
    /// rewritten with different bytes. Does not save the project file.
    pub fn register(&mut self, name: &str, ext: &str, bytes: &[u8]) -> Result<PathBuf> {
        let digest = sha256_hex(bytes);
        let rel = format!("{ARTIFACT_DIR}/{name}-{}.{ext}", &digest[..12]);
        let path = self.root.join(&rel);
        let unchanged = fs::read(&path).map(|b| b == bytes).unwrap_or(false);
        if !unchanged {
            write_atomic(&path, bytes)?;
        }
        let previous = self.state.artifacts.insert(
            name.to_string(),
            ArtifactEntry {
                path: rel,
                sha256: digest,
            },
        );
        if previous.as_ref().map(|p| &p.sha256) != self.state.artifacts.get(name).map(|e| &e.sha256) {
            for dep in downstream(name) {
                self.state.artifacts.remove(dep);
            }
        }
        Ok(path)
    }

    /// Records a command summary on its phase and bumps the phase status.
    pub fn note_run(&mut self, phase: Phase, command: &str, summary: String, status: PhaseStatus) {
        let record = self.state.phases.get_mut(phase);
        record.runs.insert(command.to_string(), summary);
        if record.status != PhaseStatus::Done || status == PhaseStatus::Done {
            record.status = status;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip_through_toml() {
        let state = ProjectState::default();
        let text = toml::to_string_pretty(&state).unwrap();
        let back: ProjectState = toml::from_str(&text).unwrap();
        assert_eq!(back, state);
        assert!(text.contains("tolerance = 0.55"), "{text}");
        assert!(text.contains("density = 0.7"));
        assert!(text.contains("max_steps = 100"));
    }

    #[test]
    fn paper_outlier_preset_present() {
        let state = ProjectState::default();
        let p = &state.filter_presets[PAPER_OUTLIER];
        assert_eq!(p.max_events_per_case, Some(25));
        assert_eq!(p.max_case_duration_days, Some(90.0));
        let tf = p.timeframe.unwrap();
        assert_eq!(tf.from.unwrap().to_string(), "2023-10-24");
        assert_eq!(tf.to, None);
    }

    #[test]
    fn reinit_refused_without_force() {
        let dir = tempfile::tempdir().unwrap();
        Project::init(dir.path(), false).unwrap();
        let err = Project::init(dir.path(), false).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        Project::init(dir.path(), true).unwrap();
    }

    #[test]
    fn registry_detects_tampering_and_invalidates_downstream() {
        let dir = tempfile::tempdir().unwrap();
        let mut p = Project::init(dir.path(), false).unwrap();
        let raw = p.register("raw_log", "csv", b"a").unwrap();
        p.register("event_log", "xes", b"b").unwrap();
        p.register("model_json", "json", b"c").unwrap();
        // Same content again keeps downstream entries.
        p.register("raw_log", "csv", b"a").unwrap();
        assert!(p.artifact("model_json").is_some());
        p.save().unwrap();

        fs::write(&raw, b"tampered").unwrap();
        let (p2, warnings) = Project::open(dir.path()).unwrap();
        assert_eq!(warnings.len(), 1, "{warnings:?}");
        assert!(warnings[0].contains("raw_log"));

        let mut p2 = p2;
        let new_raw = p2.register("raw_log", "csv", b"a2").unwrap();
        assert_ne!(new_raw, raw);
        assert!(p2.artifact("event_log").is_none());
        assert!(p2.artifact("model_json").is_none());
    }

    #[test]
    fn open_missing_project_is_precondition() {
        let dir = tempfile::tempdir().unwrap();
        assert_eq!(Project::open(dir.path()).unwrap_err().exit_code(), 2);
    }
}

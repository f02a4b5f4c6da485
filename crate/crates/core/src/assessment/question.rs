use alloc::format;
use alloc::string::String;

use super::observation::Observation;

pub const QUESTION_1: &str =
    "Does the obtained performance indicator value accurately reflect the real-world system being modeled?";

/// The two face-validity questions for an observation. The second one puts
/// the value in the context of the unfiltered population.
pub fn render_questions(_observation: &Observation, population: u64) -> (String, String) {
    let noun = if population == 1 { "agent" } else { "agents" };
    let q2 = format!(
        "Given an overall population size of {population} {noun}, can the obtained performance indicator value be considered a plausible representation?"
    );
    (String::from(QUESTION_1), q2)
}

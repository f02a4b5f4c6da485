use alloc::format;
use alloc::string::String;

use chrono::NaiveDate;
use thiserror::Error;

use crate::num::floor_count;

/// Errors raised while configuring or running a simulation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error("step {step}: no empty cell available for agent {agent_id}")]
    NoEmptyCell { step: u64, agent_id: u32 },
    #[error("simulation already terminated")]
    Terminated,
}

/// Parameters of one simulation run.
///
/// The defaults reproduce the published experimental setup: a 20 by 20 grid,
/// 70% of cells occupied, a uniform tolerance of 0.55 and at most 100 steps.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct SimConfig {
    pub grid_width: u32,
    pub grid_height: u32,
    /// Occupied cells over total cells.
    pub density: f64,
    /// Largest tolerated share of dissimilar neighbours.
    pub tolerance: f64,
    pub group_count: u32,
    pub max_steps: u64,
    pub seed: u64,
    /// Emit one status record per agent at step 0 so every agent owns a case.
    pub emit_initial_status: bool,
    /// Calendar day of step 0.
    pub base_date: NaiveDate,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            grid_width: 20,
            grid_height: 20,
            density: 0.70,
            tolerance: 0.55,
            group_count: 2,
            max_steps: 100,
            seed: 0,
            emit_initial_status: true,
            base_date: NaiveDate::from_ymd_opt(2023, 10, 17).expect("valid date"),
        }
    }
}

impl SimConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn cell_count(&self) -> usize {
        self.grid_width as usize * self.grid_height as usize
    }

    /// `floor(density * width * height)`.
    pub fn agent_count(&self) -> usize {
        floor_count(self.density * self.cell_count() as f64)
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |msg: String| Err(SimError::InvalidConfig(msg));
        if self.grid_width == 0 || self.grid_height == 0 {
            return bad(format!(
                "grid must be at least 1x1, got {}x{}",
                self.grid_width, self.grid_height
            ));
        }
        if !(self.density > 0.0 && self.density <= 1.0) {
            return bad(format!("density must lie in (0, 1], got {}", self.density));
        }
        if !(0.0..=1.0).contains(&self.tolerance) {
            return bad(format!("tolerance must lie in [0, 1], got {}", self.tolerance));
        }
        if self.group_count < 2 {
            return bad(format!("need at least 2 groups, got {}", self.group_count));
        }
        if self.max_steps == 0 {
            return bad("max_steps must be positive".into());
        }
        let n = self.agent_count();
        if n == 0 {
            return bad("density yields zero agents".into());
        }
        if n > self.cell_count() {
            return bad(format!("{n} agents exceed {} cells", self.cell_count()));
        }
        if n < self.group_count as usize {
            return bad(format!("{n} agents cannot populate {} groups", self.group_count));
        }
        Ok(())
    }
}

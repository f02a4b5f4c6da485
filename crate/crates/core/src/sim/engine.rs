use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{SimConfig, SimError};
use super::record::{Agent, Location, RawEventRecord, RecordKind, Status};

/// Status for a census of `neighbors` occupied cells, `similar` of them the
/// agent's own group. Agents without neighbours are happy.
pub fn classify(neighbors: u32, similar: u32, tolerance: f64) -> Status {
    debug_assert!(similar <= neighbors && neighbors <= 8);
    if neighbors == 0 {
        return Status::Happy;
    }
    let dissimilar = (neighbors - similar) as f64 / neighbors as f64;
    if dissimilar > tolerance {
        Status::Unhappy
    } else {
        Status::Happy
    }
}

/// Mutable simulation state between steps.
#[derive(Debug, Clone)]
pub struct SimState {
    config: SimConfig,
    rng: ChaCha8Rng,
    /// Row-major; holds an index into `agents`.
    cells: Vec<Option<usize>>,
    agents: Vec<Agent>,
    step: u64,
    next_event_no: u64,
    initial_records: Vec<RawEventRecord>,
}

impl SimState {
    /// Places `floor(density * W * H)` agents on distinct random cells with
    /// balanced, shuffled group sizes.
    pub fn new(config: SimConfig) -> Result<Self, SimError> {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let n = config.agent_count();
        let (w, h) = (config.grid_width, config.grid_height);

        let mut free: Vec<Location> = (0..h)
            .flat_map(|y| (0..w).map(move |x| Location::new(x, y)))
            .collect();
        free.shuffle(&mut rng);
        let mut groups: Vec<u32> = (0..n as u32).map(|i| i % config.group_count).collect();
        groups.shuffle(&mut rng);

        let mut cells = alloc::vec![None; config.cell_count()];
        let agents: Vec<Agent> = free
            .iter()
            .zip(&groups)
            .enumerate()
            .map(|(idx, (&location, &group))| {
                cells[(location.y * w + location.x) as usize] = Some(idx);
                Agent {
                    agent_id: idx as u32 + 1,
                    group,
                    location,
                    status: Status::Happy,
                }
            })
            .collect();

        let mut state = SimState {
            config,
            rng,
            cells,
            agents,
            step: 0,
            next_event_no: 1,
            initial_records: Vec::new(),
        };
        for idx in 0..state.agents.len() {
            let (ids, similar) = state.census(idx);
            state.agents[idx].status = classify(ids.len() as u32, similar, state.config.tolerance);
        }
        if state.config.emit_initial_status {
            let mut counter = 0;
            for idx in 0..state.agents.len() {
                counter += 1;
                let rec = state.status_record(idx, 0, counter);
                state.initial_records.push(rec);
            }
        }
        Ok(state)
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    /// Index of the last executed step; 0 before the first [`run_step`](Self::run_step).
    pub fn step(&self) -> u64 {
        self.step
    }

    /// Records emitted during initialisation (step 0). Drained by the first call.
    pub fn take_initial_records(&mut self) -> Vec<RawEventRecord> {
        core::mem::take(&mut self.initial_records)
    }

    pub fn unhappy_count(&self) -> usize {
        self.agents.iter().filter(|a| !a.status.is_happy()).count()
    }

    pub fn agent_at(&self, loc: Location) -> Option<&Agent> {
        self.cells[self.cell_index(loc)].map(|i| &self.agents[i])
    }

    fn cell_index(&self, loc: Location) -> usize {
        (loc.y * self.config.grid_width + loc.x) as usize
    }

    /// Occupied Moore neighbours of agent `idx` in scan order (row above
    /// first, left to right) and how many share its group.
    fn census(&self, idx: usize) -> (Vec<u32>, u32) {
        let agent = &self.agents[idx];
        let (w, h) = (self.config.grid_width as i64, self.config.grid_height as i64);
        let (cx, cy) = (agent.location.x as i64, agent.location.y as i64);
        let mut ids = Vec::with_capacity(8);
        let mut similar = 0;
        for dy in -1..=1i64 {
            for dx in -1..=1i64 {
                if dx == 0 && dy == 0 {
                    continue;
                }
                let (x, y) = (cx + dx, cy + dy);
                if x < 0 || y < 0 || x >= w || y >= h {
                    continue;
                }
                if let Some(other) = self.cells[(y * w + x) as usize] {
                    let other = &self.agents[other];
                    ids.push(other.agent_id);
                    if other.group == agent.group {
                        similar += 1;
                    }
                }
            }
        }
        (ids, similar)
    }

    fn status_record(&mut self, idx: usize, step: u64, counter: u32) -> RawEventRecord {
        let (neighbor_ids, similar_count) = self.census(idx);
        let agent = &self.agents[idx];
        let rec = RawEventRecord {
            event_no: self.next_event_no,
            step,
            step_counter: counter,
            agent_id: agent.agent_id,
            kind: RecordKind::Status,
            prev_loc: None,
            new_loc: agent.location,
            neighbor_ids,
            similar_count,
            happy: agent.status.is_happy(),
        };
        self.next_event_no += 1;
        rec
    }

    /// Executes one step: moves every currently unhappy agent in ascending id
    /// order, then recomputes statuses and reports every flip.
    pub fn run_step(&mut self) -> Result<Vec<RawEventRecord>, SimError> {
        if self.step >= self.config.max_steps {
            return Err(SimError::Terminated);
        }
        let step = self.step + 1;
        let movers: Vec<usize> = (0..self.agents.len())
            .filter(|&i| !self.agents[i].status.is_happy())
            .collect();

        let mut records = Vec::new();
        let mut counter = 0u32;
        let w = self.config.grid_width;
        for idx in movers {
            let empty: Vec<usize> = (0..self.cells.len())
                .filter(|&c| self.cells[c].is_none())
                .collect();
            if empty.is_empty() {
                return Err(SimError::NoEmptyCell {
                    step,
                    agent_id: self.agents[idx].agent_id,
                });
            }
            let target = empty[self.rng.random_range(0..empty.len())];
            let prev = self.agents[idx].location;
            let prev_cell = self.cell_index(prev);
            self.cells[prev_cell] = None;
            self.cells[target] = Some(idx);
            let new_loc = Location::new(target as u32 % w, target as u32 / w);
            self.agents[idx].location = new_loc;

            let (neighbor_ids, similar_count) = self.census(idx);
            let happy = classify(neighbor_ids.len() as u32, similar_count, self.config.tolerance).is_happy();
            counter += 1;
            records.push(RawEventRecord {
                event_no: self.next_event_no,
                step,
                step_counter: counter,
                agent_id: self.agents[idx].agent_id,
                kind: RecordKind::Move,
                prev_loc: Some(prev),
                new_loc,
                neighbor_ids,
                similar_count,
                happy,
            });
            self.next_event_no += 1;
        }

        let fresh: Vec<Status> = (0..self.agents.len())
            .map(|idx| {
                let (ids, similar) = self.census(idx);
                classify(ids.len() as u32, similar, self.config.tolerance)
            })
            .collect();
        for (idx, status) in fresh.into_iter().enumerate() {
            if self.agents[idx].status != status {
                self.agents[idx].status = status;
                counter += 1;
                let rec = self.status_record(idx, step, counter);
                records.push(rec);
            }
        }
        self.step = step;
        Ok(records)
    }
}

/// Outcome of [`run`].
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub config: SimConfig,
    pub records: Vec<RawEventRecord>,
    pub final_grid: Vec<Agent>,
    pub steps_executed: u64,
    /// No agent was unhappy at termination.
    pub converged: bool,
}

/// Runs until every agent is happy or `max_steps` steps have executed.
pub fn run(config: &SimConfig) -> Result<SimResult, SimError> {
    run_to_end(SimState::new(config.clone())?)
}

fn run_to_end(mut state: SimState) -> Result<SimResult, SimError> {
    let mut records = state.take_initial_records();
    while state.unhappy_count() > 0 && state.step() < state.config.max_steps {
        records.extend(state.run_step()?);
    }
    Ok(SimResult {
        config: state.config.clone(),
        converged: state.unhappy_count() == 0,
        steps_executed: state.step(),
        final_grid: state.agents.clone(),
        records,
    })
}

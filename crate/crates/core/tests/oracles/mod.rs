//! Independent reference implementations used to check the library.
//!
//! Nothing here calls into the code paths it is checking: the simulator is a
//! straight-line rewrite on a 2-D array, the graph counter scans every
//! activity pair by brute force and the filter evaluates each predicate on its
//! own.

#![allow(dead_code)]

use std::collections::BTreeMap;

use abspm_core::chrono::{Duration, NaiveDate, NaiveDateTime};
use abspm_core::log::{Event, EventLog, FilterSpec, Timeframe, Trace};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `(event_no, step, step_counter, agent, is_move, prev, new, neighbours, similar, happy)`
pub type OracleRecord = (
    u64,
    u64,
    u32,
    u32,
    bool,
    Option<(u32, u32)>,
    (u32, u32),
    Vec<u32>,
    u32,
    bool,
);

pub struct OracleRun {
    pub records: Vec<OracleRecord>,
    pub steps: u64,
    pub converged: bool,
}

/// Straight-line Schelling run using the same random-draw protocol as the
/// library: shuffle all cells, shuffle balanced groups, then one uniform
/// draw over the row-major empty cells per move.
pub fn simulate(
    width: u32,
    height: u32,
    density: f64,
    tolerance: f64,
    groups: u32,
    max_steps: u64,
    seed: u64,
    initial: bool,
) -> OracleRun {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = (density * (width * height) as f64 + 1e-9).floor() as usize;
    let mut cells = Vec::new();
    for y in 0..height {
        for x in 0..width {
            cells.push((x, y));
        }
    }
    cells.shuffle(&mut rng);
    let mut group_of: Vec<u32> = (0..n as u32).map(|i| i % groups).collect();
    group_of.shuffle(&mut rng);

    // grid[y][x] = agent id, 0 for empty
    let mut grid = vec![vec![0u32; width as usize]; height as usize];
    let mut pos = vec![(0u32, 0u32); n + 1];
    let mut group = vec![0u32; n + 1];
    for k in 0..n {
        let id = k as u32 + 1;
        let (x, y) = cells[k];
        grid[y as usize][x as usize] = id;
        pos[id as usize] = (x, y);
        group[id as usize] = group_of[k];
    }

    let census = |grid: &Vec<Vec<u32>>, pos: &Vec<(u32, u32)>, id: u32| -> (Vec<u32>, u32) {
        let (x, y) = pos[id as usize];
        let mut ids = vec![];
        let mut same = 0;
        for yy in y as i64 - 1..=y as i64 + 1 {
            for xx in x as i64 - 1..=x as i64 + 1 {
                if (xx, yy) == (x as i64, y as i64)
                    || xx < 0
                    || yy < 0
                    || xx >= width as i64
                    || yy >= height as i64
                {
                    continue;
                }
                let other = grid[yy as usize][xx as usize];
                if other != 0 {
                    ids.push(other);
                    if group[other as usize] == group[id as usize] {
                        same += 1;
                    }
                }
            }
        }
        (ids, same)
    };
    let happy = |ids: &Vec<u32>, same: u32| {
        ids.is_empty() || ((ids.len() as u32 - same) as f64 / ids.len() as f64) <= tolerance
    };

    let mut status = vec![true; n + 1];
    for id in 1..=n as u32 {
        let (ids, same) = census(&grid, &pos, id);
        status[id as usize] = happy(&ids, same);
    }
    let mut records = Vec::new();
    let mut event_no = 0u64;
    if initial {
        for id in 1..=n as u32 {
            let (ids, same) = census(&grid, &pos, id);
            event_no += 1;
            records.push((
                event_no,
                0,
                id,
                id,
                false,
                None,
                pos[id as usize],
                ids,
                same,
                status[id as usize],
            ));
        }
    }

    let mut step = 0;
    while step < max_steps && status.iter().skip(1).any(|h| !h) {
        step += 1;
        let mut counter = 0;
        let movers: Vec<u32> = (1..=n as u32).filter(|&id| !status[id as usize]).collect();
        for id in movers {
            let mut empty = vec![];
            for y in 0..height {
                for x in 0..width {
                    if grid[y as usize][x as usize] == 0 {
                        empty.push((x, y));
                    }
                }
            }
            let target = empty[rng.random_range(0..empty.len())];
            let prev = pos[id as usize];
            grid[prev.1 as usize][prev.0 as usize] = 0;
            grid[target.1 as usize][target.0 as usize] = id;
            pos[id as usize] = target;
            let (ids, same) = census(&grid, &pos, id);
            let h = happy(&ids, same);
            counter += 1;
            event_no += 1;
            records.push((
                event_no,
                step,
                counter,
                id,
                true,
                Some(prev),
                target,
                ids,
                same,
                h,
            ));
        }
        let fresh: Vec<bool> = (0..=n as u32)
            .map(|id| {
                if id == 0 {
                    return true;
                }
                let (ids, same) = census(&grid, &pos, id);
                happy(&ids, same)
            })
            .collect();
        for id in 1..=n as u32 {
            if fresh[id as usize] != status[id as usize] {
                status[id as usize] = fresh[id as usize];
                let (ids, same) = census(&grid, &pos, id);
                counter += 1;
                event_no += 1;
                records.push((
                    event_no,
                    step,
                    counter,
                    id,
                    false,
                    None,
                    pos[id as usize],
                    ids,
                    same,
                    fresh[id as usize],
                ));
            }
        }
    }
    OracleRun {
        records,
        steps: step,
        converged: status.iter().skip(1).all(|h| *h),
    }
}

pub fn to_oracle(r: &abspm_core::sim::RawEventRecord) -> OracleRecord {
    (
        r.event_no,
        r.step,
        r.step_counter,
        r.agent_id,
        r.kind == abspm_core::sim::RecordKind::Move,
        r.prev_loc.map(|l| (l.x, l.y)),
        (r.new_loc.x, r.new_loc.y),
        r.neighbor_ids.clone(),
        r.similar_count,
        r.happy,
    )
}

/// Activity label for a record, built by string formatting alone.
pub fn label_of(r: &abspm_core::sim::RawEventRecord) -> String {
    match r.kind {
        abspm_core::sim::RecordKind::Move => "move_location".to_string(),
        abspm_core::sim::RecordKind::Status => format!(
            "change_{}_{}_{}",
            if r.happy { "happy" } else { "unhappy" },
            r.neighbor_ids.len(),
            r.similar_count
        ),
    }
}

pub fn base_date() -> NaiveDate {
    NaiveDate::from_ymd_opt(2023, 10, 17).unwrap()
}

/// Random log: up to `max_cases` cases of 1..=`max_events` events over a
/// five-letter alphabet, timestamps non-decreasing in whole hours.
pub fn random_log(rng: &mut ChaCha8Rng, max_cases: usize, max_events: usize) -> EventLog {
    const ALPHABET: [&str; 5] = ["a", "b", "c", "d", "e"];
    let cases = rng.random_range(1..=max_cases);
    let start = base_date().and_hms_opt(0, 0, 0).unwrap();
    let traces = (0..cases)
        .map(|c| {
            let n = rng.random_range(1..=max_events);
            let mut t = start + Duration::hours(rng.random_range(0..24 * 30));
            let events = (0..n)
                .map(|_| {
                    t += Duration::hours(rng.random_range(0..72));
                    Event::new(ALPHABET[rng.random_range(0..ALPHABET.len())], t)
                })
                .collect();
            Trace::new(format!("case{c}"), events)
        })
        .collect();
    EventLog::new(traces)
}

#[derive(Debug, PartialEq)]
pub struct OracleEdge {
    pub abs: usize,
    pub cases: usize,
    pub maxrep: usize,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub median: f64,
    pub total: f64,
}

/// Node metrics `(abs, cases, maxrep)` and edge metrics by exhaustive scan.
pub fn brute_force_dfg(
    log: &EventLog,
) -> (
    BTreeMap<String, (usize, usize, usize)>,
    BTreeMap<(String, String), OracleEdge>,
) {
    let mut alphabet: Vec<String> = vec![];
    for t in &log.traces {
        for e in &t.events {
            if !alphabet.contains(&e.activity) {
                alphabet.push(e.activity.clone());
            }
        }
    }
    let mut nodes = BTreeMap::new();
    for a in &alphabet {
        let per_case: Vec<usize> = log
            .traces
            .iter()
            .map(|t| t.events.iter().filter(|e| &e.activity == a).count())
            .collect();
        nodes.insert(
            a.clone(),
            (
                per_case.iter().sum(),
                per_case.iter().filter(|&&c| c > 0).count(),
                *per_case.iter().max().unwrap(),
            ),
        );
    }
    let mut edges = BTreeMap::new();
    for a in &alphabet {
        for b in &alphabet {
            let mut per_case = vec![];
            let mut durations = vec![];
            for t in &log.traces {
                let mut c = 0;
                for i in 0..t.events.len().saturating_sub(1) {
                    if &t.events[i].activity == a && &t.events[i + 1].activity == b {
                        c += 1;
                        let ms = (t.events[i + 1].timestamp - t.events[i].timestamp).num_milliseconds();
                        durations.push(ms as f64 / 86_400_000.0);
                    }
                }
                per_case.push(c);
            }
            if durations.is_empty() {
                continue;
            }
            let mut total = 0.0;
            for d in &durations {
                total += d;
            }
            let mut sorted = durations.clone();
            sorted.sort_by(|x, y| x.partial_cmp(y).unwrap());
            let k = sorted.len();
            let median = if k % 2 == 1 {
                sorted[k / 2]
            } else {
                (sorted[k / 2 - 1] + sorted[k / 2]) / 2.0
            };
            edges.insert(
                (a.clone(), b.clone()),
                OracleEdge {
                    abs: per_case.iter().sum(),
                    cases: per_case.iter().filter(|&&c| c > 0).count(),
                    maxrep: *per_case.iter().max().unwrap(),
                    min: sorted[0],
                    max: sorted[k - 1],
                    mean: total / k as f64,
                    median,
                    total,
                },
            );
        }
    }
    (nodes, edges)
}

/// Random filter spec over the window covered by [`random_log`].
pub fn random_filter(rng: &mut ChaCha8Rng) -> FilterSpec {
    let day = |rng: &mut ChaCha8Rng| base_date() + Duration::days(rng.random_range(0..60));
    let timeframe = rng.random_bool(0.6).then(|| {
        let from = rng.random_bool(0.8).then(|| day(rng));
        let to = rng.random_bool(0.5).then(|| day(rng)).map(|t| match from {
            Some(f) if t < f => f,
            _ => t,
        });
        Timeframe { from, to }
    });
    FilterSpec {
        timeframe,
        max_case_duration_days: rng.random_bool(0.6).then(|| rng.random_range(1..40) as f64),
        max_events_per_case: rng.random_bool(0.6).then(|| rng.random_range(1..20)),
    }
}

/// Case ids kept by evaluating each criterion on its own.
pub fn naive_filter(log: &EventLog, spec: &FilterSpec) -> Vec<String> {
    let mut kept = vec![];
    for t in &log.traces {
        let mut first: Option<NaiveDateTime> = None;
        let mut last: Option<NaiveDateTime> = None;
        for e in &t.events {
            if first.is_none() || e.timestamp < first.unwrap() {
                first = Some(e.timestamp);
            }
            if last.is_none() || e.timestamp > last.unwrap() {
                last = Some(e.timestamp);
            }
        }
        let (first, last) = (first.unwrap(), last.unwrap());
        let in_window = match spec.timeframe {
            None => true,
            Some(tf) => {
                let after = tf.from.is_none_or(|f| last.date() >= f);
                let before = tf.to.is_none_or(|to| first.date() <= to);
                after && before
            }
        };
        let short = match spec.max_case_duration_days {
            None => true,
            Some(d) => ((last - first).num_seconds() as f64) < d * 86_400.0,
        };
        let small = match spec.max_events_per_case {
            None => true,
            Some(m) => t.events.len() <= m,
        };
        if in_window && short && small {
            kept.push(t.case_id.clone());
        }
    }
    kept
}

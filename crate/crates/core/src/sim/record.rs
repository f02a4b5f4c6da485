use core::fmt;

use alloc::vec::Vec;

/// Grid cell, `x` is the column and `y` the row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Location {
    pub x: u32,
    pub y: u32,
}

impl Location {
    pub const fn new(x: u32, y: u32) -> Self {
        Location { x, y }
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Status {
    Happy,
    Unhappy,
}

impl Status {
    pub fn is_happy(self) -> bool {
        self == Status::Happy
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Agent {
    /// 1-based, stable for the whole run.
    pub agent_id: u32,
    pub group: u32,
    pub location: Location,
    pub status: Status,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum RecordKind {
    Move,
    Status,
}

impl RecordKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RecordKind::Move => "move",
            RecordKind::Status => "status",
        }
    }
}

/// One simulator occurrence: a relocation or a status flip.
///
/// The neighbourhood census (`neighbor_ids`, `similar_count`) is taken at
/// `new_loc` at the moment of emission.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawEventRecord {
    /// Global, 1-based, strictly increasing.
    pub event_no: u64,
    /// Simulated day.
    pub step: u64,
    /// 1-based position within `step`.
    pub step_counter: u32,
    pub agent_id: u32,
    pub kind: RecordKind,
    pub prev_loc: Option<Location>,
    pub new_loc: Location,
    pub neighbor_ids: Vec<u32>,
    pub similar_count: u32,
    pub happy: bool,
}

impl RawEventRecord {
    /// Occupied neighbour count.
    pub fn neighbor_count(&self) -> u32 {
        self.neighbor_ids.len() as u32
    }
}

use core::fmt;
use core::str::FromStr;

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use thiserror::Error;

/// Activity vocabulary of the simulator logs.
///
/// Status changes carry the neighbourhood census: `X` occupied neighbours of
/// which `Y` belong to the agent's own group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Activity {
    MoveLocation,
    ChangeHappy { neighbors: u8, similar: u8 },
    ChangeUnhappy { neighbors: u8, similar: u8 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("`{0}` is not a simulator activity label")]
pub struct ParseActivityError(pub String);

impl Activity {
    pub fn status(happy: bool, neighbors: u8, similar: u8) -> Self {
        if happy {
            Activity::ChangeHappy { neighbors, similar }
        } else {
            Activity::ChangeUnhappy { neighbors, similar }
        }
    }

    /// `(X, Y)` for status changes.
    pub fn census(&self) -> Option<(u8, u8)> {
        match *self {
            Activity::MoveLocation => None,
            Activity::ChangeHappy { neighbors, similar } | Activity::ChangeUnhappy { neighbors, similar } => {
                Some((neighbors, similar))
            }
        }
    }
}

impl fmt::Display for Activity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Activity::MoveLocation => f.write_str("move_location"),
            Activity::ChangeHappy { neighbors, similar } => {
                write!(f, "change_happy_{neighbors}_{similar}")
            }
            Activity::ChangeUnhappy { neighbors, similar } => {
                write!(f, "change_unhappy_{neighbors}_{similar}")
            }
        }
    }
}

impl FromStr for Activity {
    type Err = ParseActivityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseActivityError(s.to_string());
        if s == "move_location" {
            return Ok(Activity::MoveLocation);
        }
        let (happy, rest) = if let Some(rest) = s.strip_prefix("change_happy_") {
            (true, rest)
        } else if let Some(rest) = s.strip_prefix("change_unhappy_") {
            (false, rest)
        } else {
            return Err(err());
        };
        let (x, y) = rest.split_once('_').ok_or_else(err)?;
        let digit = |t: &str| -> Option<u8> {
            if t.len() == 1 {
                t.parse().ok()
            } else {
                None
            }
        };
        let (x, y) = (digit(x).ok_or_else(err)?, digit(y).ok_or_else(err)?);
        if y > x || x > 8 {
            return Err(err());
        }
        Ok(Activity::status(happy, x, y))
    }
}

/// All 91 well-formed labels: `move_location` plus both status changes for
/// every `0 <= Y <= X <= 8`.
pub fn activity_universe() -> Vec<Activity> {
    let mut all = alloc::vec![Activity::MoveLocation];
    for happy in [true, false] {
        for x in 0..=8u8 {
            for y in 0..=x {
                all.push(Activity::status(happy, x, y));
            }
        }
    }
    all
}

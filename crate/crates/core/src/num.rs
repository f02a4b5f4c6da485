//! Float rounding helpers; `core` has no `floor`/`ceil` without `std`.

/// Slack absorbing representation error in products like `0.7 * 400.0`.
const EPS: f64 = 1e-9;

/// `floor(x)` for non-negative `x`, tolerant of values a hair below an integer.
pub(crate) fn floor_count(x: f64) -> usize {
    if x <= 0.0 {
        return 0;
    }
    (x + EPS) as usize
}

/// `ceil(x)` for non-negative `x`, tolerant of values a hair above an integer.
pub(crate) fn ceil_count(x: f64) -> usize {
    if x <= 0.0 {
        return 0;
    }
    let v = x - EPS;
    let t = v as usize;
    if (t as f64) < v {
        t + 1
    } else {
        t
    }
}

/// Round half away from zero for non-negative values.
pub(crate) fn round_count(x: f64) -> u64 {
    if x <= 0.0 {
        0
    } else {
        (x + 0.5) as u64
    }
}

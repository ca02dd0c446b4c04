//! Circular angle helpers. Angles are radians measured from +x toward +y
//! (image y points down).

use std::f64::consts::{PI, TAU};

/// Angular tolerance used for axis correspondence, π/32.
pub const TH_A: f64 = PI / 32.0;

/// Slack for inclusive comparisons of computed angles.
pub(crate) const ANGLE_EPS: f64 = 1e-9;

/// Map into `[0, 2π)`.
pub fn wrap_2pi(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    // rem_euclid can return TAU itself for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Map into `(−π, π]`.
pub fn wrap_pi(a: f64) -> f64 {
    let r = wrap_2pi(a);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Smallest unsigned angle between two directions, in `[0, π]`.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    wrap_pi(a - b).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrapping() {
        assert_eq!(wrap_2pi(-PI / 2.0), 1.5 * PI);
        assert_eq!(wrap_2pi(TAU), 0.0);
        assert_eq!(wrap_2pi(-1e-18), 0.0);
        assert_eq!(wrap_pi(PI), PI);
        assert_eq!(wrap_pi(-PI), PI);
        assert!((wrap_pi(1.5 * PI) + 0.5 * PI).abs() < 1e-15);
        assert!((circular_distance(0.1, TAU - 0.1) - 0.2).abs() < 1e-12);
    }
}

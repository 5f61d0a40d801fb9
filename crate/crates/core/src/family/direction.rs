use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// A direction of S¹ given by a primitive integer vector.
///
/// All angular comparisons are sign tests on integer cross and dot
/// products; no angle is ever computed in floating point except for
/// display.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CircleDirection {
    x: i64,
    y: i64,
}

impl CircleDirection {
    /// Reduces `(x, y)` to its primitive representative. `None` for the zero vector.
    pub fn new(x: i64, y: i64) -> Option<Self> {
        if x == 0 && y == 0 {
            return None;
        }
        let g = x.gcd(&y);
        Some(CircleDirection { x: x / g, y: y / g })
    }

    pub const E1: CircleDirection = CircleDirection { x: 1, y: 0 };
    pub const E2: CircleDirection = CircleDirection { x: 0, y: 1 };

    pub fn x(self) -> i64 {
        self.x
    }

    pub fn y(self) -> i64 {
        self.y
    }

    pub fn norm_sq(self) -> i64 {
        self.x * self.x + self.y * self.y
    }

    pub fn cross(self, o: CircleDirection) -> i128 {
        self.x as i128 * o.y as i128 - self.y as i128 * o.x as i128
    }

    pub fn dot(self, o: CircleDirection) -> i128 {
        self.x as i128 * o.x as i128 + self.y as i128 * o.y as i128
    }

    /// Dot product with an integer offset.
    pub fn dot_offset(self, x: i64, y: i64) -> i128 {
        self.x as i128 * x as i128 + self.y as i128 * y as i128
    }

    pub fn neg(self) -> Self {
        CircleDirection {
            x: -self.x,
            y: -self.y,
        }
    }

    pub fn rot_ccw(self) -> Self {
        CircleDirection {
            x: -self.y,
            y: self.x,
        }
    }

    pub fn rot_cw(self) -> Self {
        CircleDirection {
            x: self.y,
            y: -self.x,
        }
    }

    /// 0 for angles in [0, π), 1 for [π, 2π), measured from `reference`.
    fn half_from(self, reference: CircleDirection) -> u8 {
        let c = reference.cross(self);
        if c > 0 || (c == 0 && reference.dot(self) > 0) {
            0
        } else {
            1
        }
    }

    /// Compares the counterclockwise angles of `a` and `b` measured from `self`.
    pub fn cmp_from(self, a: CircleDirection, b: CircleDirection) -> Ordering {
        let (ha, hb) = (a.half_from(self), b.half_from(self));
        if ha != hb {
            return ha.cmp(&hb);
        }
        // same half: a before b iff b is strictly counterclockwise of a
        match a.cross(b) {
            c if c > 0 => Ordering::Less,
            c if c < 0 => Ordering::Greater,
            _ => Ordering::Equal,
        }
    }

    /// Angular order on [0, 2π) starting at the positive x axis.
    pub fn angle_cmp(self, other: CircleDirection) -> Ordering {
        CircleDirection::E1.cmp_from(self, other)
    }

    /// True when `self` lies strictly inside the counterclockwise arc from `start` to `end`
    /// (with `start == end` meaning the whole circle minus that point).
    pub fn strictly_between(self, start: CircleDirection, end: CircleDirection) -> bool {
        if self == start || self == end {
            return false;
        }
        if start == end {
            return true;
        }
        start.cmp_from(self, end) == Ordering::Less
    }

    /// A primitive direction strictly inside the counterclockwise arc from `a` to `b`.
    pub fn strictly_inside(a: CircleDirection, b: CircleDirection) -> CircleDirection {
        if a == b {
            return a.neg();
        }
        let c = a.cross(b);
        let (sx, sy) = (a.x + b.x, a.y + b.y);
        if c > 0 {
            CircleDirection::new(sx, sy).expect("non-opposite sum is nonzero")
        } else if c == 0 {
            a.rot_ccw()
        } else {
            CircleDirection::new(-sx, -sy).expect("non-opposite sum is nonzero")
        }
    }

    /// Angle in radians in [0, 2π), for display only.
    pub fn angle(self) -> f64 {
        let t = (self.y as f64).atan2(self.x as f64);
        if t < 0.0 {
            t + std::f64::consts::TAU
        } else {
            t
        }
    }

    pub fn unit(self) -> (f64, f64) {
        let n = (self.norm_sq() as f64).sqrt();
        (self.x as f64 / n, self.y as f64 / n)
    }
}

/// Counterclockwise angular measure from `start` to `end` is at least π.
pub fn measure_at_least_pi(start: CircleDirection, end: CircleDirection) -> bool {
    if start == end {
        return true;
    }
    let c = start.cross(end);
    c < 0 || (c == 0 && start.dot(end) < 0)
}

impl fmt::Display for CircleDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

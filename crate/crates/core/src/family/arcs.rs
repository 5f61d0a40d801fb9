//! Exact subsets of the unit circle built from arcs with primitive-vector endpoints.
//!
//! Every set operation goes through the same cell decomposition: the
//! distinct endpoints of all operands, sorted by angle, split S¹ into
//! points and open gaps on which every operand has constant membership.
//! Rebuilding maximal runs of member cells yields the normalized form, so
//! normalization is idempotent and independent of insertion order.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::direction::{measure_at_least_pi, CircleDirection};

/// A counterclockwise arc from `start` to `end`.
///
/// `start == end` encodes either an isolated point (both endpoints closed)
/// or the whole circle minus that point (both open).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arc {
    pub start: CircleDirection,
    pub end: CircleDirection,
    pub start_closed: bool,
    pub end_closed: bool,
}

impl Arc {
    pub fn open(start: CircleDirection, end: CircleDirection) -> Self {
        Arc {
            start,
            end,
            start_closed: false,
            end_closed: false,
        }
    }

    pub fn closed(start: CircleDirection, end: CircleDirection) -> Self {
        Arc {
            start,
            end,
            start_closed: true,
            end_closed: true,
        }
    }

    pub fn point(p: CircleDirection) -> Self {
        Arc::closed(p, p)
    }

    pub fn is_point(&self) -> bool {
        self.start == self.end && self.start_closed
    }

    pub fn contains(&self, d: CircleDirection) -> bool {
        if self.start == self.end {
            return if self.start_closed {
                d == self.start
            } else {
                d != self.start
            };
        }
        if d == self.start {
            return self.start_closed;
        }
        if d == self.end {
            return self.end_closed;
        }
        d.strictly_between(self.start, self.end)
    }

    /// Angular measure is at least π (points have measure 0).
    pub fn measure_at_least_pi(&self) -> bool {
        !self.is_point() && measure_at_least_pi(self.start, self.end)
    }

    /// Angular measure in radians, for display and diagnostics only.
    pub fn measure(&self) -> f64 {
        if self.is_point() {
            return 0.0;
        }
        if self.start == self.end {
            return std::f64::consts::TAU;
        }
        let m = self.end.angle() - self.start.angle();
        if m <= 0.0 {
            m + std::f64::consts::TAU
        } else {
            m
        }
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            return write!(f, "{{{}}}", self.start);
        }
        write!(
            f,
            "{}{} .. {}{}",
            if self.start_closed { '[' } else { '(' },
            self.start,
            self.end,
            if self.end_closed { ']' } else { ')' }
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ArcSet {
    full: bool,
    arcs: Vec<Arc>,
}

impl ArcSet {
    pub fn empty() -> Self {
        ArcSet::default()
    }

    pub fn full() -> Self {
        ArcSet {
            full: true,
            arcs: Vec::new(),
        }
    }

    /// Normalized union of raw arcs.
    pub fn from_arcs(arcs: impl IntoIterator<Item = Arc>) -> Self {
        let raw = ArcSet {
            full: false,
            arcs: arcs.into_iter().collect(),
        };
        ArcSet::combine(&[&raw], |m| m[0])
    }

    pub fn is_empty(&self) -> bool {
        !self.full && self.arcs.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.full
    }

    /// Maximal arcs sorted by start angle. Empty for the full circle.
    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn contains(&self, d: CircleDirection) -> bool {
        self.full || self.arcs.iter().any(|a| a.contains(d))
    }

    pub fn union(&self, other: &ArcSet) -> ArcSet {
        ArcSet::combine(&[self, other], |m| m[0] || m[1])
    }

    pub fn intersection(&self, other: &ArcSet) -> ArcSet {
        ArcSet::combine(&[self, other], |m| m[0] && m[1])
    }

    pub fn complement(&self) -> ArcSet {
        ArcSet::combine(&[self], |m| !m[0])
    }

    pub fn union_all<'a>(sets: impl IntoIterator<Item = &'a ArcSet>) -> ArcSet {
        let sets: Vec<&ArcSet> = sets.into_iter().collect();
        ArcSet::combine(&sets, |m| m.iter().any(|&b| b))
    }

    pub fn intersection_all<'a>(sets: impl IntoIterator<Item = &'a ArcSet>) -> ArcSet {
        let sets: Vec<&ArcSet> = sets.into_iter().collect();
        if sets.is_empty() {
            return ArcSet::full();
        }
        ArcSet::combine(&sets, |m| m.iter().all(|&b| b))
    }

    /// Distinct endpoints of all arcs, sorted by angle from the positive x axis.
    pub fn endpoints(&self) -> Vec<CircleDirection> {
        let mut pts: Vec<CircleDirection> = self.arcs.iter().flat_map(|a| [a.start, a.end]).collect();
        sort_dedup(&mut pts);
        pts
    }

    /// Boolean combination of arc sets, evaluated cell by cell.
    pub fn combine(sets: &[&ArcSet], f: impl Fn(&[bool]) -> bool) -> ArcSet {
        let mut crit: Vec<CircleDirection> = sets
            .iter()
            .flat_map(|s| s.arcs.iter().flat_map(|a| [a.start, a.end]))
            .collect();
        sort_dedup(&mut crit);
        let member = |d: CircleDirection| {
            let m: Vec<bool> = sets.iter().map(|s| s.contains(d)).collect();
            f(&m)
        };
        if crit.is_empty() {
            return if member(CircleDirection::E1) {
                ArcSet::full()
            } else {
                ArcSet::empty()
            };
        }
        let k = crit.len();
        let points: Vec<bool> = crit.iter().map(|&p| member(p)).collect();
        let gaps: Vec<bool> = (0..k)
            .map(|i| member(CircleDirection::strictly_inside(crit[i], crit[(i + 1) % k])))
            .collect();
        ArcSet::from_cells(&crit, &points, &gaps)
    }

    /// Rebuilds maximal arcs from the cyclic cell sequence
    /// `P0, G0, P1, G1, ...` where `Gi` is the open gap from `crit[i]` to `crit[i+1]`.
    fn from_cells(crit: &[CircleDirection], points: &[bool], gaps: &[bool]) -> ArcSet {
        let k = crit.len();
        let n = 2 * k;
        let cell_in = |c: usize| if c % 2 == 0 { points[c / 2] } else { gaps[c / 2] };
        let Some(first_out) = (0..n).find(|&c| !cell_in(c)) else {
            return ArcSet::full();
        };
        let mut arcs = Vec::new();
        let mut step = 1;
        while step <= n {
            let c = (first_out + step) % n;
            if !cell_in(c) {
                step += 1;
                continue;
            }
            let run_start = c;
            let mut run_end = c;
            step += 1;
            while step <= n && cell_in((first_out + step) % n) {
                run_end = (first_out + step) % n;
                step += 1;
            }
            let (start, start_closed) = if run_start % 2 == 0 {
                (crit[run_start / 2], true)
            } else {
                (crit[run_start / 2], false)
            };
            let (end, end_closed) = if run_end % 2 == 0 {
                (crit[run_end / 2], true)
            } else {
                (crit[(run_end / 2 + 1) % k], false)
            };
            arcs.push(Arc {
                start,
                end,
                start_closed,
                end_closed,
            });
        }
        arcs.sort_by(|a, b| a.start.angle_cmp(b.start).then(b.start_closed.cmp(&a.start_closed)));
        ArcSet { full: false, arcs }
    }
}

fn sort_dedup(pts: &mut Vec<CircleDirection>) {
    pts.sort_by(|a, b| a.angle_cmp(*b));
    pts.dedup();
}

impl fmt::Display for ArcSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.full {
            return write!(f, "S1");
        }
        if self.arcs.is_empty() {
            return write!(f, "{{}}");
        }
        let parts: Vec<String> = self.arcs.iter().map(|a| a.to_string()).collect();
        write!(f, "{}", parts.join(" u "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(x: i64, y: i64) -> CircleDirection {
        CircleDirection::new(x, y).unwrap()
    }

    #[test]
    fn complement_of_open_semicircle_is_closed_semicircle() {
        let s = ArcSet::from_arcs([Arc::open(d(0, -1), d(0, 1))]);
        let c = s.complement();
        assert_eq!(c.arcs(), &[Arc::closed(d(0, 1), d(0, -1))]);
        assert_eq!(c.complement(), s);
    }

    #[test]
    fn adjacent_arcs_merge_through_shared_closed_endpoint() {
        let a = Arc {
            start: d(1, 0),
            end: d(0, 1),
            start_closed: false,
            end_closed: true,
        };
        let b = Arc::open(d(0, 1), d(-1, 0));
        let u = ArcSet::from_arcs([a, b]);
        assert_eq!(u.arcs(), &[Arc::open(d(1, 0), d(-1, 0))]);
        // with an open shared endpoint they stay apart
        let u2 = ArcSet::from_arcs([Arc::open(d(1, 0), d(0, 1)), b]);
        assert_eq!(u2.arcs().len(), 2);
    }

    #[test]
    fn circle_minus_point_and_points() {
        let s = ArcSet::from_arcs([Arc::open(d(1, 0), d(1, 0))]);
        assert!(!s.contains(d(1, 0)));
        assert!(s.contains(d(-1, 3)));
        let c = s.complement();
        assert_eq!(c.arcs(), &[Arc::point(d(1, 0))]);
        assert!(c.union(&s).is_full());
        assert!(c.intersection(&s).is_empty());
    }

    #[test]
    fn wrapping_arc_is_normalized() {
        let s = ArcSet::from_arcs([Arc::closed(d(0, -1), d(0, 1))]);
        assert!(s.contains(d(1, 0)));
        assert!(!s.contains(d(-1, 0)));
        assert_eq!(s.arcs().len(), 1);
        assert!(s.arcs()[0].measure_at_least_pi());
    }

    #[test]
    fn empty_and_full() {
        assert!(ArcSet::empty().complement().is_full());
        assert!(ArcSet::full().complement().is_empty());
        assert!(ArcSet::from_arcs([]).is_empty());
    }
}

use serde::{Deserialize, Serialize};

use super::arcs::{Arc, ArcSet};
use super::direction::{measure_at_least_pi, CircleDirection};
use super::{Dim, FamilyError, UpdateFamily, UpdateRule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Kind {
    Supercritical,
    Critical,
    Subcritical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub kind: Kind,
    pub has_disjoint_rules: bool,
    /// Indices of the first pair of disjoint rules, if any.
    pub witness: Option<(usize, usize)>,
}

impl Classification {
    fn new(kind: Kind, family: &UpdateFamily) -> Self {
        let witness = family.disjoint_pair();
        Classification {
            kind,
            has_disjoint_rules: witness.is_some(),
            witness,
        }
    }

    pub fn is_supercritical(&self) -> bool {
        self.kind == Kind::Supercritical
    }
}

/// Which semicircles the grid oracle quantifies over in the critical test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SemicircleReading {
    Closed,
    Open,
}

fn require_2d(f: &UpdateFamily) -> Result<(), FamilyError> {
    if f.dim() == Dim::Two {
        Ok(())
    } else {
        Err(FamilyError::WrongDimension { expected: 2 })
    }
}

fn offset_direction(o: crate::lattice::Site) -> CircleDirection {
    CircleDirection::new(o.x as i64, o.y as i64).expect("offsets are nonzero")
}

/// Directions u with ⟨x, u⟩ < 0 for every offset x of the rule.
///
/// Each offset contributes the open semicircle centred on −x, whose
/// endpoints are the two perpendiculars of x.
pub fn destabilizing_arc(rule: &UpdateRule) -> ArcSet {
    let halves: Vec<ArcSet> = rule
        .offsets()
        .iter()
        .map(|&o| {
            let x = offset_direction(o);
            ArcSet::from_arcs([Arc::open(x.rot_ccw(), x.rot_cw())])
        })
        .collect();
    ArcSet::intersection_all(halves.iter())
}

pub fn unstable_set(f: &UpdateFamily) -> Result<ArcSet, FamilyError> {
    require_2d(f)?;
    let arcs: Vec<ArcSet> = f.rules().iter().map(destabilizing_arc).collect();
    Ok(ArcSet::union_all(arcs.iter()))
}

pub fn stable_set(f: &UpdateFamily) -> Result<ArcSet, FamilyError> {
    Ok(unstable_set(f)?.complement())
}

fn contains_open_semicircle(unstable: &ArcSet) -> bool {
    unstable.is_full() || unstable.arcs().iter().any(|a| a.measure_at_least_pi())
}

/// Some semicircle meets the stable set in finitely many directions.
///
/// The stable set is closed, so this holds iff two consecutive
/// positive-length stable arcs leave a gap of measure at least π (or
/// there are no positive-length stable arcs at all). The open and closed
/// readings of "semicircle" agree under this criterion.
fn has_finite_semicircle(stable: &ArcSet) -> bool {
    if stable.is_full() {
        return false;
    }
    let thick: Vec<&Arc> = stable.arcs().iter().filter(|a| !a.is_point()).collect();
    if thick.is_empty() {
        return true;
    }
    (0..thick.len()).any(|k| {
        let from = thick[k].end;
        let to = thick[(k + 1) % thick.len()].start;
        from != to && measure_at_least_pi(from, to)
    })
}

pub fn classify_2d(f: &UpdateFamily) -> Result<Classification, FamilyError> {
    let unstable = unstable_set(f)?;
    let kind = if contains_open_semicircle(&unstable) {
        Kind::Supercritical
    } else if has_finite_semicircle(&unstable.complement()) {
        Kind::Critical
    } else {
        Kind::Subcritical
    };
    Ok(Classification::new(kind, f))
}

pub fn classify_1d(f: &UpdateFamily) -> Result<Classification, FamilyError> {
    if f.dim() != Dim::One {
        return Err(FamilyError::WrongDimension { expected: 1 });
    }
    let one_sided = f.rules().iter().any(|r| {
        r.offsets().iter().all(|o| o.x > 0) || r.offsets().iter().all(|o| o.x < 0)
    });
    let kind = if one_sided {
        Kind::Supercritical
    } else {
        Kind::Subcritical
    };
    Ok(Classification::new(kind, f))
}

pub fn classify(f: &UpdateFamily) -> Classification {
    match f.dim() {
        Dim::One => classify_1d(f),
        Dim::Two => classify_2d(f),
    }
    .expect("dimension matches")
}

/// Brute-force classification over a dense set of rational directions.
///
/// The sample is every primitive vector of sup-norm at most `N`, with `N`
/// the smallest bound giving at least `n` directions. It is symmetric, so
/// the antipode of sample `i` is sample `i + len/2`, and it contains every
/// perpendicular of an offset with coordinates up to `N`. Stability is
/// tested with integer dot products on each sample; "finitely many stable
/// directions" is read as "no two angularly consecutive stable samples".
pub fn grid_classify_oracle(
    f: &UpdateFamily,
    n: usize,
    reading: SemicircleReading,
) -> Result<Classification, FamilyError> {
    require_2d(f)?;
    let samples = farey_directions(n.max(8));
    let len = samples.len();
    let half = len / 2;
    let stable: Vec<bool> = samples
        .iter()
        .map(|&(x, y)| {
            !f.rules().iter().any(|r| {
                r.offsets()
                    .iter()
                    .all(|o| (o.x as i64) * x + (o.y as i64) * y < 0)
            })
        })
        .collect();

    // prefix sums over the doubled circle
    let stable_at = |k: usize| stable[k % len];
    let mut stable_prefix = vec![0usize; 2 * len + 1];
    let mut pair_prefix = vec![0usize; 2 * len + 1];
    for k in 0..2 * len {
        stable_prefix[k + 1] = stable_prefix[k] + stable_at(k) as usize;
        pair_prefix[k + 1] = pair_prefix[k] + (stable_at(k) && stable_at(k + 1)) as usize;
    }
    let stable_in = |a: usize, b: usize| stable_prefix[b + 1] - stable_prefix[a];
    // pairs (k, k+1) with a <= k < b
    let pairs_in = |a: usize, b: usize| if b > a { pair_prefix[b] - pair_prefix[a] } else { 0 };

    let supercritical = (0..len).any(|i| stable_in(i + 1, i + half - 1) == 0);
    let kind = if supercritical {
        Kind::Supercritical
    } else {
        let critical = (0..len).any(|i| match reading {
            SemicircleReading::Closed => pairs_in(i, i + half) == 0,
            SemicircleReading::Open => pairs_in(i + 1, i + half - 1) == 0,
        });
        if critical {
            Kind::Critical
        } else {
            Kind::Subcritical
        }
    };
    Ok(Classification::new(kind, f))
}

fn farey_directions(n: usize) -> Vec<(i64, i64)> {
    let mut bound = 1i64;
    loop {
        let mut dirs = Vec::new();
        for x in -bound..=bound {
            for y in -bound..=bound {
                if num_integer::Integer::gcd(&x, &y) == 1 {
                    dirs.push((x, y));
                }
            }
        }
        if dirs.len() >= n {
            dirs.sort_by(|a, b| {
                let ta = (a.1 as f64).atan2(a.0 as f64).rem_euclid(std::f64::consts::TAU);
                let tb = (b.1 as f64).atan2(b.0 as f64).rem_euclid(std::f64::consts::TAU);
                ta.partial_cmp(&tb).unwrap()
            });
            return dirs;
        }
        bound += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::parse_family;

    fn d(x: i64, y: i64) -> CircleDirection {
        CircleDirection::new(x, y).unwrap()
    }

    fn fig1() -> UpdateFamily {
        parse_family("dim 2; rule (-1,0) (-1,1); rule (-1,0) (-1,-1)").unwrap()
    }

    fn nn2() -> UpdateFamily {
        UpdateFamily::from_pairs(&[
            &[(1, 0), (-1, 0)],
            &[(1, 0), (0, 1)],
            &[(1, 0), (0, -1)],
            &[(-1, 0), (0, 1)],
            &[(-1, 0), (0, -1)],
            &[(0, 1), (0, -1)],
        ])
        .unwrap()
    }

    fn cross() -> UpdateFamily {
        UpdateFamily::from_pairs(&[&[(1, 0), (-1, 0)], &[(0, 1), (0, -1)]]).unwrap()
    }

    fn rule(offsets: &[(i32, i32)]) -> UpdateRule {
        UpdateRule::new(offsets.iter().map(|&p| p.into())).unwrap()
    }

    #[test]
    fn destabilizing_arcs() {
        let a = destabilizing_arc(&rule(&[(-1, 0), (-1, 1)]));
        assert_eq!(a.arcs(), &[Arc::open(d(0, -1), d(1, 1))]);
        assert!(destabilizing_arc(&rule(&[(1, 0), (-1, 0)])).is_empty());
        let h = destabilizing_arc(&rule(&[(-1, 0)]));
        assert_eq!(h.arcs(), &[Arc::open(d(0, -1), d(0, 1))]);
    }

    #[test]
    fn destabilizing_arc_matches_dot_products() {
        let rules = [
            rule(&[(-1, 0), (-1, 1)]),
            rule(&[(2, 1), (1, -3)]),
            rule(&[(0, 1)]),
            rule(&[(1, 1), (-1, 1), (0, 2)]),
            rule(&[(3, -1), (-2, -2)]),
        ];
        for r in &rules {
            let arc = destabilizing_arc(r);
            for x in -8i64..=8 {
                for y in -8i64..=8 {
                    let Some(u) = CircleDirection::new(x, y) else { continue };
                    let expect = r
                        .offsets()
                        .iter()
                        .all(|o| u.dot_offset(o.x as i64, o.y as i64) < 0);
                    assert_eq!(arc.contains(u), expect, "rule {r} dir {u}");
                }
            }
        }
    }

    #[test]
    fn unstable_and_stable_sets() {
        let u = unstable_set(&fig1()).unwrap();
        assert_eq!(u.arcs(), &[Arc::open(d(0, -1), d(0, 1))]);
        let s = stable_set(&fig1()).unwrap();
        assert_eq!(s.arcs(), &[Arc::closed(d(0, 1), d(0, -1))]);

        let s = stable_set(&nn2()).unwrap();
        let pts: Vec<CircleDirection> = s.arcs().iter().map(|a| a.start).collect();
        assert!(s.arcs().iter().all(|a| a.is_point()));
        assert_eq!(pts, vec![d(1, 0), d(0, 1), d(-1, 0), d(0, -1)]);

        assert!(unstable_set(&cross()).unwrap().is_empty());
        assert!(stable_set(&cross()).unwrap().is_full());
    }

    #[test]
    fn classification_examples() {
        let c = classify_2d(&fig1()).unwrap();
        assert_eq!(c.kind, Kind::Supercritical);
        assert!(!c.has_disjoint_rules);
        assert_eq!(classify_2d(&nn2()).unwrap().kind, Kind::Critical);
        assert_eq!(classify_2d(&cross()).unwrap().kind, Kind::Subcritical);
        assert!(classify_2d(&cross()).unwrap().has_disjoint_rules);
    }

    #[test]
    fn one_dimensional_classification() {
        let k = |rules: &[&[i32]]| classify_1d(&UpdateFamily::from_ints(rules).unwrap()).unwrap().kind;
        assert_eq!(k(&[&[1], &[-1]]), Kind::Supercritical);
        assert_eq!(k(&[&[-1, 1]]), Kind::Subcritical);
        assert_eq!(k(&[&[1, 2]]), Kind::Supercritical);
        for j in [-5, -1, 1, 7] {
            assert_eq!(k(&[&[j]]), Kind::Supercritical);
        }
        assert!(classify_1d(&fig1()).is_err());
        assert!(classify_2d(&UpdateFamily::from_ints(&[&[1]]).unwrap()).is_err());
    }

    #[test]
    fn grid_oracle_on_named_families() {
        for reading in [SemicircleReading::Closed, SemicircleReading::Open] {
            let k = |f: &UpdateFamily| grid_classify_oracle(f, 4096, reading).unwrap().kind;
            assert_eq!(k(&fig1()), Kind::Supercritical);
            assert_eq!(k(&nn2()), Kind::Critical);
            assert_eq!(k(&cross()), Kind::Subcritical);
        }
    }

    #[test]
    fn supercritical_threshold_is_exactly_a_semicircle() {
        // {(-1,0)} alone: unstable set is exactly the open semicircle u1 > 0.
        let f = UpdateFamily::from_pairs(&[&[(-1, 0)]]).unwrap();
        assert_eq!(classify_2d(&f).unwrap().kind, Kind::Supercritical);
        // Adding a rule that makes (1,0) stable-only-from-one-side keeps the
        // unstable arc strictly shorter than π.
        let f = UpdateFamily::from_pairs(&[&[(-1, 0), (-1, 1)]]).unwrap();
        let u = unstable_set(&f).unwrap();
        assert!(!u.arcs()[0].measure_at_least_pi());
        assert_ne!(classify_2d(&f).unwrap().kind, Kind::Supercritical);
    }
}

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use super::AnalysisError;
use crate::bootstrap::minus_closure;
use crate::dynamics::{Boundary, Frozen, Resolved, Spin, SpinConfiguration};
use crate::family::UpdateFamily;
use crate::lattice::Site;

/// Interior sites split into those that can never turn − and the rest.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WellFixedReport {
    pub time: f64,
    pub certified_plus: BTreeSet<Site>,
    pub uncertified: BTreeSet<Site>,
    /// True on sealed windows, where the certificate is exact; elsewhere it is only sound.
    pub exact: bool,
}

impl WellFixedReport {
    pub fn is_complete(&self) -> bool {
        self.uncertified.is_empty()
    }

    pub fn certified_fraction(&self) -> f64 {
        let n = self.certified_plus.len() + self.uncertified.len();
        if n == 0 {
            1.0
        } else {
            self.certified_plus.len() as f64 / n as f64
        }
    }
}

/// A + site is well fixed when the ⊖-bootstrap from the current − sites cannot reach it.
pub fn well_fixed_certificate(config: &SpinConfiguration, f: &UpdateFamily, time: f64) -> WellFixedReport {
    let reach = minus_closure(config, f);
    let mut certified_plus = BTreeSet::new();
    let mut uncertified = BTreeSet::new();
    for s in config.interior_sites() {
        if config.spin(s) == Some(Spin::Plus) && !reach.contains(&s) {
            certified_plus.insert(s);
        } else {
            uncertified.insert(s);
        }
    }
    WellFixedReport {
        time,
        certified_plus,
        uncertified,
        exact: matches!(config.boundary(), Boundary::Sealed(_)),
    }
}

pub const REACHABILITY_LIMIT: usize = 12;

#[derive(Clone, Copy)]
enum Read {
    Unfrozen(usize),
    Fixed(Spin),
    Never,
}

/// Window sites that are − in some configuration reachable by legal single flips.
pub fn reachability_oracle(config: &SpinConfiguration, f: &UpdateFamily) -> Result<BTreeSet<Site>, AnalysisError> {
    let unfrozen: Vec<Site> = config
        .window_sites()
        .filter(|&s| config.frozen(s) == Some(Frozen::Unfrozen))
        .collect();
    let n = unfrozen.len();
    if n > REACHABILITY_LIMIT {
        return Err(AnalysisError::TooManyUnfrozen(n));
    }
    let index_of = |s: Site| unfrozen.iter().position(|&u| u == s);
    let reads: Vec<Vec<Vec<Read>>> = unfrozen
        .iter()
        .map(|&x| {
            f.rules()
                .iter()
                .map(|rule| {
                    rule.offsets()
                        .iter()
                        .map(|&o| match config.resolve(x + o) {
                            Resolved::Slot(i) => {
                                let s = config.site(i);
                                match config.frozen_at(i).spin() {
                                    Some(sp) => Read::Fixed(sp),
                                    None => Read::Unfrozen(index_of(s).expect("unfrozen site")),
                                }
                            }
                            Resolved::Fixed(sp) => Read::Fixed(sp),
                            Resolved::Beyond => Read::Never,
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    // bit j set ⇔ unfrozen site j is −
    let spin_of = |state: u32, j: usize| if state >> j & 1 == 1 { Spin::Minus } else { Spin::Plus };
    let start = unfrozen
        .iter()
        .enumerate()
        .filter(|(_, &s)| config.spin(s) == Some(Spin::Minus))
        .fold(0u32, |acc, (j, _)| acc | 1 << j);
    let mut seen = vec![false; 1usize << n];
    let mut queue = VecDeque::from([start]);
    seen[start as usize] = true;
    let mut ever_minus = 0u32;
    while let Some(state) = queue.pop_front() {
        ever_minus |= state;
        for j in 0..n {
            let target = spin_of(state, j).flip();
            let can_flip = reads[j].iter().any(|rule| {
                rule.iter().all(|r| match *r {
                    Read::Unfrozen(k) => spin_of(state, k) == target,
                    Read::Fixed(sp) => sp == target,
                    Read::Never => false,
                })
            });
            if can_flip {
                let next = state ^ (1 << j);
                if !seen[next as usize] {
                    seen[next as usize] = true;
                    queue.push_back(next);
                }
            }
        }
    }
    let mut out: BTreeSet<Site> = config
        .window_sites()
        .filter(|&s| config.frozen(s) == Some(Frozen::FrozenMinus))
        .collect();
    out.extend((0..n).filter(|&j| ever_minus >> j & 1 == 1).map(|j| unfrozen[j]));
    Ok(out)
}

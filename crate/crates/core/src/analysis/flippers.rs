use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::{AnalysisError, FrozenMarks};
use crate::dynamics::{FlipRecord, FlipTrace, Frozen, Spin, SpinConfiguration};
use crate::family::UpdateFamily;
use crate::lattice::Site;

/// Ordered pairs of disjoint rules.
fn disjoint_pairs(f: &UpdateFamily) -> Vec<(usize, usize)> {
    let rules = f.rules();
    let mut out = Vec::new();
    for i in 0..rules.len() {
        for j in 0..rules.len() {
            if i != j && rules[i].is_disjoint(&rules[j]) {
                out.push((i, j));
            }
        }
    }
    out
}

fn forced_with(f: &UpdateFamily, candidates: impl Iterator<Item = Site>, mark: impl Fn(Site) -> Option<Frozen>) -> Vec<Site> {
    let pairs = disjoint_pairs(f);
    if pairs.is_empty() {
        return Vec::new();
    }
    let all = |x: Site, k: usize, want: Frozen| f.rules()[k].offsets().iter().all(|&o| mark(x + o) == Some(want));
    candidates
        .filter(|&x| {
            mark(x) == Some(Frozen::Unfrozen)
                && pairs
                    .iter()
                    .any(|&(p, m)| all(x, p, Frozen::FrozenPlus) && all(x, m, Frozen::FrozenMinus))
        })
        .collect()
}

/// Unfrozen sites with one rule entirely frozen at + and a disjoint rule entirely frozen at −.
/// Static outside sites count as frozen.
pub fn forced_flipper_sites(config: &SpinConfiguration, f: &UpdateFamily) -> Vec<Site> {
    let mut v = forced_with(f, config.window_sites(), |s| config.read_frozen(s));
    v.sort_unstable();
    v
}

/// Forced sites among the marks, for sites whose rules stay inside the marked rectangle.
pub fn forced_flipper_sites_in_marks(marks: &FrozenMarks, f: &UpdateFamily) -> Vec<Site> {
    let (lo, hi) = (marks.lo(), marks.hi());
    let inside = |s: Site| s.x >= lo.x && s.y >= lo.y && s.x <= hi.x && s.y <= hi.y;
    let mut v = forced_with(f, marks.sites(), |s| inside(s).then(|| marks.get(s)));
    v.sort_unstable();
    v
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlipperStats {
    pub horizon: f64,
    pub buckets: usize,
    pub tail_fraction: f64,
    /// Flips per time bucket for every site that flipped.
    pub counts: BTreeMap<Site, Vec<u64>>,
    /// Flips after `(1 − tail_fraction)·horizon`.
    pub tail_flips: BTreeMap<Site, u64>,
    pub forced_sites: Vec<Site>,
}

impl FlipperStats {
    pub fn total_flips(&self, s: Site) -> u64 {
        self.counts.get(&s).map(|v| v.iter().sum()).unwrap_or(0)
    }

    pub fn tail(&self, s: Site) -> u64 {
        self.tail_flips.get(&s).copied().unwrap_or(0)
    }

    /// Number of sites that flipped in the tail window.
    pub fn tail_flip_sites(&self) -> usize {
        self.tail_flips.values().filter(|&&n| n > 0).count()
    }

    /// Number of forced sites that flipped in the tail window.
    pub fn forced_tail_sites(&self) -> usize {
        self.forced_sites.iter().filter(|&&s| self.tail(s) > 0).count()
    }
}

pub fn flipper_stats_from_records(
    records: &[FlipRecord],
    horizon: f64,
    buckets: usize,
    tail_fraction: f64,
    forced_sites: Vec<Site>,
) -> Result<FlipperStats, AnalysisError> {
    if !(tail_fraction > 0.0 && tail_fraction < 1.0) {
        return Err(AnalysisError::InvalidArgument("tail fraction must lie in (0, 1)".into()));
    }
    if buckets == 0 || !(horizon > 0.0) {
        return Err(AnalysisError::InvalidArgument("need at least one bucket and a positive horizon".into()));
    }
    let cut = (1.0 - tail_fraction) * horizon;
    let mut counts: BTreeMap<Site, Vec<u64>> = BTreeMap::new();
    let mut tail_flips: BTreeMap<Site, u64> = BTreeMap::new();
    for r in records {
        let b = ((r.time / horizon * buckets as f64) as usize).min(buckets - 1);
        counts.entry(r.site).or_insert_with(|| vec![0; buckets])[b] += 1;
        if r.time > cut {
            *tail_flips.entry(r.site).or_default() += 1;
        }
    }
    Ok(FlipperStats {
        horizon,
        buckets,
        tail_fraction,
        counts,
        tail_flips,
        forced_sites,
    })
}

pub fn flipper_stats(trace: &FlipTrace, buckets: usize, tail_fraction: f64) -> Result<FlipperStats, AnalysisError> {
    flipper_stats_from_records(
        &trace.records,
        trace.horizon,
        buckets,
        tail_fraction,
        forced_flipper_sites(&trace.initial, &trace.family),
    )
}

/// A flip to − of a site that had flipped to + via a rule none of whose sites turned − since.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ShieldViolation {
    pub site: Site,
    pub plus_time: f64,
    pub rule_index: usize,
    pub minus_time: f64,
}

pub fn shield_violations(trace: &FlipTrace) -> Vec<ShieldViolation> {
    let wrap = |s: Site| trace.initial.wrap(s);
    let mut last_minus: HashMap<Site, f64> = HashMap::new();
    let mut armed: HashMap<Site, (f64, usize)> = HashMap::new();
    let mut out = Vec::new();
    for r in &trace.records {
        match r.to {
            Spin::Plus => {
                armed.insert(r.site, (r.time, r.rule_index));
            }
            Spin::Minus => {
                if let Some((t, k)) = armed.remove(&r.site) {
                    let released = trace.family.rules()[k]
                        .offsets()
                        .iter()
                        .any(|&o| last_minus.get(&wrap(r.site + o)).is_some_and(|&tm| tm > t));
                    if !released {
                        out.push(ShieldViolation {
                            site: r.site,
                            plus_time: t,
                            rule_index: k,
                            minus_time: r.time,
                        });
                    }
                }
                last_minus.insert(r.site, r.time);
            }
        }
    }
    out
}

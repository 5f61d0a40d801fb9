//! U-bootstrap percolation on finite domains with healthy boundary
//! conditions and immune sites.
//!
//! Sites outside the domain are permanently healthy. The ⊖-variant of a
//! spin configuration uses the − sites as seeds and the sites frozen at +
//! as immune; the ⊕-variant exchanges the roles.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::dynamics::{Boundary, Frozen, Spin, SpinConfiguration};
use crate::family::UpdateFamily;
use crate::lattice::Site;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BootstrapError {
    #[error("seed {0} lies outside the domain")]
    SeedOutsideDomain(Site),
    #[error("site {0} is both a seed and immune")]
    ImmuneSeed(Site),
    #[error("domain is empty")]
    EmptyDomain,
    #[error("target {0} lies outside the domain")]
    TargetOutsideDomain(Site),
    #[error("witness step {step}: {reason}")]
    InvalidWitness { step: usize, reason: String },
}

/// A finite set of sites inside a bounding box, optionally periodic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Domain {
    lo: Site,
    width: i32,
    height: i32,
    mask: Vec<bool>,
    torus: bool,
    len: usize,
}

impl Domain {
    /// All sites `lo ≤ s ≤ hi` coordinatewise.
    pub fn rect(lo: Site, hi: Site) -> Self {
        let (width, height) = (hi.x - lo.x + 1, hi.y - lo.y + 1);
        assert!(width > 0 && height > 0, "empty rectangle");
        let n = (width * height) as usize;
        Domain {
            lo,
            width,
            height,
            mask: vec![true; n],
            torus: false,
            len: n,
        }
    }

    /// The segment `{lo..=hi} × {0}`.
    pub fn segment(lo: i32, hi: i32) -> Self {
        Domain::rect(Site::new(lo, 0), Site::new(hi, 0))
    }

    /// A `width × height` rectangle at `lo` whose coordinates wrap.
    pub fn torus(lo: Site, width: i32, height: i32) -> Self {
        let mut d = Domain::rect(lo, Site::new(lo.x + width - 1, lo.y + height - 1));
        d.torus = true;
        d
    }

    pub fn from_sites(sites: impl IntoIterator<Item = Site>) -> Result<Self, BootstrapError> {
        let sites: Vec<Site> = sites.into_iter().collect();
        let first = *sites.first().ok_or(BootstrapError::EmptyDomain)?;
        let (mut lo, mut hi) = (first, first);
        for s in &sites {
            lo = Site::new(lo.x.min(s.x), lo.y.min(s.y));
            hi = Site::new(hi.x.max(s.x), hi.y.max(s.y));
        }
        let mut d = Domain::rect(lo, hi);
        d.mask.iter_mut().for_each(|m| *m = false);
        d.len = 0;
        for s in sites {
            let i = d.raw_slot(s).expect("inside bounding box");
            if !d.mask[i] {
                d.mask[i] = true;
                d.len += 1;
            }
        }
        Ok(d)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_torus(&self) -> bool {
        self.torus
    }

    /// Number of bounding-box slots.
    pub fn slots(&self) -> usize {
        self.mask.len()
    }

    fn raw_slot(&self, s: Site) -> Option<usize> {
        let (dx, dy) = (s.x - self.lo.x, s.y - self.lo.y);
        if dx < 0 || dy < 0 || dx >= self.width || dy >= self.height {
            return None;
        }
        Some((dy * self.width + dx) as usize)
    }

    #[inline]
    pub fn slot(&self, s: Site) -> Option<usize> {
        let s = if self.torus {
            Site::new(
                self.lo.x + (s.x - self.lo.x).rem_euclid(self.width),
                self.lo.y + (s.y - self.lo.y).rem_euclid(self.height),
            )
        } else {
            s
        };
        self.raw_slot(s).filter(|&i| self.mask[i])
    }

    #[inline]
    pub fn site(&self, slot: usize) -> Site {
        let i = slot as i32;
        Site::new(self.lo.x + i % self.width, self.lo.y + i / self.width)
    }

    pub fn contains(&self, s: Site) -> bool {
        self.slot(s).is_some()
    }

    pub fn sites(&self) -> impl Iterator<Item = Site> + '_ {
        (0..self.slots()).filter(|&i| self.mask[i]).map(|i| self.site(i))
    }

    fn in_domain_slot(&self, i: usize) -> bool {
        self.mask[i]
    }
}

/// Ordered infection steps `(site, rule index)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InfectionWitness {
    pub steps: Vec<(Site, usize)>,
}

impl InfectionWitness {
    /// Replays the witness from the seeds, checking every step, and returns the infected set.
    pub fn validate(
        &self,
        dom: &Domain,
        seeds: &BTreeSet<Site>,
        immune: &BTreeSet<Site>,
        f: &UpdateFamily,
    ) -> Result<BTreeSet<Site>, BootstrapError> {
        let mut infected = seeds.clone();
        for (step, &(x, k)) in self.steps.iter().enumerate() {
            let bad = |reason: &str| BootstrapError::InvalidWitness {
                step,
                reason: reason.to_string(),
            };
            if !dom.contains(x) {
                return Err(bad("site outside the domain"));
            }
            if immune.contains(&x) {
                return Err(bad("immune site infected"));
            }
            if infected.contains(&x) {
                return Err(bad("site infected twice"));
            }
            let rule = f.rules().get(k).ok_or_else(|| bad("rule index out of range"))?;
            let ok = rule.offsets().iter().all(|&o| {
                dom.slot(x + o)
                    .map(|i| infected.contains(&dom.site(i)))
                    .unwrap_or(false)
            });
            if !ok {
                return Err(bad("rule not fully infected"));
            }
            infected.insert(x);
        }
        Ok(infected)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Closure {
    /// Infected flag per domain slot.
    pub infected: Vec<bool>,
    pub witness: InfectionWitness,
    dom: Domain,
}

impl Closure {
    pub fn contains(&self, s: Site) -> bool {
        self.dom.slot(s).map(|i| self.infected[i]).unwrap_or(false)
    }

    pub fn sites(&self) -> BTreeSet<Site> {
        (0..self.infected.len())
            .filter(|&i| self.infected[i])
            .map(|i| self.dom.site(i))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.infected.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn domain(&self) -> &Domain {
        &self.dom
    }
}

struct RuleTable {
    rules: Vec<Vec<Site>>,
    /// Distinct offsets of all rules; a site `y` can only become infectable
    /// after some `y + o` was infected.
    offsets: Vec<Site>,
}

impl RuleTable {
    fn new(f: &UpdateFamily) -> Self {
        let rules: Vec<Vec<Site>> = f.rules().iter().map(|r| r.offsets().to_vec()).collect();
        let mut offsets: Vec<Site> = rules.iter().flatten().copied().collect();
        offsets.sort_unstable();
        offsets.dedup();
        RuleTable { rules, offsets }
    }

    fn first_satisfied(&self, dom: &Domain, infected: &[bool], y: Site) -> Option<usize> {
        self.rules.iter().position(|rule| {
            rule.iter()
                .all(|&o| dom.slot(y + o).map(|i| infected[i]).unwrap_or(false))
        })
    }
}

/// Closure over slot masks. `infected` holds the seeds on entry and the closed set on exit.
///
/// Works in rounds: each round re-examines only sites at an offset from a
/// site infected in the previous round, infects every examined site that
/// has a fully infected rule at the start of the round, and records them
/// in lexicographic order.
pub fn closure_in_place(
    dom: &Domain,
    infected: &mut [bool],
    immune: &[bool],
    f: &UpdateFamily,
    mut witness: Option<&mut Vec<(Site, usize)>>,
) {
    let table = RuleTable::new(f);
    let mut frontier: Vec<usize> = (0..dom.slots()).filter(|&i| infected[i]).collect();
    let mut seen = vec![u32::MAX; dom.slots()];
    let mut round = 0u32;
    let mut candidates: Vec<(Site, usize)> = Vec::new();
    while !frontier.is_empty() {
        candidates.clear();
        for &s in &frontier {
            let x = dom.site(s);
            for &o in &table.offsets {
                if let Some(j) = dom.slot(x - o) {
                    if !infected[j] && !immune[j] && seen[j] != round {
                        seen[j] = round;
                        candidates.push((dom.site(j), j));
                    }
                }
            }
        }
        candidates.sort_unstable();
        let newly: Vec<(Site, usize, usize)> = candidates
            .iter()
            .filter_map(|&(y, j)| table.first_satisfied(dom, infected, y).map(|k| (y, j, k)))
            .collect();
        frontier.clear();
        for (y, j, k) in newly {
            infected[j] = true;
            frontier.push(j);
            if let Some(w) = witness.as_deref_mut() {
                w.push((y, k));
            }
        }
        round += 1;
    }
}

fn mask_of(dom: &Domain, sites: &BTreeSet<Site>, outside: impl Fn(Site) -> BootstrapError) -> Result<Vec<bool>, BootstrapError> {
    let mut m = vec![false; dom.slots()];
    for &s in sites {
        let i = dom.slot(s).ok_or_else(|| outside(s))?;
        m[i] = true;
    }
    Ok(m)
}

/// Least fixed point of the infection started from `seeds`, with `immune` sites never infected.
pub fn closure(
    dom: &Domain,
    seeds: &BTreeSet<Site>,
    immune: &BTreeSet<Site>,
    f: &UpdateFamily,
) -> Result<Closure, BootstrapError> {
    if let Some(&s) = seeds.intersection(immune).next() {
        return Err(BootstrapError::ImmuneSeed(s));
    }
    let mut infected = mask_of(dom, seeds, BootstrapError::SeedOutsideDomain)?;
    // immune sites outside the domain are healthy anyway
    let mut imm = vec![false; dom.slots()];
    for &s in immune {
        if let Some(i) = dom.slot(s) {
            imm[i] = true;
        }
    }
    let mut steps = Vec::new();
    closure_in_place(dom, &mut infected, &imm, f, Some(&mut steps));
    Ok(Closure {
        infected,
        witness: InfectionWitness { steps },
        dom: dom.clone(),
    })
}

pub fn infectable(
    dom: &Domain,
    seeds: &BTreeSet<Site>,
    immune: &BTreeSet<Site>,
    f: &UpdateFamily,
    target: Site,
) -> Result<bool, BootstrapError> {
    if !dom.contains(target) {
        return Err(BootstrapError::TargetOutsideDomain(target));
    }
    Ok(closure(dom, seeds, immune, f)?.contains(target))
}

/// Fixed point by repeated sweeps over the whole domain; the reference for [`closure`].
pub fn naive_closure(
    dom: &Domain,
    seeds: &BTreeSet<Site>,
    immune: &BTreeSet<Site>,
    f: &UpdateFamily,
) -> BTreeSet<Site> {
    let mut infected: BTreeSet<Site> = seeds.iter().copied().filter(|&s| dom.contains(s)).collect();
    let wrap = |s: Site| dom.slot(s).map(|i| dom.site(i));
    loop {
        let mut changed = false;
        for y in dom.sites() {
            if infected.contains(&y) || immune.contains(&y) {
                continue;
            }
            let fires = f.rules().iter().any(|r| {
                r.offsets()
                    .iter()
                    .all(|&o| wrap(y + o).map(|z| infected.contains(&z)).unwrap_or(false))
            });
            if fires {
                infected.insert(y);
                changed = true;
            }
        }
        if !changed {
            return infected;
        }
    }
}

/// Domain, seed mask and immune mask of the ⊖- (`seed_spin = Minus`) or ⊕-bootstrap of a configuration.
///
/// The domain is the window. A static outside in the seed state is modelled
/// by a ring of extra seed sites as wide as the family's sup-norm range.
pub fn signed_setup(
    config: &SpinConfiguration,
    f: &UpdateFamily,
    seed_spin: Spin,
) -> (Domain, Vec<bool>, Vec<bool>) {
    let immune_mark = Frozen::at(seed_spin.flip());
    let pad = match config.boundary() {
        Boundary::StaticOutside(s) if s == seed_spin => f.chebyshev_range(),
        _ => 0,
    };
    let (lo, hi) = (config.lo(), config.hi());
    let dom = if config.boundary() == Boundary::Torus {
        Domain::torus(lo, config.width(), config.height())
    } else {
        let py = if config.dim() == crate::family::Dim::One { 0 } else { pad };
        let sites: Vec<Site> = (lo.x - pad..=hi.x + pad)
            .flat_map(|x| (lo.y - py..=hi.y + py).map(move |y| Site::new(x, y)))
            .filter(|&s| pad > 0 || config.in_window(s))
            .collect();
        Domain::from_sites(sites).expect("window is nonempty")
    };
    let mut seeds = vec![false; dom.slots()];
    let mut immune = vec![false; dom.slots()];
    for i in 0..dom.slots() {
        if !dom.in_domain_slot(i) {
            continue;
        }
        let s = dom.site(i);
        match (config.spin(s), config.frozen(s)) {
            (Some(sp), Some(mark)) => {
                seeds[i] = sp == seed_spin;
                immune[i] = mark == immune_mark;
            }
            _ => seeds[i] = true,
        }
    }
    (dom, seeds, immune)
}

fn signed_closure(config: &SpinConfiguration, f: &UpdateFamily, seed_spin: Spin) -> BTreeSet<Site> {
    let (dom, mut infected, immune) = signed_setup(config, f, seed_spin);
    closure_in_place(&dom, &mut infected, &immune, f, None);
    (0..dom.slots())
        .filter(|&i| infected[i])
        .map(|i| dom.site(i))
        .filter(|&s| config.in_window(s))
        .collect()
}

/// Window sites reachable by the ⊖-bootstrap from the current − sites.
pub fn minus_closure(config: &SpinConfiguration, f: &UpdateFamily) -> BTreeSet<Site> {
    signed_closure(config, f, Spin::Minus)
}

/// Window sites reachable by the ⊕-bootstrap from the current + sites.
pub fn plus_closure(config: &SpinConfiguration, f: &UpdateFamily) -> BTreeSet<Site> {
    signed_closure(config, f, Spin::Plus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::Dim;
    use proptest::prelude::*;

    fn set(v: &[(i32, i32)]) -> BTreeSet<Site> {
        v.iter().map(|&p| Site::from(p)).collect()
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

    #[test]
    fn diagonal_fills_square() {
        let dom = Domain::rect(Site::new(0, 0), Site::new(2, 2));
        let seeds = set(&[(0, 0), (1, 1), (2, 2)]);
        let c = closure(&dom, &seeds, &BTreeSet::new(), &nn2()).unwrap();
        assert_eq!(c.len(), 9);
        assert_eq!(c.witness.validate(&dom, &seeds, &BTreeSet::new(), &nn2()).unwrap(), c.sites());
        assert!(infectable(&dom, &seeds, &BTreeSet::new(), &nn2(), Site::new(2, 0)).unwrap());
        // first round infects (0,1),(1,0),(1,2),(2,1) in lexicographic order
        let first: Vec<Site> = c.witness.steps.iter().take(4).map(|s| s.0).collect();
        assert_eq!(first, vec![Site::new(0, 1), Site::new(1, 0), Site::new(1, 2), Site::new(2, 1)]);
    }

    #[test]
    fn immune_site_stops_a_run() {
        let f = UpdateFamily::from_ints(&[&[1]]).unwrap();
        let dom = Domain::segment(0, 9);
        let c = closure(&dom, &set(&[(9, 0)]), &set(&[(5, 0)]), &f).unwrap();
        assert_eq!(c.sites(), set(&[(6, 0), (7, 0), (8, 0), (9, 0)]));
        assert!(!infectable(&dom, &set(&[(9, 0)]), &set(&[(5, 0)]), &f, Site::new(3, 0)).unwrap());
        assert!(closure(&dom, &BTreeSet::new(), &BTreeSet::new(), &f).unwrap().is_empty());
        assert_eq!(
            closure(&dom, &set(&[(10, 0)]), &BTreeSet::new(), &f),
            Err(BootstrapError::SeedOutsideDomain(Site::new(10, 0)))
        );
        assert_eq!(
            closure(&dom, &set(&[(5, 0)]), &set(&[(5, 0)]), &f),
            Err(BootstrapError::ImmuneSeed(Site::new(5, 0)))
        );
    }

    #[test]
    fn torus_wraps_infection() {
        let f = UpdateFamily::from_ints(&[&[1]]).unwrap();
        let dom = Domain::torus(Site::ORIGIN, 6, 1);
        let c = closure(&dom, &set(&[(0, 0)]), &BTreeSet::new(), &f).unwrap();
        assert_eq!(c.len(), 6);
    }

    #[test]
    fn minus_closure_on_sealed_segment() {
        let f = UpdateFamily::from_ints(&[&[1]]).unwrap();
        let mut c = SpinConfiguration::sealed(Dim::One, 10, 1, 1, Spin::Plus);
        assert!(minus_closure(&c, &f).is_empty());
        c.set_spin(Site::new(5, 0), Spin::Minus).unwrap();
        let m = minus_closure(&c, &f);
        assert_eq!(m, (0..=5).map(|x| Site::new(x, 0)).collect());
        // ± symmetry
        assert_eq!(plus_closure(&c.flipped(), &f), m);
    }

    #[test]
    fn surrounded_minus_site_stays_alone() {
        let mut c = SpinConfiguration::sealed(Dim::Two, 3, 3, 1, Spin::Plus);
        for s in [(0, 1), (2, 1), (1, 0), (1, 2)] {
            c.set_frozen(Site::from(s), Frozen::FrozenPlus).unwrap();
        }
        c.set_spin(Site::new(1, 1), Spin::Minus).unwrap();
        assert_eq!(minus_closure(&c, &nn2()), set(&[(1, 1)]));
    }

    #[test]
    fn static_outside_seeds_the_border() {
        let f = UpdateFamily::from_ints(&[&[1]]).unwrap();
        let c = SpinConfiguration::open(Dim::One, 5, 1, Boundary::StaticOutside(Spin::Minus)).unwrap();
        assert_eq!(minus_closure(&c, &f).len(), 5);
        let p = SpinConfiguration::open(Dim::One, 5, 1, Boundary::StaticOutside(Spin::Plus)).unwrap();
        assert!(minus_closure(&p, &f).is_empty());
    }

    #[test]
    fn plus_closure_from_the_seal() {
        let f = nn2();
        let c = SpinConfiguration::sealed(Dim::Two, 4, 4, 1, Spin::Plus);
        let mut m = c.clone();
        for s in c.interior_sites() {
            m.set_spin(s, Spin::Minus).unwrap();
        }
        // the + seal fills the square under 2-neighbour bootstrap
        assert_eq!(plus_closure(&m, &f).len(), 36);
    }

    fn arb_family() -> impl Strategy<Value = UpdateFamily> {
        let offset = (-2i32..=2, -2i32..=2).prop_filter("nonzero", |&(x, y)| x != 0 || y != 0);
        let rule = prop::collection::vec(offset, 1..=3);
        prop::collection::vec(rule, 1..=4).prop_map(|rules| {
            let refs: Vec<&[(i32, i32)]> = rules.iter().map(|r| r.as_slice()).collect();
            UpdateFamily::from_pairs(&refs).unwrap()
        })
    }

    fn arb_instance() -> impl Strategy<Value = (UpdateFamily, BTreeSet<Site>, BTreeSet<Site>)> {
        let cells = prop::collection::vec(0u8..10, 144);
        (arb_family(), cells).prop_map(|(f, cells)| {
            let mut seeds = BTreeSet::new();
            let mut immune = BTreeSet::new();
            for (i, c) in cells.into_iter().enumerate() {
                let s = Site::new((i % 12) as i32, (i / 12) as i32);
                match c {
                    0 | 1 => {
                        seeds.insert(s);
                    }
                    2 => {
                        immune.insert(s);
                    }
                    _ => {}
                }
            }
            (f, seeds, immune)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn matches_naive_oracle((f, seeds, immune) in arb_instance()) {
            let dom = Domain::rect(Site::new(0, 0), Site::new(11, 11));
            let c = closure(&dom, &seeds, &immune, &f).unwrap();
            prop_assert_eq!(c.sites(), naive_closure(&dom, &seeds, &immune, &f));
            prop_assert_eq!(c.witness.validate(&dom, &seeds, &immune, &f).unwrap(), c.sites());
            prop_assert!(c.sites().is_disjoint(&immune));
        }

        #[test]
        fn monotone_and_idempotent((f, seeds, immune) in arb_instance(), extra in prop::collection::vec((0i32..12, 0i32..12), 0..10)) {
            let dom = Domain::rect(Site::new(0, 0), Site::new(11, 11));
            let c = closure(&dom, &seeds, &immune, &f).unwrap().sites();
            let again = closure(&dom, &c, &immune, &f).unwrap().sites();
            prop_assert_eq!(&again, &c);
            let mut more = seeds.clone();
            more.extend(extra.into_iter().map(Site::from).filter(|s| !immune.contains(s)));
            let bigger = closure(&dom, &more, &immune, &f).unwrap().sites();
            prop_assert!(c.is_subset(&bigger));
        }
    }
}

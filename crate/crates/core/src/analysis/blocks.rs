use std::collections::{BTreeSet, HashMap};

use petgraph::unionfind::UnionFind;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{AnalysisError, WellFixedReport};
use crate::bootstrap::{closure_in_place, Domain};
use crate::dynamics::{replica_seed, rng_from_seed, Frozen, SpinConfiguration};
use crate::exact::{isqrt_ceil, rational_ceil, Scale};
use crate::family::Dim;
use crate::geometry::{corner_sites, droplet_sites, CornerRegion, DirectionSet, Droplet, DropletKind, FamilyGeometry};
use crate::lattice::Site;

/// Frozen marks on a rectangle; sites outside read as unfrozen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrozenMarks {
    lo: Site,
    width: i32,
    height: i32,
    marks: Vec<Frozen>,
}

impl FrozenMarks {
    pub fn uniform(lo: Site, hi: Site, mark: Frozen) -> Self {
        let (width, height) = (hi.x - lo.x + 1, hi.y - lo.y + 1);
        assert!(width > 0 && height > 0, "empty rectangle");
        FrozenMarks {
            lo,
            width,
            height,
            marks: vec![mark; (width * height) as usize],
        }
    }

    /// I.i.d. marks, one uniform draw per site in row-major order.
    pub fn sample(lo: Site, hi: Site, rho_plus: f64, rho_minus: f64, rng: &mut impl Rng) -> Self {
        let mut m = FrozenMarks::uniform(lo, hi, Frozen::Unfrozen);
        for mark in m.marks.iter_mut() {
            let u: f64 = rng.gen();
            *mark = if u < rho_plus {
                Frozen::FrozenPlus
            } else if u < rho_plus + rho_minus {
                Frozen::FrozenMinus
            } else {
                Frozen::Unfrozen
            };
        }
        m
    }

    pub fn from_config(c: &SpinConfiguration) -> Self {
        let mut m = FrozenMarks::uniform(c.lo(), c.hi(), Frozen::Unfrozen);
        for s in c.window_sites() {
            m.set(s, c.frozen(s).expect("window site"));
        }
        m
    }

    fn slot(&self, s: Site) -> Option<usize> {
        let (dx, dy) = (s.x - self.lo.x, s.y - self.lo.y);
        if dx < 0 || dy < 0 || dx >= self.width || dy >= self.height {
            return None;
        }
        Some((dy * self.width + dx) as usize)
    }

    pub fn get(&self, s: Site) -> Frozen {
        self.slot(s).map(|i| self.marks[i]).unwrap_or(Frozen::Unfrozen)
    }

    pub fn set(&mut self, s: Site, mark: Frozen) {
        if let Some(i) = self.slot(s) {
            self.marks[i] = mark;
        }
    }

    pub fn lo(&self) -> Site {
        self.lo
    }

    pub fn hi(&self) -> Site {
        Site::new(self.lo.x + self.width - 1, self.lo.y + self.height - 1)
    }

    pub fn sites(&self) -> impl Iterator<Item = Site> + '_ {
        let (lo, w) = (self.lo, self.width);
        (0..self.marks.len() as i32).map(move |i| Site::new(lo.x + i % w, lo.y + i / w))
    }
}

/// Every site of every enlarged corner of `center + D(a)` is frozen at +.
pub fn good_droplet_check(
    marks: &FrozenMarks,
    center: Site,
    a: Scale,
    dirs: &DirectionSet,
    range_sq: i64,
) -> Result<bool, AnalysisError> {
    for i in 0..dirs.m() {
        let c = CornerRegion::new(center, i, a, dirs.clone());
        if corner_sites(&c, range_sq)?
            .into_iter()
            .any(|s| marks.get(s) != Frozen::FrozenPlus)
        {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_block_preconditions(l: i64, geom: &FamilyGeometry) -> Result<(), AnalysisError> {
    if geom.family.dim() != Dim::Two {
        return Err(AnalysisError::NeedsTwoDimensions);
    }
    let range_sq = geom.family.range_sq();
    if geom.classification.is_supercritical() {
        if geom.classification.has_disjoint_rules {
            return Err(AnalysisError::DisjointRules);
        }
        let min = isqrt_ceil(range_sq);
        if l < min {
            return Err(AnalysisError::BlockTooSmall { l, min });
        }
    } else {
        let min = geom.constants.min_block_size(range_sq);
        if l < min {
            return Err(AnalysisError::BlockTooSmall { l, min });
        }
    }
    Ok(())
}

/// Scale of the open droplet `D′(4LM + 1)`, rounded up on the 2⁻¹⁶ grid.
fn escape_scale(l: i64, geom: &FamilyGeometry) -> Scale {
    let m = geom.constants.m_radius.expect("non-supercritical constants");
    rational_ceil(4.0 * l as f64 * m + 1.0 + 1e-9, 1 << 16)
}

/// Droplet scales scanned for a good droplet: `2L, 2L + s, ...` up to `3L`, plus `3L`,
/// with `s = ⌈r⌉ + 1`.
pub fn droplet_scan(l: i64, range_sq: i64) -> Vec<i64> {
    let step = isqrt_ceil(range_sq) + 1;
    let mut v: Vec<i64> = (0..).map(|n| 2 * l + n * step).take_while(|&a| a <= 3 * l).collect();
    if v.last() != Some(&(3 * l)) {
        v.push(3 * l);
    }
    v
}

/// Bounding box of all sites a block check at the origin looks at.
pub fn block_region(l: i64, geom: &FamilyGeometry) -> Result<(Site, Site), AnalysisError> {
    check_block_preconditions(l, geom)?;
    if geom.classification.is_supercritical() {
        let b = 2 * l as i32;
        return Ok((Site::new(-b, -b), Site::new(b, b)));
    }
    let dirs = geom.dirs.clone().expect("non-supercritical directions");
    Ok(Droplet::new(Site::ORIGIN, escape_scale(l, geom), dirs, DropletKind::Open).bounding_box())
}

fn all_infected(dom: &Domain, marks: &FrozenMarks, seed_sites: impl Fn(Site) -> bool, geom: &FamilyGeometry, targets: &[Site]) -> bool {
    let mut infected = vec![false; dom.slots()];
    for s in dom.sites() {
        if seed_sites(s) && marks.get(s) == Frozen::FrozenPlus {
            infected[dom.slot(s).unwrap()] = true;
        }
    }
    let immune = vec![false; dom.slots()];
    closure_in_place(dom, &mut infected, &immune, &geom.family, None);
    targets
        .iter()
        .all(|&t| dom.slot(t).map(|i| infected[i]).unwrap_or(false))
}

/// Whether the block `x + B_L` is good for the frozen marks.
pub fn good_block_check(marks: &FrozenMarks, x: Site, l: i64, geom: &FamilyGeometry) -> Result<bool, AnalysisError> {
    check_block_preconditions(l, geom)?;
    let li = l as i32;
    if geom.classification.is_supercritical() {
        let outer = Domain::rect(x - Site::new(2 * li, 2 * li), x + Site::new(2 * li, 2 * li));
        if outer.sites().any(|s| marks.get(s) == Frozen::FrozenMinus) {
            return Ok(false);
        }
        let targets: Vec<Site> = Domain::rect(x - Site::new(li, li), x + Site::new(li, li)).sites().collect();
        return Ok(all_infected(&outer, marks, |_| true, geom, &targets));
    }
    let dirs = geom.dirs.as_ref().expect("non-supercritical directions");
    let range_sq = geom.family.range_sq();
    let escape = droplet_sites(&Droplet::new(x, escape_scale(l, geom), dirs.clone(), DropletKind::Open))?;
    if escape.iter().any(|&s| marks.get(s) == Frozen::FrozenMinus) {
        return Ok(false);
    }
    let mut good = false;
    for a in droplet_scan(l, range_sq) {
        if good_droplet_check(marks, x, Scale::from_integer(a), dirs, range_sq)? {
            good = true;
            break;
        }
    }
    if !good {
        return Ok(false);
    }
    let dom = Domain::from_sites(escape).expect("nonempty droplet");
    let seed_droplet = Droplet::new(x, Scale::from_integer(4 * l), dirs.clone(), DropletKind::Closed);
    let targets = droplet_sites(&Droplet::new(x, Scale::from_integer(3 * l), dirs.clone(), DropletKind::Closed))?;
    Ok(all_infected(&dom, marks, |s| seed_droplet.contains(s), geom, &targets))
}

/// A Monte Carlo proportion with its 95% Wilson interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub successes: u64,
    pub trials: u64,
    pub p: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Fraction of i.i.d. frozen configurations in which the block at the origin is good.
/// Trial `i` uses the replica seed derived from `(seed, i)`.
pub fn estimate_good_block_probability(
    geom: &FamilyGeometry,
    rho_plus: f64,
    rho_minus: f64,
    l: i64,
    trials: u64,
    seed: u64,
) -> Result<Estimate, AnalysisError> {
    if trials == 0 {
        return Err(AnalysisError::InvalidArgument("trials must be positive".into()));
    }
    if !(0.0..=1.0).contains(&rho_plus) || !(0.0..=1.0).contains(&rho_minus) || rho_plus + rho_minus > 1.0 {
        return Err(AnalysisError::InvalidArgument("frozen probabilities out of range".into()));
    }
    let (lo, hi) = block_region(l, geom)?;
    let outcomes: Vec<bool> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_from_seed(replica_seed(seed, i));
            let marks = FrozenMarks::sample(lo, hi, rho_plus, rho_minus, &mut rng);
            good_block_check(&marks, Site::ORIGIN, l, geom)
        })
        .collect::<Result<_, _>>()?;
    let successes = outcomes.iter().filter(|&&b| b).count() as u64;
    let (ci_low, ci_high) = wilson_interval(successes, trials, 1.96);
    Ok(Estimate {
        successes,
        trials,
        p: successes as f64 / trials as f64,
        ci_low,
        ci_high,
    })
}

/// Blocks `2L₀·x + {−L₀..L₀}^d` over a window; neighbouring blocks share their boundary rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockGrid {
    pub l0: i32,
    pub lo: Site,
    pub hi: Site,
    pub dim: Dim,
}

impl BlockGrid {
    pub fn new(l0: i32, lo: Site, hi: Site, dim: Dim) -> Result<Self, AnalysisError> {
        if l0 < 1 {
            return Err(AnalysisError::InvalidArgument("block size must be positive".into()));
        }
        Ok(BlockGrid { l0, lo, hi, dim })
    }

    pub fn for_config(l0: i32, c: &SpinConfiguration) -> Result<Self, AnalysisError> {
        BlockGrid::new(l0, c.lo(), c.hi(), c.dim())
    }

    fn axis_blocks(&self, v: i32) -> Vec<i32> {
        let p = 2 * self.l0;
        let k = (v + self.l0).div_euclid(p);
        if (v + self.l0).rem_euclid(p) == 0 {
            vec![k - 1, k]
        } else {
            vec![k]
        }
    }

    /// Block indices whose block contains `s`.
    pub fn blocks_containing(&self, s: Site) -> Vec<Site> {
        let ys = if self.dim == Dim::One { vec![0] } else { self.axis_blocks(s.y) };
        let mut out = Vec::new();
        for bx in self.axis_blocks(s.x) {
            for &by in &ys {
                out.push(Site::new(bx, by));
            }
        }
        out
    }

    /// Whether block `b` sticks out of the window.
    pub fn is_partial(&self, b: Site) -> bool {
        let c = Site::new(2 * self.l0 * b.x, 2 * self.l0 * b.y);
        let outside_x = c.x - self.l0 < self.lo.x || c.x + self.l0 > self.hi.x;
        let outside_y = self.dim == Dim::Two && (c.y - self.l0 < self.lo.y || c.y + self.l0 > self.hi.y);
        outside_x || outside_y
    }
}

/// Sizes (largest first) of the connected components of blocks holding an uncertified site.
pub fn non_fixed_components(report: &WellFixedReport, grid: &BlockGrid) -> Vec<usize> {
    let marked: BTreeSet<Site> = report
        .uncertified
        .iter()
        .flat_map(|&s| grid.blocks_containing(s))
        .collect();
    let index: HashMap<Site, usize> = marked.iter().enumerate().map(|(i, &b)| (b, i)).collect();
    let mut uf = UnionFind::<usize>::new(marked.len());
    for (&b, &i) in &index {
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(&j) = index.get(&Site::new(b.x + dx, b.y + dy)) {
                    uf.union(i, j);
                }
            }
        }
    }
    let mut sizes: HashMap<usize, usize> = HashMap::new();
    for i in 0..marked.len() {
        *sizes.entry(uf.find(i)).or_default() += 1;
    }
    let mut v: Vec<usize> = sizes.into_values().collect();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::UpdateFamily;

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

    fn fig1() -> UpdateFamily {
        UpdateFamily::from_pairs(&[&[(-1, 0), (-1, 1)], &[(-1, 0), (-1, -1)]]).unwrap()
    }

    fn report(uncertified: &[(i32, i32)]) -> WellFixedReport {
        WellFixedReport {
            time: 0.0,
            certified_plus: BTreeSet::new(),
            uncertified: uncertified.iter().map(|&p| Site::from(p)).collect(),
            exact: true,
        }
    }

    #[test]
    fn droplet_goodness() {
        let axes = DirectionSet::axes();
        let all = FrozenMarks::uniform(Site::new(-10, -10), Site::new(10, 10), Frozen::FrozenPlus);
        assert!(good_droplet_check(&all, Site::ORIGIN, Scale::from_integer(3), &axes, 1).unwrap());
        let mut hole = all.clone();
        hole.set(Site::new(-3, -2), Frozen::Unfrozen);
        assert!(!good_droplet_check(&hole, Site::ORIGIN, Scale::from_integer(3), &axes, 1).unwrap());
        // the hole is not in the corners of the droplet centred one step to the left
        assert!(good_droplet_check(&hole, Site::new(4, 0), Scale::from_integer(3), &axes, 1).unwrap());
    }

    #[test]
    fn saturated_blocks_are_good() {
        for f in [nn2(), fig1()] {
            let g = FamilyGeometry::new(&f).unwrap();
            let (lo, hi) = block_region(4, &g).unwrap();
            let all = FrozenMarks::uniform(lo, hi, Frozen::FrozenPlus);
            assert!(good_block_check(&all, Site::ORIGIN, 4, &g).unwrap());
            let mut bad = all.clone();
            bad.set(Site::new(3, -2), Frozen::FrozenMinus);
            assert!(!good_block_check(&bad, Site::ORIGIN, 4, &g).unwrap());
        }
    }

    #[test]
    fn block_preconditions() {
        let g = FamilyGeometry::new(&nn2()).unwrap();
        assert_eq!(
            good_block_check(&FrozenMarks::uniform(Site::ORIGIN, Site::ORIGIN, Frozen::Unfrozen), Site::ORIGIN, 1, &g),
            Err(AnalysisError::BlockTooSmall { l: 1, min: 2 })
        );
        let disjoint = FamilyGeometry::new(&UpdateFamily::from_pairs(&[&[(1, 0)], &[(-1, 0)]]).unwrap()).unwrap();
        assert_eq!(block_region(4, &disjoint), Err(AnalysisError::DisjointRules));
    }

    #[test]
    fn scan_grid() {
        assert_eq!(droplet_scan(4, 1), vec![8, 10, 12]);
        assert_eq!(droplet_scan(5, 1), vec![10, 12, 14, 15]);
        assert_eq!(droplet_scan(4, 2), vec![8, 11, 12]);
    }

    #[test]
    fn estimates_at_the_extremes() {
        let g = FamilyGeometry::new(&fig1()).unwrap();
        let one = estimate_good_block_probability(&g, 1.0, 0.0, 4, 5, 1).unwrap();
        assert_eq!(one.p, 1.0);
        let zero = estimate_good_block_probability(&g, 0.0, 0.0, 4, 5, 1).unwrap();
        assert_eq!(zero.p, 0.0);
        assert!(estimate_good_block_probability(&g, 0.5, 0.0, 4, 0, 1).is_err());
    }

    #[test]
    fn wilson_bounds() {
        let (lo, hi) = wilson_interval(0, 200, 1.96);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.02);
        let (lo, hi) = wilson_interval(100, 200, 1.96);
        assert!((lo - 0.4313).abs() < 1e-3 && (hi - 0.5687).abs() < 1e-3, "{lo} {hi}");
    }

    #[test]
    fn components() {
        let grid = BlockGrid::new(2, Site::new(0, 0), Site::new(40, 40), Dim::Two).unwrap();
        assert!(non_fixed_components(&report(&[]), &grid).is_empty());
        assert_eq!(non_fixed_components(&report(&[(1, 1)]), &grid), vec![1]);
        // (1,1) lies in block (0,0); (5,5) in block (1,1): diagonal neighbours
        assert_eq!(non_fixed_components(&report(&[(1, 1), (5, 5)]), &grid), vec![2]);
        // a shared boundary site belongs to four blocks
        assert_eq!(non_fixed_components(&report(&[(2, 2)]), &grid), vec![4]);
        assert_eq!(non_fixed_components(&report(&[(1, 1), (20, 20)]), &grid), vec![1, 1]);
        assert!(grid.is_partial(Site::new(0, 0)));
        assert!(!grid.is_partial(Site::new(1, 1)));
    }
}

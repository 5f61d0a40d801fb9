//! Stable-direction droplets and their enlarged corners.
//!
//! For a non-supercritical family we pick `m ∈ {3, 4}` stable directions
//! `u₁..u_m` (counterclockwise, origin strictly inside their hull) and work
//! with the polygons
//!
//! * `D(a)  = ∩ᵢ {x : ⟨x, −uᵢ⟩ ≤ a}` (closed, shielded from the outside),
//! * `D′(a) = ∩ᵢ {x : ⟨x, uᵢ⟩ < a}` (open, closed under bootstrap),
//!
//! and the corner strips `C_{i,i+1}(a)` of width `r` where consecutive
//! sides of `D(a)` meet. Lattice membership is decided exactly: directions
//! are primitive integer vectors, `a` is rational and `r = √range_sq`.
//! Real-valued constants (M, M′, ã₀) are reported in `f64`.

use std::cmp::Ordering;

use serde::Serialize;
use thiserror::Error;

use crate::exact::{isqrt_ceil, scale_to_f64, sign_sum_sqrt, Scale};
use crate::family::{classify, stable_set, CircleDirection, Classification, FamilyError, UpdateFamily};
use crate::lattice::Site;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("family is supercritical: no stable directions surround the origin")]
    Supercritical,
    #[error("no valid stable direction set found")]
    NoDirectionSet,
    #[error("directions must number 3 or 4, be counterclockwise and surround the origin")]
    InvalidDirectionSet,
    #[error("degenerate droplet polygon: D(1) has fewer than {0} sides")]
    DegeneratePolygon(usize),
    #[error("corner scale must be at least the range (a = {a}, r = {r})")]
    ScaleBelowRange { a: f64, r: f64 },
    #[error("scale must be positive")]
    NonPositiveScale,
    #[error("operation requires four directions")]
    NeedFourDirections,
    #[error(transparent)]
    Family(#[from] FamilyError),
}

/// Stable directions `u₁..u_m` in counterclockwise order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DirectionSet {
    dirs: Vec<CircleDirection>,
}

impl DirectionSet {
    /// Validates and sorts the directions counterclockwise from the positive x axis.
    pub fn new(mut dirs: Vec<CircleDirection>) -> Result<Self, GeometryError> {
        dirs.sort_by(|a, b| a.angle_cmp(*b));
        dirs.dedup();
        if !(dirs.len() == 3 || dirs.len() == 4) || !surrounds_origin(&dirs) {
            return Err(GeometryError::InvalidDirectionSet);
        }
        Ok(DirectionSet { dirs })
    }

    pub fn axes() -> Self {
        let d = |x, y| CircleDirection::new(x, y).unwrap();
        DirectionSet::new(vec![d(1, 0), d(0, 1), d(-1, 0), d(0, -1)]).unwrap()
    }

    pub fn m(&self) -> usize {
        self.dirs.len()
    }

    pub fn dirs(&self) -> &[CircleDirection] {
        &self.dirs
    }

    pub fn get(&self, i: usize) -> CircleDirection {
        self.dirs[i % self.dirs.len()]
    }

    fn unit(&self, i: usize) -> (f64, f64) {
        self.get(i).unit()
    }

    /// Vertex `c_{i,i+1}` of `D(1)`, where the sides orthogonal to `uᵢ` and `u_{i+1}` meet.
    pub fn vertex(&self, i: usize) -> (f64, f64) {
        let (a, b) = (self.unit(i), self.unit(i + 1));
        solve2((-a.0, -a.1), 1.0, (-b.0, -b.1), 1.0).expect("consecutive directions are not parallel")
    }
}

/// Consecutive directions (sorted counterclockwise) are all less than π apart.
fn surrounds_origin(sorted: &[CircleDirection]) -> bool {
    let m = sorted.len();
    m >= 3 && (0..m).all(|i| sorted[i].cross(sorted[(i + 1) % m]) > 0)
}

fn solve2(w1: (f64, f64), b1: f64, w2: (f64, f64), b2: f64) -> Option<(f64, f64)> {
    let det = w1.0 * w2.1 - w1.1 * w2.0;
    if det.abs() < 1e-14 {
        return None;
    }
    Some(((b1 * w2.1 - w1.1 * b2) / det, (w1.0 * b2 - b1 * w2.0) / det))
}

/// Canonical stable direction set for a non-supercritical 2D family.
///
/// Candidates are the endpoints of the stable arcs, their antipodes, the
/// axes and all vectors of sup-norm ≤ 2, plus one interior direction per
/// gap between consecutive candidates; only stable ones are kept. Triples
/// are tried before quadruples, and among valid sets the one with the
/// smallest total squared norm wins (ties broken by the counterclockwise
/// list of coordinates).
pub fn select_directions(f: &UpdateFamily) -> Result<DirectionSet, GeometryError> {
    let class = crate::family::classify_2d(f)?;
    if class.is_supercritical() {
        return Err(GeometryError::Supercritical);
    }
    let stable = stable_set(f)?;
    let mut base: Vec<CircleDirection> = Vec::new();
    for p in stable.endpoints() {
        base.push(p);
        base.push(p.neg());
    }
    for x in -2i64..=2 {
        for y in -2i64..=2 {
            if let Some(d) = CircleDirection::new(x, y) {
                base.push(d);
            }
        }
    }
    base.sort_by(|a, b| a.angle_cmp(*b));
    base.dedup();
    let k = base.len();
    let mut candidates = base.clone();
    for i in 0..k {
        candidates.push(CircleDirection::strictly_inside(base[i], base[(i + 1) % k]));
    }
    candidates.retain(|d| stable.contains(*d));
    candidates.sort_by(|a, b| a.angle_cmp(*b));
    candidates.dedup();

    for m in [3usize, 4] {
        let mut best: Option<(i64, Vec<(i64, i64)>, Vec<CircleDirection>)> = None;
        for_each_subset(candidates.len(), m, &mut |idx| {
            let pick: Vec<CircleDirection> = idx.iter().map(|&i| candidates[i]).collect();
            if !surrounds_origin(&pick) {
                return;
            }
            let cost: i64 = pick.iter().map(|d| d.norm_sq()).sum();
            let coords: Vec<(i64, i64)> = pick.iter().map(|d| (d.x(), d.y())).collect();
            let better = match &best {
                None => true,
                Some((c, co, _)) => (cost, &coords) < (*c, co),
            };
            if better {
                best = Some((cost, coords, pick));
            }
        });
        if let Some((_, _, pick)) = best {
            return DirectionSet::new(pick);
        }
    }
    Err(GeometryError::NoDirectionSet)
}

// Index subsets in increasing order; candidates are angle sorted so each subset is too.
fn for_each_subset(n: usize, m: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(start: usize, n: usize, m: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == m {
            f(cur);
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, m, cur, f);
            cur.pop();
        }
    }
    rec(0, n, m, &mut Vec::with_capacity(m), f);
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DropletKind {
    /// `D(a)`: closed half-planes facing −uᵢ.
    Closed,
    /// `D′(a)`: open half-planes facing uᵢ.
    Open,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Droplet {
    pub center: Site,
    pub a: Scale,
    pub dirs: DirectionSet,
    pub kind: DropletKind,
}

impl Droplet {
    pub fn new(center: Site, a: Scale, dirs: DirectionSet, kind: DropletKind) -> Self {
        Droplet { center, a, dirs, kind }
    }

    pub fn contains(&self, s: Site) -> bool {
        let rel = s - self.center;
        let (p, q) = (*self.a.numer() as i128, *self.a.denom() as i128);
        self.dirs.dirs().iter().all(|v| {
            let n = v.norm_sq() as u64;
            match self.kind {
                DropletKind::Closed => {
                    let t = -v.dot_offset(rel.x as i64, rel.y as i64);
                    // p√n − q·t ≥ 0
                    sign_sum_sqrt(-q * t, p, n, 0, 0) != Ordering::Less
                }
                DropletKind::Open => {
                    let t = v.dot_offset(rel.x as i64, rel.y as i64);
                    sign_sum_sqrt(-q * t, p, n, 0, 0) == Ordering::Greater
                }
            }
        })
    }

    /// Integer bounding box `(min, max)` that contains every lattice point of the droplet.
    pub fn bounding_box(&self) -> (Site, Site) {
        let a = scale_to_f64(self.a);
        let sign = match self.kind {
            DropletKind::Closed => 1.0,
            DropletKind::Open => -1.0,
        };
        let pts: Vec<(f64, f64)> = (0..self.dirs.m())
            .map(|i| {
                let c = self.dirs.vertex(i);
                (sign * a * c.0, sign * a * c.1)
            })
            .collect();
        bbox_of(&pts, self.center)
    }
}

fn bbox_of(pts: &[(f64, f64)], center: Site) -> (Site, Site) {
    let minx = pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let maxx = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let miny = pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let maxy = pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    (
        Site::new(minx.floor() as i32 - 1 + center.x, miny.floor() as i32 - 1 + center.y),
        Site::new(maxx.ceil() as i32 + 1 + center.x, maxy.ceil() as i32 + 1 + center.y),
    )
}

fn scan(lo: Site, hi: Site, mut keep: impl FnMut(Site) -> bool) -> Vec<Site> {
    let mut out = Vec::new();
    for x in lo.x..=hi.x {
        for y in lo.y..=hi.y {
            let s = Site::new(x, y);
            if keep(s) {
                out.push(s);
            }
        }
    }
    out
}

/// Lattice points of a droplet, sorted lexicographically.
pub fn droplet_sites(d: &Droplet) -> Result<Vec<Site>, GeometryError> {
    if *d.a.numer() <= 0 {
        return Err(GeometryError::NonPositiveScale);
    }
    let (lo, hi) = d.bounding_box();
    Ok(scan(lo, hi, |s| d.contains(s)))
}

/// Enlarged corner `C_{i,i+1}(a)` translated to `center` (`i` is 0-based).
#[derive(Clone, Debug, PartialEq)]
pub struct CornerRegion {
    pub center: Site,
    pub i: usize,
    pub a: Scale,
    pub dirs: DirectionSet,
}

impl CornerRegion {
    pub fn new(center: Site, i: usize, a: Scale, dirs: DirectionSet) -> Self {
        CornerRegion { center, i, a, dirs }
    }

    /// `a − r ≤ ⟨x, −u_j⟩ ≤ a` for `j ∈ {i, i+1}`.
    pub fn contains(&self, s: Site, range_sq: i64) -> bool {
        let rel = s - self.center;
        let (p, q) = (*self.a.numer() as i128, *self.a.denom() as i128);
        [self.dirs.get(self.i), self.dirs.get(self.i + 1)].iter().all(|v| {
            let n = v.norm_sq() as u64;
            let t = -v.dot_offset(rel.x as i64, rel.y as i64);
            let upper = sign_sum_sqrt(-q * t, p, n, 0, 0) != Ordering::Less;
            // q·t − p√n + q√(R·n) ≥ 0
            let lower = sign_sum_sqrt(q * t, -p, n, q, range_sq as u64 * n) != Ordering::Less;
            upper && lower
        })
    }

    fn polygon(&self, r: f64) -> Vec<(f64, f64)> {
        let a = scale_to_f64(self.a);
        let (ui, uj) = (self.dirs.unit(self.i), self.dirs.unit(self.i + 1));
        let mut pts = Vec::with_capacity(4);
        for bi in [a, a - r] {
            for bj in [a, a - r] {
                pts.push(solve2((-ui.0, -ui.1), bi, (-uj.0, -uj.1), bj).expect("non-parallel"));
            }
        }
        pts
    }
}

/// Lattice points of a corner region. Requires `a ≥ r`.
pub fn corner_sites(c: &CornerRegion, range_sq: i64) -> Result<Vec<Site>, GeometryError> {
    let (p, q) = (*c.a.numer() as i128, *c.a.denom() as i128);
    // p − q√R ≥ 0
    if sign_sum_sqrt(p, -q, range_sq as u64, 0, 0) == Ordering::Less {
        return Err(GeometryError::ScaleBelowRange {
            a: scale_to_f64(c.a),
            r: (range_sq as f64).sqrt(),
        });
    }
    let (lo, hi) = bbox_of(&c.polygon((range_sq as f64).sqrt()), c.center);
    Ok(scan(lo, hi, |s| c.contains(s, range_sq)))
}

/// Constants of the droplet and block constructions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeometryConstants {
    /// M = max ‖x‖₂ over D(1).
    pub m_radius: Option<f64>,
    /// M′ = max ‖x‖₂ over D′(1).
    pub m_prime_radius: Option<f64>,
    pub k: u64,
    /// Smallest scale (denominator 2¹⁶ grid) at which opposite side strips separate; 0 for m = 3.
    pub a0: Option<Scale>,
    /// Scale above which every corner lies in its droplet.
    pub a0_tilde: Option<f64>,
    /// `a0_tilde` rounded up to the 2¹⁶ grid.
    pub a0_tilde_upper: Option<Scale>,
}

impl GeometryConstants {
    /// Smallest integer block size `L ≥ max(a₀, ã₀, r)`.
    pub fn min_block_size(&self, range_sq: i64) -> i64 {
        let mut l = isqrt_ceil(range_sq).max(1);
        if let Some(a0) = self.a0 {
            l = l.max(a0.ceil().to_integer());
        }
        if let Some(t) = self.a0_tilde_upper {
            l = l.max(t.ceil().to_integer());
        }
        l
    }
}

const GRID_DENOM: i64 = 1 << 16;

fn check_polygon(dirs: &DirectionSet) -> Result<(), GeometryError> {
    let m = dirs.m();
    for i in 0..m {
        let c = dirs.vertex(i);
        let prev = dirs.vertex(i + m - 1);
        if (c.0 - prev.0).hypot(c.1 - prev.1) < 1e-12 {
            return Err(GeometryError::DegeneratePolygon(m));
        }
        for j in 0..m {
            if j == i || j == (i + 1) % m {
                continue;
            }
            let u = dirs.unit(j);
            if -(c.0 * u.0 + c.1 * u.1) >= 1.0 - 1e-12 {
                return Err(GeometryError::DegeneratePolygon(m));
            }
        }
    }
    Ok(())
}

pub fn compute_constants(
    dirs: Option<&DirectionSet>,
    f: &UpdateFamily,
    classification: &Classification,
) -> Result<GeometryConstants, GeometryError> {
    if classification.is_supercritical() {
        return Ok(GeometryConstants {
            m_radius: None,
            m_prime_radius: None,
            k: 25,
            a0: None,
            a0_tilde: None,
            a0_tilde_upper: None,
        });
    }
    let dirs = dirs.ok_or(GeometryError::NoDirectionSet)?;
    check_polygon(dirs)?;
    let m = dirs.m();
    let r = f.range();
    let verts: Vec<(f64, f64)> = (0..m).map(|i| dirs.vertex(i)).collect();
    let m_radius = verts.iter().map(|v| v.0.hypot(v.1)).fold(0.0, f64::max);
    // closure of D′(1) is −D(1)
    let m_prime_radius = verts.iter().map(|v| (-v.0).hypot(-v.1)).fold(0.0, f64::max);
    let inner = ((4.0 * m_radius + 1.0) * m_prime_radius - 1e-9).ceil() as u64;
    let k = (2 * inner + 1).pow(2);

    let mut a0_tilde: f64 = 0.0;
    for i in 0..m {
        let corner = CornerRegion::new(Site::ORIGIN, i, Scale::from_integer(1), dirs.clone());
        let poly = corner.polygon(r);
        let mut diam: f64 = 0.0;
        for p in &poly {
            for q in &poly {
                diam = diam.max((p.0 - q.0).hypot(p.1 - q.1));
            }
        }
        let c = verts[i];
        for j in 0..m {
            if j == i || j == (i + 1) % m {
                continue;
            }
            let u = dirs.unit(j);
            let proj = -(c.0 * u.0 + c.1 * u.1);
            a0_tilde = a0_tilde.max(diam).max(diam / (1.0 - proj));
        }
    }
    let a0_tilde_upper = crate::exact::rational_ceil(a0_tilde + 1e-12, GRID_DENOM);

    let a0 = if m == 3 {
        Scale::from_integer(0)
    } else {
        separation_scale(dirs, f.range_sq())?
    };
    Ok(GeometryConstants {
        m_radius: Some(m_radius),
        m_prime_radius: Some(m_prime_radius),
        k,
        a0: Some(a0),
        a0_tilde: Some(a0_tilde),
        a0_tilde_upper: Some(a0_tilde_upper),
    })
}

/// Smallest `a` on the 2⁻¹⁶ grid with both opposite strip pairs disjoint.
fn separation_scale(dirs: &DirectionSet, range_sq: i64) -> Result<Scale, GeometryError> {
    let ok = |a: Scale| -> Result<bool, GeometryError> {
        Ok(strips_disjoint(dirs, a, range_sq, 0)? && strips_disjoint(dirs, a, range_sq, 1)?)
    };
    let mut hi: i64 = 1;
    while !ok(Scale::from_integer(hi))? {
        hi *= 2;
        if hi > 1 << 30 {
            return Err(GeometryError::DegeneratePolygon(dirs.m()));
        }
    }
    // smallest k in (lo, hi·D] with ok(k/D)
    let (mut lo, mut hi) = (0i64, hi * GRID_DENOM);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(Scale::new(mid, GRID_DENOM))? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Scale::new(hi, GRID_DENOM))
}

/// Whether the real sets `D(a) ∩ {a − r ≤ ⟨x,−uᵢ⟩}` and `D(a) ∩ {a − r ≤ ⟨x,−u_{i+2}⟩}` are disjoint.
///
/// Decided by enumerating the vertices of the intersection of all
/// constraints in `f64` with a relative tolerance of 1e-9.
pub fn strips_disjoint(
    dirs: &DirectionSet,
    a: Scale,
    range_sq: i64,
    i: usize,
) -> Result<bool, GeometryError> {
    if dirs.m() != 4 {
        return Err(GeometryError::NeedFourDirections);
    }
    let a = scale_to_f64(a);
    let r = (range_sq as f64).sqrt();
    // half-planes w·x ≤ b
    let mut planes: Vec<((f64, f64), f64)> = (0..4)
        .map(|j| {
            let u = dirs.unit(j);
            ((-u.0, -u.1), a)
        })
        .collect();
    for j in [i, i + 2] {
        let u = dirs.unit(j);
        planes.push(((u.0, u.1), -(a - r)));
    }
    let tol = 1e-9 * a.abs().max(1.0);
    for p in 0..planes.len() {
        for q in p + 1..planes.len() {
            let Some(x) = solve2(planes[p].0, planes[p].1, planes[q].0, planes[q].1) else {
                continue;
            };
            if planes
                .iter()
                .all(|(w, b)| w.0 * x.0 + w.1 * x.1 <= b + tol)
            {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Directions, constants and classification bundled for block checks.
#[derive(Clone, Debug)]
pub struct FamilyGeometry {
    pub family: UpdateFamily,
    pub classification: Classification,
    pub dirs: Option<DirectionSet>,
    pub constants: GeometryConstants,
}

impl FamilyGeometry {
    pub fn new(family: &UpdateFamily) -> Result<Self, GeometryError> {
        let classification = classify(family);
        let dirs = if classification.is_supercritical() {
            None
        } else {
            Some(select_directions(family)?)
        };
        let constants = compute_constants(dirs.as_ref(), family, &classification)?;
        Ok(FamilyGeometry {
            family: family.clone(),
            classification,
            dirs,
            constants,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::UpdateFamily;

    fn d(x: i64, y: i64) -> CircleDirection {
        CircleDirection::new(x, y).unwrap()
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

    fn fig1() -> UpdateFamily {
        UpdateFamily::from_pairs(&[&[(-1, 0), (-1, 1)], &[(-1, 0), (-1, -1)]]).unwrap()
    }

    /// Exhaustive: does any triple of the given stable directions surround the origin?
    fn any_triple(stable: &[CircleDirection]) -> bool {
        let mut s = stable.to_vec();
        s.sort_by(|a, b| a.angle_cmp(*b));
        for i in 0..s.len() {
            for j in i + 1..s.len() {
                for k in j + 1..s.len() {
                    if surrounds_origin(&[s[i], s[j], s[k]]) {
                        return true;
                    }
                }
            }
        }
        false
    }

    #[test]
    fn selects_axes_for_two_neighbour_family() {
        let dirs = select_directions(&nn2()).unwrap();
        assert_eq!(dirs, DirectionSet::axes());
        assert!(!any_triple(&[d(1, 0), d(0, 1), d(-1, 0), d(0, -1)]));
    }

    #[test]
    fn selects_a_triple_when_everything_is_stable() {
        let dirs = select_directions(&cross()).unwrap();
        assert_eq!(dirs.m(), 3);
        assert_eq!(dirs.dirs(), &[d(0, 1), d(-1, 0), d(1, -1)]);
    }

    #[test]
    fn rejects_supercritical() {
        assert_eq!(select_directions(&fig1()), Err(GeometryError::Supercritical));
    }

    #[test]
    fn droplet_examples() {
        let axes = DirectionSet::axes();
        let dd = Droplet::new(Site::ORIGIN, Scale::from_integer(2), axes.clone(), DropletKind::Closed);
        let s = droplet_sites(&dd).unwrap();
        assert_eq!(s.len(), 25);
        assert!(s.iter().all(|p| p.chebyshev() <= 2));
        let dp = Droplet::new(Site::ORIGIN, Scale::from_integer(2), axes.clone(), DropletKind::Open);
        let s = droplet_sites(&dp).unwrap();
        assert_eq!(s.len(), 9);
        let half = Droplet::new(Site::ORIGIN, Scale::new(1, 2), axes, DropletKind::Closed);
        assert_eq!(droplet_sites(&half).unwrap(), vec![Site::ORIGIN]);
    }

    #[test]
    fn corner_examples() {
        let axes = DirectionSet::axes();
        let c = CornerRegion::new(Site::ORIGIN, 0, Scale::from_integer(3), axes.clone());
        let s = corner_sites(&c, 1).unwrap();
        let expect: Vec<Site> = vec![(-3, -3), (-3, -2), (-2, -3), (-2, -2)]
            .into_iter()
            .map(Site::from)
            .collect();
        assert_eq!(s, expect);
        // strip width equal to a: the whole quadrant corner
        let s = corner_sites(&CornerRegion::new(Site::ORIGIN, 0, Scale::from_integer(3), axes.clone()), 9)
            .unwrap();
        assert_eq!(s.len(), 16);
        assert!(s.iter().all(|p| (-3..=0).contains(&p.x) && (-3..=0).contains(&p.y)));
        assert!(matches!(
            corner_sites(&CornerRegion::new(Site::ORIGIN, 0, Scale::from_integer(2), axes), 9),
            Err(GeometryError::ScaleBelowRange { .. })
        ));
    }

    #[test]
    fn strip_separation_examples() {
        let axes = DirectionSet::axes();
        assert!(strips_disjoint(&axes, Scale::from_integer(3), 4, 0).unwrap());
        assert!(!strips_disjoint(&axes, Scale::from_integer(2), 4, 0).unwrap());
        assert!(strips_disjoint(&axes, Scale::from_integer(100), 4, 0).unwrap());
        let tri = DirectionSet::new(vec![d(1, 0), d(0, 1), d(-1, -1)]).unwrap();
        assert_eq!(
            strips_disjoint(&tri, Scale::from_integer(3), 4, 0),
            Err(GeometryError::NeedFourDirections)
        );
    }

    #[test]
    fn constants_for_axes() {
        // range 2 family with the axes as stable points: the 2-neighbour rules scaled by 2
        let f = UpdateFamily::from_pairs(&[
            &[(2, 0), (-2, 0)],
            &[(2, 0), (0, 2)],
            &[(2, 0), (0, -2)],
            &[(-2, 0), (0, 2)],
            &[(-2, 0), (0, -2)],
            &[(0, 2), (0, -2)],
        ])
        .unwrap();
        assert_eq!(f.range_sq(), 4);
        let cls = classify(&f);
        let axes = DirectionSet::axes();
        let c = compute_constants(Some(&axes), &f, &cls).unwrap();
        let sqrt2 = 2f64.sqrt();
        assert!((c.m_radius.unwrap() - sqrt2).abs() < 1e-12);
        assert!((c.m_prime_radius.unwrap() - sqrt2).abs() < 1e-12);
        assert!((c.a0_tilde.unwrap() - 2.0 * sqrt2).abs() < 1e-12);
        assert_eq!(c.a0.unwrap(), Scale::new(2 * 65536 + 1, 65536));
        // (2⌈(4√2+1)√2⌉+1)² = (2·10+1)²
        assert_eq!(c.k, 441);
        let sup = compute_constants(None, &fig1(), &classify(&fig1())).unwrap();
        assert_eq!(sup.k, 25);
    }

    #[test]
    fn triangle_constants_have_zero_separation_scale() {
        let f = cross();
        let g = FamilyGeometry::new(&f).unwrap();
        assert_eq!(g.constants.a0, Some(Scale::from_integer(0)));
        assert!(g.constants.a0_tilde.unwrap() > 0.0);
    }
}

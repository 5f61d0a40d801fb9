use std::fmt;

use serde::{Deserialize, Serialize};

use super::DynamicsError;
use crate::family::{Dim, UpdateFamily};
use crate::lattice::Site;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Spin {
    Plus,
    Minus,
}

impl Spin {
    pub fn flip(self) -> Spin {
        match self {
            Spin::Plus => Spin::Minus,
            Spin::Minus => Spin::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Spin::Plus => '+',
            Spin::Minus => '-',
        }
    }

    pub fn from_symbol(c: char) -> Option<Spin> {
        match c {
            '+' => Some(Spin::Plus),
            '-' => Some(Spin::Minus),
            _ => None,
        }
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Frozen {
    Unfrozen,
    FrozenPlus,
    FrozenMinus,
}

impl Frozen {
    pub fn spin(self) -> Option<Spin> {
        match self {
            Frozen::Unfrozen => None,
            Frozen::FrozenPlus => Some(Spin::Plus),
            Frozen::FrozenMinus => Some(Spin::Minus),
        }
    }

    pub fn at(spin: Spin) -> Frozen {
        match spin {
            Spin::Plus => Frozen::FrozenPlus,
            Spin::Minus => Frozen::FrozenMinus,
        }
    }

    pub fn is_frozen(self) -> bool {
        self != Frozen::Unfrozen
    }

    pub fn flip(self) -> Frozen {
        match self {
            Frozen::Unfrozen => Frozen::Unfrozen,
            Frozen::FrozenPlus => Frozen::FrozenMinus,
            Frozen::FrozenMinus => Frozen::FrozenPlus,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Boundary {
    /// The window carries a frozen annulus with this mark.
    Sealed(Spin),
    /// Every site outside the window is permanently in this state.
    StaticOutside(Spin),
    Torus,
}

impl Boundary {
    pub fn name(self) -> &'static str {
        match self {
            Boundary::Sealed(Spin::Plus) => "sealed-plus",
            Boundary::Sealed(Spin::Minus) => "sealed-minus",
            Boundary::StaticOutside(Spin::Plus) => "static-plus",
            Boundary::StaticOutside(Spin::Minus) => "static-minus",
            Boundary::Torus => "torus",
        }
    }

    pub fn parse(s: &str) -> Option<Boundary> {
        Some(match s {
            "sealed-plus" => Boundary::Sealed(Spin::Plus),
            "sealed-minus" => Boundary::Sealed(Spin::Minus),
            "static-plus" => Boundary::StaticOutside(Spin::Plus),
            "static-minus" => Boundary::StaticOutside(Spin::Minus),
            "torus" => Boundary::Torus,
            _ => return None,
        })
    }

    pub fn flip(self) -> Boundary {
        match self {
            Boundary::Sealed(s) => Boundary::Sealed(s.flip()),
            Boundary::StaticOutside(s) => Boundary::StaticOutside(s.flip()),
            Boundary::Torus => Boundary::Torus,
        }
    }
}

/// States and frozen marks on a finite window.
///
/// The window lives in a rectangular bounding box with a membership mask;
/// slots are row-major (`y` outer, `x` inner). For sealed windows the
/// annulus is the band of width `seal` along the box edges (only along `x`
/// in one dimension).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinConfiguration {
    dim: Dim,
    lo: Site,
    width: i32,
    height: i32,
    in_window: Vec<bool>,
    state: Vec<Spin>,
    frozen: Vec<Frozen>,
    boundary: Boundary,
    seal: i32,
}

impl SpinConfiguration {
    /// Interior `[0, width) × [0, height)` surrounded by a frozen annulus of width `seal`.
    /// Interior sites start unfrozen at the seal's state.
    pub fn sealed(dim: Dim, width: i32, height: i32, seal: i32, mark: Spin) -> Self {
        let height = if dim == Dim::One { 1 } else { height };
        let sy = if dim == Dim::One { 0 } else { seal };
        let mut c = SpinConfiguration::blank(
            dim,
            Site::new(-seal, -sy),
            width + 2 * seal,
            height + 2 * sy,
            Boundary::Sealed(mark),
            seal,
        );
        for i in 0..c.slots() {
            c.state[i] = mark;
            if c.in_annulus(c.site(i)) {
                c.frozen[i] = Frozen::at(mark);
            }
        }
        c
    }

    /// Window `[0, width) × [0, height)` with a static or periodic outside. All sites unfrozen at +.
    pub fn open(dim: Dim, width: i32, height: i32, boundary: Boundary) -> Result<Self, DynamicsError> {
        if matches!(boundary, Boundary::Sealed(_)) {
            return Err(DynamicsError::InvalidConfig("use `sealed` for sealed windows".into()));
        }
        let height = if dim == Dim::One { 1 } else { height };
        Ok(SpinConfiguration::blank(dim, Site::ORIGIN, width, height, boundary, 0))
    }

    /// Arbitrary rectangle `[lo, lo + (width, height))`, all sites unfrozen at +.
    pub fn blank(dim: Dim, lo: Site, width: i32, height: i32, boundary: Boundary, seal: i32) -> Self {
        assert!(width > 0 && height > 0, "window must be nonempty");
        let n = (width * height) as usize;
        SpinConfiguration {
            dim,
            lo,
            width,
            height,
            in_window: vec![true; n],
            state: vec![Spin::Plus; n],
            frozen: vec![Frozen::Unfrozen; n],
            boundary,
            seal,
        }
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn seal_width(&self) -> i32 {
        self.seal
    }

    pub fn lo(&self) -> Site {
        self.lo
    }

    pub fn hi(&self) -> Site {
        Site::new(self.lo.x + self.width - 1, self.lo.y + self.height - 1)
    }

    pub fn width(&self) -> i32 {
        self.width
    }

    pub fn height(&self) -> i32 {
        self.height
    }

    /// Number of slots of the bounding box.
    pub fn slots(&self) -> usize {
        self.in_window.len()
    }

    #[inline]
    pub fn slot(&self, s: Site) -> Option<usize> {
        let (dx, dy) = (s.x - self.lo.x, s.y - self.lo.y);
        if dx < 0 || dy < 0 || dx >= self.width || dy >= self.height {
            return None;
        }
        let i = (dy * self.width + dx) as usize;
        self.in_window[i].then_some(i)
    }

    #[inline]
    pub fn site(&self, slot: usize) -> Site {
        let i = slot as i32;
        Site::new(self.lo.x + i % self.width, self.lo.y + i / self.width)
    }

    pub fn in_window(&self, s: Site) -> bool {
        self.slot(s).is_some()
    }

    /// Window sites in slot order.
    pub fn window_sites(&self) -> impl Iterator<Item = Site> + '_ {
        (0..self.slots()).filter(|&i| self.in_window[i]).map(|i| self.site(i))
    }

    pub fn in_annulus(&self, s: Site) -> bool {
        if self.seal == 0 || !self.in_window(s) {
            return false;
        }
        let (dx, dy) = (s.x - self.lo.x, s.y - self.lo.y);
        let near_x = dx < self.seal || dx >= self.width - self.seal;
        let near_y = self.dim == Dim::Two && (dy < self.seal || dy >= self.height - self.seal);
        near_x || near_y
    }

    /// Window sites outside the sealing annulus.
    pub fn interior_sites(&self) -> impl Iterator<Item = Site> + '_ {
        self.window_sites().filter(|&s| !self.in_annulus(s))
    }

    pub fn is_interior(&self, s: Site) -> bool {
        self.in_window(s) && !self.in_annulus(s)
    }

    /// Removes a site from the window (it becomes part of the outside).
    pub fn exclude(&mut self, s: Site) {
        if let Some(i) = self.slot(s) {
            self.in_window[i] = false;
        }
    }

    pub fn spin(&self, s: Site) -> Option<Spin> {
        self.slot(s).map(|i| self.state[i])
    }

    pub fn frozen(&self, s: Site) -> Option<Frozen> {
        self.slot(s).map(|i| self.frozen[i])
    }

    pub fn spin_at(&self, slot: usize) -> Spin {
        self.state[slot]
    }

    pub fn frozen_at(&self, slot: usize) -> Frozen {
        self.frozen[slot]
    }

    pub fn is_in_window_slot(&self, slot: usize) -> bool {
        self.in_window[slot]
    }

    /// Sets the state of a window site. Frozen sites keep their frozen state.
    pub fn set_spin(&mut self, s: Site, spin: Spin) -> Result<(), DynamicsError> {
        let i = self.slot(s).ok_or(DynamicsError::OutsideWindow(s))?;
        if self.frozen[i].is_frozen() {
            return Err(DynamicsError::FrozenSite(s));
        }
        self.state[i] = spin;
        Ok(())
    }

    /// Sets a frozen mark; frozen sites take their frozen state.
    pub fn set_frozen(&mut self, s: Site, mark: Frozen) -> Result<(), DynamicsError> {
        let i = self.slot(s).ok_or(DynamicsError::OutsideWindow(s))?;
        self.frozen[i] = mark;
        if let Some(sp) = mark.spin() {
            self.state[i] = sp;
        }
        Ok(())
    }

    pub(crate) fn set_slot(&mut self, slot: usize, spin: Spin) {
        self.state[slot] = spin;
    }

    pub(crate) fn set_frozen_slot(&mut self, slot: usize, mark: Frozen) {
        self.frozen[slot] = mark;
        if let Some(sp) = mark.spin() {
            self.state[slot] = sp;
        }
    }

    /// Maps a site onto the window for periodic windows; identity otherwise.
    #[inline]
    pub fn wrap(&self, s: Site) -> Site {
        if self.boundary != Boundary::Torus {
            return s;
        }
        Site::new(
            self.lo.x + (s.x - self.lo.x).rem_euclid(self.width),
            self.lo.y + (s.y - self.lo.y).rem_euclid(self.height),
        )
    }

    /// Where a rule read at `s` lands: a window slot or a fixed outside state.
    #[inline]
    pub fn resolve(&self, s: Site) -> Resolved {
        let s = self.wrap(s);
        match self.slot(s) {
            Some(i) => Resolved::Slot(i),
            None => match self.boundary {
                Boundary::StaticOutside(sp) => Resolved::Fixed(sp),
                _ => Resolved::Beyond,
            },
        }
    }

    /// State seen by a rule reading site `s`.
    pub fn read(&self, s: Site) -> Option<Spin> {
        match self.resolve(s) {
            Resolved::Slot(i) => Some(self.state[i]),
            Resolved::Fixed(sp) => Some(sp),
            Resolved::Beyond => None,
        }
    }

    /// Frozen mark seen at `s`; static outside sites count as frozen.
    pub fn read_frozen(&self, s: Site) -> Option<Frozen> {
        match self.resolve(s) {
            Resolved::Slot(i) => Some(self.frozen[i]),
            Resolved::Fixed(sp) => Some(Frozen::at(sp)),
            Resolved::Beyond => None,
        }
    }

    /// Checks the boundary contract against a family: sealed windows must
    /// keep every rule read of an unfrozen site inside the window, periodic
    /// windows must be full rectangles.
    pub fn validate(&self, f: &UpdateFamily) -> Result<(), DynamicsError> {
        if f.dim() != self.dim {
            return Err(DynamicsError::InvalidConfig("family and window dimensions differ".into()));
        }
        match self.boundary {
            Boundary::Sealed(_) => {
                for s in self.window_sites() {
                    if self.frozen(s) != Some(Frozen::Unfrozen) {
                        continue;
                    }
                    for rule in f.rules() {
                        for &o in rule.offsets() {
                            if !self.in_window(s + o) {
                                return Err(DynamicsError::LeakySeal(s));
                            }
                        }
                    }
                }
            }
            Boundary::Torus => {
                if self.in_window.iter().any(|&b| !b) {
                    return Err(DynamicsError::InvalidConfig("periodic windows must be rectangles".into()));
                }
            }
            Boundary::StaticOutside(_) => {}
        }
        Ok(())
    }

    pub fn unfrozen_count(&self) -> usize {
        (0..self.slots())
            .filter(|&i| self.in_window[i] && !self.frozen[i].is_frozen())
            .count()
    }

    pub fn count(&self, spin: Spin) -> usize {
        (0..self.slots())
            .filter(|&i| self.in_window[i] && self.state[i] == spin)
            .count()
    }

    /// Every state, mark and the boundary exchanged between + and −.
    pub fn flipped(&self) -> SpinConfiguration {
        let mut c = self.clone();
        c.state.iter_mut().for_each(|s| *s = s.flip());
        c.frozen.iter_mut().for_each(|m| *m = m.flip());
        c.boundary = self.boundary.flip();
        c
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Resolved {
    Slot(usize),
    Fixed(Spin),
    /// Outside a sealed window; never read by a valid configuration.
    Beyond,
}

//! Zero-temperature U-voter and U-Ising dynamics with frozen vertices.
//!
//! Time is simulated exactly with a Gillespie loop: with `N` unfrozen
//! sites the next ring comes after an `Exp(N)` wait at a uniformly chosen
//! site, which has the law of independent rate-one clocks. A single
//! ChaCha8 stream seeded from the configuration drives everything, in this
//! order:
//!
//! 1. one uniform draw per non-annulus window site (row-major) for its frozen mark,
//! 2. one uniform draw per unfrozen site (row-major) for a Bernoulli initial state,
//! 3. per ring: waiting time, site, and for the voter kind the rule.

mod config;
pub mod io;
mod sim;

use std::fmt;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::family::{Dim, UpdateFamily};
use crate::lattice::Site;

pub use config::{Boundary, Frozen, Resolved, Spin, SpinConfiguration};
pub use sim::Simulator;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("site {0} is outside the window")]
    OutsideWindow(Site),
    #[error("site {0} is frozen")]
    FrozenSite(Site),
    #[error("seal too thin: a rule of unfrozen site {0} reads beyond the window")]
    LeakySeal(Site),
    #[error("explicit initial state misses unfrozen site {0}")]
    MissingExplicitSite(Site),
    #[error("rule index {0} out of range")]
    BadRule(usize),
    #[error("record {index}: {reason}")]
    Corrupt { index: usize, reason: String },
    #[error("replayed configuration differs from the stored final snapshot")]
    FinalMismatch,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DynamicsKind {
    Voter,
    Ising,
}

impl DynamicsKind {
    pub fn name(self) -> &'static str {
        match self {
            DynamicsKind::Voter => "voter",
            DynamicsKind::Ising => "ising",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "voter" => Some(DynamicsKind::Voter),
            "ising" => Some(DynamicsKind::Ising),
            _ => None,
        }
    }
}

/// Initial law of the unfrozen sites. It never depends on the frozen marks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Mu {
    Bernoulli(f64),
    AllMinus,
    AllPlus,
    Explicit(Vec<(Site, Spin)>),
}

impl Mu {
    pub fn parse(s: &str) -> Option<Mu> {
        match s {
            "all-minus" => Some(Mu::AllMinus),
            "all-plus" => Some(Mu::AllPlus),
            _ => {
                let p: f64 = s.strip_prefix("bernoulli:")?.parse().ok()?;
                (0.0..=1.0).contains(&p).then_some(Mu::Bernoulli(p))
            }
        }
    }

    pub fn flip(&self) -> Mu {
        match self {
            Mu::Bernoulli(p) => Mu::Bernoulli(1.0 - p),
            Mu::AllMinus => Mu::AllPlus,
            Mu::AllPlus => Mu::AllMinus,
            Mu::Explicit(v) => Mu::Explicit(v.iter().map(|&(s, sp)| (s, sp.flip())).collect()),
        }
    }
}

impl fmt::Display for Mu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mu::Bernoulli(p) => write!(f, "bernoulli:{p}"),
            Mu::AllMinus => write!(f, "all-minus"),
            Mu::AllPlus => write!(f, "all-plus"),
            Mu::Explicit(v) => write!(f, "explicit({} sites)", v.len()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub family: UpdateFamily,
    pub kind: DynamicsKind,
    /// Interior width and height (height is ignored in one dimension).
    pub width: i32,
    pub height: i32,
    pub boundary: Boundary,
    /// Annulus width for sealed windows; defaults to ⌈r⌉.
    pub seal: Option<i32>,
    pub rho_plus: f64,
    pub rho_minus: f64,
    pub mu: Mu,
    pub horizon: f64,
    pub seed: u64,
}

impl SimulationConfig {
    pub fn new(family: UpdateFamily, kind: DynamicsKind, width: i32, height: i32, boundary: Boundary) -> Self {
        SimulationConfig {
            family,
            kind,
            width,
            height,
            boundary,
            seal: None,
            rho_plus: 0.0,
            rho_minus: 0.0,
            mu: Mu::Bernoulli(0.5),
            horizon: 1.0,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        let bad = |m: &str| Err(DynamicsError::InvalidConfig(m.to_string()));
        if self.width <= 0 || (self.family.dim() == Dim::Two && self.height <= 0) {
            return bad("window must be nonempty");
        }
        if !(0.0..1.0).contains(&self.rho_plus) || !(0.0..1.0).contains(&self.rho_minus) {
            return bad("frozen probabilities must lie in [0, 1)");
        }
        if self.rho_plus + self.rho_minus >= 1.0 {
            return bad("rho_plus + rho_minus must be below 1");
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return bad("horizon must be positive");
        }
        if let Mu::Bernoulli(p) = self.mu {
            if !(0.0..=1.0).contains(&p) {
                return bad("Bernoulli parameter must lie in [0, 1]");
            }
        }
        if let Some(w) = self.seal {
            if w < self.family.range_ceil() {
                return bad("seal must be at least as wide as the range");
            }
        }
        Ok(())
    }

    pub fn seal_width(&self) -> i32 {
        self.seal.unwrap_or_else(|| self.family.range_ceil())
    }

    /// The window with the requested boundary, before any sampling.
    pub fn empty_window(&self) -> Result<SpinConfiguration, DynamicsError> {
        let dim = self.family.dim();
        match self.boundary {
            Boundary::Sealed(mark) => Ok(SpinConfiguration::sealed(
                dim,
                self.width,
                self.height,
                self.seal_width(),
                mark,
            )),
            b => SpinConfiguration::open(dim, self.width, self.height, b),
        }
    }
}

/// Derived seed for replica `i` (splitmix64 of `base + i`).
pub fn replica_seed(base: u64, i: u64) -> u64 {
    let mut z = base.wrapping_add(i).wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Draws i.i.d. frozen marks on the window; the sealing annulus keeps its mark.
pub fn sample_frozen(cfg: &SimulationConfig, rng: &mut impl Rng) -> Result<SpinConfiguration, DynamicsError> {
    let mut c = cfg.empty_window()?;
    for slot in 0..c.slots() {
        if !c.is_in_window_slot(slot) || c.in_annulus(c.site(slot)) {
            continue;
        }
        let u: f64 = rng.gen();
        let mark = if u < cfg.rho_plus {
            Frozen::FrozenPlus
        } else if u < cfg.rho_plus + cfg.rho_minus {
            Frozen::FrozenMinus
        } else {
            Frozen::Unfrozen
        };
        c.set_frozen_slot(slot, mark);
    }
    Ok(c)
}

/// Assigns initial states to unfrozen sites; frozen sites already hold their state.
pub fn sample_initial(mu: &Mu, config: &mut SpinConfiguration, rng: &mut impl Rng) -> Result<(), DynamicsError> {
    let explicit: Option<std::collections::HashMap<Site, Spin>> = match mu {
        Mu::Explicit(v) => Some(v.iter().copied().collect()),
        _ => None,
    };
    for slot in 0..config.slots() {
        if !config.is_in_window_slot(slot) || config.frozen_at(slot).is_frozen() {
            continue;
        }
        let spin = match mu {
            Mu::Bernoulli(p) => {
                if rng.gen::<f64>() < *p {
                    Spin::Plus
                } else {
                    Spin::Minus
                }
            }
            Mu::AllMinus => Spin::Minus,
            Mu::AllPlus => Spin::Plus,
            Mu::Explicit(_) => {
                let s = config.site(slot);
                *explicit
                    .as_ref()
                    .and_then(|m| m.get(&s))
                    .ok_or(DynamicsError::MissingExplicitSite(s))?
            }
        };
        config.set_slot(slot, spin);
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlipRecord {
    pub time: f64,
    pub site: Site,
    pub from: Spin,
    pub to: Spin,
    pub rule_index: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlipTrace {
    pub family: UpdateFamily,
    pub kind: DynamicsKind,
    pub initial: SpinConfiguration,
    pub records: Vec<FlipRecord>,
    pub final_config: SpinConfiguration,
    pub seed: u64,
    pub horizon: f64,
    /// Number of clock rings in `[0, horizon]`, successful or not.
    pub rings: u64,
}

/// Whether every site of `x + rule` currently reads `target`.
pub fn rule_unanimous(config: &SpinConfiguration, f: &UpdateFamily, x: Site, rule_index: usize, target: Spin) -> bool {
    f.rules()[rule_index]
        .offsets()
        .iter()
        .all(|&o| config.read(x + o) == Some(target))
}

fn require_unfrozen(config: &SpinConfiguration, x: Site) -> Result<Spin, DynamicsError> {
    match config.frozen(x) {
        None => Err(DynamicsError::OutsideWindow(x)),
        Some(Frozen::Unfrozen) => Ok(config.spin(x).expect("window site")),
        Some(_) => Err(DynamicsError::FrozenSite(x)),
    }
}

/// Voter update of `x` with a given rule: adopt the rule's state when it is unanimous and opposite.
pub fn voter_attempt(
    config: &mut SpinConfiguration,
    f: &UpdateFamily,
    x: Site,
    rule_index: usize,
    time: f64,
) -> Result<Option<FlipRecord>, DynamicsError> {
    let from = require_unfrozen(config, x)?;
    if rule_index >= f.rules().len() {
        return Err(DynamicsError::BadRule(rule_index));
    }
    if !rule_unanimous(config, f, x, rule_index, from.flip()) {
        return Ok(None);
    }
    config.set_spin(x, from.flip())?;
    Ok(Some(FlipRecord {
        time,
        site: x,
        from,
        to: from.flip(),
        rule_index,
    }))
}

/// Ising update of `x`: flip when some rule is unanimous and opposite (first such rule is recorded).
pub fn ising_attempt(
    config: &mut SpinConfiguration,
    f: &UpdateFamily,
    x: Site,
    time: f64,
) -> Result<Option<FlipRecord>, DynamicsError> {
    let from = require_unfrozen(config, x)?;
    match (0..f.rules().len()).find(|&k| rule_unanimous(config, f, x, k, from.flip())) {
        None => Ok(None),
        Some(k) => voter_attempt(config, f, x, k, time),
    }
}

/// Samples frozen marks and initial states and returns a simulator at time 0.
pub fn start(cfg: &SimulationConfig) -> Result<Simulator, DynamicsError> {
    cfg.validate()?;
    let mut rng = rng_from_seed(cfg.seed);
    let mut config = sample_frozen(cfg, &mut rng)?;
    sample_initial(&cfg.mu, &mut config, &mut rng)?;
    Simulator::with_rng(cfg.family.clone(), cfg.kind, config, rng, cfg.seed)
}

/// Samples frozen marks and initial states, then simulates up to the horizon.
pub fn run(cfg: &SimulationConfig) -> Result<FlipTrace, DynamicsError> {
    let mut sim = start(cfg)?;
    sim.advance_until(cfg.horizon);
    Ok(sim.into_trace())
}

/// Re-applies every record to the initial snapshot, validating each flip.
pub fn replay(trace: &FlipTrace) -> Result<SpinConfiguration, DynamicsError> {
    let mut config = trace.initial.clone();
    replay_records(&mut config, &trace.family, &trace.records)?;
    if config != trace.final_config {
        return Err(DynamicsError::FinalMismatch);
    }
    Ok(config)
}

/// Applies records in order to `config`, checking times, frozen marks and flip conditions.
pub fn replay_records(
    config: &mut SpinConfiguration,
    f: &UpdateFamily,
    records: &[FlipRecord],
) -> Result<(), DynamicsError> {
    let mut last = f64::NEG_INFINITY;
    for (index, r) in records.iter().enumerate() {
        let corrupt = |reason: &str| DynamicsError::Corrupt {
            index,
            reason: reason.to_string(),
        };
        if r.time <= last {
            return Err(corrupt("time does not increase"));
        }
        last = r.time;
        if r.from == r.to {
            return Err(corrupt("record does not change the state"));
        }
        let current = match config.frozen(r.site) {
            None => return Err(corrupt("site outside the window")),
            Some(Frozen::Unfrozen) => config.spin(r.site).expect("window site"),
            Some(_) => return Err(corrupt("frozen site flipped")),
        };
        if current != r.from {
            return Err(corrupt("recorded state differs from the replayed state"));
        }
        if r.rule_index >= f.rules().len() {
            return Err(corrupt("rule index out of range"));
        }
        if !rule_unanimous(config, f, r.site, r.rule_index, r.to) {
            return Err(corrupt("flip condition does not hold"));
        }
        config.set_spin(r.site, r.to).expect("unfrozen window site");
    }
    Ok(())
}

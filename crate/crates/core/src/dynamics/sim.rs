use rand::distributions::Open01;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{rng_from_seed, DynamicsError, DynamicsKind, FlipRecord, FlipTrace, Resolved, Spin, SpinConfiguration};
use crate::family::UpdateFamily;

const FIXED_PLUS: u32 = u32::MAX;
const FIXED_MINUS: u32 = u32::MAX - 1;

/// Gillespie simulator over the unfrozen sites of a window.
///
/// Rule reads are resolved once into a flat table, so a ring costs one
/// table scan. The simulator can be advanced in pieces: the next ring time
/// is drawn ahead, which keeps the random stream identical to a single run
/// to the final horizon.
pub struct Simulator {
    family: UpdateFamily,
    kind: DynamicsKind,
    initial: SpinConfiguration,
    config: SpinConfiguration,
    unfrozen: Vec<u32>,
    rule_bounds: Vec<(usize, usize)>,
    stride: usize,
    table: Vec<u32>,
    rng: ChaCha8Rng,
    seed: u64,
    time: f64,
    next_ring: f64,
    rings: u64,
    records: Vec<FlipRecord>,
}

impl Simulator {
    pub fn new(
        family: UpdateFamily,
        kind: DynamicsKind,
        config: SpinConfiguration,
        seed: u64,
    ) -> Result<Self, DynamicsError> {
        Simulator::with_rng(family, kind, config, rng_from_seed(seed), seed)
    }

    /// Continues an existing random stream (used after sampling the initial condition).
    pub fn with_rng(
        family: UpdateFamily,
        kind: DynamicsKind,
        config: SpinConfiguration,
        rng: ChaCha8Rng,
        seed: u64,
    ) -> Result<Self, DynamicsError> {
        config.validate(&family)?;
        let mut rule_bounds = Vec::with_capacity(family.rules().len());
        let mut stride = 0;
        for rule in family.rules() {
            rule_bounds.push((stride, stride + rule.len()));
            stride += rule.len();
        }
        let unfrozen: Vec<u32> = (0..config.slots())
            .filter(|&i| config.is_in_window_slot(i) && !config.frozen_at(i).is_frozen())
            .map(|i| i as u32)
            .collect();
        let mut table = Vec::with_capacity(unfrozen.len() * stride);
        for &slot in &unfrozen {
            let x = config.site(slot as usize);
            for rule in family.rules() {
                for &o in rule.offsets() {
                    table.push(match config.resolve(x + o) {
                        Resolved::Slot(i) => i as u32,
                        Resolved::Fixed(Spin::Plus) => FIXED_PLUS,
                        Resolved::Fixed(Spin::Minus) => FIXED_MINUS,
                        Resolved::Beyond => return Err(DynamicsError::LeakySeal(x)),
                    });
                }
            }
        }
        let mut sim = Simulator {
            family,
            kind,
            initial: config.clone(),
            config,
            unfrozen,
            rule_bounds,
            stride,
            table,
            rng,
            seed,
            time: 0.0,
            next_ring: f64::INFINITY,
            rings: 0,
            records: Vec::new(),
        };
        sim.next_ring = sim.draw_next(0.0);
        Ok(sim)
    }

    fn draw_next(&mut self, after: f64) -> f64 {
        if self.unfrozen.is_empty() {
            return f64::INFINITY;
        }
        let u: f64 = self.rng.sample(Open01);
        let t = after - u.ln() / self.unfrozen.len() as f64;
        if t > after {
            t
        } else {
            f64::from_bits(after.to_bits() + 1)
        }
    }

    #[inline]
    fn read(&self, nb: u32) -> Spin {
        match nb {
            FIXED_PLUS => Spin::Plus,
            FIXED_MINUS => Spin::Minus,
            i => self.config.spin_at(i as usize),
        }
    }

    #[inline]
    fn unanimous(&self, j: usize, k: usize, target: Spin) -> bool {
        let (a, b) = self.rule_bounds[k];
        let base = j * self.stride;
        self.table[base + a..base + b].iter().all(|&nb| self.read(nb) == target)
    }

    /// Processes every ring with time at most `t`. Returns the number of flips.
    pub fn advance_until(&mut self, t: f64) -> usize {
        let before = self.records.len();
        let n = self.unfrozen.len() as u32;
        let n_rules = self.rule_bounds.len() as u32;
        while self.next_ring <= t {
            let now = self.next_ring;
            self.time = now;
            self.rings += 1;
            let j = self.rng.gen_range(0..n) as usize;
            let slot = self.unfrozen[j] as usize;
            let from = self.config.spin_at(slot);
            let target = from.flip();
            let rule = match self.kind {
                DynamicsKind::Voter => {
                    let k = self.rng.gen_range(0..n_rules) as usize;
                    self.unanimous(j, k, target).then_some(k)
                }
                DynamicsKind::Ising => (0..n_rules as usize).find(|&k| self.unanimous(j, k, target)),
            };
            if let Some(k) = rule {
                self.config.set_slot(slot, target);
                self.records.push(FlipRecord {
                    time: now,
                    site: self.config.site(slot),
                    from,
                    to: target,
                    rule_index: k,
                });
            }
            self.next_ring = self.draw_next(now);
        }
        if t > self.time {
            self.time = t;
        }
        self.records.len() - before
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn config(&self) -> &SpinConfiguration {
        &self.config
    }

    pub fn initial(&self) -> &SpinConfiguration {
        &self.initial
    }

    pub fn records(&self) -> &[FlipRecord] {
        &self.records
    }

    pub fn rings(&self) -> u64 {
        self.rings
    }

    pub fn family(&self) -> &UpdateFamily {
        &self.family
    }

    pub fn kind(&self) -> DynamicsKind {
        self.kind
    }

    pub fn into_trace(self) -> FlipTrace {
        FlipTrace {
            family: self.family,
            kind: self.kind,
            initial: self.initial,
            records: self.records,
            final_config: self.config,
            seed: self.seed,
            horizon: self.time,
            rings: self.rings,
        }
    }
}

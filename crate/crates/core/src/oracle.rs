//! Randomised cross-checks of the fast algorithms against brute-force references.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{reachability_oracle, well_fixed_certificate};
use crate::bootstrap::{closure, naive_closure, Domain};
use crate::catalog::CATALOG;
use crate::dynamics::{replica_seed, rng_from_seed, Frozen, Spin, SpinConfiguration};
use crate::family::{classify_2d, grid_classify_oracle, Dim, Kind, SemicircleReading, UpdateFamily, UpdateRule};
use crate::lattice::Site;

pub const GRID_DIRECTIONS: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Closure,
    Classifier,
    Certificate,
}

impl Suite {
    pub const ALL: [Suite; 3] = [Suite::Closure, Suite::Classifier, Suite::Certificate];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Closure => "closure-vs-naive",
            Suite::Classifier => "classifier-vs-grid",
            Suite::Certificate => "certificate-vs-reachability",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct OracleOptions {
    pub trials: usize,
    pub seed: u64,
    /// Test hook: corrupt every fast result so that each suite must fail.
    pub inject_fault: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub name: &'static str,
    pub trials: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
    pub seconds: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Random 2D family: 1 to 4 rules of 1 to 3 offsets in {−3..3}² ∖ {0}.
pub fn random_family_2d(rng: &mut impl Rng) -> UpdateFamily {
    let n_rules = rng.gen_range(1..=4);
    let rules = (0..n_rules)
        .map(|_| {
            let k = rng.gen_range(1..=3);
            let offsets = (0..k).map(|_| loop {
                let s = Site::new(rng.gen_range(-3..=3), rng.gen_range(-3..=3));
                if !s.is_zero() {
                    break s;
                }
            });
            UpdateRule::new(offsets.collect::<Vec<_>>()).expect("nonzero offsets")
        })
        .collect();
    UpdateFamily::new(Dim::Two, rules).expect("nonempty family")
}

/// A random closure instance on the 12×12 square.
pub fn random_closure_instance(rng: &mut impl Rng) -> (UpdateFamily, Domain, BTreeSet<Site>, BTreeSet<Site>) {
    let f = random_family_2d(rng);
    let dom = Domain::rect(Site::ORIGIN, Site::new(11, 11));
    let p_seed = rng.gen_range(0.02..0.3);
    let p_immune = rng.gen_range(0.0..0.15);
    let mut seeds = BTreeSet::new();
    let mut immune = BTreeSet::new();
    for s in dom.sites() {
        let u: f64 = rng.gen();
        if u < p_seed {
            seeds.insert(s);
        } else if u < p_seed + p_immune {
            immune.insert(s);
        }
    }
    (f, dom, seeds, immune)
}

/// A sealed window over a random catalog family with at most 12 interior sites.
pub fn random_sealed_window(rng: &mut impl Rng) -> (UpdateFamily, SpinConfiguration) {
    let f = CATALOG[rng.gen_range(0..CATALOG.len())].family();
    let (w, h) = match f.dim() {
        Dim::One => (rng.gen_range(1..=12), 1),
        Dim::Two => loop {
            let (w, h) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
            if w * h <= 12 {
                break (w, h);
            }
        },
    };
    let seal = if rng.gen() { Spin::Plus } else { Spin::Minus };
    let mut c = SpinConfiguration::sealed(f.dim(), w, h, f.range_ceil(), seal);
    let (rp, rm) = (rng.gen_range(0.0..0.3), rng.gen_range(0.0..0.3));
    let interior: Vec<Site> = c.interior_sites().collect();
    for s in interior {
        let u: f64 = rng.gen();
        let mark = if u < rp {
            Frozen::FrozenPlus
        } else if u < rp + rm {
            Frozen::FrozenMinus
        } else {
            Frozen::Unfrozen
        };
        c.set_frozen(s, mark).expect("interior site");
        if mark == Frozen::Unfrozen {
            let sp = if rng.gen() { Spin::Plus } else { Spin::Minus };
            c.set_spin(s, sp).expect("unfrozen site");
        }
    }
    (f, c)
}

fn next_kind(k: Kind) -> Kind {
    match k {
        Kind::Supercritical => Kind::Critical,
        Kind::Critical => Kind::Subcritical,
        Kind::Subcritical => Kind::Supercritical,
    }
}

fn toggle(set: &mut BTreeSet<Site>, s: Site) {
    if !set.remove(&s) {
        set.insert(s);
    }
}

fn closure_trial(seed: u64, fault: bool) -> Result<(), String> {
    let mut rng = rng_from_seed(seed);
    let (f, dom, seeds, immune) = random_closure_instance(&mut rng);
    let mut fast = closure(&dom, &seeds, &immune, &f).map_err(|e| e.to_string())?.sites();
    if fault {
        toggle(&mut fast, Site::new(5, 5));
    }
    let slow = naive_closure(&dom, &seeds, &immune, &f);
    if fast == slow {
        Ok(())
    } else {
        let diff: Vec<_> = fast.symmetric_difference(&slow).take(3).collect();
        Err(format!("seed {seed}: family {} differs at {diff:?}", f.to_text().replace('\n', "; ")))
    }
}

fn classify_trial(f: &UpdateFamily, label: &str, fault: bool) -> Result<(), String> {
    let mut fast = classify_2d(f).map_err(|e| e.to_string())?;
    if fault {
        fast.kind = next_kind(fast.kind);
    }
    for reading in [SemicircleReading::Closed, SemicircleReading::Open] {
        let slow = grid_classify_oracle(f, GRID_DIRECTIONS, reading).map_err(|e| e.to_string())?;
        if fast != slow {
            return Err(format!("{label}: exact {:?} vs grid {:?} ({reading:?})", fast.kind, slow.kind));
        }
    }
    Ok(())
}

/// The catalog, with one-dimensional entries embedded in the plane.
pub fn catalog_families_2d() -> Vec<(String, UpdateFamily)> {
    CATALOG
        .iter()
        .map(|e| {
            let f = e.family();
            let f = if f.dim() == Dim::One { f.embed_2d() } else { f };
            (e.key.to_string(), f)
        })
        .collect()
}

fn certificate_trial(seed: u64, fault: bool) -> Result<(), String> {
    let mut rng = rng_from_seed(seed);
    let (f, c) = random_sealed_window(&mut rng);
    let report = well_fixed_certificate(&c, &f, 0.0);
    let mut uncertified = report.uncertified;
    if fault {
        toggle(&mut uncertified, Site::ORIGIN);
    }
    let reach = reachability_oracle(&c, &f).map_err(|e| e.to_string())?;
    let reach_interior: BTreeSet<Site> = reach.into_iter().filter(|&s| c.is_interior(s)).collect();
    if uncertified == reach_interior {
        Ok(())
    } else {
        Err(format!("seed {seed}: family {} disagrees", f.to_text().replace('\n', "; ")))
    }
}

fn summarise(suite: Suite, results: Vec<Result<(), String>>, start: Instant) -> SuiteReport {
    let failures = results.iter().filter(|r| r.is_err()).count();
    SuiteReport {
        suite,
        name: suite.name(),
        trials: results.len(),
        failures,
        first_failure: results.into_iter().find_map(Result::err),
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Runs one suite. The classifier suite checks the whole catalog plus `trials` random families.
pub fn run_suite(suite: Suite, opts: &OracleOptions) -> SuiteReport {
    let start = Instant::now();
    let seeds: Vec<u64> = (0..opts.trials as u64).map(|i| replica_seed(opts.seed, i)).collect();
    let fault = opts.inject_fault;
    let results: Vec<Result<(), String>> = match suite {
        Suite::Closure => seeds.par_iter().map(|&s| closure_trial(s, fault)).collect(),
        Suite::Certificate => seeds.par_iter().map(|&s| certificate_trial(s, fault)).collect(),
        Suite::Classifier => {
            let mut cases = catalog_families_2d();
            cases.extend(
                seeds
                    .iter()
                    .map(|&s| (format!("random seed {s}"), random_family_2d(&mut rng_from_seed(s)))),
            );
            cases.par_iter().map(|(label, f)| classify_trial(f, label, fault)).collect()
        }
    };
    summarise(suite, results, start)
}

pub fn run_all(opts: &OracleOptions) -> Vec<SuiteReport> {
    Suite::ALL.iter().map(|&s| run_suite(s, opts)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(fault: bool) -> OracleOptions {
        OracleOptions {
            trials: 20,
            seed: 3,
            inject_fault: fault,
        }
    }

    #[test]
    fn suites_pass() {
        for r in run_all(&opts(false)) {
            assert!(r.passed(), "{}: {:?}", r.name, r.first_failure);
        }
    }

    #[test]
    fn injected_faults_are_caught() {
        for r in run_all(&opts(true)) {
            assert_eq!(r.failures, r.trials, "{}", r.name);
        }
    }

    #[test]
    fn sealed_windows_stay_small() {
        let mut rng = rng_from_seed(1);
        for _ in 0..200 {
            let (_, c) = random_sealed_window(&mut rng);
            assert!(c.interior_sites().count() <= 12);
        }
    }
}

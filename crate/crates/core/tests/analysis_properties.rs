use std::collections::BTreeSet;

use proptest::prelude::*;
use uvoter::analysis::{
    flipper_stats, forced_flipper_sites, non_fixed_components, shield_violations, well_fixed_certificate, BlockGrid,
    WellFixedReport,
};
use uvoter::catalog;
use uvoter::dynamics::{replica_seed, start, Boundary, DynamicsKind, Frozen, Mu, SimulationConfig, Simulator, Spin, SpinConfiguration};
use uvoter::family::Dim;
use uvoter::lattice::Site;

#[test]
fn certified_sites_never_flip_later() {
    let boundaries = [
        Boundary::Sealed(Spin::Plus),
        Boundary::Sealed(Spin::Minus),
        Boundary::StaticOutside(Spin::Plus),
        Boundary::Torus,
    ];
    let t = 10.0;
    for (k, key) in ["fig1", "nn2d-2", "voter1d", "cross-subcritical"].into_iter().enumerate() {
        for i in 0..50u64 {
            let kind = if i % 2 == 0 { DynamicsKind::Voter } else { DynamicsKind::Ising };
            let mut cfg = SimulationConfig::new(
                catalog::family(key).unwrap(),
                kind,
                24,
                24,
                boundaries[(i as usize + k) % boundaries.len()],
            );
            cfg.rho_plus = 0.15;
            cfg.rho_minus = 0.03;
            cfg.mu = Mu::Bernoulli(0.7);
            cfg.seed = replica_seed(77, i);
            let mut sim = start(&cfg).unwrap();
            sim.advance_until(t);
            let report = well_fixed_certificate(sim.config(), &cfg.family, t);
            let seen = sim.records().len();
            sim.advance_until(11.0 * t);
            for r in &sim.records()[seen..] {
                assert!(
                    !report.certified_plus.contains(&r.site),
                    "{key} seed {}: certified {} flipped at {}",
                    cfg.seed,
                    r.site,
                    r.time
                );
            }
        }
    }
}

#[test]
fn forced_flippers_keep_flipping() {
    // A forced site flips away from its current state at rate 1/2 under the voter
    // dynamics of {{1},{-1}}, so a quiet tail of length 20 has probability e^-10.
    let f = catalog::family("voter1d").unwrap();
    let mut c = SpinConfiguration::sealed(Dim::One, 60, 1, 1, Spin::Plus);
    for x in [10, 30, 50] {
        c.set_frozen(Site::new(x - 1, 0), Frozen::FrozenMinus).unwrap();
        c.set_frozen(Site::new(x + 1, 0), Frozen::FrozenPlus).unwrap();
    }
    let forced = forced_flipper_sites(&c, &f);
    assert!([10, 30, 50].iter().all(|&x| forced.contains(&Site::new(x, 0))));
    for seed in 0..50 {
        let mut sim = Simulator::new(f.clone(), DynamicsKind::Voter, c.clone(), seed).unwrap();
        sim.advance_until(100.0);
        let stats = flipper_stats(&sim.into_trace(), 10, 0.2).unwrap();
        for &x in &forced {
            assert!(stats.tail(x) > 0, "seed {seed}: forced site {x} went quiet");
        }
    }
}

#[test]
fn disjoint_free_traces_respect_the_shield() {
    for key in ["fig1", "chain1d", "both1d"] {
        for seed in 0..10 {
            let mut cfg = SimulationConfig::new(catalog::family(key).unwrap(), DynamicsKind::Voter, 32, 32, Boundary::Sealed(Spin::Plus));
            cfg.rho_plus = 0.1;
            cfg.rho_minus = 0.05;
            cfg.horizon = 50.0;
            cfg.seed = seed;
            let t = uvoter::dynamics::run(&cfg).unwrap();
            assert_eq!(shield_violations(&t), vec![], "{key} seed {seed}");
        }
    }
}

#[test]
fn disjoint_rules_can_break_the_shield() {
    let mut cfg = SimulationConfig::new(catalog::family("voter1d").unwrap(), DynamicsKind::Voter, 200, 1, Boundary::Sealed(Spin::Plus));
    cfg.rho_plus = 0.1;
    cfg.rho_minus = 0.1;
    cfg.horizon = 100.0;
    let t = uvoter::dynamics::run(&cfg).unwrap();
    assert!(!shield_violations(&t).is_empty());
}

fn report_of(uncertified: &BTreeSet<Site>) -> WellFixedReport {
    WellFixedReport {
        time: 0.0,
        certified_plus: BTreeSet::new(),
        uncertified: uncertified.clone(),
        exact: true,
    }
}

proptest! {
    #[test]
    fn certifying_more_sites_never_grows_components(
        sites in prop::collection::btree_set((0i32..40, 0i32..40), 0..80),
        keep in prop::collection::vec(any::<bool>(), 80),
        l0 in 1i32..5,
    ) {
        let before: BTreeSet<Site> = sites.iter().map(|&(x, y)| Site::new(x, y)).collect();
        let after: BTreeSet<Site> = before.iter().zip(&keep).filter(|(_, &k)| k).map(|(&s, _)| s).collect();
        let grid = BlockGrid::new(l0, Site::ORIGIN, Site::new(39, 39), Dim::Two).unwrap();
        let a = non_fixed_components(&report_of(&before), &grid);
        let b = non_fixed_components(&report_of(&after), &grid);
        prop_assert!(b.first().unwrap_or(&0) <= a.first().unwrap_or(&0));
        prop_assert!(b.iter().sum::<usize>() <= a.iter().sum::<usize>());
    }
}

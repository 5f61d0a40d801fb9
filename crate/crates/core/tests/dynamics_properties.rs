use proptest::prelude::*;
use uvoter::catalog;
use uvoter::dynamics::{
    replay, rng_from_seed, sample_frozen, sample_initial, Boundary, DynamicsKind, Frozen, Mu, SimulationConfig,
    Simulator, Spin, SpinConfiguration,
};
use uvoter::family::Dim;
use uvoter::lattice::Site;

/// Copies a sealed window into a larger box whose extra sites are frozen at random
/// and whose outside is static.
fn embed(c: &SpinConfiguration, margin: i32, outside: Spin, junk_seed: u64) -> SpinConfiguration {
    use rand::Rng;
    let my = if c.dim() == Dim::One { 0 } else { margin };
    let lo = c.lo() - Site::new(margin, my);
    let mut big = SpinConfiguration::blank(
        c.dim(),
        lo,
        c.width() + 2 * margin,
        c.height() + 2 * my,
        Boundary::StaticOutside(outside),
        0,
    );
    let mut rng = rng_from_seed(junk_seed);
    let sites: Vec<Site> = big.window_sites().collect();
    for s in sites {
        if c.in_window(s) {
            big.set_frozen(s, c.frozen(s).unwrap()).unwrap();
            if c.frozen(s) == Some(Frozen::Unfrozen) {
                big.set_spin(s, c.spin(s).unwrap()).unwrap();
            }
        } else {
            let m = if rng.gen() { Frozen::FrozenPlus } else { Frozen::FrozenMinus };
            big.set_frozen(s, m).unwrap();
        }
    }
    big
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn sealed_runs_ignore_the_outside(
        seed in 0u64..10_000,
        junk in 0u64..10_000,
        key in prop::sample::select(vec!["fig1", "nn2d-2", "voter1d", "chain1d", "cross-subcritical", "both1d"]),
        voter in any::<bool>(),
        seal_plus in any::<bool>(),
    ) {
        let f = catalog::family(key).unwrap();
        let kind = if voter { DynamicsKind::Voter } else { DynamicsKind::Ising };
        let seal = if seal_plus { Spin::Plus } else { Spin::Minus };
        let mut cfg = SimulationConfig::new(f.clone(), kind, 10, 8, Boundary::Sealed(seal));
        cfg.rho_plus = 0.1;
        cfg.rho_minus = 0.1;
        cfg.mu = Mu::Bernoulli(0.5);
        let mut rng = rng_from_seed(seed);
        let mut c = sample_frozen(&cfg, &mut rng).unwrap();
        sample_initial(&cfg.mu, &mut c, &mut rng).unwrap();

        let mut a = Simulator::new(f.clone(), kind, c.clone(), seed).unwrap();
        let outside = if junk % 2 == 0 { Spin::Plus } else { Spin::Minus };
        let mut b = Simulator::new(f, kind, embed(&c, 3, outside, junk), seed).unwrap();
        a.advance_until(8.0);
        b.advance_until(8.0);
        prop_assert_eq!(a.records(), b.records());
        prop_assert_eq!(a.rings(), b.rings());
    }
}

#[test]
fn every_catalog_trace_replays() {
    for e in catalog::CATALOG {
        for (i, kind) in [DynamicsKind::Voter, DynamicsKind::Ising].into_iter().enumerate() {
            for boundary in [Boundary::Sealed(Spin::Plus), Boundary::StaticOutside(Spin::Minus), Boundary::Torus] {
                let mut cfg = SimulationConfig::new(e.family(), kind, 16, 12, boundary);
                cfg.rho_plus = 0.05;
                cfg.rho_minus = 0.05;
                cfg.horizon = 20.0;
                cfg.seed = 100 + i as u64;
                let t = uvoter::dynamics::run(&cfg).unwrap();
                assert_eq!(replay(&t).unwrap(), t.final_config, "{} {:?} {:?}", e.key, kind, boundary);
            }
        }
    }
}

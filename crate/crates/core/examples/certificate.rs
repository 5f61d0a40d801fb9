//! Well-fixed certificate over time for a run without frozen − sites.

use uvoter::analysis::{non_fixed_components, well_fixed_certificate, BlockGrid};
use uvoter::catalog;
use uvoter::dynamics::{start, Boundary, DynamicsKind, Mu, SimulationConfig, Spin};

fn main() {
    let f = catalog::family("fig1").unwrap();
    let mut cfg = SimulationConfig::new(f.clone(), DynamicsKind::Ising, 32, 32, Boundary::Sealed(Spin::Plus));
    cfg.rho_plus = 0.1;
    cfg.mu = Mu::AllMinus;
    cfg.horizon = 400.0;
    cfg.seed = 1;

    let mut sim = start(&cfg).unwrap();
    let grid = BlockGrid::for_config(4, sim.config()).unwrap();
    for t in [5.0, 20.0, 50.0, 100.0, 200.0, 400.0] {
        sim.advance_until(t);
        let r = well_fixed_certificate(sim.config(), &f, t);
        println!(
            "t={t:>5}: {:.3} certified, components {:?}",
            r.certified_fraction(),
            non_fixed_components(&r, &grid)
        );
        if r.is_complete() {
            break;
        }
    }
}

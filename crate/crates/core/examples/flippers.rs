//! Forced flippers of the 1D voter family against the flipper-free chain family.

use uvoter::analysis::flipper_stats;
use uvoter::catalog;
use uvoter::dynamics::{run, Boundary, DynamicsKind, SimulationConfig, Spin};

fn main() {
    for key in ["voter1d", "chain1d"] {
        let mut cfg = SimulationConfig::new(catalog::family(key).unwrap(), DynamicsKind::Voter, 400, 1, Boundary::Sealed(Spin::Plus));
        cfg.rho_plus = 0.05;
        cfg.rho_minus = 0.05;
        cfg.horizon = 500.0;
        cfg.seed = 3;
        let trace = run(&cfg).unwrap();
        let s = flipper_stats(&trace, 10, 0.2).unwrap();
        println!(
            "{key:<8} flips {:>6}, sites flipping in the last 20%: {:>3}, forced sites: {} ({} active)",
            trace.records.len(),
            s.tail_flip_sites(),
            s.forced_sites.len(),
            s.forced_tail_sites()
        );
    }
}

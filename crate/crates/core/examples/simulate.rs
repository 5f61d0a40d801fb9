//! One voter run on a sealed window, replayed flip by flip.

use uvoter::catalog;
use uvoter::dynamics::io::write_grid;
use uvoter::dynamics::{replay, run, Boundary, DynamicsKind, Mu, SimulationConfig, Spin};

fn main() {
    let mut cfg = SimulationConfig::new(
        catalog::family("fig1").unwrap(),
        DynamicsKind::Voter,
        24,
        12,
        Boundary::Sealed(Spin::Plus),
    );
    cfg.rho_plus = 0.1;
    cfg.rho_minus = 0.02;
    cfg.mu = Mu::Bernoulli(0.5);
    cfg.horizon = 50.0;
    cfg.seed = 7;

    let trace = run(&cfg).unwrap();
    println!("{} rings, {} flips", trace.rings, trace.records.len());
    for r in trace.records.iter().take(5) {
        println!("t={:.4} {} {}->{} via rule {}", r.time, r.site, r.from, r.to, r.rule_index);
    }
    assert_eq!(replay(&trace).unwrap(), trace.final_config);
    print!("{}", write_grid(&trace.final_config));
}

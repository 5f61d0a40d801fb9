//! Certificate against exhaustive search on a tiny sealed window with a forced flipper.

use uvoter::analysis::{forced_flipper_sites, reachability_oracle, well_fixed_certificate};
use uvoter::catalog;
use uvoter::dynamics::{Frozen, Spin, SpinConfiguration};
use uvoter::family::Dim;
use uvoter::lattice::Site;

fn main() {
    let f = catalog::family("voter1d").unwrap();
    let mut c = SpinConfiguration::sealed(Dim::One, 8, 1, 1, Spin::Plus);
    c.set_frozen(Site::new(2, 0), Frozen::FrozenMinus).unwrap();
    c.set_frozen(Site::new(4, 0), Frozen::FrozenPlus).unwrap();

    let forced = forced_flipper_sites(&c, &f);
    let report = well_fixed_certificate(&c, &f, 0.0);
    let reach = reachability_oracle(&c, &f).unwrap();
    println!("forced flippers: {forced:?}");
    println!("can turn -:      {:?}", reach.iter().filter(|s| c.is_interior(**s)).collect::<Vec<_>>());
    println!("certified +:     {:?}", report.certified_plus);
    assert!(report.uncertified.iter().all(|s| reach.contains(s)));
}

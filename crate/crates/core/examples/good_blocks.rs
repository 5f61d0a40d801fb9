//! Monte Carlo estimates of the good-block probability as the block grows.

use uvoter::analysis::estimate_good_block_probability;
use uvoter::catalog;
use uvoter::geometry::FamilyGeometry;

fn main() {
    for key in ["fig1", "nn2d-2"] {
        let g = FamilyGeometry::new(&catalog::family(key).unwrap()).unwrap();
        for l in [4, 8] {
            let e = estimate_good_block_probability(&g, 0.5, 0.0, l, 100, 11).unwrap();
            println!("{key:<7} L={l:<3} p={:.3} [{:.3}, {:.3}]", e.p, e.ci_low, e.ci_high);
        }
    }
}

//! Bootstrap closure with immune sites, checked against the sweep-based reference.

use std::collections::BTreeSet;

use uvoter::bootstrap::{closure, naive_closure, Domain};
use uvoter::catalog;
use uvoter::lattice::Site;

fn main() {
    let f = catalog::family("nn2d-2").unwrap();
    let dom = Domain::rect(Site::new(0, 0), Site::new(9, 9));
    let seeds: BTreeSet<Site> = (0..10).map(|k| Site::new(k, k)).collect();
    let immune: BTreeSet<Site> = [Site::new(5, 2)].into_iter().collect();

    let c = closure(&dom, &seeds, &immune, &f).unwrap();
    assert_eq!(c.sites(), naive_closure(&dom, &seeds, &immune, &f));
    c.witness.validate(&dom, &seeds, &immune, &f).unwrap();
    println!("{} of {} sites infected, witness has {} steps", c.len(), dom.len(), c.witness.steps.len());
    for y in (0..10).rev() {
        let row: String = (0..10)
            .map(|x| {
                let s = Site::new(x, y);
                if immune.contains(&s) {
                    'I'
                } else if c.contains(s) {
                    '#'
                } else {
                    '.'
                }
            })
            .collect();
        println!("{row}");
    }
}

//! Droplet directions, constants and an ASCII picture of D(a) with its corners.

use std::collections::BTreeSet;

use uvoter::catalog;
use uvoter::exact::Scale;
use uvoter::geometry::{corner_sites, droplet_sites, CornerRegion, Droplet, DropletKind, FamilyGeometry};
use uvoter::lattice::Site;

fn main() {
    let key = std::env::args().nth(1).unwrap_or_else(|| "cross-subcritical".into());
    let f = catalog::family(&key).expect("catalog key");
    let g = FamilyGeometry::new(&f).unwrap();
    let dirs = g.dirs.clone().expect("non-supercritical family");
    println!("{key}: directions {:?}", dirs.dirs().iter().map(|d| d.to_string()).collect::<Vec<_>>());
    println!("{:#?}", g.constants);

    let a = Scale::from_integer(6);
    let inside: BTreeSet<Site> = droplet_sites(&Droplet::new(Site::ORIGIN, a, dirs.clone(), DropletKind::Closed))
        .unwrap()
        .into_iter()
        .collect();
    let mut corners = BTreeSet::new();
    for i in 0..dirs.m() {
        corners.extend(corner_sites(&CornerRegion::new(Site::ORIGIN, i, a, dirs.clone()), f.range_sq()).unwrap());
    }
    let all: Vec<Site> = inside.iter().chain(&corners).copied().collect();
    let (x0, x1) = (all.iter().map(|s| s.x).min().unwrap(), all.iter().map(|s| s.x).max().unwrap());
    let (y0, y1) = (all.iter().map(|s| s.y).min().unwrap(), all.iter().map(|s| s.y).max().unwrap());
    for y in (y0..=y1).rev() {
        let row: String = (x0..=x1)
            .map(|x| {
                let s = Site::new(x, y);
                match (corners.contains(&s), inside.contains(&s)) {
                    (true, _) => 'C',
                    (false, true) => '#',
                    _ => '.',
                }
            })
            .collect();
        println!("{row}");
    }
}

//! A far-away − pair invades a droplet of the supercritical family, and cannot for the
//! critical one.

use uvoter::analysis::well_fixed_certificate;
use uvoter::bootstrap::{closure_in_place, signed_setup};
use uvoter::catalog;
use uvoter::dynamics::{replay_records, FlipRecord, Frozen, Spin, SpinConfiguration};
use uvoter::exact::Scale;
use uvoter::family::{Dim, UpdateFamily};
use uvoter::geometry::{corner_sites, droplet_sites, CornerRegion, DirectionSet, Droplet, DropletKind};
use uvoter::lattice::Site;

const CENTER: Site = Site { x: 40, y: 5 };

/// 50×11 sealed-+ window, a frozen − pair at the far left, and the axis droplet D(4)
/// around `CENTER` with every enlarged corner frozen at +.
fn setup(f: &UpdateFamily) -> (SpinConfiguration, Vec<Site>) {
    let mut c = SpinConfiguration::sealed(Dim::Two, 50, 11, f.range_ceil(), Spin::Plus);
    c.set_frozen(Site::new(1, 5), Frozen::FrozenMinus).unwrap();
    c.set_frozen(Site::new(1, 6), Frozen::FrozenMinus).unwrap();
    let dirs = DirectionSet::axes();
    let a = Scale::from_integer(4);
    for i in 0..4 {
        for s in corner_sites(&CornerRegion::new(CENTER, i, a, dirs.clone()), f.range_sq()).unwrap() {
            c.set_frozen(s, Frozen::FrozenPlus).unwrap();
        }
    }
    let inside = droplet_sites(&Droplet::new(CENTER, a, dirs, DropletKind::Closed)).unwrap();
    (c, inside)
}

/// Flip records following the ⊖-bootstrap order of the configuration, one per unit of time.
fn forcing_schedule(c: &SpinConfiguration, f: &UpdateFamily) -> Vec<FlipRecord> {
    let (dom, mut infected, immune) = signed_setup(c, f, Spin::Minus);
    let mut steps = Vec::new();
    closure_in_place(&dom, &mut infected, &immune, f, Some(&mut steps));
    steps
        .into_iter()
        .filter(|(s, _)| c.in_window(*s))
        .enumerate()
        .map(|(k, (site, rule_index))| FlipRecord {
            time: (k + 1) as f64,
            site,
            from: Spin::Plus,
            to: Spin::Minus,
            rule_index,
        })
        .collect()
}

#[test]
fn minus_pair_propagates_into_a_good_droplet() {
    let f = catalog::family("fig1").unwrap();
    let (mut c, inside) = setup(&f);
    let report = well_fixed_certificate(&c, &f, 0.0);
    assert!(inside.iter().any(|s| !report.certified_plus.contains(s)));

    let schedule = forcing_schedule(&c, &f);
    replay_records(&mut c, &f, &schedule).expect("every scheduled flip is legal");
    let invaded: Vec<_> = inside.iter().filter(|&&s| c.spin(s) == Some(Spin::Minus)).collect();
    assert!(invaded.contains(&&CENTER), "{invaded:?}");
    // the front is exactly the two rows of the seed pair
    assert!(schedule.iter().all(|r| r.site.y == 5 || r.site.y == 6));
    assert_eq!(schedule.len(), 2 * 48);
}

#[test]
fn critical_droplet_is_not_reachable() {
    let f = catalog::family("nn2d-2").unwrap();
    let (c, inside) = setup(&f);
    let report = well_fixed_certificate(&c, &f, 0.0);
    for s in inside {
        assert!(report.certified_plus.contains(&s), "{s} not certified");
    }
    assert!(forcing_schedule(&c, &f).is_empty());
}

//! Classify every catalog family and print its stable directions.

use uvoter::catalog::CATALOG;
use uvoter::family::{classify, stable_set, Dim};

fn main() {
    for e in CATALOG {
        let f = e.family();
        let c = classify(&f);
        print!("{:<18} {:?}, disjoint rules: {}", e.key, c.kind, c.has_disjoint_rules);
        if f.dim() == Dim::Two {
            print!(", stable: {}", stable_set(&f).unwrap());
        }
        println!();
    }

    // any family in the text format works the same way
    let f = uvoter::family::UpdateFamily::parse("dim 2; rule (1,0) (0,1); rule (-1,0)").unwrap();
    println!("custom: {:?}", classify(&f).kind);
}

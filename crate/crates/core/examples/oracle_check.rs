//! The three brute-force cross-checks, with and without the fault hook.

use uvoter::oracle::{run_all, OracleOptions};

fn main() {
    for inject_fault in [false, true] {
        let opts = OracleOptions { trials: 50, seed: 0, inject_fault };
        println!("inject_fault = {inject_fault}");
        for r in run_all(&opts) {
            println!("  {:<28} {}/{} failed", r.name, r.failures, r.trials);
        }
    }
}

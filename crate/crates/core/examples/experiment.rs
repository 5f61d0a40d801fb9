//! A replicated experiment from a key = value spec, written to a temporary directory.

use uvoter::experiment::{run_experiment, ExperimentSpec};

const SPEC: &str = "
name = fixation
family = nn2d-2
kind = voter
width = 24
height = 24
rho_plus = 0.15
rho_minus = 0
mu = all-minus
horizon = 300
seed = 5
replicas = 6
analyses = certificate,components
";

fn main() {
    let spec = ExperimentSpec::parse(SPEC).unwrap();
    let out = run_experiment(&spec, Some(2)).unwrap();
    let dir = std::env::temp_dir().join("uvoter-example-experiment");
    out.write_to(&dir).unwrap();
    println!("wrote {} files to {}", out.files.len(), dir.display());
    println!("all_fixated_fraction = {:?}", out.summary.all_fixated_fraction);
    for r in &out.summary.replicas {
        println!("replica {} seed {:>20} fixated {:?} components {:?}", r.index, r.seed, r.fixated, r.component_sizes);
    }
}

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn uvoter(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uvoter")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn classify_reports_kinds() {
    let o = uvoter(&["classify", "--catalog", "fig1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("kind: Supercritical"));
    assert!(stdout(&o).contains("disjoint rules: none"));

    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("f.txt");
    fs::write(&p, "# two neighbours\ndim 2\nrule (1,0) (0,1)\nrule (-1,0) (0,-1)\n").unwrap();
    let o = uvoter(&["classify", "--family", p.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    fs::write(&p, "dim 2\nrule (0,0)\n").unwrap();
    assert_eq!(uvoter(&["classify", "--family", p.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn simulate_then_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = uvoter(&[
        "--seed", "4", "--output", out, "simulate", "--catalog", "voter1d", "--width", "60", "--boundary",
        "sealed-plus", "--rho-plus", "0.1", "--rho-minus", "0.1", "--mu", "bernoulli:0.5", "--horizon", "30",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["trace.csv", "initial.txt", "final.txt"] {
        assert!(dir.path().join(f).exists());
    }
    let trace = fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    assert!(trace.contains("# config seed = 4") && trace.contains("time,x,y,from,to,rule_index"));

    let adir = dir.path().join("analysis");
    let o = uvoter(&[
        "--output",
        adir.to_str().unwrap(),
        "analyze",
        "--trace",
        dir.path().join("trace.csv").to_str().unwrap(),
        "--initial",
        dir.path().join("initial.txt").to_str().unwrap(),
        "--block-size",
        "4",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let cert = fs::read_to_string(adir.join("certificate.csv")).unwrap();
    assert!(cert.starts_with("x,y,status\n"));
    assert_eq!(cert.lines().count(), 61);
    assert!(fs::read_to_string(adir.join("flippers.csv")).unwrap().starts_with("x,y,bucket,count"));
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(adir.join("components.json")).unwrap()).unwrap();
    assert!(json["component_sizes"].is_array());

    // the final snapshot certifies the same way
    let o = uvoter(&["analyze", "--catalog", "voter1d", "--snapshot", dir.path().join("final.txt").to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("== certificate.csv"));
}

#[test]
fn closure_from_a_site_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("sites.csv");
    let mut text = String::from("x,y,role\n");
    for x in 0..5 {
        for y in 0..5 {
            let role = if x == y { "seed" } else if (x, y) == (3, 0) { "immune" } else { "domain" };
            text.push_str(&format!("{x},{y},{role}\n"));
        }
    }
    fs::write(&p, text).unwrap();
    let o = uvoter(&["closure", "--catalog", "nn2d-2", "--sites", p.to_str().unwrap(), "--witness"]);
    assert!(o.status.success());
    let s = stdout(&o);
    // everything but the immune site and (4,0), which has only one infectable neighbour
    assert!(s.contains("closed set 23 sites"), "{s}");
    assert!(s.contains("step,x,y,rule_index"));
}

fn read_all(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    v.sort();
    v
}

#[test]
fn experiment_outputs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.txt");
    fs::write(&spec, "name = cli\nfamily = chain1d\nwidth = 50\nrho_plus = 0.1\nrho_minus = 0.05\nhorizon = 20\nreplicas = 3\n").unwrap();
    let run = |sub: &str, jobs: &str| {
        let out = dir.path().join(sub);
        let o = uvoter(&["--seed", "12", "--jobs", jobs, "--output", out.to_str().unwrap(), "experiment", "--config", spec.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        read_all(&out)
    };
    let a = run("a", "1");
    let b = run("b", "4");
    assert_eq!(a, b);
    assert!(a.iter().any(|(n, _)| n == "summary.json"));
    let summary = String::from_utf8(a.iter().find(|(n, _)| n == "summary.json").unwrap().1.clone()).unwrap();
    assert!(summary.contains("\"seed\": 12") && summary.contains("\"version\""));
}

#[test]
fn usage_and_validation_exit_codes() {
    assert_eq!(uvoter(&["oracle-check", "--trials", "0"]).status.code(), Some(1));
    assert_eq!(uvoter(&["simulate", "--width", "abc"]).status.code(), Some(1));
    assert_eq!(uvoter(&["oracle-check", "--trials", "5", "--inject-fault"]).status.code(), Some(2));
    assert_eq!(uvoter(&["oracle-check", "--trials", "5"]).status.code(), Some(0));
    assert_eq!(uvoter(&["experiment", "--set", "replicas=0"]).status.code(), Some(2));
}

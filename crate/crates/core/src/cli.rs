//! Command-line front end. Exit codes: 0 success, 1 usage error, 2 validation or oracle failure.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::analysis::{
    flipper_stats_from_records, forced_flipper_sites, non_fixed_components, well_fixed_certificate, BlockGrid,
};
use crate::bootstrap::{closure, Domain};
use crate::catalog::CATALOG;
use crate::dynamics::io::{parse_grid, parse_trace_csv, write_grid, write_trace_csv};
use crate::dynamics::{replay_records, run};
use crate::exact::{scale_to_f64, Scale};
use crate::experiment::{
    certificate_csv, flipper_csv, run_experiment, ExperimentSpec, VERSION,
};
use crate::family::{classify, stable_set, Dim, UpdateFamily};
use crate::geometry::{corner_sites, droplet_sites, CornerRegion, Droplet, DropletKind, FamilyGeometry};
use crate::lattice::Site;
use crate::oracle::{run_all, run_suite, OracleOptions, Suite};

#[derive(Debug, Parser)]
#[command(name = "uvoter", version, about = "U-voter and U-Ising dynamics with frozen vertices")]
pub struct Cli {
    /// Base seed; overrides any seed in a config file.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for replicated runs.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Output directory.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct FamilyArg {
    /// Built-in family key (see `classify` with no family).
    #[arg(long, conflicts_with = "family")]
    pub catalog: Option<String>,
    /// Family file.
    #[arg(long)]
    pub family: Option<PathBuf>,
}

impl FamilyArg {
    fn given(&self) -> bool {
        self.catalog.is_some() || self.family.is_some()
    }

    fn load(&self) -> Result<UpdateFamily, CliError> {
        match (&self.catalog, &self.family) {
            (Some(k), _) => crate::catalog::family(k).ok_or_else(|| CliError::Usage(format!("unknown catalog key {k:?}"))),
            (None, Some(p)) => {
                let text = read(p)?;
                UpdateFamily::parse(&text).map_err(|e| CliError::Validation(format!("{}: {e}", p.display())))
            }
            (None, None) => Err(CliError::Usage("need --catalog KEY or --family FILE".into())),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify a family; with no family, self-test the whole catalog.
    Classify {
        #[command(flatten)]
        family: FamilyArg,
    },
    /// Droplet directions and constants; optionally the sites of D(a), D′(a) and the corners.
    Geometry {
        #[command(flatten)]
        family: FamilyArg,
        /// Droplet scale (integer or p/q) for the site listing.
        #[arg(long)]
        a: Option<String>,
    },
    /// Bootstrap closure of a site file with columns x,y,role (role: domain, seed or immune).
    Closure {
        #[command(flatten)]
        family: FamilyArg,
        #[arg(long)]
        sites: PathBuf,
        /// Also emit the infection witness (step,x,y,rule_index).
        #[arg(long)]
        witness: bool,
    },
    /// Run one simulation and write trace.csv, initial.txt and final.txt.
    Simulate(SimulateArgs),
    /// Certificate and block components of a snapshot, or flipper statistics of a trace.
    Analyze(AnalyzeArgs),
    /// Replicated runs from a key = value spec.
    Experiment {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Extra `key=value` settings applied after the config file.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Cross-check the fast algorithms against brute-force references.
    OracleCheck {
        #[arg(long, default_value_t = 200)]
        trials: usize,
        /// One of closure, classifier, certificate; all suites by default.
        #[arg(long)]
        suite: Option<String>,
        /// Test hook: corrupt every fast result so the suites must fail.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// key = value file with the same keys as the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Built-in family key.
    #[arg(long)]
    pub catalog: Option<String>,
    /// Family file.
    #[arg(long)]
    pub family: Option<String>,
    /// voter or ising.
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long)]
    pub width: Option<String>,
    /// Window height (1 for one-dimensional families).
    #[arg(long)]
    pub height: Option<String>,
    /// sealed-plus, sealed-minus, static-plus, static-minus or torus.
    #[arg(long)]
    pub boundary: Option<String>,
    /// Width of the frozen annulus of a sealed window.
    #[arg(long)]
    pub seal: Option<String>,
    /// Density of frozen + sites.
    #[arg(long)]
    pub rho_plus: Option<String>,
    /// Density of frozen − sites.
    #[arg(long)]
    pub rho_minus: Option<String>,
    /// Initial law: all-plus, all-minus or bernoulli:P.
    #[arg(long)]
    pub mu: Option<String>,
    /// Final time.
    #[arg(long)]
    pub horizon: Option<String>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub family: FamilyArg,
    /// Snapshot grid to certify.
    #[arg(long)]
    pub snapshot: Option<PathBuf>,
    /// Trace CSV to summarise.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Initial snapshot of the trace, for forced sites and the final certificate.
    #[arg(long)]
    pub initial: Option<PathBuf>,
    #[arg(long, default_value_t = 8)]
    pub block_size: i32,
    #[arg(long, default_value_t = 10)]
    pub buckets: usize,
    #[arg(long, default_value_t = 0.2)]
    pub tail_fraction: f64,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Validation(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Validation(m) => m,
        }
    }
}

fn read(p: &Path) -> Result<String, CliError> {
    fs::read_to_string(p).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", p.display())))
}

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Validation(e.to_string())
}

struct Sink<'a> {
    dir: Option<PathBuf>,
    out: &'a mut dyn Write,
}

impl Sink<'_> {
    fn say(&mut self, text: &str) -> Result<(), CliError> {
        self.out
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Usage(format!("cannot write output: {e}")))
    }

    /// Writes `contents` to `name` in the output directory, or to stdout without one.
    fn file(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        match &self.dir {
            Some(d) => {
                fs::create_dir_all(d).map_err(|e| CliError::Usage(format!("cannot create {}: {e}", d.display())))?;
                let p = d.join(name);
                fs::write(&p, contents).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display())))?;
                self.say(&format!("wrote {}\n", p.display()))
            }
            None => self.say(&format!("== {name}\n{contents}")),
        }
    }
}

/// Parses arguments and runs; returns the process exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    match run_cli(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.exit_code()
        }
    }
}

pub fn run_cli(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let mut sink = Sink {
        dir: cli.output.clone(),
        out,
    };
    match cli.command {
        Command::Classify { family } => cmd_classify(&family, &mut sink),
        Command::Geometry { family, a } => cmd_geometry(&family, a.as_deref(), &mut sink),
        Command::Closure { family, sites, witness } => cmd_closure(&family, &sites, witness, &mut sink),
        Command::Simulate(args) => cmd_simulate(&args, cli.seed, &mut sink),
        Command::Analyze(args) => cmd_analyze(&args, &mut sink),
        Command::Experiment { config, set } => cmd_experiment(config.as_deref(), &set, cli.seed, cli.jobs, &mut sink),
        Command::OracleCheck {
            trials,
            suite,
            inject_fault,
        } => cmd_oracle_check(trials, suite.as_deref(), cli.seed.unwrap_or(0), inject_fault, &mut sink),
    }
}

pub fn classify_report(f: &UpdateFamily) -> String {
    let c = classify(f);
    let mut s = String::new();
    writeln!(s, "kind: {:?}", c.kind).unwrap();
    match c.witness {
        Some((i, j)) => writeln!(s, "disjoint rules: {} and {}", f.rules()[i], f.rules()[j]).unwrap(),
        None => writeln!(s, "disjoint rules: none").unwrap(),
    }
    if f.dim() == Dim::Two {
        writeln!(s, "stable directions: {}", stable_set(f).expect("two-dimensional")).unwrap();
    }
    s
}

fn cmd_classify(family: &FamilyArg, sink: &mut Sink) -> Result<(), CliError> {
    if family.given() {
        let f = family.load()?;
        return sink.say(&classify_report(&f));
    }
    let mut failed = Vec::new();
    for e in CATALOG {
        let c = classify(&e.family());
        let ok = e.self_test().is_ok();
        sink.say(&format!(
            "{:<18} {:<13} disjoint={:<5} {}\n",
            e.key,
            format!("{:?}", c.kind),
            c.has_disjoint_rules,
            if ok { "ok" } else { "MISMATCH" }
        ))?;
        if !ok {
            failed.push(e.key);
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Validation(format!("catalog self-test failed for {failed:?}")))
    }
}

fn scale_text(a: Scale) -> String {
    format!("{a} (≈ {:.6})", scale_to_f64(a))
}

fn cmd_geometry(family: &FamilyArg, a: Option<&str>, sink: &mut Sink) -> Result<(), CliError> {
    let f = family.load()?;
    let g = FamilyGeometry::new(&f).map_err(invalid)?;
    let k = &g.constants;
    let mut s = String::new();
    writeln!(s, "kind: {:?}", g.classification.kind).unwrap();
    match &g.dirs {
        Some(d) => {
            let list: Vec<String> = d.dirs().iter().map(|u| u.to_string()).collect();
            writeln!(s, "directions: {}", list.join(" ")).unwrap();
        }
        None => writeln!(s, "directions: none (supercritical)").unwrap(),
    }
    let opt = |v: Option<f64>| v.map(|x| format!("{x:.6}")).unwrap_or_else(|| "-".into());
    writeln!(s, "M: {}", opt(k.m_radius)).unwrap();
    writeln!(s, "M': {}", opt(k.m_prime_radius)).unwrap();
    writeln!(s, "K: {}", k.k).unwrap();
    writeln!(s, "a0: {}", k.a0.map(scale_text).unwrap_or_else(|| "-".into())).unwrap();
    match (k.a0_tilde, k.a0_tilde_upper) {
        (Some(t), Some(u)) => writeln!(s, "a0~: {t:.9}, grid upper bound {}", scale_text(u)).unwrap(),
        _ => writeln!(s, "a0~: -").unwrap(),
    }
    writeln!(s, "min block size: {}", k.min_block_size(f.range_sq())).unwrap();
    sink.say(&s)?;

    let Some(a) = a else { return Ok(()) };
    let a: Scale = a.parse().map_err(|_| CliError::Usage(format!("bad scale {a:?}")))?;
    let dirs = g
        .dirs
        .clone()
        .ok_or_else(|| CliError::Validation("supercritical families have no droplets".into()))?;
    let mut csv = String::from("x,y,region\n");
    for (kind, name) in [(DropletKind::Closed, "D"), (DropletKind::Open, "Dprime")] {
        for p in droplet_sites(&Droplet::new(Site::ORIGIN, a, dirs.clone(), kind)).map_err(invalid)? {
            writeln!(csv, "{},{},{name}", p.x, p.y).unwrap();
        }
    }
    for i in 0..dirs.m() {
        let c = CornerRegion::new(Site::ORIGIN, i, a, dirs.clone());
        for p in corner_sites(&c, f.range_sq()).map_err(invalid)? {
            writeln!(csv, "{},{},C{i}", p.x, p.y).unwrap();
        }
    }
    sink.file("geometry_sites.csv", &csv)
}

fn parse_site_roles(text: &str, dim: Dim) -> Result<(Vec<Site>, BTreeSet<Site>, BTreeSet<Site>), CliError> {
    let mut all = Vec::new();
    let mut seeds = BTreeSet::new();
    let mut immune = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line == "x,y,role" {
            continue;
        }
        let bad = || CliError::Validation(format!("line {}: expected x,y,role", i + 1));
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        if cols.len() != 3 {
            return Err(bad());
        }
        let x: i32 = cols[0].parse().map_err(|_| bad())?;
        let y: i32 = cols[1].parse().map_err(|_| bad())?;
        if dim == Dim::One && y != 0 {
            return Err(CliError::Validation(format!("line {}: one-dimensional sites need y = 0", i + 1)));
        }
        let s = Site::new(x, y);
        all.push(s);
        match cols[2] {
            "domain" => {}
            "seed" => {
                seeds.insert(s);
            }
            "immune" => {
                immune.insert(s);
            }
            r => return Err(CliError::Validation(format!("line {}: unknown role {r:?}", i + 1))),
        }
    }
    Ok((all, seeds, immune))
}

fn cmd_closure(family: &FamilyArg, sites: &Path, witness: bool, sink: &mut Sink) -> Result<(), CliError> {
    let f = family.load()?;
    let (all, seeds, immune) = parse_site_roles(&read(sites)?, f.dim())?;
    let dom = Domain::from_sites(all).map_err(invalid)?;
    let c = closure(&dom, &seeds, &immune, &f).map_err(invalid)?;
    sink.say(&format!("domain {} sites, {} seeds, closed set {} sites\n", dom.len(), seeds.len(), c.len()))?;
    let mut csv = String::from("x,y\n");
    for s in c.sites() {
        writeln!(csv, "{},{}", s.x, s.y).unwrap();
    }
    sink.file("closure.csv", &csv)?;
    if witness {
        let mut w = String::from("step,x,y,rule_index\n");
        for (k, (s, r)) in c.witness.steps.iter().enumerate() {
            writeln!(w, "{k},{},{},{r}", s.x, s.y).unwrap();
        }
        sink.file("witness.csv", &w)?;
    }
    Ok(())
}

fn cmd_simulate(args: &SimulateArgs, seed: Option<u64>, sink: &mut Sink) -> Result<(), CliError> {
    let mut spec = match &args.config {
        Some(p) => ExperimentSpec::parse(&read(p)?).map_err(invalid)?,
        None => ExperimentSpec::new("simulate", args.catalog.as_deref().or(args.family.as_deref()).unwrap_or("fig1"))
            .map_err(invalid)?,
    };
    let flags = [
        ("family", args.catalog.as_ref().or(args.family.as_ref())),
        ("kind", args.kind.as_ref()),
        ("width", args.width.as_ref()),
        ("height", args.height.as_ref()),
        ("boundary", args.boundary.as_ref()),
        ("seal", args.seal.as_ref()),
        ("rho_plus", args.rho_plus.as_ref()),
        ("rho_minus", args.rho_minus.as_ref()),
        ("mu", args.mu.as_ref()),
        ("horizon", args.horizon.as_ref()),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            spec.set(k, v).map_err(|e| CliError::Usage(e.to_string()))?;
        }
    }
    if let Some(s) = seed {
        spec.config.seed = s;
    }
    let trace = run(&spec.config).map_err(invalid)?;
    let mut head = format!("# version {VERSION}\n");
    for line in spec.to_text().lines() {
        writeln!(head, "# config {line}").unwrap();
    }
    sink.say(&format!(
        "{} rings, {} flips up to time {}\n",
        trace.rings,
        trace.records.len(),
        trace.horizon
    ))?;
    if sink.dir.is_none() {
        sink.dir = Some(PathBuf::from("."));
    }
    sink.file("trace.csv", &(head.clone() + &write_trace_csv(&trace)))?;
    sink.file("initial.txt", &(head.clone() + &write_grid(&trace.initial)))?;
    sink.file("final.txt", &(head + &write_grid(&trace.final_config)))
}

fn cmd_analyze(args: &AnalyzeArgs, sink: &mut Sink) -> Result<(), CliError> {
    if args.snapshot.is_none() && args.trace.is_none() {
        return Err(CliError::Usage("need --snapshot GRID or --trace CSV".into()));
    }
    if let Some(p) = &args.snapshot {
        let f = args.family.load()?;
        let c = parse_grid(&read(p)?).map_err(invalid)?;
        c.validate(&f).map_err(invalid)?;
        certify(&c, &f, 0.0, args.block_size, sink)?;
    }
    if let Some(p) = &args.trace {
        let t = parse_trace_csv(&read(p)?).map_err(invalid)?;
        let f = match (&t.family, args.family.given()) {
            (_, true) => args.family.load()?,
            (Some(f), false) => f.clone(),
            (None, false) => return Err(CliError::Usage("trace has no family header; pass --catalog or --family".into())),
        };
        let horizon = t
            .horizon
            .or_else(|| t.records.last().map(|r| r.time))
            .ok_or_else(|| CliError::Validation("empty trace without a horizon".into()))?;
        let mut forced = Vec::new();
        if let Some(ip) = &args.initial {
            let mut c = parse_grid(&read(ip)?).map_err(invalid)?;
            c.validate(&f).map_err(invalid)?;
            forced = forced_flipper_sites(&c, &f);
            replay_records(&mut c, &f, &t.records).map_err(invalid)?;
            certify(&c, &f, horizon, args.block_size, sink)?;
        }
        let stats = flipper_stats_from_records(&t.records, horizon, args.buckets, args.tail_fraction, forced)
            .map_err(invalid)?;
        sink.say(&format!(
            "{} sites flipped, {} in the tail, {} forced sites ({} flipping in the tail)\n",
            stats.counts.len(),
            stats.tail_flip_sites(),
            stats.forced_sites.len(),
            stats.forced_tail_sites()
        ))?;
        sink.file("flippers.csv", &flipper_csv(&stats))?;
    }
    Ok(())
}

fn certify(
    c: &crate::dynamics::SpinConfiguration,
    f: &UpdateFamily,
    time: f64,
    block_size: i32,
    sink: &mut Sink,
) -> Result<(), CliError> {
    let report = well_fixed_certificate(c, f, time);
    let grid = BlockGrid::for_config(block_size, c).map_err(invalid)?;
    let sizes = non_fixed_components(&report, &grid);
    sink.say(&format!(
        "certified {} of {} interior sites{}\n",
        report.certified_plus.len(),
        report.certified_plus.len() + report.uncertified.len(),
        if report.exact { "" } else { " (sound only: window is not sealed)" }
    ))?;
    sink.file("certificate.csv", &certificate_csv(&report))?;
    let json = serde_json::json!({
        "version": VERSION,
        "time": time,
        "exact": report.exact,
        "certified": report.certified_plus.len(),
        "uncertified": report.uncertified.len(),
        "block_size": block_size,
        "component_sizes": sizes,
    });
    sink.file("components.json", &(serde_json::to_string_pretty(&json).expect("json") + "\n"))
}

fn cmd_experiment(
    config: Option<&Path>,
    set: &[String],
    seed: Option<u64>,
    jobs: Option<usize>,
    sink: &mut Sink,
) -> Result<(), CliError> {
    let mut text = match config {
        Some(p) => read(p)?,
        None => String::new(),
    };
    for kv in set {
        if !kv.contains('=') {
            return Err(CliError::Usage(format!("--set expects KEY=VALUE, got {kv:?}")));
        }
        text.push_str(kv);
        text.push('\n');
    }
    let mut spec = ExperimentSpec::parse(&text).map_err(invalid)?;
    if let Some(s) = seed {
        spec.config.seed = s;
    }
    if jobs == Some(0) {
        return Err(CliError::Usage("--jobs must be positive".into()));
    }
    let out = run_experiment(&spec, jobs).map_err(invalid)?;
    let dir = sink.dir.clone().unwrap_or_else(|| PathBuf::from(format!("{}-out", spec.name)));
    out.write_to(&dir).map_err(|e| CliError::Usage(e.to_string()))?;
    let s = &out.summary;
    let mut msg = format!("{}: {} replicas written to {}\n", s.name, s.replicas.len(), dir.display());
    if let Some(x) = s.all_fixated_fraction {
        writeln!(msg, "all_fixated_fraction: {x}").unwrap();
    }
    if let Some(x) = s.mean_tail_flip_sites {
        writeln!(msg, "mean tail_flip_sites: {x}").unwrap();
    }
    sink.say(&msg)
}

fn cmd_oracle_check(
    trials: usize,
    suite: Option<&str>,
    seed: u64,
    inject_fault: bool,
    sink: &mut Sink,
) -> Result<(), CliError> {
    if trials == 0 {
        return Err(CliError::Usage("invalid argument: --trials must be positive".into()));
    }
    let opts = OracleOptions {
        trials,
        seed,
        inject_fault,
    };
    let reports = match suite {
        None | Some("all") => run_all(&opts),
        Some(name) => {
            let s = match name {
                "closure" => Suite::Closure,
                "classifier" => Suite::Classifier,
                "certificate" => Suite::Certificate,
                _ => return Err(CliError::Usage(format!("unknown suite {name:?}"))),
            };
            vec![run_suite(s, &opts)]
        }
    };
    let mut failed = false;
    for r in &reports {
        sink.say(&format!(
            "{} {:<28} {} trials, {} failures, {:.2}s\n",
            if r.passed() { "PASS" } else { "FAIL" },
            r.name,
            r.trials,
            r.failures,
            r.seconds
        ))?;
        if let Some(msg) = &r.first_failure {
            sink.say(&format!("     first failure: {msg}\n"))?;
        }
        failed |= !r.passed();
    }
    if failed {
        Err(CliError::Validation("oracle check failed".into()))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = main_with_args(std::iter::once("uvoter").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn classify_catalog_entries() {
        let (code, out, _) = call(&["classify", "--catalog", "fig1"]);
        assert_eq!(code, 0);
        assert!(out.contains("kind: Supercritical") && out.contains("disjoint rules: none"));
        let (_, out, _) = call(&["classify", "--catalog", "nn2d-2"]);
        assert!(out.contains("kind: Critical"));
        let (_, out, _) = call(&["classify", "--catalog", "voter1d"]);
        assert!(out.contains("kind: Supercritical") && !out.contains("disjoint rules: none"));
        let (code, out, _) = call(&["classify"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), CATALOG.len());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["oracle-check", "--trials", "0"]).0, 1);
        assert_eq!(call(&["no-such-command"]).0, 1);
        assert_eq!(call(&["oracle-check", "--trials", "3", "--inject-fault"]).0, 2);
        assert_eq!(call(&["oracle-check", "--trials", "3"]).0, 0);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn geometry_lists_sites() {
        let (code, out, _) = call(&["geometry", "--catalog", "nn2d-2", "--a", "4"]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("x,y,region") && out.contains(",C0"));
    }
}

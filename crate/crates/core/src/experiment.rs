//! Replicated simulation experiments with JSON summaries and CSV detail files.
//!
//! Replica `i` of an experiment with base seed `s` runs with seed
//! `replica_seed(s, i)`, the splitmix64 finaliser applied to `s + i`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::analysis::{
    flipper_stats, non_fixed_components, shield_violations, well_fixed_certificate, AnalysisError, BlockGrid,
    FlipperStats, WellFixedReport,
};
use crate::catalog;
use crate::dynamics::io::{family_line, write_grid, write_trace_csv};
use crate::dynamics::{
    replica_seed, run, Boundary, DynamicsError, DynamicsKind, FlipTrace, Mu, SimulationConfig, Spin,
};
use crate::family::{FamilyError, UpdateFamily};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("line {line}: {msg}")]
    Spec { line: usize, msg: String },
    #[error("invalid experiment: {0}")]
    Invalid(String),
    #[error("family {name}: {source}")]
    Family { name: String, source: FamilyError },
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AnalysisKind {
    Certificate,
    Flippers,
    Components,
    Shield,
}

impl AnalysisKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "certificate" => Some(AnalysisKind::Certificate),
            "flippers" => Some(AnalysisKind::Flippers),
            "components" => Some(AnalysisKind::Components),
            "shield" => Some(AnalysisKind::Shield),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AnalysisKind::Certificate => "certificate",
            AnalysisKind::Flippers => "flippers",
            AnalysisKind::Components => "components",
            AnalysisKind::Shield => "shield",
        }
    }
}

/// Resolves a catalog key, or else reads a family file.
pub fn resolve_family(reference: &str) -> Result<UpdateFamily, ExperimentError> {
    if let Some(f) = catalog::family(reference) {
        return Ok(f);
    }
    let path = Path::new(reference);
    let text = fs::read_to_string(path).map_err(|source| ExperimentError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    UpdateFamily::parse(&text).map_err(|source| ExperimentError::Family {
        name: reference.to_string(),
        source,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentSpec {
    pub name: String,
    /// Catalog key or family file path.
    pub family_ref: String,
    pub config: SimulationConfig,
    pub replicas: usize,
    pub analyses: Vec<AnalysisKind>,
    pub buckets: usize,
    pub tail_fraction: f64,
    pub block_size: i32,
    pub write_traces: bool,
}

impl ExperimentSpec {
    pub fn new(name: &str, family_ref: &str) -> Result<Self, ExperimentError> {
        let family = resolve_family(family_ref)?;
        let mut config = SimulationConfig::new(family, DynamicsKind::Voter, 32, 32, Boundary::Sealed(Spin::Plus));
        config.horizon = 100.0;
        Ok(ExperimentSpec {
            name: name.to_string(),
            family_ref: family_ref.to_string(),
            config,
            replicas: 4,
            analyses: vec![AnalysisKind::Certificate, AnalysisKind::Flippers, AnalysisKind::Components],
            buckets: 10,
            tail_fraction: 0.2,
            block_size: 8,
            write_traces: true,
        })
    }

    /// Parses `key = value` lines; `#` starts a comment. `family` must come before anything else
    /// that depends on it, and defaults to `fig1`.
    pub fn parse(text: &str) -> Result<Self, ExperimentError> {
        let mut pairs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| ExperimentError::Spec {
                line: i + 1,
                msg: "expected key = value".into(),
            })?;
            pairs.push((i + 1, k.trim().replace('-', "_"), v.trim().to_string()));
        }
        let family = pairs
            .iter()
            .find(|(_, k, _)| k == "family")
            .map(|(_, _, v)| v.as_str())
            .unwrap_or("fig1");
        let name = pairs
            .iter()
            .find(|(_, k, _)| k == "name")
            .map(|(_, _, v)| v.as_str())
            .unwrap_or("experiment");
        let mut spec = ExperimentSpec::new(name, family)?;
        for (line, k, v) in &pairs {
            spec.set(k, v).map_err(|e| match e {
                ExperimentError::Invalid(msg) => ExperimentError::Spec { line: *line, msg },
                other => other,
            })?;
        }
        spec.validate()?;
        Ok(spec)
    }

    /// Sets one field from its textual form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ExperimentError> {
        let bad = |what: &str| ExperimentError::Invalid(format!("{key}: {what} {value:?}"));
        let num = |v: &str| v.parse::<f64>().map_err(|_| bad("expected a number, got"));
        let int = |v: &str| v.parse::<i64>().map_err(|_| bad("expected an integer, got"));
        let c = &mut self.config;
        match key.replace('-', "_").as_str() {
            "name" => self.name = value.to_string(),
            "family" => {
                c.family = resolve_family(value)?;
                self.family_ref = value.to_string();
            }
            "kind" => c.kind = DynamicsKind::parse(value).ok_or_else(|| bad("unknown kind"))?,
            "width" => c.width = int(value)? as i32,
            "height" => c.height = int(value)? as i32,
            "boundary" => c.boundary = Boundary::parse(value).ok_or_else(|| bad("unknown boundary"))?,
            "seal" => c.seal = Some(int(value)? as i32),
            "rho_plus" => c.rho_plus = num(value)?,
            "rho_minus" => c.rho_minus = num(value)?,
            "mu" => c.mu = Mu::parse(value).ok_or_else(|| bad("unknown initial law"))?,
            "horizon" => c.horizon = num(value)?,
            "seed" => c.seed = value.parse().map_err(|_| bad("expected an unsigned integer, got"))?,
            "replicas" => self.replicas = int(value)? as usize,
            "analyses" => {
                self.analyses = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| AnalysisKind::parse(s).ok_or_else(|| bad("unknown analysis")))
                    .collect::<Result<_, _>>()?;
                self.analyses.sort();
                self.analyses.dedup();
            }
            "buckets" => self.buckets = int(value)? as usize,
            "tail_fraction" => self.tail_fraction = num(value)?,
            "block_size" => self.block_size = int(value)? as i32,
            "traces" => self.write_traces = value.parse().map_err(|_| bad("expected true or false, got"))?,
            _ => return Err(ExperimentError::Invalid(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        self.config.validate()?;
        let invalid = |m: &str| Err(ExperimentError::Invalid(m.to_string()));
        if self.replicas == 0 {
            return invalid("replicas must be positive");
        }
        if self.buckets == 0 {
            return invalid("buckets must be positive");
        }
        if !(self.tail_fraction > 0.0 && self.tail_fraction < 1.0) {
            return invalid("tail_fraction must lie in (0, 1)");
        }
        if self.block_size < 1 {
            return invalid("block_size must be positive");
        }
        Ok(())
    }

    /// The spec as `key = value` lines, readable by [`ExperimentSpec::parse`].
    pub fn to_text(&self) -> String {
        let c = &self.config;
        let mut out = String::new();
        let mut kv = |k: &str, v: String| writeln!(out, "{k} = {v}").unwrap();
        kv("name", self.name.clone());
        kv("family", self.family_ref.clone());
        kv("kind", c.kind.name().into());
        kv("width", c.width.to_string());
        kv("height", c.height.to_string());
        kv("boundary", c.boundary.name().into());
        if let Some(s) = c.seal {
            kv("seal", s.to_string());
        }
        kv("rho_plus", c.rho_plus.to_string());
        kv("rho_minus", c.rho_minus.to_string());
        kv("mu", c.mu.to_string());
        kv("horizon", c.horizon.to_string());
        kv("seed", c.seed.to_string());
        kv("replicas", self.replicas.to_string());
        kv("analyses", self.analyses.iter().map(|a| a.name()).collect::<Vec<_>>().join(","));
        kv("buckets", self.buckets.to_string());
        kv("tail_fraction", self.tail_fraction.to_string());
        kv("block_size", self.block_size.to_string());
        kv("traces", self.write_traces.to_string());
        out
    }

    pub fn replica_config(&self, i: usize) -> SimulationConfig {
        let mut c = self.config.clone();
        c.seed = replica_seed(self.config.seed, i as u64);
        c
    }

    fn wants(&self, a: AnalysisKind) -> bool {
        self.analyses.contains(&a)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReplicaSummary {
    pub index: usize,
    pub seed: u64,
    pub flips: usize,
    pub rings: u64,
    pub fixated: Option<bool>,
    pub certified_fraction: Option<f64>,
    pub tail_flip_sites: Option<usize>,
    pub forced_sites: Option<usize>,
    pub forced_tail_sites: Option<usize>,
    pub component_sizes: Option<Vec<usize>>,
    pub shield_violations: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentSummary {
    pub version: &'static str,
    pub name: String,
    pub family: String,
    pub spec: ExperimentSpec,
    /// Fraction of replicas whose certificate covers the whole interior at the horizon.
    pub all_fixated_fraction: Option<f64>,
    pub mean_tail_flip_sites: Option<f64>,
    pub replicas: Vec<ReplicaSummary>,
}

pub struct ReplicaOutcome {
    pub summary: ReplicaSummary,
    pub trace: FlipTrace,
    pub report: Option<WellFixedReport>,
    pub flippers: Option<FlipperStats>,
}

pub fn run_replica(spec: &ExperimentSpec, index: usize) -> Result<ReplicaOutcome, ExperimentError> {
    let cfg = spec.replica_config(index);
    let trace = run(&cfg)?;
    let report = spec
        .wants(AnalysisKind::Certificate)
        .then(|| well_fixed_certificate(&trace.final_config, &trace.family, trace.horizon));
    let flippers = if spec.wants(AnalysisKind::Flippers) {
        Some(flipper_stats(&trace, spec.buckets, spec.tail_fraction)?)
    } else {
        None
    };
    let component_sizes = if spec.wants(AnalysisKind::Components) {
        let r = match &report {
            Some(r) => r.clone(),
            None => well_fixed_certificate(&trace.final_config, &trace.family, trace.horizon),
        };
        Some(non_fixed_components(&r, &BlockGrid::for_config(spec.block_size, &trace.final_config)?))
    } else {
        None
    };
    let summary = ReplicaSummary {
        index,
        seed: cfg.seed,
        flips: trace.records.len(),
        rings: trace.rings,
        fixated: report.as_ref().map(WellFixedReport::is_complete),
        certified_fraction: report.as_ref().map(WellFixedReport::certified_fraction),
        tail_flip_sites: flippers.as_ref().map(FlipperStats::tail_flip_sites),
        forced_sites: flippers.as_ref().map(|s| s.forced_sites.len()),
        forced_tail_sites: flippers.as_ref().map(FlipperStats::forced_tail_sites),
        component_sizes,
        shield_violations: spec.wants(AnalysisKind::Shield).then(|| shield_violations(&trace).len()),
    };
    Ok(ReplicaOutcome {
        summary,
        trace,
        report,
        flippers,
    })
}

/// Output files as `(name, contents)` pairs plus the summary.
pub struct ExperimentOutput {
    pub summary: ExperimentSummary,
    pub files: Vec<(String, String)>,
}

impl ExperimentOutput {
    pub fn file(&self, name: &str) -> Option<&str> {
        self.files.iter().find(|(n, _)| n == name).map(|(_, c)| c.as_str())
    }

    pub fn write_to(&self, dir: &Path) -> Result<(), ExperimentError> {
        fs::create_dir_all(dir).map_err(|source| ExperimentError::Write {
            path: dir.to_path_buf(),
            source,
        })?;
        for (name, contents) in &self.files {
            let path = dir.join(name);
            fs::write(&path, contents).map_err(|source| ExperimentError::Write { path, source })?;
        }
        Ok(())
    }
}

fn provenance(spec: &ExperimentSpec, seed: u64) -> String {
    let mut out = String::new();
    writeln!(out, "# version {VERSION}").unwrap();
    writeln!(out, "# experiment {}", spec.name).unwrap();
    writeln!(out, "# replica_seed {seed}").unwrap();
    for line in spec.to_text().lines() {
        writeln!(out, "# config {line}").unwrap();
    }
    out
}

pub fn certificate_csv(report: &WellFixedReport) -> String {
    let mut rows: Vec<_> = report
        .certified_plus
        .iter()
        .map(|s| (s, "certified"))
        .chain(report.uncertified.iter().map(|s| (s, "uncertified")))
        .collect();
    rows.sort();
    let mut out = String::from("x,y,status\n");
    for (s, status) in rows {
        writeln!(out, "{},{},{status}", s.x, s.y).unwrap();
    }
    out
}

pub fn flipper_csv(stats: &FlipperStats) -> String {
    let mut out = String::from("x,y,bucket,count\n");
    for (s, counts) in &stats.counts {
        for (b, &n) in counts.iter().enumerate() {
            if n > 0 {
                writeln!(out, "{},{},{b},{n}", s.x, s.y).unwrap();
            }
        }
    }
    out
}

fn mean(xs: impl Iterator<Item = f64>) -> Option<f64> {
    let v: Vec<f64> = xs.collect();
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

/// Runs every replica (in parallel on `jobs` threads, or rayon's default) and assembles the outputs.
pub fn run_experiment(spec: &ExperimentSpec, jobs: Option<usize>) -> Result<ExperimentOutput, ExperimentError> {
    spec.validate()?;
    let work = || -> Result<Vec<ReplicaOutcome>, ExperimentError> {
        (0..spec.replicas).into_par_iter().map(|i| run_replica(spec, i)).collect()
    };
    let outcomes = match jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| ExperimentError::Invalid(e.to_string()))?
            .install(work)?,
        None => work()?,
    };

    let mut files = Vec::new();
    for o in &outcomes {
        let head = provenance(spec, o.summary.seed);
        let i = o.summary.index;
        if spec.write_traces {
            files.push((format!("replica_{i:03}_trace.csv"), head.clone() + &write_trace_csv(&o.trace)));
        }
        files.push((format!("replica_{i:03}_final.txt"), head.clone() + &write_grid(&o.trace.final_config)));
        if let Some(r) = &o.report {
            files.push((format!("replica_{i:03}_certificate.csv"), head.clone() + &certificate_csv(r)));
        }
        if let Some(s) = &o.flippers {
            files.push((format!("replica_{i:03}_flippers.csv"), head.clone() + &flipper_csv(s)));
        }
    }

    let replicas: Vec<ReplicaSummary> = outcomes.into_iter().map(|o| o.summary).collect();
    let fixated: Vec<bool> = replicas.iter().filter_map(|r| r.fixated).collect();
    let summary = ExperimentSummary {
        version: VERSION,
        name: spec.name.clone(),
        family: family_line(&spec.config.family),
        spec: spec.clone(),
        all_fixated_fraction: (!fixated.is_empty())
            .then(|| fixated.iter().filter(|&&b| b).count() as f64 / fixated.len() as f64),
        mean_tail_flip_sites: mean(replicas.iter().filter_map(|r| r.tail_flip_sites.map(|n| n as f64))),
        replicas,
    };
    let json = serde_json::to_string_pretty(&summary).expect("summary serialises") + "\n";
    files.insert(0, ("summary.json".to_string(), json));
    Ok(ExperimentOutput { summary, files })
}

/// Per-replica tail-flip counts keyed by replica index, for quick inspection.
pub fn tail_flip_table(summary: &ExperimentSummary) -> BTreeMap<usize, usize> {
    summary
        .replicas
        .iter()
        .filter_map(|r| r.tail_flip_sites.map(|n| (r.index, n)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPEC: &str = "name = small\nfamily = voter1d\nwidth = 40\nrho_plus = 0.1\nrho_minus = 0.1\n\
                        horizon = 20\nseed = 9\nreplicas = 3\n";

    #[test]
    fn parse_round_trip() {
        let spec = ExperimentSpec::parse(SPEC).unwrap();
        assert_eq!(spec.config.width, 40);
        assert_eq!(spec.replicas, 3);
        assert_eq!(ExperimentSpec::parse(&spec.to_text()).unwrap(), spec);
    }

    #[test]
    fn bad_lines_are_reported() {
        assert!(matches!(
            ExperimentSpec::parse("family = voter1d\nwidth 4\n"),
            Err(ExperimentError::Spec { line: 2, .. })
        ));
        assert!(matches!(
            ExperimentSpec::parse("family = voter1d\ncolour = red\n"),
            Err(ExperimentError::Spec { line: 2, .. })
        ));
        assert!(ExperimentSpec::parse("family = voter1d\nreplicas = 0\n").is_err());
    }

    #[test]
    fn fixation_summary_field() {
        let mut spec = ExperimentSpec::parse(SPEC).unwrap();
        spec.set("rho_minus", "0").unwrap();
        spec.set("mu", "all-plus").unwrap();
        let out = run_experiment(&spec, Some(2)).unwrap();
        assert_eq!(out.summary.all_fixated_fraction, Some(1.0));
        assert!(out.file("summary.json").unwrap().contains("all_fixated_fraction"));
    }

    #[test]
    fn outputs_are_reproducible() {
        let spec = ExperimentSpec::parse(SPEC).unwrap();
        let a = run_experiment(&spec, Some(1)).unwrap();
        let b = run_experiment(&spec, Some(3)).unwrap();
        assert_eq!(a.files, b.files);
        assert_eq!(tail_flip_table(&a.summary).len(), 3);
        let trace = a.file("replica_000_trace.csv").unwrap();
        assert!(trace.starts_with("# version"));
        assert!(trace.contains("# config family = voter1d"));
    }
}

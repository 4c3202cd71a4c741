//! Running a configured command, writing its artifacts and the manifest.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use bosonic_metrology::report::{self, Audit, Command, Format, Report, RunConfig};
use serde::{Deserialize, Serialize};

pub const MANIFEST: &str = "manifest.json";

/// Everything needed to replay a run, plus what it produced.
#[derive(Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub library_version: String,
    pub config: RunConfig,
    pub seed: u64,
    pub started: String,
    pub wall_time_s: f64,
    pub outputs: Vec<String>,
    pub audit: Audit,
    pub infeasible: Option<String>,
}

pub fn build(cfg: &RunConfig) -> bosonic_metrology::Result<Report> {
    match cfg.command {
        Command::Table => report::table_summary(cfg),
        Command::FigureFrequency => report::figure_frequency(cfg),
        Command::FigureTemperature => report::figure_temperature(cfg),
        Command::Bound => report::bound_report(cfg),
        Command::Strategy => report::strategy_series(cfg),
    }
}

pub struct Run {
    pub report: Report,
    pub manifest: Manifest,
    pub manifest_path: PathBuf,
}

/// Computes the report and writes `<outdir>/<command>-<timestamp>.<ext>`
/// for each configured format, then `<outdir>/manifest.json`.
pub fn execute(cfg: &RunConfig) -> Result<std::result::Result<Run, bosonic_metrology::Error>> {
    let now = chrono::Utc::now();
    let clock = Instant::now();
    let report = match build(cfg) {
        Ok(r) => r,
        Err(e) => return Ok(Err(e)),
    };
    let wall = clock.elapsed().as_secs_f64();
    let dir = Path::new(&cfg.outdir);
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let stem = unique_stem(dir, &format!("{}-{}", cfg.command.stem(), now.format("%Y%m%dT%H%M%S%.3fZ")), &cfg.formats);
    let mut outputs = Vec::new();
    for f in &cfg.formats {
        let body = match f {
            Format::Csv => report.data.to_csv(),
            Format::Json => report.data.to_json(),
            Format::Svg => crate::svg::render(&report.data),
        };
        let name = format!("{stem}.{}", f.extension());
        let path = dir.join(&name);
        fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
        outputs.push(name);
    }
    let manifest = Manifest {
        tool: "bometro".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        library_version: bosonic_metrology::VERSION.into(),
        config: cfg.clone(),
        seed: cfg.seed,
        started: now.to_rfc3339(),
        wall_time_s: wall,
        outputs,
        audit: report.audit.clone(),
        infeasible: report.infeasible.clone(),
    };
    let manifest_path = dir.join(MANIFEST);
    let text = serde_json::to_string_pretty(&manifest)? + "\n";
    fs::write(&manifest_path, text).with_context(|| format!("writing {}", manifest_path.display()))?;
    Ok(Ok(Run {
        report,
        manifest,
        manifest_path,
    }))
}

fn unique_stem(dir: &Path, base: &str, formats: &[Format]) -> String {
    let taken = |stem: &str| formats.iter().any(|f| dir.join(format!("{stem}.{}", f.extension())).exists());
    if !taken(base) {
        return base.to_string();
    }
    (1..)
        .map(|k| format!("{base}-{k}"))
        .find(|s| !taken(s))
        .expect("some suffix is free")
}

pub fn read_manifest(path: &Path) -> Result<Manifest> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

use std::path::PathBuf;
use std::process::ExitCode;

use bometro_cli::output::{self, read_manifest, MANIFEST};
use bometro_cli::selftest;
use bosonic_metrology::report::{strategies, Command, RunConfig};
use bosonic_metrology::{Error, ParameterTag};
use clap::{Args, Parser, Subcommand, ValueEnum};

const EXIT_CONFIG: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_NUMERICAL: u8 = 4;

/// Time- and energy-constrained precision bounds for a lossy thermal bosonic
/// mode, with the strategies that reach them.
#[derive(Parser, Debug)]
#[command(name = "bometro", version)]
struct Cli {
    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true, env = "BOMETRO_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Classical optimum, quantum bound and their ratio for all five parameters.
    Table(Common),
    /// Figure data: `fre` (frequency) or `temp` (temperature).
    Figure {
        which: Figure,
        #[command(flatten)]
        common: Common,
    },
    /// Rate bound for one parameter.
    Bound(Common),
    /// One named strategy over time, next to its bounds.
    Strategy(Common),
    /// Runs the quick invariant suite.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Re-runs the configuration recorded in a manifest.
    Replay {
        /// Manifest file, or a directory containing manifest.json.
        manifest: PathBuf,
        /// Write into this directory instead of the recorded one.
        #[arg(long)]
        outdir: Option<String>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Figure {
    Fre,
    Temp,
}

#[derive(Args, Debug)]
struct Common {
    /// Flat `key = value` file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Extra `key=value` overrides, applied last.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
    #[arg(long)]
    target: Option<String>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    n_env: Option<f64>,
    /// Mean photon number N.
    #[arg(long)]
    photons: Option<f64>,
    #[arg(long)]
    t_min: Option<f64>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    /// `log` or `linear`.
    #[arg(long)]
    spacing: Option<String>,
    /// Single evaluation time, replacing the grid.
    #[arg(long)]
    time: Option<f64>,
    #[arg(long)]
    cutoff: Option<usize>,
    #[arg(long, env = "BOMETRO_OUT")]
    outdir: Option<String>,
    /// Comma-separated subset of csv,json,svg.
    #[arg(long)]
    formats: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Strategy name (see `strategy --target <t> --name list`).
    #[arg(long)]
    name: Option<String>,
    /// Squeezing parameter r of squeezed probes.
    #[arg(long)]
    squeeze: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// Skip printing the dataset.
    #[arg(long)]
    quiet: bool,
}

impl Common {
    fn config(&self, command: Command) -> Result<RunConfig, Error> {
        let mut cfg = RunConfig::defaults(command);
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            cfg.apply_text(&text)?;
        }
        let flags: [(&str, Option<String>); 16] = [
            ("target", self.target.clone()),
            ("gamma", self.gamma.map(|v| v.to_string())),
            ("n_env", self.n_env.map(|v| v.to_string())),
            ("photons", self.photons.map(|v| v.to_string())),
            ("t_min", self.t_min.map(|v| v.to_string())),
            ("t_max", self.t_max.map(|v| v.to_string())),
            ("points", self.points.map(|v| v.to_string())),
            ("spacing", self.spacing.clone()),
            ("time", self.time.map(|v| v.to_string())),
            ("cutoff", self.cutoff.map(|v| v.to_string())),
            ("outdir", self.outdir.clone()),
            ("formats", self.formats.clone()),
            ("seed", self.seed.map(|v| v.to_string())),
            ("strategy", self.name.clone()),
            ("squeeze", self.squeeze.map(|v| v.to_string())),
            ("epsilon", self.epsilon.map(|v| v.to_string())),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                cfg.set(k, &v)?;
            }
        }
        for s in &self.sets {
            let (k, v) = s
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("--set expects KEY=VALUE, got `{s}`")))?;
            cfg.set(k.trim(), v.trim())?;
        }
        if command == Command::FigureFrequency && cfg.target != ParameterTag::Frequency {
            return Err(Error::Config("figure fre is for the frequency target".into()));
        }
        if command == Command::FigureTemperature && cfg.target != ParameterTag::Temperature {
            return Err(Error::Config("figure temp is for the temperature target".into()));
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn exit_code(e: &Error) -> u8 {
    if e.is_physics_infeasible() {
        EXIT_INFEASIBLE
    } else if e.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_CONFIG
    }
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("bometro: {e}");
    ExitCode::from(exit_code(e))
}

fn run_config(cfg: &RunConfig, quiet: bool) -> ExitCode {
    let run = match output::execute(cfg) {
        Ok(Ok(run)) => run,
        Ok(Err(e)) => return fail(&e),
        Err(io) => {
            eprintln!("bometro: {io:#}");
            return ExitCode::FAILURE;
        }
    };
    if !quiet {
        print!("{}", run.report.data.to_text());
    }
    for f in &run.manifest.outputs {
        println!("wrote {}", PathBuf::from(&cfg.outdir).join(f).display());
    }
    println!("wrote {}", run.manifest_path.display());
    let audit = &run.report.audit;
    if audit.checked > 0 {
        println!(
            "audit: {} strategy cells checked, {} above their bounds",
            audit.checked,
            audit.violations.len()
        );
    }
    if let Some(why) = &run.report.infeasible {
        eprintln!("bometro: unbounded: {why}");
        return ExitCode::from(EXIT_INFEASIBLE);
    }
    if !audit.passed() {
        for v in &audit.violations {
            eprintln!(
                "bometro: row {}: {} = {:e} exceeds {} = {:e}",
                v.row, v.strategy, v.value, v.bound, v.limit
            );
        }
        return ExitCode::from(EXIT_NUMERICAL);
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("bometro: cannot set thread count: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    }
    let (command, common) = match &cli.command {
        Sub::Table(c) => (Command::Table, c),
        Sub::Figure { which: Figure::Fre, common } => (Command::FigureFrequency, common),
        Sub::Figure { which: Figure::Temp, common } => (Command::FigureTemperature, common),
        Sub::Bound(c) => (Command::Bound, c),
        Sub::Strategy(c) => {
            if c.name.as_deref() == Some("list") {
                for t in ParameterTag::ALL {
                    println!("{t}: {}", strategies(t).join(", "));
                }
                return ExitCode::SUCCESS;
            }
            (Command::Strategy, c)
        }
        Sub::Selftest { seed } => {
            let checks = selftest::run(*seed);
            let mut ok = true;
            for c in &checks {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
                ok &= c.passed;
            }
            return if ok { ExitCode::SUCCESS } else { ExitCode::from(EXIT_NUMERICAL) };
        }
        Sub::Replay { manifest, outdir } => {
            let path = if manifest.is_dir() { manifest.join(MANIFEST) } else { manifest.clone() };
            let m = match read_manifest(&path) {
                Ok(m) => m,
                Err(e) => {
                    eprintln!("bometro: {e:#}");
                    return ExitCode::from(EXIT_CONFIG);
                }
            };
            let mut cfg = m.config;
            if let Some(d) = outdir {
                cfg.outdir = d.clone();
            }
            if let Err(e) = cfg.validate() {
                return fail(&e);
            }
            return run_config(&cfg, true);
        }
    };
    match common.config(command) {
        Ok(cfg) => run_config(&cfg, common.quiet),
        Err(e) => fail(&e),
    }
}

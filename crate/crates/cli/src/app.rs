//! Command-line front end.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cp_nonreciprocal::{evolve_populations, AtomModel, EvalOptions, PopulationState, RateTable};
use thiserror::Error;

use crate::config::{parse_config, parse_theta, ConfigError, HandednessSpec, MediumSpec, QuantityKind};
use crate::figures::{render, Figure};
use crate::manifest::RunManifest;
use crate::scan::{evaluate_point, format_value, pool, run_scan, transition, ScanError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
    #[error("I/O error on {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Scan(#[from] ScanError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Scan(ScanError::Numerical { .. }) => EXIT_NUMERICAL,
            _ => EXIT_CONFIG,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "cpshift",
    version,
    about = "Decay rates and Casimir-Polder shifts of a circular dipole above planar media"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a height grid described by a config file.
    Scan {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; defaults to the config's `output` key.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the traces of a standard figure to `<out>/<name>/`.
    Figure {
        /// gamma_mirrors, omega_mirrors, loglog_nres, gamma_ti or omega_ti.
        name: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 400)]
        points: usize,
    },
    /// Decay rate at one height.
    Rates(PointArgs),
    /// Resonant and nonresonant shifts at one height.
    Shift(PointArgs),
    /// Excited-state population of a two-level atom at one height.
    Decay {
        #[command(flatten)]
        point: PointArgs,
        /// Final time in units of the inverse free-space rate.
        #[arg(long, default_value_t = 5.0)]
        t_max: f64,
        #[arg(long, default_value_t = 51)]
        steps: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum MediumKind {
    PerfectConductor,
    NonreciprocalMirror,
    Axion,
}

#[derive(Debug, Clone, Args)]
pub struct PointArgs {
    #[arg(long, value_enum)]
    pub medium: MediumKind,
    /// Height as `omega z / c`.
    #[arg(long, allow_negative_numbers = true)]
    pub zeta: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub sign: Option<i8>,
    #[arg(long, allow_negative_numbers = true)]
    pub epsilon: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    /// `pi`, `-1.0pi`, `0.3rad` or radians.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    #[arg(long, default_value = "plus")]
    pub handedness: String,
}

impl PointArgs {
    fn medium(&self) -> Result<MediumSpec, CliError> {
        let misplaced = |flag: &str| CliError::Usage(format!("--{flag} does not apply to {:?}", self.medium));
        let spec = match self.medium {
            MediumKind::PerfectConductor => {
                if self.sign.is_some() {
                    return Err(misplaced("sign"));
                }
                MediumSpec::PerfectConductor
            }
            MediumKind::NonreciprocalMirror => MediumSpec::NonreciprocalMirror {
                sign: match self.sign.unwrap_or(-1) {
                    1 => 1,
                    -1 => -1,
                    s => return Err(CliError::Usage(format!("--sign must be 1 or -1, got {s}"))),
                },
            },
            MediumKind::Axion => {
                if self.sign.is_some() {
                    return Err(misplaced("sign"));
                }
                let theta = match &self.theta {
                    Some(t) => parse_theta(t).map_err(CliError::Usage)?,
                    None => 0.0,
                };
                MediumSpec::Axion {
                    epsilon: self.epsilon.unwrap_or(1.0),
                    mu: self.mu.unwrap_or(1.0),
                    theta,
                }
            }
        };
        if self.medium != MediumKind::Axion {
            for (flag, given) in [
                ("epsilon", self.epsilon.is_some()),
                ("mu", self.mu.is_some()),
                ("theta", self.theta.is_some()),
            ] {
                if given {
                    return Err(misplaced(flag));
                }
            }
        }
        Ok(spec)
    }

    fn handedness(&self) -> Result<HandednessSpec, CliError> {
        match self.handedness.as_str() {
            "plus" | "+" => Ok(HandednessSpec::Plus),
            "minus" | "-" => Ok(HandednessSpec::Minus),
            other => Err(CliError::Usage(format!(
                "--handedness must be plus or minus, got `{other}`"
            ))),
        }
    }

    fn point(&self, quantities: &[QuantityKind]) -> Result<crate::scan::PointValues, CliError> {
        let medium = self.medium()?.build()?;
        if !(self.zeta.is_finite() && self.zeta > 0.0) {
            return Err(CliError::Usage(format!("--zeta must be > 0, got {}", self.zeta)));
        }
        let h = self.handedness()?.handedness();
        Ok(evaluate_point(
            &medium,
            h,
            self.zeta,
            quantities,
            &EvalOptions::default(),
        )?)
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Scan { config, out } => scan(&config, out),
        Command::Figure { name, out, points } => figure(&name, &out, points),
        Command::Rates(p) => {
            let v = p.point(&[QuantityKind::Gamma])?;
            let g = v.gamma.expect("requested");
            println!("zeta,gamma_ratio,gamma_reciprocal_ratio,gamma_nonreciprocal_ratio");
            println!(
                "{},{},{},{}",
                format_value(v.zeta),
                format_value(g.total()),
                format_value(g.reciprocal),
                format_value(g.nonreciprocal)
            );
            Ok(())
        }
        Command::Shift(p) => {
            let v = p.point(&[QuantityKind::ShiftRes, QuantityKind::ShiftNres])?;
            let (r, n) = (v.shift_res.expect("requested"), v.shift_nres.expect("requested"));
            println!("zeta,shift_res_ratio,shift_nres_ratio,shift_total_ratio");
            println!(
                "{},{},{},{}",
                format_value(v.zeta),
                format_value(r.total()),
                format_value(n.total()),
                format_value(r.total() + n.total())
            );
            Ok(())
        }
        Command::Decay { point, t_max, steps } => decay(&point, t_max, steps),
    }
}

fn decay(point: &PointArgs, t_max: f64, steps: usize) -> Result<(), CliError> {
    if !(t_max.is_finite() && t_max > 0.0) || steps < 2 {
        return Err(CliError::Usage("--t-max must be > 0 and --steps at least 2".into()));
    }
    let v = point.point(&[QuantityKind::Gamma])?;
    let rate = 1.0 + v.gamma.expect("requested").total();
    let numerical = |source| CliError::Scan(ScanError::Numerical { zeta: v.zeta, source });
    let h = point.handedness()?.handedness();
    let atom = AtomModel::new(vec![0.0, 1.0], [((1, 0), *transition(h).dipole())]).map_err(numerical)?;
    let rates = RateTable::new(2).with(1, 0, rate).map_err(numerical)?;
    let initial = PopulationState::excited(2, 1).map_err(numerical)?;
    let times: Vec<f64> = (0..steps).map(|i| t_max * i as f64 / (steps - 1) as f64).collect();
    let states = evolve_populations(&atom, &rates, &initial, &times).map_err(numerical)?;
    println!("t,excited,ground");
    for (t, s) in times.iter().zip(&states) {
        let p = s.populations();
        println!("{},{},{}", format_value(*t), format_value(p[1]), format_value(p[0]));
    }
    Ok(())
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(io_err(path))
}

fn create_dir(path: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(path).map_err(io_err(path))
}

/// Writes the manifest; a failure to do so only replaces `result` if that was Ok.
fn finish(
    manifest: &mut RunManifest,
    dir: &Path,
    start: Instant,
    result: Result<(), CliError>,
) -> Result<(), CliError> {
    manifest.wall_time_seconds = start.elapsed().as_secs_f64();
    if let Err(e) = &result {
        manifest.fail(e.to_string());
    }
    let written = create_dir(dir).and_then(|()| {
        let path = dir.join("manifest.json");
        manifest.write(&path).map_err(io_err(&path))
    });
    result.and(written)
}

fn scan(config_path: &Path, out: Option<PathBuf>) -> Result<(), CliError> {
    let start = Instant::now();
    let parsed = parse_config(config_path);
    let opts = parsed.as_ref().map(|c| c.eval_options()).unwrap_or_default();
    let mut manifest = RunManifest::new("scan", &opts);
    let dir = match (&out, &parsed) {
        (Some(d), _) => d.clone(),
        (None, Ok(cfg)) => match &cfg.output {
            Some(o) => PathBuf::from(o),
            None => {
                return Err(CliError::Usage(
                    "no output directory: pass --out or set `output`".into(),
                ))
            }
        },
        (None, Err(_)) => return parsed.map(|_| ()).map_err(CliError::from),
    };
    let result = (|| {
        let cfg = parsed?;
        manifest.config = serde_json::to_value(&cfg).expect("config serializes");
        let pool = pool()?;
        manifest.threads = pool.current_num_threads();
        let res = run_scan(&cfg, &pool, &opts)?;
        manifest.error_estimates = Some(res.errors);
        create_dir(&dir)?;
        let path = dir.join("scan.csv");
        write_file(&path, &res.csv)?;
        manifest.outputs.push("scan.csv".into());
        Ok(())
    })();
    finish(&mut manifest, &dir, start, result)
}

fn figure(name: &str, out: &Path, points: usize) -> Result<(), CliError> {
    let start = Instant::now();
    let opts = EvalOptions::default();
    let mut manifest = RunManifest::new(format!("figure {name}"), &opts);
    let fig = match name.parse::<Figure>() {
        Ok(f) => f,
        Err(e) => return finish(&mut manifest, out, start, Err(CliError::Usage(e.to_string()))),
    };
    let dir = out.join(fig.name());
    let result = (|| {
        let grid = fig.grid(points);
        manifest.config = serde_json::json!({ "figure": fig, "grid": grid });
        let pool = pool()?;
        manifest.threads = pool.current_num_threads();
        let output = render(fig, points, &pool, &opts)?;
        manifest.error_estimates = Some(output.errors);
        create_dir(&dir)?;
        for trace in &output.traces {
            let file = format!("{}.csv", trace.name);
            write_file(&dir.join(&file), &trace.csv)?;
            manifest.outputs.push(file);
        }
        Ok(())
    })();
    finish(&mut manifest, &dir, start, result)
}

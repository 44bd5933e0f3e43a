//! `csc`: generate instances, solve, verify, certify and render schedules.
//!
//! Exit status: 0 on success, 1 when `verify` finds an infeasible schedule,
//! 2 for bad input, 3 when an internal invariant breaks (for example a solver
//! emitting a schedule that fails verification).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use csc::error::Error;
use csc::harness::{certify, gen, solve, summarize, to_csv, ExperimentSpec};
use csc::instance::{load, save, Instance};
use csc::kernel::{approximation_bound, KernelConfig, Mode};
use csc::render::render_svg;
use csc::route::{Family, Schedule, Variant};
use csc::verify::verify;

#[derive(Parser)]
#[command(name = "csc", version, about = "Chargeable sweep coverage solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Rcsc,
    Csc2,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Rcsc => Family::Rcsc,
            FamilyArg::Csc2 => Family::Csc2,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum KernelArg {
    Exact,
    Heuristic,
}

#[derive(clap::Args)]
struct KernelFlags {
    #[arg(long, value_enum)]
    kernel: Option<KernelArg>,
    /// Largest candidate target set the exact kernels accept.
    #[arg(long)]
    exact_limit: Option<usize>,
    /// Seed for the heuristic kernels' restarts.
    #[arg(long)]
    seed: Option<u64>,
}

impl KernelFlags {
    fn apply(&self, mut cfg: KernelConfig) -> KernelConfig {
        match self.kernel {
            Some(KernelArg::Exact) => cfg.mode = Mode::Exact,
            Some(KernelArg::Heuristic) => cfg.mode = Mode::Heuristic,
            None => {}
        }
        if let Some(limit) = self.exact_limit {
            cfg.exact_node_limit = limit;
        }
        if let Some(seed) = self.seed {
            cfg.rng_seed = seed;
        }
        cfg
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write the instances of an experiment spec as JSON files.
    Gen {
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve one instance; writes `<stem>.schedule.json` and `<stem>.report.json`.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum)]
        variant: FamilyArg,
        #[command(flatten)]
        kernel: KernelFlags,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check a schedule against an instance and print the coverage report.
    Verify {
        instance: PathBuf,
        schedule: PathBuf,
        /// Also write the report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare greedy coverage with oracle optima; writes `certify.csv`.
    Certify {
        spec: PathBuf,
        #[command(flatten)]
        kernel: KernelFlags,
        #[arg(long)]
        out: PathBuf,
    },
    /// Draw a schedule as SVG.
    Render {
        instance: PathBuf,
        schedule: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the guaranteed approximation ratio.
    Bound {
        #[arg(long, value_enum)]
        variant: FamilyArg,
        /// `T_c / T_t` when charging is the longer period.
        #[arg(long, conflicts_with = "q_hat", required_unless_present = "q_hat")]
        q: Option<usize>,
        /// `T_t / T_c` when sweeping is the longer period.
        #[arg(long)]
        q_hat: Option<usize>,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
    },
}

enum Failure {
    Infeasible,
    Fatal(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Fatal(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Fatal(Error::Io(e))
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Contract(_) => 3,
        _ => 2,
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Error> {
    fs::read(path).map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))
}

fn read_instance(path: &Path) -> Result<Instance, Error> {
    load(&read(path)?)
}

fn read_spec(path: &Path) -> Result<ExperimentSpec, Error> {
    serde_json::from_slice(&read(path)?).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

/// Writes through a temporary file in the same directory, then renames.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Error> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn pretty<T: serde::Serialize>(value: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("serializable");
    bytes.push(b'\n');
    bytes
}

fn stem(path: &Path) -> String {
    path.file_stem().map_or_else(|| "instance".into(), |s| s.to_string_lossy().into_owned())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Gen { spec, out } => {
            let spec = read_spec(&spec)?;
            let instances = gen(&spec)?;
            for (id, inst) in &instances {
                write_atomic(&out.join(format!("{id}.json")), &save(inst))?;
            }
            eprintln!("wrote {} instances to {}", instances.len(), out.display());
        }
        Command::Solve { instance, variant, kernel, out } => {
            let inst = read_instance(&instance)?;
            let params = inst.params()?;
            let variant = Variant::new(variant.into(), params.regime);
            let cfg = kernel.apply(KernelConfig::default());
            cfg.check()?;
            if cfg.mode == Mode::Exact && inst.n_targets() > cfg.exact_node_limit {
                return Err(Error::Input(format!(
                    "exact kernels accept at most {} targets, instance has {}; raise --exact-limit or use --kernel heuristic",
                    cfg.exact_node_limit,
                    inst.n_targets()
                ))
                .into());
            }
            let (schedule, _) = solve(&inst, variant, &cfg)?;
            let report = verify(&inst, &schedule)?;
            if !report.feasible {
                return Err(Error::Contract(format!("solver output fails verification: {:?}", report.issues)).into());
            }
            let name = stem(&instance);
            write_atomic(&out.join(format!("{name}.schedule.json")), &schedule.to_json())?;
            write_atomic(&out.join(format!("{name}.report.json")), &pretty(&report))?;
            eprintln!("{variant}: covered {} of {} targets", schedule.covered.len(), inst.n_targets());
        }
        Command::Verify { instance, schedule, out } => {
            let inst = read_instance(&instance)?;
            let schedule = Schedule::from_json(&read(&schedule)?)?;
            let report = verify(&inst, &schedule)?;
            let bytes = pretty(&report);
            if let Some(out) = out {
                write_atomic(&out, &bytes)?;
            }
            std::io::stdout().write_all(&bytes)?;
            if !report.feasible {
                return Err(Failure::Infeasible);
            }
        }
        Command::Certify { spec, kernel, out } => {
            let mut spec = read_spec(&spec)?;
            spec.kernel = kernel.apply(spec.kernel);
            let rows = certify(&spec)?;
            write_atomic(&out.join("certify.csv"), &to_csv(&rows)?)?;
            let s = summarize(&rows);
            let fmt = |v: Option<f64>| v.map_or_else(|| "-".into(), |x| format!("{x:.6}"));
            eprintln!(
                "{} rows: {} pass, {} fail, {} skipped; ratio min {} mean {}",
                s.rows,
                s.passed,
                s.failed,
                s.skipped,
                fmt(s.min_ratio),
                fmt(s.mean_ratio)
            );
        }
        Command::Render { instance, schedule, out } => {
            let inst = read_instance(&instance)?;
            let schedule = Schedule::from_json(&read(&schedule)?)?;
            write_atomic(&out, render_svg(&inst, &schedule)?.as_bytes())?;
        }
        Command::Bound { variant, q, q_hat, alpha, beta, gamma } => {
            let (regime, multiple) = match (q, q_hat) {
                (Some(q), _) => (csc::instance::Regime::ChargeGeSweep { q }, q),
                (None, Some(q_hat)) => (csc::instance::Regime::SweepGtCharge { q_hat }, q_hat),
                (None, None) => unreachable!("clap requires one of --q and --q-hat"),
            };
            let variant = Variant::new(variant.into(), regime);
            println!("{:.6}", approximation_bound(variant, multiple, alpha, beta, gamma)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Infeasible) => ExitCode::from(1),
        Err(Failure::Fatal(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

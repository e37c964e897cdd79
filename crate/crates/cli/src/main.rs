use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use cliffdyn::clifford::{resolve_hermitian, GeneratorSpace, HermitianMatrix, HermitianMatrixJson};
use cliffdyn::linalg::{random_unitary, re, CMat};
use cliffdyn::matrixmech::MatrixConfig;
use cliffdyn::particle::ParticleConfig;
use cliffdyn::string::StringConfig;
use cliffdyn::tolerances::Tolerances;
use cliffdyn::verify::{verify_all, DEFAULT_SEED};
use cliffdyn::Error;

#[derive(Parser)]
#[command(name = "cliffdyn", version, about = "Clifford-space canonical dynamics: resolutions, trajectories, strings and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// JSON object overriding any subset of the default tolerances.
    #[arg(long)]
    tolerances: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Resolve a Hermitian matrix into Clifford vectors.
    Resolve {
        #[arg(long, required_unless_present = "random", conflicts_with = "random")]
        input: Option<PathBuf>,
        /// Resolve a seeded random n×n matrix instead of reading one.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Integrate a free particle and report conserved quantities.
    Particle {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Evolve an N-particle matrix system or a truncated oscillator.
    Matrix {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Tabulate string fields; with --residuals also check the field equations.
    String {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        residuals: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Run every acceptance criterion.
    VerifyAll {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Print the report as JSON instead of a table.
        #[arg(long)]
        json: bool,
        #[arg(long)]
        tolerances: Option<PathBuf>,
    },
}

/// Exit status plus the message printed on stderr.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    fn numerical(message: impl Into<String>) -> Self {
        Self { code: 1, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::TurningPoint { .. }
            | Error::NotSpacelike(_)
            | Error::Unsupported(_)
            | Error::RankDeficient { .. }
            | Error::InsufficientSpace { .. } => 3,
            Error::Residual { .. } | Error::NonFinite { .. } => 1,
            _ => 2,
        };
        Self { code, message: e.to_string() }
    }
}

type Outcome = Result<(), Failure>;

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Outcome {
    fs::write(path, contents).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Outcome {
    write(path, &(serde_json::to_string_pretty(value).expect("reports serialize") + "\n"))
}

fn prepare(common: &Common) -> Result<Tolerances, Failure> {
    fs::create_dir_all(&common.out).map_err(|e| Failure::input(format!("{}: {e}", common.out.display())))?;
    load_tolerances(common.tolerances.as_deref())
}

fn load_tolerances(path: Option<&Path>) -> Result<Tolerances, Failure> {
    path.map_or(Ok(Tolerances::default()), read_json)
}

fn check(what: &str, value: f64, limit: f64, failures: &mut Vec<String>) {
    if !(value <= limit) {
        failures.push(format!("{what}: {value:e} > {limit:e}"));
    }
}

fn finish(failures: Vec<String>) -> Outcome {
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::numerical(failures.join("\n")))
    }
}

fn random_hermitian(n: usize, seed: u64) -> HermitianMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = random_unitary(&mut rng, n);
    let d = CMat::from_fn(n, n, |i, j| if i == j { re(rng.gen_range(-3.0..3.0)) } else { re(0.0) });
    HermitianMatrix::symmetrized(&(&u * d * u.adjoint()))
}

fn cmd_resolve(input: Option<&Path>, random: Option<usize>, seed: u64, common: &Common) -> Outcome {
    let tol = prepare(common)?;
    let h = match (input, random) {
        (Some(path), _) => read_json::<HermitianMatrixJson>(path)?.parse()?,
        (None, Some(n)) if n > 0 => random_hermitian(n, seed),
        _ => return Err(Failure::input("--random needs a positive size")),
    };
    let n = h.n();
    let r = resolve_hermitian(&h, &GeneratorSpace::allocate(2 * n, 2 * n)?)?;
    write_json(&common.out.join("resolution.json"), &r.to_json())?;
    println!("n = {n}  residual = {:e}  isotropy = {:e}", r.residual(), r.isotropy_residual());
    let mut failures = Vec::new();
    check("Gram residual", r.residual(), tol.resolve, &mut failures);
    check("isotropy", r.isotropy_residual(), tol.isotropy, &mut failures);
    finish(failures)
}

fn cmd_particle(config: &Path, common: &Common) -> Outcome {
    let tol = prepare(common)?;
    let cfg: ParticleConfig = read_json(config)?;
    let (traj, summary) = cfg.run()?;
    // proper time, and with it the space-time reading, ends at μ = 0
    traj.proper_times()?;
    traj.write_csv_file(&common.out.join("trajectory.csv"))?;
    write_json(&common.out.join("particle_report.json"), &summary)?;
    println!("{}", serde_json::to_string_pretty(&summary).expect("summary serializes"));
    let mut failures = Vec::new();
    if let Some(line) = summary.max_straight_line_error {
        check("straight line", line, tol.particle, &mut failures);
    }
    check("constraint drift", summary.max_constraint_drift, tol.particle, &mut failures);
    check("mu(tau)", summary.max_mu_error, tol.particle, &mut failures);
    finish(failures)
}

fn cmd_matrix(config: &Path, common: &Common) -> Outcome {
    let tol = prepare(common)?;
    let cfg: MatrixConfig = read_json(config)?;
    let (report, csv) = cfg.run()?;
    write(&common.out.join("matrix.csv"), &csv)?;
    write_json(&common.out.join("matrix_report.json"), &report)?;
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    let mut failures = Vec::new();
    if let Some(v) = report.max_straight_line_error {
        check("straight line", v, tol.particle, &mut failures);
    }
    if let Some(v) = report.max_constraint_residual {
        check("constraint", v, tol.constraint_invariance, &mut failures);
    }
    if let Some(v) = report.norm_drift {
        check("state norm", v, tol.picture, &mut failures);
    }
    finish(failures)
}

fn cmd_string(config: &Path, residuals: bool, common: &Common) -> Outcome {
    let tol = prepare(common)?;
    let cfg: StringConfig = read_json(config)?;
    let state = cfg.build()?;
    write(&common.out.join("fields.csv"), &cfg.field_csv(&state)?)?;
    if !residuals {
        return Ok(());
    }
    let report = cfg.report(&state)?;
    write_json(&common.out.join("string_report.json"), &report)?;
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    let mut failures = Vec::new();
    // without vibrations the stencils are exact and the order is rounding noise
    if !cfg.spec.modes.is_empty() {
        check("|wave order - 2|", (report.wave_order - 2.0).abs(), tol.order, &mut failures);
    }
    check("wave residual", report.wave_residual, tol.field_residual, &mut failures);
    check("polymomentum residual", report.polymomentum_residual, tol.field_residual, &mut failures);
    check("polymomentum divergence", report.polymomentum_divergence, tol.field_residual, &mut failures);
    check("dilaton residual", report.dilaton_residual, tol.field_residual, &mut failures);
    check("trace residual", report.trace_residual, tol.trace, &mut failures);
    if cfg.spec.modes.is_empty() {
        check("total momentum vs pi^2 p", report.total_momentum_deviation, tol.total_momentum, &mut failures);
    }
    finish(failures)
}

fn cmd_verify_all(seed: u64, json: bool, tolerances: Option<&Path>) -> Outcome {
    let tol = load_tolerances(tolerances)?;
    let report = verify_all(seed, &tol);
    if json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        println!("seed {seed}");
        for r in &report.criteria {
            println!("{:>2}  {}  {:<48} {:>7.2} s", r.id, if r.passed() { "PASS" } else { "FAIL" }, r.title, r.seconds);
            if let Some(e) = &r.error {
                println!("        error: {e}");
            }
            for c in r.checks.iter().filter(|c| !c.passed) {
                println!("        {}: {:e} > {:e}", c.name, c.value, c.limit);
            }
        }
    }
    let failed = report.failures();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::numerical(format!("failed criteria: {failed:?}")))
    }
}

fn threads_from_env() -> Option<usize> {
    std::env::var("CLIFFDYN_THREADS").ok()?.trim().parse().ok()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    cliffdyn::verify::init_threads(threads_from_env());
    let outcome = match &cli.command {
        Command::Resolve { input, random, seed, common } => cmd_resolve(input.as_deref(), *random, *seed, common),
        Command::Particle { config, common } => cmd_particle(config, common),
        Command::Matrix { config, common } => cmd_matrix(config, common),
        Command::String { config, residuals, common } => cmd_string(config, *residuals, common),
        Command::VerifyAll { seed, json, tolerances } => cmd_verify_all(*seed, *json, tolerances.as_deref()),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
